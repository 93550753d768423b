//! Information gain of a candidate literal.

use std::f64::consts::LN_2;

use crate::error::LearnError;

/// Tuple counts before (`p0`, `n0`) and after (`p1`, `n1`) adding a literal;
/// `t_pp` counts positive tuples before that still have an extension after.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct GainState {
    pub p0: u64,
    pub n0: u64,
    pub p1: u64,
    pub n1: u64,
    pub t_pp: u64,
}

impl GainState {
    pub fn new(p0: u64, n0: u64, p1: u64, n1: u64, t_pp: u64) -> Self {
        GainState { p0, n0, p1, n1, t_pp }
    }
}

/// `T++ * (log2(P1 / (P1 + N1)) - log2(P0 / (P0 + N0)))`.
///
/// The difference of logs is taken as `log2(1 + δ)` with `δ` formed from
/// exact integer products, so gains near zero keep full relative precision.
/// `P1 = 0` gives negative infinity.
pub fn information_gain(s: &GainState) -> Result<f64, LearnError> {
    if s.p0 == 0 {
        return Err(LearnError::NoPositives);
    }
    if s.p1 == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    if s.t_pp == 0 {
        return Ok(0.0);
    }
    let num = u128::from(s.p1) * (u128::from(s.p0) + u128::from(s.n0));
    let den = u128::from(s.p0) * (u128::from(s.p1) + u128::from(s.n1));
    let diff = if num >= den {
        (num - den) as f64
    } else {
        -((den - num) as f64)
    };
    let delta = diff / den as f64;
    Ok(s.t_pp as f64 * delta.ln_1p() / LN_2)
}

/// Largest gain any specialization can reach: every surviving positive
/// tuple kept and every negative one removed.
pub fn max_gain_bound(s: &GainState) -> f64 {
    if s.p0 == 0 || s.t_pp == 0 {
        return 0.0;
    }
    let ratio = (s.p0 + s.n0) as f64 / s.p0 as f64;
    s.t_pp as f64 * ratio.log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_values() {
        // Two of two positives kept, one of two negatives removed.
        let g = information_gain(&GainState::new(2, 2, 2, 1, 2)).unwrap();
        assert!((g - 2.0 * (2.0f64 / 3.0).log2() + 2.0 * 0.5f64.log2()).abs() < 1e-15);
        let g = information_gain(&GainState::new(2, 2, 2, 0, 2)).unwrap();
        assert_eq!(g, 2.0);
        assert_eq!(information_gain(&GainState::new(3, 1, 0, 1, 0)).unwrap(), f64::NEG_INFINITY);
        assert!(matches!(information_gain(&GainState::new(0, 1, 0, 1, 0)), Err(LearnError::NoPositives)));
        assert_eq!(information_gain(&GainState::new(4, 4, 2, 2, 2)).unwrap(), 0.0);
    }

    #[test]
    fn bound_is_pure_literal_gain() {
        let s = GainState::new(5, 3, 5, 0, 5);
        assert_eq!(information_gain(&s).unwrap(), max_gain_bound(&s));
    }

    proptest! {
        #[test]
        fn gain_never_exceeds_bound(p0 in 1u64..200, n0 in 0u64..200, keep in 0.0f64..=1.0, drop in 0.0f64..=1.0) {
            let t_pp = ((p0 as f64) * keep).round() as u64;
            let n1 = ((n0 as f64) * (1.0 - drop)).round() as u64;
            let s = GainState::new(p0, n0, t_pp, n1, t_pp);
            prop_assert!(information_gain(&s).unwrap() <= max_gain_bound(&s) + 1e-9);
        }
    }
}
