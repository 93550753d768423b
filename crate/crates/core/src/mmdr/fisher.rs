//! One-sided Fisher exact test for positive association in a 2×2 table.
//!
//! With body-true row `r = a + b`, head-true column `k = a + c` and total
//! `n`, the count in the top-left cell is hypergeometric and the p-value is
//! `P(X >= a)`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// 2×2 counts: `a` body∧head, `b` body∧¬head, `c` ¬body∧head, `d` ¬body∧¬head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Contingency {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl Contingency {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        Contingency { a, b, c, d }
    }

    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }

    /// `a / (a + b)`, defined only when the body holds somewhere.
    pub fn cond_probability(&self) -> Option<f64> {
        let body = self.a + self.b;
        (body > 0).then(|| self.a as f64 / body as f64)
    }

    fn margins(&self) -> (u64, u64, u64) {
        (self.a + self.b, self.a + self.c, self.total())
    }
}

fn support(r: u64, k: u64, n: u64) -> (u64, u64) {
    ((r + k).saturating_sub(n), r.min(k))
}

fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// Integer path: exact numerator and denominator while `C(n, k)` fits.
fn p_value_integer(t: &Contingency) -> Option<f64> {
    let (r, k, n) = t.margins();
    let denom = binomial_u128(n, k)?;
    let (_, hi) = support(r, k, n);
    let mut num: u128 = 0;
    for x in t.a..=hi {
        let term = binomial_u128(r, x)?.checked_mul(binomial_u128(n - r, k - x)?)?;
        num = num.checked_add(term)?;
    }
    Some(if num >= denom { 1.0 } else { num as f64 / denom as f64 })
}

/// Ratio recurrence anchored at the mode, for tables too large for `u128`.
fn p_value_recurrence(t: &Contingency) -> f64 {
    let (r, k, n) = t.margins();
    let (lo, hi) = support(r, k, n);
    let mode = (((r + 1) as f64 * (k + 1) as f64) / (n + 2) as f64).floor() as u64;
    let mode = mode.clamp(lo, hi);
    let up = |x: u64| -> f64 {
        // P(x + 1) / P(x)
        ((r - x) as f64 * (k - x) as f64) / ((x + 1) as f64 * (n + x + 1 - r - k) as f64)
    };
    let (mut total, mut tail) = (1.0f64, if mode >= t.a { 1.0 } else { 0.0 });
    let mut w = 1.0f64;
    for x in mode..hi {
        w *= up(x);
        total += w;
        if x + 1 >= t.a {
            tail += w;
        }
        if w == 0.0 {
            break;
        }
    }
    w = 1.0;
    for x in (lo..mode).rev() {
        w /= up(x);
        total += w;
        if x >= t.a {
            tail += w;
        }
        if w == 0.0 {
            break;
        }
    }
    (tail / total).min(1.0)
}

/// One-sided p-value `P(X >= a)`. An empty table gives 1.
pub fn fisher_p_value(t: &Contingency) -> f64 {
    if t.total() == 0 {
        return 1.0;
    }
    p_value_integer(t).unwrap_or_else(|| p_value_recurrence(t))
}

fn binomial_big(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exact rational p-value.
pub fn fisher_p_value_exact(t: &Contingency) -> BigRational {
    if t.total() == 0 {
        return BigRational::one();
    }
    let (r, k, n) = t.margins();
    let (_, hi) = support(r, k, n);
    let mut num = BigUint::zero();
    for x in t.a..=hi {
        num += binomial_big(r, x) * binomial_big(n - r, k - x);
    }
    BigRational::new(num.into(), binomial_big(n, k).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    #[test]
    fn spot_values() {
        let t = Contingency::new(5, 0, 0, 5);
        assert_eq!(fisher_p_value(&t), 1.0 / 252.0);
        assert_eq!(fisher_p_value_exact(&t), BigRational::new(1.into(), 252.into()));
        let t = Contingency::new(1, 1, 1, 1);
        assert_eq!(fisher_p_value(&t), 5.0 / 6.0);
        assert_eq!(fisher_p_value_exact(&t), BigRational::new(5.into(), 6.into()));
    }

    #[test]
    fn degenerate_margins_give_one() {
        assert_eq!(fisher_p_value(&Contingency::new(0, 0, 3, 4)), 1.0);
        assert_eq!(fisher_p_value(&Contingency::new(3, 4, 0, 0)), 1.0);
        assert_eq!(fisher_p_value(&Contingency::new(0, 3, 0, 4)), 1.0);
        assert_eq!(fisher_p_value(&Contingency::default()), 1.0);
    }

    proptest! {
        #[test]
        fn recurrence_matches_exact(a in 0u64..150, b in 0u64..150, c in 0u64..150, d in 0u64..150) {
            let t = Contingency::new(a, b, c, d);
            prop_assume!(t.total() > 0);
            let exact = fisher_p_value_exact(&t).to_f64().unwrap();
            let approx = p_value_recurrence(&t);
            prop_assert!((approx - exact).abs() <= 1e-12 * exact.max(1e-300) || (approx - exact).abs() < 1e-300,
                "{t:?}: {approx} vs {exact}");
        }
    }
}
