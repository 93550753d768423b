//! Core operations checked against independent reference computations.

#[path = "support/oracles.rs"]
mod oracles;

use lawmine_core::foil::{information_gain, GainState};
use lawmine_core::mmdr::{fisher_p_value, Contingency};
use lawmine_core::Evaluator;
use oracles::{gain_oracle, hypergeometric_upper_tail, pascal, rel_close, RandomKb};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn gain_matches_high_precision_logarithm() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..2000 {
        // Alternate small counts with counts large enough to stress the cross products.
        let hi: u64 = if i % 2 == 0 { 60 } else { 1 << 40 };
        let p0 = rng.gen_range(1..=hi);
        let n0 = rng.gen_range(0..=hi);
        let p1 = rng.gen_range(0..=hi);
        let n1 = rng.gen_range(0..=hi);
        let t = rng.gen_range(0..=p1.min(p0));
        let got = information_gain(&GainState::new(p0, n0, p1, n1, t)).unwrap();
        let want = gain_oracle(p0, n0, p1, n1, t);
        assert!(rel_close(got, want, 1e-12), "({p0},{n0},{p1},{n1},{t}): {got} vs {want}");
    }
}

#[test]
fn gain_near_cancellation() {
    // p1 / (p1 + n1) within one part in 10^12 of p0 / (p0 + n0).
    let (p0, n0) = (1_000_000_000_000u64, 1_000_000_000_000u64);
    let (p1, n1) = (1_000_000_000_001u64, 1_000_000_000_000u64);
    let got = information_gain(&GainState::new(p0, n0, p1, n1, 7)).unwrap();
    assert!(rel_close(got, gain_oracle(p0, n0, p1, n1, 7), 1e-12));
    assert_eq!(information_gain(&GainState::new(3, 1, 0, 4, 0)).unwrap(), f64::NEG_INFINITY);
}

#[test]
fn fisher_matches_enumeration_on_small_tables() {
    let tri = pascal(60);
    let mut worst = 0.0f64;
    for n in 0..=60u64 {
        for a in 0..=n {
            for b in 0..=n - a {
                for c in 0..=n - a - b {
                    let d = n - a - b - c;
                    let got = fisher_p_value(&Contingency::new(a, b, c, d));
                    let want = hypergeometric_upper_tail(&tri, a, b, c, d);
                    worst = worst.max((got - want).abs() / want);
                }
            }
        }
    }
    assert!(worst <= 1e-12, "worst relative error {worst}");
}

#[test]
fn coverage_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let mut kb = RandomKb::generate(&mut rng, 12, 3);
        for _ in 0..10 {
            let clause = kb.random_clause(&mut rng, 2);
            let mut ev = Evaluator::new(&kb.store);
            for _ in 0..5 {
                let ex = kb.random_example(&mut rng, &clause);
                assert_eq!(
                    ev.clause_covers(&clause, &ex).unwrap(),
                    kb.brute_force_covers(&clause, &ex),
                    "{clause} on {ex:?}"
                );
            }
        }
    }
}
