//! Coin-flip sign forecasts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encode::Sign;

/// `n` independent fair up/down forecasts, reproducible from `seed`.
pub fn random_walk_signals(n: usize, seed: u64) -> Vec<Sign> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| if rng.gen_bool(0.5) { Sign::Up } else { Sign::Down })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_balanced() {
        let a = random_walk_signals(2000, 7);
        assert_eq!(a, random_walk_signals(2000, 7));
        assert_ne!(a, random_walk_signals(2000, 8));
        let ups = a.iter().filter(|s| **s == Sign::Up).count();
        assert!((900..1100).contains(&ups));
    }
}
