//! Seeded synthetic price and volume series.

use std::fmt::Write as _;

use chrono::{Datelike, Days, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::DataError;
use crate::series::{read_csv, MarketSeries};

#[derive(Clone, Debug, PartialEq)]
pub struct PlantedConfig {
    pub days: usize,
    pub seed: u64,
    pub start: NaiveDate,
    /// Chance of a price rise the day after a day on which price and volume both rose.
    pub p_planted: f64,
    /// Chance of a price rise on every other day.
    pub p_base: f64,
}

impl PlantedConfig {
    pub fn new(days: usize, seed: u64) -> Self {
        PlantedConfig {
            days,
            seed,
            start: NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date"),
            p_planted: 0.9,
            p_base: 0.5,
        }
    }
}

fn business_days(start: NaiveDate, n: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(n);
    let mut d = start;
    while out.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d = d + Days::new(1);
    }
    out
}

/// CSV with `date,price,volume` columns. Volume rises with probability 1/2
/// each day; price rises with probability `p_planted` after a day on which
/// both rose, `p_base` otherwise. Moves are 0.2% to 2% for price and 1% to
/// 10% for volume.
pub fn planted_csv(config: &PlantedConfig) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = String::from("date,price,volume\n");
    let (mut price, mut volume) = (100.0f64, 1_000_000.0f64);
    let (mut price_up, mut volume_up) = (false, false);
    for (i, d) in business_days(config.start, config.days).into_iter().enumerate() {
        if i > 0 {
            let p = if price_up && volume_up { config.p_planted } else { config.p_base };
            let up = rng.gen_bool(p);
            let step = rng.gen_range(0.002..0.02);
            price *= if up { 1.0 + step } else { 1.0 - step };
            let vup = rng.gen_bool(0.5);
            let vstep = rng.gen_range(0.01..0.1);
            volume *= if vup { 1.0 + vstep } else { 1.0 - vstep };
            price_up = up;
            volume_up = vup;
        }
        let _ = writeln!(out, "{d},{price:.6},{volume:.2}");
    }
    out
}

/// Planted series as a [`MarketSeries`].
pub fn planted_series(config: &PlantedConfig) -> Result<MarketSeries, DataError> {
    read_csv(planted_csv(config).as_bytes(), None)
}

/// Price and volume with independent fair up and down moves.
pub fn noise_csv(days: usize, seed: u64) -> String {
    planted_csv(&PlantedConfig {
        p_planted: 0.5,
        ..PlantedConfig::new(days, seed)
    })
}

pub fn noise_series(days: usize, seed: u64) -> Result<MarketSeries, DataError> {
    read_csv(noise_csv(days, seed).as_bytes(), None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_rate_is_visible() {
        let s = planted_series(&PlantedConfig::new(600, 1)).unwrap();
        assert_eq!(s.len(), 600);
        let p = s.numeric("price").unwrap();
        let v = s.numeric("volume").unwrap();
        let (mut fired, mut hits) = (0, 0);
        for t in 1..p.len() - 1 {
            if p[t] > p[t - 1] && v[t] > v[t - 1] {
                fired += 1;
                hits += usize::from(p[t + 1] > p[t]);
            }
        }
        let rate = hits as f64 / fired as f64;
        assert!(fired > 100 && rate > 0.8, "{hits}/{fired}");
    }

    #[test]
    fn seeds_reproduce() {
        assert_eq!(noise_csv(50, 3), noise_csv(50, 3));
        assert_ne!(noise_csv(50, 3), noise_csv(50, 4));
    }
}
