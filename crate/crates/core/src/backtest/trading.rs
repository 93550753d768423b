//! Daily trading simulation driven by sign forecasts.
//!
//! Forecast `i` decides the position held from the close of day `i` to the
//! close of day `i + 1`. Positions are held in shares, so an unchanged
//! position is never rebalanced. Cash accrues `annual_risk_free / 252` per day.

use crate::encode::Sign;
use crate::error::BacktestError;

pub const TRADING_DAYS: f64 = 252.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Long on up, out of the market otherwise.
    #[default]
    LongFlat,
    /// Long on up, short on down, out on abstain.
    LongShort,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TradeConfig {
    pub initial_capital: f64,
    /// Fraction of portfolio value paid per unit of position change.
    pub cost: f64,
    pub strategy: Strategy,
    pub annual_risk_free: f64,
}

impl Default for TradeConfig {
    fn default() -> Self {
        TradeConfig {
            initial_capital: 1.0,
            cost: 0.0,
            strategy: Strategy::LongFlat,
            annual_risk_free: 0.03,
        }
    }
}

impl TradeConfig {
    pub fn validate(&self) -> Result<(), BacktestError> {
        if !(self.initial_capital > 0.0 && self.initial_capital.is_finite()) {
            return Err(BacktestError::InvalidConfig("initial capital must be positive".into()));
        }
        if !(self.annual_risk_free > -1.0 && self.annual_risk_free.is_finite()) {
            return Err(BacktestError::InvalidConfig(format!(
                "risk-free rate {} is not above -1",
                self.annual_risk_free
            )));
        }
        if !(0.0..1.0).contains(&self.cost) {
            return Err(BacktestError::InvalidConfig(format!("cost {} is not in [0, 1)", self.cost)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TradeResult {
    /// Portfolio value at each close, starting with the initial capital.
    pub values: Vec<f64>,
    /// Position changes.
    pub trades: usize,
}

impl TradeResult {
    pub fn final_value(&self) -> f64 {
        *self.values.last().expect("values start with the initial capital")
    }

    /// Relative gain over the whole run.
    pub fn gain(&self) -> f64 {
        self.final_value() / self.values[0] - 1.0
    }
}

fn check_prices(prices: &[f64]) -> Result<(), BacktestError> {
    if prices.len() < 2 {
        return Err(BacktestError::InsufficientData(format!("{} prices", prices.len())));
    }
    if let Some(p) = prices.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
        return Err(BacktestError::InvalidConfig(format!("price {p} is not positive")));
    }
    Ok(())
}

/// Runs `signals` (one per price move, `prices.len() - 1` in all) over `prices`.
pub fn simulate_strategy(prices: &[f64], signals: &[Sign], config: &TradeConfig) -> Result<TradeResult, BacktestError> {
    config.validate()?;
    check_prices(prices)?;
    if signals.len() + 1 != prices.len() {
        return Err(BacktestError::Alignment(format!(
            "{} signals for {} prices",
            signals.len(),
            prices.len()
        )));
    }
    let mut cash = config.initial_capital;
    let mut shares = 0.0f64;
    let mut position = 0i8;
    let mut values = vec![config.initial_capital];
    let mut trades = 0;
    let daily = 1.0 + config.annual_risk_free / TRADING_DAYS;
    for (i, s) in signals.iter().enumerate() {
        let target = match (s, config.strategy) {
            (Sign::Up, _) => 1,
            (Sign::Down, Strategy::LongShort) => -1,
            _ => 0,
        };
        if target != position {
            let mut value = cash + shares * prices[i];
            value -= config.cost * f64::from((target - position).abs()) * value;
            cash = value;
            shares = 0.0;
            match target {
                1 => {
                    shares = cash / prices[i];
                    cash = 0.0;
                }
                -1 => {
                    shares = -cash / prices[i];
                    cash *= 2.0;
                }
                _ => {}
            }
            position = target;
            trades += 1;
        }
        cash *= daily;
        let value = cash + shares * prices[i + 1];
        if value <= 0.0 {
            return Err(BacktestError::Bankrupt(value, i + 1));
        }
        values.push(value);
    }
    Ok(TradeResult { values, trades })
}

/// Gain from buying `initial / p0` shares on the first day and holding them.
pub fn buy_and_hold_gain(prices: &[f64], initial: f64) -> Result<f64, BacktestError> {
    check_prices(prices)?;
    let shares = initial / prices[0];
    Ok(shares * prices[prices.len() - 1] / initial - 1.0)
}

/// Gain of `days` of daily compounding at `annual / 252` per day.
pub fn risk_free_gain(annual: f64, days: usize) -> f64 {
    (1.0 + annual / TRADING_DAYS).powi(days as i32) - 1.0
}

/// The gain over `days` trading days scaled to one year.
pub fn annualize(gain: f64, days: usize) -> f64 {
    (1.0 + gain).powf(TRADING_DAYS / days as f64) - 1.0
}

/// Signals that know every next move.
pub fn perfect_foresight_signals(prices: &[f64]) -> Vec<Sign> {
    prices
        .windows(2)
        .map(|w| if w[1] > w[0] { Sign::Up } else { Sign::Down })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Sign::*;

    #[test]
    fn long_flat_tracks_up_days() {
        let prices = [10.0, 11.0, 9.9, 12.0];
        let r = simulate_strategy(&prices, &[Up, Down, Up], &TradeConfig::default()).unwrap();
        let expected = 11.0 / 10.0 * (1.0 + 0.03 / 252.0) * (12.0 / 9.9);
        assert!((r.final_value() - expected).abs() < 1e-12);
        assert_eq!(r.trades, 3);
    }

    #[test]
    fn idle_cash_earns_the_risk_free_rate() {
        let prices = vec![10.0; 253];
        let r = simulate_strategy(&prices, &[Abstain; 252], &TradeConfig::default()).unwrap();
        assert!((r.gain() - risk_free_gain(0.03, 252)).abs() < 1e-12);
        assert_eq!(r.trades, 0);
    }

    #[test]
    fn long_short_profits_from_falls_and_can_go_bankrupt() {
        let cfg = TradeConfig {
            strategy: super::Strategy::LongShort,
            ..TradeConfig::default()
        };
        let cfg = TradeConfig {
            annual_risk_free: 0.0,
            ..cfg
        };
        let r = simulate_strategy(&[10.0, 9.0], &[Down], &cfg).unwrap();
        assert!((r.final_value() - 1.1).abs() < 1e-12);
        assert!(matches!(
            simulate_strategy(&[10.0, 21.0], &[Down], &cfg),
            Err(BacktestError::Bankrupt(_, 1))
        ));
    }

    #[test]
    fn costs_are_charged_on_changes() {
        let cfg = TradeConfig {
            cost: 0.01,
            ..TradeConfig::default()
        };
        let r = simulate_strategy(&[10.0, 10.0, 10.0], &[Up, Up], &cfg).unwrap();
        assert!((r.final_value() - 0.99).abs() < 1e-12);
        assert_eq!(r.trades, 1);
    }

    #[test]
    fn risk_free_rounds_to_three_point_zero_five() {
        let g = risk_free_gain(0.03, 252);
        assert_eq!(format!("{:.2}", g * 100.0), "3.05");
        assert!((annualize(risk_free_gain(0.03, 126), 126) - g).abs() < 1e-12);
    }

    #[test]
    fn misaligned_inputs() {
        let cfg = TradeConfig::default();
        assert!(matches!(simulate_strategy(&[1.0, 2.0], &[], &cfg), Err(BacktestError::Alignment(_))));
        assert!(matches!(simulate_strategy(&[1.0], &[], &cfg), Err(BacktestError::InsufficientData(_))));
        assert!(matches!(simulate_strategy(&[1.0, 0.0], &[Up], &cfg), Err(BacktestError::InvalidConfig(_))));
    }

    proptest! {
        #[test]
        fn all_up_is_buy_and_hold(prices in prop::collection::vec(0.5f64..200.0, 2..60)) {
            let signals = vec![Up; prices.len() - 1];
            let r = simulate_strategy(&prices, &signals, &TradeConfig::default()).unwrap();
            prop_assert_eq!(r.gain(), buy_and_hold_gain(&prices, 1.0).unwrap());
        }

        #[test]
        fn foresight_beats_holding(prices in prop::collection::vec(0.5f64..200.0, 2..60)) {
            let r = simulate_strategy(&prices, &perfect_foresight_signals(&prices), &TradeConfig::default()).unwrap();
            prop_assert!(r.gain() >= buy_and_hold_gain(&prices, 1.0).unwrap());
        }
    }
}
