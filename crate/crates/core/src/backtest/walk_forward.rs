//! Walk-forward evaluation: fit on a window, forecast the days after it.

use std::fmt::Write as _;

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::backtest::accuracy::{mean_period_accuracy, sign_accuracy};
use crate::backtest::random_walk::random_walk_signals;
use crate::backtest::trading::{annualize, buy_and_hold_gain, risk_free_gain, simulate_strategy, TradeConfig};
use crate::encode::{EncodedDataset, Sign};
use crate::error::BacktestError;

/// Forecasts signs for series rows of a dataset.
pub trait SignPredictor {
    fn predict(&self, data: &EncodedDataset, rows: &[usize]) -> Result<Vec<Sign>, BacktestError>;
}

/// Fits a predictor on a training window.
pub trait Learner: Sync {
    type Model: SignPredictor;
    fn fit(&self, train: &EncodedDataset) -> Result<Self::Model, BacktestError>;
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkForwardConfig {
    /// Training examples per fold.
    pub train_len: usize,
    /// Forecast days per fold.
    pub test_len: usize,
    /// Examples between fold starts; `None` means `test_len`.
    pub step: Option<usize>,
    pub trade: TradeConfig,
    /// Seeds the random-walk baseline.
    pub seed: u64,
}

impl Default for WalkForwardConfig {
    fn default() -> Self {
        WalkForwardConfig {
            train_len: 250,
            test_len: 50,
            step: None,
            trade: TradeConfig::default(),
            seed: 0,
        }
    }
}

/// Example index ranges of one fold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fold {
    pub index: usize,
    pub train: std::ops::Range<usize>,
    pub test: std::ops::Range<usize>,
}

/// Folds over `n` examples; the last fold ends on or before example `n`.
pub fn folds(n: usize, config: &WalkForwardConfig) -> Result<Vec<Fold>, BacktestError> {
    let step = config.step.unwrap_or(config.test_len);
    if config.train_len == 0 || config.test_len == 0 || step == 0 {
        return Err(BacktestError::InvalidConfig("fold lengths must be positive".into()));
    }
    let mut out = Vec::new();
    let mut start = 0;
    while start + config.train_len + config.test_len <= n {
        let mid = start + config.train_len;
        out.push(Fold {
            index: out.len(),
            train: start..mid,
            test: mid..mid + config.test_len,
        });
        start += step;
    }
    if out.is_empty() {
        return Err(BacktestError::InsufficientData(format!(
            "{n} examples cannot hold {} training and {} test days",
            config.train_len, config.test_len
        )));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoldReport {
    pub fold: usize,
    pub train_start: NaiveDate,
    pub train_end: NaiveDate,
    pub test_start: NaiveDate,
    pub test_end: NaiveDate,
    pub predictions: Vec<Sign>,
    pub actual: Vec<Sign>,
    pub correct: usize,
    pub abstains: usize,
    /// `None` when every forecast abstained.
    pub accuracy: Option<f64>,
    pub strategy_gain: f64,
    pub buy_hold_gain: f64,
    pub risk_free_gain: f64,
    pub random_walk_accuracy: f64,
}

impl FoldReport {
    pub fn decided(&self) -> usize {
        self.predictions.len() - self.abstains
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BacktestReport {
    pub folds: Vec<FoldReport>,
}

pub const CSV_HEADER: &str = "fold,train_start,train_end,test_start,test_end,predictions,abstains,accuracy_pct,abstain_pct,strategy_gain_pct,buy_hold_gain_pct,risk_free_gain_pct,random_walk_accuracy_pct,strategy_annual_pct,buy_hold_annual_pct,risk_free_annual_pct";

fn pct(x: f64) -> String {
    format!("{:.4}", x * 100.0)
}

fn compound(gains: impl Iterator<Item = f64>) -> f64 {
    gains.fold(1.0, |acc, g| acc * (1.0 + g)) - 1.0
}

impl BacktestReport {
    /// Unweighted mean accuracy over folds that made a forecast.
    pub fn mean_accuracy(&self) -> Result<f64, BacktestError> {
        let accs: Vec<f64> = self.folds.iter().filter_map(|f| f.accuracy).collect();
        if accs.is_empty() {
            return Err(BacktestError::NoDecisions);
        }
        mean_period_accuracy(&accs)
    }

    /// Accuracy over every decided forecast of every fold.
    pub fn pooled_accuracy(&self) -> Result<f64, BacktestError> {
        let decided: usize = self.folds.iter().map(|f| f.decided()).sum();
        if decided == 0 {
            return Err(BacktestError::NoDecisions);
        }
        Ok(self.folds.iter().map(|f| f.correct).sum::<usize>() as f64 / decided as f64)
    }

    /// Gains compounded over consecutive folds.
    pub fn strategy_gain(&self) -> f64 {
        compound(self.folds.iter().map(|f| f.strategy_gain))
    }

    pub fn buy_hold_gain(&self) -> f64 {
        compound(self.folds.iter().map(|f| f.buy_hold_gain))
    }

    /// One row per fold, then an `all` row: predictions and abstentions
    /// summed, accuracies averaged over folds, gains compounded. Annual
    /// columns scale each gain by 252 over the number of forecast days;
    /// compounding across folds assumes non-overlapping test windows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let na = || "NA".to_string();
        for f in &self.folds {
            let n = f.predictions.len();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                f.fold,
                f.train_start,
                f.train_end,
                f.test_start,
                f.test_end,
                n,
                f.abstains,
                f.accuracy.map_or_else(na, pct),
                pct(f.abstains as f64 / n as f64),
                pct(f.strategy_gain),
                pct(f.buy_hold_gain),
                pct(f.risk_free_gain),
                pct(f.random_walk_accuracy),
                pct(annualize(f.strategy_gain, n)),
                pct(annualize(f.buy_hold_gain, n)),
                pct(annualize(f.risk_free_gain, n))
            );
        }
        if let (Some(first), Some(last)) = (self.folds.first(), self.folds.last()) {
            let n: usize = self.folds.iter().map(|f| f.predictions.len()).sum();
            let abstains: usize = self.folds.iter().map(|f| f.abstains).sum();
            let rw = self.folds.iter().map(|f| f.random_walk_accuracy).sum::<f64>() / self.folds.len() as f64;
            let risk_free = compound(self.folds.iter().map(|f| f.risk_free_gain));
            let _ = writeln!(
                out,
                "all,{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                first.train_start,
                last.train_end,
                first.test_start,
                last.test_end,
                n,
                abstains,
                self.mean_accuracy().map_or_else(|_| na(), pct),
                pct(abstains as f64 / n as f64),
                pct(self.strategy_gain()),
                pct(self.buy_hold_gain()),
                pct(risk_free),
                pct(rw),
                pct(annualize(self.strategy_gain(), n)),
                pct(annualize(self.buy_hold_gain(), n)),
                pct(annualize(risk_free, n))
            );
        }
        out
    }
}

fn run_fold<L: Learner>(data: &EncodedDataset, learner: &L, fold: &Fold, config: &WalkForwardConfig) -> Result<FoldReport, BacktestError> {
    let ex = &data.examples;
    let train_start = ex[fold.train.start].date;
    let last_train = &ex[fold.train.end - 1];
    let train = data.window(train_start, last_train.next_date);
    let model = learner.fit(&train)?;
    let test = &ex[fold.test.clone()];
    let rows: Vec<usize> = test.iter().map(|e| e.row).collect();
    let predictions = model.predict(data, &rows)?;
    let actual: Vec<Sign> = test.iter().map(|e| e.actual_sign()).collect();
    let acc = sign_accuracy(&predictions, &actual)?;
    let mut prices: Vec<f64> = test.iter().map(|e| e.current).collect();
    prices.push(test[test.len() - 1].next);
    let strategy = simulate_strategy(&prices, &predictions, &config.trade)?;
    let walk = random_walk_signals(test.len(), config.seed.wrapping_add(fold.index as u64));
    let walk_acc = sign_accuracy(&walk, &actual)?.accuracy()?;
    Ok(FoldReport {
        fold: fold.index,
        train_start,
        train_end: last_train.date,
        test_start: test[0].date,
        test_end: test[test.len() - 1].date,
        correct: acc.correct,
        abstains: acc.abstains,
        accuracy: acc.accuracy().ok(),
        predictions,
        actual,
        strategy_gain: strategy.gain(),
        buy_hold_gain: buy_and_hold_gain(&prices, config.trade.initial_capital)?,
        risk_free_gain: risk_free_gain(config.trade.annual_risk_free, test.len()),
        random_walk_accuracy: walk_acc,
    })
}

/// Runs every fold; folds are independent and may run in parallel.
pub fn walk_forward<L: Learner>(data: &EncodedDataset, learner: &L, config: &WalkForwardConfig) -> Result<BacktestReport, BacktestError> {
    config.trade.validate()?;
    let folds = folds(data.examples.len(), config)?;
    let reports = folds
        .par_iter()
        .map(|f| run_fold(data, learner, f, config))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BacktestReport { folds: reports })
}
