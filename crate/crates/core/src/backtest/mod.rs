//! Out-of-sample evaluation of sign forecasts.

pub mod accuracy;
pub mod random_walk;
pub mod trading;
pub mod walk_forward;

use crate::encode::{EncodedDataset, HeadForm, Sign};
use crate::error::BacktestError;
use crate::eval::Evaluator;
use crate::foil::{foil_learn, LearnConfig, LearnTask};
use crate::focl::{focl_learn, FoclConfig};
use crate::mmdr::{mmdr_fit_grammar, HypothesisGrammar, MmdrConfig, MmdrModel};
use crate::syntax::Rule;

pub use accuracy::{mean_period_accuracy, sign_accuracy, AccuracyReport};
pub use random_walk::random_walk_signals;
pub use trading::{
    annualize, buy_and_hold_gain, perfect_foresight_signals, risk_free_gain, simulate_strategy, Strategy,
    TradeConfig, TradeResult,
};
pub use walk_forward::{folds, walk_forward, BacktestReport, Fold, FoldReport, Learner, SignPredictor, WalkForwardConfig, CSV_HEADER};

/// Law-like rule mining as a walk-forward learner.
#[derive(Clone, Debug)]
pub struct MmdrLearner {
    /// `None` uses the default grammar of each training window.
    pub grammar: Option<HypothesisGrammar>,
    /// Hypotheses scored in addition to the grammar.
    pub extra: Vec<Rule>,
    pub config: MmdrConfig,
}

impl Learner for MmdrLearner {
    type Model = MmdrModel;

    fn fit(&self, train: &EncodedDataset) -> Result<MmdrModel, BacktestError> {
        mmdr_fit_grammar(train, self.grammar.as_ref(), &self.extra, &self.config)
            .map_err(|e| BacktestError::Learner(e.to_string()))
    }
}

impl SignPredictor for MmdrModel {
    fn predict(&self, data: &EncodedDataset, rows: &[usize]) -> Result<Vec<Sign>, BacktestError> {
        self.predict_signs(data, rows.iter().copied())
            .map_err(|e| BacktestError::Learner(e.to_string()))
    }
}

#[derive(Clone, Debug)]
pub enum ClauseLearner {
    Foil(LearnConfig),
    Focl(FoclConfig),
}

/// A learned next-day-up rule: up where it covers the day, down elsewhere.
#[derive(Clone, Debug)]
pub struct UpRule {
    pub rule: Rule,
}

impl Learner for ClauseLearner {
    type Model = UpRule;

    fn fit(&self, train: &EncodedDataset) -> Result<UpRule, BacktestError> {
        let target = train.head_predicate(HeadForm::Up);
        let (pos, neg): (Vec<_>, Vec<_>) = train.examples.iter().partition(|e| e.actual_sign() == Sign::Up);
        let task = LearnTask::new(
            target,
            pos.iter().map(|e| e.tuple()).collect(),
            neg.iter().map(|e| e.tuple()).collect(),
        );
        let out = match self {
            ClauseLearner::Foil(c) => foil_learn(&train.facts, &task, c),
            ClauseLearner::Focl(c) => focl_learn(&train.facts, &task, c),
        }
        .map_err(|e| BacktestError::Learner(e.to_string()))?;
        Ok(UpRule { rule: out.rule })
    }
}

impl SignPredictor for UpRule {
    fn predict(&self, data: &EncodedDataset, rows: &[usize]) -> Result<Vec<Sign>, BacktestError> {
        let mut ev = Evaluator::with_typing(&data.facts, false);
        rows.iter()
            .map(|&r| {
                let date = data.series.rows()[r].date;
                let ex = [crate::value::Constant::date(date, crate::encode::DATE_TYPE)];
                ev.rule_covers(&self.rule, &ex)
                    .map(|up| if up { Sign::Up } else { Sign::Down })
                    .map_err(|e| BacktestError::Learner(e.to_string()))
            })
            .collect()
    }
}
