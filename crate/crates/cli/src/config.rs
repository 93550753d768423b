//! Run configuration: TOML file merged under command-line flags.

use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use lawmine_core::backtest::{Strategy, TradeConfig, WalkForwardConfig};
use lawmine_core::focl::{FoclConfig, InitialRuleMode};
use lawmine_core::foil::LearnConfig;
use lawmine_core::mmdr::MmdrConfig;

use crate::failure::Failure;

pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerKind {
    Mmdr,
    Foil,
    Focl,
}

/// Flags shared by every command. Unset flags fall back to the config file.
#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// CSV with a `date` column and numeric attributes.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Knowledge declaration file.
    #[arg(long, global = true)]
    pub knowledge: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub learner: Option<LearnerKind>,
    /// Significance level for rule selection.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Body literal limit: grammar body size for mmdr, clause length for foil and focl.
    #[arg(long, global = true)]
    pub max_body: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<PathBuf>,
    pub knowledge: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub learner: Option<LearnerKind>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    #[serde(default)]
    pub learn: LearnSection,
    #[serde(default)]
    pub focl: FoclSection,
    #[serde(default)]
    pub mmdr: MmdrSection,
    #[serde(default)]
    pub backtest: BacktestSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnSection {
    pub max_new_vars: Option<usize>,
    pub min_clause_pos: Option<usize>,
    pub max_clause_len: Option<usize>,
    pub neg_tolerance: Option<f64>,
    pub allow_negated: Option<bool>,
    pub typing: Option<bool>,
    pub pruning: Option<bool>,
    pub time_budget_secs: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoclSection {
    pub keep_intensional: Option<bool>,
    /// `all` or `more_accurate`.
    pub initial_mode: Option<String>,
    pub widening: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MmdrSection {
    pub alpha: Option<f64>,
    pub bonferroni: Option<bool>,
    pub min_cond_probability: Option<f64>,
    pub min_support: Option<u64>,
    /// 0 lifts the cap.
    pub max_forecasting_per_head: Option<usize>,
    pub max_body: Option<usize>,
    pub max_existential: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BacktestSection {
    pub train_len: Option<usize>,
    pub test_len: Option<usize>,
    pub step: Option<usize>,
    /// `long_flat` or `long_short`.
    pub strategy: Option<String>,
    pub cost: Option<f64>,
    pub initial_capital: Option<f64>,
    pub annual_risk_free: Option<f64>,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub knowledge: Option<PathBuf>,
    pub out: PathBuf,
    pub learner: LearnerKind,
    pub jobs: Option<usize>,
    pub learn: LearnConfig,
    pub focl: FoclConfig,
    pub mmdr: MmdrConfig,
    pub max_body: Option<usize>,
    pub max_existential: Option<usize>,
    pub walk: WalkForwardConfig,
}

fn read_file_config(path: &Path) -> Result<FileConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::config(format!("config {}: {e}", path.display())))
}

fn existing(path: Option<PathBuf>, what: &str) -> Result<Option<PathBuf>, Failure> {
    match path {
        Some(p) if !p.exists() => Err(Failure::config(format!("{what} path {} does not exist", p.display()))),
        p => Ok(p),
    }
}

impl RunConfig {
    pub fn resolve(flags: Flags) -> Result<RunConfig, Failure> {
        let file = match &flags.config {
            Some(p) if !p.exists() => {
                return Err(Failure::config(format!("config path {} does not exist", p.display())))
            }
            Some(p) => read_file_config(p)?,
            None => FileConfig::default(),
        };

        let mut learn = LearnConfig::default();
        let l = &file.learn;
        if let Some(v) = l.max_new_vars {
            learn.max_new_vars = v;
        }
        if let Some(v) = l.min_clause_pos {
            learn.min_clause_pos = v;
        }
        if let Some(v) = l.max_clause_len {
            learn.max_clause_len = v;
        }
        if let Some(v) = l.neg_tolerance {
            learn.neg_tolerance = v;
        }
        if let Some(v) = l.allow_negated {
            learn.allow_negated = v;
        }
        if let Some(v) = l.typing {
            learn.typing = v;
        }
        if let Some(v) = l.pruning {
            learn.pruning = v;
        }
        if let Some(secs) = l.time_budget_secs {
            if !(secs >= 0.0 && secs.is_finite()) {
                return Err(Failure::config(format!("time_budget_secs {secs} is not a non-negative number")));
            }
            learn.time_budget = Some(Duration::from_secs_f64(secs));
        }
        if let Some(m) = flags.max_body {
            learn.max_clause_len = m;
        }

        let mut focl = FoclConfig::default();
        if let Some(v) = file.focl.keep_intensional {
            focl.keep_intensional = v;
        }
        if let Some(v) = file.focl.widening {
            focl.widening = v;
        }
        if let Some(mode) = &file.focl.initial_mode {
            focl.initial_mode = match mode.as_str() {
                "all" => InitialRuleMode::UseAll,
                "more_accurate" => InitialRuleMode::UseMoreAccurate,
                m => return Err(Failure::config(format!("unknown initial_mode `{m}`"))),
            };
        }
        focl.learn = learn.clone();

        let mut mmdr = MmdrConfig::default();
        let m = &file.mmdr;
        if let Some(v) = m.alpha {
            mmdr.alpha = v;
        }
        if let Some(v) = m.bonferroni {
            mmdr.bonferroni = v;
        }
        if let Some(v) = m.min_cond_probability {
            mmdr.min_cond_probability = v;
        }
        if let Some(v) = m.min_support {
            mmdr.min_support = v;
        }
        if let Some(v) = m.max_forecasting_per_head {
            mmdr.max_forecasting_per_head = (v > 0).then_some(v);
        }
        if let Some(a) = flags.alpha {
            mmdr.alpha = a;
        }
        if !(mmdr.alpha > 0.0 && mmdr.alpha < 1.0) {
            return Err(Failure::config(format!("alpha {} is not in (0, 1)", mmdr.alpha)));
        }

        let seed = flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
        let mut walk = WalkForwardConfig {
            seed,
            ..WalkForwardConfig::default()
        };
        let b = &file.backtest;
        if let Some(v) = b.train_len {
            walk.train_len = v;
        }
        if let Some(v) = b.test_len {
            walk.test_len = v;
        }
        walk.step = b.step.or(walk.step);
        let mut trade = TradeConfig::default();
        if let Some(s) = &b.strategy {
            trade.strategy = match s.as_str() {
                "long_flat" => Strategy::LongFlat,
                "long_short" => Strategy::LongShort,
                s => return Err(Failure::config(format!("unknown strategy `{s}`"))),
            };
        }
        if let Some(v) = b.cost {
            trade.cost = v;
        }
        if let Some(v) = b.initial_capital {
            trade.initial_capital = v;
        }
        if let Some(v) = b.annual_risk_free {
            trade.annual_risk_free = v;
        }
        walk.trade = trade;

        let jobs = flags.jobs.or(file.jobs);
        if jobs == Some(0) {
            return Err(Failure::config("--jobs must be positive"));
        }
        Ok(RunConfig {
            input: existing(flags.input.or(file.input), "input")?,
            knowledge: existing(flags.knowledge.or(file.knowledge), "knowledge")?,
            out: flags.out.or(file.out).unwrap_or_else(|| PathBuf::from(".")),
            learner: flags.learner.or(file.learner).unwrap_or(LearnerKind::Mmdr),
            jobs,
            learn,
            focl,
            mmdr,
            max_body: flags.max_body.or(m.max_body),
            max_existential: m.max_existential,
            walk,
        })
    }
}
