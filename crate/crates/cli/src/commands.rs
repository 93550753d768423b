//! The five commands. Each writes its artifacts under the output directory
//! and returns a short human summary for stdout.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::path::Path;

use chrono::NaiveDate;

use lawmine_core::backtest::{
    walk_forward, BacktestReport, ClauseLearner, Learner, WalkForwardConfig,
};
use lawmine_core::encode::{encode, EncodeConfig, EncodedDataset, HeadForm, Sign};
use lawmine_core::foil::{foil_learn, LearnOutcome, LearnTask};
use lawmine_core::focl::focl_learn;
use lawmine_core::knowledge::{describe, Knowledge};
use lawmine_core::mmdr::{enumerate_hypotheses, mmdr_fit, Forecaster, HypothesisGrammar, MmdrConfig, MmdrModel, REPORT_HEADER};
use lawmine_core::series::read_csv;
use lawmine_core::{BacktestError, FactStore, MmdrError, Rule};

use crate::config::{LearnerKind, RunConfig};
use crate::failure::Failure;

fn write(out: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    fs::create_dir_all(out).map_err(|e| Failure::io(out, e))?;
    let path = out.join(name);
    fs::write(&path, contents).map_err(|e| Failure::io(&path, e))
}

fn knowledge(cfg: &RunConfig) -> Result<Option<Knowledge>, Failure> {
    cfg.knowledge
        .as_deref()
        .map(|p| Knowledge::from_path(p).map_err(|e| Failure::data(format!("{}: {e}", p.display()))))
        .transpose()
}

fn dataset(cfg: &RunConfig, k: Option<&Knowledge>) -> Result<EncodedDataset, Failure> {
    let path = cfg
        .input
        .as_deref()
        .ok_or_else(|| Failure::config("this command needs --input"))?;
    let file = File::open(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    let series = read_csv(file, None).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    let enc = k
        .and_then(|k| k.encode_config())
        .cloned()
        .unwrap_or_else(|| EncodeConfig::new("price"));
    let mut data = encode(&series, &enc)?;
    if let Some(k) = k {
        k.apply(&mut data.facts)?;
    }
    Ok(data)
}

fn grammar(cfg: &RunConfig, k: Option<&Knowledge>, data: &EncodedDataset) -> HypothesisGrammar {
    let mut g = k
        .and_then(|k| k.grammar(&data.target))
        .unwrap_or_else(|| HypothesisGrammar::default_for(data));
    if let Some(m) = cfg.max_body {
        g.max_body_literals = m;
    }
    if let Some(m) = cfg.max_existential {
        g.max_existential_vars = m;
    }
    g
}

/// Declared hypotheses when the knowledge file lists any, else the grammar.
fn hypotheses(cfg: &RunConfig, k: Option<&Knowledge>, data: &EncodedDataset) -> Result<Vec<Rule>, Failure> {
    if let Some(k) = k.filter(|k| k.has_hypotheses()) {
        return Ok(k.hypotheses(&data.facts)?);
    }
    Ok(enumerate_hypotheses(&grammar(cfg, k, data), &data.facts)?
        .into_iter()
        .map(|h| h.rule)
        .collect())
}

pub fn encode_cmd(cfg: &RunConfig) -> Result<String, Failure> {
    let k = knowledge(cfg)?;
    let data = dataset(cfg, k.as_ref())?;
    write(&cfg.out, "facts.tsv", &data.facts.dump_tsv())?;
    let mut ex = String::from("date\tnext_date\tcurrent\tnext\tsign\n");
    for e in &data.examples {
        let _ = writeln!(ex, "{}\t{}\t{}\t{}\t{}", e.date, e.next_date, e.current, e.next, e.actual_sign());
    }
    write(&cfg.out, "examples.tsv", &ex)?;
    Ok(format!(
        "encoded {} rows into {} predicates and {} examples",
        data.series.len(),
        data.facts.predicates().count(),
        data.examples.len()
    ))
}

/// Next-day-up as a learning task over encoded days.
fn up_task(data: &EncodedDataset) -> LearnTask {
    let (pos, neg): (Vec<_>, Vec<_>) = data.examples.iter().partition(|e| e.actual_sign() == Sign::Up);
    LearnTask::new(
        data.head_predicate(HeadForm::Up),
        pos.iter().map(|e| e.tuple()).collect(),
        neg.iter().map(|e| e.tuple()).collect(),
    )
}

fn learn_clauses(cfg: &RunConfig, kb: &FactStore, task: &LearnTask) -> Result<LearnOutcome, Failure> {
    Ok(match cfg.learner {
        LearnerKind::Foil => foil_learn(kb, task, &cfg.learn)?,
        LearnerKind::Focl => focl_learn(kb, task, &cfg.focl)?,
        LearnerKind::Mmdr => unreachable!("clause learners only"),
    })
}

fn mmdr_counters(m: &MmdrModel, alpha: f64) -> String {
    let significant = m.scored.iter().filter(|r| r.p_value <= alpha).count();
    format!(
        "hypotheses\t{}\nsignificant\t{}\nselected\t{}\nforecasting\t{}\n",
        m.scored.len(),
        significant,
        m.selected.len(),
        m.forecasting.len()
    )
}

pub fn mine(cfg: &RunConfig) -> Result<String, Failure> {
    let k = knowledge(cfg)?;
    match (cfg.learner, cfg.input.is_some()) {
        (LearnerKind::Mmdr, false) => Err(Failure::config("mmdr mining needs --input")),
        (LearnerKind::Mmdr, true) => {
            let data = dataset(cfg, k.as_ref())?;
            let hyps = hypotheses(cfg, k.as_ref(), &data)?;
            let model = mmdr_fit(&data, &hyps, &cfg.mmdr)?;
            write(&cfg.out, "rules.txt", &model.report())?;
            let mut trace = String::from(REPORT_HEADER);
            trace.push('\n');
            for r in &model.scored {
                trace.push_str(&r.report_line());
                trace.push('\n');
            }
            write(&cfg.out, "trace.tsv", &trace)?;
            write(&cfg.out, "counters.txt", &mmdr_counters(&model, cfg.mmdr.alpha))?;
            Ok(format!(
                "scored {} hypotheses; {} law-like rules selected, {} forecast",
                model.scored.len(),
                model.selected.len(),
                model.forecasting.len()
            ))
        }
        (_, true) => {
            let data = dataset(cfg, k.as_ref())?;
            let out = learn_clauses(cfg, &data.facts, &up_task(&data))?;
            write_outcome(cfg, &out)
        }
        (_, false) => {
            let k = k.ok_or_else(|| Failure::config("clause learning needs --knowledge or --input"))?;
            let kb = k.build_store()?;
            let target = k
                .target()
                .ok_or_else(|| Failure::config("the knowledge file declares no [target]"))?;
            let (pos, neg) = k.examples(&kb)?;
            let out = learn_clauses(cfg, &kb, &LearnTask::new(target, pos, neg))?;
            write_outcome(cfg, &out)
        }
    }
}

fn write_outcome(cfg: &RunConfig, out: &LearnOutcome) -> Result<String, Failure> {
    write(&cfg.out, "rules.txt", &format!("{}\n", out.rule))?;
    write(&cfg.out, "trace.tsv", &out.trace_tsv())?;
    write(&cfg.out, "counters.txt", &out.counters.report())?;
    Ok(format!(
        "learned {} clause(s); {} positive example(s) uncovered\n{}",
        out.rule.clauses().len(),
        out.uncovered.len(),
        out.rule
    ))
}

fn bound(x: f64) -> String {
    if x.is_finite() {
        x.to_string()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn forecast(cfg: &RunConfig, from: Option<NaiveDate>, use_hypotheses: bool) -> Result<String, Failure> {
    if cfg.learner != LearnerKind::Mmdr {
        return Err(Failure::config("forecast supports --learner mmdr only"));
    }
    let k = knowledge(cfg)?;
    let data = dataset(cfg, k.as_ref())?;
    let rows = data.series.rows();
    let first = match from {
        Some(d) => rows
            .iter()
            .position(|r| r.date >= d)
            .ok_or_else(|| Failure::data(format!("no row on or after {d}")))?,
        None => rows.len() - 1,
    };
    let rules: Vec<Rule> = if use_hypotheses {
        let k = k
            .as_ref()
            .filter(|k| k.has_hypotheses())
            .ok_or_else(|| Failure::config("--use-hypotheses needs [hypotheses] in the knowledge file"))?;
        k.hypotheses(&data.facts)?
    } else {
        // Only examples whose outcome is known at the close of the first forecast day.
        let train = data.restrict_to(rows[first].date);
        let hyps = hypotheses(cfg, k.as_ref(), &train)?;
        mmdr_fit(&train, &hyps, &cfg.mmdr)?
            .forecasting
            .into_iter()
            .map(|r| r.rule)
            .collect()
    };
    let mut f = Forecaster::new(&data, &rules)?;
    let mut text = String::from("date\tsign\tlower\tupper\trules\n");
    for row in first..rows.len() {
        let sign = f.sign(row)?;
        let (date, lower, upper, ids) = match f.interval(row) {
            Ok(iv) => (iv.target_date, bound(iv.lower), bound(iv.upper), iv.supporting_rules),
            Err(MmdrError::EmptyIntersection { .. }) => {
                let next = rows.get(row + 1).map(|r| r.date);
                let date = next.unwrap_or(rows[row].date);
                (date, "NA".into(), "NA".into(), f.fired(row)?)
            }
            Err(e) => return Err(e.into()),
        };
        let ids = if ids.is_empty() {
            "-".to_string()
        } else {
            ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        };
        let _ = writeln!(text, "{date}\t{sign}\t{lower}\t{upper}\t{ids}");
    }
    write(&cfg.out, "forecast.tsv", &text)?;
    let mut listing = String::from("id\trule\n");
    for (i, r) in rules.iter().enumerate() {
        let _ = writeln!(listing, "{i}\t{}", r.to_string().replace('\n', " | "));
    }
    write(&cfg.out, "forecast_rules.txt", &listing)?;
    Ok(format!("{} forecast(s) from {} rule(s)", rows.len() - first, rules.len()))
}

/// MMDR over a fixed hypothesis list, refit on every training window.
struct HypothesisLearner {
    rules: Vec<Rule>,
    config: MmdrConfig,
}

impl Learner for HypothesisLearner {
    type Model = MmdrModel;

    fn fit(&self, train: &EncodedDataset) -> Result<MmdrModel, BacktestError> {
        mmdr_fit(train, &self.rules, &self.config).map_err(|e| BacktestError::Learner(e.to_string()))
    }
}

pub fn backtest(cfg: &RunConfig, walk: &WalkForwardConfig) -> Result<String, Failure> {
    let k = knowledge(cfg)?;
    let data = dataset(cfg, k.as_ref())?;
    let report: BacktestReport = match cfg.learner {
        LearnerKind::Mmdr => {
            let learner = HypothesisLearner {
                rules: hypotheses(cfg, k.as_ref(), &data)?,
                config: cfg.mmdr.clone(),
            };
            walk_forward(&data, &learner, walk)?
        }
        LearnerKind::Foil => walk_forward(&data, &ClauseLearner::Foil(cfg.learn.clone()), walk)?,
        LearnerKind::Focl => walk_forward(&data, &ClauseLearner::Focl(cfg.focl.clone()), walk)?,
    };
    write(&cfg.out, "backtest.csv", &report.to_csv())?;
    let acc = report
        .mean_accuracy()
        .map_or_else(|_| "NA".to_string(), |a| format!("{:.2}%", a * 100.0));
    Ok(format!(
        "{} fold(s); mean sign accuracy {acc}; strategy gain {:.2}%; buy-and-hold {:.2}%",
        report.folds.len(),
        report.strategy_gain() * 100.0,
        report.buy_hold_gain() * 100.0
    ))
}

pub fn inspect(cfg: &RunConfig) -> Result<String, Failure> {
    let k = knowledge(cfg)?;
    if cfg.input.is_some() {
        let data = dataset(cfg, k.as_ref())?;
        return Ok(describe(&data.facts));
    }
    let k = k.ok_or_else(|| Failure::config("inspect needs --knowledge or --input"))?;
    let kb = k.build_store()?;
    let mut text = describe(&kb);
    if let Some(t) = k.target() {
        let (pos, neg) = k.examples(&kb)?;
        let _ = writeln!(text, "target: {t} ({} positive, {} negative)", pos.len(), neg.len());
    }
    Ok(text)
}
