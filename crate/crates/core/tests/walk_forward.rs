//! Walk-forward purity: fitted rules depend only on the training window.

use std::collections::BTreeMap;
use std::sync::Mutex;

use chrono::NaiveDate;

use lawmine_core::backtest::{folds, walk_forward, Learner, MmdrLearner, WalkForwardConfig};
use lawmine_core::encode::{encode, EncodeConfig, EncodedDataset, Sign, DATE_TYPE};
use lawmine_core::mmdr::{mmdr_fit_grammar, BodyPredicate, HypothesisGrammar, MmdrConfig, MmdrModel, Polarity};
use lawmine_core::synthetic::{planted_series, PlantedConfig};
use lawmine_core::{BacktestError, Constant, TypedSignature};

const PROBE: &str = "Tomorrow";

/// Fits with a grammar that can use the probe predicate and records each
/// fold's rule report by its last training date.
struct Recording {
    inner: MmdrLearner,
    reports: Mutex<BTreeMap<NaiveDate, String>>,
}

impl Recording {
    fn new(data: &EncodedDataset) -> Recording {
        let mut grammar = HypothesisGrammar::default_for(data);
        grammar.body_predicates.push(BodyPredicate::new(PROBE, Polarity::Positive));
        Recording {
            inner: MmdrLearner {
                grammar: Some(grammar),
                extra: Vec::new(),
                config: MmdrConfig::default(),
            },
            reports: Mutex::new(BTreeMap::new()),
        }
    }
}

impl Learner for Recording {
    type Model = MmdrModel;

    fn fit(&self, train: &EncodedDataset) -> Result<MmdrModel, BacktestError> {
        let model = self.inner.fit(train)?;
        let last = train.examples.last().expect("non-empty window").date;
        self.reports.lock().unwrap().insert(last, model.report());
        Ok(model)
    }
}

fn dataset(days: usize) -> EncodedDataset {
    let mut data = encode(&planted_series(&PlantedConfig::new(days, 3)).unwrap(), &EncodeConfig::new("price")).unwrap();
    data.facts
        .declare(TypedSignature::new(PROBE, vec![DATE_TYPE.into()]))
        .unwrap();
    data
}

/// `Tomorrow(t)` holds exactly when the target rises after `t`, for every
/// example from `from` on.
fn inject_future(data: &mut EncodedDataset, from: usize) {
    let rising: Vec<NaiveDate> = data.examples[from..]
        .iter()
        .filter(|e| e.actual_sign() == Sign::Up)
        .map(|e| e.date)
        .collect();
    for d in rising {
        data.facts.add_fact(PROBE, vec![Constant::date(d, DATE_TYPE)]).unwrap();
    }
}

fn config() -> WalkForwardConfig {
    WalkForwardConfig {
        train_len: 200,
        test_len: 50,
        ..WalkForwardConfig::default()
    }
}

#[test]
fn future_facts_do_not_reach_training() {
    let clean = dataset(320);
    let plan = folds(clean.examples.len(), &config()).unwrap();
    assert_eq!(plan.len(), 2);
    // Later folds train on earlier test windows, so the probe starts where
    // the last training window ends.
    let mut leaky = clean.clone();
    inject_future(&mut leaky, plan[1].test.start);

    let a = Recording::new(&clean);
    let b = Recording::new(&leaky);
    let ra = walk_forward(&clean, &a, &config()).unwrap();
    let rb = walk_forward(&leaky, &b, &config()).unwrap();
    let (a, b) = (a.reports.into_inner().unwrap(), b.reports.into_inner().unwrap());
    assert_eq!(a, b);
    assert!(a.values().all(|r| !r.contains(PROBE)));
    assert_eq!(ra.to_csv(), rb.to_csv());

    // The probe is found whenever it is visible at fit time.
    let mut grammar = HypothesisGrammar::default_for(&leaky);
    grammar.body_predicates.push(BodyPredicate::new(PROBE, Polarity::Positive));
    let seen = mmdr_fit_grammar(&leaky, Some(&grammar), &[], &MmdrConfig::default()).unwrap();
    assert!(seen.report().contains(PROBE));
}

#[test]
fn later_rows_do_not_change_a_fold() {
    let full = dataset(320);
    let learner = Recording::new(&full);
    walk_forward(&full, &learner, &config()).unwrap();
    let reports = learner.reports.into_inner().unwrap();

    let plan = folds(full.examples.len(), &config()).unwrap();
    for fold in plan {
        let first = &full.examples[fold.train.start];
        let last = &full.examples[fold.train.end - 1];
        let rows = full.series.rows().iter().take_while(|r| r.date <= last.next_date).count();
        let mut cut = encode(&full.series.prefix(rows), &EncodeConfig::new("price")).unwrap();
        cut.facts
            .declare(TypedSignature::new(PROBE, vec![DATE_TYPE.into()]))
            .unwrap();
        let fresh = Recording::new(&cut);
        let model = fresh.fit(&cut.window(first.date, last.next_date)).unwrap();
        assert_eq!(reports[&last.date], model.report(), "fold {}", fold.index);
    }
}

#[test]
fn exact_length_gives_one_fold() {
    let c = config();
    let plan = folds(250, &c).unwrap();
    assert_eq!(plan.len(), 1);
    assert_eq!((plan[0].train.clone(), plan[0].test.clone()), (0..200, 200..250));
    assert!(matches!(folds(249, &c), Err(BacktestError::InsufficientData(_))));
}
