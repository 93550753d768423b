//! Top-down induction of Horn clauses by information gain.

pub mod candidates;
pub mod gain;
pub(crate) mod search;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Duration;

use crate::error::LearnError;
use crate::store::{FactStore, TypedSignature};
use crate::syntax::{Literal, Rule, Term, Variable};
use crate::value::Constant;

pub use candidates::{filter_candidates, filter_constrained, generate_candidates, Candidate, Slot};
pub use gain::{information_gain, max_gain_bound, GainState};
pub use search::var_name;

use search::{ClauseState, Move, Searcher};

#[derive(Clone, Debug, PartialEq)]
pub struct LearnConfig {
    /// New variables one literal may introduce.
    pub max_new_vars: usize,
    /// Positives a clause must cover to be kept.
    pub min_clause_pos: usize,
    pub max_clause_len: usize,
    /// Fraction of covered examples that may be negative.
    pub neg_tolerance: f64,
    pub allow_negated: bool,
    /// Drop candidates that violate slot types. Inter-argument constraints
    /// always apply.
    pub typing: bool,
    pub time_budget: Option<Duration>,
    /// Skip candidates whose generalization bounds their gain below the best.
    pub pruning: bool,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            max_new_vars: 2,
            min_clause_pos: 1,
            max_clause_len: 6,
            neg_tolerance: 0.0,
            allow_negated: true,
            typing: true,
            time_budget: None,
            pruning: true,
        }
    }
}

impl LearnConfig {
    pub fn validate(&self) -> Result<(), LearnError> {
        if !(0.0..1.0).contains(&self.neg_tolerance) {
            return Err(LearnError::InvalidConfig(format!(
                "neg_tolerance {} is not in [0, 1)",
                self.neg_tolerance
            )));
        }
        if self.max_clause_len == 0 {
            return Err(LearnError::InvalidConfig("max_clause_len must be positive".into()));
        }
        if self.min_clause_pos == 0 {
            return Err(LearnError::InvalidConfig("min_clause_pos must be positive".into()));
        }
        Ok(())
    }
}

/// Target predicate with labelled example tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct LearnTask {
    pub target: String,
    pub pos: Vec<Vec<Constant>>,
    pub neg: Vec<Vec<Constant>>,
}

impl LearnTask {
    pub fn new(target: impl Into<String>, pos: Vec<Vec<Constant>>, neg: Vec<Vec<Constant>>) -> Self {
        LearnTask {
            target: target.into(),
            pos,
            neg,
        }
    }

    /// The target signature, after checking examples against it.
    pub fn validate(&self, kb: &FactStore) -> Result<TypedSignature, LearnError> {
        let sig = kb
            .signature(&self.target)
            .ok_or_else(|| LearnError::InvalidTask(format!("target `{}` is not declared", self.target)))?
            .clone();
        if self.pos.is_empty() {
            return Err(LearnError::InvalidTask("no positive examples".into()));
        }
        for ex in self.pos.iter().chain(&self.neg) {
            if ex.len() != sig.arity() {
                return Err(LearnError::InvalidTask(format!(
                    "example of arity {} for `{}` of arity {}",
                    ex.len(),
                    self.target,
                    sig.arity()
                )));
            }
            if let Some((slot, c)) = ex.iter().enumerate().find(|(i, c)| !sig.admits(*i, &c.dtype)) {
                return Err(LearnError::InvalidTask(format!(
                    "example constant {c} of type {} in slot {slot} of `{}`",
                    c.dtype, self.target
                )));
            }
        }
        let pos: BTreeSet<&Vec<Constant>> = self.pos.iter().collect();
        if let Some(both) = self.neg.iter().find(|n| pos.contains(n)) {
            return Err(LearnError::InvalidTask(format!(
                "example ({}) is both positive and negative",
                both.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
            )));
        }
        Ok(sig)
    }
}

/// Work counters of one learning run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub candidates_generated: u64,
    pub gain_evaluations: u64,
    pub tuples_touched: u64,
    pub widening_steps: u64,
}

impl Counters {
    pub fn add(&mut self, other: &Counters) {
        self.candidates_generated += other.candidates_generated;
        self.gain_evaluations += other.gain_evaluations;
        self.tuples_touched += other.tuples_touched;
        self.widening_steps += other.widening_steps;
    }

    /// One `name<TAB>value` line per counter.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for (k, v) in [
            ("candidates_generated", self.candidates_generated),
            ("gain_evaluations", self.gain_evaluations),
            ("tuples_touched", self.tuples_touched),
            ("widening_steps", self.widening_steps),
        ] {
            let _ = writeln!(out, "{k}\t{v}");
        }
        out
    }
}

/// A chosen literal with the counts it was scored on.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceLine {
    /// 1-based clause number.
    pub clause: usize,
    pub literal: String,
    pub state: GainState,
    pub gain: f64,
}

pub const TRACE_HEADER: &str = "clause\tliteral\tP0\tN0\tP1\tN1\tT++\tgain";

impl TraceLine {
    pub fn tsv(&self) -> String {
        let s = &self.state;
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6}",
            self.clause, self.literal, s.p0, s.n0, s.p1, s.n1, s.t_pp, self.gain
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearnOutcome {
    pub rule: Rule,
    pub trace: Vec<TraceLine>,
    pub counters: Counters,
    /// Positive examples no clause covers.
    pub uncovered: Vec<Vec<Constant>>,
}

impl LearnOutcome {
    pub fn trace_tsv(&self) -> String {
        let mut out = String::from(TRACE_HEADER);
        out.push('\n');
        for t in &self.trace {
            out.push_str(&t.tsv());
            out.push('\n');
        }
        out
    }
}

/// Literal for `c` in the current clause; new variables are named after
/// the clause's existing ones.
pub(crate) fn candidate_literal(c: &Candidate, st: &ClauseState, kb: &FactStore) -> Literal {
    let old = st.old_vars();
    let new: Vec<Variable> = c
        .new_var_types(kb)
        .into_iter()
        .enumerate()
        .map(|(j, t)| Variable::new(var_name(st.vars.len() + j), t))
        .collect();
    let args = c
        .slots
        .iter()
        .map(|s| match *s {
            Slot::Old(i) => Term::Var(old[i].clone()),
            Slot::New(j) => Term::Var(new[j].clone()),
        })
        .collect();
    let lit = Literal::new(c.predicate.clone(), args);
    if c.negated {
        lit.negate()
    } else {
        lit
    }
}

/// Candidates for the current clause, typed or untyped per `config`.
pub(crate) fn clause_candidates(kb: &FactStore, st: &ClauseState, target: &str, config: &LearnConfig) -> Vec<Candidate> {
    let old_types = st.old_types();
    let raw = generate_candidates(kb, old_types.len(), config.max_new_vars, config.allow_negated, &[target]);
    if config.typing {
        filter_candidates(raw, kb, &old_types)
    } else {
        filter_constrained(raw, kb)
    }
}

pub(crate) fn finish(searcher: Searcher<'_>, clauses: Vec<crate::syntax::HornClause>, uncovered: Vec<usize>, task: &LearnTask) -> Result<LearnOutcome, LearnError> {
    if clauses.is_empty() {
        return Err(LearnError::Unlearnable);
    }
    Ok(LearnOutcome {
        rule: Rule::new(clauses)?,
        trace: searcher.trace,
        counters: searcher.counters,
        uncovered: uncovered.into_iter().map(|i| task.pos[i].clone()).collect(),
    })
}

/// Learns a rule for `task.target` from the background knowledge in `kb`.
pub fn foil_learn(kb: &FactStore, task: &LearnTask, config: &LearnConfig) -> Result<LearnOutcome, LearnError> {
    config.validate()?;
    let sig = task.validate(kb)?;
    let mut searcher = Searcher::new(kb, &sig, &task.pos, &task.neg, config.clone())?;
    let target = task.target.clone();
    let mut source = |s: &mut Searcher<'_>, st: &ClauseState| -> Result<Vec<Move>, LearnError> {
        let cands = clause_candidates(s.kb(), st, &target, &s.config);
        s.counters.candidates_generated += cands.len() as u64;
        Ok(cands
            .into_iter()
            .map(|c| Move {
                literals: vec![candidate_literal(&c, st, s.kb())],
                commit: None,
                rank: 0,
                candidate: Some(c),
            })
            .collect())
    };
    let (clauses, uncovered) = searcher.learn_rule(&mut source)?;
    finish(searcher, clauses, uncovered, task)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::Evaluator;
    use crate::knowledge::Knowledge;

    pub(crate) const UPDOWN: &str = include_str!("../../../../fixtures/updown.kb");

    fn task(text: &str) -> (FactStore, LearnTask) {
        let k = Knowledge::parse(text).unwrap();
        let kb = k.build_store().unwrap();
        let (pos, neg) = k.examples(&kb).unwrap();
        let t = LearnTask::new(k.target().unwrap(), pos, neg);
        (kb, t)
    }

    fn assert_sound(kb: &FactStore, t: &LearnTask, out: &LearnOutcome) {
        let mut ev = Evaluator::with_typing(kb, false);
        for p in &t.pos {
            assert_eq!(ev.rule_covers(&out.rule, p).unwrap(), !out.uncovered.contains(p));
        }
        for n in &t.neg {
            assert!(!ev.rule_covers(&out.rule, n).unwrap());
        }
    }

    #[test]
    fn updown_is_separated() {
        let (kb, t) = task(UPDOWN);
        let out = foil_learn(&kb, &t, &LearnConfig::default()).unwrap();
        assert!(out.uncovered.is_empty());
        assert_sound(&kb, &t, &out);
        assert_eq!(out.rule.to_string(), "UpDown(x, y, z) <- Down(y, z)");
        assert_eq!(out.trace[0].state, GainState::new(2, 2, 2, 0, 2));
        assert_eq!(out.trace[0].tsv(), "1\tDown(y, z)\t2\t2\t2\t0\t2\t2.000000");
    }

    const FAMILY: &str = "
[types]
person: nominal symbols
[signatures]
Parent: (person, person)
Grandparent: (person, person)
[facts]
Parent(Ann, Bob)
Parent(Bob, Cal)
Parent(Bob, Dee)
Parent(Eve, Ann)
Parent(Cal, Fay)
[target]
Grandparent
[examples]
+ Grandparent(Ann, Cal)
+ Grandparent(Ann, Dee)
+ Grandparent(Eve, Bob)
+ Grandparent(Bob, Fay)
- Grandparent(Ann, Bob)
- Grandparent(Bob, Cal)
- Grandparent(Cal, Ann)
- Grandparent(Eve, Cal)
- Grandparent(Dee, Fay)
";

    #[test]
    fn new_variable_chain() {
        let (kb, t) = task(FAMILY);
        let out = foil_learn(&kb, &t, &LearnConfig::default()).unwrap();
        assert_sound(&kb, &t, &out);
        assert!(out.uncovered.is_empty());
        // Excluding direct parents first is the greedy choice: it drops two
        // negatives at no cost.
        assert_eq!(out.rule.to_string(), "Grandparent(x, y) <- !Parent(x, y) & Parent(x, z) & Parent(z, y)");
        assert!(out.counters.gain_evaluations > 0);
        let unpruned = foil_learn(&kb, &t, &LearnConfig { pruning: false, ..LearnConfig::default() }).unwrap();
        assert_eq!(unpruned.rule, out.rule);
        assert!(unpruned.counters.gain_evaluations >= out.counters.gain_evaluations);
    }

    #[test]
    fn invalid_tasks() {
        let (kb, mut t) = task(UPDOWN);
        let both = t.pos[0].clone();
        t.neg.push(both);
        assert!(matches!(foil_learn(&kb, &t, &LearnConfig::default()), Err(LearnError::InvalidTask(_))));
        let (kb, mut t) = task(UPDOWN);
        t.pos.clear();
        assert!(matches!(foil_learn(&kb, &t, &LearnConfig::default()), Err(LearnError::InvalidTask(_))));
        let (kb, t) = task(UPDOWN);
        let bad = LearnConfig { neg_tolerance: 1.5, ..LearnConfig::default() };
        assert!(matches!(foil_learn(&kb, &t, &bad), Err(LearnError::InvalidConfig(_))));
    }

    #[test]
    fn nothing_separates_identical_shapes() {
        let text = "
[types]
price: ratio numeric
[signatures]
T: (price)
Seen: (price)
[facts]
Seen(1)
Seen(2)
[target]
T
[examples]
+ T(1)
- T(2)
";
        let (kb, t) = task(text);
        assert!(matches!(foil_learn(&kb, &t, &LearnConfig::default()), Err(LearnError::Unlearnable)));
    }

    #[test]
    fn zero_budget_times_out() {
        let (kb, t) = task(FAMILY);
        let cfg = LearnConfig { time_budget: Some(Duration::ZERO), ..LearnConfig::default() };
        assert!(matches!(foil_learn(&kb, &t, &cfg), Err(LearnError::TimeBudgetExceeded)));
    }
}
