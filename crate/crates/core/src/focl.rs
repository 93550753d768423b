//! FOIL guided by initial rules and intensional background knowledge.
//!
//! Each clause of an initial rule for the target is offered as a unit: its
//! body, with head variables bound to the clause head, competes with single
//! literals at every step. Gain ties go to units, then to intensional and
//! formula literals, then to extensional ones. A winning intensional literal
//! enters the clause operationalized.

use std::collections::BTreeMap;

use crate::error::{LearnError, LogicError};
use crate::eval::Evaluator;
use crate::foil::search::{ClauseState, Move, Searcher};
use crate::foil::{candidate_literal, clause_candidates, finish, var_name, Counters, LearnConfig, LearnOutcome, LearnTask};
use crate::store::{Builtin, FactStore, PredicateKind};
use crate::syntax::{HornClause, Literal, Rule, Term, Variable};

/// Longest conjunction operationalization may produce.
pub const MAX_OPERATIONAL_LITERALS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InitialRuleMode {
    /// Drop an initial rule when some single extensional literal classifies
    /// the training examples more accurately.
    UseMoreAccurate,
    /// Offer every initial rule.
    #[default]
    UseAll,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoclConfig {
    pub learn: LearnConfig,
    /// Keep winning intensional literals unexpanded.
    pub keep_intensional: bool,
    pub initial_mode: InitialRuleMode,
    /// Learn with 0, 1, ... new variables per literal up to
    /// `learn.max_new_vars`, stopping at the first rule that covers every
    /// positive.
    pub widening: bool,
}

impl Default for FoclConfig {
    fn default() -> Self {
        FoclConfig {
            learn: LearnConfig::default(),
            keep_intensional: false,
            initial_mode: InitialRuleMode::default(),
            widening: true,
        }
    }
}

fn substitute(lit: &Literal, map: &BTreeMap<String, Term>) -> Literal {
    let args = lit
        .args
        .iter()
        .map(|t| match t {
            Term::Var(v) => map.get(&v.name).cloned().unwrap_or_else(|| t.clone()),
            _ => t.clone(),
        })
        .collect();
    Literal {
        args,
        ..lit.clone()
    }
}

/// Head variable bindings when `clause`'s head is a list of distinct
/// variables matching `args` by type.
fn head_map(clause: &HornClause, args: &[Term]) -> Option<BTreeMap<String, Term>> {
    let mut map = BTreeMap::new();
    for (h, a) in clause.head().args.iter().zip(args) {
        let v = h.as_var()?;
        if v.dtype != a.dtype() || map.insert(v.name.clone(), a.clone()).is_some() {
            return None;
        }
    }
    Some(map)
}

fn expand(
    lit: &Literal,
    kb: &FactStore,
    fresh: &mut dyn FnMut(&str) -> Variable,
    depth: usize,
    out: &mut Vec<Literal>,
) -> Result<(), LogicError> {
    let p = kb
        .predicate(&lit.predicate)
        .ok_or_else(|| LogicError::UnknownPredicate(lit.predicate.clone()))?;
    let clauses = p.clauses();
    let map = (clauses.len() == 1).then(|| head_map(&clauses[0], &lit.args)).flatten();
    match (lit.negated || p.kind() != PredicateKind::Intensional, map) {
        (true, _) => out.push(lit.clone()),
        (false, _) if clauses.len() > 1 => return Err(LogicError::Disjunctive(lit.predicate.clone())),
        (false, None) => out.push(lit.clone()),
        (false, Some(mut map)) => {
            if depth >= kb.depth_limit() {
                return Err(LogicError::DepthExceeded(kb.depth_limit()));
            }
            let clause = &clauses[0];
            for v in clause.existential_variables() {
                map.insert(v.name.clone(), Term::Var(fresh(&v.dtype)));
            }
            for b in clause.body() {
                expand(&substitute(b, &map), kb, fresh, depth + 1, out)?;
            }
        }
    }
    if out.len() > MAX_OPERATIONAL_LITERALS {
        return Err(LogicError::TooLong(MAX_OPERATIONAL_LITERALS));
    }
    Ok(())
}

/// Replaces a positive intensional literal by the conjunction of extensional
/// and computed literals it stands for. Body-only variables of definitions
/// are renamed by `fresh`, which receives their type. Negated intensional
/// literals inside a definition are kept as they are.
pub fn operationalize(
    lit: &Literal,
    kb: &FactStore,
    fresh: &mut dyn FnMut(&str) -> Variable,
) -> Result<Vec<Literal>, LogicError> {
    let p = kb
        .predicate(&lit.predicate)
        .ok_or_else(|| LogicError::UnknownPredicate(lit.predicate.clone()))?;
    if lit.negated || p.kind() != PredicateKind::Intensional {
        return Err(LogicError::NotIntensional(lit.predicate.clone()));
    }
    let mut out = Vec::new();
    expand(lit, kb, fresh, 0, &mut out)?;
    Ok(out)
}

fn namer(start: usize) -> impl FnMut(&str) -> Variable {
    let mut next = start;
    move |ty: &str| {
        let v = Variable::new(var_name(next), ty);
        next += 1;
        v
    }
}

fn rank(kb: &FactStore, predicate: &str) -> u8 {
    let p = kb.predicate(predicate).expect("candidate over a declared predicate");
    match (p.kind(), p.builtin()) {
        (PredicateKind::Intensional | PredicateKind::Mixed, _) | (_, Some(Builtin::Formula(_))) => 1,
        _ => 2,
    }
}

/// The clauses of `rules` as units for the clause in `st`.
fn unit_moves(rules: &[Rule], st: &ClauseState, head: &Literal, kb: &FactStore, keep_intensional: bool) -> Vec<Move> {
    let mut out = Vec::new();
    for clause in rules.iter().flat_map(|r| r.clauses()) {
        let Some(mut map) = head_map(clause, &head.args) else {
            continue;
        };
        if clause.body().is_empty() {
            continue;
        }
        let mut fresh = namer(st.vars.len());
        for v in clause.existential_variables() {
            map.insert(v.name.clone(), Term::Var(fresh(&v.dtype)));
        }
        let mut body = Vec::new();
        let mut ok = true;
        for b in clause.body() {
            let lit = substitute(b, &map);
            if keep_intensional {
                body.push(lit);
            } else if expand(&lit, kb, &mut fresh, 0, &mut body).is_err() {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(Move {
                literals: body,
                commit: None,
                rank: 0,
                candidate: None,
            });
        }
    }
    out
}

/// Fraction of examples `rule` classifies correctly.
fn accuracy(ev: &mut Evaluator<'_>, rule: &Rule, task: &LearnTask) -> Result<f64, LogicError> {
    let mut right = 0usize;
    for p in &task.pos {
        right += usize::from(ev.rule_covers(rule, p)?);
    }
    for n in &task.neg {
        right += usize::from(!ev.rule_covers(rule, n)?);
    }
    Ok(right as f64 / (task.pos.len() + task.neg.len()) as f64)
}

/// Initial rules for the target, filtered per `config.initial_mode`.
fn initial_rules(kb: &FactStore, task: &LearnTask, config: &FoclConfig, head: &Literal, st: &ClauseState) -> Result<Vec<Rule>, LearnError> {
    let rules: Vec<Rule> = kb
        .initial_rules()
        .iter()
        .filter(|r| r.rule.head_predicate() == task.target)
        .map(|r| r.rule.clone())
        .collect();
    if config.initial_mode == InitialRuleMode::UseAll || rules.is_empty() {
        return Ok(rules);
    }
    let mut ev = Evaluator::with_typing(kb, false);
    let mut best_literal = f64::NEG_INFINITY;
    for c in clause_candidates(kb, st, &task.target, &config.learn) {
        if kb.predicate(&c.predicate).map(|p| p.kind()) != Some(PredicateKind::Extensional) {
            continue;
        }
        let clause = HornClause::new(head.clone(), vec![candidate_literal(&c, st, kb)])?;
        best_literal = best_literal.max(accuracy(&mut ev, &Rule::single(clause), task)?);
    }
    let mut kept = Vec::new();
    for r in rules {
        if accuracy(&mut ev, &r, task)? >= best_literal {
            kept.push(r);
        }
    }
    Ok(kept)
}

fn learn_once(kb: &FactStore, task: &LearnTask, config: &FoclConfig, learn: &LearnConfig) -> Result<LearnOutcome, LearnError> {
    let sig = task.validate(kb)?;
    let mut searcher = Searcher::new(kb, &sig, &task.pos, &task.neg, learn.clone())?;
    let all: Vec<usize> = (0..task.pos.len()).collect();
    let head = searcher.head.clone();
    let rules = initial_rules(kb, task, config, &head, &searcher.initial_state(&all))?;
    let target = task.target.clone();
    let keep = config.keep_intensional;
    let mut source = |s: &mut Searcher<'_>, st: &ClauseState| -> Result<Vec<Move>, LearnError> {
        let kb = s.kb();
        let mut moves = unit_moves(&rules, st, &s.head, kb, keep);
        let cands = clause_candidates(kb, st, &target, &s.config);
        s.counters.candidates_generated += (cands.len() + moves.len()) as u64;
        for c in cands {
            let lit = candidate_literal(&c, st, kb);
            let commit = (!keep && !lit.negated)
                .then(|| operationalize(&lit, kb, &mut namer(st.vars.len() + c.new_var_count())).ok())
                .flatten();
            moves.push(Move {
                literals: vec![lit],
                commit,
                rank: rank(kb, &c.predicate),
                candidate: Some(c),
            });
        }
        Ok(moves)
    };
    let (clauses, uncovered) = searcher.learn_rule(&mut source)?;
    finish(searcher, clauses, uncovered, task)
}

/// Learns a rule for `task.target`, seeded by the initial rules in `kb`.
pub fn focl_learn(kb: &FactStore, task: &LearnTask, config: &FoclConfig) -> Result<LearnOutcome, LearnError> {
    config.learn.validate()?;
    if !config.widening {
        return learn_once(kb, task, config, &config.learn);
    }
    let mut counters = Counters::default();
    let mut last = Err(LearnError::Unlearnable);
    for budget in 0..=config.learn.max_new_vars {
        let learn = LearnConfig {
            max_new_vars: budget,
            ..config.learn.clone()
        };
        counters.widening_steps += 1;
        match learn_once(kb, task, config, &learn) {
            Ok(out) => {
                counters.add(&out.counters);
                let done = out.uncovered.is_empty();
                last = Ok(out);
                if done {
                    break;
                }
            }
            Err(LearnError::Unlearnable) => {}
            Err(e) => return Err(e),
        }
    }
    last.map(|mut out| {
        out.counters = counters;
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knowledge::Knowledge;
    use crate::parse::parse_literal;

    const TREND: &str = include_str!("../../../fixtures/trend.kb");

    fn task(text: &str) -> (FactStore, LearnTask) {
        let k = Knowledge::parse(text).unwrap();
        let kb = k.build_store().unwrap();
        let (pos, neg) = k.examples(&kb).unwrap();
        let t = LearnTask::new(k.target().unwrap(), pos, neg);
        (kb, t)
    }

    #[test]
    fn trend_rule_with_and_without_typing() {
        let (kb, t) = task(TREND);
        let typed = focl_learn(&kb, &t, &FoclConfig::default()).unwrap();
        let raw_cfg = FoclConfig {
            learn: LearnConfig { typing: false, ..LearnConfig::default() },
            ..FoclConfig::default()
        };
        let raw = focl_learn(&kb, &t, &raw_cfg).unwrap();
        assert_eq!(typed.rule, raw.rule);
        assert!(typed.uncovered.is_empty());
        assert!(typed.counters.gain_evaluations < raw.counters.gain_evaluations);
        assert_eq!(typed.counters.widening_steps, 1);
    }

    const NESTED: &str = "
[types]
price: ratio numeric
[signatures]
Rise: (price, price)
Step: (price, price)
Two: (price, price, price)
Alt: (price, price)
Deep: (price)
[facts]
Rise(1, 2)
Rise(2, 3)
[rules]
Step(a, b) <- Rise(a, b)
Two(a, b, c) <- Step(a, m) & Step(m, b) & !Step(b, c)
Alt(a, b) <- Rise(a, b)
Alt(a, b) <- Rise(b, a)
Deep(a) <- Deep(a)
";

    #[test]
    fn operationalization() {
        let k = Knowledge::parse(NESTED).unwrap();
        let kb = k.build_store().unwrap();
        let lit = parse_literal("Two(x, y, z)", &kb).unwrap();
        let ops = operationalize(&lit, &kb, &mut namer(3)).unwrap();
        let text: Vec<String> = ops.iter().map(|l| l.to_string()).collect();
        assert_eq!(text, vec!["Rise(x, w)", "Rise(w, y)", "!Step(y, z)"]);
        let alt = parse_literal("Alt(x, y)", &kb).unwrap();
        assert!(matches!(operationalize(&alt, &kb, &mut namer(2)), Err(LogicError::Disjunctive(_))));
        let rise = parse_literal("Rise(x, y)", &kb).unwrap();
        assert!(matches!(operationalize(&rise, &kb, &mut namer(2)), Err(LogicError::NotIntensional(_))));
        let deep = parse_literal("Deep(x)", &kb).unwrap();
        assert!(matches!(operationalize(&deep, &kb, &mut namer(1)), Err(LogicError::DepthExceeded(_))));
    }

    #[test]
    fn operationalized_extension_is_preserved() {
        let k = Knowledge::parse(NESTED).unwrap();
        let kb = k.build_store().unwrap();
        let lit = parse_literal("Two(x, y, z)", &kb).unwrap();
        let ops = operationalize(&lit, &kb, &mut namer(3)).unwrap();
        let vars = lit.variables().into_iter().cloned().collect::<Vec<_>>();
        let mut ev = Evaluator::new(&kb);
        assert_eq!(ev.solve(&vars, &[lit]).unwrap(), ev.solve(&vars, &ops).unwrap());
    }

    const SEEDED: &str = "
[types]
price: ratio numeric
[formulas]
Up(a: price, b: price) := b >= a
Down(a: price, b: price) := a >= b
[signatures]
UpDown: (price, price, price)
Noise: (price)
[facts]
Noise(34)
Noise(38)
[initial]
extensional_hint: UpDown(a, b, c) <- Up(a, b) & Down(b, c)
[target]
UpDown
[examples]
+ UpDown(34, 38, 35)
- UpDown(38, 35, 35.5)
+ UpDown(35.5, 36, 34)
- UpDown(36, 37, 38)
";

    #[test]
    fn unit_wins_gain_tie() {
        let (kb, t) = task(SEEDED);
        let out = focl_learn(&kb, &t, &FoclConfig::default()).unwrap();
        assert_eq!(out.rule.to_string(), "UpDown(x, y, z) <- Up(x, y) & Down(y, z)");
        assert_eq!(out.trace.len(), 1);
    }

    #[test]
    fn more_accurate_literal_drops_seed() {
        let (kb, t) = task(SEEDED);
        let cfg = FoclConfig {
            initial_mode: InitialRuleMode::UseMoreAccurate,
            ..FoclConfig::default()
        };
        // Noise(x) classifies three of four examples; the seed classifies all four.
        let out = focl_learn(&kb, &t, &cfg).unwrap();
        assert_eq!(out.rule.to_string(), "UpDown(x, y, z) <- Up(x, y) & Down(y, z)");
    }
}
