//! Contingency scoring of hypotheses on an encoded dataset.

use std::collections::HashMap;

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::encode::{EncodedDataset, HeadForm};
use crate::error::{LogicError, MmdrError};
use crate::eval::{CClause, Evaluator};
use crate::mmdr::fisher::{fisher_p_value, Contingency};
use crate::mmdr::grammar::complexity;
use crate::store::ConstId;
use crate::syntax::{HornClause, Rule};

/// A rule with its contingency on the examples where it is evaluable.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoredRule {
    pub rule: Rule,
    pub head: HeadForm,
    pub contingency: Contingency,
    pub p_value: f64,
    pub complexity: usize,
    /// First and last example dates that entered the contingency.
    pub train_window: (NaiveDate, NaiveDate),
}

impl ScoredRule {
    pub fn cond_probability(&self) -> Option<f64> {
        self.contingency.cond_probability()
    }

    /// Report line: clause, a, b, c, d, conditional probability, p-value, complexity.
    pub fn report_line(&self) -> String {
        let t = &self.contingency;
        let cp = self
            .cond_probability()
            .map(|p| format!("{p:.4}"))
            .unwrap_or_else(|| "NA".into());
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.rule, t.a, t.b, t.c, t.d, cp, format_p(self.p_value), self.complexity
        )
    }
}

/// Six significant digits.
pub fn format_p(p: f64) -> String {
    format!("{p:.5e}")
}

pub const REPORT_HEADER: &str = "rule\ta\tb\tc\td\tcond_probability\tp_value\tcomplexity";

/// Head form of a rule over `target`, shared by all of its clauses.
pub fn head_form(rule: &Rule, target: &str) -> Result<HeadForm, MmdrError> {
    let name = rule.head_predicate();
    let form = HeadForm::from_predicate(name, target).ok_or_else(|| MmdrError::NotATargetForm(name.to_string()))?;
    for c in rule.clauses() {
        if c.head().args.len() != 1 || c.head().args[0].as_var().is_none() {
            return Err(MmdrError::NotATargetForm(c.head().to_string()));
        }
    }
    Ok(form)
}

/// Scores rules against one dataset, caching per-literal truth vectors.
pub struct Scorer<'d> {
    data: &'d EncodedDataset,
    ev: Evaluator<'d>,
    ids: Vec<ConstId>,
    literal_cache: HashMap<String, Vec<bool>>,
}

enum Plan {
    /// Conjunction of cached literal vectors.
    Cached(Vec<String>),
    Compiled(CClause),
}

struct Prepared {
    head: HeadForm,
    clauses: Vec<Plan>,
    first_row: usize,
}

impl<'d> Scorer<'d> {
    pub fn new(data: &'d EncodedDataset) -> Result<Self, MmdrError> {
        let mut ev = Evaluator::new(&data.facts);
        let ids = data
            .examples
            .iter()
            .map(|e| ev.intern(&e.tuple()[0]))
            .collect::<Result<_, _>>()?;
        Ok(Scorer {
            data,
            ev,
            ids,
            literal_cache: HashMap::new(),
        })
    }

    fn single_literal(clause: &HornClause, i: usize) -> Result<HornClause, LogicError> {
        clause.with_body(vec![clause.body()[i].clone()])
    }

    fn literal_key(clause: &HornClause, i: usize) -> String {
        format!("{}|{}", clause.head().args[0], clause.body()[i])
    }

    fn truth_of(&self, cc: &CClause) -> Result<Vec<bool>, LogicError> {
        self.ids
            .iter()
            .map(|&id| self.ev.covers_compiled(cc, &[id]))
            .collect()
    }

    fn prepare(&mut self, rule: &Rule) -> Result<Prepared, MmdrError> {
        let head = head_form(rule, &self.data.target)?;
        let mut first_row = 0;
        let mut clauses = Vec::new();
        for clause in rule.clauses() {
            for lit in clause.body() {
                first_row = first_row.max(self.data.defined_from(&lit.predicate));
            }
            if clause.existential_variables().is_empty() {
                let mut keys = Vec::new();
                for i in 0..clause.body().len() {
                    let key = Self::literal_key(clause, i);
                    if !self.literal_cache.contains_key(&key) {
                        let cc = self.ev.compile_clause(&Self::single_literal(clause, i)?)?;
                        let truth = self.truth_of(&cc)?;
                        self.literal_cache.insert(key.clone(), truth);
                    }
                    keys.push(key);
                }
                clauses.push(Plan::Cached(keys));
            } else {
                clauses.push(Plan::Compiled(self.ev.compile_clause(clause)?));
            }
        }
        Ok(Prepared { head, clauses, first_row })
    }

    fn contingency(&self, rule: Rule, p: &Prepared) -> Result<ScoredRule, MmdrError> {
        let n = self.ids.len();
        let mut body = vec![false; n];
        for plan in &p.clauses {
            let truth: Vec<bool> = match plan {
                Plan::Cached(keys) => (0..n)
                    .map(|i| keys.iter().all(|k| self.literal_cache[k][i]))
                    .collect(),
                Plan::Compiled(cc) => self.truth_of(cc)?,
            };
            for (b, t) in body.iter_mut().zip(truth) {
                *b |= t;
            }
        }
        let mut t = Contingency::default();
        let mut window: Option<(NaiveDate, NaiveDate)> = None;
        for (i, ex) in self.data.examples.iter().enumerate() {
            if ex.row < p.first_row {
                continue;
            }
            window = Some(window.map_or((ex.date, ex.date), |(s, _)| (s, ex.date)));
            match (body[i], p.head.holds(ex.current, ex.next)) {
                (true, true) => t.a += 1,
                (true, false) => t.b += 1,
                (false, true) => t.c += 1,
                (false, false) => t.d += 1,
            }
        }
        if t.a + t.b == 0 {
            return Err(MmdrError::BodyNeverSatisfied);
        }
        let complexity = complexity(&rule);
        Ok(ScoredRule {
            rule,
            head: p.head,
            contingency: t,
            p_value: fisher_p_value(&t),
            complexity,
            train_window: window.expect("a satisfied body implies an evaluated example"),
        })
    }

    pub fn score(&mut self, rule: &Rule) -> Result<ScoredRule, MmdrError> {
        let p = self.prepare(rule)?;
        self.contingency(rule.clone(), &p)
    }

    /// Scores many rules; results keep the input order.
    pub fn score_all(&mut self, rules: &[Rule]) -> Vec<Result<ScoredRule, MmdrError>> {
        let prepared: Vec<Result<Prepared, MmdrError>> = rules.iter().map(|r| self.prepare(r)).collect();
        let this = &*self;
        rules
            .par_iter()
            .zip(prepared)
            .map(|(rule, p)| this.contingency(rule.clone(), &p?))
            .collect()
    }
}

/// Scores one rule on every example where all of its body predicates are defined.
pub fn score_rule(rule: &Rule, data: &EncodedDataset) -> Result<ScoredRule, MmdrError> {
    Scorer::new(data)?.score(rule)
}
