//! Variablizations of background predicates as candidate literals.
//!
//! Each argument slot takes an old variable (already in the clause) or a new
//! one. New variables are numbered in order of first use, so each pattern is
//! generated once. Candidates are ordered by predicate name, then slot
//! assignment (old before new), positive before negated.

use std::collections::BTreeSet;

use crate::store::FactStore;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Old(usize),
    New(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate {
    pub predicate: String,
    pub slots: Vec<Slot>,
    pub negated: bool,
}

impl Candidate {
    pub fn new_var_count(&self) -> usize {
        self.slots
            .iter()
            .filter_map(|s| match s {
                Slot::New(j) => Some(j + 1),
                Slot::Old(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Type of each new variable: the type of the slot where it first occurs.
    pub fn new_var_types(&self, kb: &FactStore) -> Vec<String> {
        let sig = kb.signature(&self.predicate).expect("candidate over a declared predicate");
        let mut out = vec![String::new(); self.new_var_count()];
        for (slot, s) in self.slots.iter().enumerate().rev() {
            if let Slot::New(j) = s {
                out[*j] = sig.arg_types()[slot].clone();
            }
        }
        out
    }

    fn term_type<'a>(&self, slot: usize, old_types: &'a [String], new_types: &'a [String]) -> &'a str {
        match self.slots[slot] {
            Slot::Old(i) => &old_types[i],
            Slot::New(j) => &new_types[j],
        }
    }

    /// Whether every extension of `other` projects onto an extension of
    /// `self`: same predicate, both positive, equal old slots, and a
    /// type-preserving map from `self`'s new variables onto `other`'s terms.
    pub fn generalizes(&self, other: &Candidate, old_types: &[String], kb: &FactStore) -> bool {
        if self.predicate != other.predicate || self.negated || other.negated || self == other {
            return false;
        }
        let mine = self.new_var_types(kb);
        let theirs = other.new_var_types(kb);
        let mut map: Vec<Option<Slot>> = vec![None; mine.len()];
        for (slot, (&g, &s)) in self.slots.iter().zip(&other.slots).enumerate() {
            match g {
                Slot::Old(_) if g != s => return false,
                Slot::Old(_) => {}
                Slot::New(j) => match map[j] {
                    Some(prev) if prev != s => return false,
                    Some(_) => {}
                    None => {
                        if other.term_type(slot, old_types, &theirs) != mine[j] {
                            return false;
                        }
                        map[j] = Some(s);
                    }
                },
            }
        }
        true
    }
}

fn assign(arity: usize, old: usize, budget: usize, acc: &mut Vec<Slot>, next_new: usize, out: &mut Vec<Vec<Slot>>) {
    if acc.len() == arity {
        if acc.iter().any(|s| matches!(s, Slot::Old(_))) {
            out.push(acc.clone());
        }
        return;
    }
    for i in 0..old {
        acc.push(Slot::Old(i));
        assign(arity, old, budget, acc, next_new, out);
        acc.pop();
    }
    for j in 0..(next_new + 1).min(budget) {
        acc.push(Slot::New(j));
        assign(arity, old, budget, acc, next_new.max(j + 1), out);
        acc.pop();
    }
}

/// Every variablization of every predicate except `exclude`, with at most
/// `budget` new variables and at least one old one. Negated candidates are
/// produced only for variablizations without new variables.
pub fn generate_candidates(kb: &FactStore, old_vars: usize, budget: usize, allow_negated: bool, exclude: &[&str]) -> Vec<Candidate> {
    let mut out = Vec::new();
    for p in kb.predicates() {
        if exclude.contains(&p.name()) {
            continue;
        }
        let mut patterns = Vec::new();
        assign(p.signature().arity(), old_vars, budget, &mut Vec::new(), 0, &mut patterns);
        for slots in patterns {
            let closed = slots.iter().all(|s| matches!(s, Slot::Old(_)));
            out.push(Candidate {
                predicate: p.name().to_string(),
                slots: slots.clone(),
                negated: false,
            });
            if allow_negated && closed {
                out.push(Candidate {
                    predicate: p.name().to_string(),
                    slots,
                    negated: true,
                });
            }
        }
    }
    out.sort();
    out
}

/// Drops candidates that violate slot typing or an inter-argument constraint.
/// `old_types[i]` is the type of old variable `i`.
pub fn filter_candidates(candidates: Vec<Candidate>, kb: &FactStore, old_types: &[String]) -> Vec<Candidate> {
    candidates
        .into_iter()
        .filter(|c| well_typed(c, kb, old_types) && permitted(c, kb))
        .collect()
}

/// Drops candidates that violate an inter-argument constraint only.
pub fn filter_constrained(candidates: Vec<Candidate>, kb: &FactStore) -> Vec<Candidate> {
    candidates.into_iter().filter(|c| permitted(c, kb)).collect()
}

fn well_typed(c: &Candidate, kb: &FactStore, old_types: &[String]) -> bool {
    let Some(sig) = kb.signature(&c.predicate) else {
        return false;
    };
    let new_types = c.new_var_types(kb);
    (0..c.slots.len()).all(|slot| sig.admits(slot, c.term_type(slot, old_types, &new_types)))
}

fn permitted(c: &Candidate, kb: &FactStore) -> bool {
    let names: Vec<String> = c
        .slots
        .iter()
        .map(|s| match s {
            Slot::Old(i) => format!("o{i}"),
            Slot::New(j) => format!("n{j}"),
        })
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    kb.constraints()
        .iter()
        .filter(|k| k.predicate == c.predicate)
        .all(|k| k.permits(&refs))
}

/// Distinct predicates among `candidates`.
pub fn predicates_of(candidates: &[Candidate]) -> BTreeSet<&str> {
    candidates.iter().map(|c| c.predicate.as_str()).collect()
}
