//! Hypothesis grammar and complexity-ordered enumeration.

use std::collections::BTreeMap;

use crate::encode::{EncodedDataset, HeadForm, DATE_TYPE};
use crate::error::MmdrError;
use crate::store::FactStore;
use crate::syntax::{HornClause, Literal, Rule, Term};

/// Which signs of a body predicate may appear.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
    Both,
}

impl Polarity {
    fn signs(self) -> &'static [bool] {
        match self {
            Polarity::Positive => &[false],
            Polarity::Negative => &[true],
            Polarity::Both => &[false, true],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BodyPredicate {
    pub name: String,
    pub polarity: Polarity,
}

impl BodyPredicate {
    pub fn new(name: impl Into<String>, polarity: Polarity) -> Self {
        BodyPredicate {
            name: name.into(),
            polarity,
        }
    }
}

/// The space of rules `Head(t) <- L1 & ... & Lk` over a date variable `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisGrammar {
    /// Attribute whose next-day value the heads describe.
    pub target: String,
    pub body_predicates: Vec<BodyPredicate>,
    pub head_forms: Vec<HeadForm>,
    pub max_body_literals: usize,
    pub max_existential_vars: usize,
}

impl HypothesisGrammar {
    pub fn new(target: impl Into<String>, body_predicates: Vec<BodyPredicate>, head_forms: Vec<HeadForm>) -> Self {
        HypothesisGrammar {
            target: target.into(),
            body_predicates,
            head_forms,
            max_body_literals: 3,
            max_existential_vars: 0,
        }
    }

    /// Lagged comparisons and thresholds of `data`, both polarities, with
    /// sign heads and at most three body literals.
    pub fn default_for(data: &EncodedDataset) -> Self {
        let body = data
            .derived_predicates()
            .map(|(name, _)| name)
            .filter(|name| is_default_body(name))
            .map(|name| BodyPredicate::new(name.clone(), Polarity::Both))
            .collect();
        HypothesisGrammar::new(data.target.clone(), body, vec![HeadForm::Up, HeadForm::Down])
    }

    /// Every body predicate is declared and every head predicate is declared over a date.
    pub fn validate(&self, kb: &FactStore) -> Result<(), MmdrError> {
        if self.max_body_literals == 0 {
            return Err(MmdrError::InvalidConfig("max_body_literals must be at least 1".into()));
        }
        for b in &self.body_predicates {
            if kb.signature(&b.name).is_none() {
                return Err(MmdrError::InvalidConfig(format!("body predicate `{}` has no signature", b.name)));
            }
        }
        for h in &self.head_forms {
            let name = h.predicate(&self.target);
            match kb.signature(&name) {
                Some(sig) if sig.arg_types() == [DATE_TYPE.to_string()] => {}
                _ => return Err(MmdrError::NotATargetForm(name)),
            }
        }
        Ok(())
    }
}

fn is_default_body(name: &str) -> bool {
    let Some((stem, suffix)) = name.rsplit_once('_') else {
        return false;
    };
    let lag = stem.ends_with("Up") && suffix.parse::<usize>().is_ok();
    let threshold = stem.ends_with("Above") || stem.ends_with("Below");
    (lag || threshold) && !stem.contains("Next")
}

/// One enumerated rule with its complexity.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypothesis {
    pub rule: Rule,
    pub complexity: usize,
}

/// Body literal count plus distinct variable count, summed over clauses.
pub fn complexity(rule: &Rule) -> usize {
    rule.clauses()
        .iter()
        .map(|c| c.body().len() + c.variables().len())
        .sum()
}

#[derive(Clone, Debug)]
struct Atom {
    predicate: String,
    /// `None` is the head variable `t`, `Some(k)` the existential `ek`.
    slots: Vec<Option<usize>>,
    types: Vec<String>,
    negated: bool,
}

fn slot_assignments(types: &[String], max_ex: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![Vec::new()];
    for ty in types {
        let mut next = Vec::new();
        for partial in &out {
            if ty == DATE_TYPE {
                let mut p: Vec<Option<usize>> = partial.clone();
                p.push(None);
                next.push(p);
            }
            for k in 0..max_ex {
                let mut p = partial.clone();
                p.push(Some(k));
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn atoms(grammar: &HypothesisGrammar, kb: &FactStore) -> Vec<Atom> {
    let mut preds: Vec<&BodyPredicate> = grammar.body_predicates.iter().collect();
    preds.sort_by(|a, b| a.name.cmp(&b.name));
    preds.dedup_by(|a, b| a.name == b.name);
    let mut out = Vec::new();
    for p in preds {
        let Some(sig) = kb.signature(&p.name) else {
            continue;
        };
        let types = sig.arg_types().to_vec();
        for slots in slot_assignments(&types, grammar.max_existential_vars) {
            for &negated in p.polarity.signs() {
                out.push(Atom {
                    predicate: p.name.clone(),
                    slots: slots.clone(),
                    types: types.clone(),
                    negated,
                });
            }
        }
    }
    out
}

/// Whether `body` is a canonical, well-typed, satisfiable-looking conjunction.
fn admissible(body: &[&Atom], max_ex: usize) -> bool {
    let mut mentions_t = false;
    let mut next_ex = 0;
    let mut ex_types: BTreeMap<usize, &str> = BTreeMap::new();
    for atom in body {
        for (slot, ty) in atom.slots.iter().zip(&atom.types) {
            match slot {
                None => mentions_t = true,
                Some(k) => {
                    if *k > next_ex {
                        return false;
                    }
                    if *k == next_ex {
                        next_ex += 1;
                    }
                    if let Some(prev) = ex_types.insert(*k, ty) {
                        if prev != ty {
                            return false;
                        }
                    }
                }
            }
        }
    }
    for (i, a) in body.iter().enumerate() {
        for b in &body[i + 1..] {
            if a.predicate == b.predicate && a.slots == b.slots && a.negated != b.negated {
                return false;
            }
        }
    }
    mentions_t && next_ex <= max_ex
}

fn term(slot: Option<usize>, ty: &str) -> Term {
    match slot {
        None => Term::var("t", DATE_TYPE),
        Some(k) => Term::var(format!("e{k}"), ty),
    }
}

fn combinations(n: usize, max: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if !current.is_empty() {
        out.push(current.clone());
    }
    if current.len() == max {
        return;
    }
    for i in start..n {
        current.push(i);
        combinations(n, max, i + 1, current, out);
        current.pop();
    }
}

/// All hypotheses of the grammar, simplest first. Within one complexity the
/// order is by body (atom order, lexicographic) and then by head form.
pub fn enumerate_hypotheses(grammar: &HypothesisGrammar, kb: &FactStore) -> Result<Vec<Hypothesis>, MmdrError> {
    grammar.validate(kb)?;
    let atoms = atoms(grammar, kb);
    let mut bodies = Vec::new();
    combinations(atoms.len(), grammar.max_body_literals, 0, &mut Vec::new(), &mut bodies);
    let mut keyed = Vec::new();
    for body in bodies {
        let chosen: Vec<&Atom> = body.iter().map(|&i| &atoms[i]).collect();
        if !admissible(&chosen, grammar.max_existential_vars) {
            continue;
        }
        let literals: Vec<Literal> = chosen
            .iter()
            .map(|a| {
                let args = a.slots.iter().zip(&a.types).map(|(s, ty)| term(*s, ty)).collect();
                let lit = Literal::new(a.predicate.clone(), args);
                if a.negated {
                    lit.negate()
                } else {
                    lit
                }
            })
            .collect();
        for (h, form) in grammar.head_forms.iter().enumerate() {
            let head = Literal::new(form.predicate(&grammar.target), vec![Term::var("t", DATE_TYPE)]);
            let clause = HornClause::new(head, literals.clone()).map_err(MmdrError::Logic)?;
            let rule = Rule::single(clause);
            let c = complexity(&rule);
            keyed.push(((c, body.clone(), h), Hypothesis { rule, complexity: c }));
        }
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, h)| h).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::TypedSignature;
    use crate::types::DataType;

    fn kb_with(preds: &[&str]) -> FactStore {
        let mut kb = FactStore::new();
        kb.add_type(DataType::dates(DATE_TYPE)).unwrap();
        for p in preds.iter().chain(&["PriceNextUp", "PriceNextDown"]) {
            kb.declare(TypedSignature::new(*p, vec![DATE_TYPE.into()])).unwrap();
        }
        kb
    }

    #[test]
    fn two_unary_predicates_one_head() {
        let kb = kb_with(&["A", "B"]);
        let mut g = HypothesisGrammar::new(
            "price",
            vec![BodyPredicate::new("A", Polarity::Positive), BodyPredicate::new("B", Polarity::Positive)],
            vec![HeadForm::Up],
        );
        g.max_body_literals = 1;
        let hs = enumerate_hypotheses(&g, &kb).unwrap();
        let texts: Vec<String> = hs.iter().map(|h| h.rule.to_string()).collect();
        assert_eq!(texts, vec!["PriceNextUp(t) <- A(t)", "PriceNextUp(t) <- B(t)"]);
        assert!(hs.iter().all(|h| h.complexity == 2));
    }

    #[test]
    fn empty_grammar_is_empty() {
        let kb = kb_with(&[]);
        let g = HypothesisGrammar::new("price", vec![], vec![HeadForm::Up]);
        assert!(enumerate_hypotheses(&g, &kb).unwrap().is_empty());
    }

    #[test]
    fn six_predicates_both_signs() {
        let names = ["A", "B", "C", "D", "E", "F"];
        let kb = kb_with(&names);
        let body = names.iter().map(|n| BodyPredicate::new(*n, Polarity::Both)).collect();
        let g = HypothesisGrammar::new("price", body, vec![HeadForm::Up, HeadForm::Down]);
        let hs = enumerate_hypotheses(&g, &kb).unwrap();
        // 12 + (66 - 6) + (220 - 60) bodies, each with two heads.
        assert_eq!(hs.len(), 2 * (12 + 60 + 160));
        assert!(hs.windows(2).all(|w| w[0].complexity <= w[1].complexity));
    }

    #[test]
    fn existentials_are_canonical() {
        let mut kb = kb_with(&["A"]);
        kb.declare(TypedSignature::new("Prev", vec![DATE_TYPE.into(), DATE_TYPE.into()])).unwrap();
        let mut g = HypothesisGrammar::new(
            "price",
            vec![BodyPredicate::new("A", Polarity::Positive), BodyPredicate::new("Prev", Polarity::Positive)],
            vec![HeadForm::Up],
        );
        g.max_body_literals = 2;
        g.max_existential_vars = 1;
        let hs = enumerate_hypotheses(&g, &kb).unwrap();
        let texts: Vec<String> = hs.iter().map(|h| h.rule.to_string()).collect();
        assert!(texts.contains(&"PriceNextUp(t) <- A(e0) & Prev(t, e0)".to_string()));
        assert!(!texts.iter().any(|t| t.contains("e1")));
        assert!(!texts.contains(&"PriceNextUp(t) <- A(e0)".to_string()));
    }

    #[test]
    fn unknown_body_predicate_is_rejected() {
        let kb = kb_with(&[]);
        let g = HypothesisGrammar::new("price", vec![BodyPredicate::new("Nope", Polarity::Both)], vec![HeadForm::Up]);
        assert!(matches!(enumerate_hypotheses(&g, &kb), Err(MmdrError::InvalidConfig(_))));
    }
}
