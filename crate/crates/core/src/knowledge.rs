//! Knowledge declaration files.
//!
//! A file is a list of `[section]` blocks; `#` starts a comment.
//!
//! ```text
//! [types]
//! price: ratio numeric
//! weekday: cyclic {Mon, Tue, Wed, Thu, Fri}
//!
//! [signatures]
//! Up: (price, price) localized
//! Greater_price: (price, price) greater
//!
//! [constraints]
//! Up: all_args_distinct
//! P: forbidden 0=1, 1=2
//!
//! [formulas]
//! Q(x: price, y: price, w: price) := y - x < w - y
//!
//! [facts]
//! Up(34, 38)
//!
//! [rules]
//! Rise(x, y) <- Up(x, y)
//!
//! [initial]
//! intensional: T(x, y, w, z) <- Q(x, y, w)
//!
//! [target]
//! UpDown
//!
//! [examples]
//! + UpDown(34, 38, 35)
//! - UpDown(38, 35, 35.5)
//!
//! [encode]
//! target = price
//! lags = 1, 2
//! thresholds.price = 60
//!
//! [grammar]
//! body = PriceUp_1, +VolumeUp_1, -PriceUp_2
//! heads = up, down, above 60
//! max_body = 2
//!
//! [hypotheses]
//! PriceNextUp(t) <- PriceUp_1(t)
//! ```
//!
//! Declarations that name encoded predicates (`hypotheses`, `grammar`) are
//! resolved against the store produced by encoding, so loading is two-phase:
//! [`Knowledge::parse`] checks structure, [`Knowledge::apply`] populates a store.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::encode::{EncodeConfig, HeadForm, ThresholdSpec};
use crate::error::{DataError, LogicError};
use crate::formula::Formula;
use crate::mmdr::grammar::{BodyPredicate, HypothesisGrammar, Polarity};
use crate::parse::{parse_clause, parse_literal, parse_rule};
use crate::store::{ConstraintKind, FactStore, InitialForm, InterArgConstraint, PredicateKind, TypedSignature};
use crate::syntax::{Rule, Term};
use crate::types::{DataType, Domain, ScaleKind};
use crate::value::Constant;

const SECTIONS: [&str; 12] = [
    "types",
    "signatures",
    "constraints",
    "formulas",
    "facts",
    "rules",
    "initial",
    "target",
    "examples",
    "encode",
    "grammar",
    "hypotheses",
];

fn perr(line: usize, msg: impl Into<String>) -> DataError {
    DataError::Parse { line, msg: msg.into() }
}

fn at_line(line: usize) -> impl Fn(LogicError) -> DataError {
    move |e| perr(line, e.to_string())
}

#[derive(Clone, Debug)]
struct SignatureDecl {
    line: usize,
    name: String,
    arg_types: Vec<String>,
    localized: bool,
    greater: bool,
}

#[derive(Clone, Debug)]
struct FormulaDecl {
    line: usize,
    name: String,
    arg_types: Vec<String>,
    formula: Formula,
}

/// A parsed knowledge declaration file.
#[derive(Clone, Debug, Default)]
pub struct Knowledge {
    types: Vec<(usize, DataType)>,
    signatures: Vec<SignatureDecl>,
    constraints: Vec<(usize, InterArgConstraint)>,
    formulas: Vec<FormulaDecl>,
    facts: Vec<(usize, String)>,
    rules: Vec<(usize, String)>,
    initial: Vec<(usize, InitialForm, String)>,
    target: Option<(usize, String)>,
    examples: Vec<(usize, bool, String)>,
    hypotheses: Vec<(usize, String)>,
    encode: Option<EncodeConfig>,
    grammar: Option<(usize, GrammarDecl)>,
}

#[derive(Clone, Debug, Default)]
struct GrammarDecl {
    body: Vec<BodyPredicate>,
    heads: Vec<HeadForm>,
    max_body: Option<usize>,
    max_existential: Option<usize>,
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',')
        .map(|s| s.trim().trim_matches('"').to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<f64>, DataError> {
    split_list(text)
        .iter()
        .map(|s| s.parse::<f64>().map_err(|_| perr(line, format!("`{s}` is not a number"))))
        .collect()
}

fn parse_usize(line: usize, text: &str) -> Result<usize, DataError> {
    text.trim()
        .parse()
        .map_err(|_| perr(line, format!("`{}` is not a non-negative integer", text.trim())))
}

fn parse_type(line: usize, text: &str) -> Result<DataType, DataError> {
    let (name, rest) = text
        .split_once(':')
        .ok_or_else(|| perr(line, "expected `name: scale domain`"))?;
    let name = name.trim();
    let rest = rest.trim();
    let (scale, domain) = rest
        .split_once(char::is_whitespace)
        .ok_or_else(|| perr(line, "expected a scale and a domain"))?;
    let scale: ScaleKind = scale.parse().map_err(at_line(line))?;
    let domain = domain.trim();
    let domain = match domain {
        "numeric" => Domain::Numeric,
        "dates" => Domain::Dates,
        "symbols" => Domain::Symbols,
        d if d.starts_with('{') && d.ends_with('}') => Domain::Enumerated(split_list(&d[1..d.len() - 1])),
        d => return Err(perr(line, format!("unknown domain `{d}`"))),
    };
    let ops = match domain {
        Domain::Numeric => vec!["+".to_string(), "-".to_string()],
        _ => Vec::new(),
    };
    DataType::new(name, scale, domain, Vec::new(), ops).map_err(at_line(line))
}

fn parse_signature(line: usize, text: &str) -> Result<SignatureDecl, DataError> {
    let (name, rest) = text
        .split_once(':')
        .ok_or_else(|| perr(line, "expected `Name: (type, ...)`"))?;
    let rest = rest.trim();
    let open = rest.strip_prefix('(').ok_or_else(|| perr(line, "expected `(`"))?;
    let (args, flags) = open.split_once(')').ok_or_else(|| perr(line, "expected `)`"))?;
    let mut decl = SignatureDecl {
        line,
        name: name.trim().to_string(),
        arg_types: split_list(args),
        localized: false,
        greater: false,
    };
    for flag in flags.split_whitespace() {
        match flag {
            "localized" => decl.localized = true,
            "greater" => decl.greater = true,
            f => return Err(perr(line, format!("unknown signature flag `{f}`"))),
        }
    }
    if decl.greater && (decl.arg_types.len() != 2 || decl.arg_types[0] != decl.arg_types[1]) {
        return Err(perr(line, "a `greater` predicate takes two slots of one type"));
    }
    Ok(decl)
}

fn parse_constraint(line: usize, text: &str) -> Result<InterArgConstraint, DataError> {
    let (name, rest) = text
        .split_once(':')
        .ok_or_else(|| perr(line, "expected `Name: kind`"))?;
    let rest = rest.trim();
    let kind = if rest == "all_args_distinct" || rest == "all_args_distinct_forbidden" {
        ConstraintKind::AllArgsDistinct
    } else if let Some(pats) = rest.strip_prefix("forbidden") {
        let pairs = split_list(pats)
            .iter()
            .map(|p| {
                let (i, j) = p
                    .split_once('=')
                    .ok_or_else(|| perr(line, format!("expected `i=j`, got `{p}`")))?;
                Ok((parse_usize(line, i)?, parse_usize(line, j)?))
            })
            .collect::<Result<Vec<_>, DataError>>()?;
        ConstraintKind::ForbiddenPatterns(pairs)
    } else {
        return Err(perr(line, format!("unknown constraint `{rest}`")));
    };
    Ok(InterArgConstraint {
        predicate: name.trim().to_string(),
        kind,
    })
}

fn parse_formula(line: usize, text: &str) -> Result<FormulaDecl, DataError> {
    let (head, body) = text
        .split_once(":=")
        .ok_or_else(|| perr(line, "expected `Name(x: type, ...) := expression`"))?;
    let head = head.trim();
    let open = head.find('(').ok_or_else(|| perr(line, "expected `(`"))?;
    let params = head[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| perr(line, "expected `)`"))?;
    let mut names = Vec::new();
    let mut types = Vec::new();
    for p in split_list(params) {
        let (n, t) = p
            .split_once(':')
            .ok_or_else(|| perr(line, format!("parameter `{p}` needs a type")))?;
        names.push(n.trim().to_string());
        types.push(t.trim().to_string());
    }
    let formula = Formula::parse(&names, body.trim()).map_err(at_line(line))?;
    Ok(FormulaDecl {
        line,
        name: head[..open].trim().to_string(),
        arg_types: types,
        formula,
    })
}

fn parse_head_form(line: usize, text: &str) -> Result<HeadForm, DataError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    match words.as_slice() {
        ["up"] => Ok(HeadForm::Up),
        ["down"] => Ok(HeadForm::Down),
        ["above", c] => Ok(HeadForm::Above(parse_numbers(line, c)?[0])),
        ["below", c] => Ok(HeadForm::Below(parse_numbers(line, c)?[0])),
        _ => Err(perr(line, format!("unknown head form `{text}`"))),
    }
}

fn parse_key_value(line: usize, text: &str) -> Result<(String, String), DataError> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| perr(line, "expected `key = value`"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn parse_bool(line: usize, text: &str) -> Result<bool, DataError> {
    match text {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        t => Err(perr(line, format!("`{t}` is not a boolean"))),
    }
}

impl Knowledge {
    pub fn parse(text: &str) -> Result<Knowledge, DataError> {
        let mut k = Knowledge::default();
        let mut section: Option<&str> = None;
        let mut encode: BTreeMap<String, (usize, String)> = BTreeMap::new();
        let mut grammar: Option<(usize, GrammarDecl)> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = strip_comment(raw).trim();
            if t.is_empty() {
                continue;
            }
            if let Some(name) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                section = Some(
                    SECTIONS
                        .iter()
                        .copied()
                        .find(|s| *s == name)
                        .ok_or_else(|| perr(line, format!("unknown section `{name}`")))?,
                );
                continue;
            }
            let Some(sec) = section else {
                return Err(perr(line, "declaration outside any section"));
            };
            match sec {
                "types" => k.types.push((line, parse_type(line, t)?)),
                "signatures" => k.signatures.push(parse_signature(line, t)?),
                "constraints" => k.constraints.push((line, parse_constraint(line, t)?)),
                "formulas" => k.formulas.push(parse_formula(line, t)?),
                "facts" => k.facts.push((line, t.to_string())),
                "rules" => k.rules.push((line, t.to_string())),
                "initial" => {
                    let (form, clause) = t
                        .split_once(':')
                        .filter(|(f, _)| !f.contains('('))
                        .ok_or_else(|| perr(line, "expected `intensional:` or `extensional_hint:`"))?;
                    let form = match form.trim() {
                        "intensional" => InitialForm::Intensional,
                        "extensional_hint" => InitialForm::ExtensionalHint,
                        f => return Err(perr(line, format!("unknown initial rule form `{f}`"))),
                    };
                    k.initial.push((line, form, clause.trim().to_string()));
                }
                "target" => {
                    if k.target.is_some() {
                        return Err(perr(line, "only one target may be declared"));
                    }
                    k.target = Some((line, t.to_string()));
                }
                "examples" => {
                    let (sign, lit) = t.split_at(1);
                    let positive = match sign {
                        "+" => true,
                        "-" => false,
                        _ => return Err(perr(line, "examples start with `+` or `-`")),
                    };
                    k.examples.push((line, positive, lit.trim().to_string()));
                }
                "hypotheses" => k.hypotheses.push((line, t.to_string())),
                "encode" => {
                    let (key, value) = parse_key_value(line, t)?;
                    encode.insert(key, (line, value));
                }
                "grammar" => {
                    let (key, value) = parse_key_value(line, t)?;
                    let g = &mut grammar.get_or_insert_with(|| (line, GrammarDecl::default())).1;
                    match key.as_str() {
                        "body" => {
                            for item in split_list(&value) {
                                let (polarity, name) = match item.chars().next() {
                                    Some('+') => (Polarity::Positive, &item[1..]),
                                    Some('-') => (Polarity::Negative, &item[1..]),
                                    _ => (Polarity::Both, item.as_str()),
                                };
                                g.body.push(BodyPredicate::new(name.trim(), polarity));
                            }
                        }
                        "heads" => {
                            for h in split_list(&value) {
                                g.heads.push(parse_head_form(line, &h)?);
                            }
                        }
                        "max_body" => g.max_body = Some(parse_usize(line, &value)?),
                        "max_existential" => g.max_existential = Some(parse_usize(line, &value)?),
                        other => return Err(perr(line, format!("unknown grammar key `{other}`"))),
                    }
                }
                _ => unreachable!("section list is closed"),
            }
        }
        if !encode.is_empty() {
            k.encode = Some(encode_config(&encode)?);
        }
        k.grammar = grammar;
        Ok(k)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Knowledge, DataError> {
        Knowledge::parse(&std::fs::read_to_string(path)?)
    }

    /// Adds every declaration except examples and hypotheses to `kb`.
    pub fn apply(&self, kb: &mut FactStore) -> Result<(), DataError> {
        for (line, t) in &self.types {
            kb.add_type(t.clone()).map_err(at_line(*line))?;
        }
        for s in &self.signatures {
            let sig = if s.localized {
                TypedSignature::localized(s.name.clone(), s.arg_types.clone())
            } else {
                Ok(TypedSignature::new(s.name.clone(), s.arg_types.clone()))
            }
            .map_err(at_line(s.line))?;
            if s.greater {
                kb.add_greater(&s.name, &s.arg_types[0]).map_err(at_line(s.line))?;
            } else {
                kb.declare(sig).map_err(at_line(s.line))?;
            }
        }
        for f in &self.formulas {
            kb.add_formula(&f.name, f.arg_types.clone(), f.formula.clone())
                .map_err(at_line(f.line))?;
        }
        for (line, c) in &self.constraints {
            kb.add_constraint(c.clone()).map_err(at_line(*line))?;
        }
        for (line, text) in &self.facts {
            let lit = parse_literal(text, kb).map_err(at_line(*line))?;
            if lit.negated {
                return Err(perr(*line, "facts cannot be negated"));
            }
            let args = ground_args(&lit.args).ok_or_else(|| perr(*line, "facts must be ground"))?;
            kb.add_fact(&lit.predicate, args).map_err(at_line(*line))?;
        }
        for (line, text) in &self.rules {
            let clause = parse_clause(text, kb).map_err(at_line(*line))?;
            kb.add_clause(clause).map_err(at_line(*line))?;
        }
        for (line, form, text) in &self.initial {
            let rule = parse_rule(text, kb).map_err(at_line(*line))?;
            register_initial_rule(kb, rule, *form).map_err(|e| perr(*line, e.to_string()))?;
        }
        Ok(())
    }

    /// Builds a fresh store from the declarations.
    pub fn build_store(&self) -> Result<FactStore, DataError> {
        let mut kb = FactStore::new();
        self.apply(&mut kb)?;
        Ok(kb)
    }

    pub fn target(&self) -> Option<&str> {
        self.target.as_ref().map(|(_, t)| t.as_str())
    }

    /// Positive and negative example tuples, checked against `kb`.
    pub fn examples(&self, kb: &FactStore) -> Result<(Vec<Vec<Constant>>, Vec<Vec<Constant>>), DataError> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (line, positive, text) in &self.examples {
            let lit = parse_literal(text, kb).map_err(at_line(*line))?;
            if let Some(target) = self.target() {
                if lit.predicate != target {
                    return Err(perr(*line, format!("example is not over target `{target}`")));
                }
            }
            let args = ground_args(&lit.args).ok_or_else(|| perr(*line, "examples must be ground"))?;
            if *positive {
                pos.push(args);
            } else {
                neg.push(args);
            }
        }
        Ok((pos, neg))
    }

    /// Explicit hypotheses, resolved against `kb`.
    pub fn hypotheses(&self, kb: &FactStore) -> Result<Vec<Rule>, DataError> {
        self.hypotheses
            .iter()
            .map(|(line, text)| {
                parse_clause(text, kb)
                    .map(Rule::single)
                    .map_err(at_line(*line))
            })
            .collect()
    }

    pub fn has_hypotheses(&self) -> bool {
        !self.hypotheses.is_empty()
    }

    pub fn encode_config(&self) -> Option<&EncodeConfig> {
        self.encode.as_ref()
    }

    /// The declared grammar over `target`, if any, with unset limits defaulted.
    pub fn grammar(&self, target: &str) -> Option<HypothesisGrammar> {
        self.grammar.as_ref().map(|(_, g)| {
            let mut grammar = HypothesisGrammar::new(target, g.body.clone(), g.heads.clone());
            if let Some(m) = g.max_body {
                grammar.max_body_literals = m;
            }
            if let Some(m) = g.max_existential {
                grammar.max_existential_vars = m;
            }
            grammar
        })
    }
}

fn ground_args(args: &[Term]) -> Option<Vec<Constant>> {
    args.iter().map(|a| a.as_const().cloned()).collect()
}

fn encode_config(entries: &BTreeMap<String, (usize, String)>) -> Result<EncodeConfig, DataError> {
    let (_, target) = entries
        .get("target")
        .ok_or_else(|| perr(0, "[encode] needs a `target`"))?;
    let mut cfg = EncodeConfig::new(target.to_lowercase());
    for (key, (line, value)) in entries {
        let line = *line;
        match key.as_str() {
            "target" => {}
            "attributes" => cfg.attributes = Some(split_list(value).iter().map(|s| s.to_lowercase()).collect()),
            "lags" => {
                cfg.lags = split_list(value)
                    .iter()
                    .map(|s| parse_usize(line, s))
                    .collect::<Result<_, _>>()?
            }
            "weekdays" => cfg.weekdays = parse_bool(line, value)?,
            "heads" => cfg.head_thresholds = parse_numbers(line, value)?,
            k => {
                if let Some(attr) = k.strip_prefix("thresholds.") {
                    cfg.thresholds
                        .insert(attr.to_lowercase(), ThresholdSpec::Cuts(parse_numbers(line, value)?));
                } else if let Some(attr) = k.strip_prefix("quantiles.") {
                    cfg.thresholds
                        .insert(attr.to_lowercase(), ThresholdSpec::Quantiles(parse_numbers(line, value)?));
                } else {
                    return Err(perr(line, format!("unknown encode key `{k}`")));
                }
            }
        }
    }
    Ok(cfg)
}

/// Registers `rule` as a refinement seed or catalogue entry.
pub fn register_initial_rule(kb: &mut FactStore, rule: Rule, form: InitialForm) -> Result<(), DataError> {
    kb.register_initial_rule(rule, form)
        .map_err(|e| DataError::SignatureMismatch(e.to_string()))
}

/// Human-readable summary of a store.
pub fn describe(kb: &FactStore) -> String {
    let mut out = String::new();
    out.push_str("types:\n");
    for t in kb.types() {
        let domain = match t.domain() {
            Domain::Enumerated(items) => format!("{{{}}}", items.join(", ")),
            Domain::Numeric => "numeric".into(),
            Domain::Dates => "dates".into(),
            Domain::Symbols => "symbols".into(),
        };
        let count = kb.constants_of_type(t.name()).len();
        let _ = writeln!(out, "  {}: {} {} ({} constants)", t.name(), t.scale(), domain, count);
    }
    out.push_str("predicates:\n");
    for p in kb.predicates() {
        let sig = p.signature();
        let kind = match p.kind() {
            PredicateKind::Extensional => format!("{} tuples", p.tuple_count()),
            PredicateKind::Intensional => format!("{} clauses", p.clauses().len()),
            PredicateKind::Mixed => format!("{} tuples, {} clauses", p.tuple_count(), p.clauses().len()),
            PredicateKind::Builtin => "computed".into(),
        };
        let loc = if sig.is_localized() { " localized" } else { "" };
        let _ = writeln!(out, "  {}({}){}: {}", p.name(), sig.arg_types().join(", "), loc, kind);
    }
    if !kb.constraints().is_empty() {
        out.push_str("constraints:\n");
        for c in kb.constraints() {
            let kind = match &c.kind {
                ConstraintKind::AllArgsDistinct => "all_args_distinct".to_string(),
                ConstraintKind::ForbiddenPatterns(p) => format!(
                    "forbidden {}",
                    p.iter().map(|(i, j)| format!("{i}={j}")).collect::<Vec<_>>().join(", ")
                ),
            };
            let _ = writeln!(out, "  {}: {}", c.predicate, kind);
        }
    }
    let defined: Vec<_> = kb.predicates().filter(|p| p.has_clauses()).collect();
    if !defined.is_empty() {
        out.push_str("rules:\n");
        for p in defined {
            for c in p.clauses() {
                let _ = writeln!(out, "  {c}");
            }
        }
    }
    if !kb.initial_rules().is_empty() {
        out.push_str("initial rules:\n");
        for r in kb.initial_rules() {
            let form = match r.form {
                InitialForm::Intensional => "intensional",
                InitialForm::ExtensionalHint => "extensional_hint",
            };
            for c in r.rule.clauses() {
                let _ = writeln!(out, "  {form}: {c}");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::Evaluator;
    use crate::syntax::Literal;

    const TREND: &str = "
[types]
price: ratio numeric
date: interval dates

[signatures]
Monday: (date) localized
Up: (price, price, price, price)

[formulas]
Q(x: price, y: price, w: price) := y - x < w - y

[initial]
intensional: Up(x, y, w, z) <- Q(x, y, w)

[target]
Up

[examples]
+ Up(34.0, 35.1, 36.2, 37.4)
- Up(33.2, 32.1, 33.7, 31.6)
";

    #[test]
    fn formula_predicate_on_first_example() {
        let k = Knowledge::parse(TREND).unwrap();
        let kb = k.build_store().unwrap();
        let (pos, neg) = k.examples(&kb).unwrap();
        assert_eq!((pos.len(), neg.len()), (1, 1));
        let mut ev = Evaluator::new(&kb);
        let q = |args: &[Constant]| Literal::new("Q", args.iter().cloned().map(Term::Const).collect());
        // 35.1 - 34.0 < 36.2 - 35.1 compares 1.1 with 1.1.
        assert!(!ev.evaluate_literal(&q(&pos[0][..3]), &Default::default()).unwrap());
        assert!(ev.evaluate_literal(&q(&neg[0][..3]), &Default::default()).unwrap());
        assert_eq!(kb.initial_rules().len(), 1);
    }

    #[test]
    fn untyped_initial_rule_is_rejected() {
        let mut kb = Knowledge::parse(TREND).unwrap().build_store().unwrap();
        let bogus = parse_rule("Up(x, y, w, z) <- Q(x, y, w)", &kb).unwrap();
        kb.declare(TypedSignature::new("Lone", vec!["price".into()])).unwrap();
        let lone = Literal::new("Missing", vec![Term::var("x", "price")]);
        let clause = bogus.clauses()[0].with_body(vec![lone]).unwrap();
        assert!(matches!(
            register_initial_rule(&mut kb, Rule::single(clause), InitialForm::Intensional),
            Err(DataError::SignatureMismatch(_))
        ));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "[types]\nprice: ratio numeric\n[facts]\nNope(1)\n";
        let k = Knowledge::parse(text).unwrap();
        assert!(matches!(k.build_store(), Err(DataError::Parse { line: 4, .. })));
        assert!(matches!(Knowledge::parse("[bogus]\n"), Err(DataError::Parse { line: 1, .. })));
        assert!(matches!(Knowledge::parse("x: y\n"), Err(DataError::Parse { line: 1, .. })));
    }

    #[test]
    fn constraints_and_greater() {
        let text = "
[types]
price: ratio numeric
date: interval dates
[signatures]
Greater_dates: (date, date) greater
P: (price, price, price)
[constraints]
P: forbidden 0=1, 1=2
Greater_dates: all_args_distinct_forbidden
";
        let kb = Knowledge::parse(text).unwrap().build_store().unwrap();
        assert_eq!(kb.constraints().len(), 2);
        assert_eq!(kb.predicate("Greater_dates").unwrap().kind(), PredicateKind::Builtin);
        let summary = describe(&kb);
        assert!(summary.contains("P: forbidden 0=1, 1=2"));
    }

    #[test]
    fn encode_and_grammar_sections() {
        let text = "
[encode]
target = Price
lags = 1, 2
thresholds.price = 60
quantiles.volume = 0.5
weekdays = false
[grammar]
body = PriceUp_1, +VolumeUp_1, -PriceUp_2
heads = up, below 60
max_body = 2
";
        let k = Knowledge::parse(text).unwrap();
        let cfg = k.encode_config().unwrap();
        assert_eq!(cfg.target, "price");
        assert_eq!(cfg.lags, vec![1, 2]);
        assert!(!cfg.weekdays);
        assert_eq!(cfg.thresholds["volume"], ThresholdSpec::Quantiles(vec![0.5]));
        let g = k.grammar("price").unwrap();
        assert_eq!(g.max_body_literals, 2);
        assert_eq!(g.head_forms, vec![HeadForm::Up, HeadForm::Below(60.0)]);
        assert_eq!(g.body_predicates[1].polarity, Polarity::Positive);
        assert_eq!(g.body_predicates[2].polarity, Polarity::Negative);
    }
}
