//! Clause text: `Head(x, y) <- A(x, w) & !B(w, y)`.
//!
//! Lowercase identifiers are variables; their types come from the slots they
//! fill, or from an explicit `name: type` annotation. Constants are numbers,
//! ISO dates, quoted strings or capitalized identifiers, typed by their slot.
//! The body `true` denotes the empty conjunction.

use std::collections::BTreeMap;

use chrono::NaiveDate;

use crate::error::LogicError;
use crate::store::FactStore;
use crate::syntax::{HornClause, Literal, Rule, Term, Variable};
use crate::types::ANY_TYPE;
use crate::value::{Constant, Value};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Date(NaiveDate),
    Str(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Amp,
    Bang,
    LArrow,
    RArrow,
}

fn err(col: usize, msg: impl Into<String>) -> LogicError {
    LogicError::Parse { col, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, LogicError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((col, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((col, Tok::RParen));
                i += 1;
            }
            ',' => {
                out.push((col, Tok::Comma));
                i += 1;
            }
            ':' => {
                out.push((col, Tok::Colon));
                i += 1;
            }
            '&' => {
                out.push((col, Tok::Amp));
                i += 1;
            }
            '!' | '¬' => {
                out.push((col, Tok::Bang));
                i += 1;
            }
            '<' if chars.get(i + 1) == Some(&'-') => {
                out.push((col, Tok::LArrow));
                i += 2;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((col, Tok::RArrow));
                i += 2;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(err(col, "unterminated string")),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            let next = chars.get(i + 1).ok_or_else(|| err(i + 1, "dangling escape"))?;
                            s.push(*next);
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                out.push((col, Tok::Str(s)));
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let start = i;
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '.' | '-' | '+')) {
                    // Stop before `->` so `3->` is not swallowed.
                    if chars[i] == '-' && chars.get(i + 1) == Some(&'>') {
                        break;
                    }
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if let Ok(d) = NaiveDate::parse_from_str(&word, "%Y-%m-%d") {
                    out.push((col, Tok::Date(d)));
                } else if let Ok(v) = word.parse::<f64>() {
                    if !v.is_finite() {
                        return Err(err(col, format!("non-finite number `{word}`")));
                    }
                    out.push((col, Tok::Num(v)));
                } else {
                    return Err(err(col, format!("malformed constant `{word}`")));
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '$') {
                    i += 1;
                }
                out.push((col, Tok::Ident(chars[start..i].iter().collect())));
            }
            other => return Err(err(col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

/// An argument before types are resolved.
#[derive(Clone, Debug)]
enum RawArg {
    Var { name: String, ann: Option<String>, col: usize },
    Const { value: Value, col: usize },
}

#[derive(Clone, Debug)]
struct RawLit {
    predicate: String,
    args: Vec<RawArg>,
    negated: bool,
    col: usize,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(self.end_col)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), LogicError> {
        let col = self.col();
        match self.next() {
            Some((_, t)) if t == want => Ok(()),
            _ => Err(err(col, format!("expected {what}"))),
        }
    }

    fn literal(&mut self) -> Result<RawLit, LogicError> {
        let col = self.col();
        let mut negated = false;
        while self.peek() == Some(&Tok::Bang) {
            self.pos += 1;
            negated = !negated;
        }
        let predicate = match self.next() {
            Some((_, Tok::Ident(name))) => name,
            _ => return Err(err(col, "expected a predicate name")),
        };
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if self.peek() != Some(&Tok::RParen) {
            loop {
                args.push(self.arg()?);
                match self.peek() {
                    Some(Tok::Comma) => self.pos += 1,
                    _ => break,
                }
            }
        }
        self.expect(Tok::RParen, "`)` or `,`")?;
        Ok(RawLit {
            predicate,
            args,
            negated,
            col,
        })
    }

    fn arg(&mut self) -> Result<RawArg, LogicError> {
        let col = self.col();
        match self.next() {
            Some((_, Tok::Ident(name))) => {
                let first = name.chars().next().expect("non-empty identifier");
                if first.is_uppercase() {
                    return Ok(RawArg::Const {
                        value: Value::Sym(name),
                        col,
                    });
                }
                let ann = if self.peek() == Some(&Tok::Colon) {
                    self.pos += 1;
                    match self.next() {
                        Some((_, Tok::Ident(t))) => Some(t),
                        _ => return Err(err(self.col(), "expected a type name after `:`")),
                    }
                } else {
                    None
                };
                Ok(RawArg::Var { name, ann, col })
            }
            Some((_, Tok::Num(v))) => Ok(RawArg::Const { value: Value::num(v), col }),
            Some((_, Tok::Date(d))) => Ok(RawArg::Const { value: Value::Date(d), col }),
            Some((_, Tok::Str(s))) => Ok(RawArg::Const { value: Value::Sym(s), col }),
            _ => Err(err(col, "expected a variable or constant")),
        }
    }

    fn body(&mut self) -> Result<Vec<RawLit>, LogicError> {
        if let Some(Tok::Ident(w)) = self.peek() {
            if w == "true" {
                self.pos += 1;
                return Ok(Vec::new());
            }
        }
        let mut lits = vec![self.literal()?];
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            lits.push(self.literal()?);
        }
        Ok(lits)
    }
}

fn parse_raw(text: &str) -> Result<(RawLit, Vec<RawLit>), LogicError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: text.chars().count() + 1,
    };
    // Either `Head <- Body` or `Body -> Head`.
    let save = p.pos;
    let first = p.body()?;
    let (head, body) = match p.peek() {
        Some(Tok::LArrow) if first.len() == 1 => {
            p.pos += 1;
            (first.into_iter().next().expect("one literal"), p.body()?)
        }
        Some(Tok::RArrow) => {
            p.pos += 1;
            (p.literal()?, first)
        }
        _ => {
            p.pos = save;
            return Err(err(p.col(), "expected `Head(...) <- Body` or `Body -> Head(...)`"));
        }
    };
    if p.pos < p.toks.len() {
        return Err(err(p.col(), "unexpected trailing input"));
    }
    Ok((head, body))
}

/// Resolves variable and constant types against the store's signatures.
fn resolve(head: RawLit, body: Vec<RawLit>, kb: &FactStore) -> Result<HornClause, LogicError> {
    let mut var_types: BTreeMap<String, String> = BTreeMap::new();
    let all: Vec<&RawLit> = std::iter::once(&head).chain(&body).collect();
    for lit in &all {
        let sig = kb
            .signature(&lit.predicate)
            .ok_or_else(|| LogicError::UnknownPredicate(lit.predicate.clone()))?;
        if sig.arity() != lit.args.len() {
            return Err(LogicError::Arity {
                name: lit.predicate.clone(),
                expected: sig.arity(),
                got: lit.args.len(),
            });
        }
        for (slot, a) in lit.args.iter().enumerate() {
            if let RawArg::Var { name, ann, col } = a {
                let slot_ty = &sig.arg_types()[slot];
                let ty = match ann {
                    Some(t) => Some(t.clone()),
                    None if slot_ty != ANY_TYPE => Some(slot_ty.clone()),
                    None => None,
                };
                if let Some(ty) = ty {
                    match var_types.get(name) {
                        Some(prev) if *prev != ty => {
                            return Err(err(
                                *col,
                                format!("variable `{name}` used with types {prev} and {ty}"),
                            ))
                        }
                        _ => {
                            var_types.insert(name.clone(), ty);
                        }
                    }
                }
            }
        }
    }
    let build = |lit: &RawLit| -> Result<Literal, LogicError> {
        let sig = kb.signature(&lit.predicate).expect("checked above");
        let mut args = Vec::with_capacity(lit.args.len());
        for (slot, a) in lit.args.iter().enumerate() {
            args.push(match a {
                RawArg::Var { name, col, .. } => {
                    let ty = var_types
                        .get(name)
                        .ok_or_else(|| err(*col, format!("cannot infer the type of variable `{name}`")))?;
                    Term::Var(Variable::new(name.clone(), ty.clone()))
                }
                RawArg::Const { value, col } => {
                    let ty = &sig.arg_types()[slot];
                    if ty == ANY_TYPE {
                        return Err(err(*col, format!("cannot infer the type of constant {value}")));
                    }
                    Term::Const(Constant::new(value.clone(), ty.clone()))
                }
            });
        }
        Ok(Literal {
            predicate: lit.predicate.clone(),
            args,
            negated: lit.negated,
        })
    };
    if head.negated {
        return Err(err(head.col, "clause head must be positive"));
    }
    let h = build(&head)?;
    let b = body.iter().map(build).collect::<Result<Vec<_>, _>>()?;
    HornClause::new(h, b)
}

/// Parses one clause, typing its terms against `kb`'s signatures.
pub fn parse_clause(text: &str, kb: &FactStore) -> Result<HornClause, LogicError> {
    let (head, body) = parse_raw(text)?;
    resolve(head, body, kb)
}

/// Parses a rule written one clause per line; blank lines and `#` comments are skipped.
pub fn parse_rule(text: &str, kb: &FactStore) -> Result<Rule, LogicError> {
    let clauses = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_clause(l, kb))
        .collect::<Result<Vec<_>, _>>()?;
    Rule::new(clauses)
}

/// Parses a literal such as `!Down(y, z)` against `kb`'s signatures.
pub fn parse_literal(text: &str, kb: &FactStore) -> Result<Literal, LogicError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: text.chars().count() + 1,
    };
    let raw = p.literal()?;
    if p.pos < p.toks.len() {
        return Err(err(p.col(), "unexpected trailing input"));
    }
    let negated = raw.negated;
    let head = RawLit { negated: false, ..raw };
    let clause = resolve(head, Vec::new(), kb)?;
    let mut lit = clause.head().clone();
    lit.negated = negated;
    Ok(lit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::TypedSignature;
    use crate::types::{DataType, ScaleKind};
    use proptest::prelude::*;

    fn kb() -> FactStore {
        let mut kb = FactStore::new();
        kb.add_type(DataType::numeric("price", ScaleKind::Ratio)).unwrap();
        kb.add_type(DataType::dates("date")).unwrap();
        kb.add_type(DataType::symbols("person")).unwrap();
        for (name, types) in [
            ("Up", vec!["price", "price"]),
            ("Down", vec!["price", "price"]),
            ("UpDown", vec!["price", "price", "price"]),
            ("Seen", vec!["date"]),
            ("Colleague_Of", vec!["person", "person"]),
            ("Cardholder", vec!["person"]),
            ("Same", vec!["any", "any"]),
        ] {
            kb.declare(TypedSignature::new(name, types.into_iter().map(String::from).collect()))
                .unwrap();
        }
        kb
    }

    #[test]
    fn parses_and_prints_canonically() {
        let kb = kb();
        let text = "UpDown(x, y, z) <- Up(x, y) & !Down(y, z)";
        let c = parse_clause(text, &kb).unwrap();
        assert_eq!(c.to_string(), text);
        assert_eq!(c.body()[0].args[0].dtype(), "price");
    }

    #[test]
    fn reverse_arrow_and_constants() {
        let kb = kb();
        let c = parse_clause("Colleague_Of(p, c) & Cardholder(p) -> Cardholder(c)", &kb).unwrap();
        assert_eq!(c.to_string(), "Cardholder(c) <- Colleague_Of(p, c) & Cardholder(p)");
        let c = parse_clause("Cardholder(\"Diana Right\") <- true", &kb).unwrap();
        assert_eq!(c.to_string(), "Cardholder(\"Diana Right\") <- true");
        let c = parse_clause("Up(x, 60) <- Seen(1999-01-04)", &kb).unwrap();
        assert_eq!(c.to_string(), "Up(x, 60) <- Seen(1999-01-04)");
    }

    #[test]
    fn any_slots_need_annotation() {
        let kb = kb();
        assert!(parse_clause("Cardholder(p) <- Same(p, q)", &kb).is_err());
        let c = parse_clause("Cardholder(p) <- Same(p, q: person)", &kb).unwrap();
        assert_eq!(c.body()[0].args[1].dtype(), "person");
    }

    #[test]
    fn errors_are_located() {
        let kb = kb();
        assert!(matches!(
            parse_clause("Up(x, y) <- Sideways(x)", &kb),
            Err(LogicError::UnknownPredicate(_))
        ));
        assert!(matches!(parse_clause("Up(x) <- true", &kb), Err(LogicError::Arity { .. })));
        assert!(matches!(
            parse_clause("Up(x, y) <- Up(x, y) &", &kb),
            Err(LogicError::Parse { .. })
        ));
        assert!(matches!(
            parse_clause("Up(x, y) <- Seen(x)", &kb),
            Err(LogicError::Parse { col: 18, .. })
        ));
        assert!(parse_clause("!Up(x, y) <- true", &kb).is_err());
    }

    #[test]
    fn multi_clause_rule() {
        let kb = kb();
        let r = parse_rule("# two ways\nUp(x, y) <- Down(y, x)\n\nUp(x, y) <- Up(y, x)\n", &kb).unwrap();
        assert_eq!(r.clauses().len(), 2);
        assert_eq!(r.to_string(), "Up(x, y) <- Down(y, x)\nUp(x, y) <- Up(y, x)");
    }

    fn arb_clause() -> impl Strategy<Value = String> {
        let var = prop::sample::select(vec!["x", "y", "z", "w"]);
        let lit = (any::<bool>(), prop::sample::select(vec!["Up", "Down"]), var.clone(), var.clone())
            .prop_map(|(neg, p, a, b)| format!("{}{p}({a}, {b})", if neg { "!" } else { "" }));
        let konst = prop::sample::select(vec!["34", "35.5", "-0.25", "1000000"]);
        (
            prop::collection::vec(lit, 0..4),
            var.clone(),
            var,
            konst,
            any::<bool>(),
        )
            .prop_map(|(body, a, b, k, use_const)| {
                let head = if use_const {
                    format!("UpDown({a}, {b}, {k})")
                } else {
                    format!("UpDown({a}, {b}, z)")
                };
                let body = if body.is_empty() { "true".to_string() } else { body.join(" & ") };
                format!("{head} <- {body}")
            })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(text in arb_clause()) {
            let kb = kb();
            let c = parse_clause(&text, &kb).unwrap();
            prop_assert_eq!(c.to_string(), text.clone());
            let again = parse_clause(&c.to_string(), &kb).unwrap();
            prop_assert_eq!(again, c);
        }
    }
}
