//! Linear comparison formulas such as `y - x < w - y`.
//!
//! Formulas define computed predicates over numeric arguments. They are
//! evaluated exactly on the decimal reading of each value, so source data
//! like `35.1 - 34.0` compares equal to `36.2 - 35.1`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::LogicError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl CmpOp {
    fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            CmpOp::Lt => ord == Less,
            CmpOp::Le => ord != Greater,
            CmpOp::Gt => ord == Greater,
            CmpOp::Ge => ord != Less,
            CmpOp::Eq => ord == Equal,
        }
    }
}

/// One summand: `coef * param` or a bare constant.
#[derive(Clone, Debug, PartialEq)]
enum Summand {
    Param { coef: BigRational, index: usize },
    Const(BigRational),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearExpr {
    terms: Vec<Summand>,
}

impl LinearExpr {
    fn eval(&self, args: &[BigRational]) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, t| match t {
            Summand::Param { coef, index } => acc + coef * &args[*index],
            Summand::Const(c) => acc + c,
        })
    }
}

/// `lhs op rhs` over named numeric parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Formula {
    params: Vec<String>,
    lhs: LinearExpr,
    op: CmpOp,
    rhs: LinearExpr,
    source: String,
}

impl Formula {
    /// Parses a comparison like `y - x < w - y` over the given parameter names.
    pub fn parse(params: &[String], text: &str) -> Result<Self, LogicError> {
        let (pos, op, width) = find_operator(text)?;
        let lhs = parse_expr(params, &text[..pos])?;
        let rhs = parse_expr(params, &text[pos + width..])?;
        Ok(Formula {
            params: params.to_vec(),
            lhs,
            op,
            rhs,
            source: text.split_whitespace().collect::<Vec<_>>().join(" "),
        })
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn evaluate(&self, args: &[f64]) -> Result<bool, LogicError> {
        if args.len() != self.params.len() {
            return Err(LogicError::Arity {
                name: self.source.clone(),
                expected: self.params.len(),
                got: args.len(),
            });
        }
        let exact: Vec<BigRational> = args.iter().map(|&v| decimal_rational(v)).collect::<Result<_, _>>()?;
        let l = self.lhs.eval(&exact);
        let r = self.rhs.eval(&exact);
        Ok(self.op.holds(l.cmp(&r)))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// Exact rational value of the shortest decimal string that round-trips `v`.
pub fn decimal_rational(v: f64) -> Result<BigRational, LogicError> {
    if !v.is_finite() {
        return Err(LogicError::TypeMismatch(format!("non-finite number {v}")));
    }
    parse_decimal(&format!("{v}")).ok_or_else(|| LogicError::TypeMismatch(format!("bad number {v}")))
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(numer, denom);
    Some(if neg { -r } else { r })
}

fn find_operator(text: &str) -> Result<(usize, CmpOp, usize), LogicError> {
    let bytes = text.as_bytes();
    let mut found = None;
    let mut i = 0;
    while i < bytes.len() {
        let two = if i + 1 < bytes.len() { &text[i..i + 2] } else { "" };
        let hit = match (bytes[i], two) {
            (_, "<=") => Some((CmpOp::Le, 2)),
            (_, ">=") => Some((CmpOp::Ge, 2)),
            (b'<', _) => Some((CmpOp::Lt, 1)),
            (b'>', _) => Some((CmpOp::Gt, 1)),
            (b'=', _) => Some((CmpOp::Eq, 1)),
            _ => None,
        };
        if let Some((op, w)) = hit {
            if found.is_some() {
                return Err(LogicError::Parse {
                    col: i + 1,
                    msg: "more than one comparison operator".into(),
                });
            }
            found = Some((i, op, w));
            i += w;
        } else {
            i += 1;
        }
    }
    found.ok_or(LogicError::Parse {
        col: 1,
        msg: "formula needs a comparison operator".into(),
    })
}

fn parse_expr(params: &[String], text: &str) -> Result<LinearExpr, LogicError> {
    let mut terms = Vec::new();
    let mut sign = BigRational::one();
    let mut expect_term = true;
    for token in tokenize(text)? {
        match token.as_str() {
            "+" | "-" => {
                if token == "-" {
                    sign = -sign;
                }
                expect_term = true;
            }
            word => {
                if !expect_term {
                    return Err(LogicError::Parse {
                        col: 1,
                        msg: format!("expected an operator before `{word}`"),
                    });
                }
                let (coef_text, name) = match word.split_once('*') {
                    Some((c, n)) => (Some(c), n),
                    None => (None, word),
                };
                let coef = match coef_text {
                    Some(c) => parse_decimal(c).ok_or_else(|| LogicError::Parse {
                        col: 1,
                        msg: format!("bad coefficient `{c}`"),
                    })?,
                    None => BigRational::one(),
                };
                let coef = coef * &sign;
                if let Some(index) = params.iter().position(|p| p == name) {
                    terms.push(Summand::Param { coef, index });
                } else if let Some(c) = parse_decimal(name) {
                    terms.push(Summand::Const(coef * c));
                } else {
                    return Err(LogicError::Parse {
                        col: 1,
                        msg: format!("unknown parameter `{name}`"),
                    });
                }
                sign = BigRational::one();
                expect_term = false;
            }
        }
    }
    if expect_term {
        return Err(LogicError::Parse {
            col: 1,
            msg: format!("incomplete expression `{}`", text.trim()),
        });
    }
    Ok(LinearExpr { terms })
}

fn tokenize(text: &str) -> Result<Vec<String>, LogicError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '+' | '-' if !cur.ends_with('*') => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '*' || c == '-' => cur.push(c),
            other => {
                return Err(LogicError::Parse {
                    col: 1,
                    msg: format!("unexpected character `{other}` in formula"),
                })
            }
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}
