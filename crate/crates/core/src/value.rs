//! Constant values and typed constants.

use std::cmp::Ordering;
use std::fmt;

use chrono::NaiveDate;
use ordered_float::OrderedFloat;

/// A raw constant value.
///
/// Numbers are kept as `f64` with a total order so that they can live in
/// ordered sets; dates are calendar dates; everything else is a symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Num(OrderedFloat<f64>),
    Date(NaiveDate),
    Sym(String),
}

impl Value {
    pub fn num(v: f64) -> Self {
        Value::Num(OrderedFloat(v))
    }

    pub fn sym(s: impl Into<String>) -> Self {
        Value::Sym(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Num(v) => Some(v.0),
            _ => None,
        }
    }

    pub fn as_date(&self) -> Option<NaiveDate> {
        match self {
            Value::Date(d) => Some(*d),
            _ => None,
        }
    }

    pub fn kind(&self) -> ValueKind {
        match self {
            Value::Num(_) => ValueKind::Num,
            Value::Date(_) => ValueKind::Date,
            Value::Sym(_) => ValueKind::Sym,
        }
    }

    /// Strict "greater than" for values of the same kind; `None` across kinds.
    pub fn strictly_greater(&self, other: &Value) -> Option<bool> {
        match (self, other) {
            (Value::Num(a), Value::Num(b)) => Some(a.0 > b.0),
            (Value::Date(a), Value::Date(b)) => Some(a > b),
            (Value::Sym(a), Value::Sym(b)) => Some(a > b),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValueKind {
    Num,
    Date,
    Sym,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(v) => write!(f, "{}", v.0),
            Value::Date(d) => write!(f, "{}", d.format("%Y-%m-%d")),
            Value::Sym(s) => {
                if is_bare_symbol(s) {
                    f.write_str(s)
                } else {
                    write!(f, "\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
                }
            }
        }
    }
}

/// Symbols that print without quotes: an uppercase first letter followed by
/// identifier characters. Lowercase identifiers are variables in clause text.
pub(crate) fn is_bare_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_uppercase() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    }
}

/// A constant tagged with the name of its data type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constant {
    pub value: Value,
    pub dtype: String,
}

impl Constant {
    pub fn new(value: Value, dtype: impl Into<String>) -> Self {
        Constant {
            value,
            dtype: dtype.into(),
        }
    }

    pub fn num(v: f64, dtype: impl Into<String>) -> Self {
        Constant::new(Value::num(v), dtype)
    }

    pub fn sym(s: impl Into<String>, dtype: impl Into<String>) -> Self {
        Constant::new(Value::sym(s), dtype)
    }

    pub fn date(d: NaiveDate, dtype: impl Into<String>) -> Self {
        Constant::new(Value::Date(d), dtype)
    }
}

impl PartialOrd for Constant {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Canonical order: by type name, then by value.
impl Ord for Constant {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dtype
            .cmp(&other.dtype)
            .then_with(|| self.value.cmp(&other.value))
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}
