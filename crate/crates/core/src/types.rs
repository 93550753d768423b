//! Data types: elements, permitted relations and permitted operations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::LogicError;
use crate::value::{Value, ValueKind};

/// Name of the universal type accepted by non-localized predicate slots.
pub const ANY_TYPE: &str = "any";

/// Measurement scale of a data type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScaleKind {
    Nominal,
    Ordinal,
    Interval,
    Ratio,
    Cyclic,
    Absolute,
}

impl ScaleKind {
    /// Ordinal and every scale that carries at least an order.
    pub fn is_ordered(self) -> bool {
        !matches!(self, ScaleKind::Nominal)
    }
}

impl FromStr for ScaleKind {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "nominal" => ScaleKind::Nominal,
            "ordinal" => ScaleKind::Ordinal,
            "interval" => ScaleKind::Interval,
            "ratio" => ScaleKind::Ratio,
            "cyclic" => ScaleKind::Cyclic,
            "absolute" => ScaleKind::Absolute,
            other => return Err(LogicError::InvalidType(format!("unknown scale kind `{other}`"))),
        })
    }
}

impl fmt::Display for ScaleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScaleKind::Nominal => "nominal",
            ScaleKind::Ordinal => "ordinal",
            ScaleKind::Interval => "interval",
            ScaleKind::Ratio => "ratio",
            ScaleKind::Cyclic => "cyclic",
            ScaleKind::Absolute => "absolute",
        })
    }
}

/// The element set of a data type.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    /// A finite, ordered list of symbolic elements.
    Enumerated(Vec<String>),
    /// Any real number.
    Numeric,
    /// Calendar dates.
    Dates,
    /// Any symbol (open vocabulary, e.g. person names).
    Symbols,
}

impl Domain {
    fn accepts(&self, value: &Value) -> bool {
        match (self, value) {
            (Domain::Enumerated(items), Value::Sym(s)) => items.iter().any(|i| i == s),
            (Domain::Numeric, Value::Num(_)) => true,
            (Domain::Dates, Value::Date(_)) => true,
            (Domain::Symbols, Value::Sym(_)) => true,
            _ => false,
        }
    }

    pub fn value_kind(&self) -> ValueKind {
        match self {
            Domain::Enumerated(_) | Domain::Symbols => ValueKind::Sym,
            Domain::Numeric => ValueKind::Num,
            Domain::Dates => ValueKind::Date,
        }
    }
}

/// A data type ⟨elements, relations, operations⟩.
#[derive(Clone, Debug, PartialEq)]
pub struct DataType {
    name: String,
    scale: ScaleKind,
    domain: Domain,
    period: Option<usize>,
    relations: BTreeSet<String>,
    operations: BTreeSet<String>,
}

impl DataType {
    /// Builds a data type, checking the scale invariants.
    ///
    /// Ordered scales get `{<, =, >}` when no relations are given. A cyclic
    /// type takes its period from the number of enumerated elements.
    pub fn new(
        name: impl Into<String>,
        scale: ScaleKind,
        domain: Domain,
        relations: impl IntoIterator<Item = String>,
        operations: impl IntoIterator<Item = String>,
    ) -> Result<Self, LogicError> {
        let name = name.into();
        let mut relations: BTreeSet<String> = relations.into_iter().collect();
        let operations: BTreeSet<String> = operations.into_iter().collect();
        if scale.is_ordered() && relations.is_empty() {
            relations.extend(["<", "=", ">"].map(String::from));
        }
        if scale == ScaleKind::Nominal && relations.is_empty() {
            relations.insert("=".into());
        }
        let period = match scale {
            ScaleKind::Cyclic => match &domain {
                Domain::Enumerated(items) if items.len() >= 2 => Some(items.len()),
                _ => {
                    return Err(LogicError::InvalidType(format!(
                        "cyclic type `{name}` needs an enumeration of at least 2 elements"
                    )))
                }
            },
            _ => None,
        };
        if scale == ScaleKind::Ordinal {
            for r in ["<", "=", ">"] {
                if !relations.contains(r) {
                    return Err(LogicError::InvalidType(format!(
                        "ordinal type `{name}` must permit relation `{r}`"
                    )));
                }
            }
        }
        if let Domain::Enumerated(items) = &domain {
            let distinct: BTreeSet<&String> = items.iter().collect();
            if distinct.len() != items.len() {
                return Err(LogicError::InvalidType(format!(
                    "type `{name}` enumerates a duplicate element"
                )));
            }
        }
        Ok(DataType {
            name,
            scale,
            domain,
            period,
            relations,
            operations,
        })
    }

    pub fn numeric(name: impl Into<String>, scale: ScaleKind) -> Self {
        let ops = ["+", "-"].map(String::from);
        DataType::new(name, scale, Domain::Numeric, Vec::new(), ops).expect("numeric type")
    }

    pub fn dates(name: impl Into<String>) -> Self {
        DataType::new(
            name,
            ScaleKind::Interval,
            Domain::Dates,
            Vec::new(),
            ["middle".to_string()],
        )
        .expect("date type")
    }

    pub fn nominal(name: impl Into<String>, items: &[&str]) -> Self {
        let domain = Domain::Enumerated(items.iter().map(|s| s.to_string()).collect());
        DataType::new(name, ScaleKind::Nominal, domain, Vec::new(), Vec::new()).expect("nominal type")
    }

    pub fn symbols(name: impl Into<String>) -> Self {
        DataType::new(name, ScaleKind::Nominal, Domain::Symbols, Vec::new(), Vec::new())
            .expect("symbol type")
    }

    /// The five trading weekdays as a cyclic type.
    pub fn trading_weekdays(name: impl Into<String>) -> Self {
        let items = ["Mon", "Tue", "Wed", "Thu", "Fri"].map(String::from).to_vec();
        DataType::new(name, ScaleKind::Cyclic, Domain::Enumerated(items), Vec::new(), Vec::new())
            .expect("weekday type")
    }

    /// The universal type used by non-localized predicates.
    pub fn any() -> Self {
        DataType::new(ANY_TYPE, ScaleKind::Nominal, Domain::Symbols, Vec::new(), Vec::new())
            .expect("any type")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn scale(&self) -> ScaleKind {
        self.scale
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn period(&self) -> Option<usize> {
        self.period
    }

    pub fn relations(&self) -> &BTreeSet<String> {
        &self.relations
    }

    pub fn operations(&self) -> &BTreeSet<String> {
        &self.operations
    }

    pub fn is_any(&self) -> bool {
        self.name == ANY_TYPE
    }

    pub fn accepts(&self, value: &Value) -> bool {
        self.is_any() || self.domain.accepts(value)
    }

    /// Position of an element in an enumerated domain.
    pub fn index_of(&self, element: &str) -> Option<usize> {
        match &self.domain {
            Domain::Enumerated(items) => items.iter().position(|i| i == element),
            _ => None,
        }
    }

    pub fn element(&self, index: usize) -> Option<&str> {
        match &self.domain {
            Domain::Enumerated(items) => items.get(index).map(String::as_str),
            _ => None,
        }
    }

    /// The element `steps` positions after `element` on a cyclic scale.
    pub fn advance(&self, element: &str, steps: usize) -> Result<&str, LogicError> {
        let period = self.cyclic_period()?;
        let i = self
            .index_of(element)
            .ok_or_else(|| LogicError::UnknownElement(element.to_string()))?;
        Ok(self.element((i + steps) % period).expect("index within period"))
    }

    fn cyclic_period(&self) -> Result<usize, LogicError> {
        match (self.scale, self.period) {
            (ScaleKind::Cyclic, Some(p)) => Ok(p),
            _ => Err(LogicError::NotCyclic(self.name.clone())),
        }
    }
}

/// Directed distance from `a` forward to `b` on a cyclic scale.
///
/// `a` is taken to precede `b`, so `Fri → Mon` is one trading day while
/// `Mon → Fri` is four.
pub fn cyclic_distance(a: &str, b: &str, dtype: &DataType) -> Result<usize, LogicError> {
    let period = dtype.cyclic_period()?;
    let ia = dtype
        .index_of(a)
        .ok_or_else(|| LogicError::UnknownElement(a.to_string()))?;
    let ib = dtype
        .index_of(b)
        .ok_or_else(|| LogicError::UnknownElement(b.to_string()))?;
    Ok((ib + period - ia) % period)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn weekdays() -> DataType {
        DataType::trading_weekdays("weekday")
    }

    #[test]
    fn next_day_distances() {
        let w = weekdays();
        assert_eq!(cyclic_distance("Mon", "Tue", &w).unwrap(), 1);
        assert_eq!(cyclic_distance("Fri", "Mon", &w).unwrap(), 1);
        assert_eq!(cyclic_distance("Mon", "Fri", &w).unwrap(), 4);
        assert_eq!(cyclic_distance("Wed", "Wed", &w).unwrap(), 0);
    }

    #[test]
    fn distance_errors() {
        let w = weekdays();
        assert!(matches!(
            cyclic_distance("Mon", "Sat", &w),
            Err(LogicError::UnknownElement(_))
        ));
        let price = DataType::numeric("price", ScaleKind::Ratio);
        assert!(matches!(
            cyclic_distance("Mon", "Tue", &price),
            Err(LogicError::NotCyclic(_))
        ));
    }

    #[test]
    fn cyclic_needs_two_elements() {
        let one = DataType::new(
            "solo",
            ScaleKind::Cyclic,
            Domain::Enumerated(vec!["A".into()]),
            Vec::new(),
            Vec::new(),
        );
        assert!(one.is_err());
        let numeric = DataType::new("c", ScaleKind::Cyclic, Domain::Numeric, Vec::new(), Vec::new());
        assert!(numeric.is_err());
    }

    #[test]
    fn ordinal_gets_order_relations() {
        let t = DataType::new(
            "grade",
            ScaleKind::Ordinal,
            Domain::Enumerated(vec!["Low".into(), "High".into()]),
            Vec::new(),
            Vec::new(),
        )
        .unwrap();
        assert!(t.relations().contains("<"));
        assert!(t.relations().contains(">"));
        let missing = DataType::new(
            "grade",
            ScaleKind::Ordinal,
            Domain::Enumerated(vec!["Low".into(), "High".into()]),
            vec!["=".to_string()],
            Vec::new(),
        );
        assert!(missing.is_err());
    }

    proptest! {
        #[test]
        fn distance_is_antisymmetric_mod_period(a in 0usize..5, b in 0usize..5) {
            let w = weekdays();
            let (ea, eb) = (w.element(a).unwrap(), w.element(b).unwrap());
            let ab = cyclic_distance(ea, eb, &w).unwrap();
            let ba = cyclic_distance(eb, ea, &w).unwrap();
            prop_assert!(ab < 5 && ba < 5);
            prop_assert_eq!((ab + ba) % 5, 0);
        }

        #[test]
        fn advancing_a_full_period_returns(a in 0usize..5) {
            let w = weekdays();
            let start = w.element(a).unwrap().to_string();
            let mut cur = start.clone();
            for _ in 0..5 {
                cur = w.advance(&cur, 1).unwrap().to_string();
            }
            prop_assert_eq!(cur, start);
        }
    }
}
