//! Relational encoding of a market series.
//!
//! Each trading day becomes a `date` constant. Per numeric attribute `a`
//! (prefix `A`), encoding can add:
//!
//! * `A(t, v)`: the projection of `a` on day `t`;
//! * `Greater_a(u, v)`: strict order on values of `a` (computed);
//! * `AUp_i(t)`: `a(t-i) < a(t)`, defined from row `i` on;
//! * `AAbove_c(t)` / `ABelow_c(t)`: `a(t) > c` / `a(t) < c`.
//!
//! `PrevDay(t, s)` links consecutive rows and `Monday(t)` .. `Friday(t)` mark
//! weekdays. Target heads `ANextUp(t)`, `ANextDown(t)`, `ANextAbove_c(t)` and
//! `ANextBelow_c(t)` are declared without tuples: their truth comes from the
//! example targets, never from the fact store.

use std::collections::BTreeMap;

use chrono::NaiveDate;

use crate::error::DataError;
use crate::series::{AttrValue, MarketSeries};
use crate::store::{FactStore, TypedSignature};
use crate::types::{DataType, Domain};
use crate::value::Constant;

pub const DATE_TYPE: &str = "date";
pub const PREV_DAY: &str = "PrevDay";
pub const WEEKDAY_PREDICATES: [(&str, &str); 5] = [
    ("Mon", "Monday"),
    ("Tue", "Tuesday"),
    ("Wed", "Wednesday"),
    ("Thu", "Thursday"),
    ("Fri", "Friday"),
];

/// Direction of a one-day move, or no call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Up,
    Down,
    Abstain,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Up => "up",
            Sign::Down => "down",
            Sign::Abstain => "abstain",
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Capitalized attribute name used as a predicate prefix.
pub fn attr_prefix(attribute: &str) -> String {
    let mut chars = attribute.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// `54.6` → `54p6`, `-1.5` → `m1p5`.
pub fn threshold_suffix(c: f64) -> String {
    format!("{c}").replace('-', "m").replace('.', "p")
}

pub fn parse_threshold_suffix(s: &str) -> Option<f64> {
    let text = s.replace('m', "-").replace('p', ".");
    text.parse().ok().filter(|v: &f64| v.is_finite())
}

/// Cut points given directly or as quantiles of the observed values.
#[derive(Clone, Debug, PartialEq)]
pub enum ThresholdSpec {
    Cuts(Vec<f64>),
    Quantiles(Vec<f64>),
}

/// Lower nearest-rank quantile: the value at sorted index `ceil(q n) - 1`.
pub fn quantile_lower_nearest_rank(values: &[f64], q: f64) -> Result<f64, DataError> {
    if values.is_empty() {
        return Err(DataError::EmptySeries);
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(DataError::InvalidThreshold(format!("quantile {q} is not in (0, 1)")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = (q * sorted.len() as f64).ceil() as usize;
    Ok(sorted[rank.saturating_sub(1)])
}

/// A derived predicate and the first row index at which it is defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derived {
    pub name: String,
    pub defined_from: usize,
}

fn date_const(d: NaiveDate) -> Constant {
    Constant::date(d, DATE_TYPE)
}

fn numeric_type<'s>(series: &'s MarketSeries, attribute: &str) -> Result<&'s DataType, DataError> {
    let t = series
        .attribute_type(attribute)
        .ok_or_else(|| DataError::MissingAttribute(attribute.to_string()))?;
    if !matches!(t.domain(), Domain::Numeric) {
        return Err(DataError::SchemaMismatch(format!("attribute `{attribute}` is not numeric")));
    }
    Ok(t)
}

/// Declares the `date` type, one constant per row, and `PrevDay`.
pub fn register_dates(kb: &mut FactStore, series: &MarketSeries) -> Result<Derived, DataError> {
    kb.add_type(DataType::dates(DATE_TYPE))?;
    kb.declare(TypedSignature::new(PREV_DAY, vec![DATE_TYPE.into(), DATE_TYPE.into()]))?;
    let dates = series.dates();
    for &d in &dates {
        kb.add_constant(date_const(d))?;
    }
    for w in dates.windows(2) {
        kb.add_fact(PREV_DAY, vec![date_const(w[1]), date_const(w[0])])?;
    }
    Ok(Derived {
        name: PREV_DAY.into(),
        defined_from: 1,
    })
}

/// Adds the projection relation `A(t, v)` and the computed order `Greater_a`.
pub fn derive_projection(kb: &mut FactStore, series: &MarketSeries, attribute: &str) -> Result<Vec<Derived>, DataError> {
    let dtype = numeric_type(series, attribute)?.clone();
    register_dates(kb, series)?;
    let ty = dtype.name().to_string();
    kb.add_type(dtype)?;
    let rel = attr_prefix(attribute);
    kb.declare(TypedSignature::new(rel.clone(), vec![DATE_TYPE.into(), ty.clone()]))?;
    for (row, v) in series.rows().iter().zip(series.numeric(attribute)?) {
        kb.add_fact(&rel, vec![date_const(row.date), Constant::num(v, ty.clone())])?;
    }
    let greater = format!("Greater_{ty}");
    kb.add_greater(&greater, &ty)?;
    Ok(vec![
        Derived {
            name: rel,
            defined_from: 0,
        },
        Derived {
            name: greater,
            defined_from: 0,
        },
    ])
}

/// Adds `AUp_i(t)`, true where `a(t - i) < a(t)`, for each lag `i`.
pub fn derive_comparison_predicates(
    kb: &mut FactStore,
    series: &MarketSeries,
    attribute: &str,
    lags: &[usize],
) -> Result<Vec<Derived>, DataError> {
    let values = series.numeric(attribute)?;
    for &lag in lags {
        if lag == 0 || lag >= values.len() {
            return Err(DataError::LagTooLarge { lag, len: values.len() });
        }
    }
    register_dates(kb, series)?;
    let prefix = attr_prefix(attribute);
    let mut out = Vec::new();
    for &lag in lags {
        let name = format!("{prefix}Up_{lag}");
        kb.declare(TypedSignature::new(name.clone(), vec![DATE_TYPE.into()]))?;
        for (t, row) in series.rows().iter().enumerate().skip(lag) {
            if values[t - lag] < values[t] {
                kb.add_fact(&name, vec![date_const(row.date)])?;
            }
        }
        out.push(Derived { name, defined_from: lag });
    }
    Ok(out)
}

/// Adds `AAbove_c(t)` (`a(t) > c`) and `ABelow_c(t)` (`a(t) < c`) per cut point.
pub fn derive_threshold_predicates(
    kb: &mut FactStore,
    series: &MarketSeries,
    attribute: &str,
    spec: &ThresholdSpec,
) -> Result<Vec<Derived>, DataError> {
    let values = series.numeric(attribute)?;
    if values.is_empty() {
        return Err(DataError::EmptySeries);
    }
    let cuts: Vec<f64> = match spec {
        ThresholdSpec::Cuts(c) => c.clone(),
        ThresholdSpec::Quantiles(qs) => qs
            .iter()
            .map(|&q| quantile_lower_nearest_rank(&values, q))
            .collect::<Result<_, _>>()?,
    };
    if let Some(bad) = cuts.iter().find(|c| !c.is_finite()) {
        return Err(DataError::InvalidThreshold(format!("{bad} is not finite")));
    }
    register_dates(kb, series)?;
    let prefix = attr_prefix(attribute);
    let mut out = Vec::new();
    for c in cuts {
        for kind in ["Above", "Below"] {
            let name = format!("{prefix}{kind}_{}", threshold_suffix(c));
            if kb.predicate(&name).is_some() {
                continue;
            }
            kb.declare(TypedSignature::new(name.clone(), vec![DATE_TYPE.into()]))?;
            for (row, &v) in series.rows().iter().zip(&values) {
                let hit = if kind == "Above" { v > c } else { v < c };
                if hit {
                    kb.add_fact(&name, vec![date_const(row.date)])?;
                }
            }
            out.push(Derived { name, defined_from: 0 });
        }
    }
    Ok(out)
}

/// Adds `Monday(t)` .. `Friday(t)`.
pub fn derive_weekday_predicates(kb: &mut FactStore, series: &MarketSeries) -> Result<Vec<Derived>, DataError> {
    register_dates(kb, series)?;
    let mut out = Vec::new();
    for (short, name) in WEEKDAY_PREDICATES {
        kb.declare(TypedSignature::new(name, vec![DATE_TYPE.into()]))?;
        for row in series.rows() {
            if row.weekday.as_deref() == Some(short) {
                kb.add_fact(name, vec![date_const(row.date)])?;
            }
        }
        out.push(Derived {
            name: name.into(),
            defined_from: 0,
        });
    }
    Ok(out)
}

/// Adds `Event_e(t)` for each categorical value `e` of a nominal column.
pub fn derive_category_predicates(kb: &mut FactStore, series: &MarketSeries, attribute: &str) -> Result<Vec<Derived>, DataError> {
    let dtype = series
        .attribute_type(attribute)
        .ok_or_else(|| DataError::MissingAttribute(attribute.to_string()))?;
    let Domain::Enumerated(items) = dtype.domain() else {
        return Err(DataError::SchemaMismatch(format!("attribute `{attribute}` is not nominal")));
    };
    register_dates(kb, series)?;
    let prefix = attr_prefix(attribute);
    let mut out = Vec::new();
    for item in items {
        let tag: String = item
            .split_whitespace()
            .map(attr_prefix)
            .collect::<Vec<_>>()
            .concat();
        let name = format!("{prefix}_{tag}");
        kb.declare(TypedSignature::new(name.clone(), vec![DATE_TYPE.into()]))?;
        for row in series.rows() {
            if row.get(attribute) == Some(&AttrValue::Cat(item.clone())) {
                kb.add_fact(&name, vec![date_const(row.date)])?;
            }
        }
        out.push(Derived { name, defined_from: 0 });
    }
    Ok(out)
}

/// What a forecasting head asserts about the target on the next day.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HeadForm {
    /// `target(t+1) > target(t)`
    Up,
    /// `target(t) > target(t+1)`
    Down,
    /// `target(t+1) > c`
    Above(f64),
    /// `c > target(t+1)`
    Below(f64),
}

impl HeadForm {
    pub fn predicate(&self, target: &str) -> String {
        let p = attr_prefix(target);
        match self {
            HeadForm::Up => format!("{p}NextUp"),
            HeadForm::Down => format!("{p}NextDown"),
            HeadForm::Above(c) => format!("{p}NextAbove_{}", threshold_suffix(*c)),
            HeadForm::Below(c) => format!("{p}NextBelow_{}", threshold_suffix(*c)),
        }
    }

    /// Recognizes a head predicate name for `target`.
    pub fn from_predicate(name: &str, target: &str) -> Option<HeadForm> {
        let rest = name.strip_prefix(&attr_prefix(target))?.strip_prefix("Next")?;
        match rest {
            "Up" => Some(HeadForm::Up),
            "Down" => Some(HeadForm::Down),
            _ => {
                if let Some(c) = rest.strip_prefix("Above_") {
                    parse_threshold_suffix(c).map(HeadForm::Above)
                } else if let Some(c) = rest.strip_prefix("Below_") {
                    parse_threshold_suffix(c).map(HeadForm::Below)
                } else {
                    None
                }
            }
        }
    }

    /// Truth of the head given today's and tomorrow's target values.
    pub fn holds(&self, current: f64, next: f64) -> bool {
        match *self {
            HeadForm::Up => next > current,
            HeadForm::Down => current > next,
            HeadForm::Above(c) => next > c,
            HeadForm::Below(c) => c > next,
        }
    }

    pub fn is_sign(&self) -> bool {
        matches!(self, HeadForm::Up | HeadForm::Down)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetKind {
    Classification,
    Sign,
    NumericInterval,
}

/// One training example: day `t` with the target on `t` and `t + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Example {
    pub row: usize,
    pub date: NaiveDate,
    pub next_date: NaiveDate,
    pub current: f64,
    pub next: f64,
}

impl Example {
    pub fn tuple(&self) -> Vec<Constant> {
        vec![date_const(self.date)]
    }

    /// Up iff the target strictly rises; ties count as down.
    pub fn actual_sign(&self) -> Sign {
        if self.next > self.current {
            Sign::Up
        } else {
            Sign::Down
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncodeConfig {
    /// Attribute whose next-day value is forecast.
    pub target: String,
    /// Attributes that receive lagged comparisons; `None` means every numeric one.
    pub attributes: Option<Vec<String>>,
    pub lags: Vec<usize>,
    pub thresholds: BTreeMap<String, ThresholdSpec>,
    pub weekdays: bool,
    /// Cut points for `NextAbove_c` / `NextBelow_c` heads.
    pub head_thresholds: Vec<f64>,
    pub target_kind: TargetKind,
}

impl EncodeConfig {
    pub fn new(target: impl Into<String>) -> Self {
        EncodeConfig {
            target: target.into(),
            attributes: None,
            lags: vec![1, 2, 3],
            thresholds: BTreeMap::new(),
            weekdays: true,
            head_thresholds: Vec::new(),
            target_kind: TargetKind::Sign,
        }
    }
}

/// A series encoded as relational facts plus dated examples.
#[derive(Clone, Debug)]
pub struct EncodedDataset {
    pub series: MarketSeries,
    pub facts: FactStore,
    pub examples: Vec<Example>,
    pub target: String,
    pub target_kind: TargetKind,
    defined_from: BTreeMap<String, usize>,
}

impl EncodedDataset {
    /// First row index at which `predicate` is defined (0 if unknown).
    pub fn defined_from(&self, predicate: &str) -> usize {
        self.defined_from.get(predicate).copied().unwrap_or(0)
    }

    pub fn derived_predicates(&self) -> impl Iterator<Item = (&String, &usize)> {
        self.defined_from.iter()
    }

    pub fn head_predicate(&self, form: HeadForm) -> String {
        form.predicate(&self.target)
    }

    /// Declares a head predicate so that hypotheses can name it.
    pub fn declare_head(&mut self, form: HeadForm) -> Result<String, DataError> {
        let name = self.head_predicate(form);
        self.facts
            .declare(TypedSignature::new(name.clone(), vec![DATE_TYPE.into()]))?;
        Ok(name)
    }

    /// The view available at the close of `cutoff`: facts dated after it are
    /// dropped and only examples whose target date is on or before it remain.
    pub fn restrict_to(&self, cutoff: NaiveDate) -> EncodedDataset {
        let rows = self.series.rows().iter().take_while(|r| r.date <= cutoff).count();
        EncodedDataset {
            series: self.series.prefix(rows),
            facts: self.facts.restrict_dates(cutoff),
            examples: self
                .examples
                .iter()
                .filter(|e| e.next_date <= cutoff)
                .cloned()
                .collect(),
            target: self.target.clone(),
            target_kind: self.target_kind,
            defined_from: self.defined_from.clone(),
        }
    }

    /// [`restrict_to`](Self::restrict_to) `cutoff`, keeping only examples
    /// dated on or after `start`.
    pub fn window(&self, start: NaiveDate, cutoff: NaiveDate) -> EncodedDataset {
        let mut d = self.restrict_to(cutoff);
        d.examples.retain(|e| e.date >= start);
        d
    }

    /// Index of the example dated `date`.
    pub fn example_at(&self, date: NaiveDate) -> Option<usize> {
        self.examples.binary_search_by_key(&date, |e| e.date).ok()
    }
}

/// Encodes `series` into facts and next-day examples.
pub fn encode(series: &MarketSeries, config: &EncodeConfig) -> Result<EncodedDataset, DataError> {
    if series.is_empty() {
        return Err(DataError::EmptySeries);
    }
    let target_values = series.numeric(&config.target)?;
    let mut kb = FactStore::new();
    let mut defined = BTreeMap::new();
    let mut record = |ds: Vec<Derived>| {
        for d in ds {
            defined.insert(d.name, d.defined_from);
        }
    };
    record(vec![register_dates(&mut kb, series)?]);
    let attributes: Vec<String> = match &config.attributes {
        Some(a) => a.clone(),
        None => series
            .attributes()
            .iter()
            .filter(|a| series.attribute_type(a).is_some_and(|t| matches!(t.domain(), Domain::Numeric)))
            .cloned()
            .collect(),
    };
    for attr in &attributes {
        record(derive_projection(&mut kb, series, attr)?);
        let usable: Vec<usize> = config.lags.iter().copied().filter(|&l| l < series.len()).collect();
        if usable.len() != config.lags.len() && series.len() > 1 {
            let lag = config.lags.iter().copied().find(|&l| l >= series.len()).expect("dropped lag");
            return Err(DataError::LagTooLarge { lag, len: series.len() });
        }
        if !usable.is_empty() {
            record(derive_comparison_predicates(&mut kb, series, attr, &usable)?);
        }
    }
    for (attr, spec) in &config.thresholds {
        record(derive_threshold_predicates(&mut kb, series, attr, spec)?);
    }
    if config.weekdays {
        record(derive_weekday_predicates(&mut kb, series)?);
    }
    let examples = series
        .rows()
        .windows(2)
        .enumerate()
        .map(|(i, w)| Example {
            row: i,
            date: w[0].date,
            next_date: w[1].date,
            current: target_values[i],
            next: target_values[i + 1],
        })
        .collect();
    let mut ds = EncodedDataset {
        series: series.clone(),
        facts: kb,
        examples,
        target: config.target.clone(),
        target_kind: config.target_kind,
        defined_from: defined,
    };
    ds.declare_head(HeadForm::Up)?;
    ds.declare_head(HeadForm::Down)?;
    for &c in &config.head_thresholds {
        ds.declare_head(HeadForm::Above(c))?;
        ds.declare_head(HeadForm::Below(c))?;
    }
    Ok(ds)
}
