//! Dated attribute rows and their term representation.

use std::collections::BTreeMap;
use std::io::Read;

use chrono::{Datelike, NaiveDate, Weekday};

use crate::error::DataError;
use crate::syntax::{FunctionSymbol, FunctionalExpression, Term};
use crate::types::{DataType, Domain, ScaleKind};
use crate::value::{Constant, Value};

pub const DATE_COLUMN: &str = "date";
pub const EVENT_COLUMN: &str = "event";
/// Catch-all element for event text that matches no declared element.
pub const OTHER_EVENT: &str = "other";

#[derive(Clone, Debug, PartialEq)]
pub enum AttrValue {
    Num(f64),
    Cat(String),
}

impl AttrValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            AttrValue::Num(v) => Some(*v),
            AttrValue::Cat(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub date: NaiveDate,
    /// Three-letter trading weekday; `None` on weekends.
    pub weekday: Option<String>,
    pub values: BTreeMap<String, AttrValue>,
}

impl Row {
    pub fn get(&self, attribute: &str) -> Option<&AttrValue> {
        self.values.get(attribute)
    }

    pub fn num(&self, attribute: &str) -> Option<f64> {
        self.get(attribute).and_then(AttrValue::as_f64)
    }
}

/// Maps each non-date column to its data type.
#[derive(Clone, Debug, Default)]
pub struct Schema {
    columns: BTreeMap<String, DataType>,
}

impl Schema {
    pub fn new() -> Self {
        Schema::default()
    }

    pub fn with(mut self, column: impl Into<String>, dtype: DataType) -> Self {
        self.columns.insert(column.into(), dtype);
        self
    }

    /// Every column numeric (ratio scale, type named after the column)
    /// except `event`, which becomes the default event enumeration.
    pub fn infer(header: &[String]) -> Self {
        let mut schema = Schema::new();
        for col in header.iter().filter(|c| c.as_str() != DATE_COLUMN) {
            let dtype = if col == EVENT_COLUMN {
                default_event_type()
            } else {
                DataType::numeric(col.clone(), ScaleKind::Ratio)
            };
            schema.columns.insert(col.clone(), dtype);
        }
        schema
    }

    pub fn columns(&self) -> impl Iterator<Item = (&String, &DataType)> {
        self.columns.iter()
    }

    pub fn get(&self, column: &str) -> Option<&DataType> {
        self.columns.get(column)
    }
}

/// The event vocabulary used when none is declared.
pub fn default_event_type() -> DataType {
    DataType::nominal(
        EVENT_COLUMN,
        &[
            "reported profit",
            "new product",
            "competitor activity",
            "government activity",
            OTHER_EVENT,
        ],
    )
}

/// Rows with strictly increasing dates and a common attribute set.
#[derive(Clone, Debug, Default)]
pub struct MarketSeries {
    attributes: Vec<String>,
    types: BTreeMap<String, DataType>,
    rows: Vec<Row>,
}

impl MarketSeries {
    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Attribute names in column order.
    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn attribute_type(&self, attribute: &str) -> Option<&DataType> {
        self.types.get(attribute)
    }

    /// Numeric values of one attribute, in date order.
    pub fn numeric(&self, attribute: &str) -> Result<Vec<f64>, DataError> {
        match self.types.get(attribute) {
            Some(t) if matches!(t.domain(), Domain::Numeric) => {}
            Some(_) => {
                return Err(DataError::SchemaMismatch(format!(
                    "attribute `{attribute}` is not numeric"
                )))
            }
            None => return Err(DataError::MissingAttribute(attribute.to_string())),
        }
        Ok(self
            .rows
            .iter()
            .map(|r| r.num(attribute).expect("validated numeric column"))
            .collect())
    }

    pub fn dates(&self) -> Vec<NaiveDate> {
        self.rows.iter().map(|r| r.date).collect()
    }

    /// The first `len` rows.
    pub fn prefix(&self, len: usize) -> MarketSeries {
        MarketSeries {
            attributes: self.attributes.clone(),
            types: self.types.clone(),
            rows: self.rows[..len.min(self.rows.len())].to_vec(),
        }
    }
}

pub fn trading_weekday(date: NaiveDate) -> Option<&'static str> {
    match date.weekday() {
        Weekday::Mon => Some("Mon"),
        Weekday::Tue => Some("Tue"),
        Weekday::Wed => Some("Wed"),
        Weekday::Thu => Some("Thu"),
        Weekday::Fri => Some("Fri"),
        Weekday::Sat | Weekday::Sun => None,
    }
}

fn normalize_event(raw: &str, dtype: &DataType) -> String {
    let text = raw.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
    let text: String = text.chars().filter(|c| *c != '\'').collect();
    match dtype.domain() {
        Domain::Enumerated(items) => items
            .iter()
            .find(|i| i.to_lowercase() == text)
            .cloned()
            .unwrap_or_else(|| {
                if items.iter().any(|i| i == OTHER_EVENT) {
                    OTHER_EVENT.to_string()
                } else {
                    text
                }
            }),
        _ => text,
    }
}

/// Builds a series from a header and string records.
///
/// The header must contain `date`; every other column must appear in the
/// schema and every schema column in the header.
pub fn ingest_series(header: &[String], records: &[Vec<String>], schema: &Schema) -> Result<MarketSeries, DataError> {
    let date_col = header
        .iter()
        .position(|h| h == DATE_COLUMN)
        .ok_or_else(|| DataError::SchemaMismatch("missing `date` column".into()))?;
    for h in header.iter().filter(|h| h.as_str() != DATE_COLUMN) {
        if schema.get(h).is_none() {
            return Err(DataError::SchemaMismatch(format!("column `{h}` is not in the schema")));
        }
    }
    for (c, _) in schema.columns() {
        if !header.contains(c) {
            return Err(DataError::SchemaMismatch(format!("schema column `{c}` is missing")));
        }
    }
    let attributes: Vec<String> = header.iter().filter(|h| h.as_str() != DATE_COLUMN).cloned().collect();
    let mut rows: Vec<Row> = Vec::with_capacity(records.len());
    for (i, rec) in records.iter().enumerate() {
        let line = i + 2;
        if rec.len() != header.len() {
            return Err(DataError::Parse {
                line,
                msg: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        let raw_date = rec[date_col].trim();
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d").map_err(|e| DataError::Parse {
            line,
            msg: format!("bad date `{raw_date}`: {e}"),
        })?;
        if let Some(prev) = rows.last() {
            if date <= prev.date {
                return Err(DataError::NonMonotoneDates {
                    row: i + 1,
                    date: raw_date.to_string(),
                });
            }
        }
        let mut values = BTreeMap::new();
        for (col, field) in header.iter().zip(rec) {
            if col == DATE_COLUMN {
                continue;
            }
            let dtype = schema.get(col).expect("schema checked");
            let value = match dtype.domain() {
                Domain::Numeric => {
                    let cleaned: String = field.trim().chars().filter(|c| *c != ',' && *c != '$').collect();
                    let v: f64 = cleaned.parse().map_err(|_| DataError::Parse {
                        line,
                        msg: format!("column `{col}`: `{field}` is not a number"),
                    })?;
                    if !v.is_finite() {
                        return Err(DataError::Parse {
                            line,
                            msg: format!("column `{col}`: non-finite value"),
                        });
                    }
                    AttrValue::Num(v)
                }
                Domain::Enumerated(_) => AttrValue::Cat(normalize_event(field, dtype)),
                Domain::Symbols => AttrValue::Cat(field.trim().to_string()),
                Domain::Dates => {
                    return Err(DataError::SchemaMismatch(format!(
                        "column `{col}`: only the `date` column may hold dates"
                    )))
                }
            };
            values.insert(col.clone(), value);
        }
        rows.push(Row {
            date,
            weekday: trading_weekday(date).map(String::from),
            values,
        });
    }
    let types = schema.columns().map(|(k, v)| (k.clone(), v.clone())).collect();
    Ok(MarketSeries { attributes, types, rows })
}

/// Reads a headed CSV document; with no schema, one is inferred from the header.
pub fn read_csv<R: Read>(reader: R, schema: Option<&Schema>) -> Result<MarketSeries, DataError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.to_lowercase()).collect();
    let mut records = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| DataError::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            msg: e.to_string(),
        })?;
        records.push(rec.iter().map(String::from).collect());
    }
    let inferred;
    let schema = match schema {
        Some(s) => s,
        None => {
            inferred = Schema::infer(&header);
            &inferred
        }
    };
    ingest_series(&header, &records, schema)
}

/// Type names of the stock term's subterms, in argument order.
pub const STOCK_FIELDS: [(&str, &str); 5] = [
    ("StockPrice", "price"),
    ("StockVolume", "volume"),
    ("StockDate", "date"),
    ("StockWeekday", "weekday"),
    ("StockEvent", "event"),
];

pub fn stock_symbol() -> FunctionSymbol {
    FunctionSymbol {
        name: "Stock".into(),
        arg_types: STOCK_FIELDS.iter().map(|(_, t)| t.to_string()).collect(),
        result_type: "stock".into(),
    }
}

/// The term `Stock(price, volume, date, weekday, event)` for one row.
pub fn term_representation(row: &Row) -> Result<Term, DataError> {
    let price = row.num("price").ok_or_else(|| DataError::MissingAttribute("price".into()))?;
    let volume = row.num("volume").ok_or_else(|| DataError::MissingAttribute("volume".into()))?;
    let weekday = row
        .weekday
        .clone()
        .ok_or_else(|| DataError::MissingAttribute("weekday".into()))?;
    let event = match row.get(EVENT_COLUMN) {
        Some(AttrValue::Cat(e)) => e.clone(),
        _ => return Err(DataError::MissingAttribute(EVENT_COLUMN.into())),
    };
    let args = vec![
        Term::Const(Constant::num(price, "price")),
        Term::Const(Constant::num(volume, "volume")),
        Term::Const(Constant::date(row.date, "date")),
        Term::Const(Constant::sym(weekday, "weekday")),
        Term::Const(Constant::sym(event, "event")),
    ];
    Ok(Term::Func(FunctionalExpression::new(&stock_symbol(), args)?))
}

/// Applies a projection function such as `StockWeekday` to a stock term.
pub fn project(term: &Term, projection: &str) -> Result<Constant, DataError> {
    let Term::Func(f) = term else {
        return Err(DataError::SchemaMismatch(format!("`{term}` is not a stock term")));
    };
    if f.name() != "Stock" {
        return Err(DataError::SchemaMismatch(format!("`{}` is not a stock term", f.name())));
    }
    let slot = STOCK_FIELDS
        .iter()
        .position(|(p, _)| *p == projection)
        .ok_or_else(|| DataError::MissingAttribute(projection.to_string()))?;
    match &f.args()[slot] {
        Term::Const(c) => Ok(c.clone()),
        other => Err(DataError::SchemaMismatch(format!("subterm `{other}` is not ground"))),
    }
}

/// `StockEvent(x) = StockEvent(w)`.
pub fn same_event(w: &Term, x: &Term) -> Result<bool, DataError> {
    Ok(project(w, "StockEvent")?.value == project(x, "StockEvent")?.value)
}

/// Decimal value of a projected numeric subterm.
pub fn projected_f64(term: &Term, projection: &str) -> Result<f64, DataError> {
    match project(term, projection)?.value {
        Value::Num(v) => Ok(v.0),
        ref other => Err(DataError::SchemaMismatch(format!("{projection} gave non-numeric {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn header(cols: &[&str]) -> Vec<String> {
        cols.iter().map(|s| s.to_string()).collect()
    }

    fn recs(rows: &[&[&str]]) -> Vec<Vec<String>> {
        rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
    }

    #[test]
    fn four_day_rows_ingest() {
        let csv = "date,price,volume\n1999-01-01,60.6,1000000\n1999-01-02,53.8,700000\n1999-01-03,54.6,800000\n1999-01-04,56.3,840000\n";
        let s = read_csv(csv.as_bytes(), None).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.numeric("price").unwrap(), vec![60.6, 53.8, 54.6, 56.3]);
        assert_eq!(s.rows()[3].weekday.as_deref(), Some("Mon"));
        assert_eq!(s.rows()[1].weekday, None);
    }

    #[test]
    fn empty_input_is_empty_series() {
        let s = read_csv("date,price\n".as_bytes(), None).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn duplicated_date_rejected() {
        let h = header(&["date", "price", "volume"]);
        let r = recs(&[&["1999-01-02", "60.6", "1000000"], &["1999-01-02", "53.8", "700000"]]);
        let err = ingest_series(&h, &r, &Schema::infer(&h)).unwrap_err();
        assert!(matches!(err, DataError::NonMonotoneDates { row: 2, .. }));
    }

    #[test]
    fn schema_must_cover_columns() {
        let h = header(&["date", "price", "volume"]);
        let schema = Schema::new().with("price", DataType::numeric("price", ScaleKind::Ratio));
        let err = ingest_series(&h, &[], &schema).unwrap_err();
        assert!(matches!(err, DataError::SchemaMismatch(_)));
        let bad = recs(&[&["1999-01-04", "x", "1"]]);
        assert!(matches!(
            ingest_series(&h, &bad, &Schema::infer(&h)),
            Err(DataError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn term_and_projections() {
        let csv = "date,price,volume,event\n1999-01-04,54.6,3067.54,New product\n";
        let s = read_csv(csv.as_bytes(), None).unwrap();
        let t = term_representation(&s.rows()[0]).unwrap();
        assert_eq!(t.to_string(), "Stock(54.6, 3067.54, 1999-01-04, Mon, \"new product\")");
        assert_eq!(project(&t, "StockWeekday").unwrap().value, Value::sym("Mon"));
        assert!(same_event(&t, &t).unwrap());
    }

    #[test]
    fn unknown_events_map_to_other() {
        let csv = "date,price,volume,event\n1999-01-04,1,1,merger rumour\n1999-01-05,1,1,\n";
        let s = read_csv(csv.as_bytes(), None).unwrap();
        for r in s.rows() {
            assert_eq!(r.get("event"), Some(&AttrValue::Cat(OTHER_EVENT.into())));
        }
    }

    #[test]
    fn missing_attribute() {
        let csv = "date,price\n1999-01-04,54.6\n";
        let s = read_csv(csv.as_bytes(), None).unwrap();
        assert!(matches!(
            term_representation(&s.rows()[0]),
            Err(DataError::MissingAttribute(_))
        ));
    }

    proptest! {
        #[test]
        fn projection_recovers_values(price in 0.01f64..1e6, volume in 0.0f64..1e9, day in 0u32..5) {
            let date = NaiveDate::from_ymd_opt(1999, 1, 4 + day).unwrap();
            let csv = format!("date,price,volume,event\n{date},{price},{volume},reported profit\n");
            let s = read_csv(csv.as_bytes(), None).unwrap();
            let t = term_representation(&s.rows()[0]).unwrap();
            prop_assert_eq!(projected_f64(&t, "StockPrice").unwrap().to_bits(), price.to_bits());
            prop_assert_eq!(projected_f64(&t, "StockVolume").unwrap().to_bits(), volume.to_bits());
            prop_assert_eq!(project(&t, "StockDate").unwrap().value, Value::Date(date));
        }
    }
}
