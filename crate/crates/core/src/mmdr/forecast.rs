//! Interval and sign forecasts from fired rules.

use chrono::{Datelike, Days, NaiveDate, Weekday};

use crate::encode::{EncodedDataset, HeadForm, Sign, DATE_TYPE};
use crate::error::MmdrError;
use crate::eval::Evaluator;
use crate::mmdr::score::{head_form, ScoredRule};
use crate::syntax::Rule;
use crate::value::Constant;

/// Open interval `(lower, upper)` for the target on `target_date`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalForecast {
    pub target_date: NaiveDate,
    pub lower: f64,
    pub upper: f64,
    /// Indices of the fired rules, ascending.
    pub supporting_rules: Vec<usize>,
}

impl IntervalForecast {
    pub fn contains(&self, v: f64) -> bool {
        self.lower < v && v < self.upper
    }
}

fn next_weekday(d: NaiveDate) -> NaiveDate {
    let mut n = d + Days::new(1);
    while matches!(n.weekday(), Weekday::Sat | Weekday::Sun) {
        n = n + Days::new(1);
    }
    n
}

/// Evaluates a fixed rule set at rows of one dataset.
pub struct Forecaster<'d> {
    data: &'d EncodedDataset,
    rules: Vec<(Rule, HeadForm, usize)>,
    target: Vec<f64>,
    ev: Evaluator<'d>,
}

impl<'d> Forecaster<'d> {
    pub fn new(data: &'d EncodedDataset, rules: &[Rule]) -> Result<Self, MmdrError> {
        let target = data
            .series
            .numeric(&data.target)
            .map_err(|e| MmdrError::InvalidConfig(e.to_string()))?;
        let rules = rules
            .iter()
            .map(|r| {
                let form = head_form(r, &data.target)?;
                let first_row = r
                    .clauses()
                    .iter()
                    .flat_map(|c| c.body())
                    .map(|l| data.defined_from(&l.predicate))
                    .max()
                    .unwrap_or(0);
                Ok((r.clone(), form, first_row))
            })
            .collect::<Result<_, MmdrError>>()?;
        Ok(Forecaster {
            data,
            rules,
            target,
            ev: Evaluator::new(&data.facts),
        })
    }

    pub fn from_scored(data: &'d EncodedDataset, rules: &[ScoredRule]) -> Result<Self, MmdrError> {
        let plain: Vec<Rule> = rules.iter().map(|r| r.rule.clone()).collect();
        Forecaster::new(data, &plain)
    }

    /// Indices of rules whose body holds on series row `row`.
    pub fn fired(&mut self, row: usize) -> Result<Vec<usize>, MmdrError> {
        let date = self.data.series.rows()[row].date;
        let example = [Constant::date(date, DATE_TYPE)];
        let mut out = Vec::new();
        for (i, (rule, _, first_row)) in self.rules.iter().enumerate() {
            if row >= *first_row && self.ev.rule_covers(rule, &example)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    fn target_date(&self, row: usize) -> NaiveDate {
        let rows = self.data.series.rows();
        rows.get(row + 1).map_or_else(|| next_weekday(rows[row].date), |r| r.date)
    }

    /// Intersection of the bounds implied by every fired rule.
    pub fn interval(&mut self, row: usize) -> Result<IntervalForecast, MmdrError> {
        let fired = self.fired(row)?;
        let current = self.target[row];
        let mut lower = (f64::NEG_INFINITY, None::<usize>);
        let mut upper = (f64::INFINITY, None::<usize>);
        for &i in &fired {
            match self.rules[i].1 {
                HeadForm::Up if current > lower.0 => lower = (current, Some(i)),
                HeadForm::Above(c) if c > lower.0 => lower = (c, Some(i)),
                HeadForm::Down if current < upper.0 => upper = (current, Some(i)),
                HeadForm::Below(c) if c < upper.0 => upper = (c, Some(i)),
                _ => {}
            }
        }
        if lower.0 >= upper.0 {
            let name = |i: Option<usize>| i.map(|i| self.rules[i].0.to_string()).unwrap_or_default();
            return Err(MmdrError::EmptyIntersection {
                lower_rule: name(lower.1),
                upper_rule: name(upper.1),
                lower: lower.0,
                upper: upper.0,
            });
        }
        Ok(IntervalForecast {
            target_date: self.target_date(row),
            lower: lower.0,
            upper: upper.0,
            supporting_rules: fired,
        })
    }

    /// Up when only upward evidence fires, down when only downward evidence
    /// fires, abstain otherwise. A threshold head counts as evidence when
    /// its bound lies on one side of today's value.
    pub fn sign(&mut self, row: usize) -> Result<Sign, MmdrError> {
        let fired = self.fired(row)?;
        let current = self.target[row];
        let (mut up, mut down) = (false, false);
        for &i in &fired {
            match self.rules[i].1 {
                HeadForm::Up => up = true,
                HeadForm::Down => down = true,
                HeadForm::Above(c) if c >= current => up = true,
                HeadForm::Below(c) if c <= current => down = true,
                _ => {}
            }
        }
        Ok(match (up, down) {
            (true, false) => Sign::Up,
            (false, true) => Sign::Down,
            _ => Sign::Abstain,
        })
    }
}

/// Interval for the day after series row `row`.
pub fn interval_forecast(rules: &[ScoredRule], data: &EncodedDataset, row: usize) -> Result<IntervalForecast, MmdrError> {
    Forecaster::from_scored(data, rules)?.interval(row)
}

/// Sign of the move from series row `row` to the next day.
pub fn sign_forecast(rules: &[ScoredRule], data: &EncodedDataset, row: usize) -> Result<Sign, MmdrError> {
    Forecaster::from_scored(data, rules)?.sign(row)
}
