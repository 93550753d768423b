//! Law-like rule discovery: enumerate, score, test, select, forecast.

pub mod fisher;
pub mod forecast;
pub mod grammar;
pub mod score;
pub mod select;

use crate::encode::{EncodedDataset, HeadForm, Sign};
use crate::error::MmdrError;
use crate::syntax::Rule;

pub use fisher::{fisher_p_value, fisher_p_value_exact, Contingency};
pub use forecast::{interval_forecast, sign_forecast, Forecaster, IntervalForecast};
pub use grammar::{complexity, enumerate_hypotheses, BodyPredicate, Hypothesis, HypothesisGrammar, Polarity};
pub use score::{format_p, score_rule, ScoredRule, Scorer, REPORT_HEADER};
pub use select::{report_order, select_lawlike};

#[derive(Clone, Debug, PartialEq)]
pub struct MmdrConfig {
    pub alpha: f64,
    pub bonferroni: bool,
    /// Selected rules below this conditional probability do not forecast.
    pub min_cond_probability: f64,
    /// Selected rules whose body held on fewer examples do not forecast.
    pub min_support: u64,
    /// At most this many forecasting rules per head form, most significant first.
    pub max_forecasting_per_head: Option<usize>,
}

impl Default for MmdrConfig {
    fn default() -> Self {
        MmdrConfig {
            alpha: 0.05,
            bonferroni: false,
            min_cond_probability: 0.8,
            min_support: 5,
            max_forecasting_per_head: Some(1),
        }
    }
}

/// Result of one fit.
#[derive(Clone, Debug)]
pub struct MmdrModel {
    /// Every evaluable hypothesis, in enumeration order.
    pub scored: Vec<ScoredRule>,
    /// Law-like rules in report order.
    pub selected: Vec<ScoredRule>,
    /// The selected rules that forecast.
    pub forecasting: Vec<ScoredRule>,
}

impl MmdrModel {
    /// Rule report: header plus one line per selected rule.
    pub fn report(&self) -> String {
        let mut out = String::from(REPORT_HEADER);
        out.push('\n');
        for r in &self.selected {
            out.push_str(&r.report_line());
            out.push('\n');
        }
        out
    }

    /// Sign forecasts for series rows `rows` of `data`.
    pub fn predict_signs(&self, data: &EncodedDataset, rows: impl IntoIterator<Item = usize>) -> Result<Vec<Sign>, MmdrError> {
        let mut f = Forecaster::from_scored(data, &self.forecasting)?;
        rows.into_iter().map(|r| f.sign(r)).collect()
    }
}

/// Selected rules that pass the probability and support floors, capped per
/// head form. `selected` must be in report order.
pub fn forecasting_subset(selected: &[ScoredRule], config: &MmdrConfig) -> Vec<ScoredRule> {
    let mut per_head: Vec<(HeadForm, usize)> = Vec::new();
    let mut forecasting = Vec::new();
    for r in selected {
        let eligible = r.cond_probability().is_some_and(|p| p >= config.min_cond_probability)
            && r.contingency.a + r.contingency.b >= config.min_support;
        if !eligible {
            continue;
        }
        let slot = match per_head.iter_mut().find(|(h, _)| *h == r.head) {
            Some((_, n)) => n,
            None => {
                per_head.push((r.head, 0));
                &mut per_head.last_mut().expect("just pushed").1
            }
        };
        if config.max_forecasting_per_head.is_some_and(|m| *slot >= m) {
            continue;
        }
        *slot += 1;
        forecasting.push(r.clone());
    }
    forecasting
}

/// Scores `hypotheses` on `data`, then selects and filters them.
/// Hypotheses whose body never holds are dropped.
pub fn mmdr_fit(data: &EncodedDataset, hypotheses: &[Rule], config: &MmdrConfig) -> Result<MmdrModel, MmdrError> {
    let mut scorer = Scorer::new(data)?;
    let mut scored = Vec::new();
    for r in scorer.score_all(hypotheses) {
        match r {
            Ok(s) => scored.push(s),
            Err(MmdrError::BodyNeverSatisfied) => {}
            Err(e) => return Err(e),
        }
    }
    let selected = select_lawlike(&scored, config.alpha, config.bonferroni)?;
    let forecasting = forecasting_subset(&selected, config);
    Ok(MmdrModel {
        scored,
        selected,
        forecasting,
    })
}

/// Enumerates `grammar` (or the dataset default) and fits.
pub fn mmdr_fit_grammar(
    data: &EncodedDataset,
    grammar: Option<&HypothesisGrammar>,
    extra: &[Rule],
    config: &MmdrConfig,
) -> Result<MmdrModel, MmdrError> {
    let default;
    let grammar = match grammar {
        Some(g) => g,
        None => {
            default = HypothesisGrammar::default_for(data);
            &default
        }
    };
    let mut rules: Vec<Rule> = enumerate_hypotheses(grammar, &data.facts)?
        .into_iter()
        .map(|h| h.rule)
        .collect();
    rules.extend(extra.iter().cloned());
    mmdr_fit(data, &rules, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{encode, EncodeConfig, ThresholdSpec};
    use crate::parse::parse_clause;
    use crate::series::read_csv;

    const FOUR_DAYS: &str = "date,price,volume\n1999-01-01,60.6,1000000\n1999-01-02,53.8,700000\n1999-01-03,54.6,800000\n1999-01-04,56.3,840000\n";

    fn four_days() -> EncodedDataset {
        let s = read_csv(FOUR_DAYS.as_bytes(), None).unwrap();
        let mut cfg = EncodeConfig::new("price");
        cfg.lags = vec![1];
        cfg.weekdays = false;
        cfg.thresholds.insert("price".into(), ThresholdSpec::Cuts(vec![60.0]));
        cfg.thresholds.insert("volume".into(), ThresholdSpec::Cuts(vec![900000.0]));
        cfg.head_thresholds = vec![60.0];
        encode(&s, &cfg).unwrap()
    }

    fn rule(data: &EncodedDataset, text: &str) -> Rule {
        Rule::single(parse_clause(text, &data.facts).unwrap())
    }

    fn both_rules(data: &EncodedDataset) -> Vec<Rule> {
        vec![
            rule(data, "PriceNextUp(t) <- PriceUp_1(t) & VolumeUp_1(t)"),
            rule(data, "PriceNextBelow_60(t) <- PriceBelow_60(t) & VolumeBelow_900000(t)"),
        ]
    }

    #[test]
    fn contingency_on_four_days() {
        let data = four_days();
        let s = score_rule(&both_rules(&data)[0], &data).unwrap();
        // Evaluable from row 1; rows 1 and 2 have successors.
        assert_eq!(s.contingency, Contingency::new(1, 0, 1, 0));
        assert_eq!(s.complexity, 3);
        let s = score_rule(&both_rules(&data)[1], &data).unwrap();
        // 60.6 on the first day is not below 60 but the next day is.
        assert_eq!(s.contingency, Contingency::new(2, 0, 1, 0));
    }

    #[test]
    fn interval_between_the_two_bounds() {
        let data = four_days();
        let mut f = Forecaster::new(&data, &both_rules(&data)).unwrap();
        let iv = f.interval(2).unwrap();
        assert_eq!((iv.lower, iv.upper), (54.6, 60.0));
        assert_eq!(iv.target_date.to_string(), "1999-01-04");
        assert_eq!(iv.supporting_rules, vec![0, 1]);
        assert!(iv.contains(56.3));
        // A bound of 60 above today's 54.6 is not downward evidence.
        assert_eq!(f.sign(2).unwrap(), Sign::Up);
        assert_eq!(f.fired(1).unwrap(), vec![1]);
        assert_eq!(f.sign(1).unwrap(), Sign::Abstain);
    }

    #[test]
    fn contradictory_bounds_are_reported() {
        let data = four_days();
        let rules = vec![
            rule(&data, "PriceNextUp(t) <- PriceUp_1(t)"),
            rule(&data, "PriceNextDown(t) <- PriceUp_1(t)"),
        ];
        let mut f = Forecaster::new(&data, &rules).unwrap();
        assert!(matches!(f.interval(2), Err(MmdrError::EmptyIntersection { lower, upper, .. }) if lower == 54.6 && upper == 54.6));
        assert_eq!(f.sign(2).unwrap(), Sign::Abstain);
    }

    #[test]
    fn never_satisfied_rule_is_dropped() {
        let data = four_days();
        let r = rule(&data, "PriceNextUp(t) <- PriceAbove_60(t) & PriceUp_1(t)");
        assert!(matches!(score_rule(&r, &data), Err(MmdrError::BodyNeverSatisfied)));
        let m = mmdr_fit(&data, &[r], &MmdrConfig::default()).unwrap();
        assert!(m.scored.is_empty());
    }

    fn scored(body: &[&str], p: f64) -> ScoredRule {
        let data = four_days();
        let text = format!("PriceNextUp(t) <- {}", body.join(" & "));
        let mut s = score_rule(&rule(&data, &text), &data).unwrap();
        s.p_value = p;
        s
    }

    #[test]
    fn occam_selection() {
        let general = scored(&["PriceUp_1(t)"], 0.01);
        let special = scored(&["PriceUp_1(t)", "VolumeUp_1(t)"], 0.02);
        let better_special = scored(&["PriceUp_1(t)", "VolumeBelow_900000(t)"], 0.001);
        let weak = scored(&["VolumeUp_1(t)"], 0.2);
        let out = select_lawlike(&[special, general.clone(), better_special.clone(), weak], 0.05, false).unwrap();
        assert_eq!(out, vec![better_special, general]);
        assert!(select_lawlike(&[], 1.0, false).is_err());
    }

    #[test]
    fn bonferroni_divides_alpha() {
        let a = scored(&["PriceUp_1(t)"], 0.02);
        let b = scored(&["VolumeUp_1(t)"], 0.03);
        assert_eq!(select_lawlike(&[a.clone(), b.clone()], 0.05, false).unwrap().len(), 2);
        assert_eq!(select_lawlike(&[a, b], 0.05, true).unwrap().len(), 1);
    }

    #[test]
    fn forecasting_keeps_most_significant_per_head() {
        let strong = scored(&["PriceUp_1(t)"], 0.001);
        let weak = scored(&["VolumeUp_1(t)"], 0.01);
        let mut config = MmdrConfig {
            min_cond_probability: 0.0,
            min_support: 0,
            ..MmdrConfig::default()
        };
        let selected = vec![strong.clone(), weak];
        assert_eq!(forecasting_subset(&selected, &config), vec![strong]);
        config.max_forecasting_per_head = None;
        assert_eq!(forecasting_subset(&selected, &config), selected);
    }
}
