//! Significance filtering and Occam selection of scored rules.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::MmdrError;
use crate::mmdr::score::ScoredRule;

fn body_set(r: &ScoredRule) -> BTreeSet<String> {
    r.rule
        .clauses()
        .iter()
        .flat_map(|c| c.body().iter().map(|l| l.to_string()))
        .collect()
}

/// Canonical report order: p-value, complexity, clause text.
pub fn report_order(x: &ScoredRule, y: &ScoredRule) -> Ordering {
    x.p_value
        .total_cmp(&y.p_value)
        .then(x.complexity.cmp(&y.complexity))
        .then_with(|| x.rule.to_string().cmp(&y.rule.to_string()))
}

/// Keeps rules with `p <= alpha` (or `alpha / m` with Bonferroni over `m`
/// scored rules), then drops every rule `R` for which a kept rule `R'` with
/// the same head has a strict subset of `R`'s body, lower complexity and
/// `p(R') <= p(R)`.
pub fn select_lawlike(scored: &[ScoredRule], alpha: f64, bonferroni: bool) -> Result<Vec<ScoredRule>, MmdrError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(MmdrError::InvalidConfig(format!("alpha {alpha} is not in (0, 1)")));
    }
    let threshold = if bonferroni && !scored.is_empty() {
        alpha / scored.len() as f64
    } else {
        alpha
    };
    let kept: Vec<&ScoredRule> = scored.iter().filter(|r| r.p_value <= threshold).collect();
    let bodies: Vec<BTreeSet<String>> = kept.iter().map(|r| body_set(r)).collect();
    let mut out: Vec<ScoredRule> = kept
        .iter()
        .enumerate()
        .filter(|(i, r)| {
            !kept.iter().enumerate().any(|(j, g)| {
                j != *i
                    && g.head == r.head
                    && g.complexity < r.complexity
                    && g.p_value <= r.p_value
                    && bodies[j].is_subset(&bodies[*i])
                    && bodies[j] != bodies[*i]
            })
        })
        .map(|(_, r)| (*r).clone())
        .collect();
    out.sort_by(report_order);
    Ok(out)
}
