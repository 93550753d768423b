//! Sign accuracy with abstentions.

use crate::encode::Sign;
use crate::error::BacktestError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AccuracyReport {
    pub correct: usize,
    /// Up or down forecasts.
    pub decided: usize,
    pub abstains: usize,
}

impl AccuracyReport {
    /// Fraction of decided forecasts that were right.
    pub fn accuracy(&self) -> Result<f64, BacktestError> {
        if self.decided == 0 {
            return Err(BacktestError::NoDecisions);
        }
        Ok(self.correct as f64 / self.decided as f64)
    }

    pub fn abstain_rate(&self) -> f64 {
        let n = self.decided + self.abstains;
        if n == 0 {
            0.0
        } else {
            self.abstains as f64 / n as f64
        }
    }
}

/// Compares forecasts with realized signs; abstentions are excluded from
/// the accuracy and counted separately.
pub fn sign_accuracy(predicted: &[Sign], actual: &[Sign]) -> Result<AccuracyReport, BacktestError> {
    if predicted.len() != actual.len() {
        return Err(BacktestError::Alignment(format!(
            "{} forecasts for {} outcomes",
            predicted.len(),
            actual.len()
        )));
    }
    let mut r = AccuracyReport {
        correct: 0,
        decided: 0,
        abstains: 0,
    };
    for (&p, &a) in predicted.iter().zip(actual) {
        if p == Sign::Abstain {
            r.abstains += 1;
        } else {
            r.decided += 1;
            r.correct += usize::from(p == a);
        }
    }
    Ok(r)
}

/// Unweighted mean of per-period accuracies.
pub fn mean_period_accuracy(periods: &[f64]) -> Result<f64, BacktestError> {
    if periods.is_empty() {
        return Err(BacktestError::InsufficientData("no periods".into()));
    }
    Ok(periods.iter().sum::<f64>() / periods.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::*;

    #[test]
    fn abstentions_are_excluded() {
        let r = sign_accuracy(&[Up, Down, Abstain, Up], &[Up, Up, Down, Up]).unwrap();
        assert_eq!((r.correct, r.decided, r.abstains), (2, 3, 1));
        assert_eq!(r.accuracy().unwrap(), 2.0 / 3.0);
        assert_eq!(r.abstain_rate(), 0.25);
    }

    #[test]
    fn all_abstain_has_no_accuracy() {
        let r = sign_accuracy(&[Abstain, Abstain], &[Up, Down]).unwrap();
        assert!(matches!(r.accuracy(), Err(BacktestError::NoDecisions)));
        assert!(matches!(sign_accuracy(&[Up], &[]), Err(BacktestError::Alignment(_))));
    }

    #[test]
    fn period_mean_is_unweighted() {
        assert_eq!(mean_period_accuracy(&[0.5, 1.0]).unwrap(), 0.75);
        assert!(mean_period_accuracy(&[]).is_err());
    }
}
