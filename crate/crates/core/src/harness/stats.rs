//! Two-sample comparison of run results.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::StatsError;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance. Zero for fewer than two values.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchTest {
    /// Positive when the first sample has the larger mean.
    pub t: f64,
    /// Welch-Satterthwaite degrees of freedom.
    pub df: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    pub significant: bool,
}

/// Unpaired two-sided Welch t-test at the given confidence level.
///
/// When both samples have zero variance the test degenerates: the means
/// are compared directly and any difference counts as significant.
pub fn welch_t_test(a: &[f64], b: &[f64], confidence: f64) -> Result<WelchTest, StatsError> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(StatsError::Confidence(confidence));
    }
    for s in [a, b] {
        if s.len() < 2 {
            return Err(StatsError::SampleTooSmall(s.len()));
        }
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let qa = sample_variance(a) / na;
    let qb = sample_variance(b) / nb;
    let se2 = qa + qb;

    if se2 == 0.0 {
        let df = na + nb - 2.0;
        return Ok(if ma == mb {
            WelchTest {
                t: 0.0,
                df,
                p_value: 1.0,
                significant: false,
            }
        } else {
            WelchTest {
                t: if ma > mb {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                },
                df,
                p_value: 0.0,
                significant: true,
            }
        });
    }

    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).expect("df is positive and finite");
    let p_value = (2.0 * dist.sf(t.abs())).min(1.0);
    Ok(WelchTest {
        t,
        df,
        p_value,
        significant: p_value < 1.0 - confidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from scipy.stats.ttest_ind(a, b, equal_var=False).
    #[test]
    fn matches_reference_fixture() {
        let a = [19.1, 21.4, 18.7, 22.3, 20.0, 19.8];
        let b = [23.5, 24.1, 22.8, 25.6, 21.9];
        let r = welch_t_test(&a, &b, 0.95).unwrap();
        assert!((r.t - -4.0018577272005365).abs() < 1e-6);
        assert!((r.df - 8.602282754224394).abs() < 1e-6);
        assert!((r.p_value - 0.00339877569582449).abs() < 1e-6);
        assert!(r.significant);
    }

    #[test]
    fn overlapping_samples_not_significant() {
        let a = [10.0, 10.5, 9.8, 10.2];
        let b = [10.1, 10.4, 9.9, 10.6, 10.0];
        let r = welch_t_test(&a, &b, 0.95).unwrap();
        assert!((r.t - -0.3783650713972472).abs() < 1e-6);
        assert!((r.p_value - 0.7172299775411544).abs() < 1e-6);
        assert!(!r.significant);
    }

    #[test]
    fn disjoint_ranges_significant() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [11.0, 12.0, 13.0, 14.0, 15.0];
        let r = welch_t_test(&a, &b, 0.95).unwrap();
        assert!((r.t - -10.0).abs() < 1e-9);
        assert!((r.df - 8.0).abs() < 1e-9);
        assert!(r.significant);
    }

    #[test]
    fn identical_samples_not_significant() {
        let a = [3.0, 4.0, 5.0];
        let r = welch_t_test(&a, &a, 0.95).unwrap();
        assert_eq!(r.t, 0.0);
        assert!(!r.significant);
    }

    #[test]
    fn zero_variance_compares_means() {
        let r = welch_t_test(&[7.0, 7.0], &[7.0, 7.0, 7.0], 0.95).unwrap();
        assert!(!r.significant);
        let r = welch_t_test(&[7.0, 7.0], &[9.0, 9.0], 0.95).unwrap();
        assert!(r.significant);
        assert!(r.t < 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(welch_t_test(&[1.0], &[1.0, 2.0], 0.95).is_err());
        assert!(welch_t_test(&[1.0, 2.0], &[1.0, 2.0], 1.0).is_err());
    }
}
