//! Two-tailed paired t-test over matched runs.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Outcome for the first sample relative to the second, on error rates
/// (lower is better).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marker {
    Better,
    Worse,
    NotSignificant,
}

impl Marker {
    /// Table glyph: `•` better, `◦` worse, `★` not significant.
    pub fn symbol(self) -> &'static str {
        match self {
            Marker::Better => "•",
            Marker::Worse => "◦",
            Marker::NotSignificant => "★",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TTest {
    pub mean_difference: f64,
    /// `±∞` when the differences are constant and nonzero; `NaN` when all zero.
    pub t: f64,
    pub df: usize,
    pub p_value: f64,
    pub marker: Marker,
}

/// Paired test of `a` against `b` on the differences `a - b`. Constant
/// differences have no variance: all-zero is not significant, otherwise
/// the sign decides with `p = 0`.
pub fn paired_t_test(a: &[f64], b: &[f64], alpha: f64) -> Result<TTest> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "paired t-test needs two equal samples of at least 2, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len() as f64;
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let df = a.len() - 1;
    let by_sign = |p: f64, t: f64| {
        let marker = if p < alpha {
            if mean < 0.0 {
                Marker::Better
            } else {
                Marker::Worse
            }
        } else {
            Marker::NotSignificant
        };
        TTest {
            mean_difference: mean,
            t,
            df,
            p_value: p,
            marker,
        }
    };
    let scale = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Ok(by_sign(1.0, f64::NAN));
    }
    // relative tolerance so rounding noise in a constant shift reads as zero variance
    if var.sqrt() <= 1e-12 * scale {
        return Ok(by_sign(0.0, mean.signum() * f64::INFINITY));
    }
    let t = mean / (var / n).sqrt();
    Ok(by_sign(two_tailed_p(t, df)?, t))
}

/// Two-tailed p-value of `t` under Student's t with `df` degrees of freedom.
pub fn two_tailed_p(t: f64, df: usize) -> Result<f64> {
    let dist = StudentsT::new(0.0, 1.0, df as f64)
        .map_err(|e| Error::InvalidArgument(format!("t distribution: {e}")))?;
    Ok(2.0 * (1.0 - dist.cdf(t.abs())))
}

/// Marker of `a` against `b` at level `alpha`.
pub fn t_test(a: &[f64], b: &[f64], alpha: f64) -> Result<Marker> {
    paired_t_test(a, b, alpha).map(|t| t.marker)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples_not_significant() {
        let a = [0.1, 0.2, 0.3];
        assert_eq!(t_test(&a, &a, 0.05).unwrap(), Marker::NotSignificant);
    }

    #[test]
    fn constant_shift_decided_by_sign() {
        let b: Vec<f64> = (0..30).map(|i| 0.2 + 0.01 * i as f64).collect();
        let a: Vec<f64> = b.iter().map(|x| x - 0.1).collect();
        let r = paired_t_test(&a, &b, 0.05).unwrap();
        assert_eq!(r.marker, Marker::Better);
        assert_eq!(r.p_value, 0.0);
        assert_eq!(t_test(&b, &a, 0.05).unwrap(), Marker::Worse);
    }

    #[test]
    fn critical_value_at_df_29() {
        // tabulated two-sided 5% critical value for 29 degrees of freedom
        assert!((two_tailed_p(2.045, 29).unwrap() - 0.05).abs() < 1e-3);
        assert!((two_tailed_p(2.756, 29).unwrap() - 0.01).abs() < 1e-3);
    }

    #[test]
    fn hand_computed_statistic() {
        // d = (-1, -2, -3): mean -2, sd 1, t = -2/(1/√3) = -2√3
        let r = paired_t_test(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0], 0.05).unwrap();
        assert!((r.t + 2.0 * 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.df, 2);
        assert_eq!(r.marker, Marker::NotSignificant);
    }

    #[test]
    fn rejects_unpaired_input() {
        assert!(paired_t_test(&[1.0], &[1.0], 0.05).is_err());
        assert!(paired_t_test(&[1.0, 2.0], &[1.0], 0.05).is_err());
    }
}
