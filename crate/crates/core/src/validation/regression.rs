use crate::error::{Error, Result};

/// Least-squares line `value ≈ slope · t + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination, clamped to `[0, 1]`.
    pub r_squared: f64,
    /// `(t, value)` pairs used in the fit.
    pub samples: Vec<(f64, f64)>,
}

impl RegressionFit {
    pub fn fit(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::TooFewSamples {
                needed: 3,
                got: samples.len(),
            });
        }
        let n = samples.len() as f64;
        let mt = samples.iter().map(|s| s.0).sum::<f64>() / n;
        let mv = samples.iter().map(|s| s.1).sum::<f64>() / n;
        let stt: f64 = samples.iter().map(|s| (s.0 - mt).powi(2)).sum();
        let stv: f64 = samples.iter().map(|s| (s.0 - mt) * (s.1 - mv)).sum();
        let svv: f64 = samples.iter().map(|s| (s.1 - mv).powi(2)).sum();
        if stt == 0.0 {
            return Err(Error::InvalidParameter(
                "regression needs at least two distinct times".into(),
            ));
        }
        let slope = stv / stt;
        let intercept = mv - slope * mt;
        let r_squared = if svv == 0.0 {
            1.0
        } else {
            (stv * stv / (stt * svv)).clamp(0.0, 1.0)
        };
        Ok(RegressionFit {
            slope,
            intercept,
            r_squared,
            samples,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let s: Vec<(f64, f64)> = (0..12)
            .map(|k| (0.1 * k as f64, 1.0 - 2.0 * 0.5 * 0.1 * k as f64))
            .collect();
        let f = RegressionFit::fit(s).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert!((f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        // θ = −slope/2
        assert!((-f.slope / 2.0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn noisy_data_lowers_r_squared() {
        let s: Vec<(f64, f64)> = (0..20)
            .map(|k| (k as f64, k as f64 + if k % 2 == 0 { 3.0 } else { -3.0 }))
            .collect();
        let f = RegressionFit::fit(s).unwrap();
        assert!(f.r_squared < 0.99 && f.r_squared > 0.5);
        assert!(matches!(
            RegressionFit::fit(vec![(0.0, 1.0)]),
            Err(Error::TooFewSamples { .. })
        ));
    }
}
