//! Scores for forecasts represented by simulated draws.

use crate::error::{Result, ScoreError};
use crate::families::{crps_mixnorm, logs_mixnorm, MixtureNormal};

/// A weighted collection of draws from a predictive distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleForecast {
    draws: Vec<f64>,
    // Normalized; `None` means uniform.
    weights: Option<Vec<f64>>,
}

impl SampleForecast {
    pub fn new(draws: Vec<f64>) -> Result<Self> {
        if draws.is_empty() {
            return Err(ScoreError::Dimension("sample needs at least one draw".into()));
        }
        if let Some(x) = draws.iter().find(|x| !x.is_finite()) {
            return Err(ScoreError::domain(format!("draws must be finite, got {x}")));
        }
        Ok(SampleForecast {
            draws,
            weights: None,
        })
    }

    pub fn with_weights(draws: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let mut fc = Self::new(draws)?;
        if weights.len() != fc.draws.len() {
            return Err(ScoreError::Dimension(format!(
                "{} draws but {} weights",
                fc.draws.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| !(w >= 0.0 && w.is_finite())) {
            return Err(ScoreError::domain(format!(
                "weights must be nonnegative and finite, got {w}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(ScoreError::domain("weights must have a positive sum"));
        }
        fc.weights = Some(weights.into_iter().map(|w| w / total).collect());
        Ok(fc)
    }

    pub fn draws(&self) -> &[f64] {
        &self.draws
    }

    /// Normalized weights, or `None` for a uniformly weighted sample.
    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    fn kernel_mixture(&self, bw: f64) -> Result<MixtureNormal> {
        let (means, weights): (Vec<f64>, Vec<f64>) = match &self.weights {
            None => (self.draws.clone(), vec![1.0; self.draws.len()]),
            Some(w) => self
                .draws
                .iter()
                .zip(w)
                .filter(|(_, &w)| w > 0.0)
                .map(|(&x, &w)| (x, w))
                .unzip(),
        };
        let sds = vec![bw; means.len()];
        MixtureNormal::new(means, sds, weights)
    }
}

fn check_y(y: f64) -> Result<()> {
    if y.is_finite() {
        Ok(())
    } else {
        Err(ScoreError::domain(format!("observation must be finite, got {y}")))
    }
}

/// CRPS of the empirical distribution of the sample, O(m log m).
pub fn crps_sample_edf(y: f64, fc: &SampleForecast) -> Result<f64> {
    check_y(y)?;
    let v = match &fc.weights {
        None => {
            let mut x = fc.draws.clone();
            x.sort_by(f64::total_cmp);
            let m = x.len() as f64;
            let mut total = 0.0;
            for (i, &xi) in x.iter().enumerate() {
                let above = if y < xi { m } else { 0.0 };
                total += (xi - y) * (above - (i as f64 + 1.0) + 0.5);
            }
            2.0 * total / (m * m)
        }
        Some(w) => {
            let mut order: Vec<usize> = (0..fc.draws.len()).collect();
            order.sort_by(|&a, &b| fc.draws[a].total_cmp(&fc.draws[b]));
            let mut cum = 0.0;
            let mut total = 0.0;
            for i in order {
                let (xi, wi) = (fc.draws[i], w[i]);
                cum += wi;
                let above = if y < xi { 1.0 } else { 0.0 };
                total += wi * (xi - y) * (above - cum + 0.5 * wi);
            }
            2.0 * total
        }
    };
    Ok(v.max(0.0))
}

/// CRPS of the Gaussian kernel density estimate; `bw` defaults to [`bandwidth_nrd`].
pub fn crps_sample_kde(y: f64, fc: &SampleForecast, bw: Option<f64>) -> Result<f64> {
    check_y(y)?;
    let bw = resolve_bw(fc, bw)?;
    crps_mixnorm(&fc.kernel_mixture(bw)?, y)
}

/// LogS of the Gaussian kernel density estimate; `bw` defaults to [`bandwidth_nrd`].
pub fn logs_sample(y: f64, fc: &SampleForecast, bw: Option<f64>) -> Result<f64> {
    check_y(y)?;
    let bw = resolve_bw(fc, bw)?;
    logs_mixnorm(&fc.kernel_mixture(bw)?, y)
}

fn resolve_bw(fc: &SampleForecast, bw: Option<f64>) -> Result<f64> {
    match bw {
        Some(b) if b > 0.0 && b.is_finite() => Ok(b),
        Some(b) => Err(ScoreError::domain(format!("bandwidth must be positive, got {b}"))),
        None => bandwidth_nrd(fc),
    }
}

/// Type-7 (linear interpolation) quantile of sorted data.
fn quantile_sorted(x: &[f64], p: f64) -> f64 {
    let h = (x.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(x.len() - 1);
    x[lo] + (h - lo as f64) * (x[hi] - x[lo])
}

/// Normal reference bandwidth `1.06 min(sd, IQR/1.349) m^(-1/5)`.
///
/// Weights are ignored. When the IQR is zero but the standard deviation is
/// not, the standard deviation alone is used.
pub fn bandwidth_nrd(fc: &SampleForecast) -> Result<f64> {
    let m = fc.draws.len();
    if m < 2 {
        return Err(ScoreError::DegenerateSample(
            "bandwidth needs at least two draws".into(),
        ));
    }
    let mut x = fc.draws.clone();
    x.sort_by(f64::total_cmp);
    let n = m as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    let iqr = quantile_sorted(&x, 0.75) - quantile_sorted(&x, 0.25);
    let spread = match (sd > 0.0, iqr > 0.0) {
        (false, false) => {
            return Err(ScoreError::DegenerateSample(
                "all draws are identical, bandwidth is zero".into(),
            ))
        }
        (true, false) => sd,
        _ => sd.min(iqr / 1.349),
    };
    Ok(1.06 * spread * n.powf(-0.2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_sample() {
        let fc = SampleForecast::new(vec![0.0, 2.0]).unwrap();
        assert!((crps_sample_edf(1.0, &fc).unwrap() - 0.5).abs() < 1e-15);
        let fw = SampleForecast::with_weights(vec![0.0, 2.0], vec![0.5, 0.5]).unwrap();
        assert!((crps_sample_edf(1.0, &fw).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_draw_is_absolute_error() {
        let fc = SampleForecast::new(vec![3.25]).unwrap();
        assert_eq!(crps_sample_edf(1.0, &fc).unwrap(), 2.25);
    }

    #[test]
    fn zero_weight_draws_are_ignored() {
        let a = SampleForecast::with_weights(vec![0.0, 5.0, 2.0], vec![1.0, 0.0, 1.0]).unwrap();
        let b = SampleForecast::new(vec![0.0, 2.0]).unwrap();
        for y in [-1.0, 0.5, 4.0] {
            assert!((crps_sample_edf(y, &a).unwrap() - crps_sample_edf(y, &b).unwrap()).abs() < 1e-15);
            let ka = crps_sample_kde(y, &a, Some(0.7)).unwrap();
            let kb = crps_sample_kde(y, &b, Some(0.7)).unwrap();
            assert!((ka - kb).abs() < 1e-15);
        }
    }

    #[test]
    fn bandwidth_two_points() {
        let fc = SampleForecast::new(vec![0.0, 1.0]).unwrap();
        let want = 1.06 * (0.5f64 / 1.349).min(0.5f64.sqrt()) * 2f64.powf(-0.2);
        assert!((bandwidth_nrd(&fc).unwrap() - want).abs() < 1e-15);
        assert!((bandwidth_nrd(&fc).unwrap() - 0.342_025_054_519_604).abs() < 1e-12);
    }

    #[test]
    fn bandwidth_degenerate() {
        let c = SampleForecast::new(vec![1.5; 4]).unwrap();
        assert!(matches!(bandwidth_nrd(&c), Err(ScoreError::DegenerateSample(_))));
        let one = SampleForecast::new(vec![1.5]).unwrap();
        assert!(bandwidth_nrd(&one).is_err());
        // zero IQR, positive sd
        let spiky = SampleForecast::new(vec![0.0, 0.0, 0.0, 0.0, 0.0, 10.0]).unwrap();
        assert!(bandwidth_nrd(&spiky).unwrap() > 0.0);
    }

    #[test]
    fn type7_quantiles() {
        let x = [1.0, 2.0, 4.0, 8.0];
        assert_eq!(quantile_sorted(&x, 0.25), 1.75);
        assert_eq!(quantile_sorted(&x, 0.75), 5.0);
        assert_eq!(quantile_sorted(&x, 1.0), 8.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SampleForecast::new(vec![]).is_err());
        assert!(SampleForecast::new(vec![f64::NAN]).is_err());
        assert!(SampleForecast::with_weights(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(SampleForecast::with_weights(vec![1.0, 2.0], vec![0.0, 0.0]).is_err());
        assert!(SampleForecast::with_weights(vec![1.0, 2.0], vec![-1.0, 2.0]).is_err());
        let fc = SampleForecast::new(vec![1.0, 2.0]).unwrap();
        assert!(crps_sample_edf(f64::INFINITY, &fc).is_err());
        assert!(crps_sample_kde(0.0, &fc, Some(0.0)).is_err());
    }
}
