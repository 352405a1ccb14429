use std::sync::OnceLock;

use crate::error::{Result, ScoreError};
use crate::specfun::{std_normal_cdf, std_normal_pdf};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Finite mixture of normal distributions. Weights are rescaled to sum to one.
#[derive(Debug, Clone)]
pub struct MixtureNormal {
    means: Vec<f64>,
    sds: Vec<f64>,
    weights: Vec<f64>,
    // E|X - X'| / 2, computed on first use
    spread: OnceLock<f64>,
}

impl PartialEq for MixtureNormal {
    fn eq(&self, other: &Self) -> bool {
        self.means == other.means && self.sds == other.sds && self.weights == other.weights
    }
}

impl MixtureNormal {
    pub fn new(means: Vec<f64>, sds: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let m = means.len();
        if m == 0 {
            return Err(ScoreError::Dimension("mixture needs at least one component".into()));
        }
        if sds.len() != m || weights.len() != m {
            return Err(ScoreError::Dimension(format!(
                "mixture component vectors differ in length: {m} means, {} sds, {} weights",
                sds.len(),
                weights.len()
            )));
        }
        if let Some(mu) = means.iter().find(|v| !v.is_finite()) {
            return Err(ScoreError::domain(format!("mixture mean must be finite, got {mu}")));
        }
        if let Some(s) = sds.iter().find(|&&s| !(s > 0.0 && s.is_finite())) {
            return Err(ScoreError::domain(format!("mixture sd must be positive, got {s}")));
        }
        if let Some(w) = weights.iter().find(|&&w| !(w > 0.0 && w.is_finite())) {
            return Err(ScoreError::domain(format!("mixture weight must be positive, got {w}")));
        }
        let total: f64 = weights.iter().sum();
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(MixtureNormal {
            means,
            sds,
            weights,
            spread: OnceLock::new(),
        })
    }

    /// Equally weighted mixture.
    pub fn uniform(means: Vec<f64>, sds: Vec<f64>) -> Result<Self> {
        let w = vec![1.0; means.len()];
        Self::new(means, sds, w)
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn sds(&self) -> &[f64] {
        &self.sds
    }

    /// Normalized weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }
}

// E|X| for X ~ N(mu, sigma^2)
fn abs_moment(mu: f64, sigma: f64) -> f64 {
    let z = mu / sigma;
    mu * (2.0 * std_normal_cdf(z) - 1.0) + 2.0 * sigma * std_normal_pdf(z)
}

impl MixtureNormal {
    fn half_spread(&self) -> f64 {
        *self.spread.get_or_init(|| {
            let (mu, sd, w) = (&self.means, &self.sds, &self.weights);
            // Diagonal terms: E|X - X'| for iid N(mu_i, sd_i^2) is 2 sd_i / sqrt(pi).
            let mut second = 0.0;
            for i in 0..mu.len() {
                let mut row = 0.0;
                for j in (i + 1)..mu.len() {
                    let s = (sd[i] * sd[i] + sd[j] * sd[j]).sqrt();
                    row += w[j] * abs_moment(mu[i] - mu[j], s);
                }
                second += w[i] * (2.0 * row + w[i] * abs_moment(0.0, std::f64::consts::SQRT_2 * sd[i]));
            }
            0.5 * second
        })
    }
}

/// CRPS of a normal mixture. The first call on a mixture is O(M^2) in the
/// number of components; later calls reuse the pairwise term and are O(M).
pub fn crps_mixnorm(mix: &MixtureNormal, y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(ScoreError::domain(format!("observation must be finite, got {y}")));
    }
    let (mu, sd, w) = (&mix.means, &mix.sds, &mix.weights);
    let mut first = 0.0;
    for i in 0..mu.len() {
        first += w[i] * abs_moment(y - mu[i], sd[i]);
    }
    let v = first - mix.half_spread();
    if v.is_finite() {
        Ok(v.max(0.0))
    } else {
        Err(ScoreError::NonFinite("mixnorm produced a non-finite value".into()))
    }
}

/// LogS of a normal mixture via log-sum-exp.
pub fn logs_mixnorm(mix: &MixtureNormal, y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(ScoreError::domain(format!("observation must be finite, got {y}")));
    }
    let terms: Vec<f64> = (0..mix.len())
        .map(|i| {
            let z = (y - mix.means[i]) / mix.sds[i];
            mix.weights[i].ln() - 0.5 * z * z - mix.sds[i].ln() - HALF_LN_2PI
        })
        .collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|t| (t - top).exp()).sum();
    Ok(-(top + sum.ln()))
}
