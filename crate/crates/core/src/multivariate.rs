//! Energy score and variogram score for multivariate sample forecasts.

use crate::error::{Result, ScoreError};

/// `d x m` matrix of draws; column `j` is the `j`-th sample of the `d`-vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivariateForecast {
    d: usize,
    m: usize,
    // column-major: sample j occupies data[j*d .. (j+1)*d]
    data: Vec<f64>,
}

impl MultivariateForecast {
    /// Builds a forecast from `d`-dimensional sample columns.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let m = columns.len();
        if m == 0 {
            return Err(ScoreError::Dimension("forecast needs at least one sample".into()));
        }
        let d = columns[0].len();
        if d == 0 {
            return Err(ScoreError::Dimension("samples must have at least one component".into()));
        }
        let mut data = Vec::with_capacity(d * m);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != d {
                return Err(ScoreError::Dimension(format!(
                    "sample {j} has {} components, expected {d}",
                    col.len()
                )));
            }
            data.extend_from_slice(col);
        }
        Self::from_col_major(d, m, data)
    }

    /// Builds a forecast from a column-major buffer of length `d * m`.
    pub fn from_col_major(d: usize, m: usize, data: Vec<f64>) -> Result<Self> {
        if d == 0 || m == 0 || data.len() != d * m {
            return Err(ScoreError::Dimension(format!(
                "expected {d} x {m} = {} values, got {}",
                d * m,
                data.len()
            )));
        }
        if let Some(x) = data.iter().find(|x| !x.is_finite()) {
            return Err(ScoreError::domain(format!("draws must be finite, got {x}")));
        }
        Ok(MultivariateForecast { d, m, data })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn n_samples(&self) -> usize {
        self.m
    }

    pub fn sample(&self, j: usize) -> &[f64] {
        &self.data[j * self.d..(j + 1) * self.d]
    }
}

/// Nonnegative `d x d` weights for the variogram score.
#[derive(Debug, Clone, PartialEq)]
pub struct PairWeights {
    d: usize,
    // row-major
    w: Vec<f64>,
}

impl PairWeights {
    pub fn ones(d: usize) -> Self {
        PairWeights {
            d,
            w: vec![1.0; d * d],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        let mut w = Vec::with_capacity(d * d);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(ScoreError::Dimension(format!(
                    "weight row {i} has {} entries, expected {d}",
                    r.len()
                )));
            }
            w.extend_from_slice(r);
        }
        if let Some(v) = w.iter().find(|&&v| !(v >= 0.0 && v.is_finite())) {
            return Err(ScoreError::domain(format!(
                "variogram weights must be nonnegative, got {v}"
            )));
        }
        Ok(PairWeights { d, w })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.d + j]
    }
}

fn check_obs(y: &[f64], fc: &MultivariateForecast) -> Result<()> {
    if y.len() != fc.d {
        return Err(ScoreError::Dimension(format!(
            "observation has {} components, forecast has {}",
            y.len(),
            fc.d
        )));
    }
    if let Some(v) = y.iter().find(|v| !v.is_finite()) {
        return Err(ScoreError::domain(format!("observation must be finite, got {v}")));
    }
    Ok(())
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Energy score, O(d m^2).
pub fn es_sample(y: &[f64], fc: &MultivariateForecast) -> Result<f64> {
    check_obs(y, fc)?;
    let m = fc.m;
    let mut to_obs = 0.0;
    for j in 0..m {
        to_obs += distance(fc.sample(j), y);
    }
    let mut pairs = 0.0;
    for i in 0..m {
        for j in (i + 1)..m {
            pairs += distance(fc.sample(i), fc.sample(j));
        }
    }
    let mf = m as f64;
    // each unordered pair appears twice in the full double sum
    Ok((to_obs / mf - pairs / (mf * mf)).max(0.0))
}

fn abs_pow(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if p == 1.0 {
        a
    } else if p == 0.5 {
        a.sqrt()
    } else if a == 0.0 {
        0.0
    } else {
        (p * a.ln()).exp()
    }
}

/// Variogram score of order `p`; `weights` default to all ones.
pub fn vs_sample(
    y: &[f64],
    fc: &MultivariateForecast,
    weights: Option<&PairWeights>,
    p: f64,
) -> Result<f64> {
    check_obs(y, fc)?;
    if !(p > 0.0 && p.is_finite()) {
        return Err(ScoreError::domain(format!("variogram order p must be positive, got {p}")));
    }
    let d = fc.d;
    if let Some(w) = weights {
        if w.d != d {
            return Err(ScoreError::Dimension(format!(
                "weight matrix is {0} x {0}, forecast dimension is {d}",
                w.d
            )));
        }
    }
    let mf = fc.m as f64;
    let mut total = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            let wij = match weights {
                Some(w) => w.get(i, j) + w.get(j, i),
                None => 2.0,
            };
            if wij == 0.0 {
                continue;
            }
            let mut fc_var = 0.0;
            for k in 0..fc.m {
                let s = fc.sample(k);
                fc_var += abs_pow(s[i] - s[j], p);
            }
            let diff = abs_pow(y[i] - y[j], p) - fc_var / mf;
            total += wij * diff * diff;
        }
    }
    Ok(total)
}
