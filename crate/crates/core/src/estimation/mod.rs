//! Minimum-score parameter estimation for unconditional parametric fits.
//!
//! Free parameters are optimized by BFGS in unconstrained coordinates:
//! positive parameters on the log scale, unit-interval parameters on the
//! logit scale. Degrees of freedom, limits, point masses and counts are held
//! fixed unless freed explicitly.

mod bfgs;

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, ScoreError};
use crate::families::{
    crps_closed, crps_jet, logs_closed, logs_jet, Family, FamilyTag, ParamKind, GRADIENT_FAMILIES,
};

/// Gradient norm at which a fit counts as converged.
pub const GRADIENT_TOLERANCE: f64 = 1e-6;
/// Relative objective change below which iteration stops.
pub const OBJECTIVE_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 500;
// Transformed coordinates beyond this magnitude mean the fit is running off
// to a boundary of the parameter space (e.g. scale -> 0).
const BOUNDARY: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Score {
    Crps,
    Logs,
}

impl Score {
    pub fn name(self) -> &'static str {
        match self {
            Score::Crps => "crps",
            Score::Logs => "logs",
        }
    }

    fn eval(self, family: &Family, y: f64) -> Result<f64> {
        match self {
            Score::Crps => crps_closed(family, y),
            Score::Logs => logs_closed(family, y),
        }
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Score {
    type Err = ScoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crps" => Ok(Score::Crps),
            "logs" => Ok(Score::Logs),
            other => Err(ScoreError::domain(format!(
                "unknown score '{other}' for estimation (expected crps or logs)"
            ))),
        }
    }
}

/// A parametric family, training data and a scoring rule to minimize.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationProblem {
    family: FamilyTag,
    data: Vec<f64>,
    score: Score,
    init: Vec<f64>,
    free: Vec<bool>,
}

/// Outcome of [`minimize_score`].
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    /// Parameter names in canonical order.
    pub names: Vec<&'static str>,
    /// Fitted values for all parameters, fixed ones included.
    pub params: Vec<f64>,
    /// Mean score at `params`.
    pub objective: f64,
    /// Euclidean norm of the mean-score gradient over the free parameters.
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub message: String,
}

impl EstimationProblem {
    /// Sets up a fit with every optimizable parameter free and a
    /// moment-matching start. Fixed parameters without defaults (t degrees of
    /// freedom, binomial size, ...) must be supplied with [`Self::fix`]
    /// before the problem is used.
    pub fn new(family: FamilyTag, data: Vec<f64>, score: Score) -> Result<Self> {
        if family == FamilyTag::Mixnorm {
            return Err(ScoreError::Unsupported {
                family: family.name(),
                operation: "estimation",
            });
        }
        if data.is_empty() {
            return Err(ScoreError::Dimension("no training observations".into()));
        }
        if let Some(y) = data.iter().find(|y| !y.is_finite()) {
            return Err(ScoreError::domain(format!("observations must be finite, got {y}")));
        }
        let specs = family.params();
        let free = specs.iter().map(|s| s.kind.free_by_default()).collect();
        let init = specs.iter().map(|s| s.default.unwrap_or(f64::NAN)).collect();
        let mut problem = EstimationProblem {
            family,
            data,
            score,
            init,
            free,
        };
        problem.moment_start();
        Ok(problem)
    }

    pub fn family(&self) -> FamilyTag {
        self.family
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn score(&self) -> Score {
        self.score
    }

    /// Starting values for all parameters in canonical order.
    pub fn init(&self) -> &[f64] {
        &self.init
    }

    pub fn is_free(&self, index: usize) -> bool {
        self.free[index]
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.family
            .params()
            .iter()
            .position(|s| s.name == name || s.aliases.contains(&name))
            .ok_or_else(|| {
                ScoreError::domain(format!("family '{}' has no parameter '{name}'", self.family))
            })
    }

    /// Holds a parameter at `value`.
    pub fn fix(mut self, name: &str, value: f64) -> Result<Self> {
        let i = self.index_of(name)?;
        self.init[i] = value;
        self.free[i] = false;
        Ok(self)
    }

    /// Sets the starting value of a parameter without changing whether it is free.
    pub fn start(mut self, name: &str, value: f64) -> Result<Self> {
        let i = self.index_of(name)?;
        self.init[i] = value;
        Ok(self)
    }

    /// Makes a parameter free, e.g. Student-t degrees of freedom.
    pub fn release(mut self, name: &str) -> Result<Self> {
        let i = self.index_of(name)?;
        match self.family.params()[i].kind {
            ParamKind::Count | ParamKind::Limit | ParamKind::Mass => Err(ScoreError::domain(
                format!("parameter '{name}' cannot be estimated"),
            )),
            _ => {
                self.free[i] = true;
                Ok(self)
            }
        }
    }

    fn moment_start(&mut self) {
        let n = self.data.len() as f64;
        let mean = self.data.iter().sum::<f64>() / n;
        let var = if self.data.len() > 1 {
            self.data.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let sd = if var > 0.0 { var.sqrt() } else { 1.0 };
        let min = self.data.iter().copied().fold(f64::INFINITY, f64::min);
        let logs: Vec<f64> = self.data.iter().filter(|y| **y > 0.0).map(|y| y.ln()).collect();
        let (lmean, lsd) = if logs.len() > 1 {
            let k = logs.len() as f64;
            let m = logs.iter().sum::<f64>() / k;
            let v = logs.iter().map(|l| (l - m) * (l - m)).sum::<f64>() / (k - 1.0);
            (m, if v > 0.0 { v.sqrt() } else { 1.0 })
        } else {
            (0.0, 1.0)
        };
        let pos_mean = if mean > 0.0 { mean } else { 1.0 };
        use FamilyTag as F;
        let start: Vec<(&str, f64)> = match self.family {
            F::Norm | F::T | F::Tnorm | F::Cnorm | F::Gtcnorm | F::Tt | F::Ct | F::Gtct => {
                vec![("location", mean), ("scale", sd)]
            }
            F::Logis | F::Tlogis | F::Clogis | F::Gtclogis => {
                vec![("location", mean), ("scale", sd * 3f64.sqrt() / std::f64::consts::PI)]
            }
            F::Lapl => vec![("location", mean), ("scale", sd / 2f64.sqrt())],
            F::TwoPieceExp | F::TwoPieceNorm => {
                vec![("location", mean), ("scale1", sd), ("scale2", sd)]
            }
            F::Exp => vec![("rate", 1.0 / pos_mean)],
            F::Gamma => {
                let v = if var > 0.0 { var } else { 1.0 };
                vec![("shape", pos_mean * pos_mean / v), ("rate", pos_mean / v)]
            }
            F::Llapl | F::Llogis => vec![("locationlog", lmean), ("scalelog", lsd.clamp(0.05, 0.95))],
            F::Lnorm => vec![("meanlog", lmean), ("sdlog", lsd)],
            F::Beta => {
                let (lo, hi) = (self.init[2], self.init[3]);
                let m = ((mean - lo) / (hi - lo)).clamp(0.01, 0.99);
                let v = var / ((hi - lo) * (hi - lo));
                let common = if v > 0.0 { (m * (1.0 - m) / v - 1.0).max(0.1) } else { 2.0 };
                vec![("shape1", m * common), ("shape2", (1.0 - m) * common)]
            }
            F::Exp2 | F::ExpM => {
                let scale = if mean - min > 0.0 { mean - min } else { 1.0 };
                vec![("location", min - 0.01 * scale), ("scale", scale)]
            }
            F::Gev => vec![
                ("location", mean - 0.45 * sd),
                ("scale", 0.78 * sd),
                ("shape", 0.1),
            ],
            F::Gpd => {
                let scale = if mean - min > 0.0 { mean - min } else { 1.0 };
                vec![("location", min - 0.01 * scale), ("scale", scale), ("shape", 0.1)]
            }
            F::Binom => {
                let size = self.init[0];
                let p = if size > 0.0 { (mean / size).clamp(0.01, 0.99) } else { 0.5 };
                vec![("prob", p)]
            }
            F::Nbinom => {
                let (size, p) = if var > pos_mean {
                    let p = pos_mean / var;
                    (pos_mean * p / (1.0 - p), p)
                } else {
                    (pos_mean, 0.5)
                };
                vec![("size", size), ("prob", p)]
            }
            F::Pois => vec![("lambda", pos_mean)],
            F::Unif | F::Hyper | F::Mixnorm => vec![],
        };
        for (name, value) in start {
            if let Ok(i) = self.index_of(name) {
                self.init[i] = value;
            }
        }
    }

    fn family_at(&self, params: &[f64]) -> Result<Family> {
        if params.len() != self.init.len() {
            return Err(ScoreError::Dimension(format!(
                "family '{}' takes {} parameters, got {}",
                self.family,
                self.init.len(),
                params.len()
            )));
        }
        if let Some((i, _)) = params.iter().enumerate().find(|(_, v)| v.is_nan()) {
            return Err(ScoreError::domain(format!(
                "parameter '{}' has no value; fix it explicitly",
                self.family.params()[i].name
            )));
        }
        let fam = Family::from_values(self.family, params)?;
        fam.validate()?;
        Ok(fam)
    }

    fn free_indices(&self) -> Vec<usize> {
        (0..self.free.len()).filter(|&i| self.free[i]).collect()
    }

    // Positions of location and scale when both are the only free parameters
    // and a jet-based gradient exists for this family and score.
    fn analytic_indices(&self) -> Option<(usize, usize)> {
        let supported = match self.score {
            Score::Crps => GRADIENT_FAMILIES.contains(&self.family),
            Score::Logs => matches!(
                self.family,
                FamilyTag::Norm
                    | FamilyTag::Logis
                    | FamilyTag::T
                    | FamilyTag::Tnorm
                    | FamilyTag::Tlogis
                    | FamilyTag::Tt
            ),
        };
        if !supported {
            return None;
        }
        let loc = self.index_of("location").ok()?;
        let scale = self.index_of("scale").ok()?;
        let free = self.free_indices();
        free.iter()
            .all(|&i| i == loc || i == scale)
            .then_some((loc, scale))
    }
}

/// Mean score `(1/n) sum S(F_params, y_i)` over the training data.
pub fn mean_score(problem: &EstimationProblem, params: &[f64]) -> Result<f64> {
    let fam = problem.family_at(params)?;
    let mut total = 0.0;
    for &y in &problem.data {
        total += problem.score.eval(&fam, y)?;
    }
    Ok(total / problem.data.len() as f64)
}

/// Gradient of [`mean_score`] with respect to the free parameters, in
/// canonical order. Analytic for the normal, logistic and t families,
/// central finite differences otherwise.
pub fn mean_score_gradient(problem: &EstimationProblem, params: &[f64]) -> Result<Vec<f64>> {
    let free = problem.free_indices();
    if let Some((loc, scale)) = problem.analytic_indices() {
        let fam = problem.family_at(params)?;
        let mut g = [0.0; 2];
        for &y in &problem.data {
            let jet = match problem.score {
                Score::Crps => crps_jet(&fam, y)?,
                Score::Logs => logs_jet(&fam, y)?,
            };
            if !jet.v.is_finite() {
                return Err(ScoreError::NonFinite(format!(
                    "{} score is infinite at y = {y}",
                    problem.family
                )));
            }
            g[0] += jet.g[0];
            g[1] += jet.g[1];
        }
        let n = problem.data.len() as f64;
        return Ok(free
            .iter()
            .map(|&i| if i == loc { g[0] / n } else if i == scale { g[1] / n } else { 0.0 })
            .collect());
    }
    let mut grad = Vec::with_capacity(free.len());
    let mut p = params.to_vec();
    for &i in &free {
        let theta = params[i];
        let h = (1e-7 * theta.abs()).max(1e-7);
        p[i] = theta + h;
        let up = mean_score(problem, &p)?;
        p[i] = theta - h;
        let down = mean_score(problem, &p)?;
        p[i] = theta;
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

fn to_unconstrained(kind: ParamKind, v: f64) -> f64 {
    match kind {
        ParamKind::Positive | ParamKind::Df => v.ln(),
        ParamKind::UnitInterval => (v / (1.0 - v)).ln(),
        _ => v,
    }
}

fn from_unconstrained(kind: ParamKind, e: f64) -> f64 {
    match kind {
        ParamKind::Positive | ParamKind::Df => e.exp(),
        ParamKind::UnitInterval => 1.0 / (1.0 + (-e).exp()),
        _ => e,
    }
}

// d theta / d eta
fn jacobian(kind: ParamKind, v: f64) -> f64 {
    match kind {
        ParamKind::Positive | ParamKind::Df => v,
        ParamKind::UnitInterval => v * (1.0 - v),
        _ => 1.0,
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Fits the free parameters by minimizing the mean score with BFGS.
///
/// Failure to converge is reported through [`EstimationResult::converged`];
/// errors are returned only for an invalid problem or starting point.
pub fn minimize_score(problem: &EstimationProblem) -> Result<EstimationResult> {
    if problem.data.len() < 2 {
        return Err(ScoreError::Dimension(
            "estimation needs at least two observations".into(),
        ));
    }
    let specs = problem.family.params();
    let free = problem.free_indices();
    let start_obj = mean_score(problem, &problem.init)?;
    if !start_obj.is_finite() {
        return Err(ScoreError::domain(
            "mean score is not finite at the starting values",
        ));
    }
    let names: Vec<&'static str> = specs.iter().map(|s| s.name).collect();
    if free.is_empty() {
        return Ok(EstimationResult {
            names,
            params: problem.init.clone(),
            objective: start_obj,
            grad_norm: 0.0,
            iterations: 0,
            converged: true,
            message: "no free parameters".into(),
        });
    }

    let natural = |eta: &[f64]| {
        let mut p = problem.init.clone();
        for (k, &i) in free.iter().enumerate() {
            p[i] = from_unconstrained(specs[i].kind, eta[k]);
        }
        p
    };
    let fg = |eta: &[f64]| -> Option<(f64, Vec<f64>)> {
        let p = natural(eta);
        let f = mean_score(problem, &p).ok().filter(|f| f.is_finite())?;
        let g = mean_score_gradient(problem, &p).ok()?;
        let g_eta: Vec<f64> = free
            .iter()
            .zip(&g)
            .map(|(&i, gi)| gi * jacobian(specs[i].kind, p[i]))
            .collect();
        g_eta.iter().all(|v| v.is_finite()).then_some((f, g_eta))
    };
    let natural_grad = |eta: &[f64], g_eta: &[f64]| -> Vec<f64> {
        let p = natural(eta);
        free.iter()
            .zip(g_eta)
            .map(|(&i, g)| g / jacobian(specs[i].kind, p[i]))
            .collect()
    };
    let stationary = |eta: &[f64], g_eta: &[f64]| norm(&natural_grad(eta, g_eta)) <= GRADIENT_TOLERANCE;

    let eta0: Vec<f64> = free
        .iter()
        .map(|&i| to_unconstrained(specs[i].kind, problem.init[i]))
        .collect();
    if fg(&eta0).is_none() {
        return Err(ScoreError::domain(
            "mean score or its gradient is not finite at the starting values",
        ));
    }
    let out = bfgs::minimize(
        fg,
        stationary,
        eta0,
        bfgs::Settings {
            ftol: OBJECTIVE_TOLERANCE,
            max_iter: MAX_ITERATIONS,
            bound: BOUNDARY,
        },
    );
    let params = natural(&out.x);
    let grad = mean_score_gradient(problem, &params)?;
    let grad_norm = norm(&grad);
    let converged = grad_norm <= GRADIENT_TOLERANCE;
    let message = match out.stop {
        _ if converged => "converged".to_string(),
        bfgs::Stop::Boundary => "parameters ran to the boundary of the parameter space".to_string(),
        bfgs::Stop::MaxIterations => format!("iteration limit {MAX_ITERATIONS} reached"),
        bfgs::Stop::LineSearch => "line search failed to decrease the objective".to_string(),
        bfgs::Stop::ObjectiveChange => {
            format!("objective stalled with gradient norm {grad_norm:.3e}")
        }
        bfgs::Stop::Gradient => "converged".to_string(),
    };
    Ok(EstimationResult {
        names,
        params,
        objective: out.f,
        grad_norm,
        iterations: out.iterations,
        converged,
        message,
    })
}

#[cfg(test)]
mod tests;
