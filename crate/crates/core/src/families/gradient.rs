//! Exact CRPS gradients and Hessians with respect to (location, scale).

use super::locscale::{crps_ls, logs_ls, Kernel, Masses};
use super::{Family, FamilyTag};
use crate::error::{Result, ScoreError};
use crate::jet::Jet2;

/// Families supported by [`gradcrps`] and [`hesscrps`].
pub const GRADIENT_FAMILIES: [FamilyTag; 9] = [
    FamilyTag::Logis,
    FamilyTag::Norm,
    FamilyTag::T,
    FamilyTag::Clogis,
    FamilyTag::Tlogis,
    FamilyTag::Cnorm,
    FamilyTag::Tnorm,
    FamilyTag::Ct,
    FamilyTag::Tt,
];

struct KernelForm {
    kernel: Kernel,
    location: f64,
    scale: f64,
    lower: f64,
    upper: f64,
    masses: Masses,
}

fn kernel_form(family: &Family) -> Option<KernelForm> {
    let full = |kernel, location, scale| KernelForm {
        kernel,
        location,
        scale,
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
        masses: Masses::Truncated,
    };
    let bounded = |kernel, location, scale, lower, upper, masses| KernelForm {
        kernel,
        location,
        scale,
        lower,
        upper,
        masses,
    };
    Some(match *family {
        Family::Logis { location, scale } => full(Kernel::Logistic, location, scale),
        Family::Norm { mean, sd } => full(Kernel::Normal, mean, sd),
        Family::T { df, location, scale } => full(Kernel::student(df), location, scale),
        Family::Clogis { location, scale, lower, upper } => {
            bounded(Kernel::Logistic, location, scale, lower, upper, Masses::Censored)
        }
        Family::Tlogis { location, scale, lower, upper } => {
            bounded(Kernel::Logistic, location, scale, lower, upper, Masses::Truncated)
        }
        Family::Cnorm { location, scale, lower, upper } => {
            bounded(Kernel::Normal, location, scale, lower, upper, Masses::Censored)
        }
        Family::Tnorm { location, scale, lower, upper } => {
            bounded(Kernel::Normal, location, scale, lower, upper, Masses::Truncated)
        }
        Family::Ct { df, location, scale, lower, upper } => {
            bounded(Kernel::student(df), location, scale, lower, upper, Masses::Censored)
        }
        Family::Tt { df, location, scale, lower, upper } => {
            bounded(Kernel::student(df), location, scale, lower, upper, Masses::Truncated)
        }
        _ => return None,
    })
}

fn check_inputs(family: &Family, y: f64) -> Result<()> {
    if !y.is_finite() {
        return Err(ScoreError::domain(format!("observation must be finite, got {y}")));
    }
    family.validate()
}

/// CRPS as a jet seeded on (location, scale).
pub(crate) fn crps_jet(family: &Family, y: f64) -> Result<Jet2> {
    let form = kernel_form(family).ok_or(ScoreError::Unsupported {
        family: family.tag().name(),
        operation: "gradcrps/hesscrps",
    })?;
    check_inputs(family, y)?;
    if let Family::T { df, .. } | Family::Ct { df, .. } | Family::Tt { df, .. } = *family {
        if df <= 1.0 {
            return Err(ScoreError::NonFinite(format!(
                "Student's t needs df > 1 for a finite CRPS, got {df}"
            )));
        }
    }
    let jet = crps_ls(
        &form.kernel,
        y,
        Jet2::variable(form.location, 0),
        Jet2::variable(form.scale, 1),
        form.lower,
        form.upper,
        form.masses,
    );
    if jet.v.is_finite() && jet.g.iter().all(|g| g.is_finite()) {
        Ok(jet)
    } else {
        Err(ScoreError::NonFinite(format!(
            "{} CRPS derivatives are not finite",
            family.tag()
        )))
    }
}

/// LogS as a jet seeded on (location, scale); available for the untruncated
/// and truncated normal, logistic and t families.
pub(crate) fn logs_jet(family: &Family, y: f64) -> Result<Jet2> {
    let form = match family {
        Family::Clogis { .. } | Family::Cnorm { .. } | Family::Ct { .. } => None,
        other => kernel_form(other),
    }
    .ok_or(ScoreError::Unsupported {
        family: family.tag().name(),
        operation: "analytic LogS derivatives",
    })?;
    check_inputs(family, y)?;
    Ok(logs_ls(
        &form.kernel,
        y,
        Jet2::variable(form.location, 0),
        Jet2::variable(form.scale, 1),
        form.lower,
        form.upper,
    ))
}

/// Gradient of the CRPS with respect to (location, scale). Degrees of
/// freedom and limits are held fixed.
pub fn gradcrps(family: &Family, y: f64) -> Result<[f64; 2]> {
    crps_jet(family, y).map(|j| j.g)
}

/// Hessian of the CRPS with respect to (location, scale).
pub fn hesscrps(family: &Family, y: f64) -> Result<[[f64; 2]; 2]> {
    crps_jet(family, y).map(|j| {
        let off = 0.5 * (j.h[0][1] + j.h[1][0]);
        [[j.h[0][0], off], [off, j.h[1][1]]]
    })
}
