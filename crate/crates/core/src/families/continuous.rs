//! Closed forms for the continuous families outside the normal/logistic/t kernel set.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

use super::locscale::{self, log_expit, logistic_cdf, Kernel, Masses};
use crate::error::Result;
use crate::specfun::{
    expint_ei, gamma_fn, ln_beta, ln_gamma, reg_inc_beta, reg_inc_gamma, std_normal_cdf, Tail,
    EULER_GAMMA,
};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
// |shape| below this uses the shape = 0 limit of GEV/GPD formulas.
const SHAPE_ZERO: f64 = 1e-8;

fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

pub(super) fn crps_lapl(y: f64, location: f64, scale: f64) -> f64 {
    let z = ((y - location) / scale).abs();
    scale * (z + (-z).exp() - 0.75)
}

pub(super) fn logs_lapl(y: f64, location: f64, scale: f64) -> f64 {
    (y - location).abs() / scale + (2.0 * scale).ln()
}

pub(super) fn crps_2pexp(y: f64, location: f64, s1: f64, s2: f64) -> f64 {
    let x = y - location;
    let s = if x < 0.0 { s1 } else { s2 };
    let sum = s1 + s2;
    x.abs() + 2.0 * s * s / sum * (-x.abs() / s).exp_m1()
        + (s1.powi(3) + s2.powi(3)) / (2.0 * sum * sum)
}

pub(super) fn logs_2pexp(y: f64, location: f64, s1: f64, s2: f64) -> f64 {
    let x = y - location;
    let s = if x < 0.0 { s1 } else { s2 };
    x.abs() / s + (s1 + s2).ln()
}

// Each half is a generalized truncated/censored normal carrying the other
// half's probability as a point mass at zero.
pub(super) fn crps_2pnorm(y: f64, location: f64, s1: f64, s2: f64) -> f64 {
    let x = y - location;
    let sum = s1 + s2;
    let left = locscale::crps_bounded(
        Kernel::Normal,
        x.min(0.0) / s1,
        0.0,
        1.0,
        f64::NEG_INFINITY,
        0.0,
        Masses::Explicit {
            lmass: 0.0,
            umass: s2 / sum,
        },
    );
    let right = locscale::crps_bounded(
        Kernel::Normal,
        x.max(0.0) / s2,
        0.0,
        1.0,
        0.0,
        f64::INFINITY,
        Masses::Explicit {
            lmass: s1 / sum,
            umass: 0.0,
        },
    );
    s1 * left + s2 * right
}

pub(super) fn logs_2pnorm(y: f64, location: f64, s1: f64, s2: f64) -> f64 {
    let x = y - location;
    let s = if x < 0.0 { s1 } else { s2 };
    let z = x / s;
    0.5 * z * z + HALF_LN_2PI + (0.5 * (s1 + s2)).ln()
}

pub(super) fn crps_exp(y: f64, rate: f64) -> f64 {
    if y < 0.0 {
        -y + 0.5 / rate
    } else {
        let cdf = -(-rate * y).exp_m1();
        y - 2.0 * cdf / rate + 0.5 / rate
    }
}

pub(super) fn logs_exp2(y: f64, location: f64, scale: f64) -> f64 {
    if y < location {
        f64::INFINITY
    } else {
        (y - location) / scale + scale.ln()
    }
}

pub(super) fn crps_gamma(y: f64, shape: f64, rate: f64) -> Result<f64> {
    let (f0, f1) = if y > 0.0 {
        (
            reg_inc_gamma(shape, rate * y, Tail::Lower)?,
            reg_inc_gamma(shape + 1.0, rate * y, Tail::Lower)?,
        )
    } else {
        (0.0, 0.0)
    };
    Ok(y * (2.0 * f0 - 1.0) - shape / rate * (2.0 * f1 - 1.0)
        - 1.0 / (rate * ln_beta(0.5, shape).exp()))
}

pub(super) fn logs_gamma(y: f64, shape: f64, rate: f64) -> f64 {
    if y < 0.0 {
        return f64::INFINITY;
    }
    if y == 0.0 {
        return match shape.partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Less) => f64::NEG_INFINITY,
            Some(std::cmp::Ordering::Equal) => -rate.ln(),
            _ => f64::INFINITY,
        };
    }
    -(shape * rate.ln() + (shape - 1.0) * y.ln() - rate * y - ln_gamma(shape))
}

pub(super) fn crps_llapl(y: f64, locationlog: f64, scalelog: f64) -> f64 {
    let s = scalelog;
    let median = locationlog.exp();
    let (cdf, a) = if y <= 0.0 {
        (0.0, 1.0 / (1.0 + s))
    } else {
        let w = (y.ln() - locationlog) / s;
        if y < median {
            let cdf = 0.5 * w.exp();
            (cdf, (1.0 - (2.0 * cdf).powf(1.0 + s)) / (1.0 + s))
        } else {
            let sf = 0.5 * (-w).exp();
            (1.0 - sf, -(1.0 - (2.0 * sf).powf(1.0 - s)) / (1.0 - s))
        }
    };
    y * (2.0 * cdf - 1.0) + median * (s / (4.0 - s * s) + a)
}

pub(super) fn logs_llapl(y: f64, locationlog: f64, scalelog: f64) -> f64 {
    if y <= 0.0 {
        return f64::INFINITY;
    }
    (2.0 * scalelog * y).ln() + (y.ln() - locationlog).abs() / scalelog
}

pub(super) fn crps_llogis(y: f64, locationlog: f64, scalelog: f64) -> Result<f64> {
    let s = scalelog;
    let cdf = if y <= 0.0 {
        0.0
    } else {
        logistic_cdf((y.ln() - locationlog) / s)
    };
    let ib = reg_inc_beta(1.0 + s, 1.0 - s, cdf)?;
    Ok(y * (2.0 * cdf - 1.0)
        - locationlog.exp() * ln_beta(1.0 + s, 1.0 - s).exp() * (2.0 * ib + s - 1.0))
}

pub(super) fn logs_llogis(y: f64, locationlog: f64, scalelog: f64) -> f64 {
    if y <= 0.0 {
        return f64::INFINITY;
    }
    let z = (y.ln() - locationlog) / scalelog;
    // -ln f(z) for the standard logistic
    -(log_expit(z) + log_expit(-z)) + (scalelog * y).ln()
}

pub(super) fn crps_lnorm(y: f64, meanlog: f64, sdlog: f64) -> f64 {
    let (cdf, inner) = if y <= 0.0 {
        (0.0, 0.0)
    } else {
        let ly = y.ln();
        (
            std_normal_cdf((ly - meanlog) / sdlog),
            std_normal_cdf((ly - meanlog - sdlog * sdlog) / sdlog),
        )
    };
    y * (2.0 * cdf - 1.0)
        - 2.0 * (meanlog + 0.5 * sdlog * sdlog).exp() * (inner - std_normal_cdf(-sdlog * FRAC_1_SQRT_2))
}

pub(super) fn logs_lnorm(y: f64, meanlog: f64, sdlog: f64) -> f64 {
    if y <= 0.0 {
        return f64::INFINITY;
    }
    let z = (y.ln() - meanlog) / sdlog;
    0.5 * z * z + HALF_LN_2PI + (sdlog * y).ln()
}

pub(super) fn crps_beta(y: f64, a: f64, b: f64, lower: f64, upper: f64) -> Result<f64> {
    let width = upper - lower;
    let x = (y - lower) / width;
    let (f0, f1) = if x <= 0.0 {
        (0.0, 0.0)
    } else if x >= 1.0 {
        (1.0, 1.0)
    } else {
        (reg_inc_beta(a, b, x)?, reg_inc_beta(a + 1.0, b, x)?)
    };
    let ratio = (ln_beta(2.0 * a, 2.0 * b) - a.ln() - 2.0 * ln_beta(a, b)).exp();
    Ok(width * (x * (2.0 * f0 - 1.0) + a / (a + b) * (1.0 - 2.0 * f1 - 2.0 * ratio)))
}

pub(super) fn logs_beta(y: f64, a: f64, b: f64, lower: f64, upper: f64) -> f64 {
    let width = upper - lower;
    let x = (y - lower) / width;
    if !(0.0..=1.0).contains(&x) {
        return f64::INFINITY;
    }
    -(xlogy(a - 1.0, x) + xlogy(b - 1.0, 1.0 - x) - ln_beta(a, b)) + width.ln()
}

pub(super) fn crps_unif(y: f64, min: f64, max: f64, lmass: f64, umass: f64) -> f64 {
    let width = max - min;
    let x = (y - min) / width;
    let p = x.clamp(0.0, 1.0);
    let a = 1.0 - lmass - umass;
    width * ((x - p).abs() + p * p * a - p * (1.0 - 2.0 * lmass) + a * a / 3.0 + (1.0 - lmass) * umass)
}

pub(super) fn logs_unif(y: f64, min: f64, max: f64) -> f64 {
    if y < min || y > max {
        f64::INFINITY
    } else {
        (max - min).ln()
    }
}

pub(super) fn crps_expm(y: f64, location: f64, scale: f64, mass: f64) -> f64 {
    let x = (y - location) / scale;
    let cdf = if x < 0.0 { 0.0 } else { -(-x).exp_m1() };
    let keep = 1.0 - mass;
    scale * (x.abs() - 2.0 * keep * cdf + 0.5 * keep * keep)
}

pub(super) fn crps_clogis(y: f64, location: f64, scale: f64, lower: f64, upper: f64) -> f64 {
    let l = (lower - location) / scale;
    let u = (upper - location) / scale;
    let x = (y - location) / scale;
    let z = x.clamp(l, u);
    let log_f = |t: f64| {
        if t == f64::INFINITY {
            0.0
        } else {
            log_expit(t)
        }
    };
    let cdf = |t: f64| if t == f64::INFINITY { 1.0 } else { logistic_cdf(t) };
    scale
        * ((x - z).abs() + z + log_f(-l) + log_f(u) - 2.0 * log_f(z) - cdf(u) + cdf(l))
}

pub(super) fn crps_gev(y: f64, location: f64, scale: f64, shape: f64) -> Result<f64> {
    let x = (y - location) / scale;
    if shape.abs() < SHAPE_ZERO {
        let t = (-x).exp();
        let ei = if t > 0.0 {
            expint_ei(-t)?
        } else {
            // Ei(-t) ~ gamma + ln t as t -> 0
            EULER_GAMMA - x
        };
        return Ok(scale * (-x - 2.0 * ei + EULER_GAMMA - LN_2));
    }
    let xi = shape;
    let g1 = gamma_fn(1.0 - xi);
    let t = 1.0 + xi * x;
    let (cdf, g) = if t <= 0.0 {
        if xi > 0.0 {
            (0.0, 0.0)
        } else {
            (1.0, -1.0 / xi + g1 / xi)
        }
    } else {
        let w = t.powf(-1.0 / xi);
        let cdf = (-w).exp();
        let upper = reg_inc_gamma(1.0 - xi, w, Tail::Upper)?;
        (cdf, -cdf / xi + upper * g1 / xi)
    };
    Ok(scale * (x * (2.0 * cdf - 1.0) - 2.0 * g - (1.0 - (2.0 - xi.exp2()) * g1) / xi))
}

pub(super) fn logs_gev(y: f64, location: f64, scale: f64, shape: f64) -> f64 {
    let x = (y - location) / scale;
    if shape.abs() < SHAPE_ZERO {
        return scale.ln() + x + (-x).exp();
    }
    let t = 1.0 + shape * x;
    if t <= 0.0 {
        return f64::INFINITY;
    }
    scale.ln() + (1.0 + 1.0 / shape) * t.ln() + t.powf(-1.0 / shape)
}

pub(super) fn crps_gpd(y: f64, location: f64, scale: f64, shape: f64, mass: f64) -> f64 {
    let x = (y - location) / scale;
    let xi = shape;
    // (1 - F(x))^(1 - xi)
    let sf_pow = if x < 0.0 {
        1.0
    } else if xi.abs() < SHAPE_ZERO {
        (-x).exp()
    } else {
        let t = 1.0 + xi * x;
        if t <= 0.0 {
            0.0
        } else {
            t.powf((xi - 1.0) / xi)
        }
    };
    let keep = 1.0 - mass;
    scale * (x.abs() - 2.0 * keep / (1.0 - xi) * (1.0 - sf_pow) + keep * keep / (2.0 - xi))
}

pub(super) fn logs_gpd(y: f64, location: f64, scale: f64, shape: f64) -> f64 {
    let x = (y - location) / scale;
    if x < 0.0 {
        return f64::INFINITY;
    }
    if shape.abs() < SHAPE_ZERO {
        return x + scale.ln();
    }
    let t = 1.0 + shape * x;
    if t <= 0.0 {
        return f64::INFINITY;
    }
    scale.ln() + (1.0 + 1.0 / shape) * t.ln()
}
