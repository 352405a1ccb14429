//! Normal, logistic and Student-t location-scale families with optional
//! truncation, censoring and boundary point masses.
//!
//! Everything here is generic over [`Scalar`], so the same code yields
//! scores (`f64`) and their location/scale derivatives ([`crate::jet::Jet2`]).

use std::f64::consts::{LN_2, PI};

use crate::jet::Scalar;
use crate::specfun::{ln_beta, reg_inc_beta, std_normal_cdf, std_normal_pdf};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Student {
    df: f64,
    // ln(sqrt(df) * B(1/2, df/2)), the log normalizing constant of the density
    ln_norm: f64,
    // H(+inf); only meaningful for df > 1
    h_upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Kernel {
    Normal,
    Logistic,
    Student(Student),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Masses {
    Truncated,
    Censored,
    Explicit { lmass: f64, umass: f64 },
}

impl Kernel {
    pub(crate) fn student(df: f64) -> Kernel {
        let ln_norm = 0.5 * df.ln() + ln_beta(0.5, 0.5 * df);
        let h_upper = if df > 1.0 {
            (LN_2 + 0.5 * df.ln() - (df - 1.0).ln() + ln_beta(0.5, df - 0.5)
                - 2.0 * ln_beta(0.5, 0.5 * df))
                .exp()
        } else {
            f64::NAN
        };
        Kernel::Student(Student {
            df,
            ln_norm,
            h_upper,
        })
    }

    pub(crate) fn cdf(&self, x: f64) -> f64 {
        match self {
            Kernel::Normal => std_normal_cdf(x),
            Kernel::Logistic => expit(x),
            Kernel::Student(s) => {
                let df = s.df;
                let x2 = x * x;
                if x2 < df {
                    let c = 0.5 * reg_inc_beta(0.5, 0.5 * df, x2 / (df + x2)).unwrap_or(f64::NAN);
                    0.5 + c.copysign(x)
                } else {
                    let tail = 0.5 * reg_inc_beta(0.5 * df, 0.5, df / (df + x2)).unwrap_or(f64::NAN);
                    if x < 0.0 {
                        tail
                    } else {
                        1.0 - tail
                    }
                }
            }
        }
    }

    pub(crate) fn pdf(&self, x: f64) -> f64 {
        match self {
            Kernel::Normal => std_normal_pdf(x),
            Kernel::Logistic => {
                let e = (-x.abs()).exp();
                e / ((1.0 + e) * (1.0 + e))
            }
            Kernel::Student(s) => {
                (-s.ln_norm - 0.5 * (s.df + 1.0) * (x * x / s.df).ln_1p()).exp()
            }
        }
    }

    fn dpdf(&self, x: f64) -> f64 {
        match self {
            Kernel::Normal => -x * std_normal_pdf(x),
            Kernel::Logistic => self.pdf(x) * -(x * 0.5).tanh(),
            Kernel::Student(s) => -(s.df + 1.0) * x / (s.df + x * x) * self.pdf(x),
        }
    }

    // G with G' = x f(x) and G(-inf) = G(+inf) = 0.
    fn g(&self, x: f64) -> f64 {
        match self {
            Kernel::Normal => -std_normal_pdf(x),
            Kernel::Logistic => {
                if x > 0.0 {
                    -x * expit(-x) - (-x).exp().ln_1p()
                } else {
                    x * expit(x) - x.exp().ln_1p()
                }
            }
            Kernel::Student(s) => -(s.df + x * x) / (s.df - 1.0) * self.pdf(x),
        }
    }

    // H with H' = -2 f G and H(-inf) = 0.
    fn h(&self, x: f64) -> f64 {
        match self {
            Kernel::Normal => std_normal_cdf(x * std::f64::consts::SQRT_2) / PI.sqrt(),
            Kernel::Logistic => {
                if x > 0.0 {
                    1.0 - logistic_h_nonpos(-x)
                } else {
                    logistic_h_nonpos(x)
                }
            }
            Kernel::Student(s) => {
                let df = s.df;
                let x2 = x * x;
                if x2 < df {
                    let c = 0.5 * reg_inc_beta(0.5, df - 0.5, x2 / (df + x2)).unwrap_or(f64::NAN);
                    s.h_upper * (0.5 + c.copysign(x))
                } else {
                    let half_tail =
                        0.5 * reg_inc_beta(df - 0.5, 0.5, df / (df + x2)).unwrap_or(f64::NAN);
                    if x < 0.0 {
                        s.h_upper * half_tail
                    } else {
                        s.h_upper * (1.0 - half_tail)
                    }
                }
            }
        }
    }

    fn h_upper(&self) -> f64 {
        match self {
            Kernel::Normal => 1.0 / PI.sqrt(),
            Kernel::Logistic => 1.0,
            Kernel::Student(s) => s.h_upper,
        }
    }

    fn cdf_s<S: Scalar>(&self, x: S) -> S {
        let v = x.value();
        x.lift(self.cdf(v), self.pdf(v), self.dpdf(v))
    }

    fn g_s<S: Scalar>(&self, x: S) -> S {
        let v = x.value();
        let f = self.pdf(v);
        x.lift(self.g(v), v * f, f + v * self.dpdf(v))
    }

    fn h_s<S: Scalar>(&self, x: S) -> S {
        let v = x.value();
        let f = self.pdf(v);
        let g = self.g(v);
        x.lift(self.h(v), -2.0 * f * g, -2.0 * (self.dpdf(v) * g + v * f * f))
    }

    fn neg_log_pdf_s<S: Scalar>(&self, x: S) -> S {
        let v = x.value();
        match self {
            Kernel::Normal => x.lift(0.5 * v * v + HALF_LN_2PI, v, 1.0),
            Kernel::Logistic => {
                let a = v.abs();
                x.lift(
                    a + 2.0 * (-a).exp().ln_1p(),
                    2.0 * expit(v) - 1.0,
                    2.0 * self.pdf(v),
                )
            }
            Kernel::Student(s) => {
                let df = s.df;
                let q = df + v * v;
                x.lift(
                    0.5 * (df + 1.0) * (v * v / df).ln_1p() + s.ln_norm,
                    (df + 1.0) * v / q,
                    (df + 1.0) * (df - v * v) / (q * q),
                )
            }
        }
    }
}

fn expit(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn logistic_h_nonpos(x: f64) -> f64 {
    let p = expit(x);
    p - x * p * p - (1.0 - 2.0 * p) * x.exp().ln_1p()
}

// Probability between two standardized limits; `None` means infinite. All
// three kernels are symmetric, so limits in the upper tail are handled via
// reflection to keep relative accuracy.
fn mass_between<S: Scalar>(k: &Kernel, l: Option<S>, u: Option<S>) -> S {
    match (l, u) {
        (None, None) => S::constant(1.0),
        (None, Some(u)) => k.cdf_s(u),
        (Some(l), None) => k.cdf_s(-l),
        (Some(l), Some(u)) => {
            if l.value() > 0.0 {
                k.cdf_s(-l) - k.cdf_s(-u)
            } else {
                k.cdf_s(u) - k.cdf_s(l)
            }
        }
    }
}

fn standardize<S: Scalar>(bound: f64, loc: S, scale: S) -> Option<S> {
    bound
        .is_finite()
        .then(|| (S::constant(bound) - loc) / scale)
}

/// CRPS of the location-scale kernel on `[lower, upper]` with the given
/// boundary treatment. Infinite limits are allowed; a positive point mass on
/// an infinite limit must be rejected by the caller.
pub(crate) fn crps_ls<S: Scalar>(
    k: &Kernel,
    y: f64,
    loc: S,
    scale: S,
    lower: f64,
    upper: f64,
    masses: Masses,
) -> S {
    let one = S::constant(1.0);
    let ys = (S::constant(y) - loc) / scale;
    let l = standardize(lower, loc, scale);
    let u = standardize(upper, loc, scale);

    let (fl, gl, hl) = match l {
        Some(l) => (k.cdf_s(l), k.g_s(l), k.h_s(l)),
        None => (S::constant(0.0), S::constant(0.0), S::constant(0.0)),
    };
    let (fu, gu, hu) = match u {
        Some(u) => (k.cdf_s(u), k.g_s(u), k.h_s(u)),
        None => (one, S::constant(0.0), S::constant(k.h_upper())),
    };
    let (lm, um) = match masses {
        Masses::Truncated => (S::constant(0.0), S::constant(0.0)),
        Masses::Censored => (
            fl,
            match u {
                Some(u) => k.cdf_s(-u),
                None => S::constant(0.0),
            },
        ),
        Masses::Explicit { lmass, umass } => (S::constant(lmass), S::constant(umass)),
    };

    let z = match (l, u) {
        (Some(l), _) if ys.value() < l.value() => l,
        (_, Some(u)) if ys.value() > u.value() => u,
        _ => ys,
    };
    let free = one - lm - um;
    let c = free / mass_between(k, l, u);
    let k_term = ((one - lm * 2.0) * fu + (one - um * 2.0) * fl) / free;
    let fz = k.cdf_s(z);
    let gz = k.g_s(z);

    let mut out = (ys - z).abs() + c * z * (fz * 2.0 - k_term)
        - c * (gz * 2.0 - gu * um * 2.0 - gl * lm * 2.0)
        - c * c * (hu - hl);
    if let Some(u) = u {
        if um.value() != 0.0 {
            out = out + u * um * um;
        }
    }
    if let Some(l) = l {
        if lm.value() != 0.0 {
            out = out - l * lm * lm;
        }
    }
    scale * out
}

/// Negative log density of the kernel truncated to `[lower, upper]`.
pub(crate) fn logs_ls<S: Scalar>(
    k: &Kernel,
    y: f64,
    loc: S,
    scale: S,
    lower: f64,
    upper: f64,
) -> S {
    if y < lower || y > upper {
        return S::constant(f64::INFINITY);
    }
    let z = (S::constant(y) - loc) / scale;
    let mut out = k.neg_log_pdf_s(z) + scale.ln();
    if lower.is_finite() || upper.is_finite() {
        let l = standardize(lower, loc, scale);
        let u = standardize(upper, loc, scale);
        out = out + mass_between(k, l, u).ln();
    }
    out
}

pub(crate) fn crps_plain(k: Kernel, y: f64, loc: f64, scale: f64) -> f64 {
    crps_ls(&k, y, loc, scale, f64::NEG_INFINITY, f64::INFINITY, Masses::Truncated)
}

pub(crate) fn crps_bounded(
    k: Kernel,
    y: f64,
    loc: f64,
    scale: f64,
    lower: f64,
    upper: f64,
    masses: Masses,
) -> f64 {
    crps_ls(&k, y, loc, scale, lower, upper, masses)
}

pub(crate) fn logs_bounded(k: Kernel, y: f64, loc: f64, scale: f64, lower: f64, upper: f64) -> f64 {
    logs_ls(&k, y, loc, scale, lower, upper)
}

/// Standard logistic log CDF, `ln F(x)`.
pub(crate) fn log_expit(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

pub(crate) fn logistic_cdf(x: f64) -> f64 {
    expit(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn central<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
        let h = 1e-5;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn kernel_derivative_identities() {
        for k in [Kernel::Normal, Kernel::Logistic, Kernel::student(3.5)] {
            for &x in &[-6.0, -1.3, -0.2, 0.0, 0.4, 2.5, 7.0] {
                let f = k.pdf(x);
                assert!((central(|t| k.cdf(t), x) - f).abs() < 1e-9, "{k:?} F' at {x}");
                assert!((central(|t| k.g(t), x) - x * f).abs() < 1e-9, "{k:?} G' at {x}");
                let dh = -2.0 * f * k.g(x);
                assert!((central(|t| k.h(t), x) - dh).abs() < 1e-9, "{k:?} H' at {x}");
                assert!((central(|t| k.pdf(t), x) - k.dpdf(x)).abs() < 1e-9, "{k:?} f' at {x}");
            }
        }
    }

    #[test]
    fn h_limits() {
        for k in [Kernel::Normal, Kernel::Logistic, Kernel::student(2.2)] {
            assert!(k.h(-1e6).abs() < 1e-9);
            assert!((k.h(1e6) - k.h_upper()).abs() < 1e-6 * k.h_upper());
        }
    }

    #[test]
    fn student_tends_to_normal() {
        let t = Kernel::student(1e7);
        for &x in &[-2.0, 0.3, 1.7] {
            assert!((t.cdf(x) - std_normal_cdf(x)).abs() < 1e-7);
            assert!((t.h(x) - Kernel::Normal.h(x)).abs() < 1e-6);
        }
    }
}
