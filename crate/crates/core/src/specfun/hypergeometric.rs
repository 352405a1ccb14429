use super::gamma::ln_gamma;
use super::quadrature;
use crate::error::{Result, ScoreError};

const SERIES_EPS: f64 = 1e-17;
const SERIES_MAX_TERMS: usize = 20_000;
// Above this |argument| the Gauss series converges too slowly and the Euler
// integral is used instead.
const SERIES_LIMIT: f64 = 0.75;

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.round()
}

/// Gauss hypergeometric function 2F1(a, b; c; x) for real arguments with `x < 1`.
///
/// Negative arguments are first mapped into `[0, 1)` with a Pfaff
/// transformation. Terminating series are summed exactly; otherwise the Gauss
/// series is used while the (transformed) argument stays below 0.75, and the
/// Euler integral representation is integrated numerically beyond that.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && x.is_finite()) {
        return Err(ScoreError::domain("hyp2f1 needs finite arguments"));
    }
    if is_nonpositive_integer(c) {
        return Err(ScoreError::domain(format!(
            "hyp2f1 undefined for nonpositive integer c = {c}"
        )));
    }
    if x >= 1.0 {
        return Err(ScoreError::domain(format!("hyp2f1 needs x < 1, got {x}")));
    }
    if x == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) || x.abs() <= 0.5 {
        return gauss_series(a, b, c, x);
    }
    if x < 0.0 {
        // Pfaff: 2F1(a,b;c;x) = (1-x)^{-a} 2F1(a, c-b; c; x/(x-1))
        //                     = (1-x)^{-b} 2F1(c-a, b; c; x/(x-1))
        let w = x / (x - 1.0);
        let one_minus = 1.0 - x;
        if is_nonpositive_integer(c - b) {
            return Ok(one_minus.powf(-a) * gauss_series(a, c - b, c, w)?);
        }
        if is_nonpositive_integer(c - a) {
            return Ok(one_minus.powf(-b) * gauss_series(c - a, b, c, w)?);
        }
        if w <= SERIES_LIMIT {
            return Ok(one_minus.powf(-a) * gauss_series(a, c - b, c, w)?);
        }
        return euler_integral(a, b, c, x);
    }
    if x <= SERIES_LIMIT {
        return gauss_series(a, b, c, x);
    }
    euler_integral(a, b, c, x).or_else(|_| gauss_series(a, b, c, x))
}

fn gauss_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..SERIES_MAX_TERMS {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() <= SERIES_EPS * sum.abs() {
            return Ok(sum);
        }
    }
    Err(ScoreError::NonConvergence(format!(
        "hyp2f1 series at a={a}, b={b}, c={c}, x={x}"
    )))
}

// 2F1 = Gamma(c)/(Gamma(b)Gamma(c-b)) * int_0^1 t^{b-1}(1-t)^{c-b-1}(1-xt)^{-a} dt,
// integrated after t = sin^2(theta). The substituted integrand is bounded when
// b >= 1/2 and c - b >= 1/2, which covers every caller in this crate.
fn euler_integral(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let (a, b) = if b >= 0.5 && c - b >= 0.5 {
        (a, b)
    } else if a >= 0.5 && c - a >= 0.5 {
        (b, a)
    } else {
        return Err(ScoreError::NonConvergence(format!(
            "hyp2f1 at a={a}, b={b}, c={c}, x={x} is outside the supported parameter range"
        )));
    };
    let p = 2.0 * b - 1.0;
    let q = 2.0 * (c - b) - 1.0;
    let integrand = |theta: f64| {
        let (s, co) = theta.sin_cos();
        let s2 = s * s;
        let base = (1.0 - x * s2).powf(-a);
        2.0 * pow_nonneg(s, p) * pow_nonneg(co, q) * base
    };
    let (value, err) = quadrature::integrate(
        integrand,
        0.0,
        std::f64::consts::FRAC_PI_2,
        0.0,
        1e-14,
        4000,
    );
    if !(err <= 1e-11 * value.abs()) {
        return Err(ScoreError::NonConvergence(format!(
            "hyp2f1 integral at a={a}, b={b}, c={c}, x={x}"
        )));
    }
    let norm = (ln_gamma(c) - ln_gamma(b) - ln_gamma(c - b)).exp();
    Ok(norm * value)
}

#[inline]
fn pow_nonneg(base: f64, exp: f64) -> f64 {
    if exp == 0.0 {
        1.0
    } else {
        base.max(0.0).powf(exp)
    }
}
