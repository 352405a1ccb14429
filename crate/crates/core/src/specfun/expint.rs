use super::EULER_GAMMA;
use crate::error::{Result, ScoreError};

/// Exponential integral Ei(x) (principal value for x > 0).
pub fn expint_ei(x: f64) -> Result<f64> {
    if x == 0.0 || x.is_nan() {
        return Err(ScoreError::domain("Ei has a logarithmic singularity at 0"));
    }
    if x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    if x < 0.0 {
        return Ok(-e1(-x));
    }
    if x <= 40.0 {
        Ok(EULER_GAMMA + x.ln() + positive_series(x))
    } else {
        Ok(asymptotic(x))
    }
}

// E1(t) for t > 0
fn e1(t: f64) -> f64 {
    if t <= 1.0 {
        // -gamma - ln t - sum_{k>=1} (-t)^k / (k k!)
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..200 {
            let k = k as f64;
            term *= -t / k;
            let add = term / k;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        -EULER_GAMMA - t.ln() - sum
    } else {
        // Modified Lentz on the continued fraction e^{-t} / (t + 1 - 1^2/(t + 3 - 2^2/(t + 5 - ...)))
        let tiny = 1e-300;
        let mut b = t + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-t).exp()
    }
}

fn positive_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..500 {
        let k = k as f64;
        term *= x / k;
        let add = term / k;
        sum += add;
        if add < 1e-17 * sum {
            break;
        }
    }
    sum
}

fn asymptotic(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..100 {
        let next = term * k as f64 / x;
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    x.exp() / x * sum
}
