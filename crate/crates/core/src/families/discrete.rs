//! Closed forms for the discrete families. Probability masses are built in log space.

use crate::error::Result;
use crate::specfun::{bessel_i, hyp2f1, ln_gamma, reg_inc_beta, reg_inc_gamma, BesselOrder, Tail};

fn ln_choose(n: f64, k: f64) -> f64 {
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

fn integer_value(y: f64) -> Option<f64> {
    (y == y.floor()).then_some(y)
}

// 2 * sum_x f(x) (1{y < x} - F(x) + f(x)/2) (x - y) over the support lo..=hi.
fn finite_support_crps(y: f64, lo: u64, hi: u64, ln_pmf: impl Fn(f64) -> f64) -> f64 {
    let mut cdf = 0.0;
    let mut total = 0.0;
    for x in lo..=hi {
        let x = x as f64;
        let f = ln_pmf(x).exp();
        cdf += f;
        let ind = if y < x { 1.0 } else { 0.0 };
        total += f * (ind - cdf + 0.5 * f) * (x - y);
    }
    2.0 * total
}

fn binom_ln_pmf(x: f64, size: u64, prob: f64) -> f64 {
    let n = size as f64;
    let ln_q = if prob == 1.0 { f64::NEG_INFINITY } else { (-prob).ln_1p() };
    let tail = if n - x == 0.0 { 0.0 } else { (n - x) * ln_q };
    ln_choose(n, x) + x * prob.ln() + tail
}

pub(super) fn crps_binom(y: f64, size: u64, prob: f64) -> f64 {
    finite_support_crps(y, 0, size, |x| binom_ln_pmf(x, size, prob))
}

pub(super) fn logs_binom(y: f64, size: u64, prob: f64) -> f64 {
    match integer_value(y) {
        Some(x) if x >= 0.0 && x <= size as f64 => -binom_ln_pmf(x, size, prob),
        _ => f64::INFINITY,
    }
}

fn hyper_ln_pmf(x: f64, m: u64, n: u64, k: u64) -> f64 {
    let (m, n, k) = (m as f64, n as f64, k as f64);
    ln_choose(m, x) + ln_choose(n, k - x) - ln_choose(m + n, k)
}

fn hyper_support(m: u64, n: u64, k: u64) -> (u64, u64) {
    (k.saturating_sub(n), k.min(m))
}

pub(super) fn crps_hyper(y: f64, m: u64, n: u64, k: u64) -> f64 {
    let (lo, hi) = hyper_support(m, n, k);
    finite_support_crps(y, lo, hi, |x| hyper_ln_pmf(x, m, n, k))
}

pub(super) fn logs_hyper(y: f64, m: u64, n: u64, k: u64) -> f64 {
    let (lo, hi) = hyper_support(m, n, k);
    match integer_value(y) {
        Some(x) if x >= lo as f64 && x <= hi as f64 => -hyper_ln_pmf(x, m, n, k),
        _ => f64::INFINITY,
    }
}

// P(X <= x) for the negative binomial, i.e. I(size, floor(x) + 1, prob).
fn nbinom_cdf(x: f64, size: f64, prob: f64) -> Result<f64> {
    if x < 0.0 {
        Ok(0.0)
    } else {
        reg_inc_beta(size, x.floor() + 1.0, prob)
    }
}

pub(super) fn crps_nbinom(y: f64, size: f64, prob: f64) -> Result<f64> {
    let q = 1.0 - prob;
    let f0 = nbinom_cdf(y, size, prob)?;
    if q == 0.0 {
        return Ok(y * (2.0 * f0 - 1.0));
    }
    let f1 = nbinom_cdf(y - 1.0, size + 1.0, prob)?;
    let h = hyp2f1(size + 1.0, 0.5, 2.0, -4.0 * q / (prob * prob))?;
    Ok(y * (2.0 * f0 - 1.0) - size * q / (prob * prob) * (prob * (2.0 * f1 - 1.0) + h))
}

pub(super) fn logs_nbinom(y: f64, size: f64, prob: f64) -> f64 {
    match integer_value(y) {
        Some(x) if x >= 0.0 => {
            let tail = if x == 0.0 { 0.0 } else { x * (-prob).ln_1p() };
            -(ln_gamma(x + size) - ln_gamma(size) - ln_gamma(x + 1.0) + size * prob.ln() + tail)
        }
        _ => f64::INFINITY,
    }
}

fn pois_ln_pmf(k: f64, lambda: f64) -> f64 {
    k * lambda.ln() - lambda - ln_gamma(k + 1.0)
}

pub(super) fn crps_pois(y: f64, lambda: f64) -> Result<f64> {
    let (cdf, pmf) = if y < 0.0 {
        (0.0, 0.0)
    } else {
        let k = y.floor();
        (
            reg_inc_gamma(k + 1.0, lambda, Tail::Upper)?,
            pois_ln_pmf(k, lambda).exp(),
        )
    };
    let two_l = 2.0 * lambda;
    let bessel = bessel_i(BesselOrder::Zero, two_l, true)? + bessel_i(BesselOrder::One, two_l, true)?;
    Ok((y - lambda) * (2.0 * cdf - 1.0) + 2.0 * lambda * pmf - lambda * bessel)
}

pub(super) fn logs_pois(y: f64, lambda: f64) -> f64 {
    match integer_value(y) {
        Some(k) if k >= 0.0 => -pois_ln_pmf(k, lambda),
        _ => f64::INFINITY,
    }
}
