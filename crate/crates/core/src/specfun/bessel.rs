use crate::error::{Result, ScoreError};

/// Order of the modified Bessel function of the first kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselOrder {
    Zero,
    One,
}

// Below this the power series is summed; above it the large-argument
// expansion is accurate to well below double precision.
const SERIES_CUTOFF: f64 = 25.0;

/// Modified Bessel function I_0 or I_1 at `x >= 0`.
///
/// With `scaled`, returns `exp(-x) * I_m(x)`, which stays finite for any `x`.
pub fn bessel_i(order: BesselOrder, x: f64, scaled: bool) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(ScoreError::domain(format!("bessel_i needs x >= 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(if scaled { 0.0 } else { f64::INFINITY });
    }
    if x <= SERIES_CUTOFF {
        let v = power_series(order, x);
        Ok(if scaled { v * (-x).exp() } else { v })
    } else {
        let s = asymptotic_scaled(order, x);
        Ok(if scaled { s } else { s * x.exp() })
    }
}

fn power_series(order: BesselOrder, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let (mut term, nu) = match order {
        BesselOrder::Zero => (1.0, 0.0),
        BesselOrder::One => (0.5 * x, 1.0),
    };
    let mut sum = term;
    let mut k = 0.0;
    while term > 1e-17 * sum {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
    }
    sum
}

// e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k prod_{j=1..k}(4nu^2 - (2j-1)^2) / (k! (8x)^k)
fn asymptotic_scaled(order: BesselOrder, x: f64) -> f64 {
    let mu = match order {
        BesselOrder::Zero => 0.0,
        BesselOrder::One => 4.0,
    };
    let mut term = 1.0f64;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_i(BesselOrder::Zero, 0.0, false).unwrap(), 1.0);
        assert_eq!(bessel_i(BesselOrder::One, 0.0, false).unwrap(), 0.0);
    }

    #[test]
    fn known_values() {
        let i0 = bessel_i(BesselOrder::Zero, 2.0, false).unwrap();
        assert!((i0 - 2.279_585_302_336_067).abs() < 1e-14);
        let i1 = bessel_i(BesselOrder::One, 1.0, false).unwrap();
        assert!((i1 - 0.565_159_103_992_485_0).abs() < 1e-15);
    }

    #[test]
    fn branches_agree_at_cutoff() {
        for order in [BesselOrder::Zero, BesselOrder::One] {
            let below = power_series(order, SERIES_CUTOFF) * (-SERIES_CUTOFF).exp();
            let above = asymptotic_scaled(order, SERIES_CUTOFF);
            assert!(((below - above) / above).abs() < 1e-13);
        }
    }

    #[test]
    fn scaled_is_finite_for_large_arguments() {
        let v = bessel_i(BesselOrder::Zero, 2000.0, true).unwrap();
        let want = 1.0 / (2.0 * std::f64::consts::PI * 2000.0).sqrt();
        assert!(v.is_finite() && ((v - want) / want).abs() < 1e-4);
        assert!(bessel_i(BesselOrder::One, -1.0, true).is_err());
    }
}
