//! Second-order forward-mode differentiation in two variables.
//!
//! The location-scale closed forms are written once, generic over
//! [`Scalar`]. Evaluated with `f64` they give the score; evaluated with
//! [`Jet2`] seeded on (location, scale) they give the score together with its
//! exact gradient and Hessian.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Numeric type the generic closed forms are written against.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn constant(v: f64) -> Self;
    fn value(&self) -> f64;

    /// Applies a scalar function given its value and first two derivatives at `self.value()`.
    fn lift(self, f0: f64, f1: f64, f2: f64) -> Self;

    fn exp(self) -> Self {
        let e = self.value().exp();
        self.lift(e, e, e)
    }

    fn ln(self) -> Self {
        let v = self.value();
        self.lift(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    fn sqrt(self) -> Self {
        let v = self.value();
        let s = v.sqrt();
        self.lift(s, 0.5 / s, -0.25 / (s * v))
    }

    fn powf(self, p: f64) -> Self {
        let v = self.value();
        let f0 = v.powf(p);
        self.lift(f0, p * v.powf(p - 1.0), p * (p - 1.0) * v.powf(p - 2.0))
    }

    fn abs(self) -> Self {
        if self.value() < 0.0 {
            -self
        } else {
            self
        }
    }

    fn recip(self) -> Self {
        let v = self.value();
        self.lift(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }
}

impl Scalar for f64 {
    #[inline]
    fn constant(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(&self) -> f64 {
        *self
    }
    #[inline]
    fn lift(self, f0: f64, _f1: f64, _f2: f64) -> Self {
        f0
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn recip(self) -> Self {
        1.0 / self
    }
}

/// Value, gradient and Hessian of a quantity with respect to two inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub g: [f64; 2],
    pub h: [[f64; 2]; 2],
}

impl Jet2 {
    /// Independent variable number `index` (0 or 1) at value `v`.
    pub fn variable(v: f64, index: usize) -> Self {
        let mut g = [0.0; 2];
        g[index] = 1.0;
        Jet2 {
            v,
            g,
            h: [[0.0; 2]; 2],
        }
    }
}

impl Scalar for Jet2 {
    fn constant(v: f64) -> Self {
        Jet2 {
            v,
            g: [0.0; 2],
            h: [[0.0; 2]; 2],
        }
    }

    fn value(&self) -> f64 {
        self.v
    }

    fn lift(self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut out = Jet2::constant(f0);
        for i in 0..2 {
            out.g[i] = f1 * self.g[i];
            for j in 0..2 {
                out.h[i][j] = f1 * self.h[i][j] + f2 * self.g[i] * self.g[j];
            }
        }
        out
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        let mut out = self;
        out.v += o.v;
        for i in 0..2 {
            out.g[i] += o.g[i];
            for j in 0..2 {
                out.h[i][j] += o.h[i][j];
            }
        }
        out
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self * -1.0
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let mut out = Jet2::constant(self.v * o.v);
        for i in 0..2 {
            out.g[i] = self.g[i] * o.v + self.v * o.g[i];
            for j in 0..2 {
                out.h[i][j] = self.h[i][j] * o.v
                    + self.v * o.h[i][j]
                    + self.g[i] * o.g[j]
                    + o.g[i] * self.g[j];
            }
        }
        out
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, c: f64) -> Jet2 {
        self.v += c;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(mut self, c: f64) -> Jet2 {
        self.v -= c;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(mut self, c: f64) -> Jet2 {
        self.v *= c;
        for i in 0..2 {
            self.g[i] *= c;
            for j in 0..2 {
                self.h[i][j] *= c;
            }
        }
        self
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, c: f64) -> Jet2 {
        self * (1.0 / c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let x = Jet2::variable(2.0, 0);
        let y = Jet2::variable(3.0, 1);
        // f = x^2 y, df = (2xy, x^2), d2f = [[2y, 2x], [2x, 0]]
        let f = x * x * y;
        assert_eq!(f.v, 12.0);
        assert_eq!(f.g, [12.0, 4.0]);
        assert_eq!(f.h, [[6.0, 4.0], [4.0, 0.0]]);
    }

    #[test]
    fn chain_rule_through_lift() {
        let x = Jet2::variable(0.7, 0);
        let y = Jet2::variable(-0.2, 1);
        // f = exp(x * y) / x
        let f = (x * y).exp() / x;
        let e = (0.7f64 * -0.2).exp();
        let dfdx = e * (-0.2 / 0.7 - 1.0 / 0.49);
        let dfdy = e;
        assert!((f.g[0] - dfdx).abs() < 1e-14);
        assert!((f.g[1] - dfdy).abs() < 1e-14);
        // d2f/dy2 = x e^{xy}
        assert!((f.h[1][1] - 0.7 * e).abs() < 1e-14);
        assert_eq!(f.h[0][1], f.h[1][0]);
    }
}
