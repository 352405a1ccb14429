//! Reference implementations used only by the tests. Nothing here calls the
//! library's special functions; CDFs come from elementary formulas, `libm`, or
//! quadrature of the density.
#![allow(dead_code)]

use properscore::{Family, MixtureNormal};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel_close(a: f64, b: f64, abs: f64, rel: f64) -> bool {
    (a - b).abs() <= abs.max(rel * b.abs().max(a.abs()))
}

// ---------------------------------------------------------------- quadrature

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let d = h * XGK[i];
        let s = f(c - d) + f(c + d);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive Gauss-Kronrod on a finite interval.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let mut parts = vec![(a, b, gk15(f, a, b))];
    for _ in 0..4000 {
        let total: f64 = parts.iter().map(|p| p.2 .0).sum();
        let err: f64 = parts.iter().map(|p| p.2 .1).sum();
        if err <= tol.max(1e-14 * total.abs()) {
            break;
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .unwrap();
        let (lo, hi, _) = parts.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        parts.push((lo, mid, gk15(f, lo, mid)));
        parts.push((mid, hi, gk15(f, mid, hi)));
    }
    parts.iter().map(|p| p.2 .0).sum()
}

/// Integral over [a, inf) with x = a + s t / (1 - t).
pub fn integrate_upper(f: &dyn Fn(f64) -> f64, a: f64, s: f64, tol: f64) -> f64 {
    let g = |t: f64| {
        let x = a + s * t / (1.0 - t);
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v * s / ((1.0 - t) * (1.0 - t))
        }
    };
    integrate(&g, 0.0, 1.0, tol)
}

/// Integral over (-inf, b].
pub fn integrate_lower(f: &dyn Fn(f64) -> f64, b: f64, s: f64, tol: f64) -> f64 {
    integrate_upper(&|x| f(-x), -b, s, tol)
}

/// Integral over [a, b] with either end possibly infinite, split at `cuts`.
pub fn integrate_range(f: &dyn Fn(f64) -> f64, a: f64, b: f64, cuts: &[f64], s: f64, tol: f64) -> f64 {
    let mut pts: Vec<f64> = cuts
        .iter()
        .copied()
        .filter(|c| c.is_finite() && *c > a && *c < b)
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.is_empty() && !a.is_finite() && !b.is_finite() {
        pts.push(0.0);
    }
    let mut total = 0.0;
    let mut left = a;
    for &p in &pts {
        total += if left.is_finite() {
            integrate(f, left, p, tol)
        } else {
            integrate_lower(f, p, s, tol)
        };
        left = p;
    }
    total += match (left.is_finite(), b.is_finite()) {
        (true, true) => integrate(f, left, b, tol),
        (true, false) => integrate_upper(f, left, s, tol),
        (false, true) => integrate_lower(f, b, s, tol),
        (false, false) => unreachable!(),
    };
    total
}

// ---------------------------------------------------------------- reference CDFs

pub fn norm_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

pub fn norm_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

pub fn logis_cdf(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

pub fn lapl_cdf(z: f64) -> f64 {
    if z < 0.0 {
        0.5 * z.exp()
    } else {
        1.0 - 0.5 * (-z).exp()
    }
}

fn t_pdf(df: f64, z: f64) -> f64 {
    let ln_c = libm::lgamma(0.5 * (df + 1.0)) - libm::lgamma(0.5 * df) - 0.5 * (df * std::f64::consts::PI).ln();
    (ln_c - 0.5 * (df + 1.0) * (z * z / df).ln_1p()).exp()
}

pub fn t_cdf(df: f64, z: f64) -> f64 {
    let tail = integrate_upper(&|x| t_pdf(df, x), z.abs(), 1.0, 1e-15);
    if z > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Regularized lower incomplete gamma by quadrature with t = s^(1/a).
pub fn gamma_cdf(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let lg = libm::lgamma(a);
    if x < a + 1.0 {
        let f = |s: f64| (-s.powf(1.0 / a)).exp();
        let ln_c = -lg - a.ln();
        integrate(&f, 0.0, x.powf(a), 1e-16) * ln_c.exp()
    } else {
        let f = |t: f64| ((a - 1.0) * t.ln() - t - lg).exp();
        1.0 - integrate_upper(&f, x, 1.0, 1e-16)
    }
}

fn ln_beta(a: f64, b: f64) -> f64 {
    libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
}

pub fn beta_cdf(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    if x > 0.5 {
        return 1.0 - beta_cdf(b, a, 1.0 - x);
    }
    let f = |s: f64| (1.0 - s.powf(1.0 / a)).powf(b - 1.0);
    integrate(&f, 0.0, x.powf(a), 1e-16) * (-ln_beta(a, b) - a.ln()).exp()
}

// ---------------------------------------------------------------- CRPS oracles

/// Piecewise description of a predictive CDF for quadrature.
struct Cdf<'a> {
    f: Box<dyn Fn(f64) -> f64 + 'a>,
    lo: f64,
    hi: f64,
    cuts: Vec<f64>,
    scale: f64,
}

fn bounded<'a>(
    base: impl Fn(f64) -> f64 + 'a,
    lower: f64,
    upper: f64,
    lmass: f64,
    umass: f64,
    loc: f64,
    scale: f64,
) -> Cdf<'a> {
    let fl = if lower.is_finite() { base(lower) } else { 0.0 };
    let fu = if upper.is_finite() { base(upper) } else { 1.0 };
    let c = (1.0 - lmass - umass) / (fu - fl);
    Cdf {
        f: Box::new(move |x| lmass + c * (base(x) - fl)),
        lo: lower,
        hi: upper,
        cuts: vec![loc],
        scale,
    }
}

fn cdf_of(f: &Family) -> Cdf<'_> {
    use Family::*;
    let inf = f64::INFINITY;
    match *f {
        Norm { mean, sd } => unbounded(move |x| norm_cdf((x - mean) / sd), mean, sd),
        Logis { location, scale } => unbounded(move |x| logis_cdf((x - location) / scale), location, scale),
        Lapl { location, scale } => unbounded(move |x| lapl_cdf((x - location) / scale), location, scale),
        T { df, location, scale } => unbounded(move |x| t_cdf(df, (x - location) / scale), location, scale),
        TwoPieceExp { location, scale1, scale2 } => unbounded(
            move |x| {
                let p = scale1 / (scale1 + scale2);
                if x < location {
                    p * ((x - location) / scale1).exp()
                } else {
                    1.0 - (1.0 - p) * (-(x - location) / scale2).exp()
                }
            },
            location,
            scale1.max(scale2),
        ),
        TwoPieceNorm { location, scale1, scale2 } => unbounded(
            move |x| {
                let s = scale1 + scale2;
                if x < location {
                    2.0 * scale1 / s * norm_cdf((x - location) / scale1)
                } else {
                    1.0 - 2.0 * scale2 / s * norm_cdf(-(x - location) / scale2)
                }
            },
            location,
            scale1.max(scale2),
        ),
        Mixnorm(ref mix) => {
            let mix: &MixtureNormal = mix;
            let cuts = mix.means().to_vec();
            let s = mix.sds().iter().copied().fold(0.0, f64::max);
            Cdf {
                f: Box::new(move |x| {
                    mix.means()
                        .iter()
                        .zip(mix.sds())
                        .zip(mix.weights())
                        .map(|((m, s), w)| w * norm_cdf((x - m) / s))
                        .sum()
                }),
                lo: -inf,
                hi: inf,
                cuts,
                scale: s,
            }
        }
        Exp { rate } => Cdf {
            f: Box::new(move |x| -(-rate * x).exp_m1()),
            lo: 0.0,
            hi: inf,
            cuts: vec![],
            scale: 1.0 / rate,
        },
        ExpM { location, scale, mass } => Cdf {
            f: Box::new(move |x| mass - (1.0 - mass) * (-(x - location) / scale).exp_m1()),
            lo: location,
            hi: inf,
            cuts: vec![],
            scale,
        },
        Gamma { shape, rate } => Cdf {
            f: Box::new(move |x| gamma_cdf(shape, rate * x)),
            lo: 0.0,
            hi: inf,
            cuts: vec![shape / rate],
            scale: shape.sqrt() / rate,
        },
        Lnorm { meanlog, sdlog } => Cdf {
            f: Box::new(move |x| norm_cdf((x.ln() - meanlog) / sdlog)),
            lo: 0.0,
            hi: inf,
            cuts: vec![meanlog.exp()],
            scale: meanlog.exp(),
        },
        Llapl { locationlog, scalelog } => Cdf {
            f: Box::new(move |x| lapl_cdf((x.ln() - locationlog) / scalelog)),
            lo: 0.0,
            hi: inf,
            cuts: vec![locationlog.exp()],
            scale: locationlog.exp(),
        },
        Llogis { locationlog, scalelog } => Cdf {
            f: Box::new(move |x| logis_cdf((x.ln() - locationlog) / scalelog)),
            lo: 0.0,
            hi: inf,
            cuts: vec![locationlog.exp()],
            scale: locationlog.exp(),
        },
        Beta { shape1, shape2, lower, upper } => Cdf {
            f: Box::new(move |x| beta_cdf(shape1, shape2, (x - lower) / (upper - lower))),
            lo: lower,
            hi: upper,
            cuts: vec![],
            scale: upper - lower,
        },
        Unif { min, max, lmass, umass } => {
            bounded(move |x| (x - min) / (max - min), min, max, lmass, umass, min, max - min)
        }
        Gev { location, scale, shape } => {
            let edge = location - scale / shape;
            // F is exactly 0 (or 1 to double precision) beyond these clamps
            let (lo, hi) = if shape > 0.0 {
                (edge.max(location - 40.0 * scale), inf)
            } else if shape < 0.0 {
                (-inf, edge.min(location + 60.0 * scale))
            } else {
                (-inf, inf)
            };
            Cdf {
                f: Box::new(move |x| {
                    let z = (x - location) / scale;
                    let t = if shape == 0.0 {
                        (-z).exp()
                    } else {
                        (1.0 + shape * z).max(0.0).powf(-1.0 / shape)
                    };
                    (-t).exp()
                }),
                lo,
                hi,
                cuts: vec![location],
                scale,
            }
        }
        Gpd { location, scale, shape, mass } => {
            let hi = if shape < 0.0 { location - scale / shape } else { inf };
            Cdf {
                f: Box::new(move |x| {
                    let z = (x - location) / scale;
                    let surv = if shape == 0.0 {
                        (-z).exp()
                    } else {
                        (1.0 + shape * z).max(0.0).powf(-1.0 / shape)
                    };
                    mass + (1.0 - mass) * (1.0 - surv)
                }),
                lo: location,
                hi,
                cuts: vec![],
                scale,
            }
        }
        Tnorm { location, scale, lower, upper } => {
            bounded(move |x| norm_cdf((x - location) / scale), lower, upper, 0.0, 0.0, location, scale)
        }
        Tlogis { location, scale, lower, upper } => {
            bounded(move |x| logis_cdf((x - location) / scale), lower, upper, 0.0, 0.0, location, scale)
        }
        Tt { df, location, scale, lower, upper } => {
            bounded(move |x| t_cdf(df, (x - location) / scale), lower, upper, 0.0, 0.0, location, scale)
        }
        Cnorm { location, scale, lower, upper } => {
            let base = move |x: f64| norm_cdf((x - location) / scale);
            censored(base, lower, upper, location, scale)
        }
        Clogis { location, scale, lower, upper } => {
            let base = move |x: f64| logis_cdf((x - location) / scale);
            censored(base, lower, upper, location, scale)
        }
        Ct { df, location, scale, lower, upper } => {
            let base = move |x: f64| t_cdf(df, (x - location) / scale);
            censored(base, lower, upper, location, scale)
        }
        Gtcnorm { location, scale, lower, upper, lmass, umass } => {
            bounded(move |x| norm_cdf((x - location) / scale), lower, upper, lmass, umass, location, scale)
        }
        Gtclogis { location, scale, lower, upper, lmass, umass } => {
            bounded(move |x| logis_cdf((x - location) / scale), lower, upper, lmass, umass, location, scale)
        }
        Gtct { df, location, scale, lower, upper, lmass, umass } => bounded(
            move |x| t_cdf(df, (x - location) / scale),
            lower,
            upper,
            lmass,
            umass,
            location,
            scale,
        ),
        Exp2 { .. } | Binom { .. } | Hyper { .. } | Nbinom { .. } | Pois { .. } => {
            panic!("no continuous oracle for {f:?}")
        }
    }
}

fn unbounded<'a>(f: impl Fn(f64) -> f64 + 'a, loc: f64, scale: f64) -> Cdf<'a> {
    Cdf {
        f: Box::new(f),
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        cuts: vec![loc],
        scale,
    }
}

fn censored<'a>(base: impl Fn(f64) -> f64 + 'a, lower: f64, upper: f64, loc: f64, scale: f64) -> Cdf<'a> {
    Cdf {
        f: Box::new(base),
        lo: lower,
        hi: upper,
        cuts: vec![loc],
        scale,
    }
}

/// Support ends, a central point, and a spread for a continuous family.
pub fn support_hint(f: &Family) -> (f64, f64, f64, f64) {
    let c = cdf_of(f);
    let loc = c.cuts.first().copied().unwrap_or(if c.lo.is_finite() { c.lo + c.scale } else { 0.0 });
    (c.lo, c.hi, loc, c.scale)
}

/// CRPS by quadrature of the squared difference between the predictive CDF
/// and the step function at `y`. CDF values outside `[lo, hi]` are 0 and 1.
pub fn crps_quadrature(f: &Family, y: f64) -> f64 {
    if let Some(pmf) = support_pmf(f) {
        return crps_step_sum(&pmf, y);
    }
    let c = cdf_of(f);
    let g = |x: f64| {
        let v = (c.f)(x) - if x >= y { 1.0 } else { 0.0 };
        v * v
    };
    let mut cuts = c.cuts.clone();
    cuts.push(y);
    let inner = integrate_range(&g, c.lo, c.hi, &cuts, c.scale, 1e-13);
    inner + (c.lo - y).max(0.0) + (y - c.hi).max(0.0)
}

// ---------------------------------------------------------------- discrete

fn ln_choose(n: f64, k: f64) -> f64 {
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// Support points and probabilities, truncated where the remaining mass is negligible.
pub fn support_pmf(f: &Family) -> Option<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    match *f {
        Family::Binom { size, prob } => {
            let n = size as f64;
            for k in 0..=size {
                let k = k as f64;
                let lp = ln_choose(n, k) + k * prob.ln() + if n > k { (n - k) * (-prob).ln_1p() } else { 0.0 };
                out.push((k, lp.exp()));
            }
        }
        Family::Hyper { m, n, k } => {
            let lo = k.saturating_sub(n);
            let hi = k.min(m);
            let (mf, nf, kf) = (m as f64, n as f64, k as f64);
            for x in lo..=hi {
                let x = x as f64;
                let lp = ln_choose(mf, x) + ln_choose(nf, kf - x) - ln_choose(mf + nf, kf);
                out.push((x, lp.exp()));
            }
        }
        Family::Pois { lambda } => {
            let mut cum = 0.0;
            let mut k = 0.0;
            while cum < 1.0 - 1e-15 || k < lambda {
                let p = (k * lambda.ln() - lambda - libm::lgamma(k + 1.0)).exp();
                cum += p;
                out.push((k, p));
                k += 1.0;
                if k > lambda + 60.0 * lambda.sqrt() + 60.0 {
                    break;
                }
            }
        }
        Family::Nbinom { size, prob } => {
            let mut cum = 0.0;
            let mut k = 0.0;
            let mean = size * (1.0 - prob) / prob;
            let limit = mean + 80.0 * (mean / prob).sqrt() + 200.0;
            while cum < 1.0 - 1e-15 || k < mean {
                let lp = libm::lgamma(k + size) - libm::lgamma(size) - libm::lgamma(k + 1.0)
                    + size * prob.ln()
                    + k * (-prob).ln_1p();
                let p = lp.exp();
                cum += p;
                out.push((k, p));
                k += 1.0;
                if k > limit {
                    break;
                }
            }
        }
        _ => return None,
    }
    Some(out)
}

/// Exact integral of the squared CDF difference for a step-function CDF.
/// `pmf` must be sorted by support point.
pub fn crps_step_sum(pmf: &[(f64, f64)], y: f64) -> f64 {
    let mut total = 0.0;
    let mut cdf = 0.0;
    let mut i = 0;
    let mut x = pmf[0].0.min(y);
    let mut y_done = false;
    loop {
        while i < pmf.len() && pmf[i].0 <= x {
            cdf += pmf[i].1;
            i += 1;
        }
        let step = if x >= y { 1.0 } else { 0.0 };
        let next_pt = if i < pmf.len() { pmf[i].0 } else { f64::INFINITY };
        let next = if !y_done && y > x && y < next_pt { y } else { next_pt };
        if x >= y {
            y_done = true;
        }
        if !next.is_finite() {
            break;
        }
        total += (cdf - step).powi(2) * (next - x);
        x = next;
    }
    total
}

// ---------------------------------------------------------------- misc

/// O(m^2) sample CRPS from the kernel representation.
pub fn crps_edf_naive(y: f64, x: &[f64], w: Option<&[f64]>) -> f64 {
    let m = x.len();
    let uniform = vec![1.0 / m as f64; m];
    let w = w.unwrap_or(&uniform);
    let total: f64 = w.iter().sum();
    let mut a = 0.0;
    let mut b = 0.0;
    for i in 0..m {
        a += w[i] / total * (x[i] - y).abs();
        for j in 0..m {
            b += w[i] * w[j] / (total * total) * (x[i] - x[j]).abs();
        }
    }
    a - 0.5 * b
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

pub fn sd(x: &[f64]) -> f64 {
    let m = mean(x);
    (x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)).sqrt()
}

/// Type-7 empirical quantile.
pub fn quantile(x: &[f64], p: f64) -> f64 {
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let h = (s.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(s.len() - 1);
    s[lo] + (h - lo as f64) * (s[hi] - s[lo])
}
