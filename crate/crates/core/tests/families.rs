mod common;

use common::*;
use properscore::*;
use proptest::prelude::*;

const INF: f64 = f64::INFINITY;

#[test]
fn spot_checks_against_quadrature() {
    let cases = [
        Family::Norm { mean: 0.3, sd: 1.7 },
        Family::T { df: 3.0, location: 0.0, scale: 1.0 },
        Family::Gamma { shape: 0.7, rate: 1.3 },
        Family::Beta { shape1: 0.5, shape2: 2.0, lower: -1.0, upper: 1.0 },
        Family::Gtct { df: 2.0, location: 0.0, scale: 1.0, lower: -0.5, upper: INF, lmass: 0.2, umass: 0.0 },
        Family::Gev { location: 0.0, scale: 1.0, shape: -0.2 },
        Family::Nbinom { size: 2.5, prob: 0.4 },
    ];
    for f in &cases {
        for y in [-1.3, 0.0, 0.4, 2.0, 7.5] {
            let got = crps_closed(f, y).unwrap();
            let want = crps_quadrature(f, y);
            assert!(rel_close(got, want, 1e-9, 1e-8), "{f:?} y={y}: {got} vs {want}");
        }
    }
}

fn density_families() -> Vec<Family> {
    vec![
        Family::Lapl { location: 1.0, scale: 0.5 },
        Family::Logis { location: -1.0, scale: 2.0 },
        Family::T { df: 2.5, location: 0.0, scale: 1.5 },
        Family::TwoPieceExp { location: 0.0, scale1: 1.0, scale2: 3.0 },
        Family::TwoPieceNorm { location: 0.0, scale1: 0.5, scale2: 2.0 },
        Family::Exp { rate: 2.0 },
        Family::Exp2 { location: 1.0, scale: 2.0 },
        Family::Gamma { shape: 3.0, rate: 0.5 },
        Family::Llapl { locationlog: 0.0, scalelog: 0.5 },
        Family::Llogis { locationlog: 0.5, scalelog: 0.3 },
        Family::Lnorm { meanlog: 0.0, sdlog: 0.6 },
        Family::Beta { shape1: 2.0, shape2: 3.0, lower: -1.0, upper: 2.0 },
        Family::Unif { min: -1.0, max: 3.0, lmass: 0.0, umass: 0.0 },
        Family::Gev { location: 0.0, scale: 1.0, shape: 0.2 },
        Family::Gev { location: 0.0, scale: 1.0, shape: -0.3 },
        Family::Gpd { location: 0.0, scale: 1.0, shape: 0.25, mass: 0.0 },
        Family::Tnorm { location: 0.0, scale: 1.0, lower: -0.5, upper: 2.0 },
        Family::Tlogis { location: 0.0, scale: 1.0, lower: 0.0, upper: INF },
        Family::Tt { df: 4.0, location: 1.0, scale: 1.0, lower: -INF, upper: 1.5 },
    ]
}

#[test]
fn densities_integrate_to_one() {
    for f in density_families() {
        let (lo, hi, loc, s) = match f {
            Family::Exp2 { location, scale } => (location, INF, location, scale),
            _ => support_hint(&f),
        };
        let dens = |x: f64| {
            let v = logs_closed(&f, x).unwrap();
            (-v).exp()
        };
        let total = integrate_range(&dens, lo, hi, &[loc], s, 1e-12);
        assert!((total - 1.0).abs() < 1e-8, "{f:?}: {total}");
    }
}

#[test]
fn pmfs_sum_to_one() {
    let fams = [
        Family::Binom { size: 12, prob: 0.35 },
        Family::Hyper { m: 7, n: 9, k: 5 },
        Family::Nbinom { size: 1.5, prob: 0.3 },
        Family::Pois { lambda: 6.5 },
    ];
    for f in &fams {
        let total: f64 = (0..400).map(|k| (-logs_closed(f, k as f64).unwrap()).exp()).sum();
        assert!((total - 1.0).abs() < 1e-12, "{f:?}: {total}");
        for (k, p) in support_pmf(f).unwrap().iter().take(30) {
            let l = logs_closed(f, *k).unwrap();
            assert!((l + p.ln()).abs() < 1e-10, "{f:?} {k}");
        }
    }
}

#[test]
fn mixture_against_quadrature() {
    let mix = MixtureNormal::new(vec![-2.0, 0.5, 3.0], vec![0.4, 1.0, 2.0], vec![0.3, 0.5, 0.2]).unwrap();
    let f = Family::Mixnorm(mix.clone());
    for y in [-4.0, -2.0, 0.0, 1.0, 6.0] {
        let a = crps_mixnorm(&mix, y).unwrap();
        assert!(rel_close(a, crps_quadrature(&f, y), 1e-10, 1e-9));
        assert_eq!(a, crps_closed(&f, y).unwrap());
    }
}

#[test]
fn censored_point_masses_change_logs_availability_only() {
    let c = Family::Cnorm { location: 0.0, scale: 1.0, lower: 0.0, upper: INF };
    assert!(matches!(logs_closed(&c, 0.0), Err(ScoreError::LogsUnavailable(_))));
    let want = crps_quadrature(&c, 0.0);
    assert!(rel_close(crps_closed(&c, 0.0).unwrap(), want, 1e-10, 1e-9));
}

fn loc_scale(tag: u8, loc: f64, scale: f64) -> Family {
    match tag % 9 {
        0 => Family::Norm { mean: loc, sd: scale },
        1 => Family::Logis { location: loc, scale },
        2 => Family::Lapl { location: loc, scale },
        3 => Family::T { df: 3.5, location: loc, scale },
        4 => Family::Tnorm { location: loc, scale, lower: loc - scale, upper: loc + 2.0 * scale },
        5 => Family::Clogis { location: loc, scale, lower: loc - 0.5 * scale, upper: INF },
        6 => Family::Gtct {
            df: 5.0,
            location: loc,
            scale,
            lower: loc - scale,
            upper: loc + scale,
            lmass: 0.1,
            umass: 0.3,
        },
        7 => Family::TwoPieceNorm { location: loc, scale1: scale, scale2: 2.0 * scale },
        _ => Family::Gev { location: loc, scale, shape: 0.2 },
    }
}

proptest! {
    #[test]
    fn crps_is_nonnegative(tag in 0u8..9, loc in -5.0..5.0f64, scale in 0.05..10.0f64, y in -30.0..30.0f64) {
        let v = crps_closed(&loc_scale(tag, loc, scale), y).unwrap();
        prop_assert!(v >= 0.0);
    }

    #[test]
    fn location_scale_equivariance(tag in 0u8..9, z in -4.0..4.0f64, a in -10.0..10.0f64, b in 0.1..10.0f64) {
        let base = crps_closed(&loc_scale(tag, 0.0, 1.0), z).unwrap();
        let moved = crps_closed(&loc_scale(tag, a, b), a + b * z).unwrap();
        prop_assert!((moved - b * base).abs() <= 1e-10 * b.max(1.0) * base.max(1.0), "{} vs {}", moved, b * base);
        let lb = logs_closed(&loc_scale(tag, 0.0, 1.0), z);
        if let Ok(lb) = lb {
            prop_assume!(lb.is_finite());
            let lm = logs_closed(&loc_scale(tag, a, b), a + b * z).unwrap();
            prop_assert!((lm - (lb + b.ln())).abs() <= 1e-9 * lm.abs().max(1.0));
        }
    }

    #[test]
    fn truncation_collapses_with_zero_masses(
        loc in -3.0..3.0f64, scale in 0.2..4.0f64, l in -3.0..0.0f64, w in 0.1..4.0f64, y in -6.0..6.0f64
    ) {
        let u = l + w;
        let a = crps_closed(&Family::Gtcnorm { location: loc, scale, lower: l, upper: u, lmass: 0.0, umass: 0.0 }, y).unwrap();
        let b = crps_closed(&Family::Tnorm { location: loc, scale, lower: l, upper: u }, y).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        let lm = norm_cdf((l - loc) / scale);
        let um = norm_cdf(-(u - loc) / scale);
        prop_assume!(lm + um < 1.0 - 1e-6);
        let c = crps_closed(&Family::Gtcnorm { location: loc, scale, lower: l, upper: u, lmass: lm, umass: um }, y).unwrap();
        let d = crps_closed(&Family::Cnorm { location: loc, scale, lower: l, upper: u }, y).unwrap();
        prop_assert!((c - d).abs() <= 1e-10 * c.max(1.0), "{} vs {}", c, d);
    }

    #[test]
    fn gradient_matches_central_differences(tag in 0u8..9, loc in -2.0..2.0f64, scale in 0.3..3.0f64, y in -6.0..6.0f64) {
        let f = loc_scale(tag, loc, scale);
        prop_assume!(GRADIENT_FAMILIES.contains(&f.tag()));
        let g = gradcrps(&f, y).unwrap();
        let h = 1e-6;
        // location and scale are the two parameters after df
        let first = if f.tag() == FamilyTag::T { 1 } else { 0 };
        let at = |k: usize, d: f64| {
            let mut v = f.values();
            v[first + k] += d;
            crps_closed(&Family::from_values(f.tag(), &v).unwrap(), y).unwrap()
        };
        for k in 0..2 {
            let fd = (at(k, h) - at(k, -h)) / (2.0 * h);
            prop_assert!((g[k] - fd).abs() < 1e-6, "{:?} [{}]: {} vs {}", f, k, g[k], fd);
        }
    }

    #[test]
    fn discrete_crps_matches_step_sum(size in 1u64..40, prob in 0.01..1.0f64, y in -2.0..45.0f64) {
        let f = Family::Binom { size, prob };
        let want = crps_step_sum(&support_pmf(&f).unwrap(), y);
        prop_assert!((crps_closed(&f, y).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn poisson_matches_step_sum(lambda in 0.01..60.0f64, y in -2.0..90.0f64) {
        let f = Family::Pois { lambda };
        let want = crps_step_sum(&support_pmf(&f).unwrap(), y);
        prop_assert!(rel_close(crps_closed(&f, y).unwrap(), want, 1e-9, 1e-9));
    }
}
