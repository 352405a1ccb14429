//! Parametric forecast distributions with closed-form CRPS and LogS.
//!
//! [`Family`] carries a distribution together with its parameters;
//! [`crps_closed`] and [`logs_closed`] dispatch on it. Which score is
//! available for which family follows [`FamilyTag::crps_available`] and
//! [`FamilyTag::logs_available`].

mod continuous;
mod discrete;
mod gradient;
pub(crate) mod locscale;
mod mixture;

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, ScoreError};

pub use gradient::{gradcrps, hesscrps, GRADIENT_FAMILIES};
pub(crate) use gradient::{crps_jet, logs_jet};
pub use mixture::{crps_mixnorm, logs_mixnorm, MixtureNormal};

/// Identifier of a parametric family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    Lapl,
    Logis,
    Norm,
    Mixnorm,
    T,
    TwoPieceExp,
    TwoPieceNorm,
    Exp,
    Gamma,
    Llapl,
    Llogis,
    Lnorm,
    Beta,
    Unif,
    Exp2,
    ExpM,
    Gev,
    Gpd,
    Tlogis,
    Clogis,
    Gtclogis,
    Tnorm,
    Cnorm,
    Gtcnorm,
    Tt,
    Ct,
    Gtct,
    Binom,
    Hyper,
    Nbinom,
    Pois,
}

/// How a parameter is constrained; drives validation messages and the
/// reparameterization used by the estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// Any finite real (locations, GEV/GPD shape).
    Real,
    /// Strictly positive (scales, rates, shapes).
    Positive,
    /// Open unit interval (log-Laplace/log-logistic scalelog, probabilities).
    UnitInterval,
    /// Student-t degrees of freedom; held fixed during estimation.
    Df,
    /// Truncation or censoring limit; held fixed during estimation.
    Limit,
    /// Point-mass weight in [0, 1); held fixed during estimation.
    Mass,
    /// Nonnegative integer; held fixed during estimation.
    Count,
}

impl ParamKind {
    /// Whether the estimator optimizes this parameter unless told otherwise.
    pub fn free_by_default(self) -> bool {
        matches!(
            self,
            ParamKind::Real | ParamKind::Positive | ParamKind::UnitInterval
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub default: Option<f64>,
    pub kind: ParamKind,
}

const fn p(name: &'static str, default: Option<f64>, kind: ParamKind) -> ParamSpec {
    ParamSpec {
        name,
        aliases: &[],
        default,
        kind,
    }
}

const fn pa(
    name: &'static str,
    aliases: &'static [&'static str],
    default: Option<f64>,
    kind: ParamKind,
) -> ParamSpec {
    ParamSpec {
        name,
        aliases,
        default,
        kind,
    }
}

const INF: f64 = f64::INFINITY;
const NEG_INF: f64 = f64::NEG_INFINITY;

use ParamKind::*;

const LOC_SCALE: &[ParamSpec] = &[
    p("location", Some(0.0), Real),
    p("scale", Some(1.0), Positive),
];
const NORM: &[ParamSpec] = &[
    pa("mean", &["location"], Some(0.0), Real),
    pa("sd", &["scale"], Some(1.0), Positive),
];
const T: &[ParamSpec] = &[
    p("df", None, Df),
    p("location", Some(0.0), Real),
    p("scale", Some(1.0), Positive),
];
const TWO_PIECE: &[ParamSpec] = &[
    p("location", Some(0.0), Real),
    p("scale1", Some(1.0), Positive),
    p("scale2", Some(1.0), Positive),
];
const EXP: &[ParamSpec] = &[p("rate", Some(1.0), Positive)];
const GAMMA: &[ParamSpec] = &[p("shape", None, Positive), p("rate", Some(1.0), Positive)];
const LOG_UNIT: &[ParamSpec] = &[
    p("locationlog", Some(0.0), Real),
    p("scalelog", None, UnitInterval),
];
const LNORM: &[ParamSpec] = &[
    pa("meanlog", &["locationlog"], Some(0.0), Real),
    pa("sdlog", &["scalelog"], Some(1.0), Positive),
];
const BETA: &[ParamSpec] = &[
    p("shape1", None, Positive),
    p("shape2", None, Positive),
    p("lower", Some(0.0), Limit),
    p("upper", Some(1.0), Limit),
];
const UNIF: &[ParamSpec] = &[
    p("min", Some(0.0), Limit),
    p("max", Some(1.0), Limit),
    p("lmass", Some(0.0), Mass),
    p("umass", Some(0.0), Mass),
];
const EXPM: &[ParamSpec] = &[
    p("location", Some(0.0), Real),
    p("scale", Some(1.0), Positive),
    p("mass", Some(0.0), Mass),
];
const GEV: &[ParamSpec] = &[
    p("location", Some(0.0), Real),
    p("scale", Some(1.0), Positive),
    p("shape", Some(0.0), Real),
];
const GPD: &[ParamSpec] = &[
    p("location", Some(0.0), Real),
    p("scale", Some(1.0), Positive),
    p("shape", Some(0.0), Real),
    p("mass", Some(0.0), Mass),
];
const TRUNC: &[ParamSpec] = &[
    p("location", Some(0.0), Real),
    p("scale", Some(1.0), Positive),
    p("lower", Some(NEG_INF), Limit),
    p("upper", Some(INF), Limit),
];
const GTC: &[ParamSpec] = &[
    p("location", Some(0.0), Real),
    p("scale", Some(1.0), Positive),
    p("lower", Some(NEG_INF), Limit),
    p("upper", Some(INF), Limit),
    p("lmass", Some(0.0), Mass),
    p("umass", Some(0.0), Mass),
];
const TRUNC_T: &[ParamSpec] = &[
    p("df", None, Df),
    p("location", Some(0.0), Real),
    p("scale", Some(1.0), Positive),
    p("lower", Some(NEG_INF), Limit),
    p("upper", Some(INF), Limit),
];
const GTC_T: &[ParamSpec] = &[
    p("df", None, Df),
    p("location", Some(0.0), Real),
    p("scale", Some(1.0), Positive),
    p("lower", Some(NEG_INF), Limit),
    p("upper", Some(INF), Limit),
    p("lmass", Some(0.0), Mass),
    p("umass", Some(0.0), Mass),
];
const BINOM: &[ParamSpec] = &[p("size", None, Count), p("prob", None, UnitInterval)];
const HYPER: &[ParamSpec] = &[p("m", None, Count), p("n", None, Count), p("k", None, Count)];
const NBINOM: &[ParamSpec] = &[p("size", None, Positive), p("prob", None, UnitInterval)];
const POIS: &[ParamSpec] = &[p("lambda", None, Positive)];

impl FamilyTag {
    pub const ALL: [FamilyTag; 31] = [
        FamilyTag::Lapl,
        FamilyTag::Logis,
        FamilyTag::Norm,
        FamilyTag::Mixnorm,
        FamilyTag::T,
        FamilyTag::TwoPieceExp,
        FamilyTag::TwoPieceNorm,
        FamilyTag::Exp,
        FamilyTag::Gamma,
        FamilyTag::Llapl,
        FamilyTag::Llogis,
        FamilyTag::Lnorm,
        FamilyTag::Beta,
        FamilyTag::Unif,
        FamilyTag::Exp2,
        FamilyTag::ExpM,
        FamilyTag::Gev,
        FamilyTag::Gpd,
        FamilyTag::Tlogis,
        FamilyTag::Clogis,
        FamilyTag::Gtclogis,
        FamilyTag::Tnorm,
        FamilyTag::Cnorm,
        FamilyTag::Gtcnorm,
        FamilyTag::Tt,
        FamilyTag::Ct,
        FamilyTag::Gtct,
        FamilyTag::Binom,
        FamilyTag::Hyper,
        FamilyTag::Nbinom,
        FamilyTag::Pois,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Lapl => "lapl",
            FamilyTag::Logis => "logis",
            FamilyTag::Norm => "norm",
            FamilyTag::Mixnorm => "mixnorm",
            FamilyTag::T => "t",
            FamilyTag::TwoPieceExp => "2pexp",
            FamilyTag::TwoPieceNorm => "2pnorm",
            FamilyTag::Exp => "exp",
            FamilyTag::Gamma => "gamma",
            FamilyTag::Llapl => "llapl",
            FamilyTag::Llogis => "llogis",
            FamilyTag::Lnorm => "lnorm",
            FamilyTag::Beta => "beta",
            FamilyTag::Unif => "unif",
            FamilyTag::Exp2 => "exp2",
            FamilyTag::ExpM => "expM",
            FamilyTag::Gev => "gev",
            FamilyTag::Gpd => "gpd",
            FamilyTag::Tlogis => "tlogis",
            FamilyTag::Clogis => "clogis",
            FamilyTag::Gtclogis => "gtclogis",
            FamilyTag::Tnorm => "tnorm",
            FamilyTag::Cnorm => "cnorm",
            FamilyTag::Gtcnorm => "gtcnorm",
            FamilyTag::Tt => "tt",
            FamilyTag::Ct => "ct",
            FamilyTag::Gtct => "gtct",
            FamilyTag::Binom => "binom",
            FamilyTag::Hyper => "hyper",
            FamilyTag::Nbinom => "nbinom",
            FamilyTag::Pois => "pois",
        }
    }

    /// Parameters in canonical order. Empty for `mixnorm`, whose parameters are vectors.
    pub fn params(self) -> &'static [ParamSpec] {
        match self {
            FamilyTag::Lapl | FamilyTag::Logis | FamilyTag::Exp2 => LOC_SCALE,
            FamilyTag::Norm => NORM,
            FamilyTag::Mixnorm => &[],
            FamilyTag::T => T,
            FamilyTag::TwoPieceExp | FamilyTag::TwoPieceNorm => TWO_PIECE,
            FamilyTag::Exp => EXP,
            FamilyTag::Gamma => GAMMA,
            FamilyTag::Llapl | FamilyTag::Llogis => LOG_UNIT,
            FamilyTag::Lnorm => LNORM,
            FamilyTag::Beta => BETA,
            FamilyTag::Unif => UNIF,
            FamilyTag::ExpM => EXPM,
            FamilyTag::Gev => GEV,
            FamilyTag::Gpd => GPD,
            FamilyTag::Tlogis | FamilyTag::Clogis | FamilyTag::Tnorm | FamilyTag::Cnorm => TRUNC,
            FamilyTag::Gtclogis | FamilyTag::Gtcnorm => GTC,
            FamilyTag::Tt | FamilyTag::Ct => TRUNC_T,
            FamilyTag::Gtct => GTC_T,
            FamilyTag::Binom => BINOM,
            FamilyTag::Hyper => HYPER,
            FamilyTag::Nbinom => NBINOM,
            FamilyTag::Pois => POIS,
        }
    }

    pub fn crps_available(self) -> bool {
        !matches!(self, FamilyTag::Exp2)
    }

    /// LogS needs a density; censored and point-mass variants have none.
    pub fn logs_available(self) -> bool {
        !matches!(
            self,
            FamilyTag::ExpM
                | FamilyTag::Clogis
                | FamilyTag::Gtclogis
                | FamilyTag::Cnorm
                | FamilyTag::Gtcnorm
                | FamilyTag::Ct
                | FamilyTag::Gtct
        )
    }

    pub fn is_discrete(self) -> bool {
        matches!(
            self,
            FamilyTag::Binom | FamilyTag::Hyper | FamilyTag::Nbinom | FamilyTag::Pois
        )
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = ScoreError;

    fn from_str(s: &str) -> Result<Self> {
        let key = match s {
            "normal" => "norm",
            "normal-mixture" | "mixture-normal" => "mixnorm",
            "laplace" => "lapl",
            "logistic" => "logis",
            "poisson" => "pois",
            "exponential" => "exp",
            other => other,
        };
        FamilyTag::ALL
            .iter()
            .copied()
            .find(|t| t.name() == key)
            .ok_or_else(|| ScoreError::domain(format!("unknown family '{s}'")))
    }
}

/// A parametric forecast distribution with its parameter values.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Lapl { location: f64, scale: f64 },
    Logis { location: f64, scale: f64 },
    Norm { mean: f64, sd: f64 },
    Mixnorm(MixtureNormal),
    T { df: f64, location: f64, scale: f64 },
    TwoPieceExp { location: f64, scale1: f64, scale2: f64 },
    TwoPieceNorm { location: f64, scale1: f64, scale2: f64 },
    Exp { rate: f64 },
    Gamma { shape: f64, rate: f64 },
    Llapl { locationlog: f64, scalelog: f64 },
    Llogis { locationlog: f64, scalelog: f64 },
    Lnorm { meanlog: f64, sdlog: f64 },
    Beta { shape1: f64, shape2: f64, lower: f64, upper: f64 },
    Unif { min: f64, max: f64, lmass: f64, umass: f64 },
    Exp2 { location: f64, scale: f64 },
    ExpM { location: f64, scale: f64, mass: f64 },
    Gev { location: f64, scale: f64, shape: f64 },
    Gpd { location: f64, scale: f64, shape: f64, mass: f64 },
    Tlogis { location: f64, scale: f64, lower: f64, upper: f64 },
    Clogis { location: f64, scale: f64, lower: f64, upper: f64 },
    Gtclogis { location: f64, scale: f64, lower: f64, upper: f64, lmass: f64, umass: f64 },
    Tnorm { location: f64, scale: f64, lower: f64, upper: f64 },
    Cnorm { location: f64, scale: f64, lower: f64, upper: f64 },
    Gtcnorm { location: f64, scale: f64, lower: f64, upper: f64, lmass: f64, umass: f64 },
    Tt { df: f64, location: f64, scale: f64, lower: f64, upper: f64 },
    Ct { df: f64, location: f64, scale: f64, lower: f64, upper: f64 },
    Gtct { df: f64, location: f64, scale: f64, lower: f64, upper: f64, lmass: f64, umass: f64 },
    Binom { size: u64, prob: f64 },
    Hyper { m: u64, n: u64, k: u64 },
    Nbinom { size: f64, prob: f64 },
    Pois { lambda: f64 },
}

impl Family {
    pub fn tag(&self) -> FamilyTag {
        match self {
            Family::Lapl { .. } => FamilyTag::Lapl,
            Family::Logis { .. } => FamilyTag::Logis,
            Family::Norm { .. } => FamilyTag::Norm,
            Family::Mixnorm(_) => FamilyTag::Mixnorm,
            Family::T { .. } => FamilyTag::T,
            Family::TwoPieceExp { .. } => FamilyTag::TwoPieceExp,
            Family::TwoPieceNorm { .. } => FamilyTag::TwoPieceNorm,
            Family::Exp { .. } => FamilyTag::Exp,
            Family::Gamma { .. } => FamilyTag::Gamma,
            Family::Llapl { .. } => FamilyTag::Llapl,
            Family::Llogis { .. } => FamilyTag::Llogis,
            Family::Lnorm { .. } => FamilyTag::Lnorm,
            Family::Beta { .. } => FamilyTag::Beta,
            Family::Unif { .. } => FamilyTag::Unif,
            Family::Exp2 { .. } => FamilyTag::Exp2,
            Family::ExpM { .. } => FamilyTag::ExpM,
            Family::Gev { .. } => FamilyTag::Gev,
            Family::Gpd { .. } => FamilyTag::Gpd,
            Family::Tlogis { .. } => FamilyTag::Tlogis,
            Family::Clogis { .. } => FamilyTag::Clogis,
            Family::Gtclogis { .. } => FamilyTag::Gtclogis,
            Family::Tnorm { .. } => FamilyTag::Tnorm,
            Family::Cnorm { .. } => FamilyTag::Cnorm,
            Family::Gtcnorm { .. } => FamilyTag::Gtcnorm,
            Family::Tt { .. } => FamilyTag::Tt,
            Family::Ct { .. } => FamilyTag::Ct,
            Family::Gtct { .. } => FamilyTag::Gtct,
            Family::Binom { .. } => FamilyTag::Binom,
            Family::Hyper { .. } => FamilyTag::Hyper,
            Family::Nbinom { .. } => FamilyTag::Nbinom,
            Family::Pois { .. } => FamilyTag::Pois,
        }
    }

    /// Builds a family from parameter values in the canonical order of
    /// [`FamilyTag::params`]. Counts are rounded checks, not truncations.
    pub fn from_values(tag: FamilyTag, v: &[f64]) -> Result<Family> {
        let want = tag.params().len();
        if tag == FamilyTag::Mixnorm {
            return Err(ScoreError::Unsupported {
                family: tag.name(),
                operation: "scalar parameter construction",
            });
        }
        if v.len() != want {
            return Err(ScoreError::Dimension(format!(
                "family '{tag}' takes {want} parameters, got {}",
                v.len()
            )));
        }
        let fam = match tag {
            FamilyTag::Lapl => Family::Lapl { location: v[0], scale: v[1] },
            FamilyTag::Logis => Family::Logis { location: v[0], scale: v[1] },
            FamilyTag::Norm => Family::Norm { mean: v[0], sd: v[1] },
            FamilyTag::Mixnorm => unreachable!(),
            FamilyTag::T => Family::T { df: v[0], location: v[1], scale: v[2] },
            FamilyTag::TwoPieceExp => Family::TwoPieceExp { location: v[0], scale1: v[1], scale2: v[2] },
            FamilyTag::TwoPieceNorm => Family::TwoPieceNorm { location: v[0], scale1: v[1], scale2: v[2] },
            FamilyTag::Exp => Family::Exp { rate: v[0] },
            FamilyTag::Gamma => Family::Gamma { shape: v[0], rate: v[1] },
            FamilyTag::Llapl => Family::Llapl { locationlog: v[0], scalelog: v[1] },
            FamilyTag::Llogis => Family::Llogis { locationlog: v[0], scalelog: v[1] },
            FamilyTag::Lnorm => Family::Lnorm { meanlog: v[0], sdlog: v[1] },
            FamilyTag::Beta => Family::Beta { shape1: v[0], shape2: v[1], lower: v[2], upper: v[3] },
            FamilyTag::Unif => Family::Unif { min: v[0], max: v[1], lmass: v[2], umass: v[3] },
            FamilyTag::Exp2 => Family::Exp2 { location: v[0], scale: v[1] },
            FamilyTag::ExpM => Family::ExpM { location: v[0], scale: v[1], mass: v[2] },
            FamilyTag::Gev => Family::Gev { location: v[0], scale: v[1], shape: v[2] },
            FamilyTag::Gpd => Family::Gpd { location: v[0], scale: v[1], shape: v[2], mass: v[3] },
            FamilyTag::Tlogis => Family::Tlogis { location: v[0], scale: v[1], lower: v[2], upper: v[3] },
            FamilyTag::Clogis => Family::Clogis { location: v[0], scale: v[1], lower: v[2], upper: v[3] },
            FamilyTag::Gtclogis => Family::Gtclogis {
                location: v[0], scale: v[1], lower: v[2], upper: v[3], lmass: v[4], umass: v[5],
            },
            FamilyTag::Tnorm => Family::Tnorm { location: v[0], scale: v[1], lower: v[2], upper: v[3] },
            FamilyTag::Cnorm => Family::Cnorm { location: v[0], scale: v[1], lower: v[2], upper: v[3] },
            FamilyTag::Gtcnorm => Family::Gtcnorm {
                location: v[0], scale: v[1], lower: v[2], upper: v[3], lmass: v[4], umass: v[5],
            },
            FamilyTag::Tt => Family::Tt { df: v[0], location: v[1], scale: v[2], lower: v[3], upper: v[4] },
            FamilyTag::Ct => Family::Ct { df: v[0], location: v[1], scale: v[2], lower: v[3], upper: v[4] },
            FamilyTag::Gtct => Family::Gtct {
                df: v[0], location: v[1], scale: v[2], lower: v[3], upper: v[4], lmass: v[5], umass: v[6],
            },
            FamilyTag::Binom => Family::Binom { size: count("size", v[0])?, prob: v[1] },
            FamilyTag::Hyper => Family::Hyper {
                m: count("m", v[0])?,
                n: count("n", v[1])?,
                k: count("k", v[2])?,
            },
            FamilyTag::Nbinom => Family::Nbinom { size: v[0], prob: v[1] },
            FamilyTag::Pois => Family::Pois { lambda: v[0] },
        };
        Ok(fam)
    }

    /// Builds a family from named parameters.
    ///
    /// `lookup` returns the value bound to a name, if any. Canonical names
    /// and aliases are accepted, missing parameters fall back to their
    /// defaults, and `gamma` accepts `scale` in place of `rate`, `nbinom`
    /// accepts `mu` in place of `prob`. For `mixnorm` the parameters are
    /// `m1, m2, ...`, `s1, s2, ...` and optional `w1, w2, ...`.
    pub fn from_params(tag: FamilyTag, lookup: &dyn Fn(&str) -> Option<f64>) -> Result<Family> {
        if tag == FamilyTag::Mixnorm {
            let mut means = Vec::new();
            let mut sds = Vec::new();
            let mut weights = Vec::new();
            let mut k = 1;
            while let Some(m) = lookup(&format!("m{k}")) {
                means.push(m);
                sds.push(lookup(&format!("s{k}")).ok_or_else(|| {
                    ScoreError::MissingParameter(format!("mixnorm component {k} needs 's{k}'"))
                })?);
                weights.push(lookup(&format!("w{k}")).unwrap_or(1.0));
                k += 1;
            }
            return Ok(Family::Mixnorm(MixtureNormal::new(means, sds, weights)?));
        }
        let mut values = Vec::with_capacity(tag.params().len());
        for spec in tag.params() {
            let direct = std::iter::once(&spec.name)
                .chain(spec.aliases.iter())
                .find_map(|n| lookup(n));
            let v = match (tag, spec.name, direct) {
                (_, _, Some(v)) => v,
                (FamilyTag::Gamma, "rate", None) if lookup("scale").is_some() => {
                    1.0 / lookup("scale").unwrap()
                }
                (FamilyTag::Nbinom, "prob", None) if lookup("mu").is_some() => {
                    let size = values[0];
                    let mu = lookup("mu").unwrap();
                    size / (size + mu)
                }
                _ => spec.default.ok_or_else(|| {
                    ScoreError::MissingParameter(format!("family '{tag}' requires '{}'", spec.name))
                })?,
            };
            values.push(v);
        }
        Family::from_values(tag, &values)
    }

    /// Parameter values in canonical order (empty for `mixnorm`).
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Family::Lapl { location, scale }
            | Family::Logis { location, scale }
            | Family::Exp2 { location, scale } => vec![location, scale],
            Family::Norm { mean, sd } => vec![mean, sd],
            Family::Mixnorm(_) => vec![],
            Family::T { df, location, scale } => vec![df, location, scale],
            Family::TwoPieceExp { location, scale1, scale2 }
            | Family::TwoPieceNorm { location, scale1, scale2 } => vec![location, scale1, scale2],
            Family::Exp { rate } => vec![rate],
            Family::Gamma { shape, rate } => vec![shape, rate],
            Family::Llapl { locationlog, scalelog } | Family::Llogis { locationlog, scalelog } => {
                vec![locationlog, scalelog]
            }
            Family::Lnorm { meanlog, sdlog } => vec![meanlog, sdlog],
            Family::Beta { shape1, shape2, lower, upper } => vec![shape1, shape2, lower, upper],
            Family::Unif { min, max, lmass, umass } => vec![min, max, lmass, umass],
            Family::ExpM { location, scale, mass } => vec![location, scale, mass],
            Family::Gev { location, scale, shape } => vec![location, scale, shape],
            Family::Gpd { location, scale, shape, mass } => vec![location, scale, shape, mass],
            Family::Tlogis { location, scale, lower, upper }
            | Family::Clogis { location, scale, lower, upper }
            | Family::Tnorm { location, scale, lower, upper }
            | Family::Cnorm { location, scale, lower, upper } => vec![location, scale, lower, upper],
            Family::Gtclogis { location, scale, lower, upper, lmass, umass }
            | Family::Gtcnorm { location, scale, lower, upper, lmass, umass } => {
                vec![location, scale, lower, upper, lmass, umass]
            }
            Family::Tt { df, location, scale, lower, upper }
            | Family::Ct { df, location, scale, lower, upper } => vec![df, location, scale, lower, upper],
            Family::Gtct { df, location, scale, lower, upper, lmass, umass } => {
                vec![df, location, scale, lower, upper, lmass, umass]
            }
            Family::Binom { size, prob } => vec![size as f64, prob],
            Family::Hyper { m, n, k } => vec![m as f64, n as f64, k as f64],
            Family::Nbinom { size, prob } => vec![size, prob],
            Family::Pois { lambda } => vec![lambda],
        }
    }

    /// Checks the parameter invariants shared by both scores.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Lapl { location, scale }
            | Family::Logis { location, scale }
            | Family::Exp2 { location, scale } => loc_scale(location, scale),
            Family::Norm { mean, sd } => loc_scale(mean, sd),
            Family::Mixnorm(_) => Ok(()),
            Family::T { df, location, scale } => {
                positive("df", df)?;
                loc_scale(location, scale)
            }
            Family::TwoPieceExp { location, scale1, scale2 }
            | Family::TwoPieceNorm { location, scale1, scale2 } => {
                finite("location", location)?;
                positive("scale1", scale1)?;
                positive("scale2", scale2)
            }
            Family::Exp { rate } => positive("rate", rate),
            Family::Gamma { shape, rate } => {
                positive("shape", shape)?;
                positive("rate", rate)
            }
            Family::Llapl { locationlog, scalelog } | Family::Llogis { locationlog, scalelog } => {
                finite("locationlog", locationlog)?;
                if !(scalelog > 0.0 && scalelog < 1.0) {
                    return Err(ScoreError::domain(format!(
                        "scalelog must lie in (0, 1), got {scalelog}"
                    )));
                }
                Ok(())
            }
            Family::Lnorm { meanlog, sdlog } => {
                finite("meanlog", meanlog)?;
                positive("sdlog", sdlog)
            }
            Family::Beta { shape1, shape2, lower, upper } => {
                positive("shape1", shape1)?;
                positive("shape2", shape2)?;
                finite("lower", lower)?;
                finite("upper", upper)?;
                ordered(lower, upper)
            }
            Family::Unif { min, max, lmass, umass } => {
                finite("min", min)?;
                finite("max", max)?;
                ordered(min, max)?;
                masses(lmass, umass)
            }
            Family::ExpM { location, scale, mass } => {
                loc_scale(location, scale)?;
                unit_closed("mass", mass)
            }
            Family::Gev { location, scale, shape } => {
                loc_scale(location, scale)?;
                finite("shape", shape)
            }
            Family::Gpd { location, scale, shape, mass } => {
                loc_scale(location, scale)?;
                finite("shape", shape)?;
                unit_closed("mass", mass)
            }
            Family::Tlogis { location, scale, lower, upper }
            | Family::Clogis { location, scale, lower, upper }
            | Family::Tnorm { location, scale, lower, upper }
            | Family::Cnorm { location, scale, lower, upper } => {
                loc_scale(location, scale)?;
                limits(lower, upper)
            }
            Family::Gtclogis { location, scale, lower, upper, lmass, umass }
            | Family::Gtcnorm { location, scale, lower, upper, lmass, umass } => {
                loc_scale(location, scale)?;
                limits(lower, upper)?;
                masses(lmass, umass)?;
                masses_on_finite_limits(lower, upper, lmass, umass)
            }
            Family::Tt { df, location, scale, lower, upper }
            | Family::Ct { df, location, scale, lower, upper } => {
                positive("df", df)?;
                loc_scale(location, scale)?;
                limits(lower, upper)
            }
            Family::Gtct { df, location, scale, lower, upper, lmass, umass } => {
                positive("df", df)?;
                loc_scale(location, scale)?;
                limits(lower, upper)?;
                masses(lmass, umass)?;
                masses_on_finite_limits(lower, upper, lmass, umass)
            }
            Family::Binom { prob, .. } => prob_open_closed(prob),
            Family::Hyper { m, n, k } => {
                if k > m + n {
                    return Err(ScoreError::domain(format!(
                        "hypergeometric draw count k={k} exceeds population m+n={}",
                        m + n
                    )));
                }
                Ok(())
            }
            Family::Nbinom { size, prob } => {
                positive("size", size)?;
                prob_open_closed(prob)
            }
            Family::Pois { lambda } => positive("lambda", lambda),
        }
    }
}

fn count(name: &str, v: f64) -> Result<u64> {
    if v >= 0.0 && v == v.round() && v < 9.0e15 {
        Ok(v as u64)
    } else {
        Err(ScoreError::domain(format!(
            "{name} must be a nonnegative integer, got {v}"
        )))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ScoreError::domain(format!("{name} must be finite, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ScoreError::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

fn loc_scale(location: f64, scale: f64) -> Result<()> {
    finite("location", location)?;
    positive("scale", scale)
}

fn unit_closed(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(ScoreError::domain(format!("{name} must lie in [0, 1], got {v}")))
    }
}

fn prob_open_closed(prob: f64) -> Result<()> {
    if prob > 0.0 && prob <= 1.0 {
        Ok(())
    } else {
        Err(ScoreError::domain(format!("prob must lie in (0, 1], got {prob}")))
    }
}

fn ordered(lower: f64, upper: f64) -> Result<()> {
    if lower < upper {
        Ok(())
    } else {
        Err(ScoreError::domain(format!(
            "lower limit {lower} must be below upper limit {upper}"
        )))
    }
}

fn limits(lower: f64, upper: f64) -> Result<()> {
    if lower.is_nan() || upper.is_nan() || lower == f64::INFINITY || upper == f64::NEG_INFINITY {
        return Err(ScoreError::domain(format!("invalid limits [{lower}, {upper}]")));
    }
    ordered(lower, upper)
}

fn masses(lmass: f64, umass: f64) -> Result<()> {
    if lmass >= 0.0 && umass >= 0.0 && lmass + umass < 1.0 {
        Ok(())
    } else {
        Err(ScoreError::domain(format!(
            "point masses need L, U >= 0 and L + U < 1, got L={lmass}, U={umass}"
        )))
    }
}

fn masses_on_finite_limits(lower: f64, upper: f64, lmass: f64, umass: f64) -> Result<()> {
    if (lmass > 0.0 && lower.is_infinite()) || (umass > 0.0 && upper.is_infinite()) {
        return Err(ScoreError::domain(
            "a point mass cannot sit on an infinite limit",
        ));
    }
    Ok(())
}

fn observation(y: f64) -> Result<()> {
    if y.is_finite() {
        Ok(())
    } else {
        Err(ScoreError::domain(format!("observation must be finite, got {y}")))
    }
}

fn finish(v: f64, family: FamilyTag) -> Result<f64> {
    if v.is_finite() {
        Ok(v.max(0.0))
    } else {
        Err(ScoreError::NonFinite(format!(
            "{family} produced a non-finite value"
        )))
    }
}

/// Closed-form CRPS of `family` at observation `y`.
pub fn crps_closed(family: &Family, y: f64) -> Result<f64> {
    let tag = family.tag();
    if !tag.crps_available() {
        return Err(ScoreError::CrpsUnavailable(tag.name()));
    }
    observation(y)?;
    family.validate()?;
    let v = match *family {
        Family::Mixnorm(ref mix) => return crps_mixnorm(mix, y),
        Family::Logis { location, scale } => locscale::crps_plain(locscale::Kernel::Logistic, y, location, scale),
        Family::Norm { mean, sd } => locscale::crps_plain(locscale::Kernel::Normal, y, mean, sd),
        Family::T { df, location, scale } => {
            require_df_above_one(df)?;
            locscale::crps_plain(locscale::Kernel::student(df), y, location, scale)
        }
        Family::Tlogis { location, scale, lower, upper } => locscale::crps_bounded(
            locscale::Kernel::Logistic, y, location, scale, lower, upper, locscale::Masses::Truncated,
        ),
        Family::Clogis { location, scale, lower, upper } => {
            continuous::crps_clogis(y, location, scale, lower, upper)
        }
        Family::Gtclogis { location, scale, lower, upper, lmass, umass } => locscale::crps_bounded(
            locscale::Kernel::Logistic, y, location, scale, lower, upper,
            locscale::Masses::Explicit { lmass, umass },
        ),
        Family::Tnorm { location, scale, lower, upper } => locscale::crps_bounded(
            locscale::Kernel::Normal, y, location, scale, lower, upper, locscale::Masses::Truncated,
        ),
        Family::Cnorm { location, scale, lower, upper } => locscale::crps_bounded(
            locscale::Kernel::Normal, y, location, scale, lower, upper, locscale::Masses::Censored,
        ),
        Family::Gtcnorm { location, scale, lower, upper, lmass, umass } => locscale::crps_bounded(
            locscale::Kernel::Normal, y, location, scale, lower, upper,
            locscale::Masses::Explicit { lmass, umass },
        ),
        Family::Tt { df, location, scale, lower, upper } => {
            require_df_above_one(df)?;
            locscale::crps_bounded(
                locscale::Kernel::student(df), y, location, scale, lower, upper, locscale::Masses::Truncated,
            )
        }
        Family::Ct { df, location, scale, lower, upper } => {
            require_df_above_one(df)?;
            locscale::crps_bounded(
                locscale::Kernel::student(df), y, location, scale, lower, upper, locscale::Masses::Censored,
            )
        }
        Family::Gtct { df, location, scale, lower, upper, lmass, umass } => {
            require_df_above_one(df)?;
            locscale::crps_bounded(
                locscale::Kernel::student(df), y, location, scale, lower, upper,
                locscale::Masses::Explicit { lmass, umass },
            )
        }
        Family::Lapl { location, scale } => continuous::crps_lapl(y, location, scale),
        Family::TwoPieceExp { location, scale1, scale2 } => continuous::crps_2pexp(y, location, scale1, scale2),
        Family::TwoPieceNorm { location, scale1, scale2 } => continuous::crps_2pnorm(y, location, scale1, scale2),
        Family::Exp { rate } => continuous::crps_exp(y, rate),
        Family::Gamma { shape, rate } => continuous::crps_gamma(y, shape, rate)?,
        Family::Llapl { locationlog, scalelog } => continuous::crps_llapl(y, locationlog, scalelog),
        Family::Llogis { locationlog, scalelog } => continuous::crps_llogis(y, locationlog, scalelog)?,
        Family::Lnorm { meanlog, sdlog } => continuous::crps_lnorm(y, meanlog, sdlog),
        Family::Beta { shape1, shape2, lower, upper } => continuous::crps_beta(y, shape1, shape2, lower, upper)?,
        Family::Unif { min, max, lmass, umass } => continuous::crps_unif(y, min, max, lmass, umass),
        Family::ExpM { location, scale, mass } => continuous::crps_expm(y, location, scale, mass),
        Family::Gev { location, scale, shape } => {
            if shape >= 1.0 {
                return Err(ScoreError::NonFinite(format!(
                    "gev needs shape < 1 for a finite CRPS, got {shape}"
                )));
            }
            continuous::crps_gev(y, location, scale, shape)?
        }
        Family::Gpd { location, scale, shape, mass } => {
            if shape >= 1.0 {
                return Err(ScoreError::NonFinite(format!(
                    "gpd needs shape < 1 for a finite CRPS, got {shape}"
                )));
            }
            continuous::crps_gpd(y, location, scale, shape, mass)
        }
        Family::Exp2 { .. } => unreachable!("exp2 has no CRPS"),
        Family::Binom { size, prob } => discrete::crps_binom(y, size, prob),
        Family::Hyper { m, n, k } => discrete::crps_hyper(y, m, n, k),
        Family::Nbinom { size, prob } => discrete::crps_nbinom(y, size, prob)?,
        Family::Pois { lambda } => discrete::crps_pois(y, lambda)?,
    };
    finish(v, tag)
}

fn require_df_above_one(df: f64) -> Result<()> {
    if df > 1.0 {
        Ok(())
    } else {
        Err(ScoreError::NonFinite(format!(
            "Student's t needs df > 1 for a finite CRPS, got {df}"
        )))
    }
}

/// Logarithmic score `-log f(y)`; `+inf` outside the support.
pub fn logs_closed(family: &Family, y: f64) -> Result<f64> {
    let tag = family.tag();
    if !tag.logs_available() {
        return Err(ScoreError::LogsUnavailable(tag.name()));
    }
    observation(y)?;
    family.validate()?;
    let v = match *family {
        Family::Mixnorm(ref mix) => return logs_mixnorm(mix, y),
        Family::Logis { location, scale } => {
            locscale::logs_bounded(locscale::Kernel::Logistic, y, location, scale, f64::NEG_INFINITY, f64::INFINITY)
        }
        Family::Norm { mean, sd } => {
            locscale::logs_bounded(locscale::Kernel::Normal, y, mean, sd, f64::NEG_INFINITY, f64::INFINITY)
        }
        Family::T { df, location, scale } => locscale::logs_bounded(
            locscale::Kernel::student(df), y, location, scale, f64::NEG_INFINITY, f64::INFINITY,
        ),
        Family::Tlogis { location, scale, lower, upper } => {
            locscale::logs_bounded(locscale::Kernel::Logistic, y, location, scale, lower, upper)
        }
        Family::Tnorm { location, scale, lower, upper } => {
            locscale::logs_bounded(locscale::Kernel::Normal, y, location, scale, lower, upper)
        }
        Family::Tt { df, location, scale, lower, upper } => {
            locscale::logs_bounded(locscale::Kernel::student(df), y, location, scale, lower, upper)
        }
        Family::Lapl { location, scale } => continuous::logs_lapl(y, location, scale),
        Family::TwoPieceExp { location, scale1, scale2 } => continuous::logs_2pexp(y, location, scale1, scale2),
        Family::TwoPieceNorm { location, scale1, scale2 } => continuous::logs_2pnorm(y, location, scale1, scale2),
        Family::Exp { rate } => continuous::logs_exp2(y, 0.0, 1.0 / rate),
        Family::Exp2 { location, scale } => continuous::logs_exp2(y, location, scale),
        Family::Gamma { shape, rate } => continuous::logs_gamma(y, shape, rate),
        Family::Llapl { locationlog, scalelog } => continuous::logs_llapl(y, locationlog, scalelog),
        Family::Llogis { locationlog, scalelog } => continuous::logs_llogis(y, locationlog, scalelog),
        Family::Lnorm { meanlog, sdlog } => continuous::logs_lnorm(y, meanlog, sdlog),
        Family::Beta { shape1, shape2, lower, upper } => continuous::logs_beta(y, shape1, shape2, lower, upper),
        Family::Unif { min, max, lmass, umass } => {
            if lmass > 0.0 || umass > 0.0 {
                return Err(ScoreError::LogsUnavailable("unif with point masses"));
            }
            continuous::logs_unif(y, min, max)
        }
        Family::Gev { location, scale, shape } => continuous::logs_gev(y, location, scale, shape),
        Family::Gpd { location, scale, shape, mass } => {
            if mass > 0.0 {
                return Err(ScoreError::LogsUnavailable("gpd with point mass"));
            }
            continuous::logs_gpd(y, location, scale, shape)
        }
        Family::Binom { size, prob } => discrete::logs_binom(y, size, prob),
        Family::Hyper { m, n, k } => discrete::logs_hyper(y, m, n, k),
        Family::Nbinom { size, prob } => discrete::logs_nbinom(y, size, prob),
        Family::Pois { lambda } => discrete::logs_pois(y, lambda),
        Family::ExpM { .. }
        | Family::Clogis { .. }
        | Family::Gtclogis { .. }
        | Family::Cnorm { .. }
        | Family::Gtcnorm { .. }
        | Family::Ct { .. }
        | Family::Gtct { .. } => unreachable!("filtered by logs_available"),
    };
    if v.is_nan() {
        return Err(ScoreError::NonFinite(format!("{tag} LogS evaluated to NaN")));
    }
    Ok(v)
}
