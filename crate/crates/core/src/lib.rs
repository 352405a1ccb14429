//! Proper scoring rules for probabilistic forecasts.
//!
//! * [`families`]: closed-form CRPS and LogS for parametric distributions,
//!   plus CRPS gradients and Hessians for the normal, logistic and t families.
//! * [`sample`]: CRPS and LogS for forecasts given as simulated draws.
//! * [`multivariate`]: energy and variogram scores.
//! * [`estimation`]: minimum-score parameter fitting.
//! * [`specfun`]: the special functions the closed forms rely on.

pub mod error;
pub mod estimation;
pub mod families;
pub mod jet;
pub mod multivariate;
pub mod sample;
pub mod specfun;

pub use error::{Result, ScoreError};
pub use estimation::{
    mean_score, mean_score_gradient, minimize_score, EstimationProblem, EstimationResult, Score,
};
pub use families::{
    crps_closed, crps_mixnorm, gradcrps, hesscrps, logs_closed, logs_mixnorm, Family, FamilyTag,
    MixtureNormal, GRADIENT_FAMILIES,
};
pub use multivariate::{es_sample, vs_sample, MultivariateForecast, PairWeights};
pub use sample::{bandwidth_nrd, crps_sample_edf, crps_sample_kde, logs_sample, SampleForecast};
