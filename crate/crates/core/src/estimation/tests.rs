use super::*;

fn sample() -> Vec<f64> {
    vec![-2.3, -0.4, 0.1, 0.9, 1.2, 2.6, -1.1, 0.45, 3.3, -0.75]
}

#[test]
fn single_point_mean_score() {
    let p = EstimationProblem::new(FamilyTag::Norm, vec![0.7], Score::Crps).unwrap();
    let got = mean_score(&p, &[0.7, 1.3]).unwrap();
    let want = crps_closed(&Family::Norm { mean: 0.7, sd: 1.3 }, 0.7).unwrap();
    assert_eq!(got, want);
}

#[test]
fn normal_logs_objective_identity() {
    let data = sample();
    let p = EstimationProblem::new(FamilyTag::Norm, data.clone(), Score::Logs).unwrap();
    let (mu, sigma) = (0.2, 1.7);
    let n = data.len() as f64;
    let ss: f64 = data.iter().map(|y| (y - mu) * (y - mu)).sum();
    let want = 0.5 * (2.0 * std::f64::consts::PI * sigma * sigma).ln() + ss / (2.0 * n * sigma * sigma);
    assert!((mean_score(&p, &[mu, sigma]).unwrap() - want).abs() < 1e-13);
}

#[test]
fn maximum_likelihood_closed_form() {
    let data = sample();
    let p = EstimationProblem::new(FamilyTag::Norm, data.clone(), Score::Logs).unwrap();
    let fit = minimize_score(&p).unwrap();
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let sd = (data.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / n).sqrt();
    assert!(fit.converged, "{fit:?}");
    assert!((fit.params[0] - mean).abs() < 1e-6, "{fit:?}");
    assert!((fit.params[1] - sd).abs() < 1e-6, "{fit:?}");
    assert!(fit.grad_norm <= GRADIENT_TOLERANCE);
}

#[test]
fn symmetric_data_has_zero_location_gradient() {
    let p = EstimationProblem::new(FamilyTag::Norm, vec![-2.0, -0.5, 0.5, 2.0], Score::Crps).unwrap();
    let g = mean_score_gradient(&p, &[0.0, 1.2]).unwrap();
    assert!(g[0].abs() < 1e-15);
}

#[test]
fn crps_fit_beats_ml_point() {
    let data = sample();
    let p = EstimationProblem::new(FamilyTag::Norm, data.clone(), Score::Crps).unwrap();
    let fit = minimize_score(&p).unwrap();
    assert!(fit.converged, "{fit:?}");
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let sd = (data.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / n).sqrt();
    assert!(mean_score(&p, &[mean, sd]).unwrap() >= fit.objective);
    assert!(fit.objective <= mean_score(&p, p.init()).unwrap());
}

#[test]
fn constant_data_does_not_converge() {
    let p = EstimationProblem::new(FamilyTag::Norm, vec![1.5; 20], Score::Crps).unwrap();
    let fit = minimize_score(&p).unwrap();
    assert!(!fit.converged);
    assert!(fit.params[1] < 1e-3, "{fit:?}");
}

#[test]
fn fixed_parameters_stay_put() {
    let p = EstimationProblem::new(FamilyTag::T, sample(), Score::Crps)
        .unwrap()
        .fix("df", 5.0)
        .unwrap();
    let fit = minimize_score(&p).unwrap();
    assert_eq!(fit.params[0], 5.0);
    assert!(fit.converged, "{fit:?}");
    assert_eq!(fit.names, vec!["df", "location", "scale"]);
}

#[test]
fn missing_required_parameter() {
    let p = EstimationProblem::new(FamilyTag::T, sample(), Score::Crps).unwrap();
    assert!(minimize_score(&p).is_err());
    assert!(EstimationProblem::new(FamilyTag::Mixnorm, sample(), Score::Crps).is_err());
    assert!(EstimationProblem::new(FamilyTag::Norm, vec![], Score::Crps).is_err());
    let one = EstimationProblem::new(FamilyTag::Norm, vec![1.0], Score::Crps).unwrap();
    assert!(minimize_score(&one).is_err());
}

#[test]
fn finite_difference_families() {
    let data = vec![0.3, 1.2, 0.7, 2.9, 0.1, 1.6, 0.9, 4.2, 0.5, 1.1, 2.2, 0.8];
    for (tag, score) in [
        (FamilyTag::Gamma, Score::Crps),
        (FamilyTag::Gamma, Score::Logs),
        (FamilyTag::Lnorm, Score::Crps),
        (FamilyTag::Exp, Score::Crps),
        (FamilyTag::Lapl, Score::Crps),
    ] {
        let p = EstimationProblem::new(tag, data.clone(), score).unwrap();
        let fit = minimize_score(&p).unwrap();
        assert!(fit.converged, "{tag} {score}: {fit:?}");
        assert!(fit.objective <= mean_score(&p, p.init()).unwrap());
    }
}

#[test]
fn exponential_ml_is_inverse_mean() {
    let data = vec![0.3, 1.2, 0.7, 2.9, 0.1, 1.6];
    let p = EstimationProblem::new(FamilyTag::Exp, data.clone(), Score::Logs).unwrap();
    let fit = minimize_score(&p).unwrap();
    let mean = data.iter().sum::<f64>() / data.len() as f64;
    assert!((fit.params[0] - 1.0 / mean).abs() < 1e-6, "{fit:?}");
}
