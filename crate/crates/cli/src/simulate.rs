//! Simulation studies. Replication `r` draws from ChaCha8 seeded with
//! `--seed` on stream `r`, so results do not depend on scheduling.

use properscore::{
    crps_closed, crps_sample_edf, logs_closed, logs_sample, minimize_score, EstimationProblem,
    Family, FamilyTag, SampleForecast, Score,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::args::{ConvergenceArgs, EstimationStudyArgs, Format, Output};
use crate::error::{input, CliError, CliResult};
use crate::io::fmt_g;

fn stream(seed: u64, r: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64);
    rng
}

fn normal(mean: f64, sd: f64) -> CliResult<Normal<f64>> {
    if !(mean.is_finite() && sd > 0.0 && sd.is_finite()) {
        return Err(CliError::Domain(format!(
            "need a finite mean and positive sd, got {mean} and {sd}"
        )));
    }
    Normal::new(mean, sd).map_err(|e| CliError::Domain(e.to_string()))
}

/// Log-spaced integer grid from `lo` to `hi`, duplicates removed.
pub fn size_grid(lo: usize, hi: usize, points: usize) -> Vec<usize> {
    if points == 1 || lo == hi {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut grid: Vec<usize> = (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp().round() as usize)
        .collect();
    grid.dedup();
    grid
}

/// Linear-interpolation quantile of sorted values.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let i = h.floor() as usize;
    let j = (i + 1).min(sorted.len() - 1);
    sorted[i] + (h - i as f64) * (sorted[j] - sorted[i])
}

fn csv_only(out: &Output) -> CliResult<usize> {
    match out.format {
        Format::Csv => Ok(out.precision as usize),
        Format::Json => Err(input("simulation output is CSV only")),
    }
}

pub fn convergence(a: &ConvergenceArgs) -> CliResult<String> {
    let digits = csv_only(&a.output)?;
    if a.m_min < 2 || a.m_max < a.m_min || a.points == 0 || a.replications == 0 {
        return Err(input("need 2 <= m-min <= m-max, points >= 1 and replications >= 1"));
    }
    let dist = normal(a.mean, a.sd)?;
    let truth = Family::Norm { mean: a.mean, sd: a.sd };
    let crps_true = crps_closed(&truth, a.y).map_err(|e| CliError::score("truth", e))?;
    let logs_true = logs_closed(&truth, a.y).map_err(|e| CliError::score("truth", e))?;
    let grid = size_grid(a.m_min, a.m_max, a.points);

    // scores[r][k] = (crps, logs) at grid[k] from the first grid[k] draws of replication r
    let scores: Vec<Vec<(f64, f64)>> = (0..a.replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(a.seed, r);
            let draws: Vec<f64> = (0..a.m_max).map(|_| dist.sample(&mut rng)).collect();
            grid.iter()
                .map(|&m| {
                    let fc = SampleForecast::new(draws[..m].to_vec())?;
                    Ok((crps_sample_edf(a.y, &fc)?, logs_sample(a.y, &fc, None)?))
                })
                .collect::<properscore::Result<Vec<_>>>()
        })
        .collect::<properscore::Result<_>>()
        .map_err(|e| CliError::score("simulation", e))?;

    let mut s = String::from("m,score,truth,q05,median,q95,mean\n");
    for (k, m) in grid.iter().enumerate() {
        for (name, truth, pick) in [
            ("crps", crps_true, 0usize),
            ("logs", logs_true, 1usize),
        ] {
            let mut v: Vec<f64> = scores
                .iter()
                .map(|row| if pick == 0 { row[k].0 } else { row[k].1 })
                .collect();
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            v.sort_by(f64::total_cmp);
            let cells = [truth, quantile(&v, 0.05), quantile(&v, 0.5), quantile(&v, 0.95), mean]
                .map(|x| fmt_g(x, digits));
            s += &format!("{m},{name},{}\n", cells.join(","));
        }
    }
    Ok(s)
}

pub struct Fit {
    pub mean: f64,
    pub sd: f64,
    pub converged: bool,
    pub iterations: usize,
}

fn fit(data: &[f64], score: Score) -> properscore::Result<Fit> {
    let p = EstimationProblem::new(FamilyTag::Norm, data.to_vec(), score)?;
    let r = minimize_score(&p)?;
    Ok(Fit {
        mean: r.params[0],
        sd: r.params[1],
        converged: r.converged,
        iterations: r.iterations,
    })
}

/// Per-replication minimum-CRPS and ML fits, and a summary for stderr.
pub fn estimation(a: &EstimationStudyArgs) -> CliResult<(String, String)> {
    let digits = csv_only(&a.output)?;
    if a.n < 2 || a.replications == 0 {
        return Err(input("need n >= 2 and replications >= 1"));
    }
    let dist = normal(a.mean, a.sd)?;
    let fits: Vec<(Fit, Fit)> = (0..a.replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(a.seed, r);
            let data: Vec<f64> = (0..a.n).map(|_| dist.sample(&mut rng)).collect();
            Ok((fit(&data, Score::Crps)?, fit(&data, Score::Logs)?))
        })
        .collect::<properscore::Result<_>>()
        .map_err(|e| CliError::score("simulation", e))?;

    let mut s = String::from("replication,estimator,mean,sd,converged,iterations\n");
    for (r, (c, m)) in fits.iter().enumerate() {
        for (name, f) in [("crps", c), ("ml", m)] {
            s += &format!(
                "{},{name},{},{},{},{}\n",
                r + 1,
                fmt_g(f.mean, digits),
                fmt_g(f.sd, digits),
                f.converged,
                f.iterations
            );
        }
    }

    let mut summary = String::new();
    for (name, pick) in [("crps", 0usize), ("ml", 1usize)] {
        let get = |i: usize| if pick == 0 { &fits[i].0 } else { &fits[i].1 };
        let k = fits.len() as f64;
        let mu: Vec<f64> = (0..fits.len()).map(|i| get(i).mean).collect();
        let sg: Vec<f64> = (0..fits.len()).map(|i| get(i).sd).collect();
        let avg = |v: &[f64]| v.iter().sum::<f64>() / k;
        let spread = |v: &[f64]| {
            let m = avg(v);
            (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (k - 1.0).max(1.0)).sqrt()
        };
        let failed = (0..fits.len()).filter(|&i| !get(i).converged).count();
        summary += &format!(
            "{name}: bias mean {:+.4} sd {:+.4}; spread mean {:.4} sd {:.4}; not converged {failed}\n",
            avg(&mu) - a.mean,
            avg(&sg) - a.sd,
            spread(&mu),
            spread(&sg)
        );
    }
    Ok((s, summary))
}
