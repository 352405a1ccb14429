use std::cell::RefCell;
use std::collections::BTreeSet;

use properscore::{
    crps_closed, crps_sample_edf, crps_sample_kde, es_sample, logs_closed, logs_sample, vs_sample,
    Family, FamilyTag, MultivariateForecast, PairWeights, SampleForecast,
};
use rayon::prelude::*;
use serde::Deserialize;

use crate::args::{Method, MvArgs, ParametricArgs, SampleArgs, ScoreName};
use crate::error::{input, CliError, CliResult};
use crate::io::{parse_assignments, CaseValue, ScoreTable, Table};

pub fn parse_family(name: &str) -> CliResult<FamilyTag> {
    name.parse()
        .map_err(|_| input(format!("unknown family '{name}'")))
}

/// Turns per-case results into table values. Without `skip`, the first
/// failing case (in input order) aborts the run; input errors always do.
fn collect(results: Vec<CliResult<f64>>, skip: bool, quiet: bool) -> CliResult<Vec<CaseValue>> {
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(v) => out.push(Ok(v)),
            Err(e @ CliError::Input(_)) => return Err(e),
            Err(e) if !skip => return Err(e),
            Err(e) => {
                if !quiet {
                    eprintln!("warning: skipped {e}");
                }
                out.push(Err(e.to_string()));
            }
        }
    }
    Ok(out)
}

fn finite(context: &str, v: properscore::Result<f64>) -> CliResult<f64> {
    match v {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(x) => Err(CliError::Domain(format!("{context}: score is {x}"))),
        Err(e) => Err(CliError::score(context, e)),
    }
}

pub fn parametric(a: &ParametricArgs, quiet: bool) -> CliResult<String> {
    let tag = parse_family(&a.family)?;
    if let Some(m) = a.method {
        if m != Method::Closed {
            return Err(input("parametric scoring only supports --method closed"));
        }
    }
    let logs = match a.score {
        ScoreName::Crps if tag.crps_available() => false,
        ScoreName::Logs if tag.logs_available() => true,
        ScoreName::Crps | ScoreName::Logs => {
            return Err(input(format!(
                "{} is not available for family '{tag}'",
                a.score.as_str()
            )))
        }
        other => {
            return Err(input(format!(
                "score '{}' needs `score mv`",
                other.as_str()
            )))
        }
    };

    let table = Table::read(&a.input)?;
    let n = table.rows.len();
    let ycol = table.require("y")?;
    let ys: Vec<f64> = (0..n).map(|r| table.required_number(r, ycol)).collect::<CliResult<_>>()?;
    let consts = parse_assignments("param", &a.params)?;
    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    for (c, name) in table.headers.iter().enumerate() {
        if name == "y" || name == "id" {
            continue;
        }
        if consts.iter().any(|(k, _)| k == name) {
            return Err(input(format!("parameter '{name}' given both as a column and with --param")));
        }
        columns.push((name.clone(), table.broadcast_column(c)?));
    }

    let value_at = |row: usize, name: &str| -> Option<f64> {
        columns
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v[row])
            .or_else(|| consts.iter().find(|(k, _)| k == name).map(|(_, v)| *v))
    };

    // Columns the family never asks for are probably typos.
    let asked = RefCell::new(BTreeSet::new());
    let probe = |name: &str| {
        asked.borrow_mut().insert(name.to_string());
        value_at(0, name)
    };
    let probed = Family::from_params(tag, &probe).is_ok();
    let asked = asked.into_inner();
    if probed && !quiet {
        let given = columns.iter().map(|(k, _)| k).chain(consts.iter().map(|(k, _)| k));
        for name in given.filter(|k| !asked.contains(k.as_str())) {
            eprintln!("warning: family '{tag}' has no parameter '{name}'; ignored");
        }
    }

    let results: Vec<CliResult<f64>> = (0..n)
        .into_par_iter()
        .map(|r| {
            let ctx = format!("row {}", r + 1);
            let f = Family::from_params(tag, &|name| value_at(r, name))
                .map_err(|e| CliError::score(&ctx, e))?;
            if logs {
                finite(&ctx, logs_closed(&f, ys[r]))
            } else {
                finite(&ctx, crps_closed(&f, ys[r]))
            }
        })
        .collect();
    let values = collect(results, a.skip_errors, quiet)?;
    ScoreTable {
        score: a.score.as_str(),
        ids: table.ids(),
        values,
    }
    .render(&a.output)
}

/// Non-empty cells of each row.
fn ragged_rows(t: &Table) -> CliResult<Vec<Vec<f64>>> {
    (0..t.rows.len())
        .map(|r| {
            let mut row = Vec::new();
            for c in 0..t.headers.len() {
                if let Some(v) = t.number(r, c)? {
                    row.push(v);
                }
            }
            Ok(row)
        })
        .collect()
}

pub fn sample(a: &SampleArgs, quiet: bool) -> CliResult<String> {
    let method = match (a.score, a.method) {
        (ScoreName::Crps, None) => Method::Edf,
        (ScoreName::Logs, None) => Method::Kde,
        (ScoreName::Crps, Some(m @ (Method::Edf | Method::Kde))) => m,
        (ScoreName::Logs, Some(Method::Kde)) => Method::Kde,
        (ScoreName::Logs, Some(_)) => return Err(input("LogS of a sample needs --method kde")),
        (ScoreName::Crps, Some(Method::Closed)) => {
            return Err(input("sample scoring supports --method edf or kde"))
        }
        (other, _) => {
            return Err(input(format!("score '{}' needs `score mv`", other.as_str())))
        }
    };
    if a.bw.is_some() && method != Method::Kde {
        return Err(input("--bw only applies to --method kde"));
    }
    let obs = Table::read(&a.obs)?;
    let draws = Table::read(&a.draws)?;
    let n = obs.rows.len();
    if draws.rows.len() != n {
        return Err(input(format!(
            "{} has {n} observations but {} has {} rows of draws",
            obs.source,
            draws.source,
            draws.rows.len()
        )));
    }
    let ycol = obs.require("y")?;
    let ys: Vec<f64> = (0..n).map(|r| obs.required_number(r, ycol)).collect::<CliResult<_>>()?;
    let x = ragged_rows(&draws)?;
    let w = match &a.weights {
        None => None,
        Some(p) => {
            let wt = Table::read(p)?;
            if wt.rows.len() != n || wt.headers.len() != draws.headers.len() {
                return Err(input(format!("{} must have the same shape as {}", wt.source, draws.source)));
            }
            for r in 0..n {
                for c in 0..wt.headers.len() {
                    if wt.rows[r][c].is_empty() != draws.rows[r][c].is_empty() {
                        return Err(input(format!(
                            "{}: row {}, column {}: weights and draws must be empty in the same cells",
                            wt.source,
                            r + 1,
                            c + 1
                        )));
                    }
                }
            }
            Some(ragged_rows(&wt)?)
        }
    };

    let results: Vec<CliResult<f64>> = (0..n)
        .into_par_iter()
        .map(|r| {
            let ctx = format!("row {}", r + 1);
            if x[r].is_empty() {
                return Err(input(format!("{}: row {} has no draws", draws.source, r + 1)));
            }
            let fc = match &w {
                None => SampleForecast::new(x[r].clone()),
                Some(w) => SampleForecast::with_weights(x[r].clone(), w[r].clone()),
            }
            .map_err(|e| CliError::score(&ctx, e))?;
            let v = match (a.score, method) {
                (ScoreName::Crps, Method::Edf) => crps_sample_edf(ys[r], &fc),
                (ScoreName::Crps, _) => crps_sample_kde(ys[r], &fc, a.bw),
                _ => logs_sample(ys[r], &fc, a.bw),
            };
            finite(&ctx, v)
        })
        .collect();
    let values = collect(results, a.skip_errors, quiet)?;
    ScoreTable {
        score: a.score.as_str(),
        ids: obs.ids(),
        values,
    }
    .render(&a.output)
}

#[derive(Debug, Deserialize)]
struct CasesFile {
    cases: Vec<CaseIn>,
}

#[derive(Debug, Deserialize)]
struct CaseIn {
    #[serde(default)]
    id: Option<serde_json::Value>,
    y: Vec<f64>,
    /// The m samples, each a d-vector.
    dat: Vec<Vec<f64>>,
}

pub fn read_weights(path: &std::path::Path) -> CliResult<PairWeights> {
    let t = Table::read(path)?;
    let rows = (0..t.rows.len())
        .map(|r| (0..t.headers.len()).map(|c| t.required_number(r, c)).collect())
        .collect::<CliResult<Vec<Vec<f64>>>>()?;
    PairWeights::from_rows(&rows).map_err(|e| CliError::score(&t.source, e))
}

pub fn multivariate(a: &MvArgs, quiet: bool) -> CliResult<String> {
    let vs = match a.score {
        ScoreName::Es => false,
        ScoreName::Vs => true,
        other => return Err(input(format!("score '{}' is univariate", other.as_str()))),
    };
    if !vs && a.weights.is_some() {
        return Err(input("--weights only applies to --score vs"));
    }
    let source = a.cases.display().to_string();
    let file: CasesFile = serde_json::from_reader(crate::io::open(&a.cases)?)
        .map_err(|e| input(format!("{source}: {e}")))?;
    if file.cases.is_empty() {
        return Err(input(format!("{source}: no cases")));
    }
    let d = file.cases[0].y.len();
    for (i, c) in file.cases.iter().enumerate() {
        if c.y.len() != d {
            return Err(input(format!(
                "{source}: case {} has dimension {} but case 1 has {d}",
                i + 1,
                c.y.len()
            )));
        }
    }
    let weights = match &a.weights {
        Some(p) => {
            let w = read_weights(p)?;
            if w.dim() != d {
                return Err(input(format!("weight matrix is {0}x{0} but cases have d = {d}", w.dim())));
            }
            Some(w)
        }
        None => None,
    };
    let results: Vec<CliResult<f64>> = file
        .cases
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let ctx = format!("case {}", i + 1);
            let fc = MultivariateForecast::from_columns(&c.dat).map_err(|e| CliError::score(&ctx, e))?;
            let v = if vs {
                vs_sample(&c.y, &fc, weights.as_ref(), a.p)
            } else {
                es_sample(&c.y, &fc)
            };
            finite(&ctx, v)
        })
        .collect();
    let values = collect(results, a.skip_errors, quiet)?;
    let ids = file
        .cases
        .iter()
        .enumerate()
        .map(|(i, c)| match &c.id {
            None => (i + 1).to_string(),
            Some(serde_json::Value::String(s)) => s.clone(),
            Some(v) => v.to_string(),
        })
        .collect();
    ScoreTable {
        score: a.score.as_str(),
        ids,
        values,
    }
    .render(&a.output)
}
