use properscore::{minimize_score, EstimationProblem, EstimationResult, FamilyTag, Score};

use crate::args::{EstimateArgs, ScoreName};
use crate::error::{input, CliError, CliResult};
use crate::io::{json_num, json_str, parse_assignments, Table};
use crate::score::parse_family;

fn check_name(tag: FamilyTag, flag: &str, name: &str) -> CliResult<()> {
    let known = tag
        .params()
        .iter()
        .any(|s| s.name == name || s.aliases.contains(&name));
    if known {
        Ok(())
    } else {
        Err(input(format!("--{flag}: family '{tag}' has no parameter '{name}'")))
    }
}

pub fn problem(a: &EstimateArgs) -> CliResult<EstimationProblem> {
    let tag = parse_family(&a.family)?;
    let score = match a.score {
        ScoreName::Crps if tag.crps_available() => Score::Crps,
        ScoreName::Logs if tag.logs_available() => Score::Logs,
        s @ (ScoreName::Crps | ScoreName::Logs) => {
            return Err(input(format!("{} is not available for family '{tag}'", s.as_str())))
        }
        s => return Err(input(format!("cannot estimate with score '{}'", s.as_str()))),
    };
    let table = Table::read(&a.data)?;
    let col = table.require(&a.column)?;
    let data = (0..table.rows.len())
        .map(|r| table.required_number(r, col))
        .collect::<CliResult<Vec<f64>>>()?;

    let fix = parse_assignments("fix", &a.fix)?;
    let init = parse_assignments("init", &a.init)?;
    let mut p = EstimationProblem::new(tag, data, score).map_err(|e| CliError::score(&table.source, e))?;
    for (name, v) in &fix {
        check_name(tag, "fix", name)?;
        p = p.fix(name, *v).map_err(|e| CliError::score("--fix", e))?;
    }
    for (name, v) in &init {
        check_name(tag, "init", name)?;
        if fix.iter().any(|(k, _)| k == name) {
            return Err(input(format!("'{name}' is given with both --fix and --init")));
        }
        p = p.start(name, *v).map_err(|e| CliError::score("--init", e))?;
    }
    for (i, spec) in tag.params().iter().enumerate() {
        if p.init()[i].is_nan() {
            return Err(input(format!(
                "family '{tag}' needs --fix {}=VALUE",
                spec.name
            )));
        }
    }
    Ok(p)
}

pub fn render(p: &EstimationProblem, r: &EstimationResult) -> String {
    let params: Vec<String> = r
        .names
        .iter()
        .zip(&r.params)
        .map(|(k, v)| format!("{}: {}", json_str(k), json_num(*v)))
        .collect();
    let free: Vec<String> = r
        .names
        .iter()
        .enumerate()
        .filter(|(i, _)| p.is_free(*i))
        .map(|(_, k)| json_str(k))
        .collect();
    let mut s = String::from("{\n");
    s += &format!("  \"family\": {},\n", json_str(p.family().name()));
    s += &format!("  \"score\": {},\n", json_str(p.score().name()));
    s += &format!("  \"n\": {},\n", p.data().len());
    s += &format!("  \"params\": {{{}}},\n", params.join(", "));
    s += &format!("  \"free\": [{}],\n", free.join(", "));
    s += &format!("  \"objective\": {},\n", json_num(r.objective));
    s += &format!("  \"grad_norm\": {},\n", json_num(r.grad_norm));
    s += &format!("  \"iterations\": {},\n", r.iterations);
    s += &format!("  \"converged\": {},\n", r.converged);
    s += &format!("  \"message\": {}\n", json_str(&r.message));
    s += "}\n";
    s
}

/// The JSON report, and whether the fit converged.
pub fn run(a: &EstimateArgs) -> CliResult<(String, bool)> {
    let p = problem(a)?;
    let r = minimize_score(&p).map_err(|e| CliError::score("estimation", e))?;
    Ok((render(&p, &r), r.converged))
}
