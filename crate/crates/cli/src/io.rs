use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::args::{Format, Output};
use crate::error::{input, CliError, CliResult};

pub fn open(path: &Path) -> CliResult<Box<dyn Read>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(io::stdin()));
    }
    File::open(path)
        .map(|f| Box::new(f) as Box<dyn Read>)
        .map_err(|e| input(format!("{}: {e}", path.display())))
}

/// A CSV file with a header row. Cells are kept as trimmed strings.
#[derive(Debug)]
pub struct Table {
    pub source: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read(path: &Path) -> CliResult<Table> {
        let source = path.display().to_string();
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(open(path)?);
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| input(format!("{source}: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        if headers.iter().all(|h| h.is_empty()) {
            return Err(input(format!("{source}: missing header row")));
        }
        for (i, h) in headers.iter().enumerate() {
            if headers[..i].contains(h) {
                return Err(input(format!("{source}: duplicate column '{h}'")));
            }
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| input(format!("{source}: {e}")))?;
            rows.push(rec.iter().map(str::to_string).collect());
        }
        if rows.is_empty() {
            return Err(input(format!("{source}: no data rows")));
        }
        Ok(Table { source, headers, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn require(&self, name: &str) -> CliResult<usize> {
        self.column(name)
            .ok_or_else(|| input(format!("{}: missing column '{name}'", self.source)))
    }

    /// Numeric cell; `None` if empty. Rows are numbered from 1.
    pub fn number(&self, row: usize, col: usize) -> CliResult<Option<f64>> {
        let cell = &self.rows[row][col];
        if cell.is_empty() {
            return Ok(None);
        }
        parse_number(cell).map(Some).ok_or_else(|| {
            input(format!(
                "{}: row {}, column '{}': '{cell}' is not a number",
                self.source,
                row + 1,
                self.headers[col]
            ))
        })
    }

    pub fn required_number(&self, row: usize, col: usize) -> CliResult<f64> {
        self.number(row, col)?.ok_or_else(|| {
            input(format!(
                "{}: row {}, column '{}' is empty",
                self.source,
                row + 1,
                self.headers[col]
            ))
        })
    }

    /// All values of a numeric column; a column whose only value is in the
    /// first row is repeated for every row.
    pub fn broadcast_column(&self, col: usize) -> CliResult<Vec<f64>> {
        let n = self.rows.len();
        let first = self.required_number(0, col)?;
        if n > 1 && (1..n).all(|r| self.rows[r][col].is_empty()) {
            return Ok(vec![first; n]);
        }
        (0..n).map(|r| self.required_number(r, col)).collect()
    }

    /// Case labels from an `id` column, or 1-based row numbers.
    pub fn ids(&self) -> Vec<String> {
        match self.column("id") {
            Some(c) => self.rows.iter().map(|r| r[c].clone()).collect(),
            None => (1..=self.rows.len()).map(|i| i.to_string()).collect(),
        }
    }
}

pub fn parse_number(s: &str) -> Option<f64> {
    s.parse::<f64>().ok()
}

/// `NAME=VALUE` pairs from repeated flags.
pub fn parse_assignments(flag: &str, items: &[String]) -> CliResult<Vec<(String, f64)>> {
    items
        .iter()
        .map(|item| {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| input(format!("--{flag} expects NAME=VALUE, got '{item}'")))?;
            let v = parse_number(value.trim())
                .ok_or_else(|| input(format!("--{flag} {name}: '{value}' is not a number")))?;
            Ok((name.trim().to_string(), v))
        })
        .collect()
}

/// Formats like C's `%.*g`: `digits` significant digits, trailing zeros removed.
pub fn fmt_g(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "Inf".into() } else { "-Inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Per-case value or the message of the error that case raised.
pub type CaseValue = Result<f64, String>;

pub struct ScoreTable<'a> {
    pub score: &'a str,
    pub ids: Vec<String>,
    pub values: Vec<CaseValue>,
}

impl ScoreTable<'_> {
    /// Mean over the cases that produced a value, and how many did.
    pub fn aggregate(&self) -> (f64, usize) {
        let ok: Vec<f64> = self.values.iter().filter_map(|v| v.as_ref().ok().copied()).collect();
        let n = ok.len();
        let mean = if n == 0 { f64::NAN } else { ok.iter().sum::<f64>() / n as f64 };
        (mean, n)
    }

    pub fn render(&self, out: &Output) -> CliResult<String> {
        let (mean, n) = self.aggregate();
        match out.format {
            Format::Csv => {
                let p = out.precision as usize;
                let mut w = csv::Writer::from_writer(Vec::new());
                csv_err(w.write_record(["case_id", "score", "value", "note"]))?;
                for (id, v) in self.ids.iter().zip(&self.values) {
                    let rec = match v {
                        Ok(x) => [id.as_str(), self.score, &fmt_g(*x, p), ""].map(str::to_string),
                        Err(e) => [id.as_str(), self.score, "NaN", e.as_str()].map(str::to_string),
                    };
                    csv_err(w.write_record(&rec))?;
                }
                let tail = format!("n_cases={n}");
                csv_err(w.write_record(["mean", self.score, &fmt_g(mean, p), &tail]))?;
                let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
            Format::Json => {
                let mut s = String::from("{\n");
                s += &format!("  \"score\": {},\n", json_str(self.score));
                s += &format!("  \"n_cases\": {n},\n");
                s += &format!("  \"mean\": {},\n", json_num(mean));
                s += "  \"cases\": [";
                for (i, (id, v)) in self.ids.iter().zip(&self.values).enumerate() {
                    s += if i == 0 { "\n" } else { ",\n" };
                    s += &match v {
                        Ok(x) => format!("    {{\"case_id\": {}, \"value\": {}}}", json_str(id), json_num(*x)),
                        Err(e) => format!(
                            "    {{\"case_id\": {}, \"value\": null, \"error\": {}}}",
                            json_str(id),
                            json_str(e)
                        ),
                    };
                }
                s += "\n  ]\n}\n";
                Ok(s)
            }
        }
    }
}

fn csv_err<T>(r: csv::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::Io(io::Error::other(e)))
}

pub fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// JSON number with 17 significant digits; non-finite values become null.
pub fn json_num(v: f64) -> String {
    if v.is_finite() {
        fmt_g(v, 17)
    } else {
        "null".into()
    }
}

pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
