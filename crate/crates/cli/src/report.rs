use crate::error::CliResult;

/// `cost / opt`, with `0 / 0` read as 1 and `x / 0` as infinity.
pub fn ratio(cost: f64, opt: f64) -> f64 {
    if opt > 0.0 {
        cost / opt
    } else if cost == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// `a <= b` up to a relative tolerance of 1e-9.
pub fn within(a: f64, b: f64) -> bool {
    a <= b + 1e-9 * a.abs().max(b.abs())
}

pub fn agree(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &'static str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub instance: String,
    pub m: usize,
    pub k: usize,
    pub algorithm: String,
    pub cost: f64,
    pub opt: f64,
    pub ratio: f64,
    pub bound: Option<f64>,
    pub checks: Vec<Check>,
    pub wall_ms: f64,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub const REPORT_HEADER: [&str; 9] = [
    "instance",
    "m",
    "k",
    "algorithm",
    "cost",
    "opt",
    "ratio",
    "bound",
    "checks",
];

/// Report rows as CSV, with a trailing `wall_ms` column when `timing` is set.
pub fn reports_csv(reports: &[RunReport], timing: bool) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = REPORT_HEADER.to_vec();
    if timing {
        header.push("wall_ms");
    }
    w.write_record(&header)?;
    for r in reports {
        let checks: Vec<String> = r
            .checks
            .iter()
            .map(|c| format!("{}={}", c.name, if c.pass { "pass" } else { "fail" }))
            .collect();
        let mut row = vec![
            r.instance.clone(),
            r.m.to_string(),
            r.k.to_string(),
            r.algorithm.clone(),
            r.cost.to_string(),
            r.opt.to_string(),
            r.ratio.to_string(),
            r.bound.map(|b| b.to_string()).unwrap_or_default(),
            checks.join(";"),
        ];
        if timing {
            row.push(format!("{:.3}", r.wall_ms));
        }
        w.write_record(&row)?;
    }
    Ok(finish(w))
}

pub(crate) fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("csv output is utf-8")
}
