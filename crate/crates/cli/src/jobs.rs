//! The subcommands.

use std::io::Read;
use std::path::Path;

use quatslice::laplace::{laplace, QuadratureConfig, TransformRecord};
use quatslice::probe::ProbeSet;
use quatslice::time_fn::TimeFnDocument;
use quatslice::verify::{run_suite, Bound, Suite, SuiteReport, VerifyOptions, DEFAULT_SEED};
use quatslice::{Quat, Series, Side, SliceRegularFunction, TimeDomainFunction};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::output::{self, num, opt_num, opt_quat_cells, quat_cells, quat_header, Table};
use crate::{CliError, Format};

/// Shared flags.
#[derive(Debug, Clone, Default)]
pub struct Job {
    pub input: Option<String>,
    pub probes: Option<String>,
    pub tol: Option<f64>,
    pub format: Format,
    pub seed: Option<u64>,
}

/// Bytes to emit and how many records or properties failed.
pub struct Outcome {
    pub body: Vec<u8>,
    pub failures: usize,
    pub total: usize,
}

fn lib(e: quatslice::Error) -> CliError {
    match e {
        quatslice::Error::Usage(m) => CliError::Usage(m),
        other => CliError::Failure(other.to_string()),
    }
}

/// A file path, `-` for stdin, or inline JSON.
fn load(arg: &str, what: &str) -> Result<String, CliError> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("{what}: cannot read stdin: {e}")))?;
        return Ok(s);
    }
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{what}: cannot read {arg}: {e}")));
    }
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        Err(CliError::Usage(format!("{what}: no such file '{arg}'")))
    }
}

/// Parses JSON, naming the offending field on failure.
fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let v = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            CliError::Usage(format!("{what}: {inner}"))
        } else {
            CliError::Usage(format!("{what}: field `{path}`: {inner}"))
        }
    })?;
    de.end().map_err(|e| CliError::Usage(format!("{what}: {e}")))?;
    Ok(v)
}

impl Job {
    fn input<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        let arg = self.input.as_deref().ok_or_else(|| CliError::Usage("--input is required".into()))?;
        parse(&load(arg, "input")?, "input")
    }

    fn probes(&self, required: bool) -> Result<Vec<Quat>, CliError> {
        match self.probes.as_deref() {
            Some(arg) => Ok(ProbeSet::from_json(&load(arg, "probes")?).map_err(lib)?.points()),
            None if required => Err(CliError::Usage("--probes is required".into())),
            None => Ok(Vec::new()),
        }
    }

    fn tolerance(&self) -> Result<Option<f64>, CliError> {
        match self.tol {
            Some(t) if !(t.is_finite() && t > 0.0) => Err(CliError::Usage(format!("--tol must be positive, got {t}"))),
            t => Ok(t),
        }
    }

    fn quadrature(&self) -> Result<QuadratureConfig, CliError> {
        Ok(match self.tolerance()? {
            Some(t) => QuadratureConfig::with_tolerance(t),
            None => QuadratureConfig::default(),
        })
    }

    fn time_function(&self) -> Result<TimeDomainFunction, CliError> {
        let doc: TimeFnDocument = self.input()?;
        TimeDomainFunction::from_document(&doc).map_err(lib)
    }
}

fn emit<T: Serialize>(format: Format, json: &T, table: impl FnOnce() -> Table) -> Result<Vec<u8>, CliError> {
    let bytes = match format {
        Format::Json => output::json(json),
        Format::Csv => table().to_bytes(),
    };
    bytes.map_err(|e| CliError::Failure(format!("cannot format output: {e}")))
}

#[derive(Serialize)]
struct Row {
    s: Quat,
    value: Option<Quat>,
    est_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl Row {
    fn from_result(s: Quat, r: quatslice::Result<TransformRecord>) -> Self {
        match r {
            Ok(rec) => Row { s, value: Some(rec.value), est_error: Some(rec.est_error), error: None },
            Err(e) => Row { s, value: None, est_error: None, error: Some(e.to_string()) },
        }
    }
}

#[derive(Serialize)]
struct TransformOutput<'a> {
    command: &'static str,
    function: &'a str,
    side: Side,
    abscissa: f64,
    tolerance: f64,
    records: Vec<Row>,
}

pub fn transform(job: &Job, side: Side) -> Result<Outcome, CliError> {
    let cfg = job.quadrature()?;
    let f = job.time_function()?;
    let points = job.probes(true)?;
    let tr = laplace(&f, side, &cfg).map_err(lib)?;
    let records: Vec<Row> = points.par_iter().map(|&s| Row::from_result(s, tr.record(s))).collect();
    let failures = records.iter().filter(|r| r.error.is_some()).count();
    let out = TransformOutput {
        command: "transform",
        function: f.label(),
        side,
        abscissa: tr.abscissa(),
        tolerance: cfg.abs_tol,
        records,
    };
    let body = emit(job.format, &out, || {
        let mut h: Vec<String> = quat_header("s").into();
        h.extend(quat_header("value"));
        h.extend(["est_error".into(), "error".into()]);
        let mut t = Table::new(&h.iter().map(String::as_str).collect::<Vec<_>>());
        for r in &out.records {
            let mut row: Vec<String> = quat_cells(r.s).into();
            row.extend(opt_quat_cells(r.value));
            row.push(opt_num(r.est_error));
            row.push(r.error.clone().unwrap_or_default());
            t.push(row);
        }
        t
    })?;
    Ok(Outcome { body, failures, total: out.records.len() })
}

#[derive(Serialize)]
struct TableRow {
    s: Quat,
    left: Option<Quat>,
    left_error: Option<f64>,
    right: Option<Quat>,
    right_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct TableOutput<'a> {
    command: &'static str,
    function: &'a str,
    abscissa: f64,
    tolerance: f64,
    rows: Vec<TableRow>,
}

/// Left and right transforms side by side.
pub fn table(job: &Job) -> Result<Outcome, CliError> {
    let cfg = job.quadrature()?;
    let f = job.time_function()?;
    let points = job.probes(true)?;
    let left = laplace(&f, Side::Left, &cfg).map_err(lib)?;
    let right = laplace(&f, Side::Right, &cfg).map_err(lib)?;
    let rows: Vec<TableRow> = points
        .par_iter()
        .map(|&s| match (left.record(s), right.record(s)) {
            (Ok(l), Ok(r)) => TableRow {
                s,
                left: Some(l.value),
                left_error: Some(l.est_error),
                right: Some(r.value),
                right_error: Some(r.est_error),
                error: None,
            },
            (Err(e), _) | (_, Err(e)) => TableRow {
                s,
                left: None,
                left_error: None,
                right: None,
                right_error: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let failures = rows.iter().filter(|r| r.error.is_some()).count();
    let out = TableOutput { command: "table", function: f.label(), abscissa: left.abscissa(), tolerance: cfg.abs_tol, rows };
    let body = emit(job.format, &out, || {
        let mut h: Vec<String> = quat_header("s").into();
        h.extend(quat_header("left"));
        h.push("left_error".into());
        h.extend(quat_header("right"));
        h.extend(["right_error".into(), "error".into()]);
        let mut t = Table::new(&h.iter().map(String::as_str).collect::<Vec<_>>());
        for r in &out.rows {
            let mut row: Vec<String> = quat_cells(r.s).into();
            row.extend(opt_quat_cells(r.left));
            row.push(opt_num(r.left_error));
            row.extend(opt_quat_cells(r.right));
            row.push(opt_num(r.right_error));
            row.push(r.error.clone().unwrap_or_default());
            t.push(row);
        }
        t
    })?;
    Ok(Outcome { body, failures, total: out.rows.len() })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegprodInput {
    f: Series,
    g: Series,
}

#[derive(Serialize)]
struct PointValue {
    q: Quat,
    value: Quat,
}

#[derive(Serialize)]
struct RegprodOutput {
    command: &'static str,
    product: Series,
    values: Vec<PointValue>,
}

pub fn regprod(job: &Job) -> Result<Outcome, CliError> {
    let input: RegprodInput = job.input()?;
    if input.f.side() != input.g.side() {
        return Err(CliError::Usage(format!(
            "f is a {} series but g is a {} series",
            input.f.side(),
            input.g.side()
        )));
    }
    let product = input.f.star(&input.g).map_err(lib)?;
    let points = job.probes(false)?;
    let values: Vec<PointValue> = points.par_iter().map(|&q| PointValue { q, value: product.eval(q) }).collect();
    let out = RegprodOutput { command: "regprod", product, values };
    let body = emit(job.format, &out, || {
        let mut h = vec!["kind".to_string(), "n".into()];
        h.extend(quat_header("q"));
        h.extend(quat_header("value"));
        let mut t = Table::new(&h.iter().map(String::as_str).collect::<Vec<_>>());
        for (n, c) in out.product.coeffs().iter().enumerate() {
            let mut row = vec!["coeff".to_string(), n.to_string()];
            row.extend(opt_quat_cells(None));
            row.extend(quat_cells(*c));
            t.push(row);
        }
        for v in &out.values {
            let mut row = vec!["value".to_string(), String::new()];
            row.extend(quat_cells(v.q));
            row.extend(quat_cells(v.value));
            t.push(row);
        }
        t
    })?;
    Ok(Outcome { body, failures: 0, total: out.values.len() })
}

/// Operation applied before evaluation.
#[derive(Debug, Clone, Copy, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
enum EvalOp {
    #[default]
    None,
    Eta,
    Conjugate,
    Symmetrization,
    Reciprocal,
    Derivative,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EvalInput {
    f: Series,
    #[serde(default)]
    op: EvalOp,
}

#[derive(Serialize)]
struct EvalRow {
    q: Quat,
    value: Option<Quat>,
    est_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct EvalOutput {
    command: &'static str,
    op: EvalOp,
    side: Side,
    records: Vec<EvalRow>,
}

/// Evaluates a series, or a function derived from it, through the tensor form.
pub fn eval(job: &Job) -> Result<Outcome, CliError> {
    let input: EvalInput = job.input()?;
    let points = job.probes(true)?;
    let f = SliceRegularFunction::from_series(&input.f);
    let g = match input.op {
        EvalOp::None => f,
        EvalOp::Eta => f.eta(),
        EvalOp::Conjugate => f.regular_conjugate(),
        EvalOp::Symmetrization => f.symmetrization(),
        EvalOp::Reciprocal => f.regular_reciprocal(),
        EvalOp::Derivative => f.slice_derivative(false).map_err(lib)?,
    };
    let records: Vec<EvalRow> = points
        .par_iter()
        .map(|&q| match g.eval_with_error(q) {
            Ok(e) => EvalRow { q, value: Some(e.value), est_error: Some(e.error), error: None },
            Err(e) => EvalRow { q, value: None, est_error: None, error: Some(e.to_string()) },
        })
        .collect();
    let failures = records.iter().filter(|r| r.error.is_some()).count();
    let out = EvalOutput { command: "eval", op: input.op, side: g.side(), records };
    let body = emit(job.format, &out, || {
        let mut h: Vec<String> = quat_header("q").into();
        h.extend(quat_header("value"));
        h.extend(["est_error".into(), "error".into()]);
        let mut t = Table::new(&h.iter().map(String::as_str).collect::<Vec<_>>());
        for r in &out.records {
            let mut row: Vec<String> = quat_cells(r.q).into();
            row.extend(opt_quat_cells(r.value));
            row.push(opt_num(r.est_error));
            row.push(r.error.clone().unwrap_or_default());
            t.push(row);
        }
        t
    })?;
    Ok(Outcome { body, failures, total: out.records.len() })
}

pub fn verify(job: &Job, suite: &str) -> Result<Outcome, CliError> {
    let suite: Suite = suite.parse().map_err(lib)?;
    let opts = VerifyOptions { seed: job.seed.unwrap_or(DEFAULT_SEED), tolerance: job.tolerance()? };
    let report: SuiteReport = run_suite(suite, opts);
    let failures = report.properties.iter().filter(|p| !p.pass).count();
    let body = emit(job.format, &report, || {
        let mut t = Table::new(&["suite", "property", "residual", "threshold", "bound", "pass", "detail"]);
        for p in &report.properties {
            let bound = match p.bound {
                Bound::AtMost => "<=",
                Bound::AtLeast => ">=",
            };
            t.push(vec![
                p.suite.to_string(),
                p.property.clone(),
                num(p.residual),
                num(p.threshold),
                bound.into(),
                p.pass.to_string(),
                p.detail.clone().unwrap_or_default(),
            ]);
        }
        t
    })?;
    Ok(Outcome { body, failures, total: report.properties.len() })
}
