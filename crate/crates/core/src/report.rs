//! Check outcomes, failure witnesses, sweep and moment reports, and their
//! canonical JSON/CSV serialization.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};

/// One side of a check: an exact integer, a real, a complex number or a flag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Side {
    Int(i64),
    Real(f64),
    Complex([f64; 2]),
    Bool(bool),
}

// Untagged derive does not see numbers under arbitrary precision, so go
// through `Value`.
impl<'de> Deserialize<'de> for Side {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let bad = || D::Error::custom("expected integer, real, [re, im] or bool");
        match Value::deserialize(d)? {
            Value::Bool(b) => Ok(Side::Bool(b)),
            Value::Number(n) => match n.as_i64() {
                Some(i) => Ok(Side::Int(i)),
                None => n.as_f64().map(Side::Real).ok_or_else(bad),
            },
            Value::Array(a) if a.len() == 2 => {
                let re = a[0].as_f64().ok_or_else(bad)?;
                let im = a[1].as_f64().ok_or_else(bad)?;
                Ok(Side::Complex([re, im]))
            }
            _ => Err(bad()),
        }
    }
}

impl From<Complex64> for Side {
    fn from(z: Complex64) -> Self {
        Side::Complex([z.re, z.im])
    }
}

/// Result of evaluating one check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outcome {
    pub lhs: Side,
    pub rhs: Side,
    pub deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Outcome {
    pub fn exact(lhs: i64, rhs: i64) -> Self {
        Self {
            lhs: Side::Int(lhs),
            rhs: Side::Int(rhs),
            deviation: (lhs - rhs).unsigned_abs() as f64,
            tol: 0.0,
            pass: lhs == rhs,
        }
    }

    pub fn flag(lhs: bool, rhs: bool) -> Self {
        Self {
            lhs: Side::Bool(lhs),
            rhs: Side::Bool(rhs),
            deviation: if lhs == rhs { 0.0 } else { 1.0 },
            tol: 0.0,
            pass: lhs == rhs,
        }
    }

    pub fn close(lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        let deviation = (lhs - rhs).norm();
        Self { lhs: lhs.into(), rhs: rhs.into(), deviation, tol, pass: deviation <= tol }
    }

    pub fn close_real(lhs: f64, rhs: f64, tol: f64) -> Self {
        let deviation = (lhs - rhs).abs();
        Self { lhs: Side::Real(lhs), rhs: Side::Real(rhs), deviation, tol, pass: deviation <= tol }
    }

    /// `value ≤ bound + tol`; the deviation is the excess over the bound.
    pub fn at_most(value: f64, bound: f64, tol: f64) -> Self {
        let deviation = (value - bound).max(0.0);
        Self { lhs: Side::Real(value), rhs: Side::Real(bound), deviation, tol, pass: deviation <= tol }
    }
}

/// A failed check with everything needed to re-run it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub inputs: Value,
    pub lhs: Side,
    pub rhs: Side,
    pub deviation: f64,
    pub tol: f64,
}

/// Most witnesses kept per report; the failure count is always exact.
pub const MAX_WITNESSES: usize = 256;

/// Running totals of a sweep; merging is associative and commutative up to
/// the final witness sort.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub checks: u64,
    pub failed: u64,
    pub max_deviation: f64,
    pub failures: Vec<Witness>,
}

impl Tally {
    pub fn record(&mut self, check: &str, outcome: Outcome, inputs: impl FnOnce() -> Value) {
        self.checks += 1;
        if outcome.deviation > self.max_deviation {
            self.max_deviation = outcome.deviation;
        }
        if !outcome.pass {
            self.failed += 1;
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(Witness {
                    check: check.to_string(),
                    inputs: inputs(),
                    lhs: outcome.lhs,
                    rhs: outcome.rhs,
                    deviation: outcome.deviation,
                    tol: outcome.tol,
                });
            }
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.failed += other.failed;
        self.max_deviation = self.max_deviation.max(other.max_deviation);
        self.failures.extend(other.failures);
        self
    }

    fn sorted_failures(mut self) -> Vec<Witness> {
        self.failures.sort_by_cached_key(|w| (w.check.clone(), w.inputs.to_string()));
        self.failures.truncate(MAX_WITNESSES);
        self.failures
    }
}

/// Outcome of a verification suite.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub suite: String,
    pub params: BTreeMap<String, Value>,
    pub checks: u64,
    pub failed: u64,
    pub max_deviation: f64,
    pub failures: Vec<Witness>,
    /// Measured quantities that are reported but never asserted.
    #[serde(default)]
    pub measurements: BTreeMap<String, Value>,
    /// Optional tabular payload, emitted as the CSV body.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl SweepReport {
    pub fn new(suite: &str) -> Self {
        Self { suite: suite.to_string(), ..Default::default() }
    }

    pub fn with_param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), serde_json::to_value(value).expect("serializable parameter"));
        self
    }

    pub fn absorb(&mut self, tally: Tally) {
        self.checks += tally.checks;
        self.failed += tally.failed;
        self.max_deviation = self.max_deviation.max(tally.max_deviation);
        let mut all = Tally { failures: std::mem::take(&mut self.failures), ..Default::default() };
        all.failures.extend(tally.failures);
        self.failures = all.sorted_failures();
    }

    pub fn measure(&mut self, key: &str, value: impl Serialize) {
        self.measurements.insert(key.to_string(), serde_json::to_value(value).expect("serializable measurement"));
    }

    /// Combines two reports of the same suite.
    pub fn merge(mut self, other: SweepReport) -> SweepReport {
        self.params.extend(other.params);
        self.measurements.extend(other.measurements);
        self.absorb(Tally {
            checks: other.checks,
            failed: other.failed,
            max_deviation: other.max_deviation,
            failures: other.failures,
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// Fourth moment of L-values over a coset of characters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub q: u64,
    pub d: u64,
    pub alpha: DirichletCharacter,
    #[serde(rename = "T")]
    pub t_max: f64,
    pub step: f64,
    pub moment: f64,
    pub normalizer: f64,
    pub ratio: f64,
    /// `|M(step) - M(2·step)| / 3`, a trapezoid error estimate.
    pub quadrature_error: f64,
}

pub const MOMENT_CSV_HEADER: [&str; 7] = ["q", "d", "T", "step", "moment", "normalizer", "ratio"];

/// C-style `%.12e`.
pub fn format_float(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    let s = format!("{:.12e}", x);
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    Some(format!("{mantissa}e{sign}{:02}", exp.abs()))
}

fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            if n.is_u64() || n.is_i64() {
                Value::Number(n)
            } else {
                let x = n.as_f64().expect("finite float");
                match format_float(x) {
                    Some(s) => Value::Number(Number::from_str(&s).expect("valid number")),
                    None => Value::Null,
                }
            }
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonicalize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, canonicalize(v))).collect()),
        other => other,
    }
}

/// Canonical JSON: sorted keys, floats as `%.12e`, non-finite floats as null.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = canonicalize(serde_json::to_value(value)?);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Param(format!("unknown format `{other}`"))),
        }
    }
}

fn cell(v: &Value) -> String {
    match canonicalize(v.clone()) {
        Value::String(s) => s,
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn float_cell(x: f64) -> String {
    format_float(x).unwrap_or_default()
}

/// Anything that can be emitted by [`emit_report`].
pub trait Emit: Serialize {
    fn write_csv<W: Write>(&self, w: W) -> Result<()>;
}

impl Emit for SweepReport {
    fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        match &self.table {
            Some(t) => {
                out.write_record(&t.columns)?;
                for row in &t.rows {
                    out.write_record(row.iter().map(cell))?;
                }
            }
            None => {
                out.write_record(["suite", "checks", "failed", "max_deviation"])?;
                out.write_record([
                    self.suite.clone(),
                    self.checks.to_string(),
                    self.failed.to_string(),
                    float_cell(self.max_deviation),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

impl Emit for MomentReport {
    fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_moment_csv(std::slice::from_ref(self), w)
    }
}

impl Emit for Vec<MomentReport> {
    fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_moment_csv(self, w)
    }
}

fn write_moment_csv<W: Write>(reports: &[MomentReport], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(MOMENT_CSV_HEADER)?;
    for r in reports {
        out.write_record([
            r.q.to_string(),
            r.d.to_string(),
            float_cell(r.t_max),
            float_cell(r.step),
            float_cell(r.moment),
            float_cell(r.normalizer),
            float_cell(r.ratio),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Serializes `report` to a string in the requested format.
pub fn render<T: Emit>(report: &T, format: Format) -> Result<String> {
    match format {
        Format::Json => to_canonical_json(report),
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
        }
    }
}

/// Writes `report` to `path` (or standard output for `-`).
pub fn emit_report<T: Emit>(report: &T, format: Format, path: &Path) -> Result<()> {
    let text = render(report, format)?;
    if path.as_os_str() == "-" {
        std::io::stdout().write_all(text.as_bytes())?;
    } else {
        std::fs::write(path, text)?;
    }
    Ok(())
}

pub fn parse_report(text: &str) -> Result<SweepReport> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_matches_c() {
        assert_eq!(format_float(1.23456789012345e-5).unwrap(), "1.234567890123e-05");
        assert_eq!(format_float(0.0).unwrap(), "0.000000000000e+00");
        assert_eq!(format_float(-2.5e120).unwrap(), "-2.500000000000e+120");
        assert_eq!(format_float(f64::NAN), None);
    }

    #[test]
    fn empty_report_is_valid_json() {
        let r = SweepReport::new("rho");
        let s = to_canonical_json(&r).unwrap();
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["failures"], Value::Array(vec![]));
        assert_eq!(v["max_deviation"].to_string(), "0.000000000000e+00");
    }

    #[test]
    fn parse_emit_is_identity() {
        let mut r = SweepReport::new("gsum").with_param("p", 3).with_param("tol", 1e-9);
        let mut t = Tally::default();
        t.record("x", Outcome::close(Complex64::new(1.0, 2.0), Complex64::new(1.0, 2.1), 1e-9), || {
            serde_json::json!({"n": 3, "z": 0.1})
        });
        r.absorb(t);
        r.measure("c", 2.123456789);
        let first = to_canonical_json(&r).unwrap();
        let back = parse_report(&first).unwrap();
        assert_eq!(to_canonical_json(&back).unwrap(), first);
        assert!(first.find("\"checks\"").unwrap() < first.find("\"failed\"").unwrap());
    }

    #[test]
    fn tally_merge_is_order_independent() {
        let mk = |k: i64| {
            let mut t = Tally::default();
            t.record("c", Outcome::exact(k, 0), || serde_json::json!({ "k": k }));
            t
        };
        let mut a = SweepReport::new("s");
        a.absorb(mk(1).merge(mk(2)).merge(mk(0)));
        let mut b = SweepReport::new("s");
        b.absorb(mk(0).merge(mk(2).merge(mk(1))));
        assert_eq!(a, b);
        assert_eq!(a.failed, 2);
    }
}
