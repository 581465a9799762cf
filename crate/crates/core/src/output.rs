//! CSV and JSON serialization of grid results, plus atomic file writes.
//!
//! CSV files open with `# key = value` header lines naming the run
//! parameters and grid, followed by a column header and one row per sample.
//! Floats are printed with 17 significant digits, so identical inputs give
//! byte-identical files.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::Result;
use crate::observables::{FlatnessReport, GridResult, GridSpec};

/// Ordered run parameters echoed into every output file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Parameters(Vec<(String, Value)>);

impl Parameters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn to_map(&self) -> Map<String, Value> {
        self.0.iter().cloned().collect()
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_value(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => fmt_f64(n.as_f64().unwrap()),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn header(out: &mut String, title: &str, params: &Parameters, result: &GridResult) {
    writeln!(out, "# {title}").unwrap();
    for (k, v) in params.iter() {
        writeln!(out, "# {k} = {}", fmt_value(v)).unwrap();
    }
    match result.grid {
        GridSpec::Position(g) => {
            writeln!(out, "# x_min = {}", fmt_f64(g.x_min)).unwrap();
            writeln!(out, "# x_max = {}", fmt_f64(g.x_max)).unwrap();
            writeln!(out, "# points = {}", g.points).unwrap();
        }
        GridSpec::PhaseSpace(g) => {
            writeln!(out, "# re_min = {}", fmt_f64(g.re_min)).unwrap();
            writeln!(out, "# re_max = {}", fmt_f64(g.re_max)).unwrap();
            writeln!(out, "# im_min = {}", fmt_f64(g.im_min)).unwrap();
            writeln!(out, "# im_max = {}", fmt_f64(g.im_max)).unwrap();
            writeln!(out, "# points_per_axis = {}", g.points).unwrap();
        }
    }
    writeln!(out, "# integral_estimate = {}", fmt_f64(result.integral_estimate)).unwrap();
    writeln!(out, "# covers_support = {}", result.covers_support()).unwrap();
}

/// `x,density` or `re,im,q` rows under a parameter header.
pub fn grid_csv(result: &GridResult, params: &Parameters) -> String {
    let mut out = String::new();
    match result.grid {
        GridSpec::Position(g) => {
            header(&mut out, "position density", params, result);
            out.push_str("x,density\n");
            for (i, v) in result.values.iter().enumerate() {
                writeln!(out, "{},{}", fmt_f64(g.x(i)), fmt_f64(*v)).unwrap();
            }
        }
        GridSpec::PhaseSpace(g) => {
            header(&mut out, "husimi q", params, result);
            out.push_str("re,im,q\n");
            for (k, v) in result.values.iter().enumerate() {
                let b = g.beta(k);
                writeln!(out, "{},{},{}", fmt_f64(b.re), fmt_f64(b.im), fmt_f64(*v)).unwrap();
            }
        }
    }
    out
}

#[derive(Serialize)]
struct GridDocument<'a> {
    parameters: Map<String, Value>,
    #[serde(flatten)]
    result: &'a GridResult,
    covers_support: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    flatness: Option<&'a FlatnessReport>,
}

/// JSON carrying the same payload as [`grid_csv`], optionally with a flatness report.
pub fn grid_json(result: &GridResult, params: &Parameters, flatness: Option<&FlatnessReport>) -> Result<String> {
    let doc = GridDocument {
        parameters: params.to_map(),
        result,
        covers_support: result.covers_support(),
        flatness,
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// Write via a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
