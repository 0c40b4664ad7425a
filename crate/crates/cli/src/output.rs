use std::fmt::Write as _;

use clover_core::ExactRational;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Csv,
    Svg,
}

/// A command result that can be shown to people, serialized to JSON, or
/// flattened to a CSV table with a fixed header.
pub(crate) trait Payload: Serialize {
    fn human(&self) -> String;
    fn table(&self) -> Table;
}

pub(crate) struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv output is built from UTF-8 strings"))
    }
}

pub(crate) fn render<P: Payload>(payload: &P, format: Format) -> Result<String, CliError> {
    match format {
        Format::Human => Ok(payload.human()),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(payload).expect("payloads have string keys only");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => payload.table().to_csv(),
        Format::Svg => unreachable!("svg is rendered by the clover command itself"),
    }
}

/// Full round-trip precision, switching to exponent form for very large or
/// very small magnitudes.
pub(crate) fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub(crate) fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// `p/q`, including `q = 1`.
pub(crate) fn rational(q: &ExactRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Minimal SVG: one unstyled stroke path per leaf. The y axis is flipped so
/// the picture has the usual mathematical orientation.
pub(crate) fn svg(leaves: &[Vec<(f64, f64)>]) -> String {
    let mut s = String::from("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\">\n");
    for leaf in leaves {
        s.push_str("  <path fill=\"none\" stroke=\"black\" stroke-width=\"0.005\" d=\"");
        for (i, &(x, y)) in leaf.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            // Adding 0.0 turns -0 into +0 so the text doesn't depend on it.
            let _ = write!(s, "{}{cmd}{:.6} {:.6}", if i == 0 { "" } else { " " }, x + 0.0, -y + 0.0);
        }
        s.push_str("\"/>\n");
    }
    s.push_str("</svg>\n");
    s
}
