//! Plain-text function dumps.
//!
//! `#`-prefixed header lines carry `key: value` metadata, then one
//! `x value` pair per line: node coordinates for nodal functions, element
//! midpoints for piecewise constants. Numbers use shortest round-trip form.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fem::{PiecewiseConstant, PiecewiseLinear};

pub fn format_nodal(v: &PiecewiseLinear, header: &[(&str, String)]) -> String {
    let mut out = header_block("nodal", v.mesh().n_nodes(), header);
    for (x, y) in v.mesh().nodes().iter().zip(v.values()) {
        let _ = writeln!(out, "{x:e} {y:e}");
    }
    out
}

pub fn format_piecewise_constant(g: &PiecewiseConstant, header: &[(&str, String)]) -> String {
    let mut out = header_block("piecewise_constant", g.mesh().n_nodes(), header);
    for (x, y) in g.mesh().midpoints().iter().zip(g.values()) {
        let _ = writeln!(out, "{x:e} {y:e}");
    }
    out
}

fn header_block(kind: &str, n_nodes: usize, header: &[(&str, String)]) -> String {
    let mut out = format!("# kind: {kind}\n# nodes: {n_nodes}\n");
    for (k, v) in header {
        let _ = writeln!(out, "# {k}: {v}");
    }
    out
}

pub fn write_nodal(path: &Path, v: &PiecewiseLinear, header: &[(&str, String)]) -> Result<()> {
    fs::write(path, format_nodal(v, header))?;
    Ok(())
}

pub fn write_piecewise_constant(
    path: &Path,
    g: &PiecewiseConstant,
    header: &[(&str, String)],
) -> Result<()> {
    fs::write(path, format_piecewise_constant(g, header))?;
    Ok(())
}

/// A parsed dump: header pairs in file order and the `(x, value)` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dump {
    pub header: Vec<(String, String)>,
    pub points: Vec<(f64, f64)>,
}

impl Dump {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn parse_dump(text: &str) -> Result<Dump> {
    let mut header = Vec::new();
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            if let Some((k, v)) = meta.split_once(':') {
                header.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        let bad = || Error::Parse(format!("line {}: {line:?}", lineno + 1));
        let mut it = line.split_whitespace();
        let x = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let y = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        if it.next().is_some() {
            return Err(bad());
        }
        points.push((x, y));
    }
    Ok(Dump { header, points })
}

pub fn read_dump(path: &Path) -> Result<Dump> {
    parse_dump(&fs::read_to_string(path)?)
}
