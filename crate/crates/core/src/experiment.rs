//! End-to-end runs: Uzawa solve, exact error columns, majorant, indices.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;

use crate::benchmark::{ExactSolution, ProblemSpec};
use crate::dump::{write_nodal, write_piecewise_constant};
use crate::error::{Error, Result};
use crate::fem::{Mesh, PiecewiseConstant, PiecewiseLinear};
use crate::majorant::{efficiency_indices, minimize_majorant, MajorantConfig, MajorantResult};
use crate::uzawa::{project_to_feasible, uzawa_solve, UzawaConfig, UzawaResult};

pub const CSV_HEADER: &str =
    "f,half_energy_err,energy_gap,energy_index,majorant,majorant_index,infeasibility";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub f_list: Vec<f64>,
    pub phi: f64,
    pub n_nodes: usize,
    pub uzawa: UzawaConfig,
    pub majorant: MajorantConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            f_list: (5..=20).map(|k| -(k as f64)).collect(),
            phi: -1.0,
            n_nodes: 641,
            uzawa: UzawaConfig::default(),
            majorant: MajorantConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn with_uzawa_iterations(n: usize) -> Self {
        Self {
            uzawa: UzawaConfig::with_iterations(n),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRow {
    pub f: f64,
    pub half_energy_err: f64,
    pub energy_gap: f64,
    /// `None` when the ratio is undefined.
    pub energy_index: Option<f64>,
    pub majorant: f64,
    pub majorant_index: Option<f64>,
    /// How far the raw Uzawa iterate dipped below the obstacle before clamping.
    pub infeasibility: f64,
}

/// Everything produced for a single load.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub exact: ExactSolution,
    pub uzawa: UzawaResult,
    /// Clamped iterate the columns are computed on.
    pub v: PiecewiseLinear,
    pub majorant: MajorantResult,
    pub row: ExperimentRow,
}

pub fn run_single(f: f64, config: &RunConfig) -> Result<RunOutput> {
    let wrap = |e: Error| Error::Row {
        f,
        source: Box::new(e),
    };
    let spec = ProblemSpec::new(f, config.phi).map_err(wrap)?;
    let exact = ExactSolution::new(spec).map_err(wrap)?;
    let mesh = Arc::new(Mesh::uniform(config.n_nodes).map_err(wrap)?);
    let uzawa = uzawa_solve(&spec, mesh, &config.uzawa).map_err(wrap)?;
    let v = project_to_feasible(&uzawa.v, config.phi);
    let half = exact.half_energy_error(&v);
    let gap = exact.energy_gap(&v);
    let majorant = minimize_majorant(&v, &spec, &config.majorant).map_err(wrap)?;
    let total = majorant.breakdown.total;
    let (energy_index, majorant_index) = match efficiency_indices(half, gap, total) {
        Ok((a, b)) => (Some(a), Some(b)),
        Err(_) => (
            (half > 0.0 && gap > 0.0).then(|| (gap / half).sqrt()),
            (gap > 0.0 && total > 0.0).then(|| (total / gap).sqrt()),
        ),
    };
    let row = ExperimentRow {
        f,
        half_energy_err: half,
        energy_gap: gap,
        energy_index,
        majorant: total,
        majorant_index,
        infeasibility: uzawa.infeasibility,
    };
    Ok(RunOutput {
        exact,
        uzawa,
        v,
        majorant,
        row,
    })
}

/// One row per load, in the order of `config.f_list`. Loads run in parallel.
pub fn run_table(config: &RunConfig) -> Result<Vec<ExperimentRow>> {
    if config.f_list.is_empty() {
        return Err(Error::InvalidParameter("empty load list".into()));
    }
    config
        .f_list
        .par_iter()
        .map(|&f| run_single(f, config).map(|o| o.row))
        .collect()
}

fn sci(x: f64) -> String {
    format!("{x:.5e}")
}

pub fn format_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let opt = |x: Option<f64>| x.map(sci).unwrap_or_else(|| "NaN".into());
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            sci(r.f),
            sci(r.half_energy_err),
            sci(r.energy_gap),
            opt(r.energy_index),
            sci(r.majorant),
            opt(r.majorant_index),
            sci(r.infeasibility)
        );
    }
    out
}

pub fn emit_csv(rows: &[ExperimentRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("no rows to write".into()));
    }
    fs::write(path, format_csv(rows))?;
    Ok(())
}

pub const HISTORY_HEADER: &str = "iteration,beta,term_flux,term_residual,term_obstacle,total";

pub fn format_history_csv(result: &MajorantResult) -> String {
    let mut out = String::from(HISTORY_HEADER);
    out.push('\n');
    for h in &result.history {
        let b = &h.breakdown;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            h.iteration,
            sci(b.beta),
            sci(b.term_flux),
            sci(b.term_residual),
            sci(b.term_obstacle),
            sci(b.total)
        );
    }
    out
}

/// Iterates recorded during a solve, for plotting.
#[derive(Debug, Clone, Default)]
pub struct Snapshots<'a> {
    pub uzawa: &'a [(usize, PiecewiseLinear)],
    pub majorant: &'a [(usize, PiecewiseLinear, PiecewiseConstant)],
}

/// Writes one dump per snapshot into `dir`, plus the exact `u` and `λ` on
/// the same mesh whenever any snapshot exists. Returns the written paths.
pub fn emit_figure_data(
    dir: &Path,
    exact: &ExactSolution,
    snapshots: &Snapshots<'_>,
) -> Result<Vec<PathBuf>> {
    let mesh = match (snapshots.uzawa.first(), snapshots.majorant.first()) {
        (Some((_, v)), _) => v.mesh().clone(),
        (None, Some((_, t, _))) => t.mesh().clone(),
        (None, None) => return Ok(Vec::new()),
    };
    fs::create_dir_all(dir)?;
    let spec = exact.spec();
    let meta = |role: &str, k: Option<usize>| {
        let mut h = vec![
            ("role", role.to_string()),
            ("f", format!("{:e}", spec.f)),
            ("phi", format!("{:e}", spec.phi)),
        ];
        if let Some(k) = k {
            h.push(("iteration", k.to_string()));
        }
        h
    };
    let mut written = Vec::new();

    let p = dir.join("u_exact.dat");
    write_nodal(&p, &exact.interpolant(mesh.clone()), &meta("u_exact", None))?;
    written.push(p);
    let p = dir.join("lambda_exact.dat");
    write_piecewise_constant(&p, &exact.multiplier(mesh), &meta("lambda_exact", None))?;
    written.push(p);

    for (k, v) in snapshots.uzawa {
        let p = dir.join(format!("v_iter_{k:05}.dat"));
        write_nodal(&p, v, &meta("v", Some(*k)))?;
        written.push(p);
    }
    for (k, tau, mu) in snapshots.majorant {
        let p = dir.join(format!("tau_iter_{k:05}.dat"));
        write_nodal(&p, tau, &meta("tau", Some(*k)))?;
        written.push(p);
        let p = dir.join(format!("mu_iter_{k:05}.dat"));
        write_piecewise_constant(&p, mu, &meta("mu", Some(*k)))?;
        written.push(p);
    }
    Ok(written)
}
