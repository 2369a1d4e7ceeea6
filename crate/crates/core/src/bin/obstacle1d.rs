use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use obstacle1d::dump::{format_nodal, write_nodal, write_piecewise_constant};
use obstacle1d::experiment::{
    emit_csv, emit_figure_data, format_csv, format_history_csv, run_table, Snapshots,
};
use obstacle1d::{
    minimize_majorant, project_to_feasible, uzawa_solve, Error, ExactSolution, InnerSolver,
    MajorantConfig, Mesh, ProblemSpec, Regime, RunConfig, UzawaConfig,
};

#[derive(Parser)]
#[command(
    name = "obstacle1d",
    version,
    about = "1D obstacle problem: Uzawa solver and functional error majorant"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Error, gap and majorant columns for a list of loads (CSV)
    Table(TableArgs),
    /// One Uzawa run with function dumps
    Solve(SolveArgs),
    /// One majorant minimization with per-iteration history
    Majorant(MajorantArgs),
    /// Sample the closed-form solution
    BenchExact(ExactArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Inner {
    ActiveSet,
    Sweeps,
}

impl From<Inner> for InnerSolver {
    fn from(i: Inner) -> Self {
        match i {
            Inner::ActiveSet => InnerSolver::ActiveSet,
            Inner::Sweeps => InnerSolver::Sweeps,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Obstacle height
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    phi: f64,
    /// Uniform mesh nodes on [0, 1]
    #[arg(long, default_value_t = 641)]
    nodes: usize,
}

#[derive(Args)]
struct UzawaArgs {
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    rho: f64,
    #[arg(long, default_value_t = 10_000)]
    uzawa_iters: usize,
}

#[derive(Args)]
struct MajorantArgsCommon {
    #[arg(long, default_value_t = 10_000)]
    majorant_iters: usize,
    /// Iterations after which beta is recomputed
    #[arg(long, value_delimiter = ',', default_values_t = [5_000usize, 10_000])]
    beta_updates: Vec<usize>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    c_constant: f64,
}

#[derive(Args)]
struct TableArgs {
    /// Comma-separated loads
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true,
          default_values_t = (5..=20).map(|k| -(k as f64)).collect::<Vec<_>>())]
    f_list: Vec<f64>,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    uzawa: UzawaArgs,
    #[command(flatten)]
    majorant: MajorantArgsCommon,
    #[arg(long, value_enum, default_value_t = Inner::ActiveSet)]
    inner: Inner,
    /// CSV path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, default_value_t = -14.0, allow_hyphen_values = true)]
    f: f64,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    uzawa: UzawaArgs,
    /// Comma-separated 1-based iterations to dump
    #[arg(long, value_delimiter = ',')]
    snapshots: Vec<usize>,
    /// Output directory for dumps
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MajorantArgs {
    #[arg(long, default_value_t = -14.0, allow_hyphen_values = true)]
    f: f64,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    uzawa: UzawaArgs,
    #[command(flatten)]
    majorant: MajorantArgsCommon,
    #[arg(long, value_enum, default_value_t = Inner::Sweeps)]
    inner: Inner,
    /// Comma-separated 1-based iterations whose flux and multiplier are dumped
    #[arg(long, value_delimiter = ',')]
    snapshots: Vec<usize>,
    /// Output directory for history.csv and dumps
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long, default_value_t = -14.0, allow_hyphen_values = true)]
    f: f64,
    #[command(flatten)]
    common: Common,
    /// Output directory; prints u to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    stage: &'static str,
    error: Error,
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, Failure>;
}

impl<T> Stage<T> for Result<T, Error> {
    fn stage(self, stage: &'static str) -> Result<T, Failure> {
        self.map_err(|error| Failure { stage, error })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Table(a) => table(a),
        Command::Solve(a) => solve(a),
        Command::Majorant(a) => majorant(a),
        Command::BenchExact(a) => bench_exact(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { stage, error }) => {
            eprintln!("obstacle1d: {stage} failed: {error}");
            ExitCode::FAILURE
        }
    }
}

fn majorant_config(m: &MajorantArgsCommon, inner: Inner) -> MajorantConfig {
    MajorantConfig {
        n_iterations: m.majorant_iters,
        beta_update_iterations: m.beta_updates.clone(),
        c_constant: m.c_constant,
        inner: inner.into(),
        ..MajorantConfig::default()
    }
}

fn uzawa_config(u: &UzawaArgs, snapshots: Vec<usize>) -> UzawaConfig {
    UzawaConfig {
        rho: u.rho,
        n_iterations: u.uzawa_iters,
        snapshots,
    }
}

fn setup(f: f64, c: &Common) -> Result<(ProblemSpec, ExactSolution, Arc<Mesh>), Failure> {
    let spec = ProblemSpec::new(f, c.phi).stage("problem setup")?;
    let exact = ExactSolution::new(spec).stage("problem setup")?;
    let mesh = Arc::new(Mesh::uniform(c.nodes).stage("mesh")?);
    Ok((spec, exact, mesh))
}

fn out_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(Error::from).stage("output")
}

fn table(a: TableArgs) -> Result<(), Failure> {
    let config = RunConfig {
        f_list: a.f_list,
        phi: a.common.phi,
        n_nodes: a.common.nodes,
        uzawa: uzawa_config(&a.uzawa, Vec::new()),
        majorant: majorant_config(&a.majorant, a.inner),
    };
    let rows = run_table(&config).stage("table")?;
    match a.out {
        Some(path) => emit_csv(&rows, &path).stage("csv output"),
        None => {
            print!("{}", format_csv(&rows));
            Ok(())
        }
    }
}

fn solve(a: SolveArgs) -> Result<(), Failure> {
    let (spec, exact, mesh) = setup(a.f, &a.common)?;
    let res =
        uzawa_solve(&spec, mesh, &uzawa_config(&a.uzawa, a.snapshots)).stage("uzawa solve")?;
    let v = project_to_feasible(&res.v, spec.phi);
    println!("iterations,{}", res.iterations_run);
    println!("infeasibility,{:.5e}", res.infeasibility);
    println!("half_energy_err,{:.5e}", exact.half_energy_error(&v));
    println!("energy_gap,{:.5e}", exact.energy_gap(&v));
    if let Some(dir) = a.out {
        out_dir(&dir)?;
        let meta = |role: &str| vec![("role", role.to_string()), ("f", format!("{:e}", spec.f))];
        write_nodal(&dir.join("v_final.dat"), &res.v, &meta("v")).stage("output")?;
        write_piecewise_constant(&dir.join("mu_final.dat"), &res.mu, &meta("mu"))
            .stage("output")?;
        let snaps = Snapshots {
            uzawa: &res.history,
            majorant: &[],
        };
        emit_figure_data(&dir, &exact, &snaps).stage("figure output")?;
    }
    Ok(())
}

fn majorant(a: MajorantArgs) -> Result<(), Failure> {
    let (spec, exact, mesh) = setup(a.f, &a.common)?;
    let res = uzawa_solve(&spec, mesh, &uzawa_config(&a.uzawa, Vec::new())).stage("uzawa solve")?;
    let v = project_to_feasible(&res.v, spec.phi);
    let config = MajorantConfig {
        record_history: a.out.is_some(),
        snapshots: a.snapshots,
        ..majorant_config(&a.majorant, a.inner)
    };
    let m = minimize_majorant(&v, &spec, &config).stage("majorant minimization")?;
    let b = m.breakdown;
    println!("beta,{:.5e}", b.beta);
    println!("term_flux,{:.5e}", b.term_flux);
    println!("term_residual,{:.5e}", b.term_residual);
    println!("term_obstacle,{:.5e}", b.term_obstacle);
    println!("total,{:.5e}", b.total);
    println!("energy_gap,{:.5e}", exact.energy_gap(&v));
    if let Some(dir) = a.out {
        out_dir(&dir)?;
        fs::write(dir.join("history.csv"), format_history_csv(&m))
            .map_err(Error::from)
            .stage("output")?;
        let meta = |role: &str| vec![("role", role.to_string()), ("f", format!("{:e}", spec.f))];
        write_nodal(&dir.join("tau_final.dat"), &m.tau, &meta("tau")).stage("output")?;
        write_piecewise_constant(&dir.join("mu_final.dat"), &m.mu, &meta("mu")).stage("output")?;
        let snaps = Snapshots {
            uzawa: &[],
            majorant: &m.snapshots,
        };
        emit_figure_data(&dir, &exact, &snaps).stage("figure output")?;
    }
    Ok(())
}

fn bench_exact(a: ExactArgs) -> Result<(), Failure> {
    let (spec, exact, mesh) = setup(a.f, &a.common)?;
    let regime = match exact.regime() {
        Regime::Inactive => "inactive".to_string(),
        Regime::Active { r } => format!("active r={r:e}"),
    };
    let meta = |role: &str| {
        vec![
            ("role", role.to_string()),
            ("f", format!("{:e}", spec.f)),
            ("phi", format!("{:e}", spec.phi)),
            ("regime", regime.clone()),
            ("energy", format!("{:e}", exact.energy())),
        ]
    };
    let u = exact.interpolant(mesh.clone());
    let lambda = exact.multiplier(mesh);
    match a.out {
        Some(dir) => {
            out_dir(&dir)?;
            write_nodal(&dir.join("u_exact.dat"), &u, &meta("u_exact")).stage("output")?;
            write_piecewise_constant(
                &dir.join("lambda_exact.dat"),
                &lambda,
                &meta("lambda_exact"),
            )
            .stage("output")?;
        }
        None => {
            print!("{}", format_nodal(&u, &meta("u_exact")));
        }
    }
    Ok(())
}
