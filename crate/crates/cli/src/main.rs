mod config;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use minlen::algebra::MomentumGrid;
use minlen::eigen::{default_filter, p_space_energies, q_space_energies};
use minlen::inner::{QuadScheme, QuadratureSpec};
use minlen::models::{swanson_beta_c, CriticalBeta, MetricTag, Model};
use minlen::par::{with_jobs, Execution};
use minlen::verify::{run_battery, BatteryConfig, CHECKS};
use minlen::{Complex64, Error};

use config::{CommonArgs, RunConfig};
use table::{Cell, Table};

#[derive(Parser, Debug)]
#[command(name = "minlen", version, about = "Spectra and checks for minimal-length non-Hermitian oscillators")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form, q-space and p-space energies side by side
    Spectrum,
    /// Energies across a range of one parameter
    Sweep {
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Source::Closed)]
        source: Source,
    },
    /// Samples of an eigenfunction at points uniform in q
    Wavefunction {
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Runs the verification battery and prints one JSON record per check
    Verify {
        #[arg(long, value_enum)]
        metric_override: Option<MetricArg>,
        /// print check names and exit
        #[arg(long)]
        list: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepParam {
    Beta,
    Lambda,
    Delta,
    Omega,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Source {
    Closed,
    PSpace,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Displaced,
    Swanson,
    Generic,
    Identity,
}

impl From<MetricArg> for MetricTag {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Displaced => MetricTag::Displaced,
            MetricArg::Swanson => MetricTag::Swanson,
            MetricArg::Generic => MetricTag::Generic,
            MetricArg::Identity => MetricTag::Identity,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Io(String),
    ChecksFailed,
}

impl CliError {
    pub fn config(e: Error) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn io(e: impl std::fmt::Display) -> Self {
        CliError::Io(e.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::ChecksFailed => 1,
            CliError::Config(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }
}

// Bad parameters are a configuration problem wherever they surface.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_)
            | Error::InvalidGrid(_)
            | Error::DegenerateModel(_)
            | Error::UnsupportedRegime(_)
            | Error::ConstraintViolated(_)
            | Error::Resolution(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn cmd_spectrum(cfg: &RunConfig, model: &Model) -> Result<Table, CliError> {
    let n = cfg.levels.unwrap_or(8);
    let mut t = Table::new(["n", "E_closed", "E_q", "E_p_re", "E_p_im", "err_q", "err_p"]);
    if n == 0 {
        return Ok(t);
    }
    let closed = model.energies(n);
    let q = match q_space_energies(model, cfg.q_grid, n, Execution::default()) {
        Ok(s) => s.real_parts(),
        // no bound-state problem above the critical deformation
        Err(Error::ComplexSpectrum { .. }) => vec![f64::NAN; n],
        Err(e) => return Err(e.into()),
    };
    let grid = MomentumGrid::symmetric(cfg.p_box(model), cfg.grid.unwrap_or(1000))?;
    let p = p_space_energies(model, &grid, n, default_filter(model))?.eigenvalues;
    let nan = Complex64::new(f64::NAN, f64::NAN);
    for k in 0..n {
        let e = closed[k];
        let eq = q.get(k).copied().unwrap_or(f64::NAN);
        let ep = p.get(k).copied().unwrap_or(nan);
        t.push(vec![
            Cell::Int(k),
            Cell::Num(e.re),
            Cell::Num(eq),
            Cell::Num(ep.re),
            Cell::Num(ep.im),
            Cell::Num(rel_err(Complex64::new(eq, 0.0), e)),
            Cell::Num(rel_err(ep, e)),
        ]);
    }
    Ok(t)
}

fn with_param(cfg: &RunConfig, param: SweepParam, v: f64) -> RunConfig {
    let mut c = cfg.clone();
    match param {
        SweepParam::Beta => c.beta = v,
        SweepParam::Lambda => c.lambda = v,
        SweepParam::Delta => c.delta = v,
        SweepParam::Omega => c.omega = v,
    }
    c
}

fn cmd_sweep(
    cfg: &RunConfig,
    param: SweepParam,
    from: f64,
    to: f64,
    steps: usize,
    source: Source,
) -> Result<Table, CliError> {
    if steps < 2 {
        return Err(CliError::Config("a sweep needs at least 2 steps".into()));
    }
    if !(from.is_finite() && to.is_finite()) || from == to {
        return Err(CliError::Config(format!("sweep range [{from}, {to}] is empty")));
    }
    if matches!(param, SweepParam::Delta) && cfg.model == config::ModelKind::Displaced {
        return Err(CliError::Config("delta only applies to the swanson model".into()));
    }
    let n = cfg.levels.unwrap_or(4);
    let values: Vec<f64> = (0..steps).map(|i| from + (to - from) * i as f64 / (steps - 1) as f64).collect();
    let configs: Vec<RunConfig> = values.iter().map(|&v| with_param(cfg, param, v)).collect();
    let models = configs.iter().map(RunConfig::build_model).collect::<Result<Vec<_>, _>>()?;
    let rows = with_jobs(cfg.jobs, || {
        Execution::default().try_map(&models, |m| -> Result<(Vec<Complex64>, f64), CliError> {
            let energies = match source {
                Source::Closed => m.energies(n),
                Source::PSpace => {
                    let grid = MomentumGrid::symmetric(cfg.p_box(m), cfg.grid.unwrap_or(1000))?;
                    p_space_energies(m, &grid, n, default_filter(m))?.eigenvalues
                }
            };
            let bc = match m {
                Model::Swanson(p) => match swanson_beta_c(p) {
                    Ok(CriticalBeta::Value(b)) => b,
                    Ok(CriticalBeta::NoTransition) => f64::INFINITY,
                    Err(_) => f64::NAN,
                },
                Model::Displaced(_) => f64::NAN,
            };
            Ok((energies, bc))
        })
    })?;
    let name = format!("{param:?}").to_lowercase();
    let mut header = vec![name];
    for k in 0..n {
        header.push(format!("E_{k}_re"));
        header.push(format!("E_{k}_im"));
    }
    header.push("beta_c".into());
    let mut t = Table::new(header);
    for (v, (energies, bc)) in values.iter().zip(rows) {
        let mut row = vec![Cell::Num(*v)];
        for k in 0..n {
            let e = energies.get(k).copied().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            row.push(Cell::Num(e.re));
            row.push(Cell::Num(e.im));
        }
        row.push(Cell::Num(bc));
        t.push(row);
    }
    Ok(t)
}

fn cmd_wavefunction(cfg: &RunConfig, model: &Model, n: usize, samples: usize) -> Result<Table, CliError> {
    if samples == 0 {
        return Err(CliError::Config("samples must be positive".into()));
    }
    let quad = QuadratureSpec::new(QuadScheme::GaussLegendreOnQ, cfg.nodes, 50.0)?;
    let state = model.eigenstate_with(n, &quad)?;
    let eta = model.metric()?;
    let q_map = state.problem().q_map();
    let (a, b) = (state.problem().q_min(), state.problem().q_max());
    let mut t = Table::new(["p", "re_psi", "im_psi", "eta_of_p", "q_of_p"]);
    for i in 0..samples {
        let q = a + (b - a) * (i as f64 + 0.5) / samples as f64;
        let p = q_map.p(q);
        let psi = state.value(p);
        t.push(vec![Cell::Num(p), Cell::Num(psi.re), Cell::Num(psi.im), Cell::Num(eta.value(p)), Cell::Num(q_map.q(p))]);
    }
    Ok(t)
}

fn cmd_verify(
    cfg: &RunConfig,
    model: &Model,
    metric: Option<MetricArg>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let battery = BatteryConfig {
        matrix_points: cfg.grid.unwrap_or(2000),
        states: cfg.levels.unwrap_or(6),
        quad: QuadratureSpec::new(QuadScheme::GaussLegendreOnQ, cfg.nodes, 50.0)?,
        metric_override: metric.map(Into::into),
        exec: Execution::default(),
        ..BatteryConfig::default()
    };
    let reports = with_jobs(cfg.jobs, || run_battery(model, &battery))?;
    for r in &reports {
        serde_json::to_writer(&mut *out, r).map_err(CliError::io)?;
        writeln!(out).map_err(CliError::io)?;
    }
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(CliError::ChecksFailed)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Command::Verify { list: true, .. } = cli.command {
        for c in CHECKS {
            println!("{c}");
        }
        return Ok(());
    }
    let cfg = RunConfig::resolve(&cli.common)?;
    let model = cfg.build_model()?;
    let mut out: Box<dyn Write> = match &cfg.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = match cli.command {
        Command::Spectrum => with_jobs(cfg.jobs, || cmd_spectrum(&cfg, &model)).and_then(|t| t.write(cfg.format, &mut out)),
        Command::Sweep { param, from, to, steps, source } => {
            cmd_sweep(&cfg, param, from, to, steps, source).and_then(|t| t.write(cfg.format, &mut out))
        }
        Command::Wavefunction { n, samples } => {
            cmd_wavefunction(&cfg, &model, n, samples).and_then(|t| t.write(cfg.format, &mut out))
        }
        Command::Verify { metric_override, .. } => cmd_verify(&cfg, &model, metric_override, &mut out),
    };
    out.flush().map_err(CliError::io)?;
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Config(m) => eprintln!("error: {m}"),
                CliError::Numeric(m) => eprintln!("numeric failure: {m}"),
                CliError::Io(m) => eprintln!("i/o error: {m}"),
                CliError::ChecksFailed => eprintln!("verification failed"),
            }
            ExitCode::from(e.code())
        }
    }
}
