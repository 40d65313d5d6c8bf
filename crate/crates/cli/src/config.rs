use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use minlen::algebra::DeformationParams;
use minlen::models::{DisplacedOscillatorParams, Model, SwansonParams};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Displaced,
    Swanson,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Flags shared by every subcommand. Each one overrides the same key of the
/// `--config` file.
#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    #[arg(long, global = true, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// mu for the displaced oscillator, m for Swanson
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// number of levels or states
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    /// points of the momentum grid
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// cells of the q-space grid
    #[arg(long, global = true)]
    pub q_grid: Option<usize>,
    /// half-width of the momentum box
    #[arg(long, global = true)]
    pub p_box: Option<f64>,
    /// Gauss-Legendre nodes for inner products
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// JSON file with any of the keys above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<ModelKind>,
    hbar: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    mass: Option<f64>,
    omega: Option<f64>,
    lambda: Option<f64>,
    delta: Option<f64>,
    levels: Option<usize>,
    grid: Option<usize>,
    q_grid: Option<usize>,
    p_box: Option<f64>,
    nodes: Option<usize>,
    format: Option<Format>,
    output: Option<PathBuf>,
    jobs: Option<usize>,
}

/// Merged configuration: flags, then file, then per-model defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelKind,
    pub hbar: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mass: f64,
    pub omega: f64,
    pub lambda: f64,
    pub delta: f64,
    pub levels: Option<usize>,
    pub grid: Option<usize>,
    pub q_grid: usize,
    pub p_box: Option<f64>,
    pub nodes: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub jobs: Option<usize>,
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let model = args.model.or(file.model).unwrap_or(ModelKind::Displaced);
        let (beta, lambda, delta) = match model {
            ModelKind::Displaced => (0.1, 0.5, 0.0),
            ModelKind::Swanson => (0.5, 0.3, 0.1),
        };
        let delta_given = args.delta.or(file.delta);
        if model == ModelKind::Displaced && delta_given.is_some() {
            return Err(CliError::Config("delta only applies to the swanson model".into()));
        }
        Ok(Self {
            model,
            hbar: args.hbar.or(file.hbar).unwrap_or(1.0),
            beta: args.beta.or(file.beta).unwrap_or(beta),
            gamma: args.gamma.or(file.gamma).unwrap_or(0.0),
            mass: args.mass.or(file.mass).unwrap_or(1.0),
            omega: args.omega.or(file.omega).unwrap_or(1.0),
            lambda: args.lambda.or(file.lambda).unwrap_or(lambda),
            delta: delta_given.unwrap_or(delta),
            levels: args.levels.or(file.levels),
            grid: args.grid.or(file.grid),
            q_grid: args.q_grid.or(file.q_grid).unwrap_or(2000),
            p_box: args.p_box.or(file.p_box),
            nodes: args.nodes.or(file.nodes).unwrap_or(512),
            format: args.format.or(file.format).unwrap_or_default(),
            output: args.output.clone().or(file.output),
            jobs: args.jobs.or(file.jobs),
        })
    }

    pub fn build_model(&self) -> Result<Model, CliError> {
        let d = DeformationParams::new(self.hbar, self.beta, self.gamma).map_err(CliError::config)?;
        let m = match self.model {
            ModelKind::Displaced => {
                DisplacedOscillatorParams::new(d, self.mass, self.omega, self.lambda).map(Model::Displaced)
            }
            ModelKind::Swanson => {
                SwansonParams::new(d, self.mass, self.omega, self.lambda, self.delta).map(Model::Swanson)
            }
        };
        m.map_err(CliError::config)
    }

    pub fn p_box(&self, model: &Model) -> f64 {
        self.p_box.unwrap_or_else(|| model.default_p_box())
    }
}
