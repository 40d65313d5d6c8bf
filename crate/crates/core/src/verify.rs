//! Residual checks for pseudo-Hermiticity, η-orthonormality, the momentum
//! space ODE and γ-independence. Every check returns a [`ResidualReport`].

use std::collections::BTreeMap;

use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{commutator_residual, DeformationParams, GridFunction, MomentumGrid};
use crate::eigen::{build_p_space_matrix, default_filter, p_space_energies, HamiltonianMatrix};
use crate::error::{Error, Result};
use crate::inner::{eta_inner, QuadratureSpec};
use crate::models::{
    displaced_metric, swanson_metric, DisplacedOscillatorParams, MetricFunction, MetricTag, Model, SwansonParams,
};
use crate::par::Execution;
use crate::pct::TransformedProblem;

/// Per-check tolerances.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("commutator", 1e-6),
    ("pseudo_hermiticity", 1e-6),
    ("gram", 1e-7),
    ("ode_residual", 1e-8),
    ("gamma_independence", 1e-6),
];

/// Lower bound on the plain Hermiticity defect of a non-Hermitian operator.
pub const NON_HERMITIAN_FLOOR: f64 = 1e-2;

/// Check names in battery order.
pub const CHECKS: [&str; 5] = ["commutator", "pseudo_hermiticity", "gram", "ode_residual", "gamma_independence"];

pub fn tolerance(name: &str) -> f64 {
    TOLERANCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .unwrap_or_else(|| panic!("no tolerance for check {name}"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub params: BTreeMap<String, f64>,
    pub grid: BTreeMap<String, f64>,
}

impl ResidualReport {
    pub fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            tolerance,
            // NaN fails
            pass: value <= tolerance,
            params: BTreeMap::new(),
            grid: BTreeMap::new(),
        }
    }

    pub fn with_params(mut self, params: BTreeMap<String, f64>) -> Self {
        self.params = params;
        self
    }

    pub fn with_grid(mut self, key: &str, value: f64) -> Self {
        self.grid.insert(key.to_string(), value);
        self
    }

    fn with_momentum_grid(self, grid: &MomentumGrid) -> Self {
        self.with_grid("p_min", grid.p_min()).with_grid("p_max", grid.p_max()).with_grid("points", grid.len() as f64)
    }
}

/// Rectangle weights `h (1 + βp²)^{γ/β − 1}` at the grid nodes.
fn measure_weights(params: &DeformationParams, grid: &MomentumGrid) -> Result<Vec<f64>> {
    let h = grid.spacing();
    let w: Vec<f64> = (0..grid.len()).map(|i| h * params.measure_weight(grid.point(i))).collect();
    if let Some(i) = w.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::DegenerateMeasure(format!("weight {} at p = {}", w[i], grid.point(i))));
    }
    Ok(w)
}

fn check_dims(h: &HamiltonianMatrix, grid: &MomentumGrid) -> Result<()> {
    if h.dim() != grid.len() {
        return Err(Error::InvalidGrid(format!("matrix is {0}x{0} but the grid has {1} points", h.dim(), grid.len())));
    }
    Ok(())
}

/// `W⁻¹ Hᴴ W` for the diagonal measure weight W.
pub fn adjoint_under_weight(
    h: &HamiltonianMatrix,
    params: &DeformationParams,
    grid: &MomentumGrid,
) -> Result<HamiltonianMatrix> {
    check_dims(h, grid)?;
    let w = measure_weights(params, grid)?;
    let n = h.dim();
    let m = Mat::from_fn(n, n, |i, j| h.get(j, i).conj() * (w[j] / w[i]));
    Ok(HamiltonianMatrix::from_complex(m))
}

/// `‖H† − H‖_F / ‖H‖_F` under the measure weight.
pub fn hermiticity_defect(h: &HamiltonianMatrix, params: &DeformationParams, grid: &MomentumGrid) -> Result<f64> {
    let adj = adjoint_under_weight(h, params, grid)?;
    let n = h.dim();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            s += (adj.get(i, j) - h.get(i, j)).norm_sqr();
        }
    }
    Ok(s.sqrt() / h.frobenius())
}

/// `‖η H η⁻¹ − H†‖_F / ‖H‖_F` with η diagonal on the grid.
pub fn pseudo_hermiticity_residual(
    h: &HamiltonianMatrix,
    eta: &MetricFunction,
    params: &DeformationParams,
    grid: &MomentumGrid,
) -> Result<ResidualReport> {
    check_dims(h, grid)?;
    let w = measure_weights(params, grid)?;
    let e: Vec<f64> = (0..grid.len()).map(|i| eta.value(grid.point(i))).collect();
    if let Some(i) = e.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::Domain(format!("metric is {} at p = {}", e[i], grid.point(i))));
    }
    let n = h.dim();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            let lhs = h.get(i, j) * (e[i] / e[j]);
            let rhs = h.get(j, i).conj() * (w[j] / w[i]);
            s += (lhs - rhs).norm_sqr();
        }
    }
    let value = s.sqrt() / h.frobenius();
    Ok(ResidualReport::new("pseudo_hermiticity", value, tolerance("pseudo_hermiticity"))
        .with_params(params_of(params))
        .with_momentum_grid(grid))
}

fn params_of(d: &DeformationParams) -> BTreeMap<String, f64> {
    BTreeMap::from([("hbar".into(), d.hbar()), ("beta".into(), d.beta()), ("gamma".into(), d.gamma())])
}

/// `G[m][n] = ⟨ψ_m|ψ_n⟩_η`, reported as `max |G − I|`.
pub fn gram_matrix<F>(
    states: &[F],
    eta: &MetricFunction,
    params: &DeformationParams,
    quad: &QuadratureSpec,
    exec: Execution,
) -> Result<(Vec<Vec<Complex64>>, ResidualReport)>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let k = states.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|m| (m..k).map(move |n| (m, n))).collect();
    let entries = exec.try_map(&pairs, |&(m, n)| eta_inner(&states[m], &states[n], eta, params, quad))?;
    let mut g = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for (&(m, n), v) in pairs.iter().zip(entries) {
        g[m][n] = v;
        g[n][m] = v.conj();
    }
    let mut worst: f64 = 0.0;
    for (m, row) in g.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            let target = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((v - target).norm());
        }
    }
    let report = ResidualReport::new("gram", worst, tolerance("gram"))
        .with_params(params_of(params))
        .with_grid("nodes", quad.node_count as f64)
        .with_grid("states", k as f64);
    Ok((g, report))
}

/// Number of q-uniform samples for [`ode_residual`].
pub const ODE_SAMPLES: usize = 1000;

/// `max |−fψ'' + gψ' + hψ − εψ| / max |ψ|` over q-uniform interior samples.
pub fn ode_residual(
    psi: &dyn Fn(f64) -> [Complex64; 3],
    problem: &TransformedProblem,
    epsilon: f64,
) -> ResidualReport {
    let coeffs = problem.coeffs();
    let q_map = problem.q_map();
    let (a, b) = (problem.q_min(), problem.q_max());
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for i in 0..ODE_SAMPLES {
        let q = a + (b - a) * (i as f64 + 0.5) / ODE_SAMPLES as f64;
        let p = q_map.p(q);
        let d = psi(p);
        num = num.max(coeffs.apply(p, d, epsilon).norm());
        den = den.max(d[0].norm());
    }
    let value = if den > 0.0 { num / den } else { f64::INFINITY };
    ResidualReport::new("ode_residual", value, tolerance("ode_residual")).with_grid("samples", ODE_SAMPLES as f64)
}

/// Largest relative spread of each p-space level across the γ values.
pub fn gamma_independence(
    model: &Model,
    gammas: &[f64],
    n_levels: usize,
    grid: &MomentumGrid,
    exec: Execution,
) -> Result<ResidualReport> {
    let models = gammas.iter().map(|&g| model.with_gamma(g)).collect::<Result<Vec<_>>>()?;
    let spectra = exec.try_map(&models, |m| p_space_energies(m, grid, n_levels, default_filter(m)))?;
    let mut worst: f64 = 0.0;
    if let Some(first) = spectra.first() {
        for s in &spectra {
            if s.eigenvalues.len() != first.eigenvalues.len() {
                return Err(Error::Numeric("level counts differ across gamma".into()));
            }
        }
        for n in 0..first.eigenvalues.len() {
            let vals: Vec<Complex64> = spectra.iter().map(|s| s.eigenvalues[n]).collect();
            let scale = vals[0].norm().max(f64::MIN_POSITIVE);
            for a in &vals {
                for b in &vals {
                    worst = worst.max((a - b).norm() / scale);
                }
            }
        }
    }
    let mut params = model.params_map();
    params.remove("gamma");
    let mut report = ResidualReport::new("gamma_independence", worst, tolerance("gamma_independence"))
        .with_params(params)
        .with_momentum_grid(grid)
        .with_grid("levels", n_levels as f64);
    for (i, g) in gammas.iter().enumerate() {
        report = report.with_grid(&format!("gamma_{i}"), *g);
    }
    Ok(report)
}

/// The metric of kind `tag` built from the parameters of `model`. For a tag
/// belonging to the other model the shared fields are carried over, which
/// gives a deliberately wrong metric.
pub fn metric_for(model: &Model, tag: MetricTag) -> Result<MetricFunction> {
    match (tag, model) {
        (MetricTag::Identity, _) => Ok(MetricFunction::identity()),
        (MetricTag::Generic, m) => m.generic_metric(),
        (MetricTag::Displaced, Model::Displaced(p)) => displaced_metric(p),
        (MetricTag::Swanson, Model::Swanson(p)) => swanson_metric(p),
        (MetricTag::Displaced, Model::Swanson(p)) => {
            displaced_metric(&DisplacedOscillatorParams::new(p.deformation, p.m, p.omega, p.lambda - p.delta)?)
        }
        (MetricTag::Swanson, Model::Displaced(p)) => {
            swanson_metric(&SwansonParams::new(p.deformation, p.mu, p.omega, p.lambda, 0.0)?)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatteryConfig {
    /// points of the grid for the commutator check
    pub commutator_points: usize,
    /// points of the matrix used for pseudo-Hermiticity
    pub matrix_points: usize,
    /// points of the matrix diagonalised per γ
    pub spectrum_points: usize,
    pub states: usize,
    pub quad: QuadratureSpec,
    pub metric_override: Option<MetricTag>,
    pub exec: Execution,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            commutator_points: 4001,
            matrix_points: 2000,
            spectrum_points: 1000,
            states: 6,
            quad: QuadratureSpec::default(),
            metric_override: None,
            exec: Execution::default(),
        }
    }
}

/// Runs every check in [`CHECKS`] order.
pub fn run_battery(model: &Model, cfg: &BatteryConfig) -> Result<Vec<ResidualReport>> {
    let d = model.deformation();
    let params = model.params_map();
    let eta = match cfg.metric_override {
        Some(tag) => metric_for(model, tag)?,
        None => model.metric()?,
    };
    let states = model.eigenstates(cfg.states.max(1), cfg.exec)?;
    let half = model.default_p_box();
    let mut out = Vec::with_capacity(CHECKS.len());

    let cgrid = MomentumGrid::symmetric(half, cfg.commutator_points)?;
    let ground = GridFunction::from_fn(cgrid, |p| states[0].value(p))?;
    let c = commutator_residual(&d, &ground)?;
    out.push(
        ResidualReport::new("commutator", c, tolerance("commutator"))
            .with_params(params.clone())
            .with_momentum_grid(&cgrid),
    );

    let grid = MomentumGrid::symmetric(half, cfg.matrix_points)?;
    let coeffs = model.coefficients()?;
    let m = build_p_space_matrix(&coeffs, &grid)?;
    let h = HamiltonianMatrix::Real(m).to_energy_units(&coeffs.energy_map());
    out.push(pseudo_hermiticity_residual(&h, &eta, &d, &grid)?.with_params(params.clone()));

    let fns: Vec<_> = states.iter().map(|s| move |p: f64| s.value(p)).collect();
    let (_, g) = gram_matrix(&fns, &eta, &d, &cfg.quad, cfg.exec)?;
    out.push(g.with_params(params.clone()));

    let problem = model.transformed()?;
    let worst = states
        .iter()
        .map(|s| ode_residual(&|p| s.derivatives(p), &problem, s.epsilon()))
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one state");
    out.push(worst.with_params(params.clone()).with_grid("states", states.len() as f64));

    let b = d.beta();
    let spec_grid = MomentumGrid::symmetric(half, cfg.spectrum_points)?;
    out.push(gamma_independence(model, &[0.0, 0.5 * b, b], cfg.states, &spec_grid, cfg.exec)?);
    Ok(out)
}
