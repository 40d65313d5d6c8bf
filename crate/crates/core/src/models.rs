//! The displaced oscillator `p²/2μ + μω²x²/2 + iλx` and the Swanson model
//! `ω a†a + λ a² + δ a†² + ω/2` in the deformed representation.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::DeformationParams;
use crate::error::{Error, Result};
use crate::inner::{eta_inner, QuadratureSpec};
use crate::par::Execution;
use crate::pct::{
    jacobi_with_derivatives, CoefficientFunctions, CoefficientSet, EnergyMap, QMapHint, RealFn,
    RhoMap, SecantSquaredWell, TransformedProblem,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DisplacedOscillatorParams {
    pub deformation: DeformationParams,
    pub mu: f64,
    pub omega: f64,
    pub lambda: f64,
}

impl DisplacedOscillatorParams {
    pub fn new(deformation: DeformationParams, mu: f64, omega: f64, lambda: f64) -> Result<Self> {
        positive("mu", mu)?;
        positive("omega", omega)?;
        finite("lambda", lambda)?;
        Ok(Self { deformation, mu, omega, lambda })
    }

    /// `λ/(μħω²)`, the constant in g.
    fn shift(&self) -> f64 {
        self.lambda / (self.mu * self.deformation.hbar() * self.omega * self.omega)
    }

    /// `1/(ħμω)²`, the p² coefficient of h at γ = 0.
    fn stiffness(&self) -> f64 {
        let t = self.deformation.hbar() * self.mu * self.omega;
        1.0 / (t * t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SwansonParams {
    pub deformation: DeformationParams,
    pub m: f64,
    pub omega: f64,
    pub lambda: f64,
    pub delta: f64,
}

impl SwansonParams {
    pub fn new(
        deformation: DeformationParams,
        m: f64,
        omega: f64,
        lambda: f64,
        delta: f64,
    ) -> Result<Self> {
        positive("m", m)?;
        positive("omega", omega)?;
        finite("lambda", lambda)?;
        finite("delta", delta)?;
        let d = omega - lambda - delta;
        if d == 0.0 {
            return Err(Error::DegenerateModel("omega - lambda - delta = 0".into()));
        }
        if d < 0.0 {
            return Err(Error::UnsupportedRegime(format!(
                "omega - lambda - delta = {d} < 0 flips the energy map; not handled"
            )));
        }
        Ok(Self { deformation, m, omega, lambda, delta })
    }

    /// `ω − λ − δ`.
    pub fn detuning(&self) -> f64 {
        self.omega - self.lambda - self.delta
    }

    /// `ħmω(ω − λ − δ)`.
    fn scale(&self) -> f64 {
        self.deformation.hbar() * self.m * self.omega * self.detuning()
    }

    /// `(δ − λ)/(ħmω(ω − λ − δ))`.
    fn asymmetry(&self) -> f64 {
        (self.delta - self.lambda) / self.scale()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
    }
    Ok(())
}

fn rf(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFn {
    Arc::new(f)
}

fn require_deformed(d: &DeformationParams) -> Result<()> {
    if d.beta() <= 0.0 {
        return Err(Error::UnsupportedRegime("closed-form states need beta > 0".into()));
    }
    Ok(())
}

/// Constants of the closed forms.
///
/// `s` is the Jacobi parameter `A/√β − ½`; `kappa` is the exponent of
/// `(1 + βp²)` in the printed eigenfunction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivedSpectralParams {
    pub a: f64,
    pub nu: f64,
    pub s: f64,
    pub kappa: f64,
    /// additive constant of V(q)
    pub offset: f64,
}

fn deformed_square_f(beta: f64) -> (RealFn, RealFn, RealFn) {
    (
        rf(move |p| (1.0 + beta * p * p).powi(2)),
        rf(move |p| 4.0 * beta * p * (1.0 + beta * p * p)),
        rf(move |p| 4.0 * beta * (1.0 + 3.0 * beta * p * p)),
    )
}

pub fn displaced_coefficients(params: &DisplacedOscillatorParams) -> Result<CoefficientSet> {
    let d = params.deformation;
    let (b, g, hbar) = (d.beta(), d.gamma(), d.hbar());
    let c = params.shift();
    let k2 = params.stiffness();
    let (f, df, d2f) = deformed_square_f(b);
    let lin = 2.0 * params.lambda * g / (hbar * params.mu * params.omega * params.omega);
    let funcs = CoefficientFunctions {
        f,
        df,
        d2f,
        g: rf(move |p| -2.0 * (1.0 + b * p * p) * ((g + b) * p + c)),
        dg: rf(move |p| -2.0 * (2.0 * b * p * ((g + b) * p + c) + (1.0 + b * p * p) * (g + b))),
        h: rf(move |p| (k2 - g * (b + g)) * p * p - lin * p),
    };
    let alpha = 2.0 / (hbar * hbar * params.mu * params.omega * params.omega);
    let mut set = CoefficientSet::new(funcs, EnergyMap::new(alpha, g)?)?
        .with_q_hint(QMapHint::DeformedSquare { beta: b });
    if b > 0.0 {
        let sb = b.sqrt();
        let e = -g / (2.0 * b);
        set = set.with_log_rho_hint(rf(move |p| {
            e * (1.0 + b * p * p).ln() - c * (sb * p).atan() / sb
        }));
    }
    Ok(set)
}

pub fn displaced_energy(n: usize, params: &DisplacedOscillatorParams) -> f64 {
    let d = params.deformation;
    let (hbar, b) = (d.hbar(), d.beta());
    let (mu, w, l) = (params.mu, params.omega, params.lambda);
    let nf = n as f64;
    let x = b * hbar * w * mu;
    hbar * w * (0.5 * x * (nf * nf + nf + 0.5) + (nf + 0.5) * (1.0 + 0.25 * x * x).sqrt())
        + l * l / (2.0 * mu * w * w)
}

pub fn displaced_spectral(params: &DisplacedOscillatorParams) -> Result<DerivedSpectralParams> {
    let d = params.deformation;
    require_deformed(&d)?;
    let b = d.beta();
    let nu = params.stiffness() / b;
    let well = SecantSquaredWell::new(nu, b)?;
    let c = params.shift();
    Ok(DerivedSpectralParams {
        a: well.a(),
        nu,
        s: well.k() - 0.5,
        kappa: -(d.gamma() / (2.0 * b) + well.k()),
        offset: c * c - nu + d.gamma(),
    })
}

pub fn displaced_metric(params: &DisplacedOscillatorParams) -> Result<MetricFunction> {
    require_deformed(&params.deformation)?;
    let sb = params.deformation.beta().sqrt();
    let c = params.shift();
    Ok(MetricFunction::new(MetricTag::Displaced, rf(move |p| (2.0 * c * (sb * p).atan() / sb).exp())))
}

pub fn swanson_coefficients(params: &SwansonParams) -> Result<CoefficientSet> {
    let d = params.deformation;
    let (b, g, hbar) = (d.beta(), d.gamma(), d.hbar());
    let kk = params.asymmetry();
    let (m, w) = (params.m, params.omega);
    let dd = params.detuning();
    let scale = params.scale();
    let (f, df, d2f) = deformed_square_f(b);
    let t = kk + b + g;
    let quad = (w + params.lambda + params.delta) / (dd * m * m * hbar * hbar * w * w)
        - 2.0 * g * kk
        - g * g;
    let shift = (params.delta - params.lambda + w) / scale + g;
    let funcs = CoefficientFunctions {
        f,
        df,
        d2f,
        g: rf(move |p| -2.0 * t * (1.0 + b * p * p) * p),
        dg: rf(move |p| -2.0 * t * (1.0 + 3.0 * b * p * p)),
        h: rf(move |p| quad * p * p - shift * (1.0 + b * p * p)),
    };
    let alpha = 2.0 / (w * hbar * m * dd);
    let offset = -1.0 / (hbar * m * dd);
    let mut set = CoefficientSet::new(funcs, EnergyMap::new(alpha, offset)?)?
        .with_q_hint(QMapHint::DeformedSquare { beta: b });
    if b > 0.0 {
        let e = -(g + kk) / (2.0 * b);
        set = set.with_log_rho_hint(rf(move |p| e * (1.0 + b * p * p).ln()));
    }
    Ok(set)
}

/// `[ω − ħmωβ(ω−λ−δ)/2]² − 4λδ`; the spectrum is real when positive.
pub fn swanson_discriminant(params: &SwansonParams) -> f64 {
    let t = params.omega - 0.5 * params.scale() * params.deformation.beta();
    t * t - 4.0 * params.lambda * params.delta
}

pub fn swanson_energy(n: usize, params: &SwansonParams) -> Complex64 {
    let nf = n as f64;
    let x = 0.5 * params.scale() * params.deformation.beta();
    let root = Complex64::new(swanson_discriminant(params), 0.0).sqrt();
    x * (nf * nf + nf + 0.5) + (nf + 0.5) * root
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CriticalBeta {
    Value(f64),
    /// λδ < 0: the discriminant never vanishes.
    NoTransition,
}

pub fn swanson_beta_c(params: &SwansonParams) -> Result<CriticalBeta> {
    let ld = params.lambda * params.delta;
    if ld < 0.0 {
        return Ok(CriticalBeta::NoTransition);
    }
    let w = params.omega;
    let gap = w - 2.0 * ld.sqrt();
    if !(gap > 0.0) {
        return Err(Error::ConstraintViolated(format!(
            "omega - 2 sqrt(lambda delta) = {gap} is not positive"
        )));
    }
    let hbar = params.deformation.hbar();
    Ok(CriticalBeta::Value(2.0 * gap / (params.m * hbar * w * params.detuning())))
}

pub fn swanson_spectral(params: &SwansonParams) -> Result<DerivedSpectralParams> {
    let d = params.deformation;
    require_deformed(&d)?;
    let b = d.beta();
    let scale = params.scale();
    let (w, l, dl) = (params.omega, params.lambda, params.delta);
    let nu = (w * w - 4.0 * l * dl - scale * w * b) / (scale * scale * b);
    let offset = (4.0 * l * dl - w * w) / (scale * scale * b);
    let root = (1.0 + 4.0 * nu / b).sqrt();
    let a = 0.5 * (b.sqrt() + (b + 4.0 * nu).sqrt());
    Ok(DerivedSpectralParams {
        a,
        nu,
        s: 0.5 * root,
        // as printed; see `printed_state`
        kappa: (l - dl) / (2.0 * d.hbar() * params.m * w) * params.detuning()
            - d.gamma() / (2.0 * b)
            - 0.5 * (1.0 + root),
        offset,
    })
}

fn check_swanson_real(params: &SwansonParams) -> Result<()> {
    let beta = params.deformation.beta();
    let disc = swanson_discriminant(params);
    match swanson_beta_c(params)? {
        CriticalBeta::Value(bc) if beta >= bc || disc <= 0.0 => {
            Err(Error::ComplexSpectrum { beta, beta_c: bc })
        }
        CriticalBeta::NoTransition if disc <= 0.0 => {
            Err(Error::ComplexSpectrum { beta, beta_c: f64::INFINITY })
        }
        _ => Ok(()),
    }
}

pub fn swanson_metric(params: &SwansonParams) -> Result<MetricFunction> {
    require_deformed(&params.deformation)?;
    let b = params.deformation.beta();
    let e = params.asymmetry() / b;
    Ok(MetricFunction::new(MetricTag::Swanson, rf(move |p| (1.0 + b * p * p).powf(e))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricTag {
    Displaced,
    Swanson,
    Generic,
    Identity,
}

impl fmt::Display for MetricTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MetricTag::Displaced => "displaced",
            MetricTag::Swanson => "swanson",
            MetricTag::Generic => "generic",
            MetricTag::Identity => "identity",
        };
        f.write_str(s)
    }
}

/// A positive multiplicative metric η(p).
#[derive(Clone)]
pub struct MetricFunction {
    tag: MetricTag,
    eval: RealFn,
}

impl fmt::Debug for MetricFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricFunction").field("tag", &self.tag).finish()
    }
}

impl MetricFunction {
    pub fn new(tag: MetricTag, eval: RealFn) -> Self {
        Self { tag, eval }
    }

    pub fn identity() -> Self {
        Self::new(MetricTag::Identity, rf(|_| 1.0))
    }

    /// `(1 + βp²)^{−γ/β} exp[−∫(χ + χ*)]`, with ρ real.
    pub fn generic(params: &DeformationParams, rho: &RhoMap) -> Self {
        let b = params.beta();
        let e = -params.gamma_over_beta();
        let rho = rho.clone();
        Self::new(
            MetricTag::Generic,
            rf(move |p| (1.0 + b * p * p).powf(e) * (-2.0 * rho.log_rho(p)).exp()),
        )
    }

    pub fn tag(&self) -> MetricTag {
        self.tag
    }

    pub fn value(&self, p: f64) -> f64 {
        (self.eval)(p)
    }
}

/// A normalised eigenfunction `ψ_n = N ρ(p) φ_n(q(p))`.
#[derive(Clone, Debug)]
pub struct EigenState {
    n: usize,
    problem: TransformedProblem,
    well: SecantSquaredWell,
    norm: f64,
    epsilon: f64,
    energy: f64,
}

impl EigenState {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn energy(&self) -> f64 {
        self.energy
    }
    pub fn problem(&self) -> &TransformedProblem {
        &self.problem
    }
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    /// Normalised `φ_n, φ_n', φ_n''` at q.
    pub fn phi(&self, q: f64) -> Result<[f64; 3]> {
        let [a, b, c] = self.well.phi(self.n, q)?;
        Ok([self.norm * a, self.norm * b, self.norm * c])
    }

    /// `ψ, ψ', ψ''` at p.
    pub fn derivatives(&self, p: f64) -> [Complex64; 3] {
        let q = self.problem.q_map().q(p);
        let phi = self.phi(q).unwrap_or([0.0; 3]);
        self.problem.lift(p, phi).map(|v| Complex64::new(v, 0.0))
    }

    pub fn value(&self, p: f64) -> Complex64 {
        let q = self.problem.q_map().q(p);
        let v = self.well.phi_batch(self.n, q).map(|b| b[self.n]).unwrap_or(0.0);
        Complex64::new(self.norm * self.problem.rho().rho(p) * v, 0.0)
    }
}

/// `e^{aθ} (1 + βp²)^e P_n^{(j,j)}(z)` with `θ = arctan(√β p)/√β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosedFormState {
    pub n: usize,
    pub beta: f64,
    pub phase_rate: f64,
    pub exponent: f64,
    pub jacobi: f64,
    pub argument: JacobiArgument,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum JacobiArgument {
    /// `√βp/(1 + βp²)` as printed.
    Printed,
    /// `√βp/√(1 + βp²) = sin(√β q)`.
    Sine,
}

impl ClosedFormState {
    pub fn derivatives(&self, p: f64) -> Result<[Complex64; 3]> {
        let b = self.beta;
        let sb = b.sqrt();
        let u = 1.0 + b * p * p;
        let (a, e) = (self.phase_rate, self.exponent);
        let l = a * (sb * p).atan() / sb + e * u.ln();
        let dl = (a + 2.0 * e * b * p) / u;
        let d2l = (-2.0 * a * b * p + 2.0 * e * b * (1.0 - b * p * p)) / (u * u);
        let gv = l.exp();
        let (z, dz, d2z) = match self.argument {
            JacobiArgument::Printed => (
                sb * p / u,
                sb * (1.0 - b * p * p) / (u * u),
                -2.0 * b * sb * p * (3.0 - b * p * p) / (u * u * u),
            ),
            JacobiArgument::Sine => {
                let r = u.sqrt();
                (sb * p / r, sb / (u * r), -3.0 * b * sb * p / (u * u * r))
            }
        };
        let [pv, dp, d2p] = jacobi_with_derivatives(self.n, self.jacobi, self.jacobi, z)?;
        let v = gv * pv;
        let d1 = gv * (dl * pv + dp * dz);
        let d2 = gv * ((d2l + dl * dl) * pv + 2.0 * dl * dp * dz + d2p * dz * dz + dp * d2z);
        Ok([v, d1, d2].map(|x| Complex64::new(x, 0.0)))
    }

    pub fn value(&self, p: f64) -> Result<Complex64> {
        Ok(self.derivatives(p)?[0])
    }
}

/// Either model behind one interface.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    Displaced(DisplacedOscillatorParams),
    Swanson(SwansonParams),
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Displaced(_) => "displaced",
            Model::Swanson(_) => "swanson",
        }
    }

    pub fn deformation(&self) -> DeformationParams {
        match self {
            Model::Displaced(p) => p.deformation,
            Model::Swanson(p) => p.deformation,
        }
    }

    pub fn with_deformation(&self, d: DeformationParams) -> Result<Model> {
        Ok(match *self {
            Model::Displaced(p) => {
                Model::Displaced(DisplacedOscillatorParams::new(d, p.mu, p.omega, p.lambda)?)
            }
            Model::Swanson(p) => {
                Model::Swanson(SwansonParams::new(d, p.m, p.omega, p.lambda, p.delta)?)
            }
        })
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Model> {
        self.with_deformation(self.deformation().with_gamma(gamma)?)
    }

    pub fn with_beta(&self, beta: f64) -> Result<Model> {
        self.with_deformation(self.deformation().with_beta(beta)?)
    }

    pub fn coefficients(&self) -> Result<CoefficientSet> {
        match self {
            Model::Displaced(p) => displaced_coefficients(p),
            Model::Swanson(p) => swanson_coefficients(p),
        }
    }

    pub fn energy(&self, n: usize) -> Complex64 {
        match self {
            Model::Displaced(p) => Complex64::new(displaced_energy(n, p), 0.0),
            Model::Swanson(p) => swanson_energy(n, p),
        }
    }

    pub fn energies(&self, count: usize) -> Vec<Complex64> {
        (0..count).map(|n| self.energy(n)).collect()
    }

    /// The same model at β = γ = 0.
    pub fn undeformed(&self) -> Result<Model> {
        let hbar = self.deformation().hbar();
        self.with_deformation(DeformationParams::undeformed(hbar)?)
    }

    pub fn spectral(&self) -> Result<DerivedSpectralParams> {
        match self {
            Model::Displaced(p) => displaced_spectral(p),
            Model::Swanson(p) => {
                check_swanson_real(p)?;
                swanson_spectral(p)
            }
        }
    }

    pub fn well(&self) -> Result<SecantSquaredWell> {
        let s = self.spectral()?;
        SecantSquaredWell::new(s.nu, self.deformation().beta())
    }

    pub fn transformed(&self) -> Result<TransformedProblem> {
        TransformedProblem::build(&self.coefficients()?)
    }

    pub fn metric(&self) -> Result<MetricFunction> {
        match self {
            Model::Displaced(p) => displaced_metric(p),
            Model::Swanson(p) => swanson_metric(p),
        }
    }

    pub fn generic_metric(&self) -> Result<MetricFunction> {
        require_deformed(&self.deformation())?;
        let rho = crate::pct::build_rho(&self.coefficients()?)?;
        Ok(MetricFunction::generic(&self.deformation(), &rho))
    }

    /// Largest relative gap between the closed-form and generic metrics.
    pub fn metric_agreement(&self) -> Result<f64> {
        let a = self.metric()?;
        let b = self.generic_metric()?;
        let worst = crate::pct::sample_points(100)
            .map(|p| (a.value(p) - b.value(p)).abs() / a.value(p))
            .fold(0.0, f64::max);
        Ok(worst)
    }

    pub fn epsilon_level(&self, n: usize) -> Result<f64> {
        Ok(self.well()?.level(n) + self.spectral()?.offset)
    }

    /// `ψ_n` normalised under the η product with the model's own metric.
    pub fn eigenstate(&self, n: usize) -> Result<EigenState> {
        self.eigenstate_with(n, &QuadratureSpec::default())
    }

    pub fn eigenstate_with(&self, n: usize, quad: &QuadratureSpec) -> Result<EigenState> {
        let spectral = self.spectral()?;
        let beta = self.deformation().beta();
        let well = SecantSquaredWell::new(spectral.nu, beta)?;
        let problem = self.transformed()?;
        let epsilon = well.level(n) + spectral.offset;
        let energy = problem.coeffs().energy_map().energy(epsilon);
        // P_n(−1) = (−1)^n C(n+j, n): flip odd states so ψ > 0 as p → −∞
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mut state = EigenState { n, problem, well, norm: sign, epsilon, energy };
        let eta = self.metric()?;
        let d = self.deformation();
        let f = |p: f64| state.value(p);
        let nn = eta_inner(&f, &f, &eta, &d, quad)?.re;
        if !(nn.is_finite() && nn > 0.0) {
            return Err(Error::Divergence(format!("eta-norm of state {n} is {nn}")));
        }
        state.norm = sign / nn.sqrt();
        Ok(state)
    }

    pub fn eigenstates(&self, count: usize, exec: Execution) -> Result<Vec<EigenState>> {
        let ns: Vec<usize> = (0..count).collect();
        exec.try_map(&ns, |&n| self.eigenstate(n))
    }

    /// The eigenfunction exactly as printed, unnormalised.
    pub fn printed_state(&self, n: usize) -> Result<ClosedFormState> {
        let s = self.spectral()?;
        let beta = self.deformation().beta();
        let phase_rate = match self {
            Model::Displaced(p) => -p.shift(),
            Model::Swanson(_) => 0.0,
        };
        Ok(ClosedFormState {
            n,
            beta,
            phase_rate,
            exponent: s.kappa,
            jacobi: s.s,
            argument: JacobiArgument::Printed,
        })
    }

    /// The closed form that follows from `ρ · cos^k · P_n(sin)`.
    pub fn pipeline_closed_form(&self, n: usize) -> Result<ClosedFormState> {
        let s = self.spectral()?;
        let d = self.deformation();
        let beta = d.beta();
        let k = s.s + 0.5;
        let (phase_rate, exponent) = match self {
            Model::Displaced(p) => (-p.shift(), -d.gamma() / (2.0 * beta) - 0.5 * k),
            Model::Swanson(p) => (0.0, -(d.gamma() + p.asymmetry()) / (2.0 * beta) - 0.5 * k),
        };
        Ok(ClosedFormState { n, beta, phase_rate, exponent, jacobi: s.s, argument: JacobiArgument::Sine })
    }

    /// Half-width of the default momentum box for matrix solvers.
    pub fn default_p_box(&self) -> f64 {
        match self {
            Model::Displaced(_) => 20.0,
            Model::Swanson(_) => 40.0,
        }
    }

    pub fn params_map(&self) -> BTreeMap<String, f64> {
        let d = self.deformation();
        let mut m = BTreeMap::new();
        m.insert("hbar".into(), d.hbar());
        m.insert("beta".into(), d.beta());
        m.insert("gamma".into(), d.gamma());
        match self {
            Model::Displaced(p) => {
                m.insert("mu".into(), p.mu);
                m.insert("omega".into(), p.omega);
                m.insert("lambda".into(), p.lambda);
            }
            Model::Swanson(p) => {
                m.insert("m".into(), p.m);
                m.insert("omega".into(), p.omega);
                m.insert("lambda".into(), p.lambda);
                m.insert("delta".into(), p.delta);
            }
        }
        m
    }

    /// q-domain half-width `π/(2√β)`.
    pub fn q_half_width(&self) -> f64 {
        FRAC_PI_2 / self.deformation().beta().sqrt()
    }
}
