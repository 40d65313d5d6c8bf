//! Point canonical transformation of `−f ψ'' + g ψ' + h ψ = ε ψ` into
//! `−φ'' + V(q) φ = ε φ`, with `q = ∫ dp/√f` and `ψ = ρ φ`,
//! `ρ = exp ∫ χ`, `χ = (f' + 2g)/(4f)`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::special::{jacobi_batch, jacobi_eval, JacobiOrder};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Tolerance of every adaptive integral in this module.
pub const QUAD_TOL: f64 = 1e-12;

/// `ε = α E + δ₀`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyMap {
    pub alpha: f64,
    pub offset: f64,
}

impl EnergyMap {
    pub fn new(alpha: f64, offset: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha != 0.0 && offset.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "energy map needs finite nonzero scale, got alpha={alpha}, offset={offset}"
            )));
        }
        Ok(Self { alpha, offset })
    }

    pub fn epsilon(&self, energy: f64) -> f64 {
        self.alpha * energy + self.offset
    }

    pub fn energy(&self, epsilon: f64) -> f64 {
        (epsilon - self.offset) / self.alpha
    }

    pub fn energy_complex(&self, epsilon: Complex64) -> Complex64 {
        (epsilon - self.offset) / self.alpha
    }
}

/// Known closed form of the q map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QMapHint {
    /// `f = (1 + βp²)²`, so `q = arctan(√β p)/√β`.
    DeformedSquare { beta: f64 },
}

/// The functions of the momentum-space operator, with analytic derivatives.
#[derive(Clone)]
pub struct CoefficientFunctions {
    pub f: RealFn,
    pub df: RealFn,
    pub d2f: RealFn,
    pub g: RealFn,
    pub dg: RealFn,
    pub h: RealFn,
}

#[derive(Clone)]
pub struct CoefficientSet {
    funcs: CoefficientFunctions,
    energy_map: EnergyMap,
    q_hint: Option<QMapHint>,
    log_rho_hint: Option<RealFn>,
}

impl fmt::Debug for CoefficientSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientSet")
            .field("energy_map", &self.energy_map)
            .field("q_hint", &self.q_hint)
            .field("log_rho_hint", &self.log_rho_hint.is_some())
            .finish()
    }
}

/// Deterministic, well-spread sample points on [−10, 10].
pub(crate) fn sample_points(count: usize) -> impl Iterator<Item = f64> {
    const GOLDEN: f64 = 0.618_033_988_749_894_8;
    (0..count).map(|i| {
        let t = (0.5 + i as f64 * GOLDEN).fract();
        20.0 * t - 10.0
    })
}

fn check_derivative(name: &str, base: &RealFn, deriv: &RealFn, p: f64) -> Result<()> {
    let step = 1e-4 * (1.0 + p.abs());
    let fd = (base(p + step) - base(p - step)) / (2.0 * step);
    let d = deriv(p);
    let scale = d.abs() + base(p).abs() / (1.0 + p.abs());
    if !((fd - d).abs() <= 1e-6 * scale.max(1e-300)) {
        return Err(Error::InvalidParams(format!(
            "supplied {name} disagrees with finite differences at p={p}: {d} vs {fd}"
        )));
    }
    Ok(())
}

impl CoefficientSet {
    /// Validates ellipticity and the supplied derivatives at 100 sample points.
    pub fn new(funcs: CoefficientFunctions, energy_map: EnergyMap) -> Result<Self> {
        let set = Self { funcs, energy_map, q_hint: None, log_rho_hint: None };
        for p in sample_points(100) {
            let fv = set.f(p);
            if !(fv > 0.0) {
                return Err(Error::Ellipticity { p, value: fv });
            }
            check_derivative("f'", &set.funcs.f, &set.funcs.df, p)?;
            check_derivative("f''", &set.funcs.df, &set.funcs.d2f, p)?;
            check_derivative("g'", &set.funcs.g, &set.funcs.dg, p)?;
        }
        Ok(set)
    }

    pub fn with_q_hint(mut self, hint: QMapHint) -> Self {
        self.q_hint = Some(hint);
        self
    }

    pub fn with_log_rho_hint(mut self, log_rho: RealFn) -> Self {
        self.log_rho_hint = Some(log_rho);
        self
    }

    pub fn q_hint(&self) -> Option<QMapHint> {
        self.q_hint
    }

    pub fn energy_map(&self) -> EnergyMap {
        self.energy_map
    }

    pub fn functions(&self) -> &CoefficientFunctions {
        &self.funcs
    }

    pub fn f(&self, p: f64) -> f64 {
        (self.funcs.f)(p)
    }
    pub fn df(&self, p: f64) -> f64 {
        (self.funcs.df)(p)
    }
    pub fn d2f(&self, p: f64) -> f64 {
        (self.funcs.d2f)(p)
    }
    pub fn g(&self, p: f64) -> f64 {
        (self.funcs.g)(p)
    }
    pub fn dg(&self, p: f64) -> f64 {
        (self.funcs.dg)(p)
    }
    pub fn h(&self, p: f64) -> f64 {
        (self.funcs.h)(p)
    }

    pub fn chi(&self, p: f64) -> f64 {
        (self.df(p) + 2.0 * self.g(p)) / (4.0 * self.f(p))
    }

    pub fn dchi(&self, p: f64) -> f64 {
        let f = self.f(p);
        let df = self.df(p);
        (self.d2f(p) + 2.0 * self.dg(p)) / (4.0 * f) - (df + 2.0 * self.g(p)) * df / (4.0 * f * f)
    }

    /// `V` expressed through p.
    pub fn potential_at_p(&self, p: f64) -> f64 {
        let f = self.f(p);
        let df = self.df(p);
        let g = self.g(p);
        (4.0 * g * g + 3.0 * df * df + 8.0 * g * df) / (16.0 * f) - self.d2f(p) / 4.0
            - self.dg(p) / 2.0
            + self.h(p)
    }

    /// `−f ψ'' + g ψ' + h ψ − ε ψ` at one point.
    pub fn apply(&self, p: f64, psi: [Complex64; 3], epsilon: f64) -> Complex64 {
        let [v, d1, d2] = psi;
        -self.f(p) * d2 + self.g(p) * d1 + (self.h(p) - epsilon) * v
    }
}

/// Monotone map between p and q.
#[derive(Clone)]
pub struct QMap {
    q_of_p: RealFn,
    p_of_q: RealFn,
    q_min: f64,
    q_max: f64,
    analytic: bool,
}

impl fmt::Debug for QMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QMap")
            .field("q_min", &self.q_min)
            .field("q_max", &self.q_max)
            .field("analytic", &self.analytic)
            .finish()
    }
}

impl QMap {
    pub fn q(&self, p: f64) -> f64 {
        (self.q_of_p)(p)
    }
    pub fn p(&self, q: f64) -> f64 {
        (self.p_of_q)(q)
    }
    pub fn q_min(&self) -> f64 {
        self.q_min
    }
    pub fn q_max(&self) -> f64 {
        self.q_max
    }
    pub fn is_analytic(&self) -> bool {
        self.analytic
    }
    pub fn contains(&self, q: f64) -> bool {
        q > self.q_min && q < self.q_max
    }
}

fn analytic_q_map(beta: f64) -> Result<QMap> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::InvalidParams(format!("q-map hint needs beta >= 0, got {beta}")));
    }
    if beta == 0.0 {
        return Ok(QMap {
            q_of_p: Arc::new(|p| p),
            p_of_q: Arc::new(|q| q),
            q_min: f64::NEG_INFINITY,
            q_max: f64::INFINITY,
            analytic: true,
        });
    }
    let sb = beta.sqrt();
    let edge = FRAC_PI_2 / sb;
    Ok(QMap {
        q_of_p: Arc::new(move |p| (sb * p).atan() / sb),
        p_of_q: Arc::new(move |q| (sb * q).tan() / sb),
        q_min: -edge,
        q_max: edge,
        analytic: true,
    })
}

fn numeric_q_map(coeffs: &CoefficientSet) -> Result<QMap> {
    for p in sample_points(100) {
        let v = coeffs.f(p);
        if !(v > 0.0) {
            return Err(Error::Ellipticity { p, value: v });
        }
    }
    let f = coeffs.funcs.f.clone();
    let integrand = move |t: f64| 1.0 / f(t).sqrt();
    let upper = quadrature::adaptive_to_infinity(&integrand, QUAD_TOL)
        .unwrap_or(f64::INFINITY);
    let lower = {
        let i2 = integrand.clone();
        quadrature::adaptive_to_infinity(&move |t| i2(-t), QUAD_TOL).unwrap_or(f64::INFINITY)
    };
    let ic = integrand.clone();
    let q_of_p: RealFn = Arc::new(move |p: f64| {
        quadrature::adaptive(&ic, 0.0, p, QUAD_TOL).unwrap_or(f64::NAN)
    });
    let (qp, ig) = (q_of_p.clone(), integrand);
    let p_of_q: RealFn = Arc::new(move |q: f64| invert_monotone(&*qp, &ig, q));
    Ok(QMap { q_of_p, p_of_q, q_min: -lower, q_max: upper, analytic: false })
}

// Bracket then Newton with bisection fallback; `dq` is dq/dp.
fn invert_monotone(q_of_p: &dyn Fn(f64) -> f64, dq: &dyn Fn(f64) -> f64, q: f64) -> f64 {
    if q == 0.0 {
        return 0.0;
    }
    let dir = q.signum();
    let (mut lo, mut hi) = (0.0f64, dir);
    let mut steps = 0;
    while (q_of_p(hi) - q) * dir < 0.0 {
        lo = hi;
        hi *= 2.0;
        steps += 1;
        if steps > 1100 {
            return f64::NAN;
        }
    }
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut p = 0.5 * (lo + hi);
    for _ in 0..200 {
        let r = q_of_p(p) - q;
        if r == 0.0 {
            break;
        }
        if r > 0.0 {
            hi = p;
        } else {
            lo = p;
        }
        let newton = p - r / dq(p);
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - p).abs() <= 1e-15 * (1.0 + p.abs()) {
            p = next;
            break;
        }
        p = next;
    }
    p
}

/// The q map, analytic when a hint is given, adaptive quadrature otherwise.
pub fn build_q_map(coeffs: &CoefficientSet, hint: Option<QMapHint>) -> Result<QMap> {
    match hint.or(coeffs.q_hint) {
        Some(QMapHint::DeformedSquare { beta }) => analytic_q_map(beta),
        None => numeric_q_map(coeffs),
    }
}

/// Numeric path regardless of hints, for cross-checks.
pub fn build_q_map_numeric(coeffs: &CoefficientSet) -> Result<QMap> {
    numeric_q_map(coeffs)
}

#[derive(Clone)]
pub struct RhoMap {
    chi: RealFn,
    log_rho: RealFn,
    analytic: bool,
}

impl fmt::Debug for RhoMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RhoMap").field("analytic", &self.analytic).finish()
    }
}

impl RhoMap {
    pub fn chi(&self, p: f64) -> f64 {
        (self.chi)(p)
    }
    pub fn log_rho(&self, p: f64) -> f64 {
        (self.log_rho)(p)
    }
    pub fn rho(&self, p: f64) -> f64 {
        self.log_rho(p).exp()
    }
    pub fn is_analytic(&self) -> bool {
        self.analytic
    }
}

pub fn build_rho(coeffs: &CoefficientSet) -> Result<RhoMap> {
    let c = coeffs.clone();
    let chi: RealFn = Arc::new(move |p| c.chi(p));
    if let Some(h) = &coeffs.log_rho_hint {
        return Ok(RhoMap { chi, log_rho: h.clone(), analytic: true });
    }
    Ok(build_rho_numeric_from(chi))
}

pub fn build_rho_numeric(coeffs: &CoefficientSet) -> RhoMap {
    let c = coeffs.clone();
    build_rho_numeric_from(Arc::new(move |p| c.chi(p)))
}

fn build_rho_numeric_from(chi: RealFn) -> RhoMap {
    let c2 = chi.clone();
    let log_rho: RealFn = Arc::new(move |p: f64| {
        quadrature::adaptive(&*c2, 0.0, p, QUAD_TOL).unwrap_or(f64::NAN)
    });
    RhoMap { chi, log_rho, analytic: false }
}

/// `V(q)` as a pointwise evaluator.
#[derive(Clone, Debug)]
pub struct Potential {
    coeffs: CoefficientSet,
    q_map: QMap,
}

impl Potential {
    pub fn eval(&self, q: f64) -> Result<f64> {
        if !self.q_map.contains(q) {
            return Err(Error::Domain(format!(
                "q = {q} outside ({}, {})",
                self.q_map.q_min, self.q_map.q_max
            )));
        }
        Ok(self.coeffs.potential_at_p(self.q_map.p(q)))
    }

    pub fn q_min(&self) -> f64 {
        self.q_map.q_min
    }

    pub fn q_max(&self) -> f64 {
        self.q_map.q_max
    }
}

pub fn build_potential(coeffs: &CoefficientSet, q_map: &QMap) -> Potential {
    Potential { coeffs: coeffs.clone(), q_map: q_map.clone() }
}

/// Everything produced by the transformation.
#[derive(Clone, Debug)]
pub struct TransformedProblem {
    coeffs: CoefficientSet,
    q_map: QMap,
    rho: RhoMap,
    potential: Potential,
}

impl TransformedProblem {
    pub fn build(coeffs: &CoefficientSet) -> Result<Self> {
        let q_map = build_q_map(coeffs, None)?;
        let rho = build_rho(coeffs)?;
        let potential = build_potential(coeffs, &q_map);
        Ok(Self { coeffs: coeffs.clone(), q_map, rho, potential })
    }

    pub fn coeffs(&self) -> &CoefficientSet {
        &self.coeffs
    }
    pub fn q_map(&self) -> &QMap {
        &self.q_map
    }
    pub fn rho(&self) -> &RhoMap {
        &self.rho
    }
    pub fn potential(&self) -> &Potential {
        &self.potential
    }
    pub fn q_min(&self) -> f64 {
        self.q_map.q_min
    }
    pub fn q_max(&self) -> f64 {
        self.q_map.q_max
    }

    /// `ψ, ψ', ψ''` at `p` from `φ, φ', φ''` at `q(p)`.
    pub fn lift(&self, p: f64, phi: [f64; 3]) -> [f64; 3] {
        let [v, d1, d2] = phi;
        let c = &self.coeffs;
        let f = c.f(p);
        let qp = 1.0 / f.sqrt();
        let qpp = -c.df(p) / (2.0 * f * f.sqrt());
        let chi = self.rho.chi(p);
        let rho = self.rho.rho(p);
        let psi = rho * v;
        let dpsi = rho * (chi * v + d1 * qp);
        let d2psi = rho
            * ((c.dchi(p) + chi * chi) * v + 2.0 * chi * d1 * qp + d2 * qp * qp + d1 * qpp);
        [psi, dpsi, d2psi]
    }
}

/// `P, P', P''` of `P_n^{(a,b)}` at `z`.
pub(crate) fn jacobi_with_derivatives(n: usize, a: f64, b: f64, z: f64) -> Result<[f64; 3]> {
    let p = jacobi_eval(JacobiOrder::new(n, a, b)?, z)?;
    let s = n as f64 + a + b;
    let d1 = if n >= 1 {
        0.5 * (s + 1.0) * jacobi_eval(JacobiOrder::new(n - 1, a + 1.0, b + 1.0)?, z)?
    } else {
        0.0
    };
    let d2 = if n >= 2 {
        0.25 * (s + 1.0) * (s + 2.0) * jacobi_eval(JacobiOrder::new(n - 2, a + 2.0, b + 2.0)?, z)?
    } else {
        0.0
    };
    Ok([p, d1, d2])
}

/// `−d²/dq² + ν sec²(√β q)` on `|q| < π/(2√β)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SecantSquaredWell {
    nu: f64,
    beta: f64,
    a: f64,
}

impl SecantSquaredWell {
    pub fn new(nu: f64, beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::UnsupportedRegime(format!("sec^2 well needs beta > 0, got {beta}")));
        }
        if !(nu.is_finite() && nu > -beta / 4.0) {
            return Err(Error::UnsupportedRegime(format!(
                "sec^2 strength {nu} is not above -beta/4 = {}",
                -beta / 4.0
            )));
        }
        let a = 0.5 * (beta.sqrt() + (beta + 4.0 * nu).sqrt());
        Ok(Self { nu, beta, a })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn a(&self) -> f64 {
        self.a
    }

    /// `A/√β`, the cosine exponent.
    pub fn k(&self) -> f64 {
        self.a / self.beta.sqrt()
    }

    pub fn half_width(&self) -> f64 {
        FRAC_PI_2 / self.beta.sqrt()
    }

    pub fn level(&self, n: usize) -> f64 {
        let t = self.a + n as f64 * self.beta.sqrt();
        t * t
    }

    pub fn levels(&self, count: usize) -> Vec<f64> {
        (0..count).map(|n| self.level(n)).collect()
    }

    /// Unnormalised `φ_n = cos^k · P_n^{(k−½, k−½)}(sin)` and its first two
    /// q-derivatives.
    pub fn phi(&self, n: usize, q: f64) -> Result<[f64; 3]> {
        let sb = self.beta.sqrt();
        let k = self.k();
        let (s, c) = (sb * q).sin_cos();
        if !(c > 0.0) {
            return Err(Error::Domain(format!("q = {q} outside the well")));
        }
        let j = k - 0.5;
        let [p, dp, d2p] = jacobi_with_derivatives(n, j, j, s)?;
        let ck = c.powf(k);
        let v = ck * p;
        let d1 = sb * c.powf(k - 1.0) * (-k * s * p + c * c * dp);
        let c2 = c * c;
        let d2 = self.beta
            * c.powf(k - 2.0)
            * (k * (k - 1.0) * s * s * p - k * c2 * p - (2.0 * k + 1.0) * c2 * s * dp
                + c2 * c2 * d2p);
        Ok([v, d1, d2])
    }

    /// `φ_0 … φ_{n_max}` values only, one recurrence sweep.
    pub fn phi_batch(&self, n_max: usize, q: f64) -> Result<Vec<f64>> {
        let sb = self.beta.sqrt();
        let k = self.k();
        let (s, c) = (sb * q).sin_cos();
        let ck = c.max(0.0).powf(k);
        Ok(jacobi_batch(k - 0.5, k - 0.5, n_max, s)?.into_iter().map(|p| ck * p).collect())
    }
}

pub fn secant_squared_levels(nu: f64, beta: f64) -> Result<impl Fn(usize) -> f64> {
    let well = SecantSquaredWell::new(nu, beta)?;
    Ok(move |n| well.level(n))
}
