//! The deformed scalar product `∫ φ*ψ (1 + βp²)^{γ/β − 1} dp` and its
//! η-weighted variant.
//!
//! The default rule substitutes `p = tan(√β q)/√β`, under which the measure
//! becomes `(1 + βp²)^{γ/β} dq` on a finite interval, and applies
//! Gauss–Legendre there.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{DeformationParams, GridFunction};
use crate::error::{Error, Result};
use crate::models::MetricFunction;
use crate::quadrature::gauss_legendre;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadScheme {
    GaussLegendreOnQ,
    TrapezoidOnP,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: QuadScheme,
    pub node_count: usize,
    /// Half-width of the p interval, trapezoid scheme only.
    pub p_truncation: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { scheme: QuadScheme::GaussLegendreOnQ, node_count: 512, p_truncation: 50.0 }
    }
}

/// Relative change under node doubling above which an integral is rejected.
pub const DOUBLING_TOL: f64 = 1e-3;

impl QuadratureSpec {
    pub fn new(scheme: QuadScheme, node_count: usize, p_truncation: f64) -> Result<Self> {
        let spec = Self { scheme, node_count, p_truncation };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gauss_legendre(node_count: usize) -> Result<Self> {
        Self::new(QuadScheme::GaussLegendreOnQ, node_count, 50.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count < 16 {
            return Err(Error::InvalidParams(format!(
                "quadrature needs at least 16 nodes, got {}",
                self.node_count
            )));
        }
        if !(self.p_truncation.is_finite() && self.p_truncation > 0.0) {
            return Err(Error::InvalidParams(format!(
                "p truncation must be positive, got {}",
                self.p_truncation
            )));
        }
        Ok(())
    }
}

/// `dp/(1 + βp²)^{1−γ/β} = jacobian(q) dq` with `p = tan(√β q)/√β`.
pub fn jacobian(params: &DeformationParams, q: f64) -> f64 {
    let c = (params.beta().sqrt() * q).cos();
    (c * c).powf(-params.gamma_over_beta())
}

pub fn p_of_q(beta: f64, q: f64) -> f64 {
    let sb = beta.sqrt();
    (sb * q).tan() / sb
}

type ComplexFn<'a> = &'a dyn Fn(f64) -> Complex64;

// One rule with N nodes: returns ⟨φ|ψ⟩, ‖φ‖², ‖ψ‖².
fn rule(
    phi: ComplexFn,
    psi: ComplexFn,
    eta: Option<&MetricFunction>,
    params: &DeformationParams,
    quad: &QuadratureSpec,
    n: usize,
) -> Result<(Complex64, f64, f64)> {
    let mut acc = Complex64::new(0.0, 0.0);
    let (mut nphi, mut npsi) = (0.0, 0.0);
    let mut add = |p: f64, w: f64| {
        let w = w * eta.map_or(1.0, |e| e.value(p));
        let (a, b) = (phi(p), psi(p));
        acc += a.conj() * b * w;
        nphi += a.norm_sqr() * w;
        npsi += b.norm_sqr() * w;
    };
    match quad.scheme {
        QuadScheme::GaussLegendreOnQ => {
            let beta = params.beta();
            if beta <= 0.0 {
                return Err(Error::InvalidParams(
                    "the q-substitution rule needs beta > 0".into(),
                ));
            }
            let half = FRAC_PI_2 / beta.sqrt();
            let gl = gauss_legendre(n);
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                let q = half * x;
                add(p_of_q(beta, q), w * half * jacobian(params, q));
            }
        }
        QuadScheme::TrapezoidOnP => {
            let l = quad.p_truncation;
            let h = 2.0 * l / (n - 1) as f64;
            for i in 0..n {
                let p = -l + h * i as f64;
                let end = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                add(p, end * h * params.measure_weight(p));
            }
        }
    }
    if !(acc.re.is_finite() && acc.im.is_finite() && nphi.is_finite() && npsi.is_finite()) {
        return Err(Error::NonConvergence("integrand is not finite at the nodes".into()));
    }
    Ok((acc, nphi, npsi))
}

fn integrate(
    phi: ComplexFn,
    psi: ComplexFn,
    eta: Option<&MetricFunction>,
    params: &DeformationParams,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    quad.validate()?;
    let n = quad.node_count;
    let (coarse, nphi, npsi) = rule(phi, psi, eta, params, quad, n)?;
    let doubled = match quad.scheme {
        QuadScheme::GaussLegendreOnQ => 2 * n,
        QuadScheme::TrapezoidOnP => 2 * n - 1,
    };
    let (fine, _, _) = rule(phi, psi, eta, params, quad, doubled)?;
    // orthogonal pairs integrate to ~0, so judge the change against the
    // Cauchy–Schwarz bound rather than the value itself
    let scale = fine.norm().max((nphi * npsi).sqrt());
    if (fine - coarse).norm() > DOUBLING_TOL * scale {
        return Err(Error::NonConvergence(format!(
            "node doubling changed the integral by {:.3e} (scale {:.3e})",
            (fine - coarse).norm(),
            scale
        )));
    }
    Ok(coarse)
}

pub fn deformed_inner(
    phi: ComplexFn,
    psi: ComplexFn,
    params: &DeformationParams,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    integrate(phi, psi, None, params, quad)
}

pub fn eta_inner(
    phi: ComplexFn,
    psi: ComplexFn,
    eta: &MetricFunction,
    params: &DeformationParams,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    integrate(phi, psi, Some(eta), params, quad)
}

/// Trapezoid product of sampled functions on a shared grid.
pub fn grid_inner(
    phi: &GridFunction,
    psi: &GridFunction,
    params: &DeformationParams,
    eta: Option<&MetricFunction>,
) -> Result<Complex64> {
    if phi.grid() != psi.grid() {
        return Err(Error::InvalidGrid("grid mismatch".into()));
    }
    let grid = phi.grid();
    let h = grid.spacing();
    let n = grid.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, (a, b)) in phi.values().iter().zip(psi.values()).enumerate() {
        let p = grid.point(i);
        let end = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let w = end * h * params.measure_weight(p) * eta.map_or(1.0, |e| e.value(p));
        acc += a.conj() * b * w;
    }
    Ok(acc)
}
