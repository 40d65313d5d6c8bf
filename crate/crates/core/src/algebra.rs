//! The deformed algebra `[x, p] = iħ(1 + βp²)` on uniform momentum grids.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// ħ, β and the representation parameter γ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationParams {
    hbar: f64,
    beta: f64,
    gamma: f64,
}

impl DeformationParams {
    pub fn new(hbar: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParams(format!("hbar must be positive, got {hbar}")));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidParams(format!("beta must be non-negative, got {beta}")));
        }
        if !gamma.is_finite() {
            return Err(Error::InvalidParams(format!("gamma must be finite, got {gamma}")));
        }
        if beta == 0.0 && gamma != 0.0 {
            return Err(Error::InvalidParams(
                "gamma must be 0 when beta = 0 (gamma/beta undefined)".into(),
            ));
        }
        Ok(Self { hbar, beta, gamma })
    }

    pub fn undeformed(hbar: f64) -> Result<Self> {
        Self::new(hbar, 0.0, 0.0)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.hbar, self.beta, gamma)
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.hbar, beta, self.gamma)
    }

    /// γ/β, taken as 0 in the undeformed limit.
    pub fn gamma_over_beta(&self) -> f64 {
        if self.beta == 0.0 {
            0.0
        } else {
            self.gamma / self.beta
        }
    }

    /// Exponent `1 − γ/β` of the measure denominator.
    pub fn measure_exponent(&self) -> f64 {
        1.0 - self.gamma_over_beta()
    }

    /// `(1 + βp²)^{γ/β − 1}`, the weight in `⟨φ|ψ⟩ = ∫ φ*ψ w dp`.
    pub fn measure_weight(&self, p: f64) -> f64 {
        if self.beta == 0.0 {
            return 1.0;
        }
        (1.0 + self.beta * p * p).powf(-self.measure_exponent())
    }

    pub fn min_length(&self) -> f64 {
        self.hbar * self.beta.sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumGrid {
    p_min: f64,
    p_max: f64,
    n_points: usize,
}

impl MomentumGrid {
    pub fn new(p_min: f64, p_max: f64, n_points: usize) -> Result<Self> {
        if !(p_min.is_finite() && p_max.is_finite() && p_min < p_max) {
            return Err(Error::InvalidGrid(format!("need p_min < p_max, got [{p_min}, {p_max}]")));
        }
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {n_points}")));
        }
        Ok(Self { p_min, p_max, n_points })
    }

    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.p_max - self.p_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        // mirror-exact for symmetric grids: p_i = -p_{n-1-i} bit for bit
        let j = self.n_points - 1 - i;
        let t = (i as f64 * self.p_max + j as f64 * self.p_min) / (self.n_points - 1) as f64;
        if i == j {
            0.5 * (self.p_min + self.p_max)
        } else {
            t
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.p_min == -self.p_max
    }

    /// Same interval with half the spacing.
    pub fn refined(&self) -> Self {
        Self { n_points: 2 * self.n_points - 1, ..*self }
    }
}

/// Complex samples of a function on a [`MomentumGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: MomentumGrid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: MomentumGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Numeric(format!("non-finite sample at index {i}")));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: MomentumGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn from_real_fn(grid: MomentumGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |p| Complex64::new(f(p), 0.0))
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| a * v).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("grid mismatch".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid, values })
    }
}

/// Fourth-order first derivative; one-sided five-point stencils on the two
/// outermost points at each end.
pub(crate) fn derivative4(values: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = values.len();
    let v = values;
    let c = 1.0 / (12.0 * h);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 2..n - 2 {
        out[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) * c;
    }
    out[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * c;
    out[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * c;
    out[n - 1] =
        (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) * c;
    out[n - 2] =
        (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) * c;
    out
}

/// `x φ = iħ[(1 + βp²) φ' + γ p φ]`.
pub fn apply_position(params: &DeformationParams, phi: &GridFunction) -> Result<GridFunction> {
    let grid = phi.grid;
    if grid.len() < 5 {
        return Err(Error::InvalidGrid(format!(
            "position operator needs at least 5 points, got {}",
            grid.len()
        )));
    }
    let d = derivative4(&phi.values, grid.spacing());
    let (b, g) = (params.beta(), params.gamma());
    let ih = Complex64::new(0.0, params.hbar());
    let values = d
        .iter()
        .zip(&phi.values)
        .enumerate()
        .map(|(i, (dv, v))| {
            let p = grid.point(i);
            ih * ((1.0 + b * p * p) * dv + g * p * v)
        })
        .collect();
    Ok(GridFunction { grid, values })
}

pub fn apply_momentum(phi: &GridFunction) -> GridFunction {
    let grid = phi.grid;
    let values = phi.values.iter().enumerate().map(|(i, v)| grid.point(i) * v).collect();
    GridFunction { grid, values }
}

/// Discrete L² norm of `[x, p]φ − iħ(1 + βp²)φ` over points whose stencils are
/// central in both applications, relative to the norm of φ.
pub fn commutator_residual(params: &DeformationParams, phi: &GridFunction) -> Result<f64> {
    let xp = apply_position(params, &apply_momentum(phi))?;
    let px = apply_momentum(&apply_position(params, phi)?);
    let grid = phi.grid;
    let n = grid.len();
    let ih = Complex64::new(0.0, params.hbar());
    let mut num = 0.0;
    for i in 2..n - 2 {
        let p = grid.point(i);
        let target = ih * (1.0 + params.beta() * p * p) * phi.values[i];
        num += (xp.values[i] - px.values[i] - target).norm_sqr();
    }
    let den: f64 = phi.values.iter().map(|v| v.norm_sqr()).sum();
    if den == 0.0 {
        return Err(Error::Domain("commutator residual of the zero function".into()));
    }
    Ok((num / den).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub delta_x: f64,
    pub delta_p: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub min_length: f64,
}

impl UncertaintyReport {
    /// Whether `Δx Δp ≥ ħ/2 (1 + β Δp²)` holds, up to a relative slack.
    pub fn satisfied(&self, slack: f64) -> bool {
        self.lhs >= self.rhs * (1.0 - slack)
    }
}

// Trapezoid weights times the measure.
fn grid_weights(measure: &DeformationParams, grid: &MomentumGrid) -> Vec<f64> {
    let h = grid.spacing();
    let n = grid.len();
    (0..n)
        .map(|i| {
            let end = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            end * h * measure.measure_weight(grid.point(i))
        })
        .collect()
}

/// Moments of `phi` under the deformed measure taken from `measure`.
///
/// `⟨x²⟩` is evaluated as `‖xφ‖²`, which is exact for an operator symmetric
/// under the measure and avoids a second numerical derivative.
pub fn uncertainty_check(
    params: &DeformationParams,
    phi: &GridFunction,
    measure: &DeformationParams,
) -> Result<UncertaintyReport> {
    let grid = phi.grid;
    let w = grid_weights(measure, &grid);
    let dens: Vec<f64> = phi.values.iter().zip(&w).map(|(v, w)| v.norm_sqr() * w).collect();
    let norm: f64 = dens.iter().sum();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::Divergence(format!("state norm is {norm}")));
    }
    let peak = dens.iter().cloned().fold(0.0, f64::max);
    let n = grid.len();
    let tail = dens[0].max(dens[n - 1]);
    if tail > 1e-8 * peak {
        return Err(Error::Divergence(format!(
            "weighted density at the grid edge is {:.3e} of its peak",
            tail / peak
        )));
    }
    let xphi = apply_position(params, phi)?;
    let mut mx = Complex64::new(0.0, 0.0);
    let mut x2 = 0.0;
    let mut mp = 0.0;
    let mut p2 = 0.0;
    for i in 0..n {
        let p = grid.point(i);
        mx += phi.values[i].conj() * xphi.values[i] * w[i];
        x2 += xphi.values[i].norm_sqr() * w[i];
        mp += p * dens[i];
        p2 += p * p * dens[i];
    }
    let (mx, x2, mp, p2) = (mx.re / norm, x2 / norm, mp / norm, p2 / norm);
    let delta_x = (x2 - mx * mx).max(0.0).sqrt();
    let delta_p = (p2 - mp * mp).max(0.0).sqrt();
    Ok(UncertaintyReport {
        delta_x,
        delta_p,
        mean_x: mx,
        mean_p: mp,
        lhs: delta_x * delta_p,
        rhs: 0.5 * params.hbar() * (1.0 + params.beta() * delta_p * delta_p),
        min_length: params.min_length(),
    })
}
