//! Numerical spectra: a Sturm-bisection solver for `−φ'' + V φ` on a finite
//! q interval and dense non-Hermitian solvers for momentum-space matrices.

use faer::{c64, Mat};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::MomentumGrid;
use crate::error::{Error, Result};
use crate::models::Model;
use crate::par::Execution;
use crate::pct::{CoefficientSet, EnergyMap, TransformedProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    ClosedForm,
    QSpaceNumeric,
    PSpaceNumeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumClass {
    Real,
    ConjugatePair { partner: usize },
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<Complex64>,
    pub classes: Vec<SpectrumClass>,
    pub source: SpectrumSource,
    /// grid points or intervals used, 0 for closed forms
    pub resolution: usize,
}

impl SpectrumResult {
    pub fn is_real(&self) -> bool {
        self.classes.iter().all(|c| *c == SpectrumClass::Real)
    }

    pub fn has_conjugate_pair(&self) -> bool {
        self.classes.iter().any(|c| matches!(c, SpectrumClass::ConjugatePair { .. }))
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    /// Applies an affine energy map to every eigenvalue.
    pub fn to_energies(&self, map: &EnergyMap) -> Self {
        Self { eigenvalues: self.eigenvalues.iter().map(|&z| map.energy_complex(z)).collect(), ..self.clone() }
    }
}

/// Default classification tolerance, relative to `max(1, |Re|)`.
pub const REALITY_TOL: f64 = 1e-7;

/// Tags each value as real, a conjugate-pair member, or unclassified.
pub fn classify_spectrum(eigs: &[Complex64], tol: f64) -> Vec<SpectrumClass> {
    let scale = |z: Complex64| tol * z.re.abs().max(1.0);
    let mut out = vec![SpectrumClass::Unclassified; eigs.len()];
    for (i, z) in eigs.iter().enumerate() {
        if z.im.abs() <= scale(*z) {
            out[i] = SpectrumClass::Real;
        }
    }
    for i in 0..eigs.len() {
        if out[i] != SpectrumClass::Unclassified {
            continue;
        }
        let partner = (0..eigs.len())
            .filter(|&j| j != i && out[j] == SpectrumClass::Unclassified)
            .filter(|&j| (eigs[j] - eigs[i].conj()).norm() <= scale(eigs[i]))
            .min_by(|&a, &b| {
                let da = (eigs[a] - eigs[i].conj()).norm();
                let db = (eigs[b] - eigs[i].conj()).norm();
                da.total_cmp(&db)
            });
        if let Some(j) = partner {
            out[i] = SpectrumClass::ConjugatePair { partner: j };
            out[j] = SpectrumClass::ConjugatePair { partner: i };
        }
    }
    out
}

fn sort_by_real(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

pub fn closed_form_spectrum(model: &Model, n_levels: usize, tol: f64) -> SpectrumResult {
    let eigenvalues = model.energies(n_levels);
    SpectrumResult {
        classes: classify_spectrum(&eigenvalues, tol),
        eigenvalues,
        source: SpectrumSource::ClosedForm,
        resolution: 0,
    }
}

/// Number of eigenvalues below `x` of the tridiagonal matrix with diagonal
/// `d` and constant off-diagonal `e`.
fn sturm_count(d: &[f64], e2: f64, x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, di) in d.iter().enumerate() {
        q = if i == 0 { di - x } else { di - x - e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (di.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect_level(d: &[f64], e2: f64, k: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e2, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Lowest `n_levels` eigenvalues of `−d²/dq² + V` on `(a, b)` with Dirichlet
/// ends, second-order differences, `n_intervals` cells.
pub fn dirichlet_levels(
    v: &(dyn Fn(f64) -> Result<f64> + Sync),
    a: f64,
    b: f64,
    n_intervals: usize,
    n_levels: usize,
    exec: Execution,
) -> Result<Vec<f64>> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::UnsupportedRegime(format!("q-space solver needs a finite interval, got ({a}, {b})")));
    }
    if n_intervals < 2 {
        return Err(Error::InvalidGrid("need at least one interior point".into()));
    }
    let h = (b - a) / n_intervals as f64;
    let inv = 1.0 / (h * h);
    let nodes: Vec<f64> = (1..n_intervals).map(|i| a + h * i as f64).collect();
    let pot = exec.try_map(&nodes, |&q| v(q))?;
    let d: Vec<f64> = pot.iter().map(|vq| 2.0 * inv + vq).collect();
    if let Some(i) = d.iter().position(|x| !x.is_finite()) {
        return Err(Error::Numeric(format!("potential is not finite at q = {}", nodes[i])));
    }
    let lo = d.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 * inv;
    let hi = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 2.0 * inv;
    let e2 = inv * inv;
    Ok(exec.map_range(n_levels.min(d.len()), |k| bisect_level(&d, e2, k, lo, hi)))
}

/// Two-grid Richardson combination `(4 ε_{2N} − ε_N)/3`.
pub fn richardson_levels(
    v: &(dyn Fn(f64) -> Result<f64> + Sync),
    a: f64,
    b: f64,
    n_grid: usize,
    n_levels: usize,
    exec: Execution,
) -> Result<Vec<f64>> {
    if n_grid < 64 {
        return Err(Error::Resolution(format!("q-space grid needs at least 64 cells, got {n_grid}")));
    }
    if n_levels > n_grid / 4 {
        return Err(Error::Resolution(format!(
            "{n_levels} levels requested from a {n_grid}-cell grid (at most {})",
            n_grid / 4
        )));
    }
    let coarse = dirichlet_levels(v, a, b, n_grid, n_levels, exec)?;
    let fine = dirichlet_levels(v, a, b, 2 * n_grid, n_levels, exec)?;
    Ok(coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect())
}

/// Eigenvalues ε of the transformed problem.
pub fn solve_q_space(problem: &TransformedProblem, n_grid: usize, n_levels: usize) -> Result<SpectrumResult> {
    solve_q_space_with(problem, n_grid, n_levels, Execution::default())
}

pub fn solve_q_space_with(
    problem: &TransformedProblem,
    n_grid: usize,
    n_levels: usize,
    exec: Execution,
) -> Result<SpectrumResult> {
    let pot = problem.potential();
    let v = |q: f64| pot.eval(q);
    let levels = richardson_levels(&v, problem.q_min(), problem.q_max(), n_grid, n_levels, exec)?;
    let eigenvalues: Vec<Complex64> = levels.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    Ok(SpectrumResult {
        classes: vec![SpectrumClass::Real; eigenvalues.len()],
        eigenvalues,
        source: SpectrumSource::QSpaceNumeric,
        resolution: n_grid,
    })
}

/// Closed-form-free energies from the q-space solver.
pub fn q_space_energies(model: &Model, n_grid: usize, n_levels: usize, exec: Execution) -> Result<SpectrumResult> {
    let problem = model.transformed()?;
    let eps = solve_q_space_with(&problem, n_grid, n_levels, exec)?;
    Ok(eps.to_energies(&problem.coeffs().energy_map()))
}

/// A dense Hamiltonian; realified whenever every entry is real.
#[derive(Clone, Debug)]
pub enum HamiltonianMatrix {
    Real(Mat<f64>),
    Complex(Mat<c64>),
}

impl HamiltonianMatrix {
    pub fn dim(&self) -> usize {
        match self {
            HamiltonianMatrix::Real(m) => m.nrows(),
            HamiltonianMatrix::Complex(m) => m.nrows(),
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, HamiltonianMatrix::Real(_))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match self {
            HamiltonianMatrix::Real(m) => Complex64::new(m[(i, j)], 0.0),
            HamiltonianMatrix::Complex(m) => m[(i, j)],
        }
    }

    pub fn frobenius(&self) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for j in 0..n {
            for i in 0..n {
                s += self.get(i, j).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub(crate) fn from_complex(m: Mat<c64>) -> Self {
        let n = m.nrows();
        let real = (0..n).all(|j| (0..n).all(|i| m[(i, j)].im == 0.0));
        if real {
            HamiltonianMatrix::Real(Mat::from_fn(n, n, |i, j| m[(i, j)].re))
        } else {
            HamiltonianMatrix::Complex(m)
        }
    }

    /// `(M − δ₀)/α`: converts an ε-operator to energy units.
    pub fn to_energy_units(&self, map: &EnergyMap) -> Self {
        let (a, d0) = (map.alpha, map.offset);
        match self {
            HamiltonianMatrix::Real(m) => HamiltonianMatrix::Real(Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
                (m[(i, j)] - if i == j { d0 } else { 0.0 }) / a
            })),
            HamiltonianMatrix::Complex(m) => {
                HamiltonianMatrix::Complex(Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
                    (m[(i, j)] - if i == j { d0 } else { 0.0 }) / a
                }))
            }
        }
    }
}

const D1: [(isize, f64); 4] = [(-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0)];
const D2: [(isize, f64); 5] =
    [(-2, -1.0 / 12.0), (-1, 16.0 / 12.0), (0, -30.0 / 12.0), (1, 16.0 / 12.0), (2, -1.0 / 12.0)];

fn require_symmetric(grid: &MomentumGrid) -> Result<()> {
    if !grid.is_symmetric() {
        return Err(Error::InvalidGrid("matrix assembly needs a symmetric p grid".into()));
    }
    if grid.len() < 5 {
        return Err(Error::InvalidGrid("matrix assembly needs at least 5 points".into()));
    }
    Ok(())
}

/// `−f D² + g D + h` with fourth-order stencils, zero outside the grid.
pub fn build_p_space_matrix(coeffs: &CoefficientSet, grid: &MomentumGrid) -> Result<Mat<f64>> {
    require_symmetric(grid)?;
    let n = grid.len();
    let h = grid.spacing();
    let mut m = Mat::<f64>::zeros(n, n);
    for i in 0..n {
        let p = grid.point(i);
        let (f, g) = (coeffs.f(p), coeffs.g(p));
        for (off, c) in D2 {
            let j = i as isize + off;
            if (0..n as isize).contains(&j) {
                m[(i, j as usize)] -= f * c / (h * h);
            }
        }
        for (off, c) in D1 {
            let j = i as isize + off;
            if (0..n as isize).contains(&j) {
                m[(i, j as usize)] += g * c / h;
            }
        }
        m[(i, i)] += coeffs.h(p);
    }
    Ok(m)
}

// Row/column scalings and products of dense complex blocks.
fn scale_rows(d: &[Complex64], m: &Mat<c64>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| d[i] * m[(i, j)])
}

fn scale_cols(m: &Mat<c64>, d: &[Complex64]) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * d[j])
}

fn lincomb(terms: &[(Complex64, &Mat<c64>)], n: usize) -> Mat<c64> {
    Mat::from_fn(n, n, |i, j| terms.iter().map(|(c, m)| c * m[(i, j)]).sum())
}

/// `x` and `x²` as matrices on the grid.
///
/// `x = iħ m⁻¹ c^{1/2} D c^{1/2}` with `c = (1+βp²)^{γ/β}`, `m = c/(1+βp²)`,
/// which equals `iħ[(1+βp²) d/dp + γp]`. `x²` is assembled as the weighted
/// adjoint product through a staggered half-grid derivative, since squaring
/// the central stencil leaves undamped sawtooth modes.
fn position_blocks(model: &Model, grid: &MomentumGrid) -> (Mat<c64>, Mat<c64>) {
    let d = model.deformation();
    let (b, r, hbar) = (d.beta(), d.gamma_over_beta(), d.hbar());
    let n = grid.len();
    let h = grid.spacing();
    let p = grid.points();
    let u: Vec<f64> = p.iter().map(|p| 1.0 + b * p * p).collect();
    let c_half: Vec<f64> = u.iter().map(|u| u.powf(0.5 * r)).collect();
    let left: Vec<f64> = u.iter().zip(&c_half).map(|(u, ch)| ch / u.powf(r - 1.0)).collect();
    let i_hbar = Complex64::new(0.0, hbar);
    let mut x = Mat::<c64>::zeros(n, n);
    for i in 0..n {
        for (off, cf) in D1 {
            let j = i as isize + off;
            if (0..n as isize).contains(&j) {
                let j = j as usize;
                x[(i, j)] = i_hbar * left[i] * cf / h * c_half[j];
            }
        }
    }
    // G: grid → half grid, fourth-order staggered
    const G: [(isize, f64); 4] = [(-1, 1.0 / 24.0), (0, -27.0 / 24.0), (1, 27.0 / 24.0), (2, -1.0 / 24.0)];
    let mut x2 = Mat::<c64>::zeros(n, n);
    for k in 0..n - 1 {
        let ph = 0.5 * (p[k] + p[k + 1]);
        let uh = 1.0 + b * ph * ph;
        let row: Vec<(usize, f64)> = G
            .iter()
            .filter_map(|&(off, cf)| {
                let j = k as isize + off;
                (0..n as isize).contains(&j).then(|| (j as usize, cf / h))
            })
            .collect();
        for &(i, gi) in &row {
            for &(j, gj) in &row {
                let v = hbar * hbar * left[i] * gi * uh * gj * c_half[j];
                x2[(i, j)] += Complex64::new(v, 0.0);
            }
        }
    }
    (x, x2)
}

/// H composed literally from the position and momentum operators.
pub fn build_operator_hamiltonian(model: &Model, grid: &MomentumGrid) -> Result<HamiltonianMatrix> {
    require_symmetric(grid)?;
    let n = grid.len();
    let (x, x2) = position_blocks(model, grid);
    let p: Vec<Complex64> = grid.points().into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    let p2: Vec<Complex64> = p.iter().map(|v| v * v).collect();
    let one = Complex64::new(1.0, 0.0);
    let diag = |d: &[Complex64]| Mat::<c64>::from_fn(n, n, |i, j| if i == j { d[i] } else { Complex64::new(0.0, 0.0) });
    let m = match model {
        Model::Displaced(prm) => {
            let pp = diag(&p2);
            lincomb(
                &[
                    (one / (2.0 * prm.mu), &pp),
                    (Complex64::new(0.5 * prm.mu * prm.omega * prm.omega, 0.0), &x2),
                    (Complex64::new(0.0, prm.lambda), &x),
                ],
                n,
            )
        }
        Model::Swanson(prm) => {
            let (mm, w) = (prm.m, prm.omega);
            let k = 1.0 / (2.0 * mm * prm.deformation.hbar() * w);
            let pp = diag(&p2);
            let px = scale_rows(&p, &x);
            let xp = scale_cols(&x, &p);
            let imw = Complex64::new(0.0, mm * w);
            let m2w2 = Complex64::new(mm * mm * w * w, 0.0);
            // a†a, a², a†² with a = (p − i m ω x)/√(2mħω)
            let ada = lincomb(&[(one, &pp), (m2w2, &x2), (-imw, &px), (imw, &xp)], n);
            let aa = lincomb(&[(one, &pp), (-m2w2, &x2), (-imw, &px), (-imw, &xp)], n);
            let adad = lincomb(&[(one, &pp), (-m2w2, &x2), (imw, &px), (imw, &xp)], n);
            let id = diag(&vec![one; n]);
            lincomb(
                &[
                    (Complex64::new(w * k, 0.0), &ada),
                    (Complex64::new(prm.lambda * k, 0.0), &aa),
                    (Complex64::new(prm.delta * k, 0.0), &adad),
                    (Complex64::new(0.5 * w, 0.0), &id),
                ],
                n,
            )
        }
    };
    Ok(HamiltonianMatrix::from_complex(m))
}

/// Drops eigenvectors whose amplitude on the two outermost nodes at either
/// end exceeds `edge_ratio` of their peak. Box modes sit on the edge with a
/// ratio near one; bound states with power-law tails stay around 1e-3 at the
/// default box even for beta = 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpuriousFilter {
    pub edge_ratio: Option<f64>,
}

impl Default for SpuriousFilter {
    fn default() -> Self {
        Self { edge_ratio: Some(1e-2) }
    }
}

impl SpuriousFilter {
    pub fn disabled() -> Self {
        Self { edge_ratio: None }
    }

    pub fn with_ratio(edge_ratio: f64) -> Self {
        Self { edge_ratio: Some(edge_ratio) }
    }
}

/// Filter suited to each model. Swanson eigenvectors decay as a power of p
/// and keep visible edge weight on any practical box, so only eigenvalues are
/// used there.
pub fn default_filter(model: &Model) -> SpuriousFilter {
    match model {
        Model::Displaced(_) => SpuriousFilter::default(),
        Model::Swanson(_) => SpuriousFilter::disabled(),
    }
}

fn eigen_decompose(matrix: &HamiltonianMatrix, vectors: bool) -> Result<(Vec<Complex64>, Option<Mat<c64>>)> {
    let fail = |e: faer::linalg::evd::EvdError| {
        Error::Numeric(format!("dense eigensolver failed on a {0}x{0} matrix: {e:?}", matrix.dim()))
    };
    if !vectors {
        let vals = match matrix {
            HamiltonianMatrix::Real(m) => m.eigenvalues().map_err(fail)?,
            HamiltonianMatrix::Complex(m) => m.eigenvalues().map_err(fail)?,
        };
        return Ok((vals, None));
    }
    let eig = match matrix {
        HamiltonianMatrix::Real(m) => faer::linalg::solvers::Eigen::new_from_real(m.as_ref()).map_err(fail)?,
        HamiltonianMatrix::Complex(m) => m.eigen().map_err(fail)?,
    };
    let s = eig.S();
    let vals = (0..matrix.dim()).map(|i| s[i]).collect();
    Ok((vals, Some(eig.U().to_owned())))
}

/// Lowest `n_levels` eigenvalues by real part that pass `filter`, classified
/// with `tol`.
pub fn solve_p_space(
    matrix: &HamiltonianMatrix,
    n_levels: usize,
    tol: f64,
    filter: SpuriousFilter,
) -> Result<SpectrumResult> {
    let n = matrix.dim();
    let (vals, vecs) = eigen_decompose(matrix, filter.edge_ratio.is_some())?;
    if let Some(i) = vals.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Numeric(format!("eigenvalue {i} is not finite")));
    }
    let mut kept: Vec<Complex64> = match (filter.edge_ratio, vecs) {
        (Some(ratio), Some(u)) => (0..n)
            .filter(|&k| {
                let col = u.col(k);
                let peak = (0..n).map(|i| col[i].norm()).fold(0.0, f64::max);
                let edge = [0, 1, n - 2, n - 1].iter().map(|&i| col[i].norm()).fold(0.0, f64::max);
                edge <= ratio * peak
            })
            .map(|k| vals[k])
            .collect(),
        _ => vals,
    };
    sort_by_real(&mut kept);
    let classes = classify_spectrum(&kept, tol);
    let mut take = n_levels.min(kept.len());
    if take > 0 && take < kept.len() {
        if let SpectrumClass::ConjugatePair { partner } = classes[take - 1] {
            if partner >= take {
                take = partner + 1;
            }
        }
    }
    kept.truncate(take);
    let classes = classify_spectrum(&kept, tol);
    Ok(SpectrumResult { eigenvalues: kept, classes, source: SpectrumSource::PSpaceNumeric, resolution: n })
}

/// Energies of `model` from the coefficient matrix on `grid`.
pub fn p_space_energies(
    model: &Model,
    grid: &MomentumGrid,
    n_levels: usize,
    filter: SpuriousFilter,
) -> Result<SpectrumResult> {
    let coeffs = model.coefficients()?;
    let m = HamiltonianMatrix::Real(build_p_space_matrix(&coeffs, grid)?);
    let map = coeffs.energy_map();
    // classify in energy units
    let eps = solve_p_space(&m, n_levels, REALITY_TOL * map.alpha.abs(), filter)?;
    let mut out = eps.to_energies(&map);
    out.classes = classify_spectrum(&out.eigenvalues, REALITY_TOL);
    Ok(out)
}

/// Bisects for the smallest parameter where `has_pair` turns true, given it is
/// false at `lo` and true at `hi`; `None` if the ends do not bracket a change.
pub fn complex_onset(
    lo: f64,
    hi: f64,
    iterations: usize,
    has_pair: impl Fn(f64) -> Result<bool>,
) -> Result<Option<f64>> {
    if has_pair(lo)? || !has_pair(hi)? {
        return Ok(None);
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..iterations {
        let m = 0.5 * (a + b);
        if has_pair(m)? {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DeformationParams;
    use crate::models::{DisplacedOscillatorParams, SwansonParams};
    use crate::pct::{CoefficientFunctions, SecantSquaredWell};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn displaced(beta: f64, gamma: f64, lambda: f64) -> Model {
        let d = DeformationParams::new(1.0, beta, gamma).unwrap();
        Model::Displaced(DisplacedOscillatorParams::new(d, 1.0, 1.0, lambda).unwrap())
    }

    #[test]
    fn classification() {
        let tags = classify_spectrum(&[c(1.0, 0.0), c(2.0, 1e-9)], 1e-7);
        assert_eq!(tags, vec![SpectrumClass::Real; 2]);
        let tags = classify_spectrum(&[c(1.0, 2.0), c(1.0, -2.0)], 1e-7);
        assert_eq!(
            tags,
            vec![SpectrumClass::ConjugatePair { partner: 1 }, SpectrumClass::ConjugatePair { partner: 0 }]
        );
        assert_eq!(classify_spectrum(&[c(1.0, 2.0)], 1e-7), vec![SpectrumClass::Unclassified]);
    }

    #[test]
    fn particle_in_a_box() {
        let v = |_: f64| Ok(0.0);
        let levels = richardson_levels(&v, 0.0, PI, 400, 6, Execution::Sequential).unwrap();
        for (n, e) in levels.iter().enumerate() {
            let want = ((n + 1) * (n + 1)) as f64;
            assert!((e - want).abs() < 1e-7 * want, "n={n}: {e}");
        }
    }

    #[test]
    fn sec2_well_levels() {
        let beta = 0.25;
        let well = SecantSquaredWell::new(2.0 * beta, beta).unwrap();
        let sb = beta.sqrt();
        let v = move |q: f64| Ok(2.0 * beta / (sb * q).cos().powi(2));
        let e = richardson_levels(&v, -well.half_width(), well.half_width(), 1000, 6, Execution::default()).unwrap();
        for (n, e) in e.iter().enumerate() {
            let want = 0.25 * ((n + 2) * (n + 2)) as f64;
            assert!((e - want).abs() < 1e-6 * want, "n={n}: {e} vs {want}");
        }
    }

    #[test]
    fn second_order_convergence() {
        let m = displaced(0.1, 0.0, 0.5);
        let t = m.transformed().unwrap();
        let pot = t.potential();
        let v = |q: f64| pot.eval(q);
        let exact = m.epsilon_level(0).unwrap();
        let errs: Vec<f64> = [200, 400, 800]
            .iter()
            .map(|&n| dirichlet_levels(&v, t.q_min(), t.q_max(), n, 1, Execution::Sequential).unwrap()[0] - exact)
            .collect();
        let ratio = errs[0] / errs[1];
        assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}, errors {errs:?}");
        let ratio = errs[1] / errs[2];
        assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn resolution_guards() {
        let t = displaced(0.1, 0.0, 0.5).transformed().unwrap();
        assert!(matches!(solve_q_space(&t, 32, 2), Err(Error::Resolution(_))));
        assert!(matches!(solve_q_space(&t, 64, 17), Err(Error::Resolution(_))));
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let t = displaced(0.1, 0.0, 0.5).transformed().unwrap();
        let a = solve_q_space_with(&t, 500, 6, Execution::Sequential).unwrap();
        let b = solve_q_space_with(&t, 500, 6, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn harmonic_matrix() {
        let unit = |v: f64| -> crate::pct::RealFn { Arc::new(move |_| v) };
        let coeffs = CoefficientSet::new(
            CoefficientFunctions {
                f: unit(1.0),
                df: unit(0.0),
                d2f: unit(0.0),
                g: unit(0.0),
                dg: unit(0.0),
                h: Arc::new(|p| p * p),
            },
            EnergyMap::new(1.0, 0.0).unwrap(),
        )
        .unwrap();
        let grid = MomentumGrid::symmetric(12.0, 801).unwrap();
        let m = HamiltonianMatrix::Real(build_p_space_matrix(&coeffs, &grid).unwrap());
        let s = solve_p_space(&m, 5, REALITY_TOL, SpuriousFilter::default()).unwrap();
        for (n, e) in s.eigenvalues.iter().enumerate() {
            let want = (2 * n + 1) as f64;
            assert!((e.re - want).abs() < 1e-6 * want, "n={n}: {e}");
        }
        assert!(s.is_real());
        let asym = MomentumGrid::new(-1.0, 2.0, 11).unwrap();
        assert!(build_p_space_matrix(&coeffs, &asym).is_err());
    }

    #[test]
    fn parity_relabelling_preserves_spectrum() {
        let m = displaced(0.1, 0.0, 0.5);
        let grid = MomentumGrid::symmetric(15.0, 301).unwrap();
        let a = build_p_space_matrix(&m.coefficients().unwrap(), &grid).unwrap();
        // p → −p maps λ → −λ
        let b = build_p_space_matrix(&displaced(0.1, 0.0, -0.5).coefficients().unwrap(), &grid).unwrap();
        let n = grid.len();
        let flipped = Mat::from_fn(n, n, |i, j| b[(n - 1 - i, n - 1 - j)]);
        for j in 0..n {
            for i in 0..n {
                assert!((flipped[(i, j)] - a[(i, j)]).abs() < 1e-9 * (1.0 + a[(i, j)].abs()));
            }
        }
    }

    #[test]
    fn displaced_p_space_matches_closed_form() {
        let m = displaced(0.1, 0.0, 0.5);
        let grid = MomentumGrid::symmetric(20.0, 1000).unwrap();
        let s = p_space_energies(&m, &grid, 6, SpuriousFilter::default()).unwrap();
        assert_eq!(s.eigenvalues.len(), 6);
        assert!(s.is_real());
        for (n, e) in s.eigenvalues.iter().enumerate() {
            let want = m.energy(n).re;
            assert!((e.re - want).abs() < 1e-5 * want, "n={n}: {e} vs {want}");
        }
    }

    #[test]
    fn operator_hamiltonian_matches_coefficient_matrix() {
        let m = displaced(0.1, 0.0, 0.5);
        let grid = MomentumGrid::symmetric(20.0, 800).unwrap();
        let op = build_operator_hamiltonian(&m, &grid).unwrap();
        assert!(op.is_real());
        let a = solve_p_space(&op, 6, REALITY_TOL, SpuriousFilter::disabled()).unwrap();
        let b = p_space_energies(&m, &grid, 6, SpuriousFilter::disabled()).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y).norm() < 1e-4 * y.norm(), "{x} vs {y}");
        }
    }

    #[test]
    fn hermitian_swanson_operator_spectrum() {
        let d = DeformationParams::new(1.0, 0.5, 0.0).unwrap();
        let m = Model::Swanson(SwansonParams::new(d, 1.0, 1.0, 0.0, 0.0).unwrap());
        let grid = MomentumGrid::symmetric(40.0, 800).unwrap();
        let op = build_operator_hamiltonian(&m, &grid).unwrap();
        let s = solve_p_space(&op, 4, REALITY_TOL, SpuriousFilter::disabled()).unwrap();
        for (n, e) in s.eigenvalues.iter().enumerate() {
            let want = m.energy(n).re;
            assert!((e.re - want).abs() < 1e-3 * want, "n={n}: {e} vs {want}");
        }
    }

    #[test]
    fn onset_bisection() {
        let r = complex_onset(0.0, 1.0, 40, |x| Ok(x > 0.3)).unwrap().unwrap();
        assert!((r - 0.3).abs() < 1e-9);
        assert_eq!(complex_onset(0.0, 1.0, 10, |_| Ok(false)).unwrap(), None);
    }
}
