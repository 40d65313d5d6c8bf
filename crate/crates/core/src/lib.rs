//! Minimal-length quantum mechanics for two non-Hermitian models.
//!
//! The deformed algebra `[x, p] = iħ(1 + βp²)` is realised in momentum space
//! as `x = iħ[(1 + βp²) d/dp + γp]`, `p = p`. Both models (the displaced
//! oscillator `H = p²/2μ + μω²x²/2 + iλx` and the Swanson Hamiltonian
//! `ωa†a + λa² + δa†² + ω/2`) reduce to a second-order momentum-space ODE
//! `[-f d²/dp² + g d/dp + h] ψ = ε ψ`. A point canonical transformation maps
//! that ODE onto `-φ'' + V(q) φ = ε φ` with a `sec²` potential, which yields
//! closed-form spectra, eigenfunctions and metric operators.
//!
//! Everything closed-form is cross-checked by independent numerics:
//! a Sturm-bisection q-space solver, dense non-Hermitian p-space solvers,
//! Gauss–Legendre inner products and residual checks in [`verify`].

pub mod algebra;
pub mod eigen;
pub mod error;
pub mod inner;
pub mod models;
pub mod par;
pub mod pct;
pub mod quadrature;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
