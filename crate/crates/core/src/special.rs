//! Jacobi polynomials by upward three-term recurrence in the degree.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiOrder {
    pub n: usize,
    pub a: f64,
    pub b: f64,
}

impl JacobiOrder {
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        check_params(a, b)?;
        Ok(Self { n, a, b })
    }
}

fn check_params(a: f64, b: f64) -> Result<()> {
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::Domain(format!("Jacobi parameters must exceed -1, got ({a}, {b})")));
    }
    Ok(())
}

/// Walks `P_0, P_1, …` at a fixed point.
struct Recurrence {
    a: f64,
    b: f64,
    z: f64,
    k: usize,
    prev: f64,
    cur: f64,
}

impl Recurrence {
    fn new(a: f64, b: f64, z: f64) -> Self {
        Self { a, b, z, k: 0, prev: 0.0, cur: 1.0 }
    }
}

impl Iterator for Recurrence {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.cur;
        let (a, b, z) = (self.a, self.b, self.z);
        let next = if self.k == 0 {
            0.5 * ((a - b) + (a + b + 2.0) * z)
        } else {
            let k = self.k as f64;
            let s = 2.0 * k + a + b;
            let c0 = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
            let c1 = (s + 1.0) * ((s + 2.0) * s * z + a * a - b * b);
            let c2 = 2.0 * (k + a) * (k + b) * (s + 2.0);
            (c1 * self.cur - c2 * self.prev) / c0
        };
        self.prev = self.cur;
        self.cur = next;
        self.k += 1;
        Some(out)
    }
}

pub fn jacobi_eval(order: JacobiOrder, z: f64) -> Result<f64> {
    check_params(order.a, order.b)?;
    Ok(Recurrence::new(order.a, order.b, z).nth(order.n).expect("unbounded iterator"))
}

/// `[P_0(z), …, P_{n_max}(z)]` from a single sweep.
pub fn jacobi_batch(a: f64, b: f64, n_max: usize, z: f64) -> Result<Vec<f64>> {
    check_params(a, b)?;
    Ok(Recurrence::new(a, b, z).take(n_max + 1).collect())
}
