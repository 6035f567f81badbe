//! Complex amplitudes and roots of unity.
//!
//! Arithmetic is delegated to [`num_complex::Complex64`]; this module adds the
//! root-of-unity constructor and the tolerance bundle shared by the engines.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A state coefficient or matrix entry.
pub type Amplitude = Complex64;

/// Numerical thresholds used across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Bound for constructed objects, e.g. unitarity of a gate or |ω| = 1.
    pub eps_construct: f64,
    /// Bound when two independent computations are compared.
    pub eps_crosscheck: f64,
    /// Probabilities below this are reported as exact zero.
    pub eps_prune: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_construct: 1e-12,
            eps_crosscheck: 1e-10,
            eps_prune: 1e-15,
        }
    }
}

impl Tolerance {
    pub fn new(eps_construct: f64, eps_crosscheck: f64, eps_prune: f64) -> Result<Self> {
        let tol = Tolerance {
            eps_construct,
            eps_crosscheck,
            eps_prune,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.eps_construct > 0.0
            && self.eps_prune > 0.0
            && self.eps_prune <= self.eps_crosscheck
            && self.eps_crosscheck.is_finite()
            && self.eps_construct.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "tolerances must satisfy 0 < eps_prune <= eps_crosscheck and 0 < eps_construct, got {self:?}"
            )))
        }
    }
}

/// `e^{2πik/n}`.
///
/// `k` is reduced modulo `n` before the angle is formed so that large phase
/// products such as `k·p` do not lose accuracy in the trigonometric argument.
pub fn omega(n: u64, k: i64) -> Result<Amplitude> {
    if n == 0 {
        return Err(Error::domain("root of unity order must be at least 1"));
    }
    Ok(omega_unchecked(n, k))
}

/// [`omega`] for callers that already know `n >= 1`.
pub(crate) fn omega_unchecked(n: u64, k: i64) -> Amplitude {
    let r = (k as i128).rem_euclid(n as i128) as u64;
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // Exact quarter turns avoid the ~1e-16 residue of cos(π/2).
    if 4 * r == n {
        return Complex64::new(0.0, 1.0);
    }
    if 2 * r == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * r == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    let theta = TAU * (r as f64) / (n as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// `|a|² = re² + im²`.
#[inline]
pub fn amp_norm_sq(a: Amplitude) -> f64 {
    a.re * a.re + a.im * a.im
}
