//! Single-qudit gates used by the game, and the GHZ-type preparation.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::amplitude::{omega_unchecked, Amplitude};
use crate::error::{Error, Result};
use crate::statevector::{space_size, StateVector};

/// Default certification bound for constructed gates.
pub const UNITARY_EPS: f64 = 1e-12;

/// Largest space dimension for which [`PreparationUnitary::to_matrix`]
/// materializes a matrix by default.
pub const EXPLICIT_PREPARATION_CAP: u128 = 10_000;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Amplitude>,
    certified: bool,
}

impl UnitaryMatrix {
    /// Builds and certifies a matrix, failing if `U†U` is further than `tol`
    /// from the identity.
    pub fn new(dim: usize, entries: Vec<Amplitude>, tol: f64) -> Result<Self> {
        let mut u = Self::uncertified(dim, entries)?;
        let dev = verify_unitary(&mut u, tol);
        if !u.certified {
            return Err(Error::Consistency(format!(
                "{dim}x{dim} matrix deviates from unitarity by {dev:e} (tolerance {tol:e})"
            )));
        }
        Ok(u)
    }

    /// Wraps entries without any unitarity check.
    pub fn uncertified(dim: usize, entries: Vec<Amplitude>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::domain(format!(
                "{} entries cannot form a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::domain("matrix entries must be finite"));
        }
        Ok(UnitaryMatrix {
            dim,
            entries,
            certified: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Amplitude]) -> Result<Vec<Amplitude>> {
        if v.len() != self.dim {
            return Err(Error::domain(format!(
                "vector of length {} does not match dimension {}",
                v.len(),
                self.dim
            )));
        }
        Ok(self
            .entries
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Matrix product `self · rhs`; the result is left uncertified.
    pub fn matmul(&self, rhs: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::domain("dimension mismatch in matrix product"));
        }
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                for j in 0..d {
                    out[i * d + j] += a * rhs.get(k, j);
                }
            }
        }
        UnitaryMatrix::uncertified(d, out)
    }
}

/// `max |(U†U − I)_{ij}|`, without touching the certification flag.
pub fn unitarity_deviation(u: &UnitaryMatrix) -> f64 {
    let d = u.dim;
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                acc += u.get(k, i).conj() * u.get(k, j);
            }
            if i == j {
                acc -= 1.0;
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

/// Measures the deviation of `U†U` from the identity and sets the
/// certification flag iff it is below `tol`.
pub fn verify_unitary(u: &mut UnitaryMatrix, tol: f64) -> f64 {
    let dev = unitarity_deviation(u);
    u.certified = dev < tol;
    dev
}

/// The N×N DFT: `u_ij = ω_N^{ij} / √N`.
pub fn strategy_unitary(n: usize) -> Result<UnitaryMatrix> {
    if n == 0 {
        return Err(Error::domain("strategy dimension must be at least 1"));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let entries = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| omega_unchecked(n as u64, (i * j % n) as i64) * scale)
        .collect();
    UnitaryMatrix::new(n, entries, UNITARY_EPS)
}

pub fn identity(dim: usize) -> UnitaryMatrix {
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        entries[i * dim + i] = Complex64::new(1.0, 0.0);
    }
    UnitaryMatrix {
        dim,
        entries,
        certified: true,
    }
}

/// `H = [[1, 1], [1, −1]] / √2`, the two-road strategy.
pub fn hadamard() -> UnitaryMatrix {
    real_2x2([1.0, 1.0, 1.0, -1.0])
}

/// `R = [[1, 1], [−1, 1]] / √2` from the two-trucker circuit.
pub fn r_gate() -> UnitaryMatrix {
    real_2x2([1.0, 1.0, -1.0, 1.0])
}

fn real_2x2(signs: [f64; 4]) -> UnitaryMatrix {
    UnitaryMatrix {
        dim: 2,
        entries: signs
            .iter()
            .map(|&s| Complex64::new(s * FRAC_1_SQRT_2, 0.0))
            .collect(),
        certified: true,
    }
}

/// Flat index of `|k k … k⟩` among `d^P` states.
pub(crate) fn diagonal_index(players: usize, d: usize, k: usize) -> usize {
    (0..players).fold(0, |acc, _| acc * d + k)
}

/// The gate that carries `|0…0⟩` to `Σ_k ω_N^{kp} |k…k⟩ / √N`.
///
/// Only its action on `|0…0⟩` is pinned down, so it is kept implicit. An
/// explicit matrix for small spaces is available from [`Self::to_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreparationUnitary {
    n: usize,
    p: usize,
}

impl PreparationUnitary {
    /// `p` may be any integer; only its residue mod `n` matters.
    pub fn new(n: usize, p: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("preparation needs at least two players"));
        }
        let p = (p as i128).rem_euclid(n as i128) as usize;
        Ok(PreparationUnitary { n, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `(index, amplitude)` for the `n` nonzero entries of the prepared state.
    pub fn target_entries(&self) -> impl Iterator<Item = (usize, Amplitude)> + '_ {
        let scale = 1.0 / (self.n as f64).sqrt();
        (0..self.n).map(move |k| {
            let phase = omega_unchecked(self.n as u64, ((k * self.p) % self.n) as i64);
            (diagonal_index(self.n, self.n, k), phase * scale)
        })
    }

    /// The state obtained by acting on `|0…0⟩`.
    pub fn prepare(&self, cap: u128) -> Result<StateVector> {
        let mut s = StateVector::zeros(self.n, self.n, cap)?;
        let amps = s.amplitudes_mut();
        for (idx, a) in self.target_entries() {
            amps[idx] = a;
        }
        Ok(s)
    }

    /// A full `N^N × N^N` unitary whose first column is the prepared state.
    ///
    /// The remaining columns come from Gram–Schmidt over the standard basis
    /// in index order, so the result is deterministic.
    pub fn to_matrix(&self, cap: u128) -> Result<UnitaryMatrix> {
        let requested = space_size(self.n, self.n).unwrap_or(u128::MAX);
        if requested > cap {
            return Err(Error::Capacity {
                what: "explicit preparation matrix",
                requested,
                cap,
            });
        }
        let dim = requested as usize;
        let mut target = vec![Complex64::new(0.0, 0.0); dim];
        for (idx, a) in self.target_entries() {
            target[idx] = a;
        }
        let mut columns: Vec<Vec<Amplitude>> = Vec::with_capacity(dim);
        columns.push(target);
        for e in 0..dim {
            if columns.len() == dim {
                break;
            }
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[e] = Complex64::new(1.0, 0.0);
            // Two passes of modified Gram–Schmidt keep the basis orthogonal
            // to machine precision.
            for _ in 0..2 {
                for q in &columns {
                    let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    if proj.norm() > 0.0 {
                        for (vi, qi) in v.iter_mut().zip(q) {
                            *vi -= proj * qi;
                        }
                    }
                }
            }
            let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                columns.push(v.into_iter().map(|a| a / norm).collect());
            }
        }
        if columns.len() != dim {
            return Err(Error::Consistency(format!(
                "orthonormal completion produced {} of {dim} columns",
                columns.len()
            )));
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                entries[i * dim + j] = v;
            }
        }
        UnitaryMatrix::new(dim, entries, 1e-10)
    }
}
