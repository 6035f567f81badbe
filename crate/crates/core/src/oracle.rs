//! Independent reference computations.
//!
//! Nothing here reuses the gate matrices or the geometric-sum shortcut of the
//! closed form; agreement with [`crate::game`] is only meaningful because the
//! code paths are separate.

use num_complex::Complex64;
use num_rational::Ratio;
use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::amplitude::{omega, Amplitude};
use crate::error::{Error, Result};
use crate::statevector::{space_size, OutcomeTuple};

/// Largest `n` accepted by [`brute_force_amplitude`].
pub const BRUTE_FORCE_MAX_N: usize = 8;

/// Largest `n^n` enumerated by [`exhaustive_classical`].
pub const EXHAUSTIVE_CAP: u128 = 100_000_000;

/// Name of the generator behind [`classical_monte_carlo`].
pub const MONTE_CARLO_GENERATOR: &str = "ChaCha12";

/// Coefficient of `|j₀ … j_{n−1}⟩` in `U^{⊗n} Σ_k ω^{kp}|k…k⟩/√n`, summed
/// term by term: `(1/√n) Σ_k ω^{kp} Π_t u_{k j_t}` with every `u_{kj}`
/// rebuilt from [`omega`].
pub fn brute_force_amplitude(n: usize, p: i64, outcome: &OutcomeTuple) -> Result<Amplitude> {
    if !(2..=BRUTE_FORCE_MAX_N).contains(&n) {
        return Err(Error::domain(format!(
            "brute force supports 2 <= n <= {BRUTE_FORCE_MAX_N}, got {n}"
        )));
    }
    outcome.check(n, n)?;
    let nu = n as u64;
    let ni = n as i64;
    let scale = 1.0 / (n as f64).sqrt();
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..ni {
        let mut term = omega(nu, k * p.rem_euclid(ni))?;
        for &j in outcome.digits() {
            let u_kj = omega(nu, k * j as i64)? * scale;
            term *= u_kj;
        }
        total += term;
    }
    Ok(total * scale)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub generator: String,
    pub worst_count: u64,
    pub best_count: u64,
    pub empirical_worst: f64,
    pub empirical_best: f64,
}

/// Every trucker picks a road uniformly at random, `trials` times.
///
/// Deterministic for a fixed `(n, trials, seed)`.
pub fn classical_monte_carlo(n: usize, trials: u64, seed: u64) -> Result<MonteCarloResult> {
    if n < 2 {
        return Err(Error::domain(format!("the game needs n >= 2, got {n}")));
    }
    if trials == 0 {
        return Err(Error::domain("at least one trial is required"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // Uniform integer sampling uses widening multiply with rejection, so no
    // modulo bias.
    let road = Uniform::new(0usize, n).map_err(|e| Error::domain(e.to_string()))?;
    let mut seen = vec![false; n];
    let mut choices = vec![0usize; n];
    let (mut worst, mut best) = (0u64, 0u64);
    for _ in 0..trials {
        for c in choices.iter_mut() {
            *c = road.sample(&mut rng);
        }
        if choices.iter().all(|&c| c == choices[0]) {
            worst += 1;
        } else {
            seen.fill(false);
            let distinct = choices
                .iter()
                .all(|&c| !std::mem::replace(&mut seen[c], true));
            if distinct {
                best += 1;
            }
        }
    }
    Ok(MonteCarloResult {
        n,
        trials,
        seed,
        generator: MONTE_CARLO_GENERATOR.to_string(),
        worst_count: worst,
        best_count: best,
        empirical_worst: worst as f64 / trials as f64,
        empirical_best: best as f64 / trials as f64,
    })
}

/// Counts from walking every one of the `n^n` classical outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalEnumeration {
    pub total: u128,
    pub worst_count: u128,
    pub best_count: u128,
}

impl ClassicalEnumeration {
    pub fn worst(&self) -> Ratio<u128> {
        Ratio::new(self.worst_count, self.total)
    }

    pub fn best(&self) -> Ratio<u128> {
        Ratio::new(self.best_count, self.total)
    }

    pub fn worst_probability(&self) -> f64 {
        self.worst_count as f64 / self.total as f64
    }

    pub fn best_probability(&self) -> f64 {
        self.best_count as f64 / self.total as f64
    }
}

/// Enumerates all `n^n` equally likely road assignments.
pub fn exhaustive_classical(n: usize) -> Result<ClassicalEnumeration> {
    if n < 2 {
        return Err(Error::domain(format!("the game needs n >= 2, got {n}")));
    }
    let total = space_size(n, n).unwrap_or(u128::MAX);
    if total > EXHAUSTIVE_CAP {
        return Err(Error::Capacity {
            what: "classical enumeration",
            requested: total,
            cap: EXHAUSTIVE_CAP,
        });
    }
    let mut digits = vec![0usize; n];
    let mut seen = vec![false; n];
    let (mut worst, mut best) = (0u128, 0u128);
    loop {
        if digits.iter().all(|&d| d == digits[0]) {
            worst += 1;
        }
        seen.fill(false);
        if digits
            .iter()
            .all(|&d| !std::mem::replace(&mut seen[d], true))
        {
            best += 1;
        }
        // Odometer increment, last digit fastest.
        let mut t = n;
        loop {
            if t == 0 {
                return Ok(ClassicalEnumeration {
                    total,
                    worst_count: worst,
                    best_count: best,
                });
            }
            t -= 1;
            digits[t] += 1;
            if digits[t] < n {
                break;
            }
            digits[t] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn o(d: &[usize]) -> OutcomeTuple {
        OutcomeTuple(d.to_vec())
    }

    #[test]
    fn brute_force_examples() {
        let a = brute_force_amplitude(2, 1, &o(&[0, 1])).unwrap();
        assert_abs_diff_eq!(a.norm_sqr(), 0.5, epsilon = 1e-15);
        let a = brute_force_amplitude(3, 1, &o(&[1, 1, 1])).unwrap();
        assert!(a.norm() < 1e-14);
        let a = brute_force_amplitude(4, 2, &o(&[0, 1, 2, 3])).unwrap();
        assert_abs_diff_eq!(a.norm_sqr(), 1.0 / 64.0, epsilon = 1e-15);
    }

    #[test]
    fn brute_force_rejects_bad_input() {
        assert!(brute_force_amplitude(9, 0, &o(&[0; 9])).is_err());
        assert!(brute_force_amplitude(3, 0, &o(&[0, 0])).is_err());
        assert!(brute_force_amplitude(3, 0, &o(&[0, 0, 3])).is_err());
    }

    #[test]
    fn brute_force_normalizes() {
        for n in 2..=5usize {
            for p in 0..n as i64 {
                let total: f64 = (0..n.pow(n as u32))
                    .map(|i| {
                        let t = crate::statevector::outcome_of(i, n, n).unwrap();
                        brute_force_amplitude(n, p, &t).unwrap().norm_sqr()
                    })
                    .sum();
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn exhaustive_examples() {
        let e = exhaustive_classical(2).unwrap();
        assert_eq!((e.worst_probability(), e.best_probability()), (0.5, 0.5));
        let e = exhaustive_classical(3).unwrap();
        assert_eq!(e.worst(), Ratio::new(1, 9));
        assert_eq!(e.best(), Ratio::new(2, 9));
        let e = exhaustive_classical(4).unwrap();
        assert_eq!((e.worst_count, e.best_count, e.total), (4, 24, 256));
        assert!(exhaustive_classical(1).is_err());
        assert!(matches!(
            exhaustive_classical(9),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let a = classical_monte_carlo(2, 1, 99).unwrap();
        let b = classical_monte_carlo(2, 1, 99).unwrap();
        assert_eq!(a, b);
        let a = classical_monte_carlo(4, 10_000, 7).unwrap();
        let b = classical_monte_carlo(4, 10_000, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.generator, MONTE_CARLO_GENERATOR);
    }

    #[test]
    fn monte_carlo_counts_are_consistent() {
        let r = classical_monte_carlo(3, 5_000, 3).unwrap();
        assert!(r.worst_count + r.best_count <= r.trials);
        assert_eq!(r.empirical_worst, r.worst_count as f64 / 5_000.0);
        assert_eq!(r.empirical_best, r.best_count as f64 / 5_000.0);
    }

    #[test]
    fn monte_carlo_two_roads_never_distinct_and_same() {
        // With two roads every trial is either worst or best.
        let r = classical_monte_carlo(2, 1_000, 11).unwrap();
        assert_eq!(r.worst_count + r.best_count, 1_000);
    }

    #[test]
    fn monte_carlo_rejects_bad_input() {
        assert!(classical_monte_carlo(1, 10, 0).is_err());
        assert!(classical_monte_carlo(3, 0, 0).is_err());
    }
}
