//! Dense multi-qudit states over big-endian mixed-radix indices.
//!
//! Player 0 is the most significant digit, so the amplitude of
//! `|j₀ j₁ … j_{P−1}⟩` lives at `Σ_t j_t · d^{P−1−t}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplitude::{amp_norm_sq, Amplitude};
use crate::error::{Error, Result};
use crate::gates::UnitaryMatrix;

/// Largest number of amplitudes a dense state may allocate unless overridden.
pub const DEFAULT_DENSE_CAP: u128 = 100_000_000;

/// Below this length slot application always runs on the calling thread.
const PARALLEL_MIN_LEN: usize = 1 << 14;

/// One road choice per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OutcomeTuple(pub Vec<usize>);

impl OutcomeTuple {
    /// Checks that every digit is below `d`.
    pub fn new(digits: Vec<usize>, d: usize) -> Result<Self> {
        let t = OutcomeTuple(digits);
        t.check(t.players(), d)?;
        Ok(t)
    }

    pub fn digits(&self) -> &[usize] {
        &self.0
    }

    pub fn players(&self) -> usize {
        self.0.len()
    }

    pub(crate) fn check(&self, players: usize, d: usize) -> Result<()> {
        if self.0.len() != players {
            return Err(Error::domain(format!(
                "outcome has {} digits, expected {players}",
                self.0.len()
            )));
        }
        if let Some((t, &j)) = self.0.iter().enumerate().find(|(_, &j)| j >= d) {
            return Err(Error::domain(format!(
                "digit {j} of player {t} is out of range for d = {d}"
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for OutcomeTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("(")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str(")")
    }
}

/// `d^P` as an exact integer, or `None` on overflow of `u128`.
pub fn space_size(players: usize, d: usize) -> Option<u128> {
    let exp = u32::try_from(players).ok()?;
    (d as u128).checked_pow(exp)
}

fn check_cap(players: usize, d: usize, cap: u128) -> Result<usize> {
    let requested = space_size(players, d).unwrap_or(u128::MAX);
    if requested > cap || requested > usize::MAX as u128 {
        return Err(Error::Capacity {
            what: "dense state",
            requested,
            cap,
        });
    }
    Ok(requested as usize)
}

/// Big-endian mixed-radix index of an outcome.
pub fn index_of(outcome: &OutcomeTuple, d: usize) -> Result<usize> {
    outcome.check(outcome.players(), d)?;
    outcome.0.iter().try_fold(0usize, |acc, &j| {
        acc.checked_mul(d)
            .and_then(|v| v.checked_add(j))
            .ok_or_else(|| Error::domain("outcome index overflows the address space"))
    })
}

/// Inverse of [`index_of`].
pub fn outcome_of(index: usize, players: usize, d: usize) -> Result<OutcomeTuple> {
    if d == 0 {
        return Err(Error::domain("d must be at least 1"));
    }
    let size = space_size(players, d).unwrap_or(u128::MAX);
    if index as u128 >= size {
        return Err(Error::domain(format!(
            "index {index} out of range for {players} players with d = {d}"
        )));
    }
    let mut digits = vec![0usize; players];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = rest % d;
        rest /= d;
    }
    Ok(OutcomeTuple(digits))
}

/// Selects how slot updates are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    /// Single-threaded reference path.
    Serial,
    /// Splits independent index groups across the rayon pool for large states.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    players: usize,
    dim: usize,
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// The all-zero vector (not normalized); callers fill it in.
    pub fn zeros(players: usize, dim: usize, cap: u128) -> Result<Self> {
        if players == 0 || dim == 0 {
            return Err(Error::domain("players and d must both be positive"));
        }
        let len = check_cap(players, dim, cap)?;
        Ok(StateVector {
            players,
            dim,
            amps: vec![Complex64::new(0.0, 0.0); len],
        })
    }

    /// `|outcome⟩`.
    pub fn basis_state(
        players: usize,
        dim: usize,
        outcome: &OutcomeTuple,
        cap: u128,
    ) -> Result<Self> {
        outcome.check(players, dim)?;
        let mut s = Self::zeros(players, dim, cap)?;
        let idx = index_of(outcome, dim)?;
        s.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Wraps raw amplitudes, checking only the length.
    pub fn from_amplitudes(players: usize, dim: usize, amps: Vec<Amplitude>) -> Result<Self> {
        let expected = space_size(players, dim);
        if players == 0 || dim == 0 || expected != Some(amps.len() as u128) {
            return Err(Error::domain(format!(
                "{} amplitudes do not match {players} players with d = {dim}",
                amps.len()
            )));
        }
        Ok(StateVector { players, dim, amps })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Amplitude] {
        &mut self.amps
    }

    pub fn amplitude(&self, outcome: &OutcomeTuple) -> Result<Amplitude> {
        outcome.check(self.players, self.dim)?;
        Ok(self.amps[index_of(outcome, self.dim)?])
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|&a| amp_norm_sq(a)).sum()
    }

    /// Applies `u` to one player's slot, identity on the others.
    pub fn apply_local_unitary(&mut self, player: usize, u: &UnitaryMatrix) -> Result<()> {
        self.apply_local_unitary_with(player, u, Exec::default())
    }

    pub fn apply_local_unitary_with(
        &mut self,
        player: usize,
        u: &UnitaryMatrix,
        exec: Exec,
    ) -> Result<()> {
        if player >= self.players {
            return Err(Error::domain(format!(
                "player {player} out of range for {} players",
                self.players
            )));
        }
        if u.dim() != self.dim {
            return Err(Error::domain(format!(
                "gate dimension {} does not match qudit dimension {}",
                u.dim(),
                self.dim
            )));
        }
        let d = self.dim;
        let stride = d.pow((self.players - 1 - player) as u32);
        let block = d * stride;
        let entries = u.entries();
        let run = |chunk: &mut [Amplitude]| apply_block(chunk, entries, d, stride);
        let blocks = self.amps.len() / block;
        if exec == Exec::Parallel && self.amps.len() >= PARALLEL_MIN_LEN && blocks > 1 {
            self.amps.par_chunks_mut(block).for_each(run);
        } else {
            self.amps.chunks_mut(block).for_each(run);
        }
        Ok(())
    }

    /// `U^{⊗P}`: the same gate on every slot, players 0 through P−1.
    pub fn apply_to_all_players(&mut self, u: &UnitaryMatrix) -> Result<()> {
        self.apply_to_all_players_with(u, Exec::default())
    }

    pub fn apply_to_all_players_with(&mut self, u: &UnitaryMatrix, exec: Exec) -> Result<()> {
        for player in 0..self.players {
            self.apply_local_unitary_with(player, u, exec)?;
        }
        Ok(())
    }

    /// Born-rule probabilities with tiny values pruned to exact zero.
    pub fn distribution(&self, eps_prune: f64) -> OutcomeDistribution {
        let raw: Vec<f64> = self.amps.iter().map(|&a| amp_norm_sq(a)).collect();
        let probabilities = raw
            .iter()
            .map(|&q| if q < eps_prune { 0.0 } else { q })
            .collect();
        OutcomeDistribution {
            players: self.players,
            dim: self.dim,
            probabilities,
            raw,
        }
    }
}

/// Mixes the `d` amplitudes `off, off+stride, …` for every offset in one block.
fn apply_block(chunk: &mut [Amplitude], u: &[Amplitude], d: usize, stride: usize) {
    let mut gathered = vec![Complex64::new(0.0, 0.0); d];
    for off in 0..stride {
        for (k, g) in gathered.iter_mut().enumerate() {
            *g = chunk[off + k * stride];
        }
        for i in 0..d {
            let row = &u[i * d..(i + 1) * d];
            let mut acc = Complex64::new(0.0, 0.0);
            for (&uij, &g) in row.iter().zip(&gathered) {
                acc += uij * g;
            }
            chunk[off + i * stride] = acc;
        }
    }
}

/// Outcome probabilities in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    players: usize,
    dim: usize,
    probabilities: Vec<f64>,
    raw: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn players(&self) -> usize {
        self.players
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Pruned probability at a flat index.
    pub fn probability_at(&self, index: usize) -> f64 {
        self.probabilities[index]
    }

    /// Unpruned `|amp|²` at a flat index.
    pub fn raw_at(&self, index: usize) -> f64 {
        self.raw[index]
    }

    pub fn probability(&self, outcome: &OutcomeTuple) -> Result<f64> {
        outcome.check(self.players, self.dim)?;
        Ok(self.probabilities[index_of(outcome, self.dim)?])
    }

    pub fn raw(&self, outcome: &OutcomeTuple) -> Result<f64> {
        outcome.check(self.players, self.dim)?;
        Ok(self.raw[index_of(outcome, self.dim)?])
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `(outcome, probability)` for every non-pruned entry, in index order.
    pub fn support(&self) -> impl Iterator<Item = (OutcomeTuple, f64)> + '_ {
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(_, &q)| q > 0.0)
            .map(move |(i, &q)| {
                let o = outcome_of(i, self.players, self.dim).expect("index within range");
                (o, q)
            })
    }
}
