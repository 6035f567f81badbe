//! The truckers game: N players, N roads, one shared GHZ-type state.
//!
//! Every player applies the same DFT strategy. An outcome
//! `(j₀, …, j_{N−1})` survives iff `m = Σ j_t + p ≡ 0 (mod N)`, and every
//! surviving outcome has probability `N^{1−N}`. The dense engine reaches that
//! by brute linear algebra; the closed form reads it off directly.

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::amplitude::{amp_norm_sq, Amplitude, Tolerance};
use crate::error::{Error, Result};
use crate::gates::{strategy_unitary, PreparationUnitary, UnitaryMatrix};
use crate::statevector::{outcome_of, space_size, OutcomeTuple, StateVector, DEFAULT_DENSE_CAP};

/// Upper bound on `n` for every game operation. `n·n!` and `n^n` must fit in
/// a `u128` for the exact rational summaries.
pub const MAX_PLAYERS: usize = 20;

/// One game instance: `n` truckers, `n` roads, phase parameter `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    n: usize,
    p: usize,
    pub tol: Tolerance,
    pub dense_cap: u128,
}

impl GameConfig {
    /// `p` may be any integer and is stored reduced mod `n`.
    pub fn new(n: usize, p: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("the game needs n >= 2, got {n}")));
        }
        if n > MAX_PLAYERS {
            return Err(Error::domain(format!(
                "n = {n} exceeds the supported maximum of {MAX_PLAYERS}"
            )));
        }
        Ok(GameConfig {
            n,
            p: (p as i128).rem_euclid(n as i128) as usize,
            tol: Tolerance::default(),
            dense_cap: DEFAULT_DENSE_CAP,
        })
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Result<Self> {
        tol.validate()?;
        self.tol = tol;
        Ok(self)
    }

    pub fn with_dense_cap(mut self, cap: u128) -> Self {
        self.dense_cap = cap;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of outcomes, `n^n`.
    pub fn outcome_count(&self) -> u128 {
        space_size(self.n, self.n).expect("n^n fits in u128 for n <= MAX_PLAYERS")
    }

    /// The phase that maximizes the best-outcome probability, `n(n−1)/2 mod n`.
    pub fn best_phase(n: usize) -> usize {
        (n * (n - 1) / 2) % n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeClass {
    /// Every truck on one road.
    Worst,
    /// One truck per road.
    Best,
    Intermediate,
}

impl OutcomeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutcomeClass::Worst => "worst",
            OutcomeClass::Best => "best",
            OutcomeClass::Intermediate => "intermediate",
        }
    }
}

/// Trucks per road.
pub fn occupancy(outcome: &OutcomeTuple, roads: usize) -> Vec<usize> {
    let mut occ = vec![0usize; roads];
    for &j in outcome.digits() {
        occ[j] += 1;
    }
    occ
}

pub fn classify(occupancy: &[usize], players: usize) -> OutcomeClass {
    if occupancy.contains(&players) {
        OutcomeClass::Worst
    } else if occupancy.iter().all(|&c| c == 1) {
        OutcomeClass::Best
    } else {
        OutcomeClass::Intermediate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub outcome: OutcomeTuple,
    /// `Σ digits + p`, with `p` already reduced.
    pub phase_sum_m: usize,
    pub amplitude: Amplitude,
    /// Probability after pruning.
    pub probability: f64,
    /// `|amplitude|²` before pruning.
    pub raw_probability: f64,
    pub occupancy: Vec<usize>,
    pub class: OutcomeClass,
}

impl OutcomeRecord {
    fn new(cfg: &GameConfig, outcome: OutcomeTuple, amplitude: Amplitude) -> Self {
        let raw = amp_norm_sq(amplitude);
        let probability = if raw < cfg.tol.eps_prune { 0.0 } else { raw };
        let occupancy = occupancy(&outcome, cfg.n);
        let class = classify(&occupancy, cfg.n);
        OutcomeRecord {
            phase_sum_m: outcome.digits().iter().sum::<usize>() + cfg.p,
            outcome,
            amplitude,
            probability,
            raw_probability: raw,
            occupancy,
            class,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Dense,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameReport {
    pub config: GameConfig,
    pub engine: Engine,
    pub p_worst_quantum: f64,
    pub p_best_quantum: f64,
    pub p_worst_classical: f64,
    pub p_best_classical: f64,
    /// `p_best_quantum / p_best_classical`.
    pub best_ratio: f64,
    /// Every outcome in index order, when it was enumerated.
    pub per_outcome: Option<Vec<OutcomeRecord>>,
}

impl GameReport {
    fn assemble(
        config: GameConfig,
        engine: Engine,
        p_worst_quantum: f64,
        p_best_quantum: f64,
        per_outcome: Option<Vec<OutcomeRecord>>,
    ) -> Self {
        let p_worst_classical = classical_worst_probability(config.n);
        let p_best_classical = classical_best_probability(config.n);
        GameReport {
            config,
            engine,
            p_worst_quantum,
            p_best_quantum,
            p_worst_classical,
            p_best_classical,
            best_ratio: p_best_quantum / p_best_classical,
            per_outcome,
        }
    }

    /// Largest per-outcome probability gap between two enumerated reports,
    /// compared on unpruned values.
    pub fn max_discrepancy(&self, other: &GameReport) -> Option<f64> {
        let a = self.per_outcome.as_ref()?;
        let b = other.per_outcome.as_ref()?;
        if a.len() != b.len() {
            return None;
        }
        Some(
            a.iter()
                .zip(b)
                .map(|(x, y)| (x.raw_probability - y.raw_probability).abs())
                .fold(0.0, f64::max),
        )
    }
}

/// `Σ_k ω^{kp} |k…k⟩ / √n`.
pub fn build_initial_state(cfg: &GameConfig) -> Result<StateVector> {
    PreparationUnitary::new(cfg.n, cfg.p as i64)?.prepare(cfg.dense_cap)
}

/// Above this many outcomes [`run_dense`] reports aggregates only.
pub const DENSE_RECORD_LIMIT: u128 = 1 << 20;

/// Dense engine with the DFT strategy on every player.
///
/// Per-outcome records are kept when there are at most
/// [`DENSE_RECORD_LIMIT`] outcomes.
pub fn run_dense(cfg: &GameConfig) -> Result<GameReport> {
    let u = strategy_unitary(cfg.n)?;
    run_dense_with(cfg, &u, cfg.outcome_count() <= DENSE_RECORD_LIMIT)
}

/// Dense engine with an arbitrary common strategy.
pub fn run_dense_with(
    cfg: &GameConfig,
    strategy: &UnitaryMatrix,
    keep_outcomes: bool,
) -> Result<GameReport> {
    let state = final_state(cfg, strategy)?;
    Ok(dense_report(cfg, &state, keep_outcomes))
}

/// `strategy^{⊗n}` applied to the initial state.
pub fn final_state(cfg: &GameConfig, strategy: &UnitaryMatrix) -> Result<StateVector> {
    if strategy.dim() != cfg.n {
        return Err(Error::domain(format!(
            "strategy acts on {} levels, the game has {} roads",
            strategy.dim(),
            cfg.n
        )));
    }
    let mut state = build_initial_state(cfg)?;
    state.apply_to_all_players(strategy)?;
    Ok(state)
}

/// Classifies every amplitude of a final state and sums the worst and best
/// probabilities.
pub fn dense_report(cfg: &GameConfig, state: &StateVector, keep_outcomes: bool) -> GameReport {
    let mut worst = 0.0;
    let mut best = 0.0;
    let mut records = Vec::new();
    let mut walk = Odometer::new(cfg.n);
    for &a in state.amplitudes() {
        let raw = amp_norm_sq(a);
        let probability = if raw < cfg.tol.eps_prune { 0.0 } else { raw };
        match classify(&walk.occupancy, cfg.n) {
            OutcomeClass::Worst => worst += probability,
            OutcomeClass::Best => best += probability,
            OutcomeClass::Intermediate => {}
        }
        if keep_outcomes {
            records.push(OutcomeRecord::new(
                cfg,
                OutcomeTuple(walk.digits.clone()),
                a,
            ));
        }
        walk.advance();
    }
    GameReport::assemble(
        *cfg,
        Engine::Dense,
        worst,
        best,
        keep_outcomes.then_some(records),
    )
}

/// Largest `| |amp|² − closed-form probability |` over a final state, on
/// unpruned values.
pub fn closed_form_discrepancy(cfg: &GameConfig, state: &StateVector) -> f64 {
    let surviving = surviving_amplitude(cfg.n).powi(2);
    let mut walk = Odometer::new(cfg.n);
    let mut worst = 0.0f64;
    for &a in state.amplitudes() {
        let expected = if (walk.sum + cfg.p).is_multiple_of(cfg.n) {
            surviving
        } else {
            0.0
        };
        worst = worst.max((amp_norm_sq(a) - expected).abs());
        walk.advance();
    }
    worst
}

/// Walks outcomes in index order, tracking digit sum and road occupancy.
struct Odometer {
    digits: Vec<usize>,
    occupancy: Vec<usize>,
    sum: usize,
}

impl Odometer {
    fn new(n: usize) -> Self {
        let mut occupancy = vec![0; n];
        occupancy[0] = n;
        Odometer {
            digits: vec![0; n],
            occupancy,
            sum: 0,
        }
    }

    fn advance(&mut self) {
        let n = self.occupancy.len();
        for t in (0..self.digits.len()).rev() {
            let old = self.digits[t];
            self.occupancy[old] -= 1;
            if old + 1 < n {
                self.digits[t] = old + 1;
                self.occupancy[old + 1] += 1;
                self.sum += 1;
                return;
            }
            self.digits[t] = 0;
            self.occupancy[0] += 1;
            self.sum -= old;
        }
    }
}

/// Magnitude of every surviving coefficient, `n · (1/√n)^{n+1}`.
fn surviving_amplitude(n: usize) -> f64 {
    (n as f64) * (n as f64).powf(-((n + 1) as f64) / 2.0)
}

/// Coefficient of one outcome, from the geometric sum over roots of unity.
pub fn closed_form_amplitude(cfg: &GameConfig, outcome: &OutcomeTuple) -> Result<OutcomeRecord> {
    outcome.check(cfg.n, cfg.n)?;
    let m = outcome.digits().iter().sum::<usize>() + cfg.p;
    let amplitude = if m.is_multiple_of(cfg.n) {
        Complex64::new(surviving_amplitude(cfg.n), 0.0)
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(OutcomeRecord::new(cfg, outcome.clone(), amplitude))
}

fn ratio_to_f64(r: Ratio<u128>) -> f64 {
    r.to_f64().expect("ratio of u128 converts to f64")
}

fn checked_n(n: usize) -> Result<u128> {
    if !(2..=MAX_PLAYERS).contains(&n) {
        return Err(Error::domain(format!(
            "n must lie in 2..={MAX_PLAYERS}, got {n}"
        )));
    }
    Ok(n as u128)
}

fn pow_n(n: u128) -> u128 {
    n.pow(n as u32)
}

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

/// `n / n^n` as an exact fraction.
pub fn classical_worst_ratio(n: usize) -> Result<Ratio<u128>> {
    let n = checked_n(n)?;
    Ok(Ratio::new(n, pow_n(n)))
}

/// `n! / n^n` as an exact fraction.
pub fn classical_best_ratio(n: usize) -> Result<Ratio<u128>> {
    let n = checked_n(n)?;
    Ok(Ratio::new(factorial(n), pow_n(n)))
}

/// `n · n! / n^n` as an exact fraction: `n!` surviving permutations, each
/// with probability `n^{1−n}`.
pub fn quantum_best_ratio(n: usize) -> Result<Ratio<u128>> {
    let n = checked_n(n)?;
    Ok(Ratio::new(factorial(n), 1) * Ratio::new(1, pow_n(n) / n))
}

/// Probability that every trucker picks the same road when choosing uniformly.
///
/// Panics if `n` is outside `2..=MAX_PLAYERS`.
pub fn classical_worst_probability(n: usize) -> f64 {
    ratio_to_f64(classical_worst_ratio(n).expect("n within game range"))
}

/// Probability that all truckers pick distinct roads when choosing uniformly.
///
/// Panics if `n` is outside `2..=MAX_PLAYERS`.
pub fn classical_best_probability(n: usize) -> f64 {
    ratio_to_f64(classical_best_ratio(n).expect("n within game range"))
}

/// Best-outcome probability at `p ≡ n(n−1)/2`.
///
/// Panics if `n` is outside `2..=MAX_PLAYERS`.
pub fn quantum_best_probability(n: usize) -> f64 {
    ratio_to_f64(quantum_best_ratio(n).expect("n within game range"))
}

/// Exact `(p_worst, p_best)` from the selection rule alone.
fn closed_form_summary(n: usize, p: usize) -> (Ratio<u128>, Ratio<u128>) {
    let nn = n as u128;
    let single = Ratio::new(1, pow_n(nn) / nn);
    // (j,…,j) has m = jn + p ≡ p.
    let worst = if p.is_multiple_of(n) {
        single * nn
    } else {
        Ratio::from(0)
    };
    // Any permutation has digit sum n(n−1)/2.
    let best = if (n * (n - 1) / 2 + p).is_multiple_of(n) {
        single * factorial(nn)
    } else {
        Ratio::from(0)
    };
    (worst, best)
}

/// Summary statistics from the closed form.
///
/// With `enumerate` set, every outcome is evaluated and listed; this is
/// bounded by `cfg.dense_cap`. Without it only the aggregate probabilities
/// are produced, which works for any supported `n`.
pub fn closed_form_report(cfg: &GameConfig, enumerate: bool) -> Result<GameReport> {
    let (worst, best) = closed_form_summary(cfg.n, cfg.p);
    let per_outcome = if enumerate {
        let count = cfg.outcome_count();
        if count > cfg.dense_cap {
            return Err(Error::Capacity {
                what: "outcome listing",
                requested: count,
                cap: cfg.dense_cap,
            });
        }
        let records = (0..count as usize)
            .map(|i| closed_form_amplitude(cfg, &outcome_of(i, cfg.n, cfg.n)?))
            .collect::<Result<Vec<_>>>()?;
        Some(records)
    } else {
        None
    };
    Ok(GameReport::assemble(
        *cfg,
        Engine::ClosedForm,
        ratio_to_f64(worst),
        ratio_to_f64(best),
        per_outcome,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: usize,
    pub p_worst_quantum: f64,
    pub p_best_quantum: f64,
    pub p_worst_classical: f64,
    pub p_best_classical: f64,
}

/// Worst/best probabilities for every `p` in `0..n`, closed form only.
pub fn sweep_phase(n: usize) -> Result<Vec<SweepRow>> {
    checked_n(n)?;
    let p_worst_classical = classical_worst_probability(n);
    let p_best_classical = classical_best_probability(n);
    Ok((0..n)
        .map(|p| {
            let (worst, best) = closed_form_summary(n, p);
            SweepRow {
                p,
                p_worst_quantum: ratio_to_f64(worst),
                p_best_quantum: ratio_to_f64(best),
                p_worst_classical,
                p_best_classical,
            }
        })
        .collect())
}

/// Maps a road's occupancy to the payoff of each trucker on it.
pub trait Payoff {
    fn payoff(&self, occupancy: usize) -> f64;
}

impl<F: Fn(usize) -> f64> Payoff for F {
    fn payoff(&self, occupancy: usize) -> f64 {
        self(occupancy)
    }
}

/// `1 / c` for a road shared by `c` trucks.
#[derive(Debug, Clone, Copy, Default)]
pub struct InverseOccupancy;

impl Payoff for InverseOccupancy {
    fn payoff(&self, occupancy: usize) -> f64 {
        1.0 / occupancy as f64
    }
}

/// Per-trucker payoff under the default `1/c` rule.
pub fn congestion_payoffs(outcome: &OutcomeTuple, roads: usize) -> Result<Vec<f64>> {
    congestion_payoffs_with(outcome, roads, &InverseOccupancy)
}

pub fn congestion_payoffs_with<P: Payoff + ?Sized>(
    outcome: &OutcomeTuple,
    roads: usize,
    rule: &P,
) -> Result<Vec<f64>> {
    outcome.check(outcome.players(), roads)?;
    let occ = occupancy(outcome, roads);
    Ok(outcome
        .digits()
        .iter()
        .map(|&j| rule.payoff(occ[j]))
        .collect())
}
