//! Serializable report shapes. Field names here are the JSON schema.

use qgame_core::{GameReport, OutcomeClass, SweepRow};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigView {
    pub n: usize,
    pub p: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstBest {
    pub p_worst: f64,
    pub p_best: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeView {
    pub digits: Vec<usize>,
    pub m: usize,
    pub probability: f64,
    pub class: OutcomeClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub config: ConfigView,
    pub engine: String,
    pub quantum: WorstBest,
    pub classical: WorstBest,
    pub best_ratio: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_discrepancy: Option<f64>,
    pub outcome_count: u128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<Vec<OutcomeView>>,
}

impl SimulationReport {
    /// `list_outcomes` decides whether the per-outcome table is carried over.
    pub fn from_game(
        report: &GameReport,
        engine: &str,
        list_outcomes: bool,
        raw: bool,
        max_discrepancy: Option<f64>,
    ) -> Self {
        let outcomes = report
            .per_outcome
            .as_ref()
            .filter(|_| list_outcomes)
            .map(|recs| {
                recs.iter()
                    .map(|r| OutcomeView {
                        digits: r.outcome.digits().to_vec(),
                        m: r.phase_sum_m,
                        probability: r.probability,
                        class: r.class,
                        raw: raw.then_some(r.raw_probability),
                    })
                    .collect()
            });
        SimulationReport {
            config: ConfigView {
                n: report.config.n(),
                p: report.config.p(),
            },
            engine: engine.to_string(),
            quantum: WorstBest {
                p_worst: report.p_worst_quantum,
                p_best: report.p_best_quantum,
            },
            classical: WorstBest {
                p_worst: report.p_worst_classical,
                p_best: report.p_best_classical,
            },
            best_ratio: report.best_ratio,
            max_discrepancy,
            outcome_count: report.config.outcome_count(),
            outcomes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: usize,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalStat {
    pub analytic: f64,
    pub empirical: f64,
    pub count: u64,
    pub abs_deviation: f64,
    /// Binomial standard error `√(q(1−q)/trials)` at the analytic `q`.
    pub sigma: f64,
}

impl ClassicalStat {
    pub fn new(analytic: f64, count: u64, trials: u64) -> Self {
        let empirical = count as f64 / trials as f64;
        ClassicalStat {
            analytic,
            empirical,
            count,
            abs_deviation: (empirical - analytic).abs(),
            sigma: (analytic * (1.0 - analytic) / trials as f64).sqrt(),
        }
    }

    /// Deviation in units of `sigma`; zero when the outcome is deterministic.
    pub fn z_score(&self) -> f64 {
        if self.sigma == 0.0 {
            if self.abs_deviation == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.abs_deviation / self.sigma
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalReport {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub generator: String,
    pub worst: ClassicalStat,
    pub best: ClassicalStat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    pub passed: bool,
    /// The measured quantity, e.g. a deviation or a count of violations.
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n_max: usize,
    pub passed: bool,
    pub failures: usize,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub n: usize,
    pub p_worst_classical: f64,
    /// At `p = 1`.
    pub p_worst_quantum: f64,
    pub p_best_classical: f64,
    /// At `p = n(n−1)/2 mod n`.
    pub p_best_quantum: f64,
    pub best_phase: usize,
    pub best_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
}
