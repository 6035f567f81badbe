use qgame_core::game::{
    classical_best_ratio, classical_worst_ratio, closed_form_discrepancy, closed_form_report,
    dense_report, final_state, quantum_best_ratio, run_dense_with, MAX_PLAYERS,
};
use qgame_core::gates::unitarity_deviation;
use qgame_core::oracle::{brute_force_amplitude, exhaustive_classical};
use qgame_core::{
    classical_best_probability, classical_monte_carlo, classical_worst_probability,
    quantum_best_probability, strategy_unitary, sweep_phase, Error, GameConfig, UnitaryMatrix,
};

use crate::format::Render;
use crate::report::{
    CheckResult, ClassicalReport, ClassicalStat, CompareReport, CompareRow, SimulationReport,
    SweepReport, VerifyReport,
};
use crate::{
    Command, CommandOutput, EngineChoice, ExitStatus, RunRequest, DENSE_CAP_ENV,
    OUTCOME_LISTING_LIMIT,
};

/// Largest `n` for which `verify` runs the dense engine.
pub const VERIFY_DENSE_MAX_N: usize = 6;
/// Largest `n` for which `verify` runs the term-by-term oracle.
pub const VERIFY_BRUTE_MAX_N: usize = 5;
/// Largest `n` for which `verify` enumerates classical outcomes.
pub const VERIFY_EXHAUSTIVE_MAX_N: usize = 7;

/// `P_best^Q = n · P_best^C` in exact arithmetic.
fn exact_identity_holds(n: usize) -> bool {
    match (quantum_best_ratio(n), classical_best_ratio(n)) {
        (Ok(q), Ok(c)) => q == c * (n as u128),
        _ => false,
    }
}

pub fn run(req: &RunRequest) -> CommandOutput {
    match req.command {
        Command::Simulate => cmd_simulate(req),
        Command::Sweep => cmd_sweep(req),
        Command::Classical => cmd_classical(req),
        Command::Verify => cmd_verify(req),
        Command::Compare => cmd_compare(req),
    }
}

fn failure(e: &Error) -> CommandOutput {
    let mut msg = e.to_string();
    if matches!(e, Error::Capacity { .. }) {
        msg.push_str(&format!(
            " (raise it with {DENSE_CAP_ENV} or use --engine closed-form)"
        ));
    }
    CommandOutput::error(ExitStatus::from(e), msg)
}

fn require_game_n(n: usize) -> Result<(), CommandOutput> {
    if !(2..=MAX_PLAYERS).contains(&n) {
        return Err(CommandOutput::error(
            ExitStatus::Usage,
            format!("n must lie in 2..={MAX_PLAYERS}, got {n}"),
        ));
    }
    Ok(())
}

pub fn cmd_simulate(req: &RunRequest) -> CommandOutput {
    let cfg = match GameConfig::new(req.n, req.p) {
        Ok(c) => c.with_dense_cap(req.dense_cap),
        Err(e) => return failure(&e),
    };
    let list = req.full || cfg.outcome_count() <= OUTCOME_LISTING_LIMIT;
    let strategy = match strategy_unitary(cfg.n()) {
        Ok(u) => u,
        Err(e) => return failure(&e),
    };
    let result = match req.engine {
        EngineChoice::Dense => run_dense_with(&cfg, &strategy, list).map(|r| {
            (
                SimulationReport::from_game(&r, "dense", list, req.raw, None),
                None,
            )
        }),
        EngineChoice::ClosedForm => closed_form_report(&cfg, list).map(|r| {
            (
                SimulationReport::from_game(&r, "closed-form", list, req.raw, None),
                None,
            )
        }),
        EngineChoice::Both => final_state(&cfg, &strategy).and_then(|state| {
            let dense = dense_report(&cfg, &state, list);
            let closed = closed_form_report(&cfg, false)?;
            let aggregate = (dense.p_worst_quantum - closed.p_worst_quantum)
                .abs()
                .max((dense.p_best_quantum - closed.p_best_quantum).abs());
            let gap = closed_form_discrepancy(&cfg, &state).max(aggregate);
            let report = SimulationReport::from_game(&dense, "both", list, req.raw, Some(gap));
            Ok((report, Some(gap)))
        }),
    };
    match result {
        Ok((report, gap)) => {
            let mut out = CommandOutput::ok(report.render(req.format));
            if let Some(gap) = gap.filter(|g| g.is_nan() || *g >= cfg.tol.eps_crosscheck) {
                out.status = ExitStatus::Discrepancy;
                out.message = Some(format!(
                    "dense and closed-form engines disagree by {gap:e} (tolerance {:e})",
                    cfg.tol.eps_crosscheck
                ));
            }
            out
        }
        Err(e) => failure(&e),
    }
}

pub fn cmd_sweep(req: &RunRequest) -> CommandOutput {
    if let Err(out) = require_game_n(req.n) {
        return out;
    }
    match sweep_phase(req.n) {
        Ok(rows) => CommandOutput::ok(SweepReport { n: req.n, rows }.render(req.format)),
        Err(e) => failure(&e),
    }
}

pub fn cmd_classical(req: &RunRequest) -> CommandOutput {
    if let Err(out) = require_game_n(req.n) {
        return out;
    }
    let mc = match classical_monte_carlo(req.n, req.trials, req.seed) {
        Ok(mc) => mc,
        Err(e) => return failure(&e),
    };
    let report = ClassicalReport {
        n: mc.n,
        trials: mc.trials,
        seed: mc.seed,
        generator: mc.generator.clone(),
        worst: ClassicalStat::new(
            classical_worst_probability(req.n),
            mc.worst_count,
            mc.trials,
        ),
        best: ClassicalStat::new(classical_best_probability(req.n), mc.best_count, mc.trials),
    };
    CommandOutput::ok(report.render(req.format))
}

pub fn cmd_verify(req: &RunRequest) -> CommandOutput {
    cmd_verify_with(req, strategy_unitary)
}

/// `verify` against an arbitrary strategy constructor. Passing anything other
/// than [`strategy_unitary`] is a negative control.
pub fn cmd_verify_with(
    req: &RunRequest,
    strategy: impl Fn(usize) -> qgame_core::Result<UnitaryMatrix>,
) -> CommandOutput {
    if let Err(out) = require_game_n(req.n) {
        return out;
    }
    let mut checks = Vec::new();
    for n in 2..=req.n {
        verify_one(n, req.dense_cap, &strategy, &mut checks);
    }
    let failures = checks.iter().filter(|c| !c.passed).count();
    let report = VerifyReport {
        n_max: req.n,
        passed: failures == 0,
        failures,
        checks,
    };
    let mut out = CommandOutput::ok(report.render(req.format));
    if failures > 0 {
        out.status = ExitStatus::VerificationFailure;
        out.message = Some(format!("{failures} verification check(s) failed"));
    }
    out
}

fn check(name: &str, n: usize, p: Option<usize>, value: f64, threshold: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        n,
        p,
        passed: value < threshold,
        value,
        threshold,
    }
}

fn verify_one(
    n: usize,
    dense_cap: u128,
    strategy: &impl Fn(usize) -> qgame_core::Result<UnitaryMatrix>,
    checks: &mut Vec<CheckResult>,
) {
    let u = match strategy(n) {
        Ok(u) => u,
        Err(_) => {
            checks.push(check("strategy-construction", n, None, 1.0, 0.5));
            return;
        }
    };
    checks.push(check("unitarity", n, None, unitarity_deviation(&u), 1e-12));

    let identity_ok = exact_identity_holds(n);
    checks.push(check(
        "best-amplification-identity",
        n,
        None,
        if identity_ok { 0.0 } else { 1.0 },
        0.5,
    ));

    if n <= VERIFY_EXHAUSTIVE_MAX_N {
        let value = match exhaustive_classical(n) {
            Ok(e) => {
                let exact = e.worst() == classical_worst_ratio(n).unwrap()
                    && e.best() == classical_best_ratio(n).unwrap();
                if exact {
                    0.0
                } else {
                    1.0
                }
            }
            Err(_) => 1.0,
        };
        checks.push(check("classical-enumeration", n, None, value, 0.5));
    }

    if n > VERIFY_DENSE_MAX_N {
        return;
    }
    let single = (n as f64).powi(1 - n as i32);
    for p in 0..n {
        let cfg = GameConfig::new(n, p as i64)
            .unwrap()
            .with_dense_cap(dense_cap);
        let dense = match run_dense_with(&cfg, &u, true) {
            Ok(r) => r,
            Err(_) => {
                checks.push(check("dense-engine", n, Some(p), 1.0, 0.5));
                continue;
            }
        };
        let recs = dense
            .per_outcome
            .as_ref()
            .expect("dense report lists outcomes");
        let total: f64 = recs.iter().map(|r| r.probability).sum();
        checks.push(check(
            "normalization",
            n,
            Some(p),
            (total - 1.0).abs(),
            1e-10,
        ));

        let violations = recs
            .iter()
            .filter(|r| {
                let allowed = r.phase_sum_m % n == 0;
                if allowed {
                    (r.probability - single).abs() >= 1e-12
                } else {
                    r.raw_probability >= 1e-15
                }
            })
            .count();
        checks.push(check("selection-rule", n, Some(p), violations as f64, 0.5));

        let closed = closed_form_report(&cfg, true).expect("closed form enumerates small games");
        let gap = dense.max_discrepancy(&closed).unwrap_or(f64::INFINITY);
        checks.push(check("dense-vs-closed-form", n, Some(p), gap, 1e-10));

        if n <= VERIFY_BRUTE_MAX_N {
            let worst = closed
                .per_outcome
                .as_ref()
                .unwrap()
                .iter()
                .map(|r| match brute_force_amplitude(n, p as i64, &r.outcome) {
                    Ok(a) => (a - r.amplitude).norm(),
                    Err(_) => f64::INFINITY,
                })
                .fold(0.0, f64::max);
            checks.push(check(
                "closed-form-vs-brute-force",
                n,
                Some(p),
                worst,
                1e-10,
            ));
        }
    }
}

pub fn cmd_compare(req: &RunRequest) -> CommandOutput {
    if let Err(out) = require_game_n(req.n) {
        return out;
    }
    let mut rows = Vec::new();
    for n in 2..=req.n {
        let best_phase = GameConfig::best_phase(n);
        let worst = match GameConfig::new(n, 1).and_then(|c| closed_form_report(&c, false)) {
            Ok(r) => r.p_worst_quantum,
            Err(e) => return failure(&e),
        };
        let best = quantum_best_probability(n);
        let classical_best = classical_best_probability(n);
        rows.push(CompareRow {
            n,
            p_worst_classical: classical_worst_probability(n),
            p_worst_quantum: worst,
            p_best_classical: classical_best,
            p_best_quantum: best,
            best_phase,
            best_ratio: best / classical_best,
        });
    }
    CommandOutput::ok(CompareReport { rows }.render(req.format))
}
