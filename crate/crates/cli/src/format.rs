//! JSON, CSV and plain-text rendering.
//!
//! CSV numbers use 17 significant digits so that two runs diff exactly.

use std::fmt::Write;

use serde::Serialize;

use crate::report::{ClassicalReport, CompareReport, SimulationReport, SweepReport, VerifyReport};
use crate::Format;

/// A real number with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub trait Render: Serialize {
    fn csv(&self) -> String;
    fn text(&self) -> String;

    fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }
}

pub const SIMULATE_SUMMARY_COLUMNS: &str =
    "n,p,engine,p_worst_quantum,p_best_quantum,p_worst_classical,p_best_classical,best_ratio,max_discrepancy,outcome_count";
pub const SIMULATE_OUTCOME_COLUMNS: &str = "outcome,m,probability,class,raw";

impl Render for SimulationReport {
    /// A one-row summary table, then (when listed) a blank line and the
    /// per-outcome table. Outcome digits are space separated.
    fn csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{SIMULATE_SUMMARY_COLUMNS}").unwrap();
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            self.config.n,
            self.config.p,
            self.engine,
            num(self.quantum.p_worst),
            num(self.quantum.p_best),
            num(self.classical.p_worst),
            num(self.classical.p_best),
            num(self.best_ratio),
            opt_num(self.max_discrepancy),
            self.outcome_count
        )
        .unwrap();
        if let Some(outcomes) = &self.outcomes {
            writeln!(s).unwrap();
            writeln!(s, "{SIMULATE_OUTCOME_COLUMNS}").unwrap();
            for o in outcomes {
                let digits: Vec<String> = o.digits.iter().map(|d| d.to_string()).collect();
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    digits.join(" "),
                    o.m,
                    num(o.probability),
                    o.class.as_str(),
                    opt_num(o.raw)
                )
                .unwrap();
            }
        }
        s
    }

    fn text(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "truckers game: n = {}, p = {}, engine = {}",
            self.config.n, self.config.p, self.engine
        )
        .unwrap();
        writeln!(
            s,
            "  worst outcome  quantum {:<12.6e} classical {:.6e}",
            self.quantum.p_worst, self.classical.p_worst
        )
        .unwrap();
        writeln!(
            s,
            "  best outcome   quantum {:<12.6e} classical {:.6e}",
            self.quantum.p_best, self.classical.p_best
        )
        .unwrap();
        writeln!(s, "  best ratio     {:.6}", self.best_ratio).unwrap();
        if let Some(d) = self.max_discrepancy {
            writeln!(s, "  max discrepancy {d:.3e}").unwrap();
        }
        match &self.outcomes {
            Some(outcomes) => {
                let support: Vec<_> = outcomes.iter().filter(|o| o.probability > 0.0).collect();
                writeln!(
                    s,
                    "  {} of {} outcomes have nonzero probability",
                    support.len(),
                    self.outcome_count
                )
                .unwrap();
                for o in support {
                    let digits: Vec<String> = o.digits.iter().map(|d| d.to_string()).collect();
                    writeln!(
                        s,
                        "    |{}>  m = {:<3} p = {:.6e}  {}",
                        digits.join(""),
                        o.m,
                        o.probability,
                        o.class.as_str()
                    )
                    .unwrap();
                }
            }
            None => writeln!(s, "  {} outcomes (listing omitted)", self.outcome_count).unwrap(),
        }
        s
    }
}

pub const SWEEP_COLUMNS: &str =
    "p,p_worst_quantum,p_best_quantum,p_worst_classical,p_best_classical";

impl Render for SweepReport {
    fn csv(&self) -> String {
        let mut s = format!("{SWEEP_COLUMNS}\n");
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{}",
                r.p,
                num(r.p_worst_quantum),
                num(r.p_best_quantum),
                num(r.p_worst_classical),
                num(r.p_best_classical)
            )
            .unwrap();
        }
        s
    }

    fn text(&self) -> String {
        let mut s = format!("phase sweep, n = {}\n", self.n);
        writeln!(s, "{:>4}  {:>14}  {:>14}", "p", "P_worst", "P_best").unwrap();
        for r in &self.rows {
            writeln!(
                s,
                "{:>4}  {:>14.6e}  {:>14.6e}",
                r.p, r.p_worst_quantum, r.p_best_quantum
            )
            .unwrap();
        }
        if let Some(r) = self.rows.first() {
            writeln!(
                s,
                "classical: P_worst = {:.6e}, P_best = {:.6e}",
                r.p_worst_classical, r.p_best_classical
            )
            .unwrap();
        }
        s
    }
}

pub const CLASSICAL_COLUMNS: &str =
    "quantity,n,trials,seed,generator,analytic,empirical,count,abs_deviation,sigma";

impl Render for ClassicalReport {
    fn csv(&self) -> String {
        let mut s = format!("{CLASSICAL_COLUMNS}\n");
        for (name, st) in [("worst", &self.worst), ("best", &self.best)] {
            writeln!(
                s,
                "{name},{},{},{},{},{},{},{},{},{}",
                self.n,
                self.trials,
                self.seed,
                self.generator,
                num(st.analytic),
                num(st.empirical),
                st.count,
                num(st.abs_deviation),
                num(st.sigma)
            )
            .unwrap();
        }
        s
    }

    fn text(&self) -> String {
        let mut s = format!(
            "classical baseline: n = {}, trials = {}, seed = {} ({})\n",
            self.n, self.trials, self.seed, self.generator
        );
        for (name, st) in [("worst", &self.worst), ("best", &self.best)] {
            writeln!(
                s,
                "  {name:<5}  analytic {:.6e}  empirical {:.6e}  |dev| {:.3e} = {:.2} sigma",
                st.analytic,
                st.empirical,
                st.abs_deviation,
                st.z_score()
            )
            .unwrap();
        }
        s
    }
}

pub const VERIFY_COLUMNS: &str = "check,n,p,passed,value,threshold";

impl Render for VerifyReport {
    fn csv(&self) -> String {
        let mut s = format!("{VERIFY_COLUMNS}\n");
        for c in &self.checks {
            writeln!(
                s,
                "{},{},{},{},{},{}",
                c.name,
                c.n,
                c.p.map(|p| p.to_string()).unwrap_or_default(),
                c.passed,
                num(c.value),
                num(c.threshold)
            )
            .unwrap();
        }
        s
    }

    fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let p = c.p.map(|p| format!(" p={p}")).unwrap_or_default();
            writeln!(
                s,
                "[{}] {} n={}{}: {:.3e} (threshold {:.1e})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.n,
                p,
                c.value,
                c.threshold
            )
            .unwrap();
        }
        writeln!(s, "{} checks, {} failed", self.checks.len(), self.failures).unwrap();
        s
    }
}

pub const COMPARE_COLUMNS: &str =
    "n,p_worst_classical,p_worst_quantum,p_best_classical,p_best_quantum,best_phase,best_ratio";

impl Render for CompareReport {
    fn csv(&self) -> String {
        let mut s = format!("{COMPARE_COLUMNS}\n");
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.n,
                num(r.p_worst_classical),
                num(r.p_worst_quantum),
                num(r.p_best_classical),
                num(r.p_best_quantum),
                r.best_phase,
                num(r.best_ratio)
            )
            .unwrap();
        }
        s
    }

    fn text(&self) -> String {
        let mut s = format!(
            "{:>3}  {:>12}  {:>12}  {:>12}  {:>12}  {:>6}\n",
            "n", "worst C", "worst Q(p=1)", "best C", "best Q", "ratio"
        );
        for r in &self.rows {
            writeln!(
                s,
                "{:>3}  {:>12.4e}  {:>12.4e}  {:>12.4e}  {:>12.4e}  {:>6.2}",
                r.n,
                r.p_worst_classical,
                r.p_worst_quantum,
                r.p_best_classical,
                r.p_best_quantum,
                r.best_ratio
            )
            .unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_seventeen_digits() {
        assert_eq!(num(0.5), "5.0000000000000000e-1");
        assert_eq!(num(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(num(0.0), "0.0000000000000000e0");
        for x in [1.0 / 9.0, 2.0 / 3.0, 4.64e-7, 1e-300] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
