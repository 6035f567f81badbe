//! Benchmark fixtures shared by the criterion targets in `benches/`.

use qgame_core::{GameConfig, OutcomeTuple};

/// Game sizes the dense engine handles in well under a second.
pub const DENSE_SIZES: &[usize] = &[3, 4, 5, 6, 7];

/// A surviving outcome for `(n, p)`: `(0, 0, …, 0, r)` with `r ≡ −p`.
pub fn surviving_outcome(cfg: &GameConfig) -> OutcomeTuple {
    let n = cfg.n();
    let mut digits = vec![0; n];
    digits[n - 1] = (n - cfg.p()) % n;
    OutcomeTuple(digits)
}
