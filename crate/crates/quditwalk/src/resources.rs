//! Closed-form register sizes and step capacities. Integer arithmetic only.

use serde::Serialize;

fn pow_sat(d: u64, n: u32) -> u64 {
    d.saturating_pow(n)
}

/// `⌊dⁿ/2⌋`, saturating at `u64::MAX / 2`.
pub fn capacity_1d(d: u64, n_qudits: u32) -> u64 {
    pow_sat(d, n_qudits) / 2
}

/// `⌈log_d n⌉` by repeated multiplication.
pub fn ceil_log(d: u64, n: u64) -> u32 {
    assert!(d >= 2 && n >= 1, "ceil_log needs d ≥ 2, n ≥ 1");
    let mut k = 0;
    let mut p: u64 = 1;
    while p < n {
        p = p.saturating_mul(d);
        k += 1;
    }
    k
}

/// `⌊√m⌋` exactly.
pub fn isqrt(m: u64) -> u64 {
    if m < 2 {
        return m;
    }
    let mut x = (m as f64).sqrt() as u64;
    while x.saturating_mul(x) > m {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= m {
        x += 1;
    }
    x
}

/// `(position qudits, coin wires)` for an `n_steps` walk in `dim` dimensions.
///
/// One dimension: `(⌈log_d n⌉ + 1, 1)`; more: `(D·⌈log_d n⌉, D)`.
pub fn qudits_for_steps(d: u64, n_steps: u64, dim: u32) -> (u32, u32) {
    let l = ceil_log(d, n_steps);
    if dim <= 1 {
        (l + 1, 1)
    } else {
        (dim * l, dim)
    }
}

/// Smallest register whose capacity covers `n_steps`.
pub fn min_qudits_for_steps(d: u64, n_steps: u64) -> u32 {
    let mut q = 1;
    while capacity_1d(d, q) < n_steps {
        q += 1;
    }
    q
}

/// `⌊⌊√(dⁿ)⌋/2⌋`.
pub fn capacity_2d(d: u64, n_qudits_total: u32) -> u64 {
    isqrt(pow_sat(d, n_qudits_total)) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CapacityRow {
    pub d: u64,
    pub n: u32,
    pub max_steps: u64,
}

/// Rows `(d, n, ⌊dⁿ/2⌋)`, `n = 0` skipped.
pub fn comparison_table(d_list: &[u64], n_range: std::ops::RangeInclusive<u32>) -> Vec<CapacityRow> {
    let mut rows = Vec::new();
    for &d in d_list {
        for n in n_range.clone() {
            if n == 0 {
                continue;
            }
            rows.push(CapacityRow { d, n, max_steps: capacity_1d(d, n) });
        }
    }
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResourceEstimate {
    pub d: u64,
    pub n_qudits: u32,
    pub n_coin_wires: u32,
    pub max_steps: u64,
    pub max_controls: u32,
    pub walk_dimension: u32,
}

/// Estimate for a 1D walk on `n_qudits` position qudits.
///
/// The deepest carry needs the coin plus every lower qudit as controls.
pub fn estimate_1d(d: u64, n_qudits: u32) -> ResourceEstimate {
    ResourceEstimate {
        d,
        n_qudits,
        n_coin_wires: 1,
        max_steps: capacity_1d(d, n_qudits),
        max_controls: n_qudits,
        walk_dimension: 1,
    }
}
