//! Walk-step circuit synthesis.
//!
//! Register layout for a line walk is `[2, d, …, d]`: the coin qubit on
//! wire 0, then the position digits most significant first. Lattice walks
//! put `D` coin qubits first, then each axis's digits in axis order.
//!
//! Every circuit records `coin0_step` in its metadata: the position change
//! of the coin-0 branch. The oracle comparison uses it to pick the matching
//! orientation.

mod lattice;
mod odd;
mod optimize;
mod table;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coins;
use crate::error::{domain, Error, Result};
use crate::gates::{Circuit, Gate, GateKind};
use crate::mapping::{PositionMapping, Scheme};
use crate::matrix::Matrix;
use crate::state::RadixSpec;

pub use lattice::{lattice_spec, synthesize_lattice, LatticeRequest};
pub use optimize::peephole_optimize;
pub use table::{synthesize_from_table, TableBranch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Controls trigger on `d − 1` via `X` sandwiches, as drawn in the figures.
    PaperFaithful,
    /// Controls carry their trigger values directly.
    DirectControls,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::PaperFaithful => "paper",
            Mode::DirectControls => "direct",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "paper-faithful" => Ok(Mode::PaperFaithful),
            "direct" | "direct-controls" => Ok(Mode::DirectControls),
            _ => domain(format!("unknown mode {s:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthesisRequest {
    pub mapping: PositionMapping,
    /// Coin name understood by [`coins::named`].
    pub coin: String,
    pub first_step: usize,
    pub last_step: usize,
    pub mode: Mode,
}

impl SynthesisRequest {
    pub fn new(mapping: PositionMapping, last_step: usize, mode: Mode) -> Self {
        Self { mapping, coin: "hadamard".into(), first_step: 1, last_step, mode }
    }

    pub fn window(mut self, first: usize, last: usize) -> Self {
        self.first_step = first;
        self.last_step = last;
        self
    }

    pub fn with_coin(mut self, coin: &str) -> Self {
        self.coin = coin.to_string();
        self
    }
}

/// One circuit, an odd-step/even-step pair applied alternately, or a
/// pipeline of circuits each serving its own step window.
#[derive(Debug, Clone, PartialEq)]
pub enum Synthesized {
    Single(Circuit),
    Alternating { odd: Circuit, even: Circuit },
    /// Ordered by window; step `k` uses the first circuit whose
    /// `steps_last ≥ k`, the last circuit past every window.
    Windowed(Vec<Circuit>),
}

impl Synthesized {
    /// Circuit for the 1-based step `step`.
    pub fn for_step(&self, step: usize) -> &Circuit {
        match self {
            Synthesized::Single(c) => c,
            Synthesized::Alternating { odd, even } => {
                if step % 2 == 1 {
                    odd
                } else {
                    even
                }
            }
            Synthesized::Windowed(list) => list
                .iter()
                .find(|c| c.meta_i64("steps_last").map_or(false, |l| l >= step as i64))
                .unwrap_or_else(|| list.last().expect("pipeline is never empty")),
        }
    }

    pub fn circuits(&self) -> Vec<&Circuit> {
        match self {
            Synthesized::Single(c) => vec![c],
            Synthesized::Alternating { odd, even } => vec![odd, even],
            Synthesized::Windowed(list) => list.iter().collect(),
        }
    }

    pub fn map(self, f: impl Fn(Circuit) -> Circuit) -> Self {
        match self {
            Synthesized::Single(c) => Synthesized::Single(f(c)),
            Synthesized::Alternating { odd, even } => {
                Synthesized::Alternating { odd: f(odd), even: f(even) }
            }
            Synthesized::Windowed(list) => Synthesized::Windowed(list.into_iter().map(f).collect()),
        }
    }
}

/// Largest last step the mapping can serve for a walk starting at 0.
pub fn step_capacity(mapping: &PositionMapping) -> usize {
    mapping.symmetric_reach().max(0) as usize
}

pub(crate) fn line_spec(mapping: &PositionMapping) -> RadixSpec {
    let mut r = vec![2];
    r.extend(std::iter::repeat(mapping.d).take(mapping.n_digits));
    RadixSpec::new(r).expect("valid register")
}

/// Single-wire gate for a 2-state coin.
pub(crate) fn coin_gate(name: &str, wire: usize) -> Result<Gate> {
    let m = coins::named(name, 2)?;
    if m.max_abs_diff(&coins::hadamard()) < 1e-15 {
        Ok(Gate::fourier(wire))
    } else {
        Ok(Gate::new(GateKind::Unitary(m), wire))
    }
}

pub(crate) fn base_metadata(c: &mut Circuit, req_coin: &str, mapping: &PositionMapping, mode: Mode) {
    c.set_meta("walk", "line");
    c.set_meta("d", mapping.d);
    c.set_meta("n_digits", mapping.n_digits);
    c.set_meta("variant", mapping.variant.name());
    c.set_meta("scheme", mapping.scheme.name());
    c.set_meta("coin", req_coin);
    c.set_meta("mode", mode.name());
}

pub fn synthesize_1d(req: &SynthesisRequest) -> Result<Synthesized> {
    let cap = step_capacity(&req.mapping);
    if req.first_step == 0 || req.first_step > req.last_step {
        return domain(format!(
            "step window {}..={} must start at 1 or later and be non-empty",
            req.first_step, req.last_step
        ));
    }
    if req.last_step > cap {
        return Err(Error::Range(format!(
            "{} steps requested but this register supports {cap}",
            req.last_step
        )));
    }
    coins::named(&req.coin, 2)?;
    let out = match req.mapping.scheme {
        Scheme::OddBalanced => Synthesized::Single(odd::synthesize(req)?),
        Scheme::EvenStaircase | Scheme::BinaryTable => {
            let odd = table::synthesize_phase(req, Some(0))?;
            let even = table::synthesize_phase(req, Some(1))?;
            Synthesized::Alternating { odd, even }
        }
        Scheme::NaiveTable => Synthesized::Single(table::synthesize_phase(req, None)?),
    };
    Ok(out.map(|mut c| {
        c.set_meta("steps_first", req.first_step);
        c.set_meta("steps_last", req.last_step);
        c
    }))
}

/// Expands every non-`r−1` trigger into an `X` sandwich, then cleans up
/// adjacent shifts.
pub fn to_paper_faithful(c: &Circuit) -> Circuit {
    let mut out = Circuit { spec: c.spec.clone(), gates: Vec::new(), metadata: c.metadata.clone() };
    for g in &c.gates {
        let mut pre = Vec::new();
        let mut post = Vec::new();
        let mut gate = g.clone();
        for ctl in &mut gate.controls {
            let r = c.spec.radix(ctl.wire);
            if ctl.value != r - 1 {
                pre.push(shift_gate(ctl.wire, r - 1 - ctl.value, r));
                post.push(shift_gate(ctl.wire, ctl.value + 1, r));
                ctl.value = r - 1;
            }
        }
        out.gates.extend(pre);
        out.gates.push(gate);
        out.gates.extend(post);
    }
    out.set_meta("mode", Mode::PaperFaithful.name());
    peephole_optimize(&out)
}

/// `X_{+a}` on a wire of radix `r`, written as `not` on qubits.
pub(crate) fn shift_gate(wire: usize, a: usize, r: usize) -> Gate {
    if r == 2 {
        Gate::not(wire)
    } else {
        Gate::x(wire, a % r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateCount {
    pub total: usize,
    pub by_kind: BTreeMap<String, usize>,
    pub max_controls: usize,
}

/// Gates tallied by kind; controlled gates are keyed `c-<kind>` (one
/// control) or `mc-<kind>` (two or more).
pub fn gate_count(c: &Circuit) -> GateCount {
    let mut by_kind = BTreeMap::new();
    let mut max_controls = 0;
    for g in &c.gates {
        let key = match g.controls.len() {
            0 => g.kind.name().to_string(),
            1 => format!("c-{}", g.kind.name()),
            _ => format!("mc-{}", g.kind.name()),
        };
        *by_kind.entry(key).or_insert(0) += 1;
        max_controls = max_controls.max(g.controls.len());
    }
    GateCount { total: c.gates.len(), by_kind, max_controls }
}

/// Coin matrix the circuit's `coin` metadata refers to, for `k` states.
pub fn coin_matrix_for(c: &Circuit, k: usize) -> Result<Matrix> {
    let name = c.meta_str("coin").unwrap_or("hadamard");
    if name == "none" {
        return Ok(Matrix::identity(k));
    }
    if k == 4 && name == "hadamard" {
        return Ok(coins::hadamard().kron(&coins::hadamard()));
    }
    if k > 2 && name == "hadamard" {
        let mut m = coins::hadamard();
        while m.dim() < k {
            m = m.kron(&coins::hadamard());
        }
        return Ok(m);
    }
    coins::named(name, k)
}
