//! Generalized qudit gates, the circuit IR and the state-vector kernel.
//!
//! A gate acts on one target wire and fires only on basis states whose
//! control wires all hold their trigger values. The kernel walks the
//! register in blocks of `radix(target) * stride(target)` amplitudes; each
//! block holds `stride(target)` independent fibers, so blocks can be handed
//! to rayon without any cross-fiber reduction.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::matrix::Matrix;
use crate::state::{RadixSpec, StateVector};

pub const TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    /// Cyclic shift `|x⟩ → |x + a mod d⟩`.
    X(usize),
    /// `F_d[j][k] = ω^{jk} / √d`.
    Fourier,
    /// Bit flip on a radix-2 wire.
    Not,
    Unitary(Matrix),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X(_) => "x",
            GateKind::Fourier => "fourier",
            GateKind::Not => "not",
            GateKind::Unitary(_) => "unitary",
        }
    }

    fn check(&self, d: usize) -> Result<()> {
        match self {
            GateKind::X(a) if *a == 0 || *a >= d => {
                domain(format!("shift {a} outside [1, {}]", d - 1))
            }
            GateKind::Not if d != 2 => domain(format!("not gate needs radix 2, wire has {d}")),
            GateKind::Unitary(m) if m.dim() != d => {
                domain(format!("{}x{} matrix on a radix-{d} wire", m.dim(), m.dim()))
            }
            GateKind::Unitary(m) if !m.is_unitary(TOL) => domain("matrix is not unitary"),
            _ => Ok(()),
        }
    }
}

pub fn fourier_matrix(d: usize) -> Matrix {
    let norm = 1.0 / (d as f64).sqrt();
    let mut m = Matrix::zeros(d);
    for j in 0..d {
        for k in 0..d {
            let phase = 2.0 * PI * ((j * k) % d) as f64 / d as f64;
            m.set(j, k, Complex64::from_polar(norm, phase));
        }
    }
    m
}

pub fn shift_matrix(a: usize, d: usize) -> Matrix {
    let mut m = Matrix::zeros(d);
    for x in 0..d {
        m.set((x + a) % d, x, Complex64::new(1.0, 0.0));
    }
    m
}

/// Explicit `d×d` matrix of a gate kind.
pub fn gate_matrix(kind: &GateKind, d: usize) -> Result<Matrix> {
    if d < 2 {
        return domain("radix must be at least 2");
    }
    kind.check(d)?;
    Ok(match kind {
        GateKind::X(a) => shift_matrix(*a, d),
        GateKind::Not => shift_matrix(1, 2),
        GateKind::Fourier => fourier_matrix(d),
        GateKind::Unitary(m) => m.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Control {
    pub wire: usize,
    pub value: usize,
}

impl Control {
    pub fn new(wire: usize, value: usize) -> Self {
        Self { wire, value }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn new(kind: GateKind, target: usize) -> Self {
        Self { kind, target, controls: Vec::new() }
    }

    pub fn x(target: usize, shift: usize) -> Self {
        Self::new(GateKind::X(shift), target)
    }

    pub fn not(target: usize) -> Self {
        Self::new(GateKind::Not, target)
    }

    pub fn fourier(target: usize) -> Self {
        Self::new(GateKind::Fourier, target)
    }

    pub fn controlled(mut self, controls: impl IntoIterator<Item = Control>) -> Self {
        self.controls.extend(controls);
        self
    }

    pub fn with_control(mut self, wire: usize, value: usize) -> Self {
        self.controls.push(Control::new(wire, value));
        self
    }

    /// Wires read or written by this gate.
    pub fn touches(&self, wire: usize) -> bool {
        self.target == wire || self.controls.iter().any(|c| c.wire == wire)
    }

    pub fn validate(&self, spec: &RadixSpec) -> Result<()> {
        let n = spec.wires();
        if self.target >= n {
            return domain(format!("target wire {} not in {n}-wire register", self.target));
        }
        self.kind.check(spec.radix(self.target))?;
        let mut seen = vec![false; n];
        seen[self.target] = true;
        for c in &self.controls {
            if c.wire >= n {
                return domain(format!("control wire {} not in register", c.wire));
            }
            if seen[c.wire] {
                return domain(format!("wire {} used twice in one gate", c.wire));
            }
            seen[c.wire] = true;
            if c.value >= spec.radix(c.wire) {
                return domain(format!(
                    "trigger {} on wire {} exceeds radix {}",
                    c.value,
                    c.wire,
                    spec.radix(c.wire)
                ));
            }
        }
        Ok(())
    }
}

/// How the kernel schedules work over fibers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecPolicy {
    Sequential,
    /// Rayon over blocks of fibers. Falls back to sequential when the
    /// `parallel` feature is off.
    Parallel,
}

impl Default for ExecPolicy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecPolicy::Parallel
        } else {
            ExecPolicy::Sequential
        }
    }
}

enum FiberOp<'a> {
    Shift(usize),
    Dense(&'a [Complex64]),
}

struct Kernel<'a> {
    r: usize,
    s: usize,
    op: FiberOp<'a>,
    // (stride, radix, value) per control
    controls: Vec<(usize, usize, usize)>,
}

impl Kernel<'_> {
    #[inline]
    fn fires(&self, index: usize) -> bool {
        self.controls.iter().all(|&(st, r, v)| (index / st) % r == v)
    }

    fn block(&self, bi: usize, chunk: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        let (r, s) = (self.r, self.s);
        let base = bi * r * s;
        scratch.resize(r, Complex64::new(0.0, 0.0));
        for j in 0..s {
            if !self.fires(base + j) {
                continue;
            }
            for k in 0..r {
                scratch[k] = chunk[j + k * s];
            }
            match self.op {
                FiberOp::Shift(a) => {
                    for k in 0..r {
                        chunk[j + ((k + a) % r) * s] = scratch[k];
                    }
                }
                FiberOp::Dense(m) => {
                    for row in 0..r {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for col in 0..r {
                            acc += m[row * r + col] * scratch[col];
                        }
                        chunk[j + row * s] = acc;
                    }
                }
            }
        }
    }
}

/// Applies `gate` in place with the default policy.
pub fn apply_gate(state: &mut StateVector, gate: &Gate) -> Result<()> {
    apply_gate_with(state, gate, ExecPolicy::default())
}

pub fn apply_gate_with(state: &mut StateVector, gate: &Gate, policy: ExecPolicy) -> Result<()> {
    let spec = state.spec().clone();
    gate.validate(&spec)?;
    let r = spec.radix(gate.target);
    let s = spec.stride(gate.target);
    let dense;
    let op = match &gate.kind {
        GateKind::X(a) => FiberOp::Shift(*a),
        GateKind::Not => FiberOp::Shift(1),
        GateKind::Fourier => {
            dense = fourier_matrix(r);
            FiberOp::Dense(dense.data())
        }
        GateKind::Unitary(m) => FiberOp::Dense(m.data()),
    };
    let kernel = Kernel {
        r,
        s,
        op,
        controls: gate
            .controls
            .iter()
            .map(|c| (spec.stride(c.wire), spec.radix(c.wire), c.value))
            .collect(),
    };
    let amps = state.amplitudes_mut();
    let block = r * s;
    match policy {
        #[cfg(feature = "parallel")]
        ExecPolicy::Parallel => {
            use rayon::prelude::*;
            amps.par_chunks_mut(block)
                .enumerate()
                .with_min_len(64)
                .for_each_init(Vec::new, |scratch, (bi, chunk)| kernel.block(bi, chunk, scratch));
        }
        _ => {
            let mut scratch = Vec::with_capacity(r);
            for (bi, chunk) in amps.chunks_mut(block).enumerate() {
                kernel.block(bi, chunk, &mut scratch);
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub spec: RadixSpec,
    pub gates: Vec<Gate>,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl Circuit {
    pub fn new(spec: RadixSpec) -> Self {
        Self { spec, gates: Vec::new(), metadata: BTreeMap::new() }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn set_meta(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.metadata.insert(key.to_string(), value.into());
    }

    pub fn meta_i64(&self, key: &str) -> Option<i64> {
        self.metadata.get(key).and_then(|v| v.as_i64())
    }

    pub fn meta_str(&self, key: &str) -> Option<&str> {
        self.metadata.get(key).and_then(|v| v.as_str())
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            g.validate(&self.spec)
                .map_err(|e| Error::Domain(format!("gate {i}: {e}")))?;
        }
        Ok(())
    }

    /// Same gates and order, ignoring metadata.
    pub fn same_gates(&self, other: &Circuit) -> bool {
        self.spec == other.spec && self.gates == other.gates
    }

    /// Full unitary, column by column. Only sensible for small registers.
    pub fn unitary(&self, policy: ExecPolicy) -> Result<Vec<StateVector>> {
        let n = self.spec.dimension();
        (0..n)
            .map(|i| {
                let mut s = StateVector::zero(self.spec.clone());
                s.amplitudes_mut()[i] = Complex64::new(1.0, 0.0);
                run_circuit_with(&mut s, self, policy)?;
                Ok(s)
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let file = CircuitFile::from(self);
        let mut s = serde_json::to_string_pretty(&file).expect("circuit serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CircuitFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_circuit()
    }
}

pub fn run_circuit(state: &mut StateVector, circuit: &Circuit) -> Result<()> {
    run_circuit_with(state, circuit, ExecPolicy::default())
}

pub fn run_circuit_with(state: &mut StateVector, circuit: &Circuit, policy: ExecPolicy) -> Result<()> {
    if state.spec() != &circuit.spec {
        return domain(format!(
            "circuit register {:?} does not match state register {:?}",
            circuit.spec.radices(),
            state.spec().radices()
        ));
    }
    for (i, g) in circuit.gates.iter().enumerate() {
        apply_gate_with(state, g, policy).map_err(|e| Error::Domain(format!("gate {i}: {e}")))?;
    }
    Ok(())
}

// On-disk layout of a circuit.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitFile {
    radices: Vec<usize>,
    gates: Vec<GateRecord>,
    #[serde(default)]
    metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateRecord {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shift: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
    target: usize,
    #[serde(default)]
    controls: Vec<Control>,
}

impl From<&Circuit> for CircuitFile {
    fn from(c: &Circuit) -> Self {
        let gates = c
            .gates
            .iter()
            .map(|g| {
                let (shift, matrix) = match &g.kind {
                    GateKind::X(a) => (Some(*a), None),
                    GateKind::Unitary(m) => {
                        (None, Some(m.data().iter().map(|z| [z.re, z.im]).collect()))
                    }
                    _ => (None, None),
                };
                GateRecord {
                    kind: g.kind.name().to_string(),
                    shift,
                    matrix,
                    target: g.target,
                    controls: g.controls.clone(),
                }
            })
            .collect();
        CircuitFile {
            radices: c.spec.radices().to_vec(),
            gates,
            metadata: c.metadata.clone(),
        }
    }
}

impl CircuitFile {
    fn into_circuit(self) -> Result<Circuit> {
        let spec = RadixSpec::new(self.radices)?;
        let mut gates = Vec::with_capacity(self.gates.len());
        for (i, g) in self.gates.into_iter().enumerate() {
            let at = |msg: String| Error::Parse(format!("gate {i}: {msg}"));
            let kind = match g.kind.as_str() {
                "x" => GateKind::X(g.shift.ok_or_else(|| at("x gate without shift".into()))?),
                "fourier" => GateKind::Fourier,
                "not" => GateKind::Not,
                "unitary" => {
                    let raw = g.matrix.ok_or_else(|| at("unitary gate without matrix".into()))?;
                    let n = (raw.len() as f64).sqrt().round() as usize;
                    let data = raw.iter().map(|p| Complex64::new(p[0], p[1])).collect();
                    GateKind::Unitary(Matrix::from_rows(n, data).map_err(|e| at(e.to_string()))?)
                }
                other => return Err(at(format!("unknown gate kind {other:?}"))),
            };
            let gate = Gate { kind, target: g.target, controls: g.controls };
            gate.validate(&spec).map_err(|e| at(e.to_string()))?;
            gates.push(gate);
        }
        Ok(Circuit { spec, gates, metadata: self.metadata })
    }
}
