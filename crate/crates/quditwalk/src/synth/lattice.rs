//! Lattice walks: `D` coin qubits select an axis and a direction, and each
//! axis carries its own odd-radix cascade.
//!
//! In direct mode coin pattern `c` (wire 0 most significant) moves along
//! axis `c / 2`, towards `+1` when `c` is odd, and the step ends by flipping
//! the last coin qubit so the direction register is reversed. Patterns
//! `c ≥ 2D` leave the walker in place.
//!
//! Paper mode follows the two-axis figures: patterns are visited in Gray
//! order `00, 01, 11, 10` with `not` gates on the coin wires between them,
//! `00`/`01` moving axis 0 up/down in code value and `11`/`10` axis 1, with
//! no direction flip.

use crate::error::{domain, Error, Result};
use crate::gates::{Circuit, Control, Gate, GateKind};
use crate::mapping::{PositionMapping, Scheme};
use crate::matrix::Matrix;
use crate::state::RadixSpec;

use super::odd::{cascade, digits_needed};
use super::{to_paper_faithful, Mode};

#[derive(Debug, Clone)]
pub struct LatticeRequest {
    /// Per-axis mapping; odd radix only.
    pub axis: PositionMapping,
    pub dims: usize,
    /// `hadamard` (one Fourier gate per coin qubit), `grover`, `dft`, or
    /// `none` for a bare shift.
    pub coin: String,
    pub first_step: usize,
    pub last_step: usize,
    pub mode: Mode,
}

impl LatticeRequest {
    pub fn new(axis: PositionMapping, dims: usize, last_step: usize, mode: Mode) -> Self {
        Self { axis, dims, coin: "hadamard".into(), first_step: 1, last_step, mode }
    }

    pub fn with_coin(mut self, coin: &str) -> Self {
        self.coin = coin.to_string();
        self
    }
}

pub fn lattice_spec(axis: &PositionMapping, dims: usize) -> Result<RadixSpec> {
    let mut r = vec![2; dims];
    r.extend(std::iter::repeat(axis.d).take(dims * axis.n_digits));
    RadixSpec::new(r)
}

fn diag(a: f64, b: f64) -> GateKind {
    GateKind::Unitary(Matrix::from_real(2, &[a, 0.0, 0.0, b]).expect("2x2"))
}

fn phase_s() -> GateKind {
    use num_complex::Complex64;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    GateKind::Unitary(Matrix::from_rows(2, vec![one, zero, zero, i]).expect("2x2"))
}

/// Coin operator on wires `0..dims` as single-wire gates.
fn coin_gates(name: &str, dims: usize) -> Result<Vec<Gate>> {
    let hh = || (0..dims).map(Gate::fourier).collect::<Vec<_>>();
    match (name, dims) {
        ("none", _) => Ok(vec![]),
        ("hadamard", _) => Ok(hh()),
        ("grover", 2) => {
            // H⊗H · diag(1, −1, −1, −1) · H⊗H
            let mut g = hh();
            g.push(Gate::new(diag(1.0, -1.0), 0));
            g.push(Gate::new(diag(1.0, -1.0), 1));
            g.push(Gate::new(diag(1.0, -1.0), 1).with_control(0, 1));
            g.extend(hh());
            Ok(g)
        }
        ("dft" | "fourier", 2) => Ok(vec![
            Gate::fourier(0),
            Gate::new(phase_s(), 0).with_control(1, 1),
            Gate::fourier(1),
            Gate::not(1).with_control(0, 1),
            Gate::not(0).with_control(1, 1),
            Gate::not(1).with_control(0, 1),
        ]),
        _ => Err(Error::Unsupported(format!(
            "coin {name:?} has no gate decomposition on {dims} coin qubits"
        ))),
    }
}

fn pattern_controls(c: usize, dims: usize) -> Vec<Control> {
    (0..dims).map(|w| Control::new(w, (c >> (dims - 1 - w)) & 1)).collect()
}

pub fn synthesize_lattice(req: &LatticeRequest) -> Result<Circuit> {
    let m = &req.axis;
    let dims = req.dims;
    if dims < 2 {
        return domain("lattice synthesis needs at least two axes; use the line synthesizer");
    }
    if m.scheme != Scheme::OddBalanced {
        return Err(Error::Unsupported("lattice circuits are generated for odd radices only".into()));
    }
    if req.first_step == 0 || req.first_step > req.last_step {
        return domain("step window must start at 1 or later and be non-empty");
    }
    let cap = super::step_capacity(m);
    if req.last_step > cap {
        return Err(Error::Range(format!(
            "{} steps requested but each axis supports {cap}",
            req.last_step
        )));
    }
    if req.mode == Mode::PaperFaithful && dims != 2 {
        return Err(Error::Unsupported("paper layout exists for two axes only".into()));
    }
    let (d, n) = (m.d, m.n_digits);
    let spec = lattice_spec(m, dims)?;
    let depth = digits_needed(d, n, req.last_step);
    let axis_wires = |a: usize| -> Vec<usize> { (0..n).map(|i| dims + a * n + i).collect() };
    let mut c = Circuit::new(spec);
    c.gates.extend(coin_gates(&req.coin, dims)?);
    match req.mode {
        Mode::DirectControls => {
            for pat in 0..2 * dims {
                let axis = pat / 2;
                let dir: i64 = if pat % 2 == 1 { 1 } else { -1 };
                let up = dir * m.sign == 1;
                let ctl = pattern_controls(pat, dims);
                c.gates.extend(cascade(d, &axis_wires(axis), &ctl, up, depth));
            }
            // flip-flop: reverse the direction bit
            c.push(Gate::not(dims - 1));
        }
        Mode::PaperFaithful => {
            let mut direct = Circuit::new(c.spec.clone());
            for (pat, axis, up) in [(0, 0, true), (1, 0, false), (3, 1, true), (2, 1, false)] {
                let ctl = pattern_controls(pat, dims);
                direct.gates.extend(cascade(d, &axis_wires(axis), &ctl, up, depth));
            }
            c.gates.extend(to_paper_faithful(&direct).gates);
        }
    }
    c.set_meta("walk", "lattice");
    c.set_meta("dims", dims);
    c.set_meta("d", d);
    c.set_meta("n_digits", n);
    c.set_meta("variant", m.variant.name());
    c.set_meta("scheme", m.scheme.name());
    c.set_meta("coin", req.coin.as_str());
    c.set_meta("mode", req.mode.name());
    c.set_meta("coin0_step", m.sign);
    c.set_meta("steps_first", req.first_step);
    c.set_meta("steps_last", req.last_step);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins;
    use crate::gates::ExecPolicy;
    use crate::mapping::Variant;

    fn coin_unitary(name: &str) -> Matrix {
        let spec = RadixSpec::new(vec![2, 2]).unwrap();
        let mut c = Circuit::new(spec);
        c.gates = coin_gates(name, 2).unwrap();
        let cols = c.unitary(ExecPolicy::Sequential).unwrap();
        let mut m = Matrix::zeros(4);
        for (j, col) in cols.iter().enumerate() {
            for (i, a) in col.amplitudes().iter().enumerate() {
                m.set(i, j, *a);
            }
        }
        m
    }

    #[test]
    fn coin_decompositions() {
        let g = coin_unitary("grover");
        assert!(g.max_abs_diff(&coins::grover(4)) < 1e-12);
        let f = coin_unitary("dft");
        assert!(f.max_abs_diff(&coins::dft(4)) < 1e-12, "{f:?}");
        let h = coin_unitary("hadamard");
        assert!(h.max_abs_diff(&coins::hadamard().kron(&coins::hadamard())) < 1e-12);
    }

    #[test]
    fn layout_and_errors() {
        let m = PositionMapping::generated(5, 1, Variant::Primary).unwrap();
        let c = synthesize_lattice(&LatticeRequest::new(m.clone(), 2, 2, Mode::PaperFaithful)).unwrap();
        assert_eq!(c.spec.radices(), &[2, 2, 5, 5]);
        assert!(synthesize_lattice(&LatticeRequest::new(m.clone(), 2, 3, Mode::DirectControls)).is_err());
        assert!(synthesize_lattice(&LatticeRequest::new(m.clone(), 1, 1, Mode::DirectControls)).is_err());
        let m4 = PositionMapping::generated(4, 2, Variant::Primary).unwrap();
        assert!(matches!(
            synthesize_lattice(&LatticeRequest::new(m4, 2, 1, Mode::DirectControls)),
            Err(Error::Unsupported(_))
        ));
        let c3 = synthesize_lattice(&LatticeRequest::new(m, 3, 2, Mode::DirectControls).with_coin("none")).unwrap();
        assert_eq!(c3.spec.wires(), 6);
    }
}
