//! Closed-form increment/decrement cascade for the balanced odd-radix code.
//!
//! Coin 0 adds one to the code value, coin 1 subtracts one. After an
//! increment, digit `k` must carry exactly when every lower digit has just
//! wrapped to `(d+1)/2`; after a decrement the borrow boundary is `(d−1)/2`.

use crate::error::Result;
use crate::gates::{Circuit, Control, Gate};

use super::{base_metadata, coin_gate, line_spec, Mode, SynthesisRequest};

/// Number of carry digits a walk of `last_step` steps can disturb.
pub(crate) fn digits_needed(d: usize, n: usize, last_step: usize) -> usize {
    let mut k = 0;
    let mut p = d;
    while k + 1 < n && last_step >= (p + 1) / 2 {
        k += 1;
        p = p.saturating_mul(d);
    }
    k
}

/// Carry gate for digit `k` (counted from the LSQ) of an axis.
///
/// `wires[0]` is the most significant digit; intermediates trigger on the
/// carry boundary, the LSQ on `lsq_value`.
pub(crate) fn carry_gate(d: usize, wires: &[usize], coin: &[Control], up: bool, k: usize, lsq_value: usize) -> Gate {
    let n = wires.len();
    let boundary = boundary(d, up);
    let mut controls: Vec<Control> = coin.to_vec();
    controls.extend(wires[n - k..n - 1].iter().map(|&w| Control::new(w, boundary)));
    controls.push(Control::new(wires[n - 1], lsq_value));
    controls.sort();
    Gate::x(wires[n - 1 - k], step_shift(d, up)).controlled(controls)
}

pub(crate) fn boundary(d: usize, up: bool) -> usize {
    if up {
        (d + 1) / 2
    } else {
        (d - 1) / 2
    }
}

pub(crate) fn step_shift(d: usize, up: bool) -> usize {
    if up {
        1
    } else {
        d - 1
    }
}

/// Direct-trigger cascade for one axis and one move direction.
pub(crate) fn cascade(d: usize, wires: &[usize], coin: &[Control], up: bool, depth: usize) -> Vec<Gate> {
    let lsq = wires[wires.len() - 1];
    let mut out = vec![Gate::x(lsq, step_shift(d, up)).controlled(coin.iter().copied())];
    for k in 1..=depth {
        out.push(carry_gate(d, wires, coin, up, k, boundary(d, up)));
    }
    out
}

pub(crate) fn synthesize(req: &SynthesisRequest) -> Result<Circuit> {
    let m = &req.mapping;
    let (d, n) = (m.d, m.n_digits);
    let wires: Vec<usize> = (1..=n).collect();
    let lsq = n;
    let depth = digits_needed(d, n, req.last_step);
    let mut c = Circuit::new(line_spec(m));
    c.push(coin_gate(&req.coin, 0)?);
    match req.mode {
        Mode::DirectControls => {
            c.gates.extend(cascade(d, &wires, &[Control::new(0, 0)], true, depth));
            c.gates.extend(cascade(d, &wires, &[Control::new(0, 1)], false, depth));
        }
        Mode::PaperFaithful => {
            let on = [Control::new(0, 1)];
            c.push(Gate::not(0));
            c.push(Gate::x(lsq, 1).controlled(on));
            c.push(Gate::not(0));
            c.push(Gate::x(lsq, d - 1).controlled(on));
            let a = d - 1 - boundary(d, true);
            let b = d - 1 - boundary(d, false);
            for k in 1..=depth {
                c.push(Gate::not(0));
                if a != 0 {
                    c.push(Gate::x(lsq, a));
                }
                c.push(carry_gate(d, &wires, &on, true, k, d - 1));
                c.push(Gate::not(0));
                if a != 0 {
                    c.push(Gate::x(lsq, d - a));
                }
                c.push(Gate::x(lsq, b));
                c.push(carry_gate(d, &wires, &on, false, k, d - 1));
                c.push(Gate::x(lsq, d - b));
            }
        }
    }
    base_metadata(&mut c, &req.coin, m, req.mode);
    c.set_meta("coin0_step", m.sign);
    Ok(c)
}
