//! Peephole merging of uncontrolled shifts.

use crate::gates::{Circuit, Gate, GateKind};

// Shift amount of an uncontrolled `X`/`not`, else `None`.
fn bare_shift(g: &Gate) -> Option<usize> {
    if !g.controls.is_empty() {
        return None;
    }
    match g.kind {
        GateKind::X(a) => Some(a),
        GateKind::Not => Some(1),
        _ => None,
    }
}

/// Merges `X_{+a}` and `X_{+b}` on one wire into `X_{+(a+b) mod d}` when no
/// gate in between touches the wire, and drops shifts that cancel.
pub fn peephole_optimize(c: &Circuit) -> Circuit {
    let mut gates: Vec<Gate> = c.gates.clone();
    loop {
        let mut changed = false;
        'scan: for i in 0..gates.len() {
            let Some(a) = bare_shift(&gates[i]) else { continue };
            let w = gates[i].target;
            let Some(j) = (i + 1..gates.len()).find(|&j| gates[j].touches(w)) else { continue };
            let Some(b) = bare_shift(&gates[j]) else { continue };
            let r = c.spec.radix(w);
            let sum = (a + b) % r;
            gates.remove(j);
            if sum == 0 {
                gates.remove(i);
            } else {
                gates[i] = if r == 2 { Gate::not(w) } else { Gate::x(w, sum) };
            }
            changed = true;
            break 'scan;
        }
        if !changed {
            break;
        }
    }
    Circuit { spec: c.spec.clone(), gates, metadata: c.metadata.clone() }
}
