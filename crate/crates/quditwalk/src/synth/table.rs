//! Table-driven synthesis for encodings without a carry rule.
//!
//! Each coin branch is a partial permutation `code(x) → code(x ± 1)` over
//! the positions a step can start from. Digits are rewritten one at a time;
//! the shift a digit needs must be a function of the other digits' current
//! values, and the gates realizing it are picked by a greedy cube cover over
//! those values. Every digit order is tried and the cheapest kept.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gates::{Circuit, Control, Gate};

use super::{base_metadata, coin_gate, line_spec, shift_gate, to_paper_faithful, Mode, SynthesisRequest};

/// One branch of a step: the gates it emits all carry `controls`.
#[derive(Debug, Clone)]
pub struct TableBranch {
    pub controls: Vec<Control>,
    /// Digit wires, most significant first.
    pub wires: Vec<usize>,
    pub radix: usize,
    pub pairs: Vec<(Vec<usize>, Vec<usize>)>,
}

type Cost = (usize, usize);

fn cost(gates: &[Gate]) -> Cost {
    (gates.len(), gates.iter().map(|g| g.controls.len()).sum())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

// Gates rewriting slot `j` for every row; `None` if the needed shift is not
// a function of the other digits.
fn slot_gates(b: &TableBranch, cur: &[Vec<usize>], j: usize) -> Option<Vec<Gate>> {
    let d = b.radix;
    let n = b.wires.len();
    let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    let need: Vec<usize> =
        cur.iter().zip(&b.pairs).map(|(c, (_, t))| (t[j] + d - c[j]) % d).collect();
    let mut by_feature: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (row, &s) in cur.iter().zip(&need) {
        let f: Vec<usize> = others.iter().map(|&i| row[i]).collect();
        if let Some(prev) = by_feature.insert(f, s) {
            if prev != s {
                return None;
            }
        }
    }
    let mut covered: Vec<bool> = need.iter().map(|&s| s == 0).collect();
    let mut gates = Vec::new();
    while covered.iter().any(|c| !c) {
        // (controls, usize::MAX - coverage, mask, seed row)
        let mut best: Option<(usize, usize, u32, usize)> = None;
        for (row, _) in cur.iter().enumerate().filter(|(r, _)| !covered[*r]) {
            for mask in 0u32..(1 << others.len()) {
                let matches = |other: &Vec<usize>| {
                    others
                        .iter()
                        .enumerate()
                        .all(|(bit, &i)| mask & (1 << bit) == 0 || other[i] == cur[row][i])
                };
                let mut hits = 0;
                let mut ok = true;
                for (r2, c2) in cur.iter().enumerate() {
                    if matches(c2) {
                        if covered[r2] || need[r2] != need[row] {
                            ok = false;
                            break;
                        }
                        hits += 1;
                    }
                }
                if !ok {
                    continue;
                }
                let key = (mask.count_ones() as usize, usize::MAX - hits, mask, row);
                if best.map_or(true, |b| (key.0, key.1) < (b.0, b.1)) {
                    best = Some(key);
                }
            }
        }
        let (_, _, mask, row) = best?;
        let mut controls = b.controls.clone();
        for (bit, &i) in others.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                controls.push(Control::new(b.wires[i], cur[row][i]));
            }
        }
        controls.sort();
        for (r2, c2) in cur.iter().enumerate() {
            let hit = others
                .iter()
                .enumerate()
                .all(|(bit, &i)| mask & (1 << bit) == 0 || c2[i] == cur[row][i]);
            if hit {
                covered[r2] = true;
            }
        }
        gates.push(shift_gate(b.wires[j], need[row], d).controlled(controls));
    }
    Some(gates)
}

fn synthesize_order(b: &TableBranch, start: &[Vec<usize>], order: &[usize]) -> Option<Vec<Gate>> {
    let mut cur = start.to_vec();
    let mut gates = Vec::new();
    for &j in order {
        gates.extend(slot_gates(b, &cur, j)?);
        for (row, (_, t)) in cur.iter_mut().zip(&b.pairs) {
            row[j] = t[j];
        }
    }
    Some(gates)
}

fn best_order(b: &TableBranch, start: &[Vec<usize>]) -> Option<Vec<Gate>> {
    let mut best: Option<Vec<Gate>> = None;
    for order in permutations(b.wires.len()) {
        if let Some(g) = synthesize_order(b, start, &order) {
            if best.as_ref().map_or(true, |cur| cost(&g) < cost(cur)) {
                best = Some(g);
            }
        }
    }
    best
}

// A prelude gate: slot, cube over other slots as (slot, value), shift.
type Move = (usize, Vec<(usize, usize)>, usize);

fn candidate_moves(b: &TableBranch, cur: &[Vec<usize>]) -> Vec<Move> {
    let n = b.wires.len();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for row in cur {
        for j in 0..n {
            let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
            for mask in 0u32..(1 << others.len()) {
                let cube: Vec<(usize, usize)> = others
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, &i)| (i, row[i]))
                    .collect();
                for a in 1..b.radix {
                    let m = (j, cube.clone(), a);
                    if seen.insert(m.clone()) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

fn apply_move(cur: &[Vec<usize>], m: &Move, d: usize) -> Vec<Vec<usize>> {
    cur.iter()
        .map(|r| {
            let mut r = r.clone();
            if m.1.iter().all(|&(i, v)| r[i] == v) {
                r[m.0] = (r[m.0] + m.2) % d;
            }
            r
        })
        .collect()
}

// Depth-limited search for shifts that make some digit order work.
fn prelude(b: &TableBranch, cur: &[Vec<usize>], depth: usize) -> Option<(Vec<Move>, Vec<Gate>)> {
    if let Some(g) = best_order(b, cur) {
        return Some((Vec::new(), g));
    }
    if depth == 0 {
        return None;
    }
    for m in candidate_moves(b, cur) {
        if let Some((mut moves, g)) = prelude(b, &apply_move(cur, &m, b.radix), depth - 1) {
            moves.insert(0, m);
            return Some((moves, g));
        }
    }
    None
}

const MAX_PRELUDE: usize = 2;

/// Cheapest gate list found for one branch.
///
/// When the shift a digit needs depends on that digit's own value, no
/// digit order works directly; a few extra shifts on other digits are then
/// searched for that split the offending rows apart first.
pub fn synthesize_from_table(b: &TableBranch) -> Result<Vec<Gate>> {
    let start: Vec<Vec<usize>> = b.pairs.iter().map(|(s, _)| s.clone()).collect();
    for depth in 0..=MAX_PRELUDE {
        if let Some((moves, tail)) = prelude(b, &start, depth) {
            let mut gates: Vec<Gate> = moves
                .into_iter()
                .map(|(j, cube, a)| {
                    let mut controls = b.controls.clone();
                    controls.extend(cube.into_iter().map(|(i, v)| Control::new(b.wires[i], v)));
                    controls.sort();
                    shift_gate(b.wires[j], a, b.radix).controlled(controls)
                })
                .collect();
            gates.extend(tail);
            return Ok(gates);
        }
    }
    Err(Error::Unsupported("no digit order realizes this step with shift gates".into()))
}

/// One step circuit. `parity` restricts start positions to even (`Some(0)`)
/// or odd (`Some(1)`) values; `None` takes every position.
pub(crate) fn synthesize_phase(req: &SynthesisRequest, parity: Option<i64>) -> Result<Circuit> {
    let m = &req.mapping;
    let reach = req.last_step as i64 - 1;
    let starts: Vec<i64> = (-reach..=reach)
        .filter(|x| parity.map_or(true, |p| x.rem_euclid(2) == p))
        .collect();
    let wires: Vec<usize> = (1..=m.n_digits).collect();
    let mut c = Circuit::new(line_spec(m));
    c.push(coin_gate(&req.coin, 0)?);
    for (coin, delta) in [(0usize, 1i64), (1, -1)] {
        let pairs = starts
            .iter()
            .map(|&x| Ok((m.encode(x)?.to_vec(), m.encode(x + delta)?.to_vec())))
            .collect::<Result<Vec<_>>>()?;
        let branch = TableBranch {
            controls: vec![Control::new(0, coin)],
            wires: wires.clone(),
            radix: m.d,
            pairs,
        };
        c.gates.extend(synthesize_from_table(&branch)?);
    }
    if req.mode == Mode::PaperFaithful {
        c = to_paper_faithful(&c);
    }
    base_metadata(&mut c, &req.coin, m, req.mode);
    c.set_meta("coin0_step", 1);
    if let Some(p) = parity {
        c.set_meta("phase", if p == 0 { "odd-steps" } else { "even-steps" });
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::run_circuit;
    use crate::state::basis_state;

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    fn realizes(b: &TableBranch, gates: Vec<Gate>) {
        let spec = crate::state::RadixSpec::new(vec![b.radix; b.wires.len()]).unwrap();
        let mut c = Circuit::new(spec.clone());
        c.gates = gates;
        for (src, dst) in &b.pairs {
            let mut s = basis_state(&spec, src).unwrap();
            run_circuit(&mut s, &c).unwrap();
            assert_eq!(s.probability(dst).unwrap(), 1.0);
        }
    }

    #[test]
    fn branch_realizes_pairs() {
        // 2-digit base 4 counter over a few values
        let pairs: Vec<(Vec<usize>, Vec<usize>)> = (0..7usize)
            .map(|v| (vec![v / 4, v % 4], vec![(v + 1) / 4, (v + 1) % 4]))
            .collect();
        let b = TableBranch { controls: vec![], wires: vec![0, 1], radix: 4, pairs };
        realizes(&b, synthesize_from_table(&b).unwrap());
    }

    #[test]
    fn self_dependent_branch_gets_prelude() {
        // swapping 00 and 11 while fixing 01 needs a digit to see itself
        let pairs = vec![(vec![0, 0], vec![1, 1]), (vec![1, 1], vec![0, 0]), (vec![0, 1], vec![0, 1])];
        let b = TableBranch { controls: vec![], wires: vec![0, 1], radix: 2, pairs };
        let start: Vec<Vec<usize>> = b.pairs.iter().map(|(s, _)| s.clone()).collect();
        assert!(best_order(&b, &start).is_none());
        realizes(&b, synthesize_from_table(&b).unwrap());
    }
}
