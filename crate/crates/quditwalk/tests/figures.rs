//! Paper-layout synthesis against the stored figure circuits.

use quditwalk::compare::{compare, CircuitWalk};
use quditwalk::gates::{Circuit, ExecPolicy, GateKind};
use quditwalk::golden;
use quditwalk::mapping::{PositionMapping, Variant};
use quditwalk::synth::{
    gate_count, peephole_optimize, synthesize_1d, synthesize_lattice, LatticeRequest, Mode, SynthesisRequest,
    Synthesized,
};

fn line(d: usize, n: usize, first: usize, last: usize) -> Synthesized {
    let m = PositionMapping::generated(d, n, Variant::Primary).unwrap();
    synthesize_1d(&SynthesisRequest::new(m, last, Mode::PaperFaithful).window(first, last)).unwrap()
}

fn lattice(d: usize, n: usize, last: usize) -> Circuit {
    let m = PositionMapping::generated(d, n, Variant::Primary).unwrap();
    synthesize_lattice(&LatticeRequest::new(m, 2, last, Mode::PaperFaithful)).unwrap()
}

fn single(s: Synthesized) -> Circuit {
    match s {
        Synthesized::Single(c) => c,
        _ => panic!("expected one circuit"),
    }
}

fn assert_same(id: &str, got: &Circuit) {
    let want = golden::circuit(id).unwrap();
    assert!(
        got.same_gates(&want),
        "{id}: synthesized\n{}\nstored\n{}",
        got.to_json(),
        want.to_json()
    );
}

#[test]
fn five_ary_figures() {
    assert_same("fig04", &single(line(5, 3, 1, 2)));
    assert_same("fig05", &single(line(5, 3, 3, 12)));
    assert_same("fig06", &single(line(5, 3, 13, 24)));
}

#[test]
fn seven_ary_figures() {
    assert_same("fig07", &single(line(7, 2, 1, 3)));
    assert_same("fig08", &single(line(7, 2, 4, 24)));
}

#[test]
fn four_ary_figures() {
    let Synthesized::Alternating { odd, even } = line(4, 3, 1, 17) else { panic!("even radix alternates") };
    assert_same("fig10", &odd);
    assert_same("fig11", &even);
}

#[test]
fn lattice_figures() {
    assert_same("fig13", &lattice(3, 2, 1));
    assert_same("fig16", &lattice(5, 1, 2));
}

#[test]
fn gate_counts() {
    let c4 = golden::circuit("fig04").unwrap();
    assert_eq!((c4.len(), gate_count(&c4).max_controls), (5, 1));
    let c5 = golden::circuit("fig05").unwrap();
    assert_eq!((c5.len(), gate_count(&c5).max_controls), (13, 2));
    let c6 = golden::circuit("fig06").unwrap();
    assert_eq!((c6.len(), gate_count(&c6).max_controls), (21, 3));
    let c8 = golden::circuit("fig08").unwrap();
    assert_eq!(c8.len(), 13);
}

fn walk(ids: &[&str]) -> CircuitWalk {
    CircuitWalk::from_circuits(ids.iter().map(|id| golden::circuit(id).unwrap()).collect()).unwrap()
}

fn steps_of(id: &str) -> usize {
    golden::circuit(id).unwrap().meta_i64("steps_last").unwrap() as usize
}

#[test]
fn stored_circuits_realize_the_walk() {
    for ids in [&["fig04"][..], &["fig05"], &["fig06"], &["fig07"], &["fig08"], &["fig10", "fig11"], &["fig13"], &["fig16"]] {
        let steps = steps_of(ids[0]);
        let r = compare(&walk(ids), steps, ExecPolicy::default()).unwrap();
        assert!(r.passes(), "{ids:?}: {:?}", r.tvd);
    }
}

#[test]
fn printed_layouts_fail() {
    // (ids, first failing prefix)
    let cases: [(&[&str], usize); 6] = [
        (&["fig06_printed"], 3),
        (&["fig08_printed"], 1),
        (&["fig09_printed"], 1),
        (&["fig10_printed", "fig11_printed"], 3),
        (&["fig13_printed"], 1),
        (&["fig16_printed"], 1),
    ];
    for (ids, fail) in cases {
        let r = compare(&walk(ids), steps_of(ids[0]), ExecPolicy::default()).unwrap();
        assert_eq!(r.first_failure(), Some(fail), "{ids:?}: {:?}", r.tvd);
    }
}

fn unitary_diff(a: &Circuit, b: &Circuit) -> f64 {
    let ua = a.unitary(ExecPolicy::Sequential).unwrap();
    let ub = b.unitary(ExecPolicy::Sequential).unwrap();
    let mut worst: f64 = 0.0;
    for (x, y) in ua.iter().zip(&ub) {
        for (p, q) in x.amplitudes().iter().zip(y.amplitudes()) {
            worst = worst.max((p - q).norm());
        }
    }
    worst
}

fn single_wire(c: &Circuit) -> usize {
    c.gates.iter().filter(|g| g.controls.is_empty() && !matches!(g.kind, GateKind::Fourier)).count()
}

#[test]
fn peephole_on_seven_ary_circuit() {
    let c8 = golden::circuit("fig08").unwrap();
    let o = peephole_optimize(&c8);
    assert!(single_wire(&o) < single_wire(&c8));
    assert_eq!(o.len(), 12);
    assert!(unitary_diff(&c8, &o) <= 1e-12);
    let r = compare(&CircuitWalk::from_circuits(vec![o]).unwrap(), 24, ExecPolicy::default()).unwrap();
    assert!(r.passes());
}

#[test]
fn peephole_is_idempotent() {
    for id in golden::circuit_ids() {
        let c = golden::circuit(id).unwrap();
        let o = peephole_optimize(&c);
        assert_eq!(peephole_optimize(&o), o, "{id}");
        assert!(o.len() <= c.len());
    }
}
