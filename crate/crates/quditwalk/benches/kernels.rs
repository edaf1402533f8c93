use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use quditwalk::coins;
use quditwalk::gates::{apply_gate_with, ExecPolicy, Gate};
use quditwalk::mapping::{PositionMapping, Variant};
use quditwalk::oracle::{evolve_with, WalkSpec, WalkVariant};
use quditwalk::state::{RadixSpec, StateVector};
use quditwalk::synth::{synthesize_1d, Mode, SynthesisRequest};
use quditwalk::compare::CircuitWalk;

const POLICIES: [(&str, ExecPolicy); 2] = [("sequential", ExecPolicy::Sequential), ("parallel", ExecPolicy::Parallel)];

fn gate_kernels(c: &mut Criterion) {
    // 2 · 5^8 ≈ 781k amplitudes
    let mut radices = vec![2];
    radices.extend([5; 8]);
    let spec = RadixSpec::new(radices).unwrap();
    let gates = [
        ("fourier", Gate::fourier(4)),
        ("shift", Gate::x(8, 2)),
        ("mct", Gate::x(3, 1).with_control(0, 1).with_control(8, 4).with_control(7, 3)),
    ];
    let mut g = c.benchmark_group("gate");
    for (name, gate) in &gates {
        for (pname, policy) in POLICIES {
            g.bench_with_input(BenchmarkId::new(*name, pname), &policy, |b, &policy| {
                let mut s = StateVector::zero(spec.clone());
                b.iter(|| apply_gate_with(black_box(&mut s), gate, policy).unwrap());
            });
        }
    }
    g.finish();
}

fn oracle_steps(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for (pname, policy) in POLICIES {
        g.bench_function(BenchmarkId::new("grover2d_60", pname), |b| {
            let spec = WalkSpec::new(WalkVariant::Lattice2D, coins::grover(4), 60).with_uniform_coin();
            b.iter(|| evolve_with(black_box(&spec), policy).unwrap());
        });
        g.bench_function(BenchmarkId::new("line_2000", pname), |b| {
            let spec = WalkSpec::new(WalkVariant::Line, coins::hadamard(), 2000);
            b.iter(|| evolve_with(black_box(&spec), policy).unwrap());
        });
    }
    g.finish();
}

fn circuit_walk(c: &mut Criterion) {
    let m = PositionMapping::generated(5, 5, Variant::Primary).unwrap();
    let s = synthesize_1d(&SynthesisRequest::new(m.clone(), 200, Mode::PaperFaithful)).unwrap();
    let w = CircuitWalk::new(s, m);
    let mut g = c.benchmark_group("circuit");
    g.sample_size(10);
    for (pname, policy) in POLICIES {
        g.bench_function(BenchmarkId::new("five_ary_200", pname), |b| {
            b.iter(|| w.final_state(200, policy).unwrap());
        });
    }
    g.finish();
}

criterion_group!(benches, gate_kernels, oracle_steps, circuit_walk);
criterion_main!(benches);
