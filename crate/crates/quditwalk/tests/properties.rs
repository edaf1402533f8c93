use num_complex::Complex64;
use proptest::prelude::*;

use quditwalk::gates::{apply_gate_with, Circuit, ExecPolicy, Gate};
use quditwalk::mapping::{encode_odd, PositionMapping, Variant};
use quditwalk::state::{RadixSpec, StateVector};
use quditwalk::synth::peephole_optimize;

fn radices() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=5, 1..=4)
}

fn random_state(spec: RadixSpec, seed: &[f64]) -> StateVector {
    let n = spec.dimension();
    let amps: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(seed[i % seed.len()] + i as f64 * 0.01, seed[(i * 7 + 3) % seed.len()]))
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(spec, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

// Random shift gate on `spec`, controls on other wires.
fn gate_from(spec: &RadixSpec, pick: &[usize]) -> Gate {
    let w = spec.wires();
    let target = pick[0] % w;
    let r = spec.radix(target);
    let mut g = Gate::x(target, 1 + pick[1] % (r - 1).max(1));
    if pick[2] % 2 == 1 && w > 1 {
        let cw = (target + 1 + pick[3] % (w - 1)) % w;
        g = g.with_control(cw, pick[4] % spec.radix(cw));
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_roundtrip(r in radices(), k in 0usize..10_000) {
        let spec = RadixSpec::new(r).unwrap();
        let i = k % spec.dimension();
        let d = spec.digits(i).unwrap();
        prop_assert_eq!(spec.flat_index(&d).unwrap(), i);
    }

    #[test]
    fn odd_code_roundtrip(d in prop::sample::select(vec![3usize, 5, 7, 9]), n in 1usize..=3, alt in any::<bool>(), k in 0i64..1000) {
        let v = if alt { Variant::Alternative } else { Variant::Primary };
        let m = PositionMapping::generated(d, n, v).unwrap();
        let cap = m.max_position();
        let x = k % (2 * cap + 1) - cap;
        let code = m.encode(x).unwrap().to_vec();
        prop_assert_eq!(m.decode(&code).unwrap(), x);
        prop_assert_eq!(encode_odd(x, d, n, -1).unwrap(), encode_odd(-x, d, n, 1).unwrap());
    }

    #[test]
    fn lsq_law(d in 3usize..=8, n in 1usize..=3, k in 0i64..1000) {
        let m = PositionMapping::generated(d, n, Variant::Primary).unwrap();
        let lo = m.min_position();
        let x = lo + k % (m.max_position() - lo + 1);
        let lsq = *m.encode(x).unwrap().last().unwrap() as i64;
        let want = if m.sign == -1 { (-x).rem_euclid(d as i64) } else { x.rem_euclid(d as i64) };
        prop_assert_eq!(lsq, want);
    }

    #[test]
    fn nearest_neighbour_suffix(d in prop::sample::select(vec![3usize, 5, 7]), n in 1usize..=3, k in 0i64..1000) {
        let m = PositionMapping::generated(d, n, Variant::Primary).unwrap();
        let cap = m.max_position();
        let x = k % (2 * cap) - cap;
        let a = m.encode(x).unwrap();
        let b = m.encode(x + 1).unwrap();
        let first = a.iter().zip(b).position(|(p, q)| p != q).unwrap();
        prop_assert!(a[first..].iter().zip(&b[first..]).all(|(p, q)| p != q));
    }

    #[test]
    fn gates_keep_norm_and_policies_agree(r in radices(), picks in prop::collection::vec(prop::collection::vec(0usize..100, 5), 1..8), seed in prop::collection::vec(-1.0f64..1.0, 4)) {
        let spec = RadixSpec::new(r).unwrap();
        let mut a = random_state(spec.clone(), &seed);
        let mut b = a.clone();
        for p in &picks {
            let g = gate_from(&spec, p);
            apply_gate_with(&mut a, &g, ExecPolicy::Sequential).unwrap();
            apply_gate_with(&mut b, &g, ExecPolicy::Parallel).unwrap();
        }
        prop_assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert_eq!(a.amplitudes(), b.amplitudes());
    }

    #[test]
    fn fourier_keeps_norm(r in radices(), w in 0usize..4, seed in prop::collection::vec(-1.0f64..1.0, 4)) {
        let spec = RadixSpec::new(r).unwrap();
        let mut s = random_state(spec.clone(), &seed);
        apply_gate_with(&mut s, &Gate::fourier(w % spec.wires()), ExecPolicy::Sequential).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn peephole_keeps_unitary(r in prop::collection::vec(2usize..=4, 1..=3), picks in prop::collection::vec(prop::collection::vec(0usize..100, 5), 0..10)) {
        let spec = RadixSpec::new(r).unwrap();
        let mut c = Circuit::new(spec.clone());
        for p in &picks {
            c.push(gate_from(&spec, p));
        }
        let o = peephole_optimize(&c);
        prop_assert!(o.len() <= c.len());
        let ua = c.unitary(ExecPolicy::Sequential).unwrap();
        let ub = o.unitary(ExecPolicy::Sequential).unwrap();
        for (x, y) in ua.iter().zip(&ub) {
            prop_assert_eq!(x.amplitudes(), y.amplitudes());
        }
    }

    #[test]
    fn circuit_json_roundtrip(r in radices(), picks in prop::collection::vec(prop::collection::vec(0usize..100, 5), 0..10)) {
        let spec = RadixSpec::new(r).unwrap();
        let mut c = Circuit::new(spec.clone());
        c.push(Gate::fourier(0));
        for p in &picks {
            c.push(gate_from(&spec, p));
        }
        c.set_meta("d", 3);
        let back = Circuit::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(back, c);
    }
}
