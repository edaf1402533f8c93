//! Mixed-radix registers and dense state vectors.
//!
//! Wire 0 is the most significant digit of the flat index, so a register
//! `[2, 5, 5, 5]` holding `|1⟩|004⟩` sits at index `1*125 + 4 = 129`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Largest register we are willing to allocate (amplitudes).
pub const MAX_DIMENSION: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RadixSpec {
    radices: Vec<usize>,
}

impl RadixSpec {
    pub fn new(radices: Vec<usize>) -> Result<Self> {
        if radices.is_empty() {
            return domain("register needs at least one wire");
        }
        let mut dim: usize = 1;
        for (w, &r) in radices.iter().enumerate() {
            if r < 2 {
                return domain(format!("wire {w} has radix {r}, need at least 2"));
            }
            dim = match dim.checked_mul(r) {
                Some(v) if v <= MAX_DIMENSION => v,
                _ => return domain("register dimension too large"),
            };
        }
        Ok(Self { radices })
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn wires(&self) -> usize {
        self.radices.len()
    }

    pub fn radix(&self, wire: usize) -> usize {
        self.radices[wire]
    }

    pub fn dimension(&self) -> usize {
        self.radices.iter().product()
    }

    /// Stride of each wire in the flat index.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.radices.len()];
        for w in (0..self.radices.len().saturating_sub(1)).rev() {
            s[w] = s[w + 1] * self.radices[w + 1];
        }
        s
    }

    pub fn stride(&self, wire: usize) -> usize {
        self.radices[wire + 1..].iter().product()
    }

    pub fn flat_index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.radices.len() {
            return domain(format!(
                "expected {} digits, got {}",
                self.radices.len(),
                digits.len()
            ));
        }
        let mut idx = 0;
        for (w, (&d, &r)) in digits.iter().zip(&self.radices).enumerate() {
            if d >= r {
                return domain(format!("digit {d} on wire {w} exceeds radix {r}"));
            }
            idx = idx * r + d;
        }
        Ok(idx)
    }

    pub fn digits(&self, mut index: usize) -> Result<Vec<usize>> {
        if index >= self.dimension() {
            return domain(format!("index {index} outside register"));
        }
        let mut out = vec![0; self.radices.len()];
        for w in (0..self.radices.len()).rev() {
            out[w] = index % self.radices[w];
            index /= self.radices[w];
        }
        Ok(out)
    }

    #[inline]
    pub(crate) fn digit_at(&self, index: usize, stride: usize, wire: usize) -> usize {
        (index / stride) % self.radices[wire]
    }
}

/// Convenience wrapper around [`RadixSpec::flat_index`].
pub fn flat_index(spec: &RadixSpec, digits: &[usize]) -> Result<usize> {
    spec.flat_index(digits)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    spec: RadixSpec,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(spec: RadixSpec) -> Self {
        let n = spec.dimension();
        Self {
            spec,
            amps: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_amplitudes(spec: RadixSpec, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != spec.dimension() {
            return domain(format!(
                "{} amplitudes for a register of dimension {}",
                amps.len(),
                spec.dimension()
            ));
        }
        Ok(Self { spec, amps })
    }

    pub fn spec(&self) -> &RadixSpec {
        &self.spec
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probability(&self, digits: &[usize]) -> Result<f64> {
        Ok(self.amps[self.spec.flat_index(digits)?].norm_sqr())
    }

    /// Marginal distribution over `wires`, keyed by their digits in the given order.
    pub fn measure(&self, wires: &[usize]) -> Result<BTreeMap<Vec<usize>, f64>> {
        measure_register(self, wires)
    }
}

pub fn basis_state(spec: &RadixSpec, digits: &[usize]) -> Result<StateVector> {
    let idx = spec.flat_index(digits)?;
    let mut s = StateVector::zero(spec.clone());
    s.amps[idx] = Complex64::new(1.0, 0.0);
    Ok(s)
}

/// Marginal probabilities of the named wires.
///
/// Sums run in index order so the result is reproducible bit for bit.
pub fn measure_register(state: &StateVector, wires: &[usize]) -> Result<BTreeMap<Vec<usize>, f64>> {
    let spec = state.spec();
    let mut seen = vec![false; spec.wires()];
    for &w in wires {
        if w >= spec.wires() {
            return domain(format!("wire {w} not in register"));
        }
        if seen[w] {
            return domain(format!("wire {w} listed twice"));
        }
        seen[w] = true;
    }
    let strides = spec.strides();
    let mut out = BTreeMap::new();
    for (i, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let key: Vec<usize> = wires
            .iter()
            .map(|&w| spec.digit_at(i, strides[w], w))
            .collect();
        *out.entry(key).or_insert(0.0) += p;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_index_examples() {
        let s = RadixSpec::new(vec![2, 5, 5, 5]).unwrap();
        assert_eq!(s.flat_index(&[0, 0, 0, 0]).unwrap(), 0);
        assert_eq!(s.flat_index(&[1, 4, 4, 4]).unwrap(), 249);
        let t = RadixSpec::new(vec![3, 3]).unwrap();
        assert_eq!(t.flat_index(&[1, 2]).unwrap(), 5);
        assert!(s.flat_index(&[0, 5, 0, 0]).is_err());
        assert!(s.flat_index(&[0, 0, 0]).is_err());
    }

    #[test]
    fn rejects_bad_radix() {
        assert!(RadixSpec::new(vec![2, 1]).is_err());
        assert!(RadixSpec::new(vec![]).is_err());
    }

    #[test]
    fn digits_roundtrip() {
        let s = RadixSpec::new(vec![2, 3, 4, 5]).unwrap();
        for i in 0..s.dimension() {
            let d = s.digits(i).unwrap();
            assert_eq!(s.flat_index(&d).unwrap(), i);
        }
        assert_eq!(s.strides(), vec![60, 20, 5, 1]);
        assert_eq!(s.stride(1), 20);
    }

    #[test]
    fn basis_states() {
        let s = RadixSpec::new(vec![2, 2]).unwrap();
        let v = basis_state(&s, &[1, 1]).unwrap();
        assert_eq!(v.amplitudes()[3], Complex64::new(1.0, 0.0));
        assert_eq!(v.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 1);
        let q = RadixSpec::new(vec![3, 3, 3, 3]).unwrap();
        assert_eq!(basis_state(&q, &[0; 4]).unwrap().amplitudes()[0].re, 1.0);
    }

    #[test]
    fn marginals() {
        let s = RadixSpec::new(vec![2, 5, 5, 5]).unwrap();
        let v = basis_state(&s, &[1, 0, 0, 4]).unwrap();
        let m = measure_register(&v, &[1, 2, 3]).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[&vec![0, 0, 4]], 1.0);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 250];
        amps[s.flat_index(&[0, 0, 0, 1]).unwrap()] = Complex64::new(h, 0.0);
        amps[s.flat_index(&[1, 0, 0, 4]).unwrap()] = Complex64::new(0.0, h);
        let v = StateVector::from_amplitudes(s, amps).unwrap();
        let m = v.measure(&[1, 2, 3]).unwrap();
        assert!((m[&vec![0, 0, 1]] - 0.5).abs() < 1e-15);
        assert!((m[&vec![0, 0, 4]] - 0.5).abs() < 1e-15);
        let c = v.measure(&[0]).unwrap();
        assert!((c[&vec![0]] - 0.5).abs() < 1e-15);
        assert!(v.measure(&[1, 1]).is_err());
        assert!(v.measure(&[7]).is_err());
    }
}
