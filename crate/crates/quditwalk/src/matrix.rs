//! Small dense complex matrices for coins and gate blocks.

use num_complex::Complex64;

use crate::error::{domain, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn from_rows(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return domain(format!("{} entries do not form a {n}x{n} matrix", data.len()));
        }
        Ok(Self { n, data })
    }

    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        Self::from_rows(n, data.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.n + c] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (a, b) = (self.n, other.n);
        let n = a * b;
        let mut out = Self::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let x = self.get(i, j);
                for k in 0..b {
                    for l in 0..b {
                        out.set(i * b + k, j * b + l, x * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut acc = ZERO;
                for j in 0..n {
                    acc += self.data[i * n + j] * v[j];
                }
                acc
            })
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U†U − I|` over all entries.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint().mul(self).max_abs_diff(&Self::identity(self.n))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_and_mul() {
        let x = Matrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let i = Matrix::identity(2);
        let xi = x.kron(&i);
        assert_eq!(xi.get(0, 2), ONE);
        assert_eq!(xi.get(1, 3), ONE);
        assert_eq!(xi.mul(&xi), Matrix::identity(4));
        assert!(xi.is_unitary(1e-15));
    }

    #[test]
    fn rejects_ragged() {
        assert!(Matrix::from_real(2, &[1.0, 0.0, 0.0]).is_err());
    }
}
