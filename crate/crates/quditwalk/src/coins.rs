//! Coin operators.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::gates::fourier_matrix;
use crate::matrix::Matrix;

pub fn hadamard() -> Matrix {
    fourier_matrix(2)
}

/// `k`-point discrete Fourier transform.
pub fn dft(k: usize) -> Matrix {
    fourier_matrix(k)
}

/// Grover diffusion `2|s⟩⟨s| − I` over `k` directions.
pub fn grover(k: usize) -> Matrix {
    let mut m = Matrix::zeros(k);
    let off = 2.0 / k as f64;
    for i in 0..k {
        for j in 0..k {
            let v = if i == j { off - 1.0 } else { off };
            m.set(i, j, Complex64::new(v, 0.0));
        }
    }
    m
}

/// One-parameter lazy-walk coin, `ρ ∈ (0, 1)`.
pub fn lazy_g(rho: f64) -> Result<Matrix> {
    if !(rho > 0.0 && rho < 1.0) {
        return domain(format!("coin parameter {rho} outside (0, 1)"));
    }
    let r2 = rho * rho;
    let a = rho * (2.0 - 2.0 * r2).sqrt();
    Matrix::from_real(3, &[-r2, a, 1.0 - r2, a, 2.0 * r2 - 1.0, a, 1.0 - r2, a, -r2])
}

/// Resolves a coin name for a `k`-state coin.
pub fn named(name: &str, k: usize) -> Result<Matrix> {
    match name {
        "hadamard" if k == 2 => Ok(hadamard()),
        "hadamard" => domain(format!("hadamard is a 2-state coin, walk needs {k}")),
        "dft" | "fourier" => Ok(dft(k)),
        "grover" => Ok(grover(k)),
        other => domain(format!("unknown coin {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lazy_coin_at_grover_point() {
        let g = lazy_g((1.0f64 / 3.0).sqrt()).unwrap();
        let want = Matrix::from_real(3, &[-1.0, 2.0, 2.0, 2.0, -1.0, 2.0, 2.0, 2.0, -1.0])
            .unwrap();
        let third = Matrix::from_real(3, &[1.0 / 3.0, 0., 0., 0., 1.0 / 3.0, 0., 0., 0., 1.0 / 3.0]).unwrap();
        assert!(g.max_abs_diff(&third.mul(&want)) < 1e-15);
        assert!(g.is_unitary(1e-12));
        assert!(lazy_g(0.0).is_err());
        assert!(lazy_g(1.0).is_err());
        assert!(lazy_g(f64::NAN).is_err());
    }

    #[test]
    fn grover_properties() {
        for k in 2..8 {
            let g = grover(k);
            assert!(g.mul(&g).max_abs_diff(&Matrix::identity(k)) < 1e-14);
        }
        let g6 = grover(6);
        assert!((g6.get(0, 1).re - 2.0 / 6.0).abs() < 1e-15);
        assert!((g6.get(2, 2).re - (2.0 / 6.0 - 1.0)).abs() < 1e-15);
        let d = grover(4);
        assert_eq!(d.get(0, 0).re, -0.5);
        assert_eq!(d.get(0, 3).re, 0.5);
    }

    #[test]
    fn names() {
        assert!(named("hadamard", 2).is_ok());
        assert!(named("hadamard", 3).is_err());
        assert_eq!(named("dft", 3).unwrap().dim(), 3);
        assert!(named("spin", 2).is_err());
    }
}
