#![allow(dead_code)]

use locfield::linalg::CMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

pub fn cmat(dim: usize, entries: &[(f64, f64)]) -> CMatrix<f64> {
    CMatrix::from_fn(dim, dim, |i, j| {
        let (re, im) = entries[i * dim + j];
        Complex64::new(re, im)
    })
}

/// Square complex matrix with entries in [-1, 1] + i[-1, 1].
pub fn square(dim: usize) -> impl Strategy<Value = CMatrix<f64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_map(move |e| cmat(dim, &e))
}

pub fn hermitian(dim: usize) -> impl Strategy<Value = CMatrix<f64>> {
    square(dim).prop_map(|m| m.hermitian_part())
}

/// `G G^dagger`, positive semidefinite.
pub fn psd(dim: usize) -> impl Strategy<Value = CMatrix<f64>> {
    square(dim).prop_map(|g| g.matmul(&g.adjoint()).unwrap())
}

/// Qubit basis index bit for site `i` (site 0 most significant).
pub fn bit(b: usize, i: usize, n: usize) -> usize {
    (b >> (n - 1 - i)) & 1
}
