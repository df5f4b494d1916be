//! Thin wrapper over the dense Hermitian eigensolver.
//!
//! Singular values are always obtained by an eigendecomposition of the
//! Hermitian Gram matrix a*a; results are deterministic because the
//! solver is pinned to sequential execution.

use faer::prelude::*;
use num_complex::Complex64;

use crate::error::{Error, Result};

fn frobenius(a: &Mat<c64>) -> f64 {
    let mut s = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            s += a[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

/// Eigenvalues of the Hermitian matrix `h`, ascending.
pub fn hermitian_eigenvalues(h: &Mat<c64>) -> Result<Vec<f64>> {
    let evd = h
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Eigen {
            size: h.nrows(),
            frobenius: frobenius(h),
            detail: format!("{e:?}"),
        })?;
    let s = evd.S();
    Ok((0..h.nrows()).map(|i| s.column_vector()[i].re).collect())
}

/// Gram matrix a*a (Hermitian, positive semidefinite).
pub fn gram(a: &Mat<c64>) -> Mat<c64> {
    a.adjoint() * a
}

/// Singular values of `a`, descending, via eigenvalues of a*a.
pub fn singular_values(a: &Mat<c64>) -> Result<Vec<f64>> {
    let g = gram(a);
    let mut vals = hermitian_eigenvalues(&g)?;
    vals.reverse();
    Ok(vals.iter().map(|&l| l.max(0.0).sqrt()).collect())
}

pub fn to_faer(n: usize, entry: impl Fn(usize, usize) -> Complex64) -> Mat<c64> {
    Mat::from_fn(n, n, |i, j| entry(i, j))
}

pub(crate) fn pin_sequential() {
    use std::sync::Once;
    static ONCE: Once = Once::new();
    ONCE.call_once(|| {
        faer::set_global_parallelism(faer::Par::Seq);
    });
}
