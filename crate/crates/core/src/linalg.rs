//! Small dense helpers over `faer` matrices.
//!
//! Every product runs sequentially (`Par::Seq`) so that summation order, and
//! therefore every emitted digit, is independent of the machine's core count.

use faer::linalg::matmul::matmul;
use faer::traits::Conjugate;
use faer::{Accum, Mat, MatRef, Par};

pub use faer::c64;

pub(crate) fn mul<A, B>(a: MatRef<'_, A>, b: MatRef<'_, B>) -> Mat<c64>
where
    A: Conjugate<Canonical = c64>,
    B: Conjugate<Canonical = c64>,
{
    let mut out = Mat::<c64>::zeros(a.nrows(), b.ncols());
    matmul(out.as_mut(), Accum::Replace, a, b, c64::new(1.0, 0.0), Par::Seq);
    out
}

/// `a · b · c`, evaluated left to right.
pub(crate) fn mul3<A, B, C>(a: MatRef<'_, A>, b: MatRef<'_, B>, c: MatRef<'_, C>) -> Mat<c64>
where
    A: Conjugate<Canonical = c64>,
    B: Conjugate<Canonical = c64>,
    C: Conjugate<Canonical = c64>,
{
    let ab = mul(a, b);
    mul(ab.as_ref(), c)
}

pub(crate) fn commutator(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> Mat<c64> {
    let ab = mul(a, b);
    let ba = mul(b, a);
    &ab - &ba
}

pub(crate) fn max_abs(a: MatRef<'_, c64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

pub(crate) fn max_abs_diff(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

/// max |a_pq − conj(a_qp)|
pub(crate) fn hermiticity_defect(a: MatRef<'_, c64>) -> f64 {
    let n = a.nrows();
    let mut m = 0.0f64;
    for q in 0..n {
        for p in q..n {
            m = m.max((a[(p, q)] - a[(q, p)].conj()).norm());
        }
    }
    m
}

pub(crate) fn all_finite(a: MatRef<'_, c64>) -> bool {
    (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| a[(i, j)].re.is_finite() && a[(i, j)].im.is_finite()))
}

pub(crate) fn trace(a: MatRef<'_, c64>) -> c64 {
    (0..a.nrows().min(a.ncols())).fold(c64::new(0.0, 0.0), |acc, i| acc + a[(i, i)])
}

/// Tr(a · b) without forming the product.
pub(crate) fn trace_of_product(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> c64 {
    let mut acc = c64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}
