//! Dense complex linear-algebra helpers on top of faer.

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cone, czero, re, CMat, Real};

pub fn check_square<T: Real>(m: &CMat<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn check_finite<T: Real>(m: &CMat<T>) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite);
            }
        }
    }
    Ok(())
}

pub fn identity<T: Real>(n: usize) -> CMat<T> {
    Mat::from_fn(n, n, |i, j| if i == j { cone() } else { czero() })
}

pub fn scaled_identity<T: Real>(n: usize, s: T) -> CMat<T> {
    Mat::from_fn(n, n, |i, j| if i == j { re(s) } else { czero() })
}

pub fn diag_real<T: Real>(d: &[T]) -> CMat<T> {
    let n = d.len();
    Mat::from_fn(n, n, |i, j| if i == j { re(d[i]) } else { czero() })
}

pub fn adjoint<T: Real>(m: &CMat<T>) -> CMat<T> {
    Mat::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

pub fn transpose<T: Real>(m: &CMat<T>) -> CMat<T> {
    Mat::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)])
}

pub fn conjugate<T: Real>(m: &CMat<T>) -> CMat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].conj())
}

pub fn scale<T: Real>(m: &CMat<T>, s: Complex<T>) -> CMat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}

/// `(m + m*) / 2`.
pub fn hermitian_part<T: Real>(m: &CMat<T>) -> CMat<T> {
    let half = T::one() / (T::one() + T::one());
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        (m[(i, j)] + m[(j, i)].conj()).scale(half)
    })
}

pub fn max_abs<T: Real>(m: &CMat<T>) -> T {
    let mut acc = T::zero();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc = Float::max(acc, m[(i, j)].norm());
        }
    }
    acc
}

/// Max-entry distance between two matrices of equal shape.
pub fn max_abs_diff<T: Real>(a: &CMat<T>, b: &CMat<T>) -> T {
    assert_eq!(
        (a.nrows(), a.ncols()),
        (b.nrows(), b.ncols()),
        "shape mismatch"
    );
    let mut acc = T::zero();
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc = Float::max(acc, (a[(i, j)] - b[(i, j)]).norm());
        }
    }
    acc
}

/// Max-entry distance between `m` and `m*`.
pub fn hermitian_deviation<T: Real>(m: &CMat<T>) -> T {
    let n = m.nrows();
    let mut acc = T::zero();
    for j in 0..n {
        for i in 0..=j {
            acc = Float::max(acc, (m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    acc
}

pub fn trace<T: Real>(m: &CMat<T>) -> Complex<T> {
    (0..m.nrows().min(m.ncols())).fold(czero(), |acc, i| acc + m[(i, i)])
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues descending, with
/// the matching eigenvectors as columns.
pub fn eigh<T: Real>(m: &CMat<T>) -> Result<(Vec<T>, CMat<T>)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Backend(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let values = (0..n).rev().map(|k| s[k].re).collect();
    let vectors = Mat::from_fn(n, n, |i, j| u[(i, n - 1 - j)]);
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn eigvalsh<T: Real>(m: &CMat<T>) -> Result<Vec<T>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut v = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Backend(format!("{e:?}")))?;
    v.reverse();
    Ok(v)
}

/// Eigenvalues of a general square matrix.
pub fn eigvals<T: Real>(m: &CMat<T>) -> Result<Vec<Complex<T>>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    m.eigenvalues()
        .map_err(|e| Error::Backend(format!("{e:?}")))
}

/// Singular values, descending.
pub fn singular_values<T: Real>(m: &CMat<T>) -> Result<Vec<T>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    m.singular_values()
        .map_err(|e| Error::Backend(format!("{e:?}")))
}

/// Number of singular values above `rel_tol * scale`.
pub fn numerical_rank<T: Real>(m: &CMat<T>, rel_tol: T, scale: T) -> Result<usize> {
    let cutoff = rel_tol * scale;
    Ok(singular_values(m)?
        .into_iter()
        .filter(|&s| s > cutoff)
        .count())
}

/// 2-norm condition number; infinite for an exactly singular matrix.
pub fn condition_number<T: Real>(m: &CMat<T>) -> Result<T> {
    let s = singular_values(m)?;
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > T::zero() => Ok(hi / lo),
        (Some(_), Some(_)) => Ok(T::infinity()),
        _ => Ok(T::one()),
    }
}

pub fn determinant<T: Real>(m: &CMat<T>) -> Complex<T> {
    if m.nrows() == 0 {
        return cone();
    }
    m.determinant()
}

/// `a⁻¹ b` through a partially pivoted LU factorization.
pub fn solve<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    if a.nrows() == 0 {
        return b.clone();
    }
    a.partial_piv_lu().solve(b)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function<T: Real>(m: &CMat<T>, f: impl Fn(T) -> T) -> Result<CMat<T>> {
    let (vals, vecs) = eigh(m)?;
    let mapped: Vec<T> = vals.into_iter().map(f).collect();
    Ok(reconstruct(&vecs, &mapped))
}

/// `V diag(d) V*`.
pub fn reconstruct<T: Real>(vecs: &CMat<T>, d: &[T]) -> CMat<T> {
    let n = vecs.nrows();
    let scaled = Mat::from_fn(n, d.len(), |i, j| vecs[(i, j)].scale(d[j]));
    &scaled * vecs.adjoint()
}

/// Square root of a positive semidefinite matrix; negative eigenvalue dust is
/// clamped to zero.
pub fn psd_sqrt<T: Real>(m: &CMat<T>) -> Result<CMat<T>> {
    hermitian_function(m, |x| Float::sqrt(Float::max(x, T::zero())))
}

/// True when `m + shift·1` admits a Cholesky factorization, i.e. the smallest
/// eigenvalue of the Hermitian matrix `m` exceeds `-shift` up to rounding.
pub fn cholesky_accepts<T: Real>(m: &CMat<T>, shift: T) -> bool {
    let n = m.nrows();
    if n == 0 {
        return true;
    }
    let shifted = Mat::from_fn(n, n, |i, j| {
        if i == j {
            m[(i, j)] + re(shift)
        } else {
            m[(i, j)]
        }
    });
    shifted.llt(Side::Lower).is_ok()
}

/// Kronecker product with `a` as the major (first) factor.
pub fn kron<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Block matrix `[[a, b], [c, d]]`.
pub fn block<T: Real>(a: &CMat<T>, b: &CMat<T>, c: &CMat<T>, d: &CMat<T>) -> CMat<T> {
    let (r1, c1) = (a.nrows(), a.ncols());
    let (r2, c2) = (d.nrows(), d.ncols());
    Mat::from_fn(r1 + r2, c1 + c2, |i, j| match (i < r1, j < c1) {
        (true, true) => a[(i, j)],
        (true, false) => b[(i, j - c1)],
        (false, true) => c[(i - r1, j)],
        (false, false) => d[(i - r1, j - c1)],
    })
}

pub fn direct_sum<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    let z12 = Mat::zeros(a.nrows(), b.ncols());
    let z21 = Mat::zeros(b.nrows(), a.ncols());
    block(a, &z12, &z21, b)
}

/// Sub-block `m[r0..r0+rows, c0..c0+cols]` as an owned matrix.
pub fn sub_block<T: Real>(m: &CMat<T>, r0: usize, c0: usize, rows: usize, cols: usize) -> CMat<T> {
    Mat::from_fn(rows, cols, |i, j| m[(r0 + i, c0 + j)])
}

/// Partial trace over the second factor of a `d1·d2` bipartite operator.
pub fn partial_trace_second<T: Real>(m: &CMat<T>, d1: usize, d2: usize) -> CMat<T> {
    Mat::from_fn(d1, d1, |i, j| {
        (0..d2).fold(czero(), |acc, k| acc + m[(i * d2 + k, j * d2 + k)])
    })
}

/// Partial trace over the first factor of a `d1·d2` bipartite operator.
pub fn partial_trace_first<T: Real>(m: &CMat<T>, d1: usize, d2: usize) -> CMat<T> {
    Mat::from_fn(d2, d2, |i, j| {
        (0..d1).fold(czero(), |acc, k| acc + m[(k * d2 + i, k * d2 + j)])
    })
}

pub fn inner<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter()
        .zip(v)
        .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b)
}

pub fn vec_norm<T: Real>(v: &[Complex<T>]) -> T {
    Float::sqrt(v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()))
}

pub fn mat_vec<T: Real>(m: &CMat<T>, v: &[Complex<T>]) -> Vec<Complex<T>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).fold(czero(), |acc, j| acc + m[(i, j)] * v[j]))
        .collect()
}

pub fn column<T: Real>(m: &CMat<T>, j: usize) -> Vec<Complex<T>> {
    (0..m.nrows()).map(|i| m[(i, j)]).collect()
}
