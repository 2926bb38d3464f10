//! One-particle symbols: validation, spectral data and convex mixing.
//!
//! A symbol is a Hermitian `d×d` matrix `Q` with `0 ≤ Q ≤ 1`. It fixes the
//! gauge-invariant quasi-free state `ω_Q` through its two-point function
//! `ω_Q(a*(e_j) a(e_i)) = Q_ij`.

use std::sync::OnceLock;

use faer::Mat;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{re, thresh, CMat, Real};

/// Default validation tolerance for symbols and channels.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative singular-value cutoff for the rank test in [`mix_symbols`].
pub const MIX_RANK_TOL: f64 = 1e-9;

/// A validated one-particle symbol.
///
/// The spectrum is computed lazily. Validation itself only needs two
/// Cholesky factorizations, which keeps large-`d` construction cheap.
#[derive(Debug)]
pub struct Symbol<T: Real> {
    matrix: CMat<T>,
    eigenvalues: OnceLock<Vec<T>>,
    spectral: OnceLock<SpectralSymbol<T>>,
}

/// Eigenvalues (descending, clamped to `[0, 1]`) and a unitary whose columns
/// are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralSymbol<T: Real> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: CMat<T>,
}

impl<T: Real> Clone for Symbol<T> {
    fn clone(&self) -> Self {
        Self {
            matrix: self.matrix.clone(),
            eigenvalues: self.eigenvalues.clone(),
            spectral: self.spectral.clone(),
        }
    }
}

impl<T: Real> Symbol<T> {
    /// Validates `m` with the default tolerance.
    pub fn new(m: &CMat<T>) -> Result<Self> {
        validate_symbol(m, thresh(DEFAULT_TOL))
    }

    /// Symbol `diag(q)`.
    pub fn diagonal(q: &[T]) -> Result<Self> {
        Self::new(&linalg::diag_real(q))
    }

    /// The multiple `s·1` of the identity on `d` modes.
    pub fn scalar(d: usize, s: T) -> Result<Self> {
        Self::new(&linalg::scaled_identity(d, s))
    }

    fn from_parts(matrix: CMat<T>, eigenvalues: Option<Vec<T>>) -> Self {
        let cell = OnceLock::new();
        if let Some(v) = eigenvalues {
            let _ = cell.set(v);
        }
        Self {
            matrix,
            eigenvalues: cell,
            spectral: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat<T> {
        self.matrix
    }

    /// Eigenvalues in descending order, clamped into `[0, 1]`.
    pub fn eigenvalues(&self) -> Result<&[T]> {
        if let Some(v) = self.eigenvalues.get() {
            return Ok(v);
        }
        let v = clamp_unit(linalg::eigvalsh(&self.matrix)?);
        let _ = self.eigenvalues.set(v);
        Ok(self.eigenvalues.get().expect("initialized above"))
    }

    /// Full spectral decomposition, cached after the first call.
    pub fn spectral(&self) -> Result<&SpectralSymbol<T>> {
        if let Some(s) = self.spectral.get() {
            return Ok(s);
        }
        let (vals, vecs) = linalg::eigh(&self.matrix)?;
        let vals = clamp_unit(vals);
        let _ = self.eigenvalues.set(vals.clone());
        let _ = self.spectral.set(SpectralSymbol {
            eigenvalues: vals,
            eigenvectors: vecs,
        });
        Ok(self.spectral.get().expect("initialized above"))
    }

    /// `1 - Q`, the symbol of the particle-hole partner (up to transposition).
    pub fn complement(&self) -> Self {
        let d = self.dim();
        let m = Mat::from_fn(d, d, |i, j| {
            let id = if i == j { re(T::one()) } else { re(T::zero()) };
            id - self.matrix[(i, j)]
        });
        let eig = self
            .eigenvalues
            .get()
            .map(|v| v.iter().rev().map(|&x| T::one() - x).collect());
        Self::from_parts(m, eig)
    }

    /// `Q1 ⊕ Q2`, the symbol of the wedge product of the two states.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_parts(linalg::direct_sum(&self.matrix, &other.matrix), None)
    }
}

fn clamp_unit<T: Real>(mut v: Vec<T>) -> Vec<T> {
    for x in v.iter_mut() {
        *x = Float::min(Float::max(*x, T::zero()), T::one());
    }
    v
}

/// Checks that `m` is Hermitian with spectrum in `[-tol, 1 + tol]`.
///
/// The Hermitian part of `m` is stored; eigenvalues are clamped into
/// `[0, 1]` when they are computed.
pub fn validate_symbol<T: Real>(m: &CMat<T>, tol: T) -> Result<Symbol<T>> {
    let d = linalg::check_square(m)?;
    linalg::check_finite(m)?;
    let deviation = linalg::hermitian_deviation(m);
    if deviation > tol {
        return Err(Error::NotHermitian {
            deviation: to_f64(deviation),
        });
    }
    let h = linalg::hermitian_part(m);
    let complement = Mat::from_fn(d, d, |i, j| {
        let id = if i == j { re(T::one()) } else { re(T::zero()) };
        id - h[(i, j)]
    });
    if linalg::cholesky_accepts(&h, tol) && linalg::cholesky_accepts(&complement, tol) {
        return Ok(Symbol::from_parts(h, None));
    }
    // The fast gate failed; the spectrum decides and names the offender.
    let vals = linalg::eigvalsh(&h)?;
    if let Some(&lo) = vals.last() {
        if lo < -tol {
            return Err(Error::SpectrumOutOfRange {
                eigenvalue: to_f64(lo),
            });
        }
    }
    if let Some(&hi) = vals.first() {
        if hi > T::one() + tol {
            return Err(Error::SpectrumOutOfRange {
                eigenvalue: to_f64(hi),
            });
        }
    }
    Ok(Symbol::from_parts(h, Some(clamp_unit(vals))))
}

/// Spectral decomposition of a validated symbol.
pub fn spectral<T: Real>(q: &Symbol<T>) -> Result<SpectralSymbol<T>> {
    q.spectral().cloned()
}

/// Entrywise complex conjugate in the standard basis.
pub fn conjugate_matrix<T: Real>(a: &CMat<T>) -> CMat<T> {
    linalg::conjugate(a)
}

/// `λ Q1 + (1-λ) Q2`, provided the mixture of the two states is again
/// quasi-free, which happens exactly when `Q1 - Q2` has rank at most one.
pub fn mix_symbols<T: Real>(q1: &Symbol<T>, q2: &Symbol<T>, lambda: T) -> Result<Symbol<T>> {
    if q1.dim() != q2.dim() {
        return Err(Error::DimensionMismatch {
            expected: q1.dim(),
            found: q2.dim(),
        });
    }
    if !(lambda > T::zero() && lambda < T::one()) {
        return Err(Error::InvalidWeight(to_f64(lambda)));
    }
    let d = q1.dim();
    let diff = Mat::from_fn(d, d, |i, j| q1.matrix[(i, j)] - q2.matrix[(i, j)]);
    let scale = linalg::max_abs(&diff);
    if scale > T::zero() {
        let rank = linalg::numerical_rank(&diff, thresh(MIX_RANK_TOL), scale)?;
        if rank >= 2 {
            return Err(Error::NotQuasiFreeMixture { rank });
        }
    }
    let mu = T::one() - lambda;
    let m = Mat::from_fn(d, d, |i, j| {
        q1.matrix[(i, j)].scale(lambda) + q2.matrix[(i, j)].scale(mu)
    });
    Symbol::new(&m)
}

pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    num_traits::ToPrimitive::to_f64(&x).unwrap_or(f64::NAN)
}
