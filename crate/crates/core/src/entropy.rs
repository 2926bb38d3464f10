//! Entropies of quasi-free states, computed from one-particle spectra.
//!
//! All values are in nats.

use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{lit, thresh, Real};
use crate::symbols::{to_f64, Symbol};

/// Eigenvalues of the second symbol at or below this count as its kernel.
pub const KERNEL_TOL: f64 = 1e-10;
/// Allowed weight of the first symbol on that kernel.
pub const INCLUSION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyKind {
    Renyi(f64),
    VonNeumann,
    Relative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyResult<T> {
    pub value: T,
    pub kind: EntropyKind,
}

/// `x log x` with `0 log 0 = 0`.
fn xlogx<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.ln()
    }
}

/// Binary entropy `-q log q - (1-q) log(1-q)`.
pub fn binary_entropy<T: Real>(q: T) -> T {
    -(xlogx(q) + xlogx(T::one() - q))
}

fn check_order<T: Real>(p: T) -> Result<()> {
    if !p.is_finite() || p <= T::zero() || p == T::one() {
        return Err(Error::InvalidOrder(to_f64(p)));
    }
    Ok(())
}

/// `H_p = (1-p)^{-1} Σ_j log((1-q_j)^p + q_j^p)` for `p ∈ (0,1) ∪ (1,∞)`.
pub fn renyi_entropy<T: Real>(q: &Symbol<T>, p: T) -> Result<T> {
    check_order(p)?;
    let sum = q.eigenvalues()?.iter().fold(T::zero(), |acc, &x| {
        acc + ((T::one() - x).powf(p) + x.powf(p)).ln()
    });
    Ok(sum / (T::one() - p))
}

/// `S = Σ_j h(q_j)` with `h` the binary entropy.
pub fn von_neumann_entropy<T: Real>(q: &Symbol<T>) -> Result<T> {
    Ok(q.eigenvalues()?
        .iter()
        .fold(T::zero(), |acc, &x| acc + binary_entropy(x)))
}

/// `tr{Q1(log Q1 - log Q2) + (1-Q1)(log(1-Q1) - log(1-Q2))}`.
///
/// Evaluated in the eigenbasis of `Q2`. Directions where `Q2` (or `1-Q2`)
/// vanishes are dropped after checking that `Q1` (or `1-Q1`) vanishes there
/// too; otherwise the value is infinite and `KernelConditionViolated` is
/// returned.
pub fn relative_entropy<T: Real>(q1: &Symbol<T>, q2: &Symbol<T>) -> Result<T> {
    if q1.dim() != q2.dim() {
        return Err(Error::DimensionMismatch {
            expected: q1.dim(),
            found: q2.dim(),
        });
    }
    let kernel = thresh::<T>(KERNEL_TOL);
    let inclusion = thresh::<T>(INCLUSION_TOL);
    let neg = q1
        .eigenvalues()?
        .iter()
        .fold(T::zero(), |acc, &x| acc - binary_entropy(x));

    let spec = q2.spectral()?;
    let m1 = q1.matrix();
    let mut cross = T::zero();
    for (k, &p) in spec.eigenvalues.iter().enumerate() {
        let v = linalg::column(&spec.eigenvectors, k);
        let q1v = linalg::mat_vec(m1, &v);
        let w = linalg::inner(&v, &q1v).re;
        if p <= kernel {
            if linalg::vec_norm(&q1v) > inclusion {
                return Err(Error::KernelConditionViolated);
            }
        } else {
            cross = cross + w * p.ln();
        }
        if T::one() - p <= kernel {
            let rest: Vec<Complex<T>> = v.iter().zip(&q1v).map(|(a, b)| a - b).collect();
            if linalg::vec_norm(&rest) > inclusion {
                return Err(Error::KernelConditionViolated);
            }
        } else {
            cross = cross + (T::one() - w) * (T::one() - p).ln();
        }
    }
    Ok(neg - cross)
}

/// Dense-side reference: Renyi entropy of a probability vector.
pub fn renyi_of_weights<T: Real>(weights: &[T], p: T) -> Result<T> {
    check_order(p)?;
    let s = weights
        .iter()
        .fold(T::zero(), |acc, &w| acc + Float::max(w, T::zero()).powf(p));
    Ok(s.ln() / (T::one() - p))
}

/// Dense-side reference: Shannon entropy of a probability vector.
pub fn shannon<T: Real>(weights: &[T]) -> T {
    weights.iter().fold(T::zero(), |acc, &w| acc - xlogx(w))
}

impl<T: Real> EntropyResult<T> {
    pub fn renyi(q: &Symbol<T>, p: T) -> Result<Self> {
        Ok(Self {
            value: renyi_entropy(q, p)?,
            kind: EntropyKind::Renyi(to_f64(p)),
        })
    }

    pub fn von_neumann(q: &Symbol<T>) -> Result<Self> {
        Ok(Self {
            value: von_neumann_entropy(q)?,
            kind: EntropyKind::VonNeumann,
        })
    }

    pub fn relative(q1: &Symbol<T>, q2: &Symbol<T>) -> Result<Self> {
        Ok(Self {
            value: relative_entropy(q1, q2)?,
            kind: EntropyKind::Relative,
        })
    }

    /// True when the value respects the sign floor for its kind.
    pub fn is_admissible(&self) -> bool {
        let floor = match self.kind {
            EntropyKind::Relative => -lit::<T>(1e-8),
            _ => -lit::<T>(1e-10),
        };
        self.value >= floor
    }
}
