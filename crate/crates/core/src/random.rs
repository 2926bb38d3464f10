//! Seeded random instances for oracle checks, tests and benchmarks.

use faer::Mat;
use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::{ChannelKind, QuasiFreeChannel};
use crate::error::Result;
use crate::linalg::{self, conjugate, identity, transpose};
use crate::scalar::{lit, re, CMat, Real};
use crate::symbols::Symbol;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    lit(rng.sample::<f64, _>(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat<T> {
    let s = lit::<T>(std::f64::consts::FRAC_1_SQRT_2);
    Mat::from_fn(rows, cols, |_, _| {
        Complex::new(normal::<T, R>(rng) * s, normal::<T, R>(rng) * s)
    })
}

pub fn gaussian_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex<T>> {
    linalg::column(&gaussian_matrix(rng, n, 1), 0)
}

/// Haar-distributed unitary (QR of a Gaussian matrix with phase correction).
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMat<T> {
    if d == 0 {
        return Mat::zeros(0, 0);
    }
    let g = gaussian_matrix::<T, R>(rng, d, d);
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    Mat::from_fn(d, d, |i, j| {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        let phase = if n > T::zero() {
            rjj.unscale(n)
        } else {
            re(T::one())
        };
        q[(i, j)] * phase
    })
}

/// `U diag(q) U*` with `U` Haar and `q_j` uniform in `[lo, hi]`.
pub fn random_symbol_in<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    lo: f64,
    hi: f64,
) -> Result<Symbol<T>> {
    let q: Vec<T> = (0..d).map(|_| lit(rng.random_range(lo..=hi))).collect();
    let u = random_unitary::<T, R>(rng, d);
    Symbol::new(&linalg::hermitian_part(&linalg::reconstruct(&u, &q)))
}

pub fn random_symbol<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<Symbol<T>> {
    random_symbol_in(rng, d, 0.0, 1.0)
}

/// Symbol with spectrum inside `[margin, 1 - margin]`.
pub fn random_interior_symbol<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    margin: f64,
) -> Result<Symbol<T>> {
    random_symbol_in(rng, d, margin, 1.0 - margin)
}

/// Random projector symbol of rank `k`.
pub fn random_projector<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    k: usize,
) -> Result<Symbol<T>> {
    let u = random_unitary::<T, R>(rng, d);
    let q: Vec<T> = (0..d)
        .map(|i| if i < k { T::one() } else { T::zero() })
        .collect();
    Symbol::new(&linalg::hermitian_part(&linalg::reconstruct(&u, &q)))
}

/// Random valid channel: `A` a Gaussian matrix rescaled to operator norm
/// `≤ 0.95`, `B = S Q S` with `S = √(1 - A*A)` (or `√(1 - AᵀĀ)`) and `Q` a
/// random symbol.
pub fn random_channel<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    kind: ChannelKind,
) -> Result<QuasiFreeChannel<T>> {
    let g = gaussian_matrix::<T, R>(rng, d, d);
    let norm = linalg::singular_values(&g)?
        .first()
        .copied()
        .unwrap_or(T::one());
    let target: T = lit(rng.random_range(0.1..0.95));
    let a = linalg::scale(&g, re(target / num_traits::Float::max(norm, T::epsilon())));
    let gram = match kind {
        ChannelKind::Lambda => a.adjoint() * &a,
        ChannelKind::Gamma => transpose(&a) * conjugate(&a),
    };
    let s = linalg::psd_sqrt(&linalg::hermitian_part(&(identity::<T>(d) - gram)))?;
    let q = random_symbol::<T, R>(rng, d)?;
    let b = linalg::hermitian_part(&(&s * q.matrix() * &s));
    QuasiFreeChannel::new(kind, a, b)
}

/// Random channel whose `B` is well conditioned (spectrum of the inner
/// symbol kept away from 0).
pub fn random_channel_invertible_b<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    kind: ChannelKind,
) -> Result<QuasiFreeChannel<T>> {
    let g = gaussian_matrix::<T, R>(rng, d, d);
    let norm = linalg::singular_values(&g)?
        .first()
        .copied()
        .unwrap_or(T::one());
    let target: T = lit(rng.random_range(0.1..0.8));
    let a = linalg::scale(&g, re(target / num_traits::Float::max(norm, T::epsilon())));
    let gram = match kind {
        ChannelKind::Lambda => a.adjoint() * &a,
        ChannelKind::Gamma => transpose(&a) * conjugate(&a),
    };
    let s = linalg::psd_sqrt(&linalg::hermitian_part(&(identity::<T>(d) - gram)))?;
    let q = random_interior_symbol::<T, R>(rng, d, 0.2)?;
    let b = linalg::hermitian_part(&(&s * q.matrix() * &s));
    QuasiFreeChannel::new(kind, a, b)
}

/// A pair of symbols whose difference has rank exactly one.
pub fn random_rank_one_pair<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
) -> Result<(Symbol<T>, Symbol<T>)> {
    // Q2 = U diag(q) U*, Q1 = Q2 + t·vv* with v an eigenvector, so both
    // stay inside [0, 1].
    let u = random_unitary::<T, R>(rng, d);
    let q: Vec<T> = (0..d).map(|_| lit(rng.random_range(0.0..=1.0))).collect();
    let mut q1 = q.clone();
    q1[0] = lit(rng.random_range(0.0..=1.0));
    let a = Symbol::new(&linalg::hermitian_part(&linalg::reconstruct(&u, &q1)))?;
    let b = Symbol::new(&linalg::hermitian_part(&linalg::reconstruct(&u, &q)))?;
    Ok((a, b))
}

/// A pair whose difference has rank two: two eigenvalues are moved.
pub fn random_rank_two_pair<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
) -> Result<(Symbol<T>, Symbol<T>)> {
    assert!(d >= 2, "rank-two pairs need two modes");
    let u = random_unitary::<T, R>(rng, d);
    let q: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..=1.0)).collect();
    let mut q1 = q.clone();
    for x in q1.iter_mut().take(2) {
        // Shift by at least 0.2 in either direction, staying in [0, 1].
        let delta = rng.random_range(0.2..=0.5);
        *x = if *x + delta <= 1.0 {
            *x + delta
        } else {
            *x - delta
        };
    }
    let to_t = |v: &[f64]| -> Vec<T> { v.iter().map(|&x| lit(x)).collect() };
    let a = Symbol::new(&linalg::hermitian_part(&linalg::reconstruct(
        &u,
        &to_t(&q1),
    )))?;
    let b = Symbol::new(&linalg::hermitian_part(&linalg::reconstruct(&u, &to_t(&q))))?;
    Ok((a, b))
}
