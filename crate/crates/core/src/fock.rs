//! Dense Fock-space oracle.
//!
//! Everything here costs `O(4^d)` memory and exists to cross-check the
//! polynomial symbol-level formulas at small `d`.
//!
//! Conventions:
//! * modes are `0..d`; a subset `Λ` is a bitmask with bit `j` set when mode
//!   `j` is occupied;
//! * basis vectors are ordered by particle number, then lexicographically by
//!   the sorted list of occupied modes, so index 0 is the vacuum and every
//!   particle sector is a contiguous block;
//! * `e_Λ = a*_{i1} a*_{i2} ⋯ a*_{ik} |0⟩` with `i1 < i2 < ⋯ < ik`, hence
//!   `a*_j e_Λ = (-1)^{#{i ∈ Λ : i < j}} e_{Λ ∪ {j}}`.

use faer::Mat;
use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{cone, czero, re, thresh, CMat, Real};
use crate::symbols::{to_f64, Symbol};

/// Hard upper bound on the number of modes the dense oracle accepts.
pub const HARD_ORACLE_CAP: usize = 14;

/// Environment variable that lowers the oracle cap.
pub const ORACLE_CAP_ENV: &str = "QUASIFREE_MAX_ORACLE_D";

/// Largest `d` for which [`exp_spectrum`] enumerates the `2^d` multiset.
pub const SPECTRUM_CAP: usize = 20;

/// Current oracle cap: [`HARD_ORACLE_CAP`] unless the environment asks for
/// less. Values above the hard cap are ignored.
pub fn oracle_cap() -> usize {
    std::env::var(ORACLE_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .map_or(HARD_ORACLE_CAP, |v| v.min(HARD_ORACLE_CAP))
}

pub(crate) fn check_cap(modes: usize) -> Result<()> {
    let cap = oracle_cap();
    if modes > cap {
        return Err(Error::DimensionCap { modes, cap });
    }
    Ok(())
}

#[inline]
fn below(mask: u32, j: usize) -> u32 {
    (mask & ((1u32 << j) - 1)).count_ones()
}

#[inline]
fn sign<T: Real>(odd: bool) -> T {
    if odd {
        -T::one()
    } else {
        T::one()
    }
}

/// Subset-indexed orthonormal basis of the Fock space over `d` modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    d: usize,
    masks: Vec<u32>,
    index: Vec<usize>,
    offsets: Vec<usize>,
}

impl FockBasis {
    pub fn new(d: usize) -> Result<Self> {
        check_cap(d)?;
        let n = 1usize << d;
        let mut masks = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(d + 2);
        for k in 0..=d {
            offsets.push(masks.len());
            let mut sector: Vec<u32> = (0..n as u32)
                .filter(|m| m.count_ones() as usize == k)
                .collect();
            sector.sort_by_key(|&m| subset_of(m));
            masks.extend(sector);
        }
        offsets.push(n);
        let mut index = vec![0; n];
        for (i, &m) in masks.iter().enumerate() {
            index[m as usize] = i;
        }
        Ok(Self {
            d,
            masks,
            index,
            offsets,
        })
    }

    pub fn modes(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.masks.len()
    }

    /// Occupation bitmask of basis vector `i`.
    pub fn mask(&self, i: usize) -> u32 {
        self.masks[i]
    }

    pub fn index_of(&self, mask: u32) -> usize {
        self.index[mask as usize]
    }

    /// Sorted occupied modes of basis vector `i`.
    pub fn subset(&self, i: usize) -> Vec<usize> {
        subset_of(self.masks[i])
    }

    /// Index range of the `k`-particle sector.
    pub fn sector(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }
}

fn subset_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&j| mask & (1 << j) != 0).collect()
}

/// Dense operator on the Fock space of `d` modes, in [`FockBasis`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator<T: Real> {
    d: usize,
    matrix: CMat<T>,
}

impl<T: Real> FockOperator<T> {
    pub fn from_matrix(d: usize, matrix: CMat<T>) -> Result<Self> {
        let n = 1usize << d;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows(),
            });
        }
        Ok(Self { d, matrix })
    }

    pub fn identity(d: usize) -> Result<Self> {
        check_cap(d)?;
        Ok(Self {
            d,
            matrix: linalg::identity(1 << d),
        })
    }

    pub fn modes(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat<T> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            d: self.d,
            matrix: linalg::adjoint(&self.matrix),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        linalg::trace(&self.matrix)
    }

    /// Operator product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            d: self.d,
            matrix: &self.matrix * &rhs.matrix,
        }
    }

    pub fn scaled(&self, s: Complex<T>) -> Self {
        Self {
            d: self.d,
            matrix: linalg::scale(&self.matrix, s),
        }
    }

    /// Eigenvalues of the Hermitian part, descending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<T>> {
        linalg::eigvalsh(&linalg::hermitian_part(&self.matrix))
    }
}

fn check_len<T>(v: &[T], d: usize) -> Result<()> {
    if v.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.len(),
        });
    }
    Ok(())
}

/// Applies `a*(φ)` to a Fock vector given in basis order.
fn create_into<T: Real>(
    basis: &FockBasis,
    phi: &[Complex<T>],
    src: &[Complex<T>],
    dst: &mut [Complex<T>],
) {
    let zero = czero::<T>();
    for (i, &x) in src.iter().enumerate() {
        if x == zero {
            continue;
        }
        let m = basis.mask(i);
        for (j, &p) in phi.iter().enumerate() {
            if m & (1 << j) != 0 || p == zero {
                continue;
            }
            let s: T = sign(below(m, j) % 2 == 1);
            let t = basis.index_of(m | (1 << j));
            dst[t] = dst[t] + (p * x).scale(s);
        }
    }
}

/// `a*(φ) = Σ_j φ_j a*_j`, linear in `φ`.
pub fn creation_operator<T: Real>(phi: &[Complex<T>]) -> Result<FockOperator<T>> {
    let d = phi.len();
    let basis = FockBasis::new(d)?;
    let n = basis.dim();
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        let mask = basis.mask(i);
        for (j, &p) in phi.iter().enumerate() {
            if mask & (1 << j) == 0 {
                let s: T = sign(below(mask, j) % 2 == 1);
                let t = basis.index_of(mask | (1 << j));
                m[(t, i)] = m[(t, i)] + p.scale(s);
            }
        }
    }
    FockOperator::from_matrix(d, m)
}

/// `a(φ) = a*(φ)*`, antilinear in `φ`.
pub fn annihilation_operator<T: Real>(phi: &[Complex<T>]) -> Result<FockOperator<T>> {
    Ok(creation_operator(phi)?.adjoint())
}

/// Creation operator of the `j`-th standard basis mode.
pub fn mode_creation<T: Real>(d: usize, j: usize) -> Result<FockOperator<T>> {
    let phi: Vec<Complex<T>> = (0..d)
        .map(|i| if i == j { cone() } else { czero() })
        .collect();
    creation_operator(&phi)
}

/// `N = Σ_j a*_j a_j`, diagonal with the particle number of each subset.
pub fn number_operator<T: Real>(d: usize) -> Result<FockOperator<T>> {
    let basis = FockBasis::new(d)?;
    let n = basis.dim();
    let m = Mat::from_fn(n, n, |i, j| {
        if i == j {
            re(T::from_u32(basis.mask(i).count_ones()).expect("small integer"))
        } else {
            czero()
        }
    });
    FockOperator::from_matrix(d, m)
}

/// `Θ = E(-1)`: `+1` on even sectors, `-1` on odd ones.
pub fn parity_operator<T: Real>(d: usize) -> Result<FockOperator<T>> {
    let basis = FockBasis::new(d)?;
    let n = basis.dim();
    let m = Mat::from_fn(n, n, |i, j| {
        if i == j {
            re(sign(basis.mask(i).count_ones() % 2 == 1))
        } else {
            czero()
        }
    });
    FockOperator::from_matrix(d, m)
}

/// The exponential element `E(X) = 1 ⊕ X ⊕ (X∧X) ⊕ ⋯`.
///
/// Columns are built sector by sector from `E(X) a*(φ) = a*(Xφ) E(X)`: for a
/// subset `M` with smallest element `m`, `E(X) e_M = a*(X e_m) E(X) e_{M∖m}`.
pub fn exp_element<T: Real>(x: &CMat<T>) -> Result<FockOperator<T>> {
    let d = linalg::check_square(x)?;
    let basis = FockBasis::new(d)?;
    let n = basis.dim();
    let mut out: CMat<T> = Mat::zeros(n, n);
    out[(0, 0)] = cone();
    let mut src = vec![czero::<T>(); n];
    let mut dst = vec![czero::<T>(); n];
    for k in 1..=d {
        let prev = basis.sector(k - 1);
        for col in basis.sector(k) {
            let mask = basis.mask(col);
            let low = mask.trailing_zeros() as usize;
            let rest = basis.index_of(mask & !(1 << low));
            let image: Vec<Complex<T>> = (0..d).map(|i| x[(i, low)]).collect();
            for r in prev.clone() {
                src[r] = out[(r, rest)];
            }
            for v in dst[basis.sector(k)].iter_mut() {
                *v = czero();
            }
            create_into(&basis, &image, &src, &mut dst);
            for r in basis.sector(k) {
                out[(r, col)] = dst[r];
            }
            for r in prev.clone() {
                src[r] = czero();
            }
        }
    }
    FockOperator::from_matrix(d, out)
}

/// Spectrum of `E(X)` as a multiset: every product of the nonzero
/// eigenvalues of `X` over subsets, followed by zeros up to `2^d` entries.
///
/// An eigenvalue counts as zero below `1e-10·max(1, max|λ|)`.
pub fn exp_spectrum<T: Real>(x: &CMat<T>) -> Result<Vec<Complex<T>>> {
    let d = linalg::check_square(x)?;
    if d > SPECTRUM_CAP {
        return Err(Error::DimensionCap {
            modes: d,
            cap: SPECTRUM_CAP,
        });
    }
    linalg::check_finite(x)?;
    let eig = linalg::eigvals(x)?;
    let largest = eig
        .iter()
        .fold(T::one(), |acc, z| Float::max(acc, z.norm()));
    let cut = thresh::<T>(1e-10) * largest;
    let nonzero: Vec<Complex<T>> = eig.into_iter().filter(|z| z.norm() > cut).collect();
    let mut products = vec![cone::<T>()];
    for &lambda in &nonzero {
        let scaled: Vec<Complex<T>> = products.iter().map(|&p| p * lambda).collect();
        products.extend(scaled);
    }
    products.resize(1usize << d, czero());
    Ok(products)
}

/// Maximum deviation of the Gram matrix of `vecs` from the identity.
pub(crate) fn gram_deviation<T: Real>(vecs: &[Vec<Complex<T>>]) -> T {
    let mut dev = T::zero();
    for (i, u) in vecs.iter().enumerate() {
        for (j, v) in vecs.iter().enumerate() {
            let target = if i == j { cone() } else { czero() };
            dev = Float::max(dev, (linalg::inner(u, v) - target).norm());
        }
    }
    dev
}

/// The Fock vector `φ1 ∧ ⋯ ∧ φk`.
pub fn wedge_vector<T: Real>(d: usize, vecs: &[Vec<Complex<T>>]) -> Result<Vec<Complex<T>>> {
    let basis = FockBasis::new(d)?;
    let mut state = vec![czero::<T>(); basis.dim()];
    state[0] = cone();
    for phi in vecs.iter().rev() {
        check_len(phi, d)?;
        let mut next = vec![czero::<T>(); basis.dim()];
        create_into(&basis, phi, &state, &mut next);
        state = next;
    }
    Ok(state)
}

/// Rank-one projector onto `φ1 ∧ ⋯ ∧ φk` for an orthonormal family `K`.
/// An empty family gives the vacuum projector.
pub fn k_particle_projector<T: Real>(
    d: usize,
    k_vectors: &[Vec<Complex<T>>],
) -> Result<FockOperator<T>> {
    for v in k_vectors {
        check_len(v, d)?;
    }
    let dev = gram_deviation(k_vectors);
    if dev > thresh(1e-10) {
        return Err(Error::NotOrthonormal {
            deviation: to_f64(dev),
        });
    }
    let psi = wedge_vector(d, k_vectors)?;
    let n = psi.len();
    let m = Mat::from_fn(n, n, |i, j| psi[i] * psi[j].conj());
    FockOperator::from_matrix(d, m)
}

/// Occupation weights `q_Λ = Π_{i∈Λ} q_i Π_{i∉Λ} (1 - q_i)` in basis order.
pub fn occupation_weights<T: Real>(q: &[T]) -> Result<Vec<T>> {
    let basis = FockBasis::new(q.len())?;
    Ok((0..basis.dim())
        .map(|i| {
            let m = basis.mask(i);
            q.iter().enumerate().fold(T::one(), |acc, (j, &qj)| {
                acc * if m & (1 << j) != 0 { qj } else { T::one() - qj }
            })
        })
        .collect())
}

/// Density matrix of `ω_Q` in the eigen-form `Σ_Λ q_Λ P_*(H_Λ)`, realized
/// as `E(U) diag(q_Λ) E(U)*` with `U` the eigenvector matrix of `Q`.
pub fn density_matrix<T: Real>(q: &Symbol<T>) -> Result<FockOperator<T>> {
    let d = q.dim();
    check_cap(d)?;
    let spec = q.spectral()?;
    let weights = occupation_weights(&spec.eigenvalues)?;
    let eu = exp_element(&spec.eigenvectors)?;
    let rho = linalg::reconstruct(eu.matrix(), &weights);
    FockOperator::from_matrix(d, linalg::hermitian_part(&rho))
}

/// Decides whether a `k`-particle vector is a single wedge `φ1 ∧ ⋯ ∧ φk`, by
/// counting the one-particle vectors `χ` with `χ ∧ φ = 0`.
pub fn is_elementary<T: Real>(phi: &[Complex<T>], d: usize, k: usize) -> Result<bool> {
    let basis = FockBasis::new(d)?;
    check_len(phi, basis.dim())?;
    if k > d {
        return Err(Error::NotInSector { sector: k });
    }
    let norm = linalg::vec_norm(phi);
    if norm == T::zero() {
        return Err(Error::ZeroVector);
    }
    let range = basis.sector(k);
    let outside = phi
        .iter()
        .enumerate()
        .filter(|(i, _)| !range.contains(i))
        .fold(T::zero(), |acc, (_, z)| acc + z.norm_sqr());
    if Float::sqrt(outside) > thresh::<T>(1e-10) * norm {
        return Err(Error::NotInSector { sector: k });
    }
    if k == d {
        return Ok(true);
    }
    let unit: Vec<Complex<T>> = phi.iter().map(|z| z.unscale(norm)).collect();
    let target = basis.sector(k + 1);
    let mut wedge_map: CMat<T> = Mat::zeros(target.len(), d);
    for j in 0..d {
        let mut e = vec![czero::<T>(); d];
        e[j] = cone();
        let mut out = vec![czero::<T>(); basis.dim()];
        create_into(&basis, &e, &unit, &mut out);
        for (r, idx) in target.clone().enumerate() {
            wedge_map[(r, j)] = out[idx];
        }
    }
    let sv = linalg::singular_values(&wedge_map)?;
    let cut = thresh::<T>(1e-9);
    let rank = sv.iter().filter(|&&s| s >= cut).count();
    Ok(d - rank == k)
}

/// Unitary from Fock coordinates over `d1 + d2` modes to the tensor product
/// of the Fock spaces over the first `d1` and the last `d2` modes.
///
/// Row index is `i1·2^{d2} + i2`. Because every occupied mode of the first
/// block precedes every mode of the second, no reordering of creation
/// operators is needed and all nonzero entries are `+1`. Under this map
/// `a*(φ ⊕ 0) ↦ a*(φ) ⊗ 1` and `a*(0 ⊕ ψ) ↦ Θ ⊗ a*(ψ)`.
pub fn split_isomorphism<T: Real>(d1: usize, d2: usize) -> Result<CMat<T>> {
    let full = FockBasis::new(d1 + d2)?;
    let first = FockBasis::new(d1)?;
    let second = FockBasis::new(d2)?;
    let n = full.dim();
    let n2 = second.dim();
    let low = (1u32 << d1) - 1;
    let mut s = Mat::zeros(n, n);
    for col in 0..n {
        let m = full.mask(col);
        let row = first.index_of(m & low) * n2 + second.index_of(m >> d1);
        s[(row, col)] = cone();
    }
    Ok(s)
}

/// Tensor product `x1 ⊗ x2` pulled back to Fock coordinates over `d1 + d2`
/// modes through [`split_isomorphism`].
pub fn embed_tensor<T: Real>(
    x1: &FockOperator<T>,
    x2: &FockOperator<T>,
) -> Result<FockOperator<T>> {
    let (d1, d2) = (x1.modes(), x2.modes());
    let s = split_isomorphism::<T>(d1, d2)?;
    let t = linalg::kron(x1.matrix(), x2.matrix());
    FockOperator::from_matrix(d1 + d2, s.adjoint() * &t * &s)
}

/// Density matrix of the product state `ω ∧ σ`; the left factor must be even.
pub fn wedge_state_product<T: Real>(
    rho1: &FockOperator<T>,
    rho2: &FockOperator<T>,
) -> Result<FockOperator<T>> {
    check_cap(rho1.modes() + rho2.modes())?;
    let theta = parity_operator::<T>(rho1.modes())?;
    let comm = theta.matrix() * rho1.matrix() - rho1.matrix() * theta.matrix();
    let deviation = linalg::max_abs(&comm);
    if deviation > thresh(1e-10) {
        return Err(Error::NotEvenState {
            deviation: to_f64(deviation),
        });
    }
    embed_tensor(rho1, rho2)
}

/// Partial trace of a Fock operator over the last `d - keep` modes.
///
/// Uses the tensor picture of [`split_isomorphism`], so the result is the
/// reduced density matrix of the first `keep` modes.
pub fn trace_out_tail<T: Real>(x: &FockOperator<T>, keep: usize) -> Result<FockOperator<T>> {
    let d = x.modes();
    if keep > d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: keep,
        });
    }
    let s = split_isomorphism::<T>(keep, d - keep)?;
    let t = &s * x.matrix() * s.adjoint();
    FockOperator::from_matrix(
        keep,
        linalg::partial_trace_second(&t, 1 << keep, 1 << (d - keep)),
    )
}

/// Unitary `U` with `U a_k U* = a_k*` for every mode `k`: the product of
/// the Majorana operators `a_j + a_j*` in increasing order, times `Θ` when
/// `d` is even. Conjugation by `U` maps `ρ_Q` to `ρ_{1 - Qᵀ}`.
pub fn particle_hole_unitary<T: Real>(d: usize) -> Result<FockOperator<T>> {
    let mut u = FockOperator::identity(d)?;
    for j in 0..d {
        let c = mode_creation::<T>(d, j)?;
        let gamma = FockOperator::from_matrix(d, c.matrix() + c.adjoint().matrix())?;
        u = u.compose(&gamma);
    }
    if d % 2 == 0 {
        u = u.compose(&parity_operator(d)?);
    }
    Ok(u)
}

/// Fock-space transpose in the standard basis: `x ↦ xᵀ`.
pub fn fock_transpose<T: Real>(x: &FockOperator<T>) -> FockOperator<T> {
    FockOperator {
        d: x.d,
        matrix: linalg::transpose(&x.matrix),
    }
}
