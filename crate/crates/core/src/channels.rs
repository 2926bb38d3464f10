//! Quasi-free channels `Λ_{A,B}` and `Γ_{A,B}`.
//!
//! Schrödinger action on symbols:
//! * `Λ_{A,B}: Q ↦ A*QA + B`, completely positive iff `0 ≤ B ≤ 1 - A*A`;
//! * `Γ_{A,B}: Q ↦ -AᵀQᵀĀ + B + AᵀĀ`, completely positive iff
//!   `0 ≤ B ≤ 1 - AᵀĀ`.
//!
//! Here `Ā` is the entrywise conjugate in the standard basis. Note that
//! `AᵀQᵀĀ = (A*QA)ᵀ`, so both kinds share one product.

use faer::Mat;
use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fock::{self, FockOperator};
use crate::linalg::{self, adjoint, conjugate, identity, transpose};
use crate::scalar::{cone, lit, re, thresh, CMat, Real};
use crate::symbols::{to_f64, Symbol, DEFAULT_TOL};

/// Largest pivot condition number for which the closed Heisenberg forms are
/// evaluated.
pub const PIVOT_CONDITION_LIMIT: f64 = 1e12;

/// Largest `d` at which [`classify_affine_map`] runs its dense Choi test.
pub const CLASSIFY_DENSE_CAP: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Lambda,
    Gamma,
}

/// A validated quasi-free channel.
#[derive(Debug, Clone)]
pub struct QuasiFreeChannel<T: Real> {
    kind: ChannelKind,
    a: CMat<T>,
    b: CMat<T>,
    // A*A for Lambda, AᵀĀ for Gamma.
    gram: CMat<T>,
}

/// `scale · E(argument)`, kept unexpanded.
#[derive(Debug, Clone)]
pub struct ScaledExponential<T: Real> {
    pub scale: Complex<T>,
    pub argument: CMat<T>,
}

impl<T: Real> ScaledExponential<T> {
    /// Dense realization on the Fock space (oracle side).
    pub fn densify(&self) -> Result<FockOperator<T>> {
        Ok(fock::exp_element(&self.argument)?.scaled(self.scale))
    }
}

/// Which side of `X - 1` the inverted pivot sits on in the Heisenberg form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotSide {
    /// `(1-B+XB)⁻¹ (X-1)`
    Left,
    /// `(X-1) (1-B+BX)⁻¹`
    Right,
}

fn pair_gram<T: Real>(kind: ChannelKind, a: &CMat<T>) -> CMat<T> {
    match kind {
        ChannelKind::Lambda => a.adjoint() * a,
        ChannelKind::Gamma => transpose(a) * conjugate(a),
    }
}

fn one_minus<T: Real>(m: &CMat<T>) -> CMat<T> {
    identity::<T>(m.nrows()) - m
}

/// Smallest eigenvalue of a Hermitian matrix.
fn min_eigenvalue<T: Real>(m: &CMat<T>) -> Result<T> {
    Ok(linalg::eigvalsh(m)?.last().copied().unwrap_or(T::zero()))
}

/// Checks `m ⪰ -tol`, reporting the smallest eigenvalue on failure.
fn require_psd<T: Real>(m: &CMat<T>, tol: T) -> Result<()> {
    if linalg::cholesky_accepts(m, tol) {
        return Ok(());
    }
    let lo = min_eigenvalue(m)?;
    if lo < -tol {
        return Err(Error::NotCompletelyPositive {
            eigenvalue: to_f64(lo),
        });
    }
    Ok(())
}

/// Validates `(A, B)` for the given kind.
pub fn new_channel<T: Real>(
    kind: ChannelKind,
    a: CMat<T>,
    b: CMat<T>,
    tol: T,
) -> Result<QuasiFreeChannel<T>> {
    let d = linalg::check_square(&a)?;
    let db = linalg::check_square(&b)?;
    if d != db {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: db,
        });
    }
    linalg::check_finite(&a)?;
    linalg::check_finite(&b)?;
    let deviation = linalg::hermitian_deviation(&b);
    if deviation > tol {
        return Err(Error::NotHermitian {
            deviation: to_f64(deviation),
        });
    }
    let b = linalg::hermitian_part(&b);
    let gram = linalg::hermitian_part(&pair_gram(kind, &a));
    require_psd(&b, tol)?;
    require_psd(&(one_minus(&gram) - &b), tol)?;
    Ok(QuasiFreeChannel { kind, a, b, gram })
}

impl<T: Real> QuasiFreeChannel<T> {
    /// Validates with the default tolerance.
    pub fn new(kind: ChannelKind, a: CMat<T>, b: CMat<T>) -> Result<Self> {
        new_channel(kind, a, b, thresh(DEFAULT_TOL))
    }

    pub fn lambda(a: CMat<T>, b: CMat<T>) -> Result<Self> {
        Self::new(ChannelKind::Lambda, a, b)
    }

    pub fn gamma(a: CMat<T>, b: CMat<T>) -> Result<Self> {
        Self::new(ChannelKind::Gamma, a, b)
    }

    /// The identity channel on `d` modes.
    pub fn identity(d: usize) -> Self {
        Self {
            kind: ChannelKind::Lambda,
            a: identity(d),
            b: Mat::zeros(d, d),
            gram: identity(d),
        }
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn a(&self) -> &CMat<T> {
        &self.a
    }

    pub fn b(&self) -> &CMat<T> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `A*A` for Lambda, `AᵀĀ` for Gamma.
    pub fn gram(&self) -> &CMat<T> {
        &self.gram
    }
}

fn check_dim<T: Real>(c: &QuasiFreeChannel<T>, n: usize) -> Result<()> {
    if c.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: n,
        });
    }
    Ok(())
}

/// Image symbol of `ω_Q` under the channel, re-validated.
pub fn apply_schrodinger<T: Real>(c: &QuasiFreeChannel<T>, q: &Symbol<T>) -> Result<Symbol<T>> {
    check_dim(c, q.dim())?;
    let core = c.a.adjoint() * (q.matrix() * &c.a);
    let out = match c.kind {
        ChannelKind::Lambda => core + &c.b,
        ChannelKind::Gamma => &c.b + &c.gram - transpose(&core),
    };
    Symbol::new(&linalg::hermitian_part(&out))
}

fn pivot_guard<T: Real>(p: &CMat<T>) -> Result<()> {
    let condition = linalg::condition_number(p)?;
    if !(condition < lit(PIVOT_CONDITION_LIMIT)) {
        return Err(Error::SingularPivot {
            condition: to_f64(condition),
        });
    }
    Ok(())
}

/// `Λ*(E(X))` (or `Γ*(E(X))`) as `scale · E(argument)`, pivot on the left.
pub fn apply_heisenberg_exp<T: Real>(
    c: &QuasiFreeChannel<T>,
    x: &CMat<T>,
) -> Result<ScaledExponential<T>> {
    apply_heisenberg_exp_with(c, x, PivotSide::Left)
}

/// Heisenberg action on `E(X)` with an explicit pivot placement.
///
/// Lambda: pivot `1 - B + XB`, argument `1 + A P⁻¹ (X - 1) A*`.
/// Gamma: with `C = A*A + Bᵀ`, pivot `1 - C + XᵀC`, argument
/// `1 + A P⁻¹ (1 - Xᵀ) A*`.
pub fn apply_heisenberg_exp_with<T: Real>(
    c: &QuasiFreeChannel<T>,
    x: &CMat<T>,
    side: PivotSide,
) -> Result<ScaledExponential<T>> {
    let d = linalg::check_square(x)?;
    check_dim(c, d)?;
    let one = identity::<T>(d);
    // Both kinds reduce to: pivot 1 - C + Y C, numerator N, where
    // Lambda: Y = X, C = B, N = X - 1; Gamma: Y = Xᵀ, C = A*A + Bᵀ, N = 1 - Xᵀ.
    let (y, cmat, num) = match c.kind {
        ChannelKind::Lambda => (x.clone(), c.b.clone(), x - &one),
        ChannelKind::Gamma => {
            let xt = transpose(x);
            let cm = c.a.adjoint() * &c.a + transpose(&c.b);
            let n = &one - &xt;
            (xt, cm, n)
        }
    };
    let (pivot, correction) = match side {
        PivotSide::Left => {
            let p = &one - &cmat + &y * &cmat;
            pivot_guard(&p)?;
            let corr = linalg::solve(&p, &num);
            (p, corr)
        }
        PivotSide::Right => {
            let p = &one - &cmat + &cmat * &y;
            pivot_guard(&p)?;
            // N P⁻¹ = (P⁻ᵀ... ) computed as (P* \ N*)*.
            let corr = adjoint(&linalg::solve(&adjoint(&p), &adjoint(&num)));
            (p, corr)
        }
    };
    let argument = &one + &c.a * correction * c.a.adjoint();
    Ok(ScaledExponential {
        scale: linalg::determinant(&pivot),
        argument,
    })
}

/// `Λ*(ρ_Q)` (or `Γ*(ρ_Q)`) as `scale · E(argument)`.
///
/// Lambda: `R = 1 - Q + (2Q - 1)B`, argument `1 + A R⁻¹ (2Q - 1) A*`.
/// Gamma: `R = 1 - Qᵀ + (2Qᵀ - 1)(A*A + Bᵀ)`, argument
/// `1 + A R⁻¹ (1 - 2Qᵀ) A*`. Projector symbols need no special care.
pub fn apply_heisenberg_state<T: Real>(
    c: &QuasiFreeChannel<T>,
    q: &Symbol<T>,
) -> Result<ScaledExponential<T>> {
    let d = q.dim();
    check_dim(c, d)?;
    let one = identity::<T>(d);
    let two = re(lit::<T>(2.0));
    let (qq, cmat, sign) = match c.kind {
        ChannelKind::Lambda => (q.matrix().clone(), c.b.clone(), T::one()),
        ChannelKind::Gamma => (
            transpose(q.matrix()),
            c.a.adjoint() * &c.a + transpose(&c.b),
            -T::one(),
        ),
    };
    let twice_minus_one = linalg::scale(&qq, two) - &one;
    let r = &one - &qq + &twice_minus_one * &cmat;
    pivot_guard(&r)?;
    let corr = linalg::solve(&r, &linalg::scale(&twice_minus_one, re(sign)));
    let argument = &one + &c.a * corr * c.a.adjoint();
    Ok(ScaledExponential {
        scale: linalg::determinant(&r),
        argument,
    })
}

/// The channel `c2 ∘ c1` (apply `c1` first).
pub fn compose<T: Real>(
    c2: &QuasiFreeChannel<T>,
    c1: &QuasiFreeChannel<T>,
) -> Result<QuasiFreeChannel<T>> {
    check_dim(c2, c1.dim())?;
    let d = c1.dim();
    let one = identity::<T>(d);
    let (a1, b1, a2, b2) = (&c1.a, &c1.b, &c2.a, &c2.b);
    use ChannelKind::{Gamma, Lambda};
    let (kind, a, b) = match (c2.kind, c1.kind) {
        (Lambda, Lambda) => (Lambda, a1 * a2, a2.adjoint() * b1 * a2 + b2),
        (Gamma, Lambda) => {
            let inner = &one - transpose(b1) - transpose(a1) * conjugate(a1);
            (Gamma, a1 * a2, b2 + transpose(a2) * inner * conjugate(a2))
        }
        (Lambda, Gamma) => (Gamma, a1 * conjugate(a2), a2.adjoint() * b1 * a2 + b2),
        (Gamma, Gamma) => {
            let inner = &one - transpose(b1) - a1.adjoint() * a1;
            (
                Lambda,
                a1 * conjugate(a2),
                b2 + transpose(a2) * inner * conjugate(a2),
            )
        }
    };
    new_channel(kind, a, b, thresh(DEFAULT_TOL))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `Q ↦ ±A*QA + B` or `Q ↦ ±A*QᵀA + B`.
#[derive(Debug, Clone)]
pub struct AffineSymbolMap<T: Real> {
    pub sign: Sign,
    pub transpose_input: bool,
    pub a: CMat<T>,
    pub b: CMat<T>,
}

impl<T: Real> AffineSymbolMap<T> {
    pub fn apply(&self, q: &CMat<T>) -> CMat<T> {
        let input = if self.transpose_input {
            transpose(q)
        } else {
            q.clone()
        };
        let core = self.a.adjoint() * input * &self.a;
        match self.sign {
            Sign::Plus => core + &self.b,
            Sign::Minus => &self.b - core,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    CompletelyPositive,
    NotCompletelyPositive,
}

impl Classification {
    fn from_bool(cp: bool) -> Self {
        if cp {
            Self::CompletelyPositive
        } else {
            Self::NotCompletelyPositive
        }
    }
}

/// Decides whether an affine symbol map comes from a completely positive
/// map on the gauge-invariant algebra.
///
/// * `(+, Q)`: `0 ≤ B ≤ 1 - A*A`.
/// * `(-, Qᵀ)`: `A*A ≤ B ≤ 1`.
/// * `(-, Q)`: composing with the particle-hole automorphism `Q ↦ 1 - Qᵀ`
///   (itself completely positive and invertible) turns it into
///   `(+, Qᵀ)` with `A ↦ Ā`, `B ↦ 1 - Bᵀ`.
/// * `(+, Qᵀ)`: `0 ≤ B ≤ 1 - A*A` is necessary. When `rank A ≤ 1`, writing
///   `A = u v*` gives `A*QᵀA = A'*QA'` with `A' = ū v*`, so the map is a
///   `(+, Q)` map. Otherwise the map is the transpose followed by `Λ_{A,B}`
///   and is decided by dense Choi positivity on each particle sector; this
///   needs `d ≤` [`CLASSIFY_DENSE_CAP`].
pub fn classify_affine_map<T: Real>(m: &AffineSymbolMap<T>) -> Result<Classification> {
    let d = linalg::check_square(&m.a)?;
    let db = linalg::check_square(&m.b)?;
    if d != db {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: db,
        });
    }
    let tol = thresh::<T>(DEFAULT_TOL);
    if linalg::hermitian_deviation(&m.b) > tol {
        return Ok(Classification::NotCompletelyPositive);
    }
    match (m.sign, m.transpose_input) {
        (Sign::Plus, false) => Ok(Classification::from_bool(lambda_pair_valid(
            &m.a, &m.b, tol,
        )?)),
        (Sign::Minus, true) => {
            let gram = m.a.adjoint() * &m.a;
            let lower = psd_within(&(&m.b - &gram), tol)?;
            let upper = psd_within(&one_minus(&m.b), tol)?;
            Ok(Classification::from_bool(lower && upper))
        }
        (Sign::Minus, false) => {
            let flipped = AffineSymbolMap {
                sign: Sign::Plus,
                transpose_input: true,
                a: conjugate(&m.a),
                b: one_minus(&transpose(&m.b)),
            };
            classify_affine_map(&flipped)
        }
        (Sign::Plus, true) => classify_transposed(&m.a, &m.b, tol),
    }
}

fn psd_within<T: Real>(m: &CMat<T>, tol: T) -> Result<bool> {
    let h = linalg::hermitian_part(m);
    if linalg::cholesky_accepts(&h, tol) {
        return Ok(true);
    }
    Ok(min_eigenvalue(&h)? >= -tol)
}

fn lambda_pair_valid<T: Real>(a: &CMat<T>, b: &CMat<T>, tol: T) -> Result<bool> {
    let gram = a.adjoint() * a;
    Ok(psd_within(b, tol)? && psd_within(&(one_minus(&gram) - b), tol)?)
}

fn classify_transposed<T: Real>(a: &CMat<T>, b: &CMat<T>, tol: T) -> Result<Classification> {
    if !lambda_pair_valid(a, b, tol)? {
        return Ok(Classification::NotCompletelyPositive);
    }
    let d = a.nrows();
    let scale = Float::max(linalg::max_abs(a), T::one());
    let rank = linalg::numerical_rank(a, thresh(1e-12), scale)?;
    if rank <= 1 {
        return Ok(Classification::CompletelyPositive);
    }
    if d > CLASSIFY_DENSE_CAP {
        return Err(Error::DimensionCap {
            modes: d,
            cap: CLASSIFY_DENSE_CAP,
        });
    }
    let dilation = crate::choi::Dilation::new(&QuasiFreeChannel::lambda(a.clone(), b.clone())?)?;
    let basis = fock::FockBasis::new(d)?;
    let n = basis.dim();
    for k in 0..=d {
        let sector: Vec<usize> = basis.sector(k).collect();
        let m = sector.len();
        let mut choi: CMat<T> = Mat::zeros(m * n, m * n);
        for (si, &i) in sector.iter().enumerate() {
            for (sj, &j) in sector.iter().enumerate() {
                // Φ(e_ij) = Λ(e_ijᵀ) = Λ(e_ji).
                let mut unit: CMat<T> = Mat::zeros(n, n);
                unit[(j, i)] = cone();
                let image = dilation.schrodinger(&FockOperator::from_matrix(d, unit)?)?;
                for r in 0..n {
                    for s in 0..n {
                        choi[(si * n + r, sj * n + s)] = image.matrix()[(r, s)];
                    }
                }
            }
        }
        if min_eigenvalue(&linalg::hermitian_part(&choi))? < -thresh::<T>(1e-9) {
            return Ok(Classification::NotCompletelyPositive);
        }
    }
    Ok(Classification::CompletelyPositive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag_real, max_abs_diff, scaled_identity};

    #[test]
    fn construction_examples() {
        assert!(QuasiFreeChannel::<f64>::lambda(identity(2), Mat::zeros(2, 2)).is_ok());
        let err =
            QuasiFreeChannel::<f64>::lambda(identity(2), scaled_identity(2, 0.1)).unwrap_err();
        match err {
            Error::NotCompletelyPositive { eigenvalue } => {
                assert!((eigenvalue + 0.1).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(QuasiFreeChannel::lambda(scaled_identity(2, h), scaled_identity(2, 0.5)).is_ok());
    }

    #[test]
    fn schrodinger_examples() {
        let q = Symbol::diagonal(&[0.3, 0.9]).unwrap();
        let id = QuasiFreeChannel::<f64>::identity(2);
        assert!(max_abs_diff(apply_schrodinger(&id, &q).unwrap().matrix(), q.matrix()) < 1e-15);

        let q0 = diag_real(&[0.2, 0.4]);
        let constant = QuasiFreeChannel::lambda(Mat::zeros(2, 2), q0.clone()).unwrap();
        assert!(max_abs_diff(apply_schrodinger(&constant, &q).unwrap().matrix(), &q0) < 1e-15);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = QuasiFreeChannel::lambda(scaled_identity(2, h), scaled_identity(2, 0.5)).unwrap();
        let out = apply_schrodinger(&c, &Symbol::diagonal(&[1.0, 0.0]).unwrap()).unwrap();
        assert!(max_abs_diff(out.matrix(), &diag_real(&[1.0, 0.5])) < 1e-15);
    }

    #[test]
    fn heisenberg_identity_and_constant() {
        let x: CMat<f64> = Mat::from_fn(2, 2, |i, j| {
            Complex::new(0.3 * i as f64 + 0.1, 0.2 * j as f64)
        });
        let id = QuasiFreeChannel::<f64>::identity(2);
        let out = apply_heisenberg_exp(&id, &x).unwrap();
        assert!((out.scale - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!(max_abs_diff(&out.argument, &x) < 1e-14);

        let b = diag_real(&[0.25, 0.5]);
        let c = QuasiFreeChannel::lambda(Mat::zeros(2, 2), b.clone()).unwrap();
        let out = apply_heisenberg_exp(&c, &x).unwrap();
        let expect = linalg::determinant(&(identity::<f64>(2) - &b + &x * &b));
        assert!((out.scale - expect).norm() < 1e-14);
        assert!(max_abs_diff(&out.argument, &identity(2)) < 1e-15);
    }

    #[test]
    fn singular_pivot_is_refused() {
        // 1 - B + XB = 0 for B = 1, X = 0.
        let c = QuasiFreeChannel::<f64>::lambda(Mat::zeros(1, 1), identity(1)).unwrap();
        let err = apply_heisenberg_exp(&c, &Mat::zeros(1, 1)).unwrap_err();
        assert!(matches!(err, Error::SingularPivot { .. }));
    }

    #[test]
    fn lambda_composition_example() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = QuasiFreeChannel::lambda(scaled_identity(2, h), scaled_identity(2, 0.5)).unwrap();
        let cc = compose(&c, &c).unwrap();
        assert!(max_abs_diff(cc.a(), &scaled_identity(2, 0.5)) < 1e-15);
        assert!(max_abs_diff(cc.b(), &scaled_identity(2, 0.75)) < 1e-15);
        let q = Symbol::diagonal(&[1.0, 0.0]).unwrap();
        let two_step = apply_schrodinger(&c, &apply_schrodinger(&c, &q).unwrap()).unwrap();
        let one_step = apply_schrodinger(&cc, &q).unwrap();
        assert!(max_abs_diff(two_step.matrix(), one_step.matrix()) < 1e-15);
    }

    #[test]
    fn classification_examples() {
        let one = identity::<f64>(2);
        let map = |sign, t, a: CMat<f64>, b: CMat<f64>| AffineSymbolMap {
            sign,
            transpose_input: t,
            a,
            b,
        };
        let cp = Classification::CompletelyPositive;
        let not = Classification::NotCompletelyPositive;
        assert_eq!(
            classify_affine_map(&map(Sign::Plus, false, one.clone(), Mat::zeros(2, 2))).unwrap(),
            cp
        );
        assert_eq!(
            classify_affine_map(&map(Sign::Minus, true, one.clone(), one.clone())).unwrap(),
            cp
        );
        assert_eq!(
            classify_affine_map(&map(
                Sign::Minus,
                true,
                one.clone(),
                scaled_identity(2, 0.5)
            ))
            .unwrap(),
            not
        );
        // The transpose of a two-mode system is not completely positive.
        assert_eq!(
            classify_affine_map(&map(Sign::Plus, true, one.clone(), Mat::zeros(2, 2))).unwrap(),
            not
        );
        // Particle-hole conjugation Q ↦ 1 - Qᵀ is an automorphism.
        assert_eq!(
            classify_affine_map(&map(Sign::Minus, true, one.clone(), one.clone())).unwrap(),
            cp
        );
        // Q ↦ 1 - Q is the transpose composed with it, hence not CP.
        assert_eq!(
            classify_affine_map(&map(Sign::Minus, false, one.clone(), one)).unwrap(),
            not
        );
    }
}
