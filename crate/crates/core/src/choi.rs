//! Jamiolkowski symbols, Choi matrices, and the dense Stinespring oracle.
//!
//! The dense side realizes `Λ_{A,B}` on the Fock space of `d` modes through
//! a dilation onto `2d` modes: tensor the input with an environment state
//! `ρ_{Q'}`, rotate by the exponential element of the unitary
//!
//! ```text
//! V = [[ A,              √(1 - AA*) ],
//!      [ -√(1 - A*A),    A*         ]]
//! ```
//!
//! and trace the environment out. `Q'` solves `B = S Q' S` with
//! `S = √(1 - A*A)`. A Gamma channel is the Lambda channel of `(Ā, B)`
//! preceded by the particle-hole automorphism.

use faer::Mat;

use crate::channels::{ChannelKind, QuasiFreeChannel};
use crate::error::{Error, Result};
use crate::fock::{self, FockOperator};
use crate::linalg::{self, adjoint, block, conjugate, identity, transpose};
use crate::scalar::{lit, re, thresh, CMat, Real};
use crate::symbols::{to_f64, Symbol};

/// Largest `d` accepted by the dense channel oracle (`4^d` sized matrices).
pub const DENSE_CHANNEL_CAP: usize = 6;

/// Largest condition number of `B` for the closed Choi form.
pub const B_CONDITION_LIMIT: f64 = 1e12;

/// Residual allowed when reconstructing `B` from the environment symbol.
pub const ENVIRONMENT_RESIDUAL_TOL: f64 = 1e-8;

/// Symbol of the Jamiolkowski state, on `2d` modes.
#[derive(Debug, Clone)]
pub struct JamiolkowskiSymbol<T: Real> {
    pub symbol: Symbol<T>,
    pub source: QuasiFreeChannel<T>,
}

/// `scale · E(argument)` on `2d` modes.
#[derive(Debug, Clone)]
pub struct ChoiExponentialForm<T: Real> {
    pub scale: T,
    pub argument: CMat<T>,
}

impl<T: Real> ChoiExponentialForm<T> {
    /// Dense realization in Fock coordinates over `2d` modes.
    pub fn densify(&self) -> Result<FockOperator<T>> {
        Ok(fock::exp_element(&self.argument)?.scaled(re(self.scale)))
    }

    /// Dense realization in tensor coordinates of `Fock(d) ⊗ Fock(d)`.
    pub fn densify_tensor(&self) -> Result<CMat<T>> {
        let d = self.argument.nrows() / 2;
        let s = fock::split_isomorphism::<T>(d, d)?;
        Ok(&s * self.densify()?.matrix() * s.adjoint())
    }
}

fn dense_cap(d: usize) -> Result<()> {
    if d > DENSE_CHANNEL_CAP {
        return Err(Error::DimensionCap {
            modes: d,
            cap: DENSE_CHANNEL_CAP,
        });
    }
    fock::check_cap(2 * d)
}

/// `½ [[1, 1], [1, 1]]` on `2d` modes: the pure symbol whose marginal on
/// either half is totally mixed.
pub fn maximally_entangled_symbol<T: Real>(d: usize) -> Result<Symbol<T>> {
    let half = lit::<T>(0.5);
    let m = Mat::from_fn(2 * d, 2 * d, |i, j| {
        if i % d == j % d {
            re(half)
        } else {
            re(T::zero())
        }
    });
    Symbol::new(&m)
}

/// Pair `(diag(1, A'), diag(0, B))` describing `id ∧ Λ` on `2d` modes, with
/// `A' = A` for Lambda and `A' = Ā` for Gamma (after the local
/// particle-hole automorphism).
pub fn extended_pair<T: Real>(c: &QuasiFreeChannel<T>) -> (CMat<T>, CMat<T>) {
    let d = c.dim();
    let a = match c.kind() {
        ChannelKind::Lambda => c.a().clone(),
        ChannelKind::Gamma => conjugate(c.a()),
    };
    let z = Mat::zeros(d, d);
    (block(&identity(d), &z, &z, &a), block(&z, &z, &z, c.b()))
}

/// `½ [[1, A], [A*, A*A + 2B]]` for Lambda and
/// `½ [[1, -A], [-A*, A*A + 2Bᵀ]]` for Gamma.
pub fn jamiolkowski_symbol<T: Real>(c: &QuasiFreeChannel<T>) -> Result<JamiolkowskiSymbol<T>> {
    let symbol = jamiolkowski_symbol_of_pair(c.kind(), c.a(), c.b())?;
    Ok(JamiolkowskiSymbol {
        symbol,
        source: c.clone(),
    })
}

/// Same block matrix built from a raw pair without validating the channel.
///
/// The result is a valid symbol exactly when the pair satisfies the channel
/// condition, so an invalid pair is reported by the symbol validation
/// (`SpectrumOutOfRange`).
pub fn jamiolkowski_symbol_of_pair<T: Real>(
    kind: ChannelKind,
    a: &CMat<T>,
    b: &CMat<T>,
) -> Result<Symbol<T>> {
    let d = linalg::check_square(a)?;
    let db = linalg::check_square(b)?;
    if d != db {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: db,
        });
    }
    let half = re(lit::<T>(0.5));
    let two = re(lit::<T>(2.0));
    let gram = a.adjoint() * a;
    let (off, bb) = match kind {
        ChannelKind::Lambda => (a.clone(), b.clone()),
        ChannelKind::Gamma => (linalg::scale(a, re(-T::one())), transpose(b)),
    };
    let m = block(
        &identity(d),
        &off,
        &adjoint(&off),
        &(gram + linalg::scale(&bb, two)),
    );
    Symbol::new(&linalg::scale(&m, half))
}

/// `det(B) E[[B⁻¹ - 1, B⁻¹A*], [AB⁻¹, 1 + AB⁻¹A*]]`, with `A` replaced by
/// `Ā` for Gamma.
pub fn choi_exponential_form<T: Real>(c: &QuasiFreeChannel<T>) -> Result<ChoiExponentialForm<T>> {
    let d = c.dim();
    let b = c.b();
    let condition = linalg::condition_number(b)?;
    if !(condition < lit(B_CONDITION_LIMIT)) {
        return Err(Error::SingularB {
            condition: to_f64(condition),
        });
    }
    let a = match c.kind() {
        ChannelKind::Lambda => c.a().clone(),
        ChannelKind::Gamma => conjugate(c.a()),
    };
    let one = identity::<T>(d);
    let binv = linalg::hermitian_part(&linalg::solve(b, &one));
    let top_right = &binv * a.adjoint();
    let bottom_left = &a * &binv;
    let bottom_right = &one + &a * &top_right;
    let argument = block(&(&binv - &one), &top_right, &bottom_left, &bottom_right);
    Ok(ChoiExponentialForm {
        scale: linalg::determinant(b).re,
        argument,
    })
}

/// Precomputed dense dilation of a channel.
#[derive(Debug, Clone)]
pub struct Dilation<T: Real> {
    d: usize,
    // S E(V) S* in tensor coordinates (system ⊗ environment).
    w: CMat<T>,
    env: CMat<T>,
    // K with ρ_{Q'} = K K*.
    env_factor: CMat<T>,
    particle_hole: Option<CMat<T>>,
}

impl<T: Real> Dilation<T> {
    pub fn new(c: &QuasiFreeChannel<T>) -> Result<Self> {
        let d = c.dim();
        dense_cap(d)?;
        let (a, particle_hole) = match c.kind() {
            ChannelKind::Lambda => (c.a().clone(), None),
            ChannelKind::Gamma => (
                conjugate(c.a()),
                Some(fock::particle_hole_unitary::<T>(d)?.into_matrix()),
            ),
        };
        let one = identity::<T>(d);
        let right = linalg::psd_sqrt(&linalg::hermitian_part(&(&one - a.adjoint() * &a)))?;
        let left = linalg::psd_sqrt(&linalg::hermitian_part(&(&one - &a * a.adjoint())))?;
        let v = block(
            &a,
            &left,
            &linalg::scale(&right, re(-T::one())),
            &adjoint(&a),
        );
        let s = fock::split_isomorphism::<T>(d, d)?;
        let w = &s * fock::exp_element(&v)?.matrix() * s.adjoint();

        let q_env = environment_symbol(&right, c.b())?;
        let spec = q_env.spectral()?;
        let weights = fock::occupation_weights(&spec.eigenvalues)?;
        let eu = fock::exp_element(&spec.eigenvectors)?;
        let roots: Vec<T> = weights
            .iter()
            .map(|&x| num_traits::Float::sqrt(x))
            .collect();
        let n = 1usize << d;
        let env_factor = Mat::from_fn(n, n, |i, j| eu.matrix()[(i, j)].scale(roots[j]));
        let env = linalg::hermitian_part(&(&env_factor * env_factor.adjoint()));
        Ok(Self {
            d,
            w,
            env,
            env_factor,
            particle_hole,
        })
    }

    pub fn modes(&self) -> usize {
        self.d
    }

    /// Environment density matrix `ρ_{Q'}`.
    pub fn environment(&self) -> &CMat<T> {
        &self.env
    }

    fn check(&self, x: &FockOperator<T>) -> Result<()> {
        if x.modes() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: x.modes(),
            });
        }
        Ok(())
    }

    /// `tr_E[(1 ⊗ ρ_{Q'}) W (x ⊗ 1) W*]`.
    fn lambda_heisenberg(&self, x: &CMat<T>) -> CMat<T> {
        let n = 1usize << self.d;
        let lifted = linalg::kron(x, &identity(n));
        let rotated = &self.w * lifted * self.w.adjoint();
        let weighted = linalg::kron(&identity(n), &self.env) * rotated;
        linalg::partial_trace_second(&weighted, n, n)
    }

    /// `tr_E[W* (σ ⊗ ρ_{Q'}) W]`.
    fn lambda_schrodinger(&self, sigma: &CMat<T>) -> CMat<T> {
        let n = 1usize << self.d;
        let joint = linalg::kron(sigma, &self.env);
        let rotated = self.w.adjoint() * joint * &self.w;
        linalg::partial_trace_second(&rotated, n, n)
    }

    pub fn heisenberg(&self, x: &FockOperator<T>) -> Result<FockOperator<T>> {
        self.check(x)?;
        let out = self.lambda_heisenberg(x.matrix());
        let out = match &self.particle_hole {
            None => out,
            Some(u) => u * out * u.adjoint(),
        };
        FockOperator::from_matrix(self.d, out)
    }

    pub fn schrodinger(&self, sigma: &FockOperator<T>) -> Result<FockOperator<T>> {
        self.check(sigma)?;
        let input = match &self.particle_hole {
            None => sigma.matrix().clone(),
            Some(u) => u.adjoint() * sigma.matrix() * u,
        };
        FockOperator::from_matrix(self.d, self.lambda_schrodinger(&input))
    }

    /// `Σ_ij e_ij ⊗ Λ*(e_ij)` in tensor coordinates, assembled as `G G*`.
    pub fn choi(&self) -> CMat<T> {
        let n = 1usize << self.d;
        // G[(i,a), (β,γ)] = Σ_α W[(a,α), (i,β)] conj(K[α,γ])
        let k_conj = conjugate(&self.env_factor);
        let mut g: CMat<T> = Mat::zeros(n * n, n * n);
        for beta in 0..n {
            for i in 0..n {
                let block_w = Mat::from_fn(n, n, |a, alpha| self.w[(a * n + alpha, i * n + beta)]);
                let prod = block_w * &k_conj;
                for a in 0..n {
                    for gamma in 0..n {
                        g[(i * n + a, beta * n + gamma)] = prod[(a, gamma)];
                    }
                }
            }
        }
        let c = &g * g.adjoint();
        let c = match &self.particle_hole {
            None => c,
            Some(u) => {
                let lift = linalg::kron(&identity(n), u);
                &lift * c * lift.adjoint()
            }
        };
        linalg::hermitian_part(&c)
    }

    /// `2^{-d} Σ_ij e_ij ⊗ Λ(e_ij)` in tensor coordinates.
    pub fn jamiolkowski(&self) -> CMat<T> {
        let n = 1usize << self.d;
        // G[(i,b), (β,γ)] = Σ_α conj(W[(i,α), (b,β)]) K[α,γ]
        let mut g: CMat<T> = Mat::zeros(n * n, n * n);
        for beta in 0..n {
            for i in 0..n {
                let block_w = Mat::from_fn(n, n, |b, alpha| {
                    self.w[(i * n + alpha, b * n + beta)].conj()
                });
                let prod = block_w * &self.env_factor;
                for b in 0..n {
                    for gamma in 0..n {
                        g[(i * n + b, beta * n + gamma)] = prod[(b, gamma)];
                    }
                }
            }
        }
        let scale = re(T::one() / lit::<T>(n as f64));
        let j = linalg::scale(&(&g * g.adjoint()), scale);
        let j = match &self.particle_hole {
            // Λ(U* e_ij U) summed against e_ij equals (Ū ⊗ 1) J_Λ (Ū ⊗ 1)*.
            Some(u) => {
                let lift = linalg::kron(&conjugate(u), &identity(n));
                &lift * j * lift.adjoint()
            }
            None => j,
        };
        linalg::hermitian_part(&j)
    }
}

/// Solves `B = S Q' S` for `0 ≤ Q' ≤ 1` through the pseudoinverse of `S`.
fn environment_symbol<T: Real>(s: &CMat<T>, b: &CMat<T>) -> Result<Symbol<T>> {
    let (vals, vecs) = linalg::eigh(s)?;
    let cut = thresh::<T>(1e-7);
    let inv: Vec<T> = vals
        .iter()
        .map(|&x| if x > cut { T::one() / x } else { T::zero() })
        .collect();
    let pinv = linalg::reconstruct(&vecs, &inv);
    let raw = linalg::hermitian_part(&(&pinv * b * &pinv));
    let clamped = linalg::hermitian_function(&raw, |x| {
        num_traits::Float::min(num_traits::Float::max(x, T::zero()), T::one())
    })?;
    let residual = linalg::max_abs_diff(&(s * &clamped * s), b);
    if residual > thresh(ENVIRONMENT_RESIDUAL_TOL) {
        return Err(Error::InconsistentB {
            residual: to_f64(residual),
        });
    }
    Symbol::new(&clamped)
}

/// Dense `Λ*(x)` through the dilation.
pub fn stinespring_heisenberg<T: Real>(
    c: &QuasiFreeChannel<T>,
    x: &FockOperator<T>,
) -> Result<FockOperator<T>> {
    Dilation::new(c)?.heisenberg(x)
}

/// Dense `Λ(σ)` through the dilation.
pub fn stinespring_schrodinger<T: Real>(
    c: &QuasiFreeChannel<T>,
    sigma: &FockOperator<T>,
) -> Result<FockOperator<T>> {
    Dilation::new(c)?.schrodinger(sigma)
}

/// Dense Choi matrix `Σ_ij e_ij ⊗ Λ*(e_ij)` of the dual channel, in tensor
/// coordinates of `Fock(d) ⊗ Fock(d)`.
pub fn dense_choi<T: Real>(c: &QuasiFreeChannel<T>) -> Result<CMat<T>> {
    Ok(Dilation::new(c)?.choi())
}

/// Dense Jamiolkowski state `2^{-d} Σ_ij e_ij ⊗ Λ(e_ij)`.
pub fn dense_jamiolkowski<T: Real>(c: &QuasiFreeChannel<T>) -> Result<CMat<T>> {
    Ok(Dilation::new(c)?.jamiolkowski())
}
