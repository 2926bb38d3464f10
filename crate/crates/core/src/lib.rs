//! Gauge-invariant quasi-free fermionic states and channels.
//!
//! Symbol-level computations cost polynomial time in the number of modes
//! `d`. The [`fock`] module builds the same objects densely on the `2^d`
//! dimensional Fock space so the two can be compared at small `d`.

pub mod channels;
pub mod choi;
pub mod entropy;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod oracle;
pub mod random;
pub mod scalar;
pub mod symbols;

pub use channels::{
    apply_heisenberg_exp, apply_heisenberg_exp_with, apply_heisenberg_state, apply_schrodinger,
    classify_affine_map, compose, new_channel, AffineSymbolMap, ChannelKind, Classification,
    PivotSide, QuasiFreeChannel, ScaledExponential, Sign,
};
pub use choi::{
    choi_exponential_form, dense_choi, dense_jamiolkowski, jamiolkowski_symbol,
    jamiolkowski_symbol_of_pair, stinespring_heisenberg, stinespring_schrodinger,
    ChoiExponentialForm, JamiolkowskiSymbol,
};
pub use entropy::{
    relative_entropy, renyi_entropy, von_neumann_entropy, EntropyKind, EntropyResult,
};
pub use error::{Error, Result};
pub use fock::{
    creation_operator, density_matrix, exp_element, exp_spectrum, is_elementary,
    k_particle_projector, number_operator, parity_operator, split_isomorphism, wedge_state_product,
    FockBasis, FockOperator,
};
pub use scalar::{CMat, Real};
pub use symbols::{
    conjugate_matrix, mix_symbols, spectral, validate_symbol, SpectralSymbol, Symbol,
};

pub use num_complex::{Complex, Complex32, Complex64};

pub type Symbol64 = Symbol<f64>;
pub type Symbol32 = Symbol<f32>;
pub type Channel64 = QuasiFreeChannel<f64>;
pub type Channel32 = QuasiFreeChannel<f32>;
pub type FockOperator64 = FockOperator<f64>;
pub type FockOperator32 = FockOperator<f32>;
pub type Matrix64 = CMat<f64>;
pub type Matrix32 = CMat<f32>;
