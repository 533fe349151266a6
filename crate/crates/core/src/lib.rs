//! Exact computer algebra for higher Kähler differentials of polynomials and
//! truncated power series, and for the representation of truncated
//! power-series automorphisms as polynomial automorphisms of jet space.
//!
//! All arithmetic is exact. Generic code is written against [`Scalar`] and
//! [`Field`]; the aliases below fix the coefficient ring to arbitrary
//! precision rationals.

pub mod error;
pub mod ga;
pub mod harness;
pub mod kaehler;
pub mod linalg;
pub mod naming;
pub mod parser;
pub mod poly;
pub mod random;
pub mod rep;
pub mod scalar;
pub mod serial;
pub mod series;
pub mod symbolic;

pub use error::{Error, ParseErrorKind, Result};
pub use ga::{invert_block_triangular, PolyAutomorphism, PolyEndo};
pub use kaehler::{
    enumerate_weight_matrices, higher_differential, reduce_at_origin, taylor_oracle, universal_derivation,
    DifferentialContext, WeightMatrix,
};
pub use naming::{render_latex, render_plain, JetStyle, VarNames};
pub use parser::{parse_polynomial, parse_series_map};
pub use poly::{ExponentVector, Polynomial};
pub use rep::{
    alpha, alpha_automorphism, alpha_with_mode, embed_endo, embed_ga, formal_elementary, formal_triangular,
    linear_embed, recover_series, AlphaImage, AlphaMode,
};
pub use scalar::{Coefficient, Field, Scalar};
pub use series::{random_automorphism, TruncatedSeriesMap};
pub use symbolic::Symbolic;

/// Polynomial with rational coefficients.
pub type Poly = Polynomial<Coefficient>;
/// Element of the truncated automorphism group over the rationals.
pub type SeriesMap = TruncatedSeriesMap<Coefficient>;
/// Polynomial endomorphism over the rationals.
pub type Endo = PolyEndo<Coefficient>;
/// Polynomial automorphism over the rationals.
pub type Automorphism = PolyAutomorphism<Coefficient>;
/// Series map with symbolic coefficients.
pub type SymbolicSeriesMap = TruncatedSeriesMap<Symbolic>;
