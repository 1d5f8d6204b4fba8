//! Numerical laboratory for the regularisation of cylindrical Lévy processes
//! in weighted Besov spaces B^p_{s,w}(ℝ^d).
//!
//! Everything works in wavelet sequence space: a distribution is a table of
//! coefficients λ^{j,G}_m and its norm is a weighted ℓ^p norm.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod besov;
pub mod error;
pub mod exec;
pub mod fit;
pub mod hedgehog;
pub mod levy;
pub mod quad;
pub mod region;
pub mod rng;
pub mod sampler;
pub mod special;
pub mod stable;
pub mod sum;

pub use besov::{
    dual_params, enumerate_indices, seq_norm, weight, weight_power_sum, BesovParams,
    CoefficientField, IndexEnumeration, SumVerdict, TranslationBound, Truncation, WaveletIndex,
    WeightSumReport,
};
pub use error::{Error, Result};
pub use exec::Execution;
