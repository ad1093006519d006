//! Bernstein-form approximation on the unit cube with non-uniform error control.
//!
//! The crate builds the tensor-product Bernstein operator `B_n^f` and the
//! corrected operator `Q_{n,r}^f`, whose Bernstein coefficients become
//! nonnegative for large `n` when `f` is bounded below by a positive constant.
//! Around them sit exact combinatorics, Bernstein-basis algebra in `f64` and
//! exact rationals, binomial moment tables, and a verification harness that
//! measures observed errors against bounds vanishing at the cube's vertices.
//!
//! Runnable programs under `examples/` walk through each capability; the
//! `bernpos` binary exposes the batch commands.

pub mod analysis;
pub mod bernstein;
pub mod cli;
pub mod combinatorics;
pub mod config;
pub mod error;
pub mod moments;
pub mod operators;
pub mod oracle;
pub mod scalar;

pub use analysis::{
    density_demo, positivity_scan, rhs_thm1_i, rhs_thm1_ii, verify_bound, Backend, BoundReport,
    ErrorProfile, VerifyConfig,
};
pub use bernstein::{basis_eval, tensor_basis_eval, BernsteinPoly1D, TensorBernstein};
pub use combinatorics::{binomial, lattice, multinomial, order_slice, taxicab, DegreeVector, MultiIndex};
pub use error::{Error, Result};
pub use moments::{abs_moment, big_delta_n, central_moments, d_n, delta_n, lemma1_check, lemma1_rhs, MomentTable};
pub use operators::{bernstein_op, error_profile, eval_q_pointwise, lorentz_q, ApproximantSpec};
pub use oracle::{builtin, fd_check, modulus, modulus_order_r, FunctionOracle, ModulusEstimate};
pub use scalar::{Rational, Scalar};
