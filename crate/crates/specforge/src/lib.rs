//! specforge: a numerical laboratory for the discrete spectrum of
//! non-selfadjoint operators H = H0 + M on finite-dimensional surrogates.
//!
//! The library is organized around the chain of objects that connect a
//! perturbed operator to bounds on its eigenvalues:
//!
//! * [`linalg`] — dense complex linear algebra: eigenvalues with
//!   multiplicities, singular values, Schatten norms and regularized
//!   determinants.
//! * [`halfline`] — geometry of the slit plane C \ [0, inf): distances,
//!   the upper-half-plane square root and the conformal disk map.
//! * [`perturbation`] — the operator-valued function F(lambda), the
//!   perturbation determinant f(lambda), its disk transfer h(z) and the
//!   growth-envelope bounds.
//! * [`functionals`] — exponent arithmetic and all eigenvalue-sum
//!   functionals, with empirical-ratio diagnostics.
//! * [`models`] — construction of test operators: discretized Schroedinger
//!   operators with complex potentials and abstract diagonal-plus-dense
//!   models.
//! * [`symbols`] — adaptive quadrature for the L^p resolvent-symbol norms
//!   and the explicit integral identities used along the way.
//! * [`bgk`] — zero-sum functionals and growth envelopes of holomorphic
//!   functions in the unit disk, with Blaschke-product oracles.
//! * [`harness`] — experiment orchestration: seeded sweeps, verification
//!   pipelines and CSV/JSON report persistence.

// Parameter validation uses `!(x > 0.0)` throughout so that NaN fails the
// check; the `x <= 0.0` form clippy suggests would accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bgk;
pub mod functionals;
pub mod halfline;
pub mod harness;
pub mod linalg;
pub mod models;
pub mod perturbation;
pub mod rng;
pub mod symbols;

pub use num_complex::Complex64;
