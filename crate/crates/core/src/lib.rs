//! Exact spectral counting for rational Heisenberg manifolds and numerical
//! verification of the analytic devices behind the Ω-bound for the Weyl-law
//! remainder.
//!
//! The crate is organised bottom-up:
//!
//!   - [`arithmetic`]: exact binomials, `r_n(k)`, ball lattice counts `A_n(x)`,
//!     divisor pairs and `theta_l(n)`;
//!   - [`vaaler`]: the sawtooth `psi` and Vaaler's majorant pair `(Σ_H, Σ*_H)`;
//!   - [`spectrum`]: the manifold model, exact `N(t) = N_I(t) + N_II(t)`,
//!     the Weyl main term, and the remainder pipeline `E(u)`, `E*(u)`;
//!   - [`expsum`]: exponential sums, the stationary-phase transform and `S(u,U)`;
//!   - [`smoothing`]: the Fejér kernel and the smoothed sum `I(T,U)`;
//!   - [`diophantine`]: nearest-integer distances and the search for `U`;
//!   - [`hunt`]: scans for large normalized remainders, mean-square fits;
//!   - [`cli`]: the `weyllab` command surface.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

// `!(x > 0.0)` guards deliberately reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arithmetic;
pub mod cli;
pub mod diophantine;
pub mod error;
pub mod expsum;
pub mod hunt;
pub mod numeric;
pub mod smoothing;
pub mod spectrum;
pub mod vaaler;

pub use arithmetic::{BigCount, DivisorPair};
pub use error::{Error, Result};
pub use spectrum::HeisenbergManifold;
pub use vaaler::VaalerApproximant;
