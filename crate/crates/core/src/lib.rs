//! Matching a Taylor series about the origin to an exponential expansion at
//! infinity, applied to the moment and connected-moment generating functions
//! of one-dimensional Schrödinger Hamiltonians.
//!
//! The pipeline is:
//!
//! 1. [`qstate`] computes exact rational moments `<phi|H^j|phi>` for
//!    polynomial potentials and polynomial-times-Gaussian trial states.
//! 2. [`expmatch`] turns `2N` Taylor coefficients into `N` exponentials via
//!    the Hankel pencil: an exact characteristic polynomial, its roots at a
//!    chosen decimal precision, and a Vandermonde solve for the amplitudes.
//! 3. [`cmx`] applies the same machinery to connected moments (the
//!    constant-plus-exponentials and pure-exponential ansätze), together with
//!    the closed-form energy approximant and the overlap estimate.
//! 4. [`problems`] and [`tables`] hold the benchmark oscillators and the table
//!    harness used by the `momx` binary.

pub mod cli;
pub mod cmx;
pub mod error;
pub mod expmatch;
pub mod linalg;
pub mod problems;
pub mod qstate;
pub mod real;
pub mod reference;
pub mod roots;
pub mod tables;

pub use error::{Error, Result};
pub use expmatch::{ExponentialModel, PrecisionContext, SeriesCoefficients};
pub use qstate::{ExactRational, GaussianPolyState, MomentSequence, PolynomialHamiltonian};
pub use real::{Complex, Real};
