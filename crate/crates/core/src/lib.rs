//! Single-mode squeezed vacuum in the amplitude-damping channel.
//!
//! Two independent routes to the evolved state are provided:
//!
//! - [`analytic`]: closed forms for the output state `W e^{(ß/2)a†²} g^{a†a} e^{(ß/2)a²}`
//!   and the observables derived from it (mean photon number, photon statistics,
//!   Wigner function, tomogram).
//! - [`fock`] + [`channel`]: a truncated Fock-space density matrix evolved either by
//!   the Kraus operator sum or by RK4 integration of the master equation
//!   `dρ/ds = 2aρa† − a†aρ − ρa†a` in the dimensionless time `s = κt`.
//!
//! [`specfun`] holds the special functions and quadrature shared by both.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod fock;
pub mod specfun;

pub use analytic::{ChannelPoint, EvolvedParams};
pub use channel::KrausFamily;
pub use error::{Error, Result};
pub use fock::{FockDensityMatrix, QuadratureFrame};
pub use num_complex::Complex64;
