//! Flow-map model of recursive fault-tolerant simulation.
//!
//! A fault-tolerant construction replaces every location type by a circuit
//! built from the previous level's locations. The failure probability of each
//! replaced location is a polynomial in the failure probabilities of the
//! locations it contains, so one level of recursion is a polynomial map on
//! `[0,1]^n` and `L` levels are its `L`-fold iterate.
//!
//! The crate is organised by concern:
//!
//! * [`polyflow`]: sparse multivariate polynomials and flow maps (evaluation,
//!   composition, iteration, truncation, Jacobians).
//! * [`settings`]: one-parameter settings `γ ↦ (m₁γ, …, mₙγ)`.
//! * [`analysis`]: pseudothresholds, asymptotic thresholds, TRIP curves,
//!   TIFD vector fields, fixed points, basin classification and threshold
//!   sets.
//! * [`tmr`]: the classical triple-modular-redundancy construction and exact
//!   map derivation by fault enumeration.
//! * [`steane`]: a Pauli-frame fault-injection simulator for level-1
//!   extended rectangles of the 7-qubit code.
//! * [`models`]: small built-in maps used as examples and test fixtures.
//!
//! The crate is `no_std` and only needs `alloc`; IO, file formats and the
//! command line live in the companion `flowmap` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
mod error;
pub(crate) mod math;
pub mod models;
pub mod polyflow;
pub mod settings;
pub mod steane;
pub mod tmr;

pub use error::{Error, Result};
pub use polyflow::{Coeff, FailureVector, FlowMap, Monomial, Polynomial, TruncateMode};
pub use settings::Setting;
