//! Triple modular redundancy: the classical repetition code with majority
//! voters.
//!
//! Replacement rules are built as bit-level networks of wires, voters and
//! noiseless fanouts. Flow maps follow by running every fault pattern, where
//! a failed location computes correctly and then flips its output.

mod circuit;
mod enumerate;

pub use circuit::{
    build_replacement, single_location, ClassicalCircuit, ClassicalLocation, LocationKind, N,
};
pub use enumerate::{
    ec_failure, enumerate_flow_polynomial, fault_census, tmr_flow_map, voter_map_by_substitution,
    FaultCensus, InputDomain, ENUMERATION_CAP, VARIABLES,
};
