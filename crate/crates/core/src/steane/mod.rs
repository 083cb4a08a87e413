//! Pauli-frame fault injection for level-1 extended rectangles of the
//! 7-qubit code.
//!
//! Circuits are Clifford, so a fault is tracked as a Pauli frame pushed
//! through the schedule. Syndromes come from verified encoded ancillas
//! coupled transversally to the data; the final verdict decodes the output
//! with an ideal error correction.

mod circuit;
pub mod code;
mod exrec;
mod fit;
mod frame;
mod mc;
mod pairs;

pub use circuit::{
    Basis, Builder, Check, Classical, Gate, Op, OpBody, QCircuit, QuantumLocationKind, Segment,
    KIND_NAMES,
};
pub use exrec::{
    build_ec, build_ec_with, build_exrec, build_exrec_with, EcLayout, ExrecOptions, ANCILLA_STEPS,
};
pub use fit::{fit_pseudothreshold, FitModel, FitPoint, PseudothresholdFit, MIN_FIT_POINTS};
pub use frame::{
    propagate_pauli, single_fault_failures, Fault, Outcome, PauliFrame, RetryPolicy, MAX_RETRIES,
};
pub use mc::{
    chunk_count, chunk_trials, kind_rates, mc_failure, mc_failure_with, mc_trip, point_seed,
    run_chunk, setting_point, McConfig, McEstimate, McTrip, TwoQubitFaults, CHUNK_TRIALS,
};
pub use pairs::{leading_order, LeadingOrder};
