use alloc::vec::Vec;

use super::circuit::{Basis, Check, Classical, Gate, OpBody, QCircuit, QuantumLocationKind};
use super::code::decode_is_logical;
use crate::{Error, Result};

/// Most re-preparations of one ancilla before the trial is counted as a
/// failure.
pub const MAX_RETRIES: u32 = 10;

/// X and Z error bits, one per qubit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    pub x: u128,
    pub z: u128,
}

impl PauliFrame {
    pub fn x_bit(&self, q: u8) -> bool {
        self.x >> q & 1 == 1
    }

    pub fn z_bit(&self, q: u8) -> bool {
        self.z >> q & 1 == 1
    }

    /// One-qubit Pauli code: bit 0 is X, bit 1 is Z (so 3 is Y).
    pub fn apply(&mut self, q: u8, pauli: u8) {
        self.x ^= u128::from(pauli & 1) << q;
        self.z ^= u128::from(pauli >> 1 & 1) << q;
    }

    /// Two-qubit Pauli code: low two bits act on `a`, high two on `b`.
    pub fn apply2(&mut self, a: u8, b: u8, pauli: u8) {
        self.apply(a, pauli & 3);
        self.apply(b, pauli >> 2 & 3);
    }

    pub fn cnot(&mut self, c: u8, t: u8) {
        self.x ^= (self.x >> c & 1) << t;
        self.z ^= (self.z >> t & 1) << c;
    }

    pub fn h(&mut self, q: u8) {
        let (x, z) = (self.x >> q & 1, self.z >> q & 1);
        if x != z {
            self.x ^= 1 << q;
            self.z ^= 1 << q;
        }
    }

    pub fn clear(&mut self, mask: u128) {
        self.x &= !mask;
        self.z &= !mask;
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    fn word(bits: u128, qubits: &[u8; 7]) -> u8 {
        qubits
            .iter()
            .enumerate()
            .fold(0, |w, (i, &q)| w | ((bits >> q & 1) as u8) << i)
    }

    pub fn x_word(&self, qubits: &[u8; 7]) -> u8 {
        Self::word(self.x, qubits)
    }

    pub fn z_word(&self, qubits: &[u8; 7]) -> u8 {
        Self::word(self.z, qubits)
    }
}

/// What happens when an ancilla fails its check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RetryPolicy {
    /// Prepare it again while every other live qubit waits; the new
    /// locations can fail too.
    #[default]
    Reprepare,
    /// Prepare it again with fresh faults, but nothing else waits.
    PostSelect,
}

/// Supplies the Pauli applied by each fault.
pub(crate) trait FaultSource {
    /// Fault at a location of the base schedule.
    fn base(&mut self, op: usize, kind: QuantumLocationKind) -> Option<u8>;
    /// Fault at a location added by a retry.
    fn fresh(&mut self, kind: QuantumLocationKind) -> Option<u8>;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub failed: bool,
    pub retries: u32,
    /// Some ancilla was still rejected after [`MAX_RETRIES`].
    pub gave_up: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct State {
    pub frame: PauliFrame,
    pub flips: u128,
}

impl State {
    pub(crate) fn gate(&mut self, gate: Gate, fault: Option<u8>) {
        let f = &mut self.frame;
        match gate {
            Gate::Prep { q, .. } => {
                f.clear(1 << q);
                if let Some(p) = fault {
                    f.apply(q, p);
                }
            }
            Gate::H { q } => {
                f.h(q);
                if let Some(p) = fault {
                    f.apply(q, p);
                }
            }
            Gate::Cnot { c, t } => {
                f.cnot(c, t);
                if let Some(p) = fault {
                    f.apply2(c, t, p);
                }
            }
            Gate::Wait { q } => {
                if let Some(p) = fault {
                    f.apply(q, p);
                }
            }
            Gate::Meas { q, basis, slot } => {
                if let Some(p) = fault {
                    f.apply(q, p);
                }
                let flip = match basis {
                    Basis::Z => f.x_bit(q),
                    Basis::X => f.z_bit(q),
                };
                self.flips = self.flips & !(1 << slot) | u128::from(flip) << slot;
                f.clear(1 << q);
            }
        }
    }

    fn slot_word(&self, slots: &[u16; 7]) -> u8 {
        slots
            .iter()
            .enumerate()
            .fold(0, |w, (i, &s)| w | ((self.flips >> s & 1) as u8) << i)
    }

    fn correct(&mut self, x: bool, data: &[u8; 7], slots: &[u16; 7]) {
        let s = super::code::syndrome(self.slot_word(slots));
        if s != 0 {
            let q = data[s as usize - 1];
            self.frame.apply(q, if x { 1 } else { 2 });
        }
    }

    pub(crate) fn failed(&self, checks: &[Check]) -> bool {
        checks.iter().any(|c| match c {
            Check::Block { qubits, x, z } => {
                (*x && decode_is_logical(self.frame.x_word(qubits)))
                    || (*z && decode_is_logical(self.frame.z_word(qubits)))
            }
            Check::Readout { slots } => decode_is_logical(self.slot_word(slots)),
        })
    }
}

/// Runs one trial: gates with the source's faults, ancilla checks with
/// retries, corrections, and the final ideal decode.
pub(crate) fn execute<F: FaultSource>(c: &QCircuit, src: &mut F, policy: RetryPolicy) -> Outcome {
    let mut st = State::default();
    let mut retries = 0;
    for (i, op) in c.ops.iter().enumerate() {
        match op.body {
            OpBody::Gate { gate, kind } => st.gate(gate, src.base(i, kind)),
            OpBody::Classical(Classical::Correct { x, data, slots }) => {
                st.correct(x, &data, &slots)
            }
            OpBody::Classical(Classical::Verify { segment, slot }) => {
                let seg = &c.segments[segment as usize];
                let mut tries = 0;
                while st.flips >> slot & 1 == 1 {
                    if tries == MAX_RETRIES {
                        return Outcome {
                            failed: true,
                            retries,
                            gave_up: true,
                        };
                    }
                    tries += 1;
                    retries += 1;
                    st.frame.clear(seg.qubits);
                    st.flips &= !seg.slots;
                    for &j in &seg.ops {
                        if let OpBody::Gate { gate, kind } = c.ops[j].body {
                            st.gate(gate, src.fresh(kind));
                        }
                    }
                    if policy == RetryPolicy::Reprepare {
                        for _ in 0..seg.duration() {
                            for &q in &seg.idle {
                                if let Some(p) = src.fresh(QuantumLocationKind::Wait) {
                                    st.frame.apply(q, p);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Outcome {
        failed: st.failed(&c.checks),
        retries,
        gave_up: false,
    }
}

/// A forced fault: the Pauli applied at gate op `op`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fault {
    pub op: usize,
    /// One-qubit code 1..=3, or two-qubit code 1..=15 for CNOTs.
    pub pauli: u8,
}

struct Forced<'a> {
    faults: &'a [Fault],
}

impl FaultSource for Forced<'_> {
    fn base(&mut self, op: usize, _: QuantumLocationKind) -> Option<u8> {
        // several faults on one location compose
        let p = self
            .faults
            .iter()
            .filter(|f| f.op == op)
            .fold(0, |acc, f| acc ^ f.pauli);
        (p != 0).then_some(p)
    }

    fn fresh(&mut self, _: QuantumLocationKind) -> Option<u8> {
        None
    }
}

fn validate(c: &QCircuit, faults: &[Fault]) -> Result<()> {
    for f in faults {
        let Some(OpBody::Gate { kind, .. }) = c.ops.get(f.op).map(|o| o.body) else {
            return Err(Error::InvalidArgument(alloc::format!(
                "op {} is not a gate location",
                f.op
            )));
        };
        if f.pauli == 0 || f.pauli > kind.pauli_count() {
            return Err(Error::InvalidArgument(alloc::format!(
                "Pauli code {} is not valid at a `{kind}` location",
                f.pauli
            )));
        }
    }
    Ok(())
}

/// Deterministic frame propagation with the given faults; re-prepared
/// ancillas are fault-free.
pub fn propagate_pauli(c: &QCircuit, faults: &[Fault]) -> Result<Outcome> {
    validate(c, faults)?;
    Ok(execute(c, &mut Forced { faults }, RetryPolicy::Reprepare))
}

/// Every single fault that leaves a logical error. Empty for a
/// fault-tolerant circuit.
pub fn single_fault_failures(c: &QCircuit) -> Vec<Fault> {
    let mut bad = Vec::new();
    for kind in QuantumLocationKind::ALL {
        for &op in c.locations(kind) {
            for pauli in 1..=kind.pauli_count() {
                let f = [Fault { op, pauli }];
                if execute(c, &mut Forced { faults: &f }, RetryPolicy::Reprepare).failed {
                    bad.push(f[0]);
                }
            }
        }
    }
    bad.sort();
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steane::build_exrec;

    #[test]
    fn conjugation_rules() {
        let mut f = PauliFrame::default();
        f.apply(0, 1);
        f.cnot(0, 1);
        assert_eq!((f.x, f.z), (0b11, 0));
        let mut f = PauliFrame::default();
        f.apply(1, 2);
        f.cnot(0, 1);
        assert_eq!((f.x, f.z), (0, 0b11));
        let mut f = PauliFrame::default();
        f.apply(2, 1);
        f.h(2);
        assert_eq!((f.x, f.z), (0, 0b100));
        f.apply(2, 1);
        f.h(2);
        assert_eq!((f.x, f.z), (0b100, 0b100));
    }

    #[test]
    fn empty_fault_set_succeeds() {
        for k in QuantumLocationKind::ALL {
            let c = build_exrec(k);
            assert_eq!(propagate_pauli(&c, &[]).unwrap(), Outcome::default());
        }
    }

    #[test]
    fn every_exrec_tolerates_single_faults() {
        for k in QuantumLocationKind::ALL {
            let c = build_exrec(k);
            let bad = single_fault_failures(&c);
            assert!(bad.is_empty(), "{c}: {:?}", &bad[..bad.len().min(5)]);
        }
    }

    #[test]
    fn invalid_faults_are_rejected() {
        let c = build_exrec(QuantumLocationKind::One);
        let cnot = c.locations(QuantumLocationKind::Two)[0];
        let wait = c.locations(QuantumLocationKind::Wait)[0];
        assert!(propagate_pauli(
            &c,
            &[Fault {
                op: cnot,
                pauli: 15
            }]
        )
        .is_ok());
        assert!(propagate_pauli(&c, &[Fault { op: wait, pauli: 4 }]).is_err());
        assert!(propagate_pauli(&c, &[Fault { op: wait, pauli: 0 }]).is_err());
    }
}
