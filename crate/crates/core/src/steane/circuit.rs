use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use crate::{Error, Result};

/// The five location types of a quantum circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuantumLocationKind {
    /// One-qubit gate.
    One,
    /// Two-qubit gate.
    Two,
    /// Idle qubit for one time step.
    Wait,
    /// One-qubit gate followed by a measurement.
    MeasuredOne,
    /// Preparation of a fresh qubit.
    Prep,
}

/// Flow-map variable names, in [`QuantumLocationKind::index`] order.
pub const KIND_NAMES: [&str; 5] = ["1", "2", "w", "1m", "p"];

impl QuantumLocationKind {
    pub const ALL: [QuantumLocationKind; 5] = [
        QuantumLocationKind::One,
        QuantumLocationKind::Two,
        QuantumLocationKind::Wait,
        QuantumLocationKind::MeasuredOne,
        QuantumLocationKind::Prep,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        KIND_NAMES[self.index()]
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        KIND_NAMES
            .iter()
            .position(|k| *k == s)
            .map(|i| Self::ALL[i])
    }

    /// Number of nontrivial Paulis a fault at this kind can apply.
    pub fn pauli_count(self) -> u8 {
        match self {
            QuantumLocationKind::Two => 15,
            _ => 3,
        }
    }
}

impl fmt::Display for QuantumLocationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Z,
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Prep {
        q: u8,
        basis: Basis,
    },
    H {
        q: u8,
    },
    Cnot {
        c: u8,
        t: u8,
    },
    Wait {
        q: u8,
    },
    /// Records the outcome flip in measurement slot `slot`.
    Meas {
        q: u8,
        basis: Basis,
        slot: u16,
    },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Prep {
                basis: Basis::Z, ..
            } => "prep_z",
            Gate::Prep {
                basis: Basis::X, ..
            } => "prep_x",
            Gate::H { .. } => "h",
            Gate::Cnot { .. } => "cnot",
            Gate::Wait { .. } => "wait",
            Gate::Meas {
                basis: Basis::Z, ..
            } => "meas_z",
            Gate::Meas {
                basis: Basis::X, ..
            } => "meas_x",
        }
    }

    pub fn qubits(&self) -> ([u8; 2], usize) {
        match *self {
            Gate::Cnot { c, t } => ([c, t], 2),
            Gate::Prep { q, .. } | Gate::H { q } | Gate::Wait { q } | Gate::Meas { q, .. } => {
                ([q, 0], 1)
            }
        }
    }

    pub fn default_kind(&self) -> QuantumLocationKind {
        match self {
            Gate::Prep { .. } => QuantumLocationKind::Prep,
            Gate::H { .. } => QuantumLocationKind::One,
            Gate::Cnot { .. } => QuantumLocationKind::Two,
            Gate::Wait { .. } => QuantumLocationKind::Wait,
            Gate::Meas { .. } => QuantumLocationKind::MeasuredOne,
        }
    }
}

/// Noiseless classical processing between gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classical {
    /// Reject the segment's ancilla if the slot flipped.
    Verify { segment: u16, slot: u16 },
    /// Hamming-decode the seven slots and undo the located flip on `data`,
    /// as an X when `x` is set and as a Z otherwise.
    Correct {
        x: bool,
        data: [u8; 7],
        slots: [u16; 7],
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpBody {
    Gate {
        gate: Gate,
        kind: QuantumLocationKind,
    },
    Classical(Classical),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Op {
    pub step: u32,
    pub body: OpBody,
    /// Ancilla preparation segment this gate belongs to, re-run on reject.
    pub segment: Option<u16>,
}

/// A verified ancilla preparation that is repeated when its check fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub qubits: u128,
    pub slots: u128,
    /// Gate op indices in execution order, waits included.
    pub ops: Vec<usize>,
    pub first_step: u32,
    pub last_step: u32,
    /// Qubits outside the segment that are live when it is checked; they
    /// idle while it is prepared again.
    pub idle: Vec<u8>,
}

impl Segment {
    pub fn duration(&self) -> u32 {
        self.last_step - self.first_step + 1
    }
}

/// How a trial's output is judged after an ideal decode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    /// An encoded block; a logical X (Z) counts as failure when `x` (`z`).
    Block { qubits: [u8; 7], x: bool, z: bool },
    /// A transversal readout; failure when the decoded bit is wrong.
    Readout { slots: [u16; 7] },
}

/// A timed Clifford circuit with location tags, ready for frame simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct QCircuit {
    pub(crate) name: String,
    pub(crate) num_qubits: u8,
    pub(crate) num_slots: u16,
    pub(crate) ops: Vec<Op>,
    pub(crate) segments: Vec<Segment>,
    pub(crate) checks: Vec<Check>,
    pub(crate) ec_count: usize,
    pub(crate) by_kind: [Vec<usize>; 5],
}

impl QCircuit {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> u8 {
        self.num_qubits
    }

    pub fn num_slots(&self) -> u16 {
        self.num_slots
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn ec_count(&self) -> usize {
        self.ec_count
    }

    pub fn steps(&self) -> u32 {
        self.ops.last().map_or(0, |o| o.step + 1)
    }

    /// Op indices of the fallible locations of one kind.
    pub fn locations(&self, kind: QuantumLocationKind) -> &[usize] {
        &self.by_kind[kind.index()]
    }

    /// Location counts in [`KIND_NAMES`] order.
    pub fn census(&self) -> [usize; 5] {
        core::array::from_fn(|i| self.by_kind[i].len())
    }

    pub fn num_locations(&self) -> usize {
        self.by_kind.iter().map(Vec::len).sum()
    }

    /// One line per gate: `t,gate,qubits,kind` with space-separated qubits.
    pub fn schedule_text(&self) -> String {
        let mut s = String::from("t,gate,qubits,kind\n");
        for op in &self.ops {
            if let OpBody::Gate { gate, kind } = op.body {
                let (q, n) = gate.qubits();
                let qs = if n == 2 {
                    alloc::format!("{} {}", q[0], q[1])
                } else {
                    alloc::format!("{}", q[0])
                };
                let _ = writeln!(s, "{},{},{},{}", op.step, gate.name(), qs, kind);
            }
        }
        s
    }
}

impl fmt::Display for QCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.census();
        write!(
            f,
            "{}: {} qubits, {} steps, {} EC",
            self.name,
            self.num_qubits,
            self.steps(),
            self.ec_count
        )?;
        for (k, n) in KIND_NAMES.iter().zip(c) {
            write!(f, ", {k}={n}")?;
        }
        Ok(())
    }
}

/// Assembles a circuit from explicitly timed gates; [`Builder::finish`]
/// fills idle steps with waits and checks the qubit lifecycle.
#[derive(Debug)]
pub struct Builder {
    name: String,
    num_qubits: u8,
    num_slots: u16,
    inputs: u128,
    gates: Vec<(u32, Gate, QuantumLocationKind, Option<u16>)>,
    classical: Vec<(u32, Classical)>,
    segments: Vec<(u128, u32, u32)>,
    checks: Vec<Check>,
    ec_count: usize,
}

impl Builder {
    pub fn new(name: &str) -> Self {
        Builder {
            name: name.into(),
            num_qubits: 0,
            num_slots: 0,
            inputs: 0,
            gates: Vec::new(),
            classical: Vec::new(),
            segments: Vec::new(),
            checks: Vec::new(),
            ec_count: 0,
        }
    }

    pub fn qubit(&mut self) -> Result<u8> {
        if self.num_qubits >= 128 {
            return Err(Error::InvalidCircuit("more than 128 qubits".into()));
        }
        self.num_qubits += 1;
        Ok(self.num_qubits - 1)
    }

    pub fn block(&mut self) -> Result<[u8; 7]> {
        let mut b = [0; 7];
        for q in &mut b {
            *q = self.qubit()?;
        }
        Ok(b)
    }

    /// Marks qubits as live from step 0 without a preparation.
    pub fn input(&mut self, qubits: &[u8]) {
        for &q in qubits {
            self.inputs |= 1 << q;
        }
    }

    pub fn slot(&mut self) -> u16 {
        self.num_slots += 1;
        self.num_slots - 1
    }

    pub fn gate(&mut self, step: u32, gate: Gate) {
        self.gates.push((step, gate, gate.default_kind(), None));
    }

    pub fn tagged(&mut self, step: u32, gate: Gate, kind: QuantumLocationKind) {
        self.gates.push((step, gate, kind, None));
    }

    pub fn measure(&mut self, step: u32, q: u8, basis: Basis) -> u16 {
        let slot = self.slot();
        self.gate(step, Gate::Meas { q, basis, slot });
        slot
    }

    /// Declares a re-runnable segment over `qubits` spanning the given steps;
    /// gates on those qubits inside the span join it.
    pub fn segment(&mut self, qubits: &[u8], first_step: u32, last_step: u32) -> u16 {
        let mask = qubits.iter().fold(0u128, |m, &q| m | 1 << q);
        self.segments.push((mask, first_step, last_step));
        (self.segments.len() - 1) as u16
    }

    pub fn classical(&mut self, step: u32, op: Classical) {
        self.classical.push((step, op));
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn count_ec(&mut self) {
        self.ec_count += 1;
    }

    pub fn finish(mut self) -> Result<QCircuit> {
        let nq = self.num_qubits as usize;
        let last_step = self
            .gates
            .iter()
            .map(|g| g.0)
            .chain(self.classical.iter().map(|c| c.0))
            .max()
            .unwrap_or(0);
        // lifecycle per qubit: (start, end, measured)
        let mut start = vec![None::<u32>; nq];
        let mut end = vec![None::<u32>; nq];
        let mut busy = vec![Vec::<u32>::new(); nq];
        let mut order: Vec<usize> = (0..self.gates.len()).collect();
        order.sort_by_key(|&i| (self.gates[i].0, i));
        for &i in &order {
            let (step, gate, _, _) = self.gates[i];
            let (qs, n) = gate.qubits();
            for &q in &qs[..n] {
                let qi = q as usize;
                if qi >= nq {
                    return Err(Error::InvalidCircuit(alloc::format!(
                        "qubit {q} was never allocated"
                    )));
                }
                if busy[qi].last() == Some(&step) {
                    return Err(Error::InvalidCircuit(alloc::format!(
                        "qubit {q} used twice at step {step}"
                    )));
                }
                if end[qi].is_some() {
                    return Err(Error::InvalidCircuit(alloc::format!(
                        "qubit {q} used after measurement"
                    )));
                }
                match gate {
                    Gate::Prep { .. } => {
                        if start[qi].is_some() || self.inputs >> qi & 1 == 1 {
                            return Err(Error::InvalidCircuit(alloc::format!(
                                "qubit {q} prepared twice"
                            )));
                        }
                        start[qi] = Some(step);
                    }
                    _ if start[qi].is_none() => {
                        if self.inputs >> qi & 1 == 1 {
                            start[qi] = Some(0);
                        } else {
                            return Err(Error::InvalidCircuit(alloc::format!(
                                "qubit {q} used before preparation"
                            )));
                        }
                    }
                    _ => {}
                }
                if let Gate::Meas { .. } = gate {
                    end[qi] = Some(step);
                }
                busy[qi].push(step);
            }
        }
        // fill idle steps
        for q in 0..nq {
            let Some(s) = start[q].or((self.inputs >> q & 1 == 1).then_some(0)) else {
                continue;
            };
            let e = end[q].unwrap_or(last_step);
            for t in s..=e {
                if !busy[q].contains(&t) {
                    self.gates.push((
                        t,
                        Gate::Wait { q: q as u8 },
                        QuantumLocationKind::Wait,
                        None,
                    ));
                }
            }
        }
        // segment membership
        for g in &mut self.gates {
            let (qs, n) = g.1.qubits();
            for (si, &(mask, a, b)) in self.segments.iter().enumerate() {
                if g.0 >= a && g.0 <= b && qs[..n].iter().all(|&q| mask >> q & 1 == 1) {
                    g.3 = Some(si as u16);
                }
            }
        }
        // waits sort after gates within a step, classical ops after both
        let mut keyed: Vec<((u32, u8, usize), Op)> = Vec::new();
        for (i, &(step, gate, kind, segment)) in self.gates.iter().enumerate() {
            let phase = if matches!(gate, Gate::Wait { .. }) {
                1
            } else {
                0
            };
            let body = OpBody::Gate { gate, kind };
            keyed.push((
                (step, phase, i),
                Op {
                    step,
                    body,
                    segment,
                },
            ));
        }
        for (i, &(step, c)) in self.classical.iter().enumerate() {
            let segment = match c {
                Classical::Verify { segment, .. } => Some(segment),
                _ => None,
            };
            keyed.push((
                (step, 2, i),
                Op {
                    step,
                    body: OpBody::Classical(c),
                    segment,
                },
            ));
        }
        keyed.sort_by_key(|k| k.0);
        let ops: Vec<Op> = keyed.into_iter().map(|k| k.1).collect();

        let mut segments = Vec::new();
        for (si, &(mask, a, b)) in self.segments.iter().enumerate() {
            let si = si as u16;
            let mut seg = Segment {
                qubits: mask,
                slots: 0,
                ops: Vec::new(),
                first_step: a,
                last_step: b,
                idle: Vec::new(),
            };
            for (i, op) in ops.iter().enumerate() {
                if let OpBody::Gate { gate, .. } = op.body {
                    if op.segment == Some(si) {
                        seg.ops.push(i);
                        if let Gate::Meas { slot, .. } = gate {
                            seg.slots |= 1 << slot;
                        }
                    }
                }
            }
            if !ops
                .iter()
                .any(|o| matches!(o.body, OpBody::Classical(Classical::Verify { segment, .. }) if segment == si))
            {
                return Err(Error::InvalidCircuit(alloc::format!("segment {si} has no verification")));
            }
            for q in 0..nq {
                if mask >> q & 1 == 1 {
                    continue;
                }
                let Some(s) = start[q].or((self.inputs >> q & 1 == 1).then_some(0)) else {
                    continue;
                };
                if s <= b && end[q].is_none_or(|e| e > b) {
                    seg.idle.push(q as u8);
                }
            }
            segments.push(seg);
        }
        if self.num_slots > 128 {
            return Err(Error::InvalidCircuit(
                "more than 128 measurement slots".into(),
            ));
        }
        let mut by_kind: [Vec<usize>; 5] = Default::default();
        for (i, op) in ops.iter().enumerate() {
            if let OpBody::Gate { kind, .. } = op.body {
                by_kind[kind.index()].push(i);
            }
        }
        Ok(QCircuit {
            name: self.name,
            num_qubits: self.num_qubits,
            num_slots: self.num_slots,
            ops,
            segments,
            checks: self.checks,
            ec_count: self.ec_count,
            by_kind,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idle_steps_become_waits() {
        let mut b = Builder::new("t");
        let [a, c] = [b.qubit().unwrap(), b.qubit().unwrap()];
        b.input(&[a]);
        b.gate(
            1,
            Gate::Prep {
                q: c,
                basis: Basis::Z,
            },
        );
        b.gate(3, Gate::Cnot { c: a, t: c });
        b.measure(4, c, Basis::Z);
        b.check(Check::Block {
            qubits: [a; 7],
            x: true,
            z: true,
        });
        let circ = b.finish().unwrap();
        // a idles at 0,1,2,4 ; c idles at 2
        assert_eq!(circ.census(), [0, 1, 5, 1, 1]);
        assert_eq!(circ.steps(), 5);
        assert!(circ.schedule_text().contains("3,cnot,0 1,2"));
    }

    #[test]
    fn lifecycle_violations_are_rejected() {
        let mut b = Builder::new("t");
        let q = b.qubit().unwrap();
        b.gate(0, Gate::H { q });
        assert!(b.finish().is_err());
        let mut b = Builder::new("t");
        let q = b.qubit().unwrap();
        b.gate(0, Gate::Prep { q, basis: Basis::Z });
        b.measure(1, q, Basis::Z);
        b.gate(2, Gate::H { q });
        assert!(b.finish().is_err());
    }

    #[test]
    fn kind_symbols_round_trip() {
        for k in QuantumLocationKind::ALL {
            assert_eq!(QuantumLocationKind::from_symbol(k.symbol()), Some(k));
        }
        assert_eq!(QuantumLocationKind::from_symbol("x"), None);
    }
}
