//! Exact leading-order failure coefficients by enumerating fault pairs.
//!
//! Without retries a trial is linear in its faults up to the classical
//! steps, so each single fault's effect on the final frame and on every
//! measurement is computed once and pairs are combined by XOR. A rejected
//! ancilla drops the faults inside it, since its retry is fault-free at
//! this order.

use alloc::vec;
use alloc::vec::Vec;

use super::circuit::{Classical, OpBody, QCircuit, QuantumLocationKind};
use super::code::syndrome;
use super::frame::{PauliFrame, State};

#[derive(Clone, Copy, Default)]
struct Effect {
    frame: PauliFrame,
    flips: u128,
}

impl Effect {
    fn xor(&mut self, o: &Effect) {
        self.frame.x ^= o.frame.x;
        self.frame.z ^= o.frame.z;
        self.flips ^= o.flips;
    }
}

/// Propagates from op `from` with `init`, ignoring classical steps.
fn raw_run(c: &QCircuit, from: usize, init: PauliFrame, fault: Option<(usize, u8)>) -> Effect {
    let mut st = State {
        frame: init,
        flips: 0,
    };
    for (i, op) in c.ops.iter().enumerate().skip(from) {
        if let OpBody::Gate { gate, .. } = op.body {
            let f = fault.and_then(|(j, p)| (j == i).then_some(p));
            st.gate(gate, f);
        }
    }
    Effect {
        frame: st.frame,
        flips: st.flips,
    }
}

struct Tables {
    /// `[op][pauli - 1]` for fallible ops.
    single: Vec<Vec<Effect>>,
    /// Per classical op index: effect of each of the seven corrections.
    corrections: Vec<Option<[Effect; 7]>>,
}

fn tables(c: &QCircuit) -> Tables {
    let mut single = vec![Vec::new(); c.ops.len()];
    let mut corrections = vec![None; c.ops.len()];
    for (i, op) in c.ops.iter().enumerate() {
        match op.body {
            OpBody::Gate { kind, .. } => {
                single[i] = (1..=kind.pauli_count())
                    .map(|p| raw_run(c, i, PauliFrame::default(), Some((i, p))))
                    .collect();
            }
            OpBody::Classical(Classical::Correct { x, data, .. }) => {
                corrections[i] = Some(core::array::from_fn(|j| {
                    let mut f = PauliFrame::default();
                    f.apply(data[j], if x { 1 } else { 2 });
                    raw_run(c, i + 1, f, None)
                }));
            }
            OpBody::Classical(Classical::Verify { .. }) => {}
        }
    }
    Tables {
        single,
        corrections,
    }
}

fn evaluate(c: &QCircuit, t: &Tables, faults: &mut Vec<(usize, u8)>) -> bool {
    'restart: loop {
        let mut e = Effect::default();
        for &(op, p) in faults.iter() {
            e.xor(&t.single[op][p as usize - 1]);
        }
        for (k, op) in c.ops.iter().enumerate() {
            match op.body {
                OpBody::Classical(Classical::Verify { segment, slot }) => {
                    if e.flips >> slot & 1 == 1 {
                        faults.retain(|&(o, _)| c.ops[o].segment != Some(segment));
                        continue 'restart;
                    }
                }
                OpBody::Classical(Classical::Correct { slots, .. }) => {
                    let word = slots
                        .iter()
                        .enumerate()
                        .fold(0u8, |w, (i, &s)| w | ((e.flips >> s & 1) as u8) << i);
                    let s = syndrome(word);
                    if s != 0 {
                        let fix = t.corrections[k].as_ref().expect("table built")[s as usize - 1];
                        e.xor(&fix);
                    }
                }
                OpBody::Gate { .. } => {}
            }
        }
        let st = State {
            frame: e.frame,
            flips: e.flips,
        };
        return st.failed(&c.checks);
    }
}

/// Pair weights `W[a][b]` (`a ≤ b`, kind indices): the sum over location
/// pairs of kinds `a` and `b` of the probability that a fault at both, with
/// uniformly drawn Paulis, causes a failure.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingOrder {
    pub weights: [[f64; 5]; 5],
}

impl LeadingOrder {
    /// `A` in `p ≈ A·γ²` when each kind fails at rate `m[kind]·γ`.
    pub fn coefficient(&self, m: &[f64; 5]) -> f64 {
        let mut a = 0.0;
        for i in 0..5 {
            for j in i..5 {
                a += m[i] * m[j] * self.weights[i][j];
            }
        }
        a
    }

    /// Leading-order estimate `1/A` of the level-1 pseudothreshold.
    pub fn pseudothreshold(&self, m: &[f64; 5]) -> f64 {
        1.0 / self.coefficient(m)
    }
}

/// Kinds with a zero multiplier are skipped.
pub fn leading_order(c: &QCircuit, m: &[f64; 5]) -> LeadingOrder {
    let t = tables(c);
    let mut locs: Vec<(usize, QuantumLocationKind)> = Vec::new();
    for k in QuantumLocationKind::ALL {
        if m[k.index()] != 0.0 {
            locs.extend(c.locations(k).iter().map(|&o| (o, k)));
        }
    }
    let mut weights = [[0.0; 5]; 5];
    let mut buf = Vec::with_capacity(2);
    for (a, &(i, ki)) in locs.iter().enumerate() {
        for &(j, kj) in &locs[a + 1..] {
            let (ni, nj) = (ki.pauli_count(), kj.pauli_count());
            let mut bad = 0u32;
            for p in 1..=ni {
                for q in 1..=nj {
                    buf.clear();
                    buf.push((i, p));
                    buf.push((j, q));
                    if evaluate(c, &t, &mut buf) {
                        bad += 1;
                    }
                }
            }
            let (x, y) = if ki <= kj { (ki, kj) } else { (kj, ki) };
            weights[x.index()][y.index()] += f64::from(bad) / f64::from(ni as u32 * nj as u32);
        }
    }
    LeadingOrder { weights }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steane::{build_exrec, propagate_pauli, Fault};
    use rand::{Rng, SeedableRng};

    #[test]
    fn linear_evaluation_matches_direct_propagation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for kind in QuantumLocationKind::ALL {
            let c = build_exrec(kind);
            let t = tables(&c);
            let all: Vec<(usize, u8)> = QuantumLocationKind::ALL
                .iter()
                .flat_map(|k| c.locations(*k).iter().map(move |&o| (o, k.pauli_count())))
                .collect();
            let mut disagreements = 0;
            let mut failures = 0;
            for _ in 0..2000 {
                let (i, ni) = all[rng.random_range(0..all.len())];
                let (j, nj) = all[rng.random_range(0..all.len())];
                if i == j {
                    continue;
                }
                let (p, q) = (rng.random_range(1..=ni), rng.random_range(1..=nj));
                let direct =
                    propagate_pauli(&c, &[Fault { op: i, pauli: p }, Fault { op: j, pauli: q }])
                        .unwrap()
                        .failed;
                failures += direct as u32;
                if direct != evaluate(&c, &t, &mut vec![(i, p), (j, q)]) {
                    disagreements += 1;
                }
            }
            assert_eq!(disagreements, 0, "{kind}");
            assert!(failures > 0, "{kind}");
        }
    }
}
