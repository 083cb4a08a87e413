use super::circuit::{Basis, Builder, Check, Classical, Gate, QCircuit, QuantumLocationKind};
use super::code::{ENCODER_LAYERS, PIVOTS, VERIFY_SUPPORT};
use crate::Result;

/// Steps taken by one verified ancilla preparation.
pub const ANCILLA_STEPS: u32 = 9;

/// When the two syndrome ancillas are prepared relative to each other.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EcLayout {
    /// Both ancillas are prepared together, then coupled one after the
    /// other.
    Parallel,
    /// The Z-error ancilla is prepared only after the X syndrome is read.
    #[default]
    Sequential,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExrecOptions {
    pub layout: EcLayout,
}

/// Verified encoded ancilla starting at step `s0`: `|0⟩_L` for `Basis::Z`,
/// `|+⟩_L` for `Basis::X`. Ends with the check measured at `s0 + 8`.
///
/// `|+⟩` inputs are a `|0⟩` preparation followed by H. The `|+⟩_L` network
/// is the transversal-H image of the `|0⟩_L` one, so its CNOTs point back at
/// the pivots and its check measures the X-type logical.
pub(crate) fn verified_ancilla(b: &mut Builder, s0: u32, basis: Basis) -> Result<[u8; 7]> {
    let a = b.block()?;
    let v = b.qubit()?;
    for &q in &a {
        b.gate(s0, Gate::Prep { q, basis: Basis::Z });
    }
    for (i, &q) in a.iter().enumerate() {
        if PIVOTS.contains(&i) == (basis == Basis::Z) {
            b.gate(s0 + 1, Gate::H { q });
        }
    }
    for (k, layer) in ENCODER_LAYERS.iter().enumerate() {
        for &(p, t) in layer {
            let (c, t) = match basis {
                Basis::Z => (a[p], a[t]),
                Basis::X => (a[t], a[p]),
            };
            b.gate(s0 + 2 + k as u32, Gate::Cnot { c, t });
        }
    }
    b.gate(
        s0 + 3,
        Gate::Prep {
            q: v,
            basis: Basis::Z,
        },
    );
    if basis == Basis::X {
        b.gate(s0 + 4, Gate::H { q: v });
    }
    for (k, &i) in VERIFY_SUPPORT.iter().enumerate() {
        let g = match basis {
            Basis::Z => Gate::Cnot { c: a[i], t: v },
            Basis::X => Gate::Cnot { c: v, t: a[i] },
        };
        b.gate(s0 + 5 + k as u32, g);
    }
    let last = s0 + ANCILLA_STEPS - 1;
    let slot = b.measure(last, v, basis);
    let mut members = a.to_vec();
    members.push(v);
    let segment = b.segment(&members, s0, last);
    b.classical(last, Classical::Verify { segment, slot });
    Ok(a)
}

fn couple_and_measure(b: &mut Builder, data: [u8; 7], anc: [u8; 7], step: u32, basis: Basis) {
    for i in 0..7 {
        let g = match basis {
            // |+⟩_L picks up data X errors and is read in Z
            Basis::X => Gate::Cnot {
                c: data[i],
                t: anc[i],
            },
            Basis::Z => Gate::Cnot {
                c: anc[i],
                t: data[i],
            },
        };
        b.gate(step, g);
    }
    let read = match basis {
        Basis::X => Basis::Z,
        Basis::Z => Basis::X,
    };
    let mut slots = [0; 7];
    for i in 0..7 {
        slots[i] = b.measure(step + 1, anc[i], read);
    }
    b.classical(
        step + 1,
        Classical::Correct {
            x: basis == Basis::X,
            data,
            slots,
        },
    );
}

/// Appends one error correction on `data`, with ancilla preparation from
/// step `s0`. Returns the first step after it.
pub(crate) fn error_correction(
    b: &mut Builder,
    data: [u8; 7],
    s0: u32,
    layout: EcLayout,
) -> Result<u32> {
    b.count_ec();
    let ax = verified_ancilla(b, s0, Basis::X)?;
    match layout {
        EcLayout::Parallel => {
            let az = verified_ancilla(b, s0, Basis::Z)?;
            let c = s0 + ANCILLA_STEPS;
            couple_and_measure(b, data, ax, c, Basis::X);
            couple_and_measure(b, data, az, c + 1, Basis::Z);
            Ok(c + 3)
        }
        EcLayout::Sequential => {
            let c = s0 + ANCILLA_STEPS;
            couple_and_measure(b, data, ax, c, Basis::X);
            let s1 = c + 2;
            let az = verified_ancilla(b, s1, Basis::Z)?;
            couple_and_measure(b, data, az, s1 + ANCILLA_STEPS, Basis::Z);
            Ok(s1 + ANCILLA_STEPS + 2)
        }
    }
}

/// A single error correction acting on an input block.
pub fn build_ec() -> QCircuit {
    build_ec_with(&ExrecOptions::default()).expect("fixed construction is valid")
}

pub fn build_ec_with(opts: &ExrecOptions) -> Result<QCircuit> {
    let mut b = Builder::new("ec");
    let d = b.block()?;
    b.input(&d);
    error_correction(&mut b, d, 0, opts.layout)?;
    b.check(Check::Block {
        qubits: d,
        x: true,
        z: true,
    });
    b.finish()
}

/// The level-1 extended rectangle replacing one location of `kind`.
pub fn build_exrec(kind: QuantumLocationKind) -> QCircuit {
    build_exrec_with(kind, &ExrecOptions::default()).expect("fixed construction is valid")
}

pub fn build_exrec_with(kind: QuantumLocationKind, opts: &ExrecOptions) -> Result<QCircuit> {
    use QuantumLocationKind as K;
    let mut b = Builder::new(&alloc::format!("exrec({})", kind.symbol()));
    let d = match kind {
        K::Prep => verified_ancilla(&mut b, 0, Basis::Z)?,
        _ => {
            let d = b.block()?;
            b.input(&d);
            d
        }
    };
    let mut t = error_correction(&mut b, d, 0, opts.layout)?;
    match kind {
        K::One => {
            for &q in &d {
                b.gate(t, Gate::H { q });
            }
            b.check(Check::Block {
                qubits: d,
                x: true,
                z: true,
            });
        }
        K::Wait => {
            for &q in &d {
                b.gate(t, Gate::Wait { q });
            }
            b.check(Check::Block {
                qubits: d,
                x: true,
                z: true,
            });
        }
        K::MeasuredOne => {
            let mut slots = [0; 7];
            for (s, &q) in slots.iter_mut().zip(&d) {
                *s = b.measure(t, q, Basis::X);
            }
            b.check(Check::Readout { slots });
        }
        K::Prep => {
            // only a logical X spoils a prepared |0⟩
            b.check(Check::Block {
                qubits: d,
                x: true,
                z: false,
            });
        }
        K::Two => {
            let e = b.block()?;
            b.input(&e);
            let t2 = error_correction(&mut b, e, 0, opts.layout)?;
            debug_assert_eq!(t, t2);
            t = t.max(t2);
            for i in 0..7 {
                b.gate(t, Gate::Cnot { c: d[i], t: e[i] });
            }
            b.check(Check::Block {
                qubits: d,
                x: true,
                z: true,
            });
            b.check(Check::Block {
                qubits: e,
                x: true,
                z: true,
            });
        }
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn ec_census_has_every_kind() {
        let c = build_ec();
        assert!(c.census().iter().all(|&n| n > 0), "{c}");
        assert_eq!(c.segments().len(), 2);
    }

    #[test]
    fn two_qubit_exrec_has_two_ecs() {
        assert_eq!(build_exrec(QuantumLocationKind::Two).ec_count(), 2);
        assert_eq!(build_exrec(QuantumLocationKind::One).ec_count(), 1);
    }

    #[test]
    fn measurement_exrec_ends_in_readout() {
        let c = build_exrec(QuantumLocationKind::MeasuredOne);
        let last = c.steps() - 1;
        let finals: Vec<_> = c.ops().iter().filter(|o| o.step == last).collect();
        assert!(finals.iter().all(|o| matches!(
            o.body,
            super::super::circuit::OpBody::Gate {
                gate: Gate::Meas {
                    basis: Basis::X,
                    ..
                },
                ..
            }
        )));
        assert_eq!(finals.len(), 7);
    }

    #[test]
    fn wait_exrec_has_transversal_wait_stage() {
        let c = build_exrec(QuantumLocationKind::Wait);
        let ec = build_ec();
        assert_eq!(c.census()[2], ec.census()[2] + 7);
    }

    #[test]
    fn layouts_differ_only_in_idle_time() {
        let seq = build_ec();
        let par = build_ec_with(&ExrecOptions {
            layout: EcLayout::Parallel,
        })
        .unwrap();
        let (a, b) = (seq.census(), par.census());
        for k in [0, 1, 3, 4] {
            assert_eq!(a[k], b[k]);
        }
        assert!(a[2] > b[2]);
    }
}
