use flowmap_core::steane::{
    build_ec, build_exrec, leading_order, mc_failure, propagate_pauli, setting_point,
    single_fault_failures, Check, Fault, Gate, OpBody, QCircuit, QuantumLocationKind as K,
    KIND_NAMES,
};
use flowmap_core::Setting;

/// First wait location on each data qubit of the first checked block.
fn first_data_waits(c: &QCircuit) -> Vec<usize> {
    let Check::Block { qubits, .. } = c.checks()[0] else {
        panic!("block check expected")
    };
    qubits
        .iter()
        .map(|&q| {
            c.locations(K::Wait)
                .iter()
                .copied()
                .find(|&i| matches!(c.ops()[i].body, OpBody::Gate { gate: Gate::Wait { q: w }, .. } if w == q))
                .unwrap()
        })
        .collect()
}

#[test]
fn single_faults_never_cause_failure() {
    for k in K::ALL {
        let c = build_exrec(k);
        assert!(single_fault_failures(&c).is_empty(), "{c}");
    }
    assert!(single_fault_failures(&build_ec()).is_empty());
}

#[test]
fn repeated_x_on_one_data_qubit_cancels() {
    let c = build_ec();
    let w = first_data_waits(&c)[0];
    let later = c
        .locations(K::Wait)
        .iter()
        .copied()
        .filter(|&i| i > w && c.ops()[i].body == c.ops()[w].body)
        .nth(1)
        .unwrap();
    let out = propagate_pauli(
        &c,
        &[
            Fault { op: w, pauli: 1 },
            Fault {
                op: later,
                pauli: 1,
            },
        ],
    )
    .unwrap();
    assert!(!out.failed);
    assert_eq!(out, propagate_pauli(&c, &[]).unwrap());
}

#[test]
fn single_input_errors_are_corrected_and_pairs_are_not() {
    let c = build_ec();
    let waits = first_data_waits(&c);
    for &w in &waits {
        for pauli in 1..=3 {
            assert!(
                !propagate_pauli(&c, &[Fault { op: w, pauli }])
                    .unwrap()
                    .failed
            );
        }
    }
    let pair = [
        Fault {
            op: waits[0],
            pauli: 1,
        },
        Fault {
            op: waits[1],
            pauli: 1,
        },
    ];
    assert!(propagate_pauli(&c, &pair).unwrap().failed);
}

#[test]
fn location_census() {
    // kinds in order 1, 2, w, 1m, p
    assert_eq!(build_ec().census(), [8, 38, 204, 16, 16]);
    assert_eq!(build_exrec(K::One).census(), [15, 38, 204, 16, 16]);
    assert_eq!(build_exrec(K::Two).census(), [16, 83, 408, 32, 32]);
    assert_eq!(build_exrec(K::Wait).census(), [8, 38, 211, 16, 16]);
    assert_eq!(build_exrec(K::MeasuredOne).census(), [8, 38, 204, 23, 16]);
    assert_eq!(build_exrec(K::Prep).census(), [11, 50, 174, 17, 24]);
}

#[test]
fn monte_carlo_agrees_with_pair_enumeration() {
    // p ≈ A·γ² well below threshold; A from exhaustive pairs
    let c = build_exrec(K::Two);
    let axis = [0.0, 1.0, 0.0, 0.0, 0.0];
    let a = leading_order(&c, &axis).coefficient(&axis);
    assert!((a - 738.25).abs() < 0.01, "{a}");
    let g = Setting::axis(&KIND_NAMES, "2").unwrap();
    let gamma = 2e-4;
    let e = mc_failure(&c, &setting_point(&g, gamma).unwrap(), 4_000_000, 11).unwrap();
    let expect = a * gamma * gamma;
    let sigma = (expect / e.trials as f64).sqrt();
    assert!(
        (e.p_hat - expect).abs() < 4.0 * sigma + 0.05 * expect,
        "{} vs {expect}",
        e.p_hat
    );
}

#[test]
fn prep_exrec_ignores_logical_z() {
    let c = build_exrec(K::Prep);
    assert!(matches!(
        c.checks(),
        [Check::Block {
            x: true,
            z: false,
            ..
        }]
    ));
}
