use flowmap_core::analysis::{
    asymptotic_location_threshold, axis_upper_bound, below_threshold, conjecture_check,
    fixed_points, largest_cube, low_order_bound, pseudothreshold, threshold_set, trip_curves,
    BelowOptions, FixedPointOptions, GridSpec, ScanSpec, SliceSpec, Verdict,
};
use flowmap_core::tmr::{
    self, build_replacement, enumerate_flow_polynomial, InputDomain, LocationKind, VARIABLES,
};
use flowmap_core::{Coeff, FailureVector, Polynomial, Setting, TruncateMode};
use num_rational::BigRational;

fn poly_wv(terms: &[(i64, u32, u32)]) -> Polynomial {
    Polynomial::from_terms(
        &VARIABLES,
        terms.iter().map(|&(c, w, v)| (vec![w, v], Coeff::int(c))),
    )
    .unwrap()
}

/// `(coefficient, w-exponent, v-exponent)` for the published wire map.
const WIRE: [(i64, u32, u32); 13] = [
    (6, 1, 1),
    (3, 0, 2),
    (3, 2, 0),
    (-2, 0, 3),
    (-18, 1, 2),
    (12, 1, 3),
    (-18, 2, 1),
    (36, 2, 2),
    (-24, 2, 3),
    (-2, 3, 0),
    (12, 3, 1),
    (-24, 3, 2),
    (16, 3, 3),
];

const VOTER: [(i64, u32); 11] = [
    (3, 2),
    (16, 3),
    (-39, 4),
    (-126, 5),
    (474, 6),
    (-288, 7),
    (-936, 8),
    (2080, 9),
    (-1824, 10),
    (768, 11),
    (-128, 12),
];

const GAMMA_TH: f64 = 0.246_421_946_784_583_2;

fn voter_poly() -> Polynomial {
    Polynomial::from_terms(
        &VARIABLES,
        VOTER.iter().map(|&(c, k)| (vec![0, k], Coeff::int(c))),
    )
    .unwrap()
}

#[test]
fn wire_map_matches_published_coefficients() {
    let p = enumerate_flow_polynomial(
        &build_replacement(LocationKind::Wire),
        InputDomain::Replicated,
    )
    .unwrap();
    assert_eq!(p.num_terms(), 13);
    assert_eq!(p, poly_wv(&WIRE));
}

#[test]
fn voter_map_matches_published_coefficients() {
    let f = tmr::tmr_flow_map().unwrap();
    let v = f.component("v").unwrap();
    assert_eq!(v.num_terms(), 11);
    assert_eq!(*v, voter_poly());
    assert!(v.is_independent_of("w"));
}

#[test]
fn voter_map_at_zero_and_half() {
    let f = tmr::tmr_flow_map().unwrap();
    let v = f.component("v").unwrap();
    assert_eq!(v.eval_slice(&[0.0, 0.0]), 0.0);
    let half = BigRational::new(1.into(), 2.into());
    assert_eq!(v.eval_exact(&[half.clone(), half.clone()]), Some(half));
    let y = f.eval_slice(&[0.5, 0.5]).unwrap();
    assert_eq!(y, vec![0.5, 0.5]);
}

#[test]
fn low_order_truncations() {
    let f = tmr::tmr_flow_map().unwrap();
    let t2 = f.truncate(2, TruncateMode::Drop);
    assert_eq!(
        *t2.component("w").unwrap(),
        poly_wv(&[(3, 2, 0), (3, 0, 2), (6, 1, 1)])
    );
    let t3 = f.truncate(3, TruncateMode::Drop);
    assert_eq!(
        *t3.component("v").unwrap(),
        poly_wv(&[(3, 0, 2), (16, 0, 3)])
    );
    assert_eq!(f.truncate(u32::MAX, TruncateMode::Drop), f);
}

#[test]
fn conservative_low_order_bound_is_one_twelfth() {
    let f = tmr::tmr_flow_map().unwrap();
    let g = Setting::diagonal(f.variables());
    let b = low_order_bound(&f, "w", &g, 2, TruncateMode::Drop, &ScanSpec::default()).unwrap();
    assert_eq!(b.exact, Some(BigRational::new(1.into(), 12.into())));
    assert_eq!(b.value, 1.0 / 12.0);
}

#[test]
fn classical_pseudothresholds() {
    let f = tmr::tmr_flow_map().unwrap();
    let g = Setting::diagonal(f.variables());
    let scan = ScanSpec::default();
    let w1 = pseudothreshold(&f, "w", &g, 1, &scan).unwrap();
    assert!((w1.value - 0.129).abs() < 1e-3, "{}", w1.value);
    let th_w = asymptotic_location_threshold(&f, "w", &g, &scan).unwrap();
    let th_v = asymptotic_location_threshold(&f, "v", &g, &scan).unwrap();
    assert!((th_w.value - 0.246).abs() < 1e-3);
    assert!((th_v.value - GAMMA_TH).abs() < 1e-12);
    assert_eq!(th_v.level, 1);
    let ratio = th_w.value / w1.value;
    assert!((ratio - 1.9).abs() < 0.05, "{ratio}");
}

#[test]
fn voter_pseudothreshold_is_level_constant() {
    let f = tmr::tmr_flow_map().unwrap();
    let g = Setting::diagonal(f.variables());
    let vals: Vec<f64> = (1..=5)
        .map(|l| {
            pseudothreshold(&f, "v", &g, l, &ScanSpec::default())
                .unwrap()
                .value
        })
        .collect();
    for v in &vals {
        assert!((v - vals[0]).abs() < 1e-9, "{vals:?}");
    }
}

#[test]
fn wire_trip_crossings_increase_toward_threshold() {
    let f = tmr::tmr_flow_map().unwrap();
    let g = Setting::diagonal(f.variables());
    let grid = GridSpec::linear(0.0, 0.5, 501).points();
    let curves = trip_curves(&f, "w", &g, &[1, 2, 3], &grid).unwrap();
    let first: Vec<f64> = curves.iter().map(|c| c.crossings[0]).collect();
    assert!(
        first[0] < first[1] && first[1] < first[2] && first[2] < GAMMA_TH,
        "{first:?}"
    );
    for c in &curves {
        assert_eq!(c.samples[0].1, 0.0);
    }
    let voter = trip_curves(&f, "v", &g, &[1, 2, 3], &grid).unwrap();
    for c in &voter {
        assert!((c.crossings[0] - GAMMA_TH).abs() < 1e-3);
    }
}

#[test]
fn five_fixed_points() {
    let f = tmr::tmr_flow_map().unwrap();
    let pts = fixed_points(&f, &[(0.0, 1.0), (0.0, 1.0)], &FixedPointOptions::default()).unwrap();
    let expect = [
        (0.0, 0.0),
        (0.5, 0.0),
        (0.5, GAMMA_TH),
        (0.5, 0.5),
        (1.0, 0.0),
    ];
    assert_eq!(pts.len(), 5, "{pts:?}");
    for (p, (w, v)) in pts.iter().zip(expect) {
        assert!(
            (p.values()[0] - w).abs() < 1e-9 && (p.values()[1] - v).abs() < 1e-9,
            "{p}"
        );
        assert!(flowmap_core::analysis::residual(&f, p.values()) < 1e-10);
    }
}

#[test]
fn subthreshold_region_membership() {
    let f = tmr::tmr_flow_map().unwrap();
    assert!(below_threshold(&f, &[0.4, 0.2], 1e-12, 200).unwrap());
    assert!(!below_threshold(&f, &[0.4, 0.3], 1e-12, 200).unwrap());
    assert!(below_threshold(&f, &[0.0, 0.0], 1e-12, 200).unwrap());
}

#[test]
fn threshold_set_and_conjecture() {
    let f = tmr::tmr_flow_map().unwrap();
    // the half square v ≤ 1/2 holds all five fixed points
    let slice = SliceSpec::new("w", "v", 200, 1.0, 0.5);
    let r = threshold_set(&f, &slice, &BelowOptions::default()).unwrap();
    let h = r.resolution;
    for iy in 0..200 {
        for ix in 0..200 {
            let (x, y) = (r.x_nodes[ix], r.y_nodes[iy]);
            let truth = x < 0.5 && y < GAMMA_TH;
            let got = r.class(ix, iy) == Verdict::Below;
            if truth != got {
                let dist = if x < 0.5 {
                    (y - GAMMA_TH).abs()
                } else {
                    (x - 0.5).abs()
                };
                assert!(dist <= 2.0 * h, "({x},{y}) misclassified");
            }
        }
    }
    assert_eq!(r.count(Verdict::Undetermined), 0);
    assert!((r.largest_cube_edge - 0.246).abs() <= h);
    let axis = axis_upper_bound(&f, &ScanSpec::default()).unwrap();
    assert_eq!(axis.location, "v");
    assert!((axis.value - GAMMA_TH).abs() < 1e-12);
    assert!(conjecture_check(r.largest_cube_edge, &axis).holds);
    let cube = largest_cube(&f, 0.5, 200, 9, &BelowOptions::default()).unwrap();
    assert!((cube.edge - r.largest_cube_edge).abs() <= h, "{cube:?}");
}

#[test]
fn uv_reference_point_and_escape() {
    let f = flowmap_core::models::uv_example();
    let y = f.eval_slice(&[0.0, 0.2]).unwrap();
    assert!(
        (y[0] - 0.04).abs() < 1e-12 && (y[1] - 0.104).abs() < 1e-12,
        "{y:?}"
    );
    let orbit = flowmap_core::analysis::trajectory(
        &f,
        &FailureVector::new(&["u", "v"], vec![0.28, 0.0]).unwrap(),
        50,
    )
    .unwrap();
    let escape = orbit
        .iter()
        .position(|p| p.values().iter().any(|&v| v > 0.3))
        .unwrap();
    assert!((6..=9).contains(&escape), "escaped after {escape}");
}

#[test]
fn composed_map_agrees_with_iteration() {
    let f = tmr::tmr_flow_map().unwrap();
    let ff = f.compose(&f).unwrap();
    for &(w, v) in &[(0.1, 0.1), (0.3, 0.05), (0.0, 0.25), (0.29, 0.29)] {
        let a = ff.eval_slice(&[w, v]).unwrap();
        let b = f.iterate_slice(&[w, v], 2).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }
}

#[test]
fn jacobian_matches_finite_differences() {
    let f = tmr::tmr_flow_map().unwrap();
    let x = FailureVector::new(&VARIABLES, vec![0.1, 0.1]).unwrap();
    let j = f.jacobian(&x).unwrap();
    let h = 1e-6;
    for col in 0..2 {
        let mut hi = vec![0.1, 0.1];
        let mut lo = hi.clone();
        hi[col] += h;
        lo[col] -= h;
        let (a, b) = (f.eval_slice(&hi).unwrap(), f.eval_slice(&lo).unwrap());
        for row in 0..2 {
            let fd = (a[row] - b[row]) / (2.0 * h);
            assert!((fd - j[row][col]).abs() < 1e-6 * (1.0 + j[row][col].abs()));
        }
    }
    let zero = f.jacobian(&FailureVector::zeros(&VARIABLES)).unwrap();
    assert!(zero.iter().flatten().all(|&d| d == 0.0));
}

#[test]
fn wire_axis_crosses_only_at_one_half() {
    let f = tmr::tmr_flow_map().unwrap();
    let g = Setting::axis(f.variables(), "w").unwrap();
    let r = pseudothreshold(&f, "w", &g, 1, &ScanSpec::default()).unwrap();
    assert_eq!(r.value, 0.5);
    assert!(r.at_scan_limit);
}
