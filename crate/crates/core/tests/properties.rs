use flowmap_core::analysis::{
    pseudothreshold, ray_monotonicity_violations, BelowOptions, ScanSpec,
};
use flowmap_core::steane::{code, PauliFrame};
use flowmap_core::{models, tmr, Coeff, FlowMap, Setting};
use proptest::prelude::*;
use std::sync::OnceLock;

fn maps() -> &'static [FlowMap] {
    static MAPS: OnceLock<Vec<FlowMap>> = OnceLock::new();
    MAPS.get_or_init(|| vec![models::uv_example(), tmr::tmr_flow_map().unwrap()])
}

/// Each map with its second iterate.
fn squares() -> &'static [(FlowMap, FlowMap)] {
    static SQ: OnceLock<Vec<(FlowMap, FlowMap)>> = OnceLock::new();
    SQ.get_or_init(|| {
        maps()
            .iter()
            .map(|f| (f.clone(), f.compose(f).unwrap()))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn composition_matches_iteration(x in 0.0f64..0.6, y in 0.0f64..0.6) {
        for (f, ff) in squares() {
            let a = ff.eval_slice(&[x, y]).unwrap();
            let b = f.iterate_slice(&[x, y], 2).unwrap();
            for (u, v) in a.iter().zip(&b) {
                prop_assert!((u - v).abs() < 1e-12, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn jacobian_matches_central_differences(x in 0.01f64..0.9, y in 0.01f64..0.9) {
        let h = 1e-6;
        for f in maps() {
            let j = f.jacobian_map().eval(&[x, y]);
            for col in 0..2 {
                let mut hi = [x, y];
                let mut lo = [x, y];
                hi[col] += h;
                lo[col] -= h;
                let (a, b) = (f.eval_unclamped(&hi), f.eval_unclamped(&lo));
                for row in 0..2 {
                    let fd = (a[row] - b[row]) / (2.0 * h);
                    prop_assert!((fd - j[row][col]).abs() < 1e-5 * (1.0 + j[row][col].abs()));
                }
            }
        }
    }

    #[test]
    fn settings_are_linear_and_monotone(a in 0.0f64..0.5, b in 0.0f64..0.5) {
        let vars = ["1", "2", "w", "1m", "p"];
        for g in [Setting::diagonal(&vars), Setting::steane(&vars).unwrap(), Setting::axis(&vars, "2").unwrap()] {
            let (ga, gb, gab) = (g.apply_slice(a), g.apply_slice(b), g.apply_slice(a + b));
            for i in 0..5 {
                prop_assert!((ga[i] + gb[i] - gab[i]).abs() < 1e-15);
                prop_assert!(a > b || ga[i] <= gb[i]);
            }
        }
    }

    #[test]
    fn power_law_map_fixed_point(c in 2i64..60, t in 1u32..4) {
        let expect = (c as f64).powf(-1.0 / t as f64);
        prop_assume!(expect < 0.45);
        let f = models::one_parameter(c, t);
        let g = Setting::diagonal(f.variables());
        let r = pseudothreshold(&f, "g", &g, 1, &ScanSpec::default()).unwrap();
        prop_assert!((r.value - expect).abs() < 1e-12 * (1.0 + expect), "{} vs {expect}", r.value);
        let r3 = pseudothreshold(&f, "g", &g, 3, &ScanSpec::default()).unwrap();
        prop_assert!((r3.value - expect).abs() < 1e-10);
    }

    #[test]
    fn coefficients_round_trip_through_text(n in -10_000i64..10_000, d in 1i64..500, x in -1e6f64..1e6) {
        for c in [Coeff::ratio(n, d), Coeff::from(x)] {
            let back: Coeff = c.to_string().parse().unwrap();
            prop_assert_eq!(back, c);
        }
    }

    #[test]
    fn cnot_and_h_are_involutions(x in any::<u8>(), z in any::<u8>(), a in 0u8..8, b in 0u8..8) {
        prop_assume!(a != b);
        let f0 = PauliFrame { x: x.into(), z: z.into() };
        let mut f = f0;
        f.cnot(a, b);
        f.cnot(a, b);
        prop_assert_eq!(f, f0);
        f.h(a);
        f.h(a);
        prop_assert_eq!(f, f0);
    }

    #[test]
    fn hamming_decoder_fixes_single_flips(word in 0u8..128, q in 0u8..7) {
        // project onto the code by clearing the syndrome
        let s = code::syndrome(word);
        let cw = if s == 0 { word } else { word ^ 1 << (s - 1) };
        prop_assert_eq!(code::syndrome(cw), 0);
        prop_assert_eq!(code::decode_is_logical(cw ^ 1 << q), code::decode_is_logical(cw));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tmr_subthreshold_rays_stay_below(w in 0.0f64..0.45, v in 0.0f64..0.23, k in 0.05f64..0.95) {
        let f = tmr::tmr_flow_map().unwrap();
        let bad = ray_monotonicity_violations(&f, &[vec![w, v]], &[k], &BelowOptions::default()).unwrap();
        prop_assert!(bad.is_empty(), "{bad:?}");
    }
}
