//! Small built-in flow maps.

use alloc::string::ToString;
use alloc::vec;

use crate::polyflow::{Coeff, FlowMap, Polynomial};

fn one_minus(vars: &[&str], name: &str) -> Polynomial {
    let one = Polynomial::constant(vars, Coeff::int(1));
    one.sub(&Polynomial::variable(vars, name).expect("known variable"))
        .expect("same variables")
}

fn product(factors: &[&Polynomial]) -> Polynomial {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = acc.mul(f).expect("small product");
    }
    acc
}

/// Two gates `u`, `v`: a replacement for `u` holds two of each and fails on
/// two or more faults; a replacement for `v` holds three of each and fails on
/// two or more faults.
pub fn uv_example() -> FlowMap {
    let vars = ["u", "v"];
    let u = Polynomial::variable(&vars, "u").expect("u");
    let v = Polynomial::variable(&vars, "v").expect("v");
    let one = Polynomial::constant(&vars, Coeff::int(1));
    let (qu, qv) = (one_minus(&vars, "u"), one_minus(&vars, "v"));
    let qu2 = qu.pow(2, usize::MAX).expect("small");
    let qv2 = qv.pow(2, usize::MAX).expect("small");
    let qu3 = qu.pow(3, usize::MAX).expect("small");
    let qv3 = qv.pow(3, usize::MAX).expect("small");

    // at most one fault among 2u + 2v
    let ok_u = product(&[&qu2, &qv2])
        .add(&product(&[&u, &qu, &qv2]).scale(&Coeff::int(2)))
        .and_then(|p| p.add(&product(&[&v, &qv, &qu2]).scale(&Coeff::int(2))))
        .expect("same variables");
    // at most one fault among 3u + 3v
    let ok_v = product(&[&qu3, &qv3])
        .add(&product(&[&u, &qu2, &qv3]).scale(&Coeff::int(3)))
        .and_then(|p| p.add(&product(&[&v, &qv2, &qu3]).scale(&Coeff::int(3))))
        .expect("same variables");

    FlowMap::new(
        &vars,
        vec![
            ("u".to_string(), one.sub(&ok_u).expect("same variables")),
            ("v".to_string(), one.sub(&ok_v).expect("same variables")),
        ],
    )
    .expect("well-formed map")
}

/// The single-location map `g ↦ C·g^(t+1)`; its nonzero fixed point is
/// `(1/C)^(1/t)`.
pub fn one_parameter(c: i64, t: u32) -> FlowMap {
    let vars = ["g"];
    let p = Polynomial::from_terms(&vars, [(vec![t + 1], Coeff::int(c))]).expect("one term");
    FlowMap::new(&vars, vec![("g".to_string(), p)]).expect("well-formed map")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FailureVector;

    #[test]
    fn uv_map_reference_point() {
        let f = uv_example();
        let x = FailureVector::new(&["u", "v"], vec![0.0, 0.2]).unwrap();
        let y = f.eval_map(&x).unwrap();
        assert!((y.values()[0] - 0.04).abs() < 1e-12);
        assert!((y.values()[1] - 0.104).abs() < 1e-12);
    }

    #[test]
    fn uv_map_fixes_both_corners() {
        let f = uv_example();
        assert_eq!(f.eval_slice(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        let one = f.eval_slice(&[1.0, 1.0]).unwrap();
        assert!(one.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn one_parameter_fixed_point() {
        let f = one_parameter(12, 1);
        let y = f.eval_slice(&[1.0 / 12.0]).unwrap();
        assert!((y[0] - 1.0 / 12.0).abs() < 1e-16);
    }
}
