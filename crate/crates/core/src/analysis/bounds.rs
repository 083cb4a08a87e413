use alloc::string::String;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::pseudo::{pseudothreshold, PseudothresholdResult, ScanSpec};
use crate::polyflow::{Coeff, FlowMap, TruncateMode};
use crate::settings::Setting;
use crate::{Error, Result};

/// Level-1 pseudothreshold under every axis setting, and their minimum.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisBound {
    pub location: String,
    pub value: f64,
    pub per_axis: Vec<(String, Result<PseudothresholdResult>)>,
}

/// Minimum over locations of the level-1 axis pseudothreshold, which is
/// conjectured to bound the threshold from above.
pub fn axis_upper_bound(f: &FlowMap, scan: &ScanSpec) -> Result<AxisBound> {
    let mut per_axis = Vec::new();
    for loc in f.variables() {
        let g = Setting::axis(f.variables(), loc)?;
        per_axis.push((loc.clone(), pseudothreshold(f, loc, &g, 1, scan)));
    }
    let best = per_axis
        .iter()
        .filter_map(|(l, r)| r.as_ref().ok().map(|r| (l, r.value)))
        .fold(None::<(&String, f64)>, |acc, (l, v)| match acc {
            Some((_, b)) if b <= v => acc,
            _ => Some((l, v)),
        });
    match best {
        Some((l, v)) => Ok(AxisBound {
            location: l.clone(),
            value: v,
            per_axis,
        }),
        None => Err(Error::NoPseudothreshold {
            location: String::from("*"),
            level: 1,
            reason: String::from("no axis setting has a pseudothreshold"),
        }),
    }
}

/// Univariate coefficients of component `location` restricted to the
/// setting's ray, lowest degree first. Exact whenever the component and the
/// multipliers are (multipliers convert exactly from binary floats).
pub fn restrict_to_setting(f: &FlowMap, location: &str, g: &Setting) -> Result<Vec<Coeff>> {
    let g = g.aligned_to(f.variables())?;
    let p = f
        .component(location)
        .ok_or_else(|| Error::UnknownVariable(location.into()))?;
    let mult: Vec<Coeff> = g
        .multipliers()
        .iter()
        .map(|&m| {
            BigRational::from_float(m)
                .map(Coeff::from)
                .unwrap_or(Coeff::from(m))
        })
        .collect();
    let mut out: Vec<Coeff> = alloc::vec![Coeff::int(0); p.total_degree() as usize + 1];
    for (e, c) in p.terms() {
        let mut t = c.clone();
        for (m, &k) in mult.iter().zip(e) {
            for _ in 0..k {
                t = t.mul(m);
            }
        }
        let d: u32 = e.iter().sum();
        out[d as usize] = out[d as usize].add(&t);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowOrderBound {
    pub truncated: FlowMap,
    pub value: f64,
    /// Present when the restricted truncation is a single monomial
    /// `c·γ²` with rational `c`, whose fixed point is `1/c`.
    pub exact: Option<BigRational>,
}

/// Level-1 pseudothreshold of the truncated map along a setting.
pub fn low_order_bound(
    f: &FlowMap,
    location: &str,
    g: &Setting,
    max_total_degree: u32,
    mode: TruncateMode,
    scan: &ScanSpec,
) -> Result<LowOrderBound> {
    let truncated = f.truncate(max_total_degree, mode);
    let coeffs = restrict_to_setting(&truncated, location, g)?;
    let nonzero: Vec<(usize, &Coeff)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let exact = match nonzero.as_slice() {
        [(2, Coeff::Exact(c))] if c.is_positive() => Some(BigRational::one() / c),
        _ => None,
    };
    let value = match &exact {
        Some(r) => r.to_f64().unwrap_or(f64::NAN),
        None => pseudothreshold(&truncated, location, g, 1, scan)?.value,
    };
    Ok(LowOrderBound {
        truncated,
        value,
        exact,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConjectureCheck {
    pub cube_edge: f64,
    pub axis_bound: f64,
    pub holds: bool,
}

/// Compares the largest-cube edge with the axis bound; a violation is a
/// finding, not an error.
pub fn conjecture_check(cube_edge: f64, axis: &AxisBound) -> ConjectureCheck {
    ConjectureCheck {
        cube_edge,
        axis_bound: axis.value,
        holds: cube_edge <= axis.value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn single_variable_axis_is_diagonal() {
        let f = models::one_parameter(12, 1);
        let b = axis_upper_bound(&f, &ScanSpec::default()).unwrap();
        assert_eq!(b.location, "g");
        assert!((b.value - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn exact_bound_of_pure_quadratic() {
        let f = models::one_parameter(12, 1);
        let g = Setting::diagonal(f.variables());
        let b = low_order_bound(&f, "g", &g, 2, TruncateMode::Drop, &ScanSpec::default()).unwrap();
        assert_eq!(b.exact, Some(BigRational::new(1.into(), 12.into())));
    }
}
