use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::roots::{bisect, first_upcrossing, newton_polish, Crossing, GridSpec};
use crate::polyflow::{FlowMap, JacobianMap};
use crate::settings::Setting;
use crate::{math, Error, Result};

/// Search parameters for the least nonzero root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanSpec {
    /// Dead zone below which roots are ignored.
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub points: usize,
    /// Bisection stops at `hi − lo ≤ rel_width·lo`.
    pub rel_width: f64,
}

impl Default for ScanSpec {
    fn default() -> Self {
        ScanSpec {
            gamma_min: 1e-9,
            gamma_max: 0.5,
            points: 400,
            rel_width: 1e-6,
        }
    }
}

impl ScanSpec {
    pub fn grid(&self) -> GridSpec {
        GridSpec::log(self.gamma_min, self.gamma_max, self.points)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PseudothresholdResult {
    pub location: String,
    pub level: u32,
    pub setting: String,
    pub value: f64,
    /// Final bisection interval; contains `value`.
    pub bracket: (f64, f64),
    /// The root sits on the upper end of the scan range, so a larger search
    /// range might tell a different story.
    pub at_scan_limit: bool,
}

/// `γ ↦ Γ^L_ℓ(g(γ))` together with its derivative.
pub struct LevelCurve<'a> {
    map: &'a FlowMap,
    jac: JacobianMap,
    setting: Setting,
    index: usize,
    level: u32,
}

impl<'a> LevelCurve<'a> {
    pub fn new(map: &'a FlowMap, location: &str, setting: &Setting, level: u32) -> Result<Self> {
        let index = map.index_of(location)?;
        let setting = setting.aligned_to(map.variables())?;
        Ok(LevelCurve {
            map,
            jac: map.jacobian_map(),
            setting,
            index,
            level,
        })
    }

    pub fn value(&self, gamma: f64) -> Result<f64> {
        let x = self.setting.apply_slice(gamma);
        Ok(self.map.iterate_slice(&x, self.level)?[self.index])
    }

    /// Value and `d/dγ` by the chain rule through every level.
    pub fn value_and_slope(&self, gamma: f64) -> Result<(f64, f64)> {
        let mut x = self.setting.apply_slice(gamma);
        let mut dx: Vec<f64> = self.setting.multipliers().to_vec();
        for _ in 0..self.level {
            let j = self.jac.eval(&x);
            dx = j
                .iter()
                .map(|row| row.iter().zip(&dx).map(|(a, b)| a * b).sum())
                .collect();
            x = self.map.eval_slice(&x)?;
        }
        Ok((x[self.index], dx[self.index]))
    }
}

/// Least nonzero solution of `Γ^L_ℓ(g(γ)) = γ`.
pub fn pseudothreshold(
    f: &FlowMap,
    location: &str,
    g: &Setting,
    level: u32,
    scan: &ScanSpec,
) -> Result<PseudothresholdResult> {
    if level == 0 {
        return Err(Error::InvalidArgument(
            "pseudothresholds need level ≥ 1".into(),
        ));
    }
    let curve = LevelCurve::new(f, location, g, level)?;
    let h = |x: f64| curve.value(x).map(|y| y - x);
    let grid = scan.grid();
    grid.validate()?;
    let none = |reason: &str| Error::NoPseudothreshold {
        location: location.to_string(),
        level,
        reason: reason.to_string(),
    };
    let crossing = first_upcrossing(&grid.points(), h)?.ok_or_else(|| {
        none(&alloc::format!(
            "no sign change on [{:e}, {:e}]",
            scan.gamma_min,
            scan.gamma_max
        ))
    })?;
    let (value, bracket) = match crossing {
        Crossing::Exact(x) => (x, (x, x)),
        Crossing::Bracket { lo, hi } => {
            let (lo, hi) = bisect(lo, hi, scan.rel_width, h)?;
            let start = 0.5 * (lo + hi);
            let v = newton_polish(start, lo, hi, |x| {
                curve.value_and_slope(x).map(|(y, dy)| (y - x, dy - 1.0))
            })?;
            (v, (lo, hi))
        }
    };
    let at_scan_limit = bracket.1 >= scan.gamma_max;
    Ok(PseudothresholdResult {
        location: location.to_string(),
        level,
        setting: g.name().to_string(),
        value,
        bracket,
        at_scan_limit,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticResult {
    pub value: f64,
    /// First level whose pseudothreshold agrees with the next one; `value`
    /// is the pseudothreshold at this level.
    pub level: u32,
    /// Pseudothresholds for levels `1..=level + 1`.
    pub sequence: Vec<f64>,
}

/// Level at which the asymptotic search gives up.
pub const MAX_LEVEL: u32 = 40;

/// Relative agreement of successive pseudothresholds that ends the search.
pub const LEVEL_REL_TOL: f64 = 1e-6;

/// Limit of the pseudothreshold sequence as the level grows.
pub fn asymptotic_location_threshold(
    f: &FlowMap,
    location: &str,
    g: &Setting,
    scan: &ScanSpec,
) -> Result<AsymptoticResult> {
    let mut sequence = Vec::new();
    for level in 1..=MAX_LEVEL {
        let v = pseudothreshold(f, location, g, level, scan)?.value;
        if let Some(&prev) = sequence.last() {
            if math::abs(v - prev) < LEVEL_REL_TOL * v {
                sequence.push(v);
                return Ok(AsymptoticResult {
                    value: prev,
                    level: level - 1,
                    sequence,
                });
            }
        }
        sequence.push(v);
    }
    let n = sequence.len();
    Err(Error::NotConverged {
        level: MAX_LEVEL,
        previous: sequence[n - 2],
        last: sequence[n - 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn one_parameter_map_is_level_independent() {
        let f = models::one_parameter(12, 1);
        let g = Setting::diagonal(f.variables());
        for level in 1..=4 {
            let r = pseudothreshold(&f, "g", &g, level, &ScanSpec::default()).unwrap();
            assert!(
                (r.value - 1.0 / 12.0).abs() < 1e-15,
                "L={level}: {}",
                r.value
            );
            assert!(r.bracket.0 <= r.value && r.value <= r.bracket.1);
        }
        let a = asymptotic_location_threshold(&f, "g", &g, &ScanSpec::default()).unwrap();
        assert!((a.value - 1.0 / 12.0).abs() < 1e-15);
        assert_eq!(a.level, 1);
    }

    #[test]
    fn identity_has_no_pseudothreshold() {
        let f = FlowMap::identity(&["g"]);
        let g = Setting::diagonal(f.variables());
        let r = pseudothreshold(&f, "g", &g, 1, &ScanSpec::default());
        assert!(matches!(r, Err(Error::NoPseudothreshold { .. })));
    }

    #[test]
    fn level_zero_is_rejected() {
        let f = models::one_parameter(12, 1);
        let g = Setting::diagonal(f.variables());
        assert!(pseudothreshold(&f, "g", &g, 0, &ScanSpec::default()).is_err());
    }
}
