use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::pseudo::LevelCurve;
use crate::polyflow::FlowMap;
use crate::settings::Setting;
use crate::{Error, Result};

/// Reliability curve `γ ↦ Γ^L_ℓ(g(γ))` sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TripCurve {
    pub location: String,
    pub level: u32,
    pub setting: String,
    /// `(γ, value)` with strictly increasing `γ`.
    pub samples: Vec<(f64, f64)>,
    /// Crossings of the identity line at `γ > 0`, linearly interpolated
    /// between samples.
    pub crossings: Vec<f64>,
}

impl TripCurve {
    pub fn from_samples(
        location: &str,
        level: u32,
        setting: &str,
        samples: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument(
                "TRIP grid must be strictly increasing".into(),
            ));
        }
        let crossings = identity_crossings(&samples);
        Ok(TripCurve {
            location: location.to_string(),
            level,
            setting: setting.to_string(),
            samples,
            crossings,
        })
    }
}

/// Points where `value − γ` changes sign or vanishes, for `γ > 0`.
pub fn identity_crossings(samples: &[(f64, f64)]) -> Vec<f64> {
    let mut out = Vec::new();
    let diff = |s: &(f64, f64)| s.1 - s.0;
    for (i, s) in samples.iter().enumerate() {
        if s.0 > 0.0 && diff(s) == 0.0 {
            out.push(s.0);
            continue;
        }
        if i == 0 {
            continue;
        }
        let p = &samples[i - 1];
        let (dp, ds) = (diff(p), diff(s));
        if dp != 0.0 && ds != 0.0 && (dp < 0.0) != (ds < 0.0) {
            let t = dp / (dp - ds);
            out.push(p.0 + t * (s.0 - p.0));
        }
    }
    out
}

/// TRIP curves for each requested level, by numeric iteration.
pub fn trip_curves(
    f: &FlowMap,
    location: &str,
    g: &Setting,
    levels: &[u32],
    grid: &[f64],
) -> Result<Vec<TripCurve>> {
    levels
        .iter()
        .map(|&level| {
            let curve = LevelCurve::new(f, location, g, level)?;
            let samples = grid
                .iter()
                .map(|&x| curve.value(x).map(|y| (x, y)))
                .collect::<Result<Vec<_>>>()?;
            TripCurve::from_samples(location, level, g.name(), samples)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::GridSpec;
    use crate::models;

    #[test]
    fn crossings_of_one_parameter_map() {
        let f = models::one_parameter(4, 1);
        let g = Setting::diagonal(f.variables());
        let grid = GridSpec::linear(0.0, 0.5, 51).points();
        let curves = trip_curves(&f, "g", &g, &[1, 2], &grid).unwrap();
        for c in &curves {
            assert_eq!(c.samples[0], (0.0, 0.0));
            assert_eq!(c.crossings.len(), 1);
            assert!((c.crossings[0] - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn interpolated_crossing() {
        let s = [(0.1, 0.0), (0.2, 0.4)];
        let c = identity_crossings(&s);
        assert!((c[0] - 0.1 - 0.1 / 3.0).abs() < 1e-15);
    }
}
