use alloc::vec::Vec;

use crate::polyflow::FlowMap;
use crate::{math, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Below,
    Above,
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Below => "below",
            Verdict::Above => "above",
            Verdict::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BelowOptions {
    /// All entries below this count as having reached zero.
    pub epsilon: f64,
    pub max_levels: u32,
    /// Any entry above this counts as escaped.
    pub escape: f64,
    /// A step smaller than this while some entry exceeds `stall_floor`
    /// means the orbit settled on a nonzero fixed point.
    pub stall: f64,
    pub stall_floor: f64,
}

impl Default for BelowOptions {
    fn default() -> Self {
        BelowOptions {
            epsilon: 1e-12,
            max_levels: 200,
            escape: 0.999,
            stall: 1e-14,
            stall_floor: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    /// Iterations used to reach the verdict.
    pub levels: u32,
}

/// Follows the orbit of `x` until it reaches zero, escapes, stalls on a
/// nonzero fixed point, or runs out of levels.
pub fn classify(f: &FlowMap, x: &[f64], opts: &BelowOptions) -> Result<Classification> {
    let mut cur = x.to_vec();
    let mut level = 0;
    loop {
        if cur.iter().all(|&v| v < opts.epsilon) {
            return Ok(Classification {
                verdict: Verdict::Below,
                levels: level,
            });
        }
        if cur.iter().any(|&v| v > opts.escape) {
            return Ok(Classification {
                verdict: Verdict::Above,
                levels: level,
            });
        }
        if level == opts.max_levels {
            return Ok(Classification {
                verdict: Verdict::Undetermined,
                levels: level,
            });
        }
        let next = f.eval_slice(&cur)?;
        let step = next
            .iter()
            .zip(&cur)
            .map(|(a, b)| math::abs(a - b))
            .fold(0.0, f64::max);
        let top = next.iter().copied().fold(0.0, f64::max);
        level += 1;
        if step < opts.stall && top > opts.stall_floor {
            return Ok(Classification {
                verdict: Verdict::Above,
                levels: level,
            });
        }
        cur = next;
    }
}

/// True iff the orbit of `x` reaches all entries `< epsilon` within
/// `max_levels` iterations.
pub fn below_threshold(f: &FlowMap, x: &[f64], epsilon: f64, max_levels: u32) -> Result<bool> {
    let opts = BelowOptions {
        epsilon,
        max_levels,
        ..BelowOptions::default()
    };
    Ok(classify(f, x, &opts)?.verdict == Verdict::Below)
}

/// A point classified below whose scaled copy `c·x` is not.
#[derive(Clone, Debug, PartialEq)]
pub struct RayViolation {
    pub point: Vec<f64>,
    pub factor: f64,
    pub verdict: Verdict,
}

/// Checks that scaling a below-threshold point toward the origin keeps it
/// below threshold. Violations are returned, not treated as errors.
pub fn ray_monotonicity_violations(
    f: &FlowMap,
    points: &[Vec<f64>],
    factors: &[f64],
    opts: &BelowOptions,
) -> Result<Vec<RayViolation>> {
    let mut out = Vec::new();
    for p in points {
        if classify(f, p, opts)?.verdict != Verdict::Below {
            continue;
        }
        for &c in factors {
            let q: Vec<f64> = p.iter().map(|v| c * v).collect();
            let verdict = classify(f, &q, opts)?.verdict;
            if verdict != Verdict::Below {
                out.push(RayViolation {
                    point: p.clone(),
                    factor: c,
                    verdict,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn origin_is_below_for_any_map() {
        for f in [models::uv_example(), FlowMap::identity(&["a", "b"])] {
            assert!(below_threshold(&f, &[0.0, 0.0], 1e-12, 200).unwrap());
        }
    }

    #[test]
    fn identity_stalls_away_from_origin() {
        let f = FlowMap::identity(&["a"]);
        let c = classify(&f, &[0.1], &BelowOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Above);
        let tiny = classify(&f, &[1e-9], &BelowOptions::default()).unwrap();
        assert_eq!(tiny.verdict, Verdict::Undetermined);
    }

    #[test]
    fn one_parameter_basin() {
        let f = models::one_parameter(12, 1);
        assert!(below_threshold(&f, &[0.08], 1e-12, 200).unwrap());
        assert!(!below_threshold(&f, &[0.09], 1e-12, 200).unwrap());
    }
}
