//! Threshold analysis of flow maps.
//!
//! Everything here is single-threaded and evaluates maps numerically by
//! iteration. Grid-shaped computations expose their per-point kernels
//! ([`classify`], [`TifdPlane::arrow`], [`LevelCurve::value`]) so callers can
//! spread them over workers and merge results by index.

mod basin;
mod bounds;
mod fixed;
mod pseudo;
mod roots;
mod tifd;
mod trip;
mod tset;

pub use basin::{
    below_threshold, classify, ray_monotonicity_violations, BelowOptions, Classification,
    RayViolation, Verdict,
};
pub use bounds::{
    axis_upper_bound, conjecture_check, low_order_bound, restrict_to_setting, AxisBound,
    ConjectureCheck, LowOrderBound,
};
pub use fixed::{fixed_points, newton_fixed_point, residual, FixedPointOptions};
pub use pseudo::{
    asymptotic_location_threshold, pseudothreshold, AsymptoticResult, LevelCurve,
    PseudothresholdResult, ScanSpec, LEVEL_REL_TOL, MAX_LEVEL,
};
pub use roots::{bisect, first_upcrossing, newton_polish, solve_linear, Crossing, GridSpec};
pub use tifd::{tifd_field, TifdArrow, TifdField, TifdPlane};
pub use trip::{identity_crossings, trip_curves, TripCurve};
pub use tset::{largest_cube, threshold_set, CubeEstimate, SliceSpec, ThresholdSetReport};

use alloc::vec::Vec;

use crate::polyflow::{FailureVector, FlowMap};
use crate::Result;

/// Orbit entries below this count as having reached zero.
pub const TRAJECTORY_FLOOR: f64 = 1e-12;

/// The orbit `start, Γ(start), Γ²(start), …` up to `max_levels` steps,
/// stopping once every entry is below `1e-12` or some entry exceeds
/// `1 − 1e-12`.
pub fn trajectory(
    f: &FlowMap,
    start: &FailureVector,
    max_levels: u32,
) -> Result<Vec<FailureVector>> {
    let mut out = alloc::vec![FailureVector::new(
        f.variables(),
        start.aligned(f.variables())?
    )?];
    for _ in 0..max_levels {
        let cur = out.last().expect("non-empty");
        if cur.values().iter().all(|&v| v < TRAJECTORY_FLOOR)
            || cur.values().iter().any(|&v| v > 1.0 - TRAJECTORY_FLOOR)
        {
            break;
        }
        let next = f.eval_map(cur)?;
        out.push(next);
    }
    Ok(out)
}
