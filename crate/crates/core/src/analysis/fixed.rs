use alloc::vec;
use alloc::vec::Vec;

use super::roots::solve_linear;
use crate::polyflow::{FailureVector, FlowMap};
use crate::{math, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointOptions {
    /// Seeds per axis, spread evenly over the region including its edges.
    pub seeds_per_axis: usize,
    pub max_iterations: usize,
    /// Accepted points satisfy `‖Γ(x) − x‖∞ <` this.
    pub residual: f64,
    /// Points closer than this (sup norm) are merged.
    pub dedup: f64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            seeds_per_axis: 21,
            max_iterations: 100,
            residual: 1e-10,
            dedup: 1e-8,
        }
    }
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| math::abs(x - y))
        .fold(0.0, f64::max)
}

/// `‖Γ(x) − x‖∞`.
pub fn residual(f: &FlowMap, x: &[f64]) -> f64 {
    sup_dist(&f.eval_unclamped(x), x)
}

/// Newton iteration on `Γ(x) − x` from one seed. `None` when the Jacobian
/// turns singular, a probability goes out of range, or the iteration does
/// not settle.
pub fn newton_fixed_point(f: &FlowMap, seed: &[f64], opts: &FixedPointOptions) -> Option<Vec<f64>> {
    let jac = f.jacobian_map();
    let n = seed.len();
    let mut x = seed.to_vec();
    for _ in 0..opts.max_iterations {
        let img = f.eval_unclamped(&x);
        let r: Vec<f64> = img.iter().zip(&x).map(|(a, b)| a - b).collect();
        let mut a = jac.eval(&x);
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= 1.0;
        }
        let step = solve_linear(a, r.iter().map(|v| -v).collect())?;
        let size = step.iter().fold(0.0f64, |m, v| m.max(math::abs(*v)));
        for (xi, s) in x.iter_mut().zip(&step) {
            *xi += s;
        }
        if x.iter().any(|v| !v.is_finite() || math::abs(*v) > 10.0) {
            return None;
        }
        if size <= 1e-15 * (1.0 + x.iter().fold(0.0f64, |m, v| m.max(math::abs(*v)))) {
            break;
        }
    }
    debug_assert_eq!(x.len(), n);
    // coordinates that converged onto zero from either side
    let snapped: Vec<f64> = x
        .iter()
        .map(|&v| if math::abs(v) < 1e-14 { 0.0 } else { v })
        .collect();
    if residual(f, &snapped) < opts.residual {
        x = snapped;
    }
    Some(x)
}

/// Fixed points inside the box `region` (one `(lo, hi)` per variable),
/// found by Newton from a seed grid and sorted lexicographically.
pub fn fixed_points(
    f: &FlowMap,
    region: &[(f64, f64)],
    opts: &FixedPointOptions,
) -> Result<Vec<FailureVector>> {
    let n = f.dim();
    if region.len() != n {
        return Err(Error::VariableMismatch(alloc::format!(
            "region has {} intervals for {n} variables",
            region.len()
        )));
    }
    let k = opts.seeds_per_axis.max(1);
    let total = k
        .checked_pow(n as u32)
        .filter(|&t| t <= 5_000_000)
        .ok_or_else(|| Error::InvalidArgument(alloc::format!("{k}^{n} seeds is too many")))?;
    let tol = 1e-9;
    let mut found: Vec<Vec<f64>> = Vec::new();
    let mut seed = vec![0.0; n];
    for idx in 0..total {
        let mut rem = idx;
        for (d, s) in seed.iter_mut().enumerate() {
            let (lo, hi) = region[d];
            let i = rem % k;
            rem /= k;
            *s = if k == 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (k - 1) as f64
            };
        }
        let Some(x) = newton_fixed_point(f, &seed, opts) else {
            continue;
        };
        let inside = x
            .iter()
            .zip(region)
            .all(|(v, (lo, hi))| *v >= lo - tol && *v <= hi + tol);
        if !inside || residual(f, &x) >= opts.residual {
            continue;
        }
        if found.iter().all(|p| sup_dist(p, &x) >= opts.dedup) {
            found.push(x);
        }
    }
    // order by coordinates rounded to the merge distance, so round-off
    // does not decide ties
    let key = |p: &Vec<f64>| -> Vec<i64> {
        p.iter()
            .map(|v| math::round(v / opts.dedup) as i64)
            .collect()
    };
    found.sort_by_key(key);
    found
        .into_iter()
        .map(|x| FailureVector::new(f.variables(), x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn one_parameter_fixed_points() {
        let f = models::one_parameter(12, 1);
        let pts = fixed_points(&f, &[(0.0, 1.0)], &FixedPointOptions::default()).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].values()[0], 0.0);
        assert!((pts[1].values()[0] - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn uv_map_has_an_interior_saddle() {
        let f = models::uv_example();
        let pts =
            fixed_points(&f, &[(0.0, 1.0), (0.0, 1.0)], &FixedPointOptions::default()).unwrap();
        assert!(pts.iter().any(|p| p.values() == [0.0, 0.0]));
        assert!(pts.iter().any(|p| (p.values()[0] - 0.08362846).abs() < 1e-7
            && (p.values()[1] - 0.17858183).abs() < 1e-7));
        for p in &pts {
            assert!(residual(&f, p.values()) < 1e-10);
        }
    }
}
