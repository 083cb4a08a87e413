use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::basin::{classify, BelowOptions, Verdict};
use super::roots::GridSpec;
use crate::polyflow::{FailureVector, FlowMap};
use crate::{Error, Result};

/// A node grid on the rectangle `[0, x_hi] × [0, y_hi]` in the plane of
/// two locations, with every other location held fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceSpec {
    pub x_var: String,
    pub y_var: String,
    /// Values of the remaining locations; missing ones are zero.
    pub fixed: FailureVector,
    /// Nodes per axis, endpoints included.
    pub n: usize,
    pub x_hi: f64,
    pub y_hi: f64,
}

impl SliceSpec {
    pub fn new(x_var: &str, y_var: &str, n: usize, x_hi: f64, y_hi: f64) -> Self {
        SliceSpec {
            x_var: x_var.to_string(),
            y_var: y_var.to_string(),
            fixed: FailureVector::zeros::<&str>(&[]),
            n,
            x_hi,
            y_hi,
        }
    }

    pub fn unit_square(x_var: &str, y_var: &str, n: usize) -> Self {
        SliceSpec::new(x_var, y_var, n, 1.0, 1.0)
    }

    pub fn x_nodes(&self) -> Vec<f64> {
        GridSpec::linear(0.0, self.x_hi, self.n).points()
    }

    pub fn y_nodes(&self) -> Vec<f64> {
        GridSpec::linear(0.0, self.y_hi, self.n).points()
    }

    /// Largest node spacing of the two axes.
    pub fn resolution(&self) -> f64 {
        self.x_hi.max(self.y_hi) / (self.n - 1) as f64
    }

    pub fn validate(&self, f: &FlowMap) -> Result<()> {
        f.index_of(&self.x_var)?;
        f.index_of(&self.y_var)?;
        if self.x_var == self.y_var || self.n < 2 || !(self.x_hi > 0.0) || !(self.y_hi > 0.0) {
            return Err(Error::InvalidArgument(alloc::format!("bad slice {self:?}")));
        }
        Ok(())
    }

    /// Full map point at plane coordinates `(x, y)`.
    pub fn point(&self, f: &FlowMap, x: f64, y: f64) -> Vec<f64> {
        f.variables()
            .iter()
            .map(|v| {
                if *v == self.x_var {
                    x
                } else if *v == self.y_var {
                    y
                } else {
                    self.fixed.get(v).unwrap_or(0.0)
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdSetReport {
    pub slice: SliceSpec,
    pub x_nodes: Vec<f64>,
    pub y_nodes: Vec<f64>,
    /// Row-major over `(y, x)`: index `iy·n + ix`.
    pub classes: Vec<Verdict>,
    /// Staircase outline of the below-threshold region, left to right.
    pub boundary: Vec<(f64, f64)>,
    /// Per column, the top of the contiguous below run from `y = 0`.
    pub column_heights: Vec<f64>,
    /// Columns whose below nodes do not form one run from the bottom.
    pub non_monotone_columns: Vec<usize>,
    pub largest_cube_edge: f64,
    pub resolution: f64,
}

impl ThresholdSetReport {
    pub fn class(&self, ix: usize, iy: usize) -> Verdict {
        self.classes[iy * self.slice.n + ix]
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.classes.iter().filter(|&&c| c == v).count()
    }

    /// Assembles the report from node classes in row-major order.
    pub fn from_classes(slice: SliceSpec, classes: Vec<Verdict>) -> Result<Self> {
        let n = slice.n;
        if classes.len() != n * n {
            return Err(Error::InvalidArgument(
                "class grid has the wrong size".into(),
            ));
        }
        let (xs, ys) = (slice.x_nodes(), slice.y_nodes());
        let below = |ix: usize, iy: usize| classes[iy * n + ix] == Verdict::Below;

        let mut column_heights = Vec::with_capacity(n);
        let mut non_monotone_columns = Vec::new();
        for ix in 0..n {
            let run = (0..n).take_while(|&iy| below(ix, iy)).count();
            if (run..n).any(|iy| below(ix, iy)) {
                non_monotone_columns.push(ix);
            }
            column_heights.push(match run {
                0 => 0.0,
                r if r == n => slice.y_hi,
                r => 0.5 * (ys[r - 1] + ys[r]),
            });
        }
        let hx = xs[1] - xs[0];
        let mut boundary = Vec::with_capacity(2 * n);
        for (ix, &y) in column_heights.iter().enumerate() {
            let left = if ix == 0 { 0.0 } else { xs[ix] - 0.5 * hx };
            let right = if ix == n - 1 {
                slice.x_hi
            } else {
                xs[ix] + 0.5 * hx
            };
            boundary.push((left, y));
            boundary.push((right, y));
        }

        // Largest node coordinate e such that every node of [0, e]² is
        // below; candidates are taken in increasing order and the search
        // stops at the first failure.
        let mut cands: Vec<f64> = xs.iter().chain(&ys).copied().collect();
        cands.sort_by(f64::total_cmp);
        cands.dedup();
        let mut edge = 0.0;
        for e in cands {
            if e > slice.x_hi.min(slice.y_hi) {
                break;
            }
            let nx = xs.iter().take_while(|&&x| x <= e).count();
            let ny = ys.iter().take_while(|&&y| y <= e).count();
            if !(0..ny).all(|iy| (0..nx).all(|ix| below(ix, iy))) {
                break;
            }
            edge = e;
        }
        let h = slice.resolution();
        Ok(ThresholdSetReport {
            slice,
            x_nodes: xs,
            y_nodes: ys,
            classes,
            boundary,
            column_heights,
            non_monotone_columns,
            largest_cube_edge: edge,
            resolution: h,
        })
    }
}

/// Classifies every node of the slice and summarises the below-threshold
/// region.
pub fn threshold_set(
    f: &FlowMap,
    slice: &SliceSpec,
    opts: &BelowOptions,
) -> Result<ThresholdSetReport> {
    slice.validate(f)?;
    let (xs, ys) = (slice.x_nodes(), slice.y_nodes());
    let mut classes = Vec::with_capacity(xs.len() * ys.len());
    for &y in &ys {
        for &x in &xs {
            classes.push(classify(f, &slice.point(f, x, y), opts)?.verdict);
        }
    }
    ThresholdSetReport::from_classes(slice.clone(), classes)
}

/// Cube `[0, edge]^n` over all map variables, found without a full grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubeEstimate {
    pub edge: f64,
    /// Spacing of the candidate edges.
    pub resolution: f64,
    /// Lattice nodes per axis checked inside the accepted cube.
    pub probe: usize,
}

/// Largest candidate edge `hi·i/n` whose diagonal corner is below threshold
/// and whose `probe^n` lattice in `[0, edge]^n` is entirely below. Exact on
/// the lattice; in between it relies on the region being a down-set.
pub fn largest_cube(
    f: &FlowMap,
    hi: f64,
    n: usize,
    probe: usize,
    opts: &BelowOptions,
) -> Result<CubeEstimate> {
    if !(hi > 0.0 && hi <= 1.0) || n == 0 || probe < 2 {
        return Err(Error::InvalidArgument(alloc::format!(
            "cube search needs 0 < hi ≤ 1, n ≥ 1 and probe ≥ 2 (got {hi}, {n}, {probe})"
        )));
    }
    let d = f.dim();
    let total = probe
        .checked_pow(d as u32)
        .filter(|&t| t <= 1_000_000)
        .ok_or_else(|| {
            Error::InvalidArgument(alloc::format!("{probe}^{d} probe nodes is too many"))
        })?;
    let below = |x: &[f64]| -> Result<bool> { Ok(classify(f, x, opts)?.verdict == Verdict::Below) };
    let edge_at = |i: usize| hi * i as f64 / n as f64;
    let mut i = 0;
    while i < n && below(&alloc::vec![edge_at(i + 1); d])? {
        i += 1;
    }
    let mut x = alloc::vec![0.0; d];
    'shrink: while i > 0 {
        let e = edge_at(i);
        for idx in 0..total {
            let mut rem = idx;
            for v in x.iter_mut() {
                *v = e * (rem % probe) as f64 / (probe - 1) as f64;
                rem /= probe;
            }
            if !below(&x)? {
                i -= 1;
                continue 'shrink;
            }
        }
        break;
    }
    Ok(CubeEstimate {
        edge: edge_at(i),
        resolution: hi / n as f64,
        probe,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_of_power_law_map() {
        let f = crate::models::one_parameter(12, 1);
        let c = largest_cube(&f, 0.5, 500, 3, &BelowOptions::default()).unwrap();
        assert!((c.edge - 1.0 / 12.0).abs() <= c.resolution, "{c:?}");
        assert!(c.edge < 1.0 / 12.0);
    }

    #[test]
    fn identity_map_has_only_the_origin() {
        let f = FlowMap::identity(&["a", "b"]);
        let r = threshold_set(
            &f,
            &SliceSpec::unit_square("a", "b", 11),
            &BelowOptions::default(),
        )
        .unwrap();
        assert_eq!(r.count(Verdict::Below), 1);
        assert_eq!(r.class(0, 0), Verdict::Below);
        assert_eq!(r.largest_cube_edge, 0.0);
    }

    #[test]
    fn staircase_from_handmade_classes() {
        use Verdict::*;
        let slice = SliceSpec::unit_square("a", "b", 3);
        // rows from y = 0 upward
        let classes = alloc::vec![Below, Below, Above, Below, Above, Above, Below, Above, Above];
        let r = ThresholdSetReport::from_classes(slice, classes).unwrap();
        assert_eq!(r.column_heights, [1.0, 0.25, 0.0]);
        assert!(r.non_monotone_columns.is_empty());
        assert_eq!(r.largest_cube_edge, 0.0);
    }
}
