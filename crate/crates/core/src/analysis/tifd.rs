use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::polyflow::{FailureVector, FlowMap};
use crate::{math, Result};

/// One arrow `Γ¹(γ⃗) − γ⃗` projected onto the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TifdArrow {
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub dy: f64,
    pub magnitude: f64,
}

impl TifdArrow {
    /// Unit direction, or zero at a fixed point.
    pub fn unit(&self) -> (f64, f64) {
        if self.magnitude == 0.0 {
            (0.0, 0.0)
        } else {
            (self.dx / self.magnitude, self.dy / self.magnitude)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TifdField {
    pub plane: (String, String),
    /// Values of the locations outside the plane.
    pub fixed_values: FailureVector,
    /// Row-major over `(y, x)`: all `x` for the first `y`, then the next.
    pub arrows: Vec<TifdArrow>,
}

/// Evaluates the displacement field at one plane point.
pub struct TifdPlane<'a> {
    map: &'a FlowMap,
    base: Vec<f64>,
    ix: usize,
    iy: usize,
}

impl<'a> TifdPlane<'a> {
    /// Locations missing from `fixed` are held at zero.
    pub fn new(map: &'a FlowMap, plane: (&str, &str), fixed: &FailureVector) -> Result<Self> {
        let ix = map.index_of(plane.0)?;
        let iy = map.index_of(plane.1)?;
        let base = map
            .variables()
            .iter()
            .map(|v| fixed.get(v).unwrap_or(0.0))
            .collect();
        Ok(TifdPlane { map, base, ix, iy })
    }

    pub fn fixed_values(&self) -> FailureVector {
        FailureVector::new(self.map.variables(), self.base.clone()).expect("aligned")
    }

    pub fn arrow(&self, x: f64, y: f64) -> Result<TifdArrow> {
        let mut p = self.base.clone();
        p[self.ix] = x;
        p[self.iy] = y;
        let img = self.map.eval_slice(&p)?;
        let (dx, dy) = (img[self.ix] - x, img[self.iy] - y);
        Ok(TifdArrow {
            x,
            y,
            dx,
            dy,
            magnitude: math::sqrt(dx * dx + dy * dy),
        })
    }
}

/// The displacement field on the grid `xs × ys`.
pub fn tifd_field(
    f: &FlowMap,
    plane: (&str, &str),
    fixed: &FailureVector,
    xs: &[f64],
    ys: &[f64],
) -> Result<TifdField> {
    let p = TifdPlane::new(f, plane, fixed)?;
    let mut arrows = Vec::with_capacity(xs.len() * ys.len());
    for &y in ys {
        for &x in xs {
            arrows.push(p.arrow(x, y)?);
        }
    }
    Ok(TifdField {
        plane: (plane.0.to_string(), plane.1.to_string()),
        fixed_values: p.fixed_values(),
        arrows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn identity_field_vanishes() {
        let f = FlowMap::identity(&["a", "b", "c"]);
        let fixed = FailureVector::new(&["c"], alloc::vec![0.3]).unwrap();
        let grid = [0.0, 0.25, 0.5, 1.0];
        let field = tifd_field(&f, ("a", "b"), &fixed, &grid, &grid).unwrap();
        assert_eq!(field.arrows.len(), 16);
        assert!(field
            .arrows
            .iter()
            .all(|a| a.magnitude == 0.0 && a.unit() == (0.0, 0.0)));
        assert_eq!(field.fixed_values.get("c"), Some(0.3));
    }

    #[test]
    fn uv_arrow_points_at_the_image() {
        let f = models::uv_example();
        let field = tifd_field(
            &f,
            ("u", "v"),
            &FailureVector::zeros::<&str>(&[]),
            &[0.0],
            &[0.2],
        )
        .unwrap();
        let a = field.arrows[0];
        assert!((a.x + a.dx - 0.04).abs() < 1e-12);
        assert!((a.y + a.dy - 0.104).abs() < 1e-12);
    }
}
