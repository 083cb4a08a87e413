use alloc::vec;
use alloc::vec::Vec;

use super::mc::McTrip;
use crate::analysis::solve_linear;
use crate::{math, Error, Result};

/// Fewest grid points accepted by [`fit_pseudothreshold`].
pub const MIN_FIT_POINTS: usize = 5;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitPoint {
    pub gamma: f64,
    pub p_hat: f64,
    /// Binomial trial count behind `p_hat`; 0 for exact data, which is
    /// fitted unweighted.
    pub trials: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FitModel {
    /// `c₂γ²`.
    Quadratic,
    /// `c₂γ² + c₃γ³`.
    #[default]
    Cubic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PseudothresholdFit {
    pub c2: f64,
    pub c3: f64,
    /// Least positive root of `fit(γ) = γ`.
    pub value: f64,
    pub stderr: f64,
    /// 95% interval from the coefficient covariance.
    pub ci: (f64, f64),
    pub points: usize,
}

impl From<&McTrip> for Vec<FitPoint> {
    fn from(t: &McTrip) -> Self {
        t.gammas
            .iter()
            .zip(&t.estimates)
            .map(|(&gamma, e)| FitPoint {
                gamma,
                p_hat: e.p_hat,
                trials: e.trials,
            })
            .collect()
    }
}

fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(solve_linear(m.to_vec(), e)?);
    }
    Some(
        (0..n)
            .map(|i| (0..n).map(|j| cols[j][i]).collect())
            .collect(),
    )
}

/// Weighted least squares through the origin, then the crossing with the
/// identity line. Binomial weights are re-estimated from the fitted curve
/// twice, so zero-failure points still count.
pub fn fit_pseudothreshold(points: &[FitPoint], model: FitModel) -> Result<PseudothresholdFit> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(alloc::format!(
            "{} points given, at least {MIN_FIT_POINTS} needed",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|p| !(p.gamma > 0.0) || !p.p_hat.is_finite())
    {
        return Err(Error::Fit("grid points must have γ > 0".into()));
    }
    let k = match model {
        FitModel::Quadratic => 1,
        FitModel::Cubic => 2,
    };
    // scale γ to O(1) so the normal equations stay well conditioned
    let scale = points.iter().fold(0.0f64, |m, p| m.max(p.gamma));
    let basis = |g: f64| -> Vec<f64> {
        let u = g / scale;
        (0..k).map(|j| math::powi(u, 2 + j as u32)).collect()
    };
    let weighted = points.iter().all(|p| p.trials > 0);
    let mut beta = vec![0.0; k];
    let mut cov = vec![vec![0.0; k]; k];
    for pass in 0..3 {
        let mut xtx = vec![vec![0.0; k]; k];
        let mut xty = vec![0.0; k];
        for p in points {
            let x = basis(p.gamma);
            let w = if weighted {
                let f = if pass == 0 {
                    p.p_hat
                } else {
                    x.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>()
                };
                let floor = 0.5 / p.trials as f64;
                let f = f.clamp(floor, 1.0 - floor);
                p.trials as f64 / (f * (1.0 - f))
            } else {
                1.0
            };
            for i in 0..k {
                xty[i] += w * x[i] * p.p_hat;
                for j in 0..k {
                    xtx[i][j] += w * x[i] * x[j];
                }
            }
        }
        beta = solve_linear(xtx.clone(), xty)
            .ok_or_else(|| Error::Fit("singular normal equations".into()))?;
        cov = invert(&xtx).ok_or_else(|| Error::Fit("singular normal equations".into()))?;
        if !weighted {
            let rss: f64 = points
                .iter()
                .map(|p| {
                    let f: f64 = basis(p.gamma).iter().zip(&beta).map(|(a, b)| a * b).sum();
                    (p.p_hat - f) * (p.p_hat - f)
                })
                .sum();
            let dof = (points.len() - k) as f64;
            for row in &mut cov {
                for v in row.iter_mut() {
                    *v *= rss / dof;
                }
            }
            break;
        }
    }
    // back to the γ scale
    let unscale = [1.0 / (scale * scale), 1.0 / (scale * scale * scale)];
    let c: Vec<f64> = beta.iter().zip(unscale).map(|(b, s)| b * s).collect();
    let cov: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| cov[i][j] * unscale[i] * unscale[j])
                .collect()
        })
        .collect();
    let (c2, c3) = (c[0], if k == 2 { c[1] } else { 0.0 });
    // c₃γ² + c₂γ − 1 = 0, smaller positive root in a cancellation-free form
    let disc = c2 * c2 + 4.0 * c3;
    let denom = if disc >= 0.0 {
        c2 + math::sqrt(disc)
    } else {
        -1.0
    };
    if !(denom > 0.0) {
        return Err(Error::Fit(alloc::format!(
            "fitted curve {c2:e}·γ² + {c3:e}·γ³ never meets the identity line"
        )));
    }
    let value = 2.0 / denom;
    // implicit differentiation of c₂γ + c₃γ² = 1
    let d = c2 + 2.0 * c3 * value;
    let grad = [-value / d, -value * value / d];
    let mut var = 0.0;
    for i in 0..k {
        for j in 0..k {
            var += grad[i] * grad[j] * cov[i][j];
        }
    }
    let stderr = math::sqrt(var.max(0.0));
    Ok(PseudothresholdFit {
        c2,
        c3,
        value,
        stderr,
        ci: (value - Z95 * stderr, value + Z95 * stderr),
        points: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(f: impl Fn(f64) -> f64) -> Vec<FitPoint> {
        (1..=8)
            .map(|i| {
                let gamma = 0.01 * i as f64;
                FitPoint {
                    gamma,
                    p_hat: f(gamma),
                    trials: 0,
                }
            })
            .collect()
    }

    #[test]
    fn pure_quadratic_crosses_at_reciprocal() {
        let pts = exact(|g| 12.0 * g * g);
        for model in [FitModel::Quadratic, FitModel::Cubic] {
            let f = fit_pseudothreshold(&pts, model).unwrap();
            assert!((f.value - 1.0 / 12.0).abs() < 1e-12, "{f:?}");
            assert!(f.stderr < 1e-9);
        }
    }

    #[test]
    fn cubic_term_is_recovered() {
        let pts = exact(|g| 10.0 * g * g + 50.0 * g * g * g);
        let f = fit_pseudothreshold(&pts, FitModel::Cubic).unwrap();
        assert!((f.c2 - 10.0).abs() < 1e-9 && (f.c3 - 50.0).abs() < 1e-7);
        let root = f.value;
        assert!((10.0 * root + 50.0 * root * root - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_points_or_no_crossing() {
        let pts = exact(|g| g * g);
        assert!(fit_pseudothreshold(&pts[..4], FitModel::Cubic).is_err());
        let pts = exact(|g| -g * g);
        assert!(fit_pseudothreshold(&pts, FitModel::Quadratic).is_err());
    }

    #[test]
    fn weighted_fit_tolerates_zero_counts() {
        let pts: Vec<FitPoint> = [
            (1e-4, 0.0),
            (2e-4, 1e-5),
            (4e-4, 4e-5),
            (8e-4, 1.7e-4),
            (1.6e-3, 6.5e-4),
        ]
        .iter()
        .map(|&(gamma, p_hat)| FitPoint {
            gamma,
            p_hat,
            trials: 1_000_000,
        })
        .collect();
        let f = fit_pseudothreshold(&pts, FitModel::Quadratic).unwrap();
        assert!((f.c2 - 250.0).abs() < 15.0, "{f:?}");
        assert!(f.ci.0 < f.value && f.value < f.ci.1);
    }
}
