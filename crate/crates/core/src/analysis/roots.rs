use alloc::vec::Vec;
use core::str::FromStr;

use crate::{math, Error, Result};

/// Sample grid on an interval, linear or logarithmic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn linear(lo: f64, hi: f64, n: usize) -> Self {
        GridSpec {
            lo,
            hi,
            n,
            log: false,
        }
    }

    pub fn log(lo: f64, hi: f64, n: usize) -> Self {
        GridSpec {
            lo,
            hi,
            n,
            log: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.lo.is_finite()
            && self.hi.is_finite()
            && self.lo <= self.hi
            && self.n >= 1
            && (!self.log || self.lo > 0.0)
            && (self.n > 1 || self.lo == self.hi);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(alloc::format!("bad grid {self:?}")))
        }
    }

    /// Grid points; the last one is exactly `hi`.
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return alloc::vec![self.lo];
        }
        let last = (self.n - 1) as f64;
        let mut out: Vec<f64> = (0..self.n)
            .map(|i| {
                let t = i as f64 / last;
                if self.log {
                    math::exp(math::ln(self.lo) + t * (math::ln(self.hi) - math::ln(self.lo)))
                } else {
                    self.lo + t * (self.hi - self.lo)
                }
            })
            .collect();
        out[0] = self.lo;
        out[self.n - 1] = self.hi;
        out
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `lo:hi:n` or `lo:hi:n:log`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(alloc::format!("grid `{s}` is not lo:hi:n[:log]"));
        let parts: Vec<&str> = s.split(':').collect();
        let log = match parts.len() {
            3 => false,
            4 if parts[3] == "log" => true,
            4 if parts[3] == "lin" => false,
            _ => return Err(bad()),
        };
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let g = GridSpec { lo, hi, n, log };
        g.validate()?;
        Ok(g)
    }
}

impl core::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{:e}:{:e}:{}", self.lo, self.hi, self.n)?;
        if self.log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}

/// Outcome of scanning a function for its first non-negative value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Crossing {
    /// The function is exactly zero here.
    Exact(f64),
    /// Negative at `lo`, non-negative at `hi`.
    Bracket { lo: f64, hi: f64 },
}

/// First grid point where `h` becomes non-negative after being negative.
/// Points where `h` is already non-negative before any negative value are
/// skipped, as are NaNs.
pub fn first_upcrossing<F>(grid: &[f64], mut h: F) -> Result<Option<Crossing>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut prev: Option<f64> = None;
    for &x in grid {
        let y = h(x)?;
        if y.is_nan() {
            prev = None;
            continue;
        }
        if y < 0.0 {
            prev = Some(x);
            continue;
        }
        if let Some(lo) = prev {
            return Ok(Some(if y == 0.0 {
                Crossing::Exact(x)
            } else {
                Crossing::Bracket { lo, hi: x }
            }));
        }
    }
    Ok(None)
}

/// Bisects a bracket with `h(lo) < 0 ≤ h(hi)` until `hi − lo ≤ rel·lo`.
pub fn bisect<F>(mut lo: f64, mut hi: f64, rel: f64, mut h: F) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    for _ in 0..200 {
        if hi - lo <= rel * lo {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Newton polish of a root known to lie in `[lo, hi]`. Steps leaving the
/// bracket abandon the refinement and return `start`.
pub fn newton_polish<F>(start: f64, lo: f64, hi: f64, mut h_and_slope: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let mut x = start;
    for _ in 0..30 {
        let (y, dy) = h_and_slope(x)?;
        if y == 0.0 {
            return Ok(x);
        }
        if dy == 0.0 || !dy.is_finite() {
            return Ok(start);
        }
        let next = x - y / dy;
        if !(lo..=hi).contains(&next) {
            return Ok(start);
        }
        if math::abs(next - x) <= 4.0 * f64::EPSILON * math::abs(x) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Solves `a·x = b` by Gaussian elimination with partial pivoting; `None`
/// when a pivot falls below `1e-14` of the largest row entry.
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let (piv, _) =
            (col..n)
                .map(|r| (r, math::abs(a[r][col])))
                .fold(
                    (col, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        let scale = a[piv].iter().fold(0.0f64, |m, v| m.max(math::abs(*v)));
        if scale == 0.0 || math::abs(a[piv][col]) < 1e-14 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = alloc::vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}
