use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{math, Error};

/// Relative tolerance used when comparing real coefficients.
pub const REAL_REL_TOL: f64 = 1e-12;

/// A polynomial coefficient.
///
/// Coefficients obtained by counting fault patterns are exact rationals;
/// coefficients loaded from decimal text or produced by fitting are doubles.
/// Mixing the two promotes to a double.
#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Exact(BigRational),
    Real(f64),
}

impl Coeff {
    pub fn int(n: i64) -> Self {
        Coeff::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Coeff::Exact(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Exact(r) => r.is_zero(),
            Coeff::Real(x) => *x == 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coeff::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Coeff::Exact(r) => Some(r),
            Coeff::Real(_) => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Coeff::Exact(r) => r.is_positive(),
            Coeff::Real(x) => *x > 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coeff::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Coeff::Real(x) => *x,
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a + b),
            _ => Coeff::Real(self.to_f64() + other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a * b),
            _ => Coeff::Real(self.to_f64() * other.to_f64()),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Exact(a) => Coeff::Exact(-a),
            Coeff::Real(x) => Coeff::Real(-x),
        }
    }

    /// Exact equality for rationals, relative [`REAL_REL_TOL`] otherwise.
    pub fn approx_eq(&self, other: &Coeff) -> bool {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                let scale = math::abs(a).max(math::abs(b));
                math::abs(a - b) <= REAL_REL_TOL * scale
            }
        }
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::int(n)
    }
}

impl From<BigRational> for Coeff {
    fn from(r: BigRational) -> Self {
        Coeff::Exact(r)
    }
}

impl From<f64> for Coeff {
    fn from(x: f64) -> Self {
        Coeff::Real(x)
    }
}

/// Integers and `p/q` print exactly; reals print in Rust's shortest
/// round-trip form, always with a `.` or exponent so they parse back as reals.
impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Coeff::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Coeff::Real(x) => write!(f, "{x:?}"),
        }
    }
}

impl FromStr for Coeff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let bad = || Error::InvalidCoefficient(t.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        if t.contains(['.', 'e', 'E']) {
            let x: f64 = t.parse().map_err(|_| bad())?;
            if !x.is_finite() {
                return Err(bad());
            }
            return Ok(Coeff::Real(x));
        }
        let parse_int = |part: &str| -> Result<BigInt, Error> {
            let part = part.trim();
            let digits = part.strip_prefix(['-', '+']).unwrap_or(part);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            part.parse::<BigInt>().map_err(|_| bad())
        };
        match t.split_once('/') {
            Some((p, q)) => {
                let (p, q) = (parse_int(p)?, parse_int(q)?);
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Coeff::Exact(BigRational::new(p, q)))
            }
            None => Ok(Coeff::Exact(BigRational::from_integer(parse_int(t)?))),
        }
    }
}
