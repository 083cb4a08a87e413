use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::coeff::Coeff;
use crate::{math, Error, Result};

/// Dense exponent vector aligned with a polynomial's variable list.
pub type Exponents = Vec<u32>;

/// Default cap on the number of terms produced by symbolic products.
pub const DEFAULT_TERM_CAP: usize = 1_000_000;

/// A single term `coeff · Π var^exp` keyed by variable name. Zero exponents
/// are omitted.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: Coeff,
    pub exponents: BTreeMap<String, u32>,
}

/// How [`Polynomial::truncate`] treats terms above the degree cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncateMode {
    /// Discard them.
    Drop,
    /// Discard negative terms and fold each positive term onto a kept
    /// monomial dividing it, which bounds the original from above on
    /// `[0,1]^n`.
    RoundUp,
}

/// Sparse multivariate polynomial over an ordered variable list.
///
/// Terms with a zero coefficient are never stored, and every exponent vector
/// is unique. Values are immutable once built.
#[derive(Clone, Debug)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Coeff>,
    numeric: Vec<(Exponents, f64)>,
    all_exact: bool,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

fn to_strings<S: AsRef<str>>(vars: &[S]) -> Vec<String> {
    vars.iter().map(|v| v.as_ref().to_string()).collect()
}

fn check_distinct(vars: &[String]) -> Result<()> {
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return Err(Error::InvalidArgument(alloc::format!(
                "variable `{v}` listed twice"
            )));
        }
    }
    Ok(())
}

fn merge_into(terms: &mut BTreeMap<Exponents, Coeff>, exps: Exponents, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&exps) {
        Some(existing) => {
            let sum = existing.add(&c);
            if sum.is_zero() {
                terms.remove(&exps);
            } else {
                *existing = sum;
            }
        }
        None => {
            terms.insert(exps, c);
        }
    }
}

impl Polynomial {
    fn build(vars: Vec<String>, terms: BTreeMap<Exponents, Coeff>) -> Self {
        let numeric = terms.iter().map(|(e, c)| (e.clone(), c.to_f64())).collect();
        let all_exact = terms.values().all(Coeff::is_exact);
        Polynomial {
            vars,
            terms,
            numeric,
            all_exact,
        }
    }

    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        Self::build(to_strings(vars), BTreeMap::new())
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: Coeff) -> Self {
        let vars = to_strings(vars);
        let mut terms = BTreeMap::new();
        merge_into(&mut terms, vec![0; vars.len()], c);
        Self::build(vars, terms)
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn variable<S: AsRef<str>>(vars: &[S], name: &str) -> Result<Self> {
        let vars = to_strings(vars);
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, Coeff::int(1));
        Ok(Self::build(vars, terms))
    }

    /// Builds a polynomial from dense exponent vectors. Duplicate exponent
    /// vectors are merged by adding their coefficients.
    pub fn from_terms<S, I>(vars: &[S], terms: I) -> Result<Self>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (Exponents, Coeff)>,
    {
        let vars = to_strings(vars);
        check_distinct(&vars)?;
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::VariableMismatch(alloc::format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    vars.len()
                )));
            }
            merge_into(&mut map, e, c);
        }
        Ok(Self::build(vars, map))
    }

    /// Builds a polynomial from named monomials; unknown names are an error.
    pub fn from_monomials<S, I>(vars: &[S], monomials: I) -> Result<Self>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = Monomial>,
    {
        let vars = to_strings(vars);
        check_distinct(&vars)?;
        let mut map = BTreeMap::new();
        for m in monomials {
            let mut e = vec![0; vars.len()];
            for (name, &k) in &m.exponents {
                let idx = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                e[idx] += k;
            }
            merge_into(&mut map, e, m.coeff);
        }
        Ok(Self::build(vars, map))
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every coefficient is an exact rational.
    pub fn is_exact(&self) -> bool {
        self.all_exact
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Option<&Coeff> {
        self.terms.get(exps)
    }

    /// Coefficient of the monomial given as `(name, exponent)` pairs.
    pub fn coefficient_of(&self, powers: &[(&str, u32)]) -> Option<&Coeff> {
        let mut e = vec![0; self.vars.len()];
        for (name, k) in powers {
            let idx = self.vars.iter().position(|v| v == name)?;
            e[idx] += k;
        }
        self.terms.get(&e)
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms
            .iter()
            .map(|(e, c)| Monomial {
                coeff: c.clone(),
                exponents: self
                    .vars
                    .iter()
                    .zip(e)
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| (v.clone(), k))
                    .collect(),
            })
            .collect()
    }

    /// Terms ordered by ascending total degree, then descending
    /// lexicographic exponent vector.
    pub fn graded_terms(&self) -> Vec<(&Exponents, &Coeff)> {
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by(|(a, _), (b, _)| graded_cmp(a, b));
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.vars.iter().position(|v| v == var) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// True when no term has a positive exponent of `var`.
    pub fn is_independent_of(&self, var: &str) -> bool {
        self.degree_in(var) == 0
    }

    fn same_vars(&self, other: &Polynomial) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(alloc::format!(
                "{:?} vs {:?}",
                self.vars,
                other.vars
            )));
        }
        Ok(())
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable the polynomial actually depends on.
    pub fn realign<S: AsRef<str>>(&self, vars: &[S]) -> Result<Polynomial> {
        let vars = to_strings(vars);
        check_distinct(&vars)?;
        if vars == self.vars {
            return Ok(self.clone());
        }
        let mut map = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let j = vars
                    .iter()
                    .position(|v| *v == self.vars[i])
                    .ok_or_else(|| Error::UnknownVariable(self.vars[i].clone()))?;
                ne[j] = k;
            }
            merge_into(&mut map, ne, c.clone());
        }
        Ok(Self::build(vars, map))
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_vars(other)?;
        let mut map = self.terms.clone();
        for (e, c) in &other.terms {
            merge_into(&mut map, e.clone(), c.clone());
        }
        Ok(Self::build(self.vars.clone(), map))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&Coeff::int(-1))
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        let mut map = BTreeMap::new();
        for (e, t) in &self.terms {
            merge_into(&mut map, e.clone(), t.mul(c));
        }
        Self::build(self.vars.clone(), map)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.mul_capped(other, DEFAULT_TERM_CAP)
    }

    /// Product, failing with [`Error::CompositionOverflow`] if the result
    /// would hold more than `cap` terms.
    pub fn mul_capped(&self, other: &Polynomial, cap: usize) -> Result<Polynomial> {
        self.same_vars(other)?;
        let mut map: BTreeMap<Exponents, Coeff> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                merge_into(&mut map, e, ca.mul(cb));
                if map.len() > cap {
                    return Err(Error::CompositionOverflow { cap });
                }
            }
        }
        Ok(Self::build(self.vars.clone(), map))
    }

    pub fn pow(&self, k: u32, cap: usize) -> Result<Polynomial> {
        let mut acc = Polynomial::constant(&self.vars, Coeff::int(1));
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_capped(&base, cap)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_capped(&base, cap)?;
            }
        }
        Ok(acc)
    }

    /// Substitutes `replacements[i]` for variable `i`. All replacements must
    /// share one variable list, which becomes the result's.
    pub fn substitute(&self, replacements: &[Polynomial], cap: usize) -> Result<Polynomial> {
        if replacements.len() != self.vars.len() {
            return Err(Error::VariableMismatch(alloc::format!(
                "{} replacements for {} variables",
                replacements.len(),
                self.vars.len()
            )));
        }
        let target_vars: Vec<String> = match replacements.first() {
            Some(r) => r.vars.clone(),
            None => Vec::new(),
        };
        for r in replacements {
            if r.vars != target_vars {
                return Err(Error::VariableMismatch(
                    "replacement polynomials use different variable lists".into(),
                ));
            }
        }
        // powers[i][k] = replacements[i]^k, filled on demand
        let mut powers: Vec<Vec<Polynomial>> = replacements
            .iter()
            .map(|_| vec![Polynomial::constant(&target_vars, Coeff::int(1))])
            .collect();
        let mut map: BTreeMap<Exponents, Coeff> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(&target_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i]
                        .last()
                        .expect("power table starts non-empty")
                        .mul_capped(&replacements[i], cap)?;
                    powers[i].push(next);
                }
                term = term.mul_capped(&powers[i][k as usize], cap)?;
            }
            for (te, tc) in term.terms {
                merge_into(&mut map, te, tc);
            }
            if map.len() > cap {
                return Err(Error::CompositionOverflow { cap });
            }
        }
        Ok(Self::build(target_vars, map))
    }

    /// Partial derivative with respect to variable index `var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut map = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] = k - 1;
            merge_into(&mut map, ne, c.mul(&Coeff::int(i64::from(k))));
        }
        Self::build(self.vars.clone(), map)
    }

    pub fn derivative_by(&self, var: &str) -> Result<Polynomial> {
        let idx = self
            .vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        Ok(self.derivative(idx))
    }

    /// Evaluates at a point aligned with [`Self::variables`].
    ///
    /// Exact polynomials whose term sum cancels badly in double precision
    /// are re-evaluated in rational arithmetic at the (exactly representable)
    /// input point and rounded once.
    pub fn eval_slice(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.vars.len());
        let mut sum = 0.0;
        let mut magnitude = 0.0;
        for (e, c) in &self.numeric {
            let mut m = *c;
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    m *= math::powi(*xi, k);
                }
            }
            sum += m;
            magnitude += math::abs(m);
        }
        let rounding = 4.0 * f64::EPSILON * magnitude;
        if self.all_exact && rounding > 1e-13 * math::abs(sum) && x.iter().all(|v| v.is_finite()) {
            let point: Option<Vec<BigRational>> =
                x.iter().map(|&v| BigRational::from_float(v)).collect();
            if let Some(exact) = point.and_then(|p| self.eval_exact(&p)) {
                if let Some(v) = exact.to_f64() {
                    return v;
                }
            }
        }
        sum
    }

    /// Evaluates with variables bound by name.
    pub fn eval_named(&self, names: &[String], values: &[f64]) -> Result<f64> {
        let mut x = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match names.iter().position(|n| n == v) {
                Some(i) => x.push(values[i]),
                None if self.is_independent_of(v) => x.push(0.0),
                None => return Err(Error::UnboundVariable(v.clone())),
            }
        }
        Ok(self.eval_slice(&x))
    }

    /// Exact evaluation; `None` if any coefficient is a double.
    pub fn eval_exact(&self, x: &[BigRational]) -> Option<BigRational> {
        if !self.all_exact {
            return None;
        }
        let max_deg: Vec<u32> = (0..self.vars.len())
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<BigRational>> = x
            .iter()
            .zip(&max_deg)
            .map(|(xi, &d)| {
                let mut p = Vec::with_capacity(d as usize + 1);
                p.push(BigRational::one());
                for k in 1..=d as usize {
                    let next = &p[k - 1] * xi;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut sum = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = c.as_exact()?.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m *= &powers[i][k as usize];
                }
            }
            sum += m;
        }
        Some(sum)
    }

    /// Keeps terms of total degree at most `max_total_degree`.
    pub fn truncate(&self, max_total_degree: u32, mode: TruncateMode) -> Polynomial {
        let mut map = BTreeMap::new();
        let mut folded = Vec::new();
        for (e, c) in &self.terms {
            let deg: u32 = e.iter().sum();
            if deg <= max_total_degree {
                merge_into(&mut map, e.clone(), c.clone());
            } else if mode == TruncateMode::RoundUp && c.is_positive() {
                folded.push((reduce_to_degree(e, max_total_degree), c.clone()));
            }
        }
        for (e, c) in folded {
            merge_into(&mut map, e, c);
        }
        Self::build(self.vars.clone(), map)
    }

    /// Comparison with exact equality for rational coefficients and a
    /// relative tolerance for doubles.
    pub fn approx_eq(&self, other: &Polynomial) -> bool {
        if self.vars != other.vars || self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms
            .iter()
            .zip(&other.terms)
            .all(|((ea, ca), (eb, cb))| ea == eb && ca.approx_eq(cb))
    }
}

/// Lowers exponents, last variable first, until the total degree is `target`.
/// The result divides the input monomial.
fn reduce_to_degree(e: &[u32], target: u32) -> Exponents {
    let mut out = e.to_vec();
    let mut excess = e.iter().sum::<u32>().saturating_sub(target);
    for k in out.iter_mut().rev() {
        let take = (*k).min(excess);
        *k -= take;
        excess -= take;
        if excess == 0 {
            break;
        }
    }
    out
}

pub(crate) fn graded_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    da.cmp(&db).then_with(|| b.cmp(a))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.graded_terms().into_iter().enumerate() {
            let text = alloc::format!("{c}");
            let (sign, body) = match text.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", text),
            };
            if n == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let is_unit = body == "1";
            let mut wrote = false;
            if !is_unit || e.iter().all(|&k| k == 0) {
                write!(f, "{body}")?;
                wrote = true;
            }
            for (v, &k) in self.vars.iter().zip(e.iter()) {
                if k == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                if k == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{k}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn wv() -> [&'static str; 2] {
        ["w", "v"]
    }

    fn eq10() -> Polynomial {
        // (coefficient, w-exponent, v-exponent)
        let t: [(i64, u32, u32); 13] = [
            (6, 1, 1),
            (3, 0, 2),
            (3, 2, 0),
            (-2, 0, 3),
            (-18, 1, 2),
            (12, 1, 3),
            (-18, 2, 1),
            (36, 2, 2),
            (-24, 2, 3),
            (-2, 3, 0),
            (12, 3, 1),
            (-24, 3, 2),
            (16, 3, 3),
        ];
        Polynomial::from_terms(
            &wv(),
            t.iter().map(|&(c, a, b)| (vec![a, b], Coeff::int(c))),
        )
        .unwrap()
    }

    #[test]
    fn term_by_term_hand_evaluation_of_wire_map() {
        let p = eq10();
        let (w, v) = (0.1f64, 0.1f64);
        let hand = 6.0 * v * w + 3.0 * v * v + 3.0 * w * w - 2.0 * v * v * v - 18.0 * v * v * w
            + 12.0 * v * v * v * w
            - 18.0 * v * w * w
            + 36.0 * v * v * w * w
            - 24.0 * v * v * v * w * w
            - 2.0 * w * w * w
            + 12.0 * v * w * w * w
            - 24.0 * v * v * w * w * w
            + 16.0 * v * v * v * w * w * w;
        assert!((p.eval_slice(&[w, v]) - hand).abs() < 1e-15);
        // q = v + w - 2vw, wire map = 3q^2 - 2q^3
        let q: f64 = 0.18;
        assert!((hand - (3.0 * q * q - 2.0 * q * q * q)).abs() < 1e-15);
        assert_eq!(p.eval_slice(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn duplicate_exponents_merge() {
        let p = Polynomial::from_terms(
            &wv(),
            [
                (vec![1, 0], Coeff::int(2)),
                (vec![1, 0], Coeff::int(3)),
                (vec![0, 1], Coeff::int(1)),
                (vec![0, 1], Coeff::int(-1)),
            ],
        )
        .unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coefficient(&[1, 0]), Some(&Coeff::int(5)));
    }

    #[test]
    fn unknown_variable_in_monomial_is_rejected() {
        let m = Monomial {
            coeff: Coeff::int(1),
            exponents: [("x".to_string(), 1)].into_iter().collect(),
        };
        assert_eq!(
            Polynomial::from_monomials(&wv(), [m]),
            Err(Error::UnknownVariable("x".into()))
        );
    }

    #[test]
    fn one_parameter_square_composes_to_fourth_power() {
        let c = 12;
        let p = Polynomial::from_terms(&["g"], [(vec![2], Coeff::int(c))]).unwrap();
        let pp = p
            .substitute(core::slice::from_ref(&p), DEFAULT_TERM_CAP)
            .unwrap();
        assert_eq!(pp.num_terms(), 1);
        assert_eq!(pp.coefficient(&[4]), Some(&Coeff::int(c * c * c)));
    }

    #[test]
    fn derivative_of_square() {
        let p = Polynomial::from_terms(&["g"], [(vec![2], Coeff::int(7))]).unwrap();
        let d = p.derivative(0);
        assert_eq!(d.coefficient(&[1]), Some(&Coeff::int(14)));
        assert_eq!(d.num_terms(), 1);
    }

    #[test]
    fn truncation_drop_and_round_up() {
        let p = eq10();
        let low = p.truncate(2, TruncateMode::Drop);
        assert_eq!(low.num_terms(), 3);
        assert_eq!(low.coefficient_of(&[("w", 2)]), Some(&Coeff::int(3)));
        assert_eq!(low.coefficient_of(&[("v", 2)]), Some(&Coeff::int(3)));
        assert_eq!(
            low.coefficient_of(&[("w", 1), ("v", 1)]),
            Some(&Coeff::int(6))
        );
        assert_eq!(p.truncate(u32::MAX, TruncateMode::Drop), p);

        let up = p.truncate(2, TruncateMode::RoundUp);
        for i in 0..=10 {
            for j in 0..=10 {
                let x = [i as f64 / 10.0, j as f64 / 10.0];
                assert!(up.eval_slice(&x) >= p.eval_slice(&x) - 1e-12, "{x:?}");
            }
        }
    }

    #[test]
    fn display_is_readable() {
        let p = Polynomial::from_terms(
            &wv(),
            [
                (vec![1, 1], Coeff::int(6)),
                (vec![0, 2], Coeff::int(-1)),
                (vec![0, 0], Coeff::int(1)),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "1 + 6*w*v - v^2");
    }

    #[test]
    fn cancelling_sums_fall_back_to_exact_evaluation() {
        // (1 - x)^40 expanded has huge alternating coefficients
        let one_minus = Polynomial::from_terms(
            &["x"],
            [(vec![0], Coeff::int(1)), (vec![1], Coeff::int(-1))],
        )
        .unwrap();
        let p = one_minus.pow(40, DEFAULT_TERM_CAP).unwrap();
        let x = 0.75f64;
        let exact = 0.25f64.powi(40);
        let got = p.eval_slice(&[x]);
        assert!(
            ((got - exact) / exact).abs() < 1e-14,
            "{got:e} vs {exact:e}"
        );
    }

    #[test]
    fn composition_respects_term_cap() {
        let x = Polynomial::from_terms(
            &["a", "b"],
            [
                (vec![1, 0], Coeff::int(1)),
                (vec![0, 1], Coeff::int(1)),
                (vec![1, 1], Coeff::int(1)),
            ],
        )
        .unwrap();
        assert!(matches!(
            x.pow(20, 50),
            Err(Error::CompositionOverflow { cap: 50 })
        ));
    }
}
