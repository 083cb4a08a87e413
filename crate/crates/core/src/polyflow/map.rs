use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::coeff::Coeff;
use super::poly::{Polynomial, TruncateMode, DEFAULT_TERM_CAP};
use crate::{Error, Result};

/// Round-off below zero that is silently clamped; anything more negative is
/// reported as a derivation bug.
pub const NEGATIVE_CLAMP: f64 = 1e-15;

/// Failure probabilities keyed by location name.
#[derive(Clone, Debug, PartialEq)]
pub struct FailureVector {
    names: Vec<String>,
    values: Vec<f64>,
}

impl FailureVector {
    pub fn new<S: AsRef<str>>(names: &[S], values: Vec<f64>) -> Result<Self> {
        if names.len() != values.len() {
            return Err(Error::VariableMismatch(alloc::format!(
                "{} names for {} values",
                names.len(),
                values.len()
            )));
        }
        Ok(FailureVector {
            names: names.iter().map(|n| n.as_ref().to_string()).collect(),
            values,
        })
    }

    pub fn zeros<S: AsRef<str>>(names: &[S]) -> Self {
        FailureVector {
            names: names.iter().map(|n| n.as_ref().to_string()).collect(),
            values: vec![0.0; names.len()],
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i])
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        match self.names.iter().position(|n| n == name) {
            Some(i) => {
                self.values[i] = value;
                Ok(())
            }
            None => Err(Error::UnknownVariable(name.to_string())),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when every entry is a probability.
    pub fn is_probability(&self) -> bool {
        self.values.iter().all(|v| (0.0..=1.0).contains(v))
    }

    pub fn max_entry(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Values in the order of `names`, which must all be present.
    pub fn aligned<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<f64>> {
        names
            .iter()
            .map(|n| {
                self.get(n.as_ref())
                    .ok_or_else(|| Error::UnboundVariable(n.as_ref().to_string()))
            })
            .collect()
    }
}

impl fmt::Display for FailureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (n, v)) in self.names.iter().zip(&self.values).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}={v:e}")?;
        }
        write!(f, ")")
    }
}

/// One polynomial per location type; component `i` gives the failure
/// probability of location `i` after one level of replacement.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowMap {
    vars: Vec<String>,
    components: Vec<Polynomial>,
}

impl FlowMap {
    /// Builds a map from `(location, polynomial)` pairs. Every polynomial may
    /// only depend on the map's variables; it is re-expressed over them.
    pub fn new<S: AsRef<str>>(vars: &[S], components: Vec<(String, Polynomial)>) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let mut slots: Vec<Option<Polynomial>> = vec![None; vars.len()];
        for (name, p) in components {
            let idx = vars
                .iter()
                .position(|v| *v == name)
                .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            if slots[idx].is_some() {
                return Err(Error::InvalidArgument(alloc::format!(
                    "component `{name}` given twice"
                )));
            }
            slots[idx] = Some(p.realign(&vars)?);
        }
        let components = slots
            .into_iter()
            .zip(&vars)
            .map(|(p, v)| {
                p.ok_or_else(|| Error::InvalidArgument(alloc::format!("missing component `{v}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FlowMap { vars, components })
    }

    pub fn identity<S: AsRef<str>>(vars: &[S]) -> Self {
        let components = vars
            .iter()
            .map(|v| Polynomial::variable(vars, v.as_ref()).expect("variable taken from list"))
            .collect();
        FlowMap {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            components,
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn component(&self, name: &str) -> Option<&Polynomial> {
        self.index_of(name).ok().map(|i| &self.components[i])
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn is_exact(&self) -> bool {
        self.components.iter().all(Polynomial::is_exact)
    }

    pub fn total_terms(&self) -> usize {
        self.components.iter().map(Polynomial::num_terms).sum()
    }

    /// Evaluates at a point aligned with [`Self::variables`].
    pub fn eval_slice(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.vars.len() {
            return Err(Error::VariableMismatch(alloc::format!(
                "point of dimension {} for a {}-variable map",
                x.len(),
                self.vars.len()
            )));
        }
        self.components
            .iter()
            .zip(&self.vars)
            .map(|(p, name)| clamp(name, p.eval_slice(x)))
            .collect()
    }

    /// Evaluation without the probability clamp, for solvers that step
    /// outside `[0,1]^n`.
    pub fn eval_unclamped(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.vars.len());
        self.components.iter().map(|p| p.eval_slice(x)).collect()
    }

    /// Componentwise evaluation with variables bound by name.
    pub fn eval_map(&self, x: &FailureVector) -> Result<FailureVector> {
        let point = x.aligned(&self.vars)?;
        let values = self.eval_slice(&point)?;
        Ok(FailureVector {
            names: self.vars.clone(),
            values,
        })
    }

    /// `L`-fold application on an aligned point.
    pub fn iterate_slice(&self, x: &[f64], levels: u32) -> Result<Vec<f64>> {
        let mut cur = x.to_vec();
        for _ in 0..levels {
            cur = self.eval_slice(&cur)?;
        }
        Ok(cur)
    }

    pub fn iterate(&self, x: &FailureVector, levels: u32) -> Result<FailureVector> {
        let point = x.aligned(&self.vars)?;
        let values = self.iterate_slice(&point, levels)?;
        Ok(FailureVector {
            names: self.vars.clone(),
            values,
        })
    }

    /// `outer ∘ inner` by symbolic substitution.
    pub fn compose(&self, inner: &FlowMap) -> Result<FlowMap> {
        self.compose_capped(inner, DEFAULT_TERM_CAP)
    }

    pub fn compose_capped(&self, inner: &FlowMap, cap: usize) -> Result<FlowMap> {
        if self.vars != inner.vars {
            return Err(Error::VariableMismatch(alloc::format!(
                "{:?} vs {:?}",
                self.vars,
                inner.vars
            )));
        }
        let mut total = 0usize;
        let mut components = Vec::with_capacity(self.components.len());
        for p in &self.components {
            let c = p.substitute(&inner.components, cap)?;
            total += c.num_terms();
            if total > cap {
                return Err(Error::CompositionOverflow { cap });
            }
            components.push(c);
        }
        Ok(FlowMap {
            vars: self.vars.clone(),
            components,
        })
    }

    /// The `L`-fold symbolic composition.
    pub fn power(&self, levels: u32, cap: usize) -> Result<FlowMap> {
        let mut acc = FlowMap::identity(&self.vars);
        for _ in 0..levels {
            acc = self.compose_capped(&acc, cap)?;
        }
        Ok(acc)
    }

    pub fn truncate(&self, max_total_degree: u32, mode: TruncateMode) -> FlowMap {
        FlowMap {
            vars: self.vars.clone(),
            components: self
                .components
                .iter()
                .map(|p| p.truncate(max_total_degree, mode))
                .collect(),
        }
    }

    /// Precomputes the symbolic partial derivatives.
    pub fn jacobian_map(&self) -> JacobianMap {
        let n = self.vars.len();
        let entries = self
            .components
            .iter()
            .map(|p| (0..n).map(|j| p.derivative(j)).collect())
            .collect();
        JacobianMap { entries }
    }

    /// `∂Γ_i/∂γ_j` at `x`; rows follow components, columns variables.
    pub fn jacobian(&self, x: &FailureVector) -> Result<Vec<Vec<f64>>> {
        let point = x.aligned(&self.vars)?;
        Ok(self.jacobian_map().eval(&point))
    }

    /// Checks the probability-range invariant at `x`: every component must
    /// land in `[0,1]`.
    pub fn check_unit_range(&self, x: &[f64]) -> Result<()> {
        for (v, name) in self.eval_slice(x)?.into_iter().zip(&self.vars) {
            if !(0.0..=1.0 + 1e-12).contains(&v) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "component `{name}` evaluates to {v} at {x:?}, outside [0,1]"
                )));
            }
        }
        Ok(())
    }

    /// Re-expresses the map over a permuted variable list.
    pub fn reorder<S: AsRef<str>>(&self, vars: &[S]) -> Result<FlowMap> {
        let pairs = self
            .vars
            .iter()
            .cloned()
            .zip(self.components.iter().cloned())
            .collect();
        if vars.len() != self.vars.len() {
            return Err(Error::VariableMismatch(
                "reorder must keep every variable".into(),
            ));
        }
        FlowMap::new(vars, pairs)
    }

    /// A constant map scaled by `c`, used for algebraic tests.
    pub fn scale(&self, c: &Coeff) -> FlowMap {
        FlowMap {
            vars: self.vars.clone(),
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }
}

fn clamp(name: &str, v: f64) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else if v > -NEGATIVE_CLAMP {
        Ok(0.0)
    } else if v.is_nan() {
        Err(Error::InvalidArgument(alloc::format!(
            "component `{name}` is NaN"
        )))
    } else {
        Err(Error::NegativeProbability {
            location: name.to_string(),
            value: v,
        })
    }
}

impl fmt::Display for FlowMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, p) in self.vars.iter().zip(&self.components) {
            writeln!(f, "Γ_{name} = {p}")?;
        }
        Ok(())
    }
}

/// Symbolic Jacobian of a flow map.
#[derive(Clone, Debug)]
pub struct JacobianMap {
    entries: Vec<Vec<Polynomial>>,
}

impl JacobianMap {
    pub fn eval(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|p| p.eval_slice(x)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn iterate_zero_levels_is_identity() {
        let f = models::uv_example();
        let x = FailureVector::new(&["u", "v"], vec![0.1, 0.2]).unwrap();
        assert_eq!(f.iterate(&x, 0).unwrap(), x);
    }

    #[test]
    fn identity_composition() {
        let f = models::uv_example();
        let id = FlowMap::identity(f.variables());
        assert_eq!(id.compose(&f).unwrap(), f);
        assert_eq!(f.compose(&id).unwrap(), f);
    }

    #[test]
    fn missing_binding_is_an_error() {
        let f = models::uv_example();
        let x = FailureVector::new(&["u"], vec![0.1]).unwrap();
        assert_eq!(f.eval_map(&x), Err(Error::UnboundVariable("v".into())));
    }

    #[test]
    fn negative_values_are_clamped_or_rejected() {
        assert_eq!(clamp("x", -5e-16), Ok(0.0));
        assert!(matches!(
            clamp("x", -1e-9),
            Err(Error::NegativeProbability { .. })
        ));
    }

    #[test]
    fn derivative_of_one_parameter_map() {
        let f = models::one_parameter(7, 1);
        let j = f
            .jacobian(&FailureVector::new(&["g"], vec![0.3]).unwrap())
            .unwrap();
        assert!((j[0][0] - 2.0 * 7.0 * 0.3).abs() < 1e-15);
    }

    #[test]
    fn components_must_use_map_variables() {
        let p = Polynomial::variable(&["x"], "x").unwrap();
        assert_eq!(
            FlowMap::new(&["g"], vec![("g".into(), p)]),
            Err(Error::UnknownVariable("x".into()))
        );
    }
}
