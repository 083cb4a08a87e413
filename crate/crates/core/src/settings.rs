//! Linear one-parameter settings `γ ↦ (m₁γ, …, mₙγ)`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::polyflow::FailureVector;
use crate::{Error, Result};

/// Name of the wait location, which the Steane setting slows down.
pub const WAIT: &str = "w";

/// Multiplier applied to the wait location by [`Setting::steane`].
pub const STEANE_WAIT_FACTOR: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct Setting {
    name: String,
    vars: Vec<String>,
    multipliers: Vec<f64>,
}

impl Setting {
    /// Every location fails at rate `γ`.
    pub fn diagonal<S: AsRef<str>>(vars: &[S]) -> Self {
        Setting {
            name: "diagonal".into(),
            vars: owned(vars),
            multipliers: alloc::vec![1.0; vars.len()],
        }
    }

    /// Rate `γ` everywhere except the wait location, which gets `γ/10`.
    pub fn steane<S: AsRef<str>>(vars: &[S]) -> Result<Self> {
        let vars = owned(vars);
        if !vars.iter().any(|v| v == WAIT) {
            return Err(Error::Setting(alloc::format!(
                "the steane setting needs a wait location `{WAIT}`, map has {vars:?}"
            )));
        }
        let multipliers = vars
            .iter()
            .map(|v| if v == WAIT { STEANE_WAIT_FACTOR } else { 1.0 })
            .collect();
        Ok(Setting {
            name: "steane".into(),
            vars,
            multipliers,
        })
    }

    /// Rate `γ` on one location, zero on all others.
    pub fn axis<S: AsRef<str>>(vars: &[S], location: &str) -> Result<Self> {
        let vars = owned(vars);
        if !vars.iter().any(|v| v == location) {
            return Err(Error::Setting(alloc::format!(
                "axis location `{location}` not among {vars:?}"
            )));
        }
        let multipliers = vars
            .iter()
            .map(|v| if v == location { 1.0 } else { 0.0 })
            .collect();
        Ok(Setting {
            name: alloc::format!("axis:{location}"),
            vars,
            multipliers,
        })
    }

    /// Explicit per-location multipliers. Every map variable must be listed
    /// and no others.
    pub fn custom<S: AsRef<str>>(name: &str, vars: &[S], table: &[(String, f64)]) -> Result<Self> {
        let vars = owned(vars);
        for (loc, m) in table {
            if !vars.contains(loc) {
                return Err(Error::Setting(alloc::format!("unknown location `{loc}`")));
            }
            if !(m.is_finite() && *m >= 0.0) {
                return Err(Error::Setting(alloc::format!(
                    "multiplier for `{loc}` must be finite and non-negative, got {m}"
                )));
            }
        }
        let multipliers = vars
            .iter()
            .map(|v| {
                let hits: Vec<f64> = table
                    .iter()
                    .filter(|(l, _)| l == v)
                    .map(|(_, m)| *m)
                    .collect();
                match hits.as_slice() {
                    [m] => Ok(*m),
                    [] => Err(Error::Setting(alloc::format!("no multiplier for `{v}`"))),
                    _ => Err(Error::Setting(alloc::format!("`{v}` listed twice"))),
                }
            })
            .collect::<Result<_>>()?;
        Ok(Setting {
            name: name.to_string(),
            vars,
            multipliers,
        })
    }

    /// Resolves `diagonal`, `steane` or `axis:<location>` against a variable
    /// list.
    pub fn by_name<S: AsRef<str>>(spec: &str, vars: &[S]) -> Result<Self> {
        match spec {
            "diagonal" => Ok(Setting::diagonal(vars)),
            "steane" => Setting::steane(vars),
            _ => match spec.strip_prefix("axis:") {
                Some(loc) => Setting::axis(vars, loc),
                None => Err(Error::Setting(alloc::format!(
                    "unknown setting `{spec}` (expected diagonal, steane or axis:<location>)"
                ))),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn multipliers(&self) -> &[f64] {
        &self.multipliers
    }

    pub fn multiplier(&self, location: &str) -> Option<f64> {
        self.vars
            .iter()
            .position(|v| v == location)
            .map(|i| self.multipliers[i])
    }

    pub fn apply_slice(&self, gamma: f64) -> Vec<f64> {
        self.multipliers.iter().map(|m| m * gamma).collect()
    }

    pub fn apply(&self, gamma: f64) -> FailureVector {
        FailureVector::new(&self.vars, self.apply_slice(gamma)).expect("aligned lengths")
    }

    /// The same setting over a permutation or superset-free reordering of
    /// its variables.
    pub fn aligned_to<S: AsRef<str>>(&self, vars: &[S]) -> Result<Setting> {
        let table: Vec<(String, f64)> = self
            .vars
            .iter()
            .cloned()
            .zip(self.multipliers.iter().copied())
            .collect();
        let mut s = Setting::custom(&self.name, vars, &table)?;
        if s.vars.len() != self.vars.len() {
            return Err(Error::Setting(
                "setting and map cover different locations".into(),
            ));
        }
        s.name = self.name.clone();
        Ok(s)
    }
}

fn owned<S: AsRef<str>>(vars: &[S]) -> Vec<String> {
    vars.iter().map(|v| v.as_ref().to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: [&str; 5] = ["1", "2", "w", "1m", "p"];

    #[test]
    fn diagonal_sets_every_location() {
        let s = Setting::diagonal(&["w", "v"]);
        assert_eq!(s.apply_slice(0.1), [0.1, 0.1]);
        assert_eq!(s.apply_slice(0.0), [0.0, 0.0]);
        assert_eq!(s.apply_slice(0.246), [0.246, 0.246]);
    }

    #[test]
    fn steane_slows_the_wait() {
        let s = Setting::steane(&Q).unwrap();
        let x = s.apply(3.6e-4);
        assert!((x.get("w").unwrap() - 3.6e-5).abs() < 1e-20);
        assert_eq!(x.get("2"), Some(3.6e-4));
        assert_eq!(s.apply(1.0).get("w"), Some(0.1));
        assert!(s.apply_slice(0.0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn steane_without_wait_is_rejected() {
        assert!(matches!(
            Setting::steane(&["u", "v"]),
            Err(Error::Setting(_))
        ));
    }

    #[test]
    fn axis_isolates_one_location() {
        let s = Setting::axis(&Q, "w").unwrap();
        assert_eq!(s.apply_slice(1e-4), [0.0, 0.0, 1e-4, 0.0, 0.0]);
        assert_eq!(
            Setting::axis(&["g"], "g").unwrap().multipliers(),
            Setting::diagonal(&["g"]).multipliers()
        );
        assert!(Setting::axis(&Q, "v").is_err());
    }

    #[test]
    fn custom_tables_must_cover_the_map() {
        let t = [("w".to_string(), 0.01), ("v".to_string(), 1.0)];
        let s = Setting::custom("hundredth", &["w", "v"], &t).unwrap();
        assert_eq!(s.apply_slice(1.0), [0.01, 1.0]);
        assert!(Setting::custom("x", &["w", "v", "u"], &t).is_err());
        assert!(Setting::custom(
            "x",
            &["w", "v"],
            &[("w".to_string(), -1.0), ("v".to_string(), 1.0)]
        )
        .is_err());
    }

    #[test]
    fn names_resolve() {
        assert_eq!(Setting::by_name("axis:2", &Q).unwrap().name(), "axis:2");
        assert!(Setting::by_name("bogus", &Q).is_err());
    }
}
