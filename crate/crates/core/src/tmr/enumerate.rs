use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::circuit::{build_replacement, ClassicalCircuit, LocationKind};
use crate::polyflow::{Coeff, FlowMap, Polynomial, DEFAULT_TERM_CAP};
use crate::{Error, Result};

/// Largest number of fallible locations enumerated exhaustively.
pub const ENUMERATION_CAP: usize = 24;

/// Variable order of classical flow maps.
pub const VARIABLES: [&str; 2] = ["w", "v"];

/// Which logical inputs a pattern must survive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputDomain {
    /// Every input bundle carries the same logical bit, both values tried.
    Replicated,
    /// Every combination of logical input bits.
    AllCodewords,
}

/// Failing and succeeding pattern counts indexed by (failed wires, failed
/// voters).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultCensus {
    pub wires: usize,
    pub voters: usize,
    pub failing: Vec<Vec<u64>>,
    pub succeeding: Vec<Vec<u64>>,
}

impl FaultCensus {
    fn polynomial(&self, counts: &[Vec<u64>]) -> Polynomial {
        let vars = VARIABLES;
        let w = Polynomial::variable(&vars, "w").expect("w");
        let v = Polynomial::variable(&vars, "v").expect("v");
        let one = Polynomial::constant(&vars, Coeff::int(1));
        let qw = one.sub(&w).expect("same variables");
        let qv = one.sub(&v).expect("same variables");
        let pow =
            |p: &Polynomial, k: usize| p.pow(k as u32, DEFAULT_TERM_CAP).expect("small power");
        let mut acc = Polynomial::zero(&vars);
        for (b, row) in counts.iter().enumerate() {
            for (a, &n) in row.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                let term = pow(&w, b)
                    .mul(&pow(&qw, self.wires - b))
                    .and_then(|t| t.mul(&pow(&v, a)))
                    .and_then(|t| t.mul(&pow(&qv, self.voters - a)))
                    .expect("small product")
                    .scale(&Coeff::int(n as i64));
                acc = acc.add(&term).expect("same variables");
            }
        }
        acc
    }

    /// Probability that the circuit fails, over `[w, v]`.
    pub fn failure_polynomial(&self) -> Polynomial {
        self.polynomial(&self.failing)
    }

    pub fn success_polynomial(&self) -> Polynomial {
        self.polynomial(&self.succeeding)
    }
}

/// Runs every fault pattern of `c` and tallies the failing ones.
pub fn fault_census(c: &ClassicalCircuit, domain: InputDomain) -> Result<FaultCensus> {
    let fallible = c.fallible();
    if fallible.len() > ENUMERATION_CAP {
        return Err(Error::EnumerationTooLarge {
            count: fallible.len(),
            cap: ENUMERATION_CAP,
        });
    }
    let kinds: Vec<LocationKind> = fallible.iter().map(|&i| c.locations()[i].kind).collect();
    let wires = kinds.iter().filter(|&&k| k == LocationKind::Wire).count();
    let voters = kinds.len() - wires;

    let n_in = c.function().arity().0;
    let inputs: Vec<Vec<bool>> = match domain {
        InputDomain::Replicated => vec![vec![false; n_in], vec![true; n_in]],
        InputDomain::AllCodewords => (0..1u32 << n_in)
            .map(|m| (0..n_in).map(|i| m >> i & 1 == 1).collect())
            .collect(),
    };
    let expected: Vec<Vec<bool>> = inputs.iter().map(|x| c.function().apply(x)).collect();

    let mut failing = vec![vec![0u64; voters + 1]; wires + 1];
    let mut succeeding = failing.clone();
    let mut failed = vec![false; c.locations().len()];
    for pattern in 0u64..(1u64 << fallible.len()) {
        let (mut b, mut a) = (0, 0);
        for (bit, (&loc, &kind)) in fallible.iter().zip(&kinds).enumerate() {
            let on = pattern >> bit & 1 == 1;
            failed[loc] = on;
            if on {
                if kind == LocationKind::Wire {
                    b += 1;
                } else {
                    a += 1;
                }
            }
        }
        let fails = inputs
            .iter()
            .zip(&expected)
            .any(|(x, want)| c.run(x, &failed) != *want);
        if fails {
            failing[b][a] += 1;
        } else {
            succeeding[b][a] += 1;
        }
    }
    Ok(FaultCensus {
        wires,
        voters,
        failing,
        succeeding,
    })
}

/// Failure probability of `c` as an exact polynomial in `w` and `v`.
pub fn enumerate_flow_polynomial(c: &ClassicalCircuit, domain: InputDomain) -> Result<Polynomial> {
    Ok(fault_census(c, domain)?.failure_polynomial())
}

/// Level-1 error-correction failure, `3v²(1−v) + v³`.
pub fn ec_failure() -> Polynomial {
    Polynomial::from_terms(
        &VARIABLES,
        [(vec![0, 2], Coeff::int(3)), (vec![0, 3], Coeff::int(-2))],
    )
    .expect("two terms")
}

/// Derives the voter map from the wire map by replacing the wire rate with
/// the voter rate and the voter rate with the error-correction failure
/// probability.
pub fn voter_map_by_substitution(wire_poly: &Polynomial) -> Result<Polynomial> {
    let p = wire_poly.realign(&VARIABLES)?;
    let v = Polynomial::variable(&VARIABLES, "v")?;
    p.substitute(&[v, ec_failure()], DEFAULT_TERM_CAP)
}

/// The exact level-1 flow map over `[w, v]`, with the voter component
/// derived by substitution and cross-checked against direct enumeration.
pub fn tmr_flow_map() -> Result<FlowMap> {
    let wire = enumerate_flow_polynomial(
        &build_replacement(LocationKind::Wire),
        InputDomain::Replicated,
    )?;
    let voter = voter_map_by_substitution(&wire)?;
    let direct = enumerate_flow_polynomial(
        &build_replacement(LocationKind::Voter),
        InputDomain::Replicated,
    )?;
    if direct != voter {
        return Err(Error::DerivationInconsistency(alloc::format!(
            "voter map by substitution `{voter}` differs from enumeration `{direct}`"
        )));
    }
    FlowMap::new(
        &VARIABLES,
        vec![("w".to_string(), wire), ("v".to_string(), voter)],
    )
}
