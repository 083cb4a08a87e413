use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::circuit::{QCircuit, QuantumLocationKind, KIND_NAMES};
use super::frame::{execute, FaultSource, RetryPolicy};
use crate::analysis::TripCurve;
use crate::polyflow::FailureVector;
use crate::settings::Setting;
use crate::{math, Error, Result};

/// Trials per RNG stream. Chunk `k` always covers the same trials, so
/// counts do not depend on how chunks are spread over workers.
pub const CHUNK_TRIALS: u64 = 65_536;

/// Distribution of the Pauli left by a failed two-qubit gate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TwoQubitFaults {
    /// Uniform over the 15 nontrivial two-qubit Paulis.
    #[default]
    Uniform15,
    /// A uniform nontrivial Pauli on one of the two qubits.
    OneSided,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct McConfig {
    pub retry: RetryPolicy,
    pub two_qubit: TwoQubitFaults,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub point: FailureVector,
    pub trials: u64,
    pub failures: u64,
    pub p_hat: f64,
    pub stderr: f64,
}

impl McEstimate {
    pub fn from_counts(point: FailureVector, trials: u64, failures: u64) -> Self {
        let p = if trials == 0 {
            0.0
        } else {
            failures as f64 / trials as f64
        };
        let stderr = if trials == 0 {
            0.0
        } else {
            math::sqrt(p * (1.0 - p) / trials as f64)
        };
        McEstimate {
            point,
            trials,
            failures,
            p_hat: p,
            stderr,
        }
    }
}

/// Per-kind failure rates in [`KIND_NAMES`] order, checked to be
/// probabilities.
pub fn kind_rates(point: &FailureVector) -> Result<[f64; 5]> {
    let v = point.aligned(&KIND_NAMES)?;
    if v.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::InvalidArgument(alloc::format!(
            "rates must lie in [0,1], got {point}"
        )));
    }
    Ok([v[0], v[1], v[2], v[3], v[4]])
}

pub fn chunk_count(trials: u64) -> u64 {
    trials.div_ceil(CHUNK_TRIALS)
}

pub fn chunk_trials(trials: u64, chunk: u64) -> u64 {
    (trials - chunk * CHUNK_TRIALS).min(CHUNK_TRIALS)
}

fn pauli(rng: &mut ChaCha8Rng, kind: QuantumLocationKind, cfg: &McConfig) -> u8 {
    match (kind, cfg.two_qubit) {
        (QuantumLocationKind::Two, TwoQubitFaults::Uniform15) => rng.random_range(1..=15),
        (QuantumLocationKind::Two, TwoQubitFaults::OneSided) => {
            let p = rng.random_range(1..=3u8);
            if rng.random::<bool>() {
                p
            } else {
                p << 2
            }
        }
        _ => rng.random_range(1..=3),
    }
}

struct Sampled<'a> {
    rng: &'a mut ChaCha8Rng,
    rates: &'a [f64; 5],
    cfg: &'a McConfig,
    /// Faulty base ops of this trial, ascending.
    ops: &'a [u32],
    next: usize,
}

impl FaultSource for Sampled<'_> {
    fn base(&mut self, op: usize, kind: QuantumLocationKind) -> Option<u8> {
        if self.ops.get(self.next) == Some(&(op as u32)) {
            self.next += 1;
            Some(pauli(self.rng, kind, self.cfg))
        } else {
            None
        }
    }

    fn fresh(&mut self, kind: QuantumLocationKind) -> Option<u8> {
        let p = self.rates[kind.index()];
        (p > 0.0 && self.rng.random::<f64>() < p).then(|| pauli(self.rng, kind, self.cfg))
    }
}

/// Failures among `trials` trials of chunk `chunk` (at most
/// [`CHUNK_TRIALS`]). Base-schedule faults are placed by geometric skips
/// over the chunk's locations of each kind, so only faulty trials are
/// simulated.
pub fn run_chunk(
    c: &QCircuit,
    rates: &[f64; 5],
    trials: u64,
    seed: u64,
    chunk: u64,
    cfg: &McConfig,
) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut events: Vec<(u64, u32)> = Vec::new();
    for kind in QuantumLocationKind::ALL {
        let p = rates[kind.index()];
        let locs = c.locations(kind);
        let n = locs.len() as u64;
        if p <= 0.0 || n == 0 {
            continue;
        }
        let total = trials * n;
        if p >= 1.0 {
            events.extend((0..total).map(|s| (s / n, locs[(s % n) as usize] as u32)));
            continue;
        }
        let lq = math::log1p(-p);
        let mut pos = 0u64;
        loop {
            let u: f64 = rng.random();
            let skip = math::floor(math::log1p(-u) / lq);
            if skip >= (total - pos) as f64 {
                break;
            }
            pos += skip as u64;
            events.push((pos / n, locs[(pos % n) as usize] as u32));
            pos += 1;
            if pos >= total {
                break;
            }
        }
    }
    events.sort_unstable();
    let mut failures = 0;
    let mut ops: Vec<u32> = Vec::new();
    let mut i = 0;
    while i < events.len() {
        let trial = events[i].0;
        ops.clear();
        while i < events.len() && events[i].0 == trial {
            ops.push(events[i].1);
            i += 1;
        }
        let mut src = Sampled {
            rng: &mut rng,
            rates,
            cfg,
            ops: &ops,
            next: 0,
        };
        if execute(c, &mut src, cfg.retry).failed {
            failures += 1;
        }
    }
    failures
}

/// Serial Monte-Carlo estimate of the failure probability at `point`.
pub fn mc_failure(
    c: &QCircuit,
    point: &FailureVector,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    mc_failure_with(c, point, trials, seed, &McConfig::default())
}

pub fn mc_failure_with(
    c: &QCircuit,
    point: &FailureVector,
    trials: u64,
    seed: u64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is needed".into(),
        ));
    }
    let rates = kind_rates(point)?;
    let failures = (0..chunk_count(trials))
        .map(|k| run_chunk(c, &rates, chunk_trials(trials, k), seed, k, cfg))
        .sum();
    Ok(McEstimate::from_counts(point.clone(), trials, failures))
}

/// SplitMix64 finaliser, used to give each grid point its own seed.
pub fn point_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Level-1 reliability curve estimated by simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct McTrip {
    pub kind: QuantumLocationKind,
    pub setting: String,
    pub gammas: Vec<f64>,
    pub estimates: Vec<McEstimate>,
}

impl McTrip {
    pub fn curve(&self) -> Result<TripCurve> {
        let samples = self
            .gammas
            .iter()
            .zip(&self.estimates)
            .map(|(g, e)| (*g, e.p_hat))
            .collect();
        TripCurve::from_samples(self.kind.symbol(), 1, &self.setting, samples)
    }
}

/// The grid point `γ` of an MC TRIP as a failure vector.
pub fn setting_point(g: &Setting, gamma: f64) -> Result<FailureVector> {
    Ok(g.aligned_to(&KIND_NAMES)?.apply(gamma))
}

/// Serial MC TRIP; point `i` uses seed `point_seed(seed, i)`.
pub fn mc_trip(
    c: &QCircuit,
    kind: QuantumLocationKind,
    g: &Setting,
    grid: &[f64],
    trials: u64,
    seed: u64,
    cfg: &McConfig,
) -> Result<McTrip> {
    let mut estimates = Vec::with_capacity(grid.len());
    for (i, &gamma) in grid.iter().enumerate() {
        let point = setting_point(g, gamma)?;
        estimates.push(mc_failure_with(
            c,
            &point,
            trials,
            point_seed(seed, i as u64),
            cfg,
        )?);
    }
    Ok(McTrip {
        kind,
        setting: g.name().into(),
        gammas: grid.to_vec(),
        estimates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steane::build_exrec;

    fn vector(rates: [f64; 5]) -> FailureVector {
        FailureVector::new(&KIND_NAMES, rates.to_vec()).unwrap()
    }

    #[test]
    fn zero_noise_never_fails() {
        for k in QuantumLocationKind::ALL {
            let c = build_exrec(k);
            let e = mc_failure(&c, &vector([0.0; 5]), 100_000, 1).unwrap();
            assert_eq!(e.failures, 0);
            assert_eq!(e.p_hat, 0.0);
        }
    }

    #[test]
    fn same_seed_same_count() {
        let c = build_exrec(QuantumLocationKind::Two);
        let p = vector([1e-3, 1e-3, 1e-4, 1e-3, 1e-3]);
        let a = mc_failure(&c, &p, 200_000, 42).unwrap();
        let b = mc_failure(&c, &p, 200_000, 42).unwrap();
        assert_eq!(a, b);
        let chunks: u64 = (0..chunk_count(200_000))
            .rev()
            .map(|k| {
                run_chunk(
                    &c,
                    &kind_rates(&p).unwrap(),
                    chunk_trials(200_000, k),
                    42,
                    k,
                    &McConfig::default(),
                )
            })
            .sum();
        assert_eq!(chunks, a.failures);
    }

    #[test]
    fn certain_failure_everywhere_is_handled() {
        let c = build_exrec(QuantumLocationKind::Wait);
        let e = mc_failure(&c, &vector([1.0; 5]), 100, 3).unwrap();
        assert!(e.p_hat > 0.0 && e.p_hat <= 1.0);
    }

    #[test]
    fn skip_sampling_hits_the_rate() {
        // one kind only, single trial stream: count faulty locations
        let c = build_exrec(QuantumLocationKind::Wait);
        let n = c.locations(QuantumLocationKind::Wait).len() as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p: f64 = 0.01;
        let lq = math::log1p(-p);
        let total = (100_000.0 * n) as u64;
        let (mut pos, mut hits) = (0u64, 0u64);
        loop {
            let u: f64 = rng.random();
            let skip = math::floor(math::log1p(-u) / lq);
            if skip >= (total - pos) as f64 {
                break;
            }
            pos += skip as u64 + 1;
            hits += 1;
        }
        let expect = total as f64 * p;
        assert!(
            (hits as f64 - expect).abs() < 5.0 * math::sqrt(expect),
            "{hits} vs {expect}"
        );
    }

    #[test]
    fn stderr_formula() {
        let e = McEstimate::from_counts(vector([0.0; 5]), 100, 25);
        assert_eq!(e.p_hat, 0.25);
        assert!((e.stderr - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
    }
}
