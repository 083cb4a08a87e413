//! Thread-parallel versions of the grid computations.
//!
//! Work is split into independent items keyed by index and collected in
//! index order, so results never depend on the number of workers.

use flowmap_core::analysis::{
    classify, BelowOptions, LevelCurve, SliceSpec, ThresholdSetReport, TifdField, TifdPlane,
    TripCurve,
};
use flowmap_core::steane::{
    chunk_count, chunk_trials, kind_rates, point_seed, run_chunk, setting_point, McConfig,
    McEstimate, McTrip, QCircuit, QuantumLocationKind,
};
use flowmap_core::{Error, FailureVector, FlowMap, Result, Setting};
use rayon::prelude::*;
use rayon::ThreadPool;

/// Pool with `threads` workers, or one per core when `None` or 0.
pub fn pool(
    threads: Option<usize>,
) -> std::result::Result<ThreadPool, rayon::ThreadPoolBuildError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
}

pub fn threshold_set(
    pool: &ThreadPool,
    f: &FlowMap,
    slice: &SliceSpec,
    opts: &BelowOptions,
) -> Result<ThresholdSetReport> {
    slice.validate(f)?;
    let (xs, ys) = (slice.x_nodes(), slice.y_nodes());
    let n = xs.len();
    let classes = pool.install(|| {
        (0..n * ys.len())
            .into_par_iter()
            .map(|i| classify(f, &slice.point(f, xs[i % n], ys[i / n]), opts).map(|c| c.verdict))
            .collect::<Result<Vec<_>>>()
    })?;
    ThresholdSetReport::from_classes(slice.clone(), classes)
}

pub fn tifd(
    pool: &ThreadPool,
    f: &FlowMap,
    plane: (&str, &str),
    fixed: &FailureVector,
    xs: &[f64],
    ys: &[f64],
) -> Result<TifdField> {
    let p = TifdPlane::new(f, plane, fixed)?;
    let n = xs.len();
    let arrows = pool.install(|| {
        (0..n * ys.len())
            .into_par_iter()
            .map(|i| p.arrow(xs[i % n], ys[i / n]))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(TifdField {
        plane: (plane.0.to_string(), plane.1.to_string()),
        fixed_values: p.fixed_values(),
        arrows,
    })
}

pub fn trip(
    pool: &ThreadPool,
    f: &FlowMap,
    location: &str,
    g: &Setting,
    levels: &[u32],
    grid: &[f64],
) -> Result<Vec<TripCurve>> {
    let curves = levels
        .iter()
        .map(|&l| LevelCurve::new(f, location, g, l))
        .collect::<Result<Vec<_>>>()?;
    let m = grid.len();
    let values = pool.install(|| {
        (0..curves.len() * m)
            .into_par_iter()
            .map(|i| curves[i / m].value(grid[i % m]))
            .collect::<Result<Vec<_>>>()
    })?;
    levels
        .iter()
        .zip(values.chunks(m.max(1)))
        .map(|(&level, v)| {
            let samples = grid.iter().copied().zip(v.iter().copied()).collect();
            TripCurve::from_samples(location, level, g.name(), samples)
        })
        .collect()
}

/// Sums chunk counts for several points at once; `jobs` holds
/// `(rates, trials, seed)` per point.
fn mc_counts(
    pool: &ThreadPool,
    c: &QCircuit,
    jobs: &[([f64; 5], u64, u64)],
    cfg: &McConfig,
) -> Vec<u64> {
    let tasks: Vec<(usize, u64)> = jobs
        .iter()
        .enumerate()
        .flat_map(|(i, j)| (0..chunk_count(j.1)).map(move |k| (i, k)))
        .collect();
    let counts: Vec<u64> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(i, k)| {
                let (rates, trials, seed) = &jobs[i];
                run_chunk(c, rates, chunk_trials(*trials, k), *seed, k, cfg)
            })
            .collect()
    });
    let mut out = vec![0; jobs.len()];
    for (&(i, _), n) in tasks.iter().zip(counts) {
        out[i] += n;
    }
    out
}

/// Same counts as the serial estimator for any worker count.
pub fn mc_failure(
    pool: &ThreadPool,
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
    let n = mc_counts(pool, c, &[(kind_rates(point)?, trials, seed)], cfg)[0];
    Ok(McEstimate::from_counts(point.clone(), trials, n))
}

/// Parallel counterpart of the serial MC TRIP, with identical output.
#[allow(clippy::too_many_arguments)]
pub fn mc_trip(
    pool: &ThreadPool,
    c: &QCircuit,
    kind: QuantumLocationKind,
    g: &Setting,
    grid: &[f64],
    trials: u64,
    seed: u64,
    cfg: &McConfig,
) -> Result<McTrip> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is needed".into(),
        ));
    }
    let points = grid
        .iter()
        .map(|&x| setting_point(g, x))
        .collect::<Result<Vec<_>>>()?;
    let jobs = points
        .iter()
        .enumerate()
        .map(|(i, p)| Ok((kind_rates(p)?, trials, point_seed(seed, i as u64))))
        .collect::<Result<Vec<_>>>()?;
    let counts = mc_counts(pool, c, &jobs, cfg);
    Ok(McTrip {
        kind,
        setting: g.name().into(),
        gammas: grid.to_vec(),
        estimates: points
            .into_iter()
            .zip(counts)
            .map(|(p, n)| McEstimate::from_counts(p, trials, n))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use flowmap_core::analysis::{threshold_set as serial_tset, trip_curves, GridSpec};
    use flowmap_core::steane::{build_exrec, mc_trip as serial_mc_trip, KIND_NAMES};
    use flowmap_core::{models, tmr};

    #[test]
    fn grids_match_serial_for_any_worker_count() {
        let f = tmr::tmr_flow_map().unwrap();
        let slice = SliceSpec::unit_square("w", "v", 21);
        let serial = serial_tset(&f, &slice, &BelowOptions::default()).unwrap();
        let g = Setting::diagonal(f.variables());
        let grid = GridSpec::linear(0.0, 0.5, 17).points();
        let trips = trip_curves(&f, "w", &g, &[1, 3], &grid).unwrap();
        for t in [1, 3] {
            let p = pool(Some(t)).unwrap();
            assert_eq!(
                threshold_set(&p, &f, &slice, &BelowOptions::default()).unwrap(),
                serial
            );
            assert_eq!(trip(&p, &f, "w", &g, &[1, 3], &grid).unwrap(), trips);
        }
        let uv = models::uv_example();
        let zero = FailureVector::zeros::<&str>(&[]);
        let xs = [0.0, 0.1, 0.2];
        let a = tifd(&pool(Some(2)).unwrap(), &uv, ("u", "v"), &zero, &xs, &xs).unwrap();
        let b = flowmap_core::analysis::tifd_field(&uv, ("u", "v"), &zero, &xs, &xs).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mc_matches_serial() {
        let c = build_exrec(QuantumLocationKind::One);
        let g = Setting::diagonal(&KIND_NAMES);
        let grid = [1e-3, 3e-3];
        let cfg = McConfig::default();
        let serial =
            serial_mc_trip(&c, QuantumLocationKind::One, &g, &grid, 150_000, 9, &cfg).unwrap();
        for t in [1, 4] {
            let par = mc_trip(
                &pool(Some(t)).unwrap(),
                &c,
                QuantumLocationKind::One,
                &g,
                &grid,
                150_000,
                9,
                &cfg,
            )
            .unwrap();
            assert_eq!(par, serial);
        }
    }
}
