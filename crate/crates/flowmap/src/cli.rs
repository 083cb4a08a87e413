//! The `flowmap` command line.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flowmap_core::analysis::{
    asymptotic_location_threshold, axis_upper_bound, classify, conjecture_check, fixed_points,
    largest_cube, pseudothreshold, residual, trajectory, BelowOptions, FixedPointOptions, GridSpec,
    ScanSpec, SliceSpec, Verdict,
};
use flowmap_core::steane::{
    build_exrec_with, fit_pseudothreshold, leading_order, EcLayout, ExrecOptions, FitModel,
    FitPoint, McConfig, QuantumLocationKind, RetryPolicy, TwoQubitFaults, CHUNK_TRIALS, KIND_NAMES,
    MAX_RETRIES,
};
use flowmap_core::tmr::{build_replacement, tmr_flow_map, LocationKind};
use flowmap_core::{models, Coeff, FailureVector, FlowMap, Polynomial, Setting};
use rayon::ThreadPool;
use serde_json::{json, Map, Value};

use crate::provenance::Provenance;
use crate::{csv, json as doc, par, svg, CliError};

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "flowmap",
    version,
    about = "Threshold analysis of fault-tolerance flow maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
struct Common {
    /// builtin:tmr, builtin:uv-example, file:<path> or mc:steane.
    #[arg(long)]
    source: Option<String>,
    /// Location (map variable, or exRec kind for mc:steane).
    #[arg(long)]
    location: Option<String>,
    /// diagonal, steane, axis:<location> or file:<path>.
    #[arg(long)]
    setting: Option<String>,
    /// Levels as `3`, `1,2,5` or `1-5`.
    #[arg(long = "levels", visible_alias = "level")]
    levels: Option<String>,
    /// lo:hi:n or lo:hi:n:log.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write SVG charts.
    #[arg(long)]
    svg: bool,
    /// Worker threads; 0 or unset means one per core.
    #[arg(long, env = "FLOWMAP_THREADS")]
    threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct PlaneArgs {
    /// Two locations spanning the plane, as `x,y`.
    #[arg(long)]
    plane: Option<String>,
    /// Values of the other locations, as `name=value,…` (default 0).
    #[arg(long)]
    fix: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum RetryArg {
    #[default]
    Reprepare,
    PostSelect,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum TwoQubitArg {
    #[default]
    Uniform,
    OneSided,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum LayoutArg {
    #[default]
    Sequential,
    Parallel,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum FitArg {
    Quadratic,
    #[default]
    Cubic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derive or normalise a flow map (or the exRec schedules for mc:steane).
    DeriveMap(Common),
    /// Fixed points of the map in the unit cube.
    FixedPoints {
        #[command(flatten)]
        common: Common,
        /// Newton seeds per axis.
        #[arg(long)]
        seeds: Option<usize>,
    },
    /// Least nonzero solution of Γ^L(g(γ)) = γ.
    Pseudothreshold {
        #[command(flatten)]
        common: Common,
        /// Also follow the levels until the value settles.
        #[arg(long)]
        asymptotic: bool,
    },
    /// Reliability curves per level.
    Trip(Common),
    /// Displacement field Γ(γ) − γ on a plane.
    Tifd {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        plane: PlaneArgs,
    },
    /// Below/above classification on a plane grid.
    ThresholdSet {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        plane: PlaneArgs,
    },
    /// Minimum axis pseudothreshold against the largest below-threshold cube.
    AxisBound {
        #[command(flatten)]
        common: Common,
        /// Candidate cube edges between 0 and the axis bound.
        #[arg(long, default_value_t = 200)]
        cube_steps: usize,
        /// Lattice nodes per axis checked inside the cube.
        #[arg(long)]
        probe: Option<usize>,
    },
    /// Monte-Carlo TRIP of one exRec.
    McTrip {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t)]
        retry: RetryArg,
        #[arg(long, value_enum, default_value_t)]
        two_qubit: TwoQubitArg,
        #[arg(long, value_enum, default_value_t)]
        layout: LayoutArg,
        #[arg(long, value_enum, default_value_t)]
        fit: FitArg,
    },
    /// Orbit of a point under repeated application of the map.
    Trajectory {
        #[command(flatten)]
        common: Common,
        /// Start point, `name=value,…` or values in variable order.
        #[arg(long)]
        start: String,
        /// Report the first level at which an entry exceeds this.
        #[arg(long)]
        bound: Option<f64>,
    },
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit status: 0 on success, 1 on input errors, 2 when a solver finds no
/// answer.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

enum Source {
    Tmr,
    Uv,
    File(PathBuf),
    Steane,
}

fn parse_source(s: &str) -> CliResult<Source> {
    match s {
        "builtin:tmr" => Ok(Source::Tmr),
        "builtin:uv-example" => Ok(Source::Uv),
        "mc:steane" => Ok(Source::Steane),
        _ => match s.strip_prefix("file:") {
            Some(p) if !p.is_empty() => Ok(Source::File(p.into())),
            _ => Err(CliError::Input(format!(
                "unknown source `{s}` (expected builtin:tmr, builtin:uv-example, file:<path> or mc:steane)"
            ))),
        },
    }
}

fn load_map(src: &Source) -> CliResult<FlowMap> {
    match src {
        Source::Tmr => Ok(tmr_flow_map()?),
        Source::Uv => Ok(models::uv_example()),
        Source::File(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?;
            doc::map_from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
        }
        Source::Steane => Err(CliError::Input(
            "mc:steane has no polynomial map; use derive-map or mc-trip with it".into(),
        )),
    }
}

/// Maps over the five quantum location kinds get log-spaced defaults.
fn is_quantum(vars: &[String]) -> bool {
    vars.iter().all(|v| KIND_NAMES.contains(&v.as_str()))
}

fn resolve_setting(spec: Option<&str>, vars: &[String]) -> CliResult<Setting> {
    let spec = spec.unwrap_or("diagonal");
    match spec.strip_prefix("file:") {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Input(format!("cannot read {p}: {e}")))?;
            doc::setting_from_str(&text, vars).map_err(|e| CliError::Input(format!("{p}: {e}")))
        }
        None => Ok(Setting::by_name(spec, vars)?),
    }
}

fn parse_levels(s: &str) -> CliResult<Vec<u32>> {
    let bad = || CliError::Input(format!("levels `{s}` are not like 3, 1,2,5 or 1-5"));
    let range = s.split_once("..").or_else(|| s.split_once('-'));
    let levels: Vec<u32> = match range {
        Some((a, b)) => {
            let (a, b): (u32, u32) = (
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            );
            if a > b {
                return Err(bad());
            }
            (a..=b).collect()
        }
        None => s
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect::<CliResult<_>>()?,
    };
    if levels.is_empty() {
        return Err(bad());
    }
    Ok(levels)
}

fn parse_grid(s: Option<&str>, default: GridSpec) -> CliResult<GridSpec> {
    match s {
        Some(s) => s
            .parse()
            .map_err(|e: flowmap_core::Error| CliError::Input(e.to_string())),
        None => Ok(default),
    }
}

fn parse_assignments(s: &str, f: &FlowMap) -> CliResult<Vec<(String, f64)>> {
    let vars = f.variables();
    let items: Vec<&str> = s.split(',').map(str::trim).collect();
    let named = items.iter().all(|t| t.contains('='));
    let mut out = Vec::new();
    for (i, t) in items.iter().enumerate() {
        let (name, value) = if named {
            let (n, v) = t.split_once('=').expect("checked");
            (n.trim().to_string(), v)
        } else {
            let name = vars.get(i).ok_or_else(|| {
                CliError::Input(format!("`{s}` has more values than the map has variables"))
            })?;
            (name.clone(), *t)
        };
        if !vars.contains(&name) {
            return Err(CliError::Input(format!("unknown location `{name}`")));
        }
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("`{value}` is not a number")))?;
        out.push((name, v));
    }
    Ok(out)
}

fn point(f: &FlowMap, values: &[(String, f64)]) -> CliResult<FailureVector> {
    let mut p = FailureVector::zeros(f.variables());
    for (n, v) in values {
        p.set(n, *v)?;
    }
    Ok(p)
}

fn plane_of(arg: Option<&str>, f: &FlowMap) -> CliResult<(String, String)> {
    match arg {
        Some(s) => {
            let (a, b) = s
                .split_once(',')
                .ok_or_else(|| CliError::Input(format!("plane `{s}` is not `x,y`")))?;
            let (a, b) = (a.trim().to_string(), b.trim().to_string());
            for v in [&a, &b] {
                f.index_of(v)?;
            }
            if a == b {
                return Err(CliError::Input(
                    "the plane needs two different locations".into(),
                ));
            }
            Ok((a, b))
        }
        None if f.dim() >= 2 => Ok((f.variables()[0].clone(), f.variables()[1].clone())),
        None => Err(CliError::Input(
            "a plane needs a map with at least two variables".into(),
        )),
    }
}

fn scan_json(s: &ScanSpec) -> Value {
    json!({"scan_min": s.gamma_min, "scan_max": s.gamma_max, "scan_points": s.points, "rel_width": s.rel_width})
}

fn below_json(o: &BelowOptions) -> Value {
    json!({"epsilon": o.epsilon, "max_levels": o.max_levels, "escape": o.escape, "stall": o.stall, "stall_floor": o.stall_floor})
}

/// Per-run state: resolved configuration, output directory and workers.
struct Run {
    config: Map<String, Value>,
    out: PathBuf,
    svg: bool,
    pool: ThreadPool,
    written: Vec<PathBuf>,
}

impl Run {
    fn new(name: &str, c: &Common, source: &str) -> CliResult<Self> {
        let pool = par::pool(c.threads)
            .map_err(|e| CliError::Input(format!("cannot start workers: {e}")))?;
        let mut config = Map::new();
        config.insert("subcommand".into(), name.into());
        config.insert("source".into(), source.into());
        Ok(Run {
            config,
            out: c.out.clone(),
            svg: c.svg,
            pool,
            written: Vec::new(),
        })
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.config.insert(key.into(), v.into());
    }

    fn provenance(
        &self,
        hash: (&'static str, String),
        setting: Option<&Setting>,
        tolerances: Value,
    ) -> Provenance {
        let mut config = self.config.clone();
        config.insert("svg".into(), self.svg.into());
        Provenance {
            config: Value::Object(config),
            hash,
            setting: setting.map(doc::setting_to_value),
            tolerances,
        }
    }

    fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        std::fs::create_dir_all(&self.out)
            .map_err(|e| CliError::Input(format!("cannot create {}: {e}", self.out.display())))?;
        let path = self.out.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    fn done(self) {
        for p in &self.written {
            println!("wrote {}", p.display());
        }
    }
}

fn map_hash(f: &FlowMap) -> (&'static str, String) {
    ("map_sha256", doc::map_hash(f))
}

/// Prints rows as aligned columns.
fn print_table(header: &[&str], rows: &[Vec<String>]) {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        println!("{}", padded.join("  ").trim_end());
    };
    line(header.to_vec());
    line(
        width
            .iter()
            .map(|&w| {
                &"--------------------------------------------------------------------------------"
                    [..w.min(80)]
            })
            .collect(),
    );
    for r in rows {
        line(r.iter().map(String::as_str).collect());
    }
}

fn fmt(x: f64) -> String {
    if x == 0.0 || (1e-3..1e4).contains(&x.abs()) {
        format!("{x:.6}")
    } else {
        format!("{x:.6e}")
    }
}

fn execute(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::DeriveMap(c) => derive_map(&c),
        Command::FixedPoints { common, seeds } => fixed_points_cmd(&common, seeds),
        Command::Pseudothreshold { common, asymptotic } => pseudothreshold_cmd(&common, asymptotic),
        Command::Trip(c) => trip_cmd(&c),
        Command::Tifd { common, plane } => tifd_cmd(&common, &plane),
        Command::ThresholdSet { common, plane } => threshold_set_cmd(&common, &plane),
        Command::AxisBound {
            common,
            cube_steps,
            probe,
        } => axis_bound_cmd(&common, cube_steps, probe),
        Command::McTrip {
            common,
            retry,
            two_qubit,
            layout,
            fit,
        } => mc_trip_cmd(&common, retry, two_qubit, layout, fit),
        Command::Trajectory {
            common,
            start,
            bound,
        } => trajectory_cmd(&common, &start, bound),
    }
}

/// Source string and parsed map for commands that need a polynomial map.
fn map_source(c: &Common) -> CliResult<(String, FlowMap)> {
    let s = c.source.clone().unwrap_or_else(|| "builtin:tmr".into());
    let f = load_map(&parse_source(&s)?)?;
    Ok((s, f))
}

fn derive_map(c: &Common) -> CliResult<()> {
    let s = c.source.clone().unwrap_or_else(|| "builtin:tmr".into());
    let src = parse_source(&s)?;
    let mut run = Run::new("derive-map", c, &s)?;
    if let Source::Steane = src {
        return derive_schedules(run);
    }
    let t0 = Instant::now();
    let f = load_map(&src)?;
    let elapsed = t0.elapsed();
    let prov = run.provenance(map_hash(&f), None, json!({}));
    run.write("map.json", &doc::map_to_pretty(&f, Some(&prov.to_value())))?;
    if let Source::Tmr = src {
        let mut text = prov.comment_line();
        for kind in [LocationKind::Wire, LocationKind::Voter] {
            text.push_str(&build_replacement(kind).to_string());
        }
        run.write("netlist.txt", &text)?;
    }
    let rows: Vec<Vec<String>> = f
        .variables()
        .iter()
        .zip(f.components())
        .map(|(v, p)| {
            vec![
                v.clone(),
                p.num_terms().to_string(),
                p.total_degree().to_string(),
                p.to_string(),
            ]
        })
        .collect();
    print_table(&["location", "terms", "degree", "polynomial"], &rows);
    println!(
        "map sha256 {}  ({:.3} s)",
        doc::map_hash(&f),
        elapsed.as_secs_f64()
    );
    run.done();
    Ok(())
}

/// Spelling of an enum flag value on the command line.
fn flag_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn exrec_options(layout: LayoutArg) -> ExrecOptions {
    ExrecOptions {
        layout: match layout {
            LayoutArg::Sequential => EcLayout::Sequential,
            LayoutArg::Parallel => EcLayout::Parallel,
        },
    }
}

/// Second-order flow map of the exRecs: component `k` is
/// `Σ W_k[a][b]·γ_a·γ_b` over kind pairs, from exhaustive pair enumeration.
/// Every weight is a multiple of 1/225, so coefficients are kept exact.
fn leading_order_map(layout: LayoutArg) -> CliResult<FlowMap> {
    let vars: Vec<String> = KIND_NAMES.iter().map(|k| k.to_string()).collect();
    let mut comps = Vec::new();
    for kind in QuantumLocationKind::ALL {
        let circ = build_exrec_with(kind, &exrec_options(layout))?;
        let w = leading_order(&circ, &[1.0; 5]).weights;
        let mut terms = Vec::new();
        for a in 0..5 {
            for b in a..5 {
                let scaled = w[a][b] * 225.0;
                let n = scaled.round() as i64;
                debug_assert!(
                    (scaled - n as f64).abs() < 1e-9 * scaled.abs().max(1.0),
                    "weight {scaled}/225 is not integral"
                );
                if n != 0 {
                    let mut e = vec![0u32; 5];
                    e[a] += 1;
                    e[b] += 1;
                    terms.push((e, Coeff::ratio(n, 225)));
                }
            }
        }
        comps.push((
            kind.symbol().to_string(),
            Polynomial::from_terms(&vars, terms)?,
        ));
    }
    Ok(FlowMap::new(&vars, comps)?)
}

fn derive_schedules(mut run: Run) -> CliResult<()> {
    run.set("layout", "sequential");
    let mut rows = Vec::new();
    for kind in QuantumLocationKind::ALL {
        let circ = build_exrec_with(kind, &exrec_options(LayoutArg::Sequential))?;
        let text = circ.schedule_text();
        let prov = run.provenance(
            ("circuit_sha256", doc::sha256_hex(text.as_bytes())),
            None,
            json!({}),
        );
        run.write(
            &format!("exrec_{}.schedule.csv", kind.symbol()),
            &(prov.comment_line() + &text),
        )?;
        let mut r = vec![
            kind.symbol().to_string(),
            circ.num_qubits().to_string(),
            circ.steps().to_string(),
        ];
        r.extend(circ.census().iter().map(|n| n.to_string()));
        rows.push(r);
    }
    let mut header = vec!["exrec", "qubits", "steps"];
    header.extend(KIND_NAMES);
    print_table(&header, &rows);
    let f = leading_order_map(LayoutArg::Sequential)?;
    let prov = run.provenance(map_hash(&f), None, json!({"order": 2}));
    run.write("map.json", &doc::map_to_pretty(&f, Some(&prov.to_value())))?;
    println!("second-order map sha256 {}", doc::map_hash(&f));
    run.done();
    Ok(())
}

fn fixed_points_cmd(c: &Common, seeds: Option<usize>) -> CliResult<()> {
    let (s, f) = map_source(c)?;
    let mut run = Run::new("fixed-points", c, &s)?;
    let d = f.dim();
    let opts = FixedPointOptions {
        seeds_per_axis: seeds.unwrap_or(match d {
            0..=2 => 21,
            3 => 9,
            _ => 5,
        }),
        ..FixedPointOptions::default()
    };
    run.set("seeds_per_axis", opts.seeds_per_axis);
    let region = vec![(0.0, 1.0); d];
    let pts = fixed_points(&f, &region, &opts)?;
    let rows: Vec<Vec<String>> = pts
        .iter()
        .map(|p| {
            let mut r: Vec<String> = p.values().iter().map(|&v| csv::num(v)).collect();
            r.push(csv::num(residual(&f, p.values())));
            r
        })
        .collect();
    let mut header: Vec<&str> = f.variables().iter().map(String::as_str).collect();
    header.push("residual");
    let tol = json!({"residual": opts.residual, "dedup": opts.dedup, "max_iterations": opts.max_iterations});
    let prov = run.provenance(map_hash(&f), None, tol);
    run.write("fixed_points.csv", &csv::table(&prov, &header, &rows))?;
    print_table(&header, &rows);
    println!("{} fixed points in [0,1]^{d}", pts.len());
    run.done();
    Ok(())
}

fn pseudothreshold_cmd(c: &Common, asymptotic: bool) -> CliResult<()> {
    let (s, f) = map_source(c)?;
    let mut run = Run::new("pseudothreshold", c, &s)?;
    let g = resolve_setting(c.setting.as_deref(), f.variables())?;
    let levels = parse_levels(c.levels.as_deref().unwrap_or("1"))?;
    let locations: Vec<String> = match &c.location {
        Some(l) => {
            f.index_of(l)?;
            vec![l.clone()]
        }
        None => f.variables().to_vec(),
    };
    run.set("setting", g.name());
    run.set("locations", locations.clone());
    run.set("levels", levels.clone());
    run.set("asymptotic", asymptotic);
    let scan = ScanSpec::default();
    let mut rows = Vec::new();
    for loc in &locations {
        for &l in &levels {
            let r = pseudothreshold(&f, loc, &g, l, &scan)?;
            if r.at_scan_limit {
                eprintln!(
                    "note: `{loc}` level {l} root touches the scan limit {}",
                    scan.gamma_max
                );
            }
            rows.push(vec![
                loc.clone(),
                l.to_string(),
                csv::num(r.value),
                csv::num(r.bracket.0),
                csv::num(r.bracket.1),
                r.at_scan_limit.to_string(),
            ]);
        }
        if asymptotic {
            let a = asymptotic_location_threshold(&f, loc, &g, &scan)?;
            rows.push(vec![
                loc.clone(),
                "asymptotic".into(),
                csv::num(a.value),
                csv::num(a.value.min(a.sequence[a.sequence.len() - 1])),
                csv::num(a.value.max(a.sequence[a.sequence.len() - 1])),
                "false".into(),
            ]);
        }
    }
    let header = ["location", "level", "value", "lo", "hi", "at_scan_limit"];
    let prov = run.provenance(map_hash(&f), Some(&g), scan_json(&scan));
    run.write("pseudothreshold.csv", &csv::table(&prov, &header, &rows))?;
    print_table(&header, &rows);
    run.done();
    Ok(())
}

fn default_location(c: &Common, f: &FlowMap) -> CliResult<String> {
    match &c.location {
        Some(l) => {
            f.index_of(l)?;
            Ok(l.clone())
        }
        None => Ok(f.variables()[0].clone()),
    }
}

fn trip_cmd(c: &Common) -> CliResult<()> {
    let (s, f) = map_source(c)?;
    let mut run = Run::new("trip", c, &s)?;
    let g = resolve_setting(c.setting.as_deref(), f.variables())?;
    let loc = default_location(c, &f)?;
    let levels = parse_levels(c.levels.as_deref().unwrap_or("1,2,3"))?;
    let quantum = is_quantum(f.variables());
    let default = if quantum {
        GridSpec::log(1e-6, 1e-1, 51)
    } else {
        GridSpec::linear(0.0, 0.5, 101)
    };
    let grid = parse_grid(c.grid.as_deref(), default)?;
    run.set("location", loc.clone());
    run.set("setting", g.name());
    run.set("levels", levels.clone());
    run.set("grid", grid.to_string());
    let curves = par::trip(&run.pool, &f, &loc, &g, &levels, &grid.points())?;
    let scan = ScanSpec::default();
    let mut pseudo = Vec::new();
    let mut rows = Vec::new();
    for cv in &curves {
        let p = pseudothreshold(&f, &loc, &g, cv.level, &scan)
            .ok()
            .map(|r| r.value);
        if let Some(v) = p {
            pseudo.push((cv.level, v));
        }
        let cross: Vec<String> = cv.crossings.iter().map(|&x| fmt(x)).collect();
        rows.push(vec![
            cv.level.to_string(),
            if cross.is_empty() {
                "-".into()
            } else {
                cross.join(" ")
            },
            p.map(fmt).unwrap_or_else(|| "none".into()),
        ]);
    }
    let asym = asymptotic_location_threshold(&f, &loc, &g, &scan)
        .ok()
        .map(|a| a.value);
    let prov = run.provenance(map_hash(&f), Some(&g), scan_json(&scan));
    run.write("trip.csv", &csv::trip(&prov, &curves))?;
    if run.svg {
        run.write(
            "trip.svg",
            &svg::trip(&prov, &curves, &pseudo, asym, grid.log),
        )?;
    }
    print_table(&["level", "grid crossings", "pseudothreshold"], &rows);
    match asym {
        Some(a) => println!("asymptotic threshold of `{loc}`: {}", fmt(a)),
        None => println!("asymptotic threshold of `{loc}`: not found"),
    }
    run.done();
    Ok(())
}

fn tifd_cmd(c: &Common, pa: &PlaneArgs) -> CliResult<()> {
    let (s, f) = map_source(c)?;
    let mut run = Run::new("tifd", c, &s)?;
    let (x, y) = plane_of(pa.plane.as_deref(), &f)?;
    let fixed = match &pa.fix {
        Some(t) => parse_assignments(t, &f)?,
        None => Vec::new(),
    };
    let quantum = is_quantum(f.variables());
    let default = if quantum {
        GridSpec::log(1e-6, 1e-1, 21)
    } else {
        GridSpec::linear(0.0, 0.5, 26)
    };
    let grid = parse_grid(c.grid.as_deref(), default)?;
    run.set("plane", format!("{x},{y}"));
    run.set(
        "fix",
        fixed
            .iter()
            .map(|(n, v)| format!("{n}={}", csv::num(*v)))
            .collect::<Vec<_>>(),
    );
    run.set("grid", grid.to_string());
    let nodes = grid.points();
    let field = par::tifd(&run.pool, &f, (&x, &y), &point(&f, &fixed)?, &nodes, &nodes)?;
    let prov = run.provenance(map_hash(&f), None, json!({}));
    run.write("tifd.csv", &csv::tifd(&prov, &field))?;
    if run.svg {
        run.write(
            "tifd.svg",
            &svg::tifd(&prov, &field, &nodes, &nodes, grid.log),
        )?;
    }
    let still = field.arrows.iter().filter(|a| a.magnitude < 1e-12).count();
    let largest = field.arrows.iter().map(|a| a.magnitude).fold(0.0, f64::max);
    print_table(
        &["plane", "arrows", "fixed nodes", "largest |Δ|"],
        &[vec![
            format!("({x}, {y})"),
            field.arrows.len().to_string(),
            still.to_string(),
            fmt(largest),
        ]],
    );
    run.done();
    Ok(())
}

fn threshold_set_cmd(c: &Common, pa: &PlaneArgs) -> CliResult<()> {
    let (s, f) = map_source(c)?;
    let mut run = Run::new("threshold-set", c, &s)?;
    let (x, y) = plane_of(pa.plane.as_deref(), &f)?;
    let fixed = match &pa.fix {
        Some(t) => parse_assignments(t, &f)?,
        None => Vec::new(),
    };
    let default = if is_quantum(f.variables()) {
        GridSpec::linear(0.0, 2e-3, 101)
    } else {
        GridSpec::linear(0.0, 1.0, 200)
    };
    let grid = parse_grid(c.grid.as_deref(), default)?;
    if grid.lo != 0.0 || grid.log || grid.n < 2 {
        return Err(CliError::Input(
            "threshold-set grids are linear from 0: 0:hi:n".into(),
        ));
    }
    run.set("plane", format!("{x},{y}"));
    run.set(
        "fix",
        fixed
            .iter()
            .map(|(n, v)| format!("{n}={}", csv::num(*v)))
            .collect::<Vec<_>>(),
    );
    run.set("grid", grid.to_string());
    let mut slice = SliceSpec::new(&x, &y, grid.n, grid.hi, grid.hi);
    slice.fixed = point(&f, &fixed)?;
    let opts = BelowOptions::default();
    let r = par::threshold_set(&run.pool, &f, &slice, &opts)?;
    let prov = run.provenance(map_hash(&f), None, below_json(&opts));
    run.write("threshold_set.csv", &csv::threshold_set(&prov, &r))?;
    if run.svg {
        run.write("threshold_set.svg", &svg::threshold_set(&prov, &r))?;
    }
    print_table(
        &[
            "below",
            "above",
            "undetermined",
            "largest cube",
            "resolution",
            "non-monotone columns",
        ],
        &[vec![
            r.count(Verdict::Below).to_string(),
            r.count(Verdict::Above).to_string(),
            r.count(Verdict::Undetermined).to_string(),
            fmt(r.largest_cube_edge),
            fmt(r.resolution),
            r.non_monotone_columns.len().to_string(),
        ]],
    );
    run.done();
    Ok(())
}

fn axis_bound_cmd(c: &Common, steps: usize, probe: Option<usize>) -> CliResult<()> {
    let (s, f) = map_source(c)?;
    let mut run = Run::new("axis-bound", c, &s)?;
    let scan = ScanSpec::default();
    let bound = axis_upper_bound(&f, &scan)?;
    let probe = probe.unwrap_or(match f.dim() {
        0..=3 => 9,
        _ => 5,
    });
    run.set("cube_steps", steps);
    run.set("probe", probe);
    let opts = BelowOptions::default();
    let cube = largest_cube(&f, bound.value.min(1.0), steps, probe, &opts)?;
    let check = conjecture_check(cube.edge, &bound);
    let mut rows: Vec<Vec<String>> = bound
        .per_axis
        .iter()
        .map(|(l, r)| match r {
            Ok(r) => vec![format!("axis:{l}"), csv::num(r.value)],
            Err(_) => vec![format!("axis:{l}"), "none".into()],
        })
        .collect();
    rows.push(vec!["min_axis".into(), csv::num(bound.value)]);
    rows.push(vec!["cube_edge".into(), csv::num(cube.edge)]);
    rows.push(vec!["cube_resolution".into(), csv::num(cube.resolution)]);
    rows.push(vec!["conjecture_holds".into(), check.holds.to_string()]);
    let mut tol = scan_json(&scan);
    tol["below"] = below_json(&opts);
    let prov = run.provenance(map_hash(&f), None, tol);
    run.write(
        "axis_bound.csv",
        &csv::table(&prov, &["quantity", "value"], &rows),
    )?;
    print_table(&["quantity", "value"], &rows);
    if !check.holds {
        println!(
            "finding: the largest below-threshold cube ({}) exceeds the axis bound ({})",
            fmt(cube.edge),
            fmt(bound.value)
        );
    }
    run.done();
    Ok(())
}

fn mc_trip_cmd(
    c: &Common,
    retry: RetryArg,
    two: TwoQubitArg,
    layout: LayoutArg,
    fit: FitArg,
) -> CliResult<()> {
    let s = c.source.clone().unwrap_or_else(|| "mc:steane".into());
    if !matches!(parse_source(&s)?, Source::Steane) {
        return Err(CliError::Input(format!(
            "mc-trip needs --source mc:steane, got `{s}`"
        )));
    }
    let (Some(trials), Some(seed)) = (c.trials, c.seed) else {
        return Err(CliError::Input(
            "the mc:steane source needs both --trials and --seed".into(),
        ));
    };
    if trials == 0 {
        return Err(CliError::Input("--trials must be positive".into()));
    }
    let mut run = Run::new("mc-trip", c, &s)?;
    let sym = c.location.as_deref().unwrap_or("1");
    let kind = QuantumLocationKind::from_symbol(sym).ok_or_else(|| {
        CliError::Input(format!(
            "unknown exRec kind `{sym}` (expected one of {})",
            KIND_NAMES.join(", ")
        ))
    })?;
    let vars: Vec<String> = KIND_NAMES.iter().map(|k| k.to_string()).collect();
    let g = resolve_setting(c.setting.as_deref(), &vars)?;
    let grid = parse_grid(c.grid.as_deref(), GridSpec::log(1e-6, 1e-1, 11))?;
    if grid
        .points()
        .iter()
        .any(|&x| g.multipliers().iter().any(|m| m * x > 1.0))
    {
        return Err(CliError::Input(
            "grid takes some location rate above 1".into(),
        ));
    }
    let cfg = McConfig {
        retry: match retry {
            RetryArg::Reprepare => RetryPolicy::Reprepare,
            RetryArg::PostSelect => RetryPolicy::PostSelect,
        },
        two_qubit: match two {
            TwoQubitArg::Uniform => TwoQubitFaults::Uniform15,
            TwoQubitArg::OneSided => TwoQubitFaults::OneSided,
        },
    };
    let model = match fit {
        FitArg::Quadratic => FitModel::Quadratic,
        FitArg::Cubic => FitModel::Cubic,
    };
    run.set("location", sym);
    run.set("setting", g.name());
    run.set("grid", grid.to_string());
    run.set("trials", trials);
    run.set("seed", seed);
    run.set("retry", flag_name(retry));
    run.set("two_qubit", flag_name(two));
    run.set("layout", flag_name(layout));
    run.set("fit", flag_name(fit));
    let circ = build_exrec_with(kind, &exrec_options(layout))?;
    let schedule = circ.schedule_text();
    let hash = ("circuit_sha256", doc::sha256_hex(schedule.as_bytes()));
    let t0 = Instant::now();
    let t = par::mc_trip(
        &run.pool,
        &circ,
        kind,
        &g,
        &grid.points(),
        trials,
        seed,
        &cfg,
    )?;
    let elapsed = t0.elapsed();
    let tol = json!({"chunk_trials": CHUNK_TRIALS, "max_retries": MAX_RETRIES});
    let prov = run.provenance(hash.clone(), Some(&g), tol);
    run.write("mc_trip.csv", &csv::mc_trip(&prov, &t))?;
    run.write(
        &format!("exrec_{sym}.schedule.csv"),
        &(prov.comment_line() + &schedule),
    )?;
    let fitted = fit_pseudothreshold(&Vec::<FitPoint>::from(&t), model);
    if let Ok(fr) = &fitted {
        run.write("mc_fit.csv", &csv::mc_fit(&prov, &flag_name(fit), fr))?;
    }
    if run.svg {
        run.write(
            "mc_trip.svg",
            &svg::mc_trip(&prov, &t, fitted.as_ref().ok()),
        )?;
    }
    let rows: Vec<Vec<String>> = t
        .gammas
        .iter()
        .zip(&t.estimates)
        .map(|(&x, e)| {
            vec![
                fmt(x),
                e.trials.to_string(),
                e.failures.to_string(),
                fmt(e.p_hat),
                fmt(e.stderr),
            ]
        })
        .collect();
    println!("{circ}");
    print_table(&["gamma", "trials", "failures", "p_hat", "stderr"], &rows);
    println!("{:.2} s", elapsed.as_secs_f64());
    let fr = fitted.map_err(CliError::from);
    run.done();
    let fr = fr?;
    println!(
        "pseudothreshold {} ± {} (95% CI {} .. {})",
        fmt(fr.value),
        fmt(fr.stderr),
        fmt(fr.ci.0),
        fmt(fr.ci.1)
    );
    Ok(())
}

fn trajectory_cmd(c: &Common, start: &str, bound: Option<f64>) -> CliResult<()> {
    let (s, f) = map_source(c)?;
    let mut run = Run::new("trajectory", c, &s)?;
    let assigned = parse_assignments(start, &f)?;
    let x0 = point(&f, &assigned)?;
    let max_levels = match c.levels.as_deref() {
        Some(l) => *parse_levels(l)?.last().expect("non-empty"),
        None => 50,
    };
    run.set(
        "start",
        x0.values().iter().map(|&v| csv::num(v)).collect::<Vec<_>>(),
    );
    run.set("max_levels", max_levels);
    if let Some(b) = bound {
        run.set("bound", b);
    }
    let orbit = trajectory(&f, &x0, max_levels)?;
    let opts = BelowOptions::default();
    let verdict = classify(&f, x0.values(), &opts)?;
    let prov = run.provenance(map_hash(&f), None, below_json(&opts));
    run.write("trajectory.csv", &csv::trajectory(&prov, &orbit))?;
    let rows: Vec<Vec<String>> = orbit
        .iter()
        .enumerate()
        .map(|(l, v)| {
            let mut r = vec![l.to_string()];
            r.extend(v.values().iter().map(|&x| fmt(x)));
            r
        })
        .collect();
    let mut header = vec!["level"];
    header.extend(f.variables().iter().map(String::as_str));
    print_table(&header, &rows);
    if let Some(b) = bound {
        match orbit.iter().position(|v| v.values().iter().any(|&x| x > b)) {
            Some(l) => println!("leaves [0,{b}]^{} at level {l}", f.dim()),
            None => println!(
                "stays inside [0,{b}]^{} for {} levels",
                f.dim(),
                orbit.len() - 1
            ),
        }
    }
    println!(
        "verdict: {} after {} levels",
        verdict.verdict.as_str(),
        verdict.levels
    );
    run.done();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_lists() {
        assert_eq!(parse_levels("3").unwrap(), vec![3]);
        assert_eq!(parse_levels("1,2,5").unwrap(), vec![1, 2, 5]);
        assert_eq!(parse_levels("1-4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_levels("2..3").unwrap(), vec![2, 3]);
        assert!(parse_levels("3-1").is_err());
        assert!(parse_levels("x").is_err());
    }

    #[test]
    fn sources() {
        assert!(matches!(parse_source("builtin:tmr"), Ok(Source::Tmr)));
        assert!(matches!(parse_source("file:a.json"), Ok(Source::File(_))));
        assert!(parse_source("file:").is_err());
        assert!(parse_source("builtin:other").is_err());
    }

    #[test]
    fn assignments_by_name_or_position() {
        let f = models::uv_example();
        assert_eq!(
            parse_assignments("v=0.1", &f).unwrap(),
            vec![("v".to_string(), 0.1)]
        );
        assert_eq!(parse_assignments("0.28,0", &f).unwrap().len(), 2);
        assert!(parse_assignments("z=1", &f).is_err());
        assert!(parse_assignments("1,2,3", &f).is_err());
    }
}
