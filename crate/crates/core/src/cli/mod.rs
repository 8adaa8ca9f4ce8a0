//! Config-driven command line front end.
//!
//! Each run reads one JSON [`RunConfig`], executes a subcommand inside a
//! rayon pool of the requested size and writes its files to the output
//! directory. Every file carries the tool version and the SHA-256 of the
//! effective config.

pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::koch::{build_domain, build_trapped_domain, dimension_estimate, EnvironmentSequence, Orientation, PrefractalDomain};
use crate::rng::{derive_seed, map_paths};
use crate::spectral::{
    project, solve_elliptic, solve_space_nonlocal, solve_time_nonlocal, BoundaryCondition, DomainKind, EigenBasis,
    EllipticMode, Pt,
};
use crate::stats::Estimate;
use crate::symbols::BernsteinSymbol;
use crate::walker::{
    expectation, hat_process_path, jump_and_stop_path, mean_exit_time, mean_hitting_time, simulate_base_path,
    sticky_elastic_path, trap_scan, Ball, BoundaryMode, Region, TimeTag, WalkSpec,
};
use crate::{Error, Result};

pub use verify::{run_battery, Check, VerifyConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const TOOL: &str = "nonlocal-koch";

#[derive(Debug, Parser)]
#[command(name = "nonlocal-koch", version, about = "Non-local operators and time-changed Brownian motion on Koch-type domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed, overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory, overrides the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "NONLOCAL_KOCH_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Analytic identity battery.
    Verify,
    /// Build a prefractal domain; writes SVG and JSON.
    Koch,
    /// Monte Carlo statistics; writes CSV.
    Walk,
    /// Eigenfunction solutions; writes CSV.
    Spectral,
    /// Monte Carlo against a reference; writes CSV and JSON.
    Compare,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Koch => "koch",
            Command::Walk => "walk",
            Command::Spectral => "spectral",
            Command::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Must match the subcommand when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub koch: Option<KochConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walk: Option<WalkConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareConfig>,
}

impl RunConfig {
    /// Parse JSON, reporting the line and column of any error.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("{origin}:{}:{}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    /// SHA-256 of the config with the output directory removed.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        format!("{:x}", Sha256::digest(&bytes))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KochConfig {
    /// Sides of the base polygon.
    pub m: usize,
    pub env: EnvironmentSequence,
    pub n: usize,
    pub orientation: Orientation,
    /// Trap walls with opening fraction `opening_base^level` (outward only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opening_base: Option<f64>,
}

impl KochConfig {
    pub fn build(&self) -> Result<PrefractalDomain> {
        match self.opening_base {
            None => build_domain(self.m, &self.env, self.n, self.orientation),
            Some(b) => {
                if self.orientation != Orientation::Outward {
                    return Err(Error::Config("trap walls need the outward orientation".into()));
                }
                build_trapped_domain(self.m, &self.env, self.n, &|k| b.powi(k as i32))
            }
        }
    }
}

/// Test functions used as initial data and observables.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "snake_case")]
pub enum Observable {
    One,
    /// `sin(n pi x / length)`.
    Sine { n: usize, length: f64 },
    /// Indicator of `lo <= x < hi`.
    Indicator { lo: f64, hi: f64 },
    /// `cos(k x)`.
    Cos { k: f64 },
}

impl Observable {
    pub fn eval(&self, p: Pt) -> f64 {
        let x = p[0];
        match *self {
            Observable::One => 1.0,
            Observable::Sine { n, length } => (n as f64 * std::f64::consts::PI * x / length).sin(),
            Observable::Indicator { lo, hi } => f64::from(x >= lo && x < hi),
            Observable::Cos { k } => (k * x).cos(),
        }
    }
}

fn default_clock() -> TimeTag {
    TimeTag::None
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    pub spec: WalkSpec,
    /// Replaces `spec.region` by a prefractal domain and starts at its centre.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub koch: Option<KochConfig>,
    pub paths: usize,
    pub task: WalkTask,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traces: Option<TraceConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceConfig {
    /// At most 100.
    pub count: usize,
    pub horizon: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum WalkTask {
    /// Mean lifetime per start.
    ExitTime {
        #[serde(default = "default_clock")]
        clock: TimeTag,
        #[serde(default)]
        starts: Vec<Pt>,
    },
    /// `E_x[f(X_t) w]` on a `(t, start)` grid.
    Expectation {
        #[serde(default = "default_clock")]
        clock: TimeTag,
        observable: Observable,
        t_grid: Vec<f64>,
        #[serde(default)]
        starts: Vec<Pt>,
    },
    /// Mean hitting times of a ball. With a Koch domain and no starts, the
    /// centroids of the nested bump chain are used.
    Hitting {
        ball: Ball,
        #[serde(default)]
        starts: Vec<Pt>,
    },
    /// Statistics of the sticky or jump-and-stop constructions.
    Boundary { observable: Observable, t_grid: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub domain: DomainKind,
    pub bc: BoundaryCondition,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "snake_case")]
pub enum Problem {
    TimeNonlocal,
    SpaceNonlocal,
    Elliptic { mode: EllipticMode },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralConfig {
    pub symbol: BernsteinSymbol,
    pub basis: BasisConfig,
    pub problem: Problem,
    pub observable: Observable,
    /// Ignored by the elliptic problem.
    #[serde(default)]
    pub t_grid: Vec<f64>,
    pub x_grid: Vec<Pt>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum CompareMethod {
    /// Monte Carlo with `clock` against the eigenfunction solution for `symbol`.
    Spectral {
        clock: TimeTag,
        symbol: BernsteinSymbol,
        problem: Problem,
        #[serde(default = "default_modes")]
        k: usize,
    },
    /// The two sticky boundary constructions against each other.
    Fbvp,
}

fn default_modes() -> usize {
    64
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub spec: WalkSpec,
    pub paths: usize,
    pub observable: Observable,
    /// Paired with `x_grid` entry by entry.
    pub t_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
    pub method: CompareMethod,
}

/// One row of a comparison table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareRow {
    pub t: f64,
    pub x: f64,
    pub mc: Estimate,
    pub reference: Estimate,
    pub delta: f64,
    pub se: f64,
    pub flag: bool,
}

/// What a run produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// Failed verify checks or flagged comparison rows.
    pub failures: usize,
    /// Whether failures should make the process exit nonzero.
    pub fatal: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.fatal && self.failures > 0)
    }
}

struct Writer {
    dir: PathBuf,
    hash: String,
    files: Vec<PathBuf>,
}

impl Writer {
    fn new(dir: PathBuf, hash: String) -> Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir, hash, files: Vec::new() })
    }

    fn put(&mut self, name: &str, body: &str) -> Result<()> {
        let p = self.dir.join(name);
        std::fs::write(&p, body)?;
        self.files.push(p);
        Ok(())
    }

    fn csv(&mut self, name: &str, table: &str) -> Result<()> {
        let body = format!("# {TOOL} {VERSION} config {}\n{table}", self.hash);
        self.put(name, &body)
    }

    fn json(&mut self, name: &str, value: serde_json::Value) -> Result<()> {
        let doc = serde_json::json!({
            "tool": TOOL,
            "version": VERSION,
            "config_hash": self.hash,
            "result": value,
        });
        let mut body = serde_json::to_string_pretty(&doc)?;
        body.push('\n');
        self.put(name, &body)
    }

    fn svg(&mut self, name: &str, svg: &str) -> Result<()> {
        let body = format!("<!-- {TOOL} {VERSION} config {} -->\n{svg}", self.hash);
        self.put(name, &body)
    }
}

/// Parse arguments and run.
pub fn run_args<I, T>(args: I) -> Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))?;
    run(&cli)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(c) = cfg.command {
        if c != cli.command {
            return Err(Error::Config(format!("config is for {:?}, not {:?}", c.name(), cli.command.name())));
        }
    }
    cfg.command = Some(cli.command);
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    let out = cli.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let threads = cli.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let mut w = Writer::new(out, cfg.hash())?;
    let (failures, fatal) = pool.install(|| dispatch(cli.command, &cfg, &mut w))?;
    Ok(Outcome { files: w.files, failures, fatal })
}

fn section<'a, T>(s: &'a Option<T>, name: &str) -> Result<&'a T> {
    s.as_ref().ok_or_else(|| Error::Config(format!("config has no {name:?} section")))
}

fn need_seed(cfg: &RunConfig) -> Result<u64> {
    cfg.seed.ok_or_else(|| Error::Config("a seed is required (config \"seed\" or --seed)".into()))
}

fn dispatch(cmd: Command, cfg: &RunConfig, w: &mut Writer) -> Result<(usize, bool)> {
    match cmd {
        Command::Verify => {
            let v = cfg.verify.clone().unwrap_or_default();
            let checks = run_battery(&v)?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            w.json(
                "verify.json",
                serde_json::json!({ "checks": checks, "total": checks.len(), "failed": failed }),
            )?;
            Ok((failed, true))
        }
        Command::Koch => {
            let k = section(&cfg.koch, "koch")?;
            let d = k.build()?;
            w.svg("domain.svg", &d.to_svg())?;
            w.json(
                "domain.json",
                serde_json::json!({
                    "config": k,
                    "domain": d,
                    "perimeter": d.perimeter(),
                    "area": d.area(),
                    "dimension_estimate": dimension_estimate(&d.ells),
                    "simple": d.is_simple(),
                }),
            )?;
            Ok((0, false))
        }
        Command::Walk => {
            cmd_walk(section(&cfg.walk, "walk")?, need_seed(cfg)?, w)?;
            Ok((0, false))
        }
        Command::Spectral => {
            let s = section(&cfg.spectral, "spectral")?;
            w.csv("spectral.csv", &spectral_table(s)?)?;
            Ok((0, false))
        }
        Command::Compare => {
            let c = section(&cfg.compare, "compare")?;
            let rows = compare(c, need_seed(cfg)?)?;
            let flags = rows.iter().filter(|r| r.flag).count();
            w.csv("compare.csv", &compare_csv(&rows))?;
            w.json("compare.json", serde_json::json!({ "rows": rows, "flags": flags }))?;
            Ok((flags, false))
        }
    }
}

fn walk_setup(cfg: &WalkConfig) -> Result<(WalkSpec, Option<PrefractalDomain>)> {
    let mut spec = cfg.spec.clone();
    let dom = match &cfg.koch {
        Some(k) => {
            let d = k.build()?;
            spec.region = Region::from_domain(&d);
            let c = d.center();
            spec.start = [c.re, c.im];
            Some(d)
        }
        None => None,
    };
    spec.validate()?;
    Ok((spec, dom))
}

fn starts_or(starts: &[Pt], spec: &WalkSpec) -> Vec<Pt> {
    if starts.is_empty() {
        vec![spec.start]
    } else {
        starts.to_vec()
    }
}

fn cmd_walk(cfg: &WalkConfig, seed: u64, w: &mut Writer) -> Result<()> {
    let (spec, dom) = walk_setup(cfg)?;
    let n = cfg.paths;
    let table = match &cfg.task {
        WalkTask::ExitTime { clock, starts } => {
            let mut s = String::from("x,y,mean,se,count,censored\n");
            for (i, &x) in starts_or(starts, &spec).iter().enumerate() {
                let e = mean_exit_time(&spec.with_start(x)?, n, derive_seed(seed, i as u64), clock)?;
                s.push_str(&format!("{},{},{},{},{},{}\n", x[0], x[1], e.estimate.mean, e.estimate.se, e.estimate.count, e.censored));
            }
            s
        }
        WalkTask::Expectation { clock, observable, t_grid, starts } => {
            let mut s = String::from("t,x,y,mean,se,count\n");
            let f = |p: Pt| observable.eval(p);
            for (i, &x) in starts_or(starts, &spec).iter().enumerate() {
                let sx = spec.with_start(x)?;
                for (j, &t) in t_grid.iter().enumerate() {
                    let e = expectation(&sx, clock, t, &f, n, derive_seed(seed, (i * t_grid.len() + j) as u64))?;
                    s.push_str(&format!("{t},{},{},{},{},{}\n", x[0], x[1], e.mean, e.se, e.count));
                }
            }
            s
        }
        WalkTask::Hitting { ball, starts } => {
            let starts = match (&dom, starts.is_empty()) {
                (Some(d), true) => d
                    .nested_chain()
                    .iter()
                    .map(|&i| {
                        let c = d.bumps[i].centroid();
                        [c.re, c.im]
                    })
                    .collect(),
                _ => starts_or(starts, &spec),
            };
            if spec.boundary.reflects() {
                trap_scan(&spec, ball, &starts, n, seed)?.to_csv()
            } else {
                let mut s = String::from("x,y,mean,se,count,censored\n");
                for (i, &x) in starts.iter().enumerate() {
                    let e = mean_hitting_time(&spec.with_start(x)?, ball, n, derive_seed(seed, i as u64))?;
                    s.push_str(&format!("{},{},{},{},{},{}\n", x[0], x[1], e.estimate.mean, e.estimate.se, e.estimate.count, e.censored));
                }
                s
            }
        }
        WalkTask::Boundary { observable, t_grid } => boundary_table(&spec, observable, t_grid, n, seed)?,
    };
    w.csv("walk.csv", &table)?;
    if let Some(tr) = &cfg.traces {
        w.svg("traces.svg", &traces_svg(&spec, tr, seed)?)?;
    }
    Ok(())
}

fn boundary_table(spec: &WalkSpec, f: &Observable, t_grid: &[f64], n: usize, seed: u64) -> Result<String> {
    type PathFn = fn(&WalkSpec, f64, u64, u64) -> Result<crate::walker::BoundarySample>;
    let runs: Vec<(&str, PathFn)> = match spec.boundary {
        BoundaryMode::StickyNonlocal { .. } => vec![("bar", sticky_elastic_path), ("hat", hat_process_path)],
        BoundaryMode::JumpAndStop { .. } => vec![("jump_and_stop", jump_and_stop_path)],
        _ => return Err(Error::Config("boundary task needs a sticky or jump-and-stop boundary".into())),
    };
    let mut s = String::from("construction,t,mean,se,stuck,hold,jumps,censored\n");
    for (k, (name, run)) in runs.iter().enumerate() {
        for (j, &t) in t_grid.iter().enumerate() {
            let sd = derive_seed(seed, (k * t_grid.len() + j) as u64);
            let samples = map_paths(n, |p| run(spec, t, sd, p)).into_iter().collect::<Result<Vec<_>>>()?;
            let vals: Vec<f64> = samples.iter().map(|b| f.eval(b.state) * b.weight).collect();
            let e = Estimate::from_samples(&vals);
            let m = |g: &dyn Fn(&crate::walker::BoundarySample) -> f64| {
                crate::rng::ordered_sum(&samples.iter().map(g).collect::<Vec<_>>()) / n as f64
            };
            s.push_str(&format!(
                "{name},{t},{},{},{},{},{},{}\n",
                e.mean,
                e.se,
                m(&|b| f64::from(u8::from(b.stuck))),
                m(&|b| b.hold_time),
                m(&|b| b.jumps.len() as f64),
                samples.iter().filter(|b| b.censored).count()
            ));
        }
    }
    Ok(s)
}

fn traces_svg(spec: &WalkSpec, tr: &TraceConfig, seed: u64) -> Result<String> {
    if tr.count > 100 {
        return Err(Error::Config("at most 100 traces".into()));
    }
    let paths = map_paths(tr.count, |p| simulate_base_path(spec, tr.horizon, seed, p))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let one_d = spec.region.is_one_dimensional();
    let pts: Vec<Vec<Pt>> = paths
        .iter()
        .map(|b| {
            b.positions
                .iter()
                .enumerate()
                .map(|(i, p)| if one_d { [i as f64 * b.dt, p[0]] } else { *p })
                .collect()
        })
        .collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in pts.iter().flatten() {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let (w, h) = ((hi[0] - lo[0]).max(1e-9), (hi[1] - lo[1]).max(1e-9));
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        lo[0],
        -hi[1],
        w,
        h
    );
    for path in &pts {
        s.push_str(&format!("<polyline fill=\"none\" stroke=\"#124\" stroke-width=\"{}\" points=\"", 0.002 * w.max(h)));
        for p in path {
            s.push_str(&format!("{},{} ", p[0], -p[1]));
        }
        s.push_str("\"/>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn spectral_values(
    sym: &BernsteinSymbol,
    basis: &EigenBasis,
    problem: Problem,
    f: &Observable,
    t: f64,
    grid: &[Pt],
) -> Result<Vec<f64>> {
    let c = project(&|p| f.eval(p), basis)?;
    match problem {
        Problem::TimeNonlocal => solve_time_nonlocal(sym, basis, &c, t, grid),
        Problem::SpaceNonlocal => solve_space_nonlocal(sym, basis, &c, t, grid),
        Problem::Elliptic { mode } => solve_elliptic(sym, basis, &c, mode, grid),
    }
}

/// `t,x,y,u` table of the configured problem.
pub fn spectral_table(cfg: &SpectralConfig) -> Result<String> {
    let basis = EigenBasis::new(cfg.basis.domain, cfg.basis.bc, cfg.basis.k)?;
    let ts: Vec<f64> = match cfg.problem {
        Problem::Elliptic { .. } => vec![0.0],
        _ if cfg.t_grid.is_empty() => return Err(Error::Config("empty t_grid".into())),
        _ => cfg.t_grid.clone(),
    };
    let mut s = String::from("t,x,y,u\n");
    for &t in &ts {
        let u = spectral_values(&cfg.symbol, &basis, cfg.problem, &cfg.observable, t, &cfg.x_grid)?;
        for (p, v) in cfg.x_grid.iter().zip(&u) {
            s.push_str(&format!("{t},{},{},{v}\n", p[0], p[1]));
        }
    }
    Ok(s)
}

fn basis_for(spec: &WalkSpec, k: usize) -> Result<EigenBasis> {
    let bc = match spec.boundary {
        BoundaryMode::Kill => BoundaryCondition::Dirichlet,
        BoundaryMode::Reflect => BoundaryCondition::Neumann,
        _ => return Err(Error::Config("spectral comparison needs a killing or reflecting boundary".into())),
    };
    let kind = match spec.region {
        Region::Interval { a, b } if a == 0.0 => DomainKind::Interval { length: b },
        Region::Rectangle { a, b } => DomainKind::Rectangle { a, b },
        _ => return Err(Error::Config("spectral comparison needs an interval (0, b) or a rectangle".into())),
    };
    EigenBasis::new(kind, bc, k)
}

fn fbvp_estimate(spec: &WalkSpec, f: &Observable, t: f64, n: usize, seed: u64, hat: bool) -> Result<Estimate> {
    let vals = map_paths(n, |p| {
        let b = if hat { hat_process_path(spec, t, seed, p)? } else { sticky_elastic_path(spec, t, seed, p)? };
        Ok(f.eval(b.state) * b.weight)
    });
    Ok(Estimate::from_samples(&vals.into_iter().collect::<Result<Vec<_>>>()?))
}

/// Rows of the comparison; a row is flagged when `|delta| > 3 se`.
pub fn compare(cfg: &CompareConfig, seed: u64) -> Result<Vec<CompareRow>> {
    if cfg.t_grid.len() != cfg.x_grid.len() || cfg.t_grid.is_empty() {
        return Err(Error::Config(format!(
            "t_grid and x_grid must be nonempty and paired, got {} and {} entries",
            cfg.t_grid.len(),
            cfg.x_grid.len()
        )));
    }
    let f = |p: Pt| cfg.observable.eval(p);
    let mut rows = Vec::with_capacity(cfg.t_grid.len());
    for (i, (&t, &x)) in cfg.t_grid.iter().zip(&cfg.x_grid).enumerate() {
        let spec = cfg.spec.with_start([x, 0.0])?;
        let (s1, s2) = (derive_seed(seed, 2 * i as u64), derive_seed(seed, 2 * i as u64 + 1));
        let (mc, reference) = match &cfg.method {
            CompareMethod::Spectral { clock, symbol, problem, k } => {
                let basis = basis_for(&spec, *k)?;
                let u = spectral_values(symbol, &basis, *problem, &cfg.observable, t, &[[x, 0.0]])?[0];
                (expectation(&spec, clock, t, &f, cfg.paths, s1)?, Estimate::exact(u))
            }
            CompareMethod::Fbvp => (
                fbvp_estimate(&spec, &cfg.observable, t, cfg.paths, s1, false)?,
                fbvp_estimate(&spec, &cfg.observable, t, cfg.paths, s2, true)?,
            ),
        };
        let delta = mc.mean - reference.mean;
        let se = mc.combined_se(&reference);
        rows.push(CompareRow { t, x, mc, reference, delta, se, flag: delta.abs() > 3.0 * se });
    }
    Ok(rows)
}

pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut s = String::from("t,x,mc,mc_se,reference,reference_se,delta,se,flag\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.t,
            r.x,
            r.mc.mean,
            r.mc.se,
            r.reference.mean,
            r.reference.se,
            r.delta,
            r.se,
            u8::from(r.flag)
        ));
    }
    s
}
