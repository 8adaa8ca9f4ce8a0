//! Monte Carlo engine for Brownian motion with generator `Delta` (variance
//! `2t` per coordinate) in intervals and polygons, its time changes and the
//! sticky / jump-and-stop boundary constructions.

pub mod boundary;
pub mod exits;
pub mod interval;
pub mod planar;
pub mod timechange;

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::koch::geometry::Point;
use crate::koch::PrefractalDomain;
use crate::rng::{stream, Component};
use crate::symbols::BernsteinSymbol;

pub use crate::spectral::Pt;
pub use boundary::{hat_process_path, jump_and_stop_path, sticky_elastic_path, BoundarySample};
pub use exits::{mean_exit_time, mean_hitting_time, trap_scan, Ball, ExitEstimate, TrapScan};
pub use timechange::{classify_delay, expectation, time_change_h, time_change_l, DelayVerdict, TimeTag};




/// Default cap on steps per path.
pub const MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Interval { a: f64, b: f64 },
    /// `(0, inf)`.
    HalfLine,
    /// Whole real line, no boundary.
    Line,
    Rectangle { a: f64, b: f64 },
    /// Disk of the given radius centred at the origin.
    Disk { radius: f64 },
    /// Counter-clockwise simple polygon plus reflecting interior walls.
    Polygon { vertices: Vec<Point>, walls: Vec<(Point, Point)> },
}

impl Region {
    pub fn from_domain(d: &PrefractalDomain) -> Self {
        Region::Polygon { vertices: d.vertices.clone(), walls: d.walls.clone() }
    }

    pub fn is_one_dimensional(&self) -> bool {
        matches!(self, Region::Interval { .. } | Region::HalfLine | Region::Line)
    }

    /// Lower and upper barriers of a one-dimensional region.
    pub fn barriers(&self) -> Option<(Option<f64>, Option<f64>)> {
        match *self {
            Region::Interval { a, b } => Some((Some(a), Some(b))),
            Region::HalfLine => Some((Some(0.0), None)),
            Region::Line => Some((None, None)),
            _ => None,
        }
    }

    pub fn contains_closure(&self, p: Pt) -> bool {
        match self {
            Region::Interval { a, b } => p[0] >= *a && p[0] <= *b,
            Region::HalfLine => p[0] >= 0.0,
            Region::Line => p[0].is_finite(),
            Region::Rectangle { a, b } => p[0] >= 0.0 && p[0] <= *a && p[1] >= 0.0 && p[1] <= *b,
            Region::Disk { radius } => p[0].hypot(p[1]) <= *radius,
            Region::Polygon { vertices, .. } => {
                let z = Point::new(p[0], p[1]);
                crate::koch::geometry::point_in_polygon(z, vertices)
                    || vertices
                        .iter()
                        .zip(vertices.iter().cycle().skip(1))
                        .any(|(a, b)| crate::koch::geometry::dist_point_segment(z, *a, *b) < 1e-12)
            }
        }
    }
}

/// Boundary behaviour, shared by every boundary edge. Interior walls of a
/// polygon always reflect.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BoundaryMode {
    Kill,
    Reflect,
    /// Reflection with weight `exp(-rate * gamma)`, `rate = c / sigma`.
    Elastic { rate: f64 },
    /// Time change `t + H(eta / sigma * gamma_t)` with elastic weight `exp(-c / sigma * gamma)`.
    StickyNonlocal { eta: f64, sigma: f64, c: f64, symbol: BernsteinSymbol },
    /// Holding driven by `psi`, jumps into the domain by the overshoot of `phi`.
    JumpAndStop { psi: BernsteinSymbol, phi: BernsteinSymbol, eta: f64, sigma: f64 },
}

impl BoundaryMode {
    pub fn reflects(&self) -> bool {
        !matches!(self, BoundaryMode::Kill)
    }

    pub fn elastic_rate(&self) -> f64 {
        match *self {
            BoundaryMode::Elastic { rate } => rate,
            BoundaryMode::StickyNonlocal { sigma, c, .. } => c / sigma,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WalkSpec {
    pub region: Region,
    pub start: Pt,
    pub dt: f64,
    pub boundary: BoundaryMode,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    /// Run with step `dt / 2`, reusing the normal draws of the `dt` run.
    #[serde(default)]
    pub halving: bool,
    /// Grid step of sampled subordinator paths.
    #[serde(default = "default_clock_dt")]
    pub clock_dt: f64,
    /// Smallest step of the clearance-adaptive planar mode; `None` keeps `dt` fixed.
    #[serde(default)]
    pub min_dt: Option<f64>,
}

fn default_max_steps() -> usize {
    MAX_STEPS
}

fn default_clock_dt() -> f64 {
    1e-4
}

impl WalkSpec {
    pub fn new(region: Region, start: Pt, dt: f64, boundary: BoundaryMode) -> Result<Self> {
        let s = Self { region, start, dt, boundary, max_steps: MAX_STEPS, halving: false, clock_dt: 1e-4, min_dt: None };
        s.validate()?;
        Ok(s)
    }

    /// Interval `(0, 1)` started at `x`.
    pub fn unit_interval(x: f64, dt: f64, boundary: BoundaryMode) -> Result<Self> {
        Self::new(Region::Interval { a: 0.0, b: 1.0 }, [x, 0.0], dt, boundary)
    }

    pub fn with_start(&self, start: Pt) -> Result<Self> {
        let mut s = self.clone();
        s.start = start;
        s.validate()?;
        Ok(s)
    }

    pub fn halved(&self) -> Self {
        let mut s = self.clone();
        s.halving = true;
        s
    }

    /// Actual step length.
    pub fn step(&self) -> f64 {
        if self.halving {
            0.5 * self.dt
        } else {
            self.dt
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !(self.clock_dt > 0.0) {
            return Err(domain(format!("steps must be positive, got dt = {}, clock_dt = {}", self.dt, self.clock_dt)));
        }
        if self.max_steps == 0 {
            return Err(domain("max_steps must be positive"));
        }
        match &self.region {
            Region::Interval { a, b } if !(a < b) => return Err(domain("interval needs a < b")),
            Region::Rectangle { a, b } if !(*a > 0.0 && *b > 0.0) => return Err(domain("rectangle sides must be positive")),
            Region::Disk { radius } if !(*radius > 0.0) => return Err(domain("disk radius must be positive")),
            Region::Polygon { vertices, .. } if vertices.len() < 3 => return Err(domain("polygon needs 3 vertices")),
            _ => {}
        }
        if !self.region.contains_closure(self.start) {
            return Err(domain(format!("start {:?} lies outside the domain", self.start)));
        }
        match &self.boundary {
            BoundaryMode::Elastic { rate } if !(*rate >= 0.0) => return Err(domain("elastic rate must be nonnegative")),
            BoundaryMode::StickyNonlocal { eta, sigma, c, .. } => {
                if !(*eta >= 0.0) || !(*sigma > 0.0) || !(*c >= 0.0) {
                    return Err(domain(format!("need eta >= 0, sigma > 0, c >= 0, got {eta}, {sigma}, {c}")));
                }
            }
            BoundaryMode::JumpAndStop { eta, sigma, .. } => {
                if !(*eta >= 0.0) || !(*sigma > 0.0) {
                    return Err(domain(format!("need eta >= 0 and sigma > 0, got {eta}, {sigma}")));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Summary of one simulated path.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PathRecord {
    /// Killing time, `None` if alive at the end of the run.
    pub lifetime: Option<f64>,
    /// Inner time reached.
    pub time: f64,
    pub terminal: Pt,
    pub local_time: f64,
    /// `exp(-rate * local_time)` for elastic modes, else 1.
    pub weight: f64,
    pub censored: bool,
}

/// Stored discretised path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasePath {
    pub dt: f64,
    pub positions: Vec<Pt>,
    pub local_time: Vec<f64>,
    pub lifetime: Option<f64>,
}

impl BasePath {
    /// Position and local time at inner time `s` (left grid point), `None`
    /// once killed.
    pub fn state_at(&self, s: f64) -> Result<Option<(Pt, f64)>> {
        if let Some(z) = self.lifetime {
            if s >= z {
                return Ok(None);
            }
        }
        let i = (s / self.dt + 1e-9).floor() as usize;
        if i >= self.positions.len() {
            return Err(Error::Horizon { requested: s, available: (self.positions.len() - 1) as f64 * self.dt });
        }
        Ok(Some((self.positions[i], self.local_time[i])))
    }

    pub fn horizon(&self) -> f64 {
        (self.positions.len() - 1) as f64 * self.dt
    }
}

/// Base process run forward in inner time.
pub trait Motion {
    /// Advance to inner time `s`, stopping early if killed.
    fn run_to(&mut self, s: f64) -> Result<()>;
    fn alive(&self) -> bool;
    fn censored(&self) -> bool;
    fn position(&self) -> Pt;
    fn local_time(&self) -> f64;
    fn time(&self) -> f64;
    fn lifetime(&self) -> Option<f64>;
    /// Advance by a single step of at most `h`; returns the local time gained.
    fn step(&mut self, h: f64) -> Result<f64>;

    fn record(&self, rate: f64) -> PathRecord {
        PathRecord {
            lifetime: self.lifetime(),
            time: self.time(),
            terminal: self.position(),
            local_time: self.local_time(),
            weight: (-rate * self.local_time()).exp(),
            censored: self.censored(),
        }
    }
}

/// Build the base motion of `spec` for path `path`.
pub fn motion(spec: &WalkSpec, seed: u64, path: u64) -> Result<Box<dyn Motion>> {
    if spec.region.is_one_dimensional() {
        Ok(Box::new(interval::Walker1D::new(spec, seed, path)?))
    } else {
        let w = planar::Walker2D::new(spec, Arc::new(planar::PlanarGeometry::new(&spec.region)?), seed, path)?;
        Ok(Box::new(match spec.min_dt {
            Some(lo) => w.adaptive(lo),
            None => w,
        }))
    }
}

/// Simulate and store the base path on `[0, horizon]`.
pub fn simulate_base_path(spec: &WalkSpec, horizon: f64, seed: u64, path: u64) -> Result<BasePath> {
    if !(horizon > 0.0) {
        return Err(domain(format!("horizon must be positive, got {horizon}")));
    }
    spec.validate()?;
    let mut m = motion(spec, seed, path)?;
    let h = spec.step();
    let n = (horizon / h - 1e-9).ceil() as usize;
    let mut positions = vec![m.position()];
    let mut local_time = vec![0.0];
    for _ in 0..n {
        if !m.alive() {
            break;
        }
        m.step(h)?;
        positions.push(m.position());
        local_time.push(m.local_time());
    }
    Ok(BasePath { dt: h, positions, local_time, lifetime: m.lifetime() })
}

/// Standard normals for the motion, laid out so that a run with step `dt / 2`
/// consumes the same draws as the run with step `dt`.
pub(crate) struct Increments {
    rng: ChaCha8Rng,
    half: bool,
}

impl Increments {
    pub(crate) fn new(seed: u64, path: u64, half: bool) -> Self {
        Self { rng: stream(seed, path, Component::Motion), half }
    }

    pub(crate) fn next(&mut self) -> f64 {
        if self.half {
            self.rng.sample(StandardNormal)
        } else {
            let a: f64 = self.rng.sample(StandardNormal);
            let b: f64 = self.rng.sample(StandardNormal);
            (a + b) * std::f64::consts::FRAC_1_SQRT_2
        }
    }

    /// Planar increment; the `dt` run draws `(ax, ay, bx, by)` and the
    /// halved run uses `(ax, ay)` then `(bx, by)`.
    pub(crate) fn next2(&mut self) -> (f64, f64) {
        if self.half {
            (self.rng.sample(StandardNormal), self.rng.sample(StandardNormal))
        } else {
            let ax: f64 = self.rng.sample(StandardNormal);
            let ay: f64 = self.rng.sample(StandardNormal);
            let bx: f64 = self.rng.sample(StandardNormal);
            let by: f64 = self.rng.sample(StandardNormal);
            let r = std::f64::consts::FRAC_1_SQRT_2;
            ((ax + bx) * r, (ay + by) * r)
        }
    }
}

/// Uniform on `(0, 1]`.
pub(crate) fn unit_open<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}
