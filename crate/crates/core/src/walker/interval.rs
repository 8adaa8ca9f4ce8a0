//! One-dimensional motion on an interval, half-line or the line.
//!
//! Killing uses the Brownian-bridge crossing probability between grid points;
//! reflection and local time use Lepingle's scheme, exact for one barrier:
//! with `m` the bridge minimum, `gamma += max(0, a - m)` and the end point is
//! pushed up by the same amount. `gamma` is the Skorokhod regulator of
//! `sqrt(2) B`, so the elastic weight `exp(-k gamma)` solves `u'(a) = k u(a)`.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rng::{stream, Component};

use super::{unit_open, BoundaryMode, Increments, Motion, Pt, WalkSpec};

pub struct Walker1D {
    lo: Option<f64>,
    hi: Option<f64>,
    reflect: bool,
    unbounded: bool,
    dt: f64,
    max_steps: usize,
    inc: Increments,
    bnd: ChaCha8Rng,
    x: f64,
    s: f64,
    gamma: f64,
    lifetime: Option<f64>,
    steps: usize,
    censored: bool,
    /// Barrier touched by the last step, if any.
    pub last_contact: Option<f64>,
}

impl Walker1D {
    pub fn new(spec: &WalkSpec, seed: u64, path: u64) -> Result<Self> {
        let (lo, hi) = spec
            .region
            .barriers()
            .ok_or_else(|| Error::Unsupported("one-dimensional walker on a planar region".into()))?;
        Ok(Self {
            lo,
            hi,
            reflect: spec.boundary.reflects(),
            unbounded: lo.is_none() && hi.is_none(),
            dt: spec.step(),
            max_steps: spec.max_steps,
            inc: Increments::new(seed, path, spec.halving),
            bnd: stream(seed, path, Component::Boundary),
            x: spec.start[0],
            s: 0.0,
            gamma: 0.0,
            lifetime: None,
            steps: 0,
            censored: false,
            last_contact: None,
        })
    }

    /// Kill-mode walker regardless of the spec's boundary mode.
    pub fn killed(spec: &WalkSpec, seed: u64, path: u64) -> Result<Self> {
        let mut w = Self::new(spec, seed, path)?;
        w.reflect = false;
        Ok(w)
    }

    /// Reflecting walker regardless of the spec's boundary mode.
    pub fn reflected(spec: &WalkSpec, seed: u64, path: u64) -> Result<Self> {
        let mut w = Self::new(spec, seed, path)?;
        w.reflect = true;
        Ok(w)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// Run until killed or censored; returns the lifetime.
    pub fn run_until_exit(&mut self) -> Result<Option<f64>> {
        while self.lifetime.is_none() && !self.censored {
            self.step(self.dt)?;
        }
        Ok(self.lifetime)
    }

    fn kill_step(&mut self, h: f64, y: f64, sd2: f64) {
        for b in [self.lo, self.hi].into_iter().flatten() {
            let (d0, d1) = (self.x - b, y - b);
            if d0 * d1 <= 0.0 {
                let frac = if d0 == d1 { 0.0 } else { d0 / (d0 - d1) };
                self.lifetime = Some(self.s + frac * h);
                self.x = b;
                return;
            }
        }
        for b in [self.lo, self.hi].into_iter().flatten() {
            let (d0, d1) = (self.x - b, y - b);
            let p = (-2.0 * d0 * d1 / sd2).exp();
            if unit_open(&mut self.bnd) <= p {
                self.lifetime = Some(self.s + 0.5 * h);
                self.x = b;
                return;
            }
        }
        self.x = y;
        self.s += h;
    }

    fn reflect_step(&mut self, h: f64, mut y: f64, sd2: f64) -> f64 {
        let x = self.x;
        let mut dg = 0.0;
        self.last_contact = None;
        if let Some(a) = self.lo {
            let m = 0.5 * (x + y - ((y - x).powi(2) - 2.0 * sd2 * unit_open(&mut self.bnd).ln()).sqrt());
            if m < a {
                dg += a - m;
                y += a - m;
                self.last_contact = Some(a);
            }
        }
        if let Some(b) = self.hi {
            let mx = 0.5 * (x + y + ((y - x).powi(2) - 2.0 * sd2 * unit_open(&mut self.bnd).ln()).sqrt());
            if mx > b {
                dg += mx - b;
                y -= mx - b;
                self.last_contact = Some(b);
            }
        }
        if let Some(a) = self.lo {
            y = y.max(a);
        }
        if let Some(b) = self.hi {
            y = y.min(b);
        }
        self.x = y;
        self.s += h;
        self.gamma += dg;
        dg
    }
}

impl Motion for Walker1D {
    fn run_to(&mut self, target: f64) -> Result<()> {
        if self.unbounded {
            if target > self.s {
                self.step(target - self.s)?;
            }
            return Ok(());
        }
        while self.lifetime.is_none() && !self.censored && target - self.s > 1e-13 {
            let h = self.dt.min(target - self.s);
            self.step(h)?;
        }
        Ok(())
    }

    fn alive(&self) -> bool {
        self.lifetime.is_none()
    }

    fn censored(&self) -> bool {
        self.censored
    }

    fn position(&self) -> Pt {
        [self.x, 0.0]
    }

    fn local_time(&self) -> f64 {
        self.gamma
    }

    fn time(&self) -> f64 {
        self.lifetime.unwrap_or(self.s)
    }

    fn lifetime(&self) -> Option<f64> {
        self.lifetime
    }

    fn step(&mut self, h: f64) -> Result<f64> {
        if self.lifetime.is_some() {
            return Ok(0.0);
        }
        if self.steps >= self.max_steps {
            self.censored = true;
            return Ok(0.0);
        }
        self.steps += 1;
        let sd2 = 2.0 * h;
        let z = self.inc.next();
        let y = self.x + sd2.sqrt() * z;
        if self.unbounded {
            self.x = y;
            self.s += h;
            return Ok(0.0);
        }
        if self.reflect {
            Ok(self.reflect_step(h, y, sd2))
        } else {
            self.kill_step(h, y, sd2);
            Ok(0.0)
        }
    }
}

/// Mode check shared by the boundary constructions.
pub(crate) fn require_interval_like(spec: &WalkSpec) -> Result<()> {
    if !spec.region.is_one_dimensional() || matches!(spec.region, super::Region::Line) {
        return Err(Error::Unsupported("boundary constructions need an interval or the half-line".into()));
    }
    if matches!(spec.boundary, BoundaryMode::Kill) {
        return Err(Error::Unsupported("boundary constructions need a reflecting base motion".into()));
    }
    Ok(())
}
