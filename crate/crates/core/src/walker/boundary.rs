//! Sticky and jump-and-stop boundary constructions on an interval or the
//! half-line.
//!
//! All three processes run a reflecting base motion with local time `gamma`
//! and let the outer clock pause at the boundary. Each base step of length
//! `h` that gains local time `dg` is followed by a hold at the touched
//! barrier:
//! - `sticky_elastic_path`: hold `H((eta / sigma) gamma)` increment, drawn exactly;
//! - `hat_process_path`: hold read off one stored path of `H` indexed by
//!   local time, i.e. the plateaus of its inverse;
//! - `jump_and_stop_path`: as the sticky one, plus a shift by the overshoot
//!   `R` of a second subordinator at level `gamma`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng::{stream, Component};
use crate::subordinate::{sample_path, IncrementSampler, SubordinatorPath};
use crate::symbols::{BernsteinSymbol, JumpLaw, SymbolKind};

use super::interval::{require_interval_like, Walker1D};
use super::timechange::sample_h;
use super::{BoundaryMode, Motion, Pt, Region, WalkSpec};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundarySample {
    pub state: Pt,
    /// Elastic weight `exp(-(c / sigma) gamma)` at the outer time.
    pub weight: f64,
    /// Outer time spent holding at the boundary.
    pub hold_time: f64,
    pub inner_time: f64,
    pub local_time: f64,
    /// Holding at the boundary at the outer time.
    pub stuck: bool,
    /// Boundary jump sizes (jump-and-stop only).
    pub jumps: Vec<f64>,
    pub censored: bool,
}

struct Outer {
    state: Pt,
    hold: f64,
    stuck: bool,
}

/// Outer-clock loop shared by the constructions. `hold(g0, g1)` returns the
/// holding time for local time moving from `g0` to `g1`; `shift(g)` the
/// spatial shift at local time `g`.
fn run_outer(
    w: &mut Walker1D,
    t: f64,
    h: f64,
    mut hold: impl FnMut(f64, f64) -> Result<f64>,
    mut shift: impl FnMut(f64) -> Result<f64>,
) -> Result<Outer> {
    let mut v = 0.0;
    let mut total = 0.0;
    while t - v > 1e-13 {
        if w.censored() {
            break;
        }
        let hs = h.min(t - v);
        let g0 = w.local_time();
        let dg = w.step(hs)?;
        let j = if dg > 0.0 { hold(g0, g0 + dg)? } else { 0.0 };
        if v + hs + j >= t && j > 0.0 {
            let barrier = w.last_contact.unwrap_or(w.x());
            total += t - v - hs;
            return Ok(Outer { state: [barrier + shift(w.local_time())?, 0.0], hold: total, stuck: true });
        }
        v += hs + j;
        total += j;
    }
    Ok(Outer { state: [w.x() + shift(w.local_time())?, 0.0], hold: total, stuck: false })
}

fn sample_from(spec: &WalkSpec, w: &Walker1D, o: Outer, rate: f64, jumps: Vec<f64>) -> BoundarySample {
    BoundarySample {
        state: o.state,
        weight: (-rate * w.local_time()).exp(),
        hold_time: o.hold,
        inner_time: w.time(),
        local_time: w.local_time(),
        stuck: o.stuck,
        jumps,
        censored: w.censored() || spec.max_steps == 0,
    }
}

fn sticky_params(spec: &WalkSpec) -> Result<(f64, f64, BernsteinSymbol)> {
    require_interval_like(spec)?;
    spec.validate()?;
    match &spec.boundary {
        BoundaryMode::StickyNonlocal { eta, sigma, c, symbol } => Ok((eta / sigma, c / sigma, symbol.clone())),
        _ => Err(Error::Unsupported("expected a sticky-nonlocal boundary".into())),
    }
}

/// Elastic motion run on the inverse of `V_t = t + H((eta / sigma) gamma_t)`.
pub fn sticky_elastic_path(spec: &WalkSpec, t: f64, seed: u64, path: u64) -> Result<BoundarySample> {
    let (lambda, rate, sym) = sticky_params(spec)?;
    if !(t >= 0.0) {
        return Err(domain("time must be nonnegative"));
    }
    let mut w = Walker1D::reflected(spec, seed, path)?;
    let mut clock = stream(seed, path, Component::Clock);
    let o = run_outer(&mut w, t, spec.step(), |g0, g1| if lambda > 0.0 { sample_h(&sym, lambda * (g1 - g0), &mut clock) } else { Ok(0.0) }, |_| Ok(0.0))?;
    Ok(sample_from(spec, &w, o, rate, Vec::new()))
}

/// Path of `H` indexed by (scaled) local time, extended on demand.
struct LocalClock {
    path: SubordinatorPath,
    rng: ChaCha8Rng,
}

impl LocalClock {
    fn new(sym: &BernsteinSymbol, du: f64, rng: ChaCha8Rng) -> Result<Self> {
        let mut rng = rng;
        let path = sample_path(sym, du, du, &mut rng)?;
        Ok(Self { path, rng })
    }

    fn value(&mut self, u: f64) -> Result<f64> {
        if u > self.path.horizon() {
            self.path.extend_to(u + 64.0 * self.path.dt, &mut self.rng)?;
        }
        self.path.value_at(u)
    }
}

/// Motion whose clock runs normally inside and pauses on the boundary for
/// the plateaus of an independent inverse subordinator.
pub fn hat_process_path(spec: &WalkSpec, t: f64, seed: u64, path: u64) -> Result<BoundarySample> {
    let (lambda, rate, sym) = sticky_params(spec)?;
    let mut w = Walker1D::reflected(spec, seed, path)?;
    let mut clock = LocalClock::new(&sym, spec.clock_dt, stream(seed, path, Component::Subordinator))?;
    let o = run_outer(
        &mut w,
        t,
        spec.step(),
        |g0, g1| if lambda > 0.0 { Ok(clock.value(lambda * g1)? - clock.value(lambda * g0)?) } else { Ok(0.0) },
        |_| Ok(0.0),
    )?;
    Ok(sample_from(spec, &w, o, rate, Vec::new()))
}

/// Total hold of the hat process accumulated by the time its local time
/// reaches `u`.
pub fn hat_hold_at_local_time(spec: &WalkSpec, u: f64, seed: u64, path: u64) -> Result<f64> {
    let (lambda, _, sym) = sticky_params(spec)?;
    let mut w = Walker1D::reflected(spec, seed, path)?;
    let mut clock = LocalClock::new(&sym, spec.clock_dt, stream(seed, path, Component::Subordinator))?;
    while w.local_time() < u {
        if w.censored() {
            return Err(Error::Numeric("local time level not reached before the step cap".into()));
        }
        w.step(spec.step())?;
    }
    clock.value(lambda * u)
}

/// Overshoot `R_u = H(L_u) - u` of a subordinator, as a function of the level `u`.
enum Overshoot {
    Zero,
    /// Compound Poisson without drift: ladder of partial jump sums.
    Ladder { level: f64, law: JumpLaw, rng: ChaCha8Rng },
    Path(LocalClock),
}

impl Overshoot {
    fn new(sym: &BernsteinSymbol, du: f64, rng: ChaCha8Rng) -> Result<Self> {
        Ok(match sym.kind() {
            SymbolKind::Linear => Overshoot::Zero,
            SymbolKind::CaputoFabrizio { alpha } if *alpha < 1.0 => {
                Overshoot::Ladder { level: 0.0, law: JumpLaw::Exponential { rate: alpha / (1.0 - alpha) }, rng }
            }
            SymbolKind::CompoundPoisson { jump, .. } => Overshoot::Ladder { level: 0.0, law: jump.clone(), rng },
            _ => Overshoot::Path(LocalClock::new(sym, du, rng)?),
        })
    }

    /// `R_u`, pushing the size of every renewal in `(u_prev, u]` onto `jumps`.
    fn at(&mut self, u_prev: f64, u: f64, jumps: &mut Vec<f64>) -> Result<f64> {
        match self {
            Overshoot::Zero => Ok(0.0),
            Overshoot::Ladder { level, law, rng } => {
                while *level < u {
                    let y = law.sample(rng);
                    jumps.push(y);
                    *level += y;
                }
                Ok(*level - u)
            }
            Overshoot::Path(clock) => {
                if u <= 0.0 {
                    return Ok(0.0);
                }
                let _ = clock.value(u)?;
                let r_prev = if u_prev > 0.0 { clock.path.overshoot(u_prev)? } else { 0.0 };
                let r = clock.path.overshoot(u)?;
                if r > r_prev - (u - u_prev) + 1e-15 {
                    jumps.push(r + (u - u_prev).min(r_prev));
                }
                Ok(r)
            }
        }
    }
}

/// Reflected motion on the half-line, held by the inverse of
/// `t + H^psi((eta / sigma) gamma)` and pushed inside by the overshoot of
/// `H^phi` at level `gamma`.
pub fn jump_and_stop_path(spec: &WalkSpec, t: f64, seed: u64, path: u64) -> Result<BoundarySample> {
    require_interval_like(spec)?;
    spec.validate()?;
    if !matches!(spec.region, Region::HalfLine) {
        return Err(Error::Unsupported("jump-and-stop is defined on the half-line".into()));
    }
    let (lambda, psi, phi) = match &spec.boundary {
        BoundaryMode::JumpAndStop { psi, phi, eta, sigma } => (eta / sigma, psi.clone(), phi.clone()),
        _ => return Err(Error::Unsupported("expected a jump-and-stop boundary".into())),
    };
    let mut w = Walker1D::reflected(spec, seed, path)?;
    let mut clock = stream(seed, path, Component::Clock);
    let mut over = Overshoot::new(&phi, spec.clock_dt, stream(seed, path, Component::Extra))?;
    let mut jumps = Vec::new();
    let mut last_u = 0.0;
    let o = run_outer(
        &mut w,
        t,
        spec.step(),
        |g0, g1| if lambda > 0.0 { sample_h(&psi, lambda * (g1 - g0), &mut clock) } else { Ok(0.0) },
        |g| {
            let r = over.at(last_u, g, &mut jumps);
            last_u = g;
            r
        },
    )?;
    Ok(sample_from(spec, &w, o, 0.0, jumps))
}

/// Renewals of the overshoot process up to level `u`, i.e. the number of
/// jumps the jump-and-stop motion makes while its local time reaches `u`.
pub fn boundary_jump_count(phi: &BernsteinSymbol, u: f64, du: f64, rng: ChaCha8Rng) -> Result<usize> {
    let mut over = Overshoot::new(phi, du, rng)?;
    let mut jumps = Vec::new();
    over.at(0.0, u, &mut jumps)?;
    Ok(jumps.len())
}

/// Compound Poisson symbol with rate `n` and Pareto jumps above `1 / n`,
/// `P(Y > y) = (n y)^{-alpha}`.
pub fn truncated_power_law(n: f64, alpha: f64) -> Result<BernsteinSymbol> {
    if !(n > 0.0) {
        return Err(domain("threshold index must be positive"));
    }
    BernsteinSymbol::compound_poisson(n, JumpLaw::Pareto { threshold: 1.0 / n, alpha })
}

/// Draw one increment of `H` over a local-time step (exposed for tests).
pub fn hold_increment<R: Rng + ?Sized>(sym: &BernsteinSymbol, du: f64, rng: &mut R) -> Result<f64> {
    if du <= 0.0 {
        return Ok(0.0);
    }
    Ok(IncrementSampler::new(sym, du)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::map_paths;
    use crate::stats::{ks_one_sample, Estimate};
    use crate::special::erfc;
    use rand::SeedableRng;

    fn sticky(eta: f64, c: f64, sym: BernsteinSymbol, x: f64) -> WalkSpec {
        let mode = BoundaryMode::StickyNonlocal { eta, sigma: 1.0, c, symbol: sym };
        WalkSpec::unit_interval(x, 1e-4, mode).unwrap()
    }

    #[test]
    fn eta_zero_is_elastic() {
        let s = BernsteinSymbol::stable(0.5).unwrap();
        let spec = sticky(0.0, 1.0, s, 0.2);
        let el = WalkSpec::unit_interval(0.2, 1e-4, BoundaryMode::Elastic { rate: 1.0 }).unwrap();
        for p in 0..50 {
            let a = sticky_elastic_path(&spec, 0.3, 7, p).unwrap();
            let mut w = Walker1D::new(&el, 7, p).unwrap();
            w.run_to(0.3).unwrap();
            assert_eq!(a.state[0], w.x());
            assert_eq!(a.weight, w.record(1.0).weight);
            assert_eq!(a.hold_time, 0.0);
        }
    }

    #[test]
    fn no_contact_means_base_path() {
        let spec = sticky(1.0, 0.0, BernsteinSymbol::stable(0.5).unwrap(), 0.5);
        let free = WalkSpec::unit_interval(0.5, 1e-4, BoundaryMode::Reflect).unwrap();
        let mut checked = 0;
        for p in 0..40 {
            let a = hat_process_path(&spec, 0.01, 3, p).unwrap();
            if a.local_time == 0.0 {
                let mut w = Walker1D::new(&free, 3, p).unwrap();
                w.run_to(0.01).unwrap();
                assert_eq!(a.state[0], w.x());
                checked += 1;
            }
        }
        assert!(checked > 30);
    }

    #[test]
    fn linear_plateaus() {
        let spec = sticky(1.0, 0.0, BernsteinSymbol::linear(), 0.5);
        let h = map_paths(2000, |p| sticky_elastic_path(&spec, 0.5, 5, p).unwrap().hold_time / 0.5);
        let e = Estimate::from_samples(&h);
        assert!(e.mean > 10.0 * e.se, "{e:?}");
        let spec0 = sticky(0.0, 0.0, BernsteinSymbol::linear(), 0.5);
        assert!(map_paths(200, |p| sticky_elastic_path(&spec0, 0.5, 5, p).unwrap().hold_time).iter().all(|h| *h == 0.0));
    }

    #[test]
    fn hat_hold_law() {
        // hold accumulated by local time u is H_u: P(H_u <= w) = erfc(u / (2 sqrt w))
        let spec = sticky(1.0, 0.0, BernsteinSymbol::stable(0.5).unwrap(), 0.0);
        let u = 0.02;
        let holds = map_paths(3000, |p| hat_hold_at_local_time(&spec, u, 13, p).unwrap());
        let (_, pval) = ks_one_sample(&holds, |w| if w <= 0.0 { 0.0 } else { erfc(u / (2.0 * w.sqrt())) });
        assert!(pval > 0.05, "p = {pval}");
    }

    #[test]
    fn exponential_boundary_jumps() {
        let mode = BoundaryMode::JumpAndStop {
            psi: BernsteinSymbol::stable(0.5).unwrap(),
            phi: BernsteinSymbol::caputo_fabrizio(0.5).unwrap(),
            eta: 1.0,
            sigma: 1.0,
        };
        let spec = WalkSpec::new(Region::HalfLine, [0.0, 0.0], 1e-4, mode).unwrap();
        let runs = map_paths(2000, |p| jump_and_stop_path(&spec, 0.1, 17, p).unwrap());
        // first jump of each path: one i.i.d. draw per path
        let jumps: Vec<f64> = runs.iter().filter_map(|r| r.jumps.first().copied()).collect();
        assert!(jumps.len() > 1000);
        let (_, pval) = ks_one_sample(&jumps, |y| 1.0 - (-y).exp());
        assert!(pval > 0.05, "p = {pval}");
        assert!(runs.iter().all(|r| r.state[0] >= 0.0));
        assert!(runs.iter().filter(|r| !r.jumps.is_empty()).all(|r| r.state[0] > 0.0));
    }

    #[test]
    fn linear_phi_is_sticky() {
        let psi = BernsteinSymbol::stable(0.5).unwrap();
        let js = BoundaryMode::JumpAndStop { psi: psi.clone(), phi: BernsteinSymbol::linear(), eta: 1.0, sigma: 1.0 };
        let spec = WalkSpec::new(Region::HalfLine, [0.1, 0.0], 1e-4, js).unwrap();
        let st = WalkSpec::new(
            Region::HalfLine,
            [0.1, 0.0],
            1e-4,
            BoundaryMode::StickyNonlocal { eta: 1.0, sigma: 1.0, c: 0.0, symbol: psi },
        )
        .unwrap();
        for p in 0..30 {
            let a = jump_and_stop_path(&spec, 0.2, 2, p).unwrap();
            let b = sticky_elastic_path(&st, 0.2, 2, p).unwrap();
            assert_eq!(a.state, b.state);
            assert!(a.jumps.is_empty());
        }
    }

    #[test]
    fn truncated_jump_counts_scale() {
        // renewals up to level 1 grow like n^alpha
        let count = |n: f64| {
            let sym = truncated_power_law(n, 0.5).unwrap();
            let v = map_paths(2000, |p| {
                boundary_jump_count(&sym, 1.0, 1e-3, ChaCha8Rng::seed_from_u64(p)).unwrap() as f64
            });
            Estimate::from_samples(&v).mean
        };
        let ratio = count(1600.0) / count(100.0);
        assert!((ratio - 4.0).abs() < 0.4, "{ratio}");
    }
}
