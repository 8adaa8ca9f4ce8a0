//! Time changes of the base motion by an independent subordinator `H` or its
//! inverse `L`, lifetimes of the time-changed processes and the
//! delayed / rushed classification.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, map_paths, stream, Component};
use crate::stats::Estimate;
use crate::subordinate::{sample_inverse_at, sample_path, stable_inverse_exact, IncrementSampler};
use crate::symbols::{BernsteinSymbol, SymbolKind};

use super::exits::{collect, ExitEstimate};
use super::{motion, Pt, WalkSpec};

/// Which clock runs the base motion.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum TimeTag {
    None,
    /// `X_{L_t}`.
    L { symbol: BernsteinSymbol },
    /// `X_{H_t}`.
    H { symbol: BernsteinSymbol },
}

/// Value of a time-changed process at one outer time.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TimeChangeSample {
    /// Inner time at which the base motion was read.
    pub inner: f64,
    /// `None` when the base motion was killed before `inner`.
    pub state: Option<Pt>,
    pub weight: f64,
    pub censored: bool,
}

/// One draw of `L_t`: exact for stable and linear symbols, otherwise by
/// inverting a path sampled with step `clock_dt`.
pub fn sample_l<R: Rng + ?Sized>(sym: &BernsteinSymbol, t: f64, clock_dt: f64, rng: &mut R) -> Result<f64> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    match sym.kind() {
        SymbolKind::Linear => Ok(t),
        SymbolKind::Stable { alpha } => Ok(stable_inverse_exact(*alpha, t, rng)),
        _ => sample_inverse_at(sym, t, clock_dt, rng),
    }
}

/// One exact draw of `H_t`.
pub fn sample_h<R: Rng + ?Sized>(sym: &BernsteinSymbol, t: f64, rng: &mut R) -> Result<f64> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    Ok(IncrementSampler::new(sym, t)?.sample(rng))
}

fn read_at(spec: &WalkSpec, inner: f64, seed: u64, path: u64) -> Result<TimeChangeSample> {
    let mut m = motion(spec, seed, path)?;
    m.run_to(inner)?;
    let rate = spec.boundary.elastic_rate();
    Ok(TimeChangeSample {
        inner,
        state: m.alive().then(|| m.position()),
        weight: (-rate * m.local_time()).exp(),
        censored: m.censored(),
    })
}

/// `X_{L_t}` with `L` independent of the motion.
pub fn time_change_l(spec: &WalkSpec, sym: &BernsteinSymbol, t: f64, seed: u64, path: u64) -> Result<TimeChangeSample> {
    let inner = sample_l(sym, t, spec.clock_dt, &mut stream(seed, path, Component::Clock))?;
    read_at(spec, inner, seed, path)
}

/// `X_{H_t}` with `H` independent of the motion.
pub fn time_change_h(spec: &WalkSpec, sym: &BernsteinSymbol, t: f64, seed: u64, path: u64) -> Result<TimeChangeSample> {
    let inner = sample_h(sym, t, &mut stream(seed, path, Component::Clock))?;
    read_at(spec, inner, seed, path)
}

/// Lifetime of the killed motion, `None` if censored.
pub fn base_lifetime(spec: &WalkSpec, seed: u64, path: u64) -> Result<Option<f64>> {
    let mut m = motion(spec, seed, path)?;
    while m.alive() && !m.censored() {
        m.step(spec.step())?;
    }
    Ok(m.lifetime())
}

/// Lifetime of `X_{L_t}`, simulated on the outer grid `k * clock_dt`: the
/// motion is advanced to `L_{t_k}` read off an independent path of `H`, and
/// the first outer time at which it is dead is returned.
pub fn lifetime_l(spec: &WalkSpec, sym: &BernsteinSymbol, seed: u64, path: u64) -> Result<Option<f64>> {
    let mut m = motion(spec, seed, path)?;
    if matches!(sym.kind(), SymbolKind::Linear) {
        while m.alive() && !m.censored() {
            m.step(spec.step())?;
        }
        return Ok(m.lifetime());
    }
    let mut rng = stream(seed, path, Component::Clock);
    let dt = spec.clock_dt;
    let sampler = IncrementSampler::new(sym, dt)?;
    let mut hp = sample_path(sym, dt, dt, &mut rng)?;
    let mut k = 0usize;
    while m.alive() {
        if m.censored() || k >= spec.max_steps {
            return Ok(None);
        }
        k += 1;
        let t = k as f64 * dt;
        hp.extend_until(&sampler, t, spec.max_steps, &mut rng)?;
        m.run_to(hp.invert_path(t)?)?;
    }
    Ok(Some(k as f64 * dt))
}

/// Lifetime of `X_{H_t}` on the outer grid `k * clock_dt` with exact increments of `H`.
pub fn lifetime_h(spec: &WalkSpec, sym: &BernsteinSymbol, seed: u64, path: u64) -> Result<Option<f64>> {
    let mut m = motion(spec, seed, path)?;
    let mut rng = stream(seed, path, Component::Clock);
    let dt = spec.clock_dt;
    let sampler = IncrementSampler::new(sym, dt)?;
    let mut h = 0.0;
    let mut k = 0usize;
    while m.alive() {
        if m.censored() || k >= spec.max_steps {
            return Ok(None);
        }
        k += 1;
        h += if matches!(sym.kind(), SymbolKind::Linear) { dt } else { sampler.sample(&mut rng) };
        m.run_to(h)?;
    }
    Ok(Some(k as f64 * dt))
}

/// `E[H_zeta]` from independent lifetimes and exact draws of `H` at them.
pub fn mean_h_at_lifetime(spec: &WalkSpec, sym: &BernsteinSymbol, n: usize, seed: u64) -> Result<ExitEstimate> {
    collect(map_paths(n, |p| {
        let z = base_lifetime(spec, seed, p)?;
        z.map(|z| sample_h(sym, z, &mut stream(seed, p, Component::Clock))).transpose()
    }))
}

/// `E[L_zeta]` from independent lifetimes and draws of `L` at them.
pub fn mean_l_at_lifetime(spec: &WalkSpec, sym: &BernsteinSymbol, n: usize, seed: u64) -> Result<ExitEstimate> {
    collect(map_paths(n, |p| {
        let z = base_lifetime(spec, seed, p)?;
        z.map(|z| sample_l(sym, z, spec.clock_dt, &mut stream(seed, p, Component::Clock))).transpose()
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DelayVerdict {
    Delayed,
    Rushed,
    /// Means within 3 combined SE; `flagged` when this came from overlapping
    /// intervals rather than an exact identity.
    Neutral { flagged: bool },
    InfiniteMean,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DelayReport {
    pub verdict: DelayVerdict,
    pub baseline: Option<ExitEstimate>,
    pub changed: Option<ExitEstimate>,
}

/// Compare the mean lifetime of the time-changed motion with the base one.
pub fn classify_delay(spec: &WalkSpec, sym: &BernsteinSymbol, tag: &str, n: usize, seed: u64) -> Result<DelayReport> {
    if matches!(sym.kind(), SymbolKind::Linear) {
        return Ok(DelayReport { verdict: DelayVerdict::Neutral { flagged: false }, baseline: None, changed: None });
    }
    let changed_tag = match tag {
        "L" | "l" => TimeTag::L { symbol: sym.clone() },
        "H" | "h" => TimeTag::H { symbol: sym.clone() },
        other => return Err(Error::Config(format!("unknown time-change tag {other:?}"))),
    };
    if matches!(changed_tag, TimeTag::L { .. }) && !sym.phi_prime_at_zero().is_finite() {
        return Ok(DelayReport { verdict: DelayVerdict::InfiniteMean, baseline: None, changed: None });
    }
    let base = super::exits::mean_exit_time(spec, n, derive_seed(seed, 1), &TimeTag::None)?;
    let changed = super::exits::mean_exit_time(spec, n, derive_seed(seed, 2), &changed_tag)?;
    let (a, b) = (base.estimate, changed.estimate);
    let verdict = if (b.mean - a.mean).abs() <= 3.0 * a.combined_se(&b) {
        DelayVerdict::Neutral { flagged: true }
    } else if b.mean > a.mean {
        DelayVerdict::Delayed
    } else {
        DelayVerdict::Rushed
    };
    Ok(DelayReport { verdict, baseline: Some(base), changed: Some(changed) })
}

/// Estimate of `E[f(X^T_t) w]` with killed paths contributing zero.
pub fn expectation(
    spec: &WalkSpec,
    tag: &TimeTag,
    t: f64,
    f: &(dyn Fn(Pt) -> f64 + Sync),
    n: usize,
    seed: u64,
) -> Result<Estimate> {
    let vals = map_paths(n, |p| -> Result<f64> {
        let s = match tag {
            TimeTag::None => read_at(spec, t, seed, p)?,
            TimeTag::L { symbol } => time_change_l(spec, symbol, t, seed, p)?,
            TimeTag::H { symbol } => time_change_h(spec, symbol, t, seed, p)?,
        };
        Ok(s.state.map_or(0.0, |x| f(x) * s.weight))
    });
    Ok(Estimate::from_samples(&vals.into_iter().collect::<Result<Vec<_>>>()?))
}
