//! Subordinator paths, their first-passage inverses and overshoots, and the
//! densities of `H_t` and `L_t`.

pub mod laplace;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, InverseGaussian, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{domain, numeric, Error, Result};
use crate::special::{gamma, ln_gamma};
use crate::symbols::{BernsteinSymbol, JumpLaw, SymbolKind};

pub use laplace::{laplace_invert, laplace_invert_real, LaplaceInverter};

/// How a path crosses a level inside one grid step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    /// No isolated jumps at grid scale: interpolate linearly.
    Continuous,
    /// Finitely many jumps per step, placed at the end of the step.
    Jump,
    /// Deterministic drift over the step followed by the step's jumps.
    DriftThenJump { drift: f64 },
}

/// Crossing rule implied by a symbol.
pub fn crossing_rule(sym: &BernsteinSymbol) -> Crossing {
    match sym.kind() {
        SymbolKind::Stable { .. }
        | SymbolKind::Gamma { .. }
        | SymbolKind::Tempered { .. }
        | SymbolKind::TelegraphSum { .. }
        | SymbolKind::Linear => Crossing::Continuous,
        SymbolKind::CaputoFabrizio { alpha } if *alpha >= 1.0 => Crossing::Continuous,
        SymbolKind::CaputoFabrizio { .. } | SymbolKind::CompoundPoisson { .. } => Crossing::Jump,
        SymbolKind::DriftedCf { .. } => Crossing::DriftThenJump { drift: sym.drift() },
    }
}

/// Positive `alpha`-stable variable with `E[e^{-l S}] = e^{-l^alpha}` (Kanter).
pub fn sample_positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u = PI * open01(rng);
    let e = -open01(rng).ln();
    let a = (alpha * u).sin().powf(alpha / (1.0 - alpha)) * ((1.0 - alpha) * u).sin()
        / u.sin().powf(1.0 / (1.0 - alpha));
    (a / e).powf((1.0 - alpha) / alpha)
}

fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

#[derive(Debug, Clone)]
enum Inc {
    Stable { alpha: f64, scale: f64 },
    Gamma(Gamma<f64>),
    Compound { count: Option<Poisson<f64>>, law: JumpLaw, drift: f64 },
    Telegraph { a1: f64, s1: f64, a2: f64, s2: f64 },
    Tempered(InverseGaussian<f64>),
    Deterministic(f64),
}

/// Exact sampler of `H_{s + dt} - H_s` for a fixed step.
#[derive(Debug, Clone)]
pub struct IncrementSampler {
    inc: Inc,
    dt: f64,
}

impl IncrementSampler {
    pub fn new(sym: &BernsteinSymbol, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(domain(format!("time step must be positive, got {dt}")));
        }
        let bad = |e: &dyn std::fmt::Display| numeric(format!("sampler setup: {e}"));
        let poisson = |mean: f64| -> Result<Option<Poisson<f64>>> {
            if mean > 0.0 {
                Poisson::new(mean).map(Some).map_err(|e| bad(&e))
            } else {
                Ok(None)
            }
        };
        let inc = match sym.kind() {
            SymbolKind::Stable { alpha } => Inc::Stable { alpha: *alpha, scale: dt.powf(1.0 / alpha) },
            SymbolKind::Gamma { a, b } => Inc::Gamma(Gamma::new(a * dt, 1.0 / b).map_err(|e| bad(&e))?),
            SymbolKind::CaputoFabrizio { alpha } | SymbolKind::DriftedCf { alpha, .. } => {
                if *alpha >= 1.0 {
                    Inc::Deterministic(sym.drift() * dt)
                } else {
                    let theta = alpha / (1.0 - alpha);
                    Inc::Compound {
                        count: poisson((theta + 1.0) * dt)?,
                        law: JumpLaw::Exponential { rate: theta },
                        drift: sym.drift() * dt,
                    }
                }
            }
            SymbolKind::TelegraphSum { alpha } => Inc::Telegraph {
                a1: 2.0 * alpha,
                s1: dt.powf(1.0 / (2.0 * alpha)),
                a2: *alpha,
                s2: dt.powf(1.0 / alpha),
            },
            SymbolKind::Tempered { mu } => {
                if *mu == 0.0 {
                    Inc::Stable { alpha: 0.5, scale: dt * dt }
                } else {
                    let c = 0.25 * mu * mu;
                    Inc::Tempered(InverseGaussian::new(dt / (2.0 * c.sqrt()), 0.5 * dt * dt).map_err(|e| bad(&e))?)
                }
            }
            SymbolKind::CompoundPoisson { rate, jump } => {
                Inc::Compound { count: poisson(rate * dt)?, law: jump.clone(), drift: 0.0 }
            }
            SymbolKind::Linear => Inc::Deterministic(dt),
        };
        Ok(Self { inc, dt })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.inc {
            Inc::Stable { alpha, scale } => scale * sample_positive_stable(*alpha, rng),
            Inc::Gamma(g) => g.sample(rng),
            Inc::Compound { count, law, drift } => {
                let n = count.as_ref().map_or(0, |p| p.sample(rng) as u64);
                let mut s = *drift;
                for _ in 0..n {
                    s += law.sample(rng);
                }
                s
            }
            Inc::Telegraph { a1, s1, a2, s2 } => {
                s1 * sample_positive_stable(*a1, rng) + s2 * sample_positive_stable(*a2, rng)
            }
            Inc::Tempered(ig) => ig.sample(rng),
            Inc::Deterministic(v) => *v,
        }
    }
}

/// Discretised subordinator path on the grid `i * dt`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubordinatorPath {
    pub dt: f64,
    pub values: Vec<f64>,
    pub symbol: BernsteinSymbol,
    pub seed: Option<u64>,
}

/// Sample `H` on `[0, T]` (the grid may overrun `T` by less than one step).
pub fn sample_path<R: Rng + ?Sized>(sym: &BernsteinSymbol, t_max: f64, dt: f64, rng: &mut R) -> Result<SubordinatorPath> {
    if !(dt > 0.0) || !(t_max >= dt) {
        return Err(domain(format!("need T >= dt > 0, got T = {t_max}, dt = {dt}")));
    }
    let mut path = SubordinatorPath { dt, values: vec![0.0], symbol: sym.clone(), seed: None };
    let sampler = IncrementSampler::new(sym, dt)?;
    path.extend_steps(&sampler, steps_for(t_max, dt), rng);
    Ok(path)
}

/// Sample `H` until it reaches `level`, with at most `max_steps` steps.
pub fn sample_until_level<R: Rng + ?Sized>(
    sym: &BernsteinSymbol,
    level: f64,
    dt: f64,
    max_steps: usize,
    rng: &mut R,
) -> Result<SubordinatorPath> {
    let sampler = IncrementSampler::new(sym, dt)?;
    let mut path = SubordinatorPath { dt, values: vec![0.0], symbol: sym.clone(), seed: None };
    path.extend_until(&sampler, level, max_steps, rng)?;
    Ok(path)
}

/// `L_t` from a freshly sampled path of `H` on a grid of step `dt`.
pub fn sample_inverse_at<R: Rng + ?Sized>(sym: &BernsteinSymbol, t: f64, dt: f64, rng: &mut R) -> Result<f64> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    let path = sample_until_level(sym, t, dt, 100_000_000, rng)?;
    path.invert_path(t)
}

fn steps_for(t: f64, dt: f64) -> usize {
    ((t / dt) - 1e-9).ceil().max(1.0) as usize
}

impl SubordinatorPath {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.time(i)).collect()
    }

    /// Last grid time.
    pub fn horizon(&self) -> f64 {
        self.time(self.values.len() - 1)
    }

    pub fn max_value(&self) -> f64 {
        *self.values.last().expect("path has at least one point")
    }

    fn extend_steps<R: Rng + ?Sized>(&mut self, sampler: &IncrementSampler, steps: usize, rng: &mut R) {
        self.values.reserve(steps);
        let linear = matches!(self.symbol.kind(), SymbolKind::Linear);
        for _ in 0..steps {
            let next = if linear {
                self.values.len() as f64 * self.dt
            } else {
                self.max_value() + sampler.sample(rng)
            };
            self.values.push(next);
        }
    }

    /// Append steps until the time horizon reaches `t_max`.
    pub fn extend_to<R: Rng + ?Sized>(&mut self, t_max: f64, rng: &mut R) -> Result<()> {
        let sampler = IncrementSampler::new(&self.symbol, self.dt)?;
        let target = steps_for(t_max, self.dt);
        let have = self.values.len() - 1;
        if target > have {
            self.extend_steps(&sampler, target - have, rng);
        }
        Ok(())
    }

    /// Append steps until the path value reaches `level`.
    pub fn extend_until<R: Rng + ?Sized>(
        &mut self,
        sampler: &IncrementSampler,
        level: f64,
        max_steps: usize,
        rng: &mut R,
    ) -> Result<()> {
        let mut steps = 0;
        while self.max_value() < level {
            if steps >= max_steps {
                return Err(Error::Horizon { requested: level, available: self.max_value() });
            }
            self.extend_steps(sampler, 1, rng);
            steps += 1;
        }
        Ok(())
    }

    /// `H_s` for `s` inside the horizon: linear interpolation for continuous
    /// crossing rules, right-continuous step evaluation otherwise.
    pub fn value_at(&self, s: f64) -> Result<f64> {
        if s <= 0.0 {
            return Ok(0.0);
        }
        let pos = s / self.dt;
        let i = pos.floor() as usize;
        if i + 1 >= self.values.len() {
            if i < self.values.len() && (pos - i as f64) < 1e-9 {
                return Ok(self.values[i]);
            }
            return Err(Error::Horizon { requested: s, available: self.horizon() });
        }
        let frac = pos - i as f64;
        Ok(match crossing_rule(&self.symbol) {
            Crossing::Continuous => self.values[i] + frac * (self.values[i + 1] - self.values[i]),
            Crossing::Jump => self.values[i],
            Crossing::DriftThenJump { drift } => self.values[i] + drift * frac * self.dt,
        })
    }

    /// First index `j` with `values[j] >= t`.
    fn crossing_index(&self, values: impl Fn(usize) -> f64, t: f64) -> Result<usize> {
        let n = self.values.len();
        if values(n - 1) < t {
            return Err(Error::Horizon { requested: t, available: values(n - 1) });
        }
        let (mut lo, mut hi) = (0usize, n - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if values(mid) >= t {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    fn first_passage(&self, extra_drift: f64, t: f64) -> Result<(f64, f64)> {
        if t <= 0.0 {
            return Ok((0.0, 0.0));
        }
        let dt = self.dt;
        let v = |i: usize| self.values[i] + extra_drift * i as f64 * dt;
        let j = self.crossing_index(v, t)?;
        if j == 0 {
            return Ok((0.0, 0.0));
        }
        let (a, b) = (v(j - 1), v(j));
        let t0 = self.time(j - 1);
        let rule = match crossing_rule(&self.symbol) {
            Crossing::Jump if extra_drift > 0.0 => Crossing::DriftThenJump { drift: extra_drift },
            Crossing::DriftThenJump { drift } => Crossing::DriftThenJump { drift: drift + extra_drift },
            r => r,
        };
        Ok(match rule {
            Crossing::Continuous => {
                let s = if b > a { t0 + dt * (t - a) / (b - a) } else { t0 + dt };
                let over = if matches!(self.symbol.kind(), SymbolKind::Linear) && extra_drift == 0.0 {
                    0.0
                } else {
                    b - t
                };
                (s, over)
            }
            Crossing::Jump => (self.time(j), b - t),
            Crossing::DriftThenJump { drift } => {
                if a + drift * dt >= t && drift > 0.0 {
                    (t0 + (t - a) / drift, 0.0)
                } else {
                    (self.time(j), b - t)
                }
            }
        })
    }

    /// `L_t = inf { s : H_s >= t }` on the grid.
    pub fn invert_path(&self, t: f64) -> Result<f64> {
        self.first_passage(0.0, t).map(|r| r.0)
    }

    /// First passage of `drift * s + H_s` through `t`.
    pub fn invert_drifted(&self, drift: f64, t: f64) -> Result<f64> {
        if drift < 0.0 {
            return Err(domain(format!("drift must be nonnegative, got {drift}")));
        }
        self.first_passage(drift, t).map(|r| r.0)
    }

    /// Overshoot `H_{L_t} - t` at grid resolution. Crossings realised by a
    /// deterministic drift have zero overshoot; otherwise the value after the
    /// crossing step is used.
    pub fn overshoot(&self, t: f64) -> Result<f64> {
        self.first_passage(0.0, t).map(|r| r.1.max(0.0))
    }

    /// CSV rows `t,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,value\n");
        for (i, v) in self.values.iter().enumerate() {
            s.push_str(&format!("{},{}\n", self.time(i), v));
        }
        s
    }
}

fn invert_checked(f: &dyn Fn(Complex64) -> Complex64, t: f64) -> Result<f64> {
    let a = laplace_invert(f, t, LaplaceInverter::Talbot { nodes: 32 })?;
    let b = laplace_invert(f, t, LaplaceInverter::Talbot { nodes: 24 })?;
    if (a - b).abs() > 1e-6 + 1e-4 * a.abs() {
        return Err(numeric(format!("Talbot inversion unstable at t = {t}: {a} (32 nodes) vs {b} (24 nodes)")));
    }
    Ok(a)
}

/// Density of the standard positive stable law (`t = 1`) through Kanter's
/// integral: with `A` as in [`sample_positive_stable`],
/// `g(x) = a / (1 - a) x^{-1/(1-a)} E[A(U) exp(-A(U) x^{-a/(1-a)})]`, `U ~ U(0, pi)`.
pub fn positive_stable_density(alpha: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let q = alpha / (1.0 - alpha);
    let y = x.powf(-q);
    let kanter = |u: f64| -> f64 {
        if u <= 0.0 || u >= PI {
            return 0.0;
        }
        let a = (alpha * u).sin().powf(q) * ((1.0 - alpha) * u).sin() / u.sin().powf(1.0 / (1.0 - alpha));
        let e = a * y;
        if e > 700.0 {
            0.0
        } else {
            a * (-e).exp()
        }
    };
    let integral = crate::quadrature::integrate(kanter, 0.0, PI, 1e-300, 1e-11).unwrap_or(f64::NAN);
    q * x.powf(-1.0 / (1.0 - alpha)) * integral / PI
}

fn stable_h(alpha: f64, t: f64, x: f64) -> f64 {
    // H_t = t^{1/alpha} H_1
    let s = t.powf(1.0 / alpha);
    positive_stable_density(alpha, x / s) / s
}

pub(crate) fn invert_symbol_transform(
    sym: &BernsteinSymbol,
    t: f64,
    fc: &dyn Fn(Complex64) -> Option<Complex64>,
    fr: &dyn Fn(f64) -> Result<f64>,
) -> Result<f64> {
    if sym.supports_complex() {
        // Talbot can fail when Phi grows along the contour; Gaver-Stehfest only
        // needs the real axis.
        invert_checked(&|s| fc(s).unwrap_or(Complex64::new(f64::NAN, 0.0)), t)
            .or_else(|_| laplace_invert_real(&|x| fr(x).unwrap_or(f64::NAN), t, 14))
    } else {
        laplace_invert_real(&|x| fr(x).unwrap_or(f64::NAN), t, 14)
    }
}

/// Mass of the atom of `H_t` at zero (finite-activity symbols without drift).
pub fn atom_at_zero(sym: &BernsteinSymbol, t: f64) -> f64 {
    match sym.levy_mass() {
        Some(m) if sym.drift() == 0.0 && !matches!(sym.kind(), SymbolKind::Linear) => (-m * t).exp(),
        _ => 0.0,
    }
}

fn exponential_jumps(sym: &BernsteinSymbol) -> Option<(f64, f64)> {
    match sym.kind() {
        SymbolKind::CaputoFabrizio { alpha } if *alpha < 1.0 => {
            let theta = alpha / (1.0 - alpha);
            Some((theta + 1.0, theta))
        }
        SymbolKind::CompoundPoisson { rate, jump: JumpLaw::Exponential { rate: r } } => Some((*rate, *r)),
        _ => None,
    }
}

/// Density of `H_t` at `x`. For finite-activity symbols this is the density
/// of the absolutely continuous part; see [`atom_at_zero`].
pub fn density_h(sym: &BernsteinSymbol, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) || !(x > 0.0) {
        return Err(domain(format!("density_h needs t, x > 0, got t = {t}, x = {x}")));
    }
    if sym.drift() > 0.0 {
        return Err(Error::Unsupported("H_t with a drift has no density on (0, inf) in closed or inverted form".into()));
    }
    match sym.kind() {
        SymbolKind::Stable { alpha } if *alpha == 0.5 => {
            return Ok(t * x.powf(-1.5) * (-t * t / (4.0 * x)).exp() / (2.0 * PI.sqrt()));
        }
        SymbolKind::Stable { alpha } => return Ok(stable_h(*alpha, t, x)),
        SymbolKind::Tempered { mu } => {
            // exponential tilt of the 1/2-stable density
            let c = 0.25 * mu * mu;
            let log = (t / (2.0 * PI.sqrt())).ln() - 1.5 * x.ln() - t * t / (4.0 * x) - c * x + t * c.sqrt();
            return Ok(log.exp());
        }
        SymbolKind::Gamma { a, b } => {
            let at = a * t;
            return Ok((at * b.ln() + (at - 1.0) * x.ln() - b * x - ln_gamma(at)).exp());
        }
        _ => {}
    }
    if let Some((mass, theta)) = exponential_jumps(sym) {
        // Poisson mixture of Gamma(k, theta) densities
        let mt = mass * t;
        let mut sum = 0.0;
        let mut log_w = -mt;
        for k in 1..2000usize {
            let kf = k as f64;
            log_w += mt.ln() - kf.ln();
            let term = (log_w + kf * theta.ln() + (kf - 1.0) * x.ln() - theta * x - ln_gamma(kf)).exp();
            sum += term;
            if kf > mt + theta * x + 10.0 && term < 1e-17 * sum {
                break;
            }
        }
        return Ok(sum);
    }
    let atom = atom_at_zero(sym, t);
    let v = invert_symbol_transform(
        sym,
        x,
        &|s| sym.phi_complex(s).map(|p| (-p * t).exp() - atom),
        &|s| Ok((-sym.phi(s)? * t).exp() - atom),
    )?;
    Ok(v.max(0.0))
}

/// Density of `L_t` at `x >= 0`, from its Laplace transform in `t`,
/// `(Phi(l) / l) e^{-x Phi(l)}`.
pub fn density_l(sym: &BernsteinSymbol, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) || !(x >= 0.0) {
        return Err(domain(format!("density_l needs t > 0, x >= 0, got t = {t}, x = {x}")));
    }
    if matches!(sym.kind(), SymbolKind::Linear) || (sym.drift() > 0.0 && x > 0.0) {
        return Err(Error::Unsupported("L_t has a singular law for symbols with drift".into()));
    }
    if let SymbolKind::Stable { alpha } = sym.kind() {
        if *alpha == 0.5 {
            return Ok((-x * x / (4.0 * t)).exp() / (PI * t).sqrt());
        }
        if x == 0.0 {
            return Ok(t.powf(-alpha) / gamma(1.0 - alpha));
        }
        // h(x, t) / l(t, x) = alpha x / t
        return Ok(stable_h(*alpha, x, t) * t / (alpha * x));
    }
    let v = invert_symbol_transform(
        sym,
        t,
        &|s| sym.phi_complex(s).map(|p| p / s * (-p * x).exp()),
        &|s| {
            let p = sym.phi(s)?;
            Ok(p / s * (-p * x).exp())
        },
    )?;
    Ok(v.max(0.0))
}

/// Density of `L_t` for the stable symbol from the exact representation
/// `L_t = (t / S)^alpha`, used as an independent check.
pub fn stable_inverse_exact<R: Rng + ?Sized>(alpha: f64, t: f64, rng: &mut R) -> f64 {
    (t / sample_positive_stable(alpha, rng)).powf(alpha)
}

/// Serializable density table row.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DensityRow {
    pub t: f64,
    pub x: f64,
    pub value: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_to_inf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn linear_path_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = sample_path(&BernsteinSymbol::linear(), 1.0, 0.1, &mut rng).unwrap();
        assert_eq!(p.len(), 11);
        for (t, v) in p.times().iter().zip(&p.values) {
            assert_eq!(t, v);
        }
        assert!((p.invert_path(0.37).unwrap() - 0.37).abs() < 1e-12);
        assert_eq!(p.overshoot(0.37).unwrap(), 0.0);
        assert!(matches!(p.invert_path(2.0), Err(Error::Horizon { .. })));
    }

    #[test]
    fn bad_steps_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_path(&BernsteinSymbol::linear(), 1.0, 0.0, &mut rng).is_err());
        assert!(sample_path(&BernsteinSymbol::linear(), 0.01, 0.1, &mut rng).is_err());
    }

    #[test]
    fn jump_plateau_maps_to_one_time() {
        let sym = BernsteinSymbol::caputo_fabrizio(0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = sample_path(&sym, 20.0, 0.01, &mut rng).unwrap();
        let j = (1..p.len()).find(|&i| p.values[i] - p.values[i - 1] > 0.5).unwrap();
        let (a, b) = (p.values[j - 1], p.values[j]);
        let s1 = p.invert_path(a + 1e-9).unwrap();
        let s2 = p.invert_path(b).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1, p.time(j));
        assert!(p.overshoot(a + 1e-9).unwrap() > 0.0);
    }

    #[test]
    fn exponential_jump_overshoot_is_memoryless() {
        // CF(1/2) jumps are Exp(1), so the overshoot of any level is Exp(1)
        let sym = BernsteinSymbol::caputo_fabrizio(0.5).unwrap();
        let v: Vec<f64> = (0..4000)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(i);
                sample_path(&sym, 40.0, 1e-3, &mut rng).unwrap().overshoot(1.0).unwrap()
            })
            .collect();
        let e = crate::stats::Estimate::from_samples(&v);
        assert!((e.mean - 1.0).abs() < 4.0 * e.se, "{e:?}");
    }

    #[test]
    fn drifted_inverse_special_cases() {
        let zero = BernsteinSymbol::compound_poisson(0.0, JumpLaw::Exponential { rate: 1.0 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = sample_path(&zero, 5.0, 0.01, &mut rng).unwrap();
        assert!((p.invert_drifted(1.0, 2.0).unwrap() - 2.0).abs() < 1e-9);
        let sym = BernsteinSymbol::caputo_fabrizio(0.5).unwrap();
        let p = sample_path(&sym, 5.0, 0.01, &mut rng).unwrap();
        for &t in &[0.3, 1.0, 2.5] {
            if t < p.max_value() {
                assert_eq!(p.invert_drifted(0.0, t).unwrap(), p.invert_path(t).unwrap());
            }
        }
    }

    #[test]
    fn closed_form_densities() {
        let g = BernsteinSymbol::gamma(1.0, 2.0).unwrap();
        assert!((density_h(&g, 1.0, 0.5).unwrap() - 2.0 * (-1f64).exp()).abs() < 1e-14);
        let s = BernsteinSymbol::stable(0.5).unwrap();
        let exact = (-0.25f64).exp() / (2.0 * PI.sqrt());
        assert!((density_h(&s, 1.0, 1.0).unwrap() - exact).abs() < 1e-14);
        assert!((density_l(&s, 1.0, 0.0).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-14);
        assert!(density_h(&s, 0.0, 1.0).is_err());
    }

    #[test]
    fn inverted_density_matches_closed_form() {
        let s = BernsteinSymbol::stable(0.5).unwrap();
        // a barely tempered symbol goes through Laplace inversion
        let s2 = BernsteinSymbol::tempered(1e-10).unwrap();
        for &(t, x) in &[(1.0, 0.3), (1.0, 2.0), (0.5, 1.0)] {
            let a = density_h(&s, t, x).unwrap();
            let b = density_h(&s2, t, x).unwrap();
            assert!((a - b).abs() < 1e-8, "h {a} vs {b}");
            let a = density_l(&s, t, x).unwrap();
            let b = density_l(&s2, t, x).unwrap();
            assert!((a - b).abs() < 1e-8, "l {a} vs {b}");
        }
    }

    #[test]
    fn kanter_density_matches_closed_form() {
        for &x in &[0.05f64, 0.3, 1.0, 4.0, 50.0] {
            let exact = x.powf(-1.5) * (-1.0 / (4.0 * x)).exp() / (2.0 * PI.sqrt());
            let v = positive_stable_density(0.5, x);
            assert!((v - exact).abs() < 1e-10 * exact.max(1e-6), "x={x}: {v} vs {exact}");
        }
    }

    #[test]
    fn densities_normalised() {
        let syms = [
            BernsteinSymbol::stable(0.5).unwrap(),
            BernsteinSymbol::stable(0.7).unwrap(),
            BernsteinSymbol::gamma(1.0, 2.0).unwrap(),
            BernsteinSymbol::tempered(1.0).unwrap(),
            BernsteinSymbol::caputo_fabrizio(0.5).unwrap(),
            BernsteinSymbol::compound_poisson(2.0, JumpLaw::MittagLeffler { alpha: 0.6, r: 1.0 }).unwrap(),
        ];
        for sym in syms {
            let f = |x: f64| density_h(&sym, 1.0, x).unwrap_or_else(|e| panic!("{}: {e}", sym.label()));
            // the mass below 1e-12 is below 1e-7 for every symbol here
            let head = crate::quadrature::tanh_sinh(|x, _, _| f(x), 1e-12, 1.0, 1e-10).unwrap();
            let tail = integrate_to_inf(f, 1.0, 1e-12, 1e-10).unwrap();
            let tot = head + tail + atom_at_zero(&sym, 1.0);
            assert!((tot - 1.0).abs() < 1e-6, "{}: {tot}", sym.label());
        }
    }

    #[test]
    fn l_at_zero_is_tail() {
        let cf = BernsteinSymbol::caputo_fabrizio(0.5).unwrap();
        let v = density_l(&cf, 1.0, 0.0).unwrap();
        assert!((v - cf.levy_tail(1.0).unwrap()).abs() < 1e-4);
    }

    #[test]
    fn stable_density_ratio() {
        let s = BernsteinSymbol::stable(0.5).unwrap();
        let (v, z) = (1.0, 2.0);
        let r = density_h(&s, v, z).unwrap() / density_l(&s, z, v).unwrap();
        assert!((r - 0.5 * v / z).abs() < 1e-4);
    }

    #[test]
    fn l_density_laplace_transform() {
        for sym in [BernsteinSymbol::stable(0.5).unwrap(), BernsteinSymbol::gamma(1.0, 2.0).unwrap()] {
            let (lam, x) = (1.0, 0.7);
            let lt = integrate_to_inf(|t| (-lam * t).exp() * density_l(&sym, t.max(1e-12), x).unwrap(), 0.0, 1e-9, 1e-9).unwrap();
            let p = sym.phi(lam).unwrap();
            let exact = p / lam * (-x * p).exp();
            assert!((lt - exact).abs() < 1e-4, "{}: {lt} vs {exact}", sym.label());
        }
    }
}
