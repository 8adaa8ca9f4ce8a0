//! Bernstein functions `Phi`, their Levy tails and derived constants.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::nonlocal_ops::mittag_leffler::{laplace_mixture, mittag_leffler};
use crate::quadrature::{integrate_zero_inf, tanh_sinh};
use crate::special::{erfc, exp_int_e1, gamma};

/// Survival function handle `y -> P(Y > y)`.
#[derive(Clone)]
pub struct SurvivalFn(pub Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl SurvivalFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, y: f64) -> f64 {
        (self.0)(y)
    }
}

impl fmt::Debug for SurvivalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SurvivalFn(..)")
    }
}

/// Law of the jumps of a compound Poisson subordinator.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum JumpLaw {
    /// `P(Y > y) = e^{-rate y}`.
    Exponential { rate: f64 },
    /// `Y = at` almost surely.
    PointMass { at: f64 },
    /// `P(Y > y) = E_alpha(-r y^alpha)`.
    MittagLeffler { alpha: f64, r: f64 },
    /// `P(Y > y) = (y / threshold)^{-alpha}` above the threshold, i.e. the
    /// jumps of an `alpha`-stable subordinator that exceed `threshold`.
    Pareto { threshold: f64, alpha: f64 },
    /// User supplied survival function; sampled by numerical inversion.
    #[serde(skip)]
    Custom(SurvivalFn),
}

impl JumpLaw {
    pub fn survival(&self, y: f64) -> f64 {
        if y < 0.0 {
            return 1.0;
        }
        match *self {
            JumpLaw::Exponential { rate } => (-rate * y).exp(),
            JumpLaw::PointMass { at } => {
                if y < at {
                    1.0
                } else {
                    0.0
                }
            }
            JumpLaw::MittagLeffler { alpha, r } => mittag_leffler(alpha, -r * y.powf(alpha)).clamp(0.0, 1.0),
            JumpLaw::Pareto { threshold, alpha } => {
                if y < threshold {
                    1.0
                } else {
                    (y / threshold).powf(-alpha)
                }
            }
            JumpLaw::Custom(ref s) => s.eval(y),
        }
    }

    /// Jump density, where one exists.
    pub fn density(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        Ok(match *self {
            JumpLaw::Exponential { rate } => rate * (-rate * y).exp(),
            JumpLaw::PointMass { .. } => {
                return Err(Error::Unsupported("point-mass jump law has no density".into()))
            }
            JumpLaw::MittagLeffler { alpha, r } => {
                if alpha == 1.0 {
                    r * (-r * y).exp()
                } else {
                    let s = r.powf(1.0 / alpha);
                    s * laplace_mixture(alpha, s * y, 1)
                }
            }
            JumpLaw::Pareto { threshold, alpha } => {
                if y < threshold {
                    0.0
                } else {
                    alpha * threshold.powf(alpha) * y.powf(-alpha - 1.0)
                }
            }
            JumpLaw::Custom(ref s) => {
                let h = 1e-6 * y.max(1e-3);
                let lo = (y - h).max(0.0);
                (s.eval(lo) - s.eval(y + h)) / (y + h - lo)
            }
        })
    }

    /// `E[Y]`, infinite when the tail is too heavy.
    pub fn mean(&self) -> ExtReal {
        match *self {
            JumpLaw::Exponential { rate } => ExtReal::Finite(1.0 / rate),
            JumpLaw::PointMass { at } => ExtReal::Finite(at),
            JumpLaw::MittagLeffler { alpha, r } => {
                if alpha == 1.0 {
                    ExtReal::Finite(1.0 / r)
                } else {
                    ExtReal::Infinite
                }
            }
            JumpLaw::Pareto { threshold, alpha } => {
                if alpha > 1.0 {
                    ExtReal::Finite(alpha * threshold / (alpha - 1.0))
                } else {
                    ExtReal::Infinite
                }
            }
            JumpLaw::Custom(ref s) => match integrate_zero_inf(|y| s.eval(y), 1e-10) {
                Ok(v) if v.is_finite() && v < 1e12 => ExtReal::Finite(v),
                _ => ExtReal::Infinite,
            },
        }
    }

    /// Laplace transform `E[e^{-lambda Y}]` for complex `lambda`, when available
    /// in closed form with at most polynomial growth in the left half plane.
    pub fn laplace_complex(&self, lambda: Complex64) -> Option<Complex64> {
        match *self {
            JumpLaw::Exponential { rate } => Some(rate / (lambda + rate)),
            JumpLaw::MittagLeffler { alpha, r } => Some(r / (lambda.powf(alpha) + r)),
            _ => None,
        }
    }

    /// Draw one jump.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            JumpLaw::Exponential { rate } => -open01(rng).ln() / rate,
            JumpLaw::PointMass { at } => at,
            JumpLaw::MittagLeffler { alpha, r } => {
                let u = open01(rng);
                let v = open01(rng);
                let w = -u.ln();
                if alpha == 1.0 {
                    return w / r;
                }
                let (s, c) = (alpha * PI).sin_cos();
                let base = s / (alpha * PI * v).tan() - c;
                r.powf(-1.0 / alpha) * w * base.powf(1.0 / alpha)
            }
            JumpLaw::Pareto { threshold, alpha } => threshold * open01(rng).powf(-1.0 / alpha),
            JumpLaw::Custom(ref s) => {
                let u = open01(rng);
                let mut hi = 1.0;
                while s.eval(hi) > u && hi < 1e300 {
                    hi *= 2.0;
                }
                let mut lo = 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if s.eval(mid) > u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 1e-14 * hi {
                        break;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            JumpLaw::Exponential { rate } => rate > 0.0 && rate.is_finite(),
            JumpLaw::PointMass { at } => at > 0.0 && at.is_finite(),
            JumpLaw::MittagLeffler { alpha, r } => alpha > 0.0 && alpha <= 1.0 && r > 0.0,
            JumpLaw::Pareto { threshold, alpha } => threshold > 0.0 && alpha > 0.0 && alpha < 1.0,
            JumpLaw::Custom(ref s) => return validate_survival(s),
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("invalid jump law parameters: {self:?}")))
        }
    }
}

fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

fn validate_survival(s: &SurvivalFn) -> Result<()> {
    let s0 = s.eval(0.0);
    if (s0 - 1.0).abs() > 1e-12 {
        return Err(Error::Validation(format!("survival(0) = {s0}, expected 1")));
    }
    let mut prev = s0;
    for i in 0..=240 {
        let y = 10f64.powf(-6.0 + 12.0 * i as f64 / 240.0);
        let v = s.eval(y);
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Validation(format!("survival({y}) = {v} outside [0, 1]")));
        }
        if v > prev + 1e-12 {
            return Err(Error::Validation(format!("survival increases near y = {y}")));
        }
        prev = v;
    }
    Ok(())
}

/// Extended non-negative real: a finite value or `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

/// The family a symbol belongs to, with its parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolKind {
    /// `Phi(l) = l^alpha`.
    Stable { alpha: f64 },
    /// `Phi(l) = a ln(1 + l / b)`.
    Gamma { a: f64, b: f64 },
    /// `Phi(l) = (theta + 1) l / (theta + l)`, `theta = alpha / (1 - alpha)`.
    CaputoFabrizio { alpha: f64 },
    /// Caputo-Fabrizio symbol plus the drift `c alpha l`.
    DriftedCf { c: f64, alpha: f64 },
    /// `Phi(l) = l^{2 alpha} + l^alpha`.
    TelegraphSum { alpha: f64 },
    /// `Phi(l) = sqrt(l + mu^2 / 4) - |mu| / 2`.
    Tempered { mu: f64 },
    /// `Phi(l) = rate * (1 - E[e^{-l Y}])`.
    CompoundPoisson { rate: f64, jump: JumpLaw },
    /// `Phi(l) = l`.
    Linear,
}

/// A Bernstein function with its cached analytic metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "SymbolKind", into = "SymbolKind")]
pub struct BernsteinSymbol {
    kind: SymbolKind,
    finite_levy_mass: bool,
    finite_phi_prime: bool,
}

impl TryFrom<SymbolKind> for BernsteinSymbol {
    type Error = Error;
    fn try_from(kind: SymbolKind) -> Result<Self> {
        BernsteinSymbol::new(kind)
    }
}

impl From<BernsteinSymbol> for SymbolKind {
    fn from(s: BernsteinSymbol) -> Self {
        s.kind
    }
}

fn cf_theta(alpha: f64) -> Option<f64> {
    if alpha >= 1.0 {
        None
    } else {
        Some(alpha / (1.0 - alpha))
    }
}

impl BernsteinSymbol {
    pub fn new(kind: SymbolKind) -> Result<Self> {
        let unit = |a: f64| a > 0.0 && a <= 1.0;
        let ok = match &kind {
            SymbolKind::Stable { alpha } => *alpha > 0.0 && *alpha < 1.0,
            SymbolKind::Gamma { a, b } => *a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite(),
            SymbolKind::CaputoFabrizio { alpha } => unit(*alpha),
            SymbolKind::DriftedCf { c, alpha } => *c >= 0.0 && c.is_finite() && unit(*alpha),
            SymbolKind::TelegraphSum { alpha } => *alpha > 0.0 && *alpha < 0.5,
            SymbolKind::Tempered { mu } => mu.is_finite(),
            SymbolKind::CompoundPoisson { rate, jump } => {
                jump.validate()?;
                *rate >= 0.0 && rate.is_finite()
            }
            SymbolKind::Linear => true,
        };
        if !ok {
            return Err(domain(format!("invalid symbol parameters: {kind:?}")));
        }
        let finite_levy_mass = match &kind {
            SymbolKind::CaputoFabrizio { .. } | SymbolKind::DriftedCf { .. } => true,
            SymbolKind::CompoundPoisson { .. } | SymbolKind::Linear => true,
            _ => false,
        };
        let mut s = Self { kind, finite_levy_mass, finite_phi_prime: false };
        s.finite_phi_prime = s.phi_prime_at_zero().is_finite();
        Ok(s)
    }

    pub fn stable(alpha: f64) -> Result<Self> {
        Self::new(SymbolKind::Stable { alpha })
    }

    pub fn gamma(a: f64, b: f64) -> Result<Self> {
        Self::new(SymbolKind::Gamma { a, b })
    }

    pub fn caputo_fabrizio(alpha: f64) -> Result<Self> {
        Self::new(SymbolKind::CaputoFabrizio { alpha })
    }

    pub fn drifted_cf(c: f64, alpha: f64) -> Result<Self> {
        Self::new(SymbolKind::DriftedCf { c, alpha })
    }

    pub fn telegraph_sum(alpha: f64) -> Result<Self> {
        Self::new(SymbolKind::TelegraphSum { alpha })
    }

    pub fn tempered(mu: f64) -> Result<Self> {
        Self::new(SymbolKind::Tempered { mu })
    }

    pub fn compound_poisson(rate: f64, jump: JumpLaw) -> Result<Self> {
        Self::new(SymbolKind::CompoundPoisson { rate, jump })
    }

    pub fn linear() -> Self {
        Self::new(SymbolKind::Linear).expect("linear symbol is always valid")
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    /// Short identifier used in reports and cache keys.
    pub fn label(&self) -> String {
        serde_json::to_string(&self.kind).unwrap_or_else(|_| format!("{:?}", self.kind))
    }

    pub fn has_finite_levy_mass(&self) -> bool {
        self.finite_levy_mass
    }

    pub fn has_finite_phi_prime(&self) -> bool {
        self.finite_phi_prime
    }

    /// Deterministic drift coefficient of the subordinator.
    pub fn drift(&self) -> f64 {
        match self.kind {
            SymbolKind::Linear => 1.0,
            SymbolKind::CaputoFabrizio { alpha } if alpha >= 1.0 => 1.0,
            SymbolKind::DriftedCf { c, alpha } => c * alpha + if alpha >= 1.0 { 1.0 } else { 0.0 },
            _ => 0.0,
        }
    }

    /// Total Levy mass for finite-activity symbols, `None` otherwise.
    pub fn levy_mass(&self) -> Option<f64> {
        match self.kind {
            SymbolKind::CaputoFabrizio { alpha } | SymbolKind::DriftedCf { alpha, .. } => {
                Some(cf_theta(alpha).map_or(0.0, |t| t + 1.0))
            }
            SymbolKind::CompoundPoisson { rate, .. } => Some(rate),
            SymbolKind::Linear => Some(0.0),
            _ => None,
        }
    }

    /// `Phi(lambda)`.
    pub fn phi(&self, lambda: f64) -> Result<f64> {
        if !(lambda >= 0.0) {
            return Err(domain(format!("Phi needs lambda >= 0, got {lambda}")));
        }
        if lambda == 0.0 {
            return Ok(0.0);
        }
        if lambda.is_infinite() {
            return Ok(match self.levy_mass() {
                Some(m) if self.drift() == 0.0 => m,
                _ => f64::INFINITY,
            });
        }
        Ok(match &self.kind {
            SymbolKind::Stable { alpha } => lambda.powf(*alpha),
            SymbolKind::Gamma { a, b } => a * (lambda / b).ln_1p(),
            SymbolKind::CaputoFabrizio { alpha } => cf_phi(*alpha, lambda),
            SymbolKind::DriftedCf { c, alpha } => c * alpha * lambda + cf_phi(*alpha, lambda),
            SymbolKind::TelegraphSum { alpha } => lambda.powf(2.0 * alpha) + lambda.powf(*alpha),
            SymbolKind::Tempered { mu } => {
                let c = 0.25 * mu * mu;
                // sqrt(l + c) - sqrt(c) without cancellation
                lambda / ((lambda + c).sqrt() + c.sqrt())
            }
            SymbolKind::CompoundPoisson { rate, jump } => match jump {
                JumpLaw::Exponential { rate: r } => rate * lambda / (r + lambda),
                JumpLaw::PointMass { at } => -rate * (-lambda * at).exp_m1(),
                JumpLaw::MittagLeffler { alpha, r } => {
                    let la = lambda.powf(*alpha);
                    rate * la / (la + r)
                }
                _ => self.phi_by_quadrature(lambda)?,
            },
            SymbolKind::Linear => lambda,
        })
    }

    /// `Phi(lambda)` reconstructed as `drift * lambda + lambda * int e^{-lambda z} tail(z) dz`.
    pub fn phi_by_quadrature(&self, lambda: f64) -> Result<f64> {
        if lambda <= 0.0 {
            return self.phi(lambda);
        }
        let tail = |z: f64| self.levy_tail(z).unwrap_or(0.0);
        // rescale z = y / lambda so the exponential decays on a unit scale
        let integral = match &self.kind {
            SymbolKind::CompoundPoisson { rate, jump } => {
                // bounded tail with possible jump discontinuities at known points
                let brk = match jump {
                    JumpLaw::PointMass { at } => Some(*at),
                    JumpLaw::Pareto { threshold, .. } => Some(*threshold),
                    _ => None,
                };
                let f = |y: f64| (-y).exp() * rate * jump.survival(y / lambda);
                match brk {
                    Some(b) => {
                        let yb = b * lambda;
                        crate::quadrature::integrate(f, 0.0, yb, 1e-10, 1e-12)?
                            + crate::quadrature::integrate_to_inf(f, yb, 1e-10, 1e-12)?
                    }
                    None => crate::quadrature::integrate_to_inf(f, 0.0, 1e-10, 1e-12)?,
                }
            }
            _ => integrate_zero_inf(|y| (-y).exp() * tail(y / lambda), 1e-12)?,
        };
        Ok(self.drift() * lambda + integral)
    }

    /// `Phi` on the complex plane for Laplace inversion. `None` when no
    /// suitable closed form exists.
    pub fn phi_complex(&self, lambda: Complex64) -> Option<Complex64> {
        Some(match &self.kind {
            SymbolKind::Stable { alpha } => lambda.powf(*alpha),
            SymbolKind::Gamma { a, b } => (1.0 + lambda / b).ln() * a,
            SymbolKind::CaputoFabrizio { alpha } => cf_phi_complex(*alpha, lambda),
            SymbolKind::DriftedCf { c, alpha } => lambda * (c * alpha) + cf_phi_complex(*alpha, lambda),
            SymbolKind::TelegraphSum { alpha } => lambda.powf(2.0 * alpha) + lambda.powf(*alpha),
            SymbolKind::Tempered { mu } => {
                let c = 0.25 * mu * mu;
                (lambda + c).sqrt() - c.sqrt()
            }
            SymbolKind::CompoundPoisson { rate, jump } => (1.0 - jump.laplace_complex(lambda)?) * *rate,
            SymbolKind::Linear => lambda,
        })
    }

    pub fn supports_complex(&self) -> bool {
        self.phi_complex(Complex64::new(1.0, 1.0)).is_some()
    }

    /// Levy tail `phi((z, inf))` for `z > 0`.
    pub fn levy_tail(&self, z: f64) -> Result<f64> {
        if !(z > 0.0) {
            return Err(domain(format!("Levy tail needs z > 0, got {z}")));
        }
        Ok(match &self.kind {
            SymbolKind::Stable { alpha } => stable_tail(*alpha, z),
            SymbolKind::Gamma { a, b } => a * exp_int_e1(b * z),
            SymbolKind::CaputoFabrizio { alpha } | SymbolKind::DriftedCf { alpha, .. } => {
                cf_theta(*alpha).map_or(0.0, |t| (t + 1.0) * (-t * z).exp())
            }
            SymbolKind::TelegraphSum { alpha } => stable_tail(2.0 * alpha, z) + stable_tail(*alpha, z),
            SymbolKind::Tempered { mu } => {
                let c = 0.25 * mu * mu;
                z.powf(-0.5) * (-c * z).exp() / PI.sqrt() - c.sqrt() * erfc((c * z).sqrt())
            }
            SymbolKind::CompoundPoisson { rate, jump } => rate * jump.survival(z),
            SymbolKind::Linear => 0.0,
        })
    }

    /// Levy density `-d/dz tail(z)`.
    pub fn levy_density(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(domain(format!("Levy density needs y > 0, got {y}")));
        }
        Ok(match &self.kind {
            SymbolKind::Stable { alpha } => stable_density(*alpha, y),
            SymbolKind::Gamma { a, b } => a * (-b * y).exp() / y,
            SymbolKind::CaputoFabrizio { alpha } | SymbolKind::DriftedCf { alpha, .. } => {
                cf_theta(*alpha).map_or(0.0, |t| t * (t + 1.0) * (-t * y).exp())
            }
            SymbolKind::TelegraphSum { alpha } => stable_density(2.0 * alpha, y) + stable_density(*alpha, y),
            SymbolKind::Tempered { mu } => {
                let c = 0.25 * mu * mu;
                y.powf(-1.5) * (-c * y).exp() / (2.0 * PI.sqrt())
            }
            SymbolKind::CompoundPoisson { rate, jump } => rate * jump.density(y)?,
            SymbolKind::Linear => 0.0,
        })
    }

    /// `int_0^s tail(z) dz`.
    pub fn tail_integral(&self, s: f64) -> Result<f64> {
        if s <= 0.0 {
            return Ok(0.0);
        }
        Ok(match &self.kind {
            SymbolKind::Stable { alpha } => s.powf(1.0 - alpha) / gamma(2.0 - alpha),
            SymbolKind::Gamma { a, b } => {
                let bs = b * s;
                a / b * (bs * exp_int_e1(bs) - (-bs).exp() + 1.0)
            }
            SymbolKind::CaputoFabrizio { alpha } | SymbolKind::DriftedCf { alpha, .. } => {
                cf_theta(*alpha).map_or(0.0, |t| -(t + 1.0) * (-t * s).exp_m1() / t)
            }
            SymbolKind::TelegraphSum { alpha } => {
                let a2 = 2.0 * alpha;
                s.powf(1.0 - a2) / gamma(2.0 - a2) + s.powf(1.0 - alpha) / gamma(2.0 - alpha)
            }
            SymbolKind::CompoundPoisson { rate, jump: JumpLaw::Exponential { rate: r } } => {
                -rate * (-r * s).exp_m1() / r
            }
            SymbolKind::CompoundPoisson { rate, jump: JumpLaw::PointMass { at } } => rate * s.min(*at),
            SymbolKind::Linear => 0.0,
            _ => tanh_sinh(|z, _, _| self.levy_tail(z).unwrap_or(0.0), 0.0, s, 1e-12)?,
        })
    }

    /// `lim_{l -> 0} Phi(l) / l`, the mean rate `E[H_1]`.
    pub fn phi_prime_at_zero(&self) -> ExtReal {
        match &self.kind {
            SymbolKind::Stable { .. } | SymbolKind::TelegraphSum { .. } => ExtReal::Infinite,
            SymbolKind::Gamma { a, b } => ExtReal::Finite(a / b),
            SymbolKind::CaputoFabrizio { alpha } => ExtReal::Finite(1.0 / alpha),
            SymbolKind::DriftedCf { c, alpha } => ExtReal::Finite(c * alpha + 1.0 / alpha),
            SymbolKind::Tempered { mu } => {
                if *mu == 0.0 {
                    ExtReal::Infinite
                } else {
                    ExtReal::Finite(1.0 / mu.abs())
                }
            }
            SymbolKind::CompoundPoisson { rate, jump } => match jump.mean() {
                ExtReal::Finite(m) => ExtReal::Finite(rate * m),
                ExtReal::Infinite if *rate == 0.0 => ExtReal::Finite(0.0),
                ExtReal::Infinite => ExtReal::Infinite,
            },
            SymbolKind::Linear => ExtReal::Finite(1.0),
        }
    }

    /// `Phi(psi)`, the multiplier of the subordinate operator on a mode with
    /// inner symbol value `psi`.
    pub fn compose_multiplier(&self, psi: f64) -> Result<f64> {
        self.phi(psi)
    }

    /// Numerical check of the Bernstein shape on a log-spaced grid:
    /// `Phi(0) = 0`, nondecreasing, concave, `Phi(l) / l` nonincreasing.
    pub fn check_shape(&self) -> Result<()> {
        if self.phi(0.0)? != 0.0 {
            return Err(Error::Validation("Phi(0) != 0".into()));
        }
        let grid: Vec<f64> = (0..=60).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 60.0)).collect();
        let vals: Vec<f64> = grid.iter().map(|&l| self.phi(l)).collect::<Result<_>>()?;
        let tol = |v: f64| 1e-10 * v.abs().max(1e-12);
        for i in 1..grid.len() {
            if vals[i] < vals[i - 1] - tol(vals[i]) {
                return Err(Error::Validation(format!("Phi decreases near {}", grid[i])));
            }
            if vals[i] / grid[i] > vals[i - 1] / grid[i - 1] + tol(vals[i] / grid[i]) {
                return Err(Error::Validation(format!("Phi(l)/l increases near {}", grid[i])));
            }
        }
        for i in 1..grid.len() - 1 {
            let s1 = (vals[i] - vals[i - 1]) / (grid[i] - grid[i - 1]);
            let s2 = (vals[i + 1] - vals[i]) / (grid[i + 1] - grid[i]);
            // slack covers quadrature noise in numerically evaluated symbols
            let slack = 1e-8 * s1.abs() + 1e-9 * vals[i + 1].abs() / (grid[i + 1] - grid[i]);
            if s2 > s1 + slack {
                return Err(Error::Validation(format!("Phi not concave near {}", grid[i])));
            }
        }
        Ok(())
    }
}

/// Compound Poisson symbol with the given jump rate and jump survival function.
pub fn symbol_from_jump_law(rate: f64, survival: SurvivalFn) -> Result<BernsteinSymbol> {
    validate_survival(&survival)?;
    BernsteinSymbol::compound_poisson(rate, JumpLaw::Custom(survival))
}

fn cf_phi(alpha: f64, lambda: f64) -> f64 {
    match cf_theta(alpha) {
        Some(t) => (t + 1.0) * lambda / (t + lambda),
        None => lambda,
    }
}

fn cf_phi_complex(alpha: f64, lambda: Complex64) -> Complex64 {
    match cf_theta(alpha) {
        Some(t) => lambda * (t + 1.0) / (lambda + t),
        None => lambda,
    }
}

fn stable_tail(alpha: f64, z: f64) -> f64 {
    z.powf(-alpha) / gamma(1.0 - alpha)
}

fn stable_density(alpha: f64, y: f64) -> f64 {
    alpha * y.powf(-alpha - 1.0) / gamma(1.0 - alpha)
}
