//! Non-local operators driven by a Bernstein symbol: Caputo-Dzherbashian
//! (tail convolution with `u'`), Marchaud and Riemann-Liouville type
//! derivatives, the Caputo-Fabrizio operator and Sonine kernel pairs.

pub mod mittag_leffler;

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, tanh_sinh};
use crate::special::gamma;
use crate::subordinate::{laplace_invert, LaplaceInverter};
use crate::symbols::{BernsteinSymbol, JumpLaw, SymbolKind};

pub use mittag_leffler::mittag_leffler;

/// Function sampled on the uniform grid `i * step`.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    step: f64,
    values: Vec<f64>,
    derivative: Option<Vec<f64>>,
}

impl SampledFunction {
    pub fn new(step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step > 0.0) || values.len() < 2 {
            return Err(domain("sampled function needs step > 0 and at least two points"));
        }
        Ok(Self { step, values, derivative: None })
    }

    pub fn with_derivative(mut self, derivative: Vec<f64>) -> Result<Self> {
        if derivative.len() != self.values.len() {
            return Err(domain("derivative length differs from values"));
        }
        self.derivative = Some(derivative);
        Ok(self)
    }

    /// Sample `f` on `n + 1` points of `[0, t_max]`.
    pub fn from_fn(f: impl Fn(f64) -> f64, t_max: f64, n: usize) -> Result<Self> {
        let step = t_max / n as f64;
        Self::new(step, (0..=n).map(|i| f(i as f64 * step)).collect())
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grid(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    /// `u'` at grid index `i`: the supplied derivative, else second-order
    /// finite differences (central inside, one-sided at the ends).
    pub fn derivative_at(&self, i: usize) -> f64 {
        if let Some(d) = &self.derivative {
            return d[i];
        }
        let v = &self.values;
        let h = self.step;
        let n = v.len();
        if n == 2 {
            return (v[1] - v[0]) / h;
        }
        if i == 0 {
            (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
        } else if i == n - 1 {
            (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h)
        } else {
            (v[i + 1] - v[i - 1]) / (2.0 * h)
        }
    }
}

/// `int_0^t u'(t - s) tail(s) ds + drift * u'(t)` at grid index `idx`.
///
/// Product integration: on each cell `u'` is replaced by its exact cell mean
/// `(u_{k+1} - u_k) / step`, and the tail is integrated exactly over the cell.
pub fn caputo_dzherbashian(sym: &BernsteinSymbol, u: &SampledFunction, idx: usize) -> Result<f64> {
    if idx >= u.len() {
        return Err(domain(format!("grid index {idx} outside the sampled range")));
    }
    if idx == 0 {
        return Ok(0.0);
    }
    let h = u.step;
    let mut prev = 0.0;
    let mut sum = crate::stats::NeumaierSum::new();
    for m in 0..idx {
        let next = sym.tail_integral((m + 1) as f64 * h)?;
        let w = next - prev;
        prev = next;
        let k = idx - m - 1;
        sum.add(w * (u.values[k + 1] - u.values[k]) / h);
    }
    let drift = sym.drift();
    let local = if drift > 0.0 { drift * u.derivative_at(idx) } else { 0.0 };
    Ok(sum.value() + local)
}

/// Caputo-Fabrizio operator with `M(alpha) = 1` and lower limit 0:
/// `1/(1 - alpha) int_0^x u'(tau) exp(-alpha (x - tau) / (1 - alpha)) dtau`.
pub fn caputo_fabrizio(alpha: f64, u: &SampledFunction, idx: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain(format!("Caputo-Fabrizio order must lie in (0, 1), got {alpha}")));
    }
    if idx >= u.len() {
        return Err(domain(format!("grid index {idx} outside the sampled range")));
    }
    let theta = alpha / (1.0 - alpha);
    let h = u.step;
    let decay = (-theta * h).exp();
    // int_0^h (theta + 1) e^{-theta s} ds
    let cell = (theta + 1.0) * -(-theta * h).exp_m1() / theta;
    let mut acc = 0.0;
    for k in 0..idx {
        acc = decay * acc + cell * (u.values[k + 1] - u.values[k]) / h;
    }
    Ok(acc)
}

/// Caputo-Fabrizio operator on the whole grid (one pass).
pub fn caputo_fabrizio_all(alpha: f64, u: &SampledFunction) -> Result<Vec<f64>> {
    caputo_fabrizio(alpha, u, 0)?;
    let theta = alpha / (1.0 - alpha);
    let h = u.step;
    let decay = (-theta * h).exp();
    let cell = (theta + 1.0) * -(-theta * h).exp_m1() / theta;
    let mut out = Vec::with_capacity(u.len());
    let mut acc = 0.0;
    out.push(0.0);
    for k in 0..u.len() - 1 {
        acc = decay * acc + cell * (u.values[k + 1] - u.values[k]) / h;
        out.push(acc);
    }
    Ok(out)
}

fn point_mass(sym: &BernsteinSymbol) -> Option<(f64, f64)> {
    match sym.kind() {
        SymbolKind::CompoundPoisson { rate, jump: JumpLaw::PointMass { at } } => Some((*rate, *at)),
        _ => None,
    }
}

fn derivative(u: &dyn Fn(f64) -> f64, x: f64) -> (f64, f64) {
    let h = 1e-4 * x.max(1e-3);
    let (um, u0, up) = (u(x - h), u(x), u(x + h));
    ((up - um) / (2.0 * h), (up - 2.0 * u0 + um) / (h * h))
}

fn check_finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numeric(format!("{what}: quadrature diverged")))
    }
}

/// Marchaud type derivative `int_0^inf (u(x) - u(x - y)) phi(dy)` of `u`
/// extended by zero on the negative half-line, plus the drift term.
pub fn marchaud_minus(sym: &BernsteinSymbol, u: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("Marchaud derivative needs x > 0, got {x}")));
    }
    let ue = |y: f64| if y <= 0.0 { 0.0 } else { u(y) };
    let ux = ue(x);
    let drift = sym.drift();
    let drift_term = if drift > 0.0 { drift * derivative(&ue, x).0 } else { 0.0 };
    if let Some((rate, at)) = point_mass(sym) {
        return Ok(rate * (ux - ue(x - at)) + drift_term);
    }
    if matches!(sym.kind(), SymbolKind::Linear) {
        return Ok(drift_term);
    }
    // the jumps longer than x see u = 0
    let far = ux * sym.levy_tail(x)?;
    // head (0, delta): second-order Taylor expansion avoids cancellation
    let delta = 1e-3 * x;
    let (d1, d2) = derivative(&ue, x);
    let m1 = tanh_sinh(|y, _, _| y * sym.levy_density(y).unwrap_or(f64::NAN), 0.0, delta, 1e-12)?;
    let m2 = tanh_sinh(|y, _, _| y * y * sym.levy_density(y).unwrap_or(f64::NAN), 0.0, delta, 1e-12)?;
    let head = d1 * m1 - 0.5 * d2 * m2;
    let body = tanh_sinh(
        |_, dy, dx| {
            let y = delta + dy;
            // dx = x - y
            (ux - ue(dx)) * sym.levy_density(y).unwrap_or(f64::NAN)
        },
        delta,
        x,
        1e-11,
    )?;
    check_finite(head + body + far + drift_term, "marchaud_minus")
}

/// Riemann-Liouville type derivative `d/dx int_0^x u(x - y) tail(y) dy`, plus
/// the drift term.
pub fn riemann_liouville_minus(sym: &BernsteinSymbol, u: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("Riemann-Liouville derivative needs x > 0, got {x}")));
    }
    let ue = |y: f64| if y <= 0.0 { 0.0 } else { u(y) };
    let drift = sym.drift();
    let drift_term = if drift > 0.0 { drift * derivative(&ue, x).0 } else { 0.0 };
    if matches!(sym.kind(), SymbolKind::Linear) {
        return Ok(drift_term);
    }
    let conv = |z: f64| -> Result<f64> {
        if let Some((rate, at)) = point_mass(sym) {
            return integrate(|y| ue(z - y) * rate, 0.0, z.min(at), 1e-13, 1e-12);
        }
        tanh_sinh(|_, y, zy| ue(zy) * sym.levy_tail(y).unwrap_or(f64::NAN), 0.0, z, 1e-13)
    };
    let h = 1e-3 * x;
    let d = (-conv(x + 2.0 * h)? + 8.0 * conv(x + h)? - 8.0 * conv(x - h)? + conv(x - 2.0 * h)?) / (12.0 * h);
    check_finite(d + drift_term, "riemann_liouville_minus")
}

/// Caputo type derivative in tail-convolution form
/// `int_0^x u'(x - s) tail(s) ds` for a differentiable `u` with derivative `du`.
pub fn caputo_convolution(sym: &BernsteinSymbol, du: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("Caputo derivative needs x > 0, got {x}")));
    }
    let v = tanh_sinh(|_, s, xs| du(xs) * sym.levy_tail(s).unwrap_or(f64::NAN), 0.0, x, 1e-12)?;
    check_finite(v + sym.drift() * du(x), "caputo_convolution")
}

type Kernel = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Sonine pair: `kappa * ell = 1` with `kappa` the potential density of `H`
/// and `ell = l(., 0)` the Levy tail.
#[derive(Clone)]
pub struct SoninePair {
    pub kappa: Kernel,
    pub ell: Kernel,
    pub symbol: BernsteinSymbol,
}

impl std::fmt::Debug for SoninePair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SoninePair").field("symbol", &self.symbol).finish_non_exhaustive()
    }
}

impl SoninePair {
    /// `int_0^t kappa(z) ell(t - z) dz`, which should equal 1.
    pub fn convolution(&self, t: f64) -> Result<f64> {
        tanh_sinh(|_, z, tz| (self.kappa)(z) * (self.ell)(tz), 0.0, t, 1e-13)
    }
}

/// Sonine pair of `sym`. Closed forms for stable symbols; otherwise `kappa`
/// is obtained by inverting `1 / Phi`, which needs a finite `Phi'(0)` and no
/// atom in the potential measure.
pub fn sonine_pair(sym: &BernsteinSymbol) -> Result<SoninePair> {
    if let SymbolKind::Stable { alpha } = *sym.kind() {
        let (ga, gb) = (gamma(alpha), gamma(1.0 - alpha));
        return Ok(SoninePair {
            kappa: Arc::new(move |x| x.powf(alpha - 1.0) / ga),
            ell: Arc::new(move |t| t.powf(-alpha) / gb),
            symbol: sym.clone(),
        });
    }
    if sym.has_finite_levy_mass() {
        return Err(Error::Unsupported(
            "the potential measure of a finite-activity symbol has an atom at 0".into(),
        ));
    }
    if !sym.has_finite_phi_prime() || !sym.supports_complex() {
        return Err(Error::Unsupported(format!("no potential density available for {}", sym.label())));
    }
    let s1 = sym.clone();
    let s2 = sym.clone();
    Ok(SoninePair {
        kappa: Arc::new(move |x| {
            let f = |l: Complex64| 1.0 / s1.phi_complex(l).unwrap_or(Complex64::new(f64::NAN, 0.0));
            laplace_invert(&f, x, LaplaceInverter::default()).unwrap_or(f64::NAN)
        }),
        ell: Arc::new(move |t| s2.levy_tail(t).unwrap_or(f64::NAN)),
        symbol: sym.clone(),
    })
}

/// Both sides of the Young bound on `[0, T]`:
/// `(int |D u| dt, Phi'(0) int |u'| dt)`.
pub fn young_bound(sym: &BernsteinSymbol, u: &SampledFunction) -> Result<(f64, f64)> {
    let phi0 = sym
        .phi_prime_at_zero()
        .finite()
        .ok_or_else(|| Error::Unsupported("Young bound needs a finite Phi'(0)".into()))?;
    let h = u.step;
    let d: Vec<f64> = (0..u.len()).map(|i| caputo_dzherbashian(sym, u, i)).collect::<Result<_>>()?;
    // trapezoid for the operator, exact cell sums for |u'| of the piecewise-linear interpolant
    let lhs: f64 = d.windows(2).map(|w| 0.5 * h * (w[0].abs() + w[1].abs())).sum();
    let tv: f64 = u.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    Ok((lhs, phi0 * tv))
}
