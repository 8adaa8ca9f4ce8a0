//! Eigenfunction expansions of the Dirichlet or Neumann Laplacian on an
//! interval or rectangle, and the solvers built on them.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, numeric, Error, Result};
use crate::nonlocal_ops::mittag_leffler::mittag_leffler;
use crate::quadrature::{gauss_legendre, tanh_sinh};
use crate::subordinate::{atom_at_zero, density_h, density_l, invert_symbol_transform};
use crate::symbols::{BernsteinSymbol, SymbolKind};

/// A point in the plane; intervals only read the first coordinate.
pub type Pt = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    Interval { length: f64 },
    Rectangle { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

/// Eigenmode with one-dimensional indices `(i, j)` and eigenvalue `mu` of `-Delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub i: usize,
    pub j: usize,
    pub mu: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenBasis {
    pub domain: DomainKind,
    pub bc: BoundaryCondition,
    /// Modes per direction.
    pub k: usize,
    modes: Vec<Mode>,
}

fn indices(bc: BoundaryCondition, k: usize) -> Vec<usize> {
    match bc {
        BoundaryCondition::Dirichlet => (1..=k).collect(),
        BoundaryCondition::Neumann => (0..k).collect(),
    }
}

fn e1(len: f64, bc: BoundaryCondition, i: usize, x: f64) -> f64 {
    let arg = i as f64 * PI * x / len;
    match bc {
        BoundaryCondition::Dirichlet => (2.0 / len).sqrt() * arg.sin(),
        BoundaryCondition::Neumann if i == 0 => 1.0 / len.sqrt(),
        BoundaryCondition::Neumann => (2.0 / len).sqrt() * arg.cos(),
    }
}

/// Composite Gauss-Legendre rule on `(0, len)`.
fn composite_rule(len: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(10);
    let h = len / panels as f64;
    let mut nodes = Vec::with_capacity(panels * x.len());
    let mut weights = Vec::with_capacity(panels * x.len());
    for p in 0..panels {
        let c = (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(c + 0.5 * h * xi);
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}

impl EigenBasis {
    /// Basis with `k` modes per direction (so `k * k` on a rectangle).
    pub fn new(kind: DomainKind, bc: BoundaryCondition, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(domain("truncation must be positive"));
        }
        let mut modes = Vec::new();
        match kind {
            DomainKind::Interval { length } => {
                if !(length > 0.0) {
                    return Err(domain("interval length must be positive"));
                }
                for i in indices(bc, k) {
                    modes.push(Mode { i, j: 0, mu: (i as f64 * PI / length).powi(2) });
                }
            }
            DomainKind::Rectangle { a, b } => {
                if !(a > 0.0 && b > 0.0) {
                    return Err(domain("rectangle sides must be positive"));
                }
                for i in indices(bc, k) {
                    for j in indices(bc, k) {
                        let mu = (i as f64 * PI / a).powi(2) + (j as f64 * PI / b).powi(2);
                        modes.push(Mode { i, j, mu });
                    }
                }
                modes.sort_by(|p, q| p.mu.total_cmp(&q.mu).then(p.i.cmp(&q.i)).then(p.j.cmp(&q.j)));
            }
        }
        Ok(Self { domain: kind, bc, k, modes })
    }

    /// Dirichlet interval with the default truncation of 64 modes.
    pub fn interval(length: f64) -> Result<Self> {
        Self::new(DomainKind::Interval { length }, BoundaryCondition::Dirichlet, 64)
    }

    /// Dirichlet rectangle with 32 x 32 modes.
    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        Self::new(DomainKind::Rectangle { a, b }, BoundaryCondition::Dirichlet, 32)
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn eigenvalue(&self, n: usize) -> f64 {
        self.modes[n].mu
    }

    pub fn eigenfunction(&self, n: usize, p: Pt) -> f64 {
        let m = self.modes[n];
        match self.domain {
            DomainKind::Interval { length } => e1(length, self.bc, m.i, p[0]),
            DomainKind::Rectangle { a, b } => e1(a, self.bc, m.i, p[0]) * e1(b, self.bc, m.j, p[1]),
        }
    }

    pub fn contains(&self, p: Pt) -> bool {
        match self.domain {
            DomainKind::Interval { length } => p[0] >= 0.0 && p[0] <= length,
            DomainKind::Rectangle { a, b } => p[0] >= 0.0 && p[0] <= a && p[1] >= 0.0 && p[1] <= b,
        }
    }

    /// `sum_k c_k e_k(p)`.
    pub fn evaluate(&self, coeffs: &[f64], p: Pt) -> f64 {
        coeffs.iter().enumerate().map(|(n, c)| c * self.eigenfunction(n, p)).sum()
    }

    /// Inner product matrix defect `max |(e_i, e_j) - delta_ij|` over the first `n` modes.
    pub fn orthonormality_defect(&self, n: usize) -> Result<f64> {
        let n = n.min(self.len());
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let c = project(&|p| self.eigenfunction(i, p), self)?;
            for (j, v) in c.values.iter().take(n).enumerate() {
                worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        Ok(worst)
    }
}

/// Coefficients `(f, e_k)` together with `||f||^2` from the same rule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Coefficients {
    pub values: Vec<f64>,
    pub norm_sq: f64,
}

impl Coefficients {
    /// `sum c_k^2 <= ||f||^2 + tol`.
    pub fn parseval_ok(&self, tol: f64) -> bool {
        self.values.iter().map(|c| c * c).sum::<f64>() <= self.norm_sq + tol
    }
}

/// Project `f` on the basis by composite Gauss-Legendre quadrature.
pub fn project(f: &dyn Fn(Pt) -> f64, basis: &EigenBasis) -> Result<Coefficients> {
    let panels = (2 * basis.k).max(32);
    let (values, norm_sq) = match basis.domain {
        DomainKind::Interval { length } => {
            let (x, w) = composite_rule(length, panels);
            let fx: Vec<f64> = x.iter().map(|&x| f([x, 0.0])).collect();
            let values = basis
                .modes
                .iter()
                .map(|m| x.iter().zip(&w).zip(&fx).map(|((&x, w), fx)| w * fx * e1(length, basis.bc, m.i, x)).sum())
                .collect();
            (values, w.iter().zip(&fx).map(|(w, f)| w * f * f).sum())
        }
        DomainKind::Rectangle { a, b } => {
            let (x, wx) = composite_rule(a, panels);
            let (y, wy) = composite_rule(b, panels);
            let idx = indices(basis.bc, basis.k);
            let ey: Vec<Vec<f64>> = idx.iter().map(|&j| y.iter().map(|&y| e1(b, basis.bc, j, y)).collect()).collect();
            // g[r][j] = sum_s wy_s f(x_r, y_s) e_j(y_s)
            let mut norm_sq = 0.0;
            let mut g = vec![vec![0.0; idx.len()]; x.len()];
            for (r, &xr) in x.iter().enumerate() {
                let row: Vec<f64> = y.iter().map(|&ys| f([xr, ys])).collect();
                norm_sq += wx[r] * row.iter().zip(&wy).map(|(v, w)| w * v * v).sum::<f64>();
                for (jj, e) in ey.iter().enumerate() {
                    g[r][jj] = row.iter().zip(&wy).zip(e).map(|((v, w), e)| v * w * e).sum();
                }
            }
            let pos = |i: usize| idx.iter().position(|&v| v == i).expect("mode index");
            let values = basis
                .modes
                .iter()
                .map(|m| {
                    let jj = pos(m.j);
                    x.iter().enumerate().map(|(r, &xr)| wx[r] * e1(a, basis.bc, m.i, xr) * g[r][jj]).sum()
                })
                .collect();
            (values, norm_sq)
        }
    };
    let c = Coefficients { values, norm_sq };
    if c.values.iter().any(|v: &f64| !v.is_finite()) || !c.norm_sq.is_finite() {
        return Err(numeric("projection produced non-finite coefficients"));
    }
    Ok(c)
}

/// Multiply coefficient `k` by `Phi(mu_k)`.
pub fn apply_phi_laplacian(sym: &BernsteinSymbol, basis: &EigenBasis, coeffs: &Coefficients) -> Result<Coefficients> {
    let values = coeffs
        .values
        .iter()
        .zip(&basis.modes)
        .map(|(c, m)| Ok(c * sym.compose_multiplier(m.mu)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Coefficients { values, norm_sq: f64::NAN })
}

fn evaluate_all(basis: &EigenBasis, coeffs: &[f64], grid: &[Pt]) -> Vec<f64> {
    grid.iter().map(|&p| basis.evaluate(coeffs, p)).collect()
}

/// `exp(-t Phi(mu_k)) (f, e_k)` evaluated on `grid`.
pub fn solve_space_nonlocal(
    sym: &BernsteinSymbol,
    basis: &EigenBasis,
    coeffs: &Coefficients,
    t: f64,
    grid: &[Pt],
) -> Result<Vec<f64>> {
    if !(t >= 0.0) {
        return Err(domain(format!("time must be nonnegative, got {t}")));
    }
    let c = coeffs
        .values
        .iter()
        .zip(&basis.modes)
        .map(|(c, m)| Ok(c * (-t * sym.phi(m.mu)?).exp()))
        .collect::<Result<Vec<_>>>()?;
    Ok(evaluate_all(basis, &c, grid))
}

type CacheKey = (String, u64, u64);

fn relaxation_cache() -> &'static Mutex<HashMap<CacheKey, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Relaxation function `r(t)` with Laplace transform
/// `(Phi(l) / l) / (Phi(l) + mu)`, memoized per symbol, `mu` and `t`.
pub fn relaxation(sym: &BernsteinSymbol, mu: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !(mu >= 0.0) {
        return Err(domain(format!("relaxation needs t, mu >= 0, got t = {t}, mu = {mu}")));
    }
    if t == 0.0 || mu == 0.0 {
        return Ok(1.0);
    }
    match sym.kind() {
        SymbolKind::Linear => return Ok((-mu * t).exp()),
        SymbolKind::Stable { alpha } => return Ok(mittag_leffler(*alpha, -mu * t.powf(*alpha))),
        _ => {}
    }
    let key = (sym.label(), mu.to_bits(), t.to_bits());
    if let Some(v) = relaxation_cache().lock().expect("cache lock").get(&key) {
        return Ok(*v);
    }
    let v = invert_symbol_transform(
        sym,
        t,
        &|s: Complex64| sym.phi_complex(s).map(|p| p / s / (p + mu)),
        &|s| {
            let p = sym.phi(s)?;
            Ok(p / s / (p + mu))
        },
    )?;
    relaxation_cache().lock().expect("cache lock").insert(key, v);
    Ok(v)
}

/// Solution of the time-nonlocal problem with symbol `sym` at time `t`.
pub fn solve_time_nonlocal(
    sym: &BernsteinSymbol,
    basis: &EigenBasis,
    coeffs: &Coefficients,
    t: f64,
    grid: &[Pt],
) -> Result<Vec<f64>> {
    let c = time_nonlocal_coefficients(sym, basis, coeffs, t)?;
    Ok(evaluate_all(basis, &c, grid))
}

pub fn time_nonlocal_coefficients(
    sym: &BernsteinSymbol,
    basis: &EigenBasis,
    coeffs: &Coefficients,
    t: f64,
) -> Result<Vec<f64>> {
    coeffs
        .values
        .iter()
        .zip(&basis.modes)
        .enumerate()
        .map(|(k, (c, m))| {
            if *c == 0.0 {
                return Ok(0.0);
            }
            relaxation(sym, m.mu, t)
                .map(|r| c * r)
                .map_err(|e| Error::Numeric(format!("mode {k} (mu = {}): {e}", m.mu)))
        })
        .collect()
}

/// Fixed exp-sinh rule on `(0, inf)`.
fn exp_sinh_rule() -> Vec<(f64, f64)> {
    let h = 1.0 / 32.0;
    let mut out = Vec::new();
    let mut j = (-4.0 / h) as i64;
    loop {
        let tau = j as f64 * h;
        if tau > 3.2 {
            break;
        }
        let s = (0.5 * PI * tau.sinh()).exp();
        out.push((s, h * 0.5 * PI * tau.cosh() * s));
        j += 1;
    }
    out
}

/// Per-mode weights `E[exp(-mu_k L_t)]` by quadrature against the density of `L_t`.
pub fn subordination_weights(sym: &BernsteinSymbol, basis: &EigenBasis, t: f64) -> Result<Vec<f64>> {
    if t == 0.0 {
        return Ok(vec![1.0; basis.len()]);
    }
    if matches!(sym.kind(), SymbolKind::Linear) {
        return Ok(basis.modes.iter().map(|m| (-m.mu * t).exp()).collect());
    }
    let rule: Vec<(f64, f64)> = exp_sinh_rule()
        .into_iter()
        .map(|(s, w)| density_l(sym, t, s).map(|l| (s, w * l)))
        .collect::<Result<_>>()?;
    Ok(basis
        .modes
        .iter()
        .map(|m| rule.iter().map(|(s, w)| w * (-m.mu * s).exp()).sum())
        .collect())
}

/// `int_0^inf Q_s f l(t, s) ds` evaluated on `grid`.
pub fn subordination_quadrature(
    basis: &EigenBasis,
    sym: &BernsteinSymbol,
    coeffs: &Coefficients,
    t: f64,
    grid: &[Pt],
) -> Result<Vec<f64>> {
    let w = subordination_weights(sym, basis, t)?;
    let c: Vec<f64> = coeffs.values.iter().zip(&w).map(|(c, w)| c * w).collect();
    Ok(evaluate_all(basis, &c, grid))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipticMode {
    /// `Phi(-G) u = f`.
    Subordinated,
    /// `-G u = Phi'(0+) f`.
    Classical,
}

pub fn solve_elliptic(
    sym: &BernsteinSymbol,
    basis: &EigenBasis,
    coeffs: &Coefficients,
    mode: EllipticMode,
    grid: &[Pt],
) -> Result<Vec<f64>> {
    let c = match mode {
        EllipticMode::Subordinated => coeffs
            .values
            .iter()
            .zip(&basis.modes)
            .map(|(c, m)| {
                let p = sym.phi(m.mu)?;
                if p <= 0.0 {
                    return Err(domain(format!("Phi(mu) = {p} at mu = {}", m.mu)));
                }
                Ok(c / p)
            })
            .collect::<Result<Vec<_>>>()?,
        EllipticMode::Classical => {
            let phi0 = sym
                .phi_prime_at_zero()
                .finite()
                .ok_or_else(|| Error::Unsupported("Phi'(0+) is infinite".into()))?;
            coeffs
                .values
                .iter()
                .zip(&basis.modes)
                .map(|(c, m)| {
                    if m.mu <= 0.0 {
                        return Err(domain("zero eigenvalue in classical elliptic mode"));
                    }
                    Ok(phi0 * c / m.mu)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(evaluate_all(basis, &c, grid))
}

/// `h_f(t, x) = E[f(x - H_t); H_t < x]`.
pub fn solve_hf(sym: &BernsteinSymbol, f: &dyn Fn(f64) -> f64, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
    let atom = atom_at_zero(sym, t);
    xs.iter()
        .map(|&x| {
            if x <= 0.0 {
                return Ok(0.0);
            }
            let err = std::cell::RefCell::new(None);
            let v = tanh_sinh(
                |y, _, _| match density_h(sym, t, y) {
                    Ok(h) => f(x - y) * h,
                    Err(e) => {
                        err.borrow_mut().get_or_insert(e);
                        0.0
                    }
                },
                0.0,
                x,
                1e-10,
            )?;
            match err.into_inner() {
                Some(e) => Err(e),
                None => Ok(v + atom * f(x)),
            }
        })
        .collect()
}

/// `l_f(t, x) = int_0^x f(x - y) l(t, y) dy`.
pub fn solve_lf(sym: &BernsteinSymbol, f: &dyn Fn(f64) -> f64, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
    xs.iter()
        .map(|&x| {
            if x <= 0.0 {
                return Ok(0.0);
            }
            let err = std::cell::RefCell::new(None);
            let v = tanh_sinh(
                |y, _, _| match density_l(sym, t, y) {
                    Ok(l) => f(x - y) * l,
                    Err(e) => {
                        err.borrow_mut().get_or_insert(e);
                        0.0
                    }
                },
                0.0,
                x,
                1e-10,
            )?;
            match err.into_inner() {
                Some(e) => Err(e),
                None => Ok(v),
            }
        })
        .collect()
}

/// One `(x, u)` CSV table.
pub fn table_csv(grid: &[Pt], values: &[f64], two_d: bool) -> String {
    let mut s = String::from(if two_d { "x,y,u\n" } else { "x,u\n" });
    for (p, v) in grid.iter().zip(values) {
        if two_d {
            s.push_str(&format!("{},{},{}\n", p[0], p[1], v));
        } else {
            s.push_str(&format!("{},{}\n", p[0], v));
        }
    }
    s
}
