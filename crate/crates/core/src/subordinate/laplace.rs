//! Numerical inversion of Laplace transforms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, numeric, Result};

/// Inversion method and its node count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum LaplaceInverter {
    /// Fixed Talbot contour (Abate-Valko), needs a complex-capable transform.
    Talbot { nodes: usize },
    /// Gaver-Stehfest, real arithmetic only. `nodes` must be even and >= 8.
    GaverStehfest { nodes: usize },
}

impl Default for LaplaceInverter {
    fn default() -> Self {
        LaplaceInverter::Talbot { nodes: 32 }
    }
}

impl LaplaceInverter {
    pub fn gaver_stehfest() -> Self {
        LaplaceInverter::GaverStehfest { nodes: 14 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            LaplaceInverter::Talbot { nodes } if nodes >= 4 => Ok(()),
            LaplaceInverter::GaverStehfest { nodes } if nodes >= 8 && nodes % 2 == 0 => Ok(()),
            _ => Err(domain(format!("invalid inverter {self:?}"))),
        }
    }
}

/// Inverse transform of `f` at `t`. Gaver-Stehfest only evaluates `f` on the
/// positive real axis.
pub fn laplace_invert(f: &dyn Fn(Complex64) -> Complex64, t: f64, inv: LaplaceInverter) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain(format!("Laplace inversion needs t > 0, got {t}")));
    }
    inv.validate()?;
    let v = match inv {
        LaplaceInverter::Talbot { nodes } => talbot(f, t, nodes),
        LaplaceInverter::GaverStehfest { nodes } => gaver_stehfest(&|x| f(Complex64::new(x, 0.0)).re, t, nodes),
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(numeric(format!("Laplace inversion at t = {t} with {inv:?} produced {v}")))
    }
}

/// Gaver-Stehfest inversion of a real transform.
pub fn laplace_invert_real(f: &dyn Fn(f64) -> f64, t: f64, nodes: usize) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain(format!("Laplace inversion needs t > 0, got {t}")));
    }
    LaplaceInverter::GaverStehfest { nodes }.validate()?;
    let v = gaver_stehfest(f, t, nodes);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(numeric(format!("Gaver-Stehfest at t = {t} produced {v}")))
    }
}

fn talbot(f: &dyn Fn(Complex64) -> Complex64, t: f64, m: usize) -> f64 {
    let mf = m as f64;
    let r = 2.0 * mf / (5.0 * t);
    let mut sum = 0.5 * (f(Complex64::new(r, 0.0)) * (r * t).exp()).re;
    for k in 1..m {
        let theta = k as f64 * std::f64::consts::PI / mf;
        let cot = 1.0 / theta.tan();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let term = (s * t).exp() * f(s) * Complex64::new(1.0, sigma);
        sum += term.re;
    }
    r / mf * sum
}

fn stehfest_weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    let fact = |k: usize| -> f64 { (1..=k).map(|i| i as f64).product() };
    (1..=n)
        .map(|k| {
            let mut s = 0.0;
            for j in k.div_ceil(2)..=k.min(half) {
                s += (j as f64).powi(half as i32) * fact(2 * j)
                    / (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
            }
            if (k + half) % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect()
}

fn gaver_stehfest(f: &dyn Fn(f64) -> f64, t: f64, n: usize) -> f64 {
    let ln2t = std::f64::consts::LN_2 / t;
    stehfest_weights(n)
        .iter()
        .enumerate()
        .map(|(i, w)| w * f((i + 1) as f64 * ln2t))
        .sum::<f64>()
        * ln2t
}
