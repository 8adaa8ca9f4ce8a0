//! One-parameter Mittag-Leffler function `E_a(z) = sum z^k / Gamma(a k + 1)`.
//!
//! For `z < 0` and `0 < a < 1` the series suffers catastrophic cancellation
//! once its largest term is large, so we switch to the completely monotone
//! representation
//! `E_a(-t^a) = int_0^inf e^{-r t} K_a(r) dr`,
//! `K_a(r) = sin(a pi) r^{a-1} / (pi (r^{2a} + 2 r^a cos(a pi) + 1))`.

use std::f64::consts::PI;

use crate::quadrature::{integrate_to_inf, tanh_sinh};
use crate::special::ln_gamma;

/// Largest series term we accept for negative arguments. The absolute
/// rounding error of the series is about `MAX_SERIES_TERM * 1e-16`.
pub const MAX_SERIES_TERM: f64 = 1e3;

/// `E_alpha(z)` for `alpha` in `(0, 1]` and real `z`.
pub fn mittag_leffler(alpha: f64, z: f64) -> f64 {
    assert!(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
    if z == 0.0 {
        return 1.0;
    }
    if alpha == 1.0 {
        return z.exp();
    }
    if z > 0.0 || largest_term(alpha, -z) <= MAX_SERIES_TERM {
        return series(alpha, z);
    }
    integral(alpha, -z)
}

/// Power series, exposed for cross-checks.
pub fn series(alpha: f64, z: f64) -> f64 {
    let lz = z.abs().ln();
    let neg = z < 0.0;
    let mut sum = 1.0;
    let mut k = 1usize;
    let mut past_peak = false;
    let mut prev = 0.0f64;
    loop {
        let lt = k as f64 * lz - ln_gamma(alpha * k as f64 + 1.0);
        let mag = lt.exp();
        let term = if neg && k % 2 == 1 { -mag } else { mag };
        sum += term;
        if mag < prev {
            past_peak = true;
        }
        prev = mag;
        if past_peak && mag <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
        k += 1;
        if k > 5000 {
            break;
        }
    }
    sum
}

/// `E_alpha(-x)` for `x > 0` through the spectral integral.
pub fn integral(alpha: f64, x: f64) -> f64 {
    let t = x.powf(1.0 / alpha);
    laplace_mixture(alpha, t, 0)
}

/// `int_0^inf r^p e^{-r t} K_alpha(r) dr` for `p` in `{0, 1}`.
///
/// With `p = 0` this is `E_alpha(-t^alpha)`; with `p = 1` it is minus its
/// derivative in `t`.
pub fn laplace_mixture(alpha: f64, t: f64, p: i32) -> f64 {
    let (s, c) = (alpha * PI).sin_cos();
    // substitute r = v / t
    let kern = move |v: f64| -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        let r = v / t;
        let ra = r.powf(alpha);
        let den = ra * ra + 2.0 * ra * c + 1.0;
        s * r.powf(alpha - 1.0) / (PI * den) * v.powi(p) * (-v).exp()
    };
    let scale = t.powi(-p - 1);
    let head = tanh_sinh(|v, _, _| kern(v), 0.0, t, 1e-13).unwrap_or(f64::NAN);
    let tail = integrate_to_inf(kern, t, 1e-15, 1e-13).unwrap_or(f64::NAN);
    scale * (head + tail)
}

fn largest_term(alpha: f64, x: f64) -> f64 {
    let lz = x.ln();
    let mut best = 0.0f64;
    // the peak sits near k = x^{1/alpha} / alpha
    let kmax = ((x.powf(1.0 / alpha) / alpha) * 2.0 + 10.0).min(5000.0) as usize;
    for k in 1..=kmax {
        let lt = k as f64 * lz - ln_gamma(alpha * k as f64 + 1.0);
        best = best.max(lt);
    }
    best.exp()
}
