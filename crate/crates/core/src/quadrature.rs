//! Adaptive quadrature: Gauss-Kronrod (21 point) with bisection, a
//! tanh-sinh rule for endpoint singularities, and Gauss-Legendre nodes.

use std::collections::BinaryHeap;

use crate::error::{numeric, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_351_996,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    let fc = f(c);
    let mut k = WGK[10] * fc;
    let mut g = 0.0;
    for i in 0..10 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]` to absolute tolerance
/// `abs_tol` or relative tolerance `rel_tol`, whichever is looser.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, abs_tol, rel_tol).map(|v| -v);
    }
    let f: &dyn Fn(f64) -> f64 = &f;
    let (v, e) = gk21(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    while heap.len() < MAX_INTERVALS {
        if !total.is_finite() {
            return Err(numeric("non-finite integrand"));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        let p = heap.pop().expect("non-empty heap");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            heap.push(p);
            break;
        }
        let (v1, e1) = gk21(f, p.a, m);
        let (v2, e2) = gk21(f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Piece { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, error: e2 });
    }
    // Re-sum to shed accumulated drift from the running updates.
    let total: f64 = heap.iter().map(|p| p.value).sum();
    if !total.is_finite() {
        return Err(numeric("non-finite integrand"));
    }
    Ok(total)
}

/// Integral over `[a, inf)` through the map `x = a + t / (1 - t)`.
pub fn integrate_to_inf(f: impl Fn(f64) -> f64, a: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    integrate(
        |t| {
            let s = 1.0 - t;
            let x = a + t / s;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

/// Tanh-sinh integral over `[a, b]`. The integrand receives
/// `(x, x - a, b - x)` with both distances computed without cancellation, so
/// integrable endpoint singularities can be evaluated accurately.
pub fn tanh_sinh(f: impl Fn(f64, f64, f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let hw = 0.5 * (b - a);
    let t_max = 6.2;
    let half_pi = std::f64::consts::FRAC_PI_2;

    // Contribution of the node pair at parameter t (or the centre when t == 0).
    let pair = |t: f64| -> f64 {
        let u = half_pi * t.sinh();
        let w = half_pi * t.cosh() / u.cosh().powi(2);
        let e = (-2.0 * u).exp();
        // 1 - tanh(u) computed directly
        let near = 2.0 * e / (1.0 + e);
        let d = hw * near;
        if d <= 0.0 {
            return 0.0;
        }
        let far = b - a - d;
        let right = f(b - d, far, d);
        if t == 0.0 {
            return if right.is_finite() { w * right } else { 0.0 };
        }
        let left = f(a + d, d, far);
        let mut s = 0.0;
        if right.is_finite() {
            s += right;
        }
        if left.is_finite() {
            s += left;
        }
        w * s
    };

    let mut h = 1.0;
    let mut sum = pair(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        sum += pair(k as f64 * h);
        k += 1;
    }
    let mut estimate = hw * h * sum;
    for _level in 0..10 {
        h *= 0.5;
        let mut add = 0.0;
        let mut k = 1;
        while (k as f64) * h <= t_max {
            add += pair(k as f64 * h);
            k += 2;
        }
        sum += add;
        let next = hw * h * sum;
        if !next.is_finite() {
            return Err(numeric("tanh-sinh: non-finite sum"));
        }
        let diff = (next - estimate).abs();
        estimate = next;
        if diff <= tol * estimate.abs().max(1.0) {
            return Ok(estimate);
        }
    }
    Ok(estimate)
}

/// Tanh-sinh integral over `[a, inf)` through `x = a + t / (1 - t)`; suited to
/// slowly decaying algebraic tails.
pub fn tanh_sinh_to_inf(f: impl Fn(f64) -> f64, a: f64, tol: f64) -> Result<f64> {
    tanh_sinh(
        |_, t, s| {
            let v = f(a + t / s);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Integral of `f` over `(0, inf)` with a possibly singular origin: tanh-sinh on
/// `(0, 1]`, Gauss-Kronrod with a compactifying map on `[1, inf)`.
pub fn integrate_zero_inf(f: impl Fn(f64) -> f64, tol: f64) -> Result<f64> {
    let head = tanh_sinh(|x, _, _| f(x), 0.0, 1.0, tol)?;
    let tail = integrate_to_inf(&f, 1.0, tol, tol)?;
    Ok(head + tail)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-14, 1e-14).unwrap();
        assert!((v - 0.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory() {
        let v = integrate(|x| (10.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-12, 1e-12).unwrap();
        assert!(v.abs() < 1e-11);
    }

    #[test]
    fn to_infinity() {
        let v = integrate_to_inf(|x| (-x).exp(), 0.0, 1e-12, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-11);
        let v = integrate_to_inf(|x| 1.0 / (1.0 + x * x), 0.0, 1e-12, 1e-12).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        // Beta(0.1, 0.5) = Gamma(0.1) Gamma(0.5) / Gamma(0.6)
        let v = tanh_sinh(|_, da, db| da.powf(-0.9) * db.powf(-0.5), 0.0, 1.0, 1e-12).unwrap();
        let exact = statrs::function::gamma::gamma(0.1) * statrs::function::gamma::gamma(0.5)
            / statrs::function::gamma::gamma(0.6);
        assert!((v - exact).abs() < 1e-8 * exact, "{v} vs {exact}");
    }

    #[test]
    fn heavy_tail() {
        let v = tanh_sinh_to_inf(|x| x.powf(-1.25), 1.0, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn zero_inf_singular() {
        // Gamma(0.3)
        let v = integrate_zero_inf(|x| x.powf(-0.7) * (-x).exp(), 1e-12).unwrap();
        let exact = statrs::function::gamma::gamma(0.3);
        assert!((v - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn legendre_integrates_degree_2n_minus_1() {
        let (x, w) = gauss_legendre(8);
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((v - 2.0 / 15.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }
}
