//! Random Koch prefractal curves and domains, including the variant whose
//! bumps are closed off by walls with small openings.

pub mod geometry;

use std::collections::HashSet;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use geometry::{bounding_box, polygon_self_intersections, segments_touch, signed_area, Point};

/// Similitude `z -> a z + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similitude {
    pub a: Point,
    pub b: Point,
}

impl Similitude {
    pub fn apply(&self, z: Point) -> Point {
        self.a * z + self.b
    }

    pub fn ratio(&self) -> f64 {
        self.a.norm()
    }
}

/// The four contractions generating a Koch curve with ratio `1 / ell`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimilitudeFamily {
    pub ell: f64,
    pub theta: f64,
    pub maps: [Similitude; 4],
}

/// Rotation angle `arcsin(sqrt(ell (4 - ell)) / 2)` of the middle maps.
pub fn koch_angle(ell: f64) -> f64 {
    ((ell * (4.0 - ell)).sqrt() / 2.0).asin()
}

/// Build the family for `ell` in `(2, 4)`. The third map rotates by
/// `-theta`, which makes consecutive pieces meet.
pub fn build_family(ell: f64) -> Result<SimilitudeFamily> {
    if !(ell > 2.0 && ell < 4.0) {
        return Err(domain(format!("Koch ratio must lie in (2, 4), got {ell}")));
    }
    let theta = koch_angle(ell);
    let inv = 1.0 / ell;
    let rot = Point::from_polar(inv, theta);
    let maps = [
        Similitude { a: Point::new(inv, 0.0), b: Point::new(0.0, 0.0) },
        Similitude { a: rot, b: Point::new(inv, 0.0) },
        Similitude { a: rot.conj(), b: Point::new(0.5, (inv - 0.25).sqrt()) },
        Similitude { a: Point::new(inv, 0.0), b: Point::new(1.0 - inv, 0.0) },
    ];
    let fam = SimilitudeFamily { ell, theta, maps };
    fam.check_chaining(1e-12)?;
    Ok(fam)
}

impl SimilitudeFamily {
    /// Largest defect in the endpoint chaining and contraction ratios.
    pub fn chaining_defect(&self) -> f64 {
        let (p1, p2) = (Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        let m = &self.maps;
        let mut d: f64 = 0.0;
        d = d.max((m[0].apply(p2) - m[1].apply(p1)).norm());
        d = d.max((m[1].apply(p2) - m[2].apply(p1)).norm());
        d = d.max((m[2].apply(p2) - m[3].apply(p1)).norm());
        d = d.max((m[0].apply(p1) - p1).norm());
        d = d.max((m[3].apply(p2) - p2).norm());
        for s in m {
            d = d.max((s.ratio() - 1.0 / self.ell).abs());
        }
        d
    }

    fn check_chaining(&self, tol: f64) -> Result<()> {
        let d = self.chaining_defect();
        if d > tol {
            return Err(Error::Geometry(format!("chaining defect {d} for ell = {}", self.ell)));
        }
        Ok(())
    }

    /// The five points of the level-one curve.
    pub fn generator(&self) -> [Point; 5] {
        let p1 = Point::new(0.0, 0.0);
        let m = &self.maps;
        [p1, m[1].apply(p1), m[2].apply(p1), m[3].apply(p1), Point::new(1.0, 0.0)]
    }
}

/// How the per-level family indices are produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EnvMode {
    Deterministic { indices: Vec<usize> },
    Iid { seed: u64 },
}

/// Environment sequence: an alphabet of ratios `ell`, their probabilities and
/// a realisation rule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvironmentSequence {
    pub alphabet: Vec<f64>,
    pub probs: Vec<f64>,
    pub mode: EnvMode,
}

impl EnvironmentSequence {
    pub fn new(alphabet: Vec<f64>, probs: Vec<f64>, mode: EnvMode) -> Result<Self> {
        let env = Self { alphabet, probs, mode };
        env.validate()?;
        Ok(env)
    }

    /// Every level uses the same ratio.
    pub fn constant(ell: f64) -> Result<Self> {
        Self::new(vec![ell], vec![1.0], EnvMode::Iid { seed: 0 })
    }

    pub fn iid(alphabet: Vec<f64>, probs: Vec<f64>, seed: u64) -> Result<Self> {
        Self::new(alphabet, probs, EnvMode::Iid { seed })
    }

    pub fn deterministic(alphabet: Vec<f64>, indices: Vec<usize>) -> Result<Self> {
        let probs = vec![1.0 / alphabet.len() as f64; alphabet.len()];
        Self::new(alphabet, probs, EnvMode::Deterministic { indices })
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphabet.is_empty() || self.alphabet.len() != self.probs.len() {
            return Err(domain("alphabet and probabilities must be nonempty and of equal length"));
        }
        for &l in &self.alphabet {
            build_family(l)?;
        }
        if self.probs.iter().any(|&p| !(p >= 0.0)) || (self.probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(domain("probabilities must be nonnegative and sum to 1"));
        }
        if let EnvMode::Deterministic { indices } = &self.mode {
            if indices.is_empty() || indices.iter().any(|&i| i >= self.alphabet.len()) {
                return Err(domain("deterministic index list must be nonempty and within the alphabet"));
            }
        }
        Ok(())
    }

    /// First `n` ratios of the realisation.
    pub fn realize(&self, n: usize) -> Result<Vec<f64>> {
        match &self.mode {
            EnvMode::Deterministic { indices } => {
                if indices.len() < n {
                    return Err(domain(format!("environment list has {} entries, {n} requested", indices.len())));
                }
                Ok(indices[..n].iter().map(|&i| self.alphabet[i]).collect())
            }
            EnvMode::Iid { seed } => Ok(self.realize_with(n, &mut ChaCha8Rng::seed_from_u64(*seed))),
        }
    }

    /// `n` i.i.d. draws from the alphabet with the given probabilities.
    pub fn realize_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (l, p) in self.alphabet.iter().zip(&self.probs) {
                    acc += p;
                    if u < acc {
                        return *l;
                    }
                }
                *self.alphabet.last().expect("nonempty alphabet")
            })
            .collect()
    }

    pub fn mean_ell(&self) -> f64 {
        self.alphabet.iter().zip(&self.probs).map(|(l, p)| l * p).sum()
    }

    pub fn mean_log_ell(&self) -> f64 {
        self.alphabet.iter().zip(&self.probs).map(|(l, p)| l.ln() * p).sum()
    }
}

/// Refine the unit segment with the families for `ells`, top level first.
/// Returns the `4^n + 1` vertices from `(0, 0)` to `(1, 0)`.
pub fn generate_curve(ells: &[f64]) -> Result<Vec<Point>> {
    let mut pts = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
    for &ell in ells {
        let g = build_family(ell)?.generator();
        let mut next = Vec::with_capacity(4 * (pts.len() - 1) + 1);
        for w in pts.windows(2) {
            let (p, q) = (w[0], w[1]);
            next.push(p);
            for z in &g[1..4] {
                next.push(p + (q - p) * z);
            }
        }
        next.push(*pts.last().expect("nonempty"));
        pts = next;
    }
    // pin the endpoints exactly
    let last = pts.len() - 1;
    pts[0] = Point::new(0.0, 0.0);
    pts[last] = Point::new(1.0, 0.0);
    Ok(pts)
}

/// Cell measure `4^{-n}` of the word `w|n` with letters in `1..=4`.
pub fn volume_measure_weight(word: &[u8]) -> Result<f64> {
    if let Some(&bad) = word.iter().find(|&&c| !(1..=4).contains(&c)) {
        return Err(domain(format!("invalid word letter {bad}")));
    }
    Ok(0.25f64.powi(word.len() as i32))
}

/// Vertices of the cell `psi_w(K)` inside a curve produced by
/// [`generate_curve`] at a level at least `word.len()`.
pub fn cell_polyline<'a>(curve: &'a [Point], word: &[u8]) -> Result<&'a [Point]> {
    volume_measure_weight(word)?;
    let segs = curve.len() - 1;
    let mut lo = 0usize;
    let mut width = segs;
    for &c in word {
        if width % 4 != 0 {
            return Err(domain("word longer than the curve level"));
        }
        width /= 4;
        lo += (c as usize - 1) * width;
    }
    Ok(&curve[lo..=lo + width])
}

/// `n ln 4 / ln(ell_1 ... ell_n)`.
pub fn dimension_estimate(ells: &[f64]) -> f64 {
    ells.len() as f64 * 4f64.ln() / ells.iter().map(|l| l.ln()).sum::<f64>()
}

/// `ln 4 / E[ln ell]`.
pub fn dimension_limit(env: &EnvironmentSequence) -> f64 {
    4f64.ln() / env.mean_log_ell()
}

/// Bumps bulge into the polygon interior or away from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Inward,
    Outward,
}

/// Triangular bump created at some refinement level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bump {
    pub level: usize,
    pub mouth: (Point, Point),
    pub apex: Point,
    /// Bump whose side this bump sits on, if any.
    pub parent: Option<usize>,
}

impl Bump {
    pub fn centroid(&self) -> Point {
        (self.mouth.0 + self.mouth.1 + self.apex) / 3.0
    }

    pub fn mouth_width(&self) -> f64 {
        (self.mouth.1 - self.mouth.0).norm()
    }
}

/// Polygonal domain bounded by prefractal curves on a regular polygon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrefractalDomain {
    pub m: usize,
    pub orientation: Orientation,
    pub level: usize,
    pub ells: Vec<f64>,
    /// `ell_1 ... ell_n / 4^n`.
    pub sigma: f64,
    /// Counter-clockwise boundary, first vertex not repeated.
    pub vertices: Vec<Point>,
    /// Reflecting wall segments not part of the boundary polygon.
    pub walls: Vec<(Point, Point)>,
    pub bumps: Vec<Bump>,
}

/// Regular `m`-gon with unit sides, counter-clockwise, first edge on the x axis.
pub fn regular_polygon(m: usize) -> Vec<Point> {
    let mut v = Vec::with_capacity(m);
    let mut p = Point::new(0.0, 0.0);
    for k in 0..m {
        v.push(p);
        p += Point::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
    }
    v
}

struct Refined {
    vertices: Vec<Point>,
    bumps: Vec<Bump>,
}

fn refine_polygon(m: usize, ells: &[f64], orientation: Orientation) -> Result<Refined> {
    let base = regular_polygon(m);
    // segment list with owning bump
    let mut segs: Vec<(Point, Point, Option<usize>)> =
        (0..m).map(|i| (base[i], base[(i + 1) % m], None)).collect();
    let mut bumps = Vec::new();
    for (k, &ell) in ells.iter().enumerate() {
        let mut g = build_family(ell)?.generator();
        if orientation == Orientation::Outward {
            for z in g.iter_mut() {
                *z = z.conj();
            }
        }
        let mut next = Vec::with_capacity(4 * segs.len());
        for &(p, q, owner) in &segs {
            let map = |z: Point| p + (q - p) * z;
            let pts = [p, map(g[1]), map(g[2]), map(g[3]), q];
            let id = bumps.len();
            bumps.push(Bump { level: k + 1, mouth: (pts[1], pts[3]), apex: pts[2], parent: owner });
            next.push((pts[0], pts[1], owner));
            next.push((pts[1], pts[2], Some(id)));
            next.push((pts[2], pts[3], Some(id)));
            next.push((pts[3], pts[4], owner));
        }
        segs = next;
    }
    Ok(Refined { vertices: segs.iter().map(|s| s.0).collect(), bumps })
}

/// Regular `m`-gon whose sides are replaced by the level-`n` curve of `env`.
pub fn build_domain(m: usize, env: &EnvironmentSequence, n: usize, orientation: Orientation) -> Result<PrefractalDomain> {
    build_domain_from(m, &env.realize(n)?, orientation)
}

/// As [`build_domain`] from an explicit ratio realisation.
pub fn build_domain_from(m: usize, ells: &[f64], orientation: Orientation) -> Result<PrefractalDomain> {
    if m < 3 {
        return Err(domain(format!("polygon needs m >= 3, got {m}")));
    }
    let r = refine_polygon(m, ells, orientation)?;
    let hits = polygon_self_intersections(&r.vertices, 1);
    if let Some((i, j)) = hits.first() {
        return Err(Error::Geometry(format!("boundary edges {i} and {j} intersect")));
    }
    let n = ells.len();
    let sigma = ells.iter().product::<f64>() / 4f64.powi(n as i32);
    Ok(PrefractalDomain {
        m,
        orientation,
        level: n,
        ells: ells.to_vec(),
        sigma,
        vertices: r.vertices,
        walls: Vec::new(),
        bumps: r.bumps,
    })
}

/// Outward domain in which every bump's mouth is closed by a wall leaving a
/// centred gap of `opening(level)` times the mouth width.
pub fn build_trapped_domain(
    m: usize,
    env: &EnvironmentSequence,
    n: usize,
    opening: &dyn Fn(usize) -> f64,
) -> Result<PrefractalDomain> {
    let mut d = build_domain(m, env, n, Orientation::Outward)?;
    let mut walls = Vec::new();
    for b in &d.bumps {
        let f = opening(b.level);
        if !(f > 0.0 && f <= 1.0) {
            return Err(domain(format!("opening fraction must lie in (0, 1], got {f} at level {}", b.level)));
        }
        if f >= 1.0 {
            continue;
        }
        let (a, c) = b.mouth;
        let mid = 0.5 * (a + c);
        let half_gap = 0.5 * f * (c - a);
        walls.push((a, mid - half_gap));
        walls.push((mid + half_gap, c));
    }
    d.walls = walls;
    d.check_walls()?;
    Ok(d)
}

impl PrefractalDomain {
    pub fn segment_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| (b - a).norm()).sum()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Centre of the base polygon.
    pub fn center(&self) -> Point {
        let base = regular_polygon(self.m);
        base.iter().sum::<Point>() / self.m as f64
    }

    /// Inradius of the base polygon.
    pub fn base_inradius(&self) -> f64 {
        0.5 / (PI / self.m as f64).tan()
    }

    pub fn contains(&self, p: Point) -> bool {
        geometry::point_in_polygon(p, &self.vertices)
    }

    pub fn is_simple(&self) -> bool {
        polygon_self_intersections(&self.vertices, 1).is_empty()
    }

    /// Walls meet the boundary only at their outer endpoints.
    pub fn check_walls(&self) -> Result<()> {
        for &(a, b) in &self.walls {
            for (p, q) in self.edges() {
                let shares = [p, q].iter().any(|v| (v - a).norm() < 1e-12 || (v - b).norm() < 1e-12);
                if !shares && segments_touch(a, b, p, q) {
                    return Err(Error::Geometry("wall crosses the boundary".into()));
                }
            }
        }
        Ok(())
    }

    /// Chain of bumps, each sitting on the side of the previous one, starting
    /// from the first level-one bump.
    pub fn nested_chain(&self) -> Vec<usize> {
        let mut chain = Vec::new();
        let mut current = self.bumps.iter().position(|b| b.level == 1);
        while let Some(i) = current {
            chain.push(i);
            current = self.bumps.iter().position(|b| b.parent == Some(i));
        }
        chain
    }

    /// SVG drawing with the view box fitted to the domain.
    pub fn to_svg(&self) -> String {
        let (lo, hi) = bounding_box(&self.vertices);
        let pad = 0.02 * (hi - lo).norm();
        let (w, h) = (hi.re - lo.re + 2.0 * pad, hi.im - lo.im + 2.0 * pad);
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
            lo.re - pad,
            -hi.im - pad,
            w,
            h
        );
        s.push_str("<polygon fill=\"#eef\" stroke=\"#124\" stroke-width=\"");
        s.push_str(&format!("{}", 0.002 * w));
        s.push_str("\" points=\"");
        for p in &self.vertices {
            s.push_str(&format!("{},{} ", p.re, -p.im));
        }
        s.push_str("\"/>\n");
        for (a, b) in &self.walls {
            s.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#c22\" stroke-width=\"{}\"/>\n",
                a.re,
                -a.im,
                b.re,
                -b.im,
                0.003 * w
            ));
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Box-counting dimension of a polyline: least-squares slope of
/// `ln N(eps)` against `ln(1 / eps)` over the given box sizes.
pub fn box_counting_dimension(points: &[Point], sizes: &[f64]) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &eps in sizes {
        let mut boxes = HashSet::new();
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            let steps = (((b - a).norm() / (0.25 * eps)).ceil() as usize).max(1);
            for k in 0..=steps {
                let p = a + (b - a) * (k as f64 / steps as f64);
                boxes.insert(((p.re / eps).floor() as i64, (p.im / eps).floor() as i64));
            }
        }
        xs.push((1.0 / eps).ln());
        ys.push((boxes.len() as f64).ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Point, b: Point) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn family_at_three() {
        let f = build_family(3.0).unwrap();
        assert!((f.theta - PI / 3.0).abs() < 1e-15);
        let apex = Point::new(0.5, (1.0f64 / 12.0).sqrt());
        assert!(close(f.maps[1].apply(Point::new(1.0, 0.0)), apex));
        assert!(close(f.maps[2].apply(Point::new(0.0, 0.0)), apex));
        assert!(close(f.maps[3].apply(Point::new(0.0, 0.0)), Point::new(2.0 / 3.0, 0.0)));
        assert!(build_family(2.0).is_err());
        assert!(build_family(4.0).is_err());
    }

    #[test]
    fn chaining_on_grid() {
        for i in 0..50 {
            let ell = 2.05 + 1.9 * i as f64 / 49.0;
            assert!(build_family(ell).unwrap().chaining_defect() < 1e-12);
        }
    }

    #[test]
    fn curves() {
        let c0 = generate_curve(&[]).unwrap();
        assert_eq!(c0.len(), 2);
        let c1 = generate_curve(&[3.0]).unwrap();
        let want = [(0.0, 0.0), (1.0 / 3.0, 0.0), (0.5, (1.0f64 / 12.0).sqrt()), (2.0 / 3.0, 0.0), (1.0, 0.0)];
        for (p, w) in c1.iter().zip(want) {
            assert!(close(*p, Point::new(w.0, w.1)));
        }
        let c2 = generate_curve(&[3.0, 3.0]).unwrap();
        assert_eq!(c2.len(), 17);
        let len: f64 = c2.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        assert!((len - 16.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn random_curve_length() {
        let env = EnvironmentSequence::iid(vec![2.7, 3.3], vec![0.5, 0.5], 9).unwrap();
        let ells = env.realize(5).unwrap();
        let c = generate_curve(&ells).unwrap();
        let len: f64 = c.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        let want = 4f64.powi(5) / ells.iter().product::<f64>();
        assert!((len - want).abs() < 1e-9);
        assert_eq!(c[0], Point::new(0.0, 0.0));
        assert_eq!(c[c.len() - 1], Point::new(1.0, 0.0));
    }

    #[test]
    fn domains() {
        let env = EnvironmentSequence::constant(3.0).unwrap();
        let sq = build_domain(4, &env, 0, Orientation::Outward).unwrap();
        assert_eq!(sq.segment_count(), 4);
        assert_eq!(sq.sigma, 1.0);
        assert!((sq.area() - 1.0).abs() < 1e-12);
        let d = build_domain(4, &env, 2, Orientation::Inward).unwrap();
        assert_eq!(d.segment_count(), 64);
        assert!((d.sigma - 9.0 / 16.0).abs() < 1e-15);
        let snow = build_domain(3, &env, 4, Orientation::Outward).unwrap();
        assert!(snow.is_simple());
        // snowflake area: (sqrt 3 / 4) (1 + 3/9 + 12/81 + 48/729 + 192/6561)
        let want = 3f64.sqrt() / 4.0 * (1.0 + 1.0 / 3.0 + 4.0 / 27.0 + 16.0 / 243.0 + 64.0 / 2187.0);
        assert!((snow.area() - want).abs() < 1e-12);
        assert!(build_domain(2, &env, 1, Orientation::Outward).is_err());
    }

    #[test]
    fn trapped_domain() {
        let env = EnvironmentSequence::constant(3.0).unwrap();
        let open = build_trapped_domain(3, &env, 2, &|_| 1.0).unwrap();
        let plain = build_domain(3, &env, 2, Orientation::Outward).unwrap();
        assert!(open.walls.is_empty());
        assert_eq!(open.vertices, plain.vertices);
        let half = build_trapped_domain(3, &env, 2, &|_| 0.5).unwrap();
        assert_eq!(half.walls.len(), 2 * (3 + 12));
        assert!(half.is_simple());
        assert!(build_trapped_domain(3, &env, 2, &|_| 0.0).is_err());
        let chain = half.nested_chain();
        assert_eq!(chain.len(), 2);
        assert_eq!(half.bumps[chain[1]].parent, Some(chain[0]));
    }

    #[test]
    fn words() {
        assert_eq!(volume_measure_weight(&[2]).unwrap(), 0.25);
        assert_eq!(volume_measure_weight(&[1, 4, 3]).unwrap(), 1.0 / 64.0);
        assert!(volume_measure_weight(&[5]).is_err());
        let c = generate_curve(&[3.0, 3.0]).unwrap();
        let cell = cell_polyline(&c, &[2]).unwrap();
        assert_eq!(cell.len(), 5);
        assert!(close(cell[0], Point::new(1.0 / 3.0, 0.0)));
        let total: f64 = (1..=4u8)
            .flat_map(|a| (1..=4u8).map(move |b| [a, b]))
            .map(|w| volume_measure_weight(&w).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dimension() {
        let env = EnvironmentSequence::constant(3.0).unwrap();
        assert!((dimension_limit(&env) - 4f64.ln() / 3f64.ln()).abs() < 1e-15);
        let env = EnvironmentSequence::iid(vec![2.7, 3.3], vec![0.5, 0.5], 1).unwrap();
        assert!((dimension_limit(&env) - 1.2677).abs() < 1e-4);
        assert!((dimension_estimate(&[3.0; 10]) - 4f64.ln() / 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn deterministic_env_exhaustion() {
        let env = EnvironmentSequence::deterministic(vec![2.5, 3.5], vec![0, 1, 1]).unwrap();
        assert_eq!(env.realize(3).unwrap(), vec![2.5, 3.5, 3.5]);
        assert!(env.realize(4).is_err());
        assert!(EnvironmentSequence::iid(vec![3.0, 3.2], vec![0.3, 0.3], 0).is_err());
    }
}
