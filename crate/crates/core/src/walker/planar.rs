//! Planar motion in polygons (with interior walls) and disks.
//!
//! Polygon edges live in a uniform bucket grid, which also stores a lower
//! bound on the distance to the nearest edge for every cell. A step shorter
//! than that clearance cannot meet the boundary and skips all geometry.
//! Crossed edges reflect the remaining displacement specularly.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::koch::geometry::{bounding_box, cross, dist_point_segment, dot, segment_intersection, Point};
use crate::rng::{stream, Component};

use super::{unit_open, BoundaryMode, Increments, Motion, Pt, Region, WalkSpec};

#[derive(Debug, Clone, Copy)]
struct Seg {
    a: Point,
    b: Point,
    wall: bool,
    /// Unit normal pointing left of `a -> b` (into a counter-clockwise polygon).
    n: Point,
}

#[derive(Debug)]
struct PolyIndex {
    segs: Vec<Seg>,
    lo: Point,
    h: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
    clear_lb: Vec<f64>,
}

#[derive(Debug)]
enum GeomKind {
    Disk { r: f64 },
    Poly(PolyIndex),
}

/// Read-only geometry shared by all paths.
#[derive(Debug)]
pub struct PlanarGeometry {
    kind: GeomKind,
}

/// Boundary piece hit by a step.
#[derive(Debug, Clone, Copy)]
struct Hit {
    s: f64,
    id: usize,
    wall: bool,
    /// Unit normal of the hit piece, pointing into the domain for boundary edges.
    n: Point,
}

fn rect_vertices(a: f64, b: f64) -> Vec<Point> {
    vec![Point::new(0.0, 0.0), Point::new(a, 0.0), Point::new(a, b), Point::new(0.0, b)]
}

impl PlanarGeometry {
    pub fn new(region: &Region) -> Result<Self> {
        match region {
            Region::Disk { radius } => Ok(Self { kind: GeomKind::Disk { r: *radius } }),
            Region::Rectangle { a, b } => Ok(Self { kind: GeomKind::Poly(PolyIndex::new(&rect_vertices(*a, *b), &[])?) }),
            Region::Polygon { vertices, walls } => Ok(Self { kind: GeomKind::Poly(PolyIndex::new(vertices, walls)?) }),
            _ => Err(Error::Unsupported("planar geometry needs a planar region".into())),
        }
    }

    /// Lower bound on the distance to the boundary and walls, exact when small.
    pub fn clearance(&self, p: Point) -> f64 {
        match &self.kind {
            GeomKind::Disk { r } => r - p.norm(),
            GeomKind::Poly(ix) => ix.clearance(p),
        }
    }

    fn first_hit(&self, x: Point, y: Point, skip: Option<usize>) -> Option<Hit> {
        match &self.kind {
            GeomKind::Disk { r } => {
                let d = y - x;
                let (a, b, c) = (d.norm_sqr(), 2.0 * dot(x, d), x.norm_sqr() - r * r);
                if a == 0.0 || y.norm() <= *r {
                    return None;
                }
                let s = (-b + (b * b - 4.0 * a * c).max(0.0).sqrt()) / (2.0 * a);
                let q = x + d * s;
                Some(Hit { s: s.clamp(0.0, 1.0), id: 0, wall: false, n: -q / q.norm() })
            }
            GeomKind::Poly(ix) => ix.first_hit(x, y, skip),
        }
    }

    /// Signed distance to the nearest boundary piece along its inward normal,
    /// together with that normal.
    fn nearest_boundary(&self, p: Point) -> Option<(f64, Point, Point)> {
        match &self.kind {
            GeomKind::Disk { r } => {
                let n = if p.norm() > 0.0 { -p / p.norm() } else { Point::new(1.0, 0.0) };
                Some((r - p.norm(), n, -n * *r))
            }
            GeomKind::Poly(ix) => ix.nearest(p).and_then(|(_, id)| {
                let s = ix.segs[id];
                (!s.wall).then(|| (dot(p - s.a, s.n), s.n, s.a))
            }),
        }
    }

    pub fn segment_count(&self) -> usize {
        match &self.kind {
            GeomKind::Disk { .. } => 0,
            GeomKind::Poly(ix) => ix.segs.len(),
        }
    }
}

impl PolyIndex {
    fn new(vertices: &[Point], walls: &[(Point, Point)]) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(domain("polygon needs at least 3 vertices"));
        }
        let mut segs = Vec::with_capacity(n + walls.len());
        let mk = |a: Point, b: Point, wall: bool| {
            let d = b - a;
            Seg { a, b, wall, n: Point::new(-d.im, d.re) / d.norm() }
        };
        for i in 0..n {
            segs.push(mk(vertices[i], vertices[(i + 1) % n], false));
        }
        for &(a, b) in walls {
            segs.push(mk(a, b, true));
        }
        let (lo, hi) = bounding_box(vertices);
        let ext = (hi.re - lo.re).max(hi.im - lo.im);
        let cells = ((segs.len() as f64).sqrt() * 2.0).clamp(16.0, 512.0) as usize;
        let h = ext / cells as f64;
        let lo = lo - Point::new(h, h);
        let nx = ((hi.re - lo.re) / h).ceil() as usize + 2;
        let ny = ((hi.im - lo.im) / h).ceil() as usize + 2;
        let mut ix = Self { segs, lo, h, nx, ny, buckets: vec![Vec::new(); nx * ny], clear_lb: vec![0.0; nx * ny] };
        for (k, s) in ix.segs.iter().enumerate() {
            let (i0, j0) = ix.cell(Point::new(s.a.re.min(s.b.re), s.a.im.min(s.b.im)));
            let (i1, j1) = ix.cell(Point::new(s.a.re.max(s.b.re), s.a.im.max(s.b.im)));
            for i in i0..=i1 {
                for j in j0..=j1 {
                    ix.buckets[j * nx + i].push(k as u32);
                }
            }
        }
        let half_diag = h * std::f64::consts::FRAC_1_SQRT_2;
        for j in 0..ny {
            for i in 0..nx {
                let c = lo + Point::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
                let d = ix.nearest(c).map(|r| r.0).unwrap_or(0.0);
                ix.clear_lb[j * nx + i] = (d - half_diag).max(0.0);
            }
        }
        Ok(ix)
    }

    fn cell(&self, p: Point) -> (usize, usize) {
        let i = ((p.re - self.lo.re) / self.h).floor().clamp(0.0, (self.nx - 1) as f64) as usize;
        let j = ((p.im - self.lo.im) / self.h).floor().clamp(0.0, (self.ny - 1) as f64) as usize;
        (i, j)
    }

    fn in_grid(&self, p: Point) -> bool {
        let (u, v) = ((p.re - self.lo.re) / self.h, (p.im - self.lo.im) / self.h);
        u >= 0.0 && v >= 0.0 && u < self.nx as f64 && v < self.ny as f64
    }

    /// Exact nearest piece by ring search over buckets.
    fn nearest(&self, p: Point) -> Option<(f64, usize)> {
        let (ci, cj) = self.cell(p);
        let mut best: Option<(f64, usize)> = None;
        let rmax = self.nx.max(self.ny);
        for r in 0..=rmax {
            let (i0, i1) = (ci as i64 - r as i64, ci as i64 + r as i64);
            let (j0, j1) = (cj as i64 - r as i64, cj as i64 + r as i64);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    if (i != i0 && i != i1 && j != j0 && j != j1)
                        || i < 0
                        || j < 0
                        || i >= self.nx as i64
                        || j >= self.ny as i64
                    {
                        continue;
                    }
                    for &k in &self.buckets[j as usize * self.nx + i as usize] {
                        let s = &self.segs[k as usize];
                        let d = dist_point_segment(p, s.a, s.b);
                        if best.is_none_or(|b| d < b.0) {
                            best = Some((d, k as usize));
                        }
                    }
                }
            }
            if let Some(b) = best {
                if b.0 <= r as f64 * self.h {
                    break;
                }
            }
        }
        best
    }

    fn clearance(&self, p: Point) -> f64 {
        if !self.in_grid(p) {
            return 0.0;
        }
        let (i, j) = self.cell(p);
        let lb = self.clear_lb[j * self.nx + i];
        if lb >= 2.0 * self.h {
            lb
        } else {
            self.nearest(p).map(|r| r.0).unwrap_or(0.0)
        }
    }

    fn first_hit(&self, x: Point, y: Point, skip: Option<usize>) -> Option<Hit> {
        let (i0, j0) = self.cell(Point::new(x.re.min(y.re), x.im.min(y.im)));
        let (i1, j1) = self.cell(Point::new(x.re.max(y.re), x.im.max(y.im)));
        let mut best: Option<Hit> = None;
        let mut test = |k: usize| {
            if Some(k) == skip {
                return;
            }
            let sg = &self.segs[k];
            if let Some((s, _)) = segment_intersection(x, y, sg.a, sg.b) {
                if best.is_none_or(|b| s < b.s) {
                    best = Some(Hit { s, id: k, wall: sg.wall, n: sg.n });
                }
            }
        };
        if (i1 - i0 + 1) * (j1 - j0 + 1) > self.segs.len() {
            for k in 0..self.segs.len() {
                test(k);
            }
        } else {
            for j in j0..=j1 {
                for i in i0..=i1 {
                    for &k in &self.buckets[j * self.nx + i] {
                        test(k as usize);
                    }
                }
            }
        }
        best
    }
}

/// Reflect displacement `r` across the line with unit normal `n`.
fn mirror(r: Point, n: Point) -> Point {
    r - n * (2.0 * dot(r, n))
}

pub struct Walker2D {
    geom: Arc<PlanarGeometry>,
    kill: bool,
    dt: f64,
    min_dt: Option<f64>,
    max_steps: usize,
    inc: Increments,
    bnd: ChaCha8Rng,
    x: Point,
    s: f64,
    gamma: f64,
    lifetime: Option<f64>,
    steps: usize,
    censored: bool,
    target: Option<(Point, f64)>,
    hit: Option<f64>,
}

/// Step-size factor of the adaptive mode: `sqrt(2 h) <= KAPPA * clearance`.
const KAPPA: f64 = 0.5;

impl Walker2D {
    pub fn new(spec: &WalkSpec, geom: Arc<PlanarGeometry>, seed: u64, path: u64) -> Result<Self> {
        if spec.region.is_one_dimensional() {
            return Err(Error::Unsupported("planar walker on a one-dimensional region".into()));
        }
        if !matches!(spec.boundary, BoundaryMode::Kill | BoundaryMode::Reflect | BoundaryMode::Elastic { .. }) {
            return Err(Error::Unsupported("planar regions support kill, reflect and elastic boundaries".into()));
        }
        Ok(Self {
            geom,
            kill: !spec.boundary.reflects(),
            dt: spec.step(),
            min_dt: None,
            max_steps: spec.max_steps,
            inc: Increments::new(seed, path, spec.halving),
            bnd: stream(seed, path, Component::Boundary),
            x: Point::new(spec.start[0], spec.start[1]),
            s: 0.0,
            gamma: 0.0,
            lifetime: None,
            steps: 0,
            censored: false,
            target: None,
            hit: None,
        })
    }

    /// Shrink steps near the boundary down to `min_dt`.
    pub fn adaptive(mut self, min_dt: f64) -> Self {
        self.min_dt = Some(min_dt.min(self.dt));
        self
    }

    /// Stop at the first entrance into the closed ball.
    pub fn with_target(mut self, center: Point, radius: f64) -> Self {
        self.target = Some((center, radius));
        if (self.x - center).norm() <= radius {
            self.hit = Some(0.0);
        }
        self
    }

    pub fn hit_time(&self) -> Option<f64> {
        self.hit
    }

    pub fn point(&self) -> Point {
        self.x
    }

    /// Run until the target ball is hit, the path dies or the step cap is reached.
    pub fn run_until_hit(&mut self) -> Result<Option<f64>> {
        while self.hit.is_none() && self.lifetime.is_none() && !self.censored {
            self.step(self.dt)?;
        }
        Ok(self.hit)
    }

    pub fn run_until_exit(&mut self) -> Result<Option<f64>> {
        while self.lifetime.is_none() && !self.censored {
            self.step(self.dt)?;
        }
        Ok(self.lifetime)
    }

    fn check_target(&mut self, a: Point, b: Point, t_end: f64) {
        if let Some((c, r)) = self.target {
            if self.hit.is_none() && dist_point_segment(c, a, b) <= r {
                self.hit = Some(t_end);
            }
        }
    }

    fn local_time_increment(&mut self, disp: Point, sd2: f64) -> f64 {
        match self.geom.nearest_boundary(self.x) {
            Some((d0, n, _)) => {
                let d1 = d0 + dot(disp, n);
                let m = 0.5 * (d0 + d1 - ((d1 - d0).powi(2) - 2.0 * sd2 * unit_open(&mut self.bnd).ln()).sqrt());
                (-m).max(0.0)
            }
            None => 0.0,
        }
    }
}

impl Motion for Walker2D {
    fn run_to(&mut self, target: f64) -> Result<()> {
        while self.lifetime.is_none() && !self.censored && target - self.s > 1e-13 {
            let h = self.dt.min(target - self.s);
            self.step(h)?;
        }
        Ok(())
    }

    fn alive(&self) -> bool {
        self.lifetime.is_none()
    }

    fn censored(&self) -> bool {
        self.censored
    }

    fn position(&self) -> Pt {
        [self.x.re, self.x.im]
    }

    fn local_time(&self) -> f64 {
        self.gamma
    }

    fn time(&self) -> f64 {
        self.lifetime.unwrap_or(self.s)
    }

    fn lifetime(&self) -> Option<f64> {
        self.lifetime
    }

    fn step(&mut self, h_max: f64) -> Result<f64> {
        if self.lifetime.is_some() {
            return Ok(0.0);
        }
        if self.steps >= self.max_steps {
            self.censored = true;
            return Ok(0.0);
        }
        self.steps += 1;
        let clear = self.geom.clearance(self.x);
        let h = match self.min_dt {
            Some(lo) => ((KAPPA * clear).powi(2) / 2.0).clamp(lo, h_max),
            None => h_max,
        };
        let sd2 = 2.0 * h;
        let sd = sd2.sqrt();
        let (zx, zy) = self.inc.next2();
        let disp = Point::new(zx, zy) * sd;
        let t_end = self.s + h;
        let mut dg = 0.0;
        if disp.norm() < clear {
            let y = self.x + disp;
            if self.kill && clear < 4.0 * sd {
                let d1 = self.geom.clearance(y);
                if unit_open(&mut self.bnd) <= (-2.0 * clear * d1 / sd2).exp() {
                    self.lifetime = Some(self.s + 0.5 * h);
                    return Ok(0.0);
                }
            }
            if !self.kill && clear < 4.0 * sd {
                dg = self.local_time_increment(disp, sd2);
            }
            self.check_target(self.x, y, t_end);
            self.x = y;
            self.s = t_end;
            self.gamma += dg;
            return Ok(dg);
        }
        if !self.kill {
            dg = self.local_time_increment(disp, sd2);
        }
        let mut p = self.x;
        let mut rem = disp;
        let mut skip = None;
        let mut done = 0.0;
        for _ in 0..16 {
            let y = p + rem;
            match self.geom.first_hit(p, y, skip) {
                None => {
                    self.check_target(p, y, t_end);
                    self.x = y;
                    self.s = t_end;
                    self.gamma += dg;
                    return Ok(dg);
                }
                Some(hit) => {
                    let q = p + rem * hit.s;
                    self.check_target(p, q, t_end);
                    if self.kill && !hit.wall {
                        self.lifetime = Some(self.s + h * (done + (1.0 - done) * hit.s));
                        self.x = q;
                        return Ok(0.0);
                    }
                    done += (1.0 - done) * hit.s;
                    // stay on the side we came from
                    let side = if cross(hit.n, rem) == 0.0 || dot(p - q, hit.n) >= 0.0 { 1.0 } else { -1.0 };
                    rem = mirror(rem * (1.0 - hit.s), hit.n);
                    p = q + hit.n * (side * 1e-13);
                    skip = Some(hit.id);
                }
            }
        }
        // unresolved corner cascade: reject the move
        self.s = t_end;
        self.gamma += dg;
        Ok(dg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koch::{build_trapped_domain, EnvironmentSequence};
    use crate::rng::map_paths;
    use crate::stats::Estimate;

    #[test]
    fn rectangle_reflection_stays_inside() {
        let spec = WalkSpec::new(Region::Rectangle { a: 1.0, b: 1.0 }, [0.5, 0.5], 1e-3, BoundaryMode::Reflect).unwrap();
        let g = Arc::new(PlanarGeometry::new(&spec.region).unwrap());
        let mut counts = vec![0usize; 16];
        for p in 0..1000 {
            let mut w = Walker2D::new(&spec, g.clone(), 2, p).unwrap();
            for k in 1..=4 {
                w.run_to(0.4 * k as f64).unwrap();
                let x = w.position();
                assert!(spec.region.contains_closure(x), "{x:?}");
                let (i, j) = (((x[0] * 4.0) as usize).min(3), ((x[1] * 4.0) as usize).min(3));
                counts[4 * j + i] += 1;
            }
        }
        let (_, pval) = crate::stats::chi_square_uniform(&counts);
        assert!(pval > 0.001, "{counts:?}");
    }

    #[test]
    fn disk_exit_time() {
        // -Delta u = 1 on the unit disk: u(0) = 1/4
        let spec = WalkSpec::new(Region::Disk { radius: 1.0 }, [0.0, 0.0], 1e-4, BoundaryMode::Kill).unwrap();
        let g = Arc::new(PlanarGeometry::new(&spec.region).unwrap());
        let z = map_paths(3000, |p| Walker2D::new(&spec, g.clone(), 4, p).unwrap().run_until_exit().unwrap().unwrap());
        let e = Estimate::from_samples(&z);
        assert!(e.agrees_with(0.25, 3.0, 0.0), "{e:?}");
    }

    #[test]
    fn square_exit_time() {
        // centre of the unit square: 0.0736713532...
        let spec = WalkSpec::new(Region::Rectangle { a: 1.0, b: 1.0 }, [0.5, 0.5], 1e-4, BoundaryMode::Kill).unwrap();
        let g = Arc::new(PlanarGeometry::new(&spec.region).unwrap());
        let z = map_paths(3000, |p| Walker2D::new(&spec, g.clone(), 8, p).unwrap().run_until_exit().unwrap().unwrap());
        let e = Estimate::from_samples(&z);
        assert!(e.agrees_with(0.07367135, 3.0, 0.0), "{e:?}");
    }

    #[test]
    fn walls_block_paths() {
        let env = EnvironmentSequence::constant(3.0).unwrap();
        let d = build_trapped_domain(3, &env, 1, &|_| 0.05).unwrap();
        let region = Region::from_domain(&d);
        let b = &d.bumps[0];
        let c = b.centroid();
        let spec = WalkSpec::new(region.clone(), [c.re, c.im], 1e-5, BoundaryMode::Reflect).unwrap();
        let g = Arc::new(PlanarGeometry::new(&region).unwrap());
        for p in 0..20 {
            let mut w = Walker2D::new(&spec, g.clone(), 1, p).unwrap();
            w.run_to(0.02).unwrap();
            assert!(region.contains_closure(w.position()));
        }
    }
}
