//! Planar segment geometry on complex numbers.

use num_complex::Complex64;

pub type Point = Complex64;

/// Cross product `a x b`.
pub fn cross(a: Point, b: Point) -> f64 {
    a.re * b.im - a.im * b.re
}

pub fn dot(a: Point, b: Point) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Distance from `p` to the segment `[a, b]`.
pub fn dist_point_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    let t = if len2 > 0.0 { (dot(p - a, ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + ab * t)).norm()
}

/// Parameter `(s, t)` of the proper intersection of `[p, p + r]` and
/// `[q, q + u]`, if the segments cross (parallel segments return `None`).
pub fn segment_intersection(p: Point, p2: Point, q: Point, q2: Point) -> Option<(f64, f64)> {
    let r = p2 - p;
    let u = q2 - q;
    let den = cross(r, u);
    if den == 0.0 {
        return None;
    }
    let qp = q - p;
    let s = cross(qp, u) / den;
    let t = cross(qp, r) / den;
    if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t) {
        Some((s, t))
    } else {
        None
    }
}

/// Whether two segments intersect, including touching and collinear overlap.
pub fn segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

fn orient(a: Point, b: Point, c: Point) -> i32 {
    let v = cross(b - a, c - a);
    let scale = (b - a).norm() * (c - a).norm();
    if v.abs() <= 1e-12 * scale {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    let eps = 1e-12 * (b - a).norm().max(1.0);
    p.re >= a.re.min(b.re) - eps
        && p.re <= a.re.max(b.re) + eps
        && p.im >= a.im.min(b.im) - eps
        && p.im <= a.im.max(b.im) + eps
}

/// Signed area of a closed polygon (positive when counter-clockwise).
pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    0.5 * (0..n).map(|i| cross(poly[i], poly[(i + 1) % n])).sum::<f64>()
}

/// Even-odd point-in-polygon test.
pub fn point_in_polygon(p: Point, poly: &[Point]) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if p.re < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Bounding box `(min, max)`.
pub fn bounding_box(points: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.re = lo.re.min(p.re);
        lo.im = lo.im.min(p.im);
        hi.re = hi.re.max(p.re);
        hi.im = hi.im.max(p.im);
    }
    (lo, hi)
}

/// Pairs of non-adjacent edges of a closed polygon that touch. Sweep over
/// `x`: edges sorted by their left end, compared only with active edges.
pub fn polygon_self_intersections(poly: &[Point], limit: usize) -> Vec<(usize, usize)> {
    let n = poly.len();
    let seg = |i: usize| (poly[i], poly[(i + 1) % n]);
    let mut order: Vec<usize> = (0..n).collect();
    let xmin = |i: usize| {
        let (a, b) = seg(i);
        a.re.min(b.re)
    };
    let xmax = |i: usize| {
        let (a, b) = seg(i);
        a.re.max(b.re)
    };
    order.sort_by(|&i, &j| xmin(i).total_cmp(&xmin(j)));
    let mut active: Vec<usize> = Vec::new();
    let mut hits = Vec::new();
    for &i in &order {
        let x0 = xmin(i);
        active.retain(|&j| xmax(j) >= x0 - 1e-12);
        let (a, b) = seg(i);
        let (ylo, yhi) = (a.im.min(b.im), a.im.max(b.im));
        for &j in &active {
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent {
                continue;
            }
            let (c, d) = seg(j);
            if c.im.max(d.im) < ylo - 1e-12 || c.im.min(d.im) > yhi + 1e-12 {
                continue;
            }
            if segments_touch(a, b, c, d) {
                hits.push((i.min(j), i.max(j)));
                if hits.len() >= limit {
                    return hits;
                }
            }
        }
        active.push(i);
    }
    hits
}
