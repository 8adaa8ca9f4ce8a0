//! Exit, hitting and lifetime statistics, and the trap scan.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::koch::geometry::Point;
use crate::rng::map_paths;
use crate::stats::Estimate;

use super::interval::Walker1D;
use super::planar::{PlanarGeometry, Walker2D};
use super::timechange::{base_lifetime, lifetime_h, lifetime_l, TimeTag};
use super::{Motion, Pt, WalkSpec};

/// Mean over uncensored paths, with the censored count kept alongside.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExitEstimate {
    pub estimate: Estimate,
    pub censored: usize,
}

/// Aggregate per-path results where `None` marks a censored path.
pub(crate) fn collect(results: Vec<Result<Option<f64>>>) -> Result<ExitEstimate> {
    let mut vals = Vec::with_capacity(results.len());
    let mut censored = 0;
    for r in results {
        match r? {
            Some(v) => vals.push(v),
            None => censored += 1,
        }
    }
    if vals.is_empty() {
        return Err(Error::Numeric(format!("all {censored} paths censored")));
    }
    Ok(ExitEstimate { estimate: Estimate::from_samples(&vals), censored })
}

/// Mean lifetime of the base motion or of its time change.
pub fn mean_exit_time(spec: &WalkSpec, n: usize, seed: u64, tag: &TimeTag) -> Result<ExitEstimate> {
    if n < 100 {
        return Err(domain(format!("need at least 100 paths, got {n}")));
    }
    spec.validate()?;
    collect(map_paths(n, |p| match tag {
        TimeTag::None => base_lifetime(spec, seed, p),
        TimeTag::L { symbol } => lifetime_l(spec, symbol, seed, p),
        TimeTag::H { symbol } => lifetime_h(spec, symbol, seed, p),
    }))
}

/// Closed ball `|x - center| <= radius`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Ball {
    pub center: Pt,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: Pt) -> bool {
        (p[0] - self.center[0]).hypot(p[1] - self.center[1]) <= self.radius
    }
}

fn hitting_time(spec: &WalkSpec, geom: Option<&Arc<PlanarGeometry>>, ball: &Ball, seed: u64, path: u64) -> Result<Option<f64>> {
    if ball.contains(spec.start) {
        return Ok(Some(0.0));
    }
    match geom {
        Some(g) => {
            let mut w = Walker2D::new(spec, g.clone(), seed, path)?
                .with_target(Point::new(ball.center[0], ball.center[1]), ball.radius);
            if let Some(lo) = spec.min_dt {
                w = w.adaptive(lo);
            }
            w.run_until_hit()
        }
        None => {
            let mut w = Walker1D::new(spec, seed, path)?;
            let (lo, hi) = (ball.center[0] - ball.radius, ball.center[0] + ball.radius);
            let mut x0 = w.x();
            while w.alive() && !w.censored() {
                w.step(spec.step())?;
                let x1 = w.x();
                if x0.max(x1) >= lo && x0.min(x1) <= hi {
                    return Ok(Some(w.time()));
                }
                x0 = x1;
            }
            Ok(None)
        }
    }
}

/// Mean first hitting time of `ball`; killed and censored paths count as censored.
pub fn mean_hitting_time(spec: &WalkSpec, ball: &Ball, n: usize, seed: u64) -> Result<ExitEstimate> {
    if n < 100 {
        return Err(domain(format!("need at least 100 paths, got {n}")));
    }
    spec.validate()?;
    if !(ball.radius > 0.0) || !spec.region.contains_closure(ball.center) {
        return Err(domain("ball must have positive radius and centre in the domain"));
    }
    let geom = if spec.region.is_one_dimensional() { None } else { Some(Arc::new(super::planar::PlanarGeometry::new(&spec.region)?)) };
    collect(map_paths(n, |p| hitting_time(spec, geom.as_ref(), ball, seed, p)))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrapRow {
    pub start: Pt,
    pub estimate: Estimate,
    pub censored: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrapScan {
    pub rows: Vec<TrapRow>,
    /// Row with the largest mean.
    pub sup: TrapRow,
}

impl TrapScan {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y,mean,se,count,censored\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.start[0], r.start[1], r.estimate.mean, r.estimate.se, r.estimate.count, r.censored
            ));
        }
        s
    }
}

/// `E_x[T_B]` for every start in `starts` with reflecting boundary and walls.
pub fn trap_scan(spec: &WalkSpec, ball: &Ball, starts: &[Pt], n: usize, seed: u64) -> Result<TrapScan> {
    if starts.is_empty() {
        return Err(domain("empty start grid"));
    }
    if !spec.boundary.reflects() {
        return Err(domain("trap scan needs a reflecting boundary"));
    }
    let mut rows = Vec::with_capacity(starts.len());
    for (i, &x) in starts.iter().enumerate() {
        let s = spec.with_start(x)?;
        let e = mean_hitting_time(&s, ball, n, crate::rng::derive_seed(seed, i as u64))?;
        rows.push(TrapRow { start: x, estimate: e.estimate, censored: e.censored });
    }
    let sup = rows
        .iter()
        .max_by(|a, b| a.estimate.mean.total_cmp(&b.estimate.mean))
        .expect("nonempty")
        .clone();
    Ok(TrapScan { rows, sup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::BernsteinSymbol;
    use crate::walker::{BoundaryMode, Region};

    #[test]
    fn lifetime_identities() {
        let spec = WalkSpec::unit_interval(0.5, 1e-4, BoundaryMode::Kill).unwrap();
        let base = mean_exit_time(&spec, 4000, 1, &TimeTag::None).unwrap();
        assert!(base.estimate.agrees_with(0.125, 3.0, 0.0), "{base:?}");
        let g = BernsteinSymbol::gamma(1.0, 2.0).unwrap();
        let direct = mean_exit_time(&spec, 4000, 2, &TimeTag::L { symbol: g.clone() }).unwrap();
        let ident = super::super::timechange::mean_h_at_lifetime(&spec, &g, 4000, 3).unwrap();
        assert!(direct.estimate.agrees_with(0.0625, 3.0, 0.0), "{direct:?}");
        assert!(direct.estimate.agrees_with_estimate(&ident.estimate, 3.0));
        assert!(mean_exit_time(&spec, 10, 1, &TimeTag::None).is_err());
    }

    #[test]
    fn ball_covering_everything() {
        let spec = WalkSpec::new(Region::Rectangle { a: 1.0, b: 1.0 }, [0.5, 0.5], 1e-4, BoundaryMode::Reflect).unwrap();
        let ball = Ball { center: [0.5, 0.5], radius: 2.0 };
        let starts = [[0.1, 0.1], [0.9, 0.5]];
        let scan = trap_scan(&spec, &ball, &starts, 100, 1).unwrap();
        assert!(scan.rows.iter().all(|r| r.estimate.mean == 0.0));
    }

    #[test]
    fn square_scan_finite() {
        let spec = WalkSpec::new(Region::Rectangle { a: 1.0, b: 1.0 }, [0.5, 0.5], 1e-4, BoundaryMode::Reflect).unwrap();
        let ball = Ball { center: [0.5, 0.5], radius: 0.1 };
        let starts: Vec<Pt> = (0..5).flat_map(|i| (0..5).map(move |j| [0.1 + 0.2 * i as f64, 0.1 + 0.2 * j as f64])).collect();
        let scan = trap_scan(&spec, &ball, &starts, 100, 2).unwrap();
        assert!(scan.rows.iter().all(|r| r.censored == 0 && r.estimate.mean.is_finite()));
        assert!(scan.sup.estimate.mean < 1.0);
    }
}
