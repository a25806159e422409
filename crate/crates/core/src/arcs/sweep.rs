use rayon::prelude::*;

use super::{build_with_policy, CurvatureSample};
use crate::error::{Error, Result};
use crate::geom::{dedup_points, difference_all, ConvexPolygon, Point};
use crate::ifs::{is_terminal, Ifs, PointSample, Visit};

/// Environment variable capping the number of sweep threads.
pub const THREADS_ENV: &str = "FRACTAL_CURVATURE_THREADS";

/// Thread pool honoring [`THREADS_ENV`]; the rayon default otherwise.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{THREADS_ENV}={v} is not a thread count")))?;
        b = b.num_threads(n.max(1));
    }
    b.build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
}

fn check_grid(eps_grid: &[f64]) -> Result<Vec<f64>> {
    if eps_grid.is_empty() {
        return Err(Error::InvalidArgument("empty eps grid".into()));
    }
    if let Some(e) = eps_grid.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidArgument(format!("eps {e} is not positive")));
    }
    let mut g = eps_grid.to_vec();
    g.sort_by(|a, b| b.total_cmp(a));
    g.dedup();
    Ok(g)
}

/// Curvature of `sample_ε` for every ε of the grid, rows by decreasing ε.
/// Every ε must be at least ten times the sample resolution.
pub fn curvature_sweep(sample: &PointSample, eps_grid: &[f64]) -> Result<Vec<CurvatureSample>> {
    let grid = check_grid(eps_grid)?;
    let res = sample.resolution;
    if let Some(&eps) = grid.iter().rev().find(|&&e| e < 10.0 * res) {
        return Err(Error::AccuracyGuard { eps, resolution: res });
    }
    if sample.is_empty() {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    let centers = dedup_points(&sample.points, 1e-12);
    let trace: Vec<usize> = (0..centers.len()).collect();
    thread_pool()?.install(|| {
        grid.par_iter()
            .map(|&eps| Ok(build_with_policy(&centers, &trace, eps, None)?.sample(eps)))
            .collect()
    })
}

/// Options for [`sweep_ifs`].
#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    /// Finest sampling resolution.
    pub delta: f64,
    /// When set, each ε is sampled at `max(delta, ε / 10)` instead of
    /// `delta`; samples are nested, so this only drops points that cannot
    /// change the result beyond the sampling error.
    pub adaptive: bool,
    /// Use a solid certificate when the IFS has one.
    pub certificate: bool,
    pub cap: usize,
}

impl SweepOptions {
    pub fn new(delta: f64) -> Self {
        SweepOptions {
            delta,
            adaptive: true,
            certificate: true,
            cap: crate::ifs::DEFAULT_SAMPLE_CAP,
        }
    }
}

/// A convex region `W` with `W ⊂ Φ(W)` (up to a sliver of relative area
/// `1e-9`), which forces `W ⊂ K`. Tried on the hull box.
pub fn solid_certificate(ifs: &Ifs) -> Option<ConvexPolygon> {
    if ifs.dim() != 2 {
        return None;
    }
    let w = ConvexPolygon::from_bbox(&ifs.hull())?;
    let area = w.area();
    let images: Vec<ConvexPolygon> = ifs
        .maps()
        .iter()
        .filter_map(|m| w.mapped(|p| m.map(p)))
        .collect();
    let rest = difference_all(vec![w.clone()], &images, 1e-15 * area);
    let left: f64 = rest.iter().map(ConvexPolygon::area).sum();
    (left <= 1e-9 * area).then_some(w)
}

/// Sample used by [`sweep_ifs`] at resolution `delta`: every cylinder
/// representative, or with a certificate `W` only those within `delta` of
/// the outside of `W` (subtrees lying deeper are skipped whole).
pub(crate) fn sweep_sample(
    ifs: &Ifs,
    delta: f64,
    solid: Option<&ConvexPolygon>,
    cap: usize,
) -> Result<Vec<Point>> {
    let Some(w) = solid else {
        return Ok(ifs.sample_capped(delta, cap)?.points);
    };
    let diam = ifs.diam();
    let corners = ifs.hull().corners();
    let seed = ifs.seed();
    let mut pts = Vec::new();
    let mut over = false;
    ifs.walk(|_, m| {
        if over {
            return Visit::Stop;
        }
        if is_terminal(m.ratio(), diam, delta) {
            let p = m.map(seed);
            if w.depth(p) <= delta {
                if pts.len() >= cap {
                    over = true;
                } else {
                    pts.push(p);
                }
            }
            return Visit::Stop;
        }
        // depth is concave on W, so its minimum over a box is at a corner
        let shallowest = corners
            .iter()
            .map(|&c| w.depth(m.map(c)))
            .fold(f64::INFINITY, f64::min);
        if shallowest > delta {
            Visit::Stop
        } else {
            Visit::Descend
        }
    });
    if over {
        return Err(Error::SampleBudget { cap, delta });
    }
    Ok(pts)
}

/// Curvature sweep of an attractor directly from its IFS.
///
/// With a solid certificate `W` the parallel set is computed as
/// `W ∪ ⋃ B(x, ε)` over sample points `x` within `δ` of the outside of `W`.
/// Deeper points are skipped: any boundary point of their circles lies
/// strictly inside a disk around a shallower point.
pub fn sweep_ifs(ifs: &Ifs, eps_grid: &[f64], opts: SweepOptions) -> Result<Vec<CurvatureSample>> {
    let grid = check_grid(eps_grid)?;
    if !(opts.delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {}", opts.delta)));
    }
    if let Some(&eps) = grid.iter().rev().find(|&&e| e < 10.0 * opts.delta) {
        return Err(Error::AccuracyGuard {
            eps,
            resolution: opts.delta,
        });
    }
    let solid = if opts.certificate { solid_certificate(ifs) } else { None };
    let run = |eps: f64, delta: f64| -> Result<CurvatureSample> {
        let centers = dedup_points(&sweep_sample(ifs, delta, solid.as_ref(), opts.cap)?, 1e-12);
        let trace: Vec<usize> = (0..centers.len()).collect();
        Ok(build_with_policy(&centers, &trace, eps, solid.as_ref())?.sample(eps))
    };
    thread_pool()?.install(|| {
        grid.par_iter()
            .map(|&eps| {
                let delta = if opts.adaptive {
                    opts.delta.max(eps / 10.0)
                } else {
                    opts.delta
                };
                run(eps, delta)
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::DiskUnion;
    use crate::ifs::Similarity;
    use std::f64::consts::PI;

    fn square() -> Ifs {
        Ifs::new(
            [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)]
                .iter()
                .map(|&(x, y)| Similarity::scaled(0.5, Point::new(x, y)).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn guard_rejects_fine_eps() {
        let s = PointSample {
            points: vec![Point::ORIGIN],
            resolution: 0.01,
            dim: 2,
        };
        let err = curvature_sweep(&s, &[0.5, 0.05]).unwrap_err();
        assert!(matches!(err, Error::AccuracyGuard { eps, .. } if eps == 0.05));
    }

    #[test]
    fn single_point_gives_ball_values() {
        let s = PointSample {
            points: vec![Point::new(1.0, 2.0)],
            resolution: 1e-3,
            dim: 2,
        };
        let rows = curvature_sweep(&s, &[0.1, 0.4, 0.2]).unwrap();
        let eps: Vec<f64> = rows.iter().map(|r| r.eps).collect();
        assert_eq!(eps, vec![0.4, 0.2, 0.1]);
        for r in rows {
            assert_eq!((r.c0, r.c0var), (1.0, 1.0));
            assert!((r.c1 - PI * r.eps).abs() < 1e-14);
            assert!((r.c2 - PI * r.eps * r.eps).abs() < 1e-14);
        }
    }

    #[test]
    fn two_points_match_two_disks() {
        let s = PointSample {
            points: vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)],
            resolution: 1e-3,
            dim: 2,
        };
        for eps in [0.45, 0.6, 1.0] {
            let r = curvature_sweep(&s, &[eps]).unwrap()[0];
            let d = DiskUnion::new(s.points.clone(), eps).unwrap().curvature().unwrap();
            assert_eq!(r, d);
        }
        let r = curvature_sweep(&s, &[1.0]).unwrap()[0];
        assert!((r.c0var - 5.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn square_has_certificate_gasket_not() {
        assert!(solid_certificate(&square()).is_some());
        let h = 3f64.sqrt() / 2.0;
        let gasket = Ifs::new(vec![
            Similarity::scaled(0.5, Point::new(0.0, 0.0)).unwrap(),
            Similarity::scaled(0.5, Point::new(0.5, 0.0)).unwrap(),
            Similarity::scaled(0.5, Point::new(0.25, h / 2.0)).unwrap(),
        ])
        .unwrap();
        assert!(solid_certificate(&gasket).is_none());
    }

    #[test]
    fn certified_square_sweep_matches_rounded_square() {
        let mut opts = SweepOptions::new(1e-3);
        opts.adaptive = false;
        let rows = sweep_ifs(&square(), &[0.05, 0.02, 0.01], opts).unwrap();
        for r in rows {
            let e = r.eps;
            assert_eq!((r.c0, r.n_components, r.n_holes), (1.0, 1, 0));
            let area = 1.0 + 4.0 * e + PI * e * e;
            let half_perimeter = 2.0 + PI * e;
            assert!((r.c2 / area - 1.0).abs() < 2e-3, "{r:?}");
            assert!((r.c1 / half_perimeter - 1.0).abs() < 2e-3, "{r:?}");
        }
    }

    #[test]
    fn certified_and_plain_sweeps_agree() {
        let mut plain = SweepOptions::new(0.02);
        plain.certificate = false;
        let a = sweep_ifs(&square(), &[0.25], plain).unwrap()[0];
        let b = sweep_ifs(&square(), &[0.25], SweepOptions::new(0.02)).unwrap()[0];
        assert_eq!(a.c0, b.c0);
        assert!((a.c2 / b.c2 - 1.0).abs() < 0.02);
        assert!((a.c1 / b.c1 - 1.0).abs() < 0.02);
    }
}
