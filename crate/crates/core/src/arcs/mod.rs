//! Boundary arrangement of a union of equal closed disks and the curvature
//! measures of the union read off from it.
//!
//! Every boundary arc is traversed counterclockwise about its own center, so
//! the union lies on its left. Arc turning is positive, vertex turning is
//! negative, and each closed loop turns by `+2π` (outer) or `-2π` (hole).

mod sweep;

use std::collections::HashMap;
use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{dedup_points, ConvexPolygon, Point, PointGrid};

pub use sweep::{curvature_sweep, solid_certificate, sweep_ifs, thread_pool, SweepOptions};

/// Two events closer than this (relative to the radius, or in radians) are
/// treated as coincident.
const EVENT_TOL: f64 = 1e-10;
/// Relative radius nudge applied once when the arrangement is degenerate.
const PERTURBATION: f64 = 1e-9;
/// Loop turning must be within this of `±2π`.
const LOOP_TOL: f64 = 1e-6;
/// Reach of the first covering pass, relative to the radius.
const NEAR_FIRST: f64 = 0.15;

/// Owner tag for coverage by a solid convex region rather than a disk.
const SOLID: usize = usize::MAX;

/// Finite union of closed disks of a common radius.
#[derive(Clone, Debug)]
pub struct DiskUnion {
    centers: Vec<Point>,
    radius: f64,
}

impl DiskUnion {
    /// Validates the radius and centers and removes duplicate centers
    /// (closer than `1e-12`).
    pub fn new(centers: Vec<Point>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        if centers.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidArgument("disk centers must be finite".into()));
        }
        Ok(DiskUnion {
            centers: dedup_points(&centers, 1e-12),
            radius,
        })
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn boundary(&self) -> Result<ArcBoundary> {
        build_boundary(self)
    }

    pub fn curvature(&self) -> Result<CurvatureSample> {
        curvature(self)
    }
}

/// A maximal boundary arc on circle `disk`, running counterclockwise from
/// `start` to `end` (`end > start`, extent at most `2π`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Arc {
    pub disk: usize,
    pub start: f64,
    pub end: f64,
    /// Always `true`: arcs run counterclockwise about their center.
    pub ccw: bool,
    /// Disk whose coverage ends where this arc starts (`None` for a full circle).
    pub start_neighbor: Option<usize>,
    /// Disk whose coverage begins where this arc ends.
    pub end_neighbor: Option<usize>,
}

impl Arc {
    pub fn extent(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_full(&self) -> bool {
        self.start_neighbor.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Vertex {
    pub point: Point,
    pub incoming: usize,
    pub outgoing: usize,
    /// Exterior turning angle, in `(-π, 0)` for a disk union.
    pub turning: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Loop {
    pub arcs: Vec<usize>,
    pub outer: bool,
    /// Arc extents plus vertex turnings along the loop.
    pub turning: f64,
}

/// Arcs, vertices and closed loops of the boundary of a disk union.
#[derive(Clone, Debug, Serialize)]
pub struct ArcBoundary {
    /// Radius actually used; differs from the nominal one after a
    /// perturbation.
    pub radius: f64,
    pub perturbed: bool,
    pub arcs: Vec<Arc>,
    pub vertices: Vec<Vertex>,
    pub loops: Vec<Loop>,
    area: f64,
}

impl ArcBoundary {
    pub fn total_arc_angle(&self) -> f64 {
        self.arcs.iter().map(Arc::extent).sum()
    }

    pub fn total_vertex_turning(&self) -> f64 {
        self.vertices.iter().map(|v| v.turning.abs()).sum()
    }

    pub fn n_outer(&self) -> usize {
        self.loops.iter().filter(|l| l.outer).count()
    }

    pub fn n_holes(&self) -> usize {
        self.loops.len() - self.n_outer()
    }

    /// Enclosed area, by Green's theorem over the arcs.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// Curvature measures of the union, reported at the nominal radius `eps`.
    pub fn sample(&self, eps: f64) -> CurvatureSample {
        let arc = self.total_arc_angle();
        let outer = self.n_outer();
        let holes = self.n_holes();
        CurvatureSample {
            eps,
            c0: outer as f64 - holes as f64,
            c0var: (arc + self.total_vertex_turning()) / TAU,
            c1: 0.5 * self.radius * arc,
            c2: self.area,
            n_components: outer,
            n_holes: holes,
        }
    }
}

/// `(ε, C_0, C_0^var, C_1, C_2)` of one parallel set, with its topology.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub eps: f64,
    pub c0: f64,
    pub c0var: f64,
    pub c1: f64,
    pub c2: f64,
    pub n_components: usize,
    pub n_holes: usize,
}

impl CurvatureSample {
    pub const CSV_HEADER: &'static str = "eps,c0,c0var,c1,c2,components,holes";

    pub fn csv(&self) -> String {
        format!(
            "{:e},{},{},{},{},{},{}",
            self.eps, self.c0, self.c0var, self.c1, self.c2, self.n_components, self.n_holes
        )
    }

    pub fn parse_csv(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 7 {
            return Err(Error::Parse(format!("expected 7 fields, got {}: '{line}'", f.len())));
        }
        let real = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("'{s}': {e}")))
        };
        let int = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("'{s}': {e}")))
        };
        Ok(CurvatureSample {
            eps: real(f[0])?,
            c0: real(f[1])?,
            c0var: real(f[2])?,
            c1: real(f[3])?,
            c2: real(f[4])?,
            n_components: int(f[5])?,
            n_holes: int(f[6])?,
        })
    }

    /// `C_k^var` for `k ∈ {0, 1, 2}`.
    pub fn value(&self, k: usize) -> Option<f64> {
        match k {
            0 => Some(self.c0var),
            1 => Some(self.c1),
            2 => Some(self.c2),
            _ => None,
        }
    }
}

pub fn build_boundary(u: &DiskUnion) -> Result<ArcBoundary> {
    let all: Vec<usize> = (0..u.centers.len()).collect();
    build_with_policy(&u.centers, &all, u.radius, None)
}

pub fn curvature(u: &DiskUnion) -> Result<CurvatureSample> {
    Ok(build_boundary(u)?.sample(u.radius))
}

/// Builds the boundary of `solid ∪ ⋃ B(centers[i], eps)`, tracing only the
/// circles listed in `trace`; the others may cover but are known not to
/// reach the boundary. Applies the perturbation policy.
pub(crate) fn build_with_policy(
    centers: &[Point],
    trace: &[usize],
    eps: f64,
    solid: Option<&ConvexPolygon>,
) -> Result<ArcBoundary> {
    match Arrangement::new(centers, eps, solid).build(trace) {
        Ok(b) => Ok(b),
        Err(first) => {
            let nudged = eps * (1.0 + PERTURBATION);
            match Arrangement::new(centers, nudged, solid).build(trace) {
                Ok(mut b) => {
                    b.perturbed = true;
                    Ok(b)
                }
                Err(second) => Err(Error::Degenerate(format!(
                    "{first}; after radius {nudged:e}: {second}"
                ))),
            }
        }
    }
}

struct Arrangement<'a> {
    centers: &'a [Point],
    eps: f64,
    grid: PointGrid,
    solid: Option<&'a ConvexPolygon>,
    origin: Point,
}

/// Covered angular interval; the owners are the disks (or the solid)
/// responsible for its two ends.
#[derive(Clone, Copy)]
struct Interval {
    s: f64,
    e: f64,
    owner: usize,
    end_owner: usize,
}

enum CircleArcs {
    Covered,
    Full,
    Arcs(Vec<Arc>),
}

impl<'a> Arrangement<'a> {
    fn new(centers: &'a [Point], eps: f64, solid: Option<&'a ConvexPolygon>) -> Self {
        Arrangement {
            centers,
            eps,
            grid: PointGrid::new(centers, 0.5 * eps),
            solid,
            origin: centers.first().copied().unwrap_or(Point::ORIGIN),
        }
    }

    fn build(&self, trace: &[usize]) -> std::result::Result<ArcBoundary, String> {
        let mut arcs = Vec::new();
        for &i in trace {
            match self.circle_arcs(i)? {
                CircleArcs::Covered => {}
                CircleArcs::Full => arcs.push(Arc {
                    disk: i,
                    start: 0.0,
                    end: TAU,
                    ccw: true,
                    start_neighbor: None,
                    end_neighbor: None,
                }),
                CircleArcs::Arcs(a) => arcs.extend(a),
            }
        }
        self.assemble(arcs)
    }

    fn center(&self, i: usize) -> Point {
        self.centers[i]
    }

    /// Angular intervals of circle `i` covered by the disks at center
    /// distance in `(lo, hi]`, plus the solid when `with_solid` is set.
    fn covering(
        &self,
        i: usize,
        (lo, hi): (f64, f64),
        with_solid: bool,
        gaps: Option<&[Gap]>,
        out: &mut Vec<Interval>,
    ) -> std::result::Result<(), String> {
        let c = self.center(i);
        let two_eps = 2.0 * self.eps;
        let tol = EVENT_TOL * self.eps;
        let hi = hi.min(two_eps + tol);
        let (lo2, hi2) = (lo * lo.abs(), hi * hi);
        let mut err = None;
        self.grid.for_each_candidate(c, hi, |j| {
            if j == i || err.is_some() {
                return;
            }
            let cj = self.center(j);
            let d2 = c.dist2(cj);
            if d2 <= lo2 || d2 > hi2 {
                return;
            }
            let d = d2.sqrt();
            if (d - two_eps).abs() <= tol && !self.buried(c.lerp(cj, 0.5), i, j) {
                err = Some(format!("disks {i} and {j} are tangent"));
                return;
            }
            if d >= two_eps || gaps.is_some_and(|g| !g.iter().any(|g| g.reached_by(c, cj, d, self.eps))) {
                return;
            }
            let h = (d / two_eps).acos();
            let phi = (cj - c).angle();
            let s = wrap(phi - h);
            out.push(Interval { s, e: s + 2.0 * h, owner: j, end_owner: j });
        });
        if let Some(e) = err {
            return Err(e);
        }
        if let Some(w) = self.solid.filter(|_| with_solid) {
            for (s, e) in w.circle_inside_arcs(c, self.eps) {
                out.push(Interval { s, e, owner: SOLID, end_owner: SOLID });
            }
        }
        Ok(())
    }

    /// Whether `p` lies strictly inside a disk other than `i`, `j`, or inside
    /// the solid.
    fn buried(&self, p: Point, i: usize, j: usize) -> bool {
        let lim = self.eps * (1.0 - 1e-9);
        let mut hit = false;
        self.grid.for_each_candidate(p, self.eps, |k| {
            if !hit && k != i && k != j && self.center(k).dist(p) < lim {
                hit = true;
            }
        });
        hit || self.solid.is_some_and(|w| w.depth(p) > EVENT_TOL * self.eps)
    }

    fn circle_arcs(&self, i: usize) -> std::result::Result<CircleArcs, String> {
        let eps = self.eps;
        let mut near = Vec::new();
        let mut scratch = Vec::new();
        // cheap passes with the nearest disks, which usually bury interior circles
        let mut near_merged = Vec::new();
        for (k, band) in [(-1.0, NEAR_FIRST * eps), (NEAR_FIRST * eps, 0.5 * eps)].into_iter().enumerate() {
            self.covering(i, band, k == 0, None, &mut near)?;
            if near.is_empty() {
                continue;
            }
            scratch.clear();
            scratch.extend_from_slice(&near);
            match merge(&mut scratch) {
                None => return Ok(CircleArcs::Covered),
                Some(m) => near_merged = m,
            }
        }
        let gaps = (!near_merged.is_empty()).then(|| Gap::between(&near_merged, self.center(i), eps));
        let mut iv = Vec::new();
        self.covering(i, (0.5 * eps, f64::INFINITY), false, gaps.as_deref(), &mut iv)?;
        // far intervals strictly inside the near coverage cannot shape the arcs
        iv.retain(|x| !strictly_inside(x, &near_merged));
        iv.extend_from_slice(&near);
        if iv.is_empty() {
            return Ok(CircleArcs::Full);
        }
        let raw = iv.clone();
        let Some(merged) = merge(&mut iv) else {
            return Ok(CircleArcs::Covered);
        };
        let m = merged.len();
        let mut arcs = Vec::with_capacity(m);
        for k in 0..m {
            let a = merged[k];
            let b = if k + 1 < m {
                merged[k + 1]
            } else {
                Interval {
                    s: merged[0].s + TAU,
                    ..merged[0]
                }
            };
            let (start, end) = (a.e, b.s);
            if end - start <= EVENT_TOL {
                return Err(format!("vanishing boundary arc on disk {i}"));
            }
            for (angle, owner) in [(start, a.end_owner), (end, b.owner)] {
                if let Some(other) = raw.iter().find(|r| {
                    r.owner != owner
                        && (ang_dist(r.s, angle) <= EVENT_TOL || ang_dist(r.e, angle) <= EVENT_TOL)
                }) {
                    return Err(format!(
                        "disks {i}, {} and {} meet in one boundary point",
                        owner_name(owner),
                        owner_name(other.owner)
                    ));
                }
            }
            if a.end_owner == SOLID || b.owner == SOLID {
                return Err(format!("boundary arc on disk {i} ends on the solid region"));
            }
            let start = wrap(start);
            arcs.push(Arc {
                disk: i,
                start,
                end: start + (end - a.e),
                ccw: true,
                start_neighbor: Some(a.end_owner),
                end_neighbor: Some(b.owner),
            });
        }
        Ok(CircleArcs::Arcs(arcs))
    }

    fn assemble(&self, arcs: Vec<Arc>) -> std::result::Result<ArcBoundary, String> {
        let eps = self.eps;
        let mut by_start: HashMap<(usize, usize), usize> = HashMap::with_capacity(arcs.len());
        for (k, a) in arcs.iter().enumerate() {
            if let Some(j) = a.start_neighbor {
                if by_start.insert((a.disk, j), k).is_some() {
                    return Err(format!("disk {} has two arcs starting at disk {j}", a.disk));
                }
            }
        }
        let mut vertices = Vec::new();
        let mut loops = Vec::new();
        let mut seen = vec![false; arcs.len()];
        let mut area2 = 0.0;
        for (k, a) in arcs.iter().enumerate() {
            area2 += self.green(a);
            if seen[k] {
                continue;
            }
            let mut ids = Vec::new();
            let mut turning = 0.0;
            let mut cur = k;
            loop {
                seen[cur] = true;
                ids.push(cur);
                let arc = &arcs[cur];
                turning += arc.extent();
                let Some(j) = arc.end_neighbor else { break };
                let next = *by_start
                    .get(&(j, arc.disk))
                    .ok_or_else(|| format!("no boundary arc leaves disk {} towards disk {j}", arc.disk))?;
                let ci = self.center(arc.disk);
                let cj = self.center(j);
                let p = ci + Point::polar(eps, arc.end);
                let q = cj + Point::polar(eps, arcs[next].start);
                if p.dist(q) > 1e-6 * eps {
                    return Err(format!("arcs on disks {} and {j} do not meet", arc.disk));
                }
                let (u, v) = (p - ci, p - cj);
                let t = u.cross(v).atan2(u.dot(v));
                turning += t;
                vertices.push(Vertex {
                    point: p,
                    incoming: cur,
                    outgoing: next,
                    turning: t,
                });
                if next == k {
                    break;
                }
                if seen[next] {
                    return Err(format!("boundary walk from disk {} re-enters a loop", arcs[k].disk));
                }
                cur = next;
            }
            let outer = if (turning - TAU).abs() <= LOOP_TOL {
                true
            } else if (turning + TAU).abs() <= LOOP_TOL {
                false
            } else {
                return Err(format!(
                    "loop through disk {} turns by {turning}, not ±2π",
                    arcs[k].disk
                ));
            };
            loops.push(Loop {
                arcs: ids,
                outer,
                turning,
            });
        }
        Ok(ArcBoundary {
            radius: eps,
            perturbed: false,
            arcs,
            vertices,
            loops,
            area: 0.5 * area2,
        })
    }

    /// `∮ x dy − y dx` along one arc, relative to a fixed origin.
    fn green(&self, a: &Arc) -> f64 {
        let c = self.center(a.disk) - self.origin;
        let e = self.eps;
        let (s1, c1) = a.start.sin_cos();
        let (s2, c2) = a.end.sin_cos();
        e * e * a.extent() + e * (c.x * (s2 - s1) - c.y * (c2 - c1))
    }
}

/// Uncovered arc of a circle left by a partial coverage.
struct Gap {
    mid: Point,
    cos_half: f64,
    ends: [Point; 2],
}

impl Gap {
    fn between(merged: &[Interval], c: Point, r: f64) -> Vec<Gap> {
        let m = merged.len();
        (0..m)
            .map(|k| {
                let s = merged[k].e;
                let e = if k + 1 < m { merged[k + 1].s } else { merged[0].s + TAU };
                let half = 0.5 * (e - s);
                Gap {
                    mid: Point::polar(1.0, s + half),
                    cos_half: half.cos(),
                    ends: [c + Point::polar(r, s), c + Point::polar(r, e)],
                }
            })
            .collect()
    }

    /// Whether the disk of radius `r` at `cj` (at distance `d` from the
    /// circle's center `c`, `0 < d < 2r`) comes near this arc.
    fn reached_by(&self, c: Point, cj: Point, d: f64, r: f64) -> bool {
        const MARGIN: f64 = 1e-6;
        (cj - c).dot(self.mid) >= d * self.cos_half - MARGIN * r
            || self.ends.iter().any(|&p| p.dist(cj) <= r * (1.0 + MARGIN))
    }
}

fn owner_name(o: usize) -> String {
    if o == SOLID {
        "solid".to_string()
    } else {
        o.to_string()
    }
}

/// Reduces an angle in `[-2π, 4π)` to `[0, 2π)`.
#[inline]
fn wrap(a: f64) -> f64 {
    let w = if a < 0.0 {
        a + TAU
    } else if a >= TAU {
        a - TAU
    } else {
        a
    };
    if (0.0..TAU).contains(&w) {
        w
    } else {
        a.rem_euclid(TAU)
    }
}

fn ang_dist(a: f64, b: f64) -> f64 {
    let d = wrap(a - b);
    d.min(TAU - d)
}

fn strictly_inside(x: &Interval, merged: &[Interval]) -> bool {
    let inside = |m: &Interval, s: f64, e: f64| m.s + EVENT_TOL < s && e < m.e - EVENT_TOL;
    let k = merged.partition_point(|m| m.s <= x.s);
    (k > 0 && inside(&merged[k - 1], x.s, x.e))
        || merged
            .last()
            .is_some_and(|m| inside(m, x.s + TAU, x.e + TAU))
}

/// Merges circular intervals (`s ∈ [0, 2π)`, `e > s`). Returns `None` when
/// they cover the whole circle, otherwise disjoint intervals sorted by start
/// with the last one ending before the first restarts.
fn merge(iv: &mut [Interval]) -> Option<Vec<Interval>> {
    iv.sort_by(|a, b| a.s.total_cmp(&b.s));
    let mut out: Vec<Interval> = Vec::with_capacity(iv.len());
    for &x in iv.iter() {
        match out.last_mut() {
            Some(cur) if x.s <= cur.e => {
                if x.e > cur.e {
                    cur.e = x.e;
                    cur.end_owner = x.end_owner;
                }
            }
            _ => out.push(x),
        }
    }
    // fold wrap-around overlap of the last interval into the first ones
    while out.len() > 1 {
        let first = out[0];
        let last = out.last_mut().expect("nonempty");
        if last.e < first.s + TAU {
            break;
        }
        if first.e + TAU > last.e {
            last.e = first.e + TAU;
            last.end_owner = first.end_owner;
        }
        out.remove(0);
    }
    if out.len() == 1 && out[0].e - out[0].s >= TAU {
        return None;
    }
    Some(out)
}

/// Two-disk lens area `2r²·acos(d/2r) − (d/2)·√(4r² − d²)`.
pub fn lens_area(r: f64, d: f64) -> f64 {
    if d >= 2.0 * r {
        return 0.0;
    }
    2.0 * r * r * (d / (2.0 * r)).acos() - 0.5 * d * (4.0 * r * r - d * d).sqrt()
}
