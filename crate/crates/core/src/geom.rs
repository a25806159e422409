//! Small planar geometry toolkit shared by the other modules: points,
//! axis-aligned boxes, convex polygons and a uniform-grid spatial index.

use rustc_hash::FxHashMap as HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point (or vector) of the plane. One-dimensional data lives on the x-axis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    #[inline]
    pub fn dist2(self, o: Point) -> f64 {
        let d = self - o;
        d.dot(d)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn polar(r: f64, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(r * c, r * s)
    }

    #[inline]
    pub fn rotate(self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Closed axis-aligned box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn new(min: Point, max: Point) -> Self {
        BBox { min, max }
    }

    pub fn from_points<I: IntoIterator<Item = Point>>(pts: I) -> Option<BBox> {
        let mut it = pts.into_iter();
        let first = it.next()?;
        let mut b = BBox::new(first, first);
        for p in it {
            b.include(p);
        }
        Some(b)
    }

    pub fn include(&mut self, p: Point) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(&self, o: &BBox) -> BBox {
        let mut b = *self;
        b.include(o.min);
        b.include(o.max);
        b
    }

    pub fn expand(&self, m: f64) -> BBox {
        BBox::new(
            Point::new(self.min.x - m, self.min.y - m),
            Point::new(self.max.x + m, self.max.y + m),
        )
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn diag(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Point {
        self.min.lerp(self.max, 0.5)
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            self.min,
            Point::new(self.max.x, self.min.y),
            self.max,
            Point::new(self.min.x, self.max.y),
        ]
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn intersects(&self, o: &BBox) -> bool {
        self.min.x <= o.max.x && o.min.x <= self.max.x && self.min.y <= o.max.y && o.min.y <= self.max.y
    }

    /// Euclidean distance from `p` to the box (0 inside).
    pub fn dist(&self, p: Point) -> f64 {
        let dx = (self.min.x - p.x).max(0.0).max(p.x - self.max.x);
        let dy = (self.min.y - p.y).max(0.0).max(p.y - self.max.y);
        dx.hypot(dy)
    }

    /// Distance between the closest points of two boxes.
    pub fn box_dist(&self, o: &BBox) -> f64 {
        let dx = (self.min.x - o.max.x).max(o.min.x - self.max.x).max(0.0);
        let dy = (self.min.y - o.max.y).max(o.min.y - self.max.y).max(0.0);
        dx.hypot(dy)
    }

    /// Largest distance from `p` to a point of the box.
    pub fn max_dist(&self, p: Point) -> f64 {
        let dx = (p.x - self.min.x).abs().max((p.x - self.max.x).abs());
        let dy = (p.y - self.min.y).abs().max((p.y - self.max.y).abs());
        dx.hypot(dy)
    }
}

/// Convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Builds the polygon, reorienting clockwise input. Returns `None` for
    /// fewer than three vertices or zero area.
    pub fn new(mut vertices: Vec<Point>) -> Option<Self> {
        if vertices.len() < 3 {
            return None;
        }
        let a = signed_area(&vertices);
        if a.abs() <= f64::EPSILON {
            return None;
        }
        if a < 0.0 {
            vertices.reverse();
        }
        Some(ConvexPolygon { vertices })
    }

    pub fn from_bbox(b: &BBox) -> Option<Self> {
        ConvexPolygon::new(b.corners().to_vec())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Signed distance to the boundary measured inward: positive inside,
    /// equal to the distance to the boundary for interior points. For points
    /// outside this is only a lower bound of minus the distance.
    pub fn depth(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| {
                let e = b - a;
                e.cross(p - a) / e.norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn bbox(&self) -> BBox {
        BBox::from_points(self.vertices.iter().copied()).expect("nonempty polygon")
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len();
        let (mut cx, mut cy, mut a) = (0.0, 0.0, 0.0);
        let o = self.vertices[0];
        for i in 0..n {
            let p = self.vertices[i] - o;
            let q = self.vertices[(i + 1) % n] - o;
            let w = p.cross(q);
            a += w;
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        o + Point::new(cx, cy) * (1.0 / (3.0 * a))
    }

    /// Open-interior membership.
    pub fn contains(&self, p: Point) -> bool {
        self.depth(p) > 0.0
    }

    /// Image under a similarity or any orientation-agnostic affine map.
    pub fn mapped<F: Fn(Point) -> Point>(&self, f: F) -> Option<ConvexPolygon> {
        ConvexPolygon::new(self.vertices.iter().map(|&p| f(p)).collect())
    }

    /// Part on the left of the directed line `a → b` (closed half-plane).
    pub fn clip(&self, a: Point, b: Point) -> Option<ConvexPolygon> {
        let e = b - a;
        let side = |p: Point| e.cross(p - a);
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0) {
                out.push(p.lerp(q, sp / (sp - sq)));
            }
        }
        ConvexPolygon::new(out)
    }

    pub fn intersection(&self, other: &ConvexPolygon) -> Option<ConvexPolygon> {
        other
            .edges()
            .try_fold(self.clone(), |acc, (a, b)| acc.clip(a, b))
    }

    /// `self \ other` as disjoint convex pieces, dropping pieces with area
    /// at most `min_area`.
    pub fn difference(&self, other: &ConvexPolygon, min_area: f64) -> Vec<ConvexPolygon> {
        if !self.bbox().intersects(&other.bbox()) {
            return vec![self.clone()];
        }
        let mut out = Vec::new();
        let mut rest = Some(self.clone());
        for (a, b) in other.edges() {
            let Some(r) = rest.take() else { break };
            if let Some(outside) = r.clip(b, a) {
                if outside.area() > min_area {
                    out.push(outside);
                }
            }
            rest = r.clip(a, b);
        }
        out
    }

    /// Angular intervals `(start, end)` with `start < end`, `start ∈ [0, 2π)`,
    /// on which the circle of radius `r` about `c` runs through the open
    /// interior.
    pub fn circle_inside_arcs(&self, c: Point, r: f64) -> Vec<(f64, f64)> {
        use std::f64::consts::TAU;
        let mut cuts = Vec::new();
        for (a, b) in self.edges() {
            // |a + t(b-a) - c| = r
            let d = b - a;
            let f = a - c;
            let qa = d.dot(d);
            let qb = 2.0 * f.dot(d);
            let qc = f.dot(f) - r * r;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                continue;
            }
            let sq = disc.sqrt();
            for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
                if (0.0..=1.0).contains(&t) {
                    cuts.push((a + d * t - c).angle().rem_euclid(TAU));
                }
            }
        }
        if cuts.is_empty() {
            return if self.contains(c + Point::new(r, 0.0)) {
                vec![(0.0, TAU)]
            } else {
                vec![]
            };
        }
        cuts.sort_by(f64::total_cmp);
        let mut out = Vec::new();
        let n = cuts.len();
        for i in 0..n {
            let s = cuts[i];
            let e = if i + 1 < n { cuts[i + 1] } else { cuts[0] + TAU };
            if e - s <= 0.0 {
                continue;
            }
            if self.contains(c + Point::polar(r, 0.5 * (s + e))) {
                out.push((s, e));
            }
        }
        out
    }
}

/// Subtracts every cutter from every piece.
pub fn difference_all(
    pieces: Vec<ConvexPolygon>,
    cutters: &[ConvexPolygon],
    min_area: f64,
) -> Vec<ConvexPolygon> {
    cutters.iter().fold(pieces, |acc, cut| {
        acc.into_iter()
            .flat_map(|p| p.difference(cut, min_area))
            .collect()
    })
}

/// Shoelace signed area (positive for counterclockwise order).
pub fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() * 0.5
}

/// Distance from `p` to the segment `[a, b]`.
pub fn segment_dist(p: Point, a: Point, b: Point) -> f64 {
    let e = b - a;
    let l2 = e.dot(e);
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(e) / l2).clamp(0.0, 1.0);
    p.dist(a + e * t)
}

type CellKey = (i64, i64);

/// Uniform-grid spatial index over a fixed point set.
#[derive(Debug, Clone)]
pub struct PointGrid {
    cell: f64,
    order: Vec<u32>,
    cells: HashMap<CellKey, (u32, u32)>,
}

impl PointGrid {
    pub fn new(points: &[Point], cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite(), "cell size must be positive");
        let mut keyed: Vec<(CellKey, u32)> = points
            .iter()
            .enumerate()
            .map(|(i, &p)| (Self::key_for(cell, p), i as u32))
            .collect();
        keyed.sort_unstable();
        let mut cells = HashMap::with_capacity_and_hasher(keyed.len() / 2 + 1, Default::default());
        let mut start = 0usize;
        while start < keyed.len() {
            let k = keyed[start].0;
            let mut end = start + 1;
            while end < keyed.len() && keyed[end].0 == k {
                end += 1;
            }
            cells.insert(k, (start as u32, end as u32));
            start = end;
        }
        PointGrid {
            cell,
            order: keyed.into_iter().map(|(_, i)| i).collect(),
            cells,
        }
    }

    #[inline]
    fn key_for(cell: f64, p: Point) -> CellKey {
        ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    #[inline]
    fn cell_members(&self, k: CellKey) -> &[u32] {
        match self.cells.get(&k) {
            Some(&(s, e)) => &self.order[s as usize..e as usize],
            None => &[],
        }
    }

    /// Calls `f(index)` for every point whose cell lies within `r` of `p`
    /// (a superset of the points within distance `r`).
    pub fn for_each_candidate<F: FnMut(usize)>(&self, p: Point, r: f64, mut f: F) {
        let lo = Self::key_for(self.cell, Point::new(p.x - r, p.y - r));
        let hi = Self::key_for(self.cell, Point::new(p.x + r, p.y + r));
        for cx in lo.0..=hi.0 {
            for cy in lo.1..=hi.1 {
                for &i in self.cell_members((cx, cy)) {
                    f(i as usize);
                }
            }
        }
    }

    /// Nearest point to `p` among those accepted by `keep`, searched up to
    /// distance `max_r`. Returns `(index, distance)`.
    pub fn nearest_where<F: Fn(usize) -> bool>(
        &self,
        points: &[Point],
        p: Point,
        max_r: f64,
        keep: F,
    ) -> Option<(usize, f64)> {
        let (kx, ky) = Self::key_for(self.cell, p);
        let max_ring = (max_r / self.cell).ceil() as i64 + 1;
        let mut best: Option<(usize, f64)> = None;
        for ring in 0..=max_ring {
            // every point in ring `ring` is at least (ring - 1) * cell away
            let ring_min = (ring - 1).max(0) as f64 * self.cell;
            if let Some((_, d)) = best {
                if ring_min > d {
                    break;
                }
            }
            if ring_min > max_r {
                break;
            }
            let mut visit = |cx: i64, cy: i64| {
                for &i in self.cell_members((cx, cy)) {
                    let i = i as usize;
                    if !keep(i) {
                        continue;
                    }
                    let d = points[i].dist(p);
                    if d <= max_r && best.is_none_or(|(_, bd)| d < bd) {
                        best = Some((i, d));
                    }
                }
            };
            if ring == 0 {
                visit(kx, ky);
                continue;
            }
            for cx in kx - ring..=kx + ring {
                visit(cx, ky - ring);
                visit(cx, ky + ring);
            }
            for cy in ky - ring + 1..ky + ring {
                visit(kx - ring, cy);
                visit(kx + ring, cy);
            }
        }
        best
    }
}

/// Index pairs `(i, j)`, `i < j`, of boxes at distance at most `pad`
/// (sweep along x).
pub fn close_pairs(boxes: &[BBox], pad: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[a].min.x.total_cmp(&boxes[b].min.x));
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if boxes[j].min.x > boxes[i].max.x + pad {
                break;
            }
            if boxes[i].box_dist(&boxes[j]) <= pad {
                out.push((i.min(j), i.max(j)));
            }
        }
    }
    out
}

/// Removes points closer than `tol` to an earlier point, keeping the first
/// occurrence. Order of survivors is preserved.
pub fn dedup_points(points: &[Point], tol: f64) -> Vec<Point> {
    if points.is_empty() {
        return Vec::new();
    }
    let cell = tol.max(f64::MIN_POSITIVE) * 4.0;
    let mut seen: HashMap<CellKey, Vec<Point>> = HashMap::default();
    let mut out = Vec::with_capacity(points.len());
    'outer: for &p in points {
        let (kx, ky) = PointGrid::key_for(cell, p);
        for cx in kx - 1..=kx + 1 {
            for cy in ky - 1..=ky + 1 {
                if let Some(v) = seen.get(&(cx, cy)) {
                    if v.iter().any(|q| q.dist(p) <= tol) {
                        continue 'outer;
                    }
                }
            }
        }
        seen.entry((kx, ky)).or_default().push(p);
        out.push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_minus_corner_square() {
        let sq = ConvexPolygon::from_bbox(&BBox::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0))).unwrap();
        let corner = ConvexPolygon::from_bbox(&BBox::new(Point::new(0.0, 0.0), Point::new(0.5, 0.5))).unwrap();
        let d = sq.difference(&corner, 1e-15);
        let a: f64 = d.iter().map(|p| p.area()).sum();
        assert!((a - 0.75).abs() < 1e-14);
        let i = sq.intersection(&corner).unwrap();
        assert!((i.area() - 0.25).abs() < 1e-14);
        let far = corner.mapped(|p| p + Point::new(5.0, 0.0)).unwrap();
        assert!(sq.intersection(&far).is_none());
        assert!((sq.centroid().dist(Point::new(0.5, 0.5))) < 1e-15);
    }

    #[test]
    fn circle_arcs_inside_square() {
        use std::f64::consts::{FRAC_PI_2, TAU};
        let sq = ConvexPolygon::from_bbox(&BBox::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0))).unwrap();
        // circle around the lower-left corner: inside for angles (0, π/2)
        let arcs = sq.circle_inside_arcs(Point::new(0.0, 0.0), 0.5);
        assert_eq!(arcs.len(), 1);
        assert!(arcs[0].0.abs() < 1e-12 && (arcs[0].1 - FRAC_PI_2).abs() < 1e-12);
        assert_eq!(sq.circle_inside_arcs(Point::new(0.5, 0.5), 0.2), vec![(0.0, TAU)]);
        assert!(sq.circle_inside_arcs(Point::new(3.0, 0.5), 0.2).is_empty());
        let total: f64 = sq
            .circle_inside_arcs(Point::new(0.5, 0.5), 0.6)
            .iter()
            .map(|(s, e)| e - s)
            .sum();
        // four arcs, each 2·acos(0.5/0.6) short of a quarter
        let want = TAU - 8.0 * (0.5f64 / 0.6).acos();
        assert!((total - want).abs() < 1e-12);
    }

    #[test]
    fn nearest_matches_brute_force() {
        let pts: Vec<Point> = (0..200)
            .map(|i| {
                let t = i as f64 * 0.37;
                Point::new(t.sin() * 3.0, (t * 1.7).cos() * 2.0)
            })
            .collect();
        let grid = PointGrid::new(&pts, 0.25);
        for q in [Point::new(0.1, 0.2), Point::new(5.0, -4.0), Point::new(-1.0, 1.5)] {
            let (i, d) = grid.nearest_where(&pts, q, 100.0, |_| true).unwrap();
            let bd = pts.iter().map(|p| p.dist(q)).fold(f64::INFINITY, f64::min);
            assert_eq!(d, bd);
            assert_eq!(pts[i].dist(q), bd);
        }
    }

    #[test]
    fn dedup_merges_close_points() {
        let pts = vec![Point::new(0.0, 0.0), Point::new(1e-14, 0.0), Point::new(1.0, 0.0)];
        assert_eq!(dedup_points(&pts, 1e-12).len(), 2);
    }

    #[test]
    fn polygon_depth_is_inward_distance() {
        let sq = ConvexPolygon::from_bbox(&BBox::new(Point::ORIGIN, Point::new(1.0, 1.0))).unwrap();
        assert!((sq.depth(Point::new(0.25, 0.5)) - 0.25).abs() < 1e-15);
        assert!(sq.depth(Point::new(1.5, 0.5)) < 0.0);
        assert!((sq.area() - 1.0).abs() < 1e-15);
    }
}
