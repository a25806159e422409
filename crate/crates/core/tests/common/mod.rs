//! Independent oracles for disk unions, shared by the integration tests.
#![allow(dead_code)]

use fractal_curvature::Point;
use rand::Rng;
use spade::{DelaunayTriangulation, Point2, Triangulation};

/// Random union of `1..=max_n` disks of a common radius in the unit square.
pub fn random_union<R: Rng>(rng: &mut R, max_n: usize, radius: (f64, f64)) -> (Vec<Point>, f64) {
    let n = rng.gen_range(1..=max_n);
    let r = rng.gen_range(radius.0..radius.1);
    let c = (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect();
    (c, r)
}

/// Connected components of the union, from the overlap graph.
pub fn components(c: &[Point], r: f64) -> usize {
    let mut parent: Vec<usize> = (0..c.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut count = c.len();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if c[i].dist(c[j]) < 2.0 * r {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                    count -= 1;
                }
            }
        }
    }
    count
}

fn circumcenter(p: [Point2<f64>; 3]) -> (f64, f64) {
    let (ax, ay) = (p[0].x, p[0].y);
    let (bx, by) = (p[1].x - ax, p[1].y - ay);
    let (cx, cy) = (p[2].x - ax, p[2].y - ay);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    (ax + (cy * b2 - by * c2) / d, ay + (bx * c2 - cx * b2) / d)
}

/// Euler characteristic of the union via its alpha complex: Delaunay
/// edges whose Voronoi edge meets the disks, and Delaunay triangles whose
/// circumcenter lies in them.
pub fn alpha_euler(c: &[Point], r: f64) -> i64 {
    let mut t: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::new();
    for p in c {
        t.insert(Point2::new(p.x, p.y)).expect("finite point");
    }
    let v = t.num_vertices() as i64;
    let mut faces = 0i64;
    for f in t.inner_faces() {
        let ps = f.positions();
        let (ox, oy) = circumcenter(ps);
        if (ox - ps[0].x).hypot(oy - ps[0].y) <= r {
            faces += 1;
        }
    }
    let mut edges = 0i64;
    for e in t.undirected_edges() {
        let d = e.as_directed();
        let [a, b] = d.positions();
        let (mx, my) = (0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len = dx.hypot(dy);
        let (ux, uy) = (-dy / len, dx / len);
        // Voronoi edge as an interval of t along m + t·u
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for side in [d, d.rev()] {
            if let Some(f) = side.face().as_inner() {
                let (ox, oy) = circumcenter(f.positions());
                let t0 = (ox - mx) * ux + (oy - my) * uy;
                let w = side.opposite_position().expect("inner face has a third vertex");
                // the edge runs from the circumcenter away from the third vertex
                if (w.x - mx) * ux + (w.y - my) * uy > 0.0 {
                    hi = hi.min(t0);
                } else {
                    lo = lo.max(t0);
                }
            }
        }
        let tmin = if lo > 0.0 {
            lo
        } else if hi < 0.0 {
            -hi
        } else {
            0.0
        };
        if (0.5 * len).powi(2) + tmin * tmin <= r * r {
            edges += 1;
        }
    }
    v - edges + faces
}

/// Karp–Luby estimate of the union area from `samples` points.
pub fn karp_luby_area<R: Rng>(rng: &mut R, c: &[Point], r: f64, samples: usize) -> f64 {
    let r2 = r * r;
    // a point of disk i can only lie in disks overlapping disk i
    let near: Vec<Vec<Point>> = c
        .iter()
        .map(|&p| c.iter().copied().filter(|q| q.dist2(p) < 4.0 * r2).collect())
        .collect();
    let mut acc = 0.0;
    for _ in 0..samples {
        let i = rng.gen_range(0..c.len());
        let p = loop {
            let (x, y): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if x * x + y * y <= 1.0 {
                break c[i] + Point::new(x * r, y * r);
            }
        };
        let mult = near[i].iter().filter(|q| q.dist2(p) <= r2).count();
        acc += 1.0 / mult.max(1) as f64;
    }
    c.len() as f64 * std::f64::consts::PI * r2 * acc / samples as f64
}

fn exposed(c: &[Point], r: f64, i: usize, theta: f64) -> bool {
    let p = c[i] + Point::polar(r, theta);
    c.iter().enumerate().all(|(j, q)| j == i || q.dist(p) >= r)
}

/// Boundary length of the union: each circle is cut into `m` pieces,
/// exposure is tested at the cut points and every change of exposure is
/// located by bisection.
pub fn boundary_length(c: &[Point], r: f64, m: usize) -> f64 {
    let step = std::f64::consts::TAU / m as f64;
    let mut total = 0.0;
    for i in 0..c.len() {
        if c.iter().enumerate().all(|(j, q)| j == i || q.dist(c[i]) >= 2.0 * r) {
            total += std::f64::consts::TAU * r;
            continue;
        }
        let mut angle = 0.0;
        let mut prev = exposed(c, r, i, 0.0);
        for k in 1..=m {
            let (a, b) = ((k - 1) as f64 * step, k as f64 * step);
            let cur = exposed(c, r, i, b);
            if cur == prev {
                if cur {
                    angle += step;
                }
            } else {
                let (mut lo, mut hi) = (a, b);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if exposed(c, r, i, mid) == prev {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                angle += if prev { lo - a } else { b - lo };
            }
            prev = cur;
        }
        total += angle * r;
    }
    total
}
