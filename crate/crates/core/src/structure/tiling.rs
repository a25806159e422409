//! Self-similar tilings generated by `G = O \ Φ(Ō)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{close_pairs, difference_all, BBox, ConvexPolygon, Point, PointGrid};
use crate::ifs::{Ifs, Similarity, Visit, Word};

/// Pieces smaller than this fraction of `O` are discarded as slivers.
const SLIVER: f64 = 1e-12;
/// A generator below this fraction of `O` counts as empty.
const EMPTY: f64 = 1e-9;

/// Open set of an IFS, given by its closure: a bounded open interval in 1-D
/// or a convex polygon (either orientation) in 2-D.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum FeasibleOpenSet {
    Interval([f64; 2]),
    Polygon(Vec<Point>),
}

#[derive(Clone, Debug)]
enum Shape {
    Interval(f64, f64),
    Polygon(ConvexPolygon),
}

impl FeasibleOpenSet {
    fn shape(&self, dim: usize) -> Result<Shape> {
        match self {
            FeasibleOpenSet::Interval([a, b]) => {
                if dim != 1 {
                    return Err(Error::DimensionMismatch { expected: dim, got: 1 });
                }
                if !(a < b && a.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidArgument(format!("open interval ({a}, {b}) is empty")));
                }
                Ok(Shape::Interval(*a, *b))
            }
            FeasibleOpenSet::Polygon(v) => {
                if dim != 2 {
                    return Err(Error::DimensionMismatch { expected: dim, got: 2 });
                }
                let p = ConvexPolygon::new(v.clone())
                    .ok_or_else(|| Error::InvalidArgument("open polygon has empty interior".into()))?;
                let n = p.vertices().len();
                let convex = (0..n).all(|i| {
                    let [a, b, c] = [0, 1, 2].map(|k| p.vertices()[(i + k) % n]);
                    (b - a).cross(c - b) >= -1e-12 * (b - a).norm() * (c - b).norm()
                });
                if !convex {
                    return Err(Error::InvalidArgument("only convex open polygons are supported".into()));
                }
                Ok(Shape::Polygon(p))
            }
        }
    }

    /// Points on `∂O` with spacing at most `spacing`.
    pub fn boundary_samples(&self, spacing: f64) -> Vec<Point> {
        match self {
            FeasibleOpenSet::Interval([a, b]) => vec![Point::new(*a, 0.0), Point::new(*b, 0.0)],
            FeasibleOpenSet::Polygon(v) => polyline_samples(v, spacing),
        }
    }
}

fn polyline_samples(v: &[Point], spacing: f64) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..v.len() {
        let (a, b) = (v[i], v[(i + 1) % v.len()]);
        let n = ((a.dist(b) / spacing).ceil() as usize).max(1);
        out.extend((0..n).map(|k| a.lerp(b, k as f64 / n as f64)));
    }
    out
}

/// A tile or generator piece, polygons counterclockwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region {
    Interval { lo: f64, hi: f64 },
    Polygon { vertices: Vec<Point> },
}

impl Region {
    pub fn measure(&self) -> f64 {
        match self {
            Region::Interval { lo, hi } => hi - lo,
            Region::Polygon { vertices } => crate::geom::signed_area(vertices),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tile {
    pub word: Word,
    pub region: Region,
}

/// The generator `G` and its tiles `S_ω(G)` for `|ω| ≤ depth`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Generator {
    pub empty: bool,
    pub pieces: Vec<Region>,
    pub tiles: Vec<Tile>,
}

#[derive(Clone, Debug)]
enum Piece {
    Interval(f64, f64),
    Polygon(ConvexPolygon),
}

impl Piece {
    fn mapped(&self, m: &Similarity) -> Option<Piece> {
        match self {
            Piece::Interval(a, b) => {
                let (x, y) = (m.map(Point::new(*a, 0.0)).x, m.map(Point::new(*b, 0.0)).x);
                Some(Piece::Interval(x.min(y), x.max(y)))
            }
            Piece::Polygon(p) => p.mapped(|q| m.map(q)).map(Piece::Polygon),
        }
    }

    fn region(&self) -> Region {
        match self {
            Piece::Interval(a, b) => Region::Interval { lo: *a, hi: *b },
            Piece::Polygon(p) => {
                // clipping leaves vertices a rounding error apart
                let tol = 1e-12 * p.bbox().diag();
                let mut vertices: Vec<Point> = Vec::with_capacity(p.vertices().len());
                for &v in p.vertices() {
                    if vertices.last().is_none_or(|u| u.dist(v) > tol) {
                        vertices.push(v);
                    }
                }
                if vertices.len() > 1 && vertices[0].dist(vertices[vertices.len() - 1]) <= tol {
                    vertices.pop();
                }
                Region::Polygon { vertices }
            }
        }
    }

    fn bbox(&self) -> BBox {
        match self {
            Piece::Interval(a, b) => BBox::new(Point::new(*a, 0.0), Point::new(*b, 0.0)),
            Piece::Polygon(p) => p.bbox(),
        }
    }

    fn measure(&self) -> f64 {
        match self {
            Piece::Interval(a, b) => b - a,
            Piece::Polygon(p) => p.area(),
        }
    }
}

fn generator_pieces(ifs: &Ifs, o: &Shape) -> Vec<Piece> {
    match o {
        Shape::Interval(a, b) => {
            let mut images: Vec<(f64, f64)> = ifs
                .maps()
                .iter()
                .map(|m| {
                    let (x, y) = (m.map(Point::new(*a, 0.0)).x, m.map(Point::new(*b, 0.0)).x);
                    (x.min(y), x.max(y))
                })
                .collect();
            images.sort_by(|p, q| p.0.total_cmp(&q.0));
            let min_len = SLIVER * (b - a);
            let mut out = Vec::new();
            let mut cursor = *a;
            for (lo, hi) in images {
                if lo.min(*b) - cursor > min_len {
                    out.push(Piece::Interval(cursor, lo.min(*b)));
                }
                cursor = cursor.max(hi);
            }
            if b - cursor > min_len {
                out.push(Piece::Interval(cursor, *b));
            }
            out
        }
        Shape::Polygon(p) => {
            let images: Vec<ConvexPolygon> = ifs.maps().iter().filter_map(|m| p.mapped(|q| m.map(q))).collect();
            difference_all(vec![p.clone()], &images, SLIVER * p.area())
                .into_iter()
                .map(Piece::Polygon)
                .collect()
        }
    }
}

/// Generator `G = O \ Φ(Ō)` and its tiles to the given depth. Tiles are
/// checked for pairwise disjointness; an overlap means `O` is not feasible.
pub fn tiling_generator(ifs: &Ifs, o: &FeasibleOpenSet, depth: usize) -> Result<Generator> {
    let shape = o.shape(ifs.dim())?;
    let total = match &shape {
        Shape::Interval(a, b) => b - a,
        Shape::Polygon(p) => p.area(),
    };
    let pieces = generator_pieces(ifs, &shape);
    let size: f64 = pieces.iter().map(Piece::measure).sum();
    if size <= EMPTY * total {
        return Ok(Generator {
            empty: true,
            pieces: Vec::new(),
            tiles: Vec::new(),
        });
    }
    let count: f64 = (0..=depth).map(|j| (ifs.len() as f64).powi(j as i32)).sum::<f64>() * pieces.len() as f64;
    if count > 1e6 {
        return Err(Error::InvalidArgument(format!("depth {depth} gives {count:e} tiles")));
    }
    let mut tiles: Vec<(Word, Piece)> = Vec::new();
    ifs.walk(|w, m| {
        for p in &pieces {
            if let Some(t) = p.mapped(m) {
                tiles.push((Word(w.to_vec()), t));
            }
        }
        if w.len() < depth {
            Visit::Descend
        } else {
            Visit::Stop
        }
    });
    let boxes: Vec<BBox> = tiles.iter().map(|t| t.1.bbox()).collect();
    for (i, j) in close_pairs(&boxes, 0.0) {
        let overlap = match (&tiles[i].1, &tiles[j].1) {
            (Piece::Interval(a, b), Piece::Interval(c, d)) => b.min(*d) - a.max(*c),
            (Piece::Polygon(p), Piece::Polygon(q)) => p.intersection(q).map_or(0.0, |x| x.area()),
            _ => 0.0,
        };
        let scale = tiles[i].1.measure().min(tiles[j].1.measure());
        if overlap > 1e-9 * scale {
            return Err(Error::InvalidArgument(format!(
                "tiles {} and {} overlap; the open set is not feasible",
                tiles[i].0, tiles[j].0
            )));
        }
    }
    Ok(Generator {
        empty: false,
        pieces: pieces.iter().map(Piece::region).collect(),
        tiles: tiles
            .into_iter()
            .map(|(word, p)| Tile {
                word,
                region: p.region(),
            })
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TilingReport {
    pub compatible: bool,
    /// Largest distance from a sample of `∂O` to the attractor sample.
    pub max_boundary_distance: f64,
    pub tol: f64,
    pub generator_empty: bool,
    pub generator: Vec<Region>,
    pub generator_boundary_samples: Vec<Point>,
}

/// Whether `∂O ⊂ F` to within `tol`: `∂O` and `F` are sampled at spacing
/// `tol / 10`.
pub fn tiling_compatible(ifs: &Ifs, o: &FeasibleOpenSet, tol: f64) -> Result<TilingReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let generator = tiling_generator(ifs, o, 0)?;
    let boundary = o.boundary_samples(tol / 10.0);
    let sample = ifs.sample(tol / 10.0)?;
    let grid = PointGrid::new(&sample.points, tol);
    let reach = ifs
        .hull()
        .union(&BBox::from_points(boundary.iter().copied()).expect("boundary samples"))
        .diag()
        + tol;
    let mut max = 0.0f64;
    for &p in &boundary {
        let d = grid
            .nearest_where(&sample.points, p, reach, |_| true)
            .map_or(f64::INFINITY, |(_, d)| d);
        max = max.max(d);
    }
    let samples = generator
        .pieces
        .iter()
        .flat_map(|r| match r {
            Region::Interval { lo, hi } => vec![Point::new(*lo, 0.0), Point::new(*hi, 0.0)],
            Region::Polygon { vertices } => polyline_samples(vertices, tol),
        })
        .collect();
    Ok(TilingReport {
        compatible: max <= tol,
        max_boundary_distance: max,
        tol,
        generator_empty: generator.empty,
        generator: generator.pieces,
        generator_boundary_samples: samples,
    })
}
