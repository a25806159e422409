//! Contracting similarities, iterated function systems and their attractors.
//!
//! One-dimensional systems act on the x-axis of the plane; their points
//! always carry `y = 0`, which lets the planar machinery (disk unions,
//! clustering, tiling) consume them unchanged.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{BBox, Point};

/// Default cap on the number of points a sample may contain.
pub const DEFAULT_SAMPLE_CAP: usize = 5_000_000;

/// A similarity `p ↦ ratio · R(p) + translation`, where `R` optionally
/// reflects across the x-axis (`y ↦ -y`) and then rotates by `rotation`.
/// In one dimension `R` is `x ↦ ±x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Similarity {
    ratio: f64,
    rotation: f64,
    reflect: bool,
    translation: Point,
    dim: usize,
}

impl Similarity {
    pub fn new_1d(ratio: f64, reflect: bool, translation: f64) -> Result<Self> {
        check_ratio(ratio)?;
        check_finite(translation, "translation")?;
        Ok(Similarity {
            ratio,
            rotation: 0.0,
            reflect,
            translation: Point::new(translation, 0.0),
            dim: 1,
        })
    }

    pub fn new_2d(ratio: f64, rotation: f64, reflect: bool, translation: Point) -> Result<Self> {
        check_ratio(ratio)?;
        check_finite(rotation, "rotation")?;
        check_finite(translation.x, "translation")?;
        check_finite(translation.y, "translation")?;
        Ok(Similarity {
            ratio,
            rotation,
            reflect,
            translation,
            dim: 2,
        })
    }

    /// Pure scaling about the origin followed by a shift; the common case.
    pub fn scaled(ratio: f64, translation: Point) -> Result<Self> {
        Similarity::new_2d(ratio, 0.0, false, translation)
    }

    pub(crate) fn identity(dim: usize) -> Self {
        Similarity {
            ratio: 1.0,
            rotation: 0.0,
            reflect: false,
            translation: Point::ORIGIN,
            dim,
        }
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    pub fn reflect(&self) -> bool {
        self.reflect
    }

    pub fn translation(&self) -> Point {
        self.translation
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Applies the map to a point of the plane without a dimension check.
    #[inline]
    pub fn map(&self, p: Point) -> Point {
        if self.dim == 1 {
            let x = if self.reflect { -p.x } else { p.x };
            return Point::new(self.ratio * x + self.translation.x, 0.0);
        }
        let q = if self.reflect { Point::new(p.x, -p.y) } else { p };
        let q = if self.rotation == 0.0 { q } else { q.rotate(self.rotation) };
        q * self.ratio + self.translation
    }

    /// Applies the map to a coordinate slice whose length must equal the
    /// map's dimension.
    pub fn apply(&self, p: &[f64]) -> Result<Vec<f64>> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.len(),
            });
        }
        let q = self.map(Point::new(p[0], p.get(1).copied().unwrap_or(0.0)));
        Ok(if self.dim == 1 { vec![q.x] } else { vec![q.x, q.y] })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Similarity) -> Similarity {
        let rotation = if self.dim == 1 {
            0.0
        } else if self.reflect {
            self.rotation - inner.rotation
        } else {
            self.rotation + inner.rotation
        };
        Similarity {
            ratio: self.ratio * inner.ratio,
            rotation,
            reflect: self.reflect ^ inner.reflect,
            translation: self.map(inner.translation),
            dim: self.dim,
        }
    }

    /// The unique fixed point of the contraction.
    pub fn fixed_point(&self) -> Point {
        let t = self.translation;
        if self.dim == 1 {
            let s = if self.reflect { -1.0 } else { 1.0 };
            return Point::new(t.x / (1.0 - self.ratio * s), 0.0);
        }
        // solve (I - ratio·R) p = t
        let (s, c) = self.rotation.sin_cos();
        let f = if self.reflect { -1.0 } else { 1.0 };
        let (a, b) = (1.0 - self.ratio * c, self.ratio * s * f);
        let (cc, d) = (-self.ratio * s, 1.0 - self.ratio * c * f);
        let det = a * d - b * cc;
        Point::new((d * t.x - b * t.y) / det, (a * t.y - cc * t.x) / det)
    }
}

fn check_ratio(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidMap(format!("contraction ratio {r} not in (0, 1)")))
    }
}

fn check_finite(v: f64, what: &str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidMap(format!("{what} is not finite")))
    }
}

/// A finite word over the alphabet `{0, …, N-1}` (displayed 1-based).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<u16>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", l + 1)?;
        }
        Ok(())
    }
}

/// Decision returned by a cylinder visitor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visit {
    Descend,
    Stop,
}

/// Finite point sample of an attractor. Every attractor point lies within
/// `resolution` of some sample point.
#[derive(Clone, Debug)]
pub struct PointSample {
    pub points: Vec<Point>,
    pub resolution: f64,
    pub dim: usize,
}

impl PointSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bbox(&self) -> Option<BBox> {
        BBox::from_points(self.points.iter().copied())
    }

    /// Applies a planar similarity to every point. Resolution scales with it.
    pub fn transformed(&self, s: &Similarity) -> PointSample {
        PointSample {
            points: self.points.iter().map(|&p| s.map(p)).collect(),
            resolution: self.resolution * s.ratio(),
            dim: self.dim,
        }
    }
}

/// An iterated function system of contracting similarities.
#[derive(Clone, Debug)]
pub struct Ifs {
    maps: Vec<Similarity>,
    dim: usize,
    hull: BBox,
    seed: Point,
}

impl Ifs {
    pub fn new(maps: Vec<Similarity>) -> Result<Self> {
        if maps.len() < 2 {
            return Err(Error::InvalidIfs(format!(
                "need at least two maps, got {}",
                maps.len()
            )));
        }
        if maps.len() > u16::MAX as usize {
            return Err(Error::InvalidIfs("too many maps".into()));
        }
        let dim = maps[0].dim;
        if let Some(m) = maps.iter().find(|m| m.dim != dim) {
            return Err(Error::InvalidIfs(format!(
                "maps mix dimensions {} and {}",
                dim, m.dim
            )));
        }
        let seed = maps[0].fixed_point();
        let hull = hull_box(&maps, seed);
        Ok(Ifs {
            maps,
            dim,
            hull,
            seed,
        })
    }

    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ratios(&self) -> impl Iterator<Item = f64> + '_ {
        self.maps.iter().map(|m| m.ratio)
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratios().fold(0.0, f64::max)
    }

    pub fn min_ratio(&self) -> f64 {
        self.ratios().fold(1.0, f64::min)
    }

    /// Certified bounding box of the attractor.
    pub fn hull(&self) -> BBox {
        self.hull
    }

    /// Diameter of the hull box.
    pub fn diam(&self) -> f64 {
        self.hull.diag()
    }

    /// Fixed point of the first map; a point of the attractor used as the
    /// representative seed of every cylinder.
    pub fn seed(&self) -> Point {
        self.seed
    }

    /// Composed map `S_ω = S_{ω1} ∘ … ∘ S_{ωn}`.
    pub fn word_map(&self, w: &Word) -> Similarity {
        w.0.iter().fold(Similarity::identity(self.dim), |acc, &l| {
            acc.compose(&self.maps[l as usize])
        })
    }

    /// Contraction ratio `r_ω` as the sequential product of letter ratios.
    pub fn word_ratio(&self, w: &Word) -> f64 {
        w.0.iter().fold(1.0, |acc, &l| acc * self.maps[l as usize].ratio)
    }

    /// Similarity dimension: the root `D` of `Σ r_i^D = 1`.
    pub fn moran_dimension(&self) -> f64 {
        moran_root(&self.ratios().collect::<Vec<_>>())
    }

    /// Depth-first walk over cylinders in lexicographic order. The visitor
    /// sees the word and the composed map; children are visited when it
    /// returns [`Visit::Descend`].
    pub fn walk<F: FnMut(&[u16], &Similarity) -> Visit>(&self, mut visit: F) {
        let mut word = Vec::new();
        self.walk_rec(&Similarity::identity(self.dim), &mut word, &mut visit);
    }

    fn walk_rec<F: FnMut(&[u16], &Similarity) -> Visit>(
        &self,
        map: &Similarity,
        word: &mut Vec<u16>,
        visit: &mut F,
    ) {
        if visit(word, map) == Visit::Stop {
            return;
        }
        for (i, m) in self.maps.iter().enumerate() {
            let child = map.compose(m);
            word.push(i as u16);
            self.walk_rec(&child, word, visit);
            word.pop();
        }
    }

    /// Samples the attractor with covering radius `delta`, capped at
    /// [`DEFAULT_SAMPLE_CAP`] points.
    pub fn sample(&self, delta: f64) -> Result<PointSample> {
        self.sample_capped(delta, DEFAULT_SAMPLE_CAP)
    }

    /// Expands words depth-first until `r_ω · diam ≤ delta` and keeps the
    /// image of the seed for every terminal cylinder.
    pub fn sample_capped(&self, delta: f64, cap: usize) -> Result<PointSample> {
        if !(delta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sampling resolution must be positive, got {delta}"
            )));
        }
        let diam = self.diam();
        let seed = self.seed;
        let mut points = Vec::new();
        let mut over = false;
        self.walk(|_, m| {
            if over {
                return Visit::Stop;
            }
            if is_terminal(m.ratio, diam, delta) {
                if points.len() >= cap {
                    over = true;
                } else {
                    points.push(m.map(seed));
                }
                Visit::Stop
            } else {
                Visit::Descend
            }
        });
        if over {
            return Err(Error::SampleBudget { cap, delta });
        }
        Ok(PointSample {
            points,
            resolution: delta,
            dim: self.dim,
        })
    }

    /// Like [`Ifs::sample_capped`] but also labels each point with the index
    /// (in lexicographic order) of its depth-`level` ancestor word. Words are
    /// expanded to at least `level` letters.
    pub fn sample_labeled(&self, delta: f64, level: usize, cap: usize) -> Result<(PointSample, Vec<u32>)> {
        if !(delta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sampling resolution must be positive, got {delta}"
            )));
        }
        let n = self.maps.len() as u64;
        if (n as f64).powi(level as i32) > u32::MAX as f64 {
            return Err(Error::InvalidArgument(format!("level {level} too deep to label")));
        }
        let diam = self.diam();
        let seed = self.seed;
        let mut points = Vec::new();
        let mut labels = Vec::new();
        let mut over = false;
        self.walk(|w, m| {
            if over {
                return Visit::Stop;
            }
            if w.len() >= level && is_terminal(m.ratio, diam, delta) {
                if points.len() >= cap {
                    over = true;
                } else {
                    let label = w[..level].iter().fold(0u64, |acc, &l| acc * n + l as u64);
                    points.push(m.map(seed));
                    labels.push(label as u32);
                }
                Visit::Stop
            } else {
                Visit::Descend
            }
        });
        if over {
            return Err(Error::SampleBudget { cap, delta });
        }
        Ok((
            PointSample {
                points,
                resolution: delta,
                dim: self.dim,
            },
            labels,
        ))
    }

    /// All `N^depth` cylinders of the given depth with a box containing
    /// `S_ω(hull)`.
    pub fn cylinder_hulls(&self, depth: usize) -> Vec<(Word, BBox)> {
        let corners = self.hull.corners();
        let mut out = Vec::with_capacity(self.maps.len().pow(depth as u32));
        self.walk(|w, m| {
            if w.len() < depth {
                return Visit::Descend;
            }
            let b = BBox::from_points(corners.iter().map(|&c| m.map(c))).expect("four corners");
            out.push((Word(w.to_vec()), b));
            Visit::Stop
        });
        out
    }
}

#[inline]
pub(crate) fn is_terminal(ratio: f64, diam: f64, delta: f64) -> bool {
    ratio * diam <= delta * (1.0 + 1e-9)
}

/// Root of `Σ r_i^s = 1` for ratios in (0,1) with at least two entries.
pub fn moran_root(ratios: &[f64]) -> f64 {
    let logs: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let f = |s: f64| logs.iter().map(|l| (s * l).exp()).sum::<f64>() - 1.0;
    let df = |s: f64| logs.iter().map(|l| l * (s * l).exp()).sum::<f64>();
    let n = ratios.len() as f64;
    let rmax = ratios.iter().cloned().fold(0.0, f64::max);
    let mut lo = 0.0;
    let mut hi = n.ln() / -rmax.ln();
    // f(hi) <= 0 up to rounding; widen if rounding pushed it above zero
    while f(hi) > 0.0 {
        hi *= 1.0 + 1e-12;
        hi += 1e-300;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = df(s);
        if d == 0.0 {
            break;
        }
        let next = s - f(s) / d;
        if !(next.is_finite()) || (next - s).abs() > 1e-9 {
            break;
        }
        s = next;
    }
    s
}

/// Certified outer bounding box of the attractor: start from a ball around
/// the seed that every map sends into itself, then iterate
/// `B ↦ bbox(∪ S_i(B))`, which keeps containing the attractor.
fn hull_box(maps: &[Similarity], seed: Point) -> BBox {
    let radius = maps
        .iter()
        .map(|m| m.map(seed).dist(seed) / (1.0 - m.ratio))
        .fold(0.0, f64::max);
    let mut b = BBox::new(seed, seed).expand(radius);
    if maps[0].dim == 1 {
        b.min.y = 0.0;
        b.max.y = 0.0;
    }
    for _ in 0..20_000 {
        let next = maps
            .iter()
            .flat_map(|m| b.corners().map(|c| m.map(c)))
            .fold(None::<BBox>, |acc, p| match acc {
                None => Some(BBox::new(p, p)),
                Some(mut a) => {
                    a.include(p);
                    Some(a)
                }
            })
            .expect("nonempty");
        let change = (next.min - b.min).norm() + (next.max - b.max).norm();
        b = next;
        if change <= 1e-16 * b.diag().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    let slack = 1e-12 * b.diag();
    let mut out = b.expand(slack);
    if maps[0].dim == 1 {
        out.min.y = 0.0;
        out.max.y = 0.0;
    }
    out
}

/// On-disk IFS description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IfsFile {
    pub dim: usize,
    pub maps: Vec<MapFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub r: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub reflect: bool,
    pub t: Vec<f64>,
}

impl IfsFile {
    pub fn to_ifs(&self) -> Result<Ifs> {
        if self.dim != 1 && self.dim != 2 {
            return Err(Error::InvalidIfs(format!("dim must be 1 or 2, got {}", self.dim)));
        }
        let maps = self
            .maps
            .iter()
            .map(|m| {
                if m.t.len() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        got: m.t.len(),
                    });
                }
                if self.dim == 1 {
                    if m.theta != 0.0 {
                        return Err(Error::InvalidMap("1-D maps cannot rotate".into()));
                    }
                    Similarity::new_1d(m.r, m.reflect, m.t[0])
                } else {
                    Similarity::new_2d(m.r, m.theta, m.reflect, Point::new(m.t[0], m.t[1]))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ifs::new(maps)
    }

    pub fn from_ifs(ifs: &Ifs) -> IfsFile {
        IfsFile {
            dim: ifs.dim,
            maps: ifs
                .maps
                .iter()
                .map(|m| MapFile {
                    r: m.ratio,
                    theta: m.rotation,
                    reflect: m.reflect,
                    t: if ifs.dim == 1 {
                        vec![m.translation.x]
                    } else {
                        vec![m.translation.x, m.translation.y]
                    },
                })
                .collect(),
        }
    }
}

impl Ifs {
    pub fn from_json(s: &str) -> Result<Ifs> {
        serde_json::from_str::<IfsFile>(s)?.to_ifs()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&IfsFile::from_ifs(self)).expect("serializable")
    }
}
