//! Named constructions with closed-form expected quantities.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::arcs::{build_with_policy, CurvatureSample};
use crate::error::{Error, Result};
use crate::geom::{dedup_points, BBox, ConvexPolygon, Point};
use crate::ifs::{Ifs, Similarity};
use crate::string::{string_from_ifs, FractalString};
use crate::structure::FeasibleOpenSet;

/// A closed-form value and the formula it comes from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expected {
    pub quantity: &'static str,
    pub value: f64,
    pub formula: String,
}

impl Expected {
    fn new(quantity: &'static str, value: f64, formula: impl Into<String>) -> Self {
        Expected {
            quantity,
            value,
            formula: formula.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Construction {
    SelfSimilar,
    Product(ProductSet),
    General(GeneralSet),
    /// Only the expected boundary dimension is available.
    BoundaryDimension { k: u32, m: u64 },
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    /// Generating IFS; for product sets the planar one.
    pub ifs: Option<Ifs>,
    pub open_set: Option<FeasibleOpenSet>,
    pub expected: Vec<Expected>,
    pub construction: Construction,
}

impl CatalogEntry {
    pub fn expected(&self, quantity: &str) -> Option<f64> {
        self.expected.iter().find(|e| e.quantity == quantity).map(|e| e.value)
    }

    /// IFS whose attractor lies on a line, if any: the entry's own 1-D IFS or
    /// the base of a product set.
    pub fn line_ifs(&self) -> Option<&Ifs> {
        match &self.construction {
            Construction::Product(p) => Some(&p.line),
            _ => self.ifs.as_ref().filter(|i| i.dim() == 1),
        }
    }

    /// Fractal string of the line IFS to the given depth.
    pub fn fractal_string(&self, depth: usize) -> Result<FractalString> {
        let ifs = self
            .line_ifs()
            .ok_or_else(|| Error::Catalog(format!("{} has no fractal string", self.name)))?;
        string_from_ifs(ifs, depth)
    }
}

fn ln_ratio(a: f64, b: f64) -> f64 {
    a.ln() / b.ln()
}

fn self_similar(name: &str, ifs: Ifs, open_set: FeasibleOpenSet, formula: &str, extra: Vec<Expected>) -> CatalogEntry {
    let mut expected = vec![Expected::new("dim", ifs.moran_dimension(), formula)];
    expected.extend(extra);
    CatalogEntry {
        name: name.into(),
        ifs: Some(ifs),
        open_set: Some(open_set),
        expected,
        construction: Construction::SelfSimilar,
    }
}

fn scaled_maps(ratio: f64, shifts: &[(f64, f64)]) -> Vec<Similarity> {
    shifts
        .iter()
        .map(|&(x, y)| Similarity::scaled(ratio, Point::new(x, y)).expect("valid ratio"))
        .collect()
}

fn unit_square() -> FeasibleOpenSet {
    FeasibleOpenSet::Polygon(vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ])
}

pub fn cantor() -> CatalogEntry {
    let ifs = Ifs::new(vec![
        Similarity::new_1d(1.0 / 3.0, false, 0.0).expect("valid ratio"),
        Similarity::new_1d(1.0 / 3.0, false, 2.0 / 3.0).expect("valid ratio"),
    ])
    .expect("two maps");
    let d = ln_ratio(2.0, 3.0);
    self_similar(
        "cantor",
        ifs,
        FeasibleOpenSet::Interval([0.0, 1.0]),
        "log 2 / log 3",
        vec![Expected::new("s0", d, "log 2 / log 3"), Expected::new("s1", d, "log 2 / log 3")],
    )
}

pub fn dust() -> CatalogEntry {
    let t = 2.0 / 3.0;
    let ifs = Ifs::new(scaled_maps(1.0 / 3.0, &[(0.0, 0.0), (t, 0.0), (0.0, t), (t, t)])).expect("four maps");
    self_similar("dust", ifs, unit_square(), "log 4 / log 3", vec![])
}

pub fn gasket() -> CatalogEntry {
    let h = 3f64.sqrt() / 2.0;
    let ifs = Ifs::new(scaled_maps(0.5, &[(0.0, 0.0), (0.5, 0.0), (0.25, h / 2.0)])).expect("three maps");
    let triangle = FeasibleOpenSet::Polygon(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, h)]);
    self_similar(
        "gasket",
        ifs,
        triangle,
        "log 3 / log 2",
        vec![Expected::new("s1", ln_ratio(3.0, 2.0), "log 3 / log 2")],
    )
}

/// Koch curve over the unit interval; the open set is the isosceles
/// triangle of height `√3/6` over the base.
pub fn koch() -> CatalogEntry {
    let third = 1.0 / 3.0;
    let h = 3f64.sqrt() / 6.0;
    let ifs = Ifs::new(vec![
        Similarity::new_2d(third, 0.0, false, Point::new(0.0, 0.0)).expect("valid map"),
        Similarity::new_2d(third, PI / 3.0, false, Point::new(third, 0.0)).expect("valid map"),
        Similarity::new_2d(third, -PI / 3.0, false, Point::new(0.5, h)).expect("valid map"),
        Similarity::new_2d(third, 0.0, false, Point::new(2.0 * third, 0.0)).expect("valid map"),
    ])
    .expect("four maps");
    let triangle = FeasibleOpenSet::Polygon(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, h)]);
    self_similar("koch", ifs, triangle, "log 4 / log 3", vec![])
}

/// The unit square as the attractor of four half-scale maps.
pub fn square() -> CatalogEntry {
    let ifs = Ifs::new(scaled_maps(0.5, &[(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)])).expect("four maps");
    self_similar(
        "square",
        ifs,
        unit_square(),
        "Moran root of 4 · (1/2)^D = 1",
        vec![
            Expected::new("s2", 2.0, "area constant in the limit"),
            Expected::new("s1", 1.0, "boundary is a polygon: C1 tends to half the perimeter"),
            Expected::new("s0", 0.0, "C0 = 1 for every eps"),
        ],
    )
}

pub fn standard_sets() -> Vec<CatalogEntry> {
    vec![cantor(), dust(), gasket(), koch(), square()]
}

/// `K^{n,m} × [0,1]`: `m` of the `n` columns of an `n × n` grid.
#[derive(Clone, Debug)]
pub struct ProductSet {
    pub n: u32,
    pub m: u32,
    /// `K^{n,m}` on the line.
    pub line: Ifs,
}

impl ProductSet {
    /// `C_0^var` of the planar parallel set, equal to that of `K_ε`.
    pub fn c0var(&self, string: &FractalString, eps: f64) -> f64 {
        string.c0var_line(eps)
    }

    /// Half the boundary length of `(K × [0,1])_ε`.
    pub fn c1var(&self, string: &FractalString, eps: f64) -> f64 {
        string.product_c1(eps)
    }
}

pub fn example1_entry(n: u32, m: u32) -> Result<CatalogEntry> {
    if !(2 <= m && m < n) {
        return Err(Error::Catalog(format!("need 2 <= m < n, got n = {n}, m = {m}")));
    }
    let r = 1.0 / n as f64;
    let line = Ifs::new(
        (0..m)
            .map(|k| Similarity::new_1d(r, false, k as f64 * r))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let shifts: Vec<(f64, f64)> = (0..m)
        .flat_map(|k| (0..n).map(move |l| (k as f64 * r, l as f64 * r)))
        .collect();
    let plane = Ifs::new(scaled_maps(r, &shifts))?;
    let a = ln_ratio(m as f64, n as f64);
    Ok(CatalogEntry {
        name: format!("example1:n={n},m={m}"),
        ifs: Some(plane),
        open_set: Some(unit_square()),
        expected: vec![
            Expected::new("dim_line", a, "log m / log n"),
            Expected::new("dim", 1.0 + a, "1 + log m / log n"),
            Expected::new("s0", a, "log m / log n"),
            Expected::new("s1", 1.0 + a, "1 + log m / log n"),
            Expected::new("s2", 1.0 + a, "1 + log m / log n"),
        ],
        construction: Construction::Product(ProductSet { n, m, line }),
    })
}

/// Boundary dimension `log(2^k + 8m) / log(2^k)` of the chessboard sets,
/// for `0 ≤ m ≤ 2·4^{k-2} − 2^k + 1`.
pub fn example2_expected(k: u32, m: u64) -> Result<f64> {
    if !(2..=30).contains(&k) {
        return Err(Error::Catalog(format!("k must lie in 2..=30, got {k}")));
    }
    let bound = 2 * 4i128.pow(k - 2) - 2i128.pow(k) + 1;
    if (m as i128) > bound {
        return Err(Error::Catalog(format!("m must lie in [0, {bound}] for k = {k}, got {m}")));
    }
    let p = 2f64.powi(k as i32);
    Ok((p + 8.0 * m as f64).ln() / p.ln())
}

/// The compact set `K(a,b)`: the unit square cut by vertical lines at the
/// partial sums of `r_i = q^n (1 − 2q)` (`2^n ≤ i < 2^{n+1}`), each column
/// split by `t_i` horizontal lines into equal rectangles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralSet {
    pub a: f64,
    pub b: f64,
    /// Root of `2 q^{b-1} = 1`.
    pub q: f64,
}

/// Line segments of `K(a,b)` through a given column level, and the strip of
/// finer columns replaced by a solid rectangle.
#[derive(Clone, Debug)]
pub struct GeneralGeometry {
    pub segments: Vec<(Point, Point)>,
    pub strip: BBox,
}

impl GeneralSet {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(2.0 > b && b >= a && a >= b - 1.0 && b - 1.0 > 0.0) {
            return Err(Error::Catalog(format!("need 2 > b >= a >= b - 1 > 0, got a = {a}, b = {b}")));
        }
        Ok(GeneralSet {
            a,
            b,
            q: 2f64.powf(-1.0 / (b - 1.0)),
        })
    }

    /// Column width at level `n`.
    pub fn r(&self, n: u32) -> f64 {
        self.q.powi(n as i32) * (1.0 - 2.0 * self.q)
    }

    /// Number of rectangles per column at level `n`.
    pub fn t(&self, n: u32) -> f64 {
        (self.q.powf((self.b - self.a - 1.0) * n as f64) / (1.0 - 2.0 * self.q)).floor()
    }

    /// `ε_n = r_n / 2`.
    pub fn eps_n(&self, n: u32) -> f64 {
        0.5 * self.r(n)
    }

    /// The `n` with `ε_{n+1} ≤ ε < ε_n`; `None` for `ε ≥ ε_0`.
    pub fn level(&self, eps: f64) -> Option<u32> {
        if eps >= self.eps_n(0) {
            return None;
        }
        let mut n = ((eps / self.eps_n(0)).ln() / self.q.ln()).floor().max(0.0) as u32;
        while eps < self.eps_n(n + 1) {
            n += 1;
        }
        while n > 0 && eps >= self.eps_n(n) {
            n -= 1;
        }
        Some(n)
    }

    /// `Σ_{j ≤ n} 2^j t_j`, the rectangles in columns of level at most `n`.
    fn rectangles(&self, n: u32) -> f64 {
        (0..=n).map(|j| 2f64.powi(j as i32) * self.t(j)).sum()
    }

    /// `C_0^var(K_ε)`: one outer boundary and one hole per rectangle of a
    /// column wider than `2ε`; 1 for `ε ≥ ε_0`.
    pub fn c0var(&self, eps: f64) -> Result<f64> {
        check_eps(eps)?;
        Ok(match self.level(eps) {
            None => 1.0,
            Some(n) => 1.0 + self.rectangles(n),
        })
    }

    /// `C_1^var(K_ε)`, half the boundary length; `2 + πε` for `ε ≥ ε_0`.
    pub fn c1var(&self, eps: f64) -> Result<f64> {
        check_eps(eps)?;
        let v = match self.level(eps) {
            None => 2.0 + PI * eps,
            Some(n) => {
                let cols: f64 = (0..=n)
                    .map(|j| 2f64.powi(j as i32) * (1.0 + self.t(j) * self.r(j)))
                    .sum();
                2.0 + PI * eps + cols - 4.0 * eps * self.rectangles(n)
            }
        };
        if v < 0.0 {
            return Err(Error::NegativeValue {
                quantity: "C1 of K(a,b)",
                eps,
                value: v,
            });
        }
        Ok(v)
    }

    /// Segments of every column of level at most `n`, with the remaining
    /// columns replaced by the solid strip `[p, 1] × [0, 1]`. For
    /// `ε ≥ ε_{n+1}` the parallel set is unchanged, since the strip lies
    /// within `ε` of its own vertical lines.
    pub fn geometry(&self, n: u32) -> GeneralGeometry {
        let mut segments = Vec::new();
        let mut x = 0.0;
        for j in 0..=n {
            let (r, t) = (self.r(j), self.t(j));
            for _ in 0..1u64 << j {
                segments.push((Point::new(x, 0.0), Point::new(x, 1.0)));
                for l in 0..=t as u64 {
                    let y = l as f64 / t;
                    segments.push((Point::new(x, y), Point::new(x + r, y)));
                }
                x += r;
            }
        }
        GeneralGeometry {
            segments,
            strip: BBox::new(Point::new(x, 0.0), Point::new(1.0, 1.0)),
        }
    }

    /// Curvature of `K_ε` from the arc geometry of the segments of
    /// [`GeneralSet::geometry`] at the level of `ε`, sampled at spacing
    /// `delta ≤ ε / 10`. Only the counts, `C_1` and `C_2` are faithful: a
    /// point sample of a segment adds spurious turning to `C_0^var`.
    pub fn arc_curvature(&self, eps: f64, delta: f64) -> Result<CurvatureSample> {
        check_eps(eps)?;
        if !(delta > 0.0) || delta > eps / 10.0 {
            return Err(Error::AccuracyGuard { eps, resolution: delta });
        }
        let n = self.level(eps).unwrap_or(0);
        let g = self.geometry(n);
        let solid = ConvexPolygon::from_bbox(&g.strip).filter(|_| g.strip.width() > 0.0);
        let mut edges = g.segments.clone();
        if solid.is_some() {
            // the strip's outline belongs to K and keeps its boundary buried
            let c = g.strip.corners();
            edges.extend((0..4).map(|i| (c[i], c[(i + 1) % 4])));
        }
        let mut pts = Vec::new();
        for &(p, q) in &edges {
            let k = ((p.dist(q) / delta).ceil() as usize).max(1);
            pts.extend((0..=k).map(|i| p.lerp(q, i as f64 / k as f64)));
        }
        if let Some(w) = &solid {
            pts.retain(|&p| w.depth(p) <= eps);
        }
        let centers = dedup_points(&pts, 1e-12);
        let trace: Vec<usize> = (0..centers.len()).collect();
        Ok(build_with_policy(&centers, &trace, eps, solid.as_ref())?.sample(eps))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")))
    }
}

pub fn example_general(a: f64, b: f64) -> Result<CatalogEntry> {
    let g = GeneralSet::new(a, b)?;
    Ok(CatalogEntry {
        name: format!("general:a={a},b={b}"),
        ifs: None,
        open_set: None,
        expected: vec![
            Expected::new("s0", a, "a"),
            Expected::new("s1", b, "b"),
            Expected::new("s2", b, "b"),
        ],
        construction: Construction::General(g),
    })
}

/// Parameters of a catalog name such as `example1:n=4,m=3`.
fn params(name: &str, rest: &str, keys: &[&str]) -> Result<Vec<f64>> {
    let mut vals = vec![None; keys.len()];
    for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Catalog(format!("{name}: expected key=value, got '{part}'")))?;
        let i = keys
            .iter()
            .position(|x| *x == k.trim())
            .ok_or_else(|| Error::Catalog(format!("{name}: unknown parameter '{}'", k.trim())))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Catalog(format!("{name}: '{}' is not a number", v.trim())))?;
        vals[i] = Some(v);
    }
    keys.iter()
        .zip(vals)
        .map(|(k, v)| v.ok_or_else(|| Error::Catalog(format!("{name}: missing parameter '{k}'"))))
        .collect()
}

fn integer(name: &str, v: f64) -> Result<u32> {
    if v.fract() == 0.0 && (0.0..=u32::MAX as f64).contains(&v) {
        Ok(v as u32)
    } else {
        Err(Error::Catalog(format!("{name}: {v} is not a non-negative integer")))
    }
}

/// Looks up an entry: `cantor`, `dust`, `gasket`, `koch`, `square`,
/// `example1:n=..,m=..`, `example2:k=..,m=..` or `general:a=..,b=..`.
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    let (head, rest) = name.split_once(':').unwrap_or((name, ""));
    match head.trim() {
        "cantor" => Ok(cantor()),
        "dust" => Ok(dust()),
        "gasket" => Ok(gasket()),
        "koch" => Ok(koch()),
        "square" => Ok(square()),
        "example1" => {
            let v = params(name, rest, &["n", "m"])?;
            example1_entry(integer(name, v[0])?, integer(name, v[1])?)
        }
        "example2" => {
            let v = params(name, rest, &["k", "m"])?;
            let (k, m) = (integer(name, v[0])?, integer(name, v[1])?);
            let d = example2_expected(k, m as u64)?;
            Ok(CatalogEntry {
                name: format!("example2:k={k},m={m}"),
                ifs: None,
                open_set: None,
                expected: vec![Expected::new("dim_boundary", d, "log(2^k + 8m) / log(2^k)")],
                construction: Construction::BoundaryDimension { k, m: m as u64 },
            })
        }
        "general" => {
            let v = params(name, rest, &["a", "b"])?;
            example_general(v[0], v[1])
        }
        other => Err(Error::Catalog(format!("unknown catalog entry '{other}'"))),
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if let Some(ifs) = &self.ifs {
            write!(f, " ({} maps in R^{})", ifs.len(), ifs.dim())?;
        }
        for e in &self.expected {
            write!(f, "\n  {} = {:.6}  [{}]", e.quantity, e.value, e.formula)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::{fit_exponent, ScalingSeries};

    #[test]
    fn standard_dimensions() {
        let want = [
            ("cantor", 2f64.ln() / 3f64.ln()),
            ("dust", 4f64.ln() / 3f64.ln()),
            ("gasket", 3f64.ln() / 2f64.ln()),
            ("koch", 4f64.ln() / 3f64.ln()),
            ("square", 2.0),
        ];
        let sets = standard_sets();
        for (e, (name, d)) in sets.iter().zip(want) {
            assert_eq!(e.name, name);
            assert!((e.expected("dim").unwrap() - d).abs() < 1e-12);
        }
        assert!(square().expected("s1").unwrap() < 2.0);
    }

    #[test]
    fn koch_endpoints_and_continuity() {
        let k = koch();
        let ifs = k.ifs.unwrap();
        let m = ifs.maps();
        let (o, e) = (Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        for i in 0..3 {
            assert!(m[i].map(e).dist(m[i + 1].map(o)) < 1e-15);
        }
        assert!(m[3].map(e).dist(e) < 1e-15);
    }

    #[test]
    fn example1_values() {
        let e = example1_entry(4, 3).unwrap();
        assert!((e.expected("s0").unwrap() - 0.792481250360578).abs() < 1e-12);
        assert!((e.expected("s1").unwrap() - 1.792481250360578).abs() < 1e-12);
        let e = example1_entry(3, 2).unwrap();
        assert!((e.expected("s0").unwrap() - 0.630929753571457).abs() < 1e-12);
        assert!(example1_entry(4, 1).is_err());
        assert!(example1_entry(3, 3).is_err());
        assert_eq!(e.ifs.as_ref().unwrap().len(), 6);
        assert_eq!(e.line_ifs().unwrap().len(), 2);
    }

    #[test]
    fn example1_string_identity() {
        let e = example1_entry(4, 3).unwrap();
        let Construction::Product(p) = &e.construction else { panic!() };
        let s = e.fractal_string(8).unwrap();
        for j in 0..40 {
            let eps = 0.3 * 0.8f64.powi(j);
            assert_eq!(p.c0var(&s, eps), s.c0var_line(eps));
        }
    }

    #[test]
    fn example2_values() {
        assert!((example2_expected(3, 1).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(example2_expected(5, 0).unwrap(), 1.0);
        assert!((example2_expected(4, 7).unwrap() - 72f64.ln() / 16f64.ln()).abs() < 1e-12);
        assert!((example2_expected(4, 7).unwrap() - 1.5425).abs() < 1e-4);
        assert!(example2_expected(3, 2).is_err());
        assert!(example2_expected(1, 0).is_err());
    }

    #[test]
    fn general_ladder_values() {
        let g = GeneralSet::new(1.5, 1.5).unwrap();
        assert!((g.q - 0.25).abs() < 1e-15);
        assert!((g.eps_n(0) - 0.25).abs() < 1e-15 && (g.eps_n(1) - 0.0625).abs() < 1e-15);
        assert_eq!(g.c0var(0.1).unwrap(), 3.0);
        assert_eq!(g.c0var(0.3).unwrap(), 1.0);
        assert!((g.c1var(0.3).unwrap() - (2.0 + 0.3 * PI)).abs() < 1e-15);

        let g = GeneralSet::new(1.2, 1.7).unwrap();
        assert!((2.0 * g.q.powf(0.7) - 1.0).abs() < 1e-14);
        assert!((g.q - 0.3715).abs() < 1e-4);
        assert_eq!(g.level(g.eps_n(3)), Some(2));
        assert_eq!(g.level(g.eps_n(3) * (1.0 - 1e-12)), Some(3));
        assert_eq!(g.level(g.eps_n(4) * (1.0 - 1e-12)), Some(4));
        for bad in [(1.0, 1.0), (1.5, 1.4), (0.5, 1.7), (2.0, 2.0)] {
            assert!(GeneralSet::new(bad.0, bad.1).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn general_widths_sum_to_one() {
        let g = GeneralSet::new(1.2, 1.7).unwrap();
        let geo = g.geometry(6);
        assert!((geo.strip.min.x - (1.0 - (2.0 * g.q).powi(7))).abs() < 1e-12);
        let total: f64 = (0..200).map(|n| 2f64.powi(n) * g.r(n as u32)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for n in 0..12 {
            assert!(g.t(n) >= 1.0 && g.t(n) <= 1.0 / g.r(n));
        }
    }

    #[test]
    fn general_evaluators_match_arc_geometry() {
        for (a, b) in [(1.2, 1.7), (1.5, 1.5)] {
            let g = GeneralSet::new(a, b).unwrap();
            for n in 0..=2 {
                let eps = g.eps_n(n) * 0.98;
                let arc = g.arc_curvature(eps, eps / 10.0).unwrap();
                let c0 = g.c0var(eps).unwrap();
                assert_eq!((arc.n_components + arc.n_holes) as f64, c0, "{a} {b} n={n}");
                let c1 = g.c1var(eps).unwrap();
                assert!((arc.c1 / c1 - 1.0).abs() < 0.02, "{a} {b} n={n}: {} vs {c1}", arc.c1);
            }
        }
    }

    #[test]
    fn general_exponents_recovered() {
        for (a, b) in [(1.2, 1.7), (1.5, 1.5), (0.9, 1.1)] {
            let g = GeneralSet::new(a, b).unwrap();
            let lo = g.eps_n(13);
            let hi = g.eps_n(0) * 0.999;
            let s0 = ScalingSeries::from_fn(0, lo, hi, 0.9, |e| g.c0var(e).unwrap()).unwrap();
            let s1 = ScalingSeries::from_fn(1, lo, hi, 0.9, |e| g.c1var(e).unwrap()).unwrap();
            let (f0, f1) = (fit_exponent(&s0).unwrap(), fit_exponent(&s1).unwrap());
            assert!((f0.s_hat - a).abs() <= 0.05, "{a} {b}: {}", f0.s_hat);
            assert!((f1.s_hat - b).abs() <= 0.05, "{a} {b}: {}", f1.s_hat);
        }
    }

    #[test]
    fn lookup_names() {
        assert_eq!(lookup("koch").unwrap().name, "koch");
        assert_eq!(lookup("example1:n=4,m=3").unwrap().name, "example1:n=4,m=3");
        assert!((lookup("example2:k=3,m=1").unwrap().expected("dim_boundary").unwrap() - 4.0 / 3.0).abs() < 1e-12);
        let g = lookup("general:a=1.2,b=1.7").unwrap();
        assert!(matches!(g.construction, Construction::General(_)));
        for bad in ["nope", "example1:n=4", "example1:n=4,m=x", "example1:n=4.5,m=3", "general:a=1,b=1,c=2"] {
            assert!(matches!(lookup(bad), Err(Error::Catalog(_))), "{bad}");
        }
    }
}
