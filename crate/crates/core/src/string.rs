//! Fractal strings: the complementary gap lengths of a compact subset of the
//! line, and the exact parallel-set quantities that depend only on them.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::Ifs;

/// Gap lengths of a compact set `K ⊂ ℝ` together with its hull and measure.
///
/// Lengths are stored as `(length, multiplicity)` groups in decreasing
/// order, which keeps self-similar strings with millions of gaps cheap to
/// evaluate.
#[derive(Clone, Debug, PartialEq)]
pub struct FractalString {
    groups: Vec<(f64, u64)>,
    hull_length: f64,
    total_measure: f64,
    tail: f64,
    resolution: f64,
}

impl FractalString {
    /// Builds a string from unsorted gap lengths.
    pub fn new(lengths: Vec<f64>, hull_length: f64, total_measure: f64) -> Result<Self> {
        if !(hull_length > 0.0 && hull_length.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "hull length must be positive, got {hull_length}"
            )));
        }
        if !(total_measure >= 0.0 && total_measure.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "total measure must be non-negative, got {total_measure}"
            )));
        }
        if let Some(l) = lengths.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidArgument(format!("gap length {l} is not positive")));
        }
        let groups = group_lengths(lengths);
        let sum: f64 = groups.iter().map(|&(l, c)| l * c as f64).sum();
        let tail = hull_length - total_measure - sum;
        if tail < -1e-9 * hull_length {
            return Err(Error::InvalidArgument(format!(
                "gaps ({sum}) plus measure ({total_measure}) exceed hull length ({hull_length})"
            )));
        }
        Ok(FractalString {
            groups,
            hull_length,
            total_measure,
            tail: tail.max(0.0),
            resolution: 0.0,
        })
    }

    /// Sorted (non-increasing) gap lengths, expanded.
    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.groups
            .iter()
            .flat_map(|&(l, c)| std::iter::repeat_n(l, c as usize))
    }

    /// Distinct lengths with their multiplicities, decreasing.
    pub fn groups(&self) -> &[(f64, u64)] {
        &self.groups
    }

    pub fn gap_count(&self) -> u64 {
        self.groups.iter().map(|g| g.1).sum()
    }

    pub fn hull_length(&self) -> f64 {
        self.hull_length
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    /// Hull length not accounted for by gaps or measure.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Length scale below which the string is not resolved (0 when exact).
    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Truncation error estimate `tail / ε` attached to evaluations.
    pub fn bound_gap(&self, eps: f64) -> f64 {
        self.tail / eps
    }

    /// Number of gaps longer than `2ε` and the index of the first small group.
    fn split(&self, eps: f64) -> (u64, usize) {
        // groups are decreasing, so large gaps form a prefix
        let idx = self.groups.partition_point(|&(l, _)| l > 2.0 * eps);
        let big = self.groups[..idx].iter().map(|g| g.1).sum();
        (big, idx)
    }

    /// `C_0^var` of the parallel set in ℝ: half the number of boundary points.
    pub fn c0var_line(&self, eps: f64) -> f64 {
        1.0 + self.split(eps).0 as f64
    }

    /// Number of components of the parallel set in ℝ.
    pub fn components(&self, eps: f64) -> u64 {
        1 + self.split(eps).0
    }

    /// Length of the parallel set in ℝ. Tail length is treated as set
    /// measure, so exact strings are unaffected.
    pub fn parallel_length_line(&self, eps: f64) -> f64 {
        let (big, idx) = self.split(eps);
        let small: f64 = self.groups[idx..].iter().map(|&(l, c)| l * c as f64).sum();
        2.0 * eps * (1 + big) as f64 + small + self.total_measure + self.tail
    }

    /// `C_0^var` of the parallel set of `K × {0}` in the plane. A gap with
    /// `l = 2ε` is counted by the arcsine branch.
    pub fn c0var_plane(&self, eps: f64) -> f64 {
        let (big, idx) = self.split(eps);
        let arcs: f64 = self.groups[idx..]
            .iter()
            .map(|&(l, c)| c as f64 * (l / (2.0 * eps)).min(1.0).asin())
            .sum();
        1.0 + big as f64 + 4.0 / PI * arcs
    }

    /// Upper bound for `C_0^var` of the parallel set of `K × {0}^{d-1}` in ℝ^d.
    pub fn c0var_dd_upper(&self, eps: f64, d: u32) -> Result<f64> {
        let cd = c_d(d)?;
        let (big, idx) = self.split(eps);
        let small: f64 = self.groups[idx..].iter().map(|&(l, c)| l * c as f64).sum();
        Ok(1.0 + big as f64 + cd * small / eps)
    }

    /// Boundary half-length of the parallel set of `K × [0,1]` in the plane.
    ///
    /// Each component of `K_ε` contributes two vertical sides and two
    /// quarter discs per end; each small gap contributes a dip of two
    /// circular arcs top and bottom instead of a flat run.
    pub fn product_c1(&self, eps: f64) -> f64 {
        let (big, idx) = self.split(eps);
        let n = (1 + big) as f64;
        let dips: f64 = self.groups[idx..]
            .iter()
            .map(|&(l, c)| c as f64 * (2.0 * eps * (l / (2.0 * eps)).min(1.0).asin() - l))
            .sum();
        n + n * (PI - 2.0) * eps + self.parallel_length_line(eps) + dips
    }

    pub fn row(&self, eps: f64, d: u32) -> Result<StringCurvatureRow> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        Ok(StringCurvatureRow {
            eps,
            c0var_1d: self.c0var_line(eps),
            length_1d: self.parallel_length_line(eps),
            c0var_2d: self.c0var_plane(eps),
            c0var_dd_bound: self.c0var_dd_upper(eps, d)?,
            dim_d: d,
            bound_gap: self.bound_gap(eps),
        })
    }

    /// Parses `hull <real> measure <real>` followed by one length per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, head) = lines
            .next()
            .ok_or_else(|| Error::Parse("empty string file".into()))?;
        let tok: Vec<&str> = head.split_whitespace().collect();
        if tok.len() != 4 || tok[0] != "hull" || tok[2] != "measure" {
            return Err(Error::Parse(format!(
                "expected 'hull <real> measure <real>', got '{head}'"
            )));
        }
        let num = |s: &str, line: usize| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: '{s}': {e}", line + 1)))
        };
        let hull = num(tok[1], 0)?;
        let measure = num(tok[3], 0)?;
        let lengths = lines.map(|(i, l)| num(l, i)).collect::<Result<Vec<_>>>()?;
        FractalString::new(lengths, hull, measure)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("hull {} measure {}\n", self.hull_length, self.total_measure);
        for l in self.lengths() {
            writeln!(s, "{l}").expect("write to string");
        }
        s
    }
}

fn group_lengths(mut lengths: Vec<f64>) -> Vec<(f64, u64)> {
    lengths.sort_by(|a, b| b.total_cmp(a));
    let mut groups: Vec<(f64, u64)> = Vec::new();
    for l in lengths {
        match groups.last_mut() {
            Some((g, c)) if (*g - l).abs() <= 1e-12 * *g => *c += 1,
            _ => groups.push((l, 1)),
        }
    }
    groups
}

/// Volume of the unit ball in ℝⁿ.
pub fn unit_ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// `c_d = 2α_{d-1}/α_d`.
pub fn c_d(d: u32) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("ambient dimension must be ≥ 2, got {d}")));
    }
    Ok(2.0 * unit_ball_volume(d - 1) / unit_ball_volume(d))
}

/// Exact per-ε string quantities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StringCurvatureRow {
    pub eps: f64,
    pub c0var_1d: f64,
    pub length_1d: f64,
    pub c0var_2d: f64,
    pub c0var_dd_bound: f64,
    pub dim_d: u32,
    pub bound_gap: f64,
}

impl StringCurvatureRow {
    pub const CSV_HEADER: &'static str = "eps,c0var_1d,length_1d,c0var_2d,c0var_dd_bound,dim_d,bound_gap";

    pub fn csv(&self) -> String {
        format!(
            "{:e},{},{},{},{},{},{:e}",
            self.eps, self.c0var_1d, self.length_1d, self.c0var_2d, self.c0var_dd_bound, self.dim_d, self.bound_gap
        )
    }
}

/// Gap string of a 1-D IFS read off its depth-`n` cylinder intervals.
///
/// `total_measure` is the length of the union of those intervals, an upper
/// approximation for null attractors; `resolution` is the largest cylinder
/// length, below which the string is not trustworthy.
pub fn string_from_ifs(ifs: &Ifs, depth: usize) -> Result<FractalString> {
    if ifs.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: ifs.dim(),
        });
    }
    let hull = ifs.hull();
    let (a, b) = (hull.min, hull.max);
    let mut iv: Vec<(f64, f64)> = Vec::with_capacity(ifs.len().pow(depth as u32));
    ifs.walk(|w, m| {
        if w.len() < depth {
            return crate::ifs::Visit::Descend;
        }
        let (x, y) = (m.map(a).x, m.map(b).x);
        iv.push((x.min(y), x.max(y)));
        crate::ifs::Visit::Stop
    });
    iv.sort_by(|p, q| p.0.total_cmp(&q.0));
    let hull_length = b.x - a.x;
    let tol = 1e-10 * hull_length;
    let mut gaps = Vec::new();
    let mut resolution: f64 = 0.0;
    let mut end = iv[0].0;
    let mut prev = iv[0];
    for (i, &(s, e)) in iv.iter().enumerate() {
        resolution = resolution.max(e - s);
        if i > 0 && s < end - tol {
            return Err(Error::OverlappingCylinders {
                depth,
                left_start: prev.0,
                left_end: prev.1,
                right_start: s,
                right_end: e,
            });
        }
        if i > 0 && s > end + tol {
            gaps.push(s - end);
        }
        end = end.max(e);
        prev = (s, e);
    }
    let gap_sum: f64 = gaps.iter().sum();
    // the union of touching intervals is the hull minus the gaps
    let measure = (hull_length - gap_sum).max(0.0);
    let mut s = FractalString::new(gaps, hull_length, measure)?;
    s.resolution = resolution;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::Similarity;
    use proptest::prelude::*;

    fn cantor() -> Ifs {
        Ifs::new(vec![
            Similarity::new_1d(1.0 / 3.0, false, 0.0).unwrap(),
            Similarity::new_1d(1.0 / 3.0, false, 2.0 / 3.0).unwrap(),
        ])
        .unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-10 * (1.0 + b.abs())
    }

    #[test]
    fn extraction_examples() {
        let s = string_from_ifs(&cantor(), 1).unwrap();
        let l: Vec<f64> = s.lengths().collect();
        assert_eq!(l.len(), 1);
        assert!(close(l[0], 1.0 / 3.0));
        assert!(close(s.hull_length(), 1.0));

        let s = string_from_ifs(&cantor(), 3).unwrap();
        let l: Vec<f64> = s.lengths().collect();
        let want = [1.0 / 3.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 27.0, 1.0 / 27.0, 1.0 / 27.0, 1.0 / 27.0];
        assert_eq!(l.len(), want.len());
        for (a, b) in l.iter().zip(want) {
            assert!(close(*a, b));
        }
        assert!(close(s.total_measure(), 8.0 / 27.0));
        assert!(close(s.resolution(), 1.0 / 27.0));

        let full = Ifs::new(vec![
            Similarity::new_1d(0.5, false, 0.0).unwrap(),
            Similarity::new_1d(0.5, false, 0.5).unwrap(),
        ])
        .unwrap();
        for depth in [1, 4, 8] {
            let s = string_from_ifs(&full, depth).unwrap();
            assert_eq!(s.gap_count(), 0);
            assert!(close(s.hull_length(), 1.0));
        }
    }

    #[test]
    fn overlapping_cylinders_rejected() {
        let ifs = Ifs::new(vec![
            Similarity::new_1d(0.6, false, 0.0).unwrap(),
            Similarity::new_1d(0.6, false, 0.4).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            string_from_ifs(&ifs, 1),
            Err(Error::OverlappingCylinders { depth: 1, .. })
        ));
    }

    #[test]
    fn line_examples() {
        let s1 = string_from_ifs(&cantor(), 1).unwrap();
        let s3 = string_from_ifs(&cantor(), 3).unwrap();
        assert_eq!(s1.c0var_line(0.1), 2.0);
        assert_eq!(s3.c0var_line(0.1), 2.0);
        assert_eq!(s3.c0var_line(0.5), 1.0);
        assert_eq!(s3.c0var_line(0.05), 4.0);

        let exact = FractalString::new(vec![], 1.0, 0.0).unwrap();
        // whole tail counts as measure
        assert!(close(exact.parallel_length_line(0.3), 1.6));
        assert!(close(s3.parallel_length_line(0.5), 2.0));
        let one = FractalString::new(vec![1.0 / 3.0], 1.0, 2.0 / 3.0).unwrap();
        assert!(close(one.parallel_length_line(1.0 / 12.0), 1.0));
        let full = FractalString::new(vec![], 1.0, 1.0).unwrap();
        assert!(close(full.parallel_length_line(0.2), 1.4));
    }

    #[test]
    fn plane_examples() {
        let eps = 0.25;
        let s = FractalString::new(vec![0.5], 1.0, 0.0).unwrap();
        assert!(close(s.c0var_plane(eps), 3.0));
        let s = FractalString::new(vec![0.25], 1.0, 0.0).unwrap();
        assert!(close(s.c0var_plane(eps), 5.0 / 3.0));
        let s = FractalString::new(vec![], 1.0, 1.0).unwrap();
        assert_eq!(s.c0var_plane(0.01), 1.0);
    }

    #[test]
    fn dd_constants() {
        assert!(close(c_d(2).unwrap(), 4.0 / PI));
        assert!(close(c_d(3).unwrap(), 1.5));
        assert!(close(unit_ball_volume(3), 4.0 * PI / 3.0));
        assert!(c_d(1).is_err());
        let s = FractalString::new(vec![0.5, 0.3], 1.0, 0.0).unwrap();
        assert!(close(s.c0var_dd_upper(0.1, 2).unwrap(), s.c0var_line(0.1)));
        assert!(close(s.c0var_dd_upper(0.1, 5).unwrap(), 3.0));
    }

    #[test]
    fn file_round_trip() {
        let s = FractalString::parse("hull 1 measure 0\n0.1111\n0.3333\n\n0.1111\n").unwrap();
        let l: Vec<f64> = s.lengths().collect();
        assert_eq!(l, vec![0.3333, 0.1111, 0.1111]);
        assert_eq!(FractalString::parse(&s.to_text()).unwrap(), s);
        assert!(FractalString::parse("hull 1\n0.2").is_err());
        assert!(FractalString::parse("hull 1 measure 0\n-0.2").is_err());
        assert!(FractalString::parse("hull 1 measure 0.9\n0.2").is_err());
    }

    fn arb_string() -> impl Strategy<Value = FractalString> {
        prop::collection::vec(1e-4f64..0.3, 0..40).prop_map(|l| {
            let sum: f64 = l.iter().sum();
            FractalString::new(l, sum + 1.0, 0.0).unwrap()
        })
    }

    proptest! {
        #[test]
        fn plane_below_dd_bound(s in arb_string(), eps in 1e-4f64..1.0) {
            let plane = s.c0var_plane(eps);
            let bound = s.c0var_dd_upper(eps, 2).unwrap();
            prop_assert!(plane <= bound + 1e-12);
            if s.lengths().any(|l| l < 2.0 * eps) {
                prop_assert!(plane < bound);
            }
        }

        #[test]
        fn line_below_plane(s in arb_string(), eps in 1e-4f64..1.0) {
            prop_assert!(s.c0var_line(eps) <= s.c0var_plane(eps) + 1e-12);
        }

        #[test]
        fn line_count_monotone(s in arb_string(), a in 1e-4f64..1.0, b in 1e-4f64..1.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(s.c0var_line(lo) >= s.c0var_line(hi));
            prop_assert!(s.parallel_length_line(lo) <= s.parallel_length_line(hi) + 1e-12);
        }

        #[test]
        fn row_bound_chain(s in arb_string(), eps in 1e-4f64..1.0) {
            let r = s.row(eps, 2).unwrap();
            let small: f64 = s.lengths().filter(|&l| l <= 2.0 * eps).sum();
            prop_assert!(r.c0var_2d <= r.c0var_1d + small / eps + 1e-12);
            prop_assert!(r.c0var_1d >= 0.0 && r.length_1d >= 0.0);
        }
    }
}
