//! Structural predicates on attractors, each certified only at a stated
//! sampling or probe scale.

mod tiling;

pub use tiling::{tiling_compatible, tiling_generator, FeasibleOpenSet, Generator, Region, Tile, TilingReport};

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{close_pairs, BBox, Point};
use crate::ifs::{is_terminal, Ifs, PointSample, Similarity, Visit, Word};

/// Largest raster accepted by [`bounded_complement_component`].
pub const GRID_CELL_CAP: usize = 64_000_000;

/// Default contact tolerance relative to the hull diameter.
pub const DEFAULT_CONTACT_TOL: f64 = 1e-3;

/// Level-`n` cylinders grouped by chains of contact.
#[derive(Clone, Debug)]
pub struct ClusterDecomposition {
    pub level: usize,
    pub clusters: Vec<Vec<Word>>,
    /// Smallest distance between cylinders of different clusters, less the
    /// sampling slack. `None` for a single cluster.
    pub separation: Option<f64>,
    pub contact_tol: f64,
    pub resolution: f64,
}

impl ClusterDecomposition {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Index of the cluster containing `w`.
    pub fn cluster_of(&self, w: &Word) -> Option<usize> {
        self.clusters.iter().position(|c| c.contains(w))
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

struct PairSearch<'a> {
    ifs: &'a Ifs,
    corners: [Point; 4],
    diam: f64,
    delta: f64,
}

impl PairSearch<'_> {
    fn bbox(&self, m: &Similarity) -> BBox {
        BBox::from_points(self.corners.iter().map(|&c| m.map(c))).expect("four corners")
    }

    /// Lowers `best` to the smallest representative distance between the
    /// two cylinders at resolution `delta`, stopping once it is at most
    /// `stop`.
    fn descend(&self, a: &Similarity, b: &Similarity, best: &mut f64, stop: f64) {
        if *best <= stop || self.bbox(a).box_dist(&self.bbox(b)) >= *best {
            return;
        }
        let ta = is_terminal(a.ratio(), self.diam, self.delta);
        let tb = is_terminal(b.ratio(), self.diam, self.delta);
        if ta && tb {
            let seed = self.ifs.seed();
            *best = best.min(a.map(seed).dist(b.map(seed)));
            return;
        }
        let split_a = !ta && (tb || a.ratio() >= b.ratio());
        let (big, other) = if split_a { (a, b) } else { (b, a) };
        let ob = self.bbox(other);
        let mut kids: Vec<(f64, Similarity)> = self
            .ifs
            .maps()
            .iter()
            .map(|m| {
                let k = big.compose(m);
                (self.bbox(&k).box_dist(&ob), k)
            })
            .collect();
        kids.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (_, k) in kids {
            self.descend(&k, other, best, stop);
        }
    }
}

/// Cluster decomposition at `level` with cylinder samples at resolution
/// `contact_tol / 10`.
pub fn clusters(ifs: &Ifs, level: usize, contact_tol: f64) -> Result<ClusterDecomposition> {
    clusters_at(ifs, level, contact_tol, contact_tol / 10.0)
}

/// As [`clusters`] with an explicit sampling resolution, which must not
/// exceed `contact_tol / 10`.
pub fn clusters_at(ifs: &Ifs, level: usize, contact_tol: f64, resolution: f64) -> Result<ClusterDecomposition> {
    if level == 0 {
        return Err(Error::InvalidArgument("cluster level must be at least 1".into()));
    }
    if !(contact_tol > 0.0 && contact_tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "contact tolerance must be positive, got {contact_tol}"
        )));
    }
    if !(resolution > 0.0) || resolution > contact_tol / 10.0 {
        return Err(Error::ResolutionTooCoarse {
            spacing: resolution,
            tol: contact_tol,
        });
    }
    let words = (ifs.len() as f64).powi(level as i32);
    if words > 4e6 {
        return Err(Error::InvalidArgument(format!("level {level} has {words:e} cylinders")));
    }
    let search = PairSearch {
        ifs,
        corners: ifs.hull().corners(),
        diam: ifs.diam(),
        delta: resolution,
    };
    let mut cyl: Vec<(Word, Similarity)> = Vec::with_capacity(words as usize);
    ifs.walk(|w, m| {
        if w.len() < level {
            return Visit::Descend;
        }
        cyl.push((Word(w.to_vec()), *m));
        Visit::Stop
    });
    let boxes: Vec<BBox> = cyl.iter().map(|c| search.bbox(&c.1)).collect();

    let mut dsu = Dsu((0..cyl.len()).collect());
    for (i, j) in close_pairs(&boxes, contact_tol) {
        if dsu.find(i) == dsu.find(j) {
            continue;
        }
        let mut best = f64::INFINITY;
        search.descend(&cyl[i].1, &cyl[j].1, &mut best, contact_tol);
        if best <= contact_tol {
            dsu.union(i, j);
        }
    }

    let roots: Vec<usize> = (0..cyl.len()).map(|i| dsu.find(i)).collect();
    let mut separation = f64::INFINITY;
    let several = roots.iter().any(|&r| r != roots[0]);
    let mut pad = contact_tol;
    while several && separation > pad {
        let mut pairs: Vec<(f64, usize, usize)> = close_pairs(&boxes, pad)
            .into_iter()
            .filter(|&(i, j)| roots[i] != roots[j])
            .map(|(i, j)| (boxes[i].box_dist(&boxes[j]), i, j))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (lower, i, j) in pairs {
            if lower >= separation {
                break;
            }
            search.descend(&cyl[i].1, &cyl[j].1, &mut separation, f64::NEG_INFINITY);
        }
        pad *= 2.0;
    }

    let mut groups: Vec<Vec<Word>> = Vec::new();
    let mut slot = vec![usize::MAX; cyl.len()];
    for (i, (w, _)) in cyl.into_iter().enumerate() {
        let r = roots[i];
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(w);
    }
    Ok(ClusterDecomposition {
        level,
        clusters: groups,
        separation: separation.is_finite().then_some(separation - 2.0 * resolution),
        contact_tol,
        resolution,
    })
}

/// A bounded component of the complement of a dilated sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundedComponent {
    /// Center of a raster cell inside the component.
    pub cell: Point,
    pub cells: usize,
    pub area: f64,
    /// Dilation radius used.
    pub eps: f64,
    pub probe: f64,
}

/// Largest bounded component of the complement of `sample_ε`, with
/// `ε = 3 · probe`, on a raster of cell size `probe`. `None` when the
/// complement is connected at this scale.
pub fn bounded_complement_component(sample: &PointSample, probe: f64) -> Result<Option<BoundedComponent>> {
    if !(probe > 0.0 && probe.is_finite()) {
        return Err(Error::InvalidArgument(format!("probe resolution must be positive, got {probe}")));
    }
    if sample.resolution > probe {
        return Err(Error::ResolutionTooCoarse {
            spacing: sample.resolution,
            tol: probe,
        });
    }
    let bbox = sample.bbox().ok_or_else(|| Error::InvalidArgument("empty sample".into()))?;
    let eps = 3.0 * probe;
    let area = bbox.expand(10.0 * eps);
    let nx = (area.width() / probe).ceil() as usize + 1;
    let ny = (area.height() / probe).ceil() as usize + 1;
    let cells = nx.saturating_mul(ny);
    if cells > GRID_CELL_CAP {
        return Err(Error::GridCap {
            cells,
            cap: GRID_CELL_CAP,
        });
    }
    let center = |i: usize, j: usize| area.min + Point::new((i as f64 + 0.5) * probe, (j as f64 + 0.5) * probe);
    // 0 free, 1 covered, 2 reached from outside, 3 labelled bounded
    let mut state = vec![0u8; cells];
    let reach = (eps / probe).ceil() as i64 + 1;
    for &p in &sample.points {
        let ci = ((p.x - area.min.x) / probe).floor() as i64;
        let cj = ((p.y - area.min.y) / probe).floor() as i64;
        for i in (ci - reach).max(0)..=(ci + reach).min(nx as i64 - 1) {
            for j in (cj - reach).max(0)..=(cj + reach).min(ny as i64 - 1) {
                let (i, j) = (i as usize, j as usize);
                if center(i, j).dist(p) <= eps {
                    state[j * nx + i] = 1;
                }
            }
        }
    }
    // returns the cell count and the sum of the cell centers
    let fill = |state: &mut Vec<u8>, start: usize, from: u8, mark: u8| -> (usize, Point) {
        let mut queue = VecDeque::from([start]);
        state[start] = mark;
        let mut n = 0;
        let mut sum = Point::ORIGIN;
        while let Some(c) = queue.pop_front() {
            n += 1;
            let (i, j) = (c % nx, c / nx);
            sum = sum + center(i, j);
            let mut push = |k: usize| {
                if state[k] == from {
                    state[k] = mark;
                    queue.push_back(k);
                }
            };
            if i > 0 {
                push(c - 1);
            }
            if i + 1 < nx {
                push(c + 1);
            }
            if j > 0 {
                push(c - nx);
            }
            if j + 1 < ny {
                push(c + nx);
            }
        }
        (n, sum)
    };
    let border = (0..nx)
        .flat_map(|i| [i, (ny - 1) * nx + i])
        .chain((0..ny).flat_map(|j| [j * nx, j * nx + nx - 1]));
    for c in border.collect::<Vec<_>>() {
        if state[c] == 0 {
            fill(&mut state, c, 0, 2);
        }
    }
    let mut best: Option<(usize, usize, Point)> = None;
    for c in 0..cells {
        if state[c] == 0 {
            let (n, sum) = fill(&mut state, c, 0, 3);
            if best.is_none_or(|(_, m, _)| n > m) {
                best = Some((c, n, sum * (1.0 / n as f64)));
            }
        }
    }
    let Some((start, n, mean)) = best else {
        return Ok(None);
    };
    // representative: the cell of the largest component nearest its mean
    let mut cell = center(start % nx, start / nx);
    let mut queue = VecDeque::from([start]);
    state[start] = 4;
    while let Some(c) = queue.pop_front() {
        let p = center(c % nx, c / nx);
        if p.dist(mean) < cell.dist(mean) {
            cell = p;
        }
        let (i, j) = (c % nx, c / nx);
        for (ok, k) in [(i > 0, c.wrapping_sub(1)), (i + 1 < nx, c + 1), (j > 0, c.wrapping_sub(nx)), (j + 1 < ny, c + nx)] {
            if ok && state[k] == 3 {
                state[k] = 4;
                queue.push_back(k);
            }
        }
    }
    Ok(Some(BoundedComponent {
        cell,
        cells: n,
        area: n as f64 * probe * probe,
        eps,
        probe,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

fn hausdorff_1d(a: &[f64], b: &[f64]) -> f64 {
    let one_way = |a: &[f64], b: &[f64]| {
        a.iter()
            .map(|&x| {
                let k = b.partition_point(|&y| y < x);
                let right = b.get(k).map_or(f64::INFINITY, |y| y - x);
                let left = k.checked_sub(1).map_or(f64::INFINITY, |k| x - b[k]);
                right.min(left)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Whether `points` look like `[interval] × P` with the interval along
/// `axis`: the projections onto `axis` of all bands of width `tol` across it
/// agree, and have no gap wider than `tol`.
fn slices_agree(points: &[Point], origin: Point, axis: Axis, tol: f64) -> bool {
    let mut slices: std::collections::BTreeMap<i64, Vec<f64>> = Default::default();
    for p in points {
        let (along, across, o) = match axis {
            Axis::X => (p.x, p.y, origin.y),
            Axis::Y => (p.y, p.x, origin.x),
        };
        slices
            .entry(((across - o) / tol).floor() as i64)
            .or_default()
            .push(along);
    }
    let mut iter = slices.into_values().map(|mut v| {
        v.sort_by(f64::total_cmp);
        v
    });
    let Some(first) = iter.next() else {
        return true;
    };
    let gap_free = first.windows(2).all(|w| w[1] - w[0] <= tol);
    gap_free && iter.all(|s| hausdorff_1d(&first, &s) <= tol)
}

/// Axis carrying the interval factor when `sample ∩ window` is, to within
/// `axis_tol`, a product of an interval and another set (X first).
pub fn product_axis(sample: &PointSample, window: &BBox, axis_tol: f64) -> Result<Option<Axis>> {
    if !(axis_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("axis tolerance must be positive, got {axis_tol}")));
    }
    let pts: Vec<Point> = sample.points.iter().copied().filter(|&p| window.contains(p)).collect();
    if pts.is_empty() {
        return Err(Error::EmptyWindow);
    }
    Ok([Axis::X, Axis::Y]
        .into_iter()
        .find(|&a| slices_agree(&pts, window.min, a, axis_tol)))
}

/// Whether `sample ∩ window` is an interval times a set along either axis.
/// The window must be aligned with the product direction.
pub fn flatness_test(sample: &PointSample, window: &BBox, axis_tol: f64) -> Result<bool> {
    Ok(product_axis(sample, window, axis_tol)?.is_some())
}
