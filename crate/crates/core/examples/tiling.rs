//! Tiling generators of feasible open sets and their compatibility.

use fractal_curvature::catalog;
use fractal_curvature::structure::{tiling_compatible, tiling_generator};

fn main() {
    for name in ["cantor", "gasket", "koch", "square"] {
        let e = catalog::lookup(name).unwrap();
        let (ifs, o) = (e.ifs.as_ref().unwrap(), e.open_set.as_ref().unwrap());
        let g = tiling_generator(ifs, o, 2).unwrap();
        let area: f64 = g.pieces.iter().map(|p| p.measure()).sum();
        let r = tiling_compatible(ifs, o, 1e-2 * ifs.diam()).unwrap();
        println!(
            "{name:7} generator pieces {} (measure {area:.4}), tiles {}, compatible {} (max distance {:.2e})",
            g.pieces.len(),
            g.tiles.len(),
            r.compatible,
            r.max_boundary_distance
        );
    }
}
