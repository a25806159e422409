//! Curvature sweeps straight from an IFS, then scaling exponents.
//! Pass a catalog name (default `dust`).

use fractal_curvature::arcs::{sweep_ifs, SweepOptions};
use fractal_curvature::catalog;
use fractal_curvature::exponents::{geometric_grid, Report, ScalingSeries};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "dust".into());
    let e = catalog::lookup(&name).unwrap();
    let ifs = e.ifs.as_ref().unwrap();
    let grid = geometric_grid(5e-4, 0.1, 0.7).unwrap();
    let rows = sweep_ifs(ifs, &grid, SweepOptions::new(5e-5)).unwrap();
    for r in &rows {
        println!("{}", r.csv());
    }
    for k in 0..=2 {
        let series = ScalingSeries::from_samples(k, &rows).unwrap();
        match Report::from_series(&series) {
            Ok(r) => println!("k={k}: s_hat {:.3} (stderr {:.3})", r.s_hat, r.stderr),
            Err(err) => println!("k={k}: {err}"),
        }
    }
    for x in &e.expected {
        println!("expected {} = {:.4}", x.quantity, x.value);
    }
}
