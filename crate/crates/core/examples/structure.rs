//! Cylinder clusters, bounded complement components and local flatness.

use fractal_curvature::catalog;
use fractal_curvature::geom::BBox;
use fractal_curvature::structure::{bounded_complement_component, clusters, product_axis};
use fractal_curvature::Point;

fn main() {
    for name in ["gasket", "dust", "koch"] {
        let ifs = catalog::lookup(name).unwrap().ifs.unwrap();
        let counts: Vec<usize> = (1..=4).map(|n| clusters(&ifs, n, 1e-3).unwrap().len()).collect();
        let hole = bounded_complement_component(&ifs.sample(5e-4).unwrap(), 1e-3).unwrap();
        println!(
            "{name:7} clusters per level {counts:?}, bounded complement {}",
            hole.map(|h| format!("near ({:.3}, {:.3})", h.cell.x, h.cell.y)).unwrap_or("none".into())
        );
    }

    let f = catalog::lookup("example1:n=4,m=3").unwrap().ifs.unwrap().sample(1e-3).unwrap();
    let w = BBox::new(Point::new(0.1, 0.2), Point::new(0.6, 0.7));
    println!("K x [0,1]: interval factor along {:?}", product_axis(&f, &w, 5e-3).unwrap());
}
