//! Boundary of a union of disks: arcs, vertices, loops and the curvature
//! measures read off them.

use fractal_curvature::arcs::DiskUnion;
use fractal_curvature::Point;

fn main() {
    // six disks in a ring enclose a hole
    let ring: Vec<Point> = (0..6)
        .map(|k| Point::polar(1.0, k as f64 * std::f64::consts::PI / 3.0))
        .collect();
    let u = DiskUnion::new(ring, 0.55).unwrap();
    let b = u.boundary().unwrap();
    println!("{} arcs, {} vertices", b.arcs.len(), b.vertices.len());
    for l in &b.loops {
        println!("loop of {} arcs, outer {}, turning {:.12}", l.arcs.len(), l.outer, l.turning);
    }
    let c = b.sample(u.radius());
    println!("C0 {}  C0var {:.4}  C1 {:.4}  C2 {:.4}", c.c0, c.c0var, c.c1, c.c2);
    println!("{}", serde_json::to_string(&b.arcs[0]).unwrap());
}
