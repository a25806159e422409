//! Similarity dimensions of the catalog sets, and of an IFS read from JSON.

use fractal_curvature::catalog;
use fractal_curvature::Ifs;

fn main() {
    for e in catalog::standard_sets() {
        let ifs = e.ifs.as_ref().unwrap();
        println!("{:8} {} maps  D = {:.10}", e.name, ifs.len(), ifs.moran_dimension());
    }

    // unequal ratios: 0.5 and 0.25 on the line
    let json = r#"{"dim": 1, "maps": [{"r": 0.5, "t": [0.0]}, {"r": 0.25, "t": [0.75]}]}"#;
    let ifs = Ifs::from_json(json).unwrap();
    println!("custom   D = {:.10}", ifs.moran_dimension());
}
