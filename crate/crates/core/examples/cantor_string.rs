//! The Cantor set as a fractal string: exact curvature of its parallel sets
//! on the line and in the plane, and the exponent fitted to them.

use fractal_curvature::catalog;
use fractal_curvature::exponents::{fit_exponent, ScalingSeries};

fn main() {
    let s = catalog::cantor().fractal_string(16).unwrap();
    println!("{} gaps, resolution {:.2e}", s.gap_count(), s.resolution());
    println!("{:>10} {:>8} {:>10} {:>10}", "eps", "C0 line", "C0var 2d", "C1 x[0,1]");
    for k in 1..8 {
        let eps = 0.5 * 3f64.powi(-k);
        println!(
            "{eps:>10.2e} {:>8} {:>10.4} {:>10.4}",
            s.c0var_line(eps),
            s.c0var_plane(eps),
            s.product_c1(eps)
        );
    }

    let line = ScalingSeries::from_fn(0, 1e-6, 0.3, 0.9, |e| s.c0var_line(e)).unwrap();
    let plane = ScalingSeries::from_fn(0, 1e-6, 0.3, 0.9, |e| s.c0var_plane(e)).unwrap();
    println!("s0 line  {:.4}", fit_exponent(&line).unwrap().s_hat);
    println!("s0 plane {:.4}", fit_exponent(&plane).unwrap().s_hat);
    println!("log2/log3 {:.4}", 2f64.ln() / 3f64.ln());
}
