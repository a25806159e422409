//! Sets with prescribed exponents: products `K × [0,1]` and the sets
//! `K(a,b)`, whose curvature is known in closed form.

use fractal_curvature::catalog::{self, Construction};
use fractal_curvature::exponents::{fit_exponent, ScalingSeries};

fn main() {
    let e = catalog::example1_entry(4, 3).unwrap();
    let Construction::Product(p) = &e.construction else { unreachable!() };
    let s = e.fractal_string(12).unwrap();
    let (lo, hi) = (4f64.powi(-10), 4f64.powi(-3));
    let s0 = ScalingSeries::from_fn(0, lo, hi, 0.9, |x| p.c0var(&s, x)).unwrap();
    let s1 = ScalingSeries::from_fn(1, lo, hi, 0.9, |x| p.c1var(&s, x)).unwrap();
    println!(
        "{}: s0 {:.3} (expected {:.3}), s1 {:.3} (expected {:.3})",
        e.name,
        fit_exponent(&s0).unwrap().s_hat,
        e.expected("s0").unwrap(),
        fit_exponent(&s1).unwrap().s_hat,
        e.expected("s1").unwrap()
    );

    for (a, b) in [(1.2, 1.7), (0.9, 1.1)] {
        let e = catalog::example_general(a, b).unwrap();
        let Construction::General(g) = e.construction else { unreachable!() };
        let (lo, hi) = (g.eps_n(13), 0.999 * g.eps_n(0));
        let s0 = ScalingSeries::from_fn(0, lo, hi, 0.9, |x| g.c0var(x).unwrap()).unwrap();
        let s1 = ScalingSeries::from_fn(1, lo, hi, 0.9, |x| g.c1var(x).unwrap()).unwrap();
        println!(
            "K({a},{b}): s0 {:.3}, s1 {:.3}",
            fit_exponent(&s0).unwrap().s_hat,
            fit_exponent(&s1).unwrap().s_hat
        );
        // the closed form against the arc engine at a coarse scale
        let eps = 0.98 * g.eps_n(1);
        let arcs = g.arc_curvature(eps, eps / 10.0).unwrap();
        println!("  eps {eps:.4}: C1 formula {:.4}, arcs {:.4}", g.c1var(eps).unwrap(), arcs.c1);
    }
}
