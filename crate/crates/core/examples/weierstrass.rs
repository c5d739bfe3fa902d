//! Weierstrass p from its Laurent series, checked against its differential
//! equations.

use num_complex::Complex64;
use subeq_lab::solutions::Weierstrass;

fn main() -> subeq_lab::Result<()> {
    let (g2, g3) = (Complex64::new(1.0, 0.5), Complex64::new(-0.25, 0.0));
    let wp = Weierstrass::new(g2, g3);
    println!("series radius {:.4}", wp.r_conv());
    for z in [Complex64::new(0.2, 0.0), Complex64::new(0.3, 0.4), Complex64::new(-0.1, 0.6)] {
        let (p, dp) = wp.eval(z)?;
        let d2 = wp.second_derivative(z)?;
        let e1 = (dp * dp - (4.0 * p * p * p - g2 * p - g3)).norm() / (4.0 * p * p * p).norm();
        let e2 = (d2 - (6.0 * p * p - g2 / 2.0)).norm() / d2.norm();
        println!("z = {z}: p = {p:.10}, p' = {dp:.10}, rel errors {e1:.1e} {e2:.1e}");
    }
    Ok(())
}
