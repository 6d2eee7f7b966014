//! Mean square of R(t) and its fitted growth exponent.
//!
//!     cargo run --release --example mean_square

use std::f64::consts::PI;
use weyllab::hunt::{mean_square, mean_square_with, DEFAULT_DECADES};
use weyllab::spectrum::Precision;
use weyllab::HeisenbergManifold;

fn main() -> weyllab::Result<()> {
    let t_max = 2.0 * PI * 1e6;
    let synthetic = mean_square_with(|t| t.powf(1.75), 2, t_max, 16, DEFAULT_DECADES)?;
    println!("synthetic R = t^1.75: exponent {:.5}", synthetic.fitted_exponent);

    let m = HeisenbergManifold::standard(2)?;
    let fit = mean_square(&m, t_max, 16, DEFAULT_DECADES, Precision::Extended)?;
    for (t, v) in fit.t_grid.iter().zip(&fit.integrals) {
        println!("  T = {t:.4e}  integral = {v:.6e}  ratio to T^4.5 = {:.4e}", v / t.powf(4.5));
    }
    println!("l = 2: exponent {:.4}, C = {:.4e}, log residual {:.4}", fit.fitted_exponent, fit.fitted_c, fit.residual);
    Ok(())
}
