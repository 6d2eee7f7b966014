//! Vaaler's trigonometric approximation to the sawtooth and its majorant.
//!
//!     cargo run --example vaaler_majorant

use weyllab::vaaler::{check_majorant, psi, VaalerApproximant};

fn main() -> weyllab::Result<()> {
    let a = VaalerApproximant::new(8)?;
    println!("H = 8 coefficients");
    for h in 1..=8 {
        println!("  h = {h}  alpha = {:+.12}  beta = {:+.12}", a.alpha(h), a.beta(h));
    }
    println!("\n     w        psi(w)     Sigma(w)    Sigma*(w)     slack");
    for k in 0..=10 {
        let w = k as f64 / 10.0 + 0.013;
        println!("  {w:.3}  {:+.6}  {:+.6}  {:+.6}  {:+.3e}", psi(w), a.sigma(w), a.sigma_star(w), a.slack(w));
    }
    println!();
    for order in [1, 4, 16, 64] {
        let r = check_majorant(order, 100_000, 42, 1e-12)?;
        println!("H = {order:>3}: {} samples, {} violations, min slack {:.3e}", r.samples, r.violations, r.min_slack);
    }
    Ok(())
}
