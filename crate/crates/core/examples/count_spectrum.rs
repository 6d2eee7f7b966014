//! Exact eigenvalue counts, the Weyl main term and R(t) for a few manifolds.
//!
//!     cargo run --example count_spectrum

use std::f64::consts::PI;
use weyllab::spectrum::count_report;
use weyllab::HeisenbergManifold;

fn main() -> weyllab::Result<()> {
    let manifolds = [
        HeisenbergManifold::standard(1)?,
        HeisenbergManifold::standard(2)?,
        HeisenbergManifold::new(2, vec![1, 2])?,
        HeisenbergManifold::new(3, vec![2, 4, 4])?,
    ];
    for m in &manifolds {
        println!("{m}");
        for u in [4.0f64, 16.0, 64.0, 256.0] {
            let t = 2.0 * PI * u * u;
            let r = count_report(m, t);
            println!(
                "  u = {u:>5}  N = {:>28}  N_I = {:>20}  N_II = {:>28}  R/t^(l-1/2) = {:+.4e}",
                r.n,
                r.n_i,
                r.n_ii,
                r.r / t.powf(m.ell() as f64 - 0.5)
            );
        }
    }
    Ok(())
}
