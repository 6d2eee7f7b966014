//! Dyadic exponential sums against their stationary-phase transform.
//!
//!     cargo run --example stationary_phase

use weyllab::expsum::vdc_transform;

fn main() -> weyllab::Result<()> {
    println!("   u  h  j     k-range       |direct|   |transformed|   error/bound-shape");
    for u in [50.0, 100.0, 200.0] {
        for h in 1..=3 {
            for j in 0..=1 {
                let r = vdc_transform(h, u, 2, j)?;
                println!(
                    "{u:>4} {h:>2} {j:>2}  {:>6}..{:<6}  {:>12.4}  {:>12.4}  {:.4}",
                    r.k_lo,
                    r.k_hi,
                    r.direct().norm(),
                    r.transformed_main().norm(),
                    r.kappa
                );
            }
        }
    }
    Ok(())
}
