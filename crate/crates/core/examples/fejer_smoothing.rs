//! The Fejér-smoothed exponential integral against its closed form.
//!
//!     cargo run --example fejer_smoothing

use weyllab::smoothing::{fejer_mass, lemma3_check};

fn main() -> weyllab::Result<()> {
    println!("mass of F_16 over R: {:.12}", fejer_mass(16.0)?);
    println!("\n   T     Q  delta    closed        defect      defect*Q");
    for t in [4.0, 16.0] {
        for q in [1.0, 2.0, 4.0, 8.0, 15.5, 32.0] {
            for delta in [0.0, 0.3] {
                let r = lemma3_check(t, q, delta)?;
                println!("{t:>4} {q:>5} {delta:>5}  {:+.6}  {:.3e}  {:.3e}", r.closed_re, r.defect, r.defect * q);
            }
        }
    }
    Ok(())
}
