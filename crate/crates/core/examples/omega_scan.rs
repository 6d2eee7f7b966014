//! Scanning the normalized remainder E(u)/u^(2l-1/2) for large values.
//!
//!     cargo run --release --example omega_scan

use weyllab::hunt::omega_scan;
use weyllab::spectrum::Precision;
use weyllab::HeisenbergManifold;

fn main() -> weyllab::Result<()> {
    let m = HeisenbergManifold::standard(2)?;
    let result = omega_scan(&m, 10.0, 5000.0, 0.25, Precision::Extended)?;
    if let Some(best) = result.argmax() {
        println!("{} samples, max |norm2| = {:.5} at u = {}", result.records.len(), best.norm2.abs(), best.u);
    }
    for d in &result.decades {
        println!("  decade from {:>6}: max |norm2| {:.5} at u = {}", d.decade_start, d.abs_norm2, d.u);
    }
    println!("decade maxima nondecreasing: {}", result.decade_maxima_nondecreasing);
    Ok(())
}
