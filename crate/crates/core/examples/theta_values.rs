//! The divisor-type arithmetic function theta_l(n) at small n.
//!
//!     cargo run --example theta_values

use weyllab::arithmetic::{divisor_pairs, theta};

fn main() -> weyllab::Result<()> {
    for ell in [2u32, 4] {
        println!("l = {ell}");
        for n in 1..=12u64 {
            let pairs: Vec<String> = divisor_pairs(n).iter().map(|p| format!("({},{})", p.h, p.m)).collect();
            println!("  n = {n:>2}  theta = {:.16}  pairs {}", theta(ell, n)?, pairs.join(" "));
        }
    }
    Ok(())
}
