//! The smoothed dual sum I(T,U): numerical integral against the truncated sum.
//!
//!     cargo run --release --example smoothed_sum

use weyllab::smoothing::{i_numeric, i_truncated};

fn main() -> weyllab::Result<()> {
    for (t, big_u) in [(2.0, 10.0), (3.0, 30.0), (5.0, 50.0)] {
        let num = i_numeric(t, big_u, 2)?;
        let tr = i_truncated(t, big_u, 2)?;
        println!(
            "T = {t}, U = {big_u}: integral {num:+.10e}, truncated {:+.10e} ({} terms), |diff| {:.3e}, tail budget {:.3e}",
            tr.value,
            tr.terms,
            (num - tr.value).abs(),
            tr.tail_budget
        );
    }
    Ok(())
}
