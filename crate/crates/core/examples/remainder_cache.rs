//! Persisting E(u) samples to a checksummed on-disk cache.
//!
//!     cargo run --example remainder_cache

use weyllab::spectrum::{Precision, RemainderCache};
use weyllab::HeisenbergManifold;

fn main() -> weyllab::Result<()> {
    let dir = std::env::temp_dir().join("weyllab-cache-example");
    std::fs::create_dir_all(&dir)?;
    let m = HeisenbergManifold::standard(2)?;
    let mut cache = RemainderCache::open(&dir, &m, Precision::Extended)?;
    for u in [10.0, 20.5, 40.0] {
        let rec = cache.get_or_compute(u)?;
        println!("u = {u}: N_II = {}, E = {:+.6e}", rec.n_ii, rec.e_exact);
    }
    println!("{} records in {}", cache.len(), cache.path().display());
    Ok(())
}
