//! Finding U >= T² that puts every U·sqrt(h(2k-h)) near an integer.
//!
//!     cargo run --release --example dirichlet_search

use weyllab::diophantine::{dirichlet_search, DirichletCertificate};

fn main() -> weyllab::Result<()> {
    for t in [1.0, 1.5, 2.0, 2.5] {
        let cert = dirichlet_search(t, 10_000_000)?;
        println!("T = {t}: U = {}, {} targets, max distance {:.6}", cert.u, cert.targets.len(), cert.max_distance());
        let text = cert.to_text();
        let back = DirichletCertificate::from_text(&text)?;
        assert!(back.verify());
        if t == 2.0 {
            print!("{text}");
        }
    }
    Ok(())
}
