//! Spectrum of the Laplacian on `H_l / Γ_r`: exact counts, the Weyl main
//! term and the remainder pipeline.

pub mod cache;
pub mod counting;
pub mod manifold;
pub mod remainder;

pub use cache::{CacheRecord, RemainderCache};
pub use counting::{
    count_report, count_total, count_type_i, count_type_ii, count_type_ii_at, count_type_ii_exact,
    main_term, main_term_coefficient, remainder_r, type_i_entries, type_ii_entries, CountReport,
    SpectrumEntry, SpectrumKind, SquaredRadius,
};
pub use manifold::{parse_r_vector, HeisenbergManifold};
pub use remainder::{
    count_from_parts, e_exact, e_exact_rational, e_exact_with, e_star, e_star_bound, e_star_float, e_star_rational,
    normalization, remainder_sample, smooth_type_ii, smooth_type_ii_exact, Precision,
    RemainderSample, type_ii_oscillation,
};
