//! Numeric building blocks shared by the analysis modules.

pub mod bessel;
pub mod ddouble;
pub mod format;
pub mod quadrature;

pub use ddouble::{compensated_sum, CompensatedSum, DoubleDouble};
pub use format::{fmt_real, json_real};
