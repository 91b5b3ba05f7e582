//! Iota-complexes over F₂[U] and their correction terms.

mod complex;
pub mod fixtures;
mod invariants;
mod model;
mod oracle;
mod random;

pub use complex::{
    tensor, Chain, Check, Generator, GradedComplex, IotaComplex, IotaComplexBuilder,
    ValidationReport,
};
pub use invariants::{
    d_invariant, d_lower, d_results, d_upper, DResults, LowerWitness, SearchLimits, UpperWitness,
};
pub use model::{
    HomologySummary, TorsionSummand, ValidatedIota, CHECK_D_DEGREE, CHECK_D_SQUARE, CHECK_GRADING,
    CHECK_IOTA_CHAIN, CHECK_IOTA_DEGREE, CHECK_IOTA_SQUARE, CHECK_LOCALIZED,
};
pub use oracle::{brute_oracle, default_truncation, MAX_GENERATORS};
pub use random::{random_iota_complex, random_iota_complex_seeded};
