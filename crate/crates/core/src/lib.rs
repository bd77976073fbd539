//! Exact computation of the branching orbit set of a point under the maps
//! `x -> b*x - i`, its transition matrix, the Perron eigenvalue, and the
//! Hausdorff dimension and growth rate of the set of `b`-expansions.
//!
//! The base `b` is a real algebraic number given by a monic integer
//! polynomial; all points live in `Q(b)` and are handled exactly.

pub mod error;
pub mod expansion;
pub mod interval;
pub mod number_field;
pub mod orbit;
pub mod poly;
pub mod spacing;
pub mod spectral;

pub use error::{Error, Result};
pub use expansion::{
    BranchSet, Digit, DigitWord, ExpansionParams, ExpansionRule, ExpansionRun, IntervalTable, RulePiece,
};
pub use interval::Interval;
pub use number_field::{FieldElement, NumberField, PisotCertificate, PisotStatus};
pub use orbit::{
    compute_orbit, count_prefixes_matrix, density_diagnostic, orbit_level, transition_matrix, Cap, DensityReport,
    DivergenceReport, Edge, OrbitDocument, OrbitGraph, OrbitOutcome, TransitionMatrix,
};
pub use poly::{IntPolynomial, QPoly};
pub use spacing::{
    enumerate_levels, enumerate_spectrum, gap_stats, separation_evidence, GapStats, SeparationEvidence, SpectrumLevel,
};
pub use spectral::{
    char_polynomial, check_condition1, dimension, growth_band, growth_band_range, perron_eigenvalue, Condition1Report,
    Condition1Status, DimensionResult, GrowthBand, PerronResult, SpectralReport,
};

/// Arbitrary-precision rational in canonical form.
pub type Rational = num_rational::BigRational;
