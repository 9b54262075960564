//! Valuations, outer measure of sublocales, and measure reduction, on finite
//! frames and on `[0,1]`.
//!
//! Finite regular frames are exactly the finite Boolean algebras, so the
//! exact finite engine is exercised on Boolean frames; the non-Boolean
//! behaviour lives on `[0,1]`, where answers are certified bounds.

pub mod finite;
pub mod interval;

pub use finite::{
    mu_reduce, null_partner, reduced_algebra, reduction_nucleus, validate_valuation,
    FiniteMeasureError, NullPartner, ReducedAlgebra, ReducedSublocale, Valuation, ValuationError,
};
pub use interval::{
    default_tolerance, measure_bounds, measure_open, strict_additivity_check, Descriptor,
    IntervalReduction, MeasureBounds, MeasureError,
};
