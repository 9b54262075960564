//! The frame of rational opens of `[0,1]`, countable unions of them, and
//! presented sublocales of `[0,1]`.

pub mod enumerate;
pub mod lazy;
pub mod presented;
pub mod ratopen;

pub use enumerate::Enumerator;
pub use lazy::{lazy_cover, LazyError, LazyOpen};
pub use presented::{
    generic_is_nonempty, parse_expression, point_sublocale_meets_generic, PresentedError,
    PresentedSublocale, RoNucleus, Verdict,
};
pub use ratopen::{parse_rational, parse_real_set, Interval, IntervalError, RatOpen, RealSet, Q};
