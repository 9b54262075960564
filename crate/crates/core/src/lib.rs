//! Finite frames, nuclei and sublocales, frame morphisms, and valuations,
//! together with an exact backend for the opens of `[0,1]`.

pub mod corpus;
pub mod demo;
pub mod frame;
pub mod interval;
pub mod io;
pub mod laws;
pub mod measure;
pub mod morphism;
pub mod report;
pub mod sublocale;

pub use frame::{build_frame, Elem, Frame, FrameError, FrameSpec, Topology, TopologySpec};
pub use morphism::{validate_morphism, FrameMorphism, MorphismError};
pub use sublocale::{validate_nucleus, Nucleus, NucleusError, Sublocale, SublocaleError};
