//! Symbolic coding of linear trajectories on regular 2n-gon translation
//! surfaces: tracing cutting sequences, derivation, the Farey map with its
//! additive continued fraction, generation operators and coherence.

pub mod error;
pub mod exact_arith;
pub mod coherence;
pub mod farey;
pub mod generation;
pub mod polygon;
pub mod symbolic;
pub mod tracer;

pub use error::{Error, Result};
pub use exact_arith::{moebius_apply, Mat2, ProjectiveDirection, Scalar, Q2};
pub use farey::{Expansion, FareyMap, SectorInterval, Termination};
pub use generation::{InterpolationTable, SandwichGroup};
pub use polygon::{build_polygon, LabeledPolygon, LetterPermutation, Point};
pub use symbolic::{FiniteWord, PeriodicWord, Sequence, TransitionDiagram, WordWindow};
pub use tracer::{TraceConfig, TraceMode};
pub use coherence::{Coherence, CoherenceCondition, RenormalizationTrace, SandwichProfile};
