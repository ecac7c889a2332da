//! Truth-tracking by iterated belief revision, with formal models of
//! confirmation, framing and anchoring bias and a seeded generator for
//! Monte-Carlo experiments.
//!
//! Everything is finite and extensional: worlds are indices, propositions
//! are bitsets, plausibility orders are rank functions.

pub mod bias;
pub mod error;
pub mod expgen;
pub mod learning;
pub mod revision;
pub mod space;
pub mod streams;

pub use bias::{Bias, BiasedMethodSpec, CountMode, ResourceBudget, StubbornnessMap};
pub use error::{Error, Result};
pub use learning::{canonical_prior, is_identifiable, run_learner, verdict, Trajectory, Verdict};
pub use revision::{OneStepMethod, PlusMethod};
pub use space::{EpistemicSpace, ObsIndex, PlausibilityOrder, PlausibilitySpace, Proposition, WorldId};
pub use streams::{DataSequence, FramedSequence, FramingMode};
