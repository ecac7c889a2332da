use thiserror::Error;

use crate::space::{ObsIndex, WorldId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("an epistemic space needs at least one world")]
    NoWorlds,
    #[error("{n} worlds requested, at most {max} are supported")]
    TooManyWorlds { n: usize, max: usize },
    #[error("observable {index} is the empty proposition")]
    EmptyObservable { index: usize },
    #[error("observable {index} mentions a world outside the space")]
    ObservableOutOfRange { index: usize },
    #[error("observables {first} and {second} have the same extension")]
    DuplicateObservable { first: usize, second: usize },
    #[error("order covers {found} worlds but the space has {expected}")]
    OrderSizeMismatch { expected: usize, found: usize },
    #[error("world {0} is not in the domain of the order")]
    WorldNotInDomain(WorldId),
    #[error("world {0} is outside the space")]
    WorldOutOfRange(WorldId),
    #[error("observable index {0} is outside the space")]
    ObsOutOfRange(ObsIndex),
    #[error("world {0} satisfies no observable, so no sound stream exists for it")]
    EmptySignature(WorldId),
    #[error("{n_observables} distinct non-empty observables cannot be drawn over {n_states} worlds")]
    InsufficientPropositions { n_states: usize, n_observables: usize },
    #[error("no space covering every world was drawn within {attempts} attempts")]
    CoverageRetriesExhausted { attempts: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
