//! Finite data sequences, soundness and completeness, generators, framing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::space::{EpistemicSpace, ObsIndex, Proposition, WorldId};

/// A finite sequence of observations, by observable index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DataSequence(pub Vec<ObsIndex>);

impl DataSequence {
    pub fn new(items: Vec<ObsIndex>) -> Self {
        DataSequence(items)
    }

    pub fn empty() -> Self {
        DataSequence(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn items(&self) -> &[ObsIndex] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = ObsIndex> + '_ {
        self.0.iter().copied()
    }

    /// Fails on the first index that does not name an observable of `space`.
    pub fn validate(&self, space: &EpistemicSpace) -> Result<()> {
        match self.0.iter().find(|o| o.0 >= space.n_observables()) {
            Some(&o) => Err(Error::ObsOutOfRange(o)),
            None => Ok(()),
        }
    }

    pub fn extensions<'a>(
        &'a self,
        space: &'a EpistemicSpace,
    ) -> impl Iterator<Item = Proposition> + 'a {
        self.0.iter().map(move |&o| space.observable(o))
    }
}

impl From<Vec<ObsIndex>> for DataSequence {
    fn from(items: Vec<ObsIndex>) -> Self {
        DataSequence(items)
    }
}

/// One observation as perceived: the observable received and the proposition
/// the agent actually revises with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Framed {
    pub origin: ObsIndex,
    pub frame: Proposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FramedSequence(pub Vec<Framed>);

impl FramedSequence {
    /// Every frame equal to its observable's extension.
    pub fn identity(space: &EpistemicSpace, seq: &DataSequence) -> Self {
        FramedSequence(
            seq.iter()
                .map(|o| Framed { origin: o, frame: space.observable(o) })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn items(&self) -> &[Framed] {
        &self.0
    }

    pub fn origins(&self) -> DataSequence {
        DataSequence(self.0.iter().map(|f| f.origin).collect())
    }

    pub fn frames(&self) -> impl Iterator<Item = Proposition> + '_ {
        self.0.iter().map(|f| f.frame)
    }

    /// Each frame is a subset of its origin observable.
    pub fn is_overconfident_framing_of(&self, space: &EpistemicSpace) -> bool {
        self.0
            .iter()
            .all(|f| f.frame.is_subset(space.observable(f.origin)))
    }

    pub fn concat(mut self, tail: FramedSequence) -> Self {
        self.0.extend(tail.0);
        self
    }
}

/// How observations are perceived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FramingMode {
    /// Frames equal the observations.
    Identity,
    /// One random subset per distinct observable, reused at every occurrence.
    Static,
    /// A fresh random subset at every position.
    #[default]
    Dynamic,
    /// Dynamic framing on the first `m` positions, identity afterwards.
    Fair(usize),
}

pub fn is_sound(space: &EpistemicSpace, seq: &DataSequence, s: WorldId) -> bool {
    seq.extensions(space).all(|p| p.contains(s))
}

pub fn is_complete(space: &EpistemicSpace, seq: &DataSequence, s: WorldId) -> bool {
    let seen: Vec<ObsIndex> = seq.iter().collect();
    space.signature(s).iter().all(|o| seen.contains(o))
}

/// Occurrences of `o` among the first `upto` positions.
pub fn count_occurrences(seq: &DataSequence, upto: usize, o: ObsIndex) -> usize {
    seq.0[..upto.min(seq.len())].iter().filter(|&&x| x == o).count()
}

fn nonempty_signature(space: &EpistemicSpace, s: WorldId) -> Result<Vec<ObsIndex>> {
    space.check_world(s)?;
    let sig = space.signature(s);
    if sig.is_empty() {
        return Err(Error::EmptySignature(s));
    }
    Ok(sig)
}

/// A shuffled sequence of length `|observables| + extra` that contains every
/// observable true at `s` and nothing false at `s`. Filler positions are drawn
/// uniformly from the signature of `s`.
pub fn generate_sound_complete<R: Rng + ?Sized>(
    space: &EpistemicSpace,
    s: WorldId,
    extra: usize,
    rng: &mut R,
) -> Result<DataSequence> {
    let sig = nonempty_signature(space, s)?;
    let len = space.n_observables() + extra;
    let mut items = sig.clone();
    while items.len() < len {
        items.push(*sig.choose(rng).expect("signature is non-empty"));
    }
    items.shuffle(rng);
    Ok(DataSequence(items))
}

/// A shuffled sequence holding every observable true at `s` exactly
/// `min_repeats` times.
pub fn generate_fat<R: Rng + ?Sized>(
    space: &EpistemicSpace,
    s: WorldId,
    min_repeats: usize,
    rng: &mut R,
) -> Result<DataSequence> {
    if min_repeats == 0 {
        return Err(Error::InvalidConfig("min_repeats must be at least 1".into()));
    }
    let sig = nonempty_signature(space, s)?;
    let mut items: Vec<ObsIndex> = sig
        .iter()
        .flat_map(|&o| std::iter::repeat_n(o, min_repeats))
        .collect();
    items.shuffle(rng);
    Ok(DataSequence(items))
}

/// Uniform over all subsets of `p`, the empty set included.
pub fn random_subset<R: Rng + ?Sized>(p: Proposition, rng: &mut R) -> Proposition {
    p.iter().filter(|_| rng.gen_bool(0.5)).collect()
}

pub fn frame_sequence<R: Rng + ?Sized>(
    space: &EpistemicSpace,
    seq: &DataSequence,
    mode: FramingMode,
    rng: &mut R,
) -> FramedSequence {
    let mut static_frames: Vec<Option<Proposition>> = vec![None; space.n_observables()];
    let items = seq
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let ext = space.observable(o);
            let frame = match mode {
                FramingMode::Identity => ext,
                FramingMode::Dynamic => random_subset(ext, rng),
                FramingMode::Fair(m) if i < m => random_subset(ext, rng),
                FramingMode::Fair(_) => ext,
                FramingMode::Static => {
                    *static_frames[o.0].get_or_insert_with(|| random_subset(ext, rng))
                }
            };
            Framed { origin: o, frame }
        })
        .collect();
    FramedSequence(items)
}
