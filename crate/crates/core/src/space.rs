//! Finite epistemic spaces, propositions and plausibility orders.
//!
//! Propositions are extensional: a proposition is the set of worlds where it
//! is true, stored as a 64-bit mask. A plausibility order is a total preorder
//! encoded as a rank function (lower rank = more plausible) over a surviving
//! domain; worlds outside the domain carry no rank.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest number of worlds a space may hold.
pub const MAX_WORLDS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldId(pub usize);

impl fmt::Display for WorldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position of an observable in [`EpistemicSpace::observables`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObsIndex(pub usize);

impl fmt::Display for ObsIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of worlds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Proposition(u64);

impl Proposition {
    pub const EMPTY: Proposition = Proposition(0);

    pub const fn from_bits(bits: u64) -> Self {
        Proposition(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// All worlds `0..n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_WORLDS);
        if n >= 64 {
            Proposition(u64::MAX)
        } else {
            Proposition((1u64 << n) - 1)
        }
    }

    pub fn singleton(w: WorldId) -> Self {
        Proposition(1u64 << w.0)
    }

    pub fn contains(self, w: WorldId) -> bool {
        w.0 < 64 && self.0 & (1u64 << w.0) != 0
    }

    pub fn insert(&mut self, w: WorldId) {
        self.0 |= 1u64 << w.0;
    }

    pub fn remove(&mut self, w: WorldId) {
        self.0 &= !(1u64 << w.0);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Proposition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: Proposition) -> Self {
        Proposition(self.0 & other.0)
    }

    pub fn union(self, other: Proposition) -> Self {
        Proposition(self.0 | other.0)
    }

    pub fn difference(self, other: Proposition) -> Self {
        Proposition(self.0 & !other.0)
    }

    /// Complement relative to the worlds `0..n`.
    pub fn complement(self, n: usize) -> Self {
        Proposition(!self.0 & Proposition::full(n).0)
    }

    /// The unique member, if the proposition is a singleton.
    pub fn single(self) -> Option<WorldId> {
        (self.len() == 1).then(|| WorldId(self.0.trailing_zeros() as usize))
    }

    pub fn iter(self) -> Worlds {
        Worlds(self.0)
    }
}

impl FromIterator<WorldId> for Proposition {
    fn from_iter<I: IntoIterator<Item = WorldId>>(iter: I) -> Self {
        let mut p = Proposition::EMPTY;
        for w in iter {
            p.insert(w);
        }
        p
    }
}

impl IntoIterator for Proposition {
    type Item = WorldId;
    type IntoIter = Worlds;

    fn into_iter(self) -> Worlds {
        self.iter()
    }
}

impl BitAnd for Proposition {
    type Output = Proposition;

    fn bitand(self, rhs: Proposition) -> Proposition {
        self.intersection(rhs)
    }
}

impl BitOr for Proposition {
    type Output = Proposition;

    fn bitor(self, rhs: Proposition) -> Proposition {
        self.union(rhs)
    }
}

impl Not for Proposition {
    type Output = Proposition;

    fn not(self) -> Proposition {
        Proposition(!self.0)
    }
}

impl fmt::Debug for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|w| w.0)).finish()
    }
}

/// Iterator over the members of a [`Proposition`], ascending.
#[derive(Debug, Clone)]
pub struct Worlds(u64);

impl Iterator for Worlds {
    type Item = WorldId;

    fn next(&mut self) -> Option<WorldId> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(WorldId(i))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Worlds {}

/// A finite set of worlds together with the observable propositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpistemicSpace {
    n_states: usize,
    observables: Vec<Proposition>,
}

impl EpistemicSpace {
    /// Observables must be non-empty, inside `0..n_states`, and pairwise
    /// distinct as sets.
    pub fn new(n_states: usize, observables: Vec<Proposition>) -> Result<Self> {
        if n_states == 0 {
            return Err(Error::NoWorlds);
        }
        if n_states > MAX_WORLDS {
            return Err(Error::TooManyWorlds { n: n_states, max: MAX_WORLDS });
        }
        let all = Proposition::full(n_states);
        for (i, o) in observables.iter().enumerate() {
            if o.is_empty() {
                return Err(Error::EmptyObservable { index: i });
            }
            if !o.is_subset(all) {
                return Err(Error::ObservableOutOfRange { index: i });
            }
            if let Some(j) = observables[..i].iter().position(|prev| prev == o) {
                return Err(Error::DuplicateObservable { first: j, second: i });
            }
        }
        Ok(EpistemicSpace { n_states, observables })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_observables(&self) -> usize {
        self.observables.len()
    }

    pub fn observables(&self) -> &[Proposition] {
        &self.observables
    }

    /// Extension of an observable. Panics on an index outside the space.
    pub fn observable(&self, o: ObsIndex) -> Proposition {
        self.observables[o.0]
    }

    pub fn worlds(&self) -> Proposition {
        Proposition::full(self.n_states)
    }

    /// Indices of the observables true at `s`, ascending.
    pub fn signature(&self, s: WorldId) -> Vec<ObsIndex> {
        self.observables
            .iter()
            .enumerate()
            .filter(|(_, o)| o.contains(s))
            .map(|(i, _)| ObsIndex(i))
            .collect()
    }

    pub fn index_of(&self, p: Proposition) -> Option<ObsIndex> {
        self.observables.iter().position(|&o| o == p).map(ObsIndex)
    }

    pub fn check_world(&self, s: WorldId) -> Result<()> {
        if s.0 < self.n_states {
            Ok(())
        } else {
            Err(Error::WorldOutOfRange(s))
        }
    }
}

/// A total preorder over a subset of the worlds, stored as ranks.
///
/// Orders produced by this crate always have contiguous ranks starting at 0,
/// so two orders induce the same preorder iff they compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlausibilityOrder {
    ranks: Vec<Option<usize>>,
}

impl PlausibilityOrder {
    /// Builds an order from per-world ranks (`None` = outside the domain),
    /// compacting them to be contiguous from 0.
    pub fn from_ranks(ranks: Vec<Option<usize>>) -> Self {
        PlausibilityOrder { ranks }.normalize_ranks()
    }

    /// Keeps the ranks exactly as given, gaps included.
    pub fn from_raw_ranks(ranks: Vec<Option<usize>>) -> Self {
        PlausibilityOrder { ranks }
    }

    /// Every world of `domain` at rank 0.
    pub fn flat(n_states: usize, domain: Proposition) -> Self {
        let ranks = (0..n_states)
            .map(|i| domain.contains(WorldId(i)).then_some(0))
            .collect();
        PlausibilityOrder { ranks }
    }

    /// Strict order listing worlds from most to least plausible. Worlds not
    /// listed are outside the domain.
    pub fn linear(n_states: usize, most_plausible_first: &[WorldId]) -> Self {
        let mut ranks = vec![None; n_states];
        for (r, w) in most_plausible_first.iter().enumerate() {
            ranks[w.0] = Some(r);
        }
        PlausibilityOrder { ranks }.normalize_ranks()
    }

    pub fn n_states(&self) -> usize {
        self.ranks.len()
    }

    pub fn ranks(&self) -> &[Option<usize>] {
        &self.ranks
    }

    pub fn rank(&self, w: WorldId) -> Option<usize> {
        self.ranks.get(w.0).copied().flatten()
    }

    pub fn domain(&self) -> Proposition {
        self.ranks
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_some())
            .map(|(i, _)| WorldId(i))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.iter().all(Option::is_none)
    }

    pub fn max_rank(&self) -> Option<usize> {
        self.ranks.iter().flatten().copied().max()
    }

    /// `u ⪯ v`; false when either world is outside the domain.
    pub fn precedes(&self, u: WorldId, v: WorldId) -> bool {
        matches!((self.rank(u), self.rank(v)), (Some(a), Some(b)) if a <= b)
    }

    /// True when every rank in `0..=max_rank` is used.
    pub fn is_normalized(&self) -> bool {
        match self.max_rank() {
            None => true,
            Some(m) => {
                let mut seen = vec![false; m + 1];
                for r in self.ranks.iter().flatten() {
                    seen[*r] = true;
                }
                seen.into_iter().all(|b| b)
            }
        }
    }

    /// Same domain and preorder, ranks remapped onto `0..k`.
    pub fn normalize_ranks(&self) -> Self {
        let mut distinct: Vec<usize> = self.ranks.iter().flatten().copied().collect();
        distinct.sort_unstable();
        distinct.dedup();
        let ranks = self
            .ranks
            .iter()
            .map(|r| r.map(|r| distinct.binary_search(&r).expect("rank collected above")))
            .collect();
        PlausibilityOrder { ranks }
    }

    /// The most plausible worlds of `domain ∩ restrict`; empty when that
    /// intersection is empty.
    pub fn min_worlds(&self, restrict: Proposition) -> Proposition {
        let mut best = usize::MAX;
        let mut out = Proposition::EMPTY;
        for (i, r) in self.ranks.iter().enumerate() {
            let w = WorldId(i);
            let Some(r) = *r else { continue };
            if !restrict.contains(w) {
                continue;
            }
            if r < best {
                best = r;
                out = Proposition::singleton(w);
            } else if r == best {
                out.insert(w);
            }
        }
        out
    }

    /// The most plausible worlds of the whole domain.
    pub fn minimal(&self) -> Proposition {
        self.min_worlds(!Proposition::EMPTY)
    }

    /// Drops every world outside `p`, keeping the order among survivors.
    pub fn restrict(&self, p: Proposition) -> Self {
        let ranks = self
            .ranks
            .iter()
            .enumerate()
            .map(|(i, r)| r.filter(|_| p.contains(WorldId(i))))
            .collect();
        PlausibilityOrder { ranks }.normalize_ranks()
    }

    /// Places the domain worlds of `block` strictly before all other domain
    /// worlds, preserving the order inside each part.
    pub fn promote(&self, block: Proposition) -> Self {
        let offset = self.ranks.len() + 1;
        let ranks = self
            .ranks
            .iter()
            .enumerate()
            .map(|(i, r)| r.map(|r| if block.contains(WorldId(i)) { r } else { r + offset }))
            .collect();
        PlausibilityOrder { ranks }.normalize_ranks()
    }

    /// Makes `x` the unique most plausible world; the rest keep their
    /// relative order.
    pub fn upgrade(&self, x: WorldId) -> Result<Self> {
        if self.rank(x).is_none() {
            return Err(Error::WorldNotInDomain(x));
        }
        Ok(self.promote(Proposition::singleton(x)))
    }
}

impl fmt::Debug for PlausibilityOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.ranks
                    .iter()
                    .enumerate()
                    .filter_map(|(i, r)| r.map(|r| (i, r))),
            )
            .finish()
    }
}

/// An epistemic space with a plausibility order on its surviving worlds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlausibilitySpace {
    space: Arc<EpistemicSpace>,
    order: PlausibilityOrder,
}

impl PlausibilitySpace {
    pub fn new(space: impl Into<Arc<EpistemicSpace>>, order: PlausibilityOrder) -> Result<Self> {
        let space = space.into();
        if order.n_states() != space.n_states() {
            return Err(Error::OrderSizeMismatch {
                expected: space.n_states(),
                found: order.n_states(),
            });
        }
        Ok(PlausibilitySpace { space, order })
    }

    /// All worlds equiplausible.
    pub fn flat(space: impl Into<Arc<EpistemicSpace>>) -> Self {
        let space = space.into();
        let order = PlausibilityOrder::flat(space.n_states(), space.worlds());
        PlausibilitySpace { space, order }
    }

    pub fn space(&self) -> &EpistemicSpace {
        &self.space
    }

    pub fn shared_space(&self) -> &Arc<EpistemicSpace> {
        &self.space
    }

    pub fn order(&self) -> &PlausibilityOrder {
        &self.order
    }

    pub fn domain(&self) -> Proposition {
        self.order.domain()
    }

    /// The current conjecture: the most plausible surviving worlds.
    pub fn conjecture(&self) -> Proposition {
        self.order.minimal()
    }

    /// `p` holds in every most plausible world (vacuous on an empty domain).
    pub fn believes(&self, p: Proposition) -> bool {
        self.conjecture().is_subset(p)
    }

    pub(crate) fn with_order(&self, order: PlausibilityOrder) -> Self {
        debug_assert_eq!(order.n_states(), self.space.n_states());
        PlausibilitySpace { space: Arc::clone(&self.space), order }
    }
}
