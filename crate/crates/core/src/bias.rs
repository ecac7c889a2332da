//! Biased iterated revision: confirmation bias (stubbornness thresholds),
//! framing bias (revising with a perceived subset of the observation),
//! anchoring bias (minimal change with a forced unique favourite), and a
//! halving resource budget that can wrap any of them.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::revision::OneStepMethod;
use crate::space::{ObsIndex, PlausibilitySpace};
use crate::streams::{count_occurrences, DataSequence, FramedSequence, FramingMode};

/// Per-observable number of occurrences required before a revision with
/// that observable fires. Unlisted observables have threshold 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StubbornnessMap {
    thresholds: Vec<usize>,
}

impl StubbornnessMap {
    pub fn new(thresholds: Vec<usize>) -> Result<Self> {
        if let Some(i) = thresholds.iter().position(|&d| d == 0) {
            return Err(Error::InvalidConfig(format!(
                "stubbornness of observable {i} must be at least 1"
            )));
        }
        Ok(StubbornnessMap { thresholds })
    }

    /// The same threshold for the first `n_observables` observables.
    pub fn uniform(n_observables: usize, threshold: usize) -> Result<Self> {
        StubbornnessMap::new(vec![threshold; n_observables])
    }

    /// Thresholds drawn uniformly from `lo..=hi`.
    pub fn random<R: Rng + ?Sized>(n_observables: usize, lo: usize, hi: usize, rng: &mut R) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::InvalidConfig(format!("bad stubbornness range {lo}..={hi}")));
        }
        Ok(StubbornnessMap {
            thresholds: (0..n_observables).map(|_| rng.gen_range(lo..=hi)).collect(),
        })
    }

    pub fn threshold(&self, o: ObsIndex) -> usize {
        self.thresholds.get(o.0).copied().unwrap_or(1)
    }

    pub fn thresholds(&self) -> &[usize] {
        &self.thresholds
    }
}

/// Whether the observation being processed counts toward its own
/// occurrence total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CountMode {
    /// Count positions `0..=i`: with every threshold at 1 the agent revises
    /// on the first occurrence.
    #[default]
    Inclusive,
    /// Count positions `0..i` only.
    Strict,
}

impl FromStr for CountMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inclusive" => Ok(CountMode::Inclusive),
            "strict" => Ok(CountMode::Strict),
            other => Err(Error::InvalidConfig(format!("unknown count mode {other:?}"))),
        }
    }
}

/// Revision allowance that halves after every executed revision. Revising
/// stops once the remainder drops below `floor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceBudget {
    remaining: f64,
    floor: f64,
}

impl Default for ResourceBudget {
    fn default() -> Self {
        ResourceBudget { remaining: 100.0, floor: 1.0 }
    }
}

impl ResourceBudget {
    pub fn new(initial: f64, floor: f64) -> Result<Self> {
        if !(initial >= 0.0 && initial.is_finite()) || !(floor > 0.0 && floor.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "budget needs initial >= 0 and floor > 0, got {initial} / {floor}"
            )));
        }
        Ok(ResourceBudget { remaining: initial, floor })
    }

    pub fn remaining(&self) -> f64 {
        self.remaining
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn can_revise(&self) -> bool {
        self.remaining >= self.floor
    }

    pub fn is_exhausted(&self) -> bool {
        !self.can_revise()
    }

    fn consume(&mut self) {
        self.remaining /= 2.0;
    }

    /// Number of revisions a fresh budget allows: `⌊log₂(initial/floor)⌋ + 1`
    /// when `initial ≥ floor`, else 0.
    pub fn max_revisions(&self) -> usize {
        let mut b = *self;
        let mut n = 0;
        while b.can_revise() {
            b.consume();
            n += 1;
        }
        n
    }
}

/// One observation's worth of revision. Returns the next state when a
/// one-step revision was executed, `None` when the observation was ignored.
pub trait Step {
    fn step(&mut self, ps: &PlausibilitySpace, position: usize) -> Option<PlausibilitySpace>;
}

impl<F> Step for F
where
    F: FnMut(&PlausibilitySpace, usize) -> Option<PlausibilitySpace>,
{
    fn step(&mut self, ps: &PlausibilitySpace, position: usize) -> Option<PlausibilitySpace> {
        self(ps, position)
    }
}

/// A step function throttled by a [`ResourceBudget`].
#[derive(Debug, Clone)]
pub struct Budgeted<S> {
    inner: S,
    budget: ResourceBudget,
}

impl<S> Budgeted<S> {
    pub fn budget(&self) -> &ResourceBudget {
        &self.budget
    }
}

impl<S: Step> Step for Budgeted<S> {
    fn step(&mut self, ps: &PlausibilitySpace, position: usize) -> Option<PlausibilitySpace> {
        if !self.budget.can_revise() {
            return None;
        }
        let out = self.inner.step(ps, position);
        if out.is_some() {
            self.budget.consume();
        }
        out
    }
}

/// Ignores observations once the budget is below its floor; only executed
/// revisions consume budget.
pub fn with_budget<S: Step>(inner: S, budget: ResourceBudget) -> Budgeted<S> {
    Budgeted { inner, budget }
}

/// Applies `step` at positions `0..len`, carrying the state over skipped
/// observations.
pub fn fold_steps<S: Step>(step: &mut S, ps: &PlausibilitySpace, len: usize) -> PlausibilitySpace {
    (0..len).fold(ps.clone(), |acc, i| step.step(&acc, i).unwrap_or(acc))
}

pub fn unbiased_step<'a>(
    base: OneStepMethod,
    seq: &'a DataSequence,
) -> impl FnMut(&PlausibilitySpace, usize) -> Option<PlausibilitySpace> + 'a {
    move |ps, i| Some(base.apply(ps, ps.space().observable(seq.0[i])))
}

pub fn cb_step<'a>(
    base: OneStepMethod,
    seq: &'a DataSequence,
    stubbornness: &'a StubbornnessMap,
    mode: CountMode,
) -> impl FnMut(&PlausibilitySpace, usize) -> Option<PlausibilitySpace> + 'a {
    move |ps, i| {
        let o = seq.0[i];
        let upto = match mode {
            CountMode::Inclusive => i + 1,
            CountMode::Strict => i,
        };
        (count_occurrences(seq, upto, o) >= stubbornness.threshold(o))
            .then(|| base.apply(ps, ps.space().observable(o)))
    }
}

pub fn fr_step<'a>(
    base: OneStepMethod,
    fseq: &'a FramedSequence,
) -> impl FnMut(&PlausibilitySpace, usize) -> Option<PlausibilitySpace> + 'a {
    move |ps, i| Some(base.apply(ps, fseq.0[i].frame))
}

pub fn ab_step<'a, R: Rng + ?Sized>(
    base: OneStepMethod,
    seq: &'a DataSequence,
    rng: &'a mut R,
) -> impl FnMut(&PlausibilitySpace, usize) -> Option<PlausibilitySpace> + 'a {
    move |ps, i| {
        let p = ps.space().observable(seq.0[i]);
        let anchor = ps.order().min_worlds(p);
        Some(base.plus().apply(ps, anchor, rng))
    }
}

/// Confirmation-biased iteration: an observation is acted on only once it
/// has occurred at least as often as its stubbornness threshold.
pub fn revise_cb(
    base: OneStepMethod,
    ps: &PlausibilitySpace,
    seq: &DataSequence,
    stubbornness: &StubbornnessMap,
    mode: CountMode,
) -> PlausibilitySpace {
    fold_steps(&mut cb_step(base, seq, stubbornness, mode), ps, seq.len())
}

/// Framing-biased iteration: revise with the perceived frames.
pub fn revise_fr(base: OneStepMethod, ps: &PlausibilitySpace, fseq: &FramedSequence) -> PlausibilitySpace {
    fold_steps(&mut fr_step(base, fseq), ps, fseq.len())
}

/// Anchoring-biased iteration: each observation is replaced by its most
/// plausible worlds, and the upgraded operator forces a unique favourite.
pub fn revise_ab<R: Rng + ?Sized>(
    base: OneStepMethod,
    ps: &PlausibilitySpace,
    seq: &DataSequence,
    rng: &mut R,
) -> PlausibilitySpace {
    fold_steps(&mut ab_step(base, seq, rng), ps, seq.len())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub enum Bias {
    #[default]
    None,
    Confirmation {
        stubbornness: StubbornnessMap,
        mode: CountMode,
    },
    Framing(FramingMode),
    Anchoring,
}

impl Bias {
    pub fn label(&self) -> &'static str {
        match self {
            Bias::None => "none",
            Bias::Confirmation { .. } => "cb",
            Bias::Framing(_) => "fr",
            Bias::Anchoring => "ab",
        }
    }
}

/// A revision operator, an optional bias, and an optional budget.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasedMethodSpec {
    pub base: OneStepMethod,
    pub bias: Bias,
    pub budget: Option<ResourceBudget>,
}

impl BiasedMethodSpec {
    pub fn unbiased(base: OneStepMethod) -> Self {
        BiasedMethodSpec { base, bias: Bias::None, budget: None }
    }

    pub fn with_bias(base: OneStepMethod, bias: Bias) -> Self {
        BiasedMethodSpec { base, bias, budget: None }
    }

    pub fn budgeted(mut self, budget: ResourceBudget) -> Self {
        self.budget = Some(budget);
        self
    }

    /// e.g. `lex`, `mini_ab`, `cond_cb-res`.
    pub fn label(&self) -> String {
        let mut s = self.base.name().to_string();
        if self.bias != Bias::None {
            s.push('_');
            s.push_str(self.bias.label());
        }
        if self.budget.is_some() {
            s.push_str("-res");
        }
        s
    }
}

impl fmt::Display for BiasedMethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
