//! Learners driven by (biased) belief revision, finite-horizon verdicts,
//! the identifiability test for finite spaces, and the canonical prior.

use rand::Rng;

use crate::bias::{ab_step, cb_step, fr_step, unbiased_step, with_budget, Bias, BiasedMethodSpec, ResourceBudget, Step};
use crate::revision::OneStepMethod;
use crate::space::{EpistemicSpace, ObsIndex, PlausibilityOrder, PlausibilitySpace, Proposition, WorldId};
use crate::streams::{frame_sequence, DataSequence, FramedSequence};

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStep {
    /// Number of observations consumed.
    pub position: usize,
    pub conjecture: Proposition,
    /// Whether a one-step revision was executed on this observation.
    pub revised: bool,
    pub budget_remaining: Option<f64>,
}

/// The conjectures of a learner, one per prefix of the input.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    pub final_state: PlausibilitySpace,
    /// A budget was attached and ended below its floor.
    pub budget_exhausted: bool,
}

impl Trajectory {
    pub fn conjectures(&self) -> impl Iterator<Item = Proposition> + '_ {
        self.steps.iter().map(|s| s.conjecture)
    }

    pub fn final_conjecture(&self) -> Proposition {
        self.steps.last().expect("trajectory holds the initial step").conjecture
    }

    pub fn revisions_executed(&self) -> usize {
        self.steps.iter().filter(|s| s.revised).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub success: bool,
    /// First position from which every conjecture is the actual world alone.
    pub converge_step: Option<usize>,
    pub revisions_executed: usize,
}

fn record<S: Step>(
    step: &mut S,
    ps0: &PlausibilitySpace,
    len: usize,
    remaining: impl Fn(&S) -> Option<f64>,
) -> (Vec<TrajectoryStep>, PlausibilitySpace) {
    let mut steps = Vec::with_capacity(len + 1);
    steps.push(TrajectoryStep {
        position: 0,
        conjecture: ps0.conjecture(),
        revised: false,
        budget_remaining: remaining(step),
    });
    let mut ps = ps0.clone();
    for i in 0..len {
        let revised = match step.step(&ps, i) {
            Some(next) => {
                ps = next;
                true
            }
            None => false,
        };
        steps.push(TrajectoryStep {
            position: i + 1,
            conjecture: ps.conjecture(),
            revised,
            budget_remaining: remaining(step),
        });
    }
    (steps, ps)
}

fn trace<S: Step>(step: S, ps0: &PlausibilitySpace, len: usize, budget: Option<ResourceBudget>) -> Trajectory {
    match budget {
        None => {
            let mut step = step;
            let (steps, final_state) = record(&mut step, ps0, len, |_| None);
            Trajectory { steps, final_state, budget_exhausted: false }
        }
        Some(b) => {
            let mut step = with_budget(step, b);
            let (steps, final_state) = record(&mut step, ps0, len, |s| Some(s.budget().remaining()));
            let exhausted = step.budget().is_exhausted();
            Trajectory { steps, final_state, budget_exhausted: exhausted }
        }
    }
}

/// Runs the configured learner over `seq`, recording the conjecture after
/// every observation. Framing (when configured) is drawn from `rng` before
/// revising; anchoring draws its tie-breaks from `rng` as it goes.
pub fn run_learner<R: Rng + ?Sized>(
    spec: &BiasedMethodSpec,
    ps0: &PlausibilitySpace,
    seq: &DataSequence,
    rng: &mut R,
) -> Trajectory {
    let n = seq.len();
    match &spec.bias {
        Bias::None => trace(unbiased_step(spec.base, seq), ps0, n, spec.budget),
        Bias::Confirmation { stubbornness, mode } => {
            trace(cb_step(spec.base, seq, stubbornness, *mode), ps0, n, spec.budget)
        }
        Bias::Framing(mode) => {
            let framed = frame_sequence(ps0.space(), seq, *mode, rng);
            run_framed(spec.base, ps0, &framed, spec.budget)
        }
        Bias::Anchoring => trace(ab_step(spec.base, seq, rng), ps0, n, spec.budget),
    }
}

/// A framing-biased learner over an already framed sequence.
pub fn run_framed(
    base: OneStepMethod,
    ps0: &PlausibilitySpace,
    fseq: &FramedSequence,
    budget: Option<ResourceBudget>,
) -> Trajectory {
    trace(fr_step(base, fseq), ps0, fseq.len(), budget)
}

/// Success means the last conjecture is exactly `{actual}`.
pub fn verdict(traj: &Trajectory, actual: WorldId) -> Verdict {
    let target = Proposition::singleton(actual);
    let tail = traj
        .steps
        .iter()
        .rev()
        .take_while(|s| s.conjecture == target)
        .last();
    Verdict {
        success: tail.is_some(),
        converge_step: tail.map(|s| s.position),
        revisions_executed: traj.revisions_executed(),
    }
}

/// A finite space is identifiable in the limit iff no two worlds satisfy
/// exactly the same observables.
///
/// Sufficiency: under conditioning with [`canonical_prior`], the survivors
/// of a sound and complete sequence for `s` are the worlds whose signature
/// contains that of `s`, and the prior ranks `s` strictly first among them.
/// Necessity: two worlds with equal signatures receive identical data.
pub fn is_identifiable(space: &EpistemicSpace) -> bool {
    let sigs: Vec<Vec<ObsIndex>> = (0..space.n_states()).map(|i| space.signature(WorldId(i))).collect();
    sigs.iter()
        .enumerate()
        .all(|(i, a)| sigs[i + 1..].iter().all(|b| a != b))
}

/// A strict linear prior that ranks `u` before `v` whenever the signature of
/// `u` is a proper subset of that of `v`. Among worlds whose constraints are
/// satisfied, the lowest index goes first.
pub fn canonical_prior(space: &EpistemicSpace) -> PlausibilityOrder {
    let n = space.n_states();
    let sigs: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            let mut v = vec![false; space.n_observables()];
            for o in space.signature(WorldId(i)) {
                v[o.0] = true;
            }
            v
        })
        .collect();
    let proper_subset = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(x, y)| !x || *y) && a != b;

    let mut blockers: Vec<usize> = (0..n)
        .map(|v| (0..n).filter(|&u| proper_subset(&sigs[u], &sigs[v])).count())
        .collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .find(|&v| !placed[v] && blockers[v] == 0)
            .expect("proper inclusion is acyclic");
        placed[next] = true;
        order.push(WorldId(next));
        for v in 0..n {
            if proper_subset(&sigs[next], &sigs[v]) {
                blockers[v] -= 1;
            }
        }
    }
    PlausibilityOrder::linear(n, &order)
}
