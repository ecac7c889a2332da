//! Seeded generation of random trials: a random epistemic space, a random
//! prior, an actual world and a sound and complete sequence for it.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bias::StubbornnessMap;
use crate::error::{Error, Result};
use crate::space::{EpistemicSpace, PlausibilityOrder, PlausibilitySpace, Proposition, WorldId, MAX_WORLDS};
use crate::streams::{generate_sound_complete, DataSequence};

/// Attempts at drawing a space in which every world satisfies some observable.
pub const COVERAGE_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub n_states: usize,
    pub n_observables: usize,
    /// Inclusive range for how much longer than `n_observables` a sequence is.
    pub extra_len: (usize, usize),
    /// Inclusive range of stubbornness thresholds.
    pub stubbornness_range: (usize, usize),
    pub trials: usize,
    pub master_seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n_states: 5,
            n_observables: 12,
            extra_len: (2, 4),
            stubbornness_range: (1, 5),
            trials: 200,
            master_seed: 0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_states == 0 {
            return Err(Error::NoWorlds);
        }
        if self.n_states > MAX_WORLDS {
            return Err(Error::TooManyWorlds { n: self.n_states, max: MAX_WORLDS });
        }
        if self.n_observables == 0 {
            return Err(Error::InvalidConfig("n_observables must be at least 1".into()));
        }
        if self.extra_len.0 > self.extra_len.1 {
            return Err(Error::InvalidConfig(format!("empty extra_len range {:?}", self.extra_len)));
        }
        let (lo, hi) = self.stubbornness_range;
        if lo == 0 || lo > hi {
            return Err(Error::InvalidConfig(format!("bad stubbornness range {lo}..={hi}")));
        }
        Ok(())
    }
}

/// Everything one trial needs; shared by every method compared on it.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialInputs {
    pub space: Arc<EpistemicSpace>,
    pub prior: PlausibilityOrder,
    pub actual: WorldId,
    pub seq: DataSequence,
    pub stubbornness: StubbornnessMap,
    pub trial_seed: u64,
}

impl TrialInputs {
    pub fn plausibility_space(&self) -> PlausibilitySpace {
        PlausibilitySpace::new(Arc::clone(&self.space), self.prior.clone())
            .expect("prior is generated over the space")
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent seed for stream `index` of `seed`.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x632b_e59b_d9b4_e019)))
}

/// A stable seed for a named sub-stream (e.g. one method within a trial).
pub fn mix_seed_str(seed: u64, name: &str) -> u64 {
    // FNV-1a
    let h = name
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    mix_seed(seed, h)
}

fn random_nonempty<R: Rng + ?Sized>(n_states: usize, rng: &mut R) -> Proposition {
    let all = Proposition::full(n_states).bits();
    loop {
        let bits = rng.gen::<u64>() & all;
        if bits != 0 {
            return Proposition::from_bits(bits);
        }
    }
}

/// `n_observables` distinct non-empty propositions drawn uniformly, such that
/// every world satisfies at least one of them.
pub fn random_space<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> Result<EpistemicSpace> {
    cfg.validate()?;
    let n = cfg.n_states;
    let available = if n >= 64 { u128::MAX } else { (1u128 << n) - 1 };
    if (cfg.n_observables as u128) > available {
        return Err(Error::InsufficientPropositions { n_states: n, n_observables: cfg.n_observables });
    }
    let all = Proposition::full(n);
    for _ in 0..COVERAGE_ATTEMPTS {
        let mut obs: Vec<Proposition> = Vec::with_capacity(cfg.n_observables);
        while obs.len() < cfg.n_observables {
            let p = random_nonempty(n, rng);
            if !obs.contains(&p) {
                obs.push(p);
            }
        }
        let covered = obs.iter().fold(Proposition::EMPTY, |acc, &p| acc | p);
        if covered == all {
            return EpistemicSpace::new(n, obs);
        }
    }
    Err(Error::CoverageRetriesExhausted { attempts: COVERAGE_ATTEMPTS })
}

/// Independent uniform ranks in `0..n_states`, compacted; ties are allowed.
pub fn random_prior<R: Rng + ?Sized>(space: &EpistemicSpace, rng: &mut R) -> PlausibilityOrder {
    let n = space.n_states();
    PlausibilityOrder::from_ranks((0..n).map(|_| Some(rng.gen_range(0..n))).collect())
}

/// Trial `index` of the series configured by `cfg`. A pure function of its
/// arguments, so trials can be generated in any order or in parallel.
pub fn make_trial(cfg: &GenConfig, index: u64) -> Result<TrialInputs> {
    let trial_seed = mix_seed(cfg.master_seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let space = random_space(cfg, &mut rng)?;
    let actual = WorldId(rng.gen_range(0..space.n_states()));
    let extra = rng.gen_range(cfg.extra_len.0..=cfg.extra_len.1);
    let seq = generate_sound_complete(&space, actual, extra, &mut rng)?;
    let prior = random_prior(&space, &mut rng);
    let (lo, hi) = cfg.stubbornness_range;
    let stubbornness = StubbornnessMap::random(space.n_observables(), lo, hi, &mut rng)?;
    Ok(TrialInputs { space: Arc::new(space), prior, actual, seq, stubbornness, trial_seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::{is_complete, is_sound};

    #[test]
    fn default_spaces_have_distinct_nonempty_covering_observables() {
        let cfg = GenConfig::default();
        for seed in 0..1000u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sp = random_space(&cfg, &mut rng).unwrap();
            assert_eq!(sp.n_states(), 5);
            assert_eq!(sp.n_observables(), 12);
            for (i, a) in sp.observables().iter().enumerate() {
                assert!(!a.is_empty());
                assert!(a.is_subset(Proposition::full(5)));
                assert!(sp.observables()[i + 1..].iter().all(|b| a != b));
            }
            for w in 0..5 {
                assert!(!sp.signature(WorldId(w)).is_empty());
            }
        }
    }

    #[test]
    fn single_world_space() {
        let cfg = GenConfig { n_states: 1, n_observables: 1, ..GenConfig::default() };
        let sp = random_space(&cfg, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(sp.observables(), &[Proposition::full(1)]);
        let prior = random_prior(&sp, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(prior.ranks(), &[Some(0)]);
    }

    #[test]
    fn too_many_observables_is_an_error() {
        let cfg = GenConfig { n_states: 3, n_observables: 8, ..GenConfig::default() };
        assert_eq!(
            random_space(&cfg, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::InsufficientPropositions { n_states: 3, n_observables: 8 })
        );
        // 7 of 7 subsets is still possible
        let cfg = GenConfig { n_states: 3, n_observables: 7, ..GenConfig::default() };
        assert_eq!(random_space(&cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap().n_observables(), 7);
    }

    #[test]
    fn coverage_can_be_unattainable() {
        // a single observable over 40 worlds almost never covers them all
        let cfg = GenConfig { n_states: 40, n_observables: 1, ..GenConfig::default() };
        assert_eq!(
            random_space(&cfg, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::CoverageRetriesExhausted { attempts: COVERAGE_ATTEMPTS })
        );
    }

    #[test]
    fn priors_are_normalized() {
        let cfg = GenConfig::default();
        for seed in 0..500 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sp = random_space(&cfg, &mut rng).unwrap();
            let o = random_prior(&sp, &mut rng);
            assert!(o.is_normalized());
            assert_eq!(o.domain(), sp.worlds());
        }
    }

    #[test]
    fn trials_are_reproducible_and_well_formed() {
        let cfg = GenConfig { master_seed: 77, ..GenConfig::default() };
        let a = make_trial(&cfg, 3).unwrap();
        assert_eq!(a, make_trial(&cfg, 3).unwrap());
        let b = make_trial(&cfg, 4).unwrap();
        assert_ne!(a.trial_seed, b.trial_seed);
        for i in 0..300 {
            let t = make_trial(&cfg, i).unwrap();
            assert!(is_sound(&t.space, &t.seq, t.actual));
            assert!(is_complete(&t.space, &t.seq, t.actual));
            let extra = t.seq.len() - t.space.n_observables();
            assert!((2..=4).contains(&extra));
            assert!(t.stubbornness.thresholds().iter().all(|d| (1..=5).contains(d)));
            assert_eq!(t.prior.domain(), t.space.worlds());
        }
    }

    #[test]
    fn seed_mixing_separates_streams() {
        assert_ne!(mix_seed(1, 0), mix_seed(1, 1));
        assert_ne!(mix_seed(1, 0), mix_seed(2, 0));
        assert_eq!(mix_seed_str(5, "lex_ab"), mix_seed_str(5, "lex_ab"));
        assert_ne!(mix_seed_str(5, "lex_ab"), mix_seed_str(5, "mini_ab"));
    }
}
