//! JSON file format for a single plausibility space:
//! `{"n_states": 4, "observables": [[0, 1], [2]], "prior_ranks": [0, 1, 1, 2]}`.

use std::fmt::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use truthtrack::{canonical_prior, is_identifiable, EpistemicSpace, PlausibilityOrder, PlausibilitySpace, WorldId};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub n_states: usize,
    pub observables: Vec<Vec<usize>>,
    pub prior_ranks: Vec<usize>,
}

impl SpaceFile {
    pub fn from_space(ps: &PlausibilitySpace) -> Self {
        let space = ps.space();
        SpaceFile {
            n_states: space.n_states(),
            observables: space
                .observables()
                .iter()
                .map(|o| o.iter().map(|w| w.0).collect())
                .collect(),
            prior_ranks: ps
                .order()
                .ranks()
                .iter()
                .map(|r| r.expect("saved spaces rank every world"))
                .collect(),
        }
    }

    pub fn to_space(&self) -> std::result::Result<PlausibilitySpace, String> {
        let mut props = Vec::with_capacity(self.observables.len());
        for (i, o) in self.observables.iter().enumerate() {
            if let Some(w) = o.iter().find(|&&w| w >= self.n_states) {
                return Err(format!("observable {i} mentions world {w}, but there are {} worlds", self.n_states));
            }
            props.push(o.iter().map(|&w| WorldId(w)).collect());
        }
        let space = EpistemicSpace::new(self.n_states, props).map_err(|e| e.to_string())?;
        if self.prior_ranks.len() != self.n_states {
            return Err(format!("{} prior ranks for {} worlds", self.prior_ranks.len(), self.n_states));
        }
        let order = PlausibilityOrder::from_ranks(self.prior_ranks.iter().map(|&r| Some(r)).collect());
        PlausibilitySpace::new(space, order).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<PlausibilitySpace> {
        let bad = |msg: String| CliError::Input { path: path.to_path_buf(), msg };
        let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
        let file: SpaceFile = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        file.to_space().map_err(bad)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Human-readable listing of observables, signatures and the prior.
pub fn inspect(ps: &PlausibilitySpace) -> String {
    let space = ps.space();
    let mut s = String::new();
    let _ = writeln!(s, "worlds: {}", space.n_states());
    let _ = writeln!(s, "observables:");
    for (i, o) in space.observables().iter().enumerate() {
        let _ = writeln!(s, "  o{i} = {o:?}");
    }
    let _ = writeln!(s, "signatures:");
    for w in 0..space.n_states() {
        let sig: Vec<String> = space.signature(WorldId(w)).iter().map(|o| format!("o{}", o.0)).collect();
        let rank = ps.order().rank(WorldId(w)).map(|r| r.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "  world {w}: rank {rank}, {{{}}}", sig.join(", "));
    }
    let _ = writeln!(s, "most plausible: {:?}", ps.conjecture());
    let _ = writeln!(s, "identifiable: {}", is_identifiable(space));
    let canon: Vec<usize> = canonical_prior(space).ranks().iter().map(|r| r.unwrap_or(0)).collect();
    let _ = writeln!(s, "canonical prior ranks: {canon:?}");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_files() {
        let f = SpaceFile { n_states: 2, observables: vec![vec![0], vec![5]], prior_ranks: vec![0, 0] };
        assert!(f.to_space().unwrap_err().contains("world 5"));
        let f = SpaceFile { n_states: 2, observables: vec![vec![0], vec![0]], prior_ranks: vec![0, 0] };
        assert!(f.to_space().is_err());
        let f = SpaceFile { n_states: 2, observables: vec![vec![0]], prior_ranks: vec![0] };
        assert!(f.to_space().is_err());
        let f = SpaceFile { n_states: 2, observables: vec![vec![]], prior_ranks: vec![0, 0] };
        assert!(f.to_space().is_err());
    }

    #[test]
    fn round_trip_normalizes_ranks() {
        let f = SpaceFile { n_states: 3, observables: vec![vec![0, 2], vec![1]], prior_ranks: vec![4, 0, 4] };
        let ps = f.to_space().unwrap();
        let back = SpaceFile::from_space(&ps);
        assert_eq!(back.prior_ranks, vec![1, 0, 1]);
        assert_eq!(back.observables, f.observables);
    }
}
