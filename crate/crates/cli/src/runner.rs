//! Paired series execution: every method sees the same generated inputs.

use std::fmt::Write as _;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use truthtrack::expgen::{make_trial, mix_seed_str, TrialInputs};
use truthtrack::{is_identifiable, run_learner, verdict};

use crate::config::SeriesConfig;
use crate::error::{CliError, Result};

pub const CSV_HEADER: &str = "trial_id,trial_seed,method,bias,n_states,n_observables,actual_world,seq_len,identifiable,success,converge_step,revisions_executed,budget_exhausted";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub trial_seed: u64,
    pub method: String,
    pub bias: String,
    pub n_states: usize,
    pub n_observables: usize,
    pub actual_world: usize,
    pub seq_len: usize,
    pub identifiable: bool,
    pub success: bool,
    pub converge_step: Option<usize>,
    pub revisions_executed: usize,
    pub budget_exhausted: bool,
}

impl TrialRecord {
    pub fn csv_row(&self) -> String {
        let mut s = String::new();
        write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.trial_id,
            self.trial_seed,
            self.method,
            self.bias,
            self.n_states,
            self.n_observables,
            self.actual_world,
            self.seq_len,
            self.identifiable,
            self.success,
            self.converge_step.map(|c| c.to_string()).unwrap_or_default(),
            self.revisions_executed,
            self.budget_exhausted,
        )
        .expect("writing to a String");
        s
    }
}

/// Runs every configured method on one trial's inputs.
pub fn run_trial(cfg: &SeriesConfig, trial_id: u64, inputs: &TrialInputs) -> Result<Vec<TrialRecord>> {
    let budget = cfg.budget()?;
    let identifiable = is_identifiable(&inputs.space);
    let ps0 = inputs.plausibility_space();
    cfg.methods
        .iter()
        .zip(cfg.labels())
        .map(|(m, label)| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed_str(inputs.trial_seed, &label));
            let spec = m.instantiate(inputs, budget, &mut rng)?;
            let traj = run_learner(&spec, &ps0, &inputs.seq, &mut rng);
            let v = verdict(&traj, inputs.actual);
            Ok(TrialRecord {
                trial_id,
                trial_seed: inputs.trial_seed,
                method: label,
                bias: m.bias_label().to_string(),
                n_states: inputs.space.n_states(),
                n_observables: inputs.space.n_observables(),
                actual_world: inputs.actual.0,
                seq_len: inputs.seq.len(),
                identifiable,
                success: v.success,
                converge_step: v.converge_step,
                revisions_executed: v.revisions_executed,
                budget_exhausted: traj.budget_exhausted,
            })
        })
        .collect()
}

/// All trials × methods, ordered by trial id then method order. The result
/// does not depend on `cfg.parallelism`.
pub fn run_series(cfg: &SeriesConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let gen = cfg.gen_config();
    let one = |i: u64| -> Result<Vec<TrialRecord>> {
        let inputs = make_trial(&gen, i)?;
        run_trial(cfg, i, &inputs)
    };
    let per_trial: Vec<Vec<TrialRecord>> = if cfg.parallelism <= 1 {
        (0..cfg.trials as u64).map(one).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallelism)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
        pool.install(|| (0..cfg.trials as u64).into_par_iter().map(one).collect::<Result<_>>())?
    };
    Ok(per_trial.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(records: &[TrialRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    out.flush()
}

pub fn csv_string(records: &[TrialRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is ascii")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: String,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub identifiable_trials: usize,
    pub success_rate_on_identifiable: Option<f64>,
    pub mean_converge_step: Option<f64>,
    pub mean_revisions: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct SeriesSummary {
    pub methods: Vec<MethodSummary>,
}

impl SeriesSummary {
    pub fn get(&self, method: &str) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| m.method == method)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<14} {:>7} {:>9} {:>9} {:>11} {:>10} {:>10}",
            "method", "trials", "successes", "rate", "rate(ident)", "converge", "revisions"
        );
        for m in &self.methods {
            let opt = |x: Option<f64>, pct: bool| match x {
                Some(v) if pct => format!("{:.1}%", 100.0 * v),
                Some(v) => format!("{v:.2}"),
                None => "-".to_string(),
            };
            let _ = writeln!(
                s,
                "{:<14} {:>7} {:>9} {:>9} {:>11} {:>10} {:>10.2}",
                m.method,
                m.trials,
                m.successes,
                opt(Some(m.success_rate), true),
                opt(m.success_rate_on_identifiable, true),
                opt(m.mean_converge_step, false),
                m.mean_revisions
            );
        }
        s
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Aggregates per method, in the order of `labels`.
pub fn summarize(records: &[TrialRecord], labels: &[String]) -> SeriesSummary {
    let methods = labels
        .iter()
        .map(|label| {
            let rows: Vec<&TrialRecord> = records.iter().filter(|r| &r.method == label).collect();
            let successes = rows.iter().filter(|r| r.success).count();
            let ident: Vec<&&TrialRecord> = rows.iter().filter(|r| r.identifiable).collect();
            MethodSummary {
                method: label.clone(),
                trials: rows.len(),
                successes,
                success_rate: if rows.is_empty() { 0.0 } else { successes as f64 / rows.len() as f64 },
                identifiable_trials: ident.len(),
                success_rate_on_identifiable: mean(ident.iter().map(|r| r.success as u8 as f64)),
                mean_converge_step: mean(rows.iter().filter_map(|r| r.converge_step).map(|c| c as f64)),
                mean_revisions: mean(rows.iter().map(|r| r.revisions_executed as f64)).unwrap_or(0.0),
            }
        })
        .collect();
    SeriesSummary { methods }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{BiasKind, MethodConfig};
    use truthtrack::OneStepMethod;

    fn cfg(trials: usize) -> SeriesConfig {
        let mut c = SeriesConfig::new(vec![
            MethodConfig::new(OneStepMethod::Cond, BiasKind::None),
            MethodConfig::new(OneStepMethod::Lex, BiasKind::Ab),
            MethodConfig::new(OneStepMethod::Mini, BiasKind::Fr),
        ]);
        c.trials = trials;
        c.master_seed = 12;
        c
    }

    #[test]
    fn records_are_ordered_and_paired() {
        let recs = run_series(&cfg(5)).unwrap();
        assert_eq!(recs.len(), 15);
        for (i, chunk) in recs.chunks(3).enumerate() {
            assert!(chunk.iter().all(|r| r.trial_id == i as u64));
            assert!(chunk.iter().all(|r| r.trial_seed == chunk[0].trial_seed));
            assert!(chunk.iter().all(|r| r.actual_world == chunk[0].actual_world));
            assert_eq!(chunk[0].method, "cond");
            assert_eq!(chunk[1].method, "lex_ab");
            assert_eq!(chunk[2].bias, "fr");
        }
    }

    #[test]
    fn zero_trials_gives_header_only() {
        let recs = run_series(&cfg(0)).unwrap();
        assert!(recs.is_empty());
        assert_eq!(csv_string(&recs), format!("{CSV_HEADER}\n"));
        let s = summarize(&recs, &cfg(0).labels());
        assert!(s.methods.iter().all(|m| m.trials == 0 && m.mean_converge_step.is_none()));
    }

    #[test]
    fn csv_row_format() {
        let r = TrialRecord {
            trial_id: 1,
            trial_seed: 2,
            method: "lex".into(),
            bias: "none".into(),
            n_states: 5,
            n_observables: 12,
            actual_world: 3,
            seq_len: 15,
            identifiable: true,
            success: false,
            converge_step: None,
            revisions_executed: 15,
            budget_exhausted: false,
        };
        assert_eq!(r.csv_row(), "1,2,lex,none,5,12,3,15,true,false,,15,false");
    }

    #[test]
    fn summary_counts() {
        let recs = run_series(&cfg(40)).unwrap();
        let s = summarize(&recs, &cfg(40).labels());
        for m in &s.methods {
            assert_eq!(m.trials, 40);
            assert!(m.successes <= m.trials);
        }
        assert!(s.table().contains("lex_ab"));
    }
}
