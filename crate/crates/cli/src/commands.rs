//! Subcommand implementations, independent of argument parsing.

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use truthtrack::expgen::{random_prior, random_space, GenConfig};
use truthtrack::{is_identifiable, OneStepMethod, PlausibilitySpace};

use crate::config::{BiasKind, BudgetConfig, MethodConfig, SeriesConfig};
use crate::error::{CliError, Result};
use crate::runner::{run_series, summarize, write_csv, SeriesSummary, TrialRecord};
use crate::space_file::{inspect, SpaceFile};
use crate::svg::grouped_bars;

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn write_records(path: &Path, records: &[TrialRecord]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    write_csv(records, std::io::BufWriter::new(file)).map_err(|e| CliError::io(path, e))
}

/// Bars for a summary: one group per label, a single series.
fn summary_chart(title: &str, summary: &SeriesSummary) -> String {
    let groups: Vec<String> = summary.methods.iter().map(|m| m.method.clone()).collect();
    let values = vec![summary.methods.iter().map(|m| Some(m.success_rate)).collect()];
    grouped_bars(title, "method", &groups, &["success".to_string()], &values)
}

pub struct RunOptions {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub parallelism: Option<usize>,
    pub svg: Option<PathBuf>,
}

pub fn cmd_run(opts: &RunOptions) -> Result<(Vec<TrialRecord>, SeriesSummary)> {
    let mut cfg = SeriesConfig::load(&opts.config)?;
    if let Some(seed) = opts.seed {
        cfg.master_seed = seed;
    }
    if let Some(p) = opts.parallelism {
        cfg.parallelism = p;
    }
    cfg.validate()?;
    let records = run_series(&cfg)?;
    let summary = summarize(&records, &cfg.labels());
    if let Some(out) = &opts.out {
        write_records(out, &records)?;
    }
    if let Some(svg) = &opts.svg {
        write_file(svg, &summary_chart("success frequency by method", &summary))?;
    }
    Ok((records, summary))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    /// Confirmation bias against unbiased revision.
    Fig2,
    /// Framing bias against unbiased revision.
    Fig3,
    /// Anchoring bias against unbiased revision.
    Fig4,
    /// Anchoring against unbiased revision, both with a halving budget.
    Fig5,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }

    fn bias(self) -> BiasKind {
        match self {
            Figure::Fig2 => BiasKind::Cb,
            Figure::Fig3 => BiasKind::Fr,
            Figure::Fig4 | Figure::Fig5 => BiasKind::Ab,
        }
    }

    fn title(self) -> &'static str {
        match self {
            Figure::Fig2 => "Confirmation-biased vs unbiased revision",
            Figure::Fig3 => "Framing-biased vs unbiased revision",
            Figure::Fig4 => "Anchoring-biased vs unbiased revision",
            Figure::Fig5 => "Anchoring-biased vs unbiased revision, limited resources",
        }
    }

    /// The paired comparison behind the figure, at the standard parameters.
    pub fn series(self, seed: u64, trials: usize, parallelism: usize) -> SeriesConfig {
        let methods = OneStepMethod::ALL
            .iter()
            .flat_map(|&b| [MethodConfig::new(b, BiasKind::None), MethodConfig::new(b, self.bias())])
            .collect();
        let mut cfg = SeriesConfig::new(methods);
        cfg.master_seed = seed;
        cfg.trials = trials;
        cfg.parallelism = parallelism;
        if self == Figure::Fig5 {
            cfg.budget = Some(BudgetConfig::default());
        }
        cfg
    }
}

pub fn cmd_repro(fig: Figure, out_dir: &Path, seed: u64, trials: usize, parallelism: usize) -> Result<SeriesSummary> {
    let cfg = fig.series(seed, trials, parallelism);
    let records = run_series(&cfg)?;
    let summary = summarize(&records, &cfg.labels());
    let name = fig.name();
    write_records(&out_dir.join(format!("{name}.csv")), &records)?;

    let groups: Vec<String> = OneStepMethod::ALL.iter().map(|m| m.name().to_string()).collect();
    let res = if cfg.budget.is_some() { "-res" } else { "" };
    let series = vec![format!("unbiased{res}"), format!("{}{res}", cfg.methods[1].bias_label())];
    let values: Vec<Vec<Option<f64>>> = (0..2)
        .map(|k| {
            summary
                .methods
                .iter()
                .skip(k)
                .step_by(2)
                .map(|m| Some(m.success_rate))
                .collect()
        })
        .collect();
    write_file(
        &out_dir.join(format!("{name}.svg")),
        &grouped_bars(fig.title(), "revision method", &groups, &series, &values),
    )?;
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_file(&out_dir.join(format!("{name}_summary.json")), &json)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub n_states: usize,
    pub n_observables: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub identifiable_rate: f64,
}

pub const SWEEP_HEADER: &str = "n_states,n_observables,trials,successes,success_rate,identifiable_rate";

pub struct SweepOptions {
    pub states: Vec<usize>,
    pub observables: (usize, usize),
    pub method: String,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub trials: usize,
    pub parallelism: usize,
}

/// Success rate of one method over a grid of (states, observables). Cells
/// with more observables than non-empty propositions are skipped.
pub fn cmd_sweep(opts: &SweepOptions) -> Result<Vec<SweepCell>> {
    if opts.states.is_empty() || opts.observables.0 > opts.observables.1 || opts.observables.0 == 0 {
        return Err(CliError::Config("sweep needs a state list and a non-empty observable range".into()));
    }
    let method = MethodConfig::parse_label(&opts.method)?;
    let label = method.label(false);
    let mut cells = Vec::new();
    for &n in &opts.states {
        let mut row = Vec::new();
        for m in opts.observables.0..=opts.observables.1 {
            let feasible = n >= 64 || (m as u128) < (1u128 << n);
            if !feasible {
                eprintln!("skipping {n} states x {m} observables: not enough distinct propositions");
                row.push(None);
                continue;
            }
            let mut cfg = SeriesConfig::new(vec![method.clone()]);
            cfg.n_states = n;
            cfg.n_observables = m;
            cfg.trials = opts.trials;
            cfg.master_seed = opts.seed;
            cfg.parallelism = opts.parallelism;
            let records = run_series(&cfg)?;
            let successes = records.iter().filter(|r| r.success).count();
            let ident = records.iter().filter(|r| r.identifiable).count();
            let frac = |k: usize| if records.is_empty() { 0.0 } else { k as f64 / records.len() as f64 };
            let cell = SweepCell {
                n_states: n,
                n_observables: m,
                trials: records.len(),
                successes,
                success_rate: frac(successes),
                identifiable_rate: frac(ident),
            };
            row.push(Some(cell.success_rate));
            cells.push(cell);
        }

        let rates: Vec<f64> = row.iter().flatten().copied().collect();
        let monotone = rates.windows(2).all(|w| w[1] >= w[0]);
        println!(
            "{label}, {n} states: success rate {} in the number of observables",
            if monotone { "non-decreasing" } else { "not monotone" }
        );
        let groups: Vec<String> = (opts.observables.0..=opts.observables.1).map(|m| m.to_string()).collect();
        write_file(
            &opts.out_dir.join(format!("sweep_{label}_{n}states.svg")),
            &grouped_bars(
                &format!("{label}: {n} states"),
                "number of observables",
                &groups,
                std::slice::from_ref(&label),
                &[row],
            ),
        )?;
    }

    let mut csv = format!("{SWEEP_HEADER}\n");
    for c in &cells {
        csv.push_str(&format!(
            "{},{},{},{},{:.6},{:.6}\n",
            c.n_states, c.n_observables, c.trials, c.successes, c.success_rate, c.identifiable_rate
        ));
    }
    write_file(&opts.out_dir.join(format!("sweep_{label}.csv")), &csv)?;
    Ok(cells)
}

pub fn cmd_space_gen(n_states: usize, n_observables: usize, seed: u64, out: &Path) -> Result<PlausibilitySpace> {
    let cfg = GenConfig { n_states, n_observables, ..GenConfig::default() };
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = random_space(&cfg, &mut rng)?;
    let prior = random_prior(&space, &mut rng);
    let ps = PlausibilitySpace::new(space, prior)?;
    write_file(out, &SpaceFile::from_space(&ps).to_json())?;
    Ok(ps)
}

pub fn cmd_space_inspect(path: &Path) -> Result<String> {
    Ok(inspect(&SpaceFile::load(path)?))
}

pub fn cmd_space_identifiable(path: &Path) -> Result<bool> {
    Ok(is_identifiable(SpaceFile::load(path)?.space()))
}
