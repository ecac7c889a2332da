//! JSON series configuration.
//!
//! ```json
//! {
//!   "n_states": 5, "n_observables": 12, "extra_len": [2, 4],
//!   "trials": 200, "master_seed": 1,
//!   "methods": [{"base": "cond", "bias": "cb", "cb_mode": "inclusive", "stubbornness": [1, 5]}],
//!   "budget": {"initial": 100.0, "floor": 1.0},
//!   "parallelism": 4
//! }
//! ```

use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use truthtrack::expgen::{GenConfig, TrialInputs};
use truthtrack::{Bias, BiasedMethodSpec, CountMode, FramingMode, OneStepMethod, ResourceBudget, StubbornnessMap};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BiasKind {
    #[default]
    None,
    Cb,
    Fr,
    Ab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FrModeName {
    Identity,
    Static,
    #[default]
    Dynamic,
    Fair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CbModeName {
    #[default]
    Inclusive,
    Strict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodConfig {
    pub base: String,
    #[serde(default)]
    pub bias: BiasKind,
    #[serde(default)]
    pub cb_mode: CbModeName,
    #[serde(default)]
    pub fr_mode: FrModeName,
    #[serde(default)]
    pub fair_prefix: usize,
    /// Per-method stubbornness range; when absent the trial's shared
    /// thresholds are used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stubbornness: Option<[usize; 2]>,
    /// Overrides the derived label (needed when two entries would collide).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MethodConfig {
    pub fn new(base: OneStepMethod, bias: BiasKind) -> Self {
        MethodConfig {
            base: base.name().to_string(),
            bias,
            cb_mode: CbModeName::default(),
            fr_mode: FrModeName::default(),
            fair_prefix: 0,
            stubbornness: None,
            label: None,
        }
    }

    pub fn base_method(&self) -> Result<OneStepMethod> {
        OneStepMethod::from_str(&self.base).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn framing_mode(&self) -> FramingMode {
        match self.fr_mode {
            FrModeName::Identity => FramingMode::Identity,
            FrModeName::Static => FramingMode::Static,
            FrModeName::Dynamic => FramingMode::Dynamic,
            FrModeName::Fair => FramingMode::Fair(self.fair_prefix),
        }
    }

    pub fn count_mode(&self) -> CountMode {
        match self.cb_mode {
            CbModeName::Inclusive => CountMode::Inclusive,
            CbModeName::Strict => CountMode::Strict,
        }
    }

    /// `cond`, `lex_cb`, `mini_ab-res`, ...
    pub fn label(&self, budgeted: bool) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let mut s = self.base.clone();
        if self.bias != BiasKind::None {
            s.push('_');
            s.push_str(self.bias_label());
        }
        if budgeted {
            s.push_str("-res");
        }
        s
    }

    pub fn bias_label(&self) -> &'static str {
        match self.bias {
            BiasKind::None => "none",
            BiasKind::Cb => "cb",
            BiasKind::Fr => "fr",
            BiasKind::Ab => "ab",
        }
    }

    /// Parses a label such as `lex_ab` or `mini`.
    pub fn parse_label(label: &str) -> Result<Self> {
        let (base, bias) = match label.split_once('_') {
            Some((b, k)) => (b, k),
            None => (label, "none"),
        };
        let base = OneStepMethod::from_str(base).map_err(|e| CliError::Config(e.to_string()))?;
        let bias = match bias {
            "none" => BiasKind::None,
            "cb" => BiasKind::Cb,
            "fr" => BiasKind::Fr,
            "ab" => BiasKind::Ab,
            other => return Err(CliError::Config(format!("unknown bias {other:?} in {label:?}"))),
        };
        Ok(MethodConfig::new(base, bias))
    }

    pub fn validate(&self) -> Result<()> {
        self.base_method()?;
        if let Some([lo, hi]) = self.stubbornness {
            if lo == 0 || lo > hi {
                return Err(CliError::Config(format!("bad stubbornness range [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    /// The concrete learner for one trial. `rng` is the method's own stream;
    /// it is only consumed when the method draws its own thresholds.
    pub fn instantiate<R: Rng + ?Sized>(
        &self,
        trial: &TrialInputs,
        budget: Option<ResourceBudget>,
        rng: &mut R,
    ) -> Result<BiasedMethodSpec> {
        let base = self.base_method()?;
        let bias = match self.bias {
            BiasKind::None => Bias::None,
            BiasKind::Cb => {
                let stubbornness = match self.stubbornness {
                    Some([lo, hi]) => StubbornnessMap::random(trial.space.n_observables(), lo, hi, rng)?,
                    None => trial.stubbornness.clone(),
                };
                Bias::Confirmation { stubbornness, mode: self.count_mode() }
            }
            BiasKind::Fr => Bias::Framing(self.framing_mode()),
            BiasKind::Ab => Bias::Anchoring,
        };
        Ok(BiasedMethodSpec { base, bias, budget })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub initial: f64,
    pub floor: f64,
}

impl BudgetConfig {
    pub fn to_budget(self) -> Result<ResourceBudget> {
        ResourceBudget::new(self.initial, self.floor).map_err(|e| CliError::Config(e.to_string()))
    }
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig { initial: 100.0, floor: 1.0 }
    }
}

fn default_n_states() -> usize {
    5
}
fn default_n_observables() -> usize {
    12
}
fn default_extra_len() -> [usize; 2] {
    [2, 4]
}
fn default_stubbornness() -> [usize; 2] {
    [1, 5]
}
fn default_trials() -> usize {
    200
}
fn default_parallelism() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    #[serde(default = "default_n_states")]
    pub n_states: usize,
    #[serde(default = "default_n_observables")]
    pub n_observables: usize,
    #[serde(default = "default_extra_len")]
    pub extra_len: [usize; 2],
    /// Range of the per-trial stubbornness thresholds shared by all methods.
    #[serde(default = "default_stubbornness")]
    pub stubbornness: [usize; 2],
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    pub methods: Vec<MethodConfig>,
    #[serde(default)]
    pub budget: Option<BudgetConfig>,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
}

impl SeriesConfig {
    pub fn new(methods: Vec<MethodConfig>) -> Self {
        SeriesConfig {
            n_states: default_n_states(),
            n_observables: default_n_observables(),
            extra_len: default_extra_len(),
            stubbornness: default_stubbornness(),
            trials: default_trials(),
            master_seed: 0,
            methods,
            budget: None,
            parallelism: default_parallelism(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SeriesConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        SeriesConfig::from_json(&text)
    }

    pub fn gen_config(&self) -> GenConfig {
        GenConfig {
            n_states: self.n_states,
            n_observables: self.n_observables,
            extra_len: (self.extra_len[0], self.extra_len[1]),
            stubbornness_range: (self.stubbornness[0], self.stubbornness[1]),
            trials: self.trials,
            master_seed: self.master_seed,
        }
    }

    pub fn budget(&self) -> Result<Option<ResourceBudget>> {
        self.budget.map(BudgetConfig::to_budget).transpose()
    }

    pub fn labels(&self) -> Vec<String> {
        let budgeted = self.budget.is_some();
        self.methods.iter().map(|m| m.label(budgeted)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(CliError::Config("at least one method is required".into()));
        }
        if self.parallelism == 0 {
            return Err(CliError::Config("parallelism must be at least 1".into()));
        }
        self.gen_config().validate().map_err(|e| CliError::Config(e.to_string()))?;
        for m in &self.methods {
            m.validate()?;
        }
        self.budget()?;
        let labels = self.labels();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(CliError::Config(format!("duplicate method label {l:?}; set \"label\" to disambiguate")));
            }
        }
        Ok(())
    }
}
