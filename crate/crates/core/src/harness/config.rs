use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::allocator::RelayMode;
use crate::error::{nonneg, positive, Error, Result};
use crate::model::{ChannelGains, CooperationLevel, DualPrice, Geometry, PowerBudget, ScenarioConfig};
use crate::protocol::{alice_eve_radius, ConstraintMode, NegotiationPolicy};
use crate::rates::{LogBase, Powers, ScenarioKind};

/// What the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    Lambda,
    Alpha,
    #[serde(rename = "p_a_max")]
    PAMax,
    #[serde(rename = "p_j_max")]
    PJMax,
    #[serde(rename = "d_ab")]
    DAb,
    #[serde(rename = "d_ae")]
    DAe,
    #[serde(rename = "d_jb")]
    DJb,
    #[serde(rename = "d_je")]
    DJe,
    #[serde(rename = "d_aj")]
    DAj,
    /// Alice's main power, other powers fixed.
    #[serde(rename = "p_a")]
    PA,
    /// John's main power, other powers fixed.
    #[serde(rename = "p_j")]
    PJ,
    /// Whichever power feeds Alice's secrecy rate in each scenario: `p_a`
    /// without cooperation or one-sided, `p_jb` when relaying, John's
    /// donated `p_j` under power cooperation.
    AlicePower,
    /// Mirror of `alice-power` for John.
    JohnPower,
    /// Cooperative power exchanged over the Alice–John link, on path-loss
    /// scaled gains.
    CoupledHelp,
}

impl Axis {
    /// Axes that fix every power instead of optimising.
    pub fn is_fixed_power(self) -> bool {
        matches!(
            self,
            Axis::PA | Axis::PJ | Axis::AlicePower | Axis::JohnPower | Axis::CoupledHelp
        )
    }

    pub fn is_distance(self) -> bool {
        matches!(self, Axis::DAb | Axis::DAe | Axis::DJb | Axis::DJe | Axis::DAj)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl SweepSpec {
    /// Evenly spaced points, both ends included; a single point when
    /// `lo == hi`.
    pub fn points(&self) -> Vec<f64> {
        if self.lo == self.hi {
            return vec![self.lo];
        }
        let n = self.steps;
        let step = (self.hi - self.lo) / (n - 1) as f64;
        (0..n)
            .map(|i| if i == n - 1 { self.hi } else { self.lo + i as f64 * step })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo > self.hi {
            return Err(Error::Config(format!(
                "sweep range [{}, {}] must be finite with lo <= hi",
                self.lo, self.hi
            )));
        }
        if self.lo < self.hi && self.steps < 2 {
            return Err(Error::Config(format!("sweep needs at least 2 steps, got {}", self.steps)));
        }
        Ok(())
    }
}

/// Whether non-power axes report optimal allocations or fixed powers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evaluation {
    #[default]
    Optimal,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyConfig {
    pub john_accepts_relay: bool,
    pub alice_accepts_relay: bool,
    pub john_accepts_mac: bool,
    pub john_accepts_one_side: bool,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        Self {
            john_accepts_relay: true,
            alice_accepts_relay: true,
            john_accepts_mac: true,
            john_accepts_one_side: true,
        }
    }
}

/// Eve's distances to Alice and John at one mobility step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvePosition {
    pub d_ae: f64,
    pub d_je: f64,
}

/// Everything a CLI run needs. Every field has a default, so a config file
/// only lists what it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub gains: ChannelGains,
    pub geometry: Geometry,
    pub sigma2: f64,
    pub alpha: CooperationLevel,
    pub lambda: DualPrice,
    pub budgets: PowerBudget,
    pub scenarios: Vec<ScenarioKind>,
    pub sweep: SweepSpec,
    pub evaluation: Evaluation,
    /// Run allocations on path-loss scaled gains.
    pub path_loss: bool,
    /// Powers used by fixed-power evaluations.
    pub fixed_powers: Powers,
    pub relay_mode: RelayMode,
    pub constraint_mode: ConstraintMode,
    pub log_base: LogBase,
    pub seed: u64,
    pub policy: PolicyConfig,
    pub trajectory: Vec<EvePosition>,
    pub validation_samples: usize,
    pub resolution: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let geometry = Geometry::default();
        Self {
            gains: ChannelGains::reference(),
            geometry,
            sigma2: 1.0,
            alpha: CooperationLevel::new(0.8).expect("valid"),
            lambda: DualPrice::default(),
            budgets: PowerBudget::new(10.0, 10.0).expect("valid"),
            scenarios: ScenarioKind::ALL.to_vec(),
            sweep: SweepSpec {
                axis: Axis::Lambda,
                lo: 0.001,
                hi: 0.1,
                steps: 100,
            },
            evaluation: Evaluation::Optimal,
            path_loss: false,
            fixed_powers: Powers::main(5.0, 5.0),
            relay_mode: RelayMode::FixedPoint,
            constraint_mode: ConstraintMode::Corrected,
            log_base: LogBase::Natural,
            seed: 0,
            policy: PolicyConfig::default(),
            trajectory: (0..21)
                .map(|i| EvePosition {
                    d_ae: if i == 20 { 3.0 } else { 2.0 + 0.05 * i as f64 },
                    d_je: geometry.d_je,
                })
                .collect(),
            validation_samples: 100,
            resolution: crate::oracle::DEFAULT_RESOLUTION,
        }
    }
}

pub const PRESETS: [&str; 6] = ["fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// The default parameter block with the sweep of one figure.
    pub fn preset(name: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_preset(name)?;
        Ok(cfg)
    }

    /// Overrides only what the figure sweeps.
    pub fn apply_preset(&mut self, name: &str) -> Result<()> {
        let sweep = |axis, lo, hi, steps| SweepSpec { axis, lo, hi, steps };
        match name {
            "fig3" => {
                self.scenarios = vec![ScenarioKind::NonCoop, ScenarioKind::RelayCoop];
                self.sweep = sweep(Axis::AlicePower, 0.0, 20.0, 41);
                self.fixed_powers = Powers::main(5.0, 5.0);
            }
            "fig4" => {
                self.scenarios = vec![ScenarioKind::NonCoop, ScenarioKind::RelayCoop];
                self.sweep = sweep(Axis::JohnPower, 0.0, 20.0, 41);
                self.fixed_powers = Powers::main(5.0, 5.0);
            }
            "fig5" => {
                self.scenarios = vec![ScenarioKind::NonCoop, ScenarioKind::RelayCoop];
                self.sweep = sweep(Axis::DAb, 0.5, 3.0, 26);
                self.evaluation = Evaluation::Fixed;
                self.path_loss = true;
                self.fixed_powers = Powers::relayed(5.0, 5.0, 0.0, 5.0);
            }
            "fig6" => {
                self.scenarios = vec![ScenarioKind::RelayCoop];
                self.sweep = sweep(Axis::Lambda, 0.001, 0.1, 100);
                self.evaluation = Evaluation::Optimal;
            }
            "fig7" => {
                self.scenarios = vec![ScenarioKind::MacCoop];
                self.sweep = sweep(Axis::Lambda, 0.001, 0.1, 100);
                self.evaluation = Evaluation::Optimal;
                self.path_loss = true;
            }
            "fig8" => {
                self.scenarios = vec![ScenarioKind::MacCoop];
                self.sweep = sweep(Axis::CoupledHelp, 0.0, 20.0, 41);
                self.fixed_powers = Powers::main(5.0, 5.0);
                // Eve half again beyond the radius inside which cooperation helps Alice.
                self.geometry.d_ae = 1.5 * alice_eve_radius(&self.gains, &self.geometry);
            }
            other => return Err(Error::UnknownPreset(other.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario().validate()?;
        self.geometry.validate()?;
        self.sweep.validate()?;
        for p in [
            ("p_a", self.fixed_powers.p_a),
            ("p_j", self.fixed_powers.p_j),
            ("p_ab", self.fixed_powers.p_ab),
            ("p_jb", self.fixed_powers.p_jb),
        ] {
            nonneg(p.0, p.1)?;
        }
        for pos in &self.trajectory {
            positive("d_ae", pos.d_ae)?;
            positive("d_je", pos.d_je)?;
        }
        if self.scenarios.is_empty() {
            return Err(Error::Config("at least one scenario is required".into()));
        }
        if self.resolution < 2 {
            return Err(Error::Config("grid resolution must be at least 2".into()));
        }
        Ok(())
    }

    pub fn scenario(&self) -> ScenarioConfig {
        ScenarioConfig {
            gains: self.gains,
            sigma2: self.sigma2,
            alpha: self.alpha,
            lambda: self.lambda,
            budgets: self.budgets,
        }
    }

    pub fn negotiation_policy(&self) -> NegotiationPolicy {
        NegotiationPolicy {
            john_accepts_relay: self.policy.john_accepts_relay,
            alice_accepts_relay: self.policy.alice_accepts_relay,
            john_accepts_mac: self.policy.john_accepts_mac,
            john_accepts_one_side: self.policy.john_accepts_one_side,
            alpha: self.alpha,
        }
    }
}
