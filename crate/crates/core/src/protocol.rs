//! Distance constraints and cooperation-mode negotiation.
//!
//! Cooperation only pays off while each transmitter's partner link is no
//! stronger than its eavesdropper link after path loss. The two SNR-form
//! conditions carry the Alice–Bob distance where the Alice–John distance
//! belongs; [`ConstraintMode::Paper`] keeps that form and
//! [`ConstraintMode::Corrected`] uses `d_aj`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::allocator::{self, OptimalAllocation, RelayMode, RelaySeeds};
use crate::error::{positive, Error, Result};
use crate::model::{ChannelGains, CooperationLevel, Geometry, ScenarioConfig};
use crate::rates::ScenarioKind;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintMode {
    /// SNR conditions with `d_ab` and squared distances, as published.
    #[default]
    Paper,
    /// SNR conditions with `d_aj` in place of `d_ab`.
    Corrected,
}

impl ConstraintMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintMode::Paper => "paper",
            ConstraintMode::Corrected => "corrected",
        }
    }
}

impl fmt::Display for ConstraintMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstraintMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(ConstraintMode::Paper),
            "corrected" => Ok(ConstraintMode::Corrected),
            other => Err(Error::Config(format!(
                "unknown constraint mode `{other}` (use paper or corrected)"
            ))),
        }
    }
}

/// Whether each party accepts each kind of cooperation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegotiationPolicy {
    pub john_accepts_relay: bool,
    pub alice_accepts_relay: bool,
    pub john_accepts_mac: bool,
    pub john_accepts_one_side: bool,
    pub alpha: CooperationLevel,
}

impl NegotiationPolicy {
    pub fn all_accept(alpha: CooperationLevel) -> Self {
        Self {
            john_accepts_relay: true,
            alice_accepts_relay: true,
            john_accepts_mac: true,
            john_accepts_one_side: true,
            alpha,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintVerdict {
    pub snr_condition_alice: bool,
    pub snr_condition_john: bool,
    pub distance_alice_eve: bool,
    pub distance_john_eve: bool,
    pub all_met: bool,
}

impl ConstraintVerdict {
    fn new(snr_alice: bool, snr_john: bool, dist_alice: bool, dist_john: bool) -> Self {
        Self {
            snr_condition_alice: snr_alice,
            snr_condition_john: snr_john,
            distance_alice_eve: dist_alice,
            distance_john_eve: dist_john,
            all_met: snr_alice && snr_john && dist_alice && dist_john,
        }
    }
}

/// `d_ae^eta <= (g_ae / g_aj) d_aj^eta`, compared in product form so that a
/// zero partner gain is handled.
pub fn alice_eve_distance_ok(gains: &ChannelGains, geometry: &Geometry) -> bool {
    let eta = geometry.eta;
    gains.g_aj * geometry.d_ae.powf(eta) <= gains.g_ae * geometry.d_aj.powf(eta)
}

/// `d_je^eta <= (g_je / g_ja) d_aj^eta`.
pub fn john_eve_distance_ok(gains: &ChannelGains, geometry: &Geometry) -> bool {
    let eta = geometry.eta;
    gains.g_ja() * geometry.d_je.powf(eta) <= gains.g_je * geometry.d_aj.powf(eta)
}

/// Largest Alice–Eve distance at which cooperation still pays off.
pub fn alice_eve_radius(gains: &ChannelGains, geometry: &Geometry) -> f64 {
    (gains.g_ae / gains.g_aj).powf(1.0 / geometry.eta) * geometry.d_aj
}

/// Evaluates all four conditions at main powers `p_a`, `p_j`.
pub fn distance_constraints_met(
    gains: &ChannelGains,
    geometry: &Geometry,
    sigma2: f64,
    alpha: f64,
    p_a: f64,
    p_j: f64,
    mode: ConstraintMode,
) -> Result<ConstraintVerdict> {
    geometry.validate()?;
    positive("sigma2", sigma2)?;
    positive("alpha", alpha)?;
    let g = gains;
    let partner = match mode {
        ConstraintMode::Paper => geometry.d_ab,
        ConstraintMode::Corrected => geometry.d_aj,
    };
    let d_p = partner * partner;
    let d_ae = geometry.d_ae * geometry.d_ae;
    let d_je = geometry.d_je * geometry.d_je;
    let s2 = sigma2;

    let snr_alice = alpha * g.g_aj / (d_p * s2 + alpha * g.g_aj * p_j)
        <= alpha * g.g_ae / (d_ae * s2 + alpha * g.g_ae * p_j);
    let snr_john = g.g_ja() / (alpha * d_p * s2 + g.g_ja() * p_a) <= g.g_je / (alpha * d_je * s2 + g.g_je * p_a);

    Ok(ConstraintVerdict::new(
        snr_alice,
        snr_john,
        alice_eve_distance_ok(g, geometry),
        john_eve_distance_ok(g, geometry),
    ))
}

/// Result of one negotiation round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Negotiation {
    pub mode: ScenarioKind,
    /// Which of the four outputs fired (1 relay, 2 power, 3 one-sided, 4 none).
    pub output: u8,
    pub constraints: ConstraintVerdict,
    pub allocation: OptimalAllocation,
}

/// Alice initiates and asks for relaying; John answers according to the
/// policy. Constraint powers are the budgets. Allocations run on path-loss
/// scaled gains.
pub fn negotiate(
    policy: &NegotiationPolicy,
    cfg: &ScenarioConfig,
    geometry: &Geometry,
    mode: ConstraintMode,
) -> Result<Negotiation> {
    cfg.validate()?;
    geometry.validate()?;
    let alpha = policy.alpha.require_positive()?;
    let cfg = ScenarioConfig {
        alpha: policy.alpha,
        ..*cfg
    };
    let constraints = distance_constraints_met(
        &cfg.gains,
        geometry,
        cfg.sigma2,
        alpha,
        cfg.budgets.p_a_max,
        cfg.budgets.p_j_max,
        mode,
    )?;
    let scaled = cfg.with_gains(cfg.gains.attenuated(geometry)?);

    let output = if !constraints.all_met {
        4
    } else if policy.john_accepts_relay && policy.alice_accepts_relay {
        1
    } else if !policy.john_accepts_relay && policy.john_accepts_mac {
        2
    } else if policy.john_accepts_one_side {
        3
    } else {
        4
    };
    let (kind, allocation) = match output {
        1 => (
            ScenarioKind::RelayCoop,
            allocator::relay_allocation(&scaled, RelaySeeds::from_budgets(&scaled), RelayMode::FixedPoint)?,
        ),
        2 => (
            ScenarioKind::MacCoop,
            allocator::distance_adjusted_mac_allocation(&cfg, geometry)?,
        ),
        3 => (ScenarioKind::OneSideCoop, allocator::one_side_allocation(&scaled)?),
        _ => (ScenarioKind::NonCoop, allocator::noncoop_allocation(&scaled)?),
    };
    Ok(Negotiation {
        mode: kind,
        output,
        constraints,
        allocation,
    })
}

/// Re-negotiates after the devices moved; `changed` reports a mode switch.
pub fn adaptive_step(
    previous: ScenarioKind,
    policy: &NegotiationPolicy,
    cfg: &ScenarioConfig,
    geometry: &Geometry,
    mode: ConstraintMode,
) -> Result<(Negotiation, bool)> {
    let next = negotiate(policy, cfg, geometry, mode)?;
    let changed = next.mode != previous;
    Ok((next, changed))
}
