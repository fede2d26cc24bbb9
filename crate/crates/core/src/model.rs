//! Physical quantities of the two-transmitter wiretap model.
//!
//! Gains are power gains: they multiply transmit power linearly inside every
//! SNR. Everything is in linear units.

use serde::{Deserialize, Serialize};

use crate::error::{nonneg, positive, Error, Result};

/// Power gains of the five links. `g_ja` is the John→Alice gain and falls
/// back to `g_aj` (reciprocal channel) when unset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelGains {
    pub g_ab: f64,
    pub g_ae: f64,
    pub g_jb: f64,
    pub g_je: f64,
    pub g_aj: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_ja: Option<f64>,
}

impl ChannelGains {
    pub fn new(g_ab: f64, g_ae: f64, g_jb: f64, g_je: f64, g_aj: f64) -> Result<Self> {
        let gains = Self {
            g_ab,
            g_ae,
            g_jb,
            g_je,
            g_aj,
            g_ja: None,
        };
        gains.validate()?;
        Ok(gains)
    }

    /// Gain set used throughout the numerical experiments: a non-degraded
    /// channel where both legitimate links beat the eavesdropper links.
    pub fn reference() -> Self {
        Self {
            g_ab: 0.4,
            g_ae: 0.3,
            g_jb: 0.5,
            g_je: 0.3,
            g_aj: 0.2,
            g_ja: None,
        }
    }

    pub fn with_g_ja(mut self, g_ja: f64) -> Result<Self> {
        self.g_ja = Some(nonneg("g_ja", g_ja)?);
        Ok(self)
    }

    #[inline]
    pub fn g_ja(&self) -> f64 {
        self.g_ja.unwrap_or(self.g_aj)
    }

    pub fn validate(&self) -> Result<()> {
        nonneg("g_ab", self.g_ab)?;
        nonneg("g_ae", self.g_ae)?;
        nonneg("g_jb", self.g_jb)?;
        nonneg("g_je", self.g_je)?;
        nonneg("g_aj", self.g_aj)?;
        if let Some(g) = self.g_ja {
            nonneg("g_ja", g)?;
        }
        Ok(())
    }

    /// Scales every gain by the path loss of its link. The Alice–John pair
    /// shares `d_aj` in both directions.
    pub fn attenuated(&self, geometry: &Geometry) -> Result<Self> {
        let eta = geometry.eta;
        Ok(Self {
            g_ab: effective_gain(self.g_ab, geometry.d_ab, eta)?,
            g_ae: effective_gain(self.g_ae, geometry.d_ae, eta)?,
            g_jb: effective_gain(self.g_jb, geometry.d_jb, eta)?,
            g_je: effective_gain(self.g_je, geometry.d_je, eta)?,
            g_aj: effective_gain(self.g_aj, geometry.d_aj, eta)?,
            g_ja: self
                .g_ja
                .map(|g| effective_gain(g, geometry.d_aj, eta))
                .transpose()?,
        })
    }
}

/// Noise power, identical on every link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct NoiseModel(f64);

impl NoiseModel {
    pub fn new(sigma2: f64) -> Result<Self> {
        positive("sigma2", sigma2).map(Self)
    }

    #[inline]
    pub fn sigma2(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for NoiseModel {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<NoiseModel> for f64 {
    fn from(n: NoiseModel) -> f64 {
        n.0
    }
}

/// Pairwise distances and the path-loss exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub d_ab: f64,
    pub d_ae: f64,
    pub d_jb: f64,
    pub d_je: f64,
    pub d_aj: f64,
    pub eta: f64,
}

impl Geometry {
    pub fn new(d_ab: f64, d_ae: f64, d_jb: f64, d_je: f64, d_aj: f64, eta: f64) -> Result<Self> {
        let g = Self {
            d_ab,
            d_ae,
            d_jb,
            d_je,
            d_aj,
            eta,
        };
        g.validate()?;
        Ok(g)
    }

    /// Every distance equal to one: path loss disappears.
    pub fn unit(eta: f64) -> Self {
        Self {
            d_ab: 1.0,
            d_ae: 1.0,
            d_jb: 1.0,
            d_je: 1.0,
            d_aj: 1.0,
            eta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("d_ab", self.d_ab)?;
        positive("d_ae", self.d_ae)?;
        positive("d_jb", self.d_jb)?;
        positive("d_je", self.d_je)?;
        positive("d_aj", self.d_aj)?;
        if self.eta.is_nan() || self.eta < 1.0 {
            return Err(Error::InvalidInput {
                name: "eta",
                value: self.eta,
                reason: "path-loss exponent must be at least 1",
            });
        }
        Ok(())
    }
}

impl Default for Geometry {
    /// Bob one unit from both transmitters, Eve and John two units from
    /// Alice, Eve two units from John, free-space exponent.
    fn default() -> Self {
        Self {
            d_ab: 1.0,
            d_ae: 2.0,
            d_jb: 1.0,
            d_je: 2.0,
            d_aj: 2.0,
            eta: 2.0,
        }
    }
}

/// Total powers `P_A`, `P_J`, each split between the main signal and the
/// relayed one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBudget {
    pub p_a_max: f64,
    pub p_j_max: f64,
}

impl PowerBudget {
    pub fn new(p_a_max: f64, p_j_max: f64) -> Result<Self> {
        Ok(Self {
            p_a_max: nonneg("p_a_max", p_a_max)?,
            p_j_max: nonneg("p_j_max", p_j_max)?,
        })
    }

    pub fn validate(&self) -> Result<()> {
        nonneg("p_a_max", self.p_a_max)?;
        nonneg("p_j_max", self.p_j_max)?;
        Ok(())
    }
}

/// Cooperation level in `[0, 1]`; `1` is equal cooperation in both
/// directions.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct CooperationLevel(f64);

impl CooperationLevel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidInput {
                name: "alpha",
                value: alpha,
                reason: "cooperation level must lie in [0, 1]",
            });
        }
        Ok(Self(alpha))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    pub(crate) fn require_positive(self) -> Result<f64> {
        positive("alpha", self.0)
    }
}

impl TryFrom<f64> for CooperationLevel {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<CooperationLevel> for f64 {
    fn from(a: CooperationLevel) -> f64 {
        a.0
    }
}

/// Lagrange multiplier pricing transmit power in every stationarity
/// condition.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct DualPrice(f64);

impl DualPrice {
    pub fn new(lambda: f64) -> Result<Self> {
        nonneg("lambda", lambda).map(Self)
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for DualPrice {
    fn default() -> Self {
        Self(1.0)
    }
}

impl TryFrom<f64> for DualPrice {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<DualPrice> for f64 {
    fn from(l: DualPrice) -> f64 {
        l.0
    }
}

/// Everything an allocator needs besides geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub gains: ChannelGains,
    pub sigma2: f64,
    pub alpha: CooperationLevel,
    pub lambda: DualPrice,
    pub budgets: PowerBudget,
}

impl ScenarioConfig {
    pub fn new(
        gains: ChannelGains,
        sigma2: f64,
        alpha: f64,
        lambda: f64,
        budgets: PowerBudget,
    ) -> Result<Self> {
        let cfg = Self {
            gains,
            sigma2,
            alpha: CooperationLevel::new(alpha)?,
            lambda: DualPrice::new(lambda)?,
            budgets,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reference gains, unit noise, `alpha = 0.8`, `lambda = 1`, budgets of 10.
    pub fn reference() -> Self {
        Self {
            gains: ChannelGains::reference(),
            sigma2: 1.0,
            alpha: CooperationLevel(0.8),
            lambda: DualPrice(1.0),
            budgets: PowerBudget {
                p_a_max: 10.0,
                p_j_max: 10.0,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.gains.validate()?;
        positive("sigma2", self.sigma2)?;
        self.budgets.validate()
    }

    pub fn with_gains(mut self, gains: ChannelGains) -> Self {
        self.gains = gains;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        self.lambda = DualPrice::new(lambda)?;
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = CooperationLevel::new(alpha)?;
        Ok(self)
    }

    pub fn with_budgets(mut self, p_a_max: f64, p_j_max: f64) -> Result<Self> {
        self.budgets = PowerBudget::new(p_a_max, p_j_max)?;
        Ok(self)
    }
}

fn check_sigma2(sigma2: f64) -> Result<f64> {
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::InvalidInput {
            name: "sigma2",
            value: sigma2,
            reason: "noise power must be strictly positive",
        });
    }
    Ok(sigma2)
}

/// Received SNR of a direct link, `gain * power / sigma2`.
pub fn snr_direct(gain: f64, power: f64, sigma2: f64) -> Result<f64> {
    let sigma2 = check_sigma2(sigma2)?;
    Ok(nonneg("gain", gain)? * nonneg("power", power)? / sigma2)
}

/// SNR delivered over the amplify-and-forward path source → relay → sink,
/// where `p_i` is the source power and `p_rk` the relay's forwarding power.
pub fn snr_relay_path(g_ir: f64, g_rk: f64, p_i: f64, p_rk: f64, sigma2: f64) -> Result<f64> {
    let sigma2 = check_sigma2(sigma2)?;
    let g_ir = nonneg("g_ir", g_ir)?;
    let g_rk = nonneg("g_rk", g_rk)?;
    let p_i = nonneg("p_i", p_i)?;
    let p_rk = nonneg("p_rk", p_rk)?;
    Ok(g_ir * g_rk * p_i * p_rk / (sigma2 * (g_ir * p_i + g_rk * p_rk + sigma2)))
}

/// Path-loss scaled gain `gain / distance^eta`.
pub fn effective_gain(gain: f64, distance: f64, eta: f64) -> Result<f64> {
    let gain = nonneg("gain", gain)?;
    let distance = positive("distance", distance)?;
    if eta.is_nan() || eta < 1.0 {
        return Err(Error::InvalidInput {
            name: "eta",
            value: eta,
            reason: "path-loss exponent must be at least 1",
        });
    }
    Ok(gain / distance.powf(eta))
}
