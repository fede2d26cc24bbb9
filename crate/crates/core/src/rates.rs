//! Achievable rates and secrecy rates.
//!
//! Rates are natural-log (nats). The eavesdropper only ever sees the main
//! messages, so relayed SNR never enters an eavesdropper term.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{nonneg, Error, Result};
use crate::model::{snr_direct, snr_relay_path, ChannelGains};

/// The four cooperation scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// Both transmitters relay each other's data (amplify-and-forward).
    RelayCoop,
    /// Both donate transmit power to the other, no relaying.
    MacCoop,
    /// John helps Alice, Alice does not help John.
    OneSideCoop,
    NonCoop,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] = [
        ScenarioKind::RelayCoop,
        ScenarioKind::MacCoop,
        ScenarioKind::OneSideCoop,
        ScenarioKind::NonCoop,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::RelayCoop => "relay-coop",
            ScenarioKind::MacCoop => "mac-coop",
            ScenarioKind::OneSideCoop => "one-side-coop",
            ScenarioKind::NonCoop => "non-coop",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario `{s}`")))
    }
}

/// Transmit powers: main signals `p_a`, `p_j` and relay powers `p_ab`
/// (Alice forwarding John) and `p_jb` (John forwarding Alice).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Powers {
    pub p_a: f64,
    pub p_j: f64,
    pub p_ab: f64,
    pub p_jb: f64,
}

impl Powers {
    pub fn main(p_a: f64, p_j: f64) -> Self {
        Self {
            p_a,
            p_j,
            ..Self::default()
        }
    }

    pub fn relayed(p_a: f64, p_j: f64, p_ab: f64, p_jb: f64) -> Self {
        Self { p_a, p_j, p_ab, p_jb }
    }
}

/// Secrecy rates of Alice (`cs1`) and John (`cs2`). Raw values may be
/// negative.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub cs1: f64,
    pub cs2: f64,
}

impl RatePair {
    pub fn clamped(self) -> Self {
        Self {
            cs1: self.cs1.max(0.0),
            cs2: self.cs2.max(0.0),
        }
    }
}

/// Bounds on `R1`, `R2` and `R1 + R2`; the region is the intersection of the
/// three half-planes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecrecyRegion {
    pub r1_max: f64,
    pub r2_max: f64,
    pub sum_max: f64,
}

impl SecrecyRegion {
    pub fn contains(&self, r1: f64, r2: f64) -> bool {
        r1 >= 0.0 && r2 >= 0.0 && r1 <= self.r1_max && r2 <= self.r2_max && r1 + r2 <= self.sum_max
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionVariant {
    /// Both transmitters face the eavesdropper.
    #[default]
    Full,
    /// Only Alice is targeted; John's bound carries no leakage term.
    OneSide,
}

/// Display base for rates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "e")]
    Natural,
    #[serde(rename = "2")]
    Two,
}

impl LogBase {
    pub fn express(self, nats: f64) -> f64 {
        match self {
            LogBase::Natural => nats,
            LogBase::Two => nats / std::f64::consts::LN_2,
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "nat" | "natural" => Ok(LogBase::Natural),
            "2" | "bit" | "bits" => Ok(LogBase::Two),
            other => Err(Error::Config(format!("unknown log base `{other}` (use e or 2)"))),
        }
    }
}

/// `ln(1 + snr)`.
pub fn rate_p2p(snr: f64) -> Result<f64> {
    Ok(nonneg("snr", snr)?.ln_1p())
}

/// Rate at Bob when the direct copy and the relayed copy are combined by
/// maximum-ratio combining: `ln(1 + snr_direct + snr_relayed)`.
pub fn rate_mrc_relay(snr_direct: f64, snr_relayed: f64) -> Result<f64> {
    Ok((nonneg("snr_direct", snr_direct)? + nonneg("snr_relayed", snr_relayed)?).ln_1p())
}

fn wiretap(g_b: f64, g_e: f64, power: f64, sigma2: f64) -> Result<f64> {
    Ok(rate_p2p(snr_direct(g_b, power, sigma2)?)? - rate_p2p(snr_direct(g_e, power, sigma2)?)?)
}

/// Raw secrecy rates of both transmitters for the given scenario.
///
/// * `RelayCoop`: Bob MRC-combines Alice's direct signal with the copy John
///   forwards (`p_jb`), and symmetrically for John with `p_ab`.
/// * `MacCoop`: Alice's objective is driven by the power John donates,
///   `alpha * p_j`, on Alice's links; John's by `p_a / alpha` on his links.
/// * `OneSideCoop`: both rates are evaluated on Alice's link pair, `cs1` with
///   `p_a` and `cs2` with John's donated `alpha * p_j`.
/// * `NonCoop`: each transmitter on its own links with its own power.
///
/// Relay powers are ignored outside `RelayCoop`.
pub fn secrecy_rate(
    kind: ScenarioKind,
    gains: &ChannelGains,
    sigma2: f64,
    alpha: f64,
    powers: Powers,
) -> Result<RatePair> {
    let Powers { p_a, p_j, p_ab, p_jb } = powers;
    nonneg("p_a", p_a)?;
    nonneg("p_j", p_j)?;
    nonneg("alpha", alpha)?;
    let g = gains;
    let pair = match kind {
        ScenarioKind::RelayCoop => {
            nonneg("p_ab", p_ab)?;
            nonneg("p_jb", p_jb)?;
            let ajb = snr_relay_path(g.g_aj, g.g_jb, p_a, p_jb, sigma2)?;
            let jab = snr_relay_path(g.g_ja(), g.g_ab, p_j, p_ab, sigma2)?;
            let cs1 = rate_mrc_relay(snr_direct(g.g_ab, p_a, sigma2)?, ajb)?
                - rate_p2p(snr_direct(g.g_ae, p_a, sigma2)?)?;
            let cs2 = rate_mrc_relay(snr_direct(g.g_jb, p_j, sigma2)?, jab)?
                - rate_p2p(snr_direct(g.g_je, p_j, sigma2)?)?;
            RatePair { cs1, cs2 }
        }
        ScenarioKind::MacCoop => {
            if alpha == 0.0 {
                return Err(Error::InvalidInput {
                    name: "alpha",
                    value: alpha,
                    reason: "John's donated power p_a / alpha needs alpha > 0",
                });
            }
            RatePair {
                cs1: wiretap(g.g_ab, g.g_ae, alpha * p_j, sigma2)?,
                cs2: wiretap(g.g_jb, g.g_je, p_a / alpha, sigma2)?,
            }
        }
        ScenarioKind::OneSideCoop => RatePair {
            cs1: wiretap(g.g_ab, g.g_ae, p_a, sigma2)?,
            cs2: wiretap(g.g_ab, g.g_ae, alpha * p_j, sigma2)?,
        },
        ScenarioKind::NonCoop => RatePair {
            cs1: wiretap(g.g_ab, g.g_ae, p_a, sigma2)?,
            cs2: wiretap(g.g_jb, g.g_je, p_j, sigma2)?,
        },
    };
    Ok(pair)
}

/// Gaussian-signalling evaluation of the secrecy rate region.
pub fn mac_secrecy_region(
    gains: &ChannelGains,
    sigma2: f64,
    p_a: f64,
    p_j: f64,
    variant: RegionVariant,
) -> Result<SecrecyRegion> {
    let ab = snr_direct(gains.g_ab, p_a, sigma2)?;
    let ae = snr_direct(gains.g_ae, p_a, sigma2)?;
    let jb = snr_direct(gains.g_jb, p_j, sigma2)?;
    let je = snr_direct(gains.g_je, p_j, sigma2)?;
    let r1 = ab.ln_1p() - ae.ln_1p();
    let (r2, sum) = match variant {
        RegionVariant::Full => (jb.ln_1p() - je.ln_1p(), (ab + jb).ln_1p() - (ae + je).ln_1p()),
        RegionVariant::OneSide => (jb.ln_1p(), (ab + jb).ln_1p() - ae.ln_1p()),
    };
    Ok(SecrecyRegion {
        r1_max: r1.max(0.0),
        r2_max: r2.max(0.0),
        sum_max: sum.max(0.0),
    })
}

/// Secrecy rates when cooperative power also couples the two transmitters
/// over their mutual link.
///
/// Each transmitter keeps its non-cooperative secrecy rate and gains
/// `ln(1 + snr_to_eve(help)) - ln(1 + snr_to_partner(help))` from the
/// partner's cooperative power `help`. The increment grows with `help`
/// exactly when the eavesdropper link is stronger than the partner link,
/// which is the marginal comparison behind the distance constraints in
/// [`crate::protocol`]. Gains are expected to be path-loss scaled already.
pub fn coupled_secrecy(
    gains: &ChannelGains,
    sigma2: f64,
    alpha: f64,
    main: Powers,
    help_to_alice: f64,
    help_to_john: f64,
) -> Result<RatePair> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::InvalidInput {
            name: "alpha",
            value: alpha,
            reason: "coupling divides by the cooperation level",
        });
    }
    let base = secrecy_rate(ScenarioKind::NonCoop, gains, sigma2, alpha, main)?;
    let h_a = nonneg("help_to_alice", help_to_alice)?;
    let h_j = nonneg("help_to_john", help_to_john)?;
    let g = gains;
    let alice = wiretap(g.g_ae, g.g_aj, alpha * h_a, sigma2)?;
    let john = wiretap(g.g_je, g.g_ja(), h_j / alpha, sigma2)?;
    Ok(RatePair {
        cs1: base.cs1 + alice,
        cs2: base.cs2 + john,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn p2p_rate_examples() {
        assert_eq!(rate_p2p(0.0).unwrap(), 0.0);
        assert!(close(rate_p2p(std::f64::consts::E - 1.0).unwrap(), 1.0, 1e-15));
        assert!(close(rate_p2p(1.5).unwrap(), 0.916_290_731_874_155, 1e-12));
        assert!(rate_p2p(-0.1).is_err());
    }

    #[test]
    fn mrc_rate_examples() {
        let relayed = 2.5 / 4.5;
        assert!(close(rate_mrc_relay(2.0, relayed).unwrap(), 1.268_511_325_463_507, 1e-12));
        assert_eq!(rate_mrc_relay(1.5, 0.0).unwrap(), rate_p2p(1.5).unwrap());
        assert_eq!(rate_mrc_relay(0.0, 0.0).unwrap(), 0.0);
        assert!(rate_mrc_relay(-1.0, 0.0).is_err());
    }

    #[test]
    fn secrecy_rate_examples() {
        let g = ChannelGains::reference();
        let nc = secrecy_rate(ScenarioKind::NonCoop, &g, 1.0, 0.8, Powers::main(5.0, 0.0)).unwrap();
        assert!(close(nc.cs1, 3f64.ln() - 2.5f64.ln(), 1e-12));
        assert!(close(nc.cs1, 0.182_321_556_793_954_7, 1e-12));

        let sym = ChannelGains::new(0.4, 0.4, 0.5, 0.5, 0.2).unwrap();
        let s = secrecy_rate(ScenarioKind::NonCoop, &sym, 1.0, 0.8, Powers::main(7.0, 3.0)).unwrap();
        assert_eq!(s.cs1, 0.0);
        assert_eq!(s.cs2, 0.0);

        let rc = secrecy_rate(
            ScenarioKind::RelayCoop,
            &g,
            1.0,
            0.8,
            Powers::relayed(5.0, 0.0, 0.0, 5.0),
        )
        .unwrap();
        assert!(close(rc.cs1, 0.352_220_593_589_352, 1e-12));
    }

    #[test]
    fn mac_coop_needs_positive_alpha() {
        let g = ChannelGains::reference();
        assert!(secrecy_rate(ScenarioKind::MacCoop, &g, 1.0, 0.0, Powers::main(1.0, 1.0)).is_err());
    }

    #[test]
    fn donated_power_interpretation() {
        let g = ChannelGains::reference();
        let mac = secrecy_rate(ScenarioKind::MacCoop, &g, 1.0, 0.5, Powers::main(2.0, 4.0)).unwrap();
        let by_hand_1 = (0.4f64 * 2.0).ln_1p() - (0.3f64 * 2.0).ln_1p();
        let by_hand_2 = (0.5f64 * 4.0).ln_1p() - (0.3f64 * 4.0).ln_1p();
        assert!(close(mac.cs1, by_hand_1, 1e-14));
        assert!(close(mac.cs2, by_hand_2, 1e-14));

        let one = secrecy_rate(ScenarioKind::OneSideCoop, &g, 1.0, 0.5, Powers::main(2.0, 4.0)).unwrap();
        assert!(close(one.cs1, (0.8f64).ln_1p() - (0.6f64).ln_1p(), 1e-14));
        assert!(close(one.cs2, by_hand_1, 1e-14));
    }

    #[test]
    fn clamped_drops_negative_rates() {
        let r = RatePair { cs1: -0.2, cs2: 0.3 }.clamped();
        assert_eq!(r, RatePair { cs1: 0.0, cs2: 0.3 });
    }

    #[test]
    fn region_examples() {
        let g = ChannelGains::reference();
        let zero = mac_secrecy_region(&g, 1.0, 0.0, 0.0, RegionVariant::Full).unwrap();
        assert_eq!((zero.r1_max, zero.r2_max, zero.sum_max), (0.0, 0.0, 0.0));

        let r = mac_secrecy_region(&g, 1.0, 5.0, 5.0, RegionVariant::Full).unwrap();
        assert!(close(r.r1_max, 0.182_321_556_793_954_7, 1e-12));
        assert!(close(r.r2_max, 0.336_472_236_621_213, 1e-12));
        assert!(close(r.sum_max, 0.318_453_731_118_534_7, 1e-12));

        let degraded = ChannelGains::new(0.2, 0.5, 0.1, 0.6, 0.2).unwrap();
        let d = mac_secrecy_region(&degraded, 1.0, 5.0, 5.0, RegionVariant::Full).unwrap();
        assert_eq!((d.r1_max, d.r2_max, d.sum_max), (0.0, 0.0, 0.0));

        let one = mac_secrecy_region(&g, 1.0, 5.0, 5.0, RegionVariant::OneSide).unwrap();
        assert!(close(one.r2_max, 3.5f64.ln(), 1e-12));
        assert!(close(one.sum_max, 5.5f64.ln() - 2.5f64.ln(), 1e-12));
        assert!(one.contains(0.1, 0.2));
        assert!(!one.contains(0.3, 0.0));
    }

    #[test]
    fn zero_power_gives_zero_rates_everywhere() {
        let g = ChannelGains::reference();
        for kind in ScenarioKind::ALL {
            let r = secrecy_rate(kind, &g, 1.0, 0.8, Powers::default()).unwrap();
            assert_eq!(r, RatePair::default(), "{kind}");
        }
    }

    #[test]
    fn scenario_names_round_trip() {
        for kind in ScenarioKind::ALL {
            assert_eq!(kind.as_str().parse::<ScenarioKind>().unwrap(), kind);
            let json = serde_json::to_string(&kind).unwrap();
            assert_eq!(json, format!("\"{}\"", kind.as_str()));
        }
    }

    #[test]
    fn bits_are_nats_over_ln2() {
        assert_eq!(LogBase::Two.express(2.0), 2.0 / std::f64::consts::LN_2);
        assert_eq!(LogBase::Natural.express(2.0), 2.0);
    }

    #[test]
    fn coupling_sign_follows_link_comparison() {
        // Eve hears Alice better than John does: cooperation helps Alice.
        let helps = ChannelGains::new(0.4, 0.3, 0.5, 0.3, 0.2).unwrap();
        let a = coupled_secrecy(&helps, 1.0, 0.8, Powers::main(5.0, 5.0), 0.0, 0.0).unwrap();
        let b = coupled_secrecy(&helps, 1.0, 0.8, Powers::main(5.0, 5.0), 3.0, 3.0).unwrap();
        assert!(b.cs1 > a.cs1);
        // John's link stronger than Eve's: cooperation hurts Alice.
        let hurts = ChannelGains::new(0.4, 0.1, 0.5, 0.3, 0.2).unwrap();
        let c = coupled_secrecy(&hurts, 1.0, 0.8, Powers::main(5.0, 5.0), 3.0, 0.0).unwrap();
        let base = secrecy_rate(ScenarioKind::NonCoop, &hurts, 1.0, 0.8, Powers::main(5.0, 5.0)).unwrap();
        assert!(c.cs1 < base.cs1);
    }

    proptest! {
        #[test]
        fn relay_rate_grows_with_relay_power(p_a in 0.0..20.0f64, p in 0.0..20.0f64, dp in 0.0..10.0f64) {
            let g = ChannelGains::reference();
            let lo = secrecy_rate(ScenarioKind::RelayCoop, &g, 1.0, 0.8, Powers::relayed(p_a, 0.0, 0.0, p)).unwrap();
            let hi = secrecy_rate(ScenarioKind::RelayCoop, &g, 1.0, 0.8, Powers::relayed(p_a, 0.0, 0.0, p + dp)).unwrap();
            prop_assert!(hi.cs1 >= lo.cs1 - 1e-15);
        }

        #[test]
        fn relaying_never_hurts(
            g_ab in 0.01..1.0f64, g_ae in 0.01..1.0f64, g_aj in 0.01..1.0f64, g_jb in 0.01..1.0f64,
            p_a in 0.0..20.0f64, p_jb in 0.0..20.0f64,
        ) {
            let g = ChannelGains::new(g_ab, g_ae, g_jb, 0.3, g_aj).unwrap();
            let relay = secrecy_rate(ScenarioKind::RelayCoop, &g, 1.0, 0.8, Powers::relayed(p_a, 0.0, 0.0, p_jb)).unwrap();
            let none = secrecy_rate(ScenarioKind::NonCoop, &g, 1.0, 0.8, Powers::main(p_a, 0.0)).unwrap();
            prop_assert!(relay.cs1 >= none.cs1 - 1e-15);
        }

        #[test]
        fn region_is_monotone_in_gains(
            g_ab in 0.01..1.0f64, g_ae in 0.01..1.0f64, g_jb in 0.01..1.0f64, g_je in 0.01..1.0f64,
            bump in 0.0..0.5f64, p_a in 0.0..20.0f64, p_j in 0.0..20.0f64,
        ) {
            let base = ChannelGains::new(g_ab, g_ae, g_jb, g_je, 0.2).unwrap();
            let r = mac_secrecy_region(&base, 1.0, p_a, p_j, RegionVariant::Full).unwrap();
            let better = ChannelGains::new(g_ab + bump, g_ae, g_jb + bump, g_je, 0.2).unwrap();
            let rb = mac_secrecy_region(&better, 1.0, p_a, p_j, RegionVariant::Full).unwrap();
            prop_assert!(rb.r1_max >= r.r1_max - 1e-15);
            prop_assert!(rb.r2_max >= r.r2_max - 1e-15);
            prop_assert!(rb.sum_max >= r.sum_max - 1e-15);
            let worse = ChannelGains::new(g_ab, g_ae + bump, g_jb, g_je + bump, 0.2).unwrap();
            let rw = mac_secrecy_region(&worse, 1.0, p_a, p_j, RegionVariant::Full).unwrap();
            prop_assert!(rw.r1_max <= r.r1_max + 1e-15);
            prop_assert!(rw.r2_max <= r.r2_max + 1e-15);
            prop_assert!(rw.sum_max <= r.sum_max + 1e-15);
        }
    }
}
