//! Published closed-form optima, evaluated verbatim for comparison against
//! the polynomial roots. Values are not clamped and may be negative.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ChannelGains;

/// Identifies a published stationarity polynomial or closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaId {
    /// Relay cubic in `p_jb` (psi block).
    RelayAliceCubic,
    /// Relay cubic in `p_ab` (beta block).
    RelayJohnCubic,
    /// Power-cooperation quadratic in John's donated `p_j`.
    MacAliceQuadratic,
    /// Power-cooperation quadratic in Alice's donated `p_a`.
    MacJohnQuadratic,
    MacJohnClosedForm,
    MacAliceClosedForm,
    OneSideMainQuadratic,
    OneSideHelperQuadratic,
    OneSideMainClosedForm,
    OneSideHelperClosedForm,
    NoncoopAliceQuadratic,
    NoncoopJohnQuadratic,
    NoncoopAliceClosedForm,
    NoncoopJohnClosedForm,
    DistanceMacAliceQuadratic,
    DistanceMacJohnQuadratic,
}

impl FormulaId {
    pub fn as_str(self) -> &'static str {
        use FormulaId::*;
        match self {
            RelayAliceCubic => "relay-alice-cubic",
            RelayJohnCubic => "relay-john-cubic",
            MacAliceQuadratic => "mac-alice-quadratic",
            MacJohnQuadratic => "mac-john-quadratic",
            MacJohnClosedForm => "mac-john-closed-form",
            MacAliceClosedForm => "mac-alice-closed-form",
            OneSideMainQuadratic => "one-side-main-quadratic",
            OneSideHelperQuadratic => "one-side-helper-quadratic",
            OneSideMainClosedForm => "one-side-main-closed-form",
            OneSideHelperClosedForm => "one-side-helper-closed-form",
            NoncoopAliceQuadratic => "noncoop-alice-quadratic",
            NoncoopJohnQuadratic => "noncoop-john-quadratic",
            NoncoopAliceClosedForm => "noncoop-alice-closed-form",
            NoncoopJohnClosedForm => "noncoop-john-closed-form",
            DistanceMacAliceQuadratic => "distance-mac-alice-quadratic",
            DistanceMacJohnQuadratic => "distance-mac-john-quadratic",
        }
    }

    pub const CLOSED_FORMS: [FormulaId; 6] = [
        FormulaId::MacJohnClosedForm,
        FormulaId::MacAliceClosedForm,
        FormulaId::OneSideMainClosedForm,
        FormulaId::OneSideHelperClosedForm,
        FormulaId::NoncoopAliceClosedForm,
        FormulaId::NoncoopJohnClosedForm,
    ];
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `(1/2) sqrt(num / (lambda g_b g_e)^2) - sigma2 (1/g_e + 1/g_b)` with
/// `num = lambda^2 sigma2^2 (g_b + g_e)^2 + 4 lambda g_b g_e (sigma2 g_b - sigma2 g_e - lambda sigma2^2)`,
/// scaled by `prefactor` in place of the 1/2.
fn priced_form(name: &'static str, prefactor: f64, g_b: f64, g_e: f64, s2: f64, lambda: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Err(Error::Undefined {
            formula: name,
            reason: "divides by lambda",
        });
    }
    if g_b == 0.0 || g_e == 0.0 {
        return Err(Error::Undefined {
            formula: name,
            reason: "divides by a zero gain",
        });
    }
    let s4 = s2 * s2;
    let num = lambda * lambda * s4 * (g_b + g_e).powi(2)
        + 4.0 * lambda * g_b * g_e * (s2 * g_b - s2 * g_e - lambda * s4);
    let radicand = num / (lambda * g_b * g_e).powi(2);
    if radicand < 0.0 {
        return Err(Error::Undefined {
            formula: name,
            reason: "negative radicand",
        });
    }
    Ok(prefactor * radicand.sqrt() - s2 * (1.0 / g_e + 1.0 / g_b))
}

/// `1/(2 lambda alpha) sqrt(num / (g_ab g_ae)^2) - sigma2 (1/g_ae + 1/g_ab)` with
/// `num = (sigma2 g_ab + sigma2 g_ae)^2 + 4 lambda g_ab g_ae (...)`.
fn alpha_form(name: &'static str, g_b: f64, g_e: f64, s2: f64, alpha: f64, lambda: f64) -> Result<f64> {
    if lambda == 0.0 || alpha == 0.0 {
        return Err(Error::Undefined {
            formula: name,
            reason: "divides by lambda * alpha",
        });
    }
    if g_b == 0.0 || g_e == 0.0 {
        return Err(Error::Undefined {
            formula: name,
            reason: "divides by a zero gain",
        });
    }
    let s4 = s2 * s2;
    let num = (s2 * g_b + s2 * g_e).powi(2) + 4.0 * lambda * g_b * g_e * (s2 * g_b - s2 * g_e - lambda * s4);
    let radicand = num / (g_b * g_e).powi(2);
    if radicand < 0.0 {
        return Err(Error::Undefined {
            formula: name,
            reason: "negative radicand",
        });
    }
    Ok(1.0 / (2.0 * lambda * alpha) * radicand.sqrt() - s2 * (1.0 / g_e + 1.0 / g_b))
}

/// Evaluates one closed form. Returns `None` for polynomial ids.
pub fn evaluate_closed_form(
    id: FormulaId,
    gains: &ChannelGains,
    sigma2: f64,
    alpha: f64,
    lambda: f64,
) -> Option<Result<f64>> {
    let g = gains;
    let name = id.as_str();
    let value = match id {
        FormulaId::MacJohnClosedForm => priced_form(name, alpha / 2.0, g.g_jb, g.g_je, sigma2, lambda),
        FormulaId::MacAliceClosedForm | FormulaId::OneSideHelperClosedForm => {
            alpha_form(name, g.g_ab, g.g_ae, sigma2, alpha, lambda)
        }
        FormulaId::OneSideMainClosedForm | FormulaId::NoncoopAliceClosedForm => {
            priced_form(name, 0.5, g.g_ab, g.g_ae, sigma2, lambda)
        }
        FormulaId::NoncoopJohnClosedForm => priced_form(name, 0.5, g.g_jb, g.g_je, sigma2, lambda),
        _ => return None,
    };
    Some(value)
}

/// All six published closed forms.
pub fn evaluate_closed_forms(
    gains: &ChannelGains,
    sigma2: f64,
    alpha: f64,
    lambda: f64,
) -> BTreeMap<FormulaId, Result<f64>> {
    FormulaId::CLOSED_FORMS
        .into_iter()
        .filter_map(|id| evaluate_closed_form(id, gains, sigma2, alpha, lambda).map(|v| (id, v)))
        .collect()
}
