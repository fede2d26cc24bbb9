//! Optimal power allocation.
//!
//! Every scenario splits into one-dimensional side problems: a single power
//! variable on `[0, upper]` with a priced secrecy objective. Candidates are
//! the real roots of the published polynomial, the real roots of the
//! objective's own stationarity condition, and both endpoints; the argmax of
//! the objective wins, ties going to the smaller power.

pub mod closed_form;
pub mod coefficients;
pub mod poly;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Geometry, ScenarioConfig};
use crate::rates::{secrecy_rate, Powers, RatePair, ScenarioKind};

pub use closed_form::{evaluate_closed_form, evaluate_closed_forms, FormulaId};
pub use coefficients::{beta_coefficients, psi_coefficients};
pub use poly::{solve_cubic_real, solve_quadratic_real, PolynomialCoefficients};

/// Slack allowed on budgets and on the relay coupling.
pub const BUDGET_TOL: f64 = 1e-9;

/// Roots of the two polynomial sources closer than this count as one.
const SAME_ROOT_TOL: f64 = 1e-9;

const FIXED_POINT_MAX_ITER: usize = 50;
const FIXED_POINT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variable {
    #[serde(rename = "p_a")]
    PA,
    #[serde(rename = "p_j")]
    PJ,
    #[serde(rename = "p_ab")]
    PAB,
    #[serde(rename = "p_jb")]
    PJB,
}

impl Variable {
    pub fn as_str(self) -> &'static str {
        match self {
            Variable::PA => "p_a",
            Variable::PJ => "p_j",
            Variable::PAB => "p_ab",
            Variable::PJB => "p_jb",
        }
    }
}

/// Where the selected power sits on its feasible interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    InteriorStationary,
    BudgetClamped,
    ZeroClamped,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::InteriorStationary => "interior-stationary",
            Provenance::BudgetClamped => "budget-clamped",
            Provenance::ZeroClamped => "zero-clamped",
        }
    }
}

/// Which candidate list produced the selected power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootSource {
    /// A root of the published polynomial.
    Printed,
    /// A root of the objective's own first-order condition.
    Stationarity,
    Endpoint,
}

/// How relay coefficients treat the main powers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelayMode {
    /// Coefficients evaluated once at the seeds.
    #[default]
    OneShot,
    /// Re-evaluate at `p_a = P_A - alpha p_jb` until the relay power settles.
    FixedPoint,
}

/// Main powers at which the relay cubics are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaySeeds {
    pub p_a: f64,
    pub p_j: f64,
}

impl RelaySeeds {
    /// Full budgets, i.e. no relay power spent yet.
    pub fn from_budgets(cfg: &ScenarioConfig) -> Self {
        Self {
            p_a: cfg.budgets.p_a_max,
            p_j: cfg.budgets.p_j_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Beneficiary {
    Alice,
    John,
}

/// Priced secrecy objective of one side problem:
/// `cs(kind, powers with variable = x) - lambda x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideObjective {
    pub kind: ScenarioKind,
    pub gains: crate::model::ChannelGains,
    pub sigma2: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub variable: Variable,
    pub fixed: Powers,
    pub beneficiary: Beneficiary,
}

impl SideObjective {
    fn powers(&self, x: f64) -> Powers {
        let mut p = self.fixed;
        match self.variable {
            Variable::PA => p.p_a = x,
            Variable::PJ => p.p_j = x,
            Variable::PAB => p.p_ab = x,
            Variable::PJB => p.p_jb = x,
        }
        p
    }

    /// Unpriced secrecy rate of the beneficiary.
    pub fn secrecy(&self, x: f64) -> Result<f64> {
        let r = secrecy_rate(self.kind, &self.gains, self.sigma2, self.alpha, self.powers(x))?;
        Ok(match self.beneficiary {
            Beneficiary::Alice => r.cs1,
            Beneficiary::John => r.cs2,
        })
    }

    /// Priced objective; NaN outside the domain of the rate formulas.
    pub fn eval(&self, x: f64) -> f64 {
        self.secrecy(x).map(|v| v - self.lambda * x).unwrap_or(f64::NAN)
    }
}

/// One power variable to optimise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideProblem {
    pub formula: FormulaId,
    pub variable: Variable,
    pub upper: f64,
    pub printed: PolynomialCoefficients,
    pub stationary: PolynomialCoefficients,
    pub objective: SideObjective,
    pub closed_form: Option<FormulaId>,
    /// `(g_b, g_e)` for non-cooperative sides, where an increasing unpriced
    /// objective means spending the whole budget.
    pub full_power: Option<(f64, f64)>,
}

/// The outcome of one side problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub variable: Variable,
    pub formula: FormulaId,
    pub value: f64,
    pub upper: f64,
    pub provenance: Provenance,
    pub root_source: RootSource,
    pub printed_roots: Vec<f64>,
    pub stationary_roots: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalAllocation {
    pub p_a: f64,
    pub p_j: f64,
    pub p_ab: f64,
    pub p_jb: f64,
    pub mode: ScenarioKind,
    pub cs: RatePair,
    pub provenance: Provenance,
    /// Decisions that set the powers, Alice's side first.
    pub decisions: Vec<Decision>,
    /// The relay cubic in `p_ab`, solved for the report only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub companion: Option<Decision>,
    /// Degenerate outcome: no power could be usefully spent.
    pub flagged: bool,
}

impl OptimalAllocation {
    /// Provenance of every driving decision, `|`-separated.
    pub fn provenance_label(&self) -> String {
        self.decisions
            .iter()
            .map(|d| d.provenance.as_str())
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn powers(&self) -> Powers {
        Powers::relayed(self.p_a, self.p_j, self.p_ab, self.p_jb)
    }
}

fn roots_or_empty(p: &PolynomialCoefficients) -> Result<Vec<f64>> {
    match p.real_roots() {
        Err(Error::ZeroPolynomial) => Ok(Vec::new()),
        other => other,
    }
}

fn classify(value: f64, upper: f64) -> Provenance {
    if value <= 0.0 {
        Provenance::ZeroClamped
    } else if value >= upper {
        Provenance::BudgetClamped
    } else {
        Provenance::InteriorStationary
    }
}

/// Solves one side problem by exhaustive candidate comparison.
pub fn solve_side(problem: &SideProblem) -> Result<Decision> {
    select(problem, true)
}

fn select(problem: &SideProblem, full_power_rule: bool) -> Result<Decision> {
    let upper = problem.upper;
    let printed_roots = roots_or_empty(&problem.printed)?;
    let stationary_roots = roots_or_empty(&problem.stationary)?;
    let inside = |r: &f64| *r >= 0.0 && *r <= upper;

    let mut candidates = vec![(0.0, RootSource::Endpoint)];
    candidates.extend(printed_roots.iter().copied().filter(inside).map(|r| (r, RootSource::Printed)));
    candidates.extend(
        stationary_roots
            .iter()
            .copied()
            .filter(inside)
            .filter(|r| printed_roots.iter().all(|p| (p - r).abs() > SAME_ROOT_TOL))
            .map(|r| (r, RootSource::Stationarity)),
    );
    if upper > 0.0 {
        candidates.push((upper, RootSource::Endpoint));
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best: Option<(f64, RootSource, f64)> = None;
    for &(x, source) in &candidates {
        let f = problem.objective.eval(x);
        if !f.is_finite() {
            return Err(Error::NonFinite { x });
        }
        if best.is_none_or(|(_, _, fb)| f > fb) {
            best = Some((x, source, f));
        }
    }
    let (mut value, mut root_source, mut objective) = best.expect("candidate list holds 0");

    if full_power_rule && upper > 0.0 {
        if let Some((g_b, g_e)) = problem.full_power {
            let interior = candidates
                .iter()
                .any(|&(x, s)| s != RootSource::Endpoint && x > 0.0 && x < upper);
            if g_b > g_e && !interior {
                value = upper;
                root_source = RootSource::Endpoint;
                objective = problem.objective.eval(upper);
            }
        }
    }

    Ok(Decision {
        variable: problem.variable,
        formula: problem.formula,
        value,
        upper,
        provenance: classify(value, upper),
        root_source,
        printed_roots,
        stationary_roots,
        objective,
    })
}

/// Builds the side problems of a scenario.
///
/// With a geometry, objectives run on path-loss scaled gains; the
/// power-cooperation scenario additionally switches to the distance-augmented
/// published quadratics. `seeds` only matters for `RelayCoop`.
pub fn side_problems(
    kind: ScenarioKind,
    cfg: &ScenarioConfig,
    geometry: Option<&Geometry>,
    seeds: RelaySeeds,
) -> Result<Vec<SideProblem>> {
    cfg.validate()?;
    let raw = cfg.gains;
    let gains = match geometry {
        Some(geo) => raw.attenuated(geo)?,
        None => raw,
    };
    let s2 = cfg.sigma2;
    let alpha = cfg.alpha.get();
    let lambda = cfg.lambda.get();
    let (pa_max, pj_max) = (cfg.budgets.p_a_max, cfg.budgets.p_j_max);
    let g = gains;

    let objective = |kind, variable, fixed, beneficiary| SideObjective {
        kind,
        gains,
        sigma2: s2,
        alpha,
        lambda,
        variable,
        fixed,
        beneficiary,
    };
    let donated = coefficients::donated_power_stationarity;

    let problems = match kind {
        ScenarioKind::NonCoop => vec![
            SideProblem {
                formula: FormulaId::NoncoopAliceQuadratic,
                variable: Variable::PA,
                upper: pa_max,
                printed: coefficients::published_own_power_alice(&g, s2, lambda),
                stationary: donated(g.g_ab, g.g_ae, 1.0, s2, lambda),
                objective: objective(kind, Variable::PA, Powers::default(), Beneficiary::Alice),
                closed_form: Some(FormulaId::NoncoopAliceClosedForm),
                full_power: Some((g.g_ab, g.g_ae)),
            },
            SideProblem {
                formula: FormulaId::NoncoopJohnQuadratic,
                variable: Variable::PJ,
                upper: pj_max,
                printed: coefficients::published_own_power_john(&g, s2, lambda),
                stationary: donated(g.g_jb, g.g_je, 1.0, s2, lambda),
                objective: objective(kind, Variable::PJ, Powers::default(), Beneficiary::John),
                closed_form: Some(FormulaId::NoncoopJohnClosedForm),
                full_power: Some((g.g_jb, g.g_je)),
            },
        ],
        ScenarioKind::MacCoop => {
            let alpha = cfg.alpha.require_positive()?;
            let (alice, john, alice_id, john_id, alice_cf, john_cf) = match geometry {
                Some(geo) => (
                    coefficients::published_distance_mac_alice(&raw, geo, s2, alpha, lambda),
                    coefficients::published_distance_mac_john(&raw, geo, s2, alpha, lambda),
                    FormulaId::DistanceMacAliceQuadratic,
                    FormulaId::DistanceMacJohnQuadratic,
                    None,
                    None,
                ),
                None => (
                    coefficients::published_mac_alice(&g, s2, alpha, lambda),
                    coefficients::published_mac_john(&g, s2, alpha, lambda),
                    FormulaId::MacAliceQuadratic,
                    FormulaId::MacJohnQuadratic,
                    Some(FormulaId::MacAliceClosedForm),
                    Some(FormulaId::MacJohnClosedForm),
                ),
            };
            vec![
                SideProblem {
                    formula: alice_id,
                    variable: Variable::PJ,
                    upper: pj_max,
                    printed: alice,
                    stationary: donated(g.g_ab, g.g_ae, alpha, s2, lambda),
                    objective: objective(kind, Variable::PJ, Powers::default(), Beneficiary::Alice),
                    closed_form: alice_cf,
                    full_power: None,
                },
                SideProblem {
                    formula: john_id,
                    variable: Variable::PA,
                    upper: pa_max,
                    printed: john,
                    stationary: donated(g.g_jb, g.g_je, 1.0 / alpha, s2, lambda),
                    objective: objective(kind, Variable::PA, Powers::default(), Beneficiary::John),
                    closed_form: john_cf,
                    full_power: None,
                },
            ]
        }
        ScenarioKind::OneSideCoop => vec![
            SideProblem {
                formula: FormulaId::OneSideMainQuadratic,
                variable: Variable::PA,
                upper: pa_max,
                printed: coefficients::published_own_power_alice(&g, s2, lambda),
                stationary: donated(g.g_ab, g.g_ae, 1.0, s2, lambda),
                objective: objective(kind, Variable::PA, Powers::default(), Beneficiary::Alice),
                closed_form: Some(FormulaId::OneSideMainClosedForm),
                full_power: None,
            },
            SideProblem {
                formula: FormulaId::OneSideHelperQuadratic,
                variable: Variable::PJ,
                upper: pj_max,
                printed: coefficients::published_mac_alice(&g, s2, alpha, lambda),
                stationary: donated(g.g_ab, g.g_ae, alpha, s2, lambda),
                objective: objective(kind, Variable::PJ, Powers::default(), Beneficiary::John),
                closed_form: Some(FormulaId::OneSideHelperClosedForm),
                full_power: None,
            },
        ],
        ScenarioKind::RelayCoop => {
            let alpha = cfg.alpha.require_positive()?;
            let p_a = crate::error::nonneg("p_a seed", seeds.p_a)?;
            let p_j = crate::error::nonneg("p_j seed", seeds.p_j)?;
            vec![
                SideProblem {
                    formula: FormulaId::RelayAliceCubic,
                    variable: Variable::PJB,
                    upper: pj_max.min(pa_max / alpha),
                    printed: psi_coefficients(&g, s2, alpha, lambda, p_a),
                    stationary: coefficients::relay_stationarity(g.g_ab, g.g_aj, g.g_jb, p_a, s2, lambda),
                    objective: objective(
                        kind,
                        Variable::PJB,
                        Powers::relayed(p_a, 0.0, 0.0, 0.0),
                        Beneficiary::Alice,
                    ),
                    closed_form: None,
                    full_power: None,
                },
                SideProblem {
                    formula: FormulaId::RelayJohnCubic,
                    variable: Variable::PAB,
                    upper: pa_max.min(alpha * pj_max),
                    printed: beta_coefficients(&g, s2, alpha, lambda, p_j),
                    stationary: coefficients::relay_stationarity(g.g_jb, g.g_ja(), g.g_ab, p_j, s2, lambda),
                    objective: objective(
                        kind,
                        Variable::PAB,
                        Powers::relayed(0.0, p_j, 0.0, 0.0),
                        Beneficiary::John,
                    ),
                    closed_form: None,
                    full_power: None,
                },
            ]
        }
    };
    Ok(problems)
}

fn two_sided(
    kind: ScenarioKind,
    cfg: &ScenarioConfig,
    geometry: Option<&Geometry>,
) -> Result<OptimalAllocation> {
    let problems = side_problems(kind, cfg, geometry, RelaySeeds::from_budgets(cfg))?;
    let decisions = problems.iter().map(solve_side).collect::<Result<Vec<_>>>()?;
    let mut powers = Powers::default();
    for d in &decisions {
        match d.variable {
            Variable::PA => powers.p_a = d.value,
            Variable::PJ => powers.p_j = d.value,
            _ => unreachable!("two-sided scenarios decide main powers only"),
        }
    }
    let gains = match geometry {
        Some(geo) => cfg.gains.attenuated(geo)?,
        None => cfg.gains,
    };
    let cs = secrecy_rate(kind, &gains, cfg.sigma2, cfg.alpha.get(), powers)?;
    Ok(OptimalAllocation {
        p_a: powers.p_a,
        p_j: powers.p_j,
        p_ab: 0.0,
        p_jb: 0.0,
        mode: kind,
        cs,
        provenance: decisions[0].provenance,
        flagged: decisions.iter().all(|d| d.value == 0.0),
        decisions,
        companion: None,
    })
}

/// Power cooperation: John donates `p_j` to Alice, Alice donates `p_a` to John.
pub fn mac_allocation(cfg: &ScenarioConfig) -> Result<OptimalAllocation> {
    two_sided(ScenarioKind::MacCoop, cfg, None)
}

/// Power cooperation with path-loss scaled links.
pub fn distance_adjusted_mac_allocation(cfg: &ScenarioConfig, geometry: &Geometry) -> Result<OptimalAllocation> {
    geometry.validate()?;
    two_sided(ScenarioKind::MacCoop, cfg, Some(geometry))
}

pub fn one_side_allocation(cfg: &ScenarioConfig) -> Result<OptimalAllocation> {
    two_sided(ScenarioKind::OneSideCoop, cfg, None)
}

/// Each transmitter prices its own power. Without an interior stationary
/// point and with a secrecy advantage, the whole budget is spent.
pub fn noncoop_allocation(cfg: &ScenarioConfig) -> Result<OptimalAllocation> {
    two_sided(ScenarioKind::NonCoop, cfg, None)
}

/// Relay cooperation. John's relay power `p_jb` is chosen first on
/// `[0, min(P_J, P_A / alpha)]`; Alice then relays `p_ab = alpha p_jb`, and
/// the main powers take what is left of each budget.
pub fn relay_allocation(cfg: &ScenarioConfig, seeds: RelaySeeds, mode: RelayMode) -> Result<OptimalAllocation> {
    let alpha = cfg.alpha.require_positive()?;
    let (pa_max, pj_max) = (cfg.budgets.p_a_max, cfg.budgets.p_j_max);

    let mut seeds = seeds;
    let solve = |seeds: RelaySeeds| -> Result<(Decision, Decision)> {
        let problems = side_problems(ScenarioKind::RelayCoop, cfg, None, seeds)?;
        Ok((solve_side(&problems[0])?, solve_side(&problems[1])?))
    };
    let (mut jb, mut ab) = solve(seeds)?;
    if mode == RelayMode::FixedPoint {
        for _ in 0..FIXED_POINT_MAX_ITER {
            seeds = RelaySeeds {
                p_a: (pa_max - alpha * jb.value).max(0.0),
                p_j: (pj_max - jb.value).max(0.0),
            };
            let (next_jb, next_ab) = solve(seeds)?;
            let step = (next_jb.value - jb.value).abs();
            jb = next_jb;
            ab = next_ab;
            if step <= FIXED_POINT_TOL {
                break;
            }
        }
    }

    let p_jb = jb.value;
    let p_ab = (alpha * p_jb).min(pa_max);
    let p_j = (pj_max - p_jb).max(0.0);
    let p_a = (pa_max - p_ab).max(0.0);
    let powers = Powers::relayed(p_a, p_j, p_ab, p_jb);
    let cs = secrecy_rate(ScenarioKind::RelayCoop, &cfg.gains, cfg.sigma2, alpha, powers)?;
    let empty = jb.upper <= 0.0;
    Ok(OptimalAllocation {
        p_a,
        p_j,
        p_ab,
        p_jb,
        mode: if empty { ScenarioKind::NonCoop } else { ScenarioKind::RelayCoop },
        cs,
        provenance: jb.provenance,
        flagged: p_jb == 0.0,
        decisions: vec![jb],
        companion: Some(ab),
    })
}

/// Allocation for any scenario. Relay cooperation uses the fixed-point mode
/// seeded at the full budgets.
pub fn allocate(kind: ScenarioKind, cfg: &ScenarioConfig) -> Result<OptimalAllocation> {
    match kind {
        ScenarioKind::RelayCoop => relay_allocation(cfg, RelaySeeds::from_budgets(cfg), RelayMode::FixedPoint),
        ScenarioKind::MacCoop => mac_allocation(cfg),
        ScenarioKind::OneSideCoop => one_side_allocation(cfg),
        ScenarioKind::NonCoop => noncoop_allocation(cfg),
    }
}

/// Smallest price at which the chosen `variable` stops sitting on its budget,
/// found by bisection to absolute tolerance `tol`. Returns 0 when the budget
/// does not bind even without a price.
pub fn bisect_dual_price(kind: ScenarioKind, cfg: &ScenarioConfig, variable: Variable, tol: f64) -> Result<f64> {
    crate::error::positive("tol", tol)?;
    let binds = |lambda: f64| -> Result<bool> {
        let priced = cfg.with_lambda(lambda)?;
        let problems = side_problems(kind, &priced, None, RelaySeeds::from_budgets(&priced))?;
        let problem = problems
            .iter()
            .find(|p| p.variable == variable)
            .ok_or_else(|| Error::Config(format!("{kind} has no decision on {}", variable.as_str())))?;
        if problem.upper <= 0.0 {
            return Ok(false);
        }
        Ok(select(problem, false)?.provenance == Provenance::BudgetClamped)
    };
    if !binds(0.0)? {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    let mut doublings = 0;
    while binds(hi)? {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Config("budget binds at every price".into()));
        }
    }
    let mut lo = 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if binds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ChannelGains;
    use proptest::prelude::*;

    fn cfg(lambda: f64, alpha: f64, pa: f64, pj: f64) -> ScenarioConfig {
        ScenarioConfig::reference()
            .with_lambda(lambda)
            .unwrap()
            .with_alpha(alpha)
            .unwrap()
            .with_budgets(pa, pj)
            .unwrap()
    }

    #[test]
    fn mac_printed_root_reference_value() {
        let c = cfg(0.01, 0.8, 10.0, 10.0);
        let problems = side_problems(ScenarioKind::MacCoop, &c, None, RelaySeeds::from_budgets(&c)).unwrap();
        let roots = problems[0].printed.real_roots().unwrap();
        let positive: Vec<_> = roots.into_iter().filter(|r| *r > 0.0).collect();
        assert_eq!(positive.len(), 1);
        assert!((positive[0] - 7.7766).abs() < 1e-3, "{positive:?}");
    }

    #[test]
    fn one_side_root_and_budget_clamp() {
        let c = cfg(0.01, 1.0, 10.0, 10.0);
        let a = one_side_allocation(&c).unwrap();
        assert!((a.p_a - 6.2216).abs() < 1e-3);
        assert_eq!(a.decisions[0].provenance, Provenance::InteriorStationary);
        let deriv = 0.4 / (1.0 + 0.4 * a.p_a) - 0.3 / (1.0 + 0.3 * a.p_a);
        assert!((deriv - 0.01).abs() < 1e-12);
        // Alpha = 1 makes both quadratics the same polynomial.
        assert!((a.p_a - a.p_j).abs() <= 1e-9);

        let tight = cfg(0.01, 1.0, 5.0, 5.0);
        let t = one_side_allocation(&tight).unwrap();
        assert_eq!(t.p_a, 5.0);
        assert_eq!(t.decisions[0].provenance, Provenance::BudgetClamped);
    }

    #[test]
    fn noncoop_full_power_at_unit_price() {
        let a = noncoop_allocation(&cfg(1.0, 0.8, 5.0, 5.0)).unwrap();
        assert_eq!((a.p_a, a.p_j), (5.0, 5.0));
        assert_eq!(a.provenance, Provenance::BudgetClamped);
        assert_eq!(a.provenance_label(), "budget-clamped|budget-clamped");
    }

    #[test]
    fn noncoop_interior_root() {
        let a = noncoop_allocation(&cfg(0.01, 0.8, 10.0, 10.0)).unwrap();
        assert!((a.p_a - 6.2216).abs() < 1e-3);
        assert_eq!(a.decisions[0].root_source, RootSource::Printed);
    }

    #[test]
    fn symmetric_gains_allocate_nothing() {
        let g = ChannelGains::new(0.4, 0.4, 0.5, 0.5, 0.2).unwrap();
        let c = cfg(0.5, 0.8, 10.0, 10.0).with_gains(g);
        for a in [noncoop_allocation(&c).unwrap(), mac_allocation(&c).unwrap()] {
            assert_eq!((a.p_a, a.p_j), (0.0, 0.0));
            assert!(a.flagged);
        }
    }

    #[test]
    fn mac_clamps_when_both_roots_negative() {
        let c = cfg(1.0, 0.8, 10.0, 10.0);
        let problems = side_problems(ScenarioKind::MacCoop, &c, None, RelaySeeds::from_budgets(&c)).unwrap();
        assert!(problems[0].printed.real_roots().unwrap().iter().all(|r| *r < 0.0));
        let a = mac_allocation(&c).unwrap();
        assert_eq!(a.p_j, 0.0);
        assert_eq!(a.decisions[0].provenance, Provenance::ZeroClamped);
    }

    #[test]
    fn mac_selects_true_optimum_over_printed_root() {
        // The printed constant term lacks the alpha scale, so its root is not
        // where the objective peaks; the stationarity root wins.
        let c = cfg(0.01, 0.8, 10.0, 10.0);
        let a = mac_allocation(&c).unwrap();
        let d = &a.decisions[0];
        assert_eq!(d.root_source, RootSource::Stationarity);
        assert!((d.value - 7.7766).abs() > 0.1);
        let h = 1e-5;
        let problems = side_problems(ScenarioKind::MacCoop, &c, None, RelaySeeds::from_budgets(&c)).unwrap();
        let f = &problems[0].objective;
        let deriv = (f.eval(d.value + h) - f.eval(d.value - h)) / (2.0 * h);
        assert!(deriv.abs() < 1e-8);
    }

    #[test]
    fn distance_mac_at_unit_distance_is_identical() {
        for (lambda, alpha) in [(0.01, 0.8), (1.0, 0.3), (0.05, 1.0)] {
            let c = cfg(lambda, alpha, 10.0, 7.0);
            let plain = mac_allocation(&c).unwrap();
            let unit = distance_adjusted_mac_allocation(&c, &Geometry::unit(2.0)).unwrap();
            assert_eq!(plain.p_a.to_bits(), unit.p_a.to_bits());
            assert_eq!(plain.p_j.to_bits(), unit.p_j.to_bits());
            assert_eq!(plain.cs, unit.cs);
        }
    }

    #[test]
    fn distance_mac_farther_eve_weakly_raises_donation() {
        let c = cfg(0.01, 0.8, 50.0, 50.0);
        let near = Geometry::new(1.0, 1.0, 1.0, 1.0, 1.0, 2.0).unwrap();
        let far = Geometry::new(1.0, 2.0, 1.0, 1.0, 1.0, 2.0).unwrap();
        let a = distance_adjusted_mac_allocation(&c, &near).unwrap();
        let b = distance_adjusted_mac_allocation(&c, &far).unwrap();
        assert!(b.p_j >= a.p_j);
    }

    #[test]
    fn mac_alpha_one_matches_noncoop() {
        let c = cfg(0.01, 1.0, 10.0, 10.0);
        let mac = mac_allocation(&c).unwrap();
        let nc = noncoop_allocation(&c).unwrap();
        assert!((mac.p_j - nc.p_a).abs() <= 1e-9);
    }

    #[test]
    fn relay_reference_allocation() {
        let c = cfg(1.0, 0.8, 10.0, 10.0);
        let a = relay_allocation(&c, RelaySeeds::from_budgets(&c), RelayMode::OneShot).unwrap();
        assert!((a.p_ab - 0.8 * a.p_jb).abs() <= BUDGET_TOL);
        assert!(a.p_a + a.p_ab <= 10.0 + BUDGET_TOL);
        assert!(a.p_j + a.p_jb <= 10.0 + BUDGET_TOL);
        assert!(a.companion.is_some());
    }

    #[test]
    fn relay_without_price_or_eve_uses_whole_interval() {
        let g = ChannelGains::new(0.4, 0.0, 0.5, 0.0, 0.2).unwrap();
        let c = cfg(0.0, 0.5, 10.0, 10.0).with_gains(g);
        let a = relay_allocation(&c, RelaySeeds::from_budgets(&c), RelayMode::OneShot).unwrap();
        assert_eq!(a.p_jb, 10.0);
        assert_eq!(a.provenance, Provenance::BudgetClamped);
    }

    #[test]
    fn relay_with_no_budget_degenerates() {
        let c = cfg(1.0, 0.8, 0.0, 0.0);
        let a = relay_allocation(&c, RelaySeeds::from_budgets(&c), RelayMode::FixedPoint).unwrap();
        assert_eq!((a.p_ab, a.p_jb), (0.0, 0.0));
        assert_eq!(a.mode, ScenarioKind::NonCoop);
        assert!(a.flagged);
        let nc = secrecy_rate(ScenarioKind::NonCoop, &c.gains, 1.0, 0.8, Powers::main(a.p_a, a.p_j)).unwrap();
        assert_eq!(a.cs, nc);
    }

    #[test]
    fn relay_fixed_point_settles() {
        let c = cfg(0.05, 0.8, 10.0, 10.0);
        let a = relay_allocation(&c, RelaySeeds::from_budgets(&c), RelayMode::FixedPoint).unwrap();
        // One more solve at the settled main power reproduces the relay power.
        let seeds = RelaySeeds { p_a: a.p_a, p_j: a.p_j };
        let again = relay_allocation(&c, seeds, RelayMode::OneShot).unwrap();
        assert!((again.p_jb - a.p_jb).abs() <= 1e-6);
    }

    #[test]
    fn dual_bisection_finds_binding_price() {
        let c = cfg(0.0, 0.8, 5.0, 5.0);
        let lambda = bisect_dual_price(ScenarioKind::NonCoop, &c, Variable::PA, 1e-12).unwrap();
        // Marginal secrecy at the budget.
        let marginal = 0.4 / (1.0 + 0.4 * 5.0) - 0.3 / (1.0 + 0.3 * 5.0);
        assert!((lambda - marginal).abs() < 1e-9, "{lambda} vs {marginal}");

        let g = ChannelGains::new(0.4, 0.4, 0.5, 0.5, 0.2).unwrap();
        let none = bisect_dual_price(ScenarioKind::NonCoop, &c.with_gains(g), Variable::PA, 1e-9).unwrap();
        assert_eq!(none, 0.0);
        assert!(bisect_dual_price(ScenarioKind::NonCoop, &c, Variable::PJB, 1e-9).is_err());
    }

    proptest! {
        #[test]
        fn allocations_respect_budgets_and_beat_candidates(
            g_ab in 0.05..1.0f64, g_ae in 0.05..1.0f64, g_jb in 0.05..1.0f64, g_je in 0.05..1.0f64,
            g_aj in 0.05..1.0f64, lambda in 0.0..0.2f64, alpha in 0.1..1.0f64,
            pa in 0.0..20.0f64, pj in 0.0..20.0f64,
        ) {
            let g = ChannelGains::new(g_ab, g_ae, g_jb, g_je, g_aj).unwrap();
            let c = cfg(lambda, alpha, pa, pj).with_gains(g);
            for kind in ScenarioKind::ALL {
                let a = allocate(kind, &c).unwrap();
                prop_assert!(a.p_a >= 0.0 && a.p_j >= 0.0 && a.p_ab >= 0.0 && a.p_jb >= 0.0);
                prop_assert!(a.p_a + a.p_ab <= pa + BUDGET_TOL);
                prop_assert!(a.p_j + a.p_jb <= pj + BUDGET_TOL);
                if a.mode == ScenarioKind::RelayCoop {
                    prop_assert!((a.p_ab - alpha * a.p_jb).abs() <= BUDGET_TOL);
                }
            }
            for kind in [ScenarioKind::MacCoop, ScenarioKind::OneSideCoop, ScenarioKind::RelayCoop] {
                let problems = side_problems(kind, &c, None, RelaySeeds::from_budgets(&c)).unwrap();
                for p in &problems {
                    let d = solve_side(p).unwrap();
                    let all = d.printed_roots.iter().chain(&d.stationary_roots).copied()
                        .filter(|r| *r >= 0.0 && *r <= p.upper)
                        .chain([0.0, p.upper]);
                    for x in all {
                        prop_assert!(d.objective >= p.objective.eval(x));
                    }
                }
            }
        }
    }
}
