//! Brute-force checks for the allocator: a uniform grid with golden-section
//! refinement, central finite differences, and per-formula validation
//! reports.

use serde::{Deserialize, Serialize};

use crate::allocator::{self, evaluate_closed_form, FormulaId, RelaySeeds, SideProblem, Variable};
use crate::error::{positive, Error, Result};
use crate::model::{Geometry, ScenarioConfig};
use crate::rates::ScenarioKind;

pub const DEFAULT_RESOLUTION: usize = 10_001;

/// Residual below which a point counts as stationary.
pub const STATIONARITY_TOL: f64 = 1e-6;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn finite(x: f64, f: f64) -> Result<f64> {
    if f.is_finite() {
        Ok(f)
    } else {
        Err(Error::NonFinite { x })
    }
}

/// Maximises `f` on `[lo, hi]` over `resolution` evenly spaced points
/// (endpoints included, ties to the smaller `x`), then refines with golden
/// section on the neighbouring cells. Returns `(argmax, max)`.
pub fn grid_search_optimum(f: impl Fn(f64) -> f64, lo: f64, hi: f64, resolution: usize) -> Result<(f64, f64)> {
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::Config(format!("grid interval [{lo}, {hi}] is not a finite interval")));
    }
    if resolution < 2 {
        return Err(Error::Config(format!("grid needs at least 2 points, got {resolution}")));
    }
    if lo == hi {
        return Ok((lo, finite(lo, f(lo))?));
    }
    let step = (hi - lo) / (resolution - 1) as f64;
    let at = |i: usize| if i == resolution - 1 { hi } else { lo + i as f64 * step };

    let mut best_i = 0;
    let mut best = finite(lo, f(lo))?;
    for i in 1..resolution {
        let x = at(i);
        let v = finite(x, f(x))?;
        if v > best {
            best = v;
            best_i = i;
        }
    }

    let a = at(best_i.saturating_sub(1));
    let b = at((best_i + 1).min(resolution - 1));
    let (x, v) = golden_section(&f, a, b, step / 100.0)?;
    if v > best {
        Ok((x, v))
    } else {
        Ok((at(best_i), best))
    }
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = finite(c, f(c))?;
    let mut fd = finite(d, f(d))?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = finite(c, f(c))?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = finite(d, f(d))?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Grid spacing used by [`grid_search_optimum`].
pub fn grid_step(lo: f64, hi: f64, resolution: usize) -> f64 {
    (hi - lo) / (resolution.max(2) - 1) as f64
}

/// Central difference `(f(x + h) - f(x - h)) / 2h`.
pub fn finite_diff_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> Result<f64> {
    positive("h", h)?;
    let up = finite(x + h, f(x + h))?;
    let down = finite(x - h, f(x - h))?;
    Ok((up - down) / (2.0 * h))
}

/// Violation of the first-order optimality conditions of a maximisation on
/// `[lo, hi]`: `|f'|` inside, the positive part of `-f'` at `hi` and of `f'`
/// at `lo`. Derivatives at the endpoints are taken one step inside.
pub fn kkt_residual(f: impl Fn(f64) -> f64, x: f64, lo: f64, hi: f64, h: f64) -> Result<f64> {
    if hi - lo <= 2.0 * h {
        return Ok(0.0);
    }
    let probe = x.clamp(lo + h, hi - h);
    let d = finite_diff_derivative(&f, probe, h)?;
    Ok(if x <= lo {
        d.max(0.0)
    } else if x >= hi {
        (-d).max(0.0)
    } else {
        d.abs()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Agree,
    PaperTypoSuspected,
    Infeasible,
}

/// One published formula against the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationEntry {
    pub formula: FormulaId,
    pub variable: Variable,
    /// Raw published value: the closed form, or the largest non-negative
    /// root of the published polynomial.
    pub paper_value: Option<f64>,
    /// Largest non-negative root of the published polynomial for this
    /// variable.
    pub polynomial_root: Option<f64>,
    /// What following only this formula would allocate on `[0, upper]`.
    pub printed_decision: Option<f64>,
    pub allocator_value: f64,
    pub oracle_value: f64,
    pub oracle_objective: f64,
    pub abs_deviation: Option<f64>,
    pub rel_deviation: Option<f64>,
    pub derivative_residual: Option<f64>,
    pub upper: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub kind: ScenarioKind,
    pub config: ScenarioConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
    pub resolution: usize,
    pub entries: Vec<ValidationEntry>,
}

impl ValidationReport {
    pub fn entry(&self, formula: FormulaId) -> Option<&ValidationEntry> {
        self.entries.iter().find(|e| e.formula == formula)
    }
}

fn largest_nonneg_root(p: &SideProblem) -> Option<f64> {
    p.printed
        .real_roots()
        .ok()?
        .into_iter()
        .rfind(|r| *r >= 0.0)
}

fn judge(
    formula: FormulaId,
    problem: &SideProblem,
    paper_value: Result<Option<f64>>,
    printed_decision: Option<f64>,
    allocator_value: f64,
    oracle: (f64, f64),
    step: f64,
) -> Result<ValidationEntry> {
    let upper = problem.upper;
    let (oracle_value, oracle_objective) = oracle;
    let polynomial_root = largest_nonneg_root(problem);
    let h = 1e-5 * upper.max(1.0);

    let (paper_value, note) = match paper_value {
        Ok(v) => (v, None),
        Err(e) => (None, Some(e.to_string())),
    };
    let residual = match printed_decision {
        Some(x) => Some(kkt_residual(|x| problem.objective.eval(x), x, 0.0, upper, h)?),
        None => None,
    };
    let abs_deviation = printed_decision.map(|x| (x - oracle_value).abs());
    let rel_deviation = abs_deviation.map(|d| d / oracle_value.abs().max(1.0));

    let verdict = match (abs_deviation, residual) {
        _ if upper <= 0.0 => Verdict::Infeasible,
        (Some(dev), Some(res)) if dev <= step && res <= STATIONARITY_TOL => Verdict::Agree,
        (Some(_), Some(_)) => Verdict::PaperTypoSuspected,
        _ => Verdict::Infeasible,
    };
    Ok(ValidationEntry {
        formula,
        variable: problem.variable,
        paper_value,
        polynomial_root,
        printed_decision,
        allocator_value,
        oracle_value,
        oracle_objective,
        abs_deviation,
        rel_deviation,
        derivative_residual: residual,
        upper,
        verdict,
        note,
    })
}

/// Compares every published polynomial and closed form of a scenario with a
/// grid search of the objective it is meant to optimise.
pub fn validate_scenario(
    kind: ScenarioKind,
    cfg: &ScenarioConfig,
    geometry: Option<&Geometry>,
    seeds: RelaySeeds,
) -> Result<ValidationReport> {
    validate_with_resolution(kind, cfg, geometry, seeds, DEFAULT_RESOLUTION)
}

pub fn validate_with_resolution(
    kind: ScenarioKind,
    cfg: &ScenarioConfig,
    geometry: Option<&Geometry>,
    seeds: RelaySeeds,
    resolution: usize,
) -> Result<ValidationReport> {
    let problems = allocator::side_problems(kind, cfg, geometry, seeds)?;
    let mut entries = Vec::new();
    for problem in &problems {
        let decision = allocator::solve_side(problem)?;
        let objective = |x| problem.objective.eval(x);
        let oracle = grid_search_optimum(objective, 0.0, problem.upper, resolution)?;
        let step = grid_step(0.0, problem.upper, resolution);

        // The published polynomial on its own: its roots and the endpoints.
        let printed_only = SideProblem {
            stationary: allocator::PolynomialCoefficients::quadratic(0.0, 0.0, 0.0),
            full_power: None,
            ..problem.clone()
        };
        let printed = allocator::solve_side(&printed_only)?.value;
        entries.push(judge(
            problem.formula,
            problem,
            Ok(largest_nonneg_root(problem)),
            Some(printed),
            decision.value,
            oracle,
            step,
        )?);

        if let Some(id) = problem.closed_form {
            let raw = evaluate_closed_form(id, &problem.objective.gains, cfg.sigma2, cfg.alpha.get(), cfg.lambda.get())
                .expect("closed-form id");
            let clamped = raw.as_ref().ok().map(|v| v.clamp(0.0, problem.upper.max(0.0)));
            entries.push(judge(id, problem, raw.map(Some), clamped, decision.value, oracle, step)?);
        }
    }
    Ok(ValidationReport {
        kind,
        config: *cfg,
        geometry: geometry.copied(),
        resolution,
        entries,
    })
}
