use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::allocator::RelaySeeds;
use crate::error::Result;
use crate::model::{ChannelGains, CooperationLevel, DualPrice, PowerBudget, ScenarioConfig};
use crate::oracle::{validate_with_resolution, ValidationReport, Verdict};
use crate::rates::ScenarioKind;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub agree: usize,
    pub paper_typo_suspected: usize,
    pub infeasible: usize,
}

/// Reports for the configured point followed by the random points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRun {
    pub seed: u64,
    pub samples: usize,
    pub counts: VerdictCounts,
    pub reports: Vec<ValidationReport>,
}

/// A random but well-posed parameter point.
pub fn random_scenario(rng: &mut ChaCha8Rng) -> ScenarioConfig {
    let mut gain = || rng.random_range(0.05..1.0);
    let gains = ChannelGains {
        g_ab: gain(),
        g_ae: gain(),
        g_jb: gain(),
        g_je: gain(),
        g_aj: gain(),
        g_ja: None,
    };
    ScenarioConfig {
        gains,
        sigma2: rng.random_range(0.5..2.0),
        alpha: CooperationLevel::new(rng.random_range(0.1..=1.0)).expect("in range"),
        lambda: DualPrice::new(rng.random_range(0.001..0.1)).expect("in range"),
        budgets: PowerBudget::new(rng.random_range(1.0..20.0), rng.random_range(1.0..20.0)).expect("in range"),
    }
}

pub fn run_validation(cfg: &ExperimentConfig) -> Result<ValidationRun> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut points = vec![cfg.scenario()];
    points.extend((0..cfg.validation_samples).map(|_| random_scenario(&mut rng)));

    let mut reports = Vec::new();
    let mut counts = VerdictCounts::default();
    for point in &points {
        for kind in ScenarioKind::ALL {
            let report = validate_with_resolution(kind, point, None, RelaySeeds::from_budgets(point), cfg.resolution)?;
            for e in &report.entries {
                match e.verdict {
                    Verdict::Agree => counts.agree += 1,
                    Verdict::PaperTypoSuspected => counts.paper_typo_suspected += 1,
                    Verdict::Infeasible => counts.infeasible += 1,
                }
            }
            reports.push(report);
        }
    }
    Ok(ValidationRun {
        seed: cfg.seed,
        samples: cfg.validation_samples,
        counts,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocator::FormulaId;

    fn small(seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            lambda: DualPrice::new(0.01).unwrap(),
            seed,
            validation_samples: 3,
            resolution: 2001,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn config_point_carries_the_closed_form_flag() {
        let run = run_validation(&small(7)).unwrap();
        assert_eq!(run.reports.len(), 4 * 4);
        let noncoop = run.reports.iter().find(|r| r.kind == ScenarioKind::NonCoop).unwrap();
        let e = noncoop.entry(FormulaId::NoncoopAliceClosedForm).unwrap();
        assert_eq!(e.verdict, Verdict::PaperTypoSuspected);
    }

    #[test]
    fn same_seed_same_report() {
        let a = serde_json::to_string(&run_validation(&small(11)).unwrap()).unwrap();
        let b = serde_json::to_string(&run_validation(&small(11)).unwrap()).unwrap();
        let c = serde_json::to_string(&run_validation(&small(12)).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn symmetric_point_agrees_everywhere() {
        let mut cfg = small(0);
        cfg.validation_samples = 0;
        cfg.gains = ChannelGains::new(0.4, 0.4, 0.5, 0.5, 0.2).unwrap();
        let run = run_validation(&cfg).unwrap();
        let noncoop = run.reports.iter().find(|r| r.kind == ScenarioKind::NonCoop).unwrap();
        assert!(noncoop.entries.iter().all(|e| e.verdict == Verdict::Agree && e.oracle_value == 0.0));
    }
}
