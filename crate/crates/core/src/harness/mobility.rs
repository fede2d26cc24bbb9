use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::sweep::fmt_f64;
use crate::error::{Error, Result};
use crate::protocol::adaptive_step;
use crate::rates::ScenarioKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobilityRow {
    pub step: usize,
    pub d_ae: f64,
    pub d_je: f64,
    pub mode: ScenarioKind,
    pub output: u8,
    pub cs1: f64,
    pub cs2: f64,
    pub changed: bool,
}

/// Re-negotiates at every Eve position; the first step never counts as a
/// change.
pub fn run_mobility(cfg: &ExperimentConfig) -> Result<Vec<MobilityRow>> {
    cfg.validate()?;
    if cfg.trajectory.is_empty() {
        return Err(Error::Config("mobility needs a non-empty trajectory".into()));
    }
    let policy = cfg.negotiation_policy();
    let scenario = cfg.scenario();
    let mut previous: Option<ScenarioKind> = None;
    let mut rows = Vec::with_capacity(cfg.trajectory.len());
    for (step, pos) in cfg.trajectory.iter().enumerate() {
        let mut geometry = cfg.geometry;
        geometry.d_ae = pos.d_ae;
        geometry.d_je = pos.d_je;
        let (n, changed) = match previous {
            Some(prev) => adaptive_step(prev, &policy, &scenario, &geometry, cfg.constraint_mode)?,
            None => (crate::protocol::negotiate(&policy, &scenario, &geometry, cfg.constraint_mode)?, false),
        };
        previous = Some(n.mode);
        rows.push(MobilityRow {
            step,
            d_ae: pos.d_ae,
            d_je: pos.d_je,
            mode: n.mode,
            output: n.output,
            cs1: n.allocation.cs.cs1,
            cs2: n.allocation.cs.cs2,
            changed,
        });
    }
    Ok(rows)
}

pub fn write_mobility_csv<W: Write>(rows: &[MobilityRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "d_ae", "d_je", "mode", "output", "cs1_nat", "cs2_nat", "changed"])?;
    for r in rows {
        w.write_record([
            r.step.to_string(),
            fmt_f64(r.d_ae),
            fmt_f64(r.d_je),
            r.mode.to_string(),
            r.output.to_string(),
            fmt_f64(r.cs1),
            fmt_f64(r.cs2),
            r.changed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
