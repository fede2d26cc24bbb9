use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::config::{Axis, Evaluation, ExperimentConfig};
use crate::allocator::{self, RelaySeeds};
use crate::error::{Error, Result};
use crate::model::Geometry;
use crate::rates::{coupled_secrecy, secrecy_rate, LogBase, Powers, RatePair, ScenarioKind};

/// One sweep point for one scenario. Rates are raw (unclamped) nats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: f64,
    pub cs1_nat: f64,
    pub cs2_nat: f64,
    pub p_a: f64,
    pub p_j: f64,
    pub p_ab: f64,
    pub p_jb: f64,
    pub mode: ScenarioKind,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: Axis,
    pub log_base: LogBase,
    pub rows: Vec<SweepRow>,
}

const FIXED: &str = "fixed";

fn fixed_row(x: f64, kind: ScenarioKind, powers: Powers, cs: RatePair) -> SweepRow {
    SweepRow {
        axis: x,
        cs1_nat: cs.cs1,
        cs2_nat: cs.cs2,
        p_a: powers.p_a,
        p_j: powers.p_j,
        p_ab: powers.p_ab,
        p_jb: powers.p_jb,
        mode: kind,
        provenance: FIXED.into(),
    }
}

/// The power that feeds one transmitter's secrecy rate in each scenario.
fn serving_power(powers: &mut Powers, kind: ScenarioKind, alice: bool, x: f64) {
    match (kind, alice) {
        (ScenarioKind::NonCoop | ScenarioKind::OneSideCoop, true) => powers.p_a = x,
        (ScenarioKind::NonCoop | ScenarioKind::OneSideCoop, false) => powers.p_j = x,
        (ScenarioKind::RelayCoop, true) => powers.p_jb = x,
        (ScenarioKind::RelayCoop, false) => powers.p_ab = x,
        (ScenarioKind::MacCoop, true) => powers.p_j = x,
        (ScenarioKind::MacCoop, false) => powers.p_a = x,
    }
}

fn with_distance(geometry: &Geometry, axis: Axis, x: f64) -> Geometry {
    let mut g = *geometry;
    match axis {
        Axis::DAb => g.d_ab = x,
        Axis::DAe => g.d_ae = x,
        Axis::DJb => g.d_jb = x,
        Axis::DJe => g.d_je = x,
        Axis::DAj => g.d_aj = x,
        _ => {}
    }
    g
}

fn point(cfg: &ExperimentConfig, kind: ScenarioKind, x: f64) -> Result<SweepRow> {
    let axis = cfg.sweep.axis;
    let mut scenario = cfg.scenario();
    let mut geometry = cfg.geometry;
    match axis {
        Axis::Lambda => scenario = scenario.with_lambda(x)?,
        Axis::Alpha => scenario = scenario.with_alpha(x)?,
        Axis::PAMax => scenario = scenario.with_budgets(x, scenario.budgets.p_j_max)?,
        Axis::PJMax => scenario = scenario.with_budgets(scenario.budgets.p_a_max, x)?,
        a if a.is_distance() => {
            geometry = with_distance(&geometry, a, x);
            geometry.validate()?;
        }
        _ => {}
    }
    let path_loss = cfg.path_loss || axis.is_distance() || axis == Axis::CoupledHelp;
    let gains = if path_loss {
        scenario.gains.attenuated(&geometry)?
    } else {
        scenario.gains
    };
    let (s2, alpha) = (scenario.sigma2, scenario.alpha.get());

    if axis == Axis::CoupledHelp {
        let main = Powers::main(cfg.fixed_powers.p_a, cfg.fixed_powers.p_j);
        let cs = coupled_secrecy(&gains, s2, alpha, main, x, x)?;
        return Ok(fixed_row(x, kind, Powers::relayed(main.p_a, main.p_j, x, x), cs));
    }
    if axis.is_fixed_power() || cfg.evaluation == Evaluation::Fixed {
        let mut powers = cfg.fixed_powers;
        match axis {
            Axis::PA => powers.p_a = x,
            Axis::PJ => powers.p_j = x,
            Axis::AlicePower => serving_power(&mut powers, kind, true, x),
            Axis::JohnPower => serving_power(&mut powers, kind, false, x),
            _ => {}
        }
        if kind != ScenarioKind::RelayCoop {
            powers.p_ab = 0.0;
            powers.p_jb = 0.0;
        }
        let cs = secrecy_rate(kind, &gains, s2, alpha, powers)?;
        return Ok(fixed_row(x, kind, powers, cs));
    }

    let scaled = scenario.with_gains(gains);
    let alloc = match kind {
        ScenarioKind::MacCoop if path_loss => allocator::distance_adjusted_mac_allocation(&scenario, &geometry)?,
        ScenarioKind::RelayCoop => allocator::relay_allocation(&scaled, RelaySeeds::from_budgets(&scaled), cfg.relay_mode)?,
        other => allocator::allocate(other, &scaled)?,
    };
    Ok(SweepRow {
        axis: x,
        cs1_nat: alloc.cs.cs1,
        cs2_nat: alloc.cs.cs2,
        p_a: alloc.p_a,
        p_j: alloc.p_j,
        p_ab: alloc.p_ab,
        p_jb: alloc.p_jb,
        mode: alloc.mode,
        provenance: alloc.provenance_label(),
    })
}

/// One row per sweep point and scenario, in axis order.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for x in cfg.sweep.points() {
        for &kind in &cfg.scenarios {
            rows.push(point(cfg, kind, x)?);
        }
    }
    Ok(SweepTable {
        axis: cfg.sweep.axis,
        log_base: cfg.log_base,
        rows,
    })
}

const BASE_HEADER: [&str; 9] = ["axis", "cs1_nat", "cs2_nat", "p_a", "p_j", "p_ab", "p_jb", "mode", "provenance"];

/// Shortest form that parses back to the same bits: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = BASE_HEADER.to_vec();
        if self.log_base == LogBase::Two {
            header.extend(["cs1_bits", "cs2_bits"]);
        }
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                fmt_f64(r.axis),
                fmt_f64(r.cs1_nat),
                fmt_f64(r.cs2_nat),
                fmt_f64(r.p_a),
                fmt_f64(r.p_j),
                fmt_f64(r.p_ab),
                fmt_f64(r.p_jb),
                r.mode.to_string(),
                r.provenance.clone(),
            ];
            if self.log_base == LogBase::Two {
                rec.push(fmt_f64(LogBase::Two.express(r.cs1_nat)));
                rec.push(fmt_f64(LogBase::Two.express(r.cs2_nat)));
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses a file written by [`SweepTable::write_csv`]; base-2 columns
    /// are recomputed, not read.
    pub fn read_csv<R: Read>(input: R, axis: Axis) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers()?.clone();
        let log_base = match headers.len() {
            9 => LogBase::Natural,
            11 => LogBase::Two,
            n => return Err(Error::Config(format!("unexpected sweep column count {n}"))),
        };
        if headers.iter().take(9).ne(BASE_HEADER) {
            return Err(Error::Config("unexpected sweep header".into()));
        }
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let num = |i: usize| -> Result<f64> {
                rec[i]
                    .parse()
                    .map_err(|_| Error::Config(format!("bad number `{}` in column {}", &rec[i], BASE_HEADER[i])))
            };
            rows.push(SweepRow {
                axis: num(0)?,
                cs1_nat: num(1)?,
                cs2_nat: num(2)?,
                p_a: num(3)?,
                p_j: num(4)?,
                p_ab: num(5)?,
                p_jb: num(6)?,
                mode: rec[7].parse()?,
                provenance: rec[8].to_string(),
            });
        }
        Ok(Self { axis, log_base, rows })
    }

    /// Rows of one scenario, in axis order.
    pub fn series(&self, kind: ScenarioKind) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.mode == kind).collect()
    }
}
