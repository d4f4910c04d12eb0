// SPDX-License-Identifier: Apache-2.0

//! Side-by-side comparison of the unhardened design and its hardened
//! variants.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use super::cost::{cost_report, CostReport};
use super::reliability::reliability_enumeration;
use crate::netlist::{HardeningMethod, Netlist};
use crate::sim::CampaignSummary;

pub const REPORT_VERSION: u32 = 1;

/// One design to compare; `method` is `None` for the baseline.
#[derive(Clone, Copy, Debug)]
pub struct CompareEntry<'a> {
    pub method: Option<HardeningMethod>,
    pub netlist: &'a Netlist,
    pub campaign: Option<&'a CampaignSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CompareError {
    #[error("no designs to compare")]
    Empty,
    #[error("`{0}` does not share the interface of `{1}`")]
    MismatchedBaseline(String, String),
    #[error("method {0} listed twice")]
    Duplicate(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub method: String,
    pub io_pads: usize,
    pub lut_equiv: usize,
    pub flip_flops: usize,
    pub raw_gate_count: usize,
    pub corrected_pct: Option<f64>,
    /// `"1/2"`; absent for the baseline.
    pub faithful_fraction: Option<String>,
    pub faithful_probability: Option<f64>,
    pub cost: CostReport,
    pub campaign: Option<CampaignSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub report_version: u32,
    pub circuit: String,
    pub rows: Vec<ComparisonRow>,
    pub notes: Vec<String>,
}

fn rank(method: Option<HardeningMethod>) -> usize {
    match method {
        None => 0,
        Some(HardeningMethod::Tmr) => 1,
        Some(HardeningMethod::DwcCed) => 2,
        Some(HardeningMethod::Iolb) => 3,
    }
}

fn label(method: Option<HardeningMethod>) -> &'static str {
    method.map_or("None", HardeningMethod::label)
}

fn interface(n: &Netlist) -> (Vec<&str>, Vec<&str>) {
    (
        n.inputs().iter().map(|&i| n.net_name(i)).collect(),
        n.outputs().iter().map(|&o| n.net_name(o)).collect(),
    )
}

/// Rows come out in the order None, TMR, DWC-CED, IOLB. All designs must
/// share primary input and output names.
pub fn compare_report(entries: &[CompareEntry<'_>]) -> Result<Comparison, CompareError> {
    let mut sorted: Vec<CompareEntry<'_>> = entries.to_vec();
    sorted.sort_by_key(|e| rank(e.method));
    let first = sorted.first().ok_or(CompareError::Empty)?;
    let reference = interface(first.netlist);
    for pair in sorted.windows(2) {
        if pair[0].method == pair[1].method {
            return Err(CompareError::Duplicate(label(pair[0].method).to_string()));
        }
    }
    for e in &sorted[1..] {
        if interface(e.netlist) != reference {
            return Err(CompareError::MismatchedBaseline(
                e.netlist.name().to_string(),
                first.netlist.name().to_string(),
            ));
        }
    }

    let rows = sorted
        .iter()
        .map(|e| {
            let cost = cost_report(e.netlist);
            let probability = e.method.map(|m| reliability_enumeration(m).probability);
            ComparisonRow {
                method: label(e.method).to_string(),
                io_pads: cost.io_pads,
                lut_equiv: cost.lut_equiv,
                flip_flops: cost.flip_flops,
                raw_gate_count: cost.raw_gate_count,
                corrected_pct: e.campaign.map(|c| c.corrected_pct),
                faithful_fraction: probability.map(|p| p.to_string()),
                faithful_probability: probability.map(|p| f64::from(*p.numer()) / f64::from(*p.denom())),
                cost,
                campaign: e.campaign.cloned(),
            }
        })
        .collect();
    let circuit = sorted
        .iter()
        .find(|e| e.method.is_none())
        .map_or_else(|| first.netlist.name().to_string(), |e| e.netlist.name().to_string());
    Ok(Comparison {
        report_version: REPORT_VERSION,
        circuit,
        rows,
        notes: vec![
            "lut_equiv: greedy fanout-1 packing into 4-input cones, not vendor technology mapping".into(),
            "faithful_probability: every module-fault pattern equally likely, regardless of module area".into(),
        ],
    })
}

impl Comparison {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// Fixed-width table, one line per row.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<8} {:>8} {:>10} {:>10} {:>13} {:>20}",
            "method", "io_pads", "lut_equiv", "flip_flops", "corrected_pct", "faithful_probability"
        );
        for r in &self.rows {
            let pct = r.corrected_pct.map_or_else(|| "-".to_string(), |p| format!("{p:.1}"));
            let prob = r.faithful_probability.map_or_else(|| "-".to_string(), |p| format!("{p:.2}"));
            let _ = writeln!(
                s,
                "{:<8} {:>8} {:>10} {:>10} {:>13} {:>20}",
                r.method, r.io_pads, r.lut_equiv, r.flip_flops, pct, prob
            );
        }
        s
    }
}
