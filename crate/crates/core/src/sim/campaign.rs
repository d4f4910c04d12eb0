// SPDX-License-Identifier: Apache-2.0

//! Single-fault injection campaigns.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_interface, FaultKind, FaultSpec, SimError, Simulator, Stimulus, WARM_UP_CYCLES};
use crate::eval::Word;
use crate::netlist::{HardeningMethod, ModuleTag, NetId, Netlist, ProbeRole};

/// Which nets faults are placed on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultUniverse {
    /// Outputs of ORIGINAL and REPLICA gates and registers. This is the scope
    /// correction claims are made over.
    #[default]
    Module,
    /// Outputs of CHECKER and VOTER logic; characterization only.
    Checker,
    /// Primary inputs; detection only.
    PrimaryInputs,
}

impl FaultUniverse {
    pub fn name(self) -> &'static str {
        match self {
            FaultUniverse::Module => "module",
            FaultUniverse::Checker => "checker",
            FaultUniverse::PrimaryInputs => "primary-inputs",
        }
    }
}

impl fmt::Display for FaultUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FaultUniverse {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "module" => Ok(FaultUniverse::Module),
            "checker" => Ok(FaultUniverse::Checker),
            "primary-inputs" => Ok(FaultUniverse::PrimaryInputs),
            _ => Err(format!("unknown fault universe `{s}` (expected module, checker or primary-inputs)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub stimulus: Stimulus,
    pub universe: FaultUniverse,
    pub kinds: Vec<FaultKind>,
    /// Seeds the choice of transient-flip cycles.
    pub seed: u64,
    pub scrub_at: Vec<usize>,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
}

impl CampaignConfig {
    pub fn new(stimulus: Stimulus, seed: u64) -> Self {
        CampaignConfig {
            stimulus,
            universe: FaultUniverse::Module,
            kinds: FaultKind::ALL.to_vec(),
            seed,
            scrub_at: Vec::new(),
            jobs: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignResult {
    pub fault: FaultSpec,
    /// The method's alarm signals fired on some cycle from the fault's start.
    pub detected: bool,
    /// Every output matched golden on every cycle from the fault's start.
    pub corrected: bool,
    pub cycles_wrong: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub method: String,
    pub faults_total: usize,
    pub corrected: usize,
    pub detected_uncorrected: usize,
    pub undetected: usize,
    pub corrected_pct: f64,
    pub scope: FaultUniverse,
}

/// Fault sites of `universe`, sorted, with aliases left out.
pub fn fault_sites(netlist: &Netlist, universe: FaultUniverse) -> Vec<NetId> {
    let wanted = |tag: ModuleTag| match universe {
        FaultUniverse::Module => tag.is_module(),
        FaultUniverse::Checker => !tag.is_module(),
        FaultUniverse::PrimaryInputs => false,
    };
    let mut sites: Vec<NetId> = match universe {
        FaultUniverse::PrimaryInputs => netlist.inputs().to_vec(),
        _ => netlist
            .gates()
            .iter()
            .filter(|g| wanted(g.tag))
            .map(|g| g.output)
            .chain(netlist.registers().iter().filter(|r| wanted(r.tag)).map(|r| r.output))
            .filter(|&n| netlist.alias_of(n).is_none())
            .collect(),
    };
    sites.sort_unstable();
    sites.dedup();
    sites
}

/// Every `kinds` fault on every site. Stuck-at faults start right after the
/// warm-up; each flip gets a cycle in `[1, cycles)` drawn from a ChaCha8
/// stream selected by its index, so the list does not depend on scheduling.
pub fn fault_list(
    netlist: &Netlist,
    universe: FaultUniverse,
    kinds: &[FaultKind],
    cycles: usize,
    seed: u64,
) -> Vec<FaultSpec> {
    let mut faults = Vec::new();
    for site in fault_sites(netlist, universe) {
        for &kind in kinds {
            let start_cycle = match kind {
                FaultKind::TransientFlip => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(faults.len() as u64);
                    rng.gen_range(WARM_UP_CYCLES..cycles.max(WARM_UP_CYCLES + 1))
                }
                _ => WARM_UP_CYCLES,
            };
            faults.push(FaultSpec {
                site,
                kind,
                start_cycle,
            });
        }
    }
    faults
}

/// Signals whose assertion means "fault detected", by method.
enum Alarm {
    None,
    Any(Vec<NetId>),
    /// Replica outputs per primary output; disagreement is an alarm.
    Disagree(Vec<[NetId; 3]>),
}

fn alarm_for(netlist: &Netlist) -> Alarm {
    let probes = |pred: &dyn Fn(ProbeRole) -> bool| -> Vec<NetId> {
        netlist.probes().iter().filter(|p| pred(p.role)).map(|p| p.net).collect()
    };
    match netlist.method() {
        None => Alarm::None,
        Some(HardeningMethod::Iolb) => Alarm::Any(probes(&|r| r == ProbeRole::Error)),
        Some(HardeningMethod::DwcCed) => Alarm::Any(probes(&|r| {
            matches!(r, ProbeRole::Tc0 | ProbeRole::Tc1 | ProbeRole::Hc | ProbeRole::Hcd)
        })),
        Some(HardeningMethod::Tmr) => Alarm::Disagree(
            (0..netlist.outputs().len() as u32)
                .filter_map(|output| {
                    let get = |replica| netlist.probe(ProbeRole::ReplicaOut { replica, output });
                    Some([get(0)?, get(1)?, get(2)?])
                })
                .collect(),
        ),
    }
}

impl Alarm {
    fn lanes<W: Word>(&self, sim: &Simulator<'_, W>) -> W {
        match self {
            Alarm::None => W::zero(),
            Alarm::Any(nets) => nets.iter().fold(W::zero(), |acc, &n| acc | sim.value(n)),
            Alarm::Disagree(groups) => groups.iter().fold(W::zero(), |acc, [a, b, c]| {
                let (a, b, c) = (sim.value(*a), sim.value(*b), sim.value(*c));
                acc | (a ^ b) | (b ^ c)
            }),
        }
    }
}

pub fn summarize(method: &str, scope: FaultUniverse, results: &[CampaignResult]) -> CampaignSummary {
    let total = results.len();
    let corrected = results.iter().filter(|r| r.corrected).count();
    let detected_uncorrected = results.iter().filter(|r| !r.corrected && r.detected).count();
    CampaignSummary {
        method: method.to_string(),
        faults_total: total,
        corrected,
        detected_uncorrected,
        undetected: total - corrected - detected_uncorrected,
        corrected_pct: if total == 0 {
            100.0
        } else {
            100.0 * corrected as f64 / total as f64
        },
        scope,
    }
}

/// Runs one independent simulation per fault of the configured universe.
///
/// Golden outputs come from `golden` (the unhardened netlist) or, when
/// absent, from a fault-free run of `netlist`. Faults are simulated 64 at a
/// time, one per lane; results are returned in fault-list order.
pub fn run_campaign(
    netlist: &Netlist,
    golden: Option<&Netlist>,
    config: &CampaignConfig,
) -> Result<(Vec<CampaignResult>, CampaignSummary), SimError> {
    let golden = golden.unwrap_or(netlist);
    check_interface(netlist, golden)?;
    let vectors = config.stimulus.vectors(netlist.inputs().len())?;
    let cycles = vectors.len();
    let inputs: Vec<Vec<u64>> = vectors
        .iter()
        .map(|v| v.iter().map(|&b| u64::splat(b)).collect())
        .collect();

    let mut gold = Simulator::<u64>::new(golden)?;
    for &s in &config.scrub_at {
        gold.schedule_scrub(s);
    }
    let mut golden_out = Vec::with_capacity(cycles);
    for words in &inputs {
        gold.step(words)?;
        golden_out.push(gold.outputs());
    }

    let template = Simulator::<u64>::new(netlist)?;
    let alarm = alarm_for(netlist);
    let faults = fault_list(netlist, config.universe, &config.kinds, cycles, config.seed);
    log::info!(
        "campaign on {}: {} faults, {} cycles",
        netlist.name(),
        faults.len(),
        cycles
    );

    let run_batch = |batch: &[FaultSpec]| -> Result<Vec<CampaignResult>, SimError> {
        let mut sim = template.clone();
        for (lane, &f) in batch.iter().enumerate() {
            sim.inject(f, u64::lane_mask(lane))?;
        }
        for &s in &config.scrub_at {
            sim.schedule_scrub(s);
        }
        let mut wrong = vec![0usize; batch.len()];
        let mut detected = 0u64;
        let used = u64::low_lanes(batch.len());
        for (c, words) in inputs.iter().enumerate() {
            sim.step(words)?;
            let started = batch
                .iter()
                .enumerate()
                .filter(|(_, f)| f.start_cycle <= c)
                .fold(0u64, |acc, (lane, _)| acc | u64::lane_mask(lane));
            let mismatch = sim
                .outputs()
                .iter()
                .zip(&golden_out[c])
                .fold(0u64, |acc, (o, g)| acc | (o ^ g))
                & started
                & used;
            detected |= alarm.lanes(&sim) & started;
            let mut m = mismatch;
            while m != 0 {
                let lane = m.trailing_zeros() as usize;
                wrong[lane] += 1;
                m &= m - 1;
            }
        }
        Ok(batch
            .iter()
            .enumerate()
            .map(|(lane, &fault)| CampaignResult {
                fault,
                detected: detected.lane(lane),
                corrected: wrong[lane] == 0,
                cycles_wrong: wrong[lane],
            })
            .collect())
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .expect("thread pool");
    let batches: Vec<Result<Vec<CampaignResult>, SimError>> =
        pool.install(|| faults.par_chunks(u64::lanes()).map(run_batch).collect());
    let mut results = Vec::with_capacity(faults.len());
    for b in batches {
        results.extend(b?);
    }
    let method = netlist.method().map_or("none", |m| m.name());
    let summary = summarize(method, config.universe, &results);
    Ok((results, summary))
}
