// SPDX-License-Identifier: Apache-2.0

//! Cycle simulation with fault injection.
//!
//! One cycle: apply scheduled scrubs, drive primary inputs and register
//! outputs, evaluate gates in topological order, then latch registers. Cycle 0
//! is a fault-free warm-up; faults start at cycle 1 or later.
//!
//! A fault overrides the value of a net at its driver, so every consumer sees
//! the faulty value: `v = ((v & !clr) | set) ^ flip`. Nets declared as aliases
//! of a site (see [`Netlist::add_alias`]) are faulted together with it.
//!
//! [`Simulator`] is generic over the lane word. Every lane is an independent
//! machine sharing the stimulus, which is how campaigns run 64 faults per
//! pass.

mod campaign;

pub use campaign::{
    fault_list, fault_sites, run_campaign, summarize, CampaignConfig, CampaignResult, CampaignSummary, FaultUniverse,
};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::{eval_gate, Schedule, Word};
use crate::netlist::{Diagnostic, ModuleTag, NetId, Netlist, ProbeRole};

/// Cycles before the first cycle a fault may start at.
pub const WARM_UP_CYCLES: usize = 1;

/// Default total cycle count (warm-up included) for random stimulus.
pub const DEFAULT_CYCLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaultKind {
    #[serde(rename = "sa0")]
    StuckAt0,
    #[serde(rename = "sa1")]
    StuckAt1,
    #[serde(rename = "flip")]
    TransientFlip,
}

impl FaultKind {
    pub const ALL: [FaultKind; 3] = [FaultKind::StuckAt0, FaultKind::StuckAt1, FaultKind::TransientFlip];

    pub fn name(self) -> &'static str {
        match self {
            FaultKind::StuckAt0 => "sa0",
            FaultKind::StuckAt1 => "sa1",
            FaultKind::TransientFlip => "flip",
        }
    }

    pub fn is_persistent(self) -> bool {
        !matches!(self, FaultKind::TransientFlip)
    }
}

impl fmt::Display for FaultKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FaultKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sa0" | "stuck-at-0" => Ok(FaultKind::StuckAt0),
            "sa1" | "stuck-at-1" => Ok(FaultKind::StuckAt1),
            "flip" | "transient" => Ok(FaultKind::TransientFlip),
            _ => Err(SimError::UnknownFaultKind(s.to_string())),
        }
    }
}

/// A fault on `site` starting at `start_cycle`. Transient flips last exactly
/// that cycle; stuck-at faults last until the next scrub.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaultSpec {
    pub site: NetId,
    pub kind: FaultKind,
    pub start_cycle: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stimulus {
    /// Uniform random input vectors from a ChaCha8 stream seeded with `seed`.
    Random { seed: u64, cycles: usize },
    /// One vector per cycle, in primary-input order.
    Explicit(Vec<Vec<bool>>),
}

impl Stimulus {
    pub fn cycles(&self) -> usize {
        match self {
            Stimulus::Random { cycles, .. } => *cycles,
            Stimulus::Explicit(v) => v.len(),
        }
    }

    pub fn vectors(&self, inputs: usize) -> Result<Vec<Vec<bool>>, SimError> {
        match self {
            Stimulus::Random { seed, cycles } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..*cycles).map(|_| (0..inputs).map(|_| rng.gen::<bool>()).collect()).collect())
            }
            Stimulus::Explicit(v) => {
                if let Some(bad) = v.iter().find(|row| row.len() != inputs) {
                    return Err(SimError::InputWidth {
                        expected: inputs,
                        got: bad.len(),
                    });
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("netlist is not valid: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("fault site {0} is not a net of this netlist")]
    UnknownNet(NetId),
    #[error("fault on net {site} starts at cycle {start}, before the warm-up ends at cycle {WARM_UP_CYCLES}")]
    BeforeWarmUp { site: NetId, start: usize },
    #[error("stimulus vector has {got} bits, netlist has {expected} primary inputs")]
    InputWidth { expected: usize, got: usize },
    #[error("golden netlist has a different primary input/output interface")]
    InterfaceMismatch,
    #[error("unknown fault kind `{0}` (expected sa0, sa1 or flip)")]
    UnknownFaultKind(String),
}

#[derive(Clone, Debug)]
struct ActiveFault<W> {
    lanes: W,
    nets: Vec<NetId>,
    kind: FaultKind,
    start: usize,
    cleared: bool,
}

/// Lane-parallel cycle simulator for one netlist.
#[derive(Clone, Debug)]
pub struct Simulator<'a, W: Word> {
    netlist: &'a Netlist,
    schedule: Schedule,
    alias_groups: HashMap<NetId, Vec<NetId>>,
    voter_registers: Vec<usize>,
    values: Vec<W>,
    state: Vec<W>,
    set: Vec<W>,
    clr: Vec<W>,
    flip: Vec<W>,
    forced: Vec<bool>,
    forced_nets: Vec<usize>,
    faults: Vec<ActiveFault<W>>,
    scrubs: BTreeSet<usize>,
    cycle: usize,
}

impl<'a, W: Word> Simulator<'a, W> {
    pub fn new(netlist: &'a Netlist) -> Result<Self, SimError> {
        let schedule = Schedule::new(netlist).map_err(|e| match e {
            crate::eval::EvalError::Invalid(d) => SimError::Invalid(d),
            other => unreachable!("schedule construction only validates: {other}"),
        })?;
        let mut alias_groups: HashMap<NetId, Vec<NetId>> = HashMap::new();
        for (alias, site) in netlist.aliases() {
            alias_groups.entry(site).or_insert_with(|| vec![site]).push(alias);
        }
        let voter_registers = netlist
            .registers()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.tag == ModuleTag::Voter)
            .map(|(i, _)| i)
            .collect();
        let nets = netlist.net_count();
        let mut sim = Simulator {
            netlist,
            schedule,
            alias_groups,
            voter_registers,
            values: vec![W::zero(); nets],
            state: Vec::new(),
            set: vec![W::zero(); nets],
            clr: vec![W::zero(); nets],
            flip: vec![W::zero(); nets],
            forced: vec![false; nets],
            forced_nets: Vec::new(),
            faults: Vec::new(),
            scrubs: BTreeSet::new(),
            cycle: 0,
        };
        sim.reset();
        Ok(sim)
    }

    pub fn netlist(&self) -> &'a Netlist {
        self.netlist
    }

    /// Back to cycle 0: registers at init, no faults, no scrubs scheduled.
    pub fn reset(&mut self) {
        self.state = self.netlist.registers().iter().map(|r| W::splat(r.init)).collect();
        self.values.iter_mut().for_each(|v| *v = W::zero());
        self.faults.clear();
        self.scrubs.clear();
        self.clear_masks();
        self.cycle = 0;
    }

    /// Index of the next cycle to evaluate.
    pub fn cycle(&self) -> usize {
        self.cycle
    }

    /// Injects `fault` into the lanes set in `lanes`.
    pub fn inject(&mut self, fault: FaultSpec, lanes: W) -> Result<(), SimError> {
        if fault.site.index() >= self.netlist.net_count() {
            return Err(SimError::UnknownNet(fault.site));
        }
        if fault.start_cycle < WARM_UP_CYCLES {
            return Err(SimError::BeforeWarmUp {
                site: fault.site,
                start: fault.start_cycle,
            });
        }
        let nets = self
            .alias_groups
            .get(&fault.site)
            .cloned()
            .unwrap_or_else(|| vec![fault.site]);
        self.faults.push(ActiveFault {
            lanes,
            nets,
            kind: fault.kind,
            start: fault.start_cycle,
            cleared: false,
        });
        Ok(())
    }

    /// Schedules a scrub before cycle `cycle` is evaluated.
    pub fn schedule_scrub(&mut self, cycle: usize) {
        self.scrubs.insert(cycle);
    }

    /// Clears persistent faults that have already started and resets voter
    /// state registers. Other registers keep their values.
    pub fn scrub(&mut self) {
        let now = self.cycle;
        for f in &mut self.faults {
            if f.kind.is_persistent() && f.start < now {
                f.cleared = true;
            }
        }
        for &r in &self.voter_registers {
            self.state[r] = W::splat(self.netlist.registers()[r].init);
        }
    }

    fn clear_masks(&mut self) {
        for &n in &self.forced_nets {
            self.set[n] = W::zero();
            self.clr[n] = W::zero();
            self.flip[n] = W::zero();
            self.forced[n] = false;
        }
        self.forced_nets.clear();
    }

    fn build_masks(&mut self) {
        self.clear_masks();
        let cycle = self.cycle;
        for f in &self.faults {
            let active = !f.cleared
                && match f.kind {
                    FaultKind::TransientFlip => cycle == f.start,
                    _ => cycle >= f.start,
                };
            if !active {
                continue;
            }
            for net in &f.nets {
                let n = net.index();
                match f.kind {
                    FaultKind::StuckAt0 => self.clr[n] = self.clr[n] | f.lanes,
                    FaultKind::StuckAt1 => self.set[n] = self.set[n] | f.lanes,
                    FaultKind::TransientFlip => self.flip[n] = self.flip[n] ^ f.lanes,
                }
                if !self.forced[n] {
                    self.forced[n] = true;
                    self.forced_nets.push(n);
                }
            }
        }
    }

    #[inline]
    fn apply(&self, net: usize, v: W) -> W {
        if self.forced[net] {
            ((v & !self.clr[net]) | self.set[net]) ^ self.flip[net]
        } else {
            v
        }
    }

    /// Evaluates one cycle with `inputs` (one word per primary input).
    pub fn step(&mut self, inputs: &[W]) -> Result<(), SimError> {
        let netlist = self.netlist;
        if inputs.len() != netlist.inputs().len() {
            return Err(SimError::InputWidth {
                expected: netlist.inputs().len(),
                got: inputs.len(),
            });
        }
        if self.scrubs.contains(&self.cycle) {
            self.scrub();
        }
        self.build_masks();
        for (&pi, &v) in netlist.inputs().iter().zip(inputs) {
            self.values[pi.index()] = self.apply(pi.index(), v);
        }
        for (r, reg) in netlist.registers().iter().enumerate() {
            let o = reg.output.index();
            self.values[o] = self.apply(o, self.state[r]);
        }
        for op in &self.schedule.ops {
            let v = eval_gate(
                op.kind,
                self.values[op.ins[0] as usize],
                self.values[op.ins[1] as usize],
                self.values[op.ins[2] as usize],
            );
            let out = op.out as usize;
            self.values[out] = self.apply(out, v);
        }
        for (r, reg) in netlist.registers().iter().enumerate() {
            self.state[r] = self.values[reg.input.index()];
        }
        self.cycle += 1;
        Ok(())
    }

    /// Net values of the last evaluated cycle.
    pub fn values(&self) -> &[W] {
        &self.values
    }

    pub fn value(&self, net: NetId) -> W {
        self.values[net.index()]
    }

    pub fn outputs(&self) -> Vec<W> {
        self.netlist.outputs().iter().map(|o| self.values[o.index()]).collect()
    }

    /// Register contents that the next cycle will start from.
    pub fn register_state(&self) -> &[W] {
        &self.state
    }
}

/// Options for [`simulate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimOptions {
    /// Cycles before which persistent faults are cleared and voters reset.
    pub scrub_at: Vec<usize>,
    /// Record every net's value on every cycle.
    pub record_nets: bool,
}

/// Values observed in one cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleRecord {
    pub inputs: Vec<bool>,
    pub outputs: Vec<bool>,
    pub golden: Vec<bool>,
    /// Probe values in [`Netlist::probes`] order.
    pub probes: Vec<bool>,
    pub mismatch: bool,
    pub nets: Option<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimTrace {
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    pub probe_roles: Vec<ProbeRole>,
    pub probe_nets: Vec<String>,
    pub net_names: Vec<String>,
    pub cycles: Vec<CycleRecord>,
}

impl SimTrace {
    /// Cycles whose outputs differ from golden.
    pub fn mismatch_cycles(&self) -> Vec<usize> {
        (0..self.cycles.len()).filter(|&c| self.cycles[c].mismatch).collect()
    }

    /// Values of every probe with `role` on `cycle`.
    pub fn probe_values(&self, cycle: usize, role: ProbeRole) -> Vec<bool> {
        self.probe_roles
            .iter()
            .zip(&self.cycles[cycle].probes)
            .filter(|(r, _)| **r == role)
            .map(|(_, &v)| v)
            .collect()
    }

    /// `cycle,net,value` rows. Every net when values were recorded; otherwise
    /// primary inputs, primary outputs, golden outputs (`golden.<name>`) and
    /// probes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cycle,net,value\n");
        for (c, rec) in self.cycles.iter().enumerate() {
            let mut row = |name: &str, v: bool| {
                let _ = writeln!(out, "{c},{name},{}", v as u8);
            };
            match &rec.nets {
                Some(nets) => {
                    for (name, &v) in self.net_names.iter().zip(nets) {
                        row(name, v);
                    }
                }
                None => {
                    for (name, &v) in self.input_names.iter().zip(&rec.inputs) {
                        row(name, v);
                    }
                    for (name, &v) in self.output_names.iter().zip(&rec.outputs) {
                        row(name, v);
                    }
                    for (name, &v) in self.probe_nets.iter().zip(&rec.probes) {
                        row(name, v);
                    }
                }
            }
            for (name, &v) in self.output_names.iter().zip(&rec.golden) {
                row(&format!("golden.{name}"), v);
            }
        }
        out
    }
}

/// Simulates `netlist` with `faults` in a single machine; golden outputs come
/// from a fault-free copy of the same netlist.
pub fn simulate(
    netlist: &Netlist,
    stimulus: &Stimulus,
    faults: &[FaultSpec],
    options: &SimOptions,
) -> Result<SimTrace, SimError> {
    simulate_with_golden(netlist, netlist, stimulus, faults, options)
}

/// Like [`simulate`], with golden outputs from `golden`, which must have the
/// same primary input and output names.
pub fn simulate_with_golden(
    netlist: &Netlist,
    golden: &Netlist,
    stimulus: &Stimulus,
    faults: &[FaultSpec],
    options: &SimOptions,
) -> Result<SimTrace, SimError> {
    check_interface(netlist, golden)?;
    let vectors = stimulus.vectors(netlist.inputs().len())?;
    let mut sim = Simulator::<u8>::new(netlist)?;
    let mut gold = Simulator::<u8>::new(golden)?;
    for &f in faults {
        sim.inject(f, 1)?;
    }
    for &s in &options.scrub_at {
        sim.schedule_scrub(s);
        gold.schedule_scrub(s);
    }
    let names = |n: &Netlist, ids: &[NetId]| ids.iter().map(|&i| n.net_name(i).to_string()).collect::<Vec<_>>();
    let mut trace = SimTrace {
        input_names: names(netlist, netlist.inputs()),
        output_names: names(netlist, netlist.outputs()),
        probe_roles: netlist.probes().iter().map(|p| p.role).collect(),
        probe_nets: netlist.probes().iter().map(|p| netlist.net_name(p.net).to_string()).collect(),
        net_names: if options.record_nets {
            netlist.nets().map(|n| netlist.net_name(n).to_string()).collect()
        } else {
            Vec::new()
        },
        cycles: Vec::with_capacity(vectors.len()),
    };
    for vector in vectors {
        let words: Vec<u8> = vector.iter().map(|&b| b as u8).collect();
        sim.step(&words)?;
        gold.step(&words)?;
        let outputs: Vec<bool> = sim.outputs().iter().map(|v| v.lane(0)).collect();
        let golden_out: Vec<bool> = gold.outputs().iter().map(|v| v.lane(0)).collect();
        let probes = netlist.probes().iter().map(|p| sim.value(p.net).lane(0)).collect();
        let nets = options
            .record_nets
            .then(|| sim.values().iter().map(|v| v.lane(0)).collect());
        trace.cycles.push(CycleRecord {
            inputs: vector,
            mismatch: outputs != golden_out,
            outputs,
            golden: golden_out,
            probes,
            nets,
        });
    }
    Ok(trace)
}

fn check_interface(a: &Netlist, b: &Netlist) -> Result<(), SimError> {
    let names = |n: &Netlist, ids: &[NetId]| ids.iter().map(|&i| n.net_name(i).to_string()).collect::<Vec<_>>();
    if names(a, a.inputs()) != names(b, b.inputs()) || names(a, a.outputs()) != names(b, b.outputs()) {
        return Err(SimError::InterfaceMismatch);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{build_gate_demo, build_multiplier};
    use crate::harden::{harden_dwc_ced, harden_iolb, harden_tmr};
    use crate::netlist::GateKind;

    fn raw_net(n: &Netlist, original: &str) -> NetId {
        n.find_net(&format!("__raw_{original}")).unwrap()
    }

    #[test]
    fn iolb_not_demo_transient_at_cycle_5() {
        let h = harden_iolb(&build_gate_demo(GateKind::Not).unwrap()).unwrap();
        let fault = FaultSpec {
            site: raw_net(&h, "b"),
            kind: FaultKind::TransientFlip,
            start_cycle: 5,
        };
        let stim = Stimulus::Explicit(vec![vec![true]; 10]);
        let trace = simulate(&h, &stim, &[fault], &SimOptions::default()).unwrap();
        for (c, rec) in trace.cycles.iter().enumerate() {
            assert_eq!(rec.outputs, vec![false], "cycle {c}");
            assert_eq!(trace.probe_values(c, ProbeRole::Error), vec![c == 5], "cycle {c}");
        }
        assert!(trace.mismatch_cycles().is_empty());
    }

    #[test]
    fn unhardened_not_demo_is_wrong_exactly_at_cycle_5() {
        let n = build_gate_demo(GateKind::Not).unwrap();
        let fault = FaultSpec {
            site: n.outputs()[0],
            kind: FaultKind::TransientFlip,
            start_cycle: 5,
        };
        let stim = Stimulus::Explicit(vec![vec![true]; 10]);
        let trace = simulate(&n, &stim, &[fault], &SimOptions::default()).unwrap();
        assert_eq!(trace.mismatch_cycles(), vec![5]);
    }

    #[test]
    fn warm_up_and_unknown_sites_are_errors() {
        let n = build_gate_demo(GateKind::Not).unwrap();
        let stim = Stimulus::Explicit(vec![vec![true]; 3]);
        let early = FaultSpec {
            site: n.outputs()[0],
            kind: FaultKind::StuckAt0,
            start_cycle: 0,
        };
        assert!(matches!(
            simulate(&n, &stim, &[early], &SimOptions::default()),
            Err(SimError::BeforeWarmUp { .. })
        ));
        let unknown = FaultSpec {
            site: NetId(99),
            kind: FaultKind::StuckAt0,
            start_cycle: 1,
        };
        assert_eq!(
            simulate(&n, &stim, &[unknown], &SimOptions::default()).unwrap_err(),
            SimError::UnknownNet(NetId(99))
        );
    }

    #[test]
    fn stuck_at_is_cleared_by_scrub() {
        let n = build_gate_demo(GateKind::Buf).unwrap();
        let fault = FaultSpec {
            site: n.outputs()[0],
            kind: FaultKind::StuckAt1,
            start_cycle: 2,
        };
        let stim = Stimulus::Explicit(vec![vec![false]; 8]);
        let options = SimOptions {
            scrub_at: vec![5],
            record_nets: false,
        };
        let trace = simulate(&n, &stim, &[fault], &options).unwrap();
        assert_eq!(trace.mismatch_cycles(), vec![2, 3, 4]);
    }

    #[test]
    fn iolb_stuck_at_with_scrub_on_multiplier() {
        let m = build_multiplier(4).unwrap();
        let h = harden_iolb(&m).unwrap();
        let site = h.gates().iter().find(|g| g.tag == ModuleTag::Original && g.kind == GateKind::Xor).unwrap().output;
        let fault = FaultSpec {
            site,
            kind: FaultKind::StuckAt1,
            start_cycle: 3,
        };
        let options = SimOptions {
            scrub_at: vec![50],
            record_nets: true,
        };
        let trace =
            simulate_with_golden(&h, &m, &Stimulus::Random { seed: 3, cycles: 100 }, &[fault], &options).unwrap();
        assert!(trace.mismatch_cycles().is_empty());
        let site_name = h.net_name(site);
        let idx = trace.net_names.iter().position(|n| n == site_name).unwrap();
        // Before the scrub the net is stuck; afterwards it follows its logic.
        assert!((3..50).all(|c| trace.cycles[c].nets.as_ref().unwrap()[idx]));
        assert!((50..100).any(|c| !trace.cycles[c].nets.as_ref().unwrap()[idx]));
    }

    #[test]
    fn tmr_faults_in_two_replicas_separated_by_scrub() {
        let m = build_multiplier(4).unwrap();
        let h = harden_tmr(&m).unwrap();
        let p3 = m.outputs().iter().position(|&o| m.net_name(o) == "p3").unwrap();
        let site = |k: u8| h.probe(ProbeRole::ReplicaOut { replica: k, output: p3 as u32 }).unwrap();
        let stim = Stimulus::Random { seed: 9, cycles: 60 };
        let faults = [
            FaultSpec {
                site: site(0),
                kind: FaultKind::StuckAt1,
                start_cycle: 1,
            },
            FaultSpec {
                site: site(1),
                kind: FaultKind::StuckAt1,
                start_cycle: 30,
            },
        ];
        let separated = SimOptions {
            scrub_at: vec![20],
            record_nets: false,
        };
        let trace = simulate_with_golden(&h, &m, &stim, &faults, &separated).unwrap();
        assert!(trace.mismatch_cycles().is_empty());
        // Without the scrub both replicas are wrong at once.
        let trace = simulate_with_golden(&h, &m, &stim, &faults, &SimOptions::default()).unwrap();
        assert!(!trace.mismatch_cycles().is_empty());
    }

    #[test]
    fn zero_fault_runs_match_golden_for_every_method() {
        let m = build_multiplier(4).unwrap();
        let stim = Stimulus::Random { seed: 1, cycles: 500 };
        for h in [harden_iolb(&m).unwrap(), harden_tmr(&m).unwrap(), harden_dwc_ced(&m).unwrap()] {
            let trace = simulate_with_golden(&h, &m, &stim, &[], &SimOptions::default()).unwrap();
            assert!(trace.mismatch_cycles().is_empty(), "{}", h.name());
            assert!(trace.cycles.iter().all(|c| c.probes.iter().zip(&trace.probe_roles).all(|(&v, r)| {
                !v || matches!(r, ProbeRole::ReplicaOut { .. })
            })));
        }
    }

    #[test]
    fn traces_are_deterministic_and_csv_is_stable() {
        let h = harden_iolb(&build_gate_demo(GateKind::Xor).unwrap()).unwrap();
        let stim = Stimulus::Random { seed: 42, cycles: 20 };
        let a = simulate(&h, &stim, &[], &SimOptions::default()).unwrap();
        let b = simulate(&h, &stim, &[], &SimOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.to_csv().starts_with("cycle,net,value\n0,a,"));
    }

    #[test]
    fn lanes_are_independent() {
        let n = build_gate_demo(GateKind::Not).unwrap();
        let mut sim = Simulator::<u64>::new(&n).unwrap();
        sim.inject(
            FaultSpec {
                site: n.outputs()[0],
                kind: FaultKind::StuckAt1,
                start_cycle: 1,
            },
            0b10,
        )
        .unwrap();
        sim.step(&[u64::MAX]).unwrap();
        assert_eq!(sim.outputs(), vec![0]);
        sim.step(&[u64::MAX]).unwrap();
        assert_eq!(sim.outputs(), vec![0b10]);
    }
}
