// SPDX-License-Identifier: Apache-2.0

//! Resource cost model.
//!
//! LUT packing is greedy: gates are visited in topological order and each
//! starts a cone rooted at its output. An input cone is absorbed when its
//! root net has fanout 1 (primary outputs and register inputs count) and the
//! merged support stays within four nets. The number of surviving cones is
//! the LUT-equivalent count. Only live gates are packed: those whose output
//! reaches a primary output, a register input or a probe.
//!
//! Gates whose output is an alias (the recompute instance of DWC-CED) share
//! hardware with their site and are not packed. Their phase overhead is
//! charged instead: `hold_bits` flip-flops and `operand_muxes` LUTs, both
//! booked under the checker tag.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::netlist::{HardeningMethod, ModuleTag, NetId, Netlist};

pub const LUT_INPUTS: usize = 4;

/// A packed look-up table: `gates` (topological order) compute the root
/// gate's output from `support`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub root: usize,
    pub gates: Vec<usize>,
    pub support: Vec<NetId>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TagCost {
    pub gates: usize,
    pub luts: usize,
    pub flip_flops: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub lut_equiv: usize,
    pub flip_flops: usize,
    pub io_pads: usize,
    pub raw_gate_count: usize,
    /// Keyed by `original`, `checker`, `voter` and `replica`.
    pub breakdown: BTreeMap<String, TagCost>,
    #[serde(skip)]
    pub cones: Vec<Cone>,
}

fn tag_key(tag: ModuleTag) -> &'static str {
    match tag {
        ModuleTag::Original => "original",
        ModuleTag::Checker => "checker",
        ModuleTag::Voter => "voter",
        ModuleTag::Replica(_) => "replica",
    }
}

/// Nets with an observable sink, directly or through gates.
fn live_nets(netlist: &Netlist) -> Vec<bool> {
    let mut live = vec![false; netlist.net_count()];
    let mut stack: Vec<NetId> = netlist.outputs().to_vec();
    stack.extend(netlist.registers().iter().map(|r| r.input));
    stack.extend(netlist.probes().iter().map(|p| p.net));
    let mut driver: Vec<Option<usize>> = vec![None; netlist.net_count()];
    for (gi, g) in netlist.gates().iter().enumerate() {
        driver[g.output.index()] = Some(gi);
    }
    while let Some(net) = stack.pop() {
        if std::mem::replace(&mut live[net.index()], true) {
            continue;
        }
        if let Some(gi) = driver[net.index()] {
            stack.extend(netlist.gates()[gi].inputs.iter().copied());
        }
    }
    live
}

/// Sort key comparing digit runs by value, so `__v9` precedes `__v10`.
pub(crate) fn natural_key(name: &str) -> Vec<(bool, usize, &str)> {
    let mut key = Vec::new();
    let mut rest = name;
    while let Some(c) = rest.chars().next() {
        let digit = c.is_ascii_digit();
        let end = rest.find(|ch: char| ch.is_ascii_digit() != digit).unwrap_or(rest.len());
        let (chunk, tail) = rest.split_at(end);
        if digit {
            let value = chunk.trim_start_matches('0');
            key.push((true, value.len(), value));
        } else {
            key.push((false, 0, chunk));
        }
        rest = tail;
    }
    key
}

/// Topological order with ties broken by output name, so that packing does
/// not depend on gate or net numbering.
fn packing_order(netlist: &Netlist) -> Vec<usize> {
    netlist
        .topo_order_by_key(|g| natural_key(netlist.net_name(netlist.gates()[g].output)))
        .unwrap_or_else(|_| (0..netlist.gates().len()).collect())
}

/// Greedy fanout-1 cone packing; see the module docs.
/// Within a gate, input cones are tried in the topological order of their
/// roots.
pub fn pack_luts(netlist: &Netlist) -> Vec<Cone> {
    let fanout = netlist.fanout_counts();
    let live = live_nets(netlist);
    let aliased: HashSet<NetId> = netlist.aliases().map(|(net, _)| net).collect();
    let order = packing_order(netlist);
    let mut position: Vec<usize> = vec![usize::MAX; netlist.net_count()];
    for (pos, &gi) in order.iter().enumerate() {
        position[netlist.gates()[gi].output.index()] = pos;
    }

    let mut cones: Vec<Option<Cone>> = Vec::new();
    let mut cone_at: Vec<Option<usize>> = vec![None; netlist.net_count()];
    for gi in order {
        let g = &netlist.gates()[gi];
        if aliased.contains(&g.output) || !live[g.output.index()] {
            continue;
        }
        let mut support: BTreeSet<NetId> = g.inputs.iter().copied().collect();
        let mut gates = Vec::new();
        let mut distinct: Vec<NetId> = support.iter().copied().collect();
        distinct.sort_by_key(|n| position[n.index()]);
        for input in distinct {
            if fanout[input.index()] != 1 {
                continue;
            }
            let Some(ci) = cone_at[input.index()] else { continue };
            let child = cones[ci].as_ref().expect("cones are absorbed once");
            let mut merged = support.clone();
            merged.remove(&input);
            merged.extend(child.support.iter().copied());
            if merged.len() <= LUT_INPUTS {
                let child = cones[ci].take().expect("checked above");
                gates.extend(child.gates);
                support = merged;
            }
        }
        gates.push(gi);
        cone_at[g.output.index()] = Some(cones.len());
        cones.push(Some(Cone {
            root: gi,
            gates,
            support: support.into_iter().collect(),
        }));
    }
    cones.into_iter().flatten().collect()
}

pub fn cost_report(netlist: &Netlist) -> CostReport {
    let cones = pack_luts(netlist);
    let mut breakdown: BTreeMap<String, TagCost> = BTreeMap::new();
    for g in netlist.gates() {
        breakdown.entry(tag_key(g.tag).to_string()).or_default().gates += 1;
    }
    for c in &cones {
        let tag = netlist.gates()[c.root].tag;
        breakdown.entry(tag_key(tag).to_string()).or_default().luts += 1;
    }
    for r in netlist.registers() {
        breakdown.entry(tag_key(r.tag).to_string()).or_default().flip_flops += 1;
    }
    if let Some(phase) = netlist.phase_overhead() {
        let checker = breakdown.entry(tag_key(ModuleTag::Checker).to_string()).or_default();
        checker.flip_flops += phase.hold_bits;
        checker.luts += phase.operand_muxes;
    }

    let pins = netlist.inputs().len() + netlist.outputs().len();
    let io_pads = match netlist.method() {
        Some(HardeningMethod::Tmr) => 3 * pins,
        _ => pins,
    };
    CostReport {
        lut_equiv: breakdown.values().map(|t| t.luts).sum(),
        flip_flops: breakdown.values().map(|t| t.flip_flops).sum(),
        io_pads,
        raw_gate_count: netlist.gates().len(),
        breakdown,
        cones,
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::eval::eval_combinational;
    use crate::generate::{build_gate_demo, build_multiplier};
    use crate::harden::harden;
    use crate::netlist::GateKind;

    #[test]
    fn natural_order() {
        let mut names = ["__v10", "__v9", "a", "__v09x", "p2", "p10"];
        names.sort_by_key(|n| natural_key(n));
        assert_eq!(names, ["__v9", "__v09x", "__v10", "a", "p2", "p10"]);
    }

    #[test]
    fn not_demo() {
        let r = cost_report(&build_gate_demo(GateKind::Not).unwrap());
        assert_eq!((r.lut_equiv, r.flip_flops, r.io_pads, r.raw_gate_count), (1, 0, 2, 1));
    }

    #[test]
    fn two_bit_hand_count() {
        let m = build_multiplier(2).unwrap();
        // Every internal product feeds two gates, so nothing packs.
        let base = cost_report(&m);
        assert_eq!((base.lut_equiv, base.flip_flops, base.io_pads), (8, 0, 8));

        // Three replicas plus one LUT per voter. The third replica's output
        // feeds its voter once, so that output gate folds into the voter LUT.
        let tmr = cost_report(&harden(&m, HardeningMethod::Tmr).unwrap());
        assert_eq!((tmr.lut_equiv, tmr.flip_flops, tmr.io_pads), (3 * 8, 0, 3 * 8));
        assert_eq!(tmr.breakdown["voter"].luts, 4);
        assert_eq!(tmr.breakdown["replica"].luts, 3 * 8 - 4);
        assert_eq!(tmr.breakdown["voter"].gates, 16);

        // One delay register per used input and per gate, plus `armed`.
        let iolb = cost_report(&harden(&m, HardeningMethod::Iolb).unwrap());
        assert_eq!((iolb.flip_flops, iolb.io_pads), (4 + 8 + 1, 8));
        assert_eq!(iolb.breakdown["original"].gates, 8);

        // Voter state plus the held normal-phase results of both replicas.
        let dwc = cost_report(&harden(&m, HardeningMethod::DwcCed).unwrap());
        assert_eq!((dwc.flip_flops, dwc.io_pads), (3 + 2 * 4, 8));
    }

    /// Gates reaching a sink, by fixpoint over the gate list.
    fn oracle_live_gates(n: &Netlist) -> HashSet<usize> {
        let mut sinks: HashSet<NetId> = n.outputs().iter().copied().collect();
        sinks.extend(n.registers().iter().map(|r| r.input));
        sinks.extend(n.probes().iter().map(|p| p.net));
        let mut live = HashSet::new();
        loop {
            let before = live.len();
            for (gi, g) in n.gates().iter().enumerate() {
                if sinks.contains(&g.output) && live.insert(gi) {
                    sinks.extend(g.inputs.iter().copied());
                }
            }
            if live.len() == before {
                return live;
            }
        }
    }

    /// Independent statement of the packing rule: a gate's cone swallows an
    /// input net's whole cone exactly when that net is single-fanout,
    /// gate-driven, not an alias and the union fits.
    fn oracle_lut_count(n: &Netlist) -> usize {
        let live = oracle_live_gates(n);
        let fanout = n.fanout_counts();
        let aliases: HashSet<NetId> = n.aliases().map(|(a, _)| a).collect();
        let driver: HashMap<NetId, usize> = n.gates().iter().enumerate().map(|(i, g)| (g.output, i)).collect();
        let mut support: HashMap<NetId, BTreeSet<NetId>> = HashMap::new();
        let mut absorbed: HashSet<NetId> = HashSet::new();
        let order = n.topo_order_by_key(|g| natural_key(n.net_name(n.gates()[g].output))).unwrap();
        let rank: HashMap<NetId, usize> = order.iter().enumerate().map(|(r, &gi)| (n.gates()[gi].output, r)).collect();
        for gi in order {
            let g = &n.gates()[gi];
            if aliases.contains(&g.output) || !live.contains(&gi) {
                continue;
            }
            let mut s: BTreeSet<NetId> = g.inputs.iter().copied().collect();
            let mut candidates: Vec<NetId> = s.iter().copied().collect();
            candidates.sort_by_key(|x| rank.get(x).copied().unwrap_or(usize::MAX));
            for input in candidates {
                let packable = fanout[input.index()] == 1
                    && driver.contains_key(&input)
                    && !aliases.contains(&input);
                if !packable {
                    continue;
                }
                let child = &support[&input];
                let union: BTreeSet<NetId> = s.iter().filter(|&&x| x != input).chain(child).copied().collect();
                if union.len() <= 4 {
                    s = union;
                    absorbed.insert(input);
                }
            }
            support.insert(g.output, s);
        }
        let extra = n.phase_overhead().map_or(0, |p| p.operand_muxes);
        support.len() - absorbed.len() + extra
    }

    #[test]
    fn packing_matches_oracle() {
        for bits in [2, 3, 4] {
            let m = build_multiplier(bits).unwrap();
            assert_eq!(cost_report(&m).lut_equiv, oracle_lut_count(&m));
            for method in HardeningMethod::ALL {
                let h = harden(&m, method).unwrap();
                assert_eq!(cost_report(&h).lut_equiv, oracle_lut_count(&h), "{method} {bits}");
            }
        }
    }

    fn eval_cone(n: &Netlist, cone: &Cone, values: &mut HashMap<NetId, bool>) -> bool {
        for &gi in &cone.gates {
            let g = &n.gates()[gi];
            let ins: Vec<bool> = g.inputs.iter().map(|i| values[i]).collect();
            values.insert(g.output, g.kind.eval(&ins));
        }
        values[&n.gates()[cone.root].output]
    }

    fn assert_cones_valid(n: &Netlist) {
        let report = cost_report(n);
        let fanout = n.fanout_counts();
        let mut covered = HashSet::new();
        for cone in &report.cones {
            assert!(cone.support.len() <= LUT_INPUTS);
            for &gi in &cone.gates {
                assert!(covered.insert(gi), "gate {gi} packed twice");
                if gi != cone.root {
                    assert_eq!(fanout[n.gates()[gi].output.index()], 1);
                }
            }
            // The cone must be closed over its support for every assignment.
            for assignment in 0..1u32 << cone.support.len() {
                let mut values: HashMap<NetId, bool> =
                    cone.support.iter().enumerate().map(|(k, &s)| (s, assignment >> k & 1 == 1)).collect();
                eval_cone(n, cone, &mut values);
            }
        }
        let aliased: HashSet<NetId> = n.aliases().map(|(a, _)| a).collect();
        let live = oracle_live_gates(n);
        let packable = (0..n.gates().len())
            .filter(|gi| live.contains(gi) && !aliased.contains(&n.gates()[*gi].output))
            .count();
        assert_eq!(covered.len(), packable);

        // Each cone reproduces its root's value inside the full circuit.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..32 {
            let pis: Vec<bool> = (0..n.inputs().len()).map(|_| rng.gen()).collect();
            let regs: Vec<bool> = (0..n.registers().len()).map(|_| rng.gen()).collect();
            let full = eval_combinational(n, &pis, &regs).unwrap();
            for cone in &report.cones {
                let mut values: HashMap<NetId, bool> = cone.support.iter().map(|&s| (s, full[s.index()])).collect();
                let root = n.gates()[cone.root].output;
                assert_eq!(eval_cone(n, cone, &mut values), full[root.index()]);
            }
        }
    }

    #[test]
    fn packing_is_valid() {
        let m = build_multiplier(4).unwrap();
        assert_cones_valid(&m);
        for method in HardeningMethod::ALL {
            assert_cones_valid(&harden(&m, method).unwrap());
        }
    }

    #[test]
    fn cost_survives_a_text_round_trip() {
        let m = build_multiplier(4).unwrap();
        for method in HardeningMethod::ALL {
            let h = harden(&m, method).unwrap();
            let parsed = crate::text::parse_str(&crate::text::emit(&h).unwrap()).unwrap();
            let (a, b) = (cost_report(&h), cost_report(&parsed));
            assert_eq!(
                (a.lut_equiv, a.flip_flops, a.io_pads, a.raw_gate_count, a.breakdown),
                (b.lut_equiv, b.flip_flops, b.io_pads, b.raw_gate_count, b.breakdown),
                "{method}"
            );
        }
    }

    #[test]
    fn totals_equal_breakdown() {
        let m = build_multiplier(3).unwrap();
        for method in HardeningMethod::ALL {
            let r = cost_report(&harden(&m, method).unwrap());
            assert_eq!(r.raw_gate_count, r.breakdown.values().map(|t| t.gates).sum::<usize>());
            assert_eq!(r.lut_equiv, r.breakdown.values().map(|t| t.luts).sum::<usize>());
            assert_eq!(r.flip_flops, r.breakdown.values().map(|t| t.flip_flops).sum::<usize>());
        }
    }

    fn random_netlist(seed: u64, gates: usize) -> Netlist {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut n = Netlist::new("rand");
        let mut nets: Vec<NetId> = (0..3).map(|i| n.add_input(format!("i{i}")).unwrap()).collect();
        let kinds = [GateKind::And, GateKind::Or, GateKind::Xor, GateKind::Not, GateKind::Mux2];
        for _ in 0..gates {
            let kind = kinds[rng.gen_range(0..kinds.len())];
            let ins: Vec<NetId> = (0..kind.arity()).map(|_| nets[rng.gen_range(0..nets.len())]).collect();
            nets.push(n.gate(kind, &ins, ModuleTag::Original, "g"));
        }
        n.add_output(*nets.last().unwrap());
        n
    }

    #[test]
    fn dead_logic_is_not_counted() {
        let mut n = build_gate_demo(GateKind::And).unwrap();
        let a = n.inputs()[0];
        n.gate(GateKind::Not, &[a], ModuleTag::Original, "dead");
        assert_eq!(cost_report(&n).lut_equiv, 1);
        assert_eq!(cost_report(&n).raw_gate_count, 2);
    }

    proptest! {
        #[test]
        fn adding_a_gate_never_lowers_cost(seed in any::<u64>(), size in 1usize..24, pick in any::<u32>()) {
            let n = random_netlist(seed, size);
            let before = cost_report(&n);
            let mut grown = n.clone();
            let nets: Vec<NetId> = grown.nets().collect();
            let a = nets[pick as usize % nets.len()];
            let b = nets[(pick as usize / 7) % nets.len()];
            let extra = grown.gate(GateKind::And, &[a, b], ModuleTag::Original, "extra");
            grown.add_output(extra);
            let after = cost_report(&grown);
            prop_assert!(after.lut_equiv >= before.lut_equiv);
            prop_assert!(after.raw_gate_count > before.raw_gate_count);
        }
    }
}
