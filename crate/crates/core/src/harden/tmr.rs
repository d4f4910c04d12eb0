// SPDX-License-Identifier: Apache-2.0

//! Triple modular redundancy with a majority voter per primary output.

use super::{check, copy_operands, named_or_fresh, HardenError};
use crate::netlist::{Driver, GateKind, HardeningMethod, ModuleTag, NetId, Netlist, ProbeRole};

/// Three replicas of all logic (gates and registers) share the primary
/// inputs; each primary output is `maj(a, b, c) = ab + c(a + b)`, four
/// VOTER-tagged gates. Replica `k` nets are named `__r{k}_<name>`.
pub fn harden_tmr(src: &Netlist) -> Result<Netlist, HardenError> {
    check(src, false)?;
    let mut out = Netlist::new(format!("{}_tmr", src.name()));
    let drivers = src.drivers();

    let mut shared: Vec<Option<NetId>> = vec![None; src.net_count()];
    for &pi in src.inputs() {
        shared[pi.index()] = Some(out.add_input(src.net_name(pi)).expect("names come from a valid netlist"));
    }
    // Voted outputs take the original names; reserve them first.
    let mut voted: Vec<Option<NetId>> = vec![None; src.net_count()];
    for &po in src.outputs() {
        if shared[po.index()].is_none() && voted[po.index()].is_none() {
            voted[po.index()] = Some(out.add_net(src.net_name(po)).expect("unique output names"));
        }
    }

    let mut replicas: Vec<Vec<NetId>> = Vec::with_capacity(3);
    for k in 0..3u8 {
        let tag = ModuleTag::Replica(k);
        let map: Vec<NetId> = src
            .nets()
            .map(|net| match drivers[net.index()] {
                Driver::Input(_) => shared[net.index()].expect("inputs added above"),
                _ => named_or_fresh(&mut out, format!("__r{k}_{}", src.net_name(net)), &format!("r{k}_")),
            })
            .collect();
        for g in src.gates() {
            let inputs = g.inputs.iter().map(|i| map[i.index()]).collect();
            out.add_gate(g.kind, inputs, map[g.output.index()], tag);
        }
        for r in src.registers() {
            out.add_register(map[r.input.index()], map[r.output.index()], r.init, tag);
        }
        replicas.push(map);
    }

    let voter = ModuleTag::Voter;
    for (i, &po) in src.outputs().iter().enumerate() {
        for (k, map) in replicas.iter().enumerate() {
            out.add_probe(
                ProbeRole::ReplicaOut {
                    replica: k as u8,
                    output: i as u32,
                },
                map[po.index()],
            );
        }
        if let Some(pi) = shared[po.index()] {
            out.add_output(pi);
            continue;
        }
        let target = voted[po.index()].expect("reserved above");
        if !out.gates().iter().any(|g| g.output == target) {
            let inputs = [0, 1, 2].map(|k| replicas[k][po.index()]);
            add_majority(&mut out, inputs, target, voter);
        }
        out.add_output(target);
    }
    out.set_method(Some(HardeningMethod::Tmr));
    copy_operands(src, &mut out);
    Ok(out)
}

/// Drives `target` with `ab + c(a + b)`.
fn add_majority(n: &mut Netlist, [a, b, c]: [NetId; 3], target: NetId, tag: ModuleTag) {
    let ab = n.gate(GateKind::And, &[a, b], tag, "v");
    let either = n.gate(GateKind::Or, &[a, b], tag, "v");
    let c_either = n.gate(GateKind::And, &[c, either], tag, "v");
    n.add_gate(GateKind::Or, vec![ab, c_either], target, tag);
}
