// SPDX-License-Identifier: Apache-2.0

//! Duplication with comparison and concurrent error detection (DWC-CED).
//!
//! Two replicas `cl0`, `cl1` of the multiplier each run twice per cycle:
//! once on the operands (normal phase) and once on the encoded operands
//! `A << 1` (recompute phase); decoding shifts the result right by one. Both
//! phases run on the same physical module, so the recompute instance is
//! built as a second copy whose nets are declared aliases of the normal
//! instance: a fault at a normal-phase net hits its alias too.
//!
//! Comparators:
//! * `Tc_k`: normal result of replica `k` differs from its decoded recompute,
//! * `Hc`: the normal results of the two replicas differ,
//! * `Hcd`: the decoded recompute results of the two replicas differ.
//!
//! A one-hot voter state machine (`upset`, `m0` faulty, `m1` faulty; all zero
//! is normal) picks which replica drives the outputs:
//!
//! ```text
//! normal --Hc--> upset
//! upset --Tc0 & !Tc1--> m0 faulty (select cl1)
//! upset --Tc1 & !Tc0--> m1 faulty (select cl0)
//! ```
//!
//! Within a cycle a lone `Tc_k` already deselects replica `k`.

use super::{check, copy_operands, HardenError};
use crate::generate::instantiate_array_multiplier;
use crate::netlist::{GateKind, HardeningMethod, ModuleTag, NetId, Netlist, Operation, PhaseOverhead, ProbeRole};

pub fn harden_dwc_ced(src: &Netlist) -> Result<Netlist, HardenError> {
    check(src, true)?;
    let ops = src.operands().ok_or(HardenError::MissingOperands)?;
    let Operation::Multiply = ops.operation;
    let (wa, wb) = (ops.a.len(), ops.b.len());
    let width = wa + wb;
    if wa == 0 || wb == 0 || ops.result.len() != width {
        return Err(HardenError::OperandMismatch);
    }
    let result_pos = |po: NetId| ops.result.iter().position(|&r| r == po);
    if src.outputs().iter().any(|&po| result_pos(po).is_none()) {
        return Err(HardenError::OperandMismatch);
    }

    let mut out = Netlist::new(format!("{}_dwc", src.name()));
    let mut pi_map: Vec<Option<NetId>> = vec![None; src.net_count()];
    for &pi in src.inputs() {
        pi_map[pi.index()] = Some(out.add_input(src.net_name(pi)).expect("names come from a valid netlist"));
    }
    let operand = |ids: &[NetId]| -> Result<Vec<NetId>, HardenError> {
        ids.iter()
            .map(|id| pi_map[id.index()].ok_or(HardenError::OperandMismatch))
            .collect()
    };
    let a = operand(&ops.a)?;
    let b = operand(&ops.b)?;
    let product_names: Vec<NetId> = ops
        .result
        .iter()
        .map(|&r| out.add_net(src.net_name(r)).map_err(|_| HardenError::OperandMismatch))
        .collect::<Result<_, _>>()?;

    let checker = ModuleTag::Checker;
    let voter = ModuleTag::Voter;
    let zero = out.gate(GateKind::Const0, &[], checker, "zero");
    let a_normal: Vec<NetId> = a.iter().copied().chain([zero]).collect();
    let a_encoded: Vec<NetId> = [zero].into_iter().chain(a.iter().copied()).collect();

    let mut normal: Vec<Vec<NetId>> = Vec::new();
    let mut recompute: Vec<Vec<NetId>> = Vec::new();
    for k in 0..2u8 {
        let tag = ModuleTag::Replica(k);
        let first = out.gates().len();
        let n_full = instantiate_array_multiplier(&mut out, &a_normal, &b, tag, &format!("r{k}_"));
        let mid = out.gates().len();
        let r_full = instantiate_array_multiplier(&mut out, &a_encoded, &b, tag, &format!("r{k}d_"));
        let end = out.gates().len();
        debug_assert_eq!(mid - first, end - mid);
        for j in 0..mid - first {
            let (site, alias) = (out.gates()[first + j].output, out.gates()[mid + j].output);
            out.add_alias(alias, site);
        }
        normal.push(n_full[..width].to_vec());
        recompute.push(r_full[1..=width].to_vec());
    }

    let mismatch = |out: &mut Netlist, x: &[NetId], y: &[NetId], hint: &str| -> NetId {
        let diffs: Vec<NetId> = x
            .iter()
            .zip(y)
            .map(|(&p, &q)| out.gate(GateKind::Xor, &[p, q], checker, hint))
            .collect();
        diffs
            .into_iter()
            .reduce(|acc, d| out.gate(GateKind::Or, &[acc, d], checker, hint))
            .expect("width >= 2")
    };
    let tc0 = mismatch(&mut out, &normal[0], &recompute[0], "tc0_");
    let tc1 = mismatch(&mut out, &normal[1], &recompute[1], "tc1_");
    let hc = mismatch(&mut out, &normal[0], &normal[1], "hc_");
    let hcd = mismatch(&mut out, &recompute[0], &recompute[1], "hcd_");

    let s_up = out.fresh_net("s_up");
    let s_f0 = out.fresh_net("s_m0");
    let s_f1 = out.fresh_net("s_m1");
    let g = |out: &mut Netlist, kind: GateKind, ins: &[NetId]| out.gate(kind, ins, voter, "v");
    let any_state = g(&mut out, GateKind::Or, &[s_f0, s_f1]);
    let any_state = g(&mut out, GateKind::Or, &[s_up, any_state]);
    let in_normal = g(&mut out, GateKind::Not, &[any_state]);
    let differ = g(&mut out, GateKind::Xor, &[tc0, tc1]);
    let agree = g(&mut out, GateKind::Not, &[differ]);
    let only0 = g(&mut out, GateKind::And, &[differ, tc0]);
    let only1 = g(&mut out, GateKind::And, &[differ, tc1]);

    let enter_upset = g(&mut out, GateKind::And, &[in_normal, hc]);
    let stay_upset = g(&mut out, GateKind::And, &[s_up, agree]);
    let next_up = g(&mut out, GateKind::Or, &[enter_upset, stay_upset]);
    let to_f0 = g(&mut out, GateKind::And, &[s_up, only0]);
    let next_f0 = g(&mut out, GateKind::Or, &[s_f0, to_f0]);
    let to_f1 = g(&mut out, GateKind::And, &[s_up, only1]);
    let next_f1 = g(&mut out, GateKind::Or, &[s_f1, to_f1]);
    out.add_register(next_up, s_up, false, voter);
    out.add_register(next_f0, s_f0, false, voter);
    out.add_register(next_f1, s_f1, false, voter);

    let keep_f0 = g(&mut out, GateKind::And, &[agree, s_f0]);
    let select1 = g(&mut out, GateKind::Or, &[only0, keep_f0]);
    for (i, &p) in product_names.iter().enumerate() {
        out.add_gate(GateKind::Mux2, vec![select1, normal[0][i], normal[1][i]], p, voter);
    }
    for &po in src.outputs() {
        out.add_output(product_names[result_pos(po).expect("checked above")]);
    }

    for (role, net) in [
        (ProbeRole::Tc0, tc0),
        (ProbeRole::Tc1, tc1),
        (ProbeRole::Hc, hc),
        (ProbeRole::Hcd, hcd),
        (ProbeRole::VoterUpset, s_up),
        (ProbeRole::VoterModule0Faulty, s_f0),
        (ProbeRole::VoterModule1Faulty, s_f1),
    ] {
        out.add_probe(role, net);
    }
    for (k, bits) in normal.iter().enumerate() {
        for (i, &po) in src.outputs().iter().enumerate() {
            let pos = result_pos(po).expect("checked above");
            out.add_probe(
                ProbeRole::ReplicaOut {
                    replica: k as u8,
                    output: i as u32,
                },
                bits[pos],
            );
        }
    }
    out.set_phase_overhead(Some(PhaseOverhead {
        // Each replica holds its normal-phase result across the recompute
        // phase and multiplexes its A operand between plain and encoded.
        hold_bits: 2 * width,
        operand_muxes: 2 * (wa + 1),
    }));
    out.set_method(Some(HardeningMethod::DwcCed));
    copy_operands(src, &mut out);
    Ok(out)
}
