// SPDX-License-Identifier: Apache-2.0

//! Input-output logic based (IOLB) hardening.
//!
//! Each gate `g` keeps its logic (tagged ORIGINAL) but its raw output `Y`
//! moves to a `__raw_` net. The original net name now carries the corrected
//! value `F = Y xor E`, where `E` is the gate's minimized error function over
//! the input values, input changes and the output change.
//!
//! Every change signal compares a net with its previous *corrected* value:
//! primary inputs get a delay register, and each gate's `F` is delayed into
//! `F_prev`, which serves both its own output-change signal and the input
//! change of every consumer. Storing the corrected value keeps the netlist
//! acyclic.
//!
//! Registers reset to 0, so during the first cycle the previous values are
//! not meaningful. A shared `armed` register (0 in cycle 0, then 1) gates
//! every correction through a MUX2 so that cycle 0 passes `Y` unchanged.
//! The gated error signal is exposed as the cell's `error` probe.

use std::collections::HashMap;

use super::{check, copy_operands, named_or_fresh, HardenError};
use crate::derive::{derive_error_table, error_function_as_gates, simplify, ErrorFunction, ErrorInputs, Var};
use crate::netlist::{GateKind, HardeningMethod, ModuleTag, NetId, Netlist, ProbeRole};

const CHECKER: ModuleTag = ModuleTag::Checker;

pub fn harden_iolb(src: &Netlist) -> Result<Netlist, HardenError> {
    check(src, true)?;
    let mut out = Netlist::new(format!("{}_iolb", src.name()));

    // Value nets: primary inputs and corrected gate outputs keep their names.
    let mut value: Vec<Option<NetId>> = vec![None; src.net_count()];
    for &pi in src.inputs() {
        value[pi.index()] = Some(out.add_input(src.net_name(pi)).expect("names come from a valid netlist"));
    }
    for g in src.gates() {
        value[g.output.index()] = Some(out.add_net(src.net_name(g.output)).expect("single driver per net"));
    }
    let raw: Vec<NetId> = src
        .gates()
        .iter()
        .map(|g| named_or_fresh(&mut out, format!("__raw_{}", src.net_name(g.output)), "raw"))
        .collect();

    let zero = out.gate(GateKind::Const0, &[], CHECKER, "zero");
    let one = out.gate(GateKind::Const1, &[], CHECKER, "one");
    let armed = out.fresh_net("armed");
    out.add_register(one, armed, false, CHECKER);

    let mut prev: Vec<Option<NetId>> = vec![None; src.net_count()];
    let mut change: Vec<Option<NetId>> = vec![None; src.net_count()];
    let mut functions: HashMap<GateKind, ErrorFunction> = HashMap::new();

    let order = src.topo_order().expect("validated netlists are acyclic");
    for gi in order {
        let g = &src.gates()[gi];
        let x: Vec<NetId> = g.inputs.iter().map(|i| value[i.index()].expect("topological order")).collect();
        let y = raw[gi];
        let f = value[g.output.index()].expect("reserved above");
        out.add_gate(g.kind, x.clone(), y, ModuleTag::Original);

        let f_prev = out.fresh_net("fprev");
        out.add_register(f, f_prev, false, CHECKER);
        prev[g.output.index()] = Some(f_prev);
        let yc = out.gate(GateKind::Xor, &[y, f_prev], CHECKER, "yc");

        let e_raw = if g.kind.is_const() {
            // No inputs: the only legal output change is none.
            yc
        } else {
            let func = functions
                .entry(g.kind)
                .or_insert_with(|| simplify(&derive_error_table(g.kind).expect("non-constant kind")))
                .clone();
            let xc: Vec<NetId> = g
                .inputs
                .iter()
                .enumerate()
                .map(|(i, &net)| {
                    if !func.support().contains(&Var::Xc(i)) {
                        // Unused by the function; any net will do.
                        return x[i];
                    }
                    if let Some(c) = change[net.index()] {
                        return c;
                    }
                    let p = *prev[net.index()].get_or_insert_with(|| {
                        let q = out.fresh_net("xprev");
                        out.add_register(x[i], q, false, CHECKER);
                        q
                    });
                    let c = out.gate(GateKind::Xor, &[x[i], p], CHECKER, "xc");
                    change[net.index()] = Some(c);
                    c
                })
                .collect();
            let inputs = ErrorInputs { x, xc, y, yc };
            error_function_as_gates(&func, &mut out, &inputs, CHECKER, "e")
        };
        let e_en = out.gate(GateKind::Mux2, &[armed, zero, e_raw], CHECKER, "een");
        out.add_gate(GateKind::Xor, vec![y, e_en], f, CHECKER);
        out.add_probe(ProbeRole::Error, e_en);
    }

    for &po in src.outputs() {
        out.add_output(value[po.index()].expect("outputs are driven"));
    }
    out.set_method(Some(HardeningMethod::Iolb));
    copy_operands(src, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{build_gate_demo, build_multiplier};

    fn count(n: &Netlist, kind: GateKind, tag: ModuleTag) -> usize {
        n.gates().iter().filter(|g| g.kind == kind && g.tag == tag).count()
    }

    #[test]
    fn not_cell_inventory() {
        let h = harden_iolb(&build_gate_demo(GateKind::Not).unwrap()).unwrap();
        assert!(h.validate().is_ok());
        // Shared arming block: CONST0, CONST1 and the armed register.
        assert_eq!(count(&h, GateKind::Const0, CHECKER), 1);
        assert_eq!(count(&h, GateKind::Const1, CHECKER), 1);
        // The cell: NOT, input-change XOR, output-change XOR, E XOR,
        // correction XOR, correction-enable MUX2, input and output registers.
        assert_eq!(count(&h, GateKind::Not, ModuleTag::Original), 1);
        assert_eq!(count(&h, GateKind::Xor, CHECKER), 4);
        assert_eq!(count(&h, GateKind::Mux2, CHECKER), 1);
        assert_eq!(h.gates().len(), 1 + 4 + 1 + 2);
        assert_eq!(h.registers().len(), 2 + 1);
        assert!(h.registers().iter().all(|r| !r.init && r.tag == CHECKER));
        assert_eq!(h.inputs().len(), 1);
        assert_eq!(h.outputs().len(), 1);
        assert_eq!(h.net_name(h.outputs()[0]), "b");
        assert_eq!(h.probes().len(), 1);
    }

    #[test]
    fn xor_cell_uses_two_xor_error_gates() {
        let h = harden_iolb(&build_gate_demo(GateKind::Xor).unwrap()).unwrap();
        // 2 input changes + output change + 2 E gates + correction.
        assert_eq!(count(&h, GateKind::Xor, CHECKER), 6);
        assert_eq!(count(&h, GateKind::Xor, ModuleTag::Original), 1);
        assert_eq!(h.registers().len(), 2 + 1 + 1);
    }

    #[test]
    fn registers_are_shared_across_fanout() {
        let m = build_multiplier(4).unwrap();
        let h = harden_iolb(&m).unwrap();
        let used_inputs = m
            .inputs()
            .iter()
            .filter(|pi| m.gates().iter().any(|g| g.inputs.contains(pi)))
            .count();
        assert_eq!(h.registers().len(), used_inputs + m.gates().len() + 1);
        assert_eq!(h.probes().len(), m.gates().len());
        assert_eq!(
            h.gates().iter().filter(|g| g.tag == ModuleTag::Original).count(),
            m.gates().len()
        );
        let names: std::collections::HashSet<&str> = h.nets().map(|n| h.net_name(n)).collect();
        assert_eq!(names.len(), h.net_count());
    }

    #[test]
    fn constant_gates_get_a_cell() {
        let m = build_multiplier(1).unwrap();
        let h = harden_iolb(&m).unwrap();
        assert!(h.validate().is_ok());
        assert_eq!(h.probes().len(), 2);
    }
}
