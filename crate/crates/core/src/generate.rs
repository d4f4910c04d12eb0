// SPDX-License-Identifier: Apache-2.0

//! Benchmark circuit generators: single-gate demos and array multipliers.

use thiserror::Error;

use crate::netlist::{GateKind, ModuleTag, NetId, Netlist, Operands, Operation};

pub const MAX_MULTIPLIER_BITS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("constant gate kind `{0}` has no inputs to demonstrate")]
    ConstantKind(GateKind),
    #[error("multiplier width {0} is outside 1..={MAX_MULTIPLIER_BITS}")]
    Width(usize),
}

/// One gate of `kind` with fresh primary inputs and a single output.
///
/// Port names follow the single-gate case studies: `a -> b` for one input,
/// `a, b -> s` for two, and `s, a, b -> y` for the multiplexer.
pub fn build_gate_demo(kind: GateKind) -> Result<Netlist, GenerateError> {
    let (input_names, output_name): (&[&str], &str) = match kind.arity() {
        0 => return Err(GenerateError::ConstantKind(kind)),
        1 => (&["a"], "b"),
        2 => (&["a", "b"], "s"),
        _ => (&["s", "a", "b"], "y"),
    };
    let mut n = Netlist::new(format!("{}_gate", kind.name()));
    let inputs: Vec<NetId> = input_names
        .iter()
        .map(|name| n.add_input(*name).expect("fresh netlist"))
        .collect();
    let y = n.add_net(output_name).expect("fresh netlist");
    n.add_gate(kind, inputs, y, ModuleTag::Original);
    n.add_output(y);
    Ok(n)
}

/// Square `bits x bits` array multiplier with inputs `a0..`, `b0..` and
/// product outputs `p0..p{2*bits-1}`, LSB first.
pub fn build_multiplier(bits: usize) -> Result<Netlist, GenerateError> {
    build_rect_multiplier(bits, bits)
}

/// Rectangular array multiplier. Both widths must lie in `1..=32`.
pub fn build_rect_multiplier(a_bits: usize, b_bits: usize) -> Result<Netlist, GenerateError> {
    for w in [a_bits, b_bits] {
        if !(1..=MAX_MULTIPLIER_BITS).contains(&w) {
            return Err(GenerateError::Width(w));
        }
    }
    let name = if a_bits == b_bits {
        format!("mult{a_bits}")
    } else {
        format!("mult{a_bits}x{b_bits}")
    };
    let mut n = Netlist::new(name);
    let a: Vec<NetId> = (0..a_bits).map(|i| n.add_input(format!("a{i}")).unwrap()).collect();
    let b: Vec<NetId> = (0..b_bits).map(|i| n.add_input(format!("b{i}")).unwrap()).collect();
    let product = instantiate_array_multiplier(&mut n, &a, &b, ModuleTag::Original, "");
    for (k, &p) in product.iter().enumerate() {
        n.rename_net(p, format!("p{k}")).expect("product names are free");
        n.add_output(p);
    }
    n.set_operands(Some(Operands {
        operation: Operation::Multiply,
        a,
        b,
        result: product,
    }));
    Ok(n)
}

/// Adds an array multiplier over existing operand nets and returns the
/// `a.len() + b.len()` product nets. Every created gate gets `tag`; created
/// net names start with `__{prefix}`.
///
/// Row 0 is the partial-product row `a_i & b_0`. Each further row `j` adds
/// `a_i & b_j` into the running sum with a ripple-carry chain: a full adder
/// where the running sum and a carry are both present, a half adder where
/// only one is. The chain's carry-out becomes the new top bit.
pub fn instantiate_array_multiplier(
    n: &mut Netlist,
    a: &[NetId],
    b: &[NetId],
    tag: ModuleTag,
    prefix: &str,
) -> Vec<NetId> {
    let width = a.len() + b.len();
    let hint = |s: &str| format!("{prefix}{s}");
    let mut acc: Vec<Option<NetId>> = vec![None; width];
    for (i, &ai) in a.iter().enumerate() {
        acc[i] = Some(n.gate(GateKind::And, &[ai, b[0]], tag, &hint("pp")));
    }
    for (j, &bj) in b.iter().enumerate().skip(1) {
        let mut carry: Option<NetId> = None;
        for (i, &ai) in a.iter().enumerate() {
            let pp = n.gate(GateKind::And, &[ai, bj], tag, &hint("pp"));
            let weight = i + j;
            let (sum, cout) = match (acc[weight], carry) {
                (Some(x), Some(c)) => full_adder(n, x, pp, c, tag, &hint("fa")),
                (Some(x), None) | (None, Some(x)) => half_adder(n, x, pp, tag, &hint("ha")),
                (None, None) => (pp, None),
            };
            acc[weight] = Some(sum);
            carry = cout;
        }
        acc[a.len() + j] = carry;
    }
    let mut zero = None;
    acc.into_iter()
        .map(|bit| {
            bit.unwrap_or_else(|| *zero.get_or_insert_with(|| n.gate(GateKind::Const0, &[], tag, &hint("zero"))))
        })
        .collect()
}

fn half_adder(n: &mut Netlist, x: NetId, y: NetId, tag: ModuleTag, hint: &str) -> (NetId, Option<NetId>) {
    let sum = n.gate(GateKind::Xor, &[x, y], tag, &format!("{hint}_s"));
    let carry = n.gate(GateKind::And, &[x, y], tag, &format!("{hint}_c"));
    (sum, Some(carry))
}

fn full_adder(
    n: &mut Netlist,
    x: NetId,
    y: NetId,
    cin: NetId,
    tag: ModuleTag,
    hint: &str,
) -> (NetId, Option<NetId>) {
    let t = n.gate(GateKind::Xor, &[x, y], tag, &format!("{hint}_t"));
    let sum = n.gate(GateKind::Xor, &[t, cin], tag, &format!("{hint}_s"));
    let c1 = n.gate(GateKind::And, &[x, y], tag, &format!("{hint}_g"));
    let c2 = n.gate(GateKind::And, &[t, cin], tag, &format!("{hint}_p"));
    let cout = n.gate(GateKind::Or, &[c1, c2], tag, &format!("{hint}_c"));
    (sum, Some(cout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval_outputs_parallel, Schedule};

    fn count(n: &Netlist, kind: GateKind) -> usize {
        n.gates().iter().filter(|g| g.kind == kind).count()
    }

    /// Evaluates `n` on up to 64 operand pairs at once and returns products.
    fn products(n: &Netlist, pairs: &[(u64, u64)]) -> Vec<u64> {
        let ops = n.operands().unwrap();
        let schedule = Schedule::new(n).unwrap();
        let mut inputs = vec![0u64; n.inputs().len()];
        for (lane, &(x, y)) in pairs.iter().enumerate() {
            for (bit, net) in ops.a.iter().enumerate() {
                let pos = n.inputs().iter().position(|i| i == net).unwrap();
                inputs[pos] |= ((x >> bit) & 1) << lane;
            }
            for (bit, net) in ops.b.iter().enumerate() {
                let pos = n.inputs().iter().position(|i| i == net).unwrap();
                inputs[pos] |= ((y >> bit) & 1) << lane;
            }
        }
        let out = eval_outputs_parallel(n, &schedule, &inputs);
        (0..pairs.len())
            .map(|lane| out.iter().enumerate().map(|(k, w)| ((w >> lane) & 1) << k).sum())
            .collect()
    }

    #[test]
    fn gate_demos() {
        let not = build_gate_demo(GateKind::Not).unwrap();
        assert_eq!((not.gates().len(), not.inputs().len(), not.outputs().len()), (1, 1, 1));
        let xor = build_gate_demo(GateKind::Xor).unwrap();
        assert_eq!((xor.gates().len(), xor.inputs().len(), xor.outputs().len()), (1, 2, 1));
        let mux = build_gate_demo(GateKind::Mux2).unwrap();
        assert_eq!((mux.gates().len(), mux.inputs().len(), mux.outputs().len()), (1, 3, 1));
        assert_eq!(
            build_gate_demo(GateKind::Const1).unwrap_err(),
            GenerateError::ConstantKind(GateKind::Const1)
        );
    }

    #[test]
    fn one_bit_multiplier_is_a_single_and() {
        let m = build_multiplier(1).unwrap();
        assert_eq!(count(&m, GateKind::And), 1);
        assert_eq!(m.inputs().len(), 2);
        assert_eq!(m.outputs().len(), 2);
        assert_eq!(products(&m, &[(1, 1), (0, 1)]), vec![1, 0]);
    }

    #[test]
    fn width_bounds() {
        assert_eq!(build_multiplier(0).unwrap_err(), GenerateError::Width(0));
        assert_eq!(build_multiplier(33).unwrap_err(), GenerateError::Width(33));
        assert!(build_multiplier(32).is_ok());
    }

    #[test]
    fn two_bit_multiplier_exhaustive() {
        let m = build_multiplier(2).unwrap();
        let pairs: Vec<(u64, u64)> = (0..4).flat_map(|x| (0..4).map(move |y| (x, y))).collect();
        let got = products(&m, &pairs);
        for (&(x, y), p) in pairs.iter().zip(got) {
            assert_eq!(p, x * y, "{x} * {y}");
        }
        assert_eq!(products(&m, &[(3, 3), (2, 3)]), vec![9, 6]);
    }

    #[test]
    fn four_bit_multiplier_exhaustive() {
        let m = build_multiplier(4).unwrap();
        assert!(m.is_combinational());
        let pairs: Vec<(u64, u64)> = (0..16).flat_map(|x| (0..16).map(move |y| (x, y))).collect();
        for chunk in pairs.chunks(64) {
            for (&(x, y), p) in chunk.iter().zip(products(&m, chunk)) {
                assert_eq!(p, x * y, "{x} * {y}");
            }
        }
    }

    #[test]
    fn rectangular_multiplier_gate_inventory() {
        // 16 partial products; row 1 has two half adders (no carry into its
        // top weight yet) and two full adders, rows 2 and 3 one half adder and
        // three full adders.
        let m = build_rect_multiplier(4, 4).unwrap();
        assert_eq!(m.gates().len(), 16 + (2 * 2 + 2 * 5) + 2 * (2 + 3 * 5));
        assert_eq!(build_multiplier(16).unwrap().gates().len(), 256 + (2 * 2 + 14 * 5) + 14 * (2 + 15 * 5));
        let r = build_rect_multiplier(5, 3).unwrap();
        assert_eq!(r.outputs().len(), 8);
        let pairs: Vec<(u64, u64)> = (0..32).flat_map(|x| (0..8).map(move |y| (x, y))).collect();
        for chunk in pairs.chunks(64) {
            for (&(x, y), p) in chunk.iter().zip(products(&r, chunk)) {
                assert_eq!(p, x * y, "{x} * {y}");
            }
        }
    }
}
