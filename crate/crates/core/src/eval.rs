// SPDX-License-Identifier: Apache-2.0

//! Zero-delay combinational evaluation.
//!
//! Evaluation is generic over a [`Word`]: every bit of the word is an
//! independent lane, so a `u64` evaluates 64 patterns (or 64 faulty machines)
//! in one pass while `u8` with broadcast values serves scalar callers.

use std::fmt::Debug;

use num_traits::PrimInt;
use thiserror::Error;

use crate::netlist::{Diagnostic, GateKind, Netlist};

/// Machine word used as a bundle of simulation lanes.
pub trait Word: PrimInt + Send + Sync + Debug + 'static {
    fn lanes() -> usize {
        Self::zero().count_zeros() as usize
    }

    fn ones() -> Self {
        !Self::zero()
    }

    /// All lanes set to `bit`.
    fn splat(bit: bool) -> Self {
        if bit {
            Self::ones()
        } else {
            Self::zero()
        }
    }

    fn lane(self, i: usize) -> bool {
        (self >> i) & Self::one() == Self::one()
    }

    fn lane_mask(i: usize) -> Self {
        Self::one() << i
    }

    /// Mask with the lowest `n` lanes set.
    fn low_lanes(n: usize) -> Self {
        if n >= Self::lanes() {
            Self::ones()
        } else {
            (Self::one() << n) - Self::one()
        }
    }
}

impl<T: PrimInt + Send + Sync + Debug + 'static> Word for T {}

/// Lane-parallel gate semantics. Unused operands are ignored.
#[inline]
pub fn eval_gate<W: Word>(kind: GateKind, a: W, b: W, c: W) -> W {
    match kind {
        GateKind::Not => !a,
        GateKind::Buf => a,
        GateKind::And => a & b,
        GateKind::Or => a | b,
        GateKind::Nand => !(a & b),
        GateKind::Nor => !(a | b),
        GateKind::Xor => a ^ b,
        GateKind::Xnor => !(a ^ b),
        GateKind::Mux2 => (!a & b) | (a & c),
        GateKind::Const0 => W::zero(),
        GateKind::Const1 => W::ones(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("netlist is not valid: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("expected {expected} primary input values, got {got}")]
    InputCount { expected: usize, got: usize },
    #[error("expected {expected} register values, got {got}")]
    RegisterCount { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Op {
    pub kind: GateKind,
    pub ins: [u32; 3],
    pub out: u32,
}

/// Gates of a valid netlist flattened into evaluation order.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub(crate) ops: Vec<Op>,
    net_count: usize,
}

impl Schedule {
    pub fn new(netlist: &Netlist) -> Result<Self, EvalError> {
        netlist.validate().map_err(EvalError::Invalid)?;
        let order = netlist.topo_order().expect("validated netlists are acyclic");
        let ops = order
            .into_iter()
            .map(|gi| {
                let g = &netlist.gates()[gi];
                let mut ins = [0u32; 3];
                for (slot, net) in ins.iter_mut().zip(&g.inputs) {
                    *slot = net.0;
                }
                Op {
                    kind: g.kind,
                    ins,
                    out: g.output.0,
                }
            })
            .collect();
        Ok(Schedule {
            ops,
            net_count: netlist.net_count(),
        })
    }

    pub fn net_count(&self) -> usize {
        self.net_count
    }

    pub fn gate_count(&self) -> usize {
        self.ops.len()
    }

    /// Evaluates every gate; sources (inputs, register outputs) must already
    /// be present in `values`.
    pub fn run<W: Word>(&self, values: &mut [W]) {
        for op in &self.ops {
            let v = eval_gate(
                op.kind,
                values[op.ins[0] as usize],
                values[op.ins[1] as usize],
                values[op.ins[2] as usize],
            );
            values[op.out as usize] = v;
        }
    }
}

/// Values of every net for one input vector and register state.
pub fn eval_combinational(
    netlist: &Netlist,
    inputs: &[bool],
    register_state: &[bool],
) -> Result<Vec<bool>, EvalError> {
    let schedule = Schedule::new(netlist)?;
    eval_with_schedule(netlist, &schedule, inputs, register_state)
}

pub(crate) fn eval_with_schedule(
    netlist: &Netlist,
    schedule: &Schedule,
    inputs: &[bool],
    register_state: &[bool],
) -> Result<Vec<bool>, EvalError> {
    if inputs.len() != netlist.inputs().len() {
        return Err(EvalError::InputCount {
            expected: netlist.inputs().len(),
            got: inputs.len(),
        });
    }
    if register_state.len() != netlist.registers().len() {
        return Err(EvalError::RegisterCount {
            expected: netlist.registers().len(),
            got: register_state.len(),
        });
    }
    let mut values = vec![0u8; schedule.net_count()];
    for (&net, &bit) in netlist.inputs().iter().zip(inputs) {
        values[net.index()] = u8::splat(bit);
    }
    for (reg, &bit) in netlist.registers().iter().zip(register_state) {
        values[reg.output.index()] = u8::splat(bit);
    }
    schedule.run(&mut values);
    Ok(values.into_iter().map(|v| v.lane(0)).collect())
}

/// Primary-output values of a combinational netlist, one `u64` lane per pattern.
pub fn eval_outputs_parallel(netlist: &Netlist, schedule: &Schedule, inputs: &[u64]) -> Vec<u64> {
    let mut values = vec![0u64; schedule.net_count()];
    for (&net, &v) in netlist.inputs().iter().zip(inputs) {
        values[net.index()] = v;
    }
    for reg in netlist.registers() {
        values[reg.output.index()] = u64::splat(reg.init);
    }
    schedule.run(&mut values);
    netlist.outputs().iter().map(|o| values[o.index()]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::ModuleTag;

    #[test]
    fn word_lane_helpers() {
        assert_eq!(u8::lanes(), 8);
        assert_eq!(u64::lanes(), 64);
        assert_eq!(u16::low_lanes(3), 0b111);
        assert_eq!(u8::low_lanes(8), 0xff);
        assert!(0b100u32.lane(2));
        assert!(!0b100u32.lane(1));
        assert_eq!(u8::splat(true), 0xff);
    }

    #[test]
    fn word_semantics_match_boolean_semantics() {
        for kind in GateKind::ALL {
            for pattern in 0..8u8 {
                let bits = [pattern & 1 != 0, pattern & 2 != 0, pattern & 4 != 0];
                let expect = kind.eval(&bits[..kind.arity()]);
                let got = eval_gate(kind, u8::splat(bits[0]), u8::splat(bits[1]), u8::splat(bits[2]));
                assert_eq!(got, u8::splat(expect), "{kind} {bits:?}");
            }
        }
    }

    fn single(kind: GateKind) -> Netlist {
        let mut n = Netlist::new("g");
        let ins: Vec<_> = (0..kind.arity()).map(|i| n.add_input(format!("i{i}")).unwrap()).collect();
        let y = n.add_net("y").unwrap();
        n.add_gate(kind, ins, y, ModuleTag::Original);
        n.add_output(y);
        n
    }

    #[test]
    fn not_and_xor() {
        let not = single(GateKind::Not);
        let v = eval_combinational(&not, &[true], &[]).unwrap();
        assert!(!v[not.outputs()[0].index()]);

        let xor = single(GateKind::Xor);
        let v = eval_combinational(&xor, &[true, true], &[]).unwrap();
        assert!(!v[xor.outputs()[0].index()]);
    }

    #[test]
    fn missing_inputs_are_errors() {
        let xor = single(GateKind::Xor);
        assert_eq!(
            eval_combinational(&xor, &[true], &[]),
            Err(EvalError::InputCount { expected: 2, got: 1 })
        );
        assert_eq!(
            eval_combinational(&xor, &[true, false], &[false]),
            Err(EvalError::RegisterCount { expected: 0, got: 1 })
        );
    }

    #[test]
    fn evaluation_is_pure() {
        let xor = single(GateKind::Mux2);
        let a = eval_combinational(&xor, &[true, false, true], &[]).unwrap();
        let b = eval_combinational(&xor, &[true, false, true], &[]).unwrap();
        assert_eq!(a, b);
    }
}
