// SPDX-License-Identifier: Apache-2.0

//! Netlist-to-netlist hardening passes.

mod dwc;
mod iolb;
mod tmr;

pub use dwc::harden_dwc_ced;
pub use iolb::harden_iolb;
pub use tmr::harden_tmr;

use thiserror::Error;

use crate::netlist::{Diagnostic, HardeningMethod, NetId, Netlist, Operands};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardenError {
    #[error("input netlist is not valid: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("input netlist contains registers; only combinational logic can be hardened")]
    Sequential,
    #[error("input netlist has no multiplier operand metadata")]
    MissingOperands,
    #[error("operand metadata does not match the netlist's primary outputs")]
    OperandMismatch,
}

/// Applies `method` to `netlist`.
pub fn harden(netlist: &Netlist, method: HardeningMethod) -> Result<Netlist, HardenError> {
    match method {
        HardeningMethod::Iolb => harden_iolb(netlist),
        HardeningMethod::Tmr => harden_tmr(netlist),
        HardeningMethod::DwcCed => harden_dwc_ced(netlist),
    }
}

fn check(netlist: &Netlist, combinational: bool) -> Result<(), HardenError> {
    netlist.validate().map_err(HardenError::Invalid)?;
    if combinational && !netlist.is_combinational() {
        return Err(HardenError::Sequential);
    }
    Ok(())
}

/// Adds a net named `name`, or a generated one if the name is taken.
fn named_or_fresh(n: &mut Netlist, name: String, hint: &str) -> NetId {
    n.add_net(name).unwrap_or_else(|_| n.fresh_net(hint))
}

/// Copies operand metadata from `src` to `dst`, matching nets by name.
fn copy_operands(src: &Netlist, dst: &mut Netlist) {
    let Some(ops) = src.operands() else { return };
    let remap = |ids: &[NetId]| -> Option<Vec<NetId>> {
        ids.iter().map(|&id| dst.find_net(src.net_name(id))).collect()
    };
    if let (Some(a), Some(b), Some(result)) = (remap(&ops.a), remap(&ops.b), remap(&ops.result)) {
        dst.set_operands(Some(Operands {
            operation: ops.operation,
            a,
            b,
            result,
        }));
    }
}
