// SPDX-License-Identifier: Apache-2.0

//! Gate-level netlists, soft-error hardening passes (IOLB, TMR, DWC-CED),
//! a bit-parallel fault simulator and cost/reliability analysis.

pub mod analysis;
pub mod derive;
pub mod eval;
pub mod generate;
pub mod harden;
pub mod netlist;
pub mod sim;
pub mod text;

pub use analysis::{compare_report, cost_report, reliability_enumeration, CostReport, Reliability};
pub use derive::{derive_error_table, simplify, ErrorFunction, ErrorTable};
pub use eval::Word;
pub use generate::{build_gate_demo, build_multiplier};
pub use harden::{harden, HardenError};
pub use netlist::{GateKind, HardeningMethod, ModuleTag, NetId, Netlist};
pub use sim::{run_campaign, simulate, CampaignConfig, CampaignSummary, FaultKind, FaultSpec, Simulator, Stimulus};

/// Simulator with 64 fault lanes per pass, as used by campaigns.
pub type Simulator64<'a> = Simulator<'a, u64>;
/// Single-lane simulator for traces.
pub type Simulator8<'a> = Simulator<'a, u8>;
/// Exact probability of faithful functioning.
pub type Probability = analysis::Probability;
