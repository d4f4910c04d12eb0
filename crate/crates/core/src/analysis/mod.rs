// SPDX-License-Identifier: Apache-2.0

//! Cost model, reliability enumeration and comparison reports.

mod cost;
mod reliability;
mod report;

pub use cost::{cost_report, pack_luts, Cone, CostReport, TagCost, LUT_INPUTS};
pub use reliability::{module_count, reliability_enumeration, Probability, Reliability, ReliabilityRow, Verdict};
pub use report::{compare_report, CompareEntry, CompareError, Comparison, ComparisonRow, REPORT_VERSION};
