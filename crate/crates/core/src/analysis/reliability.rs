// SPDX-License-Identifier: Apache-2.0

//! Module-fault enumeration under the equal-probability model: each of the
//! `2^k` patterns of faulty modules is equally likely, and the probability
//! of faithful functioning is the faithful fraction.
//!
//! The model ignores module area, so a triplicated design is not charged for
//! its larger cross-section.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::netlist::HardeningMethod;

pub type Probability = Ratio<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Faithful,
    NotFaithful,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Faithful => "Faithful",
            Verdict::NotFaithful => "Not faithful",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReliabilityRow {
    /// `true` at position `i` means module `M_{i+1}` is faulty.
    pub pattern: Vec<bool>,
    pub verdict: Verdict,
}

impl ReliabilityRow {
    /// The pattern as digits, `M_1` first: `"011"`.
    pub fn pattern_string(&self) -> String {
        self.pattern.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reliability {
    pub method: HardeningMethod,
    pub rows: Vec<ReliabilityRow>,
    pub probability: Probability,
}

impl Reliability {
    pub fn faithful_count(&self) -> usize {
        self.rows.iter().filter(|r| r.verdict == Verdict::Faithful).count()
    }

    pub fn render(&self) -> String {
        let k = self.rows.first().map_or(0, |r| r.pattern.len());
        let mut s: String = (1..=k).map(|i| format!("M{i} ")).collect();
        s.push_str("| Verdict\n");
        for row in &self.rows {
            for &b in &row.pattern {
                s.push_str(if b { " 1 " } else { " 0 " });
            }
            s.push_str(&format!("| {}\n", row.verdict));
        }
        s.push_str(&format!("probability = {}\n", self.probability));
        s
    }
}

/// Modules the scheme instantiates: three replicas for TMR, the two
/// duplicates for DWC-CED and the single module for IOLB.
pub fn module_count(method: HardeningMethod) -> usize {
    match method {
        HardeningMethod::Tmr => 3,
        HardeningMethod::DwcCed => 2,
        HardeningMethod::Iolb => 1,
    }
}

fn verdict(method: HardeningMethod, faulty: usize) -> Verdict {
    let ok = match method {
        HardeningMethod::Tmr => faulty <= 1,
        HardeningMethod::DwcCed => faulty < 2,
        HardeningMethod::Iolb => true,
    };
    if ok {
        Verdict::Faithful
    } else {
        Verdict::NotFaithful
    }
}

pub fn reliability_enumeration(method: HardeningMethod) -> Reliability {
    let k = module_count(method);
    let rows: Vec<ReliabilityRow> = (0..1u32 << k)
        .map(|index| {
            let pattern: Vec<bool> = (0..k).map(|i| index >> (k - 1 - i) & 1 == 1).collect();
            let faulty = pattern.iter().filter(|&&b| b).count();
            ReliabilityRow {
                pattern,
                verdict: verdict(method, faulty),
            }
        })
        .collect();
    let faithful = rows.iter().filter(|r| r.verdict == Verdict::Faithful).count() as u32;
    let probability = Ratio::new(faithful, rows.len() as u32);
    Reliability {
        method,
        rows,
        probability,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn listing(r: &Reliability) -> Vec<(String, Verdict)> {
        r.rows.iter().map(|row| (row.pattern_string(), row.verdict)).collect()
    }

    #[test]
    fn tmr() {
        use Verdict::*;
        let r = reliability_enumeration(HardeningMethod::Tmr);
        let expected = [
            ("000", Faithful),
            ("001", Faithful),
            ("010", Faithful),
            ("011", NotFaithful),
            ("100", Faithful),
            ("101", NotFaithful),
            ("110", NotFaithful),
            ("111", NotFaithful),
        ];
        let expected: Vec<(String, Verdict)> = expected.iter().map(|(p, v)| (p.to_string(), *v)).collect();
        assert_eq!(listing(&r), expected);
        assert_eq!(r.probability, Ratio::new(1, 2));
    }

    #[test]
    fn dwc_and_iolb() {
        let d = reliability_enumeration(HardeningMethod::DwcCed);
        assert_eq!(d.faithful_count(), 3);
        assert_eq!(d.rows[3].verdict, Verdict::NotFaithful);
        assert_eq!(d.probability, Ratio::new(3, 4));
        let i = reliability_enumeration(HardeningMethod::Iolb);
        assert_eq!(i.rows.len(), 2);
        assert_eq!(i.probability, Ratio::from_integer(1));
    }

    #[test]
    fn render_lists_every_row() {
        let text = reliability_enumeration(HardeningMethod::DwcCed).render();
        assert_eq!(text, "M1 M2 | Verdict\n 0  0 | Faithful\n 0  1 | Faithful\n 1  0 | Faithful\n 1  1 | Not faithful\nprobability = 3/4\n");
    }
}
