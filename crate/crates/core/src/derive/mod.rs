// SPDX-License-Identifier: Apache-2.0

//! Error-signal derivation for single-output gates.
//!
//! A gate `g` with inputs `X1..Xn` and output `Y` is observed through change
//! signals: `Xic = Xi xor prev(Xi)` and `Yc = Y xor prev(Y)`. The error bit
//! `E` is 1 when the observed output change disagrees with the change the
//! input transition implies:
//!
//! ```text
//! E = g(X) xor g(X xor Xc) xor Yc
//! ```
//!
//! [`derive_error_table`] enumerates all `2^(2n+2)` cases and [`simplify`]
//! reduces the table to a minimal expression: an XOR of the variables the
//! function is linear in, combined with an exact minimum sum of products of
//! the rest.

pub mod qm;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::netlist::{GateKind, ModuleTag, NetId, Netlist};
use qm::Cube;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("gate kind `{0}` has no inputs, so it has no transitions to check")]
    ConstantKind(GateKind),
}

/// One error input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Var {
    /// Current value of input `i`.
    X(usize),
    /// Change of input `i`.
    Xc(usize),
    /// Current output value.
    Y,
    /// Change of the output.
    Yc,
}

impl Var {
    pub fn is_change(self) -> bool {
        matches!(self, Var::Xc(_) | Var::Yc)
    }

    /// Position in the table's variable order `X1..Xn, X1c..Xnc, Y, Yc`.
    pub fn index(self, arity: usize) -> usize {
        match self {
            Var::X(i) => i,
            Var::Xc(i) => arity + i,
            Var::Y => 2 * arity,
            Var::Yc => 2 * arity + 1,
        }
    }

    pub fn from_index(arity: usize, index: usize) -> Var {
        match index {
            i if i < arity => Var::X(i),
            i if i < 2 * arity => Var::Xc(i - arity),
            i if i == 2 * arity => Var::Y,
            _ => Var::Yc,
        }
    }

    /// Short name: inputs `A`, `B`, `C`; the output is `B` for one-input
    /// gates, `S` for two and `Y` for three. Changes get a `c` suffix.
    pub fn display_name(self, arity: usize) -> String {
        const INPUTS: [&str; 3] = ["A", "B", "C"];
        let input = |i: usize| INPUTS.get(i).map_or_else(|| format!("X{}", i + 1), |s| s.to_string());
        let output = match arity {
            1 => "B",
            2 => "S",
            _ => "Y",
        };
        match self {
            Var::X(i) => input(i),
            Var::Xc(i) => format!("{}c", input(i)),
            Var::Y => output.to_string(),
            Var::Yc => format!("{output}c"),
        }
    }
}

/// Total truth table of the error bit over `X, Xc, Y, Yc`.
///
/// Row `r` assigns variable `v` (in [`Var::index`] order) the bit
/// `(r >> (2n + 1 - v)) & 1`, so the first variable is the most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorTable {
    kind: GateKind,
    arity: usize,
    e: Vec<bool>,
}

/// Decoded view of one table row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorRow {
    pub x: Vec<bool>,
    pub xc: Vec<bool>,
    pub y: bool,
    pub yc: bool,
    pub e: bool,
}

impl ErrorTable {
    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn var_count(&self) -> usize {
        2 * self.arity + 2
    }

    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    pub fn var_bit(&self, row: usize, var: Var) -> bool {
        (row >> (self.var_count() - 1 - var.index(self.arity))) & 1 == 1
    }

    pub fn row_index(&self, x: &[bool], xc: &[bool], y: bool, yc: bool) -> usize {
        assert_eq!(x.len(), self.arity);
        assert_eq!(xc.len(), self.arity);
        x.iter()
            .chain(xc)
            .chain([&y, &yc])
            .fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn e_at(&self, row: usize) -> bool {
        self.e[row]
    }

    pub fn get(&self, x: &[bool], xc: &[bool], y: bool, yc: bool) -> bool {
        self.e[self.row_index(x, xc, y, yc)]
    }

    pub fn row(&self, row: usize) -> ErrorRow {
        let n = self.arity;
        ErrorRow {
            x: (0..n).map(|i| self.var_bit(row, Var::X(i))).collect(),
            xc: (0..n).map(|i| self.var_bit(row, Var::Xc(i))).collect(),
            y: self.var_bit(row, Var::Y),
            yc: self.var_bit(row, Var::Yc),
            e: self.e[row],
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = ErrorRow> + '_ {
        (0..self.len()).map(|r| self.row(r))
    }

    /// Variables the table actually depends on, in variable order.
    pub fn support(&self) -> Vec<Var> {
        (0..self.var_count())
            .map(|v| Var::from_index(self.arity, v))
            .filter(|&v| self.depends_on(v))
            .collect()
    }

    pub fn depends_on(&self, var: Var) -> bool {
        let bit = 1 << (self.var_count() - 1 - var.index(self.arity));
        (0..self.len()).any(|r| self.e[r] != self.e[r ^ bit])
    }

    /// Fixed-width text rendering restricted to `columns`.
    ///
    /// # Panics
    /// If E depends on a variable outside `columns`.
    pub fn render(&self, columns: &[Var]) -> String {
        for v in self.support() {
            assert!(columns.contains(&v), "column set must cover the support");
        }
        let names: Vec<String> = columns.iter().map(|v| v.display_name(self.arity)).collect();
        let widths: Vec<usize> = names.iter().map(|s| s.len().max(1)).collect();
        let mut out = String::new();
        for (name, w) in names.iter().zip(&widths) {
            out.push_str(&format!("{name:>w$} "));
        }
        out.push_str("| E\n");
        for combo in 0..1usize << columns.len() {
            let mut row = 0;
            for (j, v) in columns.iter().enumerate() {
                if (combo >> (columns.len() - 1 - j)) & 1 == 1 {
                    row |= 1 << (self.var_count() - 1 - v.index(self.arity));
                }
            }
            for (j, w) in widths.iter().enumerate() {
                let bit = (combo >> (columns.len() - 1 - j)) & 1;
                out.push_str(&format!("{bit:>w$} "));
            }
            out.push_str(&format!("| {}\n", self.e[row] as u8));
        }
        out
    }
}

/// Builds the error table of `kind` by enumerating every transition case.
pub fn derive_error_table(kind: GateKind) -> Result<ErrorTable, DeriveError> {
    if kind.is_const() {
        return Err(DeriveError::ConstantKind(kind));
    }
    let n = kind.arity();
    let vars = 2 * n + 2;
    let mut e = Vec::with_capacity(1 << vars);
    for row in 0..1usize << vars {
        let bit = |v: usize| (row >> (vars - 1 - v)) & 1 == 1;
        let x: Vec<bool> = (0..n).map(bit).collect();
        let prev: Vec<bool> = (0..n).map(|i| bit(i) ^ bit(n + i)).collect();
        let yc = bit(2 * n + 1);
        let expected_change = kind.eval(&x) ^ kind.eval(&prev);
        e.push(expected_change ^ yc);
    }
    Ok(ErrorTable { kind, arity: n, e })
}

/// Minimized error expression:
/// `E = linear[0] xor linear[1] xor ... xor (cube | cube | ...)`.
///
/// The cubes range over `residual_vars`; an empty cover is constant 0 and a
/// single tautology cube is constant 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorFunction {
    kind: GateKind,
    arity: usize,
    support: Vec<Var>,
    linear: Vec<Var>,
    residual_vars: Vec<Var>,
    residual: Vec<Cube>,
}

/// Minimizes a table. Never fails; the result is equivalent to `table` on
/// every row and depends on exactly the table's support.
pub fn simplify(table: &ErrorTable) -> ErrorFunction {
    let n = table.arity;
    let support = table.support();
    let vars = table.var_count();
    let bit_of = |v: Var| 1usize << (vars - 1 - v.index(n));

    // Peel off variables f is linear in: f(r) != f(r ^ v) on every row.
    let mut values = table.e.clone();
    let mut linear = Vec::new();
    for &v in &support {
        let b = bit_of(v);
        if (0..values.len()).all(|r| values[r] != values[r ^ b]) {
            linear.push(v);
            for r in 0..values.len() {
                if r & b != 0 {
                    values[r] = values[r ^ b];
                }
            }
        }
    }

    let residual_vars: Vec<Var> = support
        .iter()
        .copied()
        .filter(|v| !linear.contains(v) && (0..values.len()).any(|r| values[r] != values[r ^ bit_of(*v)]))
        .collect();
    let k = residual_vars.len();
    let ones: Vec<u32> = (0..1u32 << k)
        .filter(|&m| {
            let row = residual_vars
                .iter()
                .enumerate()
                .filter(|(j, _)| (m >> (k - 1 - j)) & 1 == 1)
                .fold(0, |acc, (_, &v)| acc | bit_of(v));
            values[row]
        })
        .collect();
    let residual = qm::minimize(k, &ones);
    ErrorFunction {
        kind: table.kind,
        arity: n,
        support,
        linear,
        residual_vars,
        residual,
    }
}

impl ErrorFunction {
    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn support(&self) -> &[Var] {
        &self.support
    }

    pub fn linear(&self) -> &[Var] {
        &self.linear
    }

    pub fn residual_vars(&self) -> &[Var] {
        &self.residual_vars
    }

    pub fn residual(&self) -> &[Cube] {
        &self.residual
    }

    pub fn is_change_only(&self) -> bool {
        self.support.iter().all(|v| v.is_change())
    }

    fn residual_value(&self, value: &dyn Fn(Var) -> bool) -> bool {
        let k = self.residual_vars.len();
        self.residual.iter().any(|c| {
            self.residual_vars
                .iter()
                .enumerate()
                .all(|(j, &v)| c.literal(k, j).is_none_or(|pol| value(v) == pol))
        })
    }

    /// Evaluates E under an assignment of the error inputs.
    pub fn eval(&self, value: impl Fn(Var) -> bool) -> bool {
        self.linear.iter().fold(self.residual_value(&value), |acc, &v| acc ^ value(v))
    }

    /// Truth table over the support in [`ErrorTable::render`] format.
    pub fn render_table(&self) -> String {
        derive_error_table(self.kind)
            .expect("functions only exist for derivable kinds")
            .render(&self.support)
    }

    /// Gate count of [`error_function_as_gates`].
    pub fn gate_count(&self) -> usize {
        let mut net = Netlist::new("count");
        let inputs = ErrorInputs::fresh(&mut net, self.arity);
        let before = net.gates().len();
        error_function_as_gates(self, &mut net, &inputs, ModuleTag::Checker, "e");
        net.gates().len() - before
    }
}

impl fmt::Display for ErrorFunction {
    /// `E = Ac XOR Bc`, with products written `A & !Bc` and joined by `|`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.arity;
        let k = self.residual_vars.len();
        let mut terms: Vec<String> = self.linear.iter().map(|v| v.display_name(n)).collect();
        let sop = match self.residual.as_slice() {
            [] => None,
            [c] if c.care == 0 => Some("1".to_string()),
            cubes => {
                let products: Vec<String> = cubes
                    .iter()
                    .map(|c| {
                        self.residual_vars
                            .iter()
                            .enumerate()
                            .filter_map(|(j, v)| {
                                c.literal(k, j)
                                    .map(|pol| format!("{}{}", if pol { "" } else { "!" }, v.display_name(n)))
                            })
                            .collect::<Vec<_>>()
                            .join(" & ")
                    })
                    .collect();
                let joined = products.join(" | ");
                Some(if terms.is_empty() || products.len() == 1 && cubes[0].literals() == 1 {
                    joined
                } else {
                    format!("({joined})")
                })
            }
        };
        match (terms.is_empty(), sop) {
            (true, None) => write!(f, "E = 0"),
            (_, Some(s)) => {
                terms.push(s);
                write!(f, "E = {}", terms.join(" XOR "))
            }
            (false, None) => write!(f, "E = {}", terms.join(" XOR ")),
        }
    }
}

/// Nets carrying the error inputs of one gate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorInputs {
    pub x: Vec<NetId>,
    pub xc: Vec<NetId>,
    pub y: NetId,
    pub yc: NetId,
}

impl ErrorInputs {
    pub fn net(&self, var: Var) -> NetId {
        match var {
            Var::X(i) => self.x[i],
            Var::Xc(i) => self.xc[i],
            Var::Y => self.y,
            Var::Yc => self.yc,
        }
    }

    /// Adds primary inputs named after [`Var::display_name`].
    pub fn fresh(n: &mut Netlist, arity: usize) -> Self {
        let mut add = |v: Var| n.add_input(v.display_name(arity)).expect("display names are distinct");
        ErrorInputs {
            x: (0..arity).map(|i| add(Var::X(i))).collect(),
            xc: (0..arity).map(|i| add(Var::Xc(i))).collect(),
            y: add(Var::Y),
            yc: add(Var::Yc),
        }
    }
}

/// Adds gates computing E from `inputs` and returns the E net.
///
/// Linear variables form an XOR chain; the residual is an OR of AND chains
/// with one inverter per negated literal. A constant-0 function is a CONST0
/// gate and a lone variable is buffered, so the returned net is always driven
/// by a gate tagged `tag`.
pub fn error_function_as_gates(
    f: &ErrorFunction,
    n: &mut Netlist,
    inputs: &ErrorInputs,
    tag: ModuleTag,
    hint: &str,
) -> NetId {
    let k = f.residual_vars.len();
    let literal = |n: &mut Netlist, v: Var, pol: bool| {
        let net = inputs.net(v);
        if pol {
            net
        } else {
            n.gate(GateKind::Not, &[net], tag, hint)
        }
    };

    enum Residual {
        Zero,
        One,
        Net(NetId),
    }
    let residual = match f.residual.as_slice() {
        [] => Residual::Zero,
        [c] if c.care == 0 => Residual::One,
        cubes => {
            let mut sum: Option<NetId> = None;
            for c in cubes {
                let mut product: Option<NetId> = None;
                for (j, &v) in f.residual_vars.iter().enumerate() {
                    if let Some(pol) = c.literal(k, j) {
                        let lit = literal(n, v, pol);
                        product = Some(match product {
                            None => lit,
                            Some(p) => n.gate(GateKind::And, &[p, lit], tag, hint),
                        });
                    }
                }
                let product = product.expect("non-tautology cubes have literals");
                sum = Some(match sum {
                    None => product,
                    Some(s) => n.gate(GateKind::Or, &[s, product], tag, hint),
                });
            }
            Residual::Net(sum.expect("non-empty cover"))
        }
    };

    let mut chain: Option<NetId> = None;
    for &v in &f.linear {
        let net = inputs.net(v);
        chain = Some(match chain {
            None => net,
            Some(c) => n.gate(GateKind::Xor, &[c, net], tag, hint),
        });
    }
    let out = match (chain, residual) {
        (None, Residual::Zero) => n.gate(GateKind::Const0, &[], tag, hint),
        (None, Residual::One) => n.gate(GateKind::Const1, &[], tag, hint),
        (None, Residual::Net(r)) => r,
        (Some(c), Residual::Zero) => c,
        (Some(c), Residual::One) => n.gate(GateKind::Not, &[c], tag, hint),
        (Some(c), Residual::Net(r)) => n.gate(GateKind::Xor, &[c, r], tag, hint),
    };
    let driven_here = n.gates().last().is_some_and(|g| g.output == out);
    if driven_here {
        out
    } else {
        n.gate(GateKind::Buf, &[out], tag, hint)
    }
}

/// Standalone netlist computing E, with inputs named after the variables.
pub fn error_function_netlist(f: &ErrorFunction) -> Netlist {
    let mut n = Netlist::new(format!("{}_error", f.kind.name()));
    let inputs = ErrorInputs::fresh(&mut n, f.arity);
    let e = error_function_as_gates(f, &mut n, &inputs, ModuleTag::Checker, "e");
    n.rename_net(e, "E").expect("E is free");
    n.add_output(e);
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_combinational;

    fn derivable() -> impl Iterator<Item = GateKind> {
        GateKind::ALL.into_iter().filter(|k| !k.is_const())
    }

    #[test]
    fn not_matches_table_1() {
        let t = derive_error_table(GateKind::Not).unwrap();
        assert_eq!(t.len(), 16);
        // (Ac, Bc) -> E for every A and B.
        for (ac, bc, e) in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)] {
            for a in [false, true] {
                for b in [false, true] {
                    assert_eq!(t.get(&[a], &[ac == 1], b, bc == 1), e == 1);
                }
            }
        }
        let f = simplify(&t);
        assert_eq!(f.support(), &[Var::Xc(0), Var::Yc]);
        assert_eq!(f.to_string(), "E = Ac XOR Bc");
        assert_eq!(f.render_table(), "Ac Bc | E\n 0  0 | 0\n 0  1 | 1\n 1  0 | 1\n 1  1 | 0\n");
    }

    #[test]
    fn xor_matches_table_2() {
        let t = derive_error_table(GateKind::Xor).unwrap();
        assert_eq!(t.len(), 64);
        for row in t.rows() {
            assert_eq!(row.e, row.xc[0] ^ row.xc[1] ^ row.yc);
        }
        assert!(t.get(&[false, false], &[false, true], false, false));
        assert!(t.get(&[true, true], &[true, true], true, true));
        let f = simplify(&t);
        assert_eq!(f.support(), &[Var::Xc(0), Var::Xc(1), Var::Yc]);
        assert_eq!(f.to_string(), "E = Ac XOR Bc XOR Sc");
    }

    #[test]
    fn and_depends_on_values() {
        let t = derive_error_table(GateKind::And).unwrap();
        assert_eq!(t.len(), 64);
        assert!(t.get(&[true, true], &[false, true], false, false));
        assert!(!t.get(&[false, true], &[false, true], false, false));
        let f = simplify(&t);
        assert!(f.support().contains(&Var::X(0)));
        assert!(f.support().contains(&Var::X(1)));
        assert!(!f.is_change_only());
        // No function of the change bits alone reproduces the table.
        let changes = [Var::Xc(0), Var::Xc(1), Var::Yc];
        let collides = (0..t.len()).any(|r| {
            (0..t.len()).any(|s| {
                changes.iter().all(|&v| t.var_bit(r, v) == t.var_bit(s, v)) && t.e_at(r) != t.e_at(s)
            })
        });
        assert!(collides);
    }

    #[test]
    fn derivation_identity_for_every_kind() {
        for kind in derivable() {
            let t = derive_error_table(kind).unwrap();
            assert_eq!(t.len(), 1 << (2 * kind.arity() + 2));
            for row in t.rows() {
                let prev: Vec<bool> = row.x.iter().zip(&row.xc).map(|(a, b)| a ^ b).collect();
                assert_eq!(row.e, kind.eval(&row.x) ^ kind.eval(&prev) ^ row.yc, "{kind}");
            }
            assert!(!t.support().contains(&Var::Y), "{kind}");
        }
    }

    #[test]
    fn corollary_error_equals_recomputation_mismatch() {
        // With Yc measured against a correct previous output, E = g(X) xor Y.
        for kind in derivable() {
            let t = derive_error_table(kind).unwrap();
            for row in t.rows() {
                let prev: Vec<bool> = row.x.iter().zip(&row.xc).map(|(a, b)| a ^ b).collect();
                if row.yc == row.y ^ kind.eval(&prev) {
                    assert_eq!(row.e, kind.eval(&row.x) ^ row.y);
                }
            }
        }
    }

    #[test]
    fn simplify_preserves_semantics_and_support_is_minimal() {
        for kind in derivable() {
            let t = derive_error_table(kind).unwrap();
            let f = simplify(&t);
            for r in 0..t.len() {
                assert_eq!(f.eval(|v| t.var_bit(r, v)), t.e_at(r), "{kind} row {r}");
            }
            for &v in f.support() {
                assert!(t.depends_on(v), "{kind} {v:?}");
            }
        }
    }

    #[test]
    fn constants_are_rejected() {
        assert_eq!(
            derive_error_table(GateKind::Const0).unwrap_err(),
            DeriveError::ConstantKind(GateKind::Const0)
        );
        assert!(derive_error_table(GateKind::Const1).is_err());
    }

    #[test]
    fn gate_networks() {
        let not = simplify(&derive_error_table(GateKind::Not).unwrap());
        let net = error_function_netlist(&not);
        assert_eq!(net.gates().len(), 1);
        assert_eq!(net.gates()[0].kind, GateKind::Xor);
        assert!(net.gates().iter().all(|g| g.tag == ModuleTag::Checker));

        let xor = simplify(&derive_error_table(GateKind::Xor).unwrap());
        let net = error_function_netlist(&xor);
        assert_eq!(net.gates().iter().map(|g| g.kind).collect::<Vec<_>>(), vec![GateKind::Xor; 2]);

        let zero = ErrorFunction {
            kind: GateKind::Not,
            arity: 1,
            support: vec![],
            linear: vec![],
            residual_vars: vec![],
            residual: vec![],
        };
        let net = error_function_netlist(&zero);
        assert_eq!(net.gates().len(), 1);
        assert_eq!(net.gates()[0].kind, GateKind::Const0);
    }

    #[test]
    fn gate_networks_match_tables() {
        for kind in derivable() {
            let t = derive_error_table(kind).unwrap();
            let f = simplify(&t);
            let net = error_function_netlist(&f);
            assert_eq!(f.gate_count(), net.gates().len());
            let e = net.outputs()[0];
            for r in 0..t.len() {
                let bits: Vec<bool> = (0..t.var_count())
                    .map(|v| t.var_bit(r, Var::from_index(t.arity(), v)))
                    .collect();
                let values = eval_combinational(&net, &bits, &[]).unwrap();
                assert_eq!(values[e.index()], t.e_at(r), "{kind} row {r}");
            }
        }
    }
}
