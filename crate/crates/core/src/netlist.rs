// SPDX-License-Identifier: Apache-2.0

//! Netlist IR: single-bit nets, gates, delay registers, and the metadata that
//! hardening passes attach (module tags, probes, operand groups, fault-site
//! aliases).

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense index of a net inside one [`Netlist`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NetId(pub u32);

impl NetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    Not,
    Buf,
    And,
    Or,
    Nand,
    Nor,
    Xor,
    Xnor,
    /// `mux2(sel, a, b)` is `a` when `sel` is 0 and `b` when `sel` is 1.
    Mux2,
    Const0,
    Const1,
}

impl GateKind {
    pub const ALL: [GateKind; 11] = [
        GateKind::Not,
        GateKind::Buf,
        GateKind::And,
        GateKind::Or,
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Mux2,
        GateKind::Const0,
        GateKind::Const1,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Const0 | GateKind::Const1 => 0,
            GateKind::Not | GateKind::Buf => 1,
            GateKind::Mux2 => 3,
            _ => 2,
        }
    }

    pub fn is_const(self) -> bool {
        matches!(self, GateKind::Const0 | GateKind::Const1)
    }

    /// Lowercase keyword used by the text format.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Not => "not",
            GateKind::Buf => "buf",
            GateKind::And => "and",
            GateKind::Or => "or",
            GateKind::Nand => "nand",
            GateKind::Nor => "nor",
            GateKind::Xor => "xor",
            GateKind::Xnor => "xnor",
            GateKind::Mux2 => "mux2",
            GateKind::Const0 => "const0",
            GateKind::Const1 => "const1",
        }
    }

    /// Boolean semantics. `inputs.len()` must equal the arity.
    pub fn eval(self, inputs: &[bool]) -> bool {
        debug_assert_eq!(inputs.len(), self.arity());
        match self {
            GateKind::Not => !inputs[0],
            GateKind::Buf => inputs[0],
            GateKind::And => inputs[0] & inputs[1],
            GateKind::Or => inputs[0] | inputs[1],
            GateKind::Nand => !(inputs[0] & inputs[1]),
            GateKind::Nor => !(inputs[0] | inputs[1]),
            GateKind::Xor => inputs[0] ^ inputs[1],
            GateKind::Xnor => !(inputs[0] ^ inputs[1]),
            GateKind::Mux2 => {
                if inputs[0] {
                    inputs[2]
                } else {
                    inputs[1]
                }
            }
            GateKind::Const0 => false,
            GateKind::Const1 => true,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown name `{0}`")]
pub struct UnknownName(pub String);

/// Which part of a (possibly hardened) design a gate belongs to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModuleTag {
    /// Logic of the unhardened module.
    #[default]
    Original,
    /// Detection and correction logic added by a pass.
    Checker,
    /// Voting logic and voter state.
    Voter,
    /// One copy of the module in a redundant scheme.
    Replica(u8),
}

impl ModuleTag {
    /// Tags whose nets count as "the module" for fault campaigns.
    pub fn is_module(self) -> bool {
        matches!(self, ModuleTag::Original | ModuleTag::Replica(_))
    }
}

impl fmt::Display for ModuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleTag::Original => f.write_str("original"),
            ModuleTag::Checker => f.write_str("checker"),
            ModuleTag::Voter => f.write_str("voter"),
            ModuleTag::Replica(k) => write!(f, "replica({k})"),
        }
    }
}

impl FromStr for ModuleTag {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "original" => return Ok(ModuleTag::Original),
            "checker" => return Ok(ModuleTag::Checker),
            "voter" => return Ok(ModuleTag::Voter),
            _ => {}
        }
        lower
            .strip_prefix("replica(")
            .and_then(|rest| rest.strip_suffix(')'))
            .and_then(|k| k.parse::<u8>().ok())
            .map(ModuleTag::Replica)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HardeningMethod {
    #[serde(rename = "iolb")]
    Iolb,
    #[serde(rename = "tmr")]
    Tmr,
    #[serde(rename = "dwc-ced")]
    DwcCed,
}

impl HardeningMethod {
    pub const ALL: [HardeningMethod; 3] =
        [HardeningMethod::Tmr, HardeningMethod::DwcCed, HardeningMethod::Iolb];

    pub fn name(self) -> &'static str {
        match self {
            HardeningMethod::Iolb => "iolb",
            HardeningMethod::Tmr => "tmr",
            HardeningMethod::DwcCed => "dwc-ced",
        }
    }

    /// Display label used in comparison tables.
    pub fn label(self) -> &'static str {
        match self {
            HardeningMethod::Iolb => "IOLB",
            HardeningMethod::Tmr => "TMR",
            HardeningMethod::DwcCed => "DWC-CED",
        }
    }
}

impl fmt::Display for HardeningMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HardeningMethod {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "iolb" => Ok(HardeningMethod::Iolb),
            "tmr" => Ok(HardeningMethod::Tmr),
            "dwc-ced" | "dwc_ced" | "dwcced" => Ok(HardeningMethod::DwcCed),
            _ => Err(UnknownName(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
    pub tag: ModuleTag,
}

/// One-cycle delay element. Its output is a sequential cut point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub input: NetId,
    pub output: NetId,
    pub init: bool,
    pub tag: ModuleTag,
}

/// Named role of a net that simulators and campaigns observe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProbeRole {
    /// Raw error signal E of one IOLB cell.
    Error,
    /// Replica 0 normal result differs from its decoded recomputation.
    Tc0,
    /// Replica 1 normal result differs from its decoded recomputation.
    Tc1,
    /// Normal results of the two replicas differ.
    Hc,
    /// Decoded recomputed results of the two replicas differ.
    Hcd,
    VoterUpset,
    VoterModule0Faulty,
    VoterModule1Faulty,
    /// Output `output` of TMR replica `replica`, before voting.
    ReplicaOut { replica: u8, output: u32 },
}

impl fmt::Display for ProbeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbeRole::Error => f.write_str("error"),
            ProbeRole::Tc0 => f.write_str("tc0"),
            ProbeRole::Tc1 => f.write_str("tc1"),
            ProbeRole::Hc => f.write_str("hc"),
            ProbeRole::Hcd => f.write_str("hcd"),
            ProbeRole::VoterUpset => f.write_str("state.upset"),
            ProbeRole::VoterModule0Faulty => f.write_str("state.m0"),
            ProbeRole::VoterModule1Faulty => f.write_str("state.m1"),
            ProbeRole::ReplicaOut { replica, output } => write!(f, "replica({replica}).out({output})"),
        }
    }
}

impl FromStr for ProbeRole {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let simple = match lower.as_str() {
            "error" => Some(ProbeRole::Error),
            "tc0" => Some(ProbeRole::Tc0),
            "tc1" => Some(ProbeRole::Tc1),
            "hc" => Some(ProbeRole::Hc),
            "hcd" => Some(ProbeRole::Hcd),
            "state.upset" => Some(ProbeRole::VoterUpset),
            "state.m0" => Some(ProbeRole::VoterModule0Faulty),
            "state.m1" => Some(ProbeRole::VoterModule1Faulty),
            _ => None,
        };
        if let Some(role) = simple {
            return Ok(role);
        }
        let parse = || -> Option<ProbeRole> {
            let rest = lower.strip_prefix("replica(")?;
            let (replica, rest) = rest.split_once(')')?;
            let output = rest.strip_prefix(".out(")?.strip_suffix(')')?;
            Some(ProbeRole::ReplicaOut {
                replica: replica.parse().ok()?,
                output: output.parse().ok()?,
            })
        };
        parse().ok_or_else(|| UnknownName(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Probe {
    pub role: ProbeRole,
    pub net: NetId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operation {
    Multiply,
}

impl Operation {
    pub fn name(self) -> &'static str {
        match self {
            Operation::Multiply => "mul",
        }
    }
}

/// Arithmetic structure of a module's I/O, LSB first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operands {
    pub operation: Operation,
    pub a: Vec<NetId>,
    pub b: Vec<NetId>,
    pub result: Vec<NetId>,
}

/// Storage and steering that a two-phase (time-redundant) design needs but
/// that the zero-delay netlist does not spell out as gates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseOverhead {
    /// Result bits latched between the normal and recompute half-cycles.
    pub hold_bits: usize,
    /// Operand multiplexers selecting plain or encoded operands per phase.
    pub operand_muxes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Driver {
    None,
    Input(usize),
    Gate(usize),
    Register(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("net name `{0}` already exists")]
    DuplicateName(String),
    #[error("invalid net name `{0}`")]
    InvalidName(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    MultipleDrivers,
    ArityMismatch,
    CombinationalCycle,
    Undriven,
    DanglingReference,
}

impl DiagnosticKind {
    pub fn label(self) -> &'static str {
        match self {
            DiagnosticKind::MultipleDrivers => "multiple drivers",
            DiagnosticKind::ArityMismatch => "arity mismatch",
            DiagnosticKind::CombinationalCycle => "combinational cycle",
            DiagnosticKind::Undriven => "undriven net",
            DiagnosticKind::DanglingReference => "dangling reference",
        }
    }
}

/// One structural problem found by [`Netlist::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
    pub gate: Option<usize>,
    pub net: Option<NetId>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.label(), self.message)
    }
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Gate-level netlist. Nets are single bits identified by dense [`NetId`]s
/// with unique names.
#[derive(Clone, Debug, Default)]
pub struct Netlist {
    name: String,
    net_names: Vec<String>,
    name_index: HashMap<String, NetId>,
    inputs: Vec<NetId>,
    outputs: Vec<NetId>,
    gates: Vec<Gate>,
    registers: Vec<Register>,
    method: Option<HardeningMethod>,
    operands: Option<Operands>,
    probes: Vec<Probe>,
    aliases: BTreeMap<NetId, NetId>,
    phase: Option<PhaseOverhead>,
    fresh: u32,
}

impl Netlist {
    pub fn new(name: impl Into<String>) -> Self {
        Netlist {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn net_count(&self) -> usize {
        self.net_names.len()
    }

    pub fn nets(&self) -> impl Iterator<Item = NetId> + '_ {
        (0..self.net_names.len() as u32).map(NetId)
    }

    pub fn net_name(&self, net: NetId) -> &str {
        &self.net_names[net.index()]
    }

    pub fn find_net(&self, name: &str) -> Option<NetId> {
        self.name_index.get(name).copied()
    }

    pub fn add_net(&mut self, name: impl Into<String>) -> Result<NetId, NetlistError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(NetlistError::InvalidName(name));
        }
        if self.name_index.contains_key(&name) {
            return Err(NetlistError::DuplicateName(name));
        }
        let id = NetId(self.net_names.len() as u32);
        self.name_index.insert(name.clone(), id);
        self.net_names.push(name);
        Ok(id)
    }

    /// Existing net by name, or a new one.
    pub fn ensure_net(&mut self, name: &str) -> Result<NetId, NetlistError> {
        match self.find_net(name) {
            Some(id) => Ok(id),
            None => self.add_net(name),
        }
    }

    /// New net with a generated name in the reserved `__` namespace.
    pub fn fresh_net(&mut self, hint: &str) -> NetId {
        loop {
            let name = format!("__{hint}{}", self.fresh);
            self.fresh += 1;
            if !self.name_index.contains_key(&name) {
                return self.add_net(name).expect("generated names are identifiers");
            }
        }
    }

    pub fn rename_net(&mut self, net: NetId, name: impl Into<String>) -> Result<(), NetlistError> {
        let name = name.into();
        if self.net_names[net.index()] == name {
            return Ok(());
        }
        if !is_identifier(&name) {
            return Err(NetlistError::InvalidName(name));
        }
        if self.name_index.contains_key(&name) {
            return Err(NetlistError::DuplicateName(name));
        }
        let old = std::mem::replace(&mut self.net_names[net.index()], name.clone());
        self.name_index.remove(&old);
        self.name_index.insert(name, net);
        Ok(())
    }

    pub fn add_input(&mut self, name: impl Into<String>) -> Result<NetId, NetlistError> {
        let id = self.add_net(name)?;
        self.inputs.push(id);
        Ok(id)
    }

    /// Marks an existing net as a primary input.
    pub fn push_input(&mut self, net: NetId) {
        self.inputs.push(net);
    }

    pub fn add_output(&mut self, net: NetId) {
        self.outputs.push(net);
    }

    /// Adds a gate driving `output`. No structural checks; see [`Netlist::validate`].
    pub fn add_gate(&mut self, kind: GateKind, inputs: Vec<NetId>, output: NetId, tag: ModuleTag) -> usize {
        self.gates.push(Gate {
            kind,
            inputs,
            output,
            tag,
        });
        self.gates.len() - 1
    }

    /// Adds a gate driving a freshly named net and returns that net.
    pub fn gate(&mut self, kind: GateKind, inputs: &[NetId], tag: ModuleTag, hint: &str) -> NetId {
        let out = self.fresh_net(hint);
        self.add_gate(kind, inputs.to_vec(), out, tag);
        out
    }

    pub fn add_register(&mut self, input: NetId, output: NetId, init: bool, tag: ModuleTag) -> usize {
        self.registers.push(Register {
            input,
            output,
            init,
            tag,
        });
        self.registers.len() - 1
    }

    pub fn inputs(&self) -> &[NetId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[NetId] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn is_combinational(&self) -> bool {
        self.registers.is_empty()
    }

    pub fn method(&self) -> Option<HardeningMethod> {
        self.method
    }

    pub fn set_method(&mut self, method: Option<HardeningMethod>) {
        self.method = method;
    }

    pub fn operands(&self) -> Option<&Operands> {
        self.operands.as_ref()
    }

    pub fn set_operands(&mut self, operands: Option<Operands>) {
        self.operands = operands;
    }

    pub fn probes(&self) -> &[Probe] {
        &self.probes
    }

    pub fn add_probe(&mut self, role: ProbeRole, net: NetId) {
        self.probes.push(Probe { role, net });
    }

    pub fn probe(&self, role: ProbeRole) -> Option<NetId> {
        self.probes.iter().find(|p| p.role == role).map(|p| p.net)
    }

    /// Declares `net` to be the same physical wire as `site`, evaluated in a
    /// different phase. Faults injected at `site` also hit `net`.
    pub fn add_alias(&mut self, net: NetId, site: NetId) {
        self.aliases.insert(net, site);
    }

    pub fn alias_of(&self, net: NetId) -> Option<NetId> {
        self.aliases.get(&net).copied()
    }

    pub fn aliases(&self) -> impl Iterator<Item = (NetId, NetId)> + '_ {
        self.aliases.iter().map(|(a, s)| (*a, *s))
    }

    pub fn phase_overhead(&self) -> Option<PhaseOverhead> {
        self.phase
    }

    pub fn set_phase_overhead(&mut self, phase: Option<PhaseOverhead>) {
        self.phase = phase;
    }

    /// Driver of every net. Nets with more than one driver report the first.
    pub fn drivers(&self) -> Vec<Driver> {
        let mut drivers = vec![Driver::None; self.net_count()];
        for (i, &net) in self.inputs.iter().enumerate() {
            if drivers[net.index()] == Driver::None {
                drivers[net.index()] = Driver::Input(i);
            }
        }
        for (i, g) in self.gates.iter().enumerate() {
            if drivers[g.output.index()] == Driver::None {
                drivers[g.output.index()] = Driver::Gate(i);
            }
        }
        for (i, r) in self.registers.iter().enumerate() {
            if drivers[r.output.index()] == Driver::None {
                drivers[r.output.index()] = Driver::Register(i);
            }
        }
        drivers
    }

    /// Structural fanout: gate inputs, register inputs and primary outputs.
    pub fn fanout_counts(&self) -> Vec<usize> {
        let mut fanout = vec![0usize; self.net_count()];
        for g in &self.gates {
            for &i in &g.inputs {
                fanout[i.index()] += 1;
            }
        }
        for r in &self.registers {
            fanout[r.input.index()] += 1;
        }
        for &o in &self.outputs {
            fanout[o.index()] += 1;
        }
        fanout
    }

    /// Topological order of the gates; register outputs and primary inputs
    /// are sources. Ties resolve to the lower gate index.
    pub fn topo_order(&self) -> Result<Vec<usize>, Vec<usize>> {
        self.topo_order_by_key(|g| g)
    }

    /// Topological order with ties broken by the smallest `key`. On a cycle,
    /// returns the gates that could not be ordered.
    pub fn topo_order_by_key<K, F>(&self, key: F) -> Result<Vec<usize>, Vec<usize>>
    where
        K: Ord,
        F: Fn(usize) -> K,
    {
        let drivers = self.drivers();
        let mut indegree = vec![0usize; self.gates.len()];
        let mut consumers: Vec<Vec<usize>> = vec![Vec::new(); self.gates.len()];
        for (gi, g) in self.gates.iter().enumerate() {
            for &i in &g.inputs {
                if let Some(Driver::Gate(src)) = drivers.get(i.index()) {
                    indegree[gi] += 1;
                    consumers[*src].push(gi);
                }
            }
        }
        let mut ready: BinaryHeap<Reverse<(K, usize)>> = (0..self.gates.len())
            .filter(|&g| indegree[g] == 0)
            .map(|g| Reverse((key(g), g)))
            .collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while let Some(Reverse((_, g))) = ready.pop() {
            order.push(g);
            for &c in &consumers[g] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.push(Reverse((key(c), c)));
                }
            }
        }
        if order.len() == self.gates.len() {
            Ok(order)
        } else {
            Err((0..self.gates.len()).filter(|&g| indegree[g] > 0).collect())
        }
    }

    /// Checks single-driver, arity, acyclicity and that every referenced net
    /// is driven. Never aborts; returns every problem found.
    pub fn validate(&self) -> Result<(), Vec<Diagnostic>> {
        let mut diags = Vec::new();
        let mut driver_count = vec![0usize; self.net_count()];
        for &i in &self.inputs {
            driver_count[i.index()] += 1;
        }
        for (gi, g) in self.gates.iter().enumerate() {
            driver_count[g.output.index()] += 1;
            if g.inputs.len() != g.kind.arity() {
                diags.push(Diagnostic {
                    kind: DiagnosticKind::ArityMismatch,
                    message: format!(
                        "gate {gi} `{}` of kind {} has {} inputs, expected {}",
                        self.net_name(g.output),
                        g.kind,
                        g.inputs.len(),
                        g.kind.arity()
                    ),
                    gate: Some(gi),
                    net: Some(g.output),
                });
            }
        }
        for r in &self.registers {
            driver_count[r.output.index()] += 1;
        }
        for (idx, &count) in driver_count.iter().enumerate() {
            let net = NetId(idx as u32);
            if count > 1 {
                diags.push(Diagnostic {
                    kind: DiagnosticKind::MultipleDrivers,
                    message: format!("net `{}` has {count} drivers", self.net_name(net)),
                    gate: None,
                    net: Some(net),
                });
            }
        }

        let mut referenced: Vec<(NetId, String)> = Vec::new();
        for (gi, g) in self.gates.iter().enumerate() {
            for &i in &g.inputs {
                referenced.push((i, format!("input of gate {gi} `{}`", self.net_name(g.output))));
            }
        }
        for r in &self.registers {
            referenced.push((r.input, format!("input of register `{}`", self.net_name(r.output))));
        }
        for &o in &self.outputs {
            referenced.push((o, "primary output".to_string()));
        }
        for p in &self.probes {
            referenced.push((p.net, format!("probe {}", p.role)));
        }
        for (alias, site) in self.aliases() {
            referenced.push((alias, "alias".to_string()));
            referenced.push((site, "alias site".to_string()));
        }
        let mut seen_undriven = vec![false; self.net_count()];
        for (net, what) in referenced {
            if net.index() >= self.net_count() {
                diags.push(Diagnostic {
                    kind: DiagnosticKind::DanglingReference,
                    message: format!("{what} refers to unknown net {net}"),
                    gate: None,
                    net: None,
                });
            } else if driver_count[net.index()] == 0 && !seen_undriven[net.index()] {
                seen_undriven[net.index()] = true;
                diags.push(Diagnostic {
                    kind: DiagnosticKind::Undriven,
                    message: format!("net `{}` ({what}) has no driver", self.net_name(net)),
                    gate: None,
                    net: Some(net),
                });
            }
        }

        if let Err(stuck) = self.topo_order() {
            let first = stuck[0];
            diags.push(Diagnostic {
                kind: DiagnosticKind::CombinationalCycle,
                message: format!(
                    "{} gates lie on or behind a combinational cycle, including gate {first} `{}`",
                    stuck.len(),
                    self.net_name(self.gates[first].output)
                ),
                gate: Some(first),
                net: Some(self.gates[first].output),
            });
        }

        if diags.is_empty() {
            Ok(())
        } else {
            Err(diags)
        }
    }
}
