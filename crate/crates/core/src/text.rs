// SPDX-License-Identifier: Apache-2.0

//! The `.gnl` netlist text format.
//!
//! ```text
//! circuit inv
//! inputs a
//! outputs b
//! b = not(a)
//! end
//! ```
//!
//! One statement per line, `#` starts a comment, keywords and gate kinds are
//! case-insensitive, identifiers are case-sensitive. `q = reg(d)` declares a
//! delay register with init 0. A trailing `# tag: <tag>` comment on a gate or
//! register line records its module tag (`, init: 1` marks a set register).
//! Hardening metadata lives in `# @...` pragma comment lines:
//!
//! ```text
//! # @method iolb
//! # @operation mul
//! # @operand a a0 a1
//! # @operand b b0 b1
//! # @result p0 p1 p2 p3
//! # @probe error __e3
//! # @alias __n9 __n4
//! # @phase hold=8 muxes=6
//! ```
//!
//! [`emit`] writes the canonical form: lowercase keywords, gates in
//! topological order with ties broken by output-net name, registers after the
//! gates sorted by output-net name, aliases sorted by name, LF line endings.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::netlist::{
    is_identifier, Diagnostic, GateKind, HardeningMethod, ModuleTag, NetId, Netlist, Operands, Operation, PhaseOverhead,
    ProbeRole,
};

/// 1-based position in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    UnknownKind,
    ArityMismatch,
    DuplicateDriver,
    UndeclaredNet,
    Structure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{}", .diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
pub struct ParseError {
    pub diagnostics: Vec<ParseDiagnostic>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("cannot emit an invalid netlist: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token<'a> {
    Ident(&'a str),
    Equals,
    Open,
    Close,
    Comma,
    Semi,
}

fn tokenize(code: &str, line: usize, base_col: usize) -> Result<Vec<(Token<'_>, SourceSpan)>, ParseDiagnostic> {
    let mut out = Vec::new();
    let bytes = code.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let span = SourceSpan {
            line,
            column: base_col + code[..i].chars().count(),
        };
        match c {
            b' ' | b'\t' => {
                i += 1;
            }
            b'=' | b'(' | b')' | b',' | b';' => {
                out.push((
                    match c {
                        b'=' => Token::Equals,
                        b'(' => Token::Open,
                        b')' => Token::Close,
                        b',' => Token::Comma,
                        _ => Token::Semi,
                    },
                    span,
                ));
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Token::Ident(&code[start..i]), span));
            }
            _ => {
                let ch = code[i..].chars().next().unwrap_or('?');
                return Err(ParseDiagnostic {
                    span,
                    kind: ParseErrorKind::Lexical,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        }
    }
    Ok(out)
}

struct GateStmt<'a> {
    output: &'a str,
    output_span: SourceSpan,
    kind: Option<GateKind>,
    args: Vec<(&'a str, SourceSpan)>,
    tag: ModuleTag,
    init: bool,
}

#[derive(Default)]
struct Pragmas<'a> {
    method: Option<HardeningMethod>,
    operation: Option<Operation>,
    operand_a: Option<Vec<(&'a str, SourceSpan)>>,
    operand_b: Option<Vec<(&'a str, SourceSpan)>>,
    result: Option<Vec<(&'a str, SourceSpan)>>,
    probes: Vec<(ProbeRole, &'a str, SourceSpan)>,
    aliases: Vec<((&'a str, SourceSpan), (&'a str, SourceSpan))>,
    phase: Option<PhaseOverhead>,
}

struct Parser<'a> {
    diags: Vec<ParseDiagnostic>,
    name: Option<&'a str>,
    inputs: Vec<(&'a str, SourceSpan)>,
    outputs: Vec<(&'a str, SourceSpan)>,
    stmts: Vec<GateStmt<'a>>,
    poisoned: Vec<(&'a str, SourceSpan)>,
    pragmas: Pragmas<'a>,
    ended: bool,
}

impl<'a> Parser<'a> {
    fn error(&mut self, span: SourceSpan, kind: ParseErrorKind, message: impl Into<String>) {
        self.diags.push(ParseDiagnostic {
            span,
            kind,
            message: message.into(),
        });
    }

    fn line(&mut self, text: &'a str, line: usize) {
        let (code, comment) = match text.find('#') {
            Some(pos) => (&text[..pos], Some((&text[pos + 1..], text[..pos + 1].chars().count() + 1))),
            None => (text, None),
        };
        let tokens = match tokenize(code, line, 1) {
            Ok(t) => t,
            Err(d) => {
                self.diags.push(d);
                let trimmed = code.trim_start();
                let ident_len = trimmed
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(trimmed.len());
                let name = &trimmed[..ident_len];
                if is_identifier(name) && trimmed[ident_len..].trim_start().starts_with('=') {
                    let column = code.len() - trimmed.len() + 1;
                    self.poisoned.push((name, SourceSpan { line, column }));
                }
                return;
            }
        };
        if tokens.is_empty() {
            if let Some((comment, col)) = comment {
                let trimmed = comment.trim_start();
                if let Some(pragma) = trimmed.strip_prefix('@') {
                    let col = col + (comment.len() - trimmed.len()) + 1;
                    self.pragma(pragma, SourceSpan { line, column: col });
                }
            }
            return;
        }
        let first_span = tokens[0].1;
        if self.ended {
            self.error(first_span, ParseErrorKind::Syntax, "statement after `end`");
            return;
        }
        let keyword = match &tokens[0].0 {
            Token::Ident(word) if !matches!(tokens.get(1), Some((Token::Equals, _))) => {
                Some(word.to_ascii_lowercase())
            }
            _ => None,
        };
        if self.name.is_none() && keyword.as_deref() != Some("circuit") {
            self.error(first_span, ParseErrorKind::Syntax, "expected `circuit <name>` first");
            // Record a placeholder so the rest of the file is still checked.
            self.name = Some("");
        }
        match keyword.as_deref() {
            Some("circuit") => {
                if self.name.is_some() {
                    self.error(first_span, ParseErrorKind::Syntax, "duplicate `circuit` statement");
                    return;
                }
                match tokens.as_slice() {
                    [_, (Token::Ident(name), _)] => self.name = Some(name),
                    _ => {
                        self.name = Some("");
                        self.error(first_span, ParseErrorKind::Syntax, "expected `circuit <name>`");
                    }
                }
            }
            Some("inputs") | Some("outputs") => {
                let mut ids = Vec::new();
                for (tok, span) in &tokens[1..] {
                    match tok {
                        Token::Ident(id) => ids.push((*id, *span)),
                        _ => {
                            self.error(*span, ParseErrorKind::Syntax, "expected an identifier");
                            return;
                        }
                    }
                }
                if keyword.as_deref() == Some("inputs") {
                    self.inputs.extend(ids);
                } else {
                    self.outputs.extend(ids);
                }
            }
            Some("end") => {
                if tokens.len() != 1 {
                    self.error(tokens[1].1, ParseErrorKind::Syntax, "unexpected tokens after `end`");
                }
                self.ended = true;
            }
            Some(other) => {
                let other = other.to_string();
                self.error(first_span, ParseErrorKind::Syntax, format!("unknown statement `{other}`"));
            }
            None => self.gate(&tokens, comment.map(|(c, col)| (c, SourceSpan { line, column: col }))),
        }
    }

    fn gate(&mut self, tokens: &[(Token<'a>, SourceSpan)], comment: Option<(&'a str, SourceSpan)>) {
        let (output, output_span) = match &tokens[0] {
            (Token::Ident(id), span) => (*id, *span),
            (_, span) => {
                self.error(*span, ParseErrorKind::Syntax, "expected `<net> = <kind>(...)`");
                return;
            }
        };
        let before = self.diags.len();
        self.gate_body(tokens, comment, output, output_span);
        if self.diags.len() > before {
            // Keep the name declared so later uses do not cascade.
            self.poisoned.push((output, output_span));
        }
    }

    fn gate_body(
        &mut self,
        tokens: &[(Token<'a>, SourceSpan)],
        comment: Option<(&'a str, SourceSpan)>,
        output: &'a str,
        output_span: SourceSpan,
    ) {
        let (kind_name, kind_span) = match tokens.get(2) {
            Some((Token::Ident(k), span)) => (*k, *span),
            Some((_, span)) => {
                self.error(*span, ParseErrorKind::Syntax, "expected a gate kind");
                return;
            }
            None => {
                self.error(output_span, ParseErrorKind::Syntax, "expected a gate kind after `=`");
                return;
            }
        };
        let mut rest = &tokens[3..];
        match rest.first() {
            Some((Token::Open, _)) => rest = &rest[1..],
            Some((_, span)) => {
                self.error(*span, ParseErrorKind::Syntax, "expected `(`");
                return;
            }
            None => {
                self.error(kind_span, ParseErrorKind::Syntax, "expected `(` after gate kind");
                return;
            }
        }
        let mut args = Vec::new();
        let mut closed = false;
        let mut expect_ident = true;
        while let Some((tok, span)) = rest.first() {
            rest = &rest[1..];
            match tok {
                Token::Ident(id) if expect_ident => {
                    args.push((*id, *span));
                    expect_ident = false;
                }
                Token::Comma if !expect_ident => expect_ident = true,
                Token::Close if !expect_ident || args.is_empty() => {
                    closed = true;
                    break;
                }
                _ => {
                    self.error(*span, ParseErrorKind::Syntax, "malformed argument list");
                    return;
                }
            }
        }
        if !closed {
            self.error(kind_span, ParseErrorKind::Syntax, "missing `)`");
            return;
        }
        match rest {
            [] | [(Token::Semi, _)] => {}
            [(_, span), ..] => {
                self.error(*span, ParseErrorKind::Syntax, "unexpected tokens after gate");
                return;
            }
        }

        let is_reg = kind_name.eq_ignore_ascii_case("reg");
        let kind = if is_reg {
            None
        } else {
            match kind_name.parse::<GateKind>() {
                Ok(k) => Some(k),
                Err(_) => {
                    self.error(kind_span, ParseErrorKind::UnknownKind, format!("unknown gate kind `{kind_name}`"));
                    return;
                }
            }
        };
        let arity = kind.map_or(1, GateKind::arity);
        if args.len() != arity {
            self.error(
                kind_span,
                ParseErrorKind::ArityMismatch,
                format!(
                    "arity mismatch: `{}` takes {arity} input(s), got {}",
                    kind_name.to_ascii_lowercase(),
                    args.len()
                ),
            );
            return;
        }

        let mut tag = ModuleTag::Original;
        let mut init = false;
        if let Some((text, span)) = comment {
            for attr in text.split(',') {
                let Some((key, value)) = attr.split_once(':') else { continue };
                match key.trim().to_ascii_lowercase().as_str() {
                    "tag" => match value.trim().parse::<ModuleTag>() {
                        Ok(t) => tag = t,
                        Err(e) => self.error(span, ParseErrorKind::Syntax, e.to_string()),
                    },
                    "init" => match value.trim() {
                        "0" => init = false,
                        "1" => init = true,
                        other => self.error(span, ParseErrorKind::Syntax, format!("bad init value `{other}`")),
                    },
                    _ => {}
                }
            }
        }
        self.stmts.push(GateStmt {
            output,
            output_span,
            kind,
            args,
            tag,
            init,
        });
    }

    fn pragma(&mut self, text: &'a str, span: SourceSpan) {
        let mut words = text.split_whitespace();
        let Some(directive) = words.next() else { return };
        // Column bookkeeping for individual words is approximate: all words
        // report the pragma's position.
        let ids: Vec<(&'a str, SourceSpan)> = words.map(|w| (w, span)).collect();
        let bad = |p: &mut Self, msg: String| p.error(span, ParseErrorKind::Syntax, msg);
        match directive.to_ascii_lowercase().as_str() {
            "method" => match ids.as_slice() {
                [(m, _)] => match m.parse::<HardeningMethod>() {
                    Ok(m) => self.pragmas.method = Some(m),
                    Err(e) => bad(self, e.to_string()),
                },
                _ => bad(self, "expected `@method <name>`".into()),
            },
            "operation" => match ids.as_slice() {
                [(op, _)] if op.eq_ignore_ascii_case("mul") => self.pragmas.operation = Some(Operation::Multiply),
                _ => bad(self, "expected `@operation mul`".into()),
            },
            "operand" => match ids.split_first() {
                Some(((which, _), rest)) if which.eq_ignore_ascii_case("a") => {
                    self.pragmas.operand_a = Some(rest.to_vec())
                }
                Some(((which, _), rest)) if which.eq_ignore_ascii_case("b") => {
                    self.pragmas.operand_b = Some(rest.to_vec())
                }
                _ => bad(self, "expected `@operand a|b <nets>`".into()),
            },
            "result" => self.pragmas.result = Some(ids),
            "probe" => match ids.as_slice() {
                [(role, _), (net, net_span)] => match role.parse::<ProbeRole>() {
                    Ok(role) => self.pragmas.probes.push((role, net, *net_span)),
                    Err(e) => bad(self, e.to_string()),
                },
                _ => bad(self, "expected `@probe <role> <net>`".into()),
            },
            "alias" => match ids.as_slice() {
                [alias, site] => self.pragmas.aliases.push((*alias, *site)),
                _ => bad(self, "expected `@alias <net> <site>`".into()),
            },
            "phase" => {
                let mut phase = PhaseOverhead::default();
                for (word, _) in &ids {
                    let parsed = word.split_once('=').and_then(|(k, v)| Some((k, v.parse::<usize>().ok()?)));
                    match parsed {
                        Some(("hold", v)) => phase.hold_bits = v,
                        Some(("muxes", v)) => phase.operand_muxes = v,
                        _ => {
                            bad(self, format!("bad phase attribute `{word}`"));
                            return;
                        }
                    }
                }
                self.pragmas.phase = Some(phase);
            }
            other => bad(self, format!("unknown pragma `@{other}`")),
        }
    }

    fn finish(mut self, last_line: usize) -> Result<Netlist, ParseError> {
        let eof = SourceSpan {
            line: last_line.max(1),
            column: 1,
        };
        if self.name.is_none() {
            self.error(eof, ParseErrorKind::Syntax, "missing `circuit` statement");
        } else if !self.ended {
            self.error(eof, ParseErrorKind::Syntax, "missing `end`");
        }

        let mut n = Netlist::new(self.name.unwrap_or(""));
        let mut defined: HashMap<&str, SourceSpan> = HashMap::new();
        let mut define = |p: &mut Vec<ParseDiagnostic>, n: &mut Netlist, name: &'a str, span: SourceSpan| {
            if let Some(prev) = defined.get(name) {
                p.push(ParseDiagnostic {
                    span,
                    kind: ParseErrorKind::DuplicateDriver,
                    message: format!("net `{name}` already driven at {prev}"),
                });
                None
            } else {
                defined.insert(name, span);
                Some(n.ensure_net(name).expect("lexer only yields identifiers"))
            }
        };
        for &(name, span) in &self.inputs {
            if let Some(id) = define(&mut self.diags, &mut n, name, span) {
                n.push_input(id);
            }
        }
        let mut outputs_of: Vec<Option<NetId>> = Vec::with_capacity(self.stmts.len());
        for stmt in &self.stmts {
            outputs_of.push(define(&mut self.diags, &mut n, stmt.output, stmt.output_span));
        }
        for &(name, span) in &self.poisoned {
            define(&mut self.diags, &mut n, name, span);
        }
        let resolve = |p: &mut Vec<ParseDiagnostic>, name: &str, span: SourceSpan, what: &str| match n
            .find_net(name)
        {
            Some(id) if defined.contains_key(name) => Some(id),
            _ => {
                p.push(ParseDiagnostic {
                    span,
                    kind: ParseErrorKind::UndeclaredNet,
                    message: format!("undeclared net `{name}` used as {what}"),
                });
                None
            }
        };

        let mut gate_lines = Vec::new();
        let mut resolved_stmts = Vec::new();
        for (stmt, out) in self.stmts.iter().zip(&outputs_of) {
            let args: Vec<Option<NetId>> = stmt
                .args
                .iter()
                .map(|&(name, span)| resolve(&mut self.diags, name, span, "an input"))
                .collect();
            if let (Some(out), true) = (out, args.iter().all(Option::is_some)) {
                let args: Vec<NetId> = args.into_iter().flatten().collect();
                resolved_stmts.push((stmt, *out, args));
            }
        }
        let mut out_ids = Vec::new();
        for &(name, span) in &self.outputs {
            if let Some(id) = resolve(&mut self.diags, name, span, "a primary output") {
                out_ids.push(id);
            }
        }
        let resolve_list = |p: &mut Vec<ParseDiagnostic>, list: &Option<Vec<(&str, SourceSpan)>>| {
            list.as_ref().map(|l| {
                l.iter()
                    .filter_map(|&(name, span)| resolve(p, name, span, "pragma operand"))
                    .collect::<Vec<_>>()
            })
        };
        let operand_a = resolve_list(&mut self.diags, &self.pragmas.operand_a);
        let operand_b = resolve_list(&mut self.diags, &self.pragmas.operand_b);
        let result = resolve_list(&mut self.diags, &self.pragmas.result);
        let probes: Vec<(ProbeRole, Option<NetId>)> = self
            .pragmas
            .probes
            .iter()
            .map(|&(role, name, span)| (role, resolve(&mut self.diags, name, span, "probe")))
            .collect();
        let aliases: Vec<(Option<NetId>, Option<NetId>)> = self
            .pragmas
            .aliases
            .iter()
            .map(|&((a, aspan), (s, sspan))| {
                (
                    resolve(&mut self.diags, a, aspan, "alias"),
                    resolve(&mut self.diags, s, sspan, "alias site"),
                )
            })
            .collect();

        for (stmt, out, args) in resolved_stmts {
            match stmt.kind {
                Some(kind) => {
                    let gi = n.add_gate(kind, args, out, stmt.tag);
                    gate_lines.push((gi, stmt.output_span));
                }
                None => {
                    n.add_register(args[0], out, stmt.init, stmt.tag);
                }
            }
        }
        for id in out_ids {
            n.add_output(id);
        }
        n.set_method(self.pragmas.method);
        match (self.pragmas.operation, operand_a, operand_b, result) {
            (Some(operation), Some(a), Some(b), Some(result)) => n.set_operands(Some(Operands {
                operation,
                a,
                b,
                result,
            })),
            (None, None, None, None) => {}
            _ => self.error(
                eof,
                ParseErrorKind::Syntax,
                "operand metadata needs @operation, @operand a, @operand b and @result",
            ),
        }
        for (role, net) in probes {
            if let Some(net) = net {
                n.add_probe(role, net);
            }
        }
        for (alias, site) in aliases {
            if let (Some(a), Some(s)) = (alias, site) {
                n.add_alias(a, s);
            }
        }
        n.set_phase_overhead(self.pragmas.phase);

        if self.diags.is_empty() {
            if let Err(structural) = n.validate() {
                for d in structural {
                    let span = d
                        .gate
                        .and_then(|g| gate_lines.iter().find(|(gi, _)| *gi == g).map(|(_, s)| *s))
                        .unwrap_or(eof);
                    self.error(span, ParseErrorKind::Structure, d.to_string());
                }
            }
        }
        if self.diags.is_empty() {
            Ok(n)
        } else {
            self.diags.sort_by_key(|d| d.span);
            Err(ParseError {
                diagnostics: self.diags,
            })
        }
    }
}

/// Parses `.gnl` text. Accepts LF or CRLF line endings and arbitrary bytes;
/// every failure carries a [`SourceSpan`].
pub fn parse(bytes: &[u8]) -> Result<Netlist, ParseError> {
    let text = match std::str::from_utf8(bytes) {
        Ok(t) => t,
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            let line = valid.iter().filter(|&&b| b == b'\n').count() + 1;
            let line_start = valid.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
            let column = String::from_utf8_lossy(&valid[line_start..]).chars().count() + 1;
            return Err(ParseError {
                diagnostics: vec![ParseDiagnostic {
                    span: SourceSpan { line, column },
                    kind: ParseErrorKind::Lexical,
                    message: "invalid UTF-8".into(),
                }],
            });
        }
    };
    let mut parser = Parser {
        diags: Vec::new(),
        name: None,
        inputs: Vec::new(),
        outputs: Vec::new(),
        stmts: Vec::new(),
        poisoned: Vec::new(),
        pragmas: Pragmas::default(),
        ended: false,
    };
    let mut last_line = 0;
    for (idx, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        last_line = idx + 1;
        parser.line(line, idx + 1);
    }
    parser.finish(last_line)
}

pub fn parse_str(text: &str) -> Result<Netlist, ParseError> {
    parse(text.as_bytes())
}

/// Canonical text of a valid netlist. Byte-for-byte deterministic.
pub fn emit(n: &Netlist) -> Result<String, EmitError> {
    n.validate().map_err(EmitError::Invalid)?;
    let name = |id: NetId| n.net_name(id);
    let join = |ids: &[NetId]| ids.iter().map(|&id| name(id)).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let line = |out: &mut String, s: &str| {
        out.push_str(s);
        out.push('\n');
    };
    line(&mut out, format!("circuit {}", n.name()).trim_end());
    line(&mut out, format!("inputs {}", join(n.inputs())).trim_end());
    line(&mut out, format!("outputs {}", join(n.outputs())).trim_end());

    if let Some(m) = n.method() {
        line(&mut out, &format!("# @method {m}"));
    }
    if let Some(ops) = n.operands() {
        line(&mut out, &format!("# @operation {}", ops.operation.name()));
        line(&mut out, format!("# @operand a {}", join(&ops.a)).trim_end());
        line(&mut out, format!("# @operand b {}", join(&ops.b)).trim_end());
        line(&mut out, format!("# @result {}", join(&ops.result)).trim_end());
    }
    for p in n.probes() {
        line(&mut out, &format!("# @probe {} {}", p.role, name(p.net)));
    }
    let mut aliases: Vec<(&str, &str)> = n.aliases().map(|(a, s)| (name(a), name(s))).collect();
    aliases.sort_unstable();
    for (alias, site) in aliases {
        line(&mut out, &format!("# @alias {alias} {site}"));
    }
    if let Some(phase) = n.phase_overhead() {
        line(
            &mut out,
            &format!("# @phase hold={} muxes={}", phase.hold_bits, phase.operand_muxes),
        );
    }

    let order = n
        .topo_order_by_key(|g| n.net_name(n.gates()[g].output))
        .expect("validated netlists are acyclic");
    for gi in order {
        let g = &n.gates()[gi];
        let args = g.inputs.iter().map(|&i| name(i)).collect::<Vec<_>>().join(", ");
        let mut s = format!("{} = {}({args})", name(g.output), g.kind.name());
        if g.tag != ModuleTag::Original {
            s.push_str(&format!("  # tag: {}", g.tag));
        }
        line(&mut out, &s);
    }
    let mut regs: Vec<_> = n.registers().iter().collect();
    regs.sort_by_key(|r| name(r.output));
    for r in regs {
        let mut s = format!("{} = reg({})", name(r.output), name(r.input));
        match (r.tag != ModuleTag::Original, r.init) {
            (false, false) => {}
            (true, false) => s.push_str(&format!("  # tag: {}", r.tag)),
            (_, true) => s.push_str(&format!("  # tag: {}, init: 1", r.tag)),
        }
        line(&mut out, &s);
    }
    line(&mut out, "end");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{build_gate_demo, build_multiplier};

    fn diag_kinds(text: &str) -> Vec<(usize, ParseErrorKind)> {
        parse_str(text)
            .unwrap_err()
            .diagnostics
            .iter()
            .map(|d| (d.span.line, d.kind))
            .collect()
    }

    #[test]
    fn parses_inverter() {
        let n = parse_str("circuit inv\ninputs a\noutputs b\nb = NOT(a)\nend").unwrap();
        assert_eq!(n.name(), "inv");
        assert_eq!(n.gates().len(), 1);
        assert_eq!(n.gates()[0].kind, GateKind::Not);
        assert_eq!(emit(&n).unwrap(), "circuit inv\ninputs a\noutputs b\nb = not(a)\nend\n");
    }

    #[test]
    fn keywords_are_case_insensitive_and_crlf_accepted() {
        let n = parse_str("CIRCUIT x\r\nInputs a b\r\nOUTPUTS s\r\ns = Xor(a, b);\r\nEnd\r\n").unwrap();
        assert_eq!(n.gates()[0].kind, GateKind::Xor);
    }

    #[test]
    fn arity_diagnostic_points_at_line() {
        let d = diag_kinds("circuit x\ninputs a\noutputs b\nb = XOR(a)\nend\n");
        assert_eq!(d, vec![(4, ParseErrorKind::ArityMismatch)]);
    }

    #[test]
    fn error_kinds() {
        assert_eq!(
            diag_kinds("circuit x\ninputs a\noutputs b\nb = FOO(a)\nend"),
            vec![(4, ParseErrorKind::UnknownKind)]
        );
        assert_eq!(
            diag_kinds("circuit x\ninputs a\noutputs b\nb = not(a)\nb = buf(a)\nend"),
            vec![(5, ParseErrorKind::DuplicateDriver)]
        );
        assert_eq!(
            diag_kinds("circuit x\ninputs a\noutputs b\nb = and(a, c)\nend"),
            vec![(4, ParseErrorKind::UndeclaredNet)]
        );
        assert_eq!(
            diag_kinds("circuit x\ninputs a\noutputs b\nb = not(a) $\nend"),
            vec![(4, ParseErrorKind::Lexical)]
        );
        assert_eq!(
            diag_kinds("circuit x\ninputs a\noutputs b\nb = not(a)\n"),
            vec![(5, ParseErrorKind::Syntax)]
        );
        let cyc = diag_kinds("circuit x\ninputs a\noutputs b\nb = and(a, c)\nc = not(b)\nend");
        assert_eq!(cyc.len(), 1);
        assert_eq!(cyc[0].1, ParseErrorKind::Structure);
    }

    #[test]
    fn lexical_error_column() {
        let err = parse_str("circuit x\ninputs a\noutputs b\nb = not(a) $\nend").unwrap_err();
        assert_eq!(err.diagnostics[0].span, SourceSpan { line: 4, column: 12 });
    }

    #[test]
    fn invalid_utf8_is_a_diagnostic() {
        let err = parse(b"circuit x\ninputs \xff\n").unwrap_err();
        assert_eq!(err.diagnostics[0].span, SourceSpan { line: 2, column: 8 });
    }

    #[test]
    fn forward_references_and_registers() {
        let text = "circuit t\ninputs a\noutputs q\nd = xor(a, q)\nq = reg(d)  # tag: checker\nend\n";
        let n = parse_str(text).unwrap();
        assert_eq!(n.registers().len(), 1);
        assert_eq!(n.registers()[0].tag, ModuleTag::Checker);
        assert_eq!(emit(&n).unwrap(), text);
    }

    #[test]
    fn gate_demo_emits_five_lines() {
        let text = emit(&build_gate_demo(GateKind::Not).unwrap()).unwrap();
        assert_eq!(text, "circuit not_gate\ninputs a\noutputs b\nb = not(a)\nend\n");
    }

    #[test]
    fn one_bit_multiplier_has_one_and_line() {
        let text = emit(&build_multiplier(1).unwrap()).unwrap();
        assert_eq!(text.lines().filter(|l| l.contains("and(")).count(), 1);
    }

    #[test]
    fn metadata_round_trips() {
        let m = build_multiplier(2).unwrap();
        let text = emit(&m).unwrap();
        assert!(text.contains("# @operand a a0 a1\n"));
        let back = parse_str(&text).unwrap();
        assert_eq!(back.operands().unwrap().result.len(), 4);
        assert_eq!(emit(&back).unwrap(), text);
    }
}
