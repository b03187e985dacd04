//! Reader and writer for the OpenQASM 2.0 subset used by Clifford+T
//! benchmark files: one `qreg`, any number of `creg`s, the nine gate kinds,
//! and `measure`/`barrier` statements which are dropped.

use std::fmt::Write as _;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result, SourceSpan};

/// A statement that was accepted but not kept in the circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dropped {
    pub span: SourceSpan,
    pub statement: String,
}

#[derive(Clone, Debug)]
pub struct ParseReport {
    pub circuit: Circuit,
    pub dropped: Vec<Dropped>,
}

struct Statement {
    span: SourceSpan,
    text: String,
}

fn err(span: SourceSpan, message: impl Into<String>) -> Error {
    Error::Parse { span, message: message.into() }
}

/// Splits on `;`, strips `//` comments and records where each statement starts.
fn statements(text: &str) -> Result<Vec<Statement>> {
    let mut out = Vec::new();
    let mut buf = String::new();
    let mut start: Option<SourceSpan> = None;
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(ch) = chars.next() {
        let here = SourceSpan { line, column };
        if ch == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
        match ch {
            '/' if chars.peek() == Some(&'/') => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        column = 1;
                        break;
                    }
                }
                buf.push(' ');
            }
            ';' => {
                let span = start.take().unwrap_or(here);
                let stmt = buf.trim().to_string();
                if stmt.is_empty() {
                    return Err(err(span, "empty statement"));
                }
                out.push(Statement { span, text: stmt });
                buf.clear();
            }
            c => {
                if start.is_none() && !c.is_whitespace() {
                    start = Some(here);
                }
                buf.push(c);
            }
        }
    }
    if let Some(span) = start {
        return Err(err(span, format!("missing ';' after {:?}", buf.trim())));
    }
    Ok(out)
}

/// `name[index]` → (name, index).
fn indexed(s: &str, span: SourceSpan) -> Result<(&str, usize)> {
    let s = s.trim();
    let open = s.find('[').ok_or_else(|| err(span, format!("expected name[index], got {s:?}")))?;
    if !s.ends_with(']') {
        return Err(err(span, format!("expected name[index], got {s:?}")));
    }
    let name = s[..open].trim();
    let idx = s[open + 1..s.len() - 1].trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(err(span, format!("bad register name in {s:?}")));
    }
    let idx = idx.parse::<usize>().map_err(|_| err(span, format!("bad index in {s:?}")))?;
    Ok((name, idx))
}

fn split_head(text: &str) -> (&str, &str) {
    let end = text.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(text.len());
    (&text[..end], text[end..].trim())
}

pub fn parse(text: &str) -> Result<Circuit> {
    parse_with_report(text, false).map(|r| r.circuit)
}

/// Parses `text`; with `strict`, `measure`/`barrier` are errors instead of
/// being dropped.
pub fn parse_with_report(text: &str, strict: bool) -> Result<ParseReport> {
    let mut qreg: Option<(String, usize)> = None;
    let mut gates = Vec::new();
    let mut dropped = Vec::new();

    for stmt in statements(text)? {
        let span = stmt.span;
        let (head, rest) = split_head(&stmt.text);
        match head {
            "OPENQASM" => {
                if rest != "2.0" {
                    return Err(err(span, format!("unsupported OpenQASM version {rest:?}")));
                }
            }
            "include" => {
                if !(rest.starts_with('"') && rest.ends_with('"') && rest.len() >= 2) {
                    return Err(err(span, "include expects a quoted file name"));
                }
            }
            "qreg" => {
                if qreg.is_some() {
                    return Err(err(span, "only a single qreg is supported"));
                }
                let (name, size) = indexed(rest, span)?;
                if size == 0 {
                    return Err(err(span, "qreg size must be positive"));
                }
                qreg = Some((name.to_string(), size));
            }
            "creg" => {
                indexed(rest, span)?;
            }
            "measure" | "barrier" => {
                if strict {
                    return Err(err(span, format!("{head} not allowed in strict mode")));
                }
                dropped.push(Dropped { span, statement: stmt.text.clone() });
            }
            "" => return Err(err(span, format!("malformed statement {:?}", stmt.text))),
            name => {
                let kind = GateKind::from_qasm_name(name).ok_or_else(|| err(span, format!("unknown gate '{name}'")))?;
                let (reg, size) = qreg.as_ref().ok_or_else(|| err(span, "gate before qreg declaration"))?;
                let mut qubits = Vec::with_capacity(2);
                for operand in rest.split(',') {
                    let (r, idx) = indexed(operand, span)?;
                    if r != reg {
                        return Err(err(span, format!("unknown register '{r}'")));
                    }
                    if idx >= *size {
                        return Err(err(span, format!("qubit index {idx} out of range for qreg {reg}[{size}]")));
                    }
                    qubits.push(idx);
                }
                if qubits.len() != kind.arity() {
                    return Err(err(span, format!("'{name}' takes {} operand(s), got {}", kind.arity(), qubits.len())));
                }
                if qubits.len() == 2 && qubits[0] == qubits[1] {
                    return Err(err(span, format!("duplicate qubit {reg}[{}] in '{name}'", qubits[0])));
                }
                gates.push(Gate::new(kind, &qubits)?);
            }
        }
    }

    let (_, size) = qreg.ok_or_else(|| err(SourceSpan { line: 1, column: 1 }, "no qreg declared"))?;
    Ok(ParseReport { circuit: Circuit::from_gates(size, gates)?, dropped })
}

pub fn emit(c: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", c.num_qubits()).unwrap();
    for g in c.gates() {
        match g.qubits() {
            [q] => writeln!(out, "{} q[{}];", g.kind().qasm_name(), q).unwrap(),
            [a, b] => writeln!(out, "{} q[{}],q[{}];", g.kind().qasm_name(), a, b).unwrap(),
            _ => unreachable!(),
        }
    }
    out
}
