use std::collections::HashMap;

use super::{Circuit, CircuitError, Gate, GateOp, WireId};
use crate::numeric::Natural;

const KEYWORDS: [&str; 5] = ["in", "out", "add", "mul", "cmul"];

pub(super) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&s)
}

fn parse_err(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Parse { line, message: message.into() }
}

/// Parses the line format: `in <name>`, `<w> = add|mul <a> <b>`,
/// `<w> = cmul <scalar> <a>`, and a final `out <w>`. `#` starts a comment.
pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut inputs: Vec<String> = Vec::new();
    let mut gates: Vec<Gate> = Vec::new();
    let mut wires: HashMap<String, WireId> = HashMap::new();
    let mut output: Option<(usize, WireId)> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let stmt = raw.split('#').next().unwrap_or("").trim();
        if stmt.is_empty() {
            continue;
        }
        if let Some((out_line, _)) = output {
            return Err(parse_err(line_no, format!("statement after `out` on line {out_line}")));
        }
        let tokens: Vec<&str> = stmt.split_whitespace().collect();

        let lookup = |name: &str| -> Result<WireId, CircuitError> {
            wires.get(name).copied().ok_or_else(|| parse_err(line_no, format!("unknown wire `{name}`")))
        };

        match tokens.as_slice() {
            ["in", name] => {
                if !gates.is_empty() {
                    return Err(parse_err(line_no, "inputs must be declared before gates"));
                }
                declare(&mut wires, name, WireId(inputs.len()), line_no)?;
                inputs.push(name.to_string());
            }
            ["out", name] => {
                output = Some((line_no, lookup(name)?));
            }
            [name, "=", op, rest @ ..] => {
                let op = match (*op, rest) {
                    ("add", [a, b]) => GateOp::Add(lookup(a)?, lookup(b)?),
                    ("mul", [a, b]) => GateOp::Mul(lookup(a)?, lookup(b)?),
                    ("cmul", [s, a]) => {
                        let scalar = parse_decimal(s).ok_or_else(|| parse_err(line_no, format!("invalid scalar `{s}`")))?;
                        GateOp::CMul(scalar, lookup(a)?)
                    }
                    ("add" | "mul" | "cmul", _) => return Err(parse_err(line_no, format!("`{op}` takes two operands"))),
                    _ => return Err(parse_err(line_no, format!("unknown operation `{op}`"))),
                };
                declare(&mut wires, name, WireId(inputs.len() + gates.len()), line_no)?;
                gates.push(Gate { name: name.to_string(), op });
            }
            _ => return Err(parse_err(line_no, format!("unrecognized statement `{stmt}`"))),
        }
    }

    let (_, output) = output.ok_or_else(|| parse_err(last_line + 1, "missing `out` statement"))?;
    Circuit::new(inputs, gates, output)
}

fn declare(wires: &mut HashMap<String, WireId>, name: &str, id: WireId, line: usize) -> Result<(), CircuitError> {
    if !is_identifier(name) {
        return Err(parse_err(line, format!("invalid wire name `{name}`")));
    }
    if wires.insert(name.to_string(), id).is_some() {
        return Err(CircuitError::Validation { wire: name.to_string(), message: "duplicate wire name".into() });
    }
    Ok(())
}

fn parse_decimal(s: &str) -> Option<Natural> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Natural::parse_bytes(s.as_bytes(), 10)
}
