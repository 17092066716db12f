//! Arithmetic circuits over `Z_p`: a line-oriented text format, plaintext and
//! homomorphic evaluators, and a plaintext-capacity check.
//!
//! ```text
//! # (a + b) * c
//! in a
//! in b
//! in c
//! s = add a b
//! r = mul s c
//! out r
//! ```

mod capacity;
mod eval;
mod parse;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::homomorphic::EvalError;
use crate::numeric::Natural;

pub use capacity::{capacity_check, CapacityReport};
pub use eval::{eval_encrypted, eval_exact, eval_plain};
pub use parse::parse_circuit;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("wire `{wire}`: {message}")]
    Validation { wire: String, message: String },
    #[error("circuit takes {expected} inputs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("no value supplied for input `{0}`")]
    MissingInput(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Index into the circuit's wire list: inputs first, then one wire per gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WireId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateOp {
    Add(WireId, WireId),
    Mul(WireId, WireId),
    /// Multiplication by a plaintext constant.
    CMul(Natural, WireId),
}

impl GateOp {
    fn operands(&self) -> Vec<WireId> {
        match self {
            GateOp::Add(a, b) | GateOp::Mul(a, b) => vec![*a, *b],
            GateOp::CMul(_, a) => vec![*a],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub name: String,
    pub op: GateOp,
}

/// Topologically ordered gate list with a single output wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    inputs: Vec<String>,
    gates: Vec<Gate>,
    output: WireId,
}

impl Circuit {
    /// Checks naming, operand ordering and the output reference.
    pub fn new(inputs: Vec<String>, gates: Vec<Gate>, output: WireId) -> Result<Circuit, CircuitError> {
        let mut seen: HashMap<&str, ()> = HashMap::new();
        let names = inputs.iter().map(String::as_str).chain(gates.iter().map(|g| g.name.as_str()));
        for name in names {
            if !parse::is_identifier(name) {
                return Err(CircuitError::Validation { wire: name.into(), message: "invalid wire name".into() });
            }
            if seen.insert(name, ()).is_some() {
                return Err(CircuitError::Validation { wire: name.into(), message: "duplicate wire name".into() });
            }
        }
        for (offset, gate) in gates.iter().enumerate() {
            let own = WireId(inputs.len() + offset);
            if let Some(bad) = gate.op.operands().into_iter().find(|w| *w >= own) {
                return Err(CircuitError::Validation {
                    wire: gate.name.clone(),
                    message: format!("operand wire #{} is not defined earlier", bad.0),
                });
            }
        }
        let wire_count = inputs.len() + gates.len();
        if output.0 >= wire_count {
            return Err(CircuitError::Validation {
                wire: format!("#{}", output.0),
                message: "output wire does not exist".into(),
            });
        }
        Ok(Circuit { inputs, gates, output })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> WireId {
        self.output
    }

    pub fn wire_count(&self) -> usize {
        self.inputs.len() + self.gates.len()
    }

    pub fn wire_name(&self, id: WireId) -> &str {
        if id.0 < self.inputs.len() {
            &self.inputs[id.0]
        } else {
            &self.gates[id.0 - self.inputs.len()].name
        }
    }

    /// Orders named values to match the declared inputs.
    pub fn bind_inputs<T: Clone>(&self, named: &HashMap<String, T>) -> Result<Vec<T>, CircuitError> {
        if named.len() != self.inputs.len() {
            return Err(CircuitError::ArityMismatch { expected: self.inputs.len(), got: named.len() });
        }
        self.inputs
            .iter()
            .map(|name| named.get(name).cloned().ok_or_else(|| CircuitError::MissingInput(name.clone())))
            .collect()
    }

    /// Canonical text form, accepted back by [`parse_circuit`].
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for name in &self.inputs {
            writeln!(f, "in {name}")?;
        }
        for gate in &self.gates {
            let w = |id: &WireId| self.wire_name(*id);
            match &gate.op {
                GateOp::Add(a, b) => writeln!(f, "{} = add {} {}", gate.name, w(a), w(b))?,
                GateOp::Mul(a, b) => writeln!(f, "{} = mul {} {}", gate.name, w(a), w(b))?,
                GateOp::CMul(s, a) => writeln!(f, "{} = cmul {} {}", gate.name, s, w(a))?,
            }
        }
        writeln!(f, "out {}", self.wire_name(self.output))
    }
}

/// Incremental construction with automatic gate naming.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    inputs: Vec<String>,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares an input. All inputs must be declared before any gate.
    pub fn input(&mut self, name: &str) -> WireId {
        assert!(self.gates.is_empty(), "inputs must precede gates");
        self.inputs.push(name.to_string());
        WireId(self.inputs.len() - 1)
    }

    pub fn add(&mut self, a: WireId, b: WireId) -> WireId {
        self.push(GateOp::Add(a, b))
    }

    pub fn mul(&mut self, a: WireId, b: WireId) -> WireId {
        self.push(GateOp::Mul(a, b))
    }

    pub fn cmul(&mut self, scalar: Natural, a: WireId) -> WireId {
        self.push(GateOp::CMul(scalar, a))
    }

    fn push(&mut self, op: GateOp) -> WireId {
        let id = WireId(self.inputs.len() + self.gates.len());
        self.gates.push(Gate { name: format!("w{}", self.gates.len() + 1), op });
        id
    }

    pub fn finish(self, output: WireId) -> Result<Circuit, CircuitError> {
        Circuit::new(self.inputs, self.gates, output)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_renders_canonical_text() {
        let mut b = CircuitBuilder::new();
        let x = b.input("x");
        let y = b.input("y");
        let s = b.add(x, y);
        let t = b.cmul(3u32.into(), s);
        let out = b.mul(t, x);
        let c = b.finish(out).unwrap();
        assert_eq!(c.render(), "in x\nin y\nw1 = add x y\nw2 = cmul 3 w1\nw3 = mul w2 x\nout w3\n");
    }

    #[test]
    fn new_rejects_bad_structure() {
        let dup = Circuit::new(vec!["a".into(), "a".into()], vec![], WireId(0));
        assert!(matches!(dup, Err(CircuitError::Validation { wire, .. }) if wire == "a"));

        let self_ref = Circuit::new(
            vec!["a".into()],
            vec![Gate { name: "g".into(), op: GateOp::Add(WireId(0), WireId(1)) }],
            WireId(1),
        );
        assert!(matches!(self_ref, Err(CircuitError::Validation { wire, .. }) if wire == "g"));

        let no_out = Circuit::new(vec!["a".into()], vec![], WireId(3));
        assert!(matches!(no_out, Err(CircuitError::Validation { .. })));
    }

    #[test]
    fn bind_inputs_by_name() {
        let c = parse_circuit("in a\nin b\nw = add a b\nout w\n").unwrap();
        let named: HashMap<String, u32> = [("b".to_string(), 2), ("a".to_string(), 1)].into();
        assert_eq!(c.bind_inputs(&named).unwrap(), vec![1, 2]);
        let short: HashMap<String, u32> = [("a".to_string(), 1)].into();
        assert_eq!(c.bind_inputs(&short), Err(CircuitError::ArityMismatch { expected: 2, got: 1 }));
        let wrong: HashMap<String, u32> = [("a".to_string(), 1), ("z".to_string(), 1)].into();
        assert_eq!(c.bind_inputs(&wrong), Err(CircuitError::MissingInput("b".into())));
    }
}
