use super::{Circuit, CircuitError, GateOp};
use crate::homomorphic::{h_add, h_mul, h_mul_plain};
use crate::numeric::Natural;
use crate::scheme::{Ciphertext, EvaluationKey};

/// Walks the gates in order, keeping one value per wire.
fn evaluate<T: Clone>(
    circuit: &Circuit,
    inputs: &[T],
    mut add: impl FnMut(&T, &T) -> Result<T, CircuitError>,
    mut mul: impl FnMut(&T, &T) -> Result<T, CircuitError>,
    mut cmul: impl FnMut(&Natural, &T) -> Result<T, CircuitError>,
) -> Result<T, CircuitError> {
    if inputs.len() != circuit.inputs().len() {
        return Err(CircuitError::ArityMismatch { expected: circuit.inputs().len(), got: inputs.len() });
    }
    let mut wires: Vec<T> = Vec::with_capacity(circuit.wire_count());
    wires.extend_from_slice(inputs);
    for gate in circuit.gates() {
        let value = match &gate.op {
            GateOp::Add(a, b) => add(&wires[a.0], &wires[b.0])?,
            GateOp::Mul(a, b) => mul(&wires[a.0], &wires[b.0])?,
            GateOp::CMul(s, a) => cmul(s, &wires[a.0])?,
        };
        wires.push(value);
    }
    Ok(wires.swap_remove(circuit.output().0))
}

/// Ground-truth evaluation over `Z_p`.
pub fn eval_plain(circuit: &Circuit, inputs: &[Natural], p: &Natural) -> Result<Natural, CircuitError> {
    let reduced: Vec<Natural> = inputs.iter().map(|x| x % p).collect();
    evaluate(
        circuit,
        &reduced,
        |a, b| Ok((a + b) % p),
        |a, b| Ok(a * b % p),
        |s, a| Ok(s * a % p),
    )
}

/// Evaluation over the integers with no reduction at all.
pub fn eval_exact(circuit: &Circuit, inputs: &[Natural]) -> Result<Natural, CircuitError> {
    evaluate(circuit, inputs, |a, b| Ok(a + b), |a, b| Ok(a * b), |s, a| Ok(s * a))
}

/// Gate-by-gate homomorphic evaluation.
pub fn eval_encrypted(circuit: &Circuit, inputs: &[Ciphertext], ek: &EvaluationKey) -> Result<Ciphertext, CircuitError> {
    let n = ek.n();
    evaluate(
        circuit,
        inputs,
        |a, b| Ok(h_add(a, b, n)?),
        |a, b| Ok(h_mul(a, b, ek)?),
        |s, a| Ok(h_mul_plain(a, s, n)?),
    )
}
