use super::{Circuit, GateOp};
use crate::numeric::Natural;

/// Whether a circuit's integer result is guaranteed to fit below `p`.
///
/// Evaluation mod p is exact regardless; a failed check only means the
/// decrypted value may not equal the integer result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityReport {
    /// Largest number of MUL gates on any input-to-output path.
    pub mul_depth: usize,
    pub bound_ok: bool,
    /// Upper bound on the output for inputs in `[0, B]`.
    pub max_product_bound: Natural,
    pub p: Natural,
}

/// Interval propagation with inputs in `[0, input_bound]`: ADD sums bounds,
/// MUL multiplies them, CMUL scales by the constant.
pub fn capacity_check(circuit: &Circuit, input_bound: &Natural, p: &Natural) -> CapacityReport {
    let mut bounds: Vec<Natural> = vec![input_bound.clone(); circuit.inputs().len()];
    let mut depth: Vec<usize> = vec![0; circuit.inputs().len()];
    for gate in circuit.gates() {
        let (b, d) = match &gate.op {
            GateOp::Add(x, y) => (&bounds[x.0] + &bounds[y.0], depth[x.0].max(depth[y.0])),
            GateOp::Mul(x, y) => (&bounds[x.0] * &bounds[y.0], depth[x.0].max(depth[y.0]) + 1),
            GateOp::CMul(s, x) => (s * &bounds[x.0], depth[x.0]),
        };
        bounds.push(b);
        depth.push(d);
    }
    let out = circuit.output().0;
    let max_product_bound = bounds.swap_remove(out);
    CapacityReport {
        mul_depth: depth[out],
        bound_ok: max_product_bound < *p,
        max_product_bound,
        p: p.clone(),
    }
}
