//! Homomorphic addition, scalar multiplication and regulator-based
//! multiplication.
//!
//! Multiplying fragment `i` of one ciphertext by fragment `j` of another
//! produces a term whose key exponent is `e_i + e_j`. The interposition map
//! sends that term to a third position `l`; the exponent regulator for the
//! pair turns the exponent into `e_l` and the coefficient regulator of `l`
//! turns the scalar into `a_l`, so the product decrypts under the same
//! position keys as a fresh ciphertext.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::numeric::Natural;
use crate::scheme::{Ciphertext, EvaluationKey, SchemeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("ciphertexts were produced under different moduli")]
    ModulusMismatch,
}

/// One of the three logical fragment slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    P1,
    P2,
    P3,
}

impl Position {
    pub const ALL: [Position; 3] = [Position::P1, Position::P2, Position::P3];

    /// 1-based index.
    pub fn index(self) -> usize {
        match self {
            Position::P1 => 1,
            Position::P2 => 2,
            Position::P3 => 3,
        }
    }

    /// Inverse of [`Position::index`].
    pub fn from_index(i: usize) -> Option<Position> {
        match i {
            1 => Some(Position::P1),
            2 => Some(Position::P2),
            3 => Some(Position::P3),
            _ => None,
        }
    }

    fn slot(self) -> usize {
        self.index() - 1
    }

    fn next(self) -> Position {
        Position::ALL[self.index() % 3]
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.index())
    }
}

/// Where the product of two positions lands and which regulators move it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InterpositionRule {
    /// Source positions, lower index first.
    pub source_pair: (Position, Position),
    pub target: Position,
    /// 1-based index into `t1..t6`.
    pub t_index: usize,
    /// 1-based index into `d1..d3`.
    pub d_index: usize,
}

/// The six rules of the three-position regular mode.
pub const RULES: [InterpositionRule; 6] = [
    rule(Position::P1, Position::P1, Position::P2, 1, 2),
    rule(Position::P2, Position::P2, Position::P3, 2, 3),
    rule(Position::P3, Position::P3, Position::P1, 3, 1),
    rule(Position::P1, Position::P2, Position::P3, 4, 3),
    rule(Position::P1, Position::P3, Position::P2, 5, 2),
    rule(Position::P2, Position::P3, Position::P1, 6, 1),
];

const fn rule(i: Position, j: Position, target: Position, t_index: usize, d_index: usize) -> InterpositionRule {
    InterpositionRule { source_pair: (i, j), target, t_index, d_index }
}

/// Rule for the product of positions `i` and `j`, in either order.
pub fn interposition_target(i: Position, j: Position) -> InterpositionRule {
    let pair = if i <= j { (i, j) } else { (j, i) };
    let rule = *RULES
        .iter()
        .find(|r| r.source_pair == pair)
        .expect("every unordered pair has a rule");
    debug_assert_eq!(rule.target, cyclic_target(pair.0, pair.1));
    rule
}

/// Same pair moves one step forward; distinct pairs move to the third slot.
fn cyclic_target(i: Position, j: Position) -> Position {
    if i == j {
        i.next()
    } else {
        Position::ALL
            .into_iter()
            .find(|&l| l != i && l != j)
            .expect("three positions")
    }
}

fn check_modulus(ct: &Ciphertext, n: &Natural) -> Result<(), EvalError> {
    if ct.same_modulus(n) {
        Ok(())
    } else {
        Err(EvalError::ModulusMismatch)
    }
}

fn assemble(c: [Natural; 3], depth: u32, like: &Ciphertext) -> Ciphertext {
    Ciphertext::with_shared_modulus(c, depth, like.modulus_shared().clone())
        .unwrap_or_else(|e: SchemeError| unreachable!("components reduced mod n: {e}"))
}

/// Componentwise sum mod n.
pub fn h_add(a: &Ciphertext, b: &Ciphertext, n: &Natural) -> Result<Ciphertext, EvalError> {
    check_modulus(a, n)?;
    check_modulus(b, n)?;
    let c = std::array::from_fn(|i| {
        let s = &a.components()[i] + &b.components()[i];
        if s >= *n {
            s - n
        } else {
            s
        }
    });
    Ok(assemble(c, a.depth().max(b.depth()), a))
}

/// Multiplies every component by a plaintext scalar.
pub fn h_mul_plain(a: &Ciphertext, scalar: &Natural, n: &Natural) -> Result<Ciphertext, EvalError> {
    check_modulus(a, n)?;
    let c = std::array::from_fn(|i| &a.components()[i] * scalar % n);
    Ok(assemble(c, a.depth(), a))
}

/// Regulator-based product of two ciphertexts.
pub fn h_mul(a: &Ciphertext, b: &Ciphertext, ek: &EvaluationKey) -> Result<Ciphertext, EvalError> {
    let n = ek.n();
    check_modulus(a, n)?;
    check_modulus(b, n)?;
    let (x, y) = (a.components(), b.components());

    let mut acc: [Natural; 3] = Default::default();
    for rule in &RULES {
        let (i, j) = (rule.source_pair.0.slot(), rule.source_pair.1.slot());
        // Cross pairs occur in both orders and share a regulator.
        let products = if i == j { &x[i] * &y[i] } else { &x[i] * &y[j] + &x[j] * &y[i] };
        let term = products % n * &ek.t()[rule.t_index - 1];
        let slot = &mut acc[rule.target.slot()];
        *slot = (std::mem::take(slot) + term) % n;
    }
    let c = std::array::from_fn(|l| {
        let v = &acc[l];
        if v.is_zero() {
            Natural::zero()
        } else {
            v * &ek.d()[l] % n
        }
    });
    let depth = a.depth().saturating_add(b.depth()).saturating_add(1);
    let product = Ciphertext::with_shared_modulus(c, depth, ek.n_shared().clone())
        .unwrap_or_else(|e| unreachable!("components reduced mod n: {e}"));
    Ok(product)
}
