use super::{AnalysisError, TracedCiphertext};
use crate::homomorphic::{interposition_target, InterpositionRule, Position};
use crate::numeric::{pow_fp, Natural, SignedExponent};
use crate::scheme::{EvaluationKey, KeyWitnesses, SecretKey};

/// One of the nine ordered fragment products of a multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductIdentity {
    pub left: Position,
    pub right: Position,
    pub rule: InterpositionRule,
    /// `c_i * c'_j * t mod p`.
    pub observed: Natural,
    /// `m_i * m'_j * a_s^2 * b_s * k^(e_l) mod p`.
    pub expected: Natural,
}

impl ProductIdentity {
    pub fn holds(&self) -> bool {
        self.observed == self.expected
    }
}

/// The position whose same-position product targets `target`.
fn same_position_source(target: Position) -> Position {
    Position::ALL
        .into_iter()
        .find(|&s| interposition_target(s, s).target == target)
        .expect("the cyclic map is a bijection")
}

/// Evaluates every ordered product `c_i c'_j t_rule` mod p and the value it
/// should equal, computed from the key witnesses alone.
pub fn check_product_identities(
    sk: &SecretKey,
    ek: &EvaluationKey,
    a: &TracedCiphertext,
    b: &TracedCiphertext,
) -> Result<Vec<ProductIdentity>, AnalysisError> {
    let w = sk.witnesses().ok_or(AnalysisError::MissingWitness)?;
    let p = sk.p();
    let mut out = Vec::with_capacity(9);
    for left in Position::ALL {
        for right in Position::ALL {
            let rule = interposition_target(left, right);
            let (i, j, l) = (left.index() - 1, right.index() - 1, rule.target.index() - 1);
            let observed =
                &a.ct.components()[i] * &b.ct.components()[j] % p * &ek.t()[rule.t_index - 1] % p;

            let s = same_position_source(rule.target).index() - 1;
            let scalar = &w.a[s] * &w.a[s] % p * &w.b[s] % p;
            let key_power = pow_fp(&w.k, &SignedExponent::positive(w.e[l].clone()), p)
                .map_err(|e| AnalysisError::InvalidInput(e.to_string()))?;
            let expected = &a.witness.fragments.0[i] * &b.witness.fragments.0[j] % p * scalar % p * key_power % p;
            out.push(ProductIdentity { left, right, rule, observed, expected });
        }
    }
    Ok(out)
}

/// `a2 a3 b6 = a3^2 b3`, `a1 a3 b5 = a1^2 b1`, `a1 a2 b4 = a2^2 b2` (mod p).
pub fn regulator_scalar_identities(w: &KeyWitnesses, p: &Natural) -> [bool; 3] {
    let (a, b) = (&w.a, &w.b);
    let sq = |x: &Natural, y: &Natural| x * x % p * y % p;
    [
        &a[1] * &a[2] % p * &b[5] % p == sq(&a[2], &b[2]),
        &a[0] * &a[2] % p * &b[4] % p == sq(&a[0], &b[0]),
        &a[0] * &a[1] % p * &b[3] % p == sq(&a[1], &b[1]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::seeded_rng;
    use crate::scheme::{keygen, Params};

    #[test]
    fn identities_hold_for_genuine_keys() {
        let params = Params::toy(16, 31u32.into(), 37u32.into()).unwrap();
        let mut rng = seeded_rng(4);
        let (sk, ek) = keygen(&params, &mut rng).unwrap();
        let a = TracedCiphertext::encrypt(&sk, &params, &3u32.into(), &mut rng).unwrap();
        let b = TracedCiphertext::encrypt(&sk, &params, &8u32.into(), &mut rng).unwrap();
        let ids = check_product_identities(&sk, &ek, &a, &b).unwrap();
        assert_eq!(ids.len(), 9);
        assert!(ids.iter().all(ProductIdentity::holds));
        assert_eq!(regulator_scalar_identities(sk.witnesses().unwrap(), sk.p()), [true; 3]);
    }

    #[test]
    fn tampered_regulator_breaks_its_identities() {
        let params = Params::toy(16, 10007u32.into(), 10009u32.into()).unwrap();
        let mut rng = seeded_rng(5);
        let (sk, ek) = keygen(&params, &mut rng).unwrap();
        let a = TracedCiphertext::encrypt(&sk, &params, &3u32.into(), &mut rng).unwrap();
        let b = TracedCiphertext::encrypt(&sk, &params, &8u32.into(), &mut rng).unwrap();
        let bad = ek.with_t(3, (&ek.t()[2] + 1u32) % params.n());
        let ids = check_product_identities(&sk, &bad, &a, &b).unwrap();
        for id in ids {
            let touched = id.rule.t_index == 3;
            assert_eq!(id.holds(), !touched || id.expected == Natural::from(0u8), "{id:?}");
        }
    }

    #[test]
    fn needs_witnesses() {
        let params = Params::toy(16, 31u32.into(), 37u32.into()).unwrap();
        let mut rng = seeded_rng(6);
        let (sk, ek) = keygen(&params, &mut rng).unwrap();
        let a = TracedCiphertext::encrypt(&sk, &params, &3u32.into(), &mut rng).unwrap();
        let bare = sk.without_witnesses();
        assert_eq!(check_product_identities(&bare, &ek, &a, &a), Err(AnalysisError::MissingWitness));
    }
}
