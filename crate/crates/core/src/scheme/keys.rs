use std::sync::Arc;

use num_traits::{One, Zero};

use super::{Params, SchemeError};
use crate::numeric::{mod_inv, pow_fp, sample_range, sample_unit, Natural, RandomSource, SignedExponent};

/// Coefficients of `(e1, e2, e3)` in the exponent carried by `t1..t6`.
pub const REGULATOR_EXPONENTS: [[i64; 3]; 6] = [
    [-2, 1, 0],   // t1: e2 - 2e1
    [0, -2, 1],   // t2: e3 - 2e2
    [1, 0, -2],   // t3: e1 - 2e3
    [-1, -1, 1],  // t4: e3 - e1 - e2
    [-1, 1, -1],  // t5: e2 - e1 - e3
    [1, -1, -1],  // t6: e1 - e2 - e3
];

/// Generation-time secrets kept for test oracles and the analysis harness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyWitnesses {
    pub k: Natural,
    pub e: [Natural; 3],
    pub a: [Natural; 3],
    /// `b1..b3` sampled, `b4..b6` derived, all reduced mod p.
    pub b: [Natural; 6],
}

impl KeyWitnesses {
    /// Exponent of `t_index` (1-based) as a signed combination of `e1..e3`.
    pub fn regulator_exponent(&self, t_index: usize) -> SignedExponent {
        let coeffs = REGULATOR_EXPONENTS[t_index - 1];
        SignedExponent::combination(&coeffs, &[&self.e[0], &self.e[1], &self.e[2]])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    p: Natural,
    position_keys: [Natural; 3],
    inv_mod_p: [Natural; 3],
    witnesses: Option<KeyWitnesses>,
}

impl SecretKey {
    /// Assembles a key from stored parts, checking each inverse.
    pub fn from_parts(
        p: Natural,
        position_keys: [Natural; 3],
        inv_mod_p: [Natural; 3],
        witnesses: Option<KeyWitnesses>,
    ) -> Result<SecretKey, SchemeError> {
        for (k, inv) in position_keys.iter().zip(&inv_mod_p) {
            if *inv >= p || !((k % &p) * inv % &p).is_one() {
                return Err(SchemeError::InconsistentKey("position key inverse mismatch".into()));
            }
        }
        Ok(SecretKey { p, position_keys, inv_mod_p, witnesses })
    }

    pub fn p(&self) -> &Natural {
        &self.p
    }

    /// `k1..k3` as residues mod n.
    pub fn position_keys(&self) -> &[Natural; 3] {
        &self.position_keys
    }

    /// `(k_i mod p)^-1 mod p`.
    pub fn inverses(&self) -> &[Natural; 3] {
        &self.inv_mod_p
    }

    pub fn witnesses(&self) -> Option<&KeyWitnesses> {
        self.witnesses.as_ref()
    }

    /// Drops the generation witnesses, as done before storing production keys.
    pub fn without_witnesses(&self) -> SecretKey {
        SecretKey { witnesses: None, ..self.clone() }
    }
}

/// Public material needed for homomorphic multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationKey {
    n: Arc<Natural>,
    t: [Natural; 6],
    d: [Natural; 3],
}

impl EvaluationKey {
    pub fn from_parts(n: Natural, t: [Natural; 6], d: [Natural; 3]) -> Result<EvaluationKey, SchemeError> {
        if t.iter().chain(&d).any(|v| *v >= n) {
            return Err(SchemeError::InconsistentKey("regulator not reduced mod n".into()));
        }
        Ok(EvaluationKey { n: Arc::new(n), t, d })
    }

    pub fn n(&self) -> &Natural {
        &self.n
    }

    pub(crate) fn n_shared(&self) -> &Arc<Natural> {
        &self.n
    }

    /// Exponent regulators `t1..t6`.
    pub fn t(&self) -> &[Natural; 6] {
        &self.t
    }

    /// Coefficient regulators `d1..d3`.
    pub fn d(&self) -> &[Natural; 3] {
        &self.d
    }

    /// Copy with one exponent regulator (1-based) replaced.
    pub fn with_t(&self, index: usize, value: Natural) -> EvaluationKey {
        let mut ek = self.clone();
        ek.t[index - 1] = value;
        ek
    }

    /// Copy with one coefficient regulator (1-based) replaced.
    pub fn with_d(&self, index: usize, value: Natural) -> EvaluationKey {
        let mut ek = self.clone();
        ek.d[index - 1] = value;
        ek
    }
}

/// Generates position keys and regulators.
///
/// Scalars that must be invertible mod p are resampled until they are.
pub fn keygen<R: RandomSource + ?Sized>(params: &Params, rng: &mut R) -> Result<(SecretKey, EvaluationKey), SchemeError> {
    let p = params.p();
    let n = params.n();
    let range = params.range();

    let mut unit = || sample_unit(p, &range, rng);
    let a = [unit()? % p, unit()? % p, unit()? % p];
    let b_sampled = [unit()? % p, unit()? % p, unit()? % p];
    let k = unit()? % p;

    let inv = |x: &Natural| mod_inv(x, p);
    let b4 = &a[1] * &b_sampled[1] % p * inv(&a[0])? % p;
    let b5 = &a[0] * &b_sampled[0] % p * inv(&a[2])? % p;
    let b6 = &a[2] * &b_sampled[2] % p * inv(&a[1])? % p;
    let b = [b_sampled[0].clone(), b_sampled[1].clone(), b_sampled[2].clone(), b4, b5, b6];

    let e = [sample_range(&range, rng), sample_range(&range, rng), sample_range(&range, rng)];

    let mut mask = |inner: Natural| -> Natural {
        let noise = sample_range(&range, rng);
        (inner + noise * p) % n
    };

    let mut position_keys: [Natural; 3] = Default::default();
    let mut inv_mod_p: [Natural; 3] = Default::default();
    for i in 0..3 {
        let inner = &a[i] * pow_fp(&k, &SignedExponent::positive(e[i].clone()), p)? % p;
        inv_mod_p[i] = inv(&inner)?;
        position_keys[i] = mask(inner);
    }

    let witnesses = KeyWitnesses { k, e, a, b };

    let mut t: [Natural; 6] = Default::default();
    for (idx, slot) in t.iter_mut().enumerate() {
        let x = witnesses.regulator_exponent(idx + 1);
        let inner = &witnesses.b[idx] * pow_fp(&witnesses.k, &x, p)? % p;
        *slot = mask(inner);
    }

    let [a1, a2, a3] = &witnesses.a;
    let [b1, b2, b3, ..] = &witnesses.b;
    let d = [
        a1 * inv(&(a3 * a3 % p * b3 % p))? % p,
        a2 * inv(&(a1 * a1 % p * b1 % p))? % p,
        a3 * inv(&(a2 * a2 % p * b2 % p))? % p,
    ];
    debug_assert!(d.iter().all(|v| !v.is_zero()));

    let sk = SecretKey { p: p.clone(), position_keys, inv_mod_p, witnesses: Some(witnesses) };
    let ek = EvaluationKey { n: params.n_shared(), t, d };
    Ok((sk, ek))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::seeded_rng;

    #[test]
    fn keygen_inverses_hold() {
        let params = Params::toy(16, 11u32.into(), 13u32.into()).unwrap();
        for seed in 0..50 {
            let (sk, ek) = keygen(&params, &mut seeded_rng(seed)).unwrap();
            for i in 0..3 {
                assert!((&sk.position_keys()[i] % sk.p() * &sk.inverses()[i] % sk.p()).is_one());
                assert!(sk.position_keys()[i] < *params.n());
            }
            assert!(ek.t().iter().all(|t| t < params.n()));
            assert!(ek.d().iter().all(|d| d < sk.p()));
        }
    }

    #[test]
    fn keygen_is_deterministic_per_seed() {
        let params = Params::toy(16, 10007u32.into(), 10009u32.into()).unwrap();
        let a = keygen(&params, &mut seeded_rng(9)).unwrap();
        let b = keygen(&params, &mut seeded_rng(9)).unwrap();
        let c = keygen(&params, &mut seeded_rng(10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn from_parts_rejects_bad_inverse() {
        let params = Params::toy(16, 11u32.into(), 13u32.into()).unwrap();
        let (sk, _) = keygen(&params, &mut seeded_rng(1)).unwrap();
        let mut inv = sk.inverses().clone();
        inv[0] = (&inv[0] + 1u32) % sk.p();
        let r = SecretKey::from_parts(sk.p().clone(), sk.position_keys().clone(), inv, None);
        assert!(matches!(r, Err(SchemeError::InconsistentKey(_))));
    }
}
