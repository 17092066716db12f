use super::AnalysisError;
use crate::homomorphic::{h_add, h_mul, h_mul_plain, RULES};
use crate::numeric::{Natural, RandomSource};
use crate::scheme::{encrypt_traced, Ciphertext, EvaluationKey, FragmentMode, Fragments, Params, SecretKey};

/// The plaintext fragments a ciphertext is known to carry, and for fresh
/// ciphertexts the noise multipliers used to mask them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseWitness {
    pub fragments: Fragments,
    pub noise: Option<[Natural; 3]>,
}

/// A ciphertext whose witness is carried along through homomorphic
/// operations by evaluating the same operations on the fragments mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracedCiphertext {
    pub ct: Ciphertext,
    pub witness: NoiseWitness,
}

impl TracedCiphertext {
    pub fn encrypt<R: RandomSource + ?Sized>(
        sk: &SecretKey,
        params: &Params,
        m: &Natural,
        rng: &mut R,
    ) -> Result<TracedCiphertext, AnalysisError> {
        let (ct, trace) = encrypt_traced(sk, params, m, FragmentMode::UniformUnits, rng)?;
        Ok(TracedCiphertext { ct, witness: NoiseWitness { fragments: trace.fragments, noise: Some(trace.noise) } })
    }

    fn derived(ct: Ciphertext, fragments: [Natural; 3]) -> TracedCiphertext {
        TracedCiphertext { ct, witness: NoiseWitness { fragments: Fragments(fragments), noise: None } }
    }

    pub fn add(&self, other: &TracedCiphertext, p: &Natural) -> Result<TracedCiphertext, AnalysisError> {
        let ct = h_add(&self.ct, &other.ct, self.ct.modulus())?;
        let (f, g) = (&self.witness.fragments.0, &other.witness.fragments.0);
        Ok(Self::derived(ct, std::array::from_fn(|i| (&f[i] + &g[i]) % p)))
    }

    pub fn mul_plain(&self, scalar: &Natural, p: &Natural) -> Result<TracedCiphertext, AnalysisError> {
        let ct = h_mul_plain(&self.ct, scalar, self.ct.modulus())?;
        let f = &self.witness.fragments.0;
        Ok(Self::derived(ct, std::array::from_fn(|i| &f[i] * scalar % p)))
    }

    pub fn mul(&self, other: &TracedCiphertext, ek: &EvaluationKey, p: &Natural) -> Result<TracedCiphertext, AnalysisError> {
        let ct = h_mul(&self.ct, &other.ct, ek)?;
        let (f, g) = (&self.witness.fragments.0, &other.witness.fragments.0);
        let mut out: [Natural; 3] = Default::default();
        for rule in &RULES {
            let (i, j) = (rule.source_pair.0.index() - 1, rule.source_pair.1.index() - 1);
            let term = if i == j { &f[i] * &g[i] } else { &f[i] * &g[j] + &f[j] * &g[i] };
            let slot = &mut out[rule.target.index() - 1];
            *slot = (std::mem::take(slot) + term) % p;
        }
        Ok(Self::derived(ct, out))
    }

    /// Plaintext implied by the witness.
    pub fn plaintext(&self, p: &Natural) -> Natural {
        self.witness.fragments.sum_mod(p)
    }
}

/// Checks that every component is congruent mod p to its noise-free value
/// `m_i * k_i`, and, when the noise witness is present, that adding
/// `r_i * p` back reproduces `c_i` exactly.
pub fn noise_vanishing_check(
    sk: &SecretKey,
    ct: &Ciphertext,
    witness: Option<&NoiseWitness>,
) -> Result<bool, AnalysisError> {
    let witness = witness.ok_or(AnalysisError::MissingWitness)?;
    let p = sk.p();
    let n = ct.modulus();
    let ok = (0..3).all(|i| {
        let c = &ct.components()[i];
        let stripped = &witness.fragments.0[i] * &sk.position_keys()[i];
        let congruent = (&stripped % p) == (c % p);
        let exact = match &witness.noise {
            Some(noise) => (stripped + &noise[i] * p) % n == *c,
            None => true,
        };
        congruent && exact
    });
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::seeded_rng;
    use crate::scheme::{decrypt, keygen};
    use num_traits::Zero;

    fn setup() -> (Params, SecretKey, EvaluationKey) {
        let params = Params::toy(16, 10007u32.into(), 10009u32.into()).unwrap();
        let (sk, ek) = keygen(&params, &mut seeded_rng(17)).unwrap();
        (params, sk, ek)
    }

    #[test]
    fn fresh_and_sum_pass_perturbed_fails() {
        let (params, sk, _) = setup();
        let mut rng = seeded_rng(1);
        let a = TracedCiphertext::encrypt(&sk, &params, &5u32.into(), &mut rng).unwrap();
        let b = TracedCiphertext::encrypt(&sk, &params, &9u32.into(), &mut rng).unwrap();
        assert!(noise_vanishing_check(&sk, &a.ct, Some(&a.witness)).unwrap());

        let s = a.add(&b, params.p()).unwrap();
        assert!(noise_vanishing_check(&sk, &s.ct, Some(&s.witness)).unwrap());

        let mut c = a.ct.components().clone();
        c[1] = (&c[1] + 1u32) % params.n();
        let bad = Ciphertext::new(c, 0, params.n().clone()).unwrap();
        assert!(!noise_vanishing_check(&sk, &bad, Some(&a.witness)).unwrap());
    }

    #[test]
    fn missing_witness() {
        let (params, sk, _) = setup();
        let a = TracedCiphertext::encrypt(&sk, &params, &5u32.into(), &mut seeded_rng(2)).unwrap();
        assert_eq!(noise_vanishing_check(&sk, &a.ct, None), Err(AnalysisError::MissingWitness));
    }

    #[test]
    fn traced_products_track_decryption() {
        let (params, sk, ek) = setup();
        let p = params.p();
        let mut rng = seeded_rng(3);
        let a = TracedCiphertext::encrypt(&sk, &params, &12u32.into(), &mut rng).unwrap();
        let b = TracedCiphertext::encrypt(&sk, &params, &34u32.into(), &mut rng).unwrap();
        let prod = a.mul(&b, &ek, p).unwrap().mul_plain(&3u32.into(), p).unwrap();
        assert!(noise_vanishing_check(&sk, &prod.ct, Some(&prod.witness)).unwrap());
        assert_eq!(prod.plaintext(p), decrypt(&sk, &prod.ct));
        assert_eq!(prod.plaintext(p), Natural::from(12u32 * 34 * 3));
        assert!(!prod.witness.fragments.0.iter().all(Zero::is_zero));
    }
}
