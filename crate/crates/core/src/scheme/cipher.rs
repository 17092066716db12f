use std::sync::Arc;

use num_traits::Zero;

use super::{Params, SchemeError, SecretKey};
use crate::numeric::{sample_range, Natural, RandomSource, SamplingRange};

/// Three residues mod n, one per logical position.
#[derive(Debug, Clone)]
pub struct Ciphertext {
    c: [Natural; 3],
    depth: u32,
    modulus: Arc<Natural>,
}

impl PartialEq for Ciphertext {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.depth == other.depth && self.same_modulus(other.modulus())
    }
}

impl Eq for Ciphertext {}

impl Ciphertext {
    pub fn new(c: [Natural; 3], depth: u32, modulus: Natural) -> Result<Ciphertext, SchemeError> {
        Self::with_shared_modulus(c, depth, Arc::new(modulus))
    }

    pub(crate) fn with_shared_modulus(c: [Natural; 3], depth: u32, modulus: Arc<Natural>) -> Result<Ciphertext, SchemeError> {
        if c.iter().any(|ci| *ci >= *modulus) {
            return Err(SchemeError::ComponentOutOfRange);
        }
        Ok(Ciphertext { c, depth, modulus })
    }

    pub fn components(&self) -> &[Natural; 3] {
        &self.c
    }

    /// Number of multiplications along the deepest path that produced this value.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn modulus(&self) -> &Natural {
        &self.modulus
    }

    pub(crate) fn modulus_shared(&self) -> &Arc<Natural> {
        &self.modulus
    }

    pub fn same_modulus(&self, n: &Natural) -> bool {
        std::ptr::eq(&*self.modulus, n) || *self.modulus == *n
    }
}

/// Additive shares of a plaintext: `m1 + m2 + m3 = m (mod p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragments(pub [Natural; 3]);

impl Fragments {
    pub fn sum_mod(&self, p: &Natural) -> Natural {
        self.0.iter().fold(Natural::zero(), |acc, m| acc + m) % p
    }
}

/// How `m1, m2` are drawn during encryption.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FragmentMode {
    /// `m1, m2` uniform in `Z_p^*`, `m3 = m - m1 - m2 mod p`.
    #[default]
    UniformUnits,
    /// `m1, m2` drawn from the key sampling range, `m3` reduced mod n.
    SamplingRange,
}

/// The secret randomness behind one fresh ciphertext.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncryptionTrace {
    pub fragments: Fragments,
    /// Noise multipliers `r_i` with `c_i = m_i * k_i + r_i * p mod n`.
    pub noise: [Natural; 3],
}

/// Splits `m` into three fragments with `m1, m2` uniform in `Z_p^*`.
pub fn fragment<R: RandomSource + ?Sized>(m: &Natural, p: &Natural, rng: &mut R) -> Result<Fragments, SchemeError> {
    if m >= p {
        return Err(SchemeError::MessageOutOfRange);
    }
    let units = SamplingRange::new(1u32.into(), p.clone())?;
    let m1 = sample_range(&units, rng);
    let m2 = sample_range(&units, rng);
    let m3 = (m + p + p - &m1 - &m2) % p;
    Ok(Fragments([m1, m2, m3]))
}

/// Splits `m` with `m1, m2` from `range` and `m3 = m - m1 - m2 mod n`.
pub fn fragment_in_range<R: RandomSource + ?Sized>(
    m: &Natural,
    n: &Natural,
    range: &SamplingRange,
    rng: &mut R,
) -> Fragments {
    let m1 = sample_range(range, rng);
    let m2 = sample_range(range, rng);
    let m3 = (m % n + n - &m1 % n + n - &m2 % n) % n;
    Fragments([m1, m2, m3])
}

pub fn encrypt<R: RandomSource + ?Sized>(
    sk: &SecretKey,
    params: &Params,
    m: &Natural,
    rng: &mut R,
) -> Result<Ciphertext, SchemeError> {
    encrypt_traced(sk, params, m, FragmentMode::default(), rng).map(|(ct, _)| ct)
}

/// Encrypts and also returns the fragments and noise that were used.
pub fn encrypt_traced<R: RandomSource + ?Sized>(
    sk: &SecretKey,
    params: &Params,
    m: &Natural,
    mode: FragmentMode,
    rng: &mut R,
) -> Result<(Ciphertext, EncryptionTrace), SchemeError> {
    let p = params.p();
    if sk.p() != p {
        return Err(SchemeError::InconsistentKey("secret key belongs to different parameters".into()));
    }
    if m >= p {
        return Err(SchemeError::MessageOutOfRange);
    }
    let n = params.n();
    let fragments = match mode {
        FragmentMode::UniformUnits => fragment(m, p, rng)?,
        FragmentMode::SamplingRange => fragment_in_range(m, n, &params.range(), rng),
    };
    let range = params.range();
    let noise = [sample_range(&range, rng), sample_range(&range, rng), sample_range(&range, rng)];
    let c = std::array::from_fn(|i| (&fragments.0[i] * &sk.position_keys()[i] + &noise[i] * p) % n);
    let ct = Ciphertext::with_shared_modulus(c, 0, params.n_shared())?;
    Ok((ct, EncryptionTrace { fragments, noise }))
}

/// Per-position plaintexts `c_i * k_i^-1 mod p`, without summing.
pub fn decrypt_fragments(sk: &SecretKey, ct: &Ciphertext) -> Fragments {
    let p = sk.p();
    Fragments(std::array::from_fn(|i| &ct.components()[i] * &sk.inverses()[i] % p))
}

pub fn decrypt(sk: &SecretKey, ct: &Ciphertext) -> Natural {
    decrypt_fragments(sk, ct).sum_mod(sk.p())
}
