//! Arbitrary-precision modular arithmetic, primality and sampling.
//!
//! Every residue in the scheme is a [`Natural`]. Randomness always arrives
//! through an explicitly passed [`RandomSource`]; nothing in this module keeps
//! global state.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

/// Arbitrary-precision non-negative integer. `BigUint` keeps its limbs
/// normalized, so every value is canonical.
pub type Natural = BigUint;

/// Any source of random bits. Implemented for every [`RngCore`].
pub trait RandomSource: RngCore {}

impl<T: RngCore + ?Sized> RandomSource for T {}

/// Deterministic generator used for reproducible runs.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Generator seeded from operating-system entropy.
pub fn entropy_rng() -> ChaCha20Rng {
    ChaCha20Rng::from_entropy()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("value is not invertible modulo the given modulus")]
    NotInvertible,
    #[error("modulus must be at least 2")]
    InvalidModulus,
    #[error("empty sampling range: lo must be strictly below hi")]
    EmptyRange,
    #[error("no element of the sampling range is a unit modulo p")]
    Unsatisfiable,
    #[error("prime bit length must be at least 8, got {0}")]
    BitLengthTooSmall(u64),
}

/// An exponent that may be negative before reduction, such as `e2 - 2*e1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedExponent(BigInt);

impl SignedExponent {
    pub fn new(negative: bool, magnitude: Natural) -> Self {
        let sign = if magnitude.is_zero() {
            Sign::NoSign
        } else if negative {
            Sign::Minus
        } else {
            Sign::Plus
        };
        SignedExponent(BigInt::from_biguint(sign, magnitude))
    }

    pub fn positive(magnitude: Natural) -> Self {
        Self::new(false, magnitude)
    }

    /// Integer combination `sum(coeffs[i] * terms[i])`.
    pub fn combination(coeffs: &[i64], terms: &[&Natural]) -> Self {
        assert_eq!(coeffs.len(), terms.len(), "one coefficient per term");
        let value = coeffs
            .iter()
            .zip(terms)
            .fold(BigInt::zero(), |acc, (&c, &t)| {
                acc + BigInt::from(c) * BigInt::from(t.clone())
            });
        SignedExponent(value)
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn magnitude(&self) -> Natural {
        self.0.magnitude().clone()
    }

    pub fn as_bigint(&self) -> &BigInt {
        &self.0
    }
}

impl std::ops::Neg for SignedExponent {
    type Output = SignedExponent;
    fn neg(self) -> SignedExponent {
        SignedExponent(-self.0)
    }
}

impl std::ops::Add for &SignedExponent {
    type Output = SignedExponent;
    fn add(self, rhs: &SignedExponent) -> SignedExponent {
        SignedExponent(&self.0 + &rhs.0)
    }
}

impl From<i64> for SignedExponent {
    fn from(v: i64) -> Self {
        SignedExponent(BigInt::from(v))
    }
}

/// Half-open interval `[lo, hi)` of naturals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingRange {
    lo: Natural,
    hi: Natural,
}

impl SamplingRange {
    pub fn new(lo: Natural, hi: Natural) -> Result<Self, NumericError> {
        if lo >= hi {
            return Err(NumericError::EmptyRange);
        }
        Ok(SamplingRange { lo, hi })
    }

    pub fn lo(&self) -> &Natural {
        &self.lo
    }

    pub fn hi(&self) -> &Natural {
        &self.hi
    }

    /// `hi - lo`, always at least 1.
    pub fn width(&self) -> Natural {
        &self.hi - &self.lo
    }
}

/// Multiplicative inverse of `a` modulo `m`, in `(0, m)`.
pub fn mod_inv(a: &Natural, m: &Natural) -> Result<Natural, NumericError> {
    if *m < Natural::from(2u8) {
        return Err(NumericError::InvalidModulus);
    }
    let a = BigInt::from(a % m);
    let m_int = BigInt::from(m.clone());
    let egcd = a.extended_gcd(&m_int);
    if !egcd.gcd.is_one() {
        return Err(NumericError::NotInvertible);
    }
    let x = egcd.x.mod_floor(&m_int);
    Ok(x.to_biguint().expect("mod_floor of a positive modulus is non-negative"))
}

/// `base^e mod p` for prime `p`, with the exponent reduced modulo `p - 1`.
///
/// Negative exponents go through the inverse of `base`, so a base divisible
/// by `p` is rejected for them. For a positive exponent a zero base yields 0
/// (Fermat reduction only applies to units).
pub fn pow_fp(base: &Natural, e: &SignedExponent, p: &Natural) -> Result<Natural, NumericError> {
    if *p < Natural::from(2u8) {
        return Err(NumericError::InvalidModulus);
    }
    let base = base % p;
    let order = p - 1u32;
    if base.is_zero() {
        return if e.is_negative() {
            Err(NumericError::NotInvertible)
        } else if e.as_bigint().is_zero() {
            Ok(Natural::one() % p)
        } else {
            Ok(Natural::zero())
        };
    }
    let reduced = e.magnitude() % &order;
    if e.is_negative() {
        let inv = mod_inv(&base, p)?;
        Ok(inv.modpow(&reduced, p))
    } else {
        Ok(base.modpow(&reduced, p))
    }
}

/// Uniform draw from `[lo, hi)` by rejection of out-of-range bit strings.
pub fn sample_range<R: RandomSource + ?Sized>(range: &SamplingRange, rng: &mut R) -> Natural {
    let width = range.width();
    if width.is_one() {
        return range.lo.clone();
    }
    let bits = (&width - 1u32).bits();
    loop {
        let candidate = random_bits(bits, rng);
        if candidate < width {
            return &range.lo + candidate;
        }
    }
}

/// Uniform draw from `[0, bound)`.
pub fn sample_below<R: RandomSource + ?Sized>(bound: &Natural, rng: &mut R) -> Natural {
    let range = SamplingRange::new(Natural::zero(), bound.clone()).expect("bound must be positive");
    sample_range(&range, rng)
}

/// Draw from `range` until the value is not divisible by `p`.
pub fn sample_unit<R: RandomSource + ?Sized>(
    p: &Natural,
    range: &SamplingRange,
    rng: &mut R,
) -> Result<Natural, NumericError> {
    if *p < Natural::from(2u8) {
        return Err(NumericError::InvalidModulus);
    }
    // Two consecutive integers are never both multiples of p >= 2.
    if range.width().is_one() && (&range.lo % p).is_zero() {
        return Err(NumericError::Unsatisfiable);
    }
    loop {
        let s = sample_range(range, rng);
        if !(&s % p).is_zero() {
            return Ok(s);
        }
    }
}

/// Uniformly random integer with at most `bits` bits.
fn random_bits<R: RandomSource + ?Sized>(bits: u64, rng: &mut R) -> Natural {
    if bits == 0 {
        return Natural::zero();
    }
    let nbytes = bits.div_ceil(8) as usize;
    let mut bytes = vec![0u8; nbytes];
    rng.fill_bytes(&mut bytes);
    let excess = (nbytes as u64) * 8 - bits;
    bytes[nbytes - 1] &= 0xffu8 >> excess;
    Natural::from_bytes_le(&bytes)
}

/// Odd primes below 2000, used to sieve candidates before Miller-Rabin.
const SIEVE_LIMIT: u32 = 2000;

fn small_primes() -> &'static [u32] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        (3..SIEVE_LIMIT)
            .step_by(2)
            .filter(|&c| (3..).step_by(2).take_while(|d| d * d <= c).all(|d| c % d != 0))
            .collect()
    })
}

/// Fixed witnesses tried before any random ones. Together they decide
/// primality exactly for every n below 3.3 * 10^24.
const FIXED_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin rounds used by [`gen_prime`]; error probability at most 4^-64.
pub const MR_ROUNDS: usize = 64;

/// Miller-Rabin test: the twelve fixed bases, then `random_rounds` random
/// bases drawn from `[2, n - 2]`.
pub fn is_probable_prime<R: RandomSource + ?Sized>(
    n: &Natural,
    random_rounds: usize,
    rng: &mut R,
) -> bool {
    let two = Natural::from(2u8);
    if *n < two {
        return false;
    }
    for &p in FIXED_BASES.iter() {
        let p = Natural::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n - 1 is non-zero here");
    let d = &n_minus_1 >> s;

    let is_witness = |a: &Natural| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return false;
            }
            if x.is_one() {
                return true;
            }
        }
        true
    };

    if FIXED_BASES.iter().any(|&a| is_witness(&Natural::from(a))) {
        return false;
    }
    // n > 37 here, so [2, n - 2] is non-empty
    let base_range = SamplingRange::new(two, n - 1u32).expect("n > 37");
    (0..random_rounds).all(|_| !is_witness(&sample_range(&base_range, rng)))
}

/// Probable prime of exactly `bits` bits (top bit set).
pub fn gen_prime<R: RandomSource + ?Sized>(bits: u64, rng: &mut R) -> Result<Natural, NumericError> {
    gen_prime_with_top_bits(bits, 1, rng)
}

/// Like [`gen_prime`] but with the `top` most significant bits forced, so
/// that a product of two such primes has exactly `2 * bits` bits when
/// `top >= 2`.
pub fn gen_prime_with_top_bits<R: RandomSource + ?Sized>(
    bits: u64,
    top: u64,
    rng: &mut R,
) -> Result<Natural, NumericError> {
    if bits < 8 {
        return Err(NumericError::BitLengthTooSmall(bits));
    }
    assert!(top >= 1 && top < bits, "top-bit count out of range");
    loop {
        let mut candidate = random_bits(bits, rng);
        for i in 0..top {
            candidate.set_bit(bits - 1 - i, true);
        }
        candidate.set_bit(0, true);
        if passes_sieve(&candidate) && is_probable_prime(&candidate, MR_ROUNDS, rng) {
            return Ok(candidate);
        }
    }
}

fn passes_sieve(candidate: &Natural) -> bool {
    small_primes().iter().all(|&sp| {
        let r = candidate % sp;
        !r.is_zero() || *candidate == Natural::from(sp)
    })
}
