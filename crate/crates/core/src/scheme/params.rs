use std::sync::Arc;

use num_traits::One;

use super::SchemeError;
use crate::numeric::{gen_prime_with_top_bits, is_probable_prime, seeded_rng, Natural, RandomSource, SamplingRange};

/// Which set of validation rules a [`Params`] value was built under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Profile {
    /// Factoring-hard modulus sized from the security level.
    Production,
    /// Caller-supplied small primes; size checks are relaxed.
    Toy,
}

/// What [`setup`] should produce.
#[derive(Debug, Clone)]
pub enum SetupRequest {
    Production,
    Toy { p: Natural, q: Natural },
}

/// Modulus bit length for each supported production security level.
pub fn production_modulus_bits(lambda: u32) -> Option<u64> {
    match lambda {
        80 => Some(1024),
        128 => Some(3072),
        _ => None,
    }
}

/// Public system parameters together with the factorization of `n`.
///
/// `p` is secret material; only [`PublicParams`] is meant to leave the
/// key holder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    lambda: u32,
    profile: Profile,
    p: Natural,
    q: Natural,
    n: Arc<Natural>,
    r1: Natural,
    r2: Natural,
}

/// The publishable part of [`Params`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicParams {
    pub lambda: u32,
    pub profile: Profile,
    pub n: Natural,
    pub r1: Natural,
    pub r2: Natural,
}

/// Generates parameters for `lambda` under the requested profile.
pub fn setup<R: RandomSource + ?Sized>(
    lambda: u32,
    request: SetupRequest,
    rng: &mut R,
) -> Result<Params, SchemeError> {
    match request {
        SetupRequest::Production => Params::production(lambda, rng),
        SetupRequest::Toy { p, q } => Params::toy(lambda, p, q),
    }
}

impl Params {
    /// Fresh primes with `bit_length(n)` given by [`production_modulus_bits`]
    /// and sampling range `[2^lambda, 2^(lambda+1))`.
    pub fn production<R: RandomSource + ?Sized>(lambda: u32, rng: &mut R) -> Result<Params, SchemeError> {
        let n_bits = production_modulus_bits(lambda)
            .ok_or_else(|| SchemeError::InvalidProfile(format!("unsupported production lambda {lambda}")))?;
        let half = n_bits / 2;
        let p = gen_prime_with_top_bits(half, 2, rng)?;
        let q = loop {
            let q = gen_prime_with_top_bits(half, 2, rng)?;
            if q != p {
                break q;
            }
        };
        let (r1, r2) = default_range(lambda);
        Params::from_parts(lambda, Profile::Production, p, q, r1, r2)
    }

    /// Toy parameters with the default range `[2^lambda, 2^(lambda+1))`.
    pub fn toy(lambda: u32, p: Natural, q: Natural) -> Result<Params, SchemeError> {
        let (r1, r2) = default_range(lambda);
        Params::from_parts(lambda, Profile::Toy, p, q, r1, r2)
    }

    /// Toy parameters with an explicit sampling range.
    pub fn toy_with_range(lambda: u32, p: Natural, q: Natural, r1: Natural, r2: Natural) -> Result<Params, SchemeError> {
        Params::from_parts(lambda, Profile::Toy, p, q, r1, r2)
    }

    /// Rebuilds full parameters from the public half and the secret prime.
    pub fn from_public(public: &PublicParams, p: Natural) -> Result<Params, SchemeError> {
        if p < Natural::from(2u8) || &public.n % &p != Natural::from(0u8) {
            return Err(SchemeError::InvalidProfile("secret prime does not divide n".into()));
        }
        let q = &public.n / &p;
        Params::from_parts(public.lambda, public.profile, p, q, public.r1.clone(), public.r2.clone())
    }

    /// Validates every invariant for `profile`.
    pub fn from_parts(
        lambda: u32,
        profile: Profile,
        p: Natural,
        q: Natural,
        r1: Natural,
        r2: Natural,
    ) -> Result<Params, SchemeError> {
        let invalid = |msg: String| Err(SchemeError::InvalidProfile(msg));
        if r1 >= r2 {
            return invalid("sampling range requires r1 < r2".into());
        }
        if p == q {
            return invalid("p and q must be distinct".into());
        }
        // Fixed-seed generator: validation must not consume caller randomness.
        let mut rng = seeded_rng(0x5eed);
        for (name, v) in [("p", &p), ("q", &q)] {
            if *v < Natural::from(3u8) || !is_probable_prime(v, 16, &mut rng) {
                return invalid(format!("{name} is not an odd prime"));
            }
        }
        let n = &p * &q;
        match profile {
            Profile::Production => {
                let Some(n_bits) = production_modulus_bits(lambda) else {
                    return invalid(format!("unsupported production lambda {lambda}"));
                };
                if n.bits() != n_bits || p.bits() != n_bits / 2 || q.bits() != n_bits / 2 {
                    return invalid(format!("production lambda {lambda} needs a {n_bits}-bit n of two equal-size primes"));
                }
                if &r2 - &r1 < Natural::one() << lambda {
                    return invalid(format!("sampling range narrower than 2^{lambda}"));
                }
            }
            Profile::Toy => {
                if lambda < 8 {
                    return invalid(format!("toy lambda must be at least 8, got {lambda}"));
                }
            }
        }
        Ok(Params { lambda, profile, p, q, n: Arc::new(n), r1, r2 })
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn p(&self) -> &Natural {
        &self.p
    }

    pub fn q(&self) -> &Natural {
        &self.q
    }

    pub fn n(&self) -> &Natural {
        &self.n
    }

    pub(crate) fn n_shared(&self) -> Arc<Natural> {
        Arc::clone(&self.n)
    }

    pub fn r1(&self) -> &Natural {
        &self.r1
    }

    pub fn r2(&self) -> &Natural {
        &self.r2
    }

    pub fn range(&self) -> SamplingRange {
        SamplingRange::new(self.r1.clone(), self.r2.clone()).expect("validated at construction")
    }

    pub fn public(&self) -> PublicParams {
        PublicParams {
            lambda: self.lambda,
            profile: self.profile,
            n: (*self.n).clone(),
            r1: self.r1.clone(),
            r2: self.r2.clone(),
        }
    }
}

fn default_range(lambda: u32) -> (Natural, Natural) {
    (Natural::one() << lambda, Natural::one() << (lambda + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_modulus_is_product() {
        let params = Params::toy(16, 11u32.into(), 13u32.into()).unwrap();
        assert_eq!(*params.n(), Natural::from(143u32));
        assert_eq!(params.profile(), Profile::Toy);
        assert_eq!(*params.r1(), Natural::from(1u32 << 16));
        assert_eq!(*params.r2(), Natural::from(1u32 << 17));
    }

    #[test]
    fn toy_rejects_equal_or_composite_primes() {
        assert!(matches!(Params::toy(16, 11u32.into(), 11u32.into()), Err(SchemeError::InvalidProfile(_))));
        assert!(matches!(Params::toy(16, 15u32.into(), 11u32.into()), Err(SchemeError::InvalidProfile(_))));
        assert!(matches!(Params::toy(4, 11u32.into(), 13u32.into()), Err(SchemeError::InvalidProfile(_))));
    }

    #[test]
    fn production_rejects_unsupported_lambda() {
        let mut rng = seeded_rng(1);
        assert!(matches!(Params::production(100, &mut rng), Err(SchemeError::InvalidProfile(_))));
    }

    #[test]
    fn production_80_bit_sizes() {
        let mut rng = seeded_rng(2);
        let params = setup(80, SetupRequest::Production, &mut rng).unwrap();
        assert_eq!(params.n().bits(), 1024);
        assert_eq!(params.r2() - params.r1(), Natural::one() << 80u32);
    }

    #[test]
    fn public_roundtrip_recovers_params() {
        let params = Params::toy(16, 10007u32.into(), 10009u32.into()).unwrap();
        let back = Params::from_public(&params.public(), params.p().clone()).unwrap();
        assert_eq!(back, params);
        assert!(Params::from_public(&params.public(), 7u32.into()).is_err());
    }
}
