//! Symmetric homomorphic encryption over a hidden-modulus composite.
//!
//! A plaintext `m` in `Z_p` is split into three additive fragments, each
//! masked by its own position key and a multiple of the secret prime `p`
//! inside `Z_n` with `n = p*q`. Addition is componentwise. Multiplication
//! routes every fragment product to a third position through public
//! exponent and coefficient regulators, so ciphertexts never grow and
//! decryption is exact at any depth.
//!
//! ```
//! use fragfhe::numeric::seeded_rng;
//! use fragfhe::scheme::{decrypt, encrypt, keygen, Params};
//! use fragfhe::homomorphic::{h_add, h_mul};
//!
//! let params = Params::toy(16, 10007u32.into(), 10009u32.into()).unwrap();
//! let mut rng = seeded_rng(1);
//! let (sk, ek) = keygen(&params, &mut rng).unwrap();
//! let a = encrypt(&sk, &params, &6u32.into(), &mut rng).unwrap();
//! let b = encrypt(&sk, &params, &7u32.into(), &mut rng).unwrap();
//! assert_eq!(decrypt(&sk, &h_mul(&a, &b, &ek).unwrap()), 42u32.into());
//! assert_eq!(decrypt(&sk, &h_add(&a, &b, params.n()).unwrap()), 13u32.into());
//! ```

pub mod analysis;
pub mod circuit;
pub mod homomorphic;
pub mod numeric;
pub mod scheme;

pub use numeric::Natural;
