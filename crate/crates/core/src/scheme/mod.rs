//! Parameter setup, key generation, fragmentation, encryption and decryption.

mod cipher;
mod keys;
mod params;

use thiserror::Error;

use crate::numeric::NumericError;

pub use cipher::{
    decrypt, decrypt_fragments, encrypt, encrypt_traced, fragment, fragment_in_range, Ciphertext, EncryptionTrace,
    FragmentMode, Fragments,
};
pub use keys::{keygen, EvaluationKey, KeyWitnesses, SecretKey, REGULATOR_EXPONENTS};
pub use params::{production_modulus_bits, setup, Params, Profile, PublicParams, SetupRequest};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("invalid parameters: {0}")]
    InvalidProfile(String),
    #[error("message must be smaller than p")]
    MessageOutOfRange,
    #[error("ciphertext component not reduced modulo n")]
    ComponentOutOfRange,
    #[error("inconsistent key material: {0}")]
    InconsistentKey(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
