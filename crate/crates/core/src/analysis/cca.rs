use std::fmt;

use rand::Rng;

use super::{AnalysisError, Report};
use crate::homomorphic::h_add;
use crate::numeric::{Natural, RandomSource};
use crate::scheme::{decrypt, encrypt, Ciphertext, EvaluationKey, Params, SecretKey};

/// Decrypts anything except the challenge ciphertext.
pub struct DecryptionOracle<'a> {
    sk: &'a SecretKey,
    forbidden: Ciphertext,
}

impl<'a> DecryptionOracle<'a> {
    pub fn new(sk: &'a SecretKey, challenge: Ciphertext) -> Self {
        DecryptionOracle { sk, forbidden: challenge }
    }

    pub fn query(&self, ct: &Ciphertext) -> Option<Natural> {
        if *ct == self.forbidden {
            None
        } else {
            Some(decrypt(self.sk, ct))
        }
    }
}

/// One run of the malleability attack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcaRound {
    pub hidden_bit: bool,
    pub recovered_bit: bool,
    /// Every component of the mauled ciphertext differs from the challenge.
    pub mauled_differs: bool,
    /// What the decryption oracle returned for the mauled ciphertext.
    pub oracle_plaintext: Option<Natural>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcaReport {
    pub trials: u64,
    pub successes: u64,
    pub mauled_distinct: u64,
}

/// Challenger encrypts `m_b`; the adversary adds a fresh encryption of zero,
/// asks the oracle to decrypt the result and reads off `b`.
pub fn cca_malleability_round<R: RandomSource + ?Sized>(
    sk: &SecretKey,
    ek: &EvaluationKey,
    params: &Params,
    m0: &Natural,
    m1: &Natural,
    rng: &mut R,
) -> Result<CcaRound, AnalysisError> {
    if m0 == m1 {
        return Err(AnalysisError::InvalidInput("challenge messages must differ".into()));
    }
    let hidden_bit: bool = rng.gen();
    let challenge = encrypt(sk, params, if hidden_bit { m1 } else { m0 }, rng)?;
    let oracle = DecryptionOracle::new(sk, challenge.clone());

    // Adversary side: only public n and the encryption oracle.
    let zero = encrypt(sk, params, &Natural::from(0u8), rng)?;
    let mauled = h_add(&challenge, &zero, ek.n())?;
    let mauled_differs = (0..3).all(|i| mauled.components()[i] != challenge.components()[i]);
    let oracle_plaintext = oracle.query(&mauled);
    let recovered_bit = oracle_plaintext.as_ref() == Some(m1);

    Ok(CcaRound { hidden_bit, recovered_bit, mauled_differs, oracle_plaintext })
}

pub fn cca_malleability_demo<R: RandomSource + ?Sized>(
    sk: &SecretKey,
    ek: &EvaluationKey,
    params: &Params,
    m0: &Natural,
    m1: &Natural,
    trials: u64,
    rng: &mut R,
) -> Result<CcaReport, AnalysisError> {
    let mut report = CcaReport { trials, successes: 0, mauled_distinct: 0 };
    for _ in 0..trials {
        let round = cca_malleability_round(sk, ek, params, m0, m1, rng)?;
        report.successes += u64::from(round.recovered_bit == round.hidden_bit);
        report.mauled_distinct += u64::from(round.mauled_differs);
    }
    Ok(report)
}

impl Report for CcaReport {
    fn name(&self) -> &str {
        "cca_malleability"
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("trials", self.trials.to_string()),
            ("successes", self.successes.to_string()),
            ("mauled_distinct", self.mauled_distinct.to_string()),
        ]
    }
}

impl fmt::Display for CcaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cca_malleability: recovered the hidden bit in {}/{} trials ({} mauled ciphertexts differed in every component)",
            self.successes, self.trials, self.mauled_distinct
        )
    }
}
