//! Empirical counterparts of the scheme's security and correctness claims.
//!
//! The distribution tests here check implementation-level distribution shape.
//! Passing them is necessary for the hardness assumptions to hold, never
//! sufficient: no desk-scale experiment establishes computational hardness.

mod cca;
mod forgery;
mod hidden_modulus;
mod identities;
mod kpa;
mod masking;
mod noise;

use std::fmt;

use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::homomorphic::EvalError;
use crate::scheme::SchemeError;

pub use cca::{cca_malleability_demo, cca_malleability_round, CcaReport, CcaRound, DecryptionOracle};
pub use forgery::{dual_binding_forgery_trial, ForgeryReport, TamperStrategy};
pub use hidden_modulus::{hidden_modulus_chisq, uniform_control_chisq, HIDDEN_MODULUS_BINS, MAX_HIDDEN_MODULUS_BITS};
pub use identities::{check_product_identities, regulator_scalar_identities, ProductIdentity};
pub use kpa::{kpa_underdetermination, KpaReport};
pub use masking::masking_uniformity_exhaustive;
pub use noise::{noise_vanishing_check, NoiseWitness, TracedCiphertext};

/// Below this p-value a sample is declared distinguishable from uniform.
pub const DISTINGUISHING_THRESHOLD: f64 = 0.001;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("multiplier is not a unit modulo p")]
    NotUnit,
    #[error("{0} is not a supported prime for this test")]
    NotPrime(u64),
    #[error("parameters too large for a bucketed test: n has {bits} bits, limit {limit}")]
    ParamsTooLarge { bits: u64, limit: u64 },
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: u64, got: u64 },
    #[error("operation needs generation witnesses that are not available")]
    MissingWitness,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ConsistentWithUniform,
    Distinguishable,
}

impl Verdict {
    pub fn from_p_value(p_value: f64) -> Verdict {
        if p_value < DISTINGUISHING_THRESHOLD {
            Verdict::Distinguishable
        } else {
            Verdict::ConsistentWithUniform
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ConsistentWithUniform => "consistent-with-uniform",
            Verdict::Distinguishable => "distinguishable",
        }
    }
}

/// Outcome of a goodness-of-fit test against a uniform distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionReport {
    pub test_name: String,
    pub sample_count: u64,
    pub statistic: f64,
    pub degrees_of_freedom: u64,
    pub p_value: f64,
    pub verdict: Verdict,
    /// Set by exhaustive tests: whether the observed multiset matched exactly.
    pub exact_match: Option<bool>,
}

impl DistributionReport {
    fn from_chi_square(test_name: &str, sample_count: u64, statistic: f64, dof: u64) -> DistributionReport {
        let p_value = chi_square_p_value(statistic, dof);
        DistributionReport {
            test_name: test_name.to_string(),
            sample_count,
            statistic,
            degrees_of_freedom: dof,
            p_value,
            verdict: Verdict::from_p_value(p_value),
            exact_match: None,
        }
    }
}

/// Upper-tail probability of the chi-square distribution.
pub fn chi_square_p_value(statistic: f64, dof: u64) -> f64 {
    if dof == 0 {
        return if statistic == 0.0 { 1.0 } else { 0.0 };
    }
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    dist.sf(statistic).clamp(0.0, 1.0)
}

/// Pearson statistic for observed counts against expected counts.
pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .filter(|(_, &e)| e > 0.0)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

/// Reports print as text and as `name=value` lines.
pub trait Report {
    /// Prefix for every key in the machine-readable form.
    fn name(&self) -> &str;
    fn fields(&self) -> Vec<(&'static str, String)>;

    fn to_key_values(&self) -> String {
        self.fields()
            .into_iter()
            .map(|(k, v)| format!("{}.{}={}\n", self.name(), k, v))
            .collect()
    }
}

impl Report for DistributionReport {
    fn name(&self) -> &str {
        &self.test_name
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        let mut fields = vec![
            ("sample_count", self.sample_count.to_string()),
            ("statistic", format!("{:.6}", self.statistic)),
            ("degrees_of_freedom", self.degrees_of_freedom.to_string()),
            ("p_value", format!("{:.6}", self.p_value)),
            ("verdict", self.verdict.as_str().to_string()),
        ];
        if let Some(exact) = self.exact_match {
            fields.push(("exact_match", exact.to_string()));
        }
        fields
    }
}

impl fmt::Display for DistributionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} samples, chi2 = {:.3} on {} dof, p = {:.4} -> {}",
            self.test_name,
            self.sample_count,
            self.statistic,
            self.degrees_of_freedom,
            self.p_value,
            self.verdict.as_str()
        )?;
        if let Some(exact) = self.exact_match {
            write!(f, " (exact multiset match: {exact})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_threshold() {
        assert_eq!(Verdict::from_p_value(0.0009), Verdict::Distinguishable);
        assert_eq!(Verdict::from_p_value(0.001), Verdict::ConsistentWithUniform);
    }

    #[test]
    fn p_value_reference_points() {
        // chi2 with 1 dof: P(X > 3.841459) = 0.05
        assert!((chi_square_p_value(3.841459, 1) - 0.05).abs() < 1e-6);
        // 63 dof: median is about 62.33
        assert!((chi_square_p_value(62.335, 63) - 0.5).abs() < 1e-3);
        assert_eq!(chi_square_p_value(0.0, 0), 1.0);
    }

    #[test]
    fn key_value_rendering() {
        let r = DistributionReport::from_chi_square("demo", 10, 0.0, 3);
        let kv = r.to_key_values();
        assert!(kv.starts_with("demo.sample_count=10\n"));
        assert!(kv.contains("demo.verdict=consistent-with-uniform\n"));
        assert!(kv.lines().all(|l| l.matches('=').count() == 1));
    }
}
