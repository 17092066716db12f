use std::fmt;

use rand::Rng;

use super::{AnalysisError, Report};
use crate::homomorphic::{h_mul, RULES};
use crate::numeric::{sample_below, Natural, RandomSource};
use crate::scheme::{decrypt, encrypt, EvaluationKey, Params, SecretKey};

/// Which regulator pair a forgery trial replaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TamperStrategy {
    /// Genuine key; every trial should succeed.
    None,
    /// Replace `t_i` (1..=6) together with the `d` of its target position.
    Rule(usize),
    /// A fresh uniformly chosen rule per trial.
    RandomRule,
}

impl fmt::Display for TamperStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TamperStrategy::None => write!(f, "untampered"),
            TamperStrategy::Rule(i) => write!(f, "random (t{i}*, d*) for rule {i}"),
            TamperStrategy::RandomRule => write!(f, "random (t*, d*) on a random rule"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForgeryReport {
    pub trials: u64,
    pub successes: u64,
    pub strategy: String,
    /// `trials / p` for tampered strategies, `trials` for the control.
    pub expected_successes: f64,
    /// Binomial standard deviation around `expected_successes`.
    pub sigma: f64,
}

impl ForgeryReport {
    /// Successes sit no more than `k` standard deviations above expectation.
    pub fn within_sigma(&self, k: f64) -> bool {
        self.successes as f64 <= self.expected_successes + k * self.sigma
    }
}

/// Replaces a regulator pair with random values and counts how often
/// `h_mul` still decrypts to `m * m'` on random plaintexts.
pub fn dual_binding_forgery_trial<R: RandomSource + ?Sized>(
    sk: &SecretKey,
    ek: &EvaluationKey,
    params: &Params,
    trials: u64,
    strategy: TamperStrategy,
    rng: &mut R,
) -> Result<ForgeryReport, AnalysisError> {
    if let TamperStrategy::Rule(i) = strategy {
        if !(1..=6).contains(&i) {
            return Err(AnalysisError::InvalidInput(format!("rule index {i} not in 1..=6")));
        }
    }
    let p = params.p();
    let n = params.n();
    let mut successes = 0;
    for _ in 0..trials {
        let key = match strategy {
            TamperStrategy::None => ek.clone(),
            TamperStrategy::Rule(i) => tamper(ek, i, p, n, rng),
            TamperStrategy::RandomRule => {
                let i = rng.gen_range(1..=6);
                tamper(ek, i, p, n, rng)
            }
        };
        let m = sample_below(p, rng);
        let m2 = sample_below(p, rng);
        let a = encrypt(sk, params, &m, rng)?;
        let b = encrypt(sk, params, &m2, rng)?;
        let prod = h_mul(&a, &b, &key)?;
        successes += u64::from(decrypt(sk, &prod) == &m * &m2 % p);
    }

    let (expected_successes, sigma) = match strategy {
        TamperStrategy::None => (trials as f64, 0.0),
        _ => {
            let rate = 1.0 / p.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
            (trials as f64 * rate, (trials as f64 * rate * (1.0 - rate)).sqrt())
        }
    };
    Ok(ForgeryReport { trials, successes, strategy: strategy.to_string(), expected_successes, sigma })
}

fn tamper<R: RandomSource + ?Sized>(ek: &EvaluationKey, t_index: usize, p: &Natural, n: &Natural, rng: &mut R) -> EvaluationKey {
    let d_index = RULES.iter().find(|r| r.t_index == t_index).expect("every t belongs to a rule").d_index;
    let (t, d) = (&ek.t()[t_index - 1], &ek.d()[d_index - 1]);
    loop {
        let t_star = sample_below(n, rng);
        let d_star = sample_below(p, rng);
        if (&t_star, &d_star) != (t, d) {
            return ek.with_t(t_index, t_star).with_d(d_index, d_star);
        }
    }
}

impl Report for ForgeryReport {
    fn name(&self) -> &str {
        "dual_binding_forgery"
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("trials", self.trials.to_string()),
            ("successes", self.successes.to_string()),
            ("strategy", self.strategy.clone()),
            ("expected_successes", format!("{:.4}", self.expected_successes)),
            ("sigma", format!("{:.4}", self.sigma)),
        ]
    }
}

impl fmt::Display for ForgeryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dual_binding_forgery [{}]: {}/{} products decrypted correctly (expected {:.2}, sigma {:.2})",
            self.strategy, self.successes, self.trials, self.expected_successes, self.sigma
        )
    }
}
