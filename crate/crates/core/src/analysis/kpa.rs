use std::fmt;

use num_traits::Zero;

use super::{AnalysisError, Report, TracedCiphertext};
use crate::numeric::{mod_inv, sample_below, Natural, RandomSource};
use crate::scheme::{Params, SecretKey};

/// Size of the attacker's linear system for recovering fragments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KpaReport {
    pub ciphertexts: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    /// `unknowns - rank`: the solution set has `p^dimension` elements.
    pub solution_dimension: usize,
    /// Distinct fragment assignments `(m1, m2)` per ciphertext that satisfy
    /// every equation.
    pub consistent_assignments: Vec<Vec<(Natural, Natural)>>,
}

/// Known-plaintext fragment recovery: the attacker holds `L` encryptions of
/// known messages and, as a strengthening, the third fragment of each. The
/// sum constraint then leaves one equation `m1 + m2 = m - m3 (mod p)` in two
/// unknowns per ciphertext.
pub fn kpa_underdetermination<R: RandomSource + ?Sized>(
    ciphertexts: usize,
    sk: &SecretKey,
    params: &Params,
    rng: &mut R,
) -> Result<KpaReport, AnalysisError> {
    let p = params.p();
    let mut truth = Vec::with_capacity(ciphertexts);
    let mut rhs = Vec::with_capacity(ciphertexts);
    for _ in 0..ciphertexts {
        let m = sample_below(p, rng);
        let traced = TracedCiphertext::encrypt(sk, params, &m, rng)?;
        let [m1, m2, m3] = traced.witness.fragments.0;
        rhs.push((&m + p - &m3 % p) % p);
        truth.push((m1, m2));
    }

    let unknowns = 2 * ciphertexts;
    let matrix: Vec<Vec<Natural>> = (0..ciphertexts)
        .map(|row| {
            let mut r = vec![Natural::zero(); unknowns];
            r[2 * row] = 1u32.into();
            r[2 * row + 1] = 1u32.into();
            r
        })
        .collect();
    let rank = rank_mod_p(matrix.clone(), p);

    // A kernel direction (+1, -1) on each pair gives a second solution.
    let shifted: Vec<(Natural, Natural)> = truth
        .iter()
        .map(|(m1, m2)| ((m1 + 1u32) % p, (m2 + p - 1u32) % p))
        .collect();
    let satisfies = |assignment: &[(Natural, Natural)]| {
        matrix.iter().zip(&rhs).all(|(row, b)| {
            let lhs = assignment
                .iter()
                .enumerate()
                .fold(Natural::zero(), |acc, (k, (x, y))| acc + &row[2 * k] * x + &row[2 * k + 1] * y);
            lhs % p == *b
        })
    };
    let mut consistent_assignments = Vec::new();
    for candidate in [truth, shifted] {
        if satisfies(&candidate) && !consistent_assignments.contains(&candidate) {
            consistent_assignments.push(candidate);
        }
    }

    Ok(KpaReport {
        ciphertexts,
        unknowns,
        equations: ciphertexts,
        rank,
        solution_dimension: unknowns - rank,
        consistent_assignments,
    })
}

/// Row rank over `Z_p` by Gaussian elimination.
fn rank_mod_p(mut rows: Vec<Vec<Natural>>, p: &Natural) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !(&rows[r][col] % p).is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = mod_inv(&rows[rank][col], p).expect("p prime and pivot non-zero");
        let pivot_row: Vec<Natural> = rows[rank].iter().map(|v| v * &inv % p).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || (&row[col] % p).is_zero() {
                continue;
            }
            let factor = &row[col] % p;
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = (&*v % p + p * p - &factor * pv % p) % p;
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

impl Report for KpaReport {
    fn name(&self) -> &str {
        "kpa_underdetermination"
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("ciphertexts", self.ciphertexts.to_string()),
            ("unknowns", self.unknowns.to_string()),
            ("equations", self.equations.to_string()),
            ("rank", self.rank.to_string()),
            ("solution_dimension", self.solution_dimension.to_string()),
            ("consistent_assignments", self.consistent_assignments.len().to_string()),
        ]
    }
}

impl fmt::Display for KpaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kpa_underdetermination: {} ciphertexts -> {} unknowns, {} equations (rank {}), solution space p^{}, {} consistent assignments exhibited",
            self.ciphertexts,
            self.unknowns,
            self.equations,
            self.rank,
            self.solution_dimension,
            self.consistent_assignments.len()
        )
    }
}
