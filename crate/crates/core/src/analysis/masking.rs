use super::{chi_square_statistic, AnalysisError, DistributionReport, Verdict};

const MAX_PRIME: u64 = 1 << 16;

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Enumerates `u * k mod p` over all `u` in `Z_p^*` and checks that every
/// unit is hit exactly once.
pub fn masking_uniformity_exhaustive(p: u64, k: u64) -> Result<DistributionReport, AnalysisError> {
    if p > MAX_PRIME || !is_prime(p) {
        return Err(AnalysisError::NotPrime(p));
    }
    if k.is_multiple_of(p) {
        return Err(AnalysisError::NotUnit);
    }
    let k = k % p;
    let mut counts = vec![0u64; p as usize];
    for u in 1..p {
        counts[(u * k % p) as usize] += 1;
    }
    let exact = counts[0] == 0 && counts[1..].iter().all(|&c| c == 1);

    // A zero cell means the image left Z_p^*; fold it into the statistic.
    let observed = &counts[1..];
    let expected = vec![1.0; observed.len()];
    let statistic = chi_square_statistic(observed, &expected) + counts[0] as f64;
    let dof = p - 2;
    let mut report = DistributionReport::from_chi_square("masking_uniformity", p - 1, statistic, dof);
    if !exact {
        report.verdict = Verdict::Distinguishable;
    }
    report.exact_match = Some(exact);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = masking_uniformity_exhaustive(11, 3).unwrap();
        assert_eq!(r.exact_match, Some(true));
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.verdict, Verdict::ConsistentWithUniform);
        assert_eq!(masking_uniformity_exhaustive(101, 1).unwrap().exact_match, Some(true));
        for k in [2, 3, 100, 256] {
            assert_eq!(masking_uniformity_exhaustive(257, k).unwrap().exact_match, Some(true));
        }
        assert_eq!(masking_uniformity_exhaustive(2, 1).unwrap().p_value, 1.0);
    }

    #[test]
    fn rejects_non_units_and_non_primes() {
        assert_eq!(masking_uniformity_exhaustive(11, 22), Err(AnalysisError::NotUnit));
        assert_eq!(masking_uniformity_exhaustive(12, 5), Err(AnalysisError::NotPrime(12)));
        assert_eq!(masking_uniformity_exhaustive(70001, 5), Err(AnalysisError::NotPrime(70001)));
    }
}
