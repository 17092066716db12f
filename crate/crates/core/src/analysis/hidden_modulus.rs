use num_traits::One;

use super::{chi_square_statistic, AnalysisError, DistributionReport};
use crate::numeric::{sample_range, Natural, RandomSource, SamplingRange};
use crate::scheme::Params;

/// Equal-width buckets over `[0, n)`.
pub const HIDDEN_MODULUS_BINS: u64 = 64;

/// Largest modulus (`n <= 2^20`) for which buckets are meaningful.
pub const MAX_HIDDEN_MODULUS_BITS: u64 = 20;

const MIN_SAMPLES_PER_BIN: u64 = 50;

fn check_inputs(n: &Natural, samples: u64) -> Result<u64, AnalysisError> {
    if *n > Natural::one() << MAX_HIDDEN_MODULUS_BITS {
        return Err(AnalysisError::ParamsTooLarge { bits: n.bits(), limit: MAX_HIDDEN_MODULUS_BITS });
    }
    let needed = MIN_SAMPLES_PER_BIN * HIDDEN_MODULUS_BINS;
    if samples < needed {
        return Err(AnalysisError::InsufficientSamples { needed, got: samples });
    }
    Ok(u64::try_from(n).expect("n fits in 21 bits"))
}

/// Bucket `j` covers `[ceil(j*n/B), ceil((j+1)*n/B))`, i.e. all `c` with
/// `floor(c*B/n) = j`.
fn bucket_sizes(n: u64) -> Vec<f64> {
    let bins = HIDDEN_MODULUS_BINS;
    let start = |j: u64| (j * n).div_ceil(bins);
    (0..bins).map(|j| (start(j + 1) - start(j)) as f64).collect()
}

fn bucketed_report(name: &str, n: u64, samples: u64, mut draw: impl FnMut() -> u64) -> DistributionReport {
    let mut counts = vec![0u64; HIDDEN_MODULUS_BINS as usize];
    for _ in 0..samples {
        let c = draw();
        debug_assert!(c < n);
        counts[(c * HIDDEN_MODULUS_BINS / n) as usize] += 1;
    }
    let expected: Vec<f64> = bucket_sizes(n).iter().map(|s| s * samples as f64 / n as f64).collect();
    let statistic = chi_square_statistic(&counts, &expected);
    DistributionReport::from_chi_square(name, samples, statistic, HIDDEN_MODULUS_BINS - 1)
}

/// Buckets `c = x + r*p mod n` with `x` uniform in `Z_p^*` and `r` uniform
/// in `[r1, r2)`, then tests the bucket counts against uniform on `Z_n`.
pub fn hidden_modulus_chisq<R: RandomSource + ?Sized>(
    params: &Params,
    samples: u64,
    rng: &mut R,
) -> Result<DistributionReport, AnalysisError> {
    let n = check_inputs(params.n(), samples)?;
    let p = params.p();
    let units = SamplingRange::new(Natural::one(), p.clone()).expect("p >= 3");
    let noise = params.range();
    let nn = params.n();
    Ok(bucketed_report("hidden_modulus", n, samples, || {
        let x = sample_range(&units, rng);
        let r = sample_range(&noise, rng);
        let c = (x + r * p) % nn;
        u64::try_from(c).expect("reduced mod n")
    }))
}

/// Null-hypothesis control: the same bucketing applied to true uniform
/// draws from `Z_n`.
pub fn uniform_control_chisq<R: RandomSource + ?Sized>(
    n: &Natural,
    samples: u64,
    rng: &mut R,
) -> Result<DistributionReport, AnalysisError> {
    let n64 = check_inputs(n, samples)?;
    let all = SamplingRange::new(Natural::from(0u8), n.clone()).map_err(|_| AnalysisError::InvalidInput("n must be positive".into()))?;
    Ok(bucketed_report("uniform_control", n64, samples, || {
        u64::try_from(sample_range(&all, rng)).expect("below n")
    }))
}
