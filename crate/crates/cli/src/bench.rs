//! Timing runner for the five scheme operations.

use std::fmt;
use std::hint::black_box;
use std::time::Instant;

use fragfhe::homomorphic::{h_add, h_mul};
use fragfhe::numeric::{sample_below, RandomSource};
use fragfhe::scheme::{decrypt, encrypt, keygen, Params, SchemeError};

use crate::format::{ciphertext_payload_bytes, FileFormat};

pub const MIN_ITERATIONS: usize = 30;
const WARMUP_ITERATIONS: usize = 3;

/// Ciphertext size quoted alongside the reference timings, in kilobytes.
pub const REFERENCE_CIPHERTEXT_KB: f64 = 9.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    KeyGen,
    Enc,
    Dec,
    Add,
    Mul,
}

impl Operation {
    pub const ALL: [Operation; 5] = [Operation::KeyGen, Operation::Enc, Operation::Dec, Operation::Add, Operation::Mul];

    /// Published timings at a 3072-bit modulus, in milliseconds.
    pub fn reference_ms(self) -> f64 {
        match self {
            Operation::KeyGen => 20.3,
            Operation::Enc => 0.02,
            Operation::Dec => 0.051,
            Operation::Add => 0.002,
            Operation::Mul => 0.22,
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operation::KeyGen => "KeyGen",
            Operation::Enc => "Enc",
            Operation::Dec => "Dec",
            Operation::Add => "Add",
            Operation::Mul => "Mul",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub operation: Operation,
    pub mean_ms: f64,
    pub stddev_ms: f64,
    pub iterations: usize,
    /// Binary payload of one ciphertext.
    pub ciphertext_bytes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable {
    pub modulus_bits: u64,
    pub rows: Vec<BenchRow>,
    /// Length of the canonical text encoding of one ciphertext.
    pub ciphertext_file_bytes: usize,
}

impl BenchTable {
    pub fn row(&self, op: Operation) -> &BenchRow {
        self.rows.iter().find(|r| r.operation == op).expect("every operation is benchmarked")
    }

    /// `name=value` lines, prefixed `bench.`.
    pub fn to_key_values(&self) -> String {
        let mut out = format!("bench.modulus_bits={}\n", self.modulus_bits);
        for r in &self.rows {
            let op = r.operation.to_string().to_lowercase();
            out.push_str(&format!("bench.{op}.mean_ms={:.6}\n", r.mean_ms));
            out.push_str(&format!("bench.{op}.stddev_ms={:.6}\n", r.stddev_ms));
            out.push_str(&format!("bench.{op}.iterations={}\n", r.iterations));
            out.push_str(&format!("bench.{op}.reference_ms={}\n", r.operation.reference_ms()));
        }
        let payload = self.rows.first().map_or(0, |r| r.ciphertext_bytes);
        out.push_str(&format!("bench.ciphertext_bytes={payload}\n"));
        out.push_str(&format!("bench.ciphertext_file_bytes={}\n", self.ciphertext_file_bytes));
        out.push_str(&format!("bench.reference_ciphertext_kb={REFERENCE_CIPHERTEXT_KB}\n"));
        out
    }
}

impl fmt::Display for BenchTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {} bits", self.modulus_bits)?;
        writeln!(f, "{:<8} {:>12} {:>12} {:>6} {:>14}", "op", "mean_ms", "stddev_ms", "iters", "reference_ms")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<8} {:>12.4} {:>12.4} {:>6} {:>14}",
                r.operation.to_string(),
                r.mean_ms,
                r.stddev_ms,
                r.iterations,
                r.operation.reference_ms()
            )?;
        }
        let payload = self.rows.first().map_or(0, |r| r.ciphertext_bytes);
        writeln!(f, "ciphertext: {payload} payload bytes, {} bytes as a text file", self.ciphertext_file_bytes)?;
        write!(
            f,
            "note: the reference ciphertext size is {REFERENCE_CIPHERTEXT_KB} KB; three {}-bit residues occupy {:.2} KB",
            self.modulus_bits,
            payload as f64 / 1024.0
        )
    }
}

fn summarize(samples: &[f64]) -> (f64, f64) {
    let len = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / len;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (len - 1.0).max(1.0);
    (mean, var.sqrt())
}

fn time_op<T>(iterations: usize, mut setup: impl FnMut() -> Result<T, SchemeError>, mut op: impl FnMut(T) -> Result<(), SchemeError>) -> Result<Vec<f64>, SchemeError> {
    let mut samples = Vec::with_capacity(iterations);
    for i in 0..WARMUP_ITERATIONS + iterations {
        let input = setup()?;
        let start = Instant::now();
        op(input)?;
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        if i >= WARMUP_ITERATIONS {
            samples.push(elapsed);
        }
    }
    Ok(samples)
}

/// Times each operation on fresh random messages. `iterations` is raised to
/// at least [`MIN_ITERATIONS`].
pub fn bench_run<R: RandomSource + ?Sized>(params: &Params, iterations: usize, rng: &mut R) -> Result<BenchTable, SchemeError> {
    let iterations = iterations.max(MIN_ITERATIONS);
    let (sk, ek) = keygen(params, rng)?;
    let p = params.p();
    let n = params.n();
    let rng = std::cell::RefCell::new(rng);
    let message = || sample_below(p, &mut **rng.borrow_mut());
    let fresh = || encrypt(&sk, params, &message(), &mut **rng.borrow_mut());

    let mut rows = Vec::new();
    for op in Operation::ALL {
        let samples = match op {
            Operation::KeyGen => time_op(iterations, || Ok(()), |()| keygen(params, &mut **rng.borrow_mut()).map(|k| drop(black_box(k))))?,
            Operation::Enc => time_op(
                iterations,
                || Ok(message()),
                |m| encrypt(&sk, params, &m, &mut **rng.borrow_mut()).map(|c| drop(black_box(c))),
            )?,
            Operation::Dec => time_op(iterations, fresh, |c| {
                black_box(decrypt(&sk, &c));
                Ok(())
            })?,
            Operation::Add => time_op(
                iterations,
                || Ok((fresh()?, fresh()?)),
                |(a, b)| {
                    black_box(h_add(&a, &b, n).expect("same modulus"));
                    Ok(())
                },
            )?,
            Operation::Mul => time_op(
                iterations,
                || Ok((fresh()?, fresh()?)),
                |(a, b)| {
                    black_box(h_mul(&a, &b, &ek).expect("same modulus"));
                    Ok(())
                },
            )?,
        };
        let (mean_ms, stddev_ms) = summarize(&samples);
        rows.push(BenchRow { operation: op, mean_ms, stddev_ms, iterations, ciphertext_bytes: ciphertext_payload_bytes(n) });
    }
    let ciphertext_file_bytes = fresh()?.encode().len();
    Ok(BenchTable { modulus_bits: n.bits(), rows, ciphertext_file_bytes })
}
