//! Benchmark harness: random codes, timed constructions, exact operation
//! counts checked against closed forms, CSV output.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codemodel::CodeSpec;
use crate::counters::OpCounters;
use crate::error::{Error, Result};
use crate::matrix::{BlockLayout, Matrix};
use crate::paritycheck::{parity_check_iterative, parity_check_minors, Method};
use crate::stdform::{canonical_range, BlockMap, StandardForm};
use crate::zring::RingSpec;

/// `(2^s - 1 - s, 2^s - 1 - s(s+1)/2)` big and small multiply-add pairs.
pub fn predicted_counts_minors(s: u32) -> (u64, u64) {
    let s = s as u64;
    let all = (1u64 << s) - 1;
    (all - s, all - s * (s + 1) / 2)
}

/// `(s(s-1)/2, (s^3 - 3s^2 + 2s)/6)` big and small multiply-add pairs.
pub fn predicted_counts_iterative(s: u32) -> (u64, u64) {
    let s = s as u64;
    (
        s * (s.saturating_sub(1)) / 2,
        s * s.saturating_sub(1) * s.saturating_sub(2) / 6,
    )
}

pub fn predicted_counts(method: Method, s: u32) -> Option<(u64, u64)> {
    match method {
        Method::Minors => Some(predicted_counts_minors(s)),
        Method::Iterative => Some(predicted_counts_iterative(s)),
        Method::BruteForce => None,
    }
}

/// Checks that counted operations form balanced pairs matching the closed form.
pub fn check_counts(method: Method, s: u32, counters: &OpCounters) -> Result<()> {
    let Some((predicted_big, predicted_small)) = predicted_counts(method, s) else {
        return Ok(());
    };
    let matches = counters.pairs() == Some((predicted_big, predicted_small));
    if matches {
        return Ok(());
    }
    Err(Error::CounterMismatch {
        method: method.name(),
        s,
        counted_big: (counters.big_mults, counters.big_adds),
        counted_small: (counters.small_mults, counters.small_adds),
        predicted_big,
        predicted_small,
    })
}

/// A random standard-form code of the given type.
///
/// Block `A_{i,j}` is filled row-major from its own ChaCha stream (the master
/// seed selects the key, the block position the stream), each entry uniform
/// over its canonical range. The result does not depend on the order in which
/// blocks are generated.
pub fn random_code(ring: RingSpec, n: usize, types: &[usize], seed: u64) -> Result<CodeSpec> {
    let layout = BlockLayout::for_ring(ring, n, types.to_vec())?;
    let s = layout.s();
    let blocks = BlockMap::from_fn(ring, layout.clone(), |i, j| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream((i * (s + 2) + j) as u64);
        let range = canonical_range(ring, s, i, j);
        let (rows, cols) = (layout.t(i), layout.width(j));
        let data = (0..rows * cols)
            .map(|_| rng.random_range(0..range))
            .collect();
        Matrix::from_vec(ring, rows, cols, data).expect("block data has the block shape")
    })?;
    Ok(CodeSpec::from_standard_form(StandardForm::from_blocks(
        &blocks,
    )))
}

/// Seed of one trial, derived from the master seed and the trial index only.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    // SplitMix64 finalizer over the pair
    let mut z = master
        ^ (trial as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Parameter grid: every combination of `s`, `ell` and `n` is one cell, each
/// cell is run `trials` times with both constructions on type `(n; ell, ..., ell)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchGrid {
    pub p: u64,
    pub s_values: Vec<u32>,
    pub ell_values: Vec<usize>,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl BenchGrid {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidGrid(msg));
        if self.s_values.is_empty() || self.ell_values.is_empty() || self.n_values.is_empty() {
            return invalid("every grid axis needs at least one value".into());
        }
        if self.trials == 0 {
            return invalid("trials must be positive".into());
        }
        for &s in &self.s_values {
            RingSpec::new(self.p, s)?;
        }
        if self.ell_values.contains(&0) {
            return invalid("ell must be positive".into());
        }
        for &s in &self.s_values {
            for &ell in &self.ell_values {
                for &n in &self.n_values {
                    if n <= s as usize * ell {
                        return invalid(format!(
                            "n = {n} must exceed s * ell = {}",
                            s as usize * ell
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub method: Method,
    pub p: u64,
    pub s: u32,
    pub n: usize,
    pub ell: usize,
    pub trial: usize,
    pub seed: u64,
    pub wall_ns: u64,
    pub counters: OpCounters,
}

impl BenchRecord {
    /// Scalar work of the run: `a*b*c` per `a x b` by `b x c` block product
    /// plus `a*b` per `a x b` block sum.
    pub fn total_ops(&self) -> u64 {
        self.counters.scalar_cost()
    }

    fn sort_key(&self) -> (Method, u64, u32, usize, usize, usize) {
        (self.method, self.p, self.s, self.n, self.ell, self.trial)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Test hook: corrupt the first counter set before it is checked.
    #[doc(hidden)]
    pub inject_counter_mismatch: bool,
}

/// Runs one construction on `sf`, timing only the construction.
pub fn run_method(method: Method, sf: &StandardForm) -> (u64, OpCounters) {
    let start = Instant::now();
    let result = match method {
        Method::Minors => parity_check_minors(sf),
        Method::Iterative => parity_check_iterative(sf),
        Method::BruteForce => unreachable!("brute force is not benchmarked"),
    };
    let wall_ns = u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX);
    (wall_ns, result.counters)
}

/// Runs the whole grid, checking every counter set against the closed forms.
/// Records come back sorted by method, cell and trial.
pub fn run_suite(grid: &BenchGrid, options: SuiteOptions) -> Result<Vec<BenchRecord>> {
    grid.validate()?;
    let mut records = Vec::new();
    let mut inject = options.inject_counter_mismatch;
    for &s in &grid.s_values {
        let ring = RingSpec::new(grid.p, s)?;
        for &ell in &grid.ell_values {
            for &n in &grid.n_values {
                for trial in 0..grid.trials {
                    let code = random_code(
                        ring,
                        n,
                        &vec![ell; s as usize],
                        trial_seed(grid.seed, trial),
                    )?;
                    for method in [Method::Minors, Method::Iterative] {
                        let (wall_ns, mut counters) = run_method(method, code.standard_form());
                        if std::mem::take(&mut inject) {
                            counters.big_mults += 1;
                        }
                        check_counts(method, s, &counters)?;
                        records.push(BenchRecord {
                            method,
                            p: grid.p,
                            s,
                            n,
                            ell,
                            trial,
                            seed: grid.seed,
                            wall_ns,
                            counters,
                        });
                    }
                }
            }
        }
    }
    records.sort_by_key(BenchRecord::sort_key);
    Ok(records)
}

pub const CSV_HEADER: [&str; 12] = [
    "method",
    "p",
    "s",
    "n",
    "ell",
    "trial",
    "seed",
    "wall_ns",
    "big_mults",
    "big_adds",
    "small_mults",
    "small_adds",
];

#[derive(Serialize)]
struct CsvRow<'a> {
    method: &'a str,
    p: u64,
    s: u32,
    n: usize,
    ell: usize,
    trial: usize,
    seed: u64,
    wall_ns: u64,
    big_mults: u64,
    big_adds: u64,
    small_mults: u64,
    small_adds: u64,
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    if records.is_empty() {
        writer.write_record(CSV_HEADER)?;
    }
    for r in records {
        writer.serialize(CsvRow {
            method: r.method.name(),
            p: r.p,
            s: r.s,
            n: r.n,
            ell: r.ell,
            trial: r.trial,
            seed: r.seed,
            wall_ns: r.wall_ns,
            big_mults: r.counters.big_mults,
            big_adds: r.counters.big_adds,
            small_mults: r.counters.small_mults,
            small_adds: r.counters.small_adds,
        })?;
    }
    writer.flush()?;
    Ok(())
}
