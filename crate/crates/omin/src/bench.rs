//! Seeded benchmark suite comparing the schedulers.
//!
//! Reproducibility is the point of this module, so nothing is left to
//! platform defaults: permutations come from a Fisher-Yates shuffle driven
//! by the ChaCha8 stream cipher, index draws use masked rejection sampling
//! (uniform, no modulo bias), and per-trial seeds are derived from the
//! master seed with a splitmix64 mix over (size, trial). The same seed
//! therefore yields the same permutation on every platform and the same
//! CSV, byte for byte, when timing capture is off.
//!
//! Every algorithm in a suite sees the same permutation for a given
//! (size, trial), making per-row comparisons meaningful.

use std::time::Instant;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::conflict::MessageSet;
use crate::error::{Error, Result};
use crate::sched::{run_algorithm, Algorithm, ResolutionMode, Schedule};
use crate::topology::NetworkConfig;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Seed for one (size, trial) cell, derived from the master seed.
pub fn trial_seed(master: u64, size: usize, trial: u32) -> u64 {
    let mut state = master;
    let a = splitmix64(&mut state) ^ size as u64;
    let mut state = a;
    let b = splitmix64(&mut state) ^ trial as u64;
    let mut state = b;
    splitmix64(&mut state)
}

/// Uniform draw from [0, bound) by masking to the next power of two and
/// rejecting overshoots. Exact and platform-independent.
fn uniform_index(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let mask = bound.next_power_of_two() - 1;
    loop {
        let draw = rng.next_u64() & mask;
        if draw < bound {
            return draw;
        }
    }
}

/// Uniform random full permutation of 0..N-1 as a message set (source i
/// sends to destination perm[i]).
pub fn random_permutation(size: usize, seed: u64) -> Result<MessageSet> {
    let cfg = NetworkConfig::new(size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dests: Vec<u32> = (0..size as u32).collect();
    for i in (1..size).rev() {
        let j = uniform_index(&mut rng, i as u64 + 1) as usize;
        dests.swap(i, j);
    }
    MessageSet::permutation(cfg, &dests)
}

/// Conflict load of one schedule, per pass and aggregated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunMetrics {
    pub algorithm: Algorithm,
    pub size: usize,
    /// Trial seed of the permutation; zero when the schedule did not come
    /// from the suite runner.
    pub seed: u64,
    pub pass_count: usize,
    /// Switch-conflict occurrences in each pass.
    pub switch_occurrences: Vec<usize>,
    /// Link-conflict occurrences in each pass.
    pub link_occurrences: Vec<usize>,
    /// Distinct conflicting pairs in each pass.
    pub distinct_pairs: Vec<usize>,
    /// Scheduling wall time; zero when timing capture is off.
    pub wall_micros: u64,
}

impl RunMetrics {
    pub fn total_switch_occurrences(&self) -> usize {
        self.switch_occurrences.iter().sum()
    }

    pub fn total_link_occurrences(&self) -> usize {
        self.link_occurrences.iter().sum()
    }

    pub fn max_pass_switch(&self) -> usize {
        self.switch_occurrences.iter().copied().max().unwrap_or(0)
    }

    pub fn max_pass_link(&self) -> usize {
        self.link_occurrences.iter().copied().max().unwrap_or(0)
    }
}

/// Read the per-pass conflict reports of a schedule into metrics. Seed and
/// wall time are left at zero for the caller to fill.
pub fn evaluate(schedule: &Schedule) -> RunMetrics {
    let reports = schedule.reports();
    RunMetrics {
        algorithm: schedule.algorithm(),
        size: schedule.config().size(),
        seed: 0,
        pass_count: schedule.pass_count(),
        switch_occurrences: reports
            .iter()
            .map(|r| r.switch_occurrence_count())
            .collect(),
        link_occurrences: reports.iter().map(|r| r.link_occurrence_count()).collect(),
        distinct_pairs: reports.iter().map(|r| r.distinct_pairs().len()).collect(),
        wall_micros: 0,
    }
}

/// Suite parameters. `timing` disables wall-clock capture when false, which
/// makes the rendered CSV reproducible byte for byte.
#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    pub sizes: Vec<usize>,
    pub trials: u32,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub mode: ResolutionMode,
    pub timing: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            sizes: vec![8, 16, 32],
            trials: 10,
            seed: 0,
            algorithms: Algorithm::ALL.to_vec(),
            mode: ResolutionMode::Paper,
            timing: true,
        }
    }
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::BenchConfig("no network sizes given".into()));
        }
        for &size in &self.sizes {
            if !size.is_power_of_two() || size < 8 {
                return Err(Error::BenchConfig(format!(
                    "size {size} is not a power of two >= 8"
                )));
            }
        }
        if self.trials == 0 {
            return Err(Error::BenchConfig("trials must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::BenchConfig("no algorithms selected".into()));
        }
        Ok(())
    }
}

/// One suite row: the metrics, or the scheduler's error message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub size: usize,
    pub seed: u64,
    pub trial: u32,
    pub outcome: std::result::Result<RunMetrics, String>,
}

/// Run every (size, trial, algorithm) combination and return the rows in
/// that order. Trials run in parallel; a failing run produces an error row
/// rather than aborting the suite.
pub fn run_suite(config: &BenchmarkConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let cells: Vec<(usize, u32)> = config
        .sizes
        .iter()
        .flat_map(|&size| (0..config.trials).map(move |trial| (size, trial)))
        .collect();

    let rows: Vec<Vec<RunRecord>> = cells
        .par_iter()
        .map(|&(size, trial)| {
            let seed = trial_seed(config.seed, size, trial);
            let ms = random_permutation(size, seed);
            config
                .algorithms
                .iter()
                .map(|&algorithm| {
                    let outcome = ms.as_ref().map_err(|e| e.to_string()).and_then(|ms| {
                        let started = Instant::now();
                        let schedule =
                            run_algorithm(ms, algorithm, config.mode).map_err(|e| e.to_string())?;
                        let micros = started.elapsed().as_micros() as u64;
                        let mut metrics = evaluate(&schedule);
                        metrics.seed = seed;
                        metrics.wall_micros = if config.timing { micros } else { 0 };
                        Ok(metrics)
                    });
                    RunRecord {
                        algorithm,
                        size,
                        seed,
                        trial,
                        outcome,
                    }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

pub const CSV_HEADER: &str = "algorithm,N,seed,trial,passes,total_switch_occurrences,total_link_occurrences,max_pass_switch,max_pass_link,micros";

/// Render suite rows as CSV. Failed runs keep their identity columns and
/// leave the numeric columns empty.
pub fn render_csv(records: &[RunRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for record in records {
        match &record.outcome {
            Ok(m) => {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    record.algorithm.id(),
                    record.size,
                    record.seed,
                    record.trial,
                    m.pass_count,
                    m.total_switch_occurrences(),
                    m.total_link_occurrences(),
                    m.max_pass_switch(),
                    m.max_pass_link(),
                    m.wall_micros,
                ));
            }
            Err(_) => {
                out.push_str(&format!(
                    "{},{},{},{},,,,,,\n",
                    record.algorithm.id(),
                    record.size,
                    record.seed,
                    record.trial,
                ));
            }
        }
    }
    out
}
