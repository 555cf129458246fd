//! Shared machinery for exhaustive enumeration.
//!
//! Every family enumerated by this crate is indexed bijectively by a
//! mixed-radix code (a Prüfer sequence, a sequence of insertion slots, ...).
//! That makes the index space `0..total` trivially splittable into chunks,
//! which workers tally independently before an associative merge.

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Size caps and worker count for the enumerators.
#[derive(Debug, Clone, Default)]
pub struct Config {
    /// Worker threads; `None` uses the rayon global pool.
    pub threads: Option<usize>,
    /// Allow enumeration past the default per-family caps.
    pub cap_override: bool,
}

impl Config {
    pub fn single_threaded() -> Self {
        Config {
            threads: Some(1),
            cap_override: false,
        }
    }

    pub fn with_threads(threads: usize) -> Self {
        Config {
            threads: Some(threads.max(1)),
            cap_override: false,
        }
    }

    pub(crate) fn check_cap(&self, family: &'static str, n: usize, cap: usize) -> Result<()> {
        if n > cap && !self.cap_override {
            Err(Error::LimitExceeded { family, n, cap })
        } else {
            Ok(())
        }
    }

    /// Run `op` on a pool sized according to `threads`.
    pub fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        match self.threads {
            None => op(),
            Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(pool) => pool.install(op),
                Err(_) => op(),
            },
        }
    }
}

/// Lexicographic odometer over `radices[0] x radices[1] x ...`, most
/// significant digit first.
#[derive(Debug, Clone)]
pub struct MixedRadix {
    radices: Vec<usize>,
    digits: Vec<usize>,
    remaining: u64,
    started: bool,
}

impl MixedRadix {
    pub fn new(radices: Vec<usize>) -> Self {
        let total = total_count(&radices);
        let digits = vec![0; radices.len()];
        MixedRadix {
            radices,
            digits,
            remaining: total,
            started: false,
        }
    }

    /// Odometer positioned at `range.start`, stopping after `range.end`.
    pub fn with_range(radices: Vec<usize>, range: Range<u64>) -> Self {
        let mut digits = vec![0; radices.len()];
        let mut rest = range.start;
        for (digit, &radix) in digits.iter_mut().zip(&radices).rev() {
            *digit = (rest % radix as u64) as usize;
            rest /= radix as u64;
        }
        let total = total_count(&radices);
        let end = range.end.min(total);
        MixedRadix {
            radices,
            digits,
            remaining: end.saturating_sub(range.start),
            started: false,
        }
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    /// Next code in order, or `None` when exhausted.
    pub fn next_digits(&mut self) -> Option<&[usize]> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        if self.started {
            self.advance();
        }
        self.started = true;
        Some(&self.digits)
    }

    fn advance(&mut self) {
        for (digit, &radix) in self.digits.iter_mut().zip(&self.radices).rev() {
            *digit += 1;
            if *digit < radix {
                return;
            }
            *digit = 0;
        }
    }
}

pub fn total_count(radices: &[usize]) -> u64 {
    radices.iter().map(|&r| r as u64).product()
}

/// Histogram of a nonnegative integer statistic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    counts: Vec<u64>,
}

impl Tally {
    pub fn new() -> Self {
        Tally::default()
    }

    pub fn add(&mut self, value: usize) {
        self.add_many(value, 1);
    }

    pub fn add_many(&mut self, value: usize, times: u64) {
        if value >= self.counts.len() {
            self.counts.resize(value + 1, 0);
        }
        self.counts[value] += times;
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        if other.counts.len() > self.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (mine, theirs) in self.counts.iter_mut().zip(other.counts) {
            *mine += theirs;
        }
        self
    }

    pub fn get(&self, value: usize) -> u64 {
        self.counts.get(value).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Counts padded (or truncated) to exactly `len` entries.
    pub fn padded(&self, len: usize) -> Vec<u64> {
        (0..len).map(|i| self.get(i)).collect()
    }
}

const TARGET_CHUNKS: u64 = 256;

/// Split `0..total` into chunks, fold each chunk with `chunk_op`, and merge.
pub fn par_chunks<T, F, M>(
    total: u64,
    identity: impl Fn() -> T + Sync + Send,
    chunk_op: F,
    merge: M,
) -> T
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let chunk = (total / TARGET_CHUNKS).max(1);
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
    starts
        .into_par_iter()
        .map(|start| chunk_op(start..(start + chunk).min(total)))
        .reduce(&identity, &merge)
}

/// Parallel histogram over the index space of a mixed-radix code.
pub fn par_tally<F>(radices: &[usize], per_code: F) -> Tally
where
    F: Fn(&[usize], &mut Tally) + Sync + Send,
{
    let total = total_count(radices);
    par_chunks(
        total,
        Tally::new,
        |range| {
            let mut tally = Tally::new();
            let mut odometer = MixedRadix::with_range(radices.to_vec(), range);
            while let Some(digits) = odometer.next_digits() {
                per_code(digits, &mut tally);
            }
            tally
        },
        Tally::merge,
    )
}

pub fn double_factorial(n: u64) -> u64 {
    (1..=n).rev().step_by(2).product()
}
