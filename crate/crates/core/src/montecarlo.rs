//! Seeded Monte Carlo sampling of tuples, assignments, and tree-probability
//! estimates.
//!
//! This is the only floating-point corner of the crate, and it never feeds
//! back into the exact paths: estimates exist purely as an independent
//! statistical cross-check on enumeration.
//!
//! # Reproducibility
//!
//! The generator is ChaCha8 from `rand_chacha` 0.3, seeded through
//! `seed_from_u64` with a 64-bit seed. Estimation splits the trial budget
//! into fixed-size chunks and gives chunk `c` the ChaCha stream `c` of the
//! same seed, then sums per-chunk tallies. Chunk boundaries depend only on
//! the trial count, so results are byte-identical across runs, machines,
//! and thread counts.

use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::assignment::{AssignmentMap, AssignmentMode};
use crate::counting::cardinality_m;
use crate::digraph::{endpoints_form_tree, ArcRule};
use crate::error::{Error, Result};
use crate::mask::SubsetMask;
use crate::tuple::{OccupancyVector, SubsetTuple};

/// Bound on rejection attempts for one draw.
const REJECTION_LIMIT: u32 = 1_000_000;

/// Trials per RNG stream; fixed so the chunk layout never depends on the
/// thread count.
const CHUNK: u64 = 8192;

/// A Bernoulli estimate with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    /// Observed success fraction.
    pub mean: f64,
    /// `sqrt(mean * (1 - mean) / trials)`.
    pub stderr: f64,
    /// Number of trials.
    pub trials: u64,
    /// Seed the estimate was produced from.
    pub seed: u64,
}

impl Estimate {
    fn from_successes(successes: u64, trials: u64, seed: u64) -> Self {
        assert!(trials > 0, "estimates need at least one trial");
        let mean = successes as f64 / trials as f64;
        let stderr = (mean * (1.0 - mean) / trials as f64).sqrt();
        Estimate {
            mean,
            stderr,
            trials,
            seed,
        }
    }
}

/// Draws uniform tuples from `S(p, r)`, or from `M(p, r)` by rejection.
pub struct TupleSampler {
    p: Vec<u32>,
    r: u32,
    k: u32,
    proper_only: bool,
}

impl TupleSampler {
    /// Checks feasibility once: every `p_j <= r`, and a nonempty proper
    /// family when `proper_only`.
    pub fn new(p: &OccupancyVector, r: u32, proper_only: bool) -> Result<Self> {
        assert!(r >= 1, "sampling needs r >= 1");
        if p.counts().iter().any(|&pj| pj > r) {
            return Err(Error::InfeasibleOccupancy {
                p: p.to_string(),
                r,
            });
        }
        if proper_only && cardinality_m(p, r).is_zero() {
            return Err(Error::EmptyProperFamily {
                p: p.to_string(),
                r,
            });
        }
        Ok(Self {
            p: p.counts().to_vec(),
            r,
            k: p.k(),
            proper_only,
        })
    }

    /// Draws one tuple. Uniformity comes from drawing, independently per
    /// element, a uniform `p_j`-subset of the `r` tuple slots; properness is
    /// enforced by rejection.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> Result<SubsetTuple> {
        let mut bits = vec![0u32; self.r as usize];
        let mut slots: Vec<u32> = (0..self.r).collect();
        self.draw_bits(rng, &mut bits, &mut slots)?;
        Ok(SubsetTuple::new(
            bits.into_iter().map(|b| SubsetMask::new(b, self.k)).collect(),
        ))
    }

    /// Allocation-free inner draw: fills `bits[t]` with the elements of
    /// `S_{t+1}`. `slots` is scratch of length `r`.
    fn draw_bits(&self, rng: &mut ChaCha8Rng, bits: &mut [u32], slots: &mut [u32]) -> Result<()> {
        let full = (1u32 << self.k) - 1;
        for _attempt in 0..REJECTION_LIMIT {
            bits.iter_mut().for_each(|b| *b = 0);
            for (j, &pj) in self.p.iter().enumerate() {
                // Partial Fisher-Yates: the first p_j entries of `slots`
                // become a uniform p_j-subset of the r slots.
                for (t, slot) in slots.iter_mut().enumerate() {
                    *slot = t as u32;
                }
                for t in 0..pj as usize {
                    let pick = rng.gen_range(t..self.r as usize);
                    slots.swap(t, pick);
                    bits[slots[t] as usize] |= 1 << j;
                }
            }
            if !self.proper_only || bits.iter().all(|&b| b != full) {
                return Ok(());
            }
        }
        Err(Error::RejectionLimitExceeded {
            limit: REJECTION_LIMIT,
        })
    }
}

/// Draws one uniform tuple (convenience wrapper over [`TupleSampler`]).
pub fn sample_tuple(
    p: &OccupancyVector,
    r: u32,
    rng: &mut ChaCha8Rng,
    proper_only: bool,
) -> Result<SubsetTuple> {
    TupleSampler::new(p, r, proper_only)?.draw(rng)
}

/// Draws uniform assignment maps of one mode.
pub struct AssignmentSampler {
    k: u32,
    r: u32,
    mode: AssignmentMode,
}

impl AssignmentSampler {
    /// Checks mode feasibility once.
    pub fn new(k: u32, r: u32, mode: AssignmentMode) -> Result<Self> {
        assert!(k >= 2, "sampling needs k >= 2");
        assert!(r >= 1, "sampling needs r >= 1");
        match mode {
            AssignmentMode::Surjection if r > k - 1 => {
                return Err(Error::SurjectionInfeasible { k, r })
            }
            AssignmentMode::Identity if r != k - 1 => {
                return Err(Error::IdentityInfeasible { k, r })
            }
            _ => {}
        }
        Ok(Self { k, r, mode })
    }

    /// Draws one map: i.i.d. uniform values, with rejection until onto in
    /// surjection mode.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> Result<AssignmentMap> {
        let mut values = vec![0u32; (self.k - 1) as usize];
        self.draw_values(rng, &mut values)?;
        Ok(AssignmentMap::new(values, self.r, self.mode))
    }

    fn draw_values(&self, rng: &mut ChaCha8Rng, values: &mut [u32]) -> Result<()> {
        if self.mode == AssignmentMode::Identity {
            for (i, v) in values.iter_mut().enumerate() {
                *v = i as u32 + 1;
            }
            return Ok(());
        }
        let onto_mask = (1u32 << self.r) - 1;
        for _attempt in 0..REJECTION_LIMIT {
            let mut hit = 0u32;
            for v in values.iter_mut() {
                *v = rng.gen_range(1..=self.r);
                hit |= 1 << (*v - 1);
            }
            if self.mode != AssignmentMode::Surjection || hit == onto_mask {
                return Ok(());
            }
        }
        Err(Error::RejectionLimitExceeded {
            limit: REJECTION_LIMIT,
        })
    }
}

/// Draws one uniform assignment map (convenience wrapper).
pub fn sample_assignment(
    k: u32,
    r: u32,
    rng: &mut ChaCha8Rng,
    mode: AssignmentMode,
) -> Result<AssignmentMap> {
    AssignmentSampler::new(k, r, mode)?.draw(rng)
}

/// Estimates the tree probability of one cell by sampling (proper tuple,
/// assignment) pairs. Deterministic for a fixed seed; see the module docs
/// for the chunked stream layout.
pub fn estimate_tree_probability(
    rule: ArcRule,
    p: &OccupancyVector,
    r: u32,
    mode: AssignmentMode,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    assert!(trials > 0, "estimates need at least one trial");
    let k = p.k();
    let tuple_sampler = TupleSampler::new(p, r, true)?;
    let map_sampler = AssignmentSampler::new(k, r, mode)?;

    let n_chunks = trials.div_ceil(CHUNK);
    let successes: u64 = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let n = CHUNK.min(trials - chunk * CHUNK);
            let mut bits = vec![0u32; r as usize];
            let mut slots = vec![0u32; r as usize];
            let mut values = vec![0u32; (k - 1) as usize];
            let mut endpoints = vec![0u32; (k - 1) as usize];
            let mut scratch = vec![0u8; (k + 1) as usize];
            let mut masks = vec![SubsetMask::empty(k); r as usize];
            let mut hits = 0u64;
            for _ in 0..n {
                tuple_sampler
                    .draw_bits(&mut rng, &mut bits, &mut slots)
                    .expect("feasibility checked at construction");
                map_sampler
                    .draw_values(&mut rng, &mut values)
                    .expect("feasibility checked at construction");
                for (m, &b) in masks.iter_mut().zip(bits.iter()) {
                    *m = SubsetMask::new(b, k);
                }
                for i in 1..k {
                    endpoints[(i - 1) as usize] =
                        rule.endpoint(i, &masks[(values[(i - 1) as usize] - 1) as usize]);
                }
                hits += u64::from(endpoints_form_tree(k, &endpoints, &mut scratch));
            }
            hits
        })
        .sum();

    Ok(Estimate::from_successes(successes, trials, seed))
}
