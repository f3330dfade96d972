//! Uniform sampling of positive braids of a given length, through ranking
//! and unranking of lex-representatives.
//!
//! Ranks are 1-based: `unrank(n, k, 1)` is `σ_1^k` and `unrank(n, k, x_{n,k})`
//! is `σ_{n-1}^k`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::counting::{count_with_state, CountOptions, PrefixState};
use crate::growth::GrowthTables;
use crate::words::{ArtinWord, StrandCount};
use crate::{Error, Result};

/// A seedable supply of uniform random bits.
pub trait RandomSource {
    fn next_word(&mut self) -> u64;

    /// A uniform integer in `0..bound` by rejection on masked bit blocks.
    /// `bound` must be positive.
    fn uniform_below(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero(), "uniform_below needs a positive bound");
        if bound.is_one() {
            return BigUint::zero();
        }
        let bits = (bound - 1u32).bits();
        let words = bits.div_ceil(64) as usize;
        let top_bits = bits - 64 * (words as u64 - 1);
        let top_mask = if top_bits == 64 {
            u64::MAX
        } else {
            (1u64 << top_bits) - 1
        };
        loop {
            let mut digits: Vec<u64> = (0..words).map(|_| self.next_word()).collect();
            digits[words - 1] &= top_mask;
            let candidate = BigUint::from_slice(
                &digits
                    .iter()
                    .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                    .collect::<Vec<_>>(),
            );
            if &candidate < bound {
                return candidate;
            }
        }
    }
}

impl<R: RngCore> RandomSource for R {
    fn next_word(&mut self) -> u64 {
        self.next_u64()
    }
}

/// The generator for draw `stream` of a batch seeded with `seed`:
/// ChaCha8 keyed by `seed`, with its stream id set to `stream`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleRequest {
    pub n: StrandCount,
    pub k: usize,
    pub count: usize,
    pub seed: Option<u64>,
}

impl SampleRequest {
    pub fn new(n: StrandCount, k: usize, count: usize, seed: Option<u64>) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidRequest(
                "sample count must be at least 1".into(),
            ));
        }
        Ok(SampleRequest { n, k, count, seed })
    }
}

/// Binary search for the least `m` in `lo..=hi` with `count(m) <= budget`,
/// returning it with its count. `count(hi)` must satisfy the bound.
fn least_within_budget(
    lo: usize,
    hi: usize,
    budget: &BigUint,
    mut count: impl FnMut(usize) -> Result<BigUint>,
) -> Result<(usize, BigUint)> {
    let (mut lo, mut hi) = (lo, hi);
    let mut hi_count: Option<BigUint> = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        let c = count(mid)?;
        if &c <= budget {
            hi = mid;
            hi_count = Some(c);
        } else {
            lo = mid + 1;
        }
    }
    let c = match hi_count {
        Some(c) => c,
        None => count(hi)?,
    };
    Ok((hi, c))
}

/// The `rank`-th lex-representative of length `k` (1-based).
pub fn unrank(n: StrandCount, k: usize, rank: &BigUint, g: &GrowthTables) -> Result<ArtinWord> {
    g.covers(n, k)?;
    let total = g.x(k);
    if rank.is_zero() || rank > total {
        return Err(Error::RankOutOfRange);
    }
    let mut budget = total - rank;
    let mut state = PrefixState::empty(n);
    let mut letters = Vec::with_capacity(k);
    let top = n.generators() as usize;
    let opts = CountOptions::default();
    for _ in 0..k {
        let lo = (state.last() as usize).saturating_sub(1).max(1);
        let (m, later) = least_within_budget(lo, top, &budget, |m| {
            if m == top {
                Ok(BigUint::zero())
            } else {
                count_with_state(&state, k, m, g, opts)
            }
        })?;
        budget -= later;
        state = state
            .push(m as u16)
            .expect("the chosen letter always extends a lex-representative");
        letters.push(m as u16);
    }
    ArtinWord::new(n, letters)
}

/// The 1-based position of `w` among lex-representatives of its length.
pub fn rank(w: &ArtinWord, g: &GrowthTables) -> Result<BigUint> {
    let n = w.strands();
    let k = w.len();
    g.covers(n, k)?;
    PrefixState::from_word(w).ok_or(Error::NotLexRepresentative)?;
    let mut state = PrefixState::empty(n);
    let mut later = BigUint::zero();
    for &letter in w.letters() {
        if letter < n.generators() {
            later += count_with_state(&state, k, letter as usize, g, CountOptions::default())?;
        }
        state = state.push(letter).ok_or(Error::NotLexRepresentative)?;
    }
    Ok(g.x(k) - later)
}

/// One uniformly random positive braid of length `k`, as its
/// lex-representative.
pub fn sample_one<R: RandomSource + ?Sized>(
    n: StrandCount,
    k: usize,
    g: &GrowthTables,
    rng: &mut R,
) -> Result<ArtinWord> {
    g.covers(n, k)?;
    let r = rng.uniform_below(g.x(k)) + 1u32;
    unrank(n, k, &r, g)
}

/// Sequential draws from a caller-supplied source.
pub fn sample_with<R: RandomSource + ?Sized>(
    req: &SampleRequest,
    g: &GrowthTables,
    rng: &mut R,
) -> Result<Vec<ArtinWord>> {
    (0..req.count)
        .map(|_| sample_one(req.n, req.k, g, rng))
        .collect()
}

/// Batch draws in parallel. Draw `d` uses `stream_rng(seed, d)`, so the
/// output depends only on the seed and not on thread scheduling. Without a
/// seed one is taken from the operating system.
pub fn sample(req: &SampleRequest, g: &GrowthTables) -> Result<Vec<ArtinWord>> {
    g.covers(req.n, req.k)?;
    let seed = req.seed.unwrap_or_else(|| rand::thread_rng().gen());
    (0..req.count as u64)
        .into_par_iter()
        .map(|d| sample_one(req.n, req.k, g, &mut stream_rng(seed, d)))
        .collect()
}

/// `k` independent uniform letters. This is not uniform on braids: a braid
/// is hit in proportion to the number of words representing it.
pub fn naive_sample<R: Rng + ?Sized>(n: StrandCount, k: usize, rng: &mut R) -> ArtinWord {
    let letters = (0..k).map(|_| rng.gen_range(1..n.get())).collect();
    ArtinWord::new(n, letters).expect("letters drawn from the alphabet")
}
