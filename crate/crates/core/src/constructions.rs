//! The self-similar words `A_0 = 1^k`, `A_{n+1} = A_n A_n 0` and the sets
//! they define.
//!
//! The limit set has prefix density at least `k / (k + 1)` everywhere yet is
//! not piecewise syndetic: writing `A_n = B_n 0^n`, the set is a sequence of
//! `B_n` blocks separated by at least `n` zeros, so every window of length
//! `|B_n| + 2n` holds a run of `n` absences.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground_set::{GroundSet, Interval};

/// Longest word we are willing to materialize.
pub const MAX_WORD_LEN: usize = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FractalSpec {
    pub k: usize,
    pub n: usize,
}

impl FractalSpec {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::OutOfRange {
                what: "k",
                value: 0,
                min: 1,
                max: usize::MAX,
            });
        }
        Ok(FractalSpec { k, n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FractalStats {
    pub length: u64,
    pub ones: u64,
    pub trailing_zeros: u64,
}

/// `2^n (k + 1) - 1`, the length of `A_n`.
pub fn word_length(k: usize, n: usize) -> Result<u64> {
    let overflow = || Error::Overflow(format!("2^{n} * ({k} + 1) does not fit in 64 bits"));
    let pow = 1u64.checked_shl(n as u32).filter(|_| n < 64).ok_or_else(overflow)?;
    pow.checked_mul(k as u64 + 1).map(|v| v - 1).ok_or_else(overflow)
}

/// Closed forms for the length, number of ones and trailing zeros of `A_n`.
pub fn fractal_stats(spec: FractalSpec) -> Result<FractalStats> {
    let length = word_length(spec.k, spec.n)?;
    let ones = (1u64 << spec.n)
        .checked_mul(spec.k as u64)
        .ok_or_else(|| Error::Overflow("ones count".into()))?;
    Ok(FractalStats {
        length,
        ones,
        trailing_zeros: spec.n as u64,
    })
}

/// Direct counts on a 0/1 word.
pub fn count_word(word: &str) -> FractalStats {
    FractalStats {
        length: word.len() as u64,
        ones: word.bytes().filter(|&b| b == b'1').count() as u64,
        trailing_zeros: word.bytes().rev().take_while(|&b| b == b'0').count() as u64,
    }
}

/// Smallest depth `n` with `|A_n| >= len`.
pub fn depth_for(k: usize, len: usize) -> Result<usize> {
    let mut n = 0;
    while (word_length(k, n)? as u128) < len as u128 {
        n += 1;
    }
    Ok(n)
}

/// `A_n` as a set on `[1, |A_n|]`.
fn word_set(k: usize, n: usize) -> Result<GroundSet> {
    let total = word_length(k, n)?;
    if total > MAX_WORD_LEN as u64 {
        return Err(Error::Overflow(format!(
            "word of length {total} exceeds the materialization limit {MAX_WORD_LEN}"
        )));
    }
    let mut cur = GroundSet::full(k);
    for _ in 0..n {
        let len = cur.window_len();
        let mut next = cur.resize(2 * len + 1);
        next.or_assign(&cur.shift_up(len, 2 * len + 1));
        cur = next;
    }
    Ok(cur)
}

pub fn fractal_word(spec: FractalSpec) -> Result<String> {
    Ok(word_set(spec.k, spec.n)?.to_bit_string())
}

/// The length-`len` prefix of the limit word, as a set on `[1, len]`.
pub fn fractal_set(k: usize, len: usize) -> Result<GroundSet> {
    FractalSpec::new(k, 0)?;
    Ok(word_set(k, depth_for(k, len)?)?.resize(len))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DensityBound {
    #[serde(with = "crate::density::ratio_json")]
    pub min: Ratio<u64>,
    /// Smallest prefix length attaining the minimum.
    pub at: usize,
    #[serde(with = "crate::density::ratio_json")]
    pub bound: Ratio<u64>,
    pub holds: bool,
}

/// Minimum of `|A ∩ [1, N]| / N` over `N ∈ [1, len]`, against `k / (k + 1)`.
pub fn verify_density_bound(k: usize, len: usize) -> Result<DensityBound> {
    if len == 0 {
        return Err(Error::OutOfRange {
            what: "prefix length",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let a = fractal_set(k, len)?;
    let (mut best_c, mut best_n) = (1u64, 1u64);
    let mut c = 0u64;
    for n in 1..=len as u64 {
        c += a.contains(n as usize) as u64;
        // c / n < best_c / best_n
        if c * best_n < best_c * n {
            best_c = c;
            best_n = n;
        }
    }
    let min = Ratio::new(best_c, best_n);
    let bound = Ratio::new(k as u64, k as u64 + 1);
    Ok(DensityBound {
        min,
        at: best_n as usize,
        bound,
        holds: min >= bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapCheck {
    pub holds: bool,
    /// Window length `|B_n| + 2n`; zero when `n = 0`.
    pub window_len: usize,
    /// Leftmost window without `n` consecutive absences.
    pub first_failure: Option<Interval>,
}

/// Every window of length `|B_n| + 2n = 2^n (k + 1) - 1 + n` inside the
/// length-`len` prefix contains at least `n` consecutive absences.
pub fn verify_gap_structure(k: usize, n: usize, len: usize) -> Result<GapCheck> {
    FractalSpec::new(k, n)?;
    if n == 0 {
        return Ok(GapCheck {
            holds: true,
            window_len: 0,
            first_failure: None,
        });
    }
    let w = word_length(k, n)? as usize + n;
    if len < w {
        return Err(Error::Precondition(format!(
            "prefix length {len} is shorter than the window {w}"
        )));
    }
    let first_failure = first_window_without_gap(&fractal_set(k, len)?, n, w);
    Ok(GapCheck {
        holds: first_failure.is_none(),
        window_len: w,
        first_failure,
    })
}

/// Leftmost length-`w` window of `a` without `n` consecutive absences.
pub fn first_window_without_gap(a: &GroundSet, n: usize, w: usize) -> Option<Interval> {
    let len = a.window_len();
    if n == 0 || w < n || w > len {
        return None;
    }
    // ends[j] = number of positions i <= j where a run of >= n absences ends
    let mut ends = vec![0u32; len + 1];
    let mut zeros = 0usize;
    for j in 1..=len {
        zeros = if a.contains(j) { 0 } else { zeros + 1 };
        ends[j] = ends[j - 1] + (zeros >= n) as u32;
    }
    // [s, s + w - 1] holds a full run iff one ends in [s + n - 1, s + w - 1]
    (1..=len + 1 - w)
        .find(|&s| ends[s + w - 1] == ends[s + n - 2])
        .map(|s| Interval::new(s - 1, w))
}

/// One filled block of [`fill_intervals`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FilledBlock {
    pub interval: Interval,
    /// Depth of the word placed in the interval; also the width of each
    /// surrounding gap.
    pub depth: usize,
}

/// Depth used for an interval of length `len`: the smallest `n` with
/// `|A_n| >= len`.
pub fn block_depth(k: usize, len: usize) -> Result<usize> {
    depth_for(k, len)
}

/// Fill each interval `[M + 1, M + N]` with `A_n` shifted by `M + n` and
/// clipped to `[M + 1 + n, M + N - n]`.
///
/// Intervals must be pairwise disjoint with strictly increasing lengths. The
/// result lives on `[1, max end]`.
pub fn fill_intervals(intervals: &[Interval], k: usize) -> Result<(GroundSet, Vec<FilledBlock>)> {
    FractalSpec::new(k, 0)?;
    if let Some(bad) = intervals.iter().find(|iv| iv.len == 0) {
        return Err(Error::InvalidFamily(format!("empty interval starting at {}", bad.start)));
    }
    if let Some(w) = intervals.windows(2).find(|w| w[0].len >= w[1].len) {
        return Err(Error::InvalidFamily(format!(
            "lengths must grow: {} then {}",
            w[0].len, w[1].len
        )));
    }
    let mut sorted: Vec<Interval> = intervals.to_vec();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0].end() > w[1].start) {
        return Err(Error::InvalidFamily(format!("{} overlaps {}", w[0], w[1])));
    }
    let total = intervals.iter().map(Interval::end).max().unwrap_or(0);
    let mut out = GroundSet::empty(total);
    let mut blocks = Vec::with_capacity(intervals.len());
    for iv in intervals {
        let depth = block_depth(k, iv.len)?;
        let word = word_set(k, depth)?;
        let offset = iv.start + depth;
        let (lo, hi) = (iv.start + 1 + depth, iv.end().saturating_sub(depth));
        let placed = GroundSet::from_fn(total, |x| {
            x >= lo && x <= hi && word.contains(x - offset)
        });
        out.or_assign(&placed);
        blocks.push(FilledBlock {
            interval: *iv,
            depth,
        });
    }
    Ok((out, blocks))
}
