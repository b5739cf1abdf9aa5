//! Syndetic, thick and piecewise syndetic classification on a finite window.
//!
//! Every check quantifies only over subintervals lying fully inside the
//! window. A gap parameter `d` means "every length-`d` window meets the set",
//! so the evens are syndetic at `d = 2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground_set::{GroundSet, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SyndeticCheck {
    pub holds: bool,
    /// Leftmost length-`d` window missing the set.
    pub empty_window: Option<Interval>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThickCheck {
    pub holds: bool,
    /// Leftmost length-`N` run of members.
    pub run: Option<Interval>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PwsWitness {
    pub d: usize,
    /// Run inside `⋃_{n=1}^{d} (A - n)`, in the coordinates of that union.
    pub run: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PwsCheck {
    pub holds: bool,
    pub witness: Option<PwsWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverCheck {
    pub holds: bool,
    /// Smallest point of the checked range no shift covers.
    pub uncovered: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PwsDecomposition {
    pub syndetic: GroundSet,
    pub thick: GroundSet,
    /// Gap parameter at which `syndetic` is syndetic.
    pub gap_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub window_len: usize,
    /// Longest run of absences after the first member (the whole window when
    /// the set is empty).
    pub max_gap: usize,
    /// Absences before the first member.
    pub leading_gap: usize,
    pub longest_run: usize,
    pub pws_witness: Option<PwsWitness>,
}

fn check_param(what: &'static str, value: usize, max: usize) -> Result<()> {
    if value == 0 || value > max {
        return Err(Error::OutOfRange {
            what,
            value,
            min: 1,
            max,
        });
    }
    Ok(())
}

/// Leftmost run of at least `n` positions (1-based, within `[1, len]`) where
/// `pred` holds, reported as its first `n` positions.
fn leftmost_run(len: usize, n: usize, pred: impl Fn(usize) -> bool) -> Option<Interval> {
    let mut run = 0;
    for i in 1..=len {
        if pred(i) {
            run += 1;
            if run == n {
                return Some(Interval::new(i - n, n));
            }
        } else {
            run = 0;
        }
    }
    None
}

/// Every length-`d` window of `[1, L]` meets `a`.
pub fn is_syndetic(a: &GroundSet, d: usize) -> Result<SyndeticCheck> {
    check_param("gap parameter d", d, a.window_len())?;
    let empty_window = leftmost_run(a.window_len(), d, |i| !a.contains(i));
    Ok(SyndeticCheck {
        holds: empty_window.is_none(),
        empty_window,
    })
}

/// `a` contains `n` consecutive members.
pub fn is_thick(a: &GroundSet, n: usize) -> Result<ThickCheck> {
    check_param("run length N", n, a.window_len())?;
    let run = leftmost_run(a.window_len(), n, |i| a.contains(i));
    Ok(ThickCheck {
        holds: run.is_some(),
        run,
    })
}

/// `⋃_i (A - n_i)` on the common window `[1, L - max n_i]`.
pub fn union_of_shifts(a: &GroundSet, shifts: &[usize]) -> Result<GroundSet> {
    combine_shifts(a, shifts, GroundSet::or_assign)
}

/// `⋂_i (A - n_i)` on the common window `[1, L - max n_i]`.
pub fn intersection_of_shifts(a: &GroundSet, shifts: &[usize]) -> Result<GroundSet> {
    combine_shifts(a, shifts, GroundSet::and_assign)
}

fn combine_shifts(
    a: &GroundSet,
    shifts: &[usize],
    merge: fn(&mut GroundSet, &GroundSet),
) -> Result<GroundSet> {
    let (&first, rest) = shifts
        .split_first()
        .ok_or_else(|| Error::Precondition("empty shift list".into()))?;
    let top = shifts.iter().copied().max().unwrap_or(0);
    if top >= a.window_len() {
        return Err(Error::EmptyWindow {
            shift: top,
            len: a.window_len(),
        });
    }
    let len = a.window_len() - top;
    let mut acc = a.shift_down(first, len);
    for &n in rest {
        merge(&mut acc, &a.shift_down(n, len));
    }
    Ok(acc)
}

/// `⋃_{n=1}^{d} (A - n)` contains a run of length `n_run`.
pub fn is_piecewise_syndetic(a: &GroundSet, d: usize, n_run: usize) -> Result<PwsCheck> {
    if d == 0 || n_run == 0 || d + n_run > a.window_len() {
        return Err(Error::Precondition(format!(
            "need d >= 1, N >= 1 and d + N <= {} (got d = {d}, N = {n_run})",
            a.window_len()
        )));
    }
    let shifts: Vec<usize> = (1..=d).collect();
    let u = union_of_shifts(a, &shifts)?;
    let run = leftmost_run(u.window_len(), n_run, |i| u.contains(i));
    Ok(PwsCheck {
        holds: run.is_some(),
        witness: run.map(|run| PwsWitness { d, run }),
    })
}

/// Split a piecewise syndetic `A` into `S ∩ T` with `T` thick at level `N`
/// and `S` syndetic.
///
/// A syndetic `A` splits trivially as `A ∩ [1, L]`. Otherwise, with the run
/// `[s, s + N - 1]` inside `⋃_{n=1}^{d} (A - n)`, take
/// `T = A ∪ [s + 1, s + N + d - 1]` and `S = A ∪ ([1, L] \ T)`. Every
/// length-`d` window inside the padded interval meets `A`, and every point
/// outside it lies in `S`, so `S` is syndetic at `d`.
pub fn decompose_pws(a: &GroundSet, d: usize, n_run: usize) -> Result<PwsDecomposition> {
    let check = is_piecewise_syndetic(a, d, n_run)?;
    let Some(w) = check.witness else {
        return Err(Error::NotPiecewiseSyndetic { d, n: n_run });
    };
    if is_syndetic(a, d)?.holds {
        return Ok(PwsDecomposition {
            syndetic: a.clone(),
            thick: GroundSet::full(a.window_len()),
            gap_bound: d,
        });
    }
    let pad = Interval::from_bounds(w.run.first() + 1, w.run.last() + d);
    let block = GroundSet::from_fn(a.window_len(), |i| pad.contains(i));
    let thick = a.union(&block)?;
    let syndetic = a.union(&thick.complement())?;
    Ok(PwsDecomposition {
        syndetic,
        thick,
        gap_bound: d,
    })
}

/// `⋃_{i=0}^{d-1} (A - i) ⊇ [1, L - d + 1]`: every point `x` of the range
/// has a member in `[x, x + d - 1]`.
pub fn cover_by_shifts(a: &GroundSet, d: usize) -> Result<CoverCheck> {
    check_param("gap parameter d", d, a.window_len())?;
    let shifts: Vec<usize> = (0..d).collect();
    let u = union_of_shifts(a, &shifts)?;
    let uncovered = (1..=u.window_len()).find(|&x| !u.contains(x));
    Ok(CoverCheck {
        holds: uncovered.is_none(),
        uncovered,
    })
}

pub fn structure_report(a: &GroundSet, pws: Option<(usize, usize)>) -> Result<StructureReport> {
    let len = a.window_len();
    let (mut longest_run, mut max_gap, mut leading_gap) = (0, 0, 0);
    let (mut run, mut gap, mut seen) = (0, 0, false);
    for i in 1..=len {
        if a.contains(i) {
            if !seen {
                leading_gap = gap;
                seen = true;
            }
            run += 1;
            gap = 0;
            longest_run = longest_run.max(run);
        } else {
            gap += 1;
            run = 0;
            if seen {
                max_gap = max_gap.max(gap);
            }
        }
    }
    if !seen {
        max_gap = len;
        leading_gap = len;
    }
    let pws_witness = match pws {
        Some((d, n)) => is_piecewise_syndetic(a, d, n)?.witness,
        None => None,
    };
    Ok(StructureReport {
        window_len: len,
        max_gap,
        leading_gap,
        longest_run,
        pws_witness,
    })
}
