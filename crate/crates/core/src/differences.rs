//! Difference sets: disjoint shift families, shift covers of `C - C` and a
//! piecewise-syndeticity detector for `A - B`.

use rayon::prelude::*;
use serde::Serialize;

use crate::density::{window_sup_density, DensityReport};
use crate::error::{Error, Result};
use crate::ground_set::{difference_set, GroundSet, Interval};
use crate::structure::{is_piecewise_syndetic, is_syndetic, PwsWitness};

/// Printed with every Jin report.
pub const JIN_CAVEAT: &str = "finite-window detector: the parameters are observed on this window only; \
Jin's theorem is a statement about upper Banach density on all of N and is not proved by this check";

/// Shifts `n_1 < ... < n_k` of `base` whose restrictions to
/// `[1, verified_window]` are pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftFamily {
    #[serde(skip)]
    pub base: GroundSet,
    pub shifts: Vec<usize>,
    pub verified_window: usize,
}

impl ShiftFamily {
    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn max_shift(&self) -> usize {
        self.shifts.last().copied().unwrap_or(0)
    }

    /// `shift(base, n) ∩ [1, verified_window]`.
    pub fn member(&self, n: usize) -> GroundSet {
        self.base.shift_down(n, self.verified_window)
    }

    /// Recheck pairwise disjointness from scratch.
    pub fn is_disjoint(&self) -> bool {
        let sets: Vec<GroundSet> = self.shifts.iter().map(|&n| self.member(n)).collect();
        (0..sets.len()).all(|i| (i + 1..sets.len()).all(|j| !sets[i].intersects(&sets[j])))
    }
}

fn check_bound(c: &GroundSet, shift_bound: usize) -> Result<()> {
    if shift_bound == 0 || shift_bound >= c.window_len() {
        return Err(Error::OutOfRange {
            what: "shift bound",
            value: shift_bound,
            min: 1,
            max: c.window_len().saturating_sub(1),
        });
    }
    Ok(())
}

/// A family of shifts `<= shift_bound` that cannot be enlarged, disjoint on
/// `[1, L - shift_bound]`.
///
/// By default shifts are taken greedily, smallest first. With `exact` the
/// family has maximum size (lexicographically first among those), which
/// needs `L <= 64`.
pub fn max_disjoint_shift_family(c: &GroundSet, shift_bound: usize, exact: bool) -> Result<ShiftFamily> {
    check_bound(c, shift_bound)?;
    let window = c.window_len() - shift_bound;
    let shifts = if exact {
        if c.window_len() > 64 {
            return Err(Error::OutOfRange {
                what: "window length for exact shift search",
                value: c.window_len(),
                min: 1,
                max: 64,
            });
        }
        exact_family(c, shift_bound, window)
    } else {
        let candidates: Vec<GroundSet> = (0..=shift_bound).map(|n| c.shift_down(n, window)).collect();
        let mut taken = GroundSet::empty(window);
        let mut shifts = Vec::new();
        for (n, s) in candidates.iter().enumerate() {
            if !s.intersects(&taken) {
                taken.or_assign(s);
                shifts.push(n);
            }
        }
        shifts
    };
    Ok(ShiftFamily {
        base: c.clone(),
        shifts,
        verified_window: window,
    })
}

fn exact_family(c: &GroundSet, shift_bound: usize, window: usize) -> Vec<usize> {
    let masks: Vec<u64> = (0..=shift_bound)
        .map(|n| {
            c.shift_down(n, window)
                .members()
                .fold(0u64, |m, i| m | 1 << (i - 1))
        })
        .collect();

    fn go(masks: &[u64], next: usize, used: u64, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        if cur.len() + (masks.len() - next) <= best.len() {
            return;
        }
        for n in next..masks.len() {
            if cur.len() + (masks.len() - n) <= best.len() {
                return;
            }
            if masks[n] & used == 0 {
                cur.push(n);
                go(masks, n + 1, used | masks[n], cur, best);
                cur.pop();
            }
        }
    }

    let mut best = Vec::new();
    go(&masks, 0, 0, &mut Vec::new(), &mut best);
    best
}

/// Both sides of the size bound for a disjoint family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DisjointnessBound {
    /// `Σ_i |shift(C, n_i) ∩ [1, L']|`.
    pub total: usize,
    pub window: usize,
    /// `k · (|C ∩ [1, L']| - max n_i)`, clamped at zero.
    pub size_term: usize,
    pub holds: bool,
}

/// `Σ_i |shift(C, n_i) ∩ [1, L']| <= L'` and
/// `k · (|C ∩ [1, L']| - max n_i) <= L'`.
pub fn disjointness_bound(family: &ShiftFamily) -> DisjointnessBound {
    let window = family.verified_window;
    let total = family.shifts.iter().map(|&n| family.member(n).count()).sum();
    let base = family.base.count_in(Interval::new(0, window));
    let size_term = family.len() * base.saturating_sub(family.max_shift());
    DisjointnessBound {
        total,
        window,
        size_term,
        holds: total <= window && size_term <= window,
    }
}

/// `m` is covered through shift `n`: `c - c' + n = m` with `c, c' ∈ C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverWitness {
    pub m: usize,
    pub shift: usize,
    pub c: usize,
    pub c_prime: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftCover {
    pub holds: bool,
    /// The range of `m` that was checked.
    pub checked: Interval,
    pub margin: usize,
    pub uncovered: Option<usize>,
    #[serde(skip)]
    pub witnesses: Vec<CoverWitness>,
}

/// Longest run of non-members anywhere in the window.
fn longest_absence(c: &GroundSet) -> usize {
    let (mut best, mut run) = (0, 0);
    for i in 1..=c.window_len() {
        if c.contains(i) {
            run = 0;
        } else {
            run += 1;
            best = best.max(run);
        }
    }
    best
}

/// Least `x >= 1` with `x + m ∈ C` and `x + n ∈ C`.
fn meet(c: &GroundSet, m: usize, n: usize) -> Option<usize> {
    let top = m.max(n);
    if top >= c.window_len() {
        return None;
    }
    let len = c.window_len() - top;
    let mut s = c.shift_down(m, len);
    s.and_assign(&c.shift_down(n, len));
    s.min()
}

/// Check `(C - m) ∩ (C - n_i) ≠ ∅` for some `i`, for every `m` in
/// `[1, L - max n_i - margin]`, where the margin is one more than the longest
/// absence run of `C` (at least `m = 1` is always checked).
pub fn shift_cover(c: &GroundSet, family: &ShiftFamily) -> Result<ShiftCover> {
    if family.base != *c {
        return Err(Error::Precondition("shift family was built over a different set".into()));
    }
    let margin = longest_absence(c) + 1;
    let last = c
        .window_len()
        .saturating_sub(family.max_shift() + margin)
        .max(1);
    let found: Vec<Option<CoverWitness>> = (1..=last)
        .into_par_iter()
        .map(|m| {
            family.shifts.iter().find_map(|&n| {
                meet(c, m, n).map(|x| CoverWitness {
                    m,
                    shift: n,
                    c: x + m,
                    c_prime: x + n,
                })
            })
        })
        .collect();
    let uncovered = found.iter().position(Option::is_none).map(|i| i + 1);
    Ok(ShiftCover {
        holds: uncovered.is_none(),
        checked: Interval::new(0, last),
        margin,
        uncovered,
        witnesses: found.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfDifferenceReport {
    /// `C - C` is checked on `[1, L / 2]`, where every difference still has
    /// room for its pairs.
    pub trimmed_window: usize,
    pub difference_count: usize,
    pub syndetic_at: Option<usize>,
}

/// Least `d <= d_max` at which `C - C` is syndetic on the trimmed window.
pub fn self_difference_report(c: &GroundSet, d_max: usize) -> Result<SelfDifferenceReport> {
    let diff = difference_set(c, c)?;
    let trimmed_window = c.window_len() / 2;
    let trimmed = diff.resize(trimmed_window);
    let mut syndetic_at = None;
    for d in 1..=d_max.min(trimmed_window) {
        if is_syndetic(&trimmed, d)?.holds {
            syndetic_at = Some(d);
            break;
        }
    }
    Ok(SelfDifferenceReport {
        trimmed_window,
        difference_count: trimmed.count(),
        syndetic_at,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JinConfig {
    pub d_max: usize,
    pub n_req: usize,
    /// Window length for the density diagnostics; defaults to `n_req`.
    pub density_n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PwsParams {
    pub d: usize,
    pub n: usize,
    pub run: Interval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JinDiagnostics {
    pub density_a: DensityReport,
    pub density_b: DensityReport,
    pub difference_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PwsReport {
    #[serde(skip)]
    pub subject: GroundSet,
    pub found: bool,
    pub params: Option<PwsParams>,
    pub diagnostics: JinDiagnostics,
    pub caveat: &'static str,
}

/// Least `d <= d_max` with `A - B` piecewise syndetic at `(d, n_req)`.
pub fn jin_check(a: &GroundSet, b: &GroundSet, cfg: &JinConfig) -> Result<PwsReport> {
    if a.window_len() != b.window_len() {
        return Err(Error::WindowMismatch {
            left: a.window_len(),
            right: b.window_len(),
        });
    }
    if cfg.d_max == 0 || cfg.n_req == 0 {
        return Err(Error::Precondition("d_max and N_req must be positive".into()));
    }
    let diff = difference_set(a, b)?;
    let density_n = cfg.density_n.unwrap_or(cfg.n_req);
    let diagnostics = JinDiagnostics {
        density_a: window_sup_density(a, density_n)?,
        density_b: window_sup_density(b, density_n)?,
        difference_count: diff.count(),
    };
    let mut params = None;
    for d in 1..=cfg.d_max {
        if d + cfg.n_req > diff.window_len() {
            break;
        }
        if let Some(PwsWitness { d, run }) = is_piecewise_syndetic(&diff, d, cfg.n_req)?.witness {
            params = Some(PwsParams { d, n: cfg.n_req, run });
            break;
        }
    }
    Ok(PwsReport {
        subject: diff,
        found: params.is_some(),
        params,
        diagnostics,
        caveat: JIN_CAVEAT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::fractal_set;
    use proptest::prelude::*;

    /// Largest pairwise-disjoint family by trying every subset of shifts.
    fn brute_max_family(c: &GroundSet, bound: usize) -> usize {
        let window = c.window_len() - bound;
        let sets: Vec<GroundSet> = (0..=bound).map(|n| c.shift_down(n, window)).collect();
        (0u32..1 << (bound + 1))
            .filter(|mask| {
                let idx: Vec<usize> = (0..=bound).filter(|i| mask >> i & 1 == 1).collect();
                idx.iter()
                    .enumerate()
                    .all(|(p, &i)| idx[p + 1..].iter().all(|&j| !sets[i].intersects(&sets[j])))
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn family_examples() {
        let m3 = GroundSet::multiples(100, 3);
        assert_eq!(max_disjoint_shift_family(&m3, 2, false).unwrap().shifts, vec![0, 1, 2]);
        let full = GroundSet::full(50);
        for bound in [1, 5, 49] {
            assert_eq!(max_disjoint_shift_family(&full, bound, false).unwrap().shifts, vec![0]);
        }
        let step4 = GroundSet::progression(100, 1, 4);
        let fam = max_disjoint_shift_family(&step4, 3, false).unwrap();
        assert_eq!(fam.len(), 4);
        let small = GroundSet::progression(60, 1, 4);
        assert_eq!(brute_max_family(&small, 3), 4);
        assert_eq!(max_disjoint_shift_family(&small, 3, true).unwrap().len(), 4);
        assert!(max_disjoint_shift_family(&m3, 100, false).is_err());
        assert!(max_disjoint_shift_family(&m3, 2, true).is_err());
    }

    #[test]
    fn exact_beats_or_ties_greedy() {
        // greedy takes 0 and blocks both 1 and 2, which are disjoint from each other
        let c = GroundSet::from_members(12, [1, 3, 5, 6, 9]).unwrap();
        let greedy = max_disjoint_shift_family(&c, 3, false).unwrap();
        let exact = max_disjoint_shift_family(&c, 3, true).unwrap();
        assert!(exact.len() >= greedy.len());
        assert_eq!(exact.len(), brute_max_family(&c, 3));
        assert!(exact.is_disjoint() && greedy.is_disjoint());
    }

    #[test]
    fn cover_examples() {
        let m3 = GroundSet::multiples(300, 3);
        let fam = max_disjoint_shift_family(&m3, 2, false).unwrap();
        let cover = shift_cover(&m3, &fam).unwrap();
        assert!(cover.holds);
        assert_eq!(cover.witnesses.len(), cover.checked.len);

        for len in 3..10 {
            let one = GroundSet::from_members(len, [1]).unwrap();
            let fam = max_disjoint_shift_family(&one, 1, false).unwrap();
            let single = ShiftFamily { shifts: vec![0], ..fam };
            let cover = shift_cover(&one, &single).unwrap();
            assert!(!cover.holds);
            assert_eq!(cover.uncovered, Some(1));
        }
    }

    #[test]
    fn self_difference_examples() {
        let r = self_difference_report(&GroundSet::multiples(300, 3), 10).unwrap();
        assert_eq!(r.syndetic_at, Some(3));
        let r = self_difference_report(&GroundSet::multiples(300, 2), 10).unwrap();
        assert_eq!(r.syndetic_at, Some(2));
        let f = fractal_set(1, 10_000).unwrap();
        let r = self_difference_report(&f, 50).unwrap();
        assert_eq!(r.syndetic_at, Some(1));
        assert_eq!(self_difference_report(&GroundSet::from_members(20, [4]).unwrap(), 5).unwrap().syndetic_at, None);
    }

    #[test]
    fn jin_examples() {
        let evens = GroundSet::multiples(1000, 2);
        for n_req in [2, 10, 100, 900] {
            let cfg = JinConfig { d_max: 5, n_req, density_n: None };
            let rep = jin_check(&evens, &evens, &cfg).unwrap();
            assert!(rep.found);
            assert_eq!(rep.params.as_ref().unwrap().d, 2);
        }
        let a = GroundSet::multiples(10_000, 3);
        let b = GroundSet::multiples(10_000, 5);
        let rep = jin_check(&a, &b, &JinConfig { d_max: 10, n_req: 1000, density_n: Some(100) }).unwrap();
        assert_eq!(rep.params.map(|p| p.d), Some(1));
        assert_eq!(rep.diagnostics.density_a.value, num_rational::Ratio::new(17, 50));

        let one = GroundSet::from_members(50, [1]).unwrap();
        let rep = jin_check(&one, &one, &JinConfig { d_max: 5, n_req: 3, density_n: None }).unwrap();
        assert!(!rep.found);
        assert!(rep.subject.is_empty());
    }

    fn arb_set() -> impl Strategy<Value = GroundSet> {
        (8usize..120).prop_flat_map(|len| proptest::collection::vec(any::<bool>(), len).prop_map(|b| GroundSet::from_bools(&b)))
    }

    proptest! {
        #[test]
        fn greedy_family_is_disjoint_and_maximal(c in arb_set(), bound in 1usize..8) {
            prop_assume!(bound < c.window_len());
            let fam = max_disjoint_shift_family(&c, bound, false).unwrap();
            prop_assert!(fam.is_disjoint());
            prop_assert!(disjointness_bound(&fam).holds);
            for n in 0..=bound {
                if !fam.shifts.contains(&n) {
                    let s = fam.member(n);
                    prop_assert!(fam.shifts.iter().any(|&m| fam.member(m).intersects(&s)));
                }
            }
        }

        #[test]
        fn exact_family_is_maximum(c in arb_set(), bound in 1usize..7) {
            prop_assume!(bound < c.window_len() && c.window_len() <= 64);
            let fam = max_disjoint_shift_family(&c, bound, true).unwrap();
            prop_assert!(fam.is_disjoint());
            prop_assert_eq!(fam.len(), brute_max_family(&c, bound));
        }

        #[test]
        fn cover_witnesses_are_sound(c in arb_set(), bound in 1usize..6) {
            prop_assume!(bound < c.window_len());
            let fam = max_disjoint_shift_family(&c, bound, false).unwrap();
            let cover = shift_cover(&c, &fam).unwrap();
            for w in &cover.witnesses {
                prop_assert!(c.contains(w.c) && c.contains(w.c_prime));
                prop_assert_eq!(w.c + w.shift, w.c_prime + w.m);
                prop_assert!(fam.shifts.contains(&w.shift));
            }
            if let Some(m) = cover.uncovered {
                prop_assert!(fam.shifts.iter().all(|&n| meet(&c, m, n).is_none()));
            }
        }

        #[test]
        fn jin_found_rechecks_and_is_monotone(a in arb_set(), seed in any::<u64>(), d_max in 1usize..6, n_req in 1usize..6) {
            let b = GroundSet::from_fn(a.window_len(), |i| (seed >> (i % 64)) & 1 == 1);
            let cfg = JinConfig { d_max, n_req, density_n: Some(1) };
            let rep = jin_check(&a, &b, &cfg).unwrap();
            if let Some(p) = &rep.params {
                prop_assert!(is_piecewise_syndetic(&rep.subject, p.d, p.n).unwrap().holds);
                let wider = jin_check(&a, &b, &JinConfig { d_max: d_max + 3, ..cfg }).unwrap();
                prop_assert!(wider.found);
            }
        }
    }
}
