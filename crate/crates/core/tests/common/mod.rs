//! Naive oracles shared by the integration tests. None of them call into the
//! search code they check.
#![allow(dead_code)]

use finitary_core::GroundSet;

/// Every `(a, b)` with `a + (k - 1) b <= n`, in lexicographic order.
pub fn naive_mono_ap(colors: &[u8], k: usize) -> Option<(usize, usize)> {
    let n = colors.len();
    if k == 0 || n == 0 {
        return None;
    }
    for a in 1..=n {
        for b in 1..=n {
            if a + (k - 1) * b > n {
                break;
            }
            if (0..k).all(|j| colors[a + j * b - 1] == colors[a - 1]) {
                return Some((a, b));
            }
        }
    }
    None
}

/// All `r^n` colorings with colors `1..=r`.
pub fn all_colorings(n: usize, r: u8) -> impl Iterator<Item = Vec<u8>> {
    let total = (r as u64).pow(n as u32);
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let c = (code % r as u64) as u8 + 1;
                code /= r as u64;
                c
            })
            .collect()
    })
}

/// Least `n <= max_n` at which every coloring has a monochromatic `k`-AP,
/// by enumerating all `r^n` colorings.
pub fn exhaustive_w(k: usize, r: u8, max_n: usize) -> Option<usize> {
    (1..=max_n).find(|&n| all_colorings(n, r).all(|c| naive_mono_ap(&c, k).is_some()))
}

/// Plain backtracking with a full rescan at every node and no symmetry
/// pruning: is there a coloring of `[1, n]` with no monochromatic `k`-AP?
pub fn naive_good_coloring_exists(k: usize, r: u8, n: usize) -> bool {
    fn rec(colors: &mut Vec<u8>, k: usize, r: u8, n: usize) -> bool {
        if naive_mono_ap(colors, k).is_some() {
            return false;
        }
        if colors.len() == n {
            return true;
        }
        for c in 1..=r {
            colors.push(c);
            if rec(colors, k, r, n) {
                return true;
            }
            colors.pop();
        }
        false
    }
    rec(&mut Vec::new(), k, r, n)
}

/// `{k : k + n ∈ A}` on `[1, L - n]`, membership by membership.
pub fn naive_shift(a: &GroundSet, n: usize) -> GroundSet {
    GroundSet::from_fn(a.window_len() - n, |k| a.contains(k + n))
}

/// Seeded random set with a random fill probability.
pub fn random_set(rng: &mut impl rand::Rng, len: usize) -> GroundSet {
    let p: f64 = rng.gen_range(0.05..0.95);
    GroundSet::from_fn(len, |_| rng.gen_bool(p))
}

/// Random set with no two consecutive absences, i.e. syndetic at 2.
pub fn random_syndetic2(rng: &mut impl rand::Rng, len: usize) -> GroundSet {
    let mut prev = true;
    GroundSet::from_fn(len, |_| {
        let member = !prev || rng.gen_bool(0.5);
        prev = member;
        member
    })
}
