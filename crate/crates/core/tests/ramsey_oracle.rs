mod common;

use common::{all_colorings, exhaustive_w, naive_good_coloring_exists, naive_mono_ap, random_syndetic2};
use finitary_core::constructions::fractal_set;
use finitary_core::ramsey::{
    find_ap_in_set, find_mono_ap, syndetic_implies_ap, verify_certificate, vdw_number, vdw_number_with, Coloring,
    VdwOptions,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn mono_ap_matches_naive_scan_on_every_small_coloring() {
    for r in 1..=3u8 {
        let max_n = if r == 3 { 12 } else { 14 };
        for n in 1..=max_n {
            for colors in all_colorings(n, r) {
                let c = Coloring::new(colors.clone(), r).unwrap();
                for k in 1..=4 {
                    let got = find_mono_ap(&c, k).map(|w| (w.a, w.b));
                    assert_eq!(got, naive_mono_ap(&colors, k), "{c:?} k={k}");
                }
            }
        }
    }
}

#[test]
fn w32_agrees_with_exhaustive_enumeration() {
    let oracle = exhaustive_w(3, 2, 12).unwrap();
    let res = vdw_number(3, 2, 20).unwrap();
    assert_eq!(res.w(), Some(oracle));
    assert_eq!(oracle, 9);
    assert_eq!(exhaustive_w(2, 3, 6), vdw_number(2, 3, 20).unwrap().w());
    assert_eq!(exhaustive_w(3, 3, 8), None);
}

#[test]
fn w42_is_self_consistent_against_naive_refuter() {
    let res = vdw_number(4, 2, 40).unwrap();
    let w = res.w().unwrap();
    let cert = res.certificate();
    assert_eq!(cert.len(), w - 1);
    assert!(verify_certificate(cert, 4));
    assert_eq!(naive_mono_ap(cert.colors(), 4), None);
    assert!(!naive_good_coloring_exists(4, 2, w));
    assert!(naive_good_coloring_exists(4, 2, w - 1));
}

#[test]
fn vdw_is_monotone_in_both_arguments() {
    let mut table = Vec::new();
    for k in 1..=3usize {
        let row: Vec<usize> = (1..=3u8)
            .map(|r| vdw_number(k, r, 60).unwrap().w().unwrap())
            .collect();
        table.push(row);
    }
    for k in 0..3 {
        for r in 0..3 {
            if k + 1 < 3 {
                assert!(table[k][r] <= table[k + 1][r]);
            }
            if r + 1 < 3 {
                assert!(table[k][r] <= table[k][r + 1]);
            }
        }
    }
    for r in 1..=6u8 {
        assert_eq!(vdw_number(2, r, 20).unwrap().w(), Some(r as usize + 1));
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let opts = VdwOptions { split_depth: Some(8), ..Default::default() };
    let base = vdw_number_with(4, 2, 40, &opts).unwrap();
    assert_eq!(base.outcome, vdw_number(4, 2, 40).unwrap().outcome);
    for threads in [1, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let res = pool.install(|| vdw_number_with(4, 2, 40, &opts)).unwrap();
        assert_eq!(res.outcome, base.outcome);
        assert_eq!(res.stats.nodes, base.stats.nodes);
    }
}

#[test]
fn fractal_prefix_contains_a_four_term_progression() {
    let f = fractal_set(1, 10_000).unwrap();
    let w = find_ap_in_set(&f, 4).unwrap();
    assert_eq!((w.a, w.b), (1, 19));
    assert!(w.terms().all(|t| f.contains(t)));
}

#[test]
fn syndetic_sets_yield_verified_progressions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for len in 11..80 {
        let a = random_syndetic2(&mut rng, len);
        let s = syndetic_implies_ap(&a, 2, 3).unwrap();
        assert!(s.witness.terms().all(|t| a.contains(t)), "{a:?} {s:?}");
        assert!((1..=2).contains(&s.shift));
    }
}
