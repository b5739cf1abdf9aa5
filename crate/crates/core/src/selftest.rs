//! Cross-module invariant suite run at small sizes from a seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::{count_word, fractal_stats, fractal_word, FractalSpec};
use crate::filter_lab::{
    is_ultrafilter, partition_regular, principal_ultrafilter, SetFamily, Subset, Universe,
};
use crate::ground_set::GroundSet;
use crate::structure::{cover_by_shifts, intersection_of_shifts, is_syndetic, is_thick};

/// Deliberate defects for checking that the suite notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Shifts by `n >= 2` flip membership of `1` in the result.
    CorruptShift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Random cases per invariant.
    pub trials: usize,
    pub fault: Option<Fault>,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            trials: 200,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantResult {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub config: SelftestConfig,
    pub passed: bool,
    pub invariants: Vec<InvariantResult>,
}

impl SelftestReport {
    pub fn failing(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.invariants.iter().filter(|r| !r.passed).map(|r| r.name)
    }
}

struct Suite {
    rng: ChaCha8Rng,
    fault: Option<Fault>,
    trials: usize,
    results: Vec<InvariantResult>,
}

impl Suite {
    fn shift(&self, a: &GroundSet, n: usize) -> GroundSet {
        let mut s = a.shift(n).expect("shift inside the window");
        if self.fault == Some(Fault::CorruptShift) && n >= 2 {
            let flipped = GroundSet::from_fn(s.window_len(), |i| i == 1);
            s = s.combine(&flipped, crate::ground_set::BoolOp::Union).unwrap();
            if a.contains(n + 1) {
                s = s.minus(&flipped).unwrap();
            }
        }
        s
    }

    fn random_set(&mut self, len: usize) -> GroundSet {
        let p: f64 = self.rng.gen_range(0.05..0.95);
        let rng = &mut self.rng;
        GroundSet::from_fn(len, |_| rng.gen_bool(p))
    }

    fn run(&mut self, name: &'static str, cases: usize, mut case: impl FnMut(&mut Self) -> Option<String>) {
        let mut first_failure = None;
        for _ in 0..cases {
            if let Some(msg) = case(self) {
                first_failure.get_or_insert(msg);
            }
        }
        self.results.push(InvariantResult {
            name,
            passed: first_failure.is_none(),
            cases,
            first_failure,
        });
    }
}

/// Run every invariant; the report depends only on `cfg`.
pub fn run_selftest(cfg: &SelftestConfig) -> SelftestReport {
    let mut s = Suite {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        fault: cfg.fault,
        trials: cfg.trials,
        results: Vec::new(),
    };
    let t = s.trials;

    s.run("shift-associativity", t, |s| {
        let len = s.rng.gen_range(8..300);
        let a = s.random_set(len);
        let n = s.rng.gen_range(0..len / 2);
        let m = s.rng.gen_range(0..len / 2);
        let lhs = s.shift(&s.shift(&a, n), m);
        let rhs = s.shift(&a, n + m);
        (lhs != rhs).then(|| format!("L={len} n={n} m={m}"))
    });

    s.run("shift-distributes-over-intersection", t, |s| {
        let len = s.rng.gen_range(8..300);
        let (a, b) = (s.random_set(len), s.random_set(len));
        let n = s.rng.gen_range(0..len);
        let lhs = s.shift(&a.intersect(&b).unwrap(), n);
        let rhs = s.shift(&a, n).intersect(&s.shift(&b, n)).unwrap();
        (lhs != rhs).then(|| format!("L={len} n={n}"))
    });

    s.run("shift-distributes-over-union", t, |s| {
        let len = s.rng.gen_range(8..300);
        let (a, b) = (s.random_set(len), s.random_set(len));
        let n = s.rng.gen_range(0..len);
        let lhs = s.shift(&a.union(&b).unwrap(), n);
        let rhs = s.shift(&a, n).union(&s.shift(&b, n)).unwrap();
        (lhs != rhs).then(|| format!("L={len} n={n}"))
    });

    s.run("thick-iff-shift-intersection-nonempty", t, |s| {
        let len = s.rng.gen_range(16..300);
        let a = s.random_set(len);
        let n = s.rng.gen_range(1..16);
        let thick = is_thick(&a, n).unwrap().holds;
        let shifts: Vec<usize> = (0..n).collect();
        let meet = !intersection_of_shifts(&a, &shifts).unwrap().is_empty();
        (thick != meet).then(|| format!("L={len} N={n}"))
    });

    s.run("syndetic-iff-complement-not-thick", t, |s| {
        let len = s.rng.gen_range(16..300);
        let a = s.random_set(len);
        let d = s.rng.gen_range(1..16);
        let syn = is_syndetic(&a, d).unwrap().holds;
        let thick = is_thick(&a.complement(), d).unwrap().holds;
        (syn == thick).then(|| format!("L={len} d={d}"))
    });

    s.run("syndetic-iff-shift-cover", t, |s| {
        let len = s.rng.gen_range(16..300);
        let a = s.random_set(len);
        let d = s.rng.gen_range(1..16);
        let syn = is_syndetic(&a, d).unwrap().holds;
        let cover = cover_by_shifts(&a, d).unwrap().holds;
        (syn != cover).then(|| format!("L={len} d={d}"))
    });

    s.run("fractal-closed-forms", 4 * 11, {
        let mut next = 0usize;
        move |_| {
            let (k, n) = (next / 11 + 1, next % 11);
            next += 1;
            let spec = FractalSpec::new(k, n).unwrap();
            let word = fractal_word(spec).unwrap();
            (count_word(&word) != fractal_stats(spec).unwrap()).then(|| format!("k={k} n={n}"))
        }
    });

    s.run("principal-ultrafilters-accepted", 4 + 5, {
        let mut next = 0usize;
        move |_| {
            let (m, x) = if next < 4 { (4, next + 1) } else { (5, next - 3) };
            next += 1;
            let u = Universe::new(m).unwrap();
            let p = principal_ultrafilter(u, x).unwrap();
            (!is_ultrafilter(&p).holds).then(|| format!("m={m} x={x}"))
        }
    });

    s.run("ultrafilter-dichotomy", t, |s| {
        let m = s.rng.gen_range(1..=4);
        let u = Universe::new(m).unwrap();
        // biased toward near-principal families
        let x = s.rng.gen_range(0..m);
        let noise: Subset = s.rng.gen_range(0..u.powerset_len() as Subset);
        let f = SetFamily::from_fn(u, |a| (a >> x & 1 == 1) != (a == noise));
        if !is_ultrafilter(&f).holds {
            return None;
        }
        let core = f.core();
        let points = core.count_ones() == 1;
        let lattice = u.subsets().all(|a| {
            u.subsets().all(|b| {
                f.contains(a & b) == (f.contains(a) && f.contains(b)) && f.contains(a | b) == (f.contains(a) || f.contains(b))
            })
        });
        (!points || !lattice).then(|| format!("m={m} {f:?}"))
    });

    s.run("partition-regular-iff-singleton", t, |s| {
        let m = s.rng.gen_range(1..=4);
        let u = Universe::new(m).unwrap();
        let count = s.rng.gen_range(0..5);
        let g: Vec<Subset> = (0..count).map(|_| s.rng.gen_range(1..u.powerset_len() as Subset)).collect();
        let regular = partition_regular(u, &g).unwrap().holds();
        let singleton = g.iter().any(|x| x.count_ones() == 1);
        (regular != singleton).then(|| format!("m={m} G={g:?}"))
    });

    let invariants = s.results;
    SelftestReport {
        config: *cfg,
        passed: invariants.iter().all(|r| r.passed),
        invariants,
    }
}
