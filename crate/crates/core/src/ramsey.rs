//! Monochromatic progressions, van der Waerden numbers and finite-sums search.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground_set::{finite_sums, GroundSet};
use crate::structure::is_syndetic;

/// Letters used for colors `1, 2, 3, ...` in certificate strings.
pub const PALETTE: &[u8; 26] = b"RBGYOPCMWKLNQSTUVXZADEFHIJ";

/// A total coloring `[1, N] -> {1, ..., r}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<u8>,
    num_colors: u8,
}

impl Coloring {
    /// `colors[i - 1]` is the color of `i`, each in `1..=num_colors`.
    pub fn new(colors: Vec<u8>, num_colors: u8) -> Result<Self> {
        if num_colors == 0 {
            return Err(Error::Precondition("a coloring needs at least one color".into()));
        }
        if let Some(pos) = colors.iter().position(|&c| c == 0 || c > num_colors) {
            return Err(Error::OutOfRange {
                what: "color",
                value: colors[pos] as usize,
                min: 1,
                max: num_colors as usize,
            });
        }
        Ok(Coloring { colors, num_colors })
    }

    pub fn monochrome(len: usize) -> Self {
        Coloring {
            colors: vec![1; len],
            num_colors: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn num_colors(&self) -> u8 {
        self.num_colors
    }

    /// Color of `i` for `1 <= i <= len`.
    #[inline]
    pub fn color(&self, i: usize) -> u8 {
        self.colors[i - 1]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    /// Parse a palette string with an explicit color count.
    pub fn parse(s: &str, num_colors: u8) -> Result<Self> {
        let colors = s
            .chars()
            .map(|ch| {
                PALETTE
                    .iter()
                    .position(|&p| p as char == ch)
                    .map(|i| i as u8 + 1)
                    .ok_or_else(|| Error::Parse {
                        line: 1,
                        token: ch.to_string(),
                    })
            })
            .collect::<Result<Vec<u8>>>()?;
        Coloring::new(colors, num_colors)
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.colors {
            write!(f, "{}", PALETTE[c as usize - 1] as char)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coloring({self}, r={})", self.num_colors)
    }
}

/// Colors are inferred as the largest palette index used.
impl FromStr for Coloring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let top = s
            .chars()
            .filter_map(|ch| PALETTE.iter().position(|&p| p as char == ch))
            .max()
            .map_or(1, |i| i as u8 + 1);
        Coloring::parse(s, top)
    }
}

impl Serialize for Coloring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Certificate file: a `r=<r> k=<k>` header line, then the color string.
pub fn write_certificate(c: &Coloring, k: usize) -> String {
    format!("r={} k={}\n{}\n", c.num_colors(), k, c)
}

pub fn parse_certificate(text: &str) -> Result<(Coloring, usize)> {
    let mut lines = text.lines().map(str::trim);
    let header = lines.next().unwrap_or("");
    let mut r = None;
    let mut k = None;
    for tok in header.split_whitespace() {
        let bad = || Error::Parse {
            line: 1,
            token: tok.to_string(),
        };
        match tok.split_once('=') {
            Some(("r", v)) => r = Some(v.parse::<u8>().map_err(|_| bad())?),
            Some(("k", v)) => k = Some(v.parse::<usize>().map_err(|_| bad())?),
            _ => return Err(bad()),
        }
    }
    let (Some(r), Some(k)) = (r, k) else {
        return Err(Error::Parse {
            line: 1,
            token: header.to_string(),
        });
    };
    let body = lines.next().unwrap_or("");
    let c = Coloring::parse(body, r).map_err(|e| match e {
        Error::Parse { token, .. } => Error::Parse { line: 2, token },
        other => other,
    })?;
    Ok((c, k))
}

/// The progression `a, a + b, ..., a + (k - 1) b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ApWitness {
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub color: Option<u8>,
}

impl ApWitness {
    pub fn terms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.k).map(move |j| self.a + j * self.b)
    }

    pub fn last(&self) -> usize {
        self.a + (self.k - 1) * self.b
    }
}

/// Lexicographically least `(a, b)` whose `k`-term progression is
/// monochromatic. `k = 0` has no witness.
pub fn find_mono_ap(c: &Coloring, k: usize) -> Option<ApWitness> {
    let n = c.len();
    if k == 0 || n == 0 {
        return None;
    }
    if k == 1 {
        return Some(ApWitness {
            a: 1,
            b: 1,
            k: 1,
            color: Some(c.color(1)),
        });
    }
    for a in 1..=n {
        let col = c.color(a);
        let mut b = 1;
        while a + (k - 1) * b <= n {
            if (1..k).all(|j| c.color(a + j * b) == col) {
                return Some(ApWitness {
                    a,
                    b,
                    k,
                    color: Some(col),
                });
            }
            b += 1;
        }
    }
    None
}

/// True iff `c` has no monochromatic `k`-AP, i.e. `c` shows `W(k, r) > len`.
pub fn verify_certificate(c: &Coloring, k: usize) -> bool {
    find_mono_ap(c, k).is_none()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VdwOptions {
    /// Abort after this many attempted extensions.
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    /// Prefix depth at which the tree is split into independent subtrees.
    pub split_depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum VdwOutcome {
    /// Every coloring of `[1, w]` has a monochromatic `k`-AP; the certificate
    /// colors `[1, w - 1]` without one.
    Found { w: usize, certificate: Coloring },
    /// Some coloring of `[1, cap]` avoids monochromatic `k`-APs.
    ExceededCap { cap: usize, certificate: Coloring },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VdwResult {
    pub k: usize,
    pub r: u8,
    #[serde(flatten)]
    pub outcome: VdwOutcome,
    pub stats: SearchStats,
}

impl VdwResult {
    pub fn w(&self) -> Option<usize> {
        match self.outcome {
            VdwOutcome::Found { w, .. } => Some(w),
            VdwOutcome::ExceededCap { .. } => None,
        }
    }

    pub fn certificate(&self) -> &Coloring {
        match &self.outcome {
            VdwOutcome::Found { certificate, .. } | VdwOutcome::ExceededCap { certificate, .. } => certificate,
        }
    }
}

const DEFAULT_SPLIT: usize = 14;

struct Limits<'a> {
    nodes: &'a AtomicU64,
    abort: &'a AtomicBool,
    node_budget: Option<u64>,
    deadline: Option<Instant>,
}

impl Limits<'_> {
    fn charge(&self, n: u64) -> bool {
        let total = self.nodes.fetch_add(n, Ordering::Relaxed) + n;
        let over = self.node_budget.is_some_and(|b| total > b)
            || self.deadline.is_some_and(|d| Instant::now() >= d);
        if over {
            self.abort.store(true, Ordering::Relaxed);
        }
        !self.abort.load(Ordering::Relaxed)
    }
}

/// Depth-first extension of one partial coloring, colors 0-based.
struct Dfs<'a> {
    k: usize,
    r: u8,
    limit: usize,
    colors: Vec<u8>,
    /// Restricted-growth bound: colors used so far.
    used: Vec<u8>,
    nodes: u64,
    pending: u64,
    best: Vec<u8>,
    hit_limit: bool,
    limits: &'a Limits<'a>,
    aborted: bool,
    frontier: Option<&'a mut Vec<Vec<u8>>>,
}

impl Dfs<'_> {
    /// A monochromatic `k`-AP ends at `pos` if it gets color `c`.
    #[inline]
    fn closes_ap(&self, pos: usize, c: u8) -> bool {
        let k = self.k;
        if k == 1 {
            return true;
        }
        let mut b = 1;
        while (k - 1) * b <= pos {
            if (1..k).all(|j| self.colors[pos - j * b] == c) {
                return true;
            }
            b += 1;
        }
        false
    }

    /// Returns false to stop the whole search.
    fn extend(&mut self) -> bool {
        let pos = self.colors.len();
        if pos > self.best.len() {
            self.best.clear();
            self.best.extend_from_slice(&self.colors);
        }
        if pos == self.limit {
            match self.frontier.as_deref_mut() {
                Some(f) => {
                    f.push(self.colors.clone());
                    return true;
                }
                None => {
                    self.hit_limit = true;
                    return false;
                }
            }
        }
        let used = self.used.last().copied().unwrap_or(0);
        let top = (used + 1).min(self.r);
        for c in 0..top {
            self.nodes += 1;
            self.pending += 1;
            if self.pending >= 1 << 10 {
                let ok = self.limits.charge(self.pending);
                self.pending = 0;
                if !ok {
                    self.aborted = true;
                    return false;
                }
            }
            if self.closes_ap(pos, c) {
                continue;
            }
            self.colors.push(c);
            self.used.push(used.max(c + 1));
            let go_on = self.extend();
            self.colors.pop();
            self.used.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

struct SubtreeResult {
    best: Vec<u8>,
    hit_cap: bool,
    nodes: u64,
    aborted: bool,
}

fn run_subtree(
    k: usize,
    r: u8,
    limit: usize,
    prefix: &[u8],
    limits: &Limits<'_>,
    frontier: Option<&mut Vec<Vec<u8>>>,
) -> SubtreeResult {
    let mut used = Vec::with_capacity(limit);
    let mut top = 0u8;
    for &c in prefix {
        top = top.max(c + 1);
        used.push(top);
    }
    let mut dfs = Dfs {
        k,
        r,
        limit,
        colors: prefix.to_vec(),
        used,
        nodes: 0,
        pending: 0,
        best: Vec::new(),
        hit_limit: false,
        limits,
        aborted: false,
        frontier,
    };
    dfs.extend();
    if !dfs.aborted && !limits.charge(dfs.pending) {
        dfs.aborted = true;
    }
    SubtreeResult {
        best: dfs.best,
        hit_cap: dfs.hit_limit,
        nodes: dfs.nodes,
        aborted: dfs.aborted,
    }
}

fn to_coloring(colors: &[u8], r: u8) -> Coloring {
    Coloring {
        colors: colors.iter().map(|c| c + 1).collect(),
        num_colors: r,
    }
}

/// `W(k, r)` by exhaustive depth-first extension, searching lengths up to
/// `cap`.
pub fn vdw_number(k: usize, r: u8, cap: usize) -> Result<VdwResult> {
    vdw_number_with(k, r, cap, &VdwOptions::default())
}

/// Positions are colored left to right with colors in ascending order, and a
/// new color may only be opened after all smaller ones are in use (so
/// position 1 always gets color 1). The tree is cut at a fixed prefix depth
/// and the subtrees are searched in parallel on the current rayon pool;
/// results are merged in prefix order, so they do not depend on the number
/// of workers.
pub fn vdw_number_with(k: usize, r: u8, cap: usize, opts: &VdwOptions) -> Result<VdwResult> {
    if k == 0 || r == 0 || cap == 0 {
        return Err(Error::Precondition("k, r and cap must be positive".into()));
    }
    let start = Instant::now();
    let nodes = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let limits = Limits {
        nodes: &nodes,
        abort: &abort,
        node_budget: opts.node_budget,
        deadline: opts.time_budget.map(|t| start + t),
    };
    let split = opts.split_depth.unwrap_or(DEFAULT_SPLIT).min(cap);

    let mut frontier = Vec::new();
    let head = run_subtree(k, r, split, &[], &limits, Some(&mut frontier));
    let mut total_nodes = head.nodes;
    let mut best = head.best;
    let mut aborted = head.aborted;
    let mut capped: Option<Vec<u8>> = None;

    if !aborted && split < cap {
        let subs: Vec<SubtreeResult> = frontier
            .par_iter()
            .map(|p| run_subtree(k, r, cap, p, &limits, None))
            .collect();
        for s in subs {
            total_nodes += s.nodes;
            aborted |= s.aborted;
            if s.hit_cap && capped.is_none() {
                capped = Some(s.best.clone());
            }
            if s.best.len() > best.len() {
                best = s.best;
            }
        }
    } else if !aborted {
        // split == cap: frontier entries are colorings of length cap
        capped = frontier.first().cloned();
    }

    if aborted {
        return Err(Error::BudgetExhausted {
            nodes: nodes.load(Ordering::Relaxed),
            best: to_coloring(&best, r),
        });
    }
    let stats = SearchStats {
        nodes: total_nodes,
        elapsed: start.elapsed(),
    };
    let outcome = match capped {
        Some(c) => VdwOutcome::ExceededCap {
            cap,
            certificate: to_coloring(&c, r),
        },
        None => VdwOutcome::Found {
            w: best.len() + 1,
            certificate: to_coloring(&best, r),
        },
    };
    Ok(VdwResult { k, r, outcome, stats })
}

/// Pull a 2-partition of the positions of `p` back through
/// `j -> p.a + (j - 1) p.b`, find a monochromatic `k`-AP among the positions
/// and push it forward into the original numbers.
pub fn mono_ap_in_partition_of_ap(p: &ApWitness, part: &Coloring, k: usize) -> Result<Option<ApWitness>> {
    if part.len() != p.k || p.b == 0 || p.a == 0 {
        return Err(Error::Precondition(format!(
            "partition covers {} positions but the progression has {} terms",
            part.len(),
            p.k
        )));
    }
    Ok(find_mono_ap(part, k).map(|w| ApWitness {
        a: p.a + (w.a - 1) * p.b,
        b: w.b * p.b,
        k: w.k,
        color: w.color,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FsWitness {
    pub seq: Vec<usize>,
    pub color: u8,
}

/// Lexicographically least increasing `n_1 < ... < n_m` whose finite-sums
/// set is monochromatic and inside `[1, min(len, sum_cap)]`.
///
/// Absence only says nothing was found below the cap.
pub fn find_mono_fs(c: &Coloring, m: usize, sum_cap: usize) -> Option<FsWitness> {
    let limit = c.len().min(sum_cap);
    if m == 0 {
        return None;
    }
    let mut seq = Vec::with_capacity(m);
    let mut sums = Vec::new();
    if fs_extend(c, m, limit, &mut seq, &mut sums, 0) {
        let color = c.color(seq[0]);
        Some(FsWitness { seq, color })
    } else {
        None
    }
}

fn fs_extend(c: &Coloring, m: usize, limit: usize, seq: &mut Vec<usize>, sums: &mut Vec<usize>, total: usize) -> bool {
    if seq.len() == m {
        return true;
    }
    let rem = m - seq.len();
    let from = seq.last().map_or(1, |&x| x + 1);
    for n in from..=limit {
        // n, n + 1, ..., n + rem - 1 must still fit
        if total + n * rem + rem * (rem - 1) / 2 > limit {
            break;
        }
        let col = seq.first().map_or(c.color(n), |&f| c.color(f));
        if c.color(n) != col || sums.iter().any(|&s| c.color(s + n) != col) {
            continue;
        }
        let before = sums.len();
        for i in 0..before {
            sums.push(sums[i] + n);
        }
        sums.push(n);
        seq.push(n);
        if fs_extend(c, m, limit, seq, sums, total + n) {
            return true;
        }
        seq.pop();
        sums.truncate(before);
    }
    false
}

/// Recompute the finite-sums set of `w` and check it is monochromatic.
pub fn verify_fs(c: &Coloring, w: &FsWitness) -> bool {
    match finite_sums(&w.seq, c.len()) {
        Ok(fs) => {
            let total: usize = w.seq.iter().sum();
            total <= c.len() && fs.members().all(|x| c.color(x) == w.color)
        }
        Err(_) => false,
    }
}

/// Lexicographically least `(a, b)` with the `k`-AP inside `a`.
pub fn find_ap_in_set(a: &GroundSet, k: usize) -> Option<ApWitness> {
    if k == 0 {
        return None;
    }
    let n = a.window_len();
    for x in a.members() {
        if k == 1 {
            return Some(ApWitness { a: x, b: 1, k, color: None });
        }
        let mut b = 1;
        while x + (k - 1) * b <= n {
            if (1..k).all(|j| a.contains(x + j * b)) {
                return Some(ApWitness { a: x, b, k, color: None });
            }
            b += 1;
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyndeticAp {
    pub witness: ApWitness,
    /// The shift `i` whose color class held the progression.
    pub shift: usize,
    /// `W(k, d)` used to size the coloring.
    pub vdw: usize,
}

/// A `k`-AP inside a set syndetic at gap `d`, found by coloring each
/// `n ∈ [1, W(k, d)]` with the least `i ∈ [1, d]` such that `n + i ∈ A`
/// and translating a monochromatic progression of color `i` by `i`.
pub fn syndetic_implies_ap(a: &GroundSet, d: usize, k: usize) -> Result<SyndeticAp> {
    if !is_syndetic(a, d)?.holds {
        return Err(Error::Precondition(format!("set is not syndetic at d = {d}")));
    }
    if d > u8::MAX as usize || k == 0 {
        return Err(Error::Precondition("need k >= 1 and d <= 255".into()));
    }
    let room = a.window_len() - d;
    if room == 0 {
        return Err(Error::Precondition("window too short".into()));
    }
    let w = vdw_number(k, d as u8, room)?
        .w()
        .ok_or_else(|| Error::Precondition(format!("window shorter than W({k}, {d}) + {d}")))?;
    let colors = (1..=w)
        .map(|n| (1..=d).find(|&i| a.contains(n + i)).map(|i| i as u8))
        .collect::<Option<Vec<u8>>>()
        .ok_or_else(|| Error::Precondition("shift cover broke inside the window".into()))?;
    let coloring = Coloring::new(colors, d as u8)?;
    let mono = find_mono_ap(&coloring, k)
        .ok_or_else(|| Error::Precondition(format!("no monochromatic {k}-AP in [1, {w}]")))?;
    let shift = mono.color.map_or(1, |c| c as usize);
    Ok(SyndeticAp {
        witness: ApWitness {
            a: mono.a + shift,
            b: mono.b,
            k,
            color: None,
        },
        shift,
        vdw: w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(s: &str) -> Coloring {
        Coloring::parse(s, 2).unwrap()
    }

    /// All `r^n` colorings, as 1-based color vectors.
    fn all_colorings(n: usize, r: u8) -> impl Iterator<Item = Vec<u8>> {
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

    #[test]
    fn mono_ap_examples() {
        let w = find_mono_ap(&Coloring::monochrome(5), 5).unwrap();
        assert_eq!((w.a, w.b, w.k), (1, 1, 5));
        assert_eq!(find_mono_ap(&col("RRBBRRBB"), 3), None);
        assert_eq!(find_mono_ap(&col("R"), 1).map(|w| (w.a, w.b)), Some((1, 1)));
    }

    #[test]
    fn every_two_coloring_of_nine_has_a_three_ap() {
        for colors in all_colorings(9, 2) {
            let c = Coloring::new(colors, 2).unwrap();
            let w = find_mono_ap(&c, 3).unwrap();
            assert!(w.terms().all(|t| Some(c.color(t)) == w.color));
        }
    }

    #[test]
    fn certificate_examples() {
        assert!(verify_certificate(&col("RRBBRRBB"), 3));
        let c = col("RRBBRRBBR");
        assert!(!verify_certificate(&c, 3));
        assert_eq!(find_mono_ap(&c, 3).map(|w| (w.a, w.b)), Some((1, 4)));
        assert!(!verify_certificate(&col("RB"), 1));
    }

    #[test]
    fn certificate_file_round_trip() {
        let c = col("RRBBRRBB");
        let text = write_certificate(&c, 3);
        assert_eq!(text, "r=2 k=3\nRRBBRRBB\n");
        assert_eq!(parse_certificate(&text).unwrap(), (c, 3));
        assert!(matches!(parse_certificate("r=2 q=3\nRB\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_certificate("r=2 k=3\nRBG\n"), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn vdw_small_values() {
        for r in 1..=4 {
            assert_eq!(vdw_number(1, r, 5).unwrap().w(), Some(1));
        }
        assert_eq!(vdw_number(2, 2, 10).unwrap().w(), Some(3));
        let res = vdw_number(3, 2, 20).unwrap();
        assert_eq!(res.w(), Some(9));
        assert_eq!(res.certificate().to_string(), "RRBBRRBB");
        assert_eq!(vdw_number(3, 1, 20).unwrap().w(), Some(3));
    }

    #[test]
    fn vdw_cap_semantics() {
        assert_eq!(vdw_number(3, 2, 9).unwrap().w(), Some(9));
        let res = vdw_number(3, 2, 8).unwrap();
        match &res.outcome {
            VdwOutcome::ExceededCap { cap, certificate } => {
                assert_eq!(*cap, 8);
                assert!(verify_certificate(certificate, 3));
                assert_eq!(certificate.len(), 8);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn vdw_independent_of_split_depth() {
        let base = vdw_number(3, 3, 30).unwrap();
        assert_eq!(base.w(), Some(27));
        for split in [1, 3, 9, 26, 30] {
            let opts = VdwOptions {
                split_depth: Some(split),
                ..Default::default()
            };
            let res = vdw_number_with(3, 3, 30, &opts).unwrap();
            assert_eq!(res.outcome, base.outcome);
        }
    }

    #[test]
    fn vdw_budget_reports_best_so_far() {
        let opts = VdwOptions {
            node_budget: Some(1000),
            ..Default::default()
        };
        match vdw_number_with(4, 2, 40, &opts) {
            Err(Error::BudgetExhausted { best, .. }) => assert!(verify_certificate(&best, 4)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn partition_of_ap_examples() {
        let p = ApWitness { a: 5, b: 3, k: 9, color: None };
        let w = mono_ap_in_partition_of_ap(&p, &Coloring::monochrome(9), 3).unwrap().unwrap();
        assert!(w.a >= 5 && w.b.is_multiple_of(3));
        assert!(w.terms().all(|t| t >= 5 && (t - 5) % 3 == 0 && t <= 5 + 8 * 3));

        let id = ApWitness { a: 1, b: 1, k: 8, color: None };
        assert_eq!(mono_ap_in_partition_of_ap(&id, &col("RRBBRRBB"), 3).unwrap(), None);

        let p = ApWitness { a: 2, b: 2, k: 9, color: None };
        for colors in all_colorings(9, 2) {
            let part = Coloring::new(colors, 2).unwrap();
            let w = mono_ap_in_partition_of_ap(&p, &part, 3).unwrap().unwrap();
            // pull back and recheck the colors
            for t in w.terms() {
                assert_eq!((t - 2) % 2, 0);
                assert_eq!(Some(part.color((t - 2) / 2 + 1)), w.color);
            }
        }
        assert!(mono_ap_in_partition_of_ap(&p, &col("RB"), 3).is_err());
    }

    /// Every increasing m-tuple, in lexicographic order.
    fn fs_oracle(c: &Coloring, m: usize, cap: usize) -> Option<FsWitness> {
        let limit = c.len().min(cap);
        fn rec(c: &Coloring, m: usize, limit: usize, seq: &mut Vec<usize>) -> Option<Vec<usize>> {
            if seq.len() == m {
                let total: usize = seq.iter().sum();
                if total > limit {
                    return None;
                }
                let col = c.color(seq[0]);
                let ok = (1u32..1 << m).all(|mask| {
                    let s: usize = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| seq[i]).sum();
                    c.color(s) == col
                });
                return ok.then(|| seq.clone());
            }
            let from = seq.last().map_or(1, |&x| x + 1);
            for n in from..=limit {
                seq.push(n);
                if let Some(found) = rec(c, m, limit, seq) {
                    return Some(found);
                }
                seq.pop();
            }
            None
        }
        rec(c, m, limit, &mut Vec::new()).map(|seq| FsWitness {
            color: c.color(seq[0]),
            seq,
        })
    }

    #[test]
    fn fs_examples() {
        let mono = Coloring::monochrome(7);
        let w = find_mono_fs(&mono, 3, 100).unwrap();
        assert_eq!(w.seq, vec![1, 2, 3]);
        assert_eq!(fs_oracle(&mono, 3, 100), Some(w.clone()));
        assert!(verify_fs(&mono, &w));

        assert_eq!(find_mono_fs(&col("BRRB"), 1, 10).unwrap().seq, vec![1]);
        assert_eq!(find_mono_fs(&col("RBRB"), 2, 10), None);
        assert_eq!(fs_oracle(&col("RBRB"), 2, 10), None);
    }

    #[test]
    fn fs_agrees_with_oracle() {
        for n in 1..=9 {
            for colors in all_colorings(n, 2) {
                let c = Coloring::new(colors, 2).unwrap();
                for m in 1..=3 {
                    let got = find_mono_fs(&c, m, 8);
                    assert_eq!(got, fs_oracle(&c, m, 8), "{c:?} m={m}");
                    if let Some(w) = got {
                        assert!(verify_fs(&c, &w));
                    }
                }
            }
        }
    }

    #[test]
    fn ap_in_set_examples() {
        let evens = GroundSet::multiples(20, 2);
        let w = find_ap_in_set(&evens, 5).unwrap();
        assert_eq!((w.a, w.b, w.k), (2, 2, 5));
        let pow2 = GroundSet::from_members(16, [1, 2, 4, 8, 16]).unwrap();
        assert_eq!(find_ap_in_set(&pow2, 3), None);
        // brute force over all (a, b)
        let brute = (1..=16).any(|a| (1..=8).any(|b| (0..3).all(|j| pow2.contains(a + j * b))));
        assert!(!brute);
    }

    #[test]
    fn syndetic_ap_examples() {
        let evens = GroundSet::multiples(40, 2);
        let s = syndetic_implies_ap(&evens, 2, 3).unwrap();
        assert_eq!(s.vdw, 9);
        assert!(s.witness.terms().all(|t| evens.contains(t)));

        let non3 = GroundSet::from_fn(60, |n| n % 3 != 0);
        let s = syndetic_implies_ap(&non3, 2, 3).unwrap();
        assert!(s.witness.terms().all(|t| non3.contains(t)));

        assert!(syndetic_implies_ap(&GroundSet::multiples(40, 3), 2, 3).is_err());
        assert!(syndetic_implies_ap(&GroundSet::multiples(10, 2), 2, 3).is_err());
        let tight = GroundSet::from_fn(11, |n| n % 2 == 1);
        assert!(syndetic_implies_ap(&tight, 2, 3).is_ok());
    }
}
