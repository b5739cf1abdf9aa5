//! Filters and ultrafilters on a finite universe `[1, m]`, `m <= 16`.
//!
//! Subsets are bitmasks (bit `i - 1` for element `i`) and families store one
//! flag per subset. On a finite universe every filter is the principal
//! filter of the intersection of its members, so every ultrafilter here is
//! principal; nothing in this module exhibits a non-principal one.

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Subset = u32;

pub const MAX_UNIVERSE: usize = 16;
/// Largest universe for the `3^m` partition-stability scan and the
/// partition enumerator.
pub const MAX_EXHAUSTIVE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Universe {
    size: usize,
}

impl Universe {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_UNIVERSE {
            return Err(Error::OutOfRange {
                what: "universe size",
                value: size,
                min: 1,
                max: MAX_UNIVERSE,
            });
        }
        Ok(Universe { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of subsets, `2^m`.
    pub fn powerset_len(&self) -> usize {
        1 << self.size
    }

    pub fn full(&self) -> Subset {
        ((1u64 << self.size) - 1) as Subset
    }

    pub fn complement(&self, s: Subset) -> Subset {
        !s & self.full()
    }

    /// All subsets in ascending bitmask order.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        0..=self.full()
    }

    pub fn check(&self, s: Subset) -> Result<Subset> {
        if s & !self.full() != 0 {
            return Err(Error::SubsetOutOfUniverse { subset: s, size: self.size });
        }
        Ok(s)
    }

    pub fn subset(&self, elems: &[usize]) -> Result<Subset> {
        elems.iter().try_fold(0, |acc, &x| {
            if x == 0 || x > self.size {
                return Err(Error::OutOfRange {
                    what: "universe element",
                    value: x,
                    min: 1,
                    max: self.size,
                });
            }
            Ok(acc | 1 << (x - 1))
        })
    }
}

pub fn elements(s: Subset) -> Vec<usize> {
    (0..32).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect()
}

/// A family of subsets, one membership flag per subset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    universe: Universe,
    flags: Vec<bool>,
}

impl SetFamily {
    pub fn empty(universe: Universe) -> Self {
        SetFamily {
            universe,
            flags: vec![false; universe.powerset_len()],
        }
    }

    pub fn from_members<I: IntoIterator<Item = Subset>>(universe: Universe, members: I) -> Result<Self> {
        let mut f = SetFamily::empty(universe);
        for s in members {
            f.flags[universe.check(s)? as usize] = true;
        }
        Ok(f)
    }

    pub fn from_lists(universe: Universe, lists: &[Vec<usize>]) -> Result<Self> {
        let members = lists.iter().map(|l| universe.subset(l)).collect::<Result<Vec<_>>>()?;
        SetFamily::from_members(universe, members)
    }

    pub fn from_fn(universe: Universe, f: impl Fn(Subset) -> bool) -> Self {
        SetFamily {
            universe,
            flags: universe.subsets().map(f).collect(),
        }
    }

    pub fn powerset(universe: Universe) -> Self {
        SetFamily::from_fn(universe, |_| true)
    }

    /// All supersets of `core`.
    pub fn principal_filter(universe: Universe, core: Subset) -> Self {
        SetFamily::from_fn(universe, |s| s & core == core)
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    #[inline]
    pub fn contains(&self, s: Subset) -> bool {
        self.flags.get(s as usize).copied().unwrap_or(false)
    }

    pub fn members(&self) -> impl Iterator<Item = Subset> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(s, _)| s as Subset)
    }

    pub fn len(&self) -> usize {
        self.flags.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.flags.iter().any(|&b| b)
    }

    pub fn is_subfamily(&self, other: &SetFamily) -> bool {
        self.universe == other.universe && self.members().all(|s| other.contains(s))
    }

    /// Intersection of all members (the full universe for an empty family).
    pub fn core(&self) -> Subset {
        self.members().fold(self.universe.full(), |acc, s| acc & s)
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.members().map(elements).collect()
    }
}

impl std::fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SetFamily(m={}, {:?})", self.universe.size, self.to_lists())
    }
}

impl Serialize for SetFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SetFamily", 2)?;
        st.serialize_field("universe", &self.universe.size)?;
        st.serialize_field("members", &self.to_lists())?;
        st.end()
    }
}

/// `{A : x ∈ A}`.
pub fn principal_ultrafilter(universe: Universe, x: usize) -> Result<SetFamily> {
    let s = universe.subset(&[x])?;
    Ok(SetFamily::principal_filter(universe, s))
}

/// A total predicate on the subsets of a universe.
#[derive(Clone, PartialEq, Eq)]
pub struct SetPredicate {
    universe: Universe,
    table: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name", content = "arg")]
pub enum Builtin {
    Nonempty,
    /// `A ∩ S ≠ ∅`.
    Meets(Vec<usize>),
    /// `A ⊇ G` for some listed `G`.
    ContainsSome(Vec<Vec<usize>>),
    /// `|A| >= k`.
    MinSize(usize),
}

impl SetPredicate {
    pub fn from_fn(universe: Universe, f: impl Fn(Subset) -> bool) -> Self {
        SetPredicate {
            universe,
            table: universe.subsets().map(f).collect(),
        }
    }

    pub fn builtin(universe: Universe, b: &Builtin) -> Result<Self> {
        Ok(match b {
            Builtin::Nonempty => SetPredicate::from_fn(universe, |a| a != 0),
            Builtin::Meets(s) => {
                let s = universe.subset(s)?;
                SetPredicate::from_fn(universe, move |a| a & s != 0)
            }
            Builtin::ContainsSome(fam) => {
                let gs = fam.iter().map(|g| universe.subset(g)).collect::<Result<Vec<_>>>()?;
                SetPredicate::from_fn(universe, move |a| gs.iter().any(|&g| g & !a == 0))
            }
            Builtin::MinSize(k) => SetPredicate::from_fn(universe, |a| a.count_ones() as usize >= *k),
        })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    #[inline]
    pub fn eval(&self, a: Subset) -> bool {
        self.table[a as usize]
    }
}

impl std::fmt::Debug for SetPredicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.table.iter().filter(|&&b| b).count();
        write!(f, "SetPredicate(m={}, true on {n} subsets)", self.universe.size)
    }
}

/// A failed filter or ultrafilter axiom with its first witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum FilterViolation {
    EmptyFamily,
    /// Axiom 1.
    ContainsEmptySet,
    /// Axiom 2: `member ⊆ superset` but `superset` is missing.
    NotUpwardClosed { member: Subset, superset: Subset },
    /// Axiom 3: `a ∩ b` is missing.
    NotIntersectionClosed { a: Subset, b: Subset },
    /// Axiom 4: neither `set` nor its complement is a member.
    Dichotomy { set: Subset },
}

impl FilterViolation {
    /// `0` for an empty family, otherwise the axiom number.
    pub fn axiom(&self) -> u8 {
        match self {
            FilterViolation::EmptyFamily => 0,
            FilterViolation::ContainsEmptySet => 1,
            FilterViolation::NotUpwardClosed { .. } => 2,
            FilterViolation::NotIntersectionClosed { .. } => 3,
            FilterViolation::Dichotomy { .. } => 4,
        }
    }
}

/// Every violated axiom with its first witness, in axiom order; witnesses
/// are lexicographically least in bitmask order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterCheck {
    pub holds: bool,
    pub violations: Vec<FilterViolation>,
}

impl FilterCheck {
    fn from(violations: Vec<FilterViolation>) -> Self {
        FilterCheck {
            holds: violations.is_empty(),
            violations,
        }
    }

    pub fn first(&self) -> Option<FilterViolation> {
        self.violations.first().copied()
    }
}

fn filter_violations(f: &SetFamily) -> Vec<FilterViolation> {
    let u = f.universe;
    let mut out = Vec::new();
    if f.is_empty() {
        out.push(FilterViolation::EmptyFamily);
        return out;
    }
    if f.contains(0) {
        out.push(FilterViolation::ContainsEmptySet);
    }
    // adding one element at a time reaches every superset
    let upward = f.members().find_map(|s| {
        (0..u.size)
            .map(|i| s | 1 << i)
            .find(|&t| !f.contains(t))
            .map(|t| (s, t))
    });
    if let Some((member, _)) = upward {
        // least missing superset of the least offending member
        let missing = u
            .subsets()
            .find(|&t| t & member == member && !f.contains(t))
            .unwrap_or(member);
        out.push(FilterViolation::NotUpwardClosed { member, superset: missing });
    }
    // an upward-closed family containing its core is the principal filter
    // of the core, so the pair scan is only needed otherwise
    if upward.is_some() || !f.contains(f.core()) {
        let members: Vec<Subset> = f.members().collect();
        let pair = members.iter().enumerate().find_map(|(i, &a)| {
            members[i + 1..]
                .iter()
                .find(|&&b| !f.contains(a & b))
                .map(|&b| (a, b))
        });
        if let Some((a, b)) = pair {
            out.push(FilterViolation::NotIntersectionClosed { a, b });
        }
    }
    out
}

/// Nonempty, `∅ ∉ F`, upward closed and closed under intersection.
pub fn is_filter(f: &SetFamily) -> FilterCheck {
    FilterCheck::from(filter_violations(f))
}

/// [`is_filter`] plus `A ∈ F` or `A^c ∈ F` for every subset `A`.
pub fn is_ultrafilter(f: &SetFamily) -> FilterCheck {
    let mut v = filter_violations(f);
    let u = f.universe;
    if let Some(set) = u.subsets().find(|&a| !f.contains(a) && !f.contains(u.complement(a))) {
        v.push(FilterViolation::Dichotomy { set });
    }
    FilterCheck::from(v)
}

/// The filter of supersets of finite intersections of `generators`.
///
/// If all of them intersect to `∅` the error lists an inclusion-minimal set
/// of generator indices that already does.
pub fn generate_filter(universe: Universe, generators: &[Subset]) -> Result<SetFamily> {
    for &g in generators {
        universe.check(g)?;
    }
    let meet = |idx: &[usize]| idx.iter().fold(universe.full(), |acc, &i| acc & generators[i]);
    let mut culprits: Vec<usize> = (0..generators.len()).collect();
    if meet(&culprits) != 0 {
        return Ok(SetFamily::principal_filter(universe, meet(&culprits)));
    }
    let mut i = 0;
    while i < culprits.len() {
        let mut without = culprits.clone();
        without.remove(i);
        if meet(&without) == 0 {
            culprits = without;
        } else {
            i += 1;
        }
    }
    Err(Error::EmptyIntersection { indices: culprits })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum SuperfilterViolation {
    /// `φ` fails on a member of the filter.
    FalseOnFilter { member: Subset },
    /// `a ⊆ b`, `φ(a)` and not `φ(b)`.
    NotMonotone { a: Subset, b: Subset },
    /// `φ(a)` but neither part of `a = part ⊎ (a \ part)`.
    NotPartitionStable { a: Subset, part: Subset },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuperfilterCheck {
    pub holds: bool,
    pub counterexample: Option<SuperfilterViolation>,
    /// False when the universe is too large for the partition scan.
    pub partition_checked: bool,
}

fn same_universe(phi: &SetPredicate, f: &SetFamily) -> Result<()> {
    if phi.universe != f.universe {
        return Err(Error::Precondition(format!(
            "predicate is over m = {} but the family is over m = {}",
            phi.universe.size, f.universe.size
        )));
    }
    Ok(())
}

fn superfilter_violation(phi: &SetPredicate, f: &SetFamily, partitions: bool) -> Option<SuperfilterViolation> {
    let u = f.universe;
    if let Some(member) = f.members().find(|&a| !phi.eval(a)) {
        return Some(SuperfilterViolation::FalseOnFilter { member });
    }
    for a in u.subsets().filter(|&a| phi.eval(a)) {
        if let Some(b) = (0..u.size).map(|i| a | 1 << i).find(|&b| !phi.eval(b)) {
            return Some(SuperfilterViolation::NotMonotone { a, b });
        }
    }
    if partitions {
        for a in u.subsets().filter(|&a| phi.eval(a)) {
            // every submask of `a`, descending
            let mut part = a;
            loop {
                if !phi.eval(part) && !phi.eval(a & !part) {
                    return Some(SuperfilterViolation::NotPartitionStable { a, part });
                }
                if part == 0 {
                    break;
                }
                part = (part - 1) & a;
            }
        }
    }
    None
}

/// The three conditions of the ultrafilter construction lemma: `φ` holds on
/// `F`, is monotone, and survives every split into two parts. The split scan
/// runs only for `m <= 12`.
pub fn check_superfilter(phi: &SetPredicate, f: &SetFamily) -> Result<SuperfilterCheck> {
    same_universe(phi, f)?;
    if !is_filter(f).holds {
        return Err(Error::Precondition("the family is not a filter".into()));
    }
    let partition_checked = f.universe.size <= MAX_EXHAUSTIVE;
    let counterexample = superfilter_violation(phi, f, partition_checked);
    Ok(SuperfilterCheck {
        holds: counterexample.is_none(),
        counterexample,
        partition_checked,
    })
}

/// An ultrafilter `p ⊇ F` with `φ` on every member.
///
/// Subsets are visited in ascending bitmask order. Each undecided `A` is
/// adjoined when `p[A]` avoids `∅` and stays `φ`-good, otherwise `A^c` is.
/// Since filters here are principal, `p[A]` is the principal filter of
/// `core(p) ∩ A`, and by monotonicity it is `φ`-good iff `φ(core(p) ∩ A)`.
pub fn extend_ultrafilter(f: &SetFamily, phi: &SetPredicate) -> Result<SetFamily> {
    let check = check_superfilter(phi, f)?;
    if let Some(v) = check.counterexample {
        return Err(Error::NotSuperfilter(format!("{v:?}")));
    }
    let u = f.universe;
    let mut core = f.core();
    for a in u.subsets() {
        let ac = u.complement(a);
        if core & a == core || core & ac == core {
            continue;
        }
        let good = |s: Subset| s != 0 && phi.eval(s);
        core = if good(core & a) {
            core & a
        } else if good(core & ac) {
            core & ac
        } else {
            // only reachable when partition stability was not scanned
            return Err(Error::NotSuperfilter(format!(
                "neither {:?} nor its complement extends the filter",
                elements(a)
            )));
        };
    }
    Ok(SetFamily::principal_filter(u, core))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum PartitionRegularity {
    /// Every member of the ultrafilter contains a member of `G`.
    Regular { witness: SetFamily },
    /// No part contains a member of `G`.
    Refuted { partition: Vec<Subset> },
}

impl PartitionRegularity {
    pub fn holds(&self) -> bool {
        matches!(self, PartitionRegularity::Regular { .. })
    }
}

/// `A` contains some member of `G`, for every subset `A`.
fn upward_closure(u: Universe, g: &[Subset]) -> Vec<bool> {
    let mut good = vec![false; u.powerset_len()];
    for &s in g {
        good[s as usize] = true;
    }
    for s in u.subsets() {
        if good[s as usize] {
            for i in 0..u.size {
                good[(s | 1 << i) as usize] = true;
            }
        }
    }
    good
}

/// Visit every set partition of `[1, m]` as a block list, in lexicographic
/// order of restricted growth strings. Stops when `visit` returns true.
fn find_partition(m: usize, mut visit: impl FnMut(&[Subset]) -> bool) -> Option<Vec<Subset>> {
    fn rec(i: usize, m: usize, blocks: &mut Vec<Subset>, visit: &mut dyn FnMut(&[Subset]) -> bool) -> bool {
        if i == m {
            return visit(blocks);
        }
        for b in 0..=blocks.len() {
            if b == blocks.len() {
                blocks.push(1 << i);
            } else {
                blocks[b] |= 1 << i;
            }
            if rec(i + 1, m, blocks, visit) {
                return true;
            }
            if b == blocks.len() - 1 && blocks[b] == 1 << i {
                blocks.pop();
            } else {
                blocks[b] &= !(1 << i);
            }
        }
        false
    }
    let mut blocks = Vec::new();
    let mut hit = None;
    rec(0, m, &mut blocks, &mut |p: &[Subset]| {
        if visit(p) {
            hit = Some(p.to_vec());
            true
        } else {
            false
        }
    });
    hit
}

/// The predicate of the partition-regularity proof: every partition of `A`
/// has a part containing a member of `G`. The finest partition of `A` is the
/// hardest one (coarsening keeps a good part good), so it alone decides.
pub fn partition_regular_predicate(u: Universe, g: &[Subset]) -> Result<SetPredicate> {
    for &s in g {
        u.check(s)?;
    }
    let good = upward_closure(u, g);
    Ok(SetPredicate::from_fn(u, |a| {
        (0..u.size).any(|i| a >> i & 1 == 1 && good[1 << i])
    }))
}

/// Decide by enumerating every partition of the universe (`m <= 12`).
///
/// On success the witness is the ultrafilter built by
/// [`extend_ultrafilter`] from the trivial filter `{X}` with
/// [`partition_regular_predicate`]; otherwise the first refuting partition.
pub fn partition_regular(u: Universe, g: &[Subset]) -> Result<PartitionRegularity> {
    for &s in g {
        u.check(s)?;
        if s == 0 {
            return Err(Error::Precondition("the empty set cannot be an interesting set".into()));
        }
    }
    if u.size > MAX_EXHAUSTIVE {
        return Err(Error::OutOfRange {
            what: "universe size for partition enumeration",
            value: u.size,
            min: 1,
            max: MAX_EXHAUSTIVE,
        });
    }
    let good = upward_closure(u, g);
    if let Some(partition) = find_partition(u.size, |blocks| !blocks.iter().any(|&b| good[b as usize])) {
        return Ok(PartitionRegularity::Refuted { partition });
    }
    let phi = partition_regular_predicate(u, g)?;
    let trivial = SetFamily::from_members(u, [u.full()])?;
    let witness = extend_ultrafilter(&trivial, &phi)?;
    Ok(PartitionRegularity::Regular { witness })
}
