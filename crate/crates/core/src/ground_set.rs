//! Finite subsets of `[1, L]` stored as packed bit sequences.
//!
//! The natural numbers start at 1 throughout this crate: 0 is never a member,
//! and differences `a - b <= 0` are dropped from difference sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// The window `[start + 1, start + len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub len: usize,
}

impl Interval {
    pub fn new(start: usize, len: usize) -> Self {
        Interval { start, len }
    }

    /// The interval `[first, last]` (1-based, inclusive).
    pub fn from_bounds(first: usize, last: usize) -> Self {
        debug_assert!(first >= 1 && last + 1 >= first);
        Interval {
            start: first - 1,
            len: last + 1 - first,
        }
    }

    pub fn first(&self) -> usize {
        self.start + 1
    }

    pub fn last(&self) -> usize {
        self.start + self.len
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn contains(&self, i: usize) -> bool {
        i > self.start && i <= self.end()
    }

    pub fn fits(&self, window_len: usize) -> bool {
        self.len >= 1 && self.end() <= window_len
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.first()..=self.last()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.first(), self.last())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    /// Complement of the first operand; the second is ignored.
    Complement,
    /// `A \ B`.
    Minus,
}

/// A subset of `[1, window_len]`.
///
/// Bit `i - 1` of the packed words holds membership of `i`. Bits past the
/// window are always zero, so equality is plain word comparison.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    len: usize,
    words: Vec<u64>,
}

impl GroundSet {
    pub fn empty(len: usize) -> Self {
        GroundSet {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = GroundSet {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        s.clear_tail();
        s
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(len: usize, members: I) -> Result<Self> {
        let mut s = GroundSet::empty(len);
        for m in members {
            if m == 0 || m > len {
                return Err(Error::OutOfRange {
                    what: "member",
                    value: m,
                    min: 1,
                    max: len,
                });
            }
            s.set(m);
        }
        Ok(s)
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut s = GroundSet::empty(len);
        for i in 1..=len {
            if f(i) {
                s.set(i);
            }
        }
        s
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        GroundSet::from_fn(bits.len(), |i| bits[i - 1])
    }

    /// Multiples of `step` in `[1, len]`.
    pub fn multiples(len: usize, step: usize) -> Self {
        GroundSet::progression(len, step, step)
    }

    /// `{first, first + step, first + 2 step, ...}` clipped to `[1, len]`.
    pub fn progression(len: usize, first: usize, step: usize) -> Self {
        assert!(first >= 1 && step >= 1);
        let mut s = GroundSet::empty(len);
        let mut i = first;
        while i <= len {
            s.set(i);
            i += step;
        }
        s
    }

    pub fn window_len(&self) -> usize {
        self.len
    }

    fn set(&mut self, i: usize) {
        self.words[(i - 1) / WORD] |= 1 << ((i - 1) % WORD);
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Membership of `i`; anything outside `[1, window_len]` is absent.
    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.len && (self.words[(i - 1) / WORD] >> ((i - 1) % WORD)) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn members(&self) -> Members<'_> {
        Members {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn min(&self) -> Option<usize> {
        self.members().next()
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * WORD + (WORD - w.leading_zeros() as usize))
    }

    pub fn is_subset(&self, other: &GroundSet) -> bool {
        self.len == other.len && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Running counts: entry `i` is `|A ∩ [1, i]|`, entry 0 is 0.
    pub fn prefix_counts(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len + 1);
        out.push(0u32);
        let mut c = 0u32;
        for i in 1..=self.len {
            c += self.contains(i) as u32;
            out.push(c);
        }
        out
    }

    pub fn count_in(&self, w: Interval) -> usize {
        w.iter().filter(|&i| self.contains(i)).count()
    }

    /// The shift `A - n = {k : k + n ∈ A}`, observed on the shrunken window
    /// `[1, L - n]`.
    pub fn shift(&self, n: usize) -> Result<GroundSet> {
        if n >= self.len {
            return Err(Error::EmptyWindow {
                shift: n,
                len: self.len,
            });
        }
        Ok(self.shift_down(n, self.len - n))
    }

    /// Same window, different length: truncates or pads with absences.
    pub fn resize(&self, len: usize) -> GroundSet {
        self.shift_down(0, len)
    }

    /// Bit `j` of the result is bit `j + n` of `self`, for `j < out_len`.
    pub(crate) fn shift_down(&self, n: usize, out_len: usize) -> GroundSet {
        let mut out = GroundSet::empty(out_len);
        let (wo, bo) = (n / WORD, n % WORD);
        let src = &self.words;
        let at = |i: usize| src.get(i).copied().unwrap_or(0);
        for (w, slot) in out.words.iter_mut().enumerate() {
            let lo = at(w + wo);
            *slot = if bo == 0 {
                lo
            } else {
                (lo >> bo) | (at(w + wo + 1) << (WORD - bo))
            };
        }
        out.clear_tail();
        out
    }

    /// Bit `j` of the result is bit `j - n` of `self` (zero for `j < n`).
    pub(crate) fn shift_up(&self, n: usize, out_len: usize) -> GroundSet {
        let mut out = GroundSet::empty(out_len);
        let (wo, bo) = (n / WORD, n % WORD);
        let src = &self.words;
        let at = |i: isize| {
            if i < 0 {
                0
            } else {
                src.get(i as usize).copied().unwrap_or(0)
            }
        };
        for (w, slot) in out.words.iter_mut().enumerate() {
            let i = w as isize - wo as isize;
            *slot = if bo == 0 {
                at(i)
            } else {
                (at(i) << bo) | (at(i - 1) >> (WORD - bo))
            };
        }
        out.clear_tail();
        out
    }

    pub fn combine(&self, other: &GroundSet, op: BoolOp) -> Result<GroundSet> {
        if op != BoolOp::Complement && self.len != other.len {
            return Err(Error::WindowMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(match op {
            BoolOp::Complement => self.complement(),
            BoolOp::Union => self.zip_words(other, |a, b| a | b),
            BoolOp::Intersect => self.zip_words(other, |a, b| a & b),
            BoolOp::Minus => self.zip_words(other, |a, b| a & !b),
        })
    }

    fn zip_words(&self, other: &GroundSet, f: impl Fn(u64, u64) -> u64) -> GroundSet {
        let mut s = GroundSet {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        };
        s.clear_tail();
        s
    }

    pub fn complement(&self) -> GroundSet {
        let mut s = GroundSet {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.clear_tail();
        s
    }

    pub fn union(&self, other: &GroundSet) -> Result<GroundSet> {
        self.combine(other, BoolOp::Union)
    }

    pub fn intersect(&self, other: &GroundSet) -> Result<GroundSet> {
        self.combine(other, BoolOp::Intersect)
    }

    pub fn minus(&self, other: &GroundSet) -> Result<GroundSet> {
        self.combine(other, BoolOp::Minus)
    }

    /// In-place union with a set of the same or shorter window.
    pub(crate) fn or_assign(&mut self, other: &GroundSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.clear_tail();
    }

    pub(crate) fn and_assign(&mut self, other: &GroundSet) {
        for (i, a) in self.words.iter_mut().enumerate() {
            *a &= other.words.get(i).copied().unwrap_or(0);
        }
    }

    pub(crate) fn intersects(&self, other: &GroundSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// The 0/1 string of length `window_len`.
    pub fn to_bit_string(&self) -> String {
        (1..=self.len).map(|i| if self.contains(i) { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(s: &str) -> Result<GroundSet> {
        let mut out = GroundSet::empty(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '1' => out.set(i + 1),
                '0' => {}
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        token: ch.to_string(),
                    })
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            write!(f, "GroundSet({})", self.to_bit_string())
        } else {
            write!(f, "GroundSet(len={}, count={})", self.len, self.count())
        }
    }
}

pub struct Members<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Members<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + bit + 1);
            }
            self.idx += 1;
            self.cur = *self.words.get(self.idx)?;
        }
    }
}

/// `A - B = {a - b : a ∈ A, b ∈ B} ∩ [1, L]`.
pub fn difference_set(a: &GroundSet, b: &GroundSet) -> Result<GroundSet> {
    if a.len != b.len {
        return Err(Error::WindowMismatch {
            left: a.len,
            right: b.len,
        });
    }
    let mut out = GroundSet::empty(a.len);
    for x in b.members() {
        if x >= a.len {
            break;
        }
        // a - x >= 1 iff bit (x + j - 1) of a, i.e. a shifted down by x
        out.or_assign(&a.shift_down(x, a.len));
    }
    Ok(out)
}

/// `A + B` clipped to `[1, clip_len]`.
pub fn sumset(a: &GroundSet, b: &GroundSet, clip_len: usize) -> GroundSet {
    let mut out = GroundSet::empty(clip_len);
    let base = a.resize(clip_len);
    for x in b.members() {
        if x >= clip_len {
            break;
        }
        out.or_assign(&base.shift_up(x, clip_len));
    }
    out
}

/// All nonempty subset sums of a strictly increasing sequence, clipped to
/// `[1, clip_len]`.
pub fn finite_sums(seq: &[usize], clip_len: usize) -> Result<GroundSet> {
    if seq.is_empty() {
        return Err(Error::InvalidSequence("empty sequence".into()));
    }
    if seq[0] == 0 {
        return Err(Error::InvalidSequence("terms must be positive".into()));
    }
    if let Some(w) = seq.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSequence(format!(
            "not strictly increasing at {} >= {}",
            w[0], w[1]
        )));
    }
    let mut out = GroundSet::empty(clip_len);
    for &n in seq {
        if n > clip_len {
            break;
        }
        let moved = out.shift_up(n, clip_len);
        out.or_assign(&moved);
        out.set(n);
    }
    Ok(out)
}

/// Textual form of a set file body.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetForm {
    Bits,
    List,
}

/// Render a set file: `len=<L>` then `bits=...` or `list=...`.
pub fn write_set_file(a: &GroundSet, form: SetForm) -> String {
    let body = match form {
        SetForm::Bits => format!("bits={}", a.to_bit_string()),
        SetForm::List => {
            let items: Vec<String> = a.members().map(|m| m.to_string()).collect();
            format!("list={}", items.join(","))
        }
    };
    format!("len={}\n{}\n", a.len, body)
}

pub fn parse_set_file(text: &str) -> Result<GroundSet> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        token: "<empty file>".into(),
    })?;
    let len: usize = header
        .strip_prefix("len=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse {
            line: ln,
            token: header.to_string(),
        })?;
    let (ln, body) = lines.next().ok_or(Error::Parse {
        line: ln + 1,
        token: "<missing body>".into(),
    })?;
    let set = if let Some(bits) = body.strip_prefix("bits=") {
        if bits.len() != len {
            return Err(Error::Parse {
                line: ln,
                token: format!("bits of length {} (expected {len})", bits.len()),
            });
        }
        GroundSet::from_bit_string(bits).map_err(|e| match e {
            Error::Parse { token, .. } => Error::Parse { line: ln, token },
            other => other,
        })?
    } else if let Some(list) = body.strip_prefix("list=") {
        let mut members = Vec::new();
        for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let m: usize = tok.parse().map_err(|_| Error::Parse {
                line: ln,
                token: tok.to_string(),
            })?;
            if m == 0 || m > len {
                return Err(Error::Parse {
                    line: ln,
                    token: tok.to_string(),
                });
            }
            members.push(m);
        }
        GroundSet::from_members(len, members)?
    } else {
        return Err(Error::Parse {
            line: ln,
            token: body.to_string(),
        });
    };
    if let Some((ln, extra)) = lines.next() {
        return Err(Error::Parse {
            line: ln,
            token: extra.to_string(),
        });
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(len: usize, m: &[usize]) -> GroundSet {
        GroundSet::from_members(len, m.iter().copied()).unwrap()
    }

    fn members(a: &GroundSet) -> Vec<usize> {
        a.members().collect()
    }

    #[test]
    fn shift_examples() {
        assert_eq!(set(8, &[5]).shift(2).unwrap(), set(6, &[3]));
        let evens = GroundSet::multiples(10, 2);
        assert_eq!(evens.shift(0).unwrap(), evens);
        let a2 = GroundSet::from_bit_string("1101100").unwrap();
        assert_eq!(a2.shift(3).unwrap(), set(4, &[1, 2]));
    }

    #[test]
    fn shift_rejects_whole_window() {
        let a = set(5, &[1]);
        assert_eq!(a.shift(5), Err(Error::EmptyWindow { shift: 5, len: 5 }));
    }

    #[test]
    fn boolean_examples() {
        let a = set(7, &[1, 2, 4, 5]);
        assert!(a.intersect(&a.complement()).unwrap().is_empty());
        let evens = GroundSet::multiples(10, 2);
        let odds = GroundSet::progression(10, 1, 2);
        assert_eq!(evens.union(&odds).unwrap(), GroundSet::full(10));
        assert_eq!(members(&a.intersect(&set(7, &[2, 4, 6])).unwrap()), vec![2, 4]);
        assert!(matches!(
            a.union(&set(8, &[])),
            Err(Error::WindowMismatch { left: 7, right: 8 })
        ));
    }

    #[test]
    fn difference_set_examples() {
        let m3 = GroundSet::multiples(30, 3);
        assert_eq!(
            members(&difference_set(&m3, &m3).unwrap()),
            (1..=9).map(|i| 3 * i).collect::<Vec<_>>()
        );
        assert_eq!(members(&difference_set(&set(12, &[10]), &set(12, &[3])).unwrap()), vec![7]);
        let primes = set(13, &[2, 3, 5, 7, 11, 13]);
        assert_eq!(
            members(&difference_set(&primes, &set(13, &[1])).unwrap()),
            vec![1, 2, 4, 6, 10, 12]
        );
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(members(&sumset(&set(10, &[1]), &set(10, &[1]), 10)), vec![2]);
        let evens = GroundSet::multiples(10, 2);
        assert_eq!(sumset(&evens, &evens, 20), GroundSet::from_fn(20, |i| i >= 4 && i % 2 == 0));
        let a = set(10, &[1, 2, 4]);
        assert_eq!(members(&sumset(&a, &a, 10)), vec![2, 3, 4, 5, 6, 8]);
    }

    #[test]
    fn finite_sums_examples() {
        assert_eq!(members(&finite_sums(&[1, 2, 4], 10).unwrap()), (1..=7).collect::<Vec<_>>());
        assert_eq!(members(&finite_sums(&[5], 10).unwrap()), vec![5]);
        assert_eq!(members(&finite_sums(&[1, 10], 10).unwrap()), vec![1, 10]);
        assert!(matches!(finite_sums(&[3, 3], 10), Err(Error::InvalidSequence(_))));
        assert!(matches!(finite_sums(&[], 10), Err(Error::InvalidSequence(_))));
    }

    #[test]
    fn set_file_both_forms() {
        let a = set(12, &[1, 5, 12]);
        assert_eq!(write_set_file(&a, SetForm::Bits), "len=12\nbits=100010000001\n");
        assert_eq!(write_set_file(&a, SetForm::List), "len=12\nlist=1,5,12\n");
        assert_eq!(parse_set_file("len=3\nlist=\n").unwrap(), GroundSet::empty(3));
    }

    #[test]
    fn set_file_errors_name_token() {
        let err = parse_set_file("len=4\nbits=10x1\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, token: "x".into() });
        let err = parse_set_file("len=4\nlist=1,9\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, token: "9".into() });
        let err = parse_set_file("length=4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    fn arb_set(max_len: usize) -> impl Strategy<Value = GroundSet> {
        (1..=max_len)
            .prop_flat_map(|len| proptest::collection::vec(any::<bool>(), len))
            .prop_map(|bits| GroundSet::from_bools(&bits))
    }

    proptest! {
        #[test]
        fn set_file_round_trip(a in arb_set(300), list in any::<bool>()) {
            let form = if list { SetForm::List } else { SetForm::Bits };
            prop_assert_eq!(parse_set_file(&write_set_file(&a, form)).unwrap(), a);
        }

        #[test]
        fn shift_matches_definition(a in arb_set(300), n in 0usize..300) {
            prop_assume!(n < a.window_len());
            let s = a.shift(n).unwrap();
            prop_assert_eq!(s.window_len(), a.window_len() - n);
            for k in 1..=s.window_len() {
                prop_assert_eq!(s.contains(k), a.contains(k + n));
            }
        }

        #[test]
        fn shift_composes(a in arb_set(300), n in 0usize..150, m in 0usize..150) {
            prop_assume!(n + m < a.window_len());
            prop_assert_eq!(a.shift(n).unwrap().shift(m).unwrap(), a.shift(n + m).unwrap());
        }

        #[test]
        fn de_morgan(bits in proptest::collection::vec((any::<bool>(), any::<bool>()), 1..300)) {
            let a = GroundSet::from_fn(bits.len(), |i| bits[i - 1].0);
            let b = GroundSet::from_fn(bits.len(), |i| bits[i - 1].1);
            prop_assert_eq!(
                a.union(&b).unwrap().complement(),
                a.complement().intersect(&b.complement()).unwrap()
            );
            prop_assert_eq!(a.minus(&b).unwrap(), a.intersect(&b.complement()).unwrap());
        }

        #[test]
        fn difference_set_matches_pairs(bits in proptest::collection::vec((any::<bool>(), any::<bool>()), 1..120)) {
            let a = GroundSet::from_fn(bits.len(), |i| bits[i - 1].0);
            let b = GroundSet::from_fn(bits.len(), |i| bits[i - 1].1);
            let d = difference_set(&a, &b).unwrap();
            let expect = GroundSet::from_fn(bits.len(), |k| {
                a.members().any(|x| b.members().any(|y| x > y && x - y == k))
            });
            prop_assert_eq!(d, expect);
        }

        #[test]
        fn self_difference_bounded_by_span(a in arb_set(300)) {
            let d = difference_set(&a, &a).unwrap();
            if let (Some(lo), Some(hi)) = (a.min(), a.max()) {
                prop_assert!(d.max().is_none_or(|m| m <= hi - lo));
            } else {
                prop_assert!(d.is_empty());
            }
        }

        #[test]
        fn finite_sums_prefix_monotone(raw in proptest::collection::btree_set(1usize..60, 1..7), clip in 1usize..200) {
            let seq: Vec<usize> = raw.into_iter().collect();
            let full = finite_sums(&seq, clip).unwrap();
            for p in 1..seq.len() {
                let part = finite_sums(&seq[..p], clip).unwrap();
                prop_assert!(part.is_subset(&full));
            }
        }
    }
}
