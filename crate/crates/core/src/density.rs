//! Windowed density functionals with exact rational values.
//!
//! Nothing here takes a limit: upper Banach density is asymptotic, so callers
//! get the exact value for each window length and can sweep lengths with
//! [`density_profile`].

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground_set::{GroundSet, Interval};

/// Serialize a ratio as `{"num": .., "den": ..}`.
pub mod ratio_json {
    use num_rational::Ratio;
    use serde::ser::SerializeStruct;
    use serde::Serializer;

    pub fn serialize<T, S>(r: &Ratio<T>, s: S) -> Result<S::Ok, S::Error>
    where
        T: serde::Serialize + Clone + num_integer::Integer,
        S: Serializer,
    {
        let mut st = s.serialize_struct("Ratio", 2)?;
        st.serialize_field("num", r.numer())?;
        st.serialize_field("den", r.denom())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    #[serde(with = "ratio_json")]
    pub value: Ratio<u64>,
    pub witness: Interval,
    pub window_len_used: usize,
}

fn check_window(a: &GroundSet, n: usize) -> Result<()> {
    if n == 0 || n > a.window_len() {
        return Err(Error::OutOfRange {
            what: "window length N",
            value: n,
            min: 1,
            max: a.window_len(),
        });
    }
    Ok(())
}

/// `|A ∩ [1, N]| / N`.
pub fn prefix_density(a: &GroundSet, n: usize) -> Result<Ratio<u64>> {
    check_window(a, n)?;
    let c = a.count_in(Interval::new(0, n));
    Ok(Ratio::new(c as u64, n as u64))
}

/// Best length-`n` window using precomputed prefix counts. Leftmost on ties.
fn sup_from_counts(prefix: &[u32], n: usize) -> DensityReport {
    let len = prefix.len() - 1;
    let (mut best, mut best_m) = (0u32, 0usize);
    for m in 0..=len - n {
        let c = prefix[m + n] - prefix[m];
        if c > best {
            best = c;
            best_m = m;
        }
    }
    DensityReport {
        value: Ratio::new(best as u64, n as u64),
        witness: Interval::new(best_m, n),
        window_len_used: n,
    }
}

/// `max_M |A ∩ [M + 1, M + N]| / N` over windows inside `[1, L]`.
pub fn window_sup_density(a: &GroundSet, n: usize) -> Result<DensityReport> {
    check_window(a, n)?;
    Ok(sup_from_counts(&a.prefix_counts(), n))
}

/// [`window_sup_density`] for each `N`, in input order.
pub fn density_profile(a: &GroundSet, ns: &[usize]) -> Result<Vec<DensityReport>> {
    for &n in ns {
        check_window(a, n)?;
    }
    let prefix = a.prefix_counts();
    Ok(ns.par_iter().map(|&n| sup_from_counts(&prefix, n)).collect())
}

/// Mean of `f` over the window `w`, where `f[i - 1]` is the value at `i`.
pub fn window_average(f: &[i64], w: Interval) -> Result<Ratio<i64>> {
    if !w.fits(f.len()) {
        return Err(Error::OutOfRange {
            what: "interval end",
            value: w.end(),
            min: 1,
            max: f.len(),
        });
    }
    let sum: i64 = f[w.start..w.end()].iter().sum();
    Ok(Ratio::new(sum, w.len as i64))
}

/// The 0/1 indicator sequence of `a`.
pub fn indicator(a: &GroundSet) -> Vec<i64> {
    (1..=a.window_len()).map(|i| a.contains(i) as i64).collect()
}
