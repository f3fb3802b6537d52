//! How far can a survivor be pushed with strictly negative continuation?
//!
//! Extend an admissible prefix `q(1..n0)` by the recurrence with `f(n) = -1`
//! for every `n > n0`, i.e. `q(n) = q(n - q(n-1)) - 1`.  Values can only ever
//! reference earlier values minus one, so the extension always dies below the
//! window — and it dies quickly: if `B` is the largest value in the prefix,
//! each pass of the extension burns one unit of height, giving the bound
//! `D(n0, B) = n0 + B*(B+1)/2` on the death index.  [`nk_ladder`] lists the
//! intermediate checkpoints `n_k = n0 + k*B - k*(k-1)/2` that the height
//! argument steps through (`n_0 = n0`, `n_B = D`).
//!
//! [`exhaustive_negext`] measures how sharp the bound is by brute force: it
//! walks *all* `n0!` admissible prefixes of length `n0`, extends each one,
//! and reports the latest death observed together with how many prefixes
//! achieve it.  The walk is a depth-first product scan, parallelised by
//! splitting on the first two free coordinates (`q(2)`, `q(3)`) into six
//! independent subtrees.

use crate::seqcore::QSeq;
use crate::{Error, Result};
use rayon::prelude::*;

/// Prefix lengths above this are refused unless the caller raises the limit:
/// the search visits `n0!` prefixes, which passes ten billion at `n0 = 14`.
pub const DEFAULT_SEARCH_LIMIT: u32 = 10;

/// `D(n0, B) = n0 + B*(B+1)/2`, the index by which every `(-1)`-extension of
/// a length-`n0` prefix with maximum value `B` has died.
pub fn death_bound(n0: u64, b: u64) -> Result<u64> {
    b.checked_mul(b + 1)
        .map(|t| t / 2)
        .and_then(|t| n0.checked_add(t))
        .ok_or(Error::Overflow { index: n0 as usize })
}

/// The checkpoint ladder `n_k = n0 + k*B - k*(k-1)/2` for `k = 0 ..= B`:
/// strictly increasing (each step shrinks by one), ending at the death bound.
pub fn nk_ladder(n0: u64, b: u64) -> Result<Vec<u64>> {
    // Computed incrementally; the closed form is checked in tests.
    let mut out = Vec::with_capacity(b as usize + 1);
    let mut n = n0;
    out.push(n);
    for k in 1..=b {
        n = n
            .checked_add(b - (k - 1))
            .ok_or(Error::Overflow { index: n0 as usize })?;
        out.push(n);
    }
    Ok(out)
}

/// Extends `q` with `-1` steps until the first inadmissible value and returns
/// the death index.  The prefix itself must be non-empty.
pub fn negative_extension_death(q: &QSeq) -> Result<usize> {
    if q.is_empty() {
        return Err(Error::input("prefix must be non-empty"));
    }
    let mut buf: Vec<i64> = q.terms().to_vec();
    Ok(extend_to_death(&mut buf, q.len()))
}

/// Core loop shared with the exhaustive search: `buf` holds an admissible
/// prefix of length `n0`; extend in place until death, return the death index.
fn extend_to_death(buf: &mut Vec<i64>, n0: usize) -> usize {
    let mut n = n0;
    loop {
        n += 1;
        let nested = n - buf[n - 2] as usize;
        let candidate = buf[nested - 1] - 1;
        if candidate < 1 {
            return n;
        }
        // candidate <= (previous value) - 1 < n, so only the lower side can fail.
        debug_assert!(candidate < n as i64);
        buf.push(candidate);
    }
}

/// What the exhaustive search over all prefixes of one length found.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct NegExtReport {
    pub n0: u32,
    /// Latest death index observed over all `n0!` prefixes.
    pub d_comp: u64,
    /// Number of prefixes achieving `d_comp`.
    pub n_d: u64,
    /// Largest prefix maximum among the achievers.
    pub b_comp: u64,
    /// The a-priori bound `D(n0, b_comp)`; always `>= d_comp`.
    pub d_formula: u64,
    /// A few of the achieving prefixes, in search order.
    pub examples: Vec<Vec<i64>>,
}

const EXAMPLE_CAP: usize = 4;

#[derive(Default)]
struct SearchAcc {
    d_max: u64,
    count: u64,
    b_max: u64,
    examples: Vec<Vec<i64>>,
}

impl SearchAcc {
    fn observe(&mut self, prefix: &[i64], death: u64) {
        if death < self.d_max {
            return;
        }
        if death > self.d_max {
            self.d_max = death;
            self.count = 0;
            self.b_max = 0;
            self.examples.clear();
        }
        self.count += 1;
        self.b_max = self.b_max.max(*prefix.iter().max().unwrap() as u64);
        if self.examples.len() < EXAMPLE_CAP {
            self.examples.push(prefix.to_vec());
        }
    }

    fn merge(mut self, other: SearchAcc) -> SearchAcc {
        if other.d_max < self.d_max {
            return self;
        }
        if other.d_max > self.d_max {
            return other;
        }
        self.count += other.count;
        self.b_max = self.b_max.max(other.b_max);
        for e in other.examples {
            if self.examples.len() < EXAMPLE_CAP {
                self.examples.push(e);
            }
        }
        self
    }
}

/// Scans one subtree: `q(2)` and `q(3)` fixed, positions `4..=n0` free.
fn scan_subtree(n0: usize, q2: i64, q3: i64) -> SearchAcc {
    let mut acc = SearchAcc::default();
    let mut digits: Vec<i64> = vec![1; n0];
    digits[1] = q2;
    digits[2] = q3;
    let mut buf: Vec<i64> = Vec::with_capacity(n0 + 80);
    loop {
        buf.clear();
        buf.extend_from_slice(&digits);
        let death = extend_to_death(&mut buf, n0);
        acc.observe(&digits, death as u64);
        // Odometer over the free coordinates, last position fastest.
        let mut i = n0;
        loop {
            if i == 3 {
                return acc;
            }
            if digits[i - 1] < i as i64 {
                digits[i - 1] += 1;
                break;
            }
            digits[i - 1] = 1;
            i -= 1;
        }
    }
}

/// Runs the full search for `4 <= n0`.  Refuses `n0` beyond `limit`
/// (default [`DEFAULT_SEARCH_LIMIT`]) because the cost is `n0!`.
pub fn exhaustive_negext(n0: u32, limit: Option<u32>) -> Result<NegExtReport> {
    let limit = limit.unwrap_or(DEFAULT_SEARCH_LIMIT);
    if n0 < 4 {
        return Err(Error::input("search needs n0 >= 4"));
    }
    if n0 > limit {
        return Err(Error::limit(format!(
            "n0 = {n0} exceeds the search limit {limit} (cost grows as n0!)"
        )));
    }
    let splits: Vec<(i64, i64)> = (1..=2)
        .flat_map(|a| (1..=3).map(move |b| (a, b)))
        .collect();
    let acc = splits
        .into_par_iter()
        .map(|(a, b)| scan_subtree(n0 as usize, a, b))
        .reduce(SearchAcc::default, SearchAcc::merge);
    let d_formula = death_bound(n0 as u64, acc.b_max)?;
    Ok(NegExtReport {
        n0,
        d_comp: acc.d_max,
        n_d: acc.count,
        b_comp: acc.b_max,
        d_formula,
        examples: acc.examples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_and_ladder_agree() {
        assert_eq!(death_bound(4, 3).unwrap(), 10);
        assert_eq!(death_bound(10, 9).unwrap(), 55);
        for n0 in 3..20u64 {
            for b in 1..=n0 {
                let ladder = nk_ladder(n0, b).unwrap();
                assert_eq!(ladder.len() as u64, b + 1);
                assert_eq!(ladder[0], n0);
                assert_eq!(*ladder.last().unwrap(), death_bound(n0, b).unwrap());
                // Closed form n_k = n0 + k*b - k*(k-1)/2.
                for (k, &nk) in ladder.iter().enumerate() {
                    let k = k as u64;
                    assert_eq!(nk, n0 + k * b - k * k.saturating_sub(1) / 2);
                }
                assert!(ladder.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn single_extension_death() {
        // (1, 1, 3, 2): q(5) = q(5-2)-1 = 2, q(6) = q(6-2)-1 = 1,
        // q(7) = q(7-1)-1 = 0 -> dies at 7.
        let q = QSeq::new(vec![1, 1, 3, 2]).unwrap();
        assert_eq!(negative_extension_death(&q).unwrap(), 7);
        // All-ones prefix dies immediately: q(n0+1) = q(n0) - 1 = 0.
        let q = QSeq::new(vec![1, 1, 1, 1]).unwrap();
        assert_eq!(negative_extension_death(&q).unwrap(), 5);
    }

    #[test]
    fn search_smallest_case() {
        let r = exhaustive_negext(4, None).unwrap();
        assert_eq!(r.d_comp, 7);
        assert_eq!(r.n_d, 2);
        assert_eq!(r.b_comp, 3);
        assert_eq!(r.d_formula, 10);
        assert_eq!(r.examples, vec![vec![1, 1, 3, 2], vec![1, 2, 3, 2]]);
    }

    #[test]
    fn search_respects_limit() {
        assert!(matches!(
            exhaustive_negext(11, None),
            Err(Error::Limit(_))
        ));
        assert!(exhaustive_negext(3, None).is_err());
    }

    #[test]
    fn every_death_within_per_prefix_bound() {
        // For each admissible prefix the death obeys D(n0, max(q)) — checked
        // exhaustively at n0 = 6.
        let n0 = 6usize;
        let mut digits = vec![1i64; n0];
        loop {
            let q = QSeq::new(digits.clone()).unwrap();
            let death = negative_extension_death(&q).unwrap() as u64;
            let bound = death_bound(n0 as u64, q.max_value() as u64).unwrap();
            assert!(death <= bound, "q = {digits:?}: died {death}, bound {bound}");
            let mut i = n0;
            loop {
                if i == 0 {
                    return;
                }
                if digits[i - 1] < i as i64 {
                    digits[i - 1] += 1;
                    break;
                }
                digits[i - 1] = 1;
                i -= 1;
            }
        }
    }
}
