//! Core engine for the recurrence `q(n) = q(n - q(n-1)) + f(n)`.
//!
//! A candidate value at index `n` is admissible when `1 <= q(n) <= n`; this
//! window is exactly what keeps the nested index `n+1 - q(n)` of the *next*
//! step inside `[1, n]`, so a sequence is well-defined up to `n` if and only
//! if every prefix value sits in the window.  The first index whose candidate
//! leaves the window is the *death* of the sequence, and we record which side
//! was violated together with the offending candidate value.
//!
//! For any `q` with all terms in the window, the driving sequence is recovered
//! by `f(n) = q(n) - q(n - q(n-1))` (and `f(1) = 0`).  This makes
//! [`q_from_f`] / [`f_from_q`] mutually inverse bijections between length-`n`
//! admissible `q` (of which there are `n!`) and the set `F_n` of surviving
//! drivers.  Much of the rest of the crate is organised around walking one
//! side of this bijection because the other side is easier to reason about.

use crate::{Error, Result};
use serde::Serialize;

/// A driver sequence `f(1), f(2), ...`, 1-based, with `f(1) = 0`.
///
/// No survival property is implied: an `FSeq` may well die when run through
/// [`q_from_f`].  The only construction invariants are non-emptiness and the
/// forced first term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FSeq {
    terms: Vec<i64>,
}

impl FSeq {
    pub fn new(terms: Vec<i64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::input("an f-sequence needs at least one term"));
        }
        if terms[0] != 0 {
            return Err(Error::input(format!(
                "f(1) must be 0, got {}",
                terms[0]
            )));
        }
        Ok(FSeq { terms })
    }

    /// Builds `f(1..=n)` by evaluating `f` at each index.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("an f-sequence needs at least one term"));
        }
        Self::new((1..=n).map(|i| f(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one term
    }

    /// `f(n)`, 1-based.  Panics if `n` is 0 or past the end.
    pub fn term(&self, n: usize) -> i64 {
        self.terms[n - 1]
    }

    /// All terms as a slice; index `n` lives at position `n - 1`.
    pub fn terms(&self) -> &[i64] {
        &self.terms
    }

    pub fn push(&mut self, value: i64) {
        self.terms.push(value);
    }

    /// The first `n` terms as a new sequence.  Panics if `n` is 0 or too large.
    pub fn truncated(&self, n: usize) -> FSeq {
        assert!(n >= 1 && n <= self.terms.len());
        FSeq {
            terms: self.terms[..n].to_vec(),
        }
    }
}

/// An admissible value sequence: `1 <= q(n) <= n` for every term.
///
/// Construction validates the window, so holding a `QSeq` is proof that the
/// whole prefix survived.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSeq {
    terms: Vec<i64>,
}

impl QSeq {
    pub fn new(terms: Vec<i64>) -> Result<Self> {
        for (i, &v) in terms.iter().enumerate() {
            let n = (i + 1) as i64;
            if v < 1 || v > n {
                return Err(Error::input(format!(
                    "q({n}) = {v} is outside the admissible window [1, {n}]"
                )));
            }
        }
        Ok(QSeq { terms })
    }

    /// Used by engines that have already performed the window check per term.
    pub(crate) fn from_checked(terms: Vec<i64>) -> QSeq {
        debug_assert!(terms
            .iter()
            .enumerate()
            .all(|(i, &v)| v >= 1 && v <= (i + 1) as i64));
        QSeq { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `q(n)`, 1-based.  Panics if `n` is 0 or past the end.
    pub fn term(&self, n: usize) -> i64 {
        self.terms[n - 1]
    }

    pub fn terms(&self) -> &[i64] {
        &self.terms
    }

    /// Largest value in the sequence; 0 for the empty sequence.
    pub fn max_value(&self) -> i64 {
        self.terms.iter().copied().max().unwrap_or(0)
    }
}

/// Which side of the admissible window `[1, n]` a candidate left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeathKind {
    BelowOne,
    AboveIndex,
}

/// The first inadmissible step of a run: at `index`, the recurrence produced
/// `candidate`, which fell on the `kind` side of `[1, index]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Death {
    pub index: usize,
    pub kind: DeathKind,
    pub candidate: i64,
}

/// Result of running the recurrence: the surviving prefix plus, if the run
/// ended early, the death record.  On death the prefix holds exactly
/// `death.index - 1` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOutcome {
    pub prefix: QSeq,
    pub death: Option<Death>,
}

impl GenOutcome {
    pub fn survived(&self) -> bool {
        self.death.is_none()
    }

    /// The full value sequence if the run survived, `None` otherwise.
    pub fn q(&self) -> Option<&QSeq> {
        if self.survived() {
            Some(&self.prefix)
        } else {
            None
        }
    }
}

/// Checks a candidate against the window `[1, n]`.
#[inline]
pub(crate) fn admit(n: usize, candidate: i64) -> Option<Death> {
    if candidate > n as i64 {
        Some(Death {
            index: n,
            kind: DeathKind::AboveIndex,
            candidate,
        })
    } else if candidate < 1 {
        Some(Death {
            index: n,
            kind: DeathKind::BelowOne,
            candidate,
        })
    } else {
        None
    }
}

/// Runs the recurrence for `n_max >= 1` steps, drawing `f(n)` lazily from a
/// callback.  The callback is consulted for `n = 1` first, which must return
/// 0; after a death no further values are requested.
pub fn q_from_f_with(n_max: usize, mut f: impl FnMut(usize) -> i64) -> Result<GenOutcome> {
    if n_max == 0 {
        return Err(Error::input("n_max must be at least 1"));
    }
    let f1 = f(1);
    if f1 != 0 {
        return Err(Error::input(format!("f(1) must be 0, got {f1}")));
    }
    let mut q: Vec<i64> = Vec::with_capacity(n_max);
    q.push(1);
    for n in 2..=n_max {
        // q(n-1) is in [1, n-1], so the nested index n - q(n-1) is in [1, n-1]
        // and the lookup below cannot go out of range.
        let nested = n - q[n - 2] as usize;
        let base = q[nested - 1];
        let candidate = base
            .checked_add(f(n))
            .ok_or(Error::Overflow { index: n })?;
        if let Some(death) = admit(n, candidate) {
            return Ok(GenOutcome {
                prefix: QSeq::from_checked(q),
                death: Some(death),
            });
        }
        q.push(candidate);
    }
    Ok(GenOutcome {
        prefix: QSeq::from_checked(q),
        death: None,
    })
}

/// Runs the recurrence on the first `n_max` terms of `f`.
pub fn q_from_f(f: &FSeq, n_max: usize) -> Result<GenOutcome> {
    if f.len() < n_max {
        return Err(Error::input(format!(
            "f has {} terms but n_max = {n_max}",
            f.len()
        )));
    }
    q_from_f_with(n_max, |n| f.term(n))
}

/// Recovers the driver from an admissible value sequence:
/// `f(n) = q(n) - q(n - q(n-1))`, `f(1) = 0`.
pub fn f_from_q(q: &QSeq) -> FSeq {
    let mut terms = Vec::with_capacity(q.len());
    if !q.is_empty() {
        terms.push(0);
        for n in 2..=q.len() {
            let nested = n - q.term(n - 1) as usize;
            terms.push(q.term(n) - q.term(nested));
        }
    }
    FSeq { terms }
}

/// The inner values `q'(n) = q(n - q(n-1))`, with the convention `q'(1) = 1`.
///
/// For `n >= 3` these satisfy `1 <= q'(n) <= n - 2`, which is where the
/// per-term driver bounds of [`f_bounds`] come from.
pub fn qprime(q: &QSeq) -> Vec<i64> {
    let mut out = Vec::with_capacity(q.len());
    for n in 1..=q.len() {
        if n == 1 {
            out.push(1);
        } else {
            let nested = n - q.term(n - 1) as usize;
            out.push(q.term(nested));
        }
    }
    out
}

/// Inclusive range of values `f(n)` can take in *some* surviving sequence:
/// `(0,0)` at `n = 1`, `(0,1)` at `n = 2`, and `(3-n, n-1)` for `n >= 3`.
pub fn f_bounds(n: usize) -> Result<(i64, i64)> {
    match n {
        0 => Err(Error::input("index must be at least 1")),
        1 => Ok((0, 0)),
        2 => Ok((0, 1)),
        _ => Ok((3 - n as i64, n as i64 - 1)),
    }
}

/// Given a surviving prefix of length `n`, the inclusive range of values that
/// keep it alive at index `n + 1`.
///
/// With `a = q(n+1 - q(n))` already fixed by the prefix, the admissible window
/// `1 <= a + f(n+1) <= n+1` translates to `f(n+1)` in `[1 - a, n+1 - a]` —
/// always exactly `n + 1` consecutive integers.
pub fn next_f_range(f: &FSeq) -> Result<(i64, i64)> {
    let n = f.len();
    let outcome = q_from_f(f, n)?;
    let q = outcome.q().ok_or_else(|| {
        let d = outcome.death.unwrap();
        Error::input(format!(
            "prefix dies at index {} and cannot be extended",
            d.index
        ))
    })?;
    let nested = n + 1 - q.term(n) as usize;
    let a = q.term(nested);
    Ok((1 - a, (n + 1) as i64 - a))
}

/// A sequence is *slow* when it starts at 1 and never steps by more than 1:
/// `s(1) = 1` and `s(k+1) - s(k)` is 0 or 1 for every `k`.
pub fn is_slow(terms: &[i64]) -> bool {
    match terms.first() {
        None => true,
        Some(&first) => {
            first == 1
                && terms
                    .windows(2)
                    .all(|w| w[1] == w[0] || w[1] == w[0] + 1)
        }
    }
}
