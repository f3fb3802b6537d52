//! Laboratory for the nested recurrence
//!
//! ```text
//!     q(n) = q(n - q(n-1)) + f(n),        q(1) = 1, f(1) = 0,
//! ```
//!
//! where `f` is an arbitrary integer sequence.  The central fact driving the
//! whole crate is that the recurrence produces a well-defined infinite `q` if
//! and only if every term satisfies `1 <= q(n) <= n`; the first index where a
//! candidate value leaves that window is where the sequence *dies*.  Sequences
//! `f` whose `q` never dies form a set we denote `F`, and finite prefixes of
//! survivors form `F_n`.
//!
//! What lives where:
//!
//! * [`seqcore`] — the recurrence engine, the bijection between `q`-space and
//!   `f`-space, and elementary per-term bounds.
//! * [`families`] — parametric families of survivors (slow solutions, choice
//!   ladders, set-driven constructions) with samplers and exact counts.
//! * [`counterexamples`] — families engineered to die, with closed forms for
//!   where they die.
//! * [`negext`] — how far a survivor prefix can be pushed with strictly
//!   negative continuation, including exhaustive searches over small prefixes.
//! * [`enumeration`] — exhaustive generation of `F_n` and tree exports.
//! * [`bounding`] — interval and set-valued reachability analyses for cones
//!   `l(n) <= f(n) <= u(n)`, plus power-law fitting of the resulting envelopes.
//! * [`theoremlab`] — exact-rational constant derivations and hypothesis
//!   checkers for the asymptotic survival criteria, including a discrete
//!   certification of the base-case window used by the sqrt-cone argument.
//! * [`hofstadter`] — the two-term cousin `q(n) = q(n-q(n-1)) + q(n-q(n-2))`
//!   and its mod-M variants.
//!
//! Indexing is 1-based everywhere in the public API, matching the subscripts
//! above; slices returned by accessors put index `n` at position `n - 1`.

pub mod bounding;
pub mod counterexamples;
pub mod enumeration;
pub mod exact;
pub mod families;
pub mod hofstadter;
pub mod negext;
pub mod seqcore;
pub mod theoremlab;

/// Errors shared across the crate.
///
/// The split matters to callers: `Input` means the arguments can never work,
/// `Limit` means the arguments were refused only because they exceed a
/// configured guard and the call can be retried with a higher limit, and
/// `Overflow` means an intermediate value left the `i64` range (the engines
/// use checked arithmetic throughout rather than silently wrapping).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}; raise the limit explicitly to proceed")]
    Limit(String),
    #[error("integer overflow while computing term {index}")]
    Overflow { index: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn limit(msg: impl Into<String>) -> Self {
        Error::Limit(msg.into())
    }
}
