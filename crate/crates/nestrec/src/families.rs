//! Parametric families of drivers that survive forever.
//!
//! Each family fixes enough structure that survival can be proved once, after
//! which members may be generated mechanically — either deterministically or
//! by sampling free choices.  The constructions all work on the `q` side of
//! the bijection and contrive a simple inner sequence:
//!
//! * slow-alpha and delta-step force `q'(n) = 1` with `q` given in closed form;
//! * spike drivers (`f(n)` either `0` or `n-1`) keep `q(n) = 1 + f(n)`;
//! * the `{0,1,2}` strip survives because its values fit inside every
//!   admissible extension window;
//! * choice ladders pin `q'(n) = 2` from index 4 on, leaving an `l`-wide
//!   window of free choices per index;
//! * set-driven sequences choose `q(n)` from sets `s(n)` built from a 0/1
//!   mask `y`, forcing `q'(n) = 1` while the number of choices per index
//!   grows without bound — the fastest-growing family here, with exactly
//!   `C(n) = prod T(i)`, `T(i) = 1 + (1 - y(i)) * (y(1) + ... + y(i))`.

use crate::exact::floor_ratio_mul;
use crate::seqcore::FSeq;
use crate::{Error, Result};
use num::rational::Ratio;
use num::BigUint;
use num::One;
use rand::Rng;

/// A 0/1 mask with `y(1) = 1`, used to drive the set-valued family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YSeq {
    bits: Vec<bool>,
}

impl YSeq {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        match bits.first() {
            None => Err(Error::input("mask needs at least one term")),
            Some(false) => Err(Error::input("mask must start with 1")),
            Some(true) => Ok(YSeq { bits }),
        }
    }

    /// `y(i) = 1` exactly when `i = 1 (mod m)`; `m >= 2`, length `n`.
    pub fn periodic(m: usize, n: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::input("period must be at least 2"));
        }
        if n == 0 {
            return Err(Error::input("mask needs at least one term"));
        }
        Ok(YSeq {
            bits: (1..=n).map(|i| i % m == 1 % m).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `y(i)` as a bool, 1-based.
    pub fn bit(&self, i: usize) -> bool {
        self.bits[i - 1]
    }
}

/// Slow driver for rational `alpha` in `[1/2, 1)`: the value sequence is
/// `q(n) = 1 + floor(alpha * n)`, which is slow and admissible, and the
/// driver follows from the bijection as
/// `f(n) = floor(alpha*n) - floor(alpha*t)` with `t = (n-1) - floor(alpha*(n-1))`.
pub fn slow_alpha_f(alpha: Ratio<i64>, n: usize) -> Result<FSeq> {
    check_alpha(alpha)?;
    FSeq::from_fn(n, |k| {
        if k == 1 {
            0
        } else {
            let t = (k as i64 - 1) - floor_ratio_mul(alpha, k as i64 - 1);
            floor_ratio_mul(alpha, k as i64) - floor_ratio_mul(alpha, t)
        }
    })
}

/// The value sequence `1 + floor(alpha * k)` that [`slow_alpha_f`] induces.
pub fn slow_alpha_q(alpha: Ratio<i64>, n: usize) -> Result<Vec<i64>> {
    check_alpha(alpha)?;
    Ok((1..=n as i64).map(|k| 1 + floor_ratio_mul(alpha, k)).collect())
}

fn check_alpha(alpha: Ratio<i64>) -> Result<()> {
    if alpha < Ratio::new(1, 2) || alpha >= Ratio::one() {
        return Err(Error::input(format!(
            "alpha must lie in [1/2, 1), got {alpha}"
        )));
    }
    Ok(())
}

/// Staircase driver `f(n) = delta * floor((n-1)/delta)`: the value sequence
/// climbs in flats of width `delta` (`q(n) = 1 + f(n)`) and the inner
/// sequence stays at 1.
pub fn delta_step_f(delta: u64, n: usize) -> Result<FSeq> {
    if delta == 0 {
        return Err(Error::input("delta must be positive"));
    }
    let d = delta as i64;
    FSeq::from_fn(n, |k| d * ((k as i64 - 1) / d))
}

/// The extremal driver hugging the upper per-term bound: `f(i) = i - 1`,
/// giving `q(i) = i`.
pub fn witness_upper_f(n: usize) -> Result<FSeq> {
    FSeq::from_fn(n, |i| i as i64 - 1)
}

/// A survivor of length `n >= 4` whose last term sits on the lower per-term
/// bound `3 - n`: zeros, then `n-3`, then `1`, then `3-n`.
pub fn witness_lower_f(n: usize) -> Result<FSeq> {
    if n < 4 {
        return Err(Error::input("lower witness needs n >= 4"));
    }
    let mut terms = vec![0; n - 3];
    terms.push(n as i64 - 3);
    terms.push(1);
    terms.push(3 - n as i64);
    FSeq::new(terms)
}

/// Spike driver: each term is either `0` or the extreme `i - 1`, so the value
/// sequence is `q(i) = 1 + f(i)` — constantly resetting to 1 or jumping to `i`.
/// `choices[j]` decides index `j + 2` (`true` = spike).
pub fn powtwo_f(choices: &[bool], n: usize) -> Result<FSeq> {
    if n == 0 || choices.len() != n - 1 {
        return Err(Error::input(format!(
            "need exactly n - 1 = {} choices, got {}",
            n.saturating_sub(1),
            choices.len()
        )));
    }
    FSeq::from_fn(n, |i| {
        if i >= 2 && choices[i - 2] {
            i as i64 - 1
        } else {
            0
        }
    })
}

pub fn random_powtwo_f(rng: &mut impl Rng, n: usize) -> Result<FSeq> {
    let choices: Vec<bool> = (0..n.saturating_sub(1)).map(|_| rng.gen()).collect();
    powtwo_f(&choices, n)
}

/// Number of spike drivers of length `n`.
pub fn powtwo_count(n: usize) -> BigUint {
    BigUint::from(2u32).pow(n.saturating_sub(1) as u32)
}

/// Strip driver built from scratch: `f(2)` in `{0,1}` and `f(i)` in `{0,1,2}`
/// afterwards.  Such values fit in every extension window, so survival needs
/// no further conditions.
pub fn strip012_f(terms: Vec<i64>) -> Result<FSeq> {
    for (i, &v) in terms.iter().enumerate() {
        let n = i + 1;
        let ok = match n {
            1 => v == 0,
            2 => (0..=1).contains(&v),
            _ => (0..=2).contains(&v),
        };
        if !ok {
            return Err(Error::input(format!(
                "strip term f({n}) = {v} outside the allowed set"
            )));
        }
    }
    FSeq::new(terms)
}

/// Any surviving prefix extended with values in `{0, 1, 2}` keeps surviving;
/// this stitches the two parts together after checking both sides.
pub fn strip012_extend(prefix: &FSeq, tail: &[i64]) -> Result<FSeq> {
    if prefix.len() < 3 {
        return Err(Error::input("prefix must have at least 3 terms"));
    }
    let out = crate::seqcore::q_from_f(prefix, prefix.len())?;
    if let Some(d) = out.death {
        return Err(Error::input(format!(
            "prefix dies at index {}; only survivors can be extended",
            d.index
        )));
    }
    for &v in tail {
        if !(0..=2).contains(&v) {
            return Err(Error::input(format!(
                "tail value {v} outside {{0, 1, 2}}"
            )));
        }
    }
    let mut f = prefix.clone();
    for &v in tail {
        f.push(v);
    }
    Ok(f)
}

pub fn random_strip012_f(rng: &mut impl Rng, n: usize) -> Result<FSeq> {
    FSeq::from_fn(n, |i| match i {
        1 => 0,
        2 => rng.gen_range(0..=1),
        _ => rng.gen_range(0..=2),
    })
}

/// Number of strip drivers of length `n`.
pub fn strip012_count(n: usize) -> BigUint {
    match n {
        0 => BigUint::one(),
        1 => BigUint::one(),
        2 => BigUint::from(2u32),
        _ => BigUint::from(2u32) * BigUint::from(3u32).pow(n as u32 - 2),
    }
}

/// Choice ladder with rail width `l >= 3`.
///
/// The forced prefix is `f = 0, 1, 1, 0, ..., 0` up to index `l + 1`
/// (value sequence `1, 2, 2, ..., 2`).  From index `l + 2` on, writing
/// `n = l + k`, the driver may take any value in `[k-2, l+k-3]` — except at
/// `k = 2`, where `0` is excluded (staying at `q = 2` there is the same
/// sequence with a wider rail, so it is not counted as a member).  The
/// construction keeps `q'(n) = 2` for all `n >= 4`.
///
/// `choices[j]` is the driver value for index `l + 2 + j`.
pub fn ladder_f(l: usize, choices: &[i64], n: usize) -> Result<FSeq> {
    if l < 3 {
        return Err(Error::input("rail width must be at least 3"));
    }
    let expected = n.saturating_sub(l + 1);
    if choices.len() != expected {
        return Err(Error::input(format!(
            "need {expected} choices for n = {n}, got {}",
            choices.len()
        )));
    }
    for (j, &v) in choices.iter().enumerate() {
        let k = (j + 2) as i64;
        let lo = if k == 2 { 1 } else { k - 2 };
        let hi = l as i64 + k - 3;
        if v < lo || v > hi {
            return Err(Error::input(format!(
                "ladder choice {v} at index {} outside [{lo}, {hi}]",
                l + 2 + j
            )));
        }
    }
    FSeq::from_fn(n, |i| match i {
        1 => 0,
        2 | 3 => 1,
        _ if i <= l + 1 => 0,
        _ => choices[i - l - 2],
    })
}

pub fn random_ladder_f(rng: &mut impl Rng, l: usize, n: usize) -> Result<FSeq> {
    let count = n.saturating_sub(l + 1);
    let choices: Vec<i64> = (0..count)
        .map(|j| {
            let k = (j + 2) as i64;
            let lo = if k == 2 { 1 } else { k - 2 };
            rng.gen_range(lo..=l as i64 + k - 3)
        })
        .collect();
    ladder_f(l, &choices, n)
}

/// Number of ladder drivers with rail width `l` and length `n`.
pub fn ladder_count(l: usize, n: usize) -> BigUint {
    if n < l + 2 {
        BigUint::one()
    } else {
        BigUint::from(l as u64 - 1) * BigUint::from(l as u64).pow((n - l - 2) as u32)
    }
}

/// The choice sets `s(n)` of the mask-driven family: `{1}` where `y(n) = 1`,
/// otherwise `{1}` together with `n + 1 - j` for every marked `j <= n`.
/// Choosing `q(n)` from `s(n)` (independently per index) always lands the
/// nested lookup on a marked position, so `q'` stays at 1 and
/// `f(n) = q(n) - 1`.
pub fn ydriven_sets(y: &YSeq, n: usize) -> Result<Vec<Vec<i64>>> {
    if n > y.len() {
        return Err(Error::input(format!(
            "mask has {} terms but n = {n}",
            y.len()
        )));
    }
    let mut ones: Vec<usize> = Vec::new();
    let mut sets = Vec::with_capacity(n);
    for i in 1..=n {
        if y.bit(i) {
            ones.push(i);
            sets.push(vec![1]);
        } else {
            let mut s: Vec<i64> = std::iter::once(1)
                .chain(ones.iter().map(|&j| (i + 1 - j) as i64))
                .collect();
            s.sort_unstable();
            sets.push(s);
        }
    }
    Ok(sets)
}

/// Builds the driver for explicit value choices `q(n)`, validating each
/// against `s(n)`.
pub fn ydriven_f(y: &YSeq, q_choices: &[i64]) -> Result<FSeq> {
    let sets = ydriven_sets(y, q_choices.len())?;
    for (i, (&q, s)) in q_choices.iter().zip(&sets).enumerate() {
        if !s.contains(&q) {
            return Err(Error::input(format!(
                "q({}) = {q} not in the choice set {s:?}",
                i + 1
            )));
        }
    }
    FSeq::new(q_choices.iter().map(|&q| q - 1).collect())
}

/// Samples uniformly from each choice set without materialising it.
pub fn random_ydriven_f(rng: &mut impl Rng, y: &YSeq, n: usize) -> Result<FSeq> {
    if n > y.len() {
        return Err(Error::input(format!(
            "mask has {} terms but n = {n}",
            y.len()
        )));
    }
    let mut ones: Vec<usize> = Vec::new();
    let mut terms = Vec::with_capacity(n);
    for i in 1..=n {
        let q = if y.bit(i) {
            ones.push(i);
            1
        } else {
            // Index 0 picks the always-present value 1; index t > 0 picks the
            // t-th marked position.
            let t = rng.gen_range(0..=ones.len());
            if t == 0 {
                1
            } else {
                (i + 1 - ones[t - 1]) as i64
            }
        };
        terms.push(q - 1);
    }
    FSeq::new(terms)
}

/// Exact number of length-`n` members for the mask `y`:
/// `C(n) = prod_{i<=n} T(i)` with `T(i) = 1 + (1 - y(i)) * #marks(i)`.
pub fn ydriven_count(y: &YSeq, n: usize) -> Result<BigUint> {
    if n > y.len() {
        return Err(Error::input(format!(
            "mask has {} terms but n = {n}",
            y.len()
        )));
    }
    let mut ones = 0u64;
    let mut c = BigUint::one();
    for i in 1..=n {
        if y.bit(i) {
            ones += 1;
        } else {
            c *= BigUint::from(1 + ones);
        }
    }
    Ok(c)
}

/// A family pick for driver generation, bundling the per-family parameters.
#[derive(Debug, Clone)]
pub enum FamilySpec {
    SlowAlpha { alpha: Ratio<i64> },
    DeltaStep { delta: u64 },
    PowTwo,
    Strip012,
    Ladder { l: usize },
    YDriven { y: YSeq },
    LowerWitness,
    UpperWitness,
}

impl FamilySpec {
    /// Generates a length-`n` member.  Deterministic families ignore the RNG.
    pub fn sample(&self, rng: &mut impl Rng, n: usize) -> Result<FSeq> {
        match self {
            FamilySpec::SlowAlpha { alpha } => slow_alpha_f(*alpha, n),
            FamilySpec::DeltaStep { delta } => delta_step_f(*delta, n),
            FamilySpec::PowTwo => random_powtwo_f(rng, n),
            FamilySpec::Strip012 => random_strip012_f(rng, n),
            FamilySpec::Ladder { l } => random_ladder_f(rng, *l, n),
            FamilySpec::YDriven { y } => random_ydriven_f(rng, y, n),
            FamilySpec::LowerWitness => witness_lower_f(n),
            FamilySpec::UpperWitness => witness_upper_f(n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::{f_from_q, q_from_f, qprime, QSeq};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn slow_alpha_half() {
        let f = slow_alpha_f(Ratio::new(1, 2), 8).unwrap();
        assert_eq!(f.terms(), &[0, 1, 1, 1, 1, 2, 2, 2]);
        // Same values as floor((k+2)/4) for k >= 2.
        for k in 2..=8 {
            assert_eq!(f.term(k), (k as i64 + 2) / 4);
        }
        let out = q_from_f(&f, 8).unwrap();
        assert_eq!(out.prefix.terms(), &[1, 2, 2, 3, 3, 4, 4, 5]);
        assert!(crate::seqcore::is_slow(out.prefix.terms()));
    }

    #[test]
    fn slow_alpha_matches_value_formula() {
        for (p, q) in [(1, 2), (2, 3), (5, 8), (89, 144), (99, 100)] {
            let alpha = Ratio::new(p, q);
            let f = slow_alpha_f(alpha, 500).unwrap();
            let out = q_from_f(&f, 500).unwrap();
            assert!(out.survived());
            assert_eq!(out.prefix.terms(), &slow_alpha_q(alpha, 500).unwrap()[..]);
            assert!(crate::seqcore::is_slow(out.prefix.terms()));
        }
    }

    #[test]
    fn slow_alpha_domain() {
        assert!(slow_alpha_f(Ratio::new(1, 4), 10).is_err());
        assert!(slow_alpha_f(Ratio::new(1, 1), 10).is_err());
        assert!(slow_alpha_f(Ratio::new(1, 2), 10).is_ok());
    }

    #[test]
    fn delta_step_values() {
        let f = delta_step_f(3, 10).unwrap();
        assert_eq!(f.terms(), &[0, 0, 0, 3, 3, 3, 6, 6, 6, 9]);
        let out = q_from_f(&f, 10).unwrap();
        assert!(out.survived());
        assert_eq!(out.prefix.terms(), &[1, 1, 1, 4, 4, 4, 7, 7, 7, 10]);
        assert_eq!(qprime(&out.prefix), vec![1; 10]);
    }

    #[test]
    fn witnesses_touch_the_bounds() {
        let f = witness_upper_f(30).unwrap();
        let out = q_from_f(&f, 30).unwrap();
        assert!(out.survived());
        assert_eq!(out.prefix.term(30), 30);
        for n in 4..=40 {
            let f = witness_lower_f(n).unwrap();
            assert_eq!(f.term(n), 3 - n as i64);
            let out = q_from_f(&f, n).unwrap();
            assert!(out.survived(), "lower witness died at n = {n}");
        }
        assert!(witness_lower_f(3).is_err());
    }

    #[test]
    fn powtwo_explicit_choices() {
        let f = powtwo_f(&[true, false, true, false], 5).unwrap();
        assert_eq!(f.terms(), &[0, 1, 0, 3, 0]);
        let out = q_from_f(&f, 5).unwrap();
        // q is always one more than the driver for this family.
        let expect: Vec<i64> = f.terms().iter().map(|v| v + 1).collect();
        assert_eq!(out.prefix.terms(), &expect[..]);
        assert_eq!(powtwo_count(5), BigUint::from(16u32));
    }

    #[test]
    fn strip_survives_and_counts() {
        // All 54 strip drivers of length 5 survive.
        let mut total = 0u32;
        for b in 0..2i64 {
            for c in 0..27 {
                let terms = vec![0, b, c % 3, (c / 3) % 3, c / 9];
                let f = strip012_f(terms).unwrap();
                assert!(q_from_f(&f, 5).unwrap().survived());
                total += 1;
            }
        }
        assert_eq!(BigUint::from(total), strip012_count(5));
        assert!(strip012_f(vec![0, 2]).is_err());
        assert!(strip012_f(vec![0, 1, 3]).is_err());
    }

    #[test]
    fn strip_extension_of_any_survivor() {
        // Extend a spike prefix, which strays far outside {0,1,2} itself.
        let prefix = powtwo_f(&[true, false, true], 4).unwrap();
        let f = strip012_extend(&prefix, &[2, 2, 0, 1]).unwrap();
        assert!(q_from_f(&f, 8).unwrap().survived());
        // Dead prefixes are rejected.
        let dead = FSeq::new(vec![0, 0, 3]).unwrap();
        assert!(strip012_extend(&dead, &[0]).is_err());
        assert!(strip012_extend(&prefix, &[5]).is_err());
    }

    #[test]
    fn ladder_structure() {
        // l = 3, n = 6: choices are f(5) in {1, 2} and f(6) in {1, 2, 3}.
        let mut members = Vec::new();
        for a in 1..=2 {
            for b in 1..=3 {
                let f = ladder_f(3, &[a, b], 6).unwrap();
                let out = q_from_f(&f, 6).unwrap();
                assert!(out.survived(), "ladder member {:?} died", f.terms());
                let qp = qprime(&out.prefix);
                assert!(qp[3..].iter().all(|&v| v == 2), "q' = {qp:?}");
                members.push(f);
            }
        }
        members.dedup();
        assert_eq!(BigUint::from(members.len() as u32), ladder_count(3, 6));
        // The k = 2 choice excludes 0 (that member belongs to the l + 1 rail).
        assert!(ladder_f(3, &[0, 1], 6).is_err());
        assert!(ladder_f(2, &[], 3).is_err());
    }

    #[test]
    fn ydriven_sets_and_count() {
        let y = YSeq::new(vec![true, false, true, false]).unwrap();
        let sets = ydriven_sets(&y, 4).unwrap();
        assert_eq!(sets, vec![vec![1], vec![1, 2], vec![1], vec![1, 2, 4]]);
        assert_eq!(ydriven_count(&y, 4).unwrap(), BigUint::from(6u32));

        // Every combination of choices is a survivor with inner sequence 1.
        for &q2 in &sets[1] {
            for &q4 in &sets[3] {
                let f = ydriven_f(&y, &[1, q2, 1, q4]).unwrap();
                let out = q_from_f(&f, 4).unwrap();
                assert!(out.survived());
                assert_eq!(qprime(&out.prefix), vec![1; 4]);
            }
        }
        assert!(ydriven_f(&y, &[1, 1, 1, 3]).is_err());
    }

    #[test]
    fn ydriven_periodic_count_closed_form() {
        // Period 2: the count at even n is ((n + 2) / 2)!.
        let y = YSeq::periodic(2, 24).unwrap();
        for n in (2..=24).step_by(2) {
            let c = ydriven_count(&y, n).unwrap();
            let expect: BigUint = (1..=(n as u64 + 2) / 2).product();
            assert_eq!(c, expect, "n = {n}");
        }
    }

    #[test]
    fn family_spec_samples_survive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let y = YSeq::periodic(3, 400).unwrap();
        let specs = [
            FamilySpec::SlowAlpha { alpha: Ratio::new(2, 3) },
            FamilySpec::DeltaStep { delta: 5 },
            FamilySpec::PowTwo,
            FamilySpec::Strip012,
            FamilySpec::Ladder { l: 4 },
            FamilySpec::YDriven { y },
            FamilySpec::LowerWitness,
            FamilySpec::UpperWitness,
        ];
        for spec in &specs {
            for _ in 0..20 {
                let f = spec.sample(&mut rng, 400).unwrap();
                let out = q_from_f(&f, 400).unwrap();
                assert!(out.survived(), "{spec:?} produced a dying driver");
            }
        }
    }

    proptest! {
        /// Spike drivers always satisfy q = f + 1.
        #[test]
        fn powtwo_q_is_f_plus_one(choices in proptest::collection::vec(any::<bool>(), 0..64)) {
            let n = choices.len() + 1;
            let f = powtwo_f(&choices, n).unwrap();
            let out = q_from_f(&f, n).unwrap();
            prop_assert!(out.survived());
            for i in 1..=n {
                prop_assert_eq!(out.prefix.term(i), f.term(i) + 1);
            }
        }

        /// Mask-driven samples always keep the inner sequence at 1, and the
        /// realised driver belongs to the declared choice sets.
        #[test]
        fn ydriven_samples_stay_inner_one(bits in proptest::collection::vec(any::<bool>(), 1..80), seed in any::<u64>()) {
            let mut bits = bits;
            bits[0] = true;
            let y = YSeq::new(bits).unwrap();
            let n = y.len();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_ydriven_f(&mut rng, &y, n).unwrap();
            let out = q_from_f(&f, n).unwrap();
            prop_assert!(out.survived());
            prop_assert_eq!(qprime(out.q().unwrap()), vec![1; n]);
            let sets = ydriven_sets(&y, n).unwrap();
            for i in 1..=n {
                prop_assert!(sets[i - 1].contains(&(f.term(i) + 1)));
            }
        }

        /// The bijection maps slow value sequences to the slow-alpha driver.
        #[test]
        fn slow_alpha_round_trip(p in 1i64..200, q in 2i64..200) {
            prop_assume!(2 * p >= q && p < q);
            let alpha = Ratio::new(p, q);
            let values = slow_alpha_q(alpha, 120).unwrap();
            let qs = QSeq::new(values).unwrap();
            prop_assert_eq!(f_from_q(&qs), slow_alpha_f(alpha, 120).unwrap());
        }
    }
}
