//! Drivers engineered to die, and closed forms for where they die.
//!
//! The main family here is segmented: for even `d >= 2` the driver starts
//! with `d - 1` zeros, then segment `s = 1, 2, 3, ...` occupies positions
//! `s*d ... (s+1)*d - 1`, alternating the value `s` (even positions) with a
//! filler (odd positions).  The filler is `0` in the first two segments and a
//! free bit thereafter.  Even positions then climb arithmetically —
//! `q(n) = q(n-2) + s` — as long as every odd `q` stays at 2, and the default
//! *steering* policy picks each free bit to keep it there.  Under steering
//! the climb eventually overshoots the admissible window and the run dies at
//! an even index `K(d)`; an unsteered choice can instead derail the climb and
//! survive far longer, which is the point of making the bits free.
//!
//! While the steered run is alive its value at `n = l*d` has the closed form
//! `r(l*d) = (l+1) * (1 + (l-2)*d/4)` (with `r(d) = 2`, `r(2d) = 3`), and the
//! real crossing of `r(x*d) = x*d` is at
//! `x(d) = (5d - 4 + sqrt((11d-4)*(3d-4))) / (2d)`, putting the death index
//! near `d * x(d)`.
//!
//! Also here: two small one-off constructions showing that pointwise upper
//! bounds alone cannot force survival.

use crate::exact::ceil_half_plus_sqrt;
use crate::seqcore::{Death, DeathKind, FSeq, QSeq};
use crate::{Error, Result};

/// Outcome of running a segmented driver to its death.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteeredRun {
    pub d: u64,
    /// Driver terms up to and including the death index.
    pub f: FSeq,
    /// Surviving values, `death.index - 1` of them.
    pub q_prefix: QSeq,
    pub death: Death,
    /// The free-bit choices made, as `(position, bit)` pairs.
    pub stars: Vec<(usize, u8)>,
}

impl SteeredRun {
    /// The death index `K(d)`.
    pub fn kill_index(&self) -> usize {
        self.death.index
    }
}

fn check_d(d: u64) -> Result<()> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::input(format!("d must be even and >= 2, got {d}")));
    }
    Ok(())
}

/// Is position `n` a free bit of the layout for this `d`?  Free bits are the
/// odd positions of segments `s >= 3`, i.e. odd `n >= 3d + 1`.
fn is_star_position(d: u64, n: usize) -> bool {
    n as u64 >= 3 * d + 1 && n % 2 == 1
}

/// The fixed layout value at position `n` (caller resolves free bits).
fn layout_term(d: u64, n: usize) -> Option<i64> {
    let n64 = n as u64;
    if n64 < d {
        Some(0) // leading zeros, positions 1 .. d-1
    } else if n % 2 == 0 {
        Some((n64 / d) as i64) // segment number
    } else if is_star_position(d, n) {
        None
    } else {
        Some(0) // odd filler in segments 1 and 2
    }
}

/// Runs the segmented driver for even `d >= 2`, resolving each free bit with
/// `policy(position, inner_value)` where `inner_value = q(n - q(n-1))` is
/// already determined when the bit is needed.  Runs until death; errors with
/// [`Error::Limit`] if none occurs within `cap` steps (`None` = `200*d + 10^4`).
pub fn steered_run_with(
    d: u64,
    cap: Option<usize>,
    mut policy: impl FnMut(usize, i64) -> u8,
) -> Result<SteeredRun> {
    check_d(d)?;
    let cap = cap.unwrap_or(200 * d as usize + 10_000);
    let mut f: Vec<i64> = vec![0];
    let mut q: Vec<i64> = vec![1];
    let mut stars = Vec::new();
    for n in 2..=cap {
        let nested = n - q[n - 2] as usize;
        let inner = q[nested - 1];
        let term = match layout_term(d, n) {
            Some(v) => v,
            None => {
                let bit = policy(n, inner);
                if bit > 1 {
                    return Err(Error::input(format!(
                        "policy returned {bit} at position {n}; bits must be 0 or 1"
                    )));
                }
                stars.push((n, bit));
                bit as i64
            }
        };
        f.push(term);
        let candidate = inner + term;
        if candidate < 1 || candidate > n as i64 {
            let kind = if candidate > n as i64 {
                DeathKind::AboveIndex
            } else {
                DeathKind::BelowOne
            };
            q.truncate(n - 1);
            return Ok(SteeredRun {
                d,
                f: FSeq::new(f).expect("layout starts with 0"),
                q_prefix: QSeq::new(q).expect("prefix was admissible"),
                death: Death {
                    index: n,
                    kind,
                    candidate,
                },
                stars,
            });
        }
        q.push(candidate);
    }
    Err(Error::limit(format!(
        "segmented driver with d = {d} still alive after {cap} steps"
    )))
}

/// The default adversarial run: each free bit is chosen to pin the value at
/// that (odd) position to 2, i.e. `bit = 2 - inner` clamped to `{0, 1}`.
pub fn steered_run(d: u64) -> Result<SteeredRun> {
    steered_run_with(d, None, |_, inner| (2 - inner).clamp(0, 1) as u8)
}

/// The death index `K(d)` of the steered run.
pub fn kill_index(d: u64) -> Result<usize> {
    Ok(steered_run(d)?.death.index)
}

/// Closed form for the steered value at `n = l*d`: 2 and 3 for the first two
/// segment boundaries, then `(l+1) * (4 + (l-2)*d) / 4`, which is an integer
/// for every even `d`.
pub fn r_closed_form(l: u64, d: u64) -> Result<i64> {
    check_d(d)?;
    if l == 0 {
        return Err(Error::input("l must be at least 1"));
    }
    match l {
        1 => Ok(2),
        2 => Ok(3),
        _ => {
            let num = (l as i128 + 1) * (4 + (l as i128 - 2) * d as i128);
            debug_assert_eq!(num % 4, 0);
            i64::try_from(num / 4)
                .map_err(|_| Error::Overflow { index: (l * d) as usize })
        }
    }
}

/// Real solution of `r(x*d) = x*d`, beyond which the steered climb overshoots
/// the admissible window.
pub fn x_estimate(d: u64) -> Result<f64> {
    check_d(d)?;
    let df = d as f64;
    Ok((5.0 * df - 4.0 + ((11.0 * df - 4.0) * (3.0 * df - 4.0)).sqrt()) / (2.0 * df))
}

/// `ceil(d * x(d))`, computed exactly (no floating point).
pub fn ceil_dx(d: u64) -> Result<i64> {
    check_d(d)?;
    let a = 5 * d as i128 - 4;
    let rad = (11 * d as i128 - 4) * (3 * d as i128 - 4);
    Ok(ceil_half_plus_sqrt(a, rad) as i64)
}

/// Hugs the upper per-term bound for `big` steps, then takes one value just
/// under it and one just *over* the previous index — legal pointwise, but dead
/// at `big + 2` (candidate `big + 3`) for every `big >= 2`.
///
/// For `big = 1` the same recipe survives: the two closing values are then 0
/// and 2, which fit.  The first index where pointwise-admissible values can
/// assemble a dying driver is 4.
pub fn cone1_witness(big: usize) -> Result<FSeq> {
    if big == 0 {
        return Err(Error::input("big must be at least 1"));
    }
    FSeq::from_fn(big + 2, |i| {
        if i <= big {
            i as i64 - 1
        } else if i == big + 1 {
            big as i64 - 1
        } else {
            big as i64 + 1
        }
    })
}

/// A slow prefix followed by one in-strip jump that kills it.
///
/// For `m >= 1`, take `n0 = 4m - 1`, the slow driver `f(n) = floor((n+2)/4)`
/// up to `n0`, and then `f(n0 + 1) = floor(3*(n0+1)/4)`.  The jump value lies
/// inside the strip `[n/4 - O(1), 3n/4]`, yet the run dies at `n0 + 1` with
/// candidate `n0 + 2`: membership of every term in a strip does not by itself
/// grant survival without a condition on where the prefix values sit.
pub fn jump_counterexample(m: u64) -> Result<FSeq> {
    if m == 0 {
        return Err(Error::input("m must be at least 1"));
    }
    let n0 = (4 * m - 1) as usize;
    FSeq::from_fn(n0 + 1, |n| {
        if n == 1 {
            0
        } else if n <= n0 {
            (n as i64 + 2) / 4
        } else {
            3 * (n as i64) / 4
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::q_from_f;

    #[test]
    fn layout_shape() {
        // d = 6: five zeros, then (1,0)*3, (2,0)*3, then free bits appear.
        let vals: Vec<Option<i64>> = (1..=20).map(|n| layout_term(6, n)).collect();
        assert_eq!(
            &vals[..17],
            &[
                Some(0), Some(0), Some(0), Some(0), Some(0),
                Some(1), Some(0), Some(1), Some(0), Some(1), Some(0),
                Some(2), Some(0), Some(2), Some(0), Some(2), Some(0),
            ]
        );
        assert_eq!(vals[17], Some(3)); // n = 18
        assert_eq!(vals[18], None); // n = 19, first free bit
        assert!(is_star_position(6, 19));
        assert!(!is_star_position(6, 18));
        assert!(!is_star_position(6, 17)); // odd but still segment 2
    }

    #[test]
    fn smallest_case_dies_at_eight() {
        let run = steered_run(2).unwrap();
        assert_eq!(run.f.terms(), &[0, 1, 0, 2, 0, 3, 1, 4]);
        assert_eq!(run.q_prefix.terms(), &[1, 2, 1, 3, 2, 6, 2]);
        assert_eq!(
            run.death,
            Death {
                index: 8,
                kind: DeathKind::AboveIndex,
                candidate: 10
            }
        );
        assert_eq!(run.stars, vec![(7, 1)]);
    }

    #[test]
    fn d4_trace() {
        let run = steered_run(4).unwrap();
        assert_eq!(run.kill_index(), 18);
        assert_eq!(run.death.candidate, 19);
        assert_eq!(run.stars, vec![(13, 1), (15, 0), (17, 1)]);
        let q = &run.q_prefix;
        assert_eq!(q.term(8), 3);
        assert_eq!(q.term(12), 8);
        assert_eq!(q.term(16), 15);
        // Odd positions steered to 2 once the free bits start.
        for n in [13, 15, 17] {
            assert_eq!(q.term(n), 2);
        }
    }

    #[test]
    fn kill_index_table() {
        let expect = [8, 18, 30, 40, 50, 62, 72, 82, 94, 104];
        for (i, d) in (2..=20).step_by(2).enumerate() {
            assert_eq!(kill_index(d).unwrap(), expect[i], "d = {d}");
        }
    }

    #[test]
    fn crossing_estimate_table() {
        let expect = [6, 17, 28, 39, 50, 60, 71, 82, 93, 103];
        for (i, d) in (2..=20u64).step_by(2).enumerate() {
            assert_eq!(ceil_dx(d).unwrap(), expect[i], "d = {d}");
            // Exact ceiling agrees with the float estimate.
            let float_ceil = (d as f64 * x_estimate(d).unwrap()).ceil() as i64;
            assert_eq!(ceil_dx(d).unwrap(), float_ceil);
        }
    }

    #[test]
    fn closed_form_matches_steered_values() {
        for d in (2..=12u64).step_by(2) {
            let run = steered_run(d).unwrap();
            let k = run.kill_index() as u64;
            for l in 1.. {
                let n = l * d;
                if n >= k {
                    // If the death lands exactly on a segment boundary, the
                    // closed form predicts the dying candidate too.
                    if n == k {
                        assert_eq!(run.death.candidate, r_closed_form(l, d).unwrap());
                    }
                    break;
                }
                assert_eq!(
                    run.q_prefix.term(n as usize),
                    r_closed_form(l, d).unwrap(),
                    "d = {d}, l = {l}"
                );
            }
        }
    }

    #[test]
    fn free_bits_are_genuinely_free() {
        // For d = 6 pick bits that derail the steering: the run must outlive
        // the steered death index 30.
        let run = steered_run_with(6, None, |_, _| 0).unwrap();
        assert!(
            run.kill_index() > 30,
            "all-zero bits died at {}",
            run.kill_index()
        );
    }

    #[test]
    fn rejects_bad_d() {
        assert!(steered_run(3).is_err());
        assert!(steered_run(0).is_err());
        assert!(r_closed_form(3, 5).is_err());
    }

    #[test]
    fn cone1_witness_dies_just_past_the_prefix() {
        for big in 2..=50 {
            let f = cone1_witness(big).unwrap();
            let out = q_from_f(&f, f.len()).unwrap();
            let death = out.death.expect("must die");
            assert_eq!(death.index, big + 2);
            assert_eq!(death.candidate, big as i64 + 3);
            assert_eq!(death.kind, DeathKind::AboveIndex);
        }
        // big = 1 is the degenerate case: (0, 0, 2) survives.
        let f = cone1_witness(1).unwrap();
        assert!(q_from_f(&f, 3).unwrap().survived());
    }

    #[test]
    fn jump_kills_the_slow_prefix() {
        for m in 1..=30 {
            let f = jump_counterexample(m).unwrap();
            let n0 = (4 * m - 1) as usize;
            let out = q_from_f(&f, n0 + 1).unwrap();
            let death = out.death.expect("must die");
            assert_eq!(death.index, n0 + 1);
            assert_eq!(death.candidate, n0 as i64 + 2);
            // The prefix alone is a survivor (it is the slow alpha = 1/2 driver).
            let prefix_out = q_from_f(&f.truncated(n0), n0).unwrap();
            assert!(prefix_out.survived());
        }
    }
}
