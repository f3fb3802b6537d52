//! Exact integer arithmetic for expressions mixing rationals and square roots.
//!
//! Several analyses in this crate compare quantities like `(p/q)*n + (r/s)*sqrt(n)`
//! against integers, or take floors of `sqrt(a*n)` with rational `a`.  Doing
//! this in floating point invites off-by-one errors exactly at the indices the
//! analyses care about, so everything here is computed with integer square
//! roots and widened (`i128`) intermediates instead.
//!
//! The identities used throughout:
//!
//! * `floor(sqrt(p*n/q)) = floor(isqrt(p*n*q) / q)` — widen the radicand by
//!   `q^2` and divide the integer root back out (`floor(floor(x)/m) = floor(x/m)`
//!   for integer `m >= 1`).
//! * `A*sqrt(n) <= B` is decided by sign analysis plus one squaring, never by
//!   evaluating the root.

use num::integer::Roots;
use num::rational::Ratio;

/// Floor of `a / b` for `i128`, rounding toward negative infinity.
pub fn floor_div(a: i128, b: i128) -> i128 {
    num::Integer::div_floor(&a, &b)
}

/// Ceiling of `a / b` for `i128`.
pub fn ceil_div(a: i128, b: i128) -> i128 {
    num::Integer::div_ceil(&a, &b)
}

/// `floor(sqrt(x))` for non-negative `i128`.
///
/// Panics if `x < 0`.
pub fn isqrt(x: i128) -> i128 {
    assert!(x >= 0, "isqrt of negative value {x}");
    x.sqrt()
}

/// `floor(r * n)` for a rational `r` and integer `n`, exactly.
pub fn floor_ratio_mul(r: Ratio<i64>, n: i64) -> i64 {
    let p = *r.numer() as i128;
    let q = *r.denom() as i128;
    floor_div(p * n as i128, q) as i64
}

/// `ceil(r * n)` for a rational `r` and integer `n`, exactly.
pub fn ceil_ratio_mul(r: Ratio<i64>, n: i64) -> i64 {
    let p = *r.numer() as i128;
    let q = *r.denom() as i128;
    ceil_div(p * n as i128, q) as i64
}

/// Is `r * k <= v` exactly, for rational `r` and integers `k`, `v`?
pub fn ratio_mul_le_int(r: Ratio<i64>, k: i64, v: i64) -> bool {
    // Denominators are kept positive by `Ratio`, so cross-multiplying is safe.
    *r.numer() as i128 * k as i128 <= *r.denom() as i128 * v as i128
}

/// Is `r * k >= v` exactly?
pub fn ratio_mul_ge_int(r: Ratio<i64>, k: i64, v: i64) -> bool {
    *r.numer() as i128 * k as i128 >= *r.denom() as i128 * v as i128
}

/// `floor(sqrt(r * n))` for a non-negative rational `r` and `n >= 0`, exactly.
pub fn floor_sqrt_ratio_mul(r: Ratio<i64>, n: i64) -> i64 {
    let p = *r.numer() as i128;
    let q = *r.denom() as i128;
    assert!(p >= 0 && n >= 0, "radicand must be non-negative");
    // sqrt(p*n/q) = sqrt(p*n*q)/q, then floors nest.
    (isqrt(p * n as i128 * q) / q) as i64
}

/// Smallest integer `c >= sqrt(x)` for non-negative `x`.
pub fn ceil_sqrt(x: i128) -> i128 {
    let r = isqrt(x);
    if r * r < x {
        r + 1
    } else {
        r
    }
}

/// Decides `a * sqrt(n) <= b` exactly for integers `a`, `b` and `n >= 0`.
pub fn sqrt_term_le(a: i128, n: i128, b: i128) -> bool {
    debug_assert!(n >= 0);
    match (a.signum(), b.signum()) {
        (0, _) => b >= 0,
        (-1, 1) | (-1, 0) => true,
        (1, -1) => false,
        (1, _) => a * a * n <= b * b,
        // Both strictly negative: |a|sqrt(n) >= |b|.
        _ => a * a * n >= b * b,
    }
}

/// Decides `a * sqrt(n) >= b` exactly for integers `a`, `b` and `n >= 0`.
pub fn sqrt_term_ge(a: i128, n: i128, b: i128) -> bool {
    sqrt_term_le(-a, n, -b)
}

/// An exact affine-plus-root expression `linear * n + root * sqrt(n)`.
///
/// Comparisons against integers are decided without floating point, so these
/// can serve as certified envelopes in window checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineSqrt {
    pub linear: Ratio<i64>,
    pub root: Ratio<i64>,
}

impl AffineSqrt {
    pub fn new(linear: Ratio<i64>, root: Ratio<i64>) -> Self {
        AffineSqrt { linear, root }
    }

    /// Is `self(n) <= v`?
    pub fn le_int(&self, n: i64, v: i64) -> bool {
        assert!(n >= 0);
        // linear*n + root*sqrt(n) <= v
        //   <=>  (rp*ld) * sqrt(n) <= (v - linear*n) * ld * rd   after clearing
        // denominators ld = linear.denom(), rd = root.denom() (both positive).
        let lp = *self.linear.numer() as i128;
        let ld = *self.linear.denom() as i128;
        let rp = *self.root.numer() as i128;
        let rd = *self.root.denom() as i128;
        let a = rp * ld;
        let b = (v as i128 * ld - lp * n as i128) * rd;
        sqrt_term_le(a, n as i128, b)
    }

    /// Is `self(n) >= v`?
    pub fn ge_int(&self, n: i64, v: i64) -> bool {
        assert!(n >= 0);
        let lp = *self.linear.numer() as i128;
        let ld = *self.linear.denom() as i128;
        let rp = *self.root.numer() as i128;
        let rd = *self.root.denom() as i128;
        let a = rp * ld;
        let b = (v as i128 * ld - lp * n as i128) * rd;
        sqrt_term_ge(a, n as i128, b)
    }

    /// Value as `f64`, for reporting only.
    pub fn eval_f64(&self, n: f64) -> f64 {
        ratio_to_f64(self.linear) * n + ratio_to_f64(self.root) * n.sqrt()
    }

    /// `floor(self(n))`, exactly.
    ///
    /// Over the common denominator `D = ld*rd` the value is
    /// `(X + Y*sqrt(n)) / D` with integer `X`, `Y`, and
    /// `floor((X + s)/D) = floor((X + floor(s))/D)` for any real `s` once `X`
    /// is an integer, so only `floor(Y*sqrt(n))` needs care: it is
    /// `isqrt(Y^2 n)` for `Y >= 0` and `-ceil_sqrt(Y^2 n)` otherwise.
    pub fn floor(&self, n: i64) -> i64 {
        assert!(n >= 0);
        let lp = *self.linear.numer() as i128;
        let ld = *self.linear.denom() as i128;
        let rp = *self.root.numer() as i128;
        let rd = *self.root.denom() as i128;
        let x = lp * rd * n as i128;
        let y = rp * ld;
        let d = ld * rd;
        let s = if y >= 0 {
            isqrt(y * y * n as i128)
        } else {
            -ceil_sqrt(y * y * n as i128)
        };
        floor_div(x + s, d) as i64
    }
}

/// Lossy conversion for display and fitting; exact paths never use this.
pub fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Smallest integer `m` with `m >= (a + sqrt(rad)) / 2`, i.e. the exact
/// ceiling, decided without floating point.  Requires `rad >= 0`.
pub fn ceil_half_plus_sqrt(a: i128, rad: i128) -> i128 {
    assert!(rad >= 0);
    let mut m = ceil_div(a + isqrt(rad), 2);
    // isqrt truncates, so the true value may sit just above the first guess.
    while !(2 * m - a >= 0 && (2 * m - a) * (2 * m - a) >= rad) {
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::Ratio;

    #[test]
    fn floor_div_rounds_toward_negative_infinity() {
        assert_eq!(floor_div(7, 2), 3);
        assert_eq!(floor_div(-7, 2), -4);
        assert_eq!(floor_div(-8, 2), -4);
    }

    #[test]
    fn isqrt_matches_brute_force() {
        for x in 0..2000i128 {
            let r = isqrt(x);
            assert!(r * r <= x && (r + 1) * (r + 1) > x, "isqrt({x}) = {r}");
        }
    }

    #[test]
    fn floor_sqrt_ratio_matches_f64_on_safe_values() {
        // 3n/8  and 9n/64 over a range where f64 is trustworthy.
        for n in 0..5000 {
            let a = floor_sqrt_ratio_mul(Ratio::new(3, 8), n);
            let b = (((3 * n) as f64 / 8.0).sqrt()).floor() as i64;
            assert_eq!(a, b, "n={n}");
        }
    }

    #[test]
    fn sqrt_comparisons_cover_all_sign_cases() {
        // a*sqrt(2) vs b, checked against high-precision float.
        for a in -10i128..=10 {
            for b in -20i128..=20 {
                let exactly = sqrt_term_le(a, 2, b);
                let approx = (a as f64) * 2f64.sqrt() <= b as f64 + 1e-12;
                assert_eq!(exactly, approx, "a={a} b={b}");
            }
        }
        // Perfect-square radicand hits the equality branch.
        assert!(sqrt_term_le(3, 4, 6));
        assert!(sqrt_term_ge(3, 4, 6));
        assert!(!sqrt_term_le(3, 4, 5));
    }

    #[test]
    fn affine_sqrt_comparisons_agree_with_floats_away_from_ties() {
        let e = AffineSqrt::new(Ratio::new(1, 3), Ratio::new(7, 5));
        for n in [0i64, 1, 2, 10, 100, 1000, 123456] {
            let v = e.eval_f64(n as f64);
            let below = v.floor() as i64 - 1;
            let above = v.ceil() as i64 + 1;
            assert!(e.ge_int(n, below));
            assert!(!e.le_int(n, below));
            assert!(e.le_int(n, above));
            assert!(!e.ge_int(n, above));
        }
    }

    #[test]
    fn affine_sqrt_floor_matches_floats_and_hits_exact_roots() {
        // n/4 - sqrt(n)/15 and n/4 + sqrt(n)/15 over a safe float range.
        let lo = AffineSqrt::new(Ratio::new(1, 4), Ratio::new(-1, 15));
        let hi = AffineSqrt::new(Ratio::new(1, 4), Ratio::new(1, 15));
        for n in 0i64..4000 {
            let x = n as f64;
            let want_lo = (x / 4.0 - x.sqrt() / 15.0).floor() as i64;
            let want_hi = (x / 4.0 + x.sqrt() / 15.0).floor() as i64;
            assert_eq!(lo.floor(n), want_lo, "lo at n={n}");
            assert_eq!(hi.floor(n), want_hi, "hi at n={n}");
        }
        // Perfect-square index where the root term is exactly rational:
        // 289/4 - 17/15 = 71.116..., 289/4 + 17/15 = 73.383...
        assert_eq!(lo.floor(289), 71);
        assert_eq!(hi.floor(289), 73);
    }

    #[test]
    fn ceil_half_plus_sqrt_small_cases() {
        // (1 + sqrt(2))/2 = 1.207... -> 2;  (2 + sqrt(4))/2 = 2 exactly.
        assert_eq!(ceil_half_plus_sqrt(1, 2), 2);
        assert_eq!(ceil_half_plus_sqrt(2, 4), 2);
        assert_eq!(ceil_half_plus_sqrt(0, 0), 0);
        // Brute float cross-check on a sweep.
        for a in 0..50i128 {
            for rad in 0..200i128 {
                let want = ((a as f64 + (rad as f64).sqrt()) / 2.0).ceil() as i128;
                let got = ceil_half_plus_sqrt(a, rad);
                // Floating point can misround exact halves; accept either side
                // only when the target is within an ulp of an integer.
                let x = (a as f64 + (rad as f64).sqrt()) / 2.0;
                if (x - x.round()).abs() > 1e-9 {
                    assert_eq!(got, want, "a={a} rad={rad}");
                }
            }
        }
    }
}
