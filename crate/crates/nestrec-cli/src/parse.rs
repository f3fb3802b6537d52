//! Argument parsing helpers: exact rationals, cone specifications, ranges.
//!
//! Every numeric parameter that feeds a floor-of-rational computation is
//! parsed as an exact fraction; decimals are rejected outright because
//! `floor(0.23 * n)` and `floor(23n/100)` disagree on infinitely many `n`.

use num::rational::Ratio;

use nestrec::bounding::ConeSpec;
use nestrec::exact::AffineSqrt;
use nestrec::seqcore::f_bounds;

/// Parses `p/q` or a bare integer into an exact rational.  Decimal input is
/// refused with a rewrite hint.
pub fn parse_ratio(s: &str) -> Result<Ratio<i64>, String> {
    let s = s.trim();
    if s.contains('.') {
        return Err(format!(
            "`{s}` looks like a decimal; exact fractions only (write 23/100, not 0.23)"
        ));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = num
        .parse()
        .map_err(|_| format!("`{num}` is not an integer numerator"))?;
    let d: i64 = den
        .parse()
        .map_err(|_| format!("`{den}` is not an integer denominator"))?;
    if d == 0 {
        return Err("denominator must be nonzero".into());
    }
    Ok(Ratio::new(n, d))
}

/// Formats a rational the way [`parse_ratio`] reads it back.
pub fn fmt_ratio(r: Ratio<i64>) -> String {
    if r.denom() == &1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses a comma-separated integer list (`0,1,2,-1`).
pub fn parse_int_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("`{}` is not an integer", t.trim()))
        })
        .collect()
}

/// Parses `a..b` (inclusive on both ends) or a single value.
pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    match s.split_once("..") {
        Some((a, b)) => {
            let lo: u64 = a
                .trim()
                .parse()
                .map_err(|_| format!("`{}` is not an integer", a.trim()))?;
            let hi: u64 = b
                .trim()
                .parse()
                .map_err(|_| format!("`{}` is not an integer", b.trim()))?;
            if lo > hi {
                return Err(format!("empty range {lo}..{hi}"));
            }
            Ok((lo, hi))
        }
        None => {
            let v: u64 = s
                .trim()
                .parse()
                .map_err(|_| format!("`{}` is not an integer", s.trim()))?;
            Ok((v, v))
        }
    }
}

/// Parses an inline cone specification:
///
/// ```text
///   linear:A,B               floor(A*n) .. floor(B*n)
///   sqrt:A,B                 floor(sqrt(A*n)) .. floor(sqrt(B*n))
///   affine-sqrt:P,R,P',R'    floor(P*n + R*sqrt(n)) .. floor(P'*n + R'*sqrt(n))
///   table:L1,L2,../U1,U2,..  explicit per-index bounds
/// ```
///
/// with every parameter an exact fraction.
pub fn parse_cone(s: &str) -> Result<ConeSpec, String> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("`{s}` has no kind prefix (try linear:23/100,1/4)"))?;
    match kind {
        "linear" => {
            let (a, b) = two_ratios(rest)?;
            ConeSpec::linear(s, a, b).map_err(|e| e.to_string())
        }
        "sqrt" => {
            let (a, b) = two_ratios(rest)?;
            ConeSpec::sqrt(s, a, b).map_err(|e| e.to_string())
        }
        "affine-sqrt" => {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 4 {
                return Err(format!(
                    "affine-sqrt needs 4 fractions (lin_lo,root_lo,lin_hi,root_hi), got {}",
                    parts.len()
                ));
            }
            let vals: Vec<Ratio<i64>> = parts
                .iter()
                .map(|p| parse_ratio(p))
                .collect::<Result<_, _>>()?;
            let lo = AffineSqrt::new(vals[0], vals[1]);
            let hi = AffineSqrt::new(vals[2], vals[3]);
            ConeSpec::affine_sqrt(s, lo, hi).map_err(|e| e.to_string())
        }
        "table" => {
            let (l_text, u_text) = rest
                .split_once('/')
                .ok_or("table needs L1,L2,../U1,U2,..")?;
            let l = parse_int_list(l_text)?;
            let u = parse_int_list(u_text)?;
            ConeSpec::table(s, l, u).map_err(|e| e.to_string())
        }
        other => Err(format!(
            "unknown cone kind `{other}` (linear, sqrt, affine-sqrt, table)"
        )),
    }
}

fn two_ratios(rest: &str) -> Result<(Ratio<i64>, Ratio<i64>), String> {
    let (a, b) = rest
        .split_once(',')
        .ok_or("expected two fractions separated by a comma")?;
    Ok((parse_ratio(a)?, parse_ratio(b)?))
}

/// Reads a cone from a small JSON config:
///
/// ```json
/// { "name": "example", "kind": "linear", "a": "23/100", "b": "1/4" }
/// { "kind": "affine-sqrt", "lo_linear": "1/4", "lo_root": "-1/15",
///   "hi_linear": "1/4", "hi_root": "1/15" }
/// { "kind": "table", "l": [0, 0, 0], "u": [0, 1, 2] }
/// ```
pub fn cone_from_json(text: &str) -> Result<ConeSpec, String> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("bad cone JSON: {e}"))?;
    let kind = v
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or("cone config needs a string `kind`")?;
    let name = v
        .get("name")
        .and_then(|k| k.as_str())
        .unwrap_or("cone-config")
        .to_string();
    let ratio_field = |key: &str| -> Result<Ratio<i64>, String> {
        let f = v
            .get(key)
            .ok_or_else(|| format!("cone config needs `{key}`"))?;
        match f {
            serde_json::Value::String(s) => parse_ratio(s),
            serde_json::Value::Number(n) if n.is_i64() => {
                Ok(Ratio::from_integer(n.as_i64().unwrap()))
            }
            _ => Err(format!(
                "`{key}` must be a fraction string or integer (write \"23/100\", not 0.23)"
            )),
        }
    };
    match kind {
        "linear" => ConeSpec::linear(name, ratio_field("a")?, ratio_field("b")?)
            .map_err(|e| e.to_string()),
        "sqrt" => ConeSpec::sqrt(name, ratio_field("a")?, ratio_field("b")?)
            .map_err(|e| e.to_string()),
        "affine-sqrt" => {
            let lo = AffineSqrt::new(ratio_field("lo_linear")?, ratio_field("lo_root")?);
            let hi = AffineSqrt::new(ratio_field("hi_linear")?, ratio_field("hi_root")?);
            ConeSpec::affine_sqrt(name, lo, hi).map_err(|e| e.to_string())
        }
        "table" => {
            let ints = |key: &str| -> Result<Vec<i64>, String> {
                v.get(key)
                    .and_then(|x| x.as_array())
                    .ok_or_else(|| format!("cone config needs array `{key}`"))?
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| format!("`{key}` must hold integers")))
                    .collect()
            };
            ConeSpec::table(name, ints("l")?, ints("u")?).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown cone kind `{other}` in config")),
    }
}

/// Draws a random table cone of length `4..=max_len` whose per-index windows
/// sit inside the admissible strip and have width at most `max_width`.
pub fn random_table_cone(
    rng: &mut impl rand::Rng,
    index: usize,
    max_len: usize,
    max_width: i64,
) -> ConeSpec {
    let len = rng.gen_range(4..=max_len);
    let mut l = Vec::with_capacity(len);
    let mut u = Vec::with_capacity(len);
    for i in 1..=len {
        let (lo, hi) = f_bounds(i).expect("i >= 1");
        let a = rng.gen_range(lo..=hi);
        let b = (a + rng.gen_range(0..=max_width)).min(hi);
        l.push(a);
        u.push(b);
    }
    ConeSpec::table(format!("random-{index}"), l, u).expect("windows are admissible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_and_hints() {
        assert_eq!(parse_ratio("23/100").unwrap(), Ratio::new(23, 100));
        assert_eq!(parse_ratio("-1/15").unwrap(), Ratio::new(-1, 15));
        assert_eq!(parse_ratio("7").unwrap(), Ratio::from_integer(7));
        let err = parse_ratio("0.23").unwrap_err();
        assert!(err.contains("write 23/100, not 0.23"), "{err}");
        assert!(parse_ratio("1/0").is_err());
        assert_eq!(fmt_ratio(Ratio::new(6, 8)), "3/4");
        assert_eq!(fmt_ratio(Ratio::from_integer(-2)), "-2");
    }

    #[test]
    fn cone_specs() {
        let c = parse_cone("linear:23/100,1/4").unwrap();
        assert_eq!(c.l(100), 23);
        assert_eq!(c.u(100), 25);
        let t = parse_cone("table:0,0,0/0,1,2").unwrap();
        assert_eq!(t.max_len(), Some(3));
        assert!(parse_cone("linear:0.23,1/4").unwrap_err().contains("23/100"));
        assert!(parse_cone("frob:1,2").is_err());
    }

    #[test]
    fn cone_json_round_trip() {
        let c = cone_from_json(r#"{ "kind": "linear", "a": "23/100", "b": "1/4" }"#).unwrap();
        assert_eq!(c.l(100), 23);
        let t = cone_from_json(r#"{ "kind": "table", "l": [0,0,0], "u": [0,1,2] }"#).unwrap();
        assert_eq!(t.u(3), 2);
        assert!(cone_from_json(r#"{ "kind": "linear", "a": 0.23, "b": "1/4" }"#)
            .unwrap_err()
            .contains("23/100"));
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..64").unwrap(), (3, 64));
        assert_eq!(parse_range("7").unwrap(), (7, 7));
        assert!(parse_range("9..3").is_err());
    }
}
