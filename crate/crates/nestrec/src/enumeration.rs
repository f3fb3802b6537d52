//! Exhaustive generation of the length-`n` survivors.
//!
//! Thanks to the bijection with admissible value sequences, `F_n` has exactly
//! `n!` members and can be walked without any search: every choice
//! `q(k) in [1, k]` is valid, so enumeration is a plain product scan (an
//! odometer) over the value side, mapping each `q` back to its driver.  The
//! induced order — lexicographic in `q` — is also the natural tree order: two
//! drivers share a tree prefix exactly when their value sequences do.
//!
//! For contrast, [`potential_count`] counts the sequences that merely respect
//! the per-term bounds: their number `phi(n)` (widths `1, 2, 3, 5, 7, ...,
//! 2n-3` multiplied) grows much faster than `n!`, so survivors become an
//! ever-thinner slice of the pointwise-plausible candidates.

use crate::seqcore::{f_bounds, f_from_q, q_from_f, FSeq, QSeq};
use crate::{Error, Result};
use num::BigUint;
use num::One;
use serde::Serialize;

/// `enumerate_f` and the tree exports refuse lengths above this by default;
/// the member count is `n!`.
pub const DEFAULT_ENUM_LIMIT: usize = 10;

fn check_len(n: usize, limit: Option<usize>) -> Result<()> {
    let limit = limit.unwrap_or(DEFAULT_ENUM_LIMIT);
    if n == 0 {
        return Err(Error::input("length must be at least 1"));
    }
    if n > limit {
        return Err(Error::limit(format!(
            "length {n} exceeds the enumeration limit {limit} (n! members)"
        )));
    }
    Ok(())
}

/// Lazy iterator over all members of `F_n` in lexicographic-by-`q` order.
pub struct FEnumerator {
    /// Current value digits; `None` once exhausted.
    digits: Option<Vec<i64>>,
}

impl Iterator for FEnumerator {
    type Item = FSeq;

    fn next(&mut self) -> Option<FSeq> {
        let digits = self.digits.as_mut()?;
        let q = QSeq::new(digits.clone()).expect("odometer stays in range");
        let f = f_from_q(&q);
        // Advance, last index fastest.
        let n = digits.len();
        let mut i = n;
        loop {
            if i == 0 {
                self.digits = None;
                break;
            }
            if digits[i - 1] < i as i64 {
                digits[i - 1] += 1;
                break;
            }
            digits[i - 1] = 1;
            i -= 1;
        }
        Some(f)
    }
}

/// Iterates every member of `F_n`.  `limit` guards against runaway requests
/// (default [`DEFAULT_ENUM_LIMIT`]).
pub fn enumerate_f(n: usize, limit: Option<usize>) -> Result<FEnumerator> {
    check_len(n, limit)?;
    Ok(FEnumerator {
        digits: Some(vec![1; n]),
    })
}

/// Does this driver survive to its own length?
pub fn is_member_f(f: &FSeq) -> bool {
    q_from_f(f, f.len()).map(|o| o.survived()).unwrap_or(false)
}

/// Number of length-`n` sequences respecting the per-term bounds:
/// `phi(n) = 1 * 2 * 3 * 5 * 7 * ... * (2n-3)`.
pub fn potential_count(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::input("length must be at least 1"));
    }
    let mut c = BigUint::one();
    for i in 2..=n {
        let (lo, hi) = f_bounds(i)?;
        c *= BigUint::from((hi - lo + 1) as u64);
    }
    Ok(c)
}

/// Number of per-term-admissible tails `f(4..n)` with every term negative:
/// `(n-3)!`.  Each position `i >= 4` offers the `i - 3` values `[3-i, -1]`.
/// Any driver carrying such a tail dies under continued negative extension,
/// so the count measures a factorially large slab of pointwise-plausible
/// candidates that cannot reach the infinite survivor set.
pub fn negative_tail_count(n: usize) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::input("needs n >= 3"));
    }
    let mut c = BigUint::one();
    for i in 4..=n as u64 {
        c *= BigUint::from(i - 3);
    }
    Ok(c)
}

/// One node of the choice tree: picking `q` at this depth induces driver
/// value `f`; children are the extensions in ascending `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FTreeNode {
    pub q: i64,
    pub f: i64,
    pub children: Vec<FTreeNode>,
}

/// Builds the full depth-`n` choice tree.  Paths from the root to depth `n`
/// are exactly the members of `F_n`; the node count is `1! + 2! + ... + n!`.
pub fn build_tree(n: usize, limit: Option<usize>) -> Result<FTreeNode> {
    check_len(n, limit)?;
    let mut q_prefix: Vec<i64> = vec![1];
    let mut root = FTreeNode {
        q: 1,
        f: 0,
        children: Vec::new(),
    };
    fill_children(&mut root, &mut q_prefix, n);
    Ok(root)
}

fn fill_children(node: &mut FTreeNode, q_prefix: &mut Vec<i64>, n: usize) {
    let depth = q_prefix.len();
    if depth == n {
        return;
    }
    let next = depth + 1;
    for qv in 1..=next as i64 {
        // f(next) = q(next) - q(next - q(depth)).
        let nested = next - q_prefix[depth - 1] as usize;
        let f = qv - q_prefix[nested - 1];
        let mut child = FTreeNode {
            q: qv,
            f,
            children: Vec::new(),
        };
        q_prefix.push(qv);
        fill_children(&mut child, q_prefix, n);
        q_prefix.pop();
        node.children.push(child);
    }
}

/// Renders the choice tree in Graphviz DOT, nodes labelled by the induced
/// driver value, ids in preorder.
pub fn export_tree_dot(n: usize, limit: Option<usize>) -> Result<String> {
    let tree = build_tree(n, limit)?;
    let mut out = String::new();
    out.push_str("digraph survivors {\n");
    out.push_str("  // schema: nestrec-tree-dot/v1\n");
    out.push_str(&format!(
        "  // depth {n}: each root-to-leaf path is the driver of one member\n"
    ));
    out.push_str("  node [shape=circle];\n");
    let mut next_id = 0usize;
    fn emit(node: &FTreeNode, id: usize, next_id: &mut usize, out: &mut String) {
        out.push_str(&format!("  n{id} [label=\"{}\"];\n", node.f));
        for child in &node.children {
            *next_id += 1;
            let cid = *next_id;
            out.push_str(&format!("  n{id} -> n{cid};\n"));
            emit(child, cid, next_id, out);
        }
    }
    emit(&tree, 0, &mut next_id, &mut out);
    out.push_str("}\n");
    Ok(out)
}
