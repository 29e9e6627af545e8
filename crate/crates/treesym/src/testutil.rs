//! Test-only helpers shared by the unit tests.

use crate::tree::FiniteTree;

/// All parent vectors for trees on `n` nodes in parent-first order; every
/// rooted tree on `n` nodes appears at least once.
pub(crate) fn all_parent_vectors(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for p in 0..i as u32 {
            cur[i] = p;
            rec(i + 1, n, cur, out);
        }
    }
    if n == 1 {
        out.push(cur.clone());
    } else {
        rec(1, n, &mut cur, &mut out);
    }
    out
}

/// Backtracking isomorphism test, independent of canonical codes: tries to
/// match children multisets recursively.
pub(crate) fn trees_isomorphic_bruteforce(a: &FiniteTree, b: &FiniteTree) -> bool {
    if a.node_count() != b.node_count() {
        return false;
    }
    match_nodes(a, b, 0, 0)
}

fn match_nodes(a: &FiniteTree, b: &FiniteTree, u: u32, v: u32) -> bool {
    if a.label(u) != b.label(v) {
        return false;
    }
    let ca = a.children(u);
    let cb = b.children(v);
    if ca.len() != cb.len() {
        return false;
    }
    // try every assignment of a-children to b-children
    let mut used = vec![false; cb.len()];
    fn assign(
        a: &FiniteTree,
        b: &FiniteTree,
        ca: &[u32],
        cb: &[u32],
        i: usize,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == ca.len() {
            return true;
        }
        for j in 0..cb.len() {
            if !used[j]
                && a.subtree(ca[i]).len() == b.subtree(cb[j]).len()
                && match_nodes(a, b, ca[i], cb[j])
            {
                used[j] = true;
                if assign(a, b, ca, cb, i + 1, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    assign(a, b, ca, cb, 0, &mut used)
}
