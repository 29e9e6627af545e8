//! Canonical forms: bottom-up codes for finite rooted trees, and scheme
//! canonicalization by partition refinement.
//!
//! Two classes of a scheme are merged when their unfoldings are isomorphic
//! (the coarsest partition stable under the child-class/multiplicity
//! signature), and entries of a class with canonically equal child classes
//! are merged by adding multiplicities. The result records, per canonical
//! class, the local degrees of the wreath decomposition of the full
//! automorphism group.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::extnat::ExtNat;
use crate::scheme::{Entry, Scheme};
use crate::tree::FiniteTree;
use crate::Result;

/// Canonical code of a finite labeled rooted tree. Codes are equal exactly
/// when the trees are isomorphic respecting labels, and ordering is total,
/// so codes can key maps and sort siblings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Code {
    pub label: u32,
    pub children: Vec<Code>,
}

/// Canonical code of the whole tree.
pub fn canonical_code_finite(t: &FiniteTree) -> Code {
    subtree_codes(t).swap_remove(0)
}

/// Canonical code of every subtree, indexed by node.
pub fn subtree_codes(t: &FiniteTree) -> Vec<Code> {
    let n = t.node_count();
    let mut codes: Vec<Code> = vec![Code { label: 0, children: Vec::new() }; n];
    // children always have larger indices than their parent
    for v in (0..n as u32).rev() {
        let mut children: Vec<Code> =
            t.children(v).iter().map(|&c| codes[c as usize].clone()).collect();
        children.sort();
        codes[v as usize] = Code { label: t.label(v), children };
    }
    codes
}

/// Interned per-node codes: equal ids exactly when the subtrees are
/// isomorphic (label-aware). Cheaper than [`Code`] for repeated comparisons.
pub(crate) fn subtree_code_ids(t: &FiniteTree) -> Vec<u32> {
    let n = t.node_count();
    let mut ids = vec![0u32; n];
    let mut intern: BTreeMap<(u32, Vec<u32>), u32> = BTreeMap::new();
    for v in (0..n as u32).rev() {
        let mut child_ids: Vec<u32> = t.children(v).iter().map(|&c| ids[c as usize]).collect();
        child_ids.sort_unstable();
        let key = (t.label(v), child_ids);
        let next = intern.len() as u32;
        ids[v as usize] = *intern.entry(key).or_insert(next);
    }
    ids
}

/// A scheme together with the evidence of its canonicalization.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalScheme {
    /// The merged, reordered scheme; class names are the representatives
    /// (first-declared member) of each merged group.
    pub scheme: Scheme,
    /// For each original class index, the canonical class index.
    pub class_of: Vec<usize>,
    /// Original class name -> canonical class name, in declaration order.
    pub certificate: Vec<(String, String)>,
}

/// Merges bisimilar classes and same-class entries, and orders classes by
/// (depth of first reachability, class code, declaration index).
pub fn canonical_form(s: &Scheme) -> CanonicalScheme {
    let n = s.class_count();

    // Coarsest partition stable under the (child block, total multiplicity)
    // signature, starting from a single block.
    let mut block = vec![0usize; n];
    loop {
        let mut sig_of: Vec<Vec<(usize, ExtNat)>> = Vec::with_capacity(n);
        for c in 0..n {
            let mut sums: BTreeMap<usize, ExtNat> = BTreeMap::new();
            for e in s.entries(c) {
                let slot = sums.entry(block[e.child]).or_insert(ExtNat::ZERO);
                *slot = slot
                    .checked_add(e.mult)
                    .expect("multiplicity sum overflow");
            }
            sig_of.push(sums.into_iter().collect());
        }
        let mut seen: BTreeMap<(usize, &[(usize, ExtNat)]), usize> = BTreeMap::new();
        let mut next = vec![0usize; n];
        for c in 0..n {
            let key = (block[c], sig_of[c].as_slice());
            let id = seen.len();
            next[c] = *seen.entry(key).or_insert(id);
        }
        if next == block {
            break;
        }
        block = next;
    }

    let block_count = block.iter().copied().max().unwrap_or(0) + 1;

    // Merged edges per block: child block -> summed multiplicity.
    let rep_of_block: Vec<usize> =
        (0..block_count).map(|b| (0..n).find(|&c| block[c] == b).unwrap()).collect();
    let block_edges: Vec<BTreeMap<usize, ExtNat>> = rep_of_block
        .iter()
        .map(|&rep| {
            let mut sums: BTreeMap<usize, ExtNat> = BTreeMap::new();
            for e in s.entries(rep) {
                let slot = sums.entry(block[e.child]).or_insert(ExtNat::ZERO);
                *slot = slot.checked_add(e.mult).expect("multiplicity sum overflow");
            }
            sums
        })
        .collect();

    // Depth of first reachability from the root block.
    let root_block = block[s.root()];
    let mut depth = vec![usize::MAX; block_count];
    depth[root_block] = 0;
    let mut frontier = vec![root_block];
    while !frontier.is_empty() {
        let mut next_frontier = Vec::new();
        for &b in &frontier {
            for &child in block_edges[b].keys() {
                if depth[child] == usize::MAX {
                    depth[child] = depth[b] + 1;
                    next_frontier.push(child);
                }
            }
        }
        frontier = next_frontier;
    }

    // Depth-bounded block codes distinguish inequivalent blocks.
    let codes = block_codes(&block_edges, block_count);

    let mut order: Vec<usize> = (0..block_count).collect();
    order.sort_by(|&a, &b| {
        (depth[a], &codes[a], rep_of_block[a]).cmp(&(depth[b], &codes[b], rep_of_block[b]))
    });
    let mut canon_of_block = vec![0usize; block_count];
    for (i, &b) in order.iter().enumerate() {
        canon_of_block[b] = i;
    }

    let names: Vec<String> =
        order.iter().map(|&b| s.class_name(rep_of_block[b]).to_string()).collect();
    let entries: Vec<Vec<Entry>> = order
        .iter()
        .map(|&b| {
            let mut es: Vec<Entry> = block_edges[b]
                .iter()
                .map(|(&child, &mult)| Entry { child: canon_of_block[child], mult })
                .collect();
            es.sort_by_key(|e| e.child);
            es
        })
        .collect();
    let scheme = Scheme::new(names, entries, canon_of_block[root_block])
        .expect("canonicalization preserves validity");

    let class_of: Vec<usize> = (0..n).map(|c| canon_of_block[block[c]]).collect();
    let certificate = (0..n)
        .map(|c| {
            (s.class_name(c).to_string(), scheme.class_name(class_of[c]).to_string())
        })
        .collect();
    CanonicalScheme { scheme, class_of, certificate }
}

/// Depth-`block_count` unfolding signatures of each block; distinct for
/// inequivalent blocks of a stabilized partition.
fn block_codes(
    block_edges: &[BTreeMap<usize, ExtNat>],
    block_count: usize,
) -> Vec<BlockCode> {
    let mut codes: Vec<BlockCode> = vec![BlockCode::default(); block_count];
    for _ in 0..block_count {
        codes = (0..block_count)
            .map(|b| {
                let mut children: Vec<(ExtNat, BlockCode)> = block_edges[b]
                    .iter()
                    .map(|(&child, &mult)| (mult, codes[child].clone()))
                    .collect();
                children.sort();
                BlockCode { children }
            })
            .collect();
    }
    codes
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
struct BlockCode {
    children: Vec<(ExtNat, BlockCode)>,
}

/// True when the presented trees are isomorphic: canonical forms are equal
/// up to class renaming.
pub fn isomorphic(a: &Scheme, b: &Scheme) -> bool {
    let ca = canonical_form(a).scheme;
    let cb = canonical_form(b).scheme;
    if ca.class_count() != cb.class_count() || ca.root() != cb.root() {
        return false;
    }
    (0..ca.class_count()).all(|i| ca.entries(i) == cb.entries(i))
}

/// One canonical class in the quotient report.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientClass {
    pub name: String,
    pub is_root: bool,
    /// `(parent class, N)` for every position at which this class occurs in
    /// the quotient tree; `N` is the local symmetric-group degree there.
    pub incoming: Vec<(String, ExtNat)>,
}

/// The class quotient with local wreath degrees.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientReport {
    pub classes: Vec<QuotientClass>,
    /// Human-readable decomposition of the automorphism group.
    pub decomposition: Vec<String>,
}

/// Reports, per canonical class, the degrees `N` of the local symmetric
/// groups, and renders the wreath decomposition of the automorphism group.
pub fn quotient_report(s: &Scheme) -> QuotientReport {
    let canon = canonical_form(s);
    let cs = &canon.scheme;
    let mut incoming: Vec<Vec<(String, ExtNat)>> = vec![Vec::new(); cs.class_count()];
    for c in 0..cs.class_count() {
        for e in cs.entries(c) {
            incoming[e.child].push((cs.class_name(c).to_string(), e.mult));
        }
    }
    let classes: Vec<QuotientClass> = (0..cs.class_count())
        .map(|c| QuotientClass {
            name: cs.class_name(c).to_string(),
            is_root: c == cs.root(),
            incoming: incoming[c].clone(),
        })
        .collect();

    let mut decomposition = vec![
        "Aut(T) = generalized wreath product, over the class quotient, of the local groups Sym(N)".to_string(),
    ];
    for c in 0..cs.class_count() {
        if c == cs.root() {
            decomposition.push(format!("  {}: root position", cs.class_name(c)));
        }
        for (parent, n) in &incoming[c] {
            decomposition.push(format!(
                "  {}: Sym({n}) at each occurrence below {parent}",
                cs.class_name(c)
            ));
        }
    }
    QuotientReport { classes, decomposition }
}

/// Convenience: canonical class index of every original class.
pub fn canonical_classes(s: &Scheme) -> Result<CanonicalScheme> {
    Ok(canonical_form(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extnat::{Fin, Omega};
    use crate::scheme::DEFAULT_NODE_BUDGET;
    use crate::testutil::{all_parent_vectors, trees_isomorphic_bruteforce};

    fn parse(text: &str) -> Scheme {
        Scheme::parse(text).unwrap()
    }

    #[test]
    fn code_is_order_invariant() {
        let a = FiniteTree::parse("(()(()))").unwrap();
        let b = FiniteTree::parse("((())())").unwrap();
        assert_eq!(canonical_code_finite(&a), canonical_code_finite(&b));
    }

    #[test]
    fn code_distinguishes_shapes() {
        let a = FiniteTree::parse("(())").unwrap();
        let b = FiniteTree::parse("()").unwrap();
        assert_ne!(canonical_code_finite(&a), canonical_code_finite(&b));
    }

    #[test]
    fn four_node_trees_have_four_codes() {
        // all rooted trees on exactly 4 nodes
        let mut codes = std::collections::BTreeSet::new();
        let mut count = 0;
        for parents in all_parent_vectors(4) {
            let t = FiniteTree::from_parents(parents, None).unwrap();
            codes.insert(canonical_code_finite(&t));
            count += 1;
        }
        assert_eq!(count, 6); // 3! parent vectors
        assert_eq!(codes.len(), 4);
    }

    #[test]
    fn codes_agree_with_bruteforce_isomorphism_up_to_eight_nodes() {
        // codes equal exactly when an explicit isomorphism exists
        for n in 1..=8usize {
            let trees: Vec<FiniteTree> = all_parent_vectors(n)
                .into_iter()
                .map(|p| FiniteTree::from_parents(p, None).unwrap())
                .collect();
            // group by matching against representatives with the
            // backtracking matcher (independent of the code path)
            let mut reps: Vec<(usize, Code)> = Vec::new();
            for (i, t) in trees.iter().enumerate() {
                let code = canonical_code_finite(t);
                match reps.iter().find(|(j, _)| trees_isomorphic_bruteforce(&trees[*j], t)) {
                    Some((_, rep_code)) => assert_eq!(
                        &code, rep_code,
                        "isomorphic trees got different codes (n={n}, tree {i})"
                    ),
                    None => {
                        for (_, other) in &reps {
                            assert_ne!(
                                &code, other,
                                "non-isomorphic trees share a code (n={n}, tree {i})"
                            );
                        }
                        reps.push((i, code));
                    }
                }
            }
        }
    }

    #[test]
    fn labels_are_respected_by_codes() {
        let shape = vec![0u32, 0, 0];
        let a = FiniteTree::from_parents(shape.clone(), Some(vec![0, 1, 2])).unwrap();
        let b = FiniteTree::from_parents(shape.clone(), Some(vec![0, 2, 1])).unwrap();
        let c = FiniteTree::from_parents(shape, Some(vec![0, 1, 1])).unwrap();
        assert_eq!(canonical_code_finite(&a), canonical_code_finite(&b));
        assert_ne!(canonical_code_finite(&a), canonical_code_finite(&c));
    }

    #[test]
    fn merges_duplicate_classes() {
        let s = parse("root=r; class r { child a * 3; child b * 3; } class a { child a * 2; } class b { child b * 2; }");
        let canon = canonical_form(&s);
        assert_eq!(canon.scheme.class_count(), 2);
        // both a and b map to the same canonical class
        assert_eq!(canon.class_of[1], canon.class_of[2]);
        // and the two entries of r merged with summed multiplicity
        let root = canon.scheme.root();
        assert_eq!(canon.scheme.entries(root).len(), 1);
        assert_eq!(canon.scheme.entries(root)[0].mult, Fin(6));
    }

    #[test]
    fn root_bisimilar_to_children_collapses_fully() {
        // one a-child plus one b-child of binary type makes the root itself
        // a binary node, so everything merges into the binary scheme
        let s = parse("root=r; class r { child a * 1; child b * 1; } class a { child a * 2; } class b { child b * 2; }");
        let canon = canonical_form(&s);
        assert_eq!(canon.scheme.class_count(), 1);
        assert!(isomorphic(&s, &parse("root=v; class v { child v * 2; }")));
    }

    #[test]
    fn merges_same_class_entries() {
        let s = parse("root=r; class r { child b * 2; child c * 3; } class b { } class c { }");
        let canon = canonical_form(&s);
        assert_eq!(canon.scheme.class_count(), 2);
        let root = canon.scheme.root();
        assert_eq!(canon.scheme.entries(root), &[Entry { child: 1, mult: Fin(5) }]);
    }

    #[test]
    fn binary_scheme_is_already_canonical() {
        let s = parse("root=v; class v { child v * 2; }");
        let canon = canonical_form(&s);
        assert_eq!(canon.scheme, s);
    }

    #[test]
    fn canonicalization_is_idempotent() {
        for text in [
            "root=v; class v { child v * 2; }",
            "root=r; class r { child a * 1; child b * 1; } class a { } class b { }",
            "root=r; class r { child v * omega; } class v { child v * 2; }",
        ] {
            let s = parse(text);
            let once = canonical_form(&s).scheme;
            let twice = canonical_form(&once).scheme;
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn isomorphism_ignores_names_and_declaration_order() {
        let a = parse("root=v; class v { child v * 2; }");
        let b = parse("root=node; class node { child node * 2; }");
        assert!(isomorphic(&a, &b));
        let c = parse("root=v; class v { child v * 3; }");
        assert!(!isomorphic(&a, &c));
    }

    #[test]
    fn duplicated_class_scheme_isomorphic_to_canonical_form() {
        let s = parse("root=r; class r { child a * 1; child b * 1; } class a { child a * 2; } class b { child b * 2; }");
        let canon = canonical_form(&s).scheme;
        assert!(isomorphic(&s, &canon));
        // cross-check: truncated unfoldings carry the same shape
        for d in 0..=4u32 {
            let ta = s.unfold(d, 3, DEFAULT_NODE_BUDGET).unwrap().tree.forget_labels();
            let tb = canon.unfold(d, 3, DEFAULT_NODE_BUDGET).unwrap().tree.forget_labels();
            assert_eq!(canonical_code_finite(&ta), canonical_code_finite(&tb));
        }
    }

    #[test]
    fn quotient_report_star() {
        let s = parse("root=r; class r { child v * omega; } class v { }");
        let report = quotient_report(&s);
        assert_eq!(report.classes.len(), 2);
        let leaf = report.classes.iter().find(|c| !c.is_root).unwrap();
        assert_eq!(leaf.incoming, vec![("r".to_string(), Omega)]);
    }

    #[test]
    fn quotient_report_reads_n_at_every_position() {
        // omega copies of binary trees: v occurs below r with N = omega and
        // below itself with N = 2
        let s = parse("root=r; class r { child v * omega; } class v { child v * 2; }");
        let report = quotient_report(&s);
        let v = report.classes.iter().find(|c| c.name == "v").unwrap();
        assert_eq!(
            v.incoming,
            vec![("r".to_string(), Omega), ("v".to_string(), Fin(2))]
        );
    }
}
