//! Cross-module invariants beyond the acceptance criteria: sampled
//! consequences of the universal closure condition, mode monotonicity,
//! degeneracy bookkeeping, and witnessed-level sign surjectivity.

mod common;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use treesym::acl::{acl_enumerate, universal_acl_finite, AclEnumeration, AddressSet};
use treesym::extnat::Fin;
use treesym::oracle::{
    automorphism_generators, compose, level_sign, random_automorphism, TreeAutomorphism,
};
use treesym::scheme::DEFAULT_NODE_BUDGET;
use treesym::verdict::{
    decide_ample_generics, decide_strong_cofinality, witness_countable_cofinality, Mode,
};
use treesym::{FiniteTree, Scheme};

/// When the closure of every finite set is finite, every sampled fixed set
/// has a finite enumerable closure: 100 samples per scheme.
#[test]
fn universal_finiteness_holds_on_sampled_fixed_sets() {
    let mut checked = 0usize;
    for (name, scheme) in nine_scheme_corpus() {
        if !universal_acl_finite(&scheme).finite {
            continue;
        }
        let pool = scheme.unfold(3, 3, DEFAULT_NODE_BUDGET).unwrap().addresses;
        let mut rng = ChaCha8Rng::seed_from_u64(0xcafe);
        for _ in 0..100 {
            let k = (0..=2usize).collect::<Vec<_>>();
            let k = *k.choose(&mut rng).unwrap();
            let fixed: Vec<_> = (0..k)
                .filter_map(|_| pool.choose(&mut rng).cloned())
                .collect();
            let x = AddressSet::new(&scheme, fixed).unwrap();
            match acl_enumerate(&scheme, &x, 10_000) {
                Ok(AclEnumeration::Finite(_)) => checked += 1,
                other => panic!("{name}: expected finite closure, got {other:?}"),
            }
        }
    }
    assert!(checked >= 300, "too few universal schemes sampled: {checked}");
    println!("universal schemes: {checked} sampled closures all finite");
}

/// The literal criterion is at least as strict as the reduced one: a
/// literal pass forces a reduced pass, for both properties, on 300 random
/// schemes plus the corpus.
#[test]
fn literal_pass_forces_reduced_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbeef);
    let mut schemes: Vec<Scheme> = SCHEME_CORPUS.iter().map(|n| load_scheme(n)).collect();
    schemes.extend((0..300).map(|_| random_scheme(&mut rng)));
    for s in &schemes {
        if decide_strong_cofinality(s, Mode::Paper).answer {
            assert!(
                decide_strong_cofinality(s, Mode::Reduced).answer,
                "reduced strong cofinality lost a literal pass on {}",
                s.to_text()
            );
        }
        if decide_ample_generics(s, Mode::Paper).answer {
            assert!(
                decide_ample_generics(s, Mode::Reduced).answer,
                "reduced ample generics lost a literal pass on {}",
                s.to_text()
            );
        }
    }
}

/// The degenerate flag fires exactly when the modes disagree, and never on
/// a scheme without multiplicity-1 entries.
#[test]
fn degeneracy_flags_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    let mut schemes: Vec<Scheme> = SCHEME_CORPUS.iter().map(|n| load_scheme(n)).collect();
    schemes.extend((0..300).map(|_| random_scheme(&mut rng)));
    for s in &schemes {
        let sc_paper = decide_strong_cofinality(s, Mode::Paper);
        let sc_reduced = decide_strong_cofinality(s, Mode::Reduced);
        let disagree = sc_paper.answer != sc_reduced.answer;
        assert_eq!(sc_paper.degenerate, disagree, "{}", s.to_text());
        assert_eq!(sc_reduced.degenerate, disagree, "{}", s.to_text());

        let has_unit_entry = (0..s.class_count())
            .any(|c| s.entries(c).iter().any(|e| e.mult == Fin(1)));
        if !has_unit_entry {
            assert!(!disagree, "degenerate without unit entries: {}", s.to_text());
            let ag_paper = decide_ample_generics(s, Mode::Paper);
            assert!(!ag_paper.degenerate, "{}", s.to_text());
        }
    }
}

/// Reduces sign vectors projected to the witnessed levels and exhibits a
/// preimage of each basis vector of the projected space.
fn projected_basis_witnesses(
    tree: &FiniteTree,
    gens: &[TreeAutomorphism],
    witnessed: &[usize],
) -> Option<Vec<TreeAutomorphism>> {
    let project = |full: Vec<bool>| -> Vec<bool> {
        witnessed.iter().map(|&d| full.get(d - 1).copied().unwrap_or(false)).collect()
    };
    let mut rows: Vec<(Vec<bool>, TreeAutomorphism)> = Vec::new();
    for g in gens {
        let mut vec = project(level_sign(tree, g));
        let mut elem = g.clone();
        loop {
            let Some(p) = vec.iter().position(|&b| b) else { break };
            match rows.iter().find(|(r, _)| r.iter().position(|&b| b) == Some(p)) {
                Some((rvec, relem)) => {
                    let rvec = rvec.clone();
                    let relem = relem.clone();
                    for (v, r) in vec.iter_mut().zip(&rvec) {
                        *v ^= r;
                    }
                    elem = compose(&elem, &relem).unwrap();
                }
                None => {
                    rows.push((vec, elem));
                    break;
                }
            }
        }
    }
    let mut out = Vec::new();
    for d in 0..witnessed.len() {
        let mut target = vec![false; witnessed.len()];
        target[d] = true;
        let mut elem = None;
        loop {
            let Some(p) = target.iter().position(|&b| b) else { break };
            let (rvec, relem) =
                rows.iter().find(|(r, _)| r.iter().position(|&b| b) == Some(p))?;
            for (v, r) in target.iter_mut().zip(rvec) {
                *v ^= r;
            }
            elem = Some(match elem {
                None => relem.clone(),
                Some(e) => compose(&e, relem).unwrap(),
            });
        }
        out.push(elem?);
    }
    Some(out)
}

/// For every witness-bearing corpus scheme, the level-sign map restricted
/// to the witnessed levels is onto, with preimages exhibited per basis
/// vector, at truncation depths 2..=5.
#[test]
fn witnessed_levels_carry_a_surjective_sign_map() {
    for (name, scheme) in nine_scheme_corpus() {
        let witness = match witness_countable_cofinality(&scheme) {
            Ok(w) => w,
            Err(_) => continue,
        };
        for depth in 2..=5u32 {
            let witnessed: Vec<usize> = (0..)
                .map(|k| (witness.first_level + k * witness.period) as usize)
                .take_while(|&d| d <= depth as usize)
                .collect();
            if witnessed.is_empty() {
                continue;
            }
            let tree = scheme.unfold(depth, 3, DEFAULT_NODE_BUDGET).unwrap().tree;
            let gens = automorphism_generators(&tree, &BTreeSet::new());
            let preimages = projected_basis_witnesses(&tree, &gens, &witnessed)
                .unwrap_or_else(|| panic!("{name} depth {depth}: witnessed levels not spanned"));
            for (i, g) in preimages.iter().enumerate() {
                let full = level_sign(&tree, g);
                for (j, &d) in witnessed.iter().enumerate() {
                    assert_eq!(full[d - 1], i == j, "{name} depth {depth} level {d}");
                }
            }
        }
    }
}

/// The orbit product formula agrees with brute force on random schemes,
/// not just the corpus. The truncation carries canonical-class labels so
/// that its label-preserving automorphisms are exactly the restrictions of
/// automorphisms of the capped infinite tree.
#[test]
fn orbit_formula_matches_bruteforce_on_random_schemes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1ce);
    let mut comparisons = 0usize;
    for _ in 0..40 {
        let s = random_scheme(&mut rng);
        let cap = 2u64;
        let capped = s.substitute_omega(cap).unwrap();
        let unfolding = match capped.unfold(3, cap, 20_000) {
            Ok(u) => u,
            Err(_) => continue,
        };
        let canon = treesym::canon::canonical_form(&capped);
        let parents: Vec<u32> =
            (0..unfolding.tree.node_count() as u32).map(|v| unfolding.tree.parent(v)).collect();
        let labels: Vec<u32> =
            unfolding.classes.iter().map(|&c| canon.class_of[c] as u32).collect();
        let relabeled = FiniteTree::from_parents(parents, Some(labels)).unwrap();

        let mut fixed_sets: Vec<Vec<u32>> = vec![Vec::new()];
        let candidates: Vec<u32> = (1..relabeled.node_count() as u32)
            .filter(|&v| relabeled.depth(v) <= 2)
            .collect();
        for _ in 0..3 {
            if let Some(&v) = candidates.choose(&mut rng) {
                fixed_sets.push(vec![v]);
            }
        }
        for fixed in &fixed_sets {
            let fixed_nodes: BTreeSet<u32> = fixed.iter().copied().collect();
            let x = AddressSet::new(
                &capped,
                fixed.iter().map(|&v| unfolding.addresses[v as usize].clone()),
            )
            .unwrap();
            let brute = treesym::oracle::acl_bruteforce(&relabeled, &fixed_nodes);
            for v in 0..relabeled.node_count() as u32 {
                let formula = treesym::acl::orbit_cardinality(
                    &capped,
                    &x,
                    &unfolding.addresses[v as usize],
                )
                .unwrap();
                assert_eq!(
                    formula,
                    Fin(brute[v as usize]),
                    "scheme {} node {v} fixing {fixed:?}",
                    s.to_text()
                );
                comparisons += 1;
            }
        }
    }
    assert!(comparisons > 1000, "too few comparisons: {comparisons}");
    println!("random-scheme orbit formula: {comparisons} comparisons agree");
}

/// Group laws on randomly sampled automorphisms of corpus truncations.
#[test]
fn group_laws_hold_on_random_elements() {
    for (_, scheme) in nine_scheme_corpus() {
        let tree = scheme.unfold(3, 2, DEFAULT_NODE_BUDGET).unwrap().tree;
        let id = TreeAutomorphism::identity(&tree);
        for seed in 0..40u64 {
            let g = random_automorphism(&tree, 3 * seed);
            let h = random_automorphism(&tree, 3 * seed + 1);
            let k = random_automorphism(&tree, 3 * seed + 2);
            assert_eq!(compose(&g, &g.inverse()).unwrap(), id);
            assert_eq!(compose(&g.inverse(), &g).unwrap(), id);
            assert_eq!(compose(&id, &g).unwrap(), g);
            let left = compose(&compose(&g, &h).unwrap(), &k).unwrap();
            let right = compose(&g, &compose(&h, &k).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }
}
