//! Brute-force ground truth on finite trees: explicit automorphisms, orbit
//! closure under pointwise stabilizers, per-level permutation signs, and
//! one-point extension of partial isomorphisms.
//!
//! Everything here is exhaustive or seeded-deterministic, and deliberately
//! independent of the class-graph reasoning it is used to validate.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::canon::subtree_code_ids;
use crate::tree::FiniteTree;
use crate::{Error, Result};

/// A label- and parent-preserving bijection on the nodes of one tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TreeAutomorphism {
    map: Vec<u32>,
    fingerprint: u64,
}

impl TreeAutomorphism {
    pub fn identity(t: &FiniteTree) -> TreeAutomorphism {
        TreeAutomorphism {
            map: (0..t.node_count() as u32).collect(),
            fingerprint: t.fingerprint(),
        }
    }

    /// Validates that `map` preserves the parent function and labels.
    pub fn new(t: &FiniteTree, map: Vec<u32>) -> Result<TreeAutomorphism> {
        if map.len() != t.node_count() {
            return Err(Error::Validation("permutation length mismatch".into()));
        }
        let mut seen = vec![false; map.len()];
        for (v, &w) in map.iter().enumerate() {
            let w = w as usize;
            if w >= map.len() || seen[w] {
                return Err(Error::Validation("not a bijection on the nodes".into()));
            }
            seen[w] = true;
            if t.label(v as u32) != t.label(w as u32) {
                return Err(Error::Validation(format!("node {v} changes label")));
            }
            if map[t.parent(v as u32) as usize] != t.parent(w as u32) {
                return Err(Error::Validation(format!("node {v} breaks the parent function")));
            }
        }
        Ok(TreeAutomorphism { map, fingerprint: t.fingerprint() })
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.map[v as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.map
    }

    pub fn inverse(&self) -> TreeAutomorphism {
        let mut inv = vec![0u32; self.map.len()];
        for (v, &w) in self.map.iter().enumerate() {
            inv[w as usize] = v as u32;
        }
        TreeAutomorphism { map: inv, fingerprint: self.fingerprint }
    }
}

/// `g ∘ h`: apply `h` first. Errors when the automorphisms belong to
/// different trees.
pub fn compose(g: &TreeAutomorphism, h: &TreeAutomorphism) -> Result<TreeAutomorphism> {
    if g.fingerprint != h.fingerprint || g.map.len() != h.map.len() {
        return Err(Error::TreeMismatch);
    }
    let map = h.map.iter().map(|&v| g.map[v as usize]).collect();
    Ok(TreeAutomorphism { map, fingerprint: g.fingerprint })
}

/// Swaps of adjacent isomorphic sibling subtrees that avoid a prefix-closed
/// fixed set. The generated group is the pointwise stabilizer of `fixed`.
pub fn automorphism_generators(t: &FiniteTree, fixed: &BTreeSet<u32>) -> Vec<TreeAutomorphism> {
    debug_assert!(t.is_prefix_closed(fixed) || fixed.is_empty());
    let codes = subtree_code_ids(t);
    // blocked = subtree contains a fixed node; children carry larger
    // indices, so one reverse sweep propagates containment upwards
    let mut blocked = vec![false; t.node_count()];
    for &v in fixed {
        blocked[v as usize] = true;
    }
    for v in (1..t.node_count() as u32).rev() {
        if blocked[v as usize] {
            blocked[t.parent(v) as usize] = true;
        }
    }
    let mut gens = Vec::new();
    for v in 0..t.node_count() as u32 {
        // group children by isomorphism type, keep child order inside each
        // group, and swap adjacent unblocked members
        let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &k in t.children(v) {
            if !blocked[k as usize] {
                groups.entry(codes[k as usize]).or_default().push(k);
            }
        }
        for group in groups.values() {
            for pair in group.windows(2) {
                gens.push(sibling_swap(t, &codes, pair[0], pair[1]));
            }
        }
    }
    gens
}

/// The involution exchanging the subtrees at two isomorphic siblings,
/// matching descendants in canonical-code order.
fn sibling_swap(t: &FiniteTree, codes: &[u32], a: u32, b: u32) -> TreeAutomorphism {
    let mut map: Vec<u32> = (0..t.node_count() as u32).collect();
    let mut stack = vec![(a, b)];
    while let Some((x, y)) = stack.pop() {
        map[x as usize] = y;
        map[y as usize] = x;
        let sort_key = |kids: &[u32]| {
            let mut ks: Vec<u32> = kids.to_vec();
            ks.sort_by_key(|&k| (codes[k as usize], k));
            ks
        };
        let xs = sort_key(t.children(x));
        let ys = sort_key(t.children(y));
        debug_assert_eq!(xs.len(), ys.len());
        for (cx, cy) in xs.into_iter().zip(ys) {
            debug_assert_eq!(codes[cx as usize], codes[cy as usize]);
            stack.push((cx, cy));
        }
    }
    TreeAutomorphism { map, fingerprint: t.fingerprint() }
}

/// Orbit of `x` under the group generated by `gens`, by closure.
pub fn orbit_of(_t: &FiniteTree, gens: &[TreeAutomorphism], x: u32) -> BTreeSet<u32> {
    let inverses: Vec<TreeAutomorphism> = gens.iter().map(|g| g.inverse()).collect();
    let mut orbit = BTreeSet::from([x]);
    let mut queue = VecDeque::from([x]);
    while let Some(v) = queue.pop_front() {
        for g in gens.iter().chain(&inverses) {
            let w = g.apply(v);
            if orbit.insert(w) {
                queue.push_back(w);
            }
        }
    }
    orbit
}

/// Orbit size of every node under the pointwise stabilizer of `x` (taken
/// prefix-closed). On a finite tree every orbit is finite; callers compare
/// growth of these sizes across caps and depths.
pub fn acl_bruteforce(t: &FiniteTree, x: &BTreeSet<u32>) -> Vec<u64> {
    let fixed = t.prefix_closure(x);
    let gens = automorphism_generators(t, &fixed);
    let mut sizes = vec![0u64; t.node_count()];
    let mut assigned = vec![false; t.node_count()];
    for v in 0..t.node_count() as u32 {
        if assigned[v as usize] {
            continue;
        }
        let orbit = orbit_of(t, &gens, v);
        for &w in &orbit {
            sizes[w as usize] = orbit.len() as u64;
            assigned[w as usize] = true;
        }
    }
    sizes
}

/// Uniformly random automorphism: independent uniform matchings of
/// isomorphic sibling groups at every node, top-down. Deterministic in the
/// seed.
pub fn random_automorphism(t: &FiniteTree, seed: u64) -> TreeAutomorphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codes = subtree_code_ids(t);
    let mut map: Vec<u32> = vec![0; t.node_count()];
    let mut queue = VecDeque::from([(0u32, 0u32)]); // (source, image)
    while let Some((v, w)) = queue.pop_front() {
        map[v as usize] = w;
        let group_by_code = |node: u32| {
            let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
            for &k in t.children(node) {
                groups.entry(codes[k as usize]).or_default().push(k);
            }
            groups
        };
        let src = group_by_code(v);
        let mut dst = group_by_code(w);
        for (code, xs) in src {
            let ys = dst.get_mut(&code).expect("isomorphic nodes have matching child groups");
            ys.shuffle(&mut rng);
            for (x, y) in xs.into_iter().zip(ys.iter().copied()) {
                queue.push_back((x, y));
            }
        }
    }
    TreeAutomorphism { map, fingerprint: t.fingerprint() }
}

/// Parity of the permutation induced on each depth level, depths
/// `1..=height`. The map is a homomorphism into `(Z_2)^height`.
pub fn level_sign(t: &FiniteTree, g: &TreeAutomorphism) -> Vec<bool> {
    let height = t.height();
    let mut out = Vec::with_capacity(height as usize);
    for d in 1..=height {
        let nodes = t.nodes_at_depth(d);
        let index_of: BTreeMap<u32, usize> =
            nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut seen = vec![false; nodes.len()];
        let mut transpositions = 0u64;
        for start in 0..nodes.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                len += 1;
                cur = index_of[&g.apply(nodes[cur])];
            }
            transpositions += len - 1;
        }
        out.push(transpositions % 2 == 1);
    }
    out
}

/// One witness per depth level whose level signs hit that level's standard
/// basis vector, as products of the given elements; `None` when the signs
/// of the generated group do not span the full space. Witnesses certify
/// that the level-sign homomorphism is onto.
pub fn sign_basis_witnesses(
    t: &FiniteTree,
    gens: &[TreeAutomorphism],
) -> Option<Vec<TreeAutomorphism>> {
    let height = t.height() as usize;
    // Gaussian elimination over GF(2), keyed by pivot position, tracking
    // the group element realizing each row (signs land in an abelian
    // group, so mirroring every XOR by a composition is sound)
    let mut rows: BTreeMap<usize, (Vec<bool>, TreeAutomorphism)> = BTreeMap::new();
    for g in gens {
        let mut vec = level_sign(t, g);
        let mut elem = g.clone();
        loop {
            let Some(p) = vec.iter().position(|&b| b) else { break };
            match rows.get(&p) {
                Some((rvec, relem)) => {
                    for (v, r) in vec.iter_mut().zip(rvec.iter()) {
                        *v ^= *r;
                    }
                    elem = compose(&elem, relem).expect("same tree");
                }
                None => {
                    rows.insert(p, (vec, elem));
                    break;
                }
            }
        }
    }
    let mut witnesses = Vec::with_capacity(height);
    for d in 0..height {
        let mut target = vec![false; height];
        target[d] = true;
        let mut elem = TreeAutomorphism::identity(t);
        loop {
            let Some(p) = target.iter().position(|&b| b) else { break };
            let (rvec, relem) = rows.get(&p)?;
            for (v, r) in target.iter_mut().zip(rvec.iter()) {
                *v ^= *r;
            }
            elem = compose(&elem, relem).expect("same tree");
        }
        witnesses.push(elem);
    }
    Some(witnesses)
}

/// Enumerates the group generated by `gens`; errors past `cap` elements.
pub fn enumerate_group(
    t: &FiniteTree,
    gens: &[TreeAutomorphism],
    cap: usize,
) -> Result<Vec<TreeAutomorphism>> {
    let mut elements: BTreeSet<Vec<u32>> = BTreeSet::new();
    let identity = TreeAutomorphism::identity(t);
    elements.insert(identity.map.clone());
    let mut queue = VecDeque::from([identity]);
    let mut out = Vec::new();
    while let Some(g) = queue.pop_front() {
        out.push(g.clone());
        for h in gens {
            let gh = compose(h, &g)?;
            if elements.insert(gh.map.clone()) {
                if elements.len() > cap {
                    return Err(Error::ResourceLimit(format!(
                        "group enumeration exceeds {cap} elements"
                    )));
                }
                queue.push_back(gh);
            }
        }
    }
    Ok(out)
}

/// Order of the generated group, within `cap`.
pub fn group_order(t: &FiniteTree, gens: &[TreeAutomorphism], cap: usize) -> Result<u64> {
    Ok(enumerate_group(t, gens, cap)?.len() as u64)
}

/// A finite injective partial map on tree nodes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialIso {
    pairs: BTreeMap<u32, u32>,
}

impl PartialIso {
    pub fn new(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<PartialIso> {
        let pairs: BTreeMap<u32, u32> = pairs.into_iter().collect();
        let mut range = BTreeSet::new();
        for &v in pairs.values() {
            if !range.insert(v) {
                return Err(Error::Validation("partial map is not injective".into()));
            }
        }
        Ok(PartialIso { pairs })
    }

    pub fn domain(&self) -> BTreeSet<u32> {
        self.pairs.keys().copied().collect()
    }

    pub fn range(&self) -> BTreeSet<u32> {
        self.pairs.values().copied().collect()
    }

    pub fn get(&self, v: u32) -> Option<u32> {
        self.pairs.get(&v).copied()
    }

    pub fn insert(&mut self, v: u32, w: u32) {
        self.pairs.insert(v, w);
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.pairs.iter().map(|(&a, &b)| (a, b))
    }

    /// Checks that this is an isomorphism between prefix-closed,
    /// label-preserving substructures of `t`.
    pub fn validate_prefix_closed(&self, t: &FiniteTree) -> Result<()> {
        let dom = self.domain();
        let rng = self.range();
        if !t.is_prefix_closed(&dom) || !t.is_prefix_closed(&rng) {
            return Err(Error::Validation(
                "domain and range must be closed under the parent function".into(),
            ));
        }
        for (a, b) in self.pairs() {
            if t.label(a) != t.label(b) {
                return Err(Error::Validation(format!("pair ({a}, {b}) changes label")));
            }
            if a != 0 {
                let pa = t.parent(a);
                let pb = self
                    .get(pa)
                    .ok_or_else(|| Error::Validation(format!("parent of {a} is unmapped")))?;
                if pb != t.parent(b) {
                    return Err(Error::Validation(format!(
                        "pair ({a}, {b}) breaks the parent function"
                    )));
                }
            } else if b != 0 {
                return Err(Error::Validation("the root can only map to itself".into()));
            }
        }
        Ok(())
    }
}

/// One-point extension: a witness `x'` with the same label under
/// `f(parent(x))`, outside the range of `f`, such that `f ∪ {(x, x')}` is
/// again an isomorphism. The least node index is chosen.
pub fn extend_one_point(t: &FiniteTree, f: &PartialIso, x: u32) -> Result<u32> {
    f.validate_prefix_closed(t)?;
    if f.get(x).is_some() {
        return Err(Error::Validation(format!("node {x} is already mapped")));
    }
    let parent = t.parent(x);
    let image_parent = f
        .get(parent)
        .ok_or_else(|| Error::Validation(format!("parent of node {x} is not mapped")))?;
    let range = f.range();
    let codes = subtree_code_ids(t);
    let witness = t
        .children(image_parent)
        .iter()
        .copied()
        .find(|&y| codes[y as usize] == codes[x as usize] && !range.contains(&y));
    witness.ok_or_else(|| {
        Error::NoWitness(format!(
            "every sibling of the same type under node {image_parent} is already in the range"
        ))
    })
}
