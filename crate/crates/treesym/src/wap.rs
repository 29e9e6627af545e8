//! Finite substructures with partial automorphisms, their embeddings, and
//! bounded amalgamation.
//!
//! A [`PartialSystem`] is a finite subtree of the presented tree (a
//! prefix-closed set of addresses) together with an ordered list of partial
//! isomorphisms on it. Amalgamation glues two extensions of a common base
//! along the base, renaming the right-hand carrier into fresh sibling
//! slots. Gluing succeeds whenever the base is closed under the algebraic
//! closure; a base that is not closed runs out of sibling slots or makes
//! the partials disagree, and the failure is reported rather than masked.
//!
//! [`check_wap_instance`] samples extension pairs of the closure of a seed
//! system and checks that they amalgamate with commuting embeddings. The
//! check is bounded and sampled; it validates the amalgamation mechanism on
//! desk-scale instances, never claims the full quantifier.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::acl::{acl_enumerate, AclEnumeration, AddressSet};
use crate::classgraph::ClassGraph;
use crate::extnat::Fin;
use crate::scheme::{Address, Scheme};
use crate::tree::FiniteTree;
use crate::{Error, Result};

/// A finite subtree of the presented tree with `n` partial isomorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialSystem {
    pub carrier: BTreeSet<Address>,
    pub partials: Vec<BTreeMap<Address, Address>>,
}

impl PartialSystem {
    /// Validates the carrier (resolvable, prefix-closed, contains the
    /// root) and every partial (prefix-closed domain and range inside the
    /// carrier, injective, parent- and type-preserving).
    pub fn new(
        s: &Scheme,
        carrier: impl IntoIterator<Item = Address>,
        partials: Vec<BTreeMap<Address, Address>>,
    ) -> Result<PartialSystem> {
        let carrier: BTreeSet<Address> = carrier.into_iter().collect();
        let sys = PartialSystem { carrier, partials };
        sys.validate(s)?;
        Ok(sys)
    }

    pub fn n(&self) -> usize {
        self.partials.len()
    }

    pub fn validate(&self, s: &Scheme) -> Result<()> {
        if !self.carrier.contains(&Address::root()) {
            return Err(Error::Validation("the carrier must contain the root".into()));
        }
        let graph = ClassGraph::build(s);
        let canon_of = |a: &Address| -> Result<usize> {
            Ok(graph.canon.class_of[s.resolve(a)?.class])
        };
        for a in &self.carrier {
            s.resolve(a)?;
            if let Some(p) = a.parent() {
                if !self.carrier.contains(&p) {
                    return Err(Error::Validation(format!(
                        "carrier is not prefix-closed: `{a}` without its parent"
                    )));
                }
            }
        }
        for (k, partial) in self.partials.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for (x, y) in partial {
                if !self.carrier.contains(x) || !self.carrier.contains(y) {
                    return Err(Error::Validation(format!(
                        "partial {k} leaves the carrier at `{x}` -> `{y}`"
                    )));
                }
                if !seen.insert(y) {
                    return Err(Error::Validation(format!("partial {k} is not injective")));
                }
                if canon_of(x)? != canon_of(y)? {
                    return Err(Error::Validation(format!(
                        "partial {k} changes the node type at `{x}`"
                    )));
                }
                match x.parent() {
                    None => {
                        if !y.is_root() {
                            return Err(Error::Validation(format!(
                                "partial {k} moves the root"
                            )));
                        }
                    }
                    Some(px) => {
                        let fpx = partial.get(&px).ok_or_else(|| {
                            Error::Validation(format!(
                                "partial {k}: domain is not prefix-closed at `{x}`"
                            ))
                        })?;
                        if y.parent().as_ref() != Some(fpx) {
                            return Err(Error::Validation(format!(
                                "partial {k} breaks the parent function at `{x}`"
                            )));
                        }
                    }
                }
            }
            // range prefix-closedness follows from parent preservation plus
            // domain prefix-closedness
            for y in partial.values() {
                if let Some(py) = y.parent() {
                    if !partial.values().any(|v| *v == py) {
                        return Err(Error::Validation(format!(
                            "partial {k}: range is not prefix-closed at `{y}`"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The identity embedding map on the carrier.
    pub fn identity_map(&self) -> BTreeMap<Address, Address> {
        self.carrier.iter().map(|a| (a.clone(), a.clone())).collect()
    }

    /// The carrier as an explicit finite tree with canonical-class labels,
    /// plus the address of each node.
    pub fn to_tree(&self, s: &Scheme) -> Result<(FiniteTree, Vec<Address>)> {
        let graph = ClassGraph::build(s);
        let mut ordered: Vec<Address> = self.carrier.iter().cloned().collect();
        ordered.sort_by_key(|a| (a.depth(), a.clone()));
        let index: BTreeMap<&Address, u32> =
            ordered.iter().enumerate().map(|(i, a)| (a, i as u32)).collect();
        let mut parents = Vec::with_capacity(ordered.len());
        let mut labels = Vec::with_capacity(ordered.len());
        for a in &ordered {
            parents.push(a.parent().map_or(0, |p| index[&p]));
            labels.push(graph.canon.class_of[s.resolve(a)?.class] as u32);
        }
        Ok((FiniteTree::from_parents(parents, Some(labels))?, ordered))
    }
}

/// Checks that `map` embeds `from` into `to`: injective on the carrier,
/// parent- and type-preserving, and compatible with every partial.
pub fn is_embedding(
    s: &Scheme,
    from: &PartialSystem,
    to: &PartialSystem,
    map: &BTreeMap<Address, Address>,
) -> bool {
    if from.n() != to.n() {
        return false;
    }
    let graph = ClassGraph::build(s);
    let canon_of = |a: &Address| graph.canon.class_of[s.resolve(a).map(|r| r.class).unwrap_or(0)];
    if map.len() != from.carrier.len() {
        return false;
    }
    let mut image = BTreeSet::new();
    for (x, y) in map {
        if !from.carrier.contains(x) || !to.carrier.contains(y) || !image.insert(y) {
            return false;
        }
        if canon_of(x) != canon_of(y) {
            return false;
        }
        match x.parent() {
            None => {
                if !y.is_root() {
                    return false;
                }
            }
            Some(px) => {
                if map.get(&px) != y.parent().as_ref() {
                    return false;
                }
            }
        }
    }
    // map ∘ φ_k ⊆ ψ_k ∘ map
    for (phi, psi) in from.partials.iter().zip(&to.partials) {
        for (a, b) in phi {
            match (map.get(a), map.get(b)) {
                (Some(ma), Some(mb)) => {
                    if psi.get(ma) != Some(mb) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
    }
    true
}

/// Result of amalgamation: the glued system with the two embeddings.
#[derive(Debug, Clone)]
pub struct Amalgam {
    pub system: PartialSystem,
    pub into_left: BTreeMap<Address, Address>,
    pub into_right: BTreeMap<Address, Address>,
}

/// Glues `left` and `right` over `base`: renames the right carrier so the
/// carriers intersect exactly in the image of `base`, then unions the
/// partials. Fails with [`Error::Incompatible`] when availability runs out
/// or the partials disagree on the shared part, which signals a base that
/// is not closed under the algebraic closure.
pub fn amalgamate(
    s: &Scheme,
    base: &PartialSystem,
    left: &PartialSystem,
    right: &PartialSystem,
    into_left: &BTreeMap<Address, Address>,
    into_right: &BTreeMap<Address, Address>,
) -> Result<Amalgam> {
    base.validate(s)?;
    left.validate(s)?;
    right.validate(s)?;
    if base.n() != left.n() || base.n() != right.n() {
        return Err(Error::Validation("systems carry different numbers of partials".into()));
    }
    if !is_embedding(s, base, left, into_left) {
        return Err(Error::Validation("the left map is not an embedding of the base".into()));
    }
    if !is_embedding(s, base, right, into_right) {
        return Err(Error::Validation("the right map is not an embedding of the base".into()));
    }

    let graph = ClassGraph::build(s);


    // rename right-hand nodes outside the shared image into fresh slots
    let mut rho: BTreeMap<Address, Address> =
        into_right.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
    let mut carrier: BTreeSet<Address> = left.carrier.clone();
    let mut todo: Vec<Address> =
        right.carrier.iter().filter(|a| !rho.contains_key(*a)).cloned().collect();
    todo.sort_by_key(|a| (a.depth(), a.clone()));
    for node in todo {
        let parent = node.parent().expect("non-root: the root is shared");
        let host = rho
            .get(&parent)
            .cloned()
            .ok_or_else(|| Error::Internal("parent renamed after child".into()))?;
        let host_class = s.resolve(&host)?.class;
        let target = graph.canon.class_of[s.resolve(&node)?.class];
        let used: BTreeSet<(u32, u64)> = carrier
            .iter()
            .filter(|a| a.depth() == host.depth() + 1 && host.is_prefix_of(a))
            .map(|a| {
                let st = a.steps[a.steps.len() - 1];
                (st.entry, st.copy)
            })
            .collect();
        let mut slot = None;
        'search: for (ei, e) in s.entries(host_class).iter().enumerate() {
            if graph.canon.class_of[e.child] != target {
                continue;
            }
            let upper = match e.mult {
                Fin(m) => m,
                _ => used.len() as u64 + 1,
            };
            for q in 0..upper {
                if !used.contains(&(ei as u32, q)) {
                    slot = Some((ei as u32, q));
                    break 'search;
                }
            }
        }
        let (entry, copy) = slot.ok_or_else(|| {
            Error::Incompatible(format!(
                "no sibling slot left for a `{}`-type child below `{host}`; \
                 the base is not closed under the algebraic closure",
                graph.name(target)
            ))
        })?;
        let fresh = host.child(entry, copy);
        carrier.insert(fresh.clone());
        rho.insert(node, fresh);
    }

    // union the partials; they must agree wherever both sides speak
    let mut partials = Vec::with_capacity(base.n());
    for (k, (chi, xi)) in left.partials.iter().zip(&right.partials).enumerate() {
        let mut union: BTreeMap<Address, Address> = chi.clone();
        let mut inverse: BTreeMap<Address, Address> =
            chi.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        for (x, y) in xi {
            let rx = rho[x].clone();
            let ry = rho[y].clone();
            if let Some(existing) = union.get(&rx) {
                if *existing != ry {
                    return Err(Error::Incompatible(format!(
                        "partial {k} disagrees on the shared part at `{rx}`: \
                         `{existing}` vs `{ry}`"
                    )));
                }
                continue;
            }
            if let Some(other) = inverse.get(&ry) {
                if *other != rx {
                    return Err(Error::Incompatible(format!(
                        "partial {k} loses injectivity at `{ry}`"
                    )));
                }
            }
            union.insert(rx.clone(), ry.clone());
            inverse.insert(ry, rx);
        }
        partials.push(union);
    }

    let system = PartialSystem { carrier, partials };
    system.validate(s).map_err(|e| Error::Incompatible(e.to_string()))?;

    let into_left_e = left.identity_map();
    let into_right_e: BTreeMap<Address, Address> = rho;
    debug_assert!(is_embedding(s, left, &system, &into_left_e));
    debug_assert!(is_embedding(s, right, &system, &into_right_e));
    Ok(Amalgam { system, into_left: into_left_e, into_right: into_right_e })
}

/// Outcome of a bounded weak-amalgamation check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum WapOutcome {
    /// Every sampled extension pair amalgamated with commuting embeddings.
    Pass { samples: usize },
    /// A sampled pair failed to amalgamate; the pair is carried verbatim.
    Fail { sample: usize, reason: String, left: PartialSystem, right: PartialSystem },
    /// The closure step exceeded the size bound before sampling could
    /// produce a meaningful base.
    BoundExceeded { reason: String },
}

/// Extends the seed system to the closure of its carrier, then samples
/// pairs of random extensions and verifies that they amalgamate over the
/// closure with embeddings commuting on the seed.
///
/// When the closure is infinite or over budget the check degrades to the
/// bare downward closure; the amalgamation obstruction then surfaces as a
/// `Fail` with the offending pair, which is the informative outcome.
pub fn check_wap_instance(
    s: &Scheme,
    seed_system: &PartialSystem,
    size_bound: usize,
    sample_count: usize,
    seed: u64,
) -> WapOutcome {
    if let Err(e) = seed_system.validate(s) {
        return WapOutcome::BoundExceeded { reason: format!("invalid seed system: {e}") };
    }
    let x = match AddressSet::new(s, seed_system.carrier.iter().cloned()) {
        Ok(x) => x,
        Err(e) => return WapOutcome::BoundExceeded { reason: e.to_string() },
    };
    let carrier = match acl_enumerate(s, &x, size_bound) {
        Ok(AclEnumeration::Finite(set)) => set,
        Ok(AclEnumeration::Infinite { .. }) | Err(Error::ResourceLimit(_)) => {
            // closure unavailable within bounds: glue over the bare
            // downward closure and let the obstruction surface
            x.closure().clone()
        }
        Err(e) => return WapOutcome::BoundExceeded { reason: e.to_string() },
    };
    let base = PartialSystem { carrier, partials: seed_system.partials.clone() };
    if base.validate(s).is_err() {
        return WapOutcome::BoundExceeded { reason: "closure breaks the seed partials".into() };
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for sample in 0..sample_count {
        let left = random_extension(s, &base, &mut rng, size_bound);
        let right = random_extension(s, &base, &mut rng, size_bound);
        let am = match amalgamate(s, &base, &left, &right, &base.identity_map(), &base.identity_map())
        {
            Ok(am) => am,
            Err(e) => {
                return WapOutcome::Fail { sample, reason: e.to_string(), left, right };
            }
        };
        // embeddings must commute on the seed system
        for a in &seed_system.carrier {
            if am.into_left.get(a) != am.into_right.get(a) {
                return WapOutcome::Fail {
                    sample,
                    reason: format!("embeddings disagree on the seed at `{a}`"),
                    left,
                    right,
                };
            }
        }
    }
    WapOutcome::Pass { samples: sample_count }
}

/// A random extension of `base`: new nodes in fresh sibling slots up to
/// `node_bound`, and new partial pairs whose endpoints both avoid the base
/// carrier (the shared part of a future amalgam).
fn random_extension(
    s: &Scheme,
    base: &PartialSystem,
    rng: &mut ChaCha8Rng,
    node_bound: usize,
) -> PartialSystem {
    let graph = ClassGraph::build(s);
    let mut sys = base.clone();
    let target = if node_bound > base.carrier.len() {
        rng.gen_range(base.carrier.len()..=node_bound)
    } else {
        base.carrier.len()
    };
    while sys.carrier.len() < target {
        let mut candidates: Vec<Address> = Vec::new();
        for u in &sys.carrier {
            let class = s.resolve(u).expect("carrier resolvable").class;
            for (ei, e) in s.entries(class).iter().enumerate() {
                match e.mult {
                    Fin(m) => {
                        for q in 0..m {
                            let child = u.child(ei as u32, q);
                            if !sys.carrier.contains(&child) {
                                candidates.push(child);
                            }
                        }
                    }
                    _ => {
                        let mut q = 0u64;
                        loop {
                            let child = u.child(ei as u32, q);
                            if !sys.carrier.contains(&child) {
                                candidates.push(child);
                                break;
                            }
                            q += 1;
                        }
                    }
                }
            }
        }
        match candidates.choose(rng) {
            Some(child) => {
                sys.carrier.insert(child.clone());
            }
            None => break,
        }
    }

    // grow partials with pairs disjoint from the base carrier
    let n = sys.n();
    for _ in 0..(2 * n) {
        let k = if n == 0 { break } else { rng.gen_range(0..n) };
        let mut pairs: Vec<(Address, Address)> = Vec::new();
        for x in &sys.carrier {
            if base.carrier.contains(x) || sys.partials[k].contains_key(x) {
                continue;
            }
            let px = x.parent().expect("non-root: base contains the root");
            let Some(fpx) = sys.partials[k].get(&px) else { continue };
            let x_type = graph.canon.class_of[s.resolve(x).expect("resolvable").class];
            let range: BTreeSet<&Address> = sys.partials[k].values().collect();
            for y in &sys.carrier {
                if base.carrier.contains(y) || range.contains(y) {
                    continue;
                }
                if y.parent().as_ref() != Some(fpx) {
                    continue;
                }
                if graph.canon.class_of[s.resolve(y).expect("resolvable").class] == x_type {
                    pairs.push((x.clone(), y.clone()));
                }
            }
        }
        if let Some((x, y)) = pairs.choose(rng) {
            sys.partials[k].insert(x.clone(), y.clone());
        }
    }
    debug_assert!(sys.validate(s).is_ok());
    sys
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Scheme {
        Scheme::parse(text).unwrap()
    }

    fn addr(a: &str) -> Address {
        a.parse().unwrap()
    }

    fn addrs(list: &[&str]) -> BTreeSet<Address> {
        list.iter().map(|a| addr(a)).collect()
    }

    const STAR: &str = "root=r; class r { child v * omega; } class v { }";
    const OMEGA_OF_BINARY: &str =
        "root=r; class r { child v * omega; } class v { child v * 2; }";

    #[test]
    fn system_validation_catches_gaps() {
        let s = parse(STAR);
        // missing root
        assert!(PartialSystem::new(&s, addrs(&["e0.c0"]), vec![]).is_err());
        // not prefix-closed
        let s2 = parse(OMEGA_OF_BINARY);
        assert!(PartialSystem::new(&s2, addrs(&["", "e0.c0/e0.c1"]), vec![]).is_err());
        // valid
        assert!(PartialSystem::new(&s, addrs(&["", "e0.c0"]), vec![BTreeMap::new()]).is_ok());
    }

    #[test]
    fn partial_validation_checks_structure() {
        let s = parse(STAR);
        let carrier = addrs(&["", "e0.c0", "e0.c1"]);
        let good: BTreeMap<Address, Address> =
            [(addr(""), addr("")), (addr("e0.c0"), addr("e0.c1"))].into_iter().collect();
        assert!(PartialSystem::new(&s, carrier.clone(), vec![good]).is_ok());
        // breaks prefix-closedness of the domain
        let bad: BTreeMap<Address, Address> =
            [(addr("e0.c0"), addr("e0.c1"))].into_iter().collect();
        assert!(PartialSystem::new(&s, carrier, vec![bad]).is_err());
    }

    #[test]
    fn trivial_amalgam_is_the_base() {
        let s = parse(STAR);
        let base = PartialSystem::new(
            &s,
            addrs(&["", "e0.c0"]),
            vec![[(addr(""), addr(""))].into_iter().collect()],
        )
        .unwrap();
        let am = amalgamate(&s, &base, &base, &base, &base.identity_map(), &base.identity_map())
            .unwrap();
        assert_eq!(am.system, base);
    }

    #[test]
    fn disjoint_growth_amalgamates_side_by_side() {
        let s = parse(STAR);
        let base = PartialSystem::new(&s, addrs(&[""]), vec![BTreeMap::new()]).unwrap();
        // left adds leaf a with a partial fixing it; right adds leaf b
        let left = PartialSystem::new(
            &s,
            addrs(&["", "e0.c0"]),
            vec![[(addr(""), addr("")), (addr("e0.c0"), addr("e0.c0"))].into_iter().collect()],
        )
        .unwrap();
        let right = PartialSystem::new(
            &s,
            addrs(&["", "e0.c0"]),
            vec![[(addr(""), addr("")), (addr("e0.c0"), addr("e0.c0"))].into_iter().collect()],
        )
        .unwrap();
        let am = amalgamate(&s, &base, &left, &right, &base.identity_map(), &base.identity_map())
            .unwrap();
        // right's leaf was renamed to a fresh copy and both partials merged
        assert_eq!(am.system.carrier.len(), 3);
        assert_eq!(am.system.partials[0].len(), 3);
        assert_eq!(am.into_right[&addr("e0.c0")], addr("e0.c1"));
        assert!(is_embedding(&s, &left, &am.system, &am.into_left));
        assert!(is_embedding(&s, &right, &am.system, &am.into_right));
    }

    #[test]
    fn missing_closure_is_reported_incompatible() {
        // pinning a depth-1 node of the omega-of-binary tree leaves only
        // two slots below it; two extensions that both fill them cannot be
        // glued side by side
        let s = parse(OMEGA_OF_BINARY);
        let base = PartialSystem::new(&s, addrs(&["", "e0.c0"]), vec![BTreeMap::new()]).unwrap();
        let full = PartialSystem::new(
            &s,
            addrs(&["", "e0.c0", "e0.c0/e0.c0", "e0.c0/e0.c1"]),
            vec![BTreeMap::new()],
        )
        .unwrap();
        let err = amalgamate(
            &s,
            &base,
            &full,
            &full,
            &base.identity_map(),
            &base.identity_map(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Incompatible(_)), "got {err:?}");
    }

    #[test]
    fn incompatibility_found_by_search_over_small_systems() {
        // brute-force search over one-node extensions of a non-closed base
        let s = parse(OMEGA_OF_BINARY);
        let base = PartialSystem::new(&s, addrs(&["", "e0.c0"]), vec![BTreeMap::new()]).unwrap();
        let extensions: Vec<PartialSystem> = [
            addrs(&["", "e0.c0", "e0.c0/e0.c0"]),
            addrs(&["", "e0.c0", "e0.c0/e0.c1"]),
            addrs(&["", "e0.c0", "e0.c0/e0.c0", "e0.c0/e0.c1"]),
        ]
        .into_iter()
        .map(|c| PartialSystem::new(&s, c, vec![BTreeMap::new()]).unwrap())
        .collect();
        let mut found = false;
        for left in &extensions {
            for right in &extensions {
                let res = amalgamate(
                    &s,
                    &base,
                    left,
                    right,
                    &base.identity_map(),
                    &base.identity_map(),
                );
                if matches!(res, Err(Error::Incompatible(_))) {
                    found = true;
                }
            }
        }
        assert!(found, "no incompatible pair among small systems over a non-closed base");
    }

    #[test]
    fn partial_disagreement_is_incompatible() {
        let s = parse(STAR);
        let base = PartialSystem::new(&s, addrs(&["", "e0.c0", "e0.c1"]), vec![BTreeMap::new()])
            .unwrap();
        // left fixes leaf 0; right moves leaf 0 to leaf 1: both extend the
        // empty partial but disagree on the shared carrier
        let left = PartialSystem::new(
            &s,
            base.carrier.clone(),
            vec![[(addr(""), addr("")), (addr("e0.c0"), addr("e0.c0"))].into_iter().collect()],
        )
        .unwrap();
        let right = PartialSystem::new(
            &s,
            base.carrier.clone(),
            vec![[(addr(""), addr("")), (addr("e0.c0"), addr("e0.c1"))].into_iter().collect()],
        )
        .unwrap();
        let err = amalgamate(&s, &base, &left, &right, &base.identity_map(), &base.identity_map())
            .unwrap_err();
        assert!(matches!(err, Error::Incompatible(_)));
    }

    #[test]
    fn wap_check_passes_on_star() {
        let s = parse(STAR);
        let seed_system = PartialSystem::new(
            &s,
            addrs(&["", "e0.c0"]),
            vec![[(addr(""), addr("")), (addr("e0.c0"), addr("e0.c0"))].into_iter().collect()],
        )
        .unwrap();
        let outcome = check_wap_instance(&s, &seed_system, 8, 25, 0);
        assert_eq!(outcome, WapOutcome::Pass { samples: 25 });
    }

    #[test]
    fn wap_check_passes_on_the_omega_regular_tree_with_two_partials() {
        let s = parse("root=v; class v { child v * omega; }");
        let seed_system = PartialSystem::new(
            &s,
            addrs(&["", "e0.c0", "e0.c1"]),
            vec![
                [(addr(""), addr("")), (addr("e0.c0"), addr("e0.c1"))].into_iter().collect(),
                [(addr(""), addr(""))].into_iter().collect(),
            ],
        )
        .unwrap();
        let outcome = check_wap_instance(&s, &seed_system, 8, 50, 1);
        assert_eq!(outcome, WapOutcome::Pass { samples: 50 });
    }

    #[test]
    fn wap_check_surfaces_obstruction_on_unclosed_growth() {
        // a pinned depth-1 node of the omega-of-binary tree has an
        // infinite closure; the degraded check reports the obstruction
        let s = parse(OMEGA_OF_BINARY);
        let seed_system =
            PartialSystem::new(&s, addrs(&["", "e0.c0"]), vec![BTreeMap::new()]).unwrap();
        let mut failed = false;
        for seed in 0..5 {
            match check_wap_instance(&s, &seed_system, 8, 50, seed) {
                WapOutcome::Fail { .. } => failed = true,
                WapOutcome::Pass { .. } => {}
                WapOutcome::BoundExceeded { .. } => {}
            }
        }
        assert!(failed, "expected at least one sampled obstruction");
    }
}
