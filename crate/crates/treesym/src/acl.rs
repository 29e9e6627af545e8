//! Algebraic closures: orbit cardinalities under pointwise stabilizers,
//! closure enumeration, and the finiteness criteria feeding the verdicts.
//!
//! The orbit of an element `t` under the pointwise stabilizer of a finite
//! set `X` factors along the path from the root to `t`: a step inside the
//! downward closure of `X` is pinned (factor 1); any other step can move to
//! any same-type sibling outside the closure, contributing `m - k` choices,
//! where `m` is the total multiplicity of entries of the parent class with
//! a canonically equal child class, and `k` counts the same-type siblings
//! inside the closure. All counting is exact over the extended naturals.
//!
//! The per-step factor structure makes the element-level questions
//! decidable on the class graph: `t` lies in the algebraic closure of `X`
//! exactly when every step outside the closure has a finite available
//! count, so closure finiteness reduces to cycle search in the subgraph of
//! finite-multiplicity edges.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::classgraph::{shortest_address_of_canonical_class, ClassGraph};
use crate::extnat::{ExtNat, Fin, Omega};
use crate::scheme::{Address, Scheme};
use crate::{Error, Result};

/// Default budget for closure enumeration.
pub const DEFAULT_ENUM_BUDGET: usize = 10_000;

/// A finite set of tree elements with its downward closure cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressSet {
    members: BTreeSet<Address>,
    closure: BTreeSet<Address>,
}

impl AddressSet {
    /// Validates every address against `s` and caches the closure.
    pub fn new(s: &Scheme, addrs: impl IntoIterator<Item = Address>) -> Result<AddressSet> {
        let members: BTreeSet<Address> = addrs.into_iter().collect();
        for a in &members {
            s.resolve(a)?;
        }
        let mut closure = BTreeSet::new();
        closure.insert(Address::root());
        for a in &members {
            for p in a.prefixes() {
                closure.insert(p);
            }
        }
        Ok(AddressSet { members, closure })
    }

    pub fn empty() -> AddressSet {
        let mut closure = BTreeSet::new();
        closure.insert(Address::root());
        AddressSet { members: BTreeSet::new(), closure }
    }

    pub fn members(&self) -> &BTreeSet<Address> {
        &self.members
    }

    /// The smallest prefix-closed superset of the members plus the root.
    pub fn closure(&self) -> &BTreeSet<Address> {
        &self.closure
    }

    pub fn in_closure(&self, a: &Address) -> bool {
        self.closure.contains(a)
    }
}

/// Smallest prefix-closed superset of `x ∪ {root}`, as an address set.
pub fn downward_closure(s: &Scheme, x: &AddressSet) -> Result<AddressSet> {
    AddressSet::new(s, x.closure().iter().cloned())
}

/// Total multiplicity of entries of `class` whose child class is
/// canonically `target`, together with the per-entry membership test.
fn group_multiplicity(s: &Scheme, graph: &ClassGraph, class: usize, target: usize) -> ExtNat {
    let mut total = ExtNat::ZERO;
    for e in s.entries(class) {
        if graph.canon.class_of[e.child] == target {
            total = total.checked_add(e.mult).expect("multiplicity sum overflow");
        }
    }
    total
}

/// Cardinality of the orbit of `t` under the pointwise stabilizer of `x`.
pub fn orbit_cardinality(s: &Scheme, x: &AddressSet, t: &Address) -> Result<ExtNat> {
    s.resolve(t)?;
    let graph = ClassGraph::build(s);
    let mut product = ExtNat::ONE;
    let mut parent_class = s.root();
    for j in 1..=t.depth() {
        let prefix = Address { steps: t.steps[..j].to_vec() };
        let step = t.steps[j - 1];
        let entry = s.entries(parent_class)[step.entry as usize];
        if x.in_closure(&prefix) {
            parent_class = entry.child;
            continue;
        }
        let target = graph.canon.class_of[entry.child];
        let m = group_multiplicity(s, &graph, parent_class, target);
        // same-type siblings pinned by the closure
        let parent_addr = prefix.parent().expect("non-root prefix has a parent");
        let k = x
            .closure()
            .iter()
            .filter(|a| {
                a.depth() == j
                    && parent_addr.is_prefix_of(a)
                    && graph.canon.class_of
                        [s.entries(parent_class)[a.steps[j - 1].entry as usize].child]
                        == target
            })
            .count() as u64;
        let factor = m.minus_finite(k).ok_or_else(|| {
            Error::Internal(format!(
                "closure pins more copies than the multiplicity admits at `{prefix}`"
            ))
        })?;
        product = product
            .checked_mul(factor)
            .ok_or_else(|| Error::ResourceLimit("orbit cardinality overflows u64".into()))?;
        parent_class = entry.child;
    }
    Ok(product)
}

/// `t` lies in the algebraic closure of `x` exactly when its orbit under
/// the pointwise stabilizer of `x` is finite.
pub fn acl_membership(s: &Scheme, x: &AddressSet, t: &Address) -> Result<bool> {
    Ok(orbit_cardinality(s, x, t)?.is_finite())
}

/// Outcome of closure enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AclEnumeration {
    /// The full closure, as a prefix-closed address set.
    Finite(BTreeSet<Address>),
    /// The closure is infinite; `cycle` is the least cycle of canonical
    /// classes (by class order) reachable from `exit`, a closure element's
    /// child witnessing unbounded growth.
    Infinite { cycle: Vec<String>, exit: Address },
}

/// Enumerates the algebraic closure of `x`, or reports a witness of its
/// infinitude. A finite-but-large closure exceeding `budget` is an error,
/// reported distinctly from the infinite case.
pub fn acl_enumerate(s: &Scheme, x: &AddressSet, budget: usize) -> Result<AclEnumeration> {
    let graph = ClassGraph::build(s);
    let closure = x.closure();

    // classification of closure children per node
    struct Exit {
        child: Address,
        canon_class: usize,
    }
    let mut exits: Vec<Exit> = Vec::new();
    for u in closure {
        let class = s.resolve(u)?.class;
        for (ei, e) in s.entries(class).iter().enumerate() {
            let target = graph.canon.class_of[e.child];
            if !group_multiplicity(s, &graph, class, target).is_finite() {
                continue;
            }
            let copies = match e.mult {
                Fin(m) => m,
                Omega => unreachable!("finite group contains no omega entries"),
            };
            for q in 0..copies {
                let child = u.child(ei as u32, q);
                if !closure.contains(&child) {
                    exits.push(Exit { child, canon_class: target });
                }
            }
        }
    }

    // a reachable finite-multiplicity cycle from any exit makes the
    // closure infinite
    let everywhere = vec![true; graph.class_count()];
    let all_cycles = graph.finite_cycles(&everywhere);
    let mut witness: Option<(Vec<usize>, &Exit)> = None;
    for cycle in &all_cycles {
        for exit in &exits {
            let reach = graph.reachable(exit.canon_class, true);
            if reach[cycle[0]] {
                witness = Some((cycle.clone(), exit));
                break;
            }
        }
        if witness.is_some() {
            break;
        }
    }
    if let Some((cycle, exit)) = witness {
        return Ok(AclEnumeration::Infinite {
            cycle: cycle.iter().map(|&c| graph.name(c).to_string()).collect(),
            exit: exit.child.clone(),
        });
    }

    // acyclic everywhere reachable from the exits: enumerate
    let mut result: BTreeSet<Address> = closure.clone();
    let mut stack: Vec<(Address, usize)> =
        exits.iter().map(|e| (e.child.clone(), e.canon_class)).collect();
    for (addr, _) in &stack {
        result.insert(addr.clone());
    }
    if result.len() > budget {
        return Err(Error::ResourceLimit(format!(
            "closure enumeration exceeds the budget of {budget}"
        )));
    }
    while let Some((addr, canon_class)) = stack.pop() {
        let class_rep = s.resolve(&addr)?.class;
        debug_assert_eq!(graph.canon.class_of[class_rep], canon_class);
        for (ei, e) in s.entries(class_rep).iter().enumerate() {
            let target = graph.canon.class_of[e.child];
            if !group_multiplicity(s, &graph, class_rep, target).is_finite() {
                continue;
            }
            let copies = match e.mult {
                Fin(m) => m,
                Omega => unreachable!("finite group contains no omega entries"),
            };
            for q in 0..copies {
                let child = addr.child(ei as u32, q);
                if result.insert(child.clone()) {
                    if result.len() > budget {
                        return Err(Error::ResourceLimit(format!(
                            "closure enumeration exceeds the budget of {budget}"
                        )));
                    }
                    stack.push((child, target));
                }
            }
        }
    }
    Ok(AclEnumeration::Finite(result))
}

/// One occurrence of a class in the finite part of the quotient tree.
#[derive(Debug, Clone, Serialize)]
pub struct FinitePartMember {
    /// Class path from the root.
    pub path: Vec<String>,
    /// Local degree at this occurrence; `None` for the root.
    pub incoming: Option<ExtNat>,
}

/// The part of the class quotient reachable through finite-multiplicity
/// steps only. Its finiteness decides uncountable strong cofinality.
#[derive(Debug, Clone, Serialize)]
pub struct FinitePartReport {
    pub finite: bool,
    /// Canonical classes reachable through finite-multiplicity entries.
    pub classes: Vec<String>,
    /// Least class cycle witnessing infinitude, when infinite.
    pub witness_cycle: Option<Vec<String>>,
    /// Explicit member list, when finite.
    pub members: Option<Vec<FinitePartMember>>,
}

/// Computes the finite part of the quotient tree; it is finite exactly when
/// the finite-multiplicity subgraph reachable from the root is acyclic,
/// which agrees with the finiteness of the algebraic closure of the empty
/// set.
pub fn finite_part(s: &Scheme) -> FinitePartReport {
    let graph = ClassGraph::build(s);
    let within = graph.reachable(graph.root, true);
    let classes: Vec<String> = (0..graph.class_count())
        .filter(|&c| within[c])
        .map(|c| graph.name(c).to_string())
        .collect();
    let cycles = graph.finite_cycles(&within);
    if let Some(cycle) = cycles.first() {
        return FinitePartReport {
            finite: false,
            classes,
            witness_cycle: Some(cycle.iter().map(|&c| graph.name(c).to_string()).collect()),
            members: None,
        };
    }
    // acyclic: enumerate occurrences as class paths
    let mut members = vec![FinitePartMember { path: vec![graph.name(graph.root).to_string()], incoming: None }];
    let mut frontier: Vec<(usize, Vec<String>)> =
        vec![(graph.root, vec![graph.name(graph.root).to_string()])];
    while let Some((c, path)) = frontier.pop() {
        for &(child, mult) in &graph.edges[c] {
            if !mult.is_finite() {
                continue;
            }
            let mut p = path.clone();
            p.push(graph.name(child).to_string());
            members.push(FinitePartMember { path: p.clone(), incoming: Some(mult) });
            frontier.push((child, p));
        }
    }
    members.sort_by(|a, b| a.path.cmp(&b.path));
    FinitePartReport { finite: true, classes, witness_cycle: None, members: Some(members) }
}

/// Universal closure-finiteness: whether the algebraic closure of every
/// finite set is finite.
#[derive(Debug, Clone, Serialize)]
pub struct UniversalAclReport {
    pub finite: bool,
    /// When infinite: a single-element fixed set whose closure is infinite.
    pub witness_fix: Option<Address>,
    /// When infinite: the least offending class cycle.
    pub witness_cycle: Option<Vec<String>>,
}

/// The closure of every finite set is finite exactly when no cycle of
/// finite-multiplicity entries exists among the classes reachable from the
/// root through arbitrary entries.
pub fn universal_acl_finite(s: &Scheme) -> UniversalAclReport {
    let graph = ClassGraph::build(s);
    let within = graph.reachable(graph.root, false);
    let cycles = graph.finite_cycles(&within);
    match cycles.first() {
        None => UniversalAclReport { finite: true, witness_fix: None, witness_cycle: None },
        Some(cycle) => {
            let addr = shortest_address_of_canonical_class(s, &graph, cycle[0])
                .expect("cycle classes are reachable");
            UniversalAclReport {
                finite: false,
                witness_fix: Some(addr),
                witness_cycle: Some(cycle.iter().map(|&c| graph.name(c).to_string()).collect()),
            }
        }
    }
}
