//! Shared helpers for the integration suites: corpus access and seeded
//! random generators for schemes, graphs, and partial systems.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use treesym::extnat::{ExtNat, Fin, Omega};
use treesym::nonrooted::{EdgeIndexedGraph, GraphEdge};
use treesym::scheme::Entry;
use treesym::wap::PartialSystem;
use treesym::{Address, Scheme};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_path(name: &str) -> PathBuf {
    corpus_dir().join(name)
}

pub fn load_scheme(name: &str) -> Scheme {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    Scheme::parse(&text).expect("valid corpus scheme")
}

pub fn load_graph(name: &str) -> EdgeIndexedGraph {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    EdgeIndexedGraph::parse(&text).expect("valid corpus graph")
}

pub const SCHEME_CORPUS: [&str; 6] = [
    "star.tg",
    "binary.tg",
    "omega_regular.tg",
    "omega_of_binary.tg",
    "rigid_chain.tg",
    "chain_with_pairs.tg",
];

pub const GRAPH_CORPUS: [&str; 3] = ["t3_loop.eig", "omega_loop.eig", "biregular_2_3.eig"];

/// The nine acceptance schemes: the six rooted presentations plus one
/// rooting of each non-rooted corpus graph.
pub fn nine_scheme_corpus() -> Vec<(String, Scheme)> {
    let mut out: Vec<(String, Scheme)> =
        SCHEME_CORPUS.iter().map(|n| (n.to_string(), load_scheme(n))).collect();
    for name in GRAPH_CORPUS {
        let graph = load_graph(name);
        out.push((format!("{name}@rooted"), graph.root_at(0).expect("rootable")));
    }
    out
}

fn random_mult(rng: &mut ChaCha8Rng) -> ExtNat {
    match rng.gen_range(0..4) {
        0 => Fin(1),
        1 => Fin(2),
        2 => Fin(3),
        _ => Omega,
    }
}

/// A random valid scheme with at most five classes.
pub fn random_scheme(rng: &mut ChaCha8Rng) -> Scheme {
    loop {
        let n = rng.gen_range(1..=5);
        let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let entries: Vec<Vec<Entry>> = (0..n)
            .map(|_| {
                (0..rng.gen_range(0..=3))
                    .map(|_| Entry { child: rng.gen_range(0..n), mult: random_mult(rng) })
                    .collect()
            })
            .collect();
        if let Ok(s) = Scheme::new(names, entries, 0) {
            return s;
        }
    }
}

/// A random connected edge-indexed graph with at most three vertices.
pub fn random_graph(rng: &mut ChaCha8Rng) -> EdgeIndexedGraph {
    loop {
        let n = rng.gen_range(1..=3);
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<GraphEdge> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                let index_a = random_mult(rng);
                let index_b = if a == b { index_a } else { random_mult(rng) };
                GraphEdge { a, b, index_a, index_b }
            })
            .collect();
        if let Ok(g) = EdgeIndexedGraph::new(names, edges) {
            return g;
        }
    }
}

/// A random valid partial system over `s`: a small carrier grown from the
/// root plus `n` partial isomorphisms assembled from valid pairs.
pub fn random_system(
    s: &Scheme,
    rng: &mut ChaCha8Rng,
    n: usize,
    extra_nodes: usize,
) -> PartialSystem {
    let mut carrier: BTreeSet<Address> = BTreeSet::from([Address::root()]);
    for _ in 0..extra_nodes {
        let mut candidates: Vec<Address> = Vec::new();
        for u in &carrier {
            let class = s.resolve(u).expect("resolvable").class;
            for (ei, e) in s.entries(class).iter().enumerate() {
                let copies = match e.mult {
                    Fin(m) => m.min(4),
                    Omega => 4,
                };
                for q in 0..copies {
                    let child = u.child(ei as u32, q);
                    if !carrier.contains(&child) {
                        candidates.push(child);
                    }
                }
            }
        }
        if let Some(c) = candidates.choose(rng) {
            carrier.insert(c.clone());
        }
    }

    let class_of = |a: &Address| s.resolve(a).expect("resolvable").class;
    let mut partials = Vec::with_capacity(n);
    for _ in 0..n {
        let mut p: BTreeMap<Address, Address> =
            BTreeMap::from([(Address::root(), Address::root())]);
        for _ in 0..3 {
            let mut pairs: Vec<(Address, Address)> = Vec::new();
            let range: BTreeSet<&Address> = p.values().collect();
            for x in &carrier {
                if p.contains_key(x) {
                    continue;
                }
                let Some(px) = x.parent() else { continue };
                let Some(fpx) = p.get(&px) else { continue };
                for y in &carrier {
                    if range.contains(y) || y.parent().as_ref() != Some(fpx) {
                        continue;
                    }
                    if class_of(x) == class_of(y) {
                        pairs.push((x.clone(), y.clone()));
                    }
                }
            }
            if let Some((x, y)) = pairs.choose(rng) {
                p.insert(x.clone(), y.clone());
            }
        }
        partials.push(p);
    }
    PartialSystem::new(s, carrier, partials).expect("constructed system is valid")
}
