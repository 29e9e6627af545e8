//! The brute-force oracle on finite trees: stabilizer generators, orbit
//! counts, random automorphisms, level signs, and group orders.
//!
//! ```bash
//! cargo run -p treesym --example finite_oracle
//! ```

use std::collections::BTreeSet;

use treesym::oracle::{
    acl_bruteforce, automorphism_generators, group_order, level_sign, orbit_of,
    random_automorphism,
};
use treesym::scheme::DEFAULT_NODE_BUDGET;
use treesym::{FiniteTree, Scheme};

fn main() {
    // trees parse from balanced parentheses
    let small = FiniteTree::parse("(()())").unwrap();
    let gens = automorphism_generators(&small, &BTreeSet::from([0]));
    println!("(()()) has {} stabilizer generator(s) fixing the root", gens.len());
    println!("orbit of leaf 1: {:?}", orbit_of(&small, &gens, 1));

    // truncations of schemes carry class labels that the oracle respects
    let binary = Scheme::parse("root=v; class v { child v * 2; }").unwrap();
    for depth in 1..=3 {
        let tree = binary.unfold(depth, 2, DEFAULT_NODE_BUDGET).unwrap().tree;
        let gens = automorphism_generators(&tree, &BTreeSet::new());
        let order = group_order(&tree, &gens, 1 << 16).unwrap();
        println!("binary depth {depth}: |Aut| = {order} (expected 2^(2^{depth} - 1))");
    }

    // orbit sizes under the stabilizer of a fixed set, for every node
    let tree = binary.unfold(2, 2, DEFAULT_NODE_BUDGET).unwrap().tree;
    println!("orbit sizes fixing nothing: {:?}", acl_bruteforce(&tree, &BTreeSet::new()));
    println!("orbit sizes fixing node 1:  {:?}", acl_bruteforce(&tree, &BTreeSet::from([1])));

    // level signs: parity of the induced permutation per depth
    let tree = binary.unfold(3, 2, DEFAULT_NODE_BUDGET).unwrap().tree;
    for seed in 0..4 {
        let g = random_automorphism(&tree, seed);
        let sign: Vec<u8> = level_sign(&tree, &g).into_iter().map(u8::from).collect();
        println!("random automorphism (seed {seed}): level signs {sign:?}");
    }
}
