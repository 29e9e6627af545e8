//! Systems with partial automorphisms: one-point extension, amalgamation
//! over a closed base, and the sampled weak-amalgamation check.
//!
//! ```bash
//! cargo run -p treesym --example wap_check
//! ```

use std::collections::BTreeMap;

use treesym::oracle::{extend_one_point, PartialIso};
use treesym::scheme::DEFAULT_NODE_BUDGET;
use treesym::wap::{amalgamate, check_wap_instance, PartialSystem, WapOutcome};
use treesym::{Address, Scheme};

fn addr(text: &str) -> Address {
    text.parse().unwrap()
}

fn main() {
    let star = Scheme::parse("root=r; class r { child v * omega; } class v { }").unwrap();

    // one-point extension on a truncation: a partial isomorphism always
    // finds a fresh sibling of the right type
    let tree = star.unfold(1, 3, DEFAULT_NODE_BUDGET).unwrap().tree;
    let f = PartialIso::new([(0, 0), (1, 2)]).unwrap();
    println!("one-point extension of leaf 2 lands on node {}", extend_one_point(&tree, &f, 2).unwrap());

    // amalgamation renames the right-hand growth into fresh sibling slots
    let base = PartialSystem::new(&star, [addr("")], vec![BTreeMap::new()]).unwrap();
    let grown = PartialSystem::new(
        &star,
        [addr(""), addr("e0.c0")],
        vec![[(addr(""), addr("")), (addr("e0.c0"), addr("e0.c0"))].into_iter().collect()],
    )
    .unwrap();
    let am = amalgamate(&star, &base, &grown, &grown, &base.identity_map(), &base.identity_map())
        .unwrap();
    println!(
        "amalgam carrier: {:?}",
        am.system.carrier.iter().map(|a| a.to_string()).collect::<Vec<_>>()
    );

    // sampled weak amalgamation over the closure: passes on the star
    let seed_system = PartialSystem::new(
        &star,
        [addr(""), addr("e0.c0")],
        vec![[(addr(""), addr("")), (addr("e0.c0"), addr("e0.c0"))].into_iter().collect()],
    )
    .unwrap();
    match check_wap_instance(&star, &seed_system, 8, 50, 0) {
        WapOutcome::Pass { samples } => println!("star: {samples} sampled pairs amalgamated"),
        other => println!("star: unexpected outcome {other:?}"),
    }

    // a base missing its closure cannot absorb independent growth: the
    // obstruction is reported, not masked
    let separating =
        Scheme::parse("root=r; class r { child v * omega; } class v { child v * 2; }").unwrap();
    let pinned =
        PartialSystem::new(&separating, [addr(""), addr("e0.c0")], vec![BTreeMap::new()]).unwrap();
    match check_wap_instance(&separating, &pinned, 8, 50, 0) {
        WapOutcome::Fail { sample, reason, left, right } => {
            println!("omega-of-binary pinned at depth 1: sample {sample} fails: {reason}");
            println!("  left carrier:  {} nodes", left.carrier.len());
            println!("  right carrier: {} nodes", right.carrier.len());
        }
        other => println!("omega-of-binary: outcome {other:?}"),
    }
}
