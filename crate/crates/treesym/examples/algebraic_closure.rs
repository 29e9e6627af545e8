//! Algebraic closures: orbit cardinalities under pointwise stabilizers and
//! closure enumeration with explicit infinitude witnesses.
//!
//! ```bash
//! cargo run -p treesym --example algebraic_closure
//! ```

use treesym::acl::{
    acl_enumerate, orbit_cardinality, universal_acl_finite, AclEnumeration, AddressSet,
    DEFAULT_ENUM_BUDGET,
};
use treesym::{Address, Scheme};

fn addr(text: &str) -> Address {
    text.parse().unwrap()
}

fn main() {
    let star = Scheme::parse("root=r; class r { child v * omega; } class v { }").unwrap();

    // pinning one leaf: every other leaf still roams over omega - 1 copies
    let x = AddressSet::new(&star, [addr("e0.c0")]).unwrap();
    for t in ["", "e0.c0", "e0.c1"] {
        println!(
            "star, fix {{e0.c0}}: orbit of {:7} = {}",
            if t.is_empty() { "(root)" } else { t },
            orbit_cardinality(&star, &x, &addr(t)).unwrap()
        );
    }

    // the closure of the empty set is just the root
    match acl_enumerate(&star, &AddressSet::empty(), DEFAULT_ENUM_BUDGET).unwrap() {
        AclEnumeration::Finite(set) => println!("star, closure of {{}}: {} element(s)", set.len()),
        AclEnumeration::Infinite { .. } => unreachable!(),
    }

    // below a pinned node of the separating scheme, a finite-multiplicity
    // cycle makes the closure infinite
    let separating =
        Scheme::parse("root=r; class r { child v * omega; } class v { child v * 2; }").unwrap();
    let pinned = AddressSet::new(&separating, [addr("e0.c0")]).unwrap();
    match acl_enumerate(&separating, &pinned, DEFAULT_ENUM_BUDGET).unwrap() {
        AclEnumeration::Infinite { cycle, exit } => println!(
            "omega-of-binary, fix {{e0.c0}}: closure INFINITE, cycle [{}] from {exit}",
            cycle.join(" -> ")
        ),
        AclEnumeration::Finite(_) => unreachable!(),
    }

    // the universal question comes with a one-element witness when it fails
    let report = universal_acl_finite(&separating);
    println!(
        "omega-of-binary, closure of every finite set finite: {} (witness fix: {})",
        report.finite,
        report.witness_fix.map(|a| a.to_string()).unwrap_or_default()
    );
    let report = universal_acl_finite(&star);
    println!("star, closure of every finite set finite: {}", report.finite);
}
