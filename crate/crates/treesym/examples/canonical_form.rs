//! Canonicalization: merging bisimilar classes, testing isomorphism, and
//! reading off the wreath decomposition.
//!
//! ```bash
//! cargo run -p treesym --example canonical_form
//! ```

use treesym::canon::{canonical_form, isomorphic, quotient_report};
use treesym::Scheme;

fn main() {
    // two declared classes with isomorphic unfoldings collapse into one
    let duplicated = Scheme::parse(
        "root = r;\n\
         class r { child a * 3; child b * 3; }\n\
         class a { child a * 2; }\n\
         class b { child b * 2; }",
    )
    .unwrap();
    let canon = canonical_form(&duplicated);
    println!("canonical form:\n{}", canon.scheme.to_text());
    println!("certificate:");
    for (from, to) in &canon.certificate {
        println!("  {from} -> {to}");
    }

    // isomorphism is invariant under renaming and declaration order
    let renamed = Scheme::parse(
        "root = top;\n\
         class top { child node * 6; }\n\
         class node { child node * 2; }",
    )
    .unwrap();
    println!("duplicated ~ renamed: {}", isomorphic(&duplicated, &renamed));
    let ternary = Scheme::parse("root = v; class v { child v * 3; }").unwrap();
    println!("duplicated ~ ternary: {}", isomorphic(&duplicated, &ternary));

    // the quotient lists every position of a class with its local degree
    let separating = Scheme::parse(
        "root = r; class r { child v * omega; } class v { child v * 2; }",
    )
    .unwrap();
    for line in quotient_report(&separating).decomposition {
        println!("{line}");
    }
}
