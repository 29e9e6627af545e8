//! Parsing schemes, resolving addresses, and unfolding finite truncations.
//!
//! ```bash
//! cargo run -p treesym --example parse_and_unfold
//! ```

use treesym::scheme::DEFAULT_NODE_BUDGET;
use treesym::{Address, Scheme};

fn main() {
    let scheme = Scheme::parse(
        "# omega copies of binary trees\n\
         root = r;\n\
         class r { child v * omega; }\n\
         class v { child v * 2; }",
    )
    .unwrap();
    println!("canonical text:\n{}", scheme.to_text());

    // addresses use entry/copy coordinates relative to the declaration
    for text in ["", "e0.c17", "e0.c3/e0.c1", "e0.c0/e0.c1/e0.c0"] {
        let addr: Address = text.parse().unwrap();
        let node = scheme.resolve(&addr).unwrap();
        println!(
            "address {:10} -> class {}, path multiplicities {:?}",
            if text.is_empty() { "(root)" } else { text },
            scheme.class_name(node.class),
            node.multiplicities.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        );
    }

    // truncations replace omega by a finite cap
    for (depth, cap) in [(1, 3), (2, 2), (3, 2)] {
        let u = scheme.unfold(depth, cap, DEFAULT_NODE_BUDGET).unwrap();
        println!("unfold(depth {depth}, cap {cap}): {} nodes", u.tree.node_count());
    }

    // unresolvable addresses are rejected with a reason
    let bad: Address = "e0.c0/e1.c0".parse().unwrap();
    println!("resolving e0.c0/e1.c0: {}", scheme.resolve(&bad).unwrap_err());
}
