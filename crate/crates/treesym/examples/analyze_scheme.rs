//! Full analysis of a scheme: class quotient, all six verdicts, witness
//! material, and corollaries.
//!
//! ```bash
//! cargo run -p treesym --example analyze_scheme
//! ```

use treesym::report::{full_report, render_text, ReportOptions};
use treesym::Scheme;

fn corpus(name: &str) -> String {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("corpus file")
}

fn main() {
    // the separating example: strong cofinality holds, ample generics fail
    let scheme = Scheme::parse(&corpus("omega_of_binary.tg")).unwrap();
    let opts = ReportOptions {
        path: Some("corpus/omega_of_binary.tg".into()),
        oracle_check: true,
        seed: 7,
        ..Default::default()
    };
    let report = full_report(&scheme, &opts).unwrap();
    print!("{}", render_text(&report));

    // the same report serializes to a stable JSON document
    let json = treesym::report::to_json(&report);
    println!("\nJSON report: {} bytes, schema {}", json.len(), report.schema_version);
}
