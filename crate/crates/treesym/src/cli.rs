//! Command-line surface. The binary is a thin shim over [`run`]; all the
//! work happens in the library.
//!
//! Exit discipline: 0 success, 1 parse/usage error, 2 invalid input
//! structure, 3 resource bound exceeded, 4 internal invariant violation.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::acl::{
    acl_enumerate, acl_membership, downward_closure, orbit_cardinality, AclEnumeration,
    AddressSet, DEFAULT_ENUM_BUDGET,
};
use crate::canon::{canonical_form, isomorphic, quotient_report};
use crate::extnat::ExtNat;
use crate::nonrooted::{decide_rigidity_conditions, EdgeIndexedGraph};
use crate::oracle;
use crate::report::{full_report, render_text, to_json, ModeFilter, ReportOptions};
use crate::scheme::{Address, Scheme, DEFAULT_NODE_BUDGET};
use crate::verdict::witness_countable_cofinality;
use crate::wap::{check_wap_instance, PartialSystem, WapOutcome};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "treesym",
    version,
    about = "Symmetry analysis for finitely presented rooted trees",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Paper,
    Reduced,
    Both,
}

impl From<ModeArg> for ModeFilter {
    fn from(m: ModeArg) -> ModeFilter {
        match m {
            ModeArg::Paper => ModeFilter::Paper,
            ModeArg::Reduced => ModeFilter::Reduced,
            ModeArg::Both => ModeFilter::Both,
        }
    }
}

#[derive(Debug, Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full analysis of a scheme: quotient, verdicts, witness, corollaries.
    Analyze {
        file: String,
        #[command(flatten)]
        common: Common,
        /// Decision modes to report.
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        /// Seed for the oracle cross-checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Attach brute-force cross-checks on a truncation.
        #[arg(long)]
        oracle_check: bool,
        /// Truncation depth for the cross-checks.
        #[arg(long, default_value_t = 3)]
        depth: u32,
        /// Finite stand-in for omega in truncations.
        #[arg(long, default_value_t = 3)]
        cap: u64,
    },
    /// Algebraic closures: orbit cardinalities, membership, enumeration.
    Acl {
        file: String,
        #[command(flatten)]
        common: Common,
        /// Comma-separated addresses to fix pointwise.
        #[arg(long, value_delimiter = ',')]
        fix: Vec<String>,
        /// Report the orbit of this address under the stabilizer.
        #[arg(long)]
        node: Option<String>,
        /// Enumerate the closure of the fixed set.
        #[arg(long)]
        enumerate: bool,
        /// Budget for closure enumeration.
        #[arg(long, default_value_t = DEFAULT_ENUM_BUDGET)]
        budget: usize,
    },
    /// Canonical form, class quotient, and isomorphism testing.
    Canon {
        file: String,
        #[command(flatten)]
        common: Common,
        /// Second scheme: test whether the presented trees are isomorphic.
        #[arg(long)]
        compare: Option<String>,
    },
    /// Brute-force checks on finite truncations.
    Oracle {
        file: String,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        check: OracleCheck,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value_t = 3)]
        cap: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Countable-cofinality witness for a scheme.
    Witness {
        file: String,
        #[command(flatten)]
        common: Common,
    },
    /// Stabilizer conditions for a non-rooted tree given as an
    /// edge-indexed graph.
    Nonrooted {
        file: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleCheck {
    /// Orbit formula against brute-force orbit sizes.
    Orbits,
    /// Level-sign homomorphism law and surjectivity witnesses.
    Signs,
    /// Sampled weak amalgamation of partial-automorphism systems.
    Wap,
    /// Automorphism group orders of truncations.
    GroupOrder,
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(output) => {
            print!("{output}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Usage(_) => 1,
        Error::Validation(_) | Error::Unresolvable(_) => 2,
        Error::ResourceLimit(_) => 3,
        Error::Internal(_) => 4,
        Error::NoWitness(_)
        | Error::Incompatible(_)
        | Error::NotApplicable(_)
        | Error::TreeMismatch => 2,
    }
}

fn read_input(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read `{path}`: {e}")))
}

fn load_scheme(path: &str) -> Result<Scheme> {
    Scheme::parse(&read_input(path)?)
}

fn parse_addr(text: &str) -> Result<Address> {
    text.parse()
}

fn dispatch(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Analyze { file, common, mode, seed, oracle_check, depth, cap } => {
            let scheme = load_scheme(&file)?;
            let opts = ReportOptions {
                path: Some(file),
                mode: mode.into(),
                seed,
                oracle_check,
                depth,
                cap,
            };
            let report = full_report(&scheme, &opts)?;
            Ok(match common.format {
                Format::Json => to_json(&report),
                Format::Text => render_text(&report),
            })
        }
        Command::Acl { file, common, fix, node, enumerate, budget } => {
            let scheme = load_scheme(&file)?;
            let fixed: Vec<Address> =
                fix.iter().map(|a| parse_addr(a)).collect::<Result<_>>()?;
            let x = AddressSet::new(&scheme, fixed)?;
            run_acl(&scheme, &x, node.as_deref(), enumerate, budget, common.format)
        }
        Command::Canon { file, common, compare } => {
            let scheme = load_scheme(&file)?;
            let other = compare.map(|p| load_scheme(&p)).transpose()?;
            run_canon(&scheme, other.as_ref(), common.format)
        }
        Command::Oracle { file, common, check, depth, cap, seed, samples } => {
            let scheme = load_scheme(&file)?;
            run_oracle(&scheme, check, depth, cap, seed, samples, common.format)
        }
        Command::Witness { file, common } => {
            let scheme = load_scheme(&file)?;
            match witness_countable_cofinality(&scheme) {
                Ok(w) => Ok(match common.format {
                    Format::Json => to_json(&w),
                    Format::Text => {
                        let mut out = String::new();
                        let _ = writeln!(out, "countable-cofinality witness");
                        let _ = writeln!(out, "  approach: {}", w.approach.join(" -> "));
                        let _ = writeln!(out, "  cycle: [{}]", w.cycle.join(" -> "));
                        let _ = writeln!(
                            out,
                            "  nontrivial entry: {} -> {} with {} copies",
                            w.decorated_class, w.decorated_child, w.local_degree
                        );
                        let _ = writeln!(out, "  witnessed levels: {}", w.levels);
                        let _ = writeln!(out, "  sign map: {}", w.sign_map);
                        out
                    }
                }),
                Err(Error::NotApplicable(note)) => Ok(match common.format {
                    Format::Json => to_json(&serde_json::json!({ "not_applicable": note })),
                    Format::Text => format!("not applicable: {note}\n"),
                }),
                Err(e) => Err(e),
            }
        }
        Command::Nonrooted { file, common } => {
            let graph = EdgeIndexedGraph::parse(&read_input(&file)?)?;
            let report = decide_rigidity_conditions(&graph)?;
            Ok(match common.format {
                Format::Json => to_json(&report),
                Format::Text => {
                    let mut out = String::new();
                    let _ = writeln!(out, "stabilizer conditions for the presented tree");
                    for c in &report.conditions {
                        let _ = writeln!(out, "  = {c}");
                    }
                    let _ = writeln!(
                        out,
                        "hold [paper mode]: {}",
                        if report.conditions_hold_paper { "YES" } else { "NO" }
                    );
                    let _ = writeln!(
                        out,
                        "hold [reduced mode]: {}",
                        if report.conditions_hold_reduced { "YES" } else { "NO" }
                    );
                    if report.degenerate {
                        let _ = writeln!(out, "  [degenerate: modes disagree somewhere]");
                    }
                    for v in &report.vertices {
                        let _ = writeln!(out, "vertex {}:", v.vertex);
                        let _ = writeln!(
                            out,
                            "  universal closure finite: paper {} / reduced {}",
                            v.universal_paper, v.universal_reduced
                        );
                        let _ = writeln!(
                            out,
                            "  singleton reduction:      paper {} / reduced {}",
                            v.singleton_paper, v.singleton_reduced
                        );
                        for l in v.rooted_scheme.lines() {
                            let _ = writeln!(out, "    {l}");
                        }
                    }
                    out
                }
            })
        }
    }
}

#[derive(Serialize)]
struct AclOutput {
    fixed: Vec<Address>,
    closure: Vec<Address>,
    node: Option<AclNodeOutput>,
    enumeration: Option<AclEnumeration>,
}

#[derive(Serialize)]
struct AclNodeOutput {
    address: Address,
    orbit: ExtNat,
    in_closure_of_fixed_set: bool,
}

fn run_acl(
    scheme: &Scheme,
    x: &AddressSet,
    node: Option<&str>,
    enumerate: bool,
    budget: usize,
    format: Format,
) -> Result<String> {
    let closure = downward_closure(scheme, x)?;
    let node_out = match node {
        Some(text) => {
            let addr = parse_addr(text)?;
            Some(AclNodeOutput {
                orbit: orbit_cardinality(scheme, x, &addr)?,
                in_closure_of_fixed_set: acl_membership(scheme, x, &addr)?,
                address: addr,
            })
        }
        None => None,
    };
    let enumeration = if enumerate { Some(acl_enumerate(scheme, x, budget)?) } else { None };
    let output = AclOutput {
        fixed: x.members().iter().cloned().collect(),
        closure: closure.members().iter().cloned().collect(),
        node: node_out,
        enumeration,
    };
    Ok(match format {
        Format::Json => to_json(&output),
        Format::Text => {
            let mut out = String::new();
            let show = |a: &Address| {
                if a.is_root() {
                    "(root)".to_string()
                } else {
                    a.to_string()
                }
            };
            let _ = writeln!(
                out,
                "fixed set: {{{}}}",
                output.fixed.iter().map(&show).collect::<Vec<_>>().join(", ")
            );
            let _ = writeln!(
                out,
                "downward closure: {{{}}}",
                output.closure.iter().map(&show).collect::<Vec<_>>().join(", ")
            );
            if let Some(n) = &output.node {
                let _ = writeln!(
                    out,
                    "orbit of {} under the stabilizer: {}{}",
                    show(&n.address),
                    n.orbit,
                    if n.in_closure_of_fixed_set { "  (in the algebraic closure)" } else { "" }
                );
            }
            match &output.enumeration {
                Some(AclEnumeration::Finite(set)) => {
                    let _ = writeln!(out, "algebraic closure: FINITE with {} elements", set.len());
                    for a in set {
                        let _ = writeln!(out, "  {}", show(a));
                    }
                }
                Some(AclEnumeration::Infinite { cycle, exit }) => {
                    let _ = writeln!(
                        out,
                        "algebraic closure: INFINITE (cycle [{}] reachable from {})",
                        cycle.join(" -> "),
                        show(exit)
                    );
                }
                None => {}
            }
            out
        }
    })
}

#[derive(Serialize)]
struct CanonOutput {
    canonical_text: String,
    certificate: Vec<(String, String)>,
    quotient: crate::canon::QuotientReport,
    isomorphic_to_compare: Option<bool>,
}

fn run_canon(scheme: &Scheme, other: Option<&Scheme>, format: Format) -> Result<String> {
    let canon = canonical_form(scheme);
    let output = CanonOutput {
        canonical_text: canon.scheme.to_text(),
        certificate: canon.certificate.clone(),
        quotient: quotient_report(scheme),
        isomorphic_to_compare: other.map(|o| isomorphic(scheme, o)),
    };
    Ok(match format {
        Format::Json => to_json(&output),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "canonical form:");
            for l in output.canonical_text.lines() {
                let _ = writeln!(out, "  {l}");
            }
            let _ = writeln!(out, "certificate (declared class -> canonical class):");
            for (from, to) in &output.certificate {
                let _ = writeln!(out, "  {from} -> {to}");
            }
            for l in &output.quotient.decomposition {
                let _ = writeln!(out, "{l}");
            }
            if let Some(iso) = output.isomorphic_to_compare {
                let _ = writeln!(out, "isomorphic to compared scheme: {iso}");
            }
            out
        }
    })
}

#[derive(Serialize)]
struct OracleOutput {
    check: String,
    passed: bool,
    detail: Vec<String>,
}

fn run_oracle(
    scheme: &Scheme,
    check: OracleCheck,
    depth: u32,
    cap: u64,
    seed: u64,
    samples: usize,
    format: Format,
) -> Result<String> {
    let capped = scheme.substitute_omega(cap)?;
    let mut detail = Vec::new();
    let mut passed = true;
    let check_name;
    match check {
        OracleCheck::Orbits => {
            check_name = "orbits";
            let unfolding = capped.unfold(depth, cap, DEFAULT_NODE_BUDGET)?;
            let tree = &unfolding.tree;
            let mut fixed_sets: Vec<Vec<Address>> = vec![Vec::new()];
            for v in 0..tree.node_count() as u32 {
                if tree.depth(v) == 1 {
                    fixed_sets.push(vec![unfolding.addresses[v as usize].clone()]);
                }
            }
            let mut checks = 0usize;
            for fixed in &fixed_sets {
                let x = AddressSet::new(&capped, fixed.iter().cloned())?;
                let nodes: BTreeSet<u32> =
                    fixed.iter().filter_map(|a| unfolding.node_of(a)).collect();
                let brute = oracle::acl_bruteforce(tree, &nodes);
                for v in 0..tree.node_count() as u32 {
                    if tree.depth(v) >= depth {
                        continue;
                    }
                    let formula =
                        orbit_cardinality(&capped, &x, &unfolding.addresses[v as usize])?;
                    checks += 1;
                    if formula != crate::extnat::Fin(brute[v as usize]) {
                        passed = false;
                        detail.push(format!(
                            "mismatch at {} fixing {:?}: formula {} vs brute {}",
                            unfolding.addresses[v as usize],
                            fixed.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                            formula,
                            brute[v as usize]
                        ));
                    }
                }
            }
            detail.push(format!("{checks} orbit comparisons at depth {depth}, cap {cap}"));
        }
        OracleCheck::Signs => {
            check_name = "signs";
            let tree = capped.unfold(depth, cap, DEFAULT_NODE_BUDGET)?.tree;
            let mut failures = 0usize;
            for i in 0..samples as u64 {
                let g = oracle::random_automorphism(&tree, seed ^ (2 * i));
                let h = oracle::random_automorphism(&tree, seed ^ (2 * i + 1));
                let gh = oracle::compose(&g, &h)?;
                let xor: Vec<bool> = oracle::level_sign(&tree, &g)
                    .into_iter()
                    .zip(oracle::level_sign(&tree, &h))
                    .map(|(a, b)| a ^ b)
                    .collect();
                if oracle::level_sign(&tree, &gh) != xor {
                    failures += 1;
                }
            }
            if failures > 0 {
                passed = false;
            }
            detail.push(format!("{samples} random pairs, {failures} homomorphism failures"));
            let gens = oracle::automorphism_generators(&tree, &BTreeSet::new());
            match oracle::sign_basis_witnesses(&tree, &gens) {
                Some(ws) => detail.push(format!(
                    "sign map is onto: {} basis witnesses exhibited",
                    ws.len()
                )),
                None => detail.push("sign map is not onto at this depth".to_string()),
            }
        }
        OracleCheck::Wap => {
            check_name = "wap";
            let root_system = PartialSystem::new(
                scheme,
                [Address::root()],
                vec![[(Address::root(), Address::root())].into_iter().collect()],
            )?;
            match check_wap_instance(scheme, &root_system, 8, samples, seed) {
                WapOutcome::Pass { samples } => {
                    detail.push(format!("{samples} sampled extension pairs amalgamated"));
                }
                WapOutcome::Fail { sample, reason, .. } => {
                    passed = false;
                    detail.push(format!("sample {sample} failed: {reason}"));
                }
                WapOutcome::BoundExceeded { reason } => {
                    return Err(Error::ResourceLimit(reason));
                }
            }
        }
        OracleCheck::GroupOrder => {
            check_name = "group-order";
            for d in 1..=depth {
                let tree = capped.unfold(d, cap, DEFAULT_NODE_BUDGET)?.tree;
                let gens = oracle::automorphism_generators(&tree, &BTreeSet::new());
                match oracle::group_order(&tree, &gens, 1 << 20) {
                    Ok(order) => detail.push(format!("|Aut(depth {d})| = {order}")),
                    Err(Error::ResourceLimit(_)) => {
                        detail.push(format!("|Aut(depth {d})| > 2^20, stopping"));
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    // a failed consistency check between the formula and the oracle is an
    // internal defect, not a property of the input
    if !passed && matches!(check, OracleCheck::Orbits | OracleCheck::Signs) {
        return Err(Error::Internal(format!("oracle check failed: {}", detail.join("; "))));
    }
    let output = OracleOutput { check: check_name.to_string(), passed, detail };
    Ok(match format {
        Format::Json => to_json(&output),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "oracle check `{}`: {}",
                output.check,
                if output.passed { "PASS" } else { "FAIL" }
            );
            for d in &output.detail {
                let _ = writeln!(out, "  {d}");
            }
            out
        }
    })
}
