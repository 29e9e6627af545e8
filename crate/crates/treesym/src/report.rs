//! Full analysis reports: aggregation, JSON schema, and text rendering.
//!
//! A report is a pure function of (input, options, seed); maps are ordered
//! and the JSON field order is fixed, so byte-identical inputs produce
//! byte-identical reports.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::acl::{finite_part, orbit_cardinality, AddressSet, FinitePartReport};
use crate::canon::{quotient_report, QuotientReport};
use crate::extnat::Fin;
use crate::oracle;
use crate::scheme::{Address, Scheme, DEFAULT_NODE_BUDGET};
use crate::verdict::{
    check_verdict_invariants, corollaries, decide_ample_generics, decide_small_index,
    decide_strong_cofinality, witness_countable_cofinality, Mode, Property, Verdict,
    WitnessBranch,
};
use crate::{Error, Result};

/// Report schema version; bump on breaking field changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Which decision modes to include in a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeFilter {
    Paper,
    Reduced,
    Both,
}

impl ModeFilter {
    pub fn includes(self, mode: Mode) -> bool {
        matches!(
            (self, mode),
            (ModeFilter::Both, _) | (ModeFilter::Paper, Mode::Paper) | (ModeFilter::Reduced, Mode::Reduced)
        )
    }
}

/// Options for [`full_report`].
#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub path: Option<String>,
    pub mode: ModeFilter,
    pub seed: u64,
    /// Attach truncation cross-checks against the brute-force oracle.
    pub oracle_check: bool,
    pub depth: u32,
    pub cap: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            path: None,
            mode: ModeFilter::Both,
            seed: 0,
            oracle_check: false,
            depth: 3,
            cap: 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub path: Option<String>,
    /// Canonical serialization of the parsed input.
    pub canonical_text: String,
}

/// Cross-check summary from the brute-force oracle on a truncation.
#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub depth: u32,
    pub cap: u64,
    pub orbit_checks: usize,
    pub orbit_mismatches: usize,
    /// `|Aut|` of the capped truncation per depth, while enumerable.
    pub automorphism_orders: Vec<(u32, u64)>,
    pub sign_pairs_checked: usize,
    pub sign_pair_failures: usize,
}

/// The complete analysis of one scheme.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub tool: String,
    pub seed: u64,
    pub input: InputEcho,
    pub quotient: QuotientReport,
    pub finite_part: FinitePartReport,
    pub verdicts: Vec<Verdict>,
    /// Parity witness when the reduced strong-cofinality criterion fails.
    pub witness: Option<WitnessBranch>,
    /// Set when the witness is not applicable but the criteria disagree.
    pub witness_note: Option<String>,
    /// Consequences of the literal ample-generics verdict.
    pub corollaries: Vec<String>,
    pub oracle_checks: Option<OracleSummary>,
}

/// Aggregates quotient, finite part, all verdicts, witness material and
/// optional oracle cross-checks. Deterministic for fixed inputs.
pub fn full_report(s: &Scheme, opts: &ReportOptions) -> Result<AnalysisReport> {
    let mut all_verdicts = Vec::new();
    for mode in Mode::BOTH {
        all_verdicts.push(decide_strong_cofinality(s, mode));
        all_verdicts.push(decide_ample_generics(s, mode));
        all_verdicts.push(decide_small_index(s, mode));
    }
    check_verdict_invariants(&all_verdicts)?;

    let (witness, witness_note) = match witness_countable_cofinality(s) {
        Ok(w) => (Some(w), None),
        Err(Error::NotApplicable(note)) => {
            let flagged = note.contains("degenerate");
            (None, flagged.then_some(note))
        }
        Err(e) => return Err(e),
    };

    let ample_paper = all_verdicts
        .iter()
        .find(|v| v.property == Property::AmpleGenericsOpenSubgroup && v.mode == Mode::Paper)
        .expect("computed above");
    let corollary_lines = corollaries(ample_paper);

    let oracle_checks =
        if opts.oracle_check { Some(oracle_summary(s, opts.depth, opts.cap, opts.seed)?) } else { None };

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        tool: format!("treesym {}", env!("CARGO_PKG_VERSION")),
        seed: opts.seed,
        input: InputEcho { path: opts.path.clone(), canonical_text: s.to_text() },
        quotient: quotient_report(s),
        finite_part: finite_part(s),
        verdicts: all_verdicts.into_iter().filter(|v| opts.mode.includes(v.mode)).collect(),
        witness,
        witness_note,
        corollaries: corollary_lines,
        oracle_checks,
    })
}

/// Truncation cross-checks: orbit formula against brute-force orbits, the
/// automorphism order ladder, and the sign homomorphism law.
fn oracle_summary(s: &Scheme, depth: u32, cap: u64, seed: u64) -> Result<OracleSummary> {
    let capped = s.substitute_omega(cap)?;
    let unfolding = capped.unfold(depth, cap, DEFAULT_NODE_BUDGET)?;
    let tree = &unfolding.tree;

    // fixed sets: empty plus every singleton at depth <= 1
    let mut fixed_sets: Vec<Vec<Address>> = vec![Vec::new()];
    for v in 0..tree.node_count() as u32 {
        if tree.depth(v) == 1 {
            fixed_sets.push(vec![unfolding.addresses[v as usize].clone()]);
        }
    }
    let mut orbit_checks = 0;
    let mut orbit_mismatches = 0;
    for fixed in &fixed_sets {
        let x = AddressSet::new(&capped, fixed.iter().cloned())?;
        let fixed_nodes: BTreeSet<u32> =
            fixed.iter().filter_map(|a| unfolding.node_of(a)).collect();
        let brute = oracle::acl_bruteforce(tree, &fixed_nodes);
        for v in 0..tree.node_count() as u32 {
            if tree.depth(v) >= depth {
                continue;
            }
            let formula = orbit_cardinality(&capped, &x, &unfolding.addresses[v as usize])?;
            orbit_checks += 1;
            if formula != Fin(brute[v as usize]) {
                orbit_mismatches += 1;
            }
        }
    }

    let mut automorphism_orders = Vec::new();
    for d in 1..=depth.min(3) {
        let u = capped.unfold(d, cap, DEFAULT_NODE_BUDGET)?;
        let gens = oracle::automorphism_generators(&u.tree, &BTreeSet::new());
        match oracle::group_order(&u.tree, &gens, 1 << 16) {
            Ok(order) => automorphism_orders.push((d, order)),
            Err(Error::ResourceLimit(_)) => break,
            Err(e) => return Err(e),
        }
    }

    let mut sign_pairs_checked = 0;
    let mut sign_pair_failures = 0;
    for i in 0..50u64 {
        let g = oracle::random_automorphism(tree, seed ^ (2 * i));
        let h = oracle::random_automorphism(tree, seed ^ (2 * i + 1));
        let gh = oracle::compose(&g, &h)?;
        let xor: Vec<bool> = oracle::level_sign(tree, &g)
            .into_iter()
            .zip(oracle::level_sign(tree, &h))
            .map(|(a, b)| a ^ b)
            .collect();
        sign_pairs_checked += 1;
        if oracle::level_sign(tree, &gh) != xor {
            sign_pair_failures += 1;
        }
    }

    Ok(OracleSummary {
        depth,
        cap,
        orbit_checks,
        orbit_mismatches,
        automorphism_orders,
        sign_pairs_checked,
        sign_pair_failures,
    })
}

/// Stable pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serialization");
    out.push('\n');
    out
}

/// Human-readable rendering of an analysis report.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("{} (schema {}, seed {})", r.tool, r.schema_version, r.seed));
    if let Some(path) = &r.input.path {
        line(format!("input: {path}"));
    }
    line("".into());
    line("== presentation (canonical) ==".into());
    for l in r.input.canonical_text.lines() {
        line(format!("  {l}"));
    }
    line("".into());
    line("== class quotient ==".into());
    for l in &r.quotient.decomposition {
        line(l.clone());
    }
    line("".into());
    line("== finite part of the quotient ==".into());
    line(format!(
        "  classes reachable through finite entries: {}",
        r.finite_part.classes.join(", ")
    ));
    match (&r.finite_part.witness_cycle, &r.finite_part.members) {
        (Some(cycle), _) => line(format!("  infinite: repeats through [{}]", cycle.join(" -> "))),
        (None, Some(members)) => line(format!("  finite with {} occurrences", members.len())),
        (None, None) => {}
    }
    line("".into());
    line("== verdicts ==".into());
    for v in &r.verdicts {
        let flag = if v.degenerate { "  [degenerate: modes disagree]" } else { "" };
        let answer = if v.answer { "YES" } else { "NO" };
        line(format!("  {} [{} mode]: {answer}{flag}", v.property, v.mode));
        for step in &v.justification {
            line(format!("      - ({}) {}", step.tag, step.statement));
        }
    }
    if let Some(w) = &r.witness {
        line("".into());
        line("== countable-cofinality witness ==".into());
        line(format!("  case: {}", w.case));
        line(format!("  approach: {}", w.approach.join(" -> ")));
        line(format!("  cycle: [{}]", w.cycle.join(" -> ")));
        if w.decoration_path.len() > 1 {
            line(format!("  decoration path: {}", w.decoration_path.join(" -> ")));
        }
        line(format!(
            "  nontrivial entry: {} -> {} with {} copies",
            w.decorated_class, w.decorated_child, w.local_degree
        ));
        line(format!("  witnessed levels: {}", w.levels));
        line(format!("  subgroup chain: {}", w.subgroup_chain));
        line(format!("  sign map: {}", w.sign_map));
    }
    if let Some(note) = &r.witness_note {
        line("".into());
        line(format!("note: {note}"));
    }
    if !r.corollaries.is_empty() {
        line("".into());
        line("== consequences ==".into());
        for c in &r.corollaries {
            line(format!("  - {c}"));
        }
    }
    if let Some(o) = &r.oracle_checks {
        line("".into());
        line("== oracle cross-checks ==".into());
        line(format!(
            "  orbit formula vs brute force (depth {}, cap {}): {}/{} agree",
            o.depth,
            o.cap,
            o.orbit_checks - o.orbit_mismatches,
            o.orbit_checks
        ));
        for (d, order) in &o.automorphism_orders {
            line(format!("  |Aut(truncation at depth {d})| = {order}"));
        }
        line(format!(
            "  level-sign homomorphism law: {}/{} random pairs agree",
            o.sign_pairs_checked - o.sign_pair_failures,
            o.sign_pairs_checked
        ));
    }
    out
}
