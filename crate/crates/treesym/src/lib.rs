//! Symmetry analysis for countable rooted trees given by finite presentations.
//!
//! A *scheme* presents a countable rooted tree by a finite graph of node
//! classes with child multiplicities in `{1, 2, ...} ∪ {omega}`. This crate
//! decides, for the full automorphism group of the presented tree:
//!
//! * **uncountable strong cofinality**: every exhaustion of the group by a
//!   countable increasing chain of subsets stabilizes at a finite power;
//! * **existence of an open subgroup with ample generics**;
//! * **the small index property**: subgroups of index below the continuum
//!   are open.
//!
//! All three are governed by the behaviour of algebraic closures of finite
//! sets (the [`acl`] module) and by the wreath decomposition of the group
//! over the class quotient (the [`canon`] module). Non-rooted trees enter
//! through edge-indexed graph presentations ([`nonrooted`]).
//!
//! Every infinitary claim that is checkable at desk scale is backed by the
//! brute-force [`oracle`] on finite truncations: explicit automorphism
//! groups, orbit counts under pointwise stabilizers, per-level permutation
//! signs, and bounded amalgamation of structures with partial automorphisms
//! ([`wap`]).
//!
//! The `examples/` directory of this crate shows one runnable program per
//! capability; the `treesym` binary exposes the same pipeline as a small
//! subcommand CLI.
//!
//! ```
//! use treesym::{Scheme, verdict};
//!
//! let s = Scheme::parse("root = r; class r { child v * omega; } class v { }").unwrap();
//! let v = verdict::decide_strong_cofinality(&s, verdict::Mode::Paper);
//! assert!(v.answer);
//! ```

pub mod acl;
pub mod canon;
pub mod cli;
mod classgraph;
pub mod extnat;
pub mod nonrooted;
pub mod oracle;
pub mod report;
pub mod scheme;
pub mod tree;
pub mod verdict;
pub mod wap;

#[cfg(test)]
pub(crate) mod testutil;

pub use extnat::ExtNat;
pub use scheme::{Address, Scheme, Step};
pub use tree::FiniteTree;

use thiserror::Error;

/// Crate-wide error type. The CLI maps each variant class to a stable exit
/// code: parse/usage -> 1, invalid structure -> 2, resource bounds -> 3,
/// internal invariant violations -> 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Syntax error in a textual input, with 1-based position.
    #[error("syntax error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// Unreadable input file or unusable invocation.
    #[error("{0}")]
    Usage(String),

    /// Structurally invalid input (undeclared class, zero multiplicity,
    /// unreachable class, disconnected graph, ...).
    #[error("invalid input: {0}")]
    Validation(String),

    /// An address that does not resolve against the ambient scheme.
    #[error("unresolvable address: {0}")]
    Unresolvable(String),

    /// A configurable budget (node count, enumeration size, group order)
    /// was exceeded before the computation finished.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// `extend_one_point` found no admissible witness.
    #[error("no witness: {0}")]
    NoWitness(String),

    /// Amalgamation failed on the shared part; the base system was not
    /// closed under the algebraic closure.
    #[error("incompatible amalgamation: {0}")]
    Incompatible(String),

    /// The requested witness does not exist for this input.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Two automorphisms of different trees were combined.
    #[error("tree mismatch between automorphisms")]
    TreeMismatch,

    /// An internal invariant failed; always a bug.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
