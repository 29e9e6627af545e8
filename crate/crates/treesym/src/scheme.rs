//! Finite presentations of countable rooted trees.
//!
//! A scheme declares node classes; each class lists child entries with a
//! multiplicity in `{1, 2, ...} ∪ {omega}`. The presented tree unfolds from
//! the root class: a node of class `c` has, per entry `(d, m)` of `c`,
//! exactly `m` children of class `d`.
//!
//! Textual format (`.tg`, `#` starts a line comment):
//!
//! ```text
//! root = r;
//! class r { child v * omega; }
//! class v { }
//! ```
//!
//! Tree elements are addressed in entry/copy coordinates relative to the
//! declaration: `e1.c0/e0.c2` is "entry 1, copy 0 below the root, then entry
//! 0, copy 2"; the empty string addresses the root. Addresses always refer
//! to the user's declared coordinates, independent of canonicalization.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::extnat::{ExtNat, Fin, Omega};
use crate::tree::FiniteTree;
use crate::{Error, Result};

/// Default node budget for unfolding.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// One child entry of a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Entry {
    /// Index of the child class.
    pub child: usize,
    /// Number of copies; never zero.
    pub mult: ExtNat,
}

/// A validated scheme. Classes keep their declaration order and names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    names: Vec<String>,
    entries: Vec<Vec<Entry>>,
    root: usize,
}

impl Scheme {
    /// Builds and validates a scheme from parts. `entries[i]` lists the
    /// children of class `i`; `root` is a class index.
    pub fn new(names: Vec<String>, entries: Vec<Vec<Entry>>, root: usize) -> Result<Scheme> {
        if names.len() != entries.len() {
            return Err(Error::Validation("class/entry table size mismatch".into()));
        }
        if root >= names.len() {
            return Err(Error::Validation("root class index out of range".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::Validation(format!("duplicate class `{name}`")));
            }
        }
        for (i, es) in entries.iter().enumerate() {
            let mut total = ExtNat::ZERO;
            for e in es {
                if e.child >= names.len() {
                    return Err(Error::Validation(format!(
                        "class `{}` references an undeclared child class",
                        names[i]
                    )));
                }
                if e.mult.is_zero() {
                    return Err(Error::Validation(format!(
                        "zero multiplicity in class `{}`",
                        names[i]
                    )));
                }
                // keeps every downstream multiplicity sum exact
                total = total.checked_add(e.mult).ok_or_else(|| {
                    Error::Validation(format!(
                        "multiplicities of class `{}` overflow exact arithmetic",
                        names[i]
                    ))
                })?;
            }
        }
        let s = Scheme { names, entries, root };
        // Unreachable classes are an error, not silently pruned.
        let reach = s.reachable_classes();
        if let Some(i) = (0..s.names.len()).find(|&i| !reach[i]) {
            return Err(Error::Validation(format!(
                "class `{}` is unreachable from the root",
                s.names[i]
            )));
        }
        Ok(s)
    }

    /// Parses the `.tg` format.
    pub fn parse(text: &str) -> Result<Scheme> {
        parse_scheme_text(text)
    }

    pub fn class_count(&self) -> usize {
        self.names.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn class_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn class_names(&self) -> &[String] {
        &self.names
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn entries(&self, class: usize) -> &[Entry] {
        &self.entries[class]
    }

    fn reachable_classes(&self) -> Vec<bool> {
        let mut seen = vec![false; self.names.len()];
        let mut queue = VecDeque::from([self.root]);
        seen[self.root] = true;
        while let Some(c) = queue.pop_front() {
            for e in &self.entries[c] {
                if !seen[e.child] {
                    seen[e.child] = true;
                    queue.push_back(e.child);
                }
            }
        }
        seen
    }

    /// Canonical textual form: normalized whitespace, declaration order
    /// preserved. `parse(to_text(s)) == s`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("root = {};\n", self.names[self.root]));
        for (i, es) in self.entries.iter().enumerate() {
            out.push_str(&format!("class {} {{", self.names[i]));
            if es.is_empty() {
                out.push_str(" }\n");
                continue;
            }
            out.push('\n');
            for e in es {
                out.push_str(&format!("  child {} * {};\n", self.names[e.child], e.mult));
            }
            out.push_str("}\n");
        }
        out
    }

    /// The same presentation with every `omega` multiplicity replaced by
    /// the finite `cap`.
    pub fn substitute_omega(&self, cap: u64) -> Result<Scheme> {
        if cap == 0 {
            return Err(Error::Validation("cap must be positive".into()));
        }
        let entries = self
            .entries
            .iter()
            .map(|es| {
                es.iter()
                    .map(|e| Entry {
                        child: e.child,
                        mult: if e.mult.is_finite() { e.mult } else { Fin(cap) },
                    })
                    .collect()
            })
            .collect();
        Scheme::new(self.names.clone(), entries, self.root)
    }

    /// Resolves an address, returning the class of the addressed node and
    /// the entry multiplicities met along the path.
    pub fn resolve(&self, addr: &Address) -> Result<NodeRef> {
        let mut class = self.root;
        let mut mults = Vec::with_capacity(addr.steps.len());
        for (i, step) in addr.steps.iter().enumerate() {
            let es = &self.entries[class];
            let entry = es.get(step.entry as usize).ok_or_else(|| {
                Error::Unresolvable(format!(
                    "step {i} of `{addr}`: class `{}` has {} entries, entry index {} is out of range",
                    self.names[class],
                    es.len(),
                    step.entry
                ))
            })?;
            if let Fin(m) = entry.mult {
                if step.copy >= m {
                    return Err(Error::Unresolvable(format!(
                        "step {i} of `{addr}`: copy index {} exceeds multiplicity {m}",
                        step.copy
                    )));
                }
            }
            mults.push(entry.mult);
            class = entry.child;
        }
        Ok(NodeRef { class, multiplicities: mults })
    }

    /// Depth-truncated unfolding with every `omega` replaced by `cap`.
    /// Nodes carry their declared class as label; the result also maps each
    /// node back to its address.
    pub fn unfold(&self, depth: u32, cap: u64, node_budget: usize) -> Result<Unfolding> {
        if cap == 0 {
            return Err(Error::Validation("cap must be positive".into()));
        }
        let mut parents: Vec<u32> = vec![0];
        let mut labels: Vec<u32> = vec![self.root as u32];
        let mut classes: Vec<usize> = vec![self.root];
        let mut addresses: Vec<Address> = vec![Address::root()];
        let mut queue = VecDeque::from([(0u32, 0u32)]); // (node, depth)
        while let Some((v, d)) = queue.pop_front() {
            if d == depth {
                continue;
            }
            let class = classes[v as usize];
            for (ei, e) in self.entries[class].iter().enumerate() {
                let copies = match e.mult {
                    Fin(m) => m,
                    Omega => cap,
                };
                for q in 0..copies {
                    if parents.len() >= node_budget {
                        return Err(Error::ResourceLimit(format!(
                            "unfolding exceeds the node budget of {node_budget}"
                        )));
                    }
                    let id = parents.len() as u32;
                    parents.push(v);
                    labels.push(e.child as u32);
                    classes.push(e.child);
                    let mut addr = addresses[v as usize].clone();
                    addr.steps.push(Step { entry: ei as u32, copy: q });
                    addresses.push(addr);
                    queue.push_back((id, d + 1));
                }
            }
        }
        let tree = FiniteTree::from_parents(parents, Some(labels))?;
        Ok(Unfolding { tree, classes, addresses })
    }
}

impl Serialize for Scheme {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct ClassRepr<'a> {
            name: &'a str,
            entries: Vec<EntryRepr<'a>>,
        }
        #[derive(Serialize)]
        struct EntryRepr<'a> {
            child: &'a str,
            mult: ExtNat,
        }
        let mut st = ser.serialize_struct("Scheme", 2)?;
        st.serialize_field("root", self.class_name(self.root))?;
        let classes: Vec<ClassRepr> = (0..self.class_count())
            .map(|i| ClassRepr {
                name: self.class_name(i),
                entries: self.entries[i]
                    .iter()
                    .map(|e| EntryRepr { child: self.class_name(e.child), mult: e.mult })
                    .collect(),
            })
            .collect();
        st.serialize_field("classes", &classes)?;
        st.end()
    }
}

/// A finite truncation of the presented tree.
#[derive(Debug, Clone)]
pub struct Unfolding {
    pub tree: FiniteTree,
    /// Declared class of each node.
    pub classes: Vec<usize>,
    /// Address of each node in the infinite tree.
    pub addresses: Vec<Address>,
}

impl Unfolding {
    /// Node index of an address inside the truncation, when present.
    pub fn node_of(&self, addr: &Address) -> Option<u32> {
        self.addresses.iter().position(|a| a == addr).map(|i| i as u32)
    }
}

/// Result of resolving an address.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRef {
    pub class: usize,
    /// Entry multiplicities along the path, one per step.
    pub multiplicities: Vec<ExtNat>,
}

/// One step of an address: an entry of the current class plus a copy index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub entry: u32,
    pub copy: u64,
}

/// An element of the presented tree in entry/copy coordinates; the empty
/// sequence is the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Address {
    pub steps: Vec<Step>,
}

impl Address {
    pub fn root() -> Address {
        Address { steps: Vec::new() }
    }

    pub fn is_root(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn parent(&self) -> Option<Address> {
        if self.steps.is_empty() {
            None
        } else {
            Some(Address { steps: self.steps[..self.steps.len() - 1].to_vec() })
        }
    }

    pub fn child(&self, entry: u32, copy: u64) -> Address {
        let mut steps = self.steps.clone();
        steps.push(Step { entry, copy });
        Address { steps }
    }

    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.steps.len() >= self.steps.len() && other.steps[..self.steps.len()] == self.steps[..]
    }

    /// All proper and improper prefixes, from the root down.
    pub fn prefixes(&self) -> Vec<Address> {
        (0..=self.steps.len())
            .map(|k| Address { steps: self.steps[..k].to_vec() })
            .collect()
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.steps.iter().map(|s| format!("e{}.c{}", s.entry, s.copy)).collect();
        write!(f, "{}", parts.join("/"))
    }
}

impl FromStr for Address {
    type Err = Error;
    fn from_str(s: &str) -> Result<Address> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Address::root());
        }
        let mut steps = Vec::new();
        for part in s.split('/') {
            let bad = || Error::Unresolvable(format!("malformed address step `{part}`"));
            let rest = part.strip_prefix('e').ok_or_else(bad)?;
            let (e, c) = rest.split_once(".c").ok_or_else(bad)?;
            let entry: u32 = e.parse().map_err(|_| bad())?;
            let copy: u64 = c.parse().map_err(|_| bad())?;
            steps.push(Step { entry, copy });
        }
        Ok(Address { steps })
    }
}

impl Serialize for Address {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Address {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(|e: Error| de::Error::custom(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// .tg parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 0 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 0;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Next token with its starting position.
    fn next_tok(&mut self) -> Result<Option<(Tok, usize, usize)>> {
        loop {
            match self.chars.peek() {
                None => return Ok(None),
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(_) => break,
            }
        }
        let (line, col) = (self.line, self.col + 1);
        let c = self.bump().unwrap();
        let tok = match c {
            '{' | '}' | ';' | '*' | '=' => Tok::Sym(c),
            c if c.is_ascii_digit() => {
                let mut n = c.to_digit(10).unwrap() as u64;
                while let Some(d) = self.chars.peek().and_then(|c| c.to_digit(10)) {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(d as u64))
                        .ok_or(Error::Parse { line, col, msg: "integer literal too large".into() })?;
                    self.bump();
                }
                Tok::Int(n)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::from(c);
                while let Some(&c) = self.chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            c => {
                return Err(Error::Parse { line, col, msg: format!("unexpected character `{c}`") });
            }
        };
        Ok(Some((tok, line, col)))
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse { line, col, msg: msg.into() }
    }

    fn next(&mut self, what: &str) -> Result<Tok> {
        let t = self.toks.get(self.pos).cloned().ok_or_else(|| self.err(format!("expected {what}, found end of input")))?;
        self.pos += 1;
        Ok(t.0)
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.next(&format!("`{c}`"))? {
            Tok::Sym(s) if s == c => Ok(()),
            t => Err(self.offset_err(format!("expected `{c}`, found {}", show(&t)))),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String> {
        match self.next(what)? {
            Tok::Ident(s) => Ok(s),
            t => Err(self.offset_err(format!("expected {what}, found {}", show(&t)))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        match self.next(&format!("`{kw}`"))? {
            Tok::Ident(s) if s == kw => Ok(()),
            t => Err(self.offset_err(format!("expected `{kw}`, found {}", show(&t)))),
        }
    }

    /// Error at the token just consumed.
    fn offset_err(&self, msg: String) -> Error {
        let (line, col) =
            self.toks.get(self.pos - 1).map(|&(_, l, c)| (l, c)).unwrap_or((1, 1));
        Error::Parse { line, col, msg }
    }
}

fn show(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Sym(c) => format!("`{c}`"),
    }
}

fn parse_scheme_text(text: &str) -> Result<Scheme> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    while let Some(t) = lexer.next_tok()? {
        toks.push(t);
    }
    let mut p = Parser { toks, pos: 0 };

    p.expect_keyword("root")?;
    p.expect_sym('=')?;
    let root_name = p.expect_ident("a class identifier")?;
    p.expect_sym(';')?;

    struct RawClass {
        name: String,
        entries: Vec<(String, ExtNat, usize, usize)>, // child, mult, line, col
        line: usize,
        col: usize,
    }
    let mut raw: Vec<RawClass> = Vec::new();
    while p.peek().is_some() {
        let (line, col) = p.here();
        p.expect_keyword("class")?;
        let name = p.expect_ident("a class identifier")?;
        p.expect_sym('{')?;
        let mut entries = Vec::new();
        loop {
            match p.peek() {
                Some(Tok::Sym('}')) => {
                    p.next("`}`")?;
                    break;
                }
                Some(Tok::Ident(s)) if s == "child" => {
                    p.next("`child`")?;
                    let (eline, ecol) = p.here();
                    let child = p.expect_ident("a class identifier")?;
                    p.expect_sym('*')?;
                    let mult = match p.next("a multiplicity")? {
                        Tok::Int(n) => Fin(n),
                        Tok::Ident(s) if s == "omega" => Omega,
                        t => {
                            return Err(p.offset_err(format!(
                                "expected an integer or `omega`, found {}",
                                show(&t)
                            )));
                        }
                    };
                    p.expect_sym(';')?;
                    entries.push((child, mult, eline, ecol));
                }
                _ => return Err(p.err("expected `child` or `}`")),
            }
        }
        raw.push(RawClass { name, entries, line, col });
    }

    if raw.is_empty() {
        return Err(Error::Parse { line: 1, col: 1, msg: "a scheme declares at least one class".into() });
    }

    let names: Vec<String> = raw.iter().map(|c| c.name.clone()).collect();
    for (i, c) in raw.iter().enumerate() {
        if names[..i].contains(&c.name) {
            return Err(Error::Parse {
                line: c.line,
                col: c.col,
                msg: format!("duplicate class `{}`", c.name),
            });
        }
    }
    let lookup = |name: &str, line: usize, col: usize| {
        names.iter().position(|n| n == name).ok_or(Error::Parse {
            line,
            col,
            msg: format!("undeclared class `{name}`"),
        })
    };
    let root = lookup(&root_name, 1, 1).map_err(|_| {
        Error::Validation(format!("root references undeclared class `{root_name}`"))
    })?;
    let mut entries = Vec::new();
    for c in &raw {
        let mut es = Vec::new();
        for (child, mult, line, col) in &c.entries {
            let idx = lookup(child, *line, *col)?;
            if mult.is_zero() {
                return Err(Error::Validation(format!(
                    "zero multiplicity for child `{child}` of class `{}`",
                    c.name
                )));
            }
            es.push(Entry { child: idx, mult: *mult });
        }
        entries.push(es);
    }
    Scheme::new(names, entries, root)
}
