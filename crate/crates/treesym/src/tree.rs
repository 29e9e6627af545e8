//! Explicit finite rooted trees: the substrate of the brute-force oracle and
//! of depth-truncated unfoldings of schemes.
//!
//! Nodes are numbered so that every parent precedes its children; node `0`
//! is the root and is its own parent. Each node carries a `u32` label; an
//! unlabeled tree has all labels zero, which makes every pair of isomorphic
//! sibling subtrees interchangeable.

use std::collections::BTreeSet;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTree {
    parents: Vec<u32>,
    children: Vec<Vec<u32>>,
    labels: Vec<u32>,
    depths: Vec<u32>,
}

impl FiniteTree {
    /// Builds a tree from a parent vector in parent-first order:
    /// `parents[0] == 0` and `parents[i] < i` for `i > 0`.
    pub fn from_parents(parents: Vec<u32>, labels: Option<Vec<u32>>) -> Result<FiniteTree> {
        if parents.is_empty() {
            return Err(Error::Validation("a tree needs at least a root".into()));
        }
        if parents[0] != 0 {
            return Err(Error::Validation("node 0 must be the root (its own parent)".into()));
        }
        for (i, &p) in parents.iter().enumerate().skip(1) {
            if p as usize >= i {
                return Err(Error::Validation(format!(
                    "node {i} has parent {p}; nodes must be listed parent-first"
                )));
            }
        }
        let labels = match labels {
            Some(l) if l.len() != parents.len() => {
                return Err(Error::Validation("label vector length mismatch".into()));
            }
            Some(l) => l,
            None => vec![0; parents.len()],
        };
        let n = parents.len();
        let mut children = vec![Vec::new(); n];
        let mut depths = vec![0u32; n];
        for i in 1..n {
            let p = parents[i] as usize;
            children[p].push(i as u32);
            depths[i] = depths[p] + 1;
        }
        Ok(FiniteTree { parents, children, labels, depths })
    }

    /// Parses a balanced-parenthesis literal, e.g. `(()())`. One node per
    /// `(`, parent = enclosing parenthesis; whitespace is ignored.
    pub fn parse(text: &str) -> Result<FiniteTree> {
        let mut parents: Vec<u32> = Vec::new();
        let mut stack: Vec<u32> = Vec::new();
        let mut line = 1usize;
        let mut col = 0usize;
        for ch in text.chars() {
            if ch == '\n' {
                line += 1;
                col = 0;
                continue;
            }
            col += 1;
            match ch {
                '(' => {
                    let id = parents.len() as u32;
                    if stack.is_empty() && id > 0 {
                        return Err(Error::Parse {
                            line,
                            col,
                            msg: "a finite tree literal has a single root".into(),
                        });
                    }
                    parents.push(*stack.last().unwrap_or(&id));
                    stack.push(id);
                }
                ')' => {
                    if stack.pop().is_none() {
                        return Err(Error::Parse { line, col, msg: "unbalanced `)`".into() });
                    }
                }
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::Parse {
                        line,
                        col,
                        msg: format!("unexpected character `{c}` in tree literal"),
                    });
                }
            }
        }
        if !stack.is_empty() {
            return Err(Error::Parse { line, col: col + 1, msg: "unbalanced `(`".into() });
        }
        if parents.is_empty() {
            return Err(Error::Parse { line, col: col + 1, msg: "empty tree literal".into() });
        }
        FiniteTree::from_parents(parents, None)
    }

    pub fn node_count(&self) -> usize {
        self.parents.len()
    }

    pub fn parent(&self, v: u32) -> u32 {
        self.parents[v as usize]
    }

    pub fn children(&self, v: u32) -> &[u32] {
        &self.children[v as usize]
    }

    pub fn label(&self, v: u32) -> u32 {
        self.labels[v as usize]
    }

    pub fn depth(&self, v: u32) -> u32 {
        self.depths[v as usize]
    }

    pub fn height(&self) -> u32 {
        self.depths.iter().copied().max().unwrap_or(0)
    }

    /// Nodes at exactly depth `d`, ascending.
    pub fn nodes_at_depth(&self, d: u32) -> Vec<u32> {
        (0..self.node_count() as u32).filter(|&v| self.depths[v as usize] == d).collect()
    }

    /// Preorder listing of the subtree rooted at `v`.
    pub fn subtree(&self, v: u32) -> Vec<u32> {
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            let u = out[i];
            out.extend_from_slice(self.children(u));
            i += 1;
        }
        out
    }

    /// Smallest superset of `set ∪ {root}` closed under the parent function.
    pub fn prefix_closure(&self, set: &BTreeSet<u32>) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        out.insert(0);
        for &v in set {
            let mut u = v;
            while out.insert(u) {
                u = self.parent(u);
            }
        }
        out
    }

    pub fn is_prefix_closed(&self, set: &BTreeSet<u32>) -> bool {
        set.iter().all(|&v| v == 0 || set.contains(&self.parent(v)))
    }

    /// Stable structural hash of (parents, labels); used to detect mixing
    /// automorphisms of different trees.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x100_0000_01b3);
        };
        for &p in &self.parents {
            eat(p as u64);
        }
        eat(u64::MAX);
        for &l in &self.labels {
            eat(l as u64);
        }
        h
    }

    /// Same shape with all labels erased.
    pub fn forget_labels(&self) -> FiniteTree {
        FiniteTree {
            parents: self.parents.clone(),
            children: self.children.clone(),
            labels: vec![0; self.node_count()],
            depths: self.depths.clone(),
        }
    }
}
