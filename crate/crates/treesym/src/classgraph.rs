//! Internal analyses on the canonical class graph: reachability, cycle
//! search in the finite-multiplicity subgraph, and nontrivial-entry
//! decorations. Shared by the closure and verdict modules.

use crate::canon::{canonical_form, CanonicalScheme};
use crate::extnat::{ExtNat, Fin};
use crate::scheme::{Address, Scheme};

/// Canonical class graph: one node per canonical class, merged edges with
/// total multiplicities.
#[derive(Debug, Clone)]
pub(crate) struct ClassGraph {
    pub canon: CanonicalScheme,
    pub root: usize,
    /// `edges[c]` = (child class, total multiplicity), in canonical order.
    pub edges: Vec<Vec<(usize, ExtNat)>>,
}

impl ClassGraph {
    pub fn build(s: &Scheme) -> ClassGraph {
        let canon = canonical_form(s);
        let cs = &canon.scheme;
        let edges = (0..cs.class_count())
            .map(|c| cs.entries(c).iter().map(|e| (e.child, e.mult)).collect())
            .collect();
        ClassGraph { root: canon.scheme.root(), canon, edges }
    }

    pub fn class_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, c: usize) -> &str {
        self.canon.scheme.class_name(c)
    }

    /// Classes reachable from `from` (inclusive). `finite_only` restricts
    /// the walk to finite-multiplicity edges.
    pub fn reachable(&self, from: usize, finite_only: bool) -> Vec<bool> {
        let mut seen = vec![false; self.class_count()];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(c) = stack.pop() {
            for &(child, mult) in &self.edges[c] {
                if finite_only && !mult.is_finite() {
                    continue;
                }
                if !seen[child] {
                    seen[child] = true;
                    stack.push(child);
                }
            }
        }
        seen
    }

    /// All simple cycles of the finite-multiplicity subgraph restricted to
    /// `within`, each listed once, rotated to start at its least class, and
    /// sorted lexicographically by class sequence.
    pub fn finite_cycles(&self, within: &[bool]) -> Vec<Vec<usize>> {
        let n = self.class_count();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if !within[start] {
                continue;
            }
            // simple paths visiting only classes >= start
            let mut path = vec![start];
            let mut on_path = vec![false; n];
            on_path[start] = true;
            self.cycle_dfs(start, start, within, &mut path, &mut on_path, &mut cycles);
        }
        cycles.sort();
        cycles.dedup();
        cycles
    }

    fn cycle_dfs(
        &self,
        start: usize,
        at: usize,
        within: &[bool],
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        cycles: &mut Vec<Vec<usize>>,
    ) {
        for &(child, mult) in &self.edges[at] {
            if !mult.is_finite() {
                continue;
            }
            if child == start {
                cycles.push(path.clone());
                continue;
            }
            if child < start || !within[child] || on_path[child] {
                continue;
            }
            path.push(child);
            on_path[child] = true;
            self.cycle_dfs(start, child, within, path, on_path, cycles);
            on_path[child] = false;
            path.pop();
        }
    }

    /// Least finite-multiplicity entry with multiplicity >= 2 reachable from
    /// `from` through finite-multiplicity edges: returns the connecting path
    /// (classes from `from` to the entry's parent) and the entry itself.
    pub fn nontrivial_decoration(&self, from: usize) -> Option<(Vec<usize>, usize, usize, u64)> {
        // BFS by path length, visiting classes in canonical order
        let n = self.class_count();
        let mut prev: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut frontier = vec![from];
        loop {
            // check the current frontier for a qualifying entry
            let mut best: Option<(Vec<usize>, usize, usize, u64)> = None;
            for &c in &frontier {
                for &(child, mult) in &self.edges[c] {
                    if let Fin(m) = mult {
                        if m >= 2 {
                            let mut path = vec![c];
                            let mut cur = c;
                            while let Some(p) = prev[cur] {
                                path.push(p);
                                cur = p;
                            }
                            path.reverse();
                            let cand = (path, c, child, m);
                            if best.as_ref().map_or(true, |b| cand < *b) {
                                best = Some(cand);
                            }
                        }
                    }
                }
            }
            if best.is_some() {
                return best;
            }
            let mut next = Vec::new();
            for &c in &frontier {
                for &(child, mult) in &self.edges[c] {
                    if mult.is_finite() && !seen[child] {
                        seen[child] = true;
                        prev[child] = Some(c);
                        next.push(child);
                    }
                }
            }
            if next.is_empty() {
                return None;
            }
            frontier = next;
        }
    }

    /// Shortest path of classes from `a` to `b` along edges of the selected
    /// kind, inclusive on both ends. Deterministic: BFS in canonical order.
    pub fn class_path(&self, a: usize, b: usize, finite_only: bool) -> Option<Vec<usize>> {
        let n = self.class_count();
        let mut prev: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[a] = true;
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(c) = queue.pop_front() {
            if c == b {
                let mut path = vec![b];
                let mut cur = b;
                while let Some(p) = prev[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &(child, mult) in &self.edges[c] {
                if finite_only && !mult.is_finite() {
                    continue;
                }
                if !seen[child] {
                    seen[child] = true;
                    prev[child] = Some(c);
                    queue.push_back(child);
                }
            }
        }
        None
    }
}

/// Shortest address (in the user's declared coordinates of `s`) of a node
/// whose canonical class is `target`. Copy indices are always zero.
pub(crate) fn shortest_address_of_canonical_class(
    s: &Scheme,
    graph: &ClassGraph,
    target: usize,
) -> Option<Address> {
    let n = s.class_count();
    let mut prev: Vec<Option<(usize, u32)>> = vec![None; n]; // (class, entry index)
    let mut seen = vec![false; n];
    seen[s.root()] = true;
    let mut queue = std::collections::VecDeque::from([s.root()]);
    while let Some(c) = queue.pop_front() {
        if graph.canon.class_of[c] == target {
            let mut steps = Vec::new();
            let mut cur = c;
            while let Some((p, entry)) = prev[cur] {
                steps.push(crate::scheme::Step { entry, copy: 0 });
                cur = p;
            }
            steps.reverse();
            return Some(Address { steps });
        }
        for (ei, e) in s.entries(c).iter().enumerate() {
            if !seen[e.child] {
                seen[e.child] = true;
                prev[e.child] = Some((c, ei as u32));
                queue.push_back(e.child);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(text: &str) -> ClassGraph {
        ClassGraph::build(&Scheme::parse(text).unwrap())
    }

    #[test]
    fn binary_self_loop_is_a_cycle() {
        let g = graph("root=v; class v { child v * 2; }");
        let within = g.reachable(g.root, true);
        assert_eq!(g.finite_cycles(&within), vec![vec![0]]);
    }

    #[test]
    fn star_has_no_finite_cycle() {
        let g = graph("root=r; class r { child v * omega; } class v { }");
        let within = g.reachable(g.root, true);
        assert!(g.finite_cycles(&within).is_empty());
        // and the omega edge is not walkable in finite-only mode
        assert_eq!(within.iter().filter(|&&b| b).count(), 1);
    }

    #[test]
    fn decoration_found_through_finite_path() {
        // v -> v (mult 1) with a pair entry hanging off v
        let g = graph("root=v; class v { child v * 1; child w * 2; } class w { }");
        let (path, parent, _child, m) = g.nontrivial_decoration(g.root).unwrap();
        assert_eq!(path, vec![g.root]);
        assert_eq!(parent, g.root);
        assert_eq!(m, 2);
    }

    #[test]
    fn shortest_address_reaches_cycle_class() {
        let s = Scheme::parse("root=r; class r { child v * omega; } class v { child v * 2; }")
            .unwrap();
        let g = ClassGraph::build(&s);
        let v_canon = g.canon.class_of[1];
        let addr = shortest_address_of_canonical_class(&s, &g, v_canon).unwrap();
        assert_eq!(addr.to_string(), "e0.c0");
    }
}
