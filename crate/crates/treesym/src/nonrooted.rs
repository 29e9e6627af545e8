//! Non-rooted trees presented as edge-indexed graphs.
//!
//! A connected finite graph (loops and parallel edges allowed) with a
//! positive index at each edge end presents a non-rooted tree as its
//! universal cover: a vertex lying over `w` meets, for each end `f` at `w`,
//! exactly `i(f)` edges covering `f`'s edge. The index records how many
//! equivalent edges the stabilizer of a vertex sees at each end, so the two
//! ends of a loop belong to one orbit and must carry equal indices.
//!
//! Rooting the cover at a vertex class turns the stabilizer questions into
//! rooted-scheme questions: the stabilizer of a vertex is the automorphism
//! group of the tree rooted there. Conditions equivalent to the fixed-point
//! property of all vertex stabilizers are decided through that reduction.
//!
//! Textual format (`.eig`, `#` starts a line comment):
//!
//! ```text
//! vertex a;
//! vertex b;
//! edge a -- b [2, 3];   # first index = end at a
//! ```

use serde::Serialize;

use crate::acl::{finite_part, universal_acl_finite};
use crate::extnat::ExtNat;
use crate::scheme::{Entry, Scheme};
use crate::verdict::{decide_ample_generics, decide_strong_cofinality, Mode};
use crate::{Error, Result};

/// An edge with one index per end; `index_a` belongs to the end at `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub index_a: ExtNat,
    pub index_b: ExtNat,
}

impl GraphEdge {
    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    fn touches(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }
}

/// A validated edge-indexed graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeIndexedGraph {
    names: Vec<String>,
    edges: Vec<GraphEdge>,
}

impl EdgeIndexedGraph {
    pub fn new(names: Vec<String>, edges: Vec<GraphEdge>) -> Result<EdgeIndexedGraph> {
        if names.is_empty() {
            return Err(Error::Validation("a graph needs at least one vertex".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::Validation(format!("duplicate vertex `{name}`")));
            }
        }
        for e in &edges {
            if e.a >= names.len() || e.b >= names.len() {
                return Err(Error::Validation("edge endpoint out of range".into()));
            }
            if e.index_a.is_zero() || e.index_b.is_zero() {
                return Err(Error::Validation("zero edge index".into()));
            }
            if e.is_loop() && e.index_a != e.index_b {
                return Err(Error::Validation(format!(
                    "the two written indices of a loop at `{}` denote the same edge orbit \
                     and must agree",
                    names[e.a]
                )));
            }
        }
        let g = EdgeIndexedGraph { names, edges };
        if !g.is_connected() {
            return Err(Error::Validation("the graph is disconnected".into()));
        }
        Ok(g)
    }

    pub fn parse(text: &str) -> Result<EdgeIndexedGraph> {
        parse_eig(text)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.names.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for w in [e.a, e.b] {
                    if e.touches(v) && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Rooted scheme of the universal cover over `vertex`. Classes are
    /// directed arrivals "came into `w` through edge `k`"; the departure
    /// back through the arriving edge loses one copy (the parent), and an
    /// entry is omitted when nothing remains.
    pub fn root_at(&self, vertex: usize) -> Result<Scheme> {
        if vertex >= self.names.len() {
            return Err(Error::Validation("root vertex out of range".into()));
        }
        // arrival classes: (edge, target vertex); loops contribute one
        #[derive(Clone, Copy, PartialEq)]
        struct Arrival {
            edge: usize,
            at: usize,
        }
        let mut arrivals: Vec<Arrival> = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            arrivals.push(Arrival { edge: k, at: e.b });
            if !e.is_loop() {
                arrivals.push(Arrival { edge: k, at: e.a });
            }
        }
        let arrival_index =
            |edge: usize, at: usize| arrivals.iter().position(|a| a.edge == edge && a.at == at);

        // children of a position at vertex w that arrived through `via`
        let children = |w: usize, via: Option<usize>| -> Vec<(usize, ExtNat)> {
            let mut out = Vec::new();
            for (k, e) in self.edges.iter().enumerate() {
                // one entry per end at w; a loop has one identified end
                let mut ends: Vec<(usize, ExtNat)> = Vec::new(); // (target, departure index)
                if e.is_loop() {
                    if e.a == w {
                        ends.push((e.a, e.index_a));
                    }
                } else {
                    if e.a == w {
                        ends.push((e.b, e.index_a));
                    }
                    if e.b == w {
                        ends.push((e.a, e.index_b));
                    }
                }
                for (target, idx) in ends {
                    let mult = if via == Some(k) {
                        idx.minus_finite(1).expect("positive index")
                    } else {
                        idx
                    };
                    if mult.is_zero() {
                        continue;
                    }
                    let class = arrival_index(k, target).expect("arrival exists");
                    out.push((class, mult));
                }
            }
            out
        };

        // reachable arrivals from the root position
        let mut reachable = vec![false; arrivals.len()];
        let mut stack: Vec<usize> = children(vertex, None).iter().map(|&(c, _)| c).collect();
        for &c in &stack {
            reachable[c] = true;
        }
        while let Some(c) = stack.pop() {
            let arr = arrivals[c];
            for (child, _) in children(arr.at, Some(arr.edge)) {
                if !reachable[child] {
                    reachable[child] = true;
                    stack.push(child);
                }
            }
        }

        // class table: root first, then reachable arrivals in order
        let mut names = vec![format!("at_{}", self.names[vertex])];
        let mut class_of_arrival = vec![usize::MAX; arrivals.len()];
        for (i, arr) in arrivals.iter().enumerate() {
            if reachable[i] {
                class_of_arrival[i] = names.len();
                names.push(format!("in{}_{}", arr.edge, self.names[arr.at]));
            }
        }
        let mut entries: Vec<Vec<Entry>> = Vec::with_capacity(names.len());
        entries.push(
            children(vertex, None)
                .into_iter()
                .map(|(c, mult)| Entry { child: class_of_arrival[c], mult })
                .collect(),
        );
        for (i, arr) in arrivals.iter().enumerate() {
            if reachable[i] {
                entries.push(
                    children(arr.at, Some(arr.edge))
                        .into_iter()
                        .map(|(c, mult)| Entry { child: class_of_arrival[c], mult })
                        .collect(),
                );
            }
        }
        Scheme::new(names, entries, 0)
    }
}

/// Per-vertex analysis of the rooted scheme.
#[derive(Debug, Clone, Serialize)]
pub struct VertexAnalysis {
    pub vertex: String,
    /// Canonical text of the scheme rooted at this vertex class.
    pub rooted_scheme: String,
    /// Universal closure-finiteness of the rooted scheme, per mode.
    pub universal_paper: bool,
    pub universal_reduced: bool,
    /// Closure-of-empty finiteness of the rooted scheme, per mode: the
    /// singleton reduction.
    pub singleton_paper: bool,
    pub singleton_reduced: bool,
    pub degenerate: bool,
}

/// Aggregate answers to the three equivalent stabilizer conditions.
#[derive(Debug, Clone, Serialize)]
pub struct NonRootedReport {
    pub vertices: Vec<VertexAnalysis>,
    /// Conjunction over vertex classes of the singleton-based checks.
    pub condition2_singleton_paper: bool,
    pub condition2_singleton_reduced: bool,
    /// Conjunction over vertex classes of the universal checks per rooting.
    pub condition2_universal_paper: bool,
    pub condition2_universal_reduced: bool,
    /// The single answer shared by the three equivalent conditions.
    pub conditions_hold_paper: bool,
    pub conditions_hold_reduced: bool,
    pub degenerate: bool,
    pub conditions: Vec<String>,
}

/// Decides the stabilizer conditions for every vertex class and aggregates
/// them through the singleton reduction.
pub fn decide_rigidity_conditions(g: &EdgeIndexedGraph) -> Result<NonRootedReport> {
    let mut vertices = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let scheme = g.root_at(v)?;
        let universal_paper = universal_acl_finite(&scheme).finite;
        let universal_reduced = decide_ample_generics(&scheme, Mode::Reduced).answer;
        let singleton_paper = finite_part(&scheme).finite;
        let singleton_reduced = decide_strong_cofinality(&scheme, Mode::Reduced).answer;
        vertices.push(VertexAnalysis {
            vertex: g.vertex_name(v).to_string(),
            rooted_scheme: scheme.to_text(),
            universal_paper,
            universal_reduced,
            singleton_paper,
            singleton_reduced,
            degenerate: universal_paper != universal_reduced
                || singleton_paper != singleton_reduced,
        });
    }
    let all = |f: fn(&VertexAnalysis) -> bool| vertices.iter().all(f);
    let report = NonRootedReport {
        condition2_singleton_paper: all(|v| v.singleton_paper),
        condition2_singleton_reduced: all(|v| v.singleton_reduced),
        condition2_universal_paper: all(|v| v.universal_paper),
        condition2_universal_reduced: all(|v| v.universal_reduced),
        conditions_hold_paper: all(|v| v.universal_paper),
        conditions_hold_reduced: all(|v| v.universal_reduced),
        degenerate: vertices.iter().any(|v| v.degenerate),
        conditions: vec![
            "every vertex stabilizer has the fixed-point property on trees".to_string(),
            "the algebraic closure of every finite non-empty set is finite".to_string(),
            "every vertex stabilizer contains an open subgroup with ample generics".to_string(),
        ],
        vertices,
    };
    Ok(report)
}

// ---------------------------------------------------------------------------
// .eig parsing
// ---------------------------------------------------------------------------

fn parse_eig(text: &str) -> Result<EdgeIndexedGraph> {
    let mut names: Vec<String> = Vec::new();
    let mut raw_edges: Vec<(String, String, ExtNat, ExtNat, usize)> = Vec::new();

    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: lineno + 1, col: 1, msg };
        let line = line
            .strip_suffix(';')
            .ok_or_else(|| err("missing trailing `;`".to_string()))?
            .trim();
        if let Some(rest) = line.strip_prefix("vertex ") {
            let name = rest.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(err(format!("bad vertex name `{name}`")));
            }
            names.push(name.to_string());
        } else if let Some(rest) = line.strip_prefix("edge ") {
            // IDENT -- IDENT [ mult , mult ]
            let (endpoints, idx) = rest
                .split_once('[')
                .ok_or_else(|| err("missing `[index, index]`".to_string()))?;
            let idx = idx
                .trim()
                .strip_suffix(']')
                .ok_or_else(|| err("missing closing `]`".to_string()))?;
            let (a, b) = endpoints
                .split_once("--")
                .ok_or_else(|| err("missing `--` between endpoints".to_string()))?;
            let (ia, ib) = idx
                .split_once(',')
                .ok_or_else(|| err("expected two comma-separated indices".to_string()))?;
            let parse_mult = |s: &str| -> Result<ExtNat> {
                s.trim().parse::<ExtNat>().map_err(|e| err(e))
            };
            raw_edges.push((
                a.trim().to_string(),
                b.trim().to_string(),
                parse_mult(ia)?,
                parse_mult(ib)?,
                lineno + 1,
            ));
        } else {
            return Err(err(format!("expected `vertex` or `edge`, found `{line}`")));
        }
    }

    let mut edges = Vec::with_capacity(raw_edges.len());
    for (a, b, ia, ib, lineno) in raw_edges {
        let find = |name: &str| -> Result<usize> {
            names.iter().position(|n| n == name).ok_or(Error::Parse {
                line: lineno,
                col: 1,
                msg: format!("undeclared vertex `{name}`"),
            })
        };
        edges.push(GraphEdge { a: find(&a)?, b: find(&b)?, index_a: ia, index_b: ib });
    }
    EdgeIndexedGraph::new(names, edges)
}

impl Serialize for EdgeIndexedGraph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct EdgeRepr<'a> {
            a: &'a str,
            b: &'a str,
            index_a: ExtNat,
            index_b: ExtNat,
        }
        let mut st = ser.serialize_struct("EdgeIndexedGraph", 2)?;
        st.serialize_field("vertices", &self.names)?;
        let edges: Vec<EdgeRepr> = self
            .edges
            .iter()
            .map(|e| EdgeRepr {
                a: &self.names[e.a],
                b: &self.names[e.b],
                index_a: e.index_a,
                index_b: e.index_b,
            })
            .collect();
        st.serialize_field("edges", &edges)?;
        st.end()
    }
}
