//! Finite directed graphs and their vertex matrices.
//!
//! Vertices and edges keep document order; every index used elsewhere in the
//! crate (paths, words, eigenvector entries) refers to that order.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// A directed edge between two vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// A finite directed graph. Multiple edges and loops are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDocument {
    vertices: Vec<String>,
    edges: Vec<EdgeDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDocument {
    id: String,
    src: String,
    dst: String,
}

impl Graph {
    /// Builds a graph from vertex ids and `(edge id, source id, target id)` triples.
    pub fn new<V, E, A, B, C>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (A, B, C)>,
        A: Into<String>,
        B: Into<String>,
        C: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(GraphError::NoVertices);
        }
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex {
                    id: v.clone(),
                    index: i,
                });
            }
        }

        let mut seen = HashSet::new();
        let mut built = Vec::new();
        for (i, (id, src, dst)) in edges.into_iter().enumerate() {
            let (id, src, dst): (String, String, String) = (id.into(), src.into(), dst.into());
            if !seen.insert(id.clone()) {
                return Err(GraphError::DuplicateEdge { id, index: i });
            }
            let lookup = |name: &String, field: &'static str| {
                index
                    .get(name)
                    .copied()
                    .ok_or_else(|| GraphError::DanglingEndpoint {
                        index: i,
                        field,
                        vertex: name.clone(),
                    })
            };
            let source = lookup(&src, "src")?;
            let target = lookup(&dst, "dst")?;
            built.push(Edge { id, source, target });
        }
        if built.is_empty() {
            return Err(GraphError::NoEdges);
        }

        let mut out_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in built.iter().enumerate() {
            out_edges[e.source].push(i);
        }
        Ok(Graph {
            vertices,
            edges: built,
            out_edges,
        })
    }

    /// Parses the JSON graph document
    /// `{"vertices": [...], "edges": [{"id", "src", "dst"}, ...]}`.
    pub fn from_json(document: &str) -> Result<Self, GraphError> {
        let doc: GraphDocument =
            serde_json::from_str(document).map_err(|e| GraphError::Malformed {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        Graph::new(
            doc.vertices,
            doc.edges.into_iter().map(|e| (e.id, e.src, e.dst)),
        )
    }

    pub fn to_json(&self) -> String {
        let doc = GraphDocument {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    id: e.id.clone(),
                    src: self.vertices[e.source].clone(),
                    dst: self.vertices[e.target].clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("graph document serializes")
    }

    /// One vertex `v` with `n` loops `e1..en`; its algebra is the Cuntz algebra O_n.
    pub fn cuntz(n: usize) -> Self {
        Graph::new(
            ["v"],
            (1..=n).map(|i| (format!("e{i}"), "v".to_string(), "v".to_string())),
        )
        .expect("n >= 1")
    }

    /// `n` vertices, each carrying a single loop (vertex matrix = identity).
    pub fn disjoint_leaves(n: usize) -> Self {
        Graph::new(
            (1..=n).map(|i| format!("v{i}")),
            (1..=n).map(|i| (format!("e{i}"), format!("v{i}"), format!("v{i}"))),
        )
        .expect("n >= 1")
    }

    /// Two vertices joined by `e1: v1 -> v2` and `e2: v2 -> v1`.
    pub fn two_cycle() -> Self {
        Graph::new(
            ["v1", "v2"],
            [
                ("e1", "v1", "v2"),
                ("e2", "v2", "v1"),
            ],
        )
        .expect("valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn source(&self, edge: usize) -> usize {
        self.edges[edge].source
    }

    pub fn target(&self, edge: usize) -> usize {
        self.edges[edge].target
    }

    /// Edge indices leaving vertex `v`, in document order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// `D(l, k)` = number of edges from `v_l` to `v_k`.
    pub fn vertex_matrix(&self) -> VertexMatrix {
        let m = self.vertices.len();
        let mut entries = vec![vec![0u64; m]; m];
        for e in &self.edges {
            entries[e.source][e.target] += 1;
        }
        VertexMatrix { entries }
    }

    /// Vertices that emit no edge.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.out_edges[v].is_empty())
            .collect()
    }

    /// True iff the source map is surjective.
    pub fn has_no_sink(&self) -> bool {
        self.out_edges.iter().all(|out| !out.is_empty())
    }

    /// Every vertex is the source or the target of some edge.
    ///
    /// This is deliberately the weak incidence condition used for the standing
    /// hypotheses, not graph-theoretic connectivity; see
    /// [`Graph::is_weakly_connected`] for the latter.
    pub fn is_connected(&self) -> bool {
        let mut touched = vec![false; self.vertex_count()];
        for e in &self.edges {
            touched[e.source] = true;
            touched[e.target] = true;
        }
        touched.into_iter().all(|t| t)
    }

    /// Ordinary weak connectivity: the underlying undirected graph is connected.
    pub fn is_weakly_connected(&self) -> bool {
        let m = self.vertex_count();
        let mut adj = vec![Vec::new(); m];
        for e in &self.edges {
            adj[e.source].push(e.target);
            adj[e.target].push(e.source);
        }
        bfs(&adj, 0).into_iter().all(|r| r)
    }

    /// Every vertex reaches every other vertex along a directed path.
    pub fn is_strongly_connected(&self) -> bool {
        let m = self.vertex_count();
        let mut fwd = vec![Vec::new(); m];
        let mut bwd = vec![Vec::new(); m];
        for e in &self.edges {
            fwd[e.source].push(e.target);
            bwd[e.target].push(e.source);
        }
        bfs(&fwd, 0).into_iter().all(|r| r) && bfs(&bwd, 0).into_iter().all(|r| r)
    }

    /// One vertex; its graph algebra is a Cuntz algebra.
    pub fn is_cuntz(&self) -> bool {
        self.vertex_count() == 1
    }

    /// Strongly connected components, returned in reverse topological order
    /// of the condensation (a component never has edges into a later one).
    pub fn strong_components(&self) -> Vec<Vec<usize>> {
        let m = self.vertex_count();
        let mut adj = vec![Vec::new(); m];
        for e in &self.edges {
            adj[e.source].push(e.target);
        }
        tarjan(&adj)
    }
}

fn bfs(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Iterative Tarjan over an adjacency list. Components come out sinks-first:
/// every component is emitted after all components it can reach.
pub(crate) fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let m = adj.len();
    let mut index = vec![usize::MAX; m];
    let mut low = vec![0; m];
    let mut on_stack = vec![false; m];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut out = Vec::new();

    for root in 0..m {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// The `m x m` edge-count matrix of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMatrix {
    entries: Vec<Vec<u64>>,
}

impl VertexMatrix {
    /// Wraps a square matrix of nonnegative integers.
    pub fn from_rows(entries: Vec<Vec<u64>>) -> Self {
        let m = entries.len();
        assert!(m >= 1, "vertex matrix must be nonempty");
        assert!(
            entries.iter().all(|r| r.len() == m),
            "vertex matrix must be square"
        );
        VertexMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.entries.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn total(&self) -> u64 {
        self.row_sums().iter().sum()
    }

    /// The common row sum, if every row sums to the same value.
    pub fn constant_row_sum(&self) -> Option<u64> {
        let sums = self.row_sums();
        let first = sums[0];
        sums.iter().all(|&s| s == first).then_some(first)
    }

    /// `D x` in floating point.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(x).map(|(&d, &xi)| d as f64 * xi).sum())
            .collect()
    }

    /// Restriction to the principal submatrix on `indices`.
    pub fn principal(&self, indices: &[usize]) -> VertexMatrix {
        VertexMatrix {
            entries: indices
                .iter()
                .map(|&i| indices.iter().map(|&j| self.entries[i][j]).collect())
                .collect(),
        }
    }

    /// `P D P^T` for the permutation sending index `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> VertexMatrix {
        let m = self.dim();
        let mut entries = vec![vec![0; m]; m];
        for i in 0..m {
            for j in 0..m {
                entries[perm[i]][perm[j]] = self.entries[i][j];
            }
        }
        VertexMatrix { entries }
    }
}
