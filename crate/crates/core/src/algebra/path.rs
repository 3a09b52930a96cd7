use std::cmp::Ordering;

use crate::graph::Graph;

/// A composable edge sequence. Empty paths remember the vertex they sit at.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    source: usize,
    target: usize,
    edges: Vec<usize>,
}

impl Path {
    /// The empty path at vertex `v`.
    pub fn empty(v: usize) -> Self {
        Path {
            source: v,
            target: v,
            edges: Vec::new(),
        }
    }

    /// A path of length 1.
    pub fn edge(g: &Graph, e: usize) -> Self {
        Path {
            source: g.source(e),
            target: g.target(e),
            edges: vec![e],
        }
    }

    /// The nonempty path through `edges`, or `None` if empty or not composable.
    pub fn new(g: &Graph, edges: Vec<usize>) -> Option<Self> {
        let (&first, &last) = (edges.first()?, edges.last()?);
        if edges.iter().any(|&e| e >= g.edge_count()) {
            return None;
        }
        if edges
            .windows(2)
            .any(|pair| g.target(pair[0]) != g.source(pair[1]))
        {
            return None;
        }
        Some(Path {
            source: g.source(first),
            target: g.target(last),
            edges,
        })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.source == other.source && other.edges.starts_with(&self.edges)
    }

    /// `self` followed by `next`; requires `t(self) = s(next)`.
    pub fn concat(&self, next: &Path) -> Path {
        debug_assert_eq!(self.target, next.source, "paths are not composable");
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&next.edges);
        Path {
            source: self.source,
            target: next.target,
            edges,
        }
    }

    /// The remainder after removing `prefix`; requires `prefix.is_prefix_of(self)`.
    pub fn strip_prefix(&self, prefix: &Path) -> Path {
        debug_assert!(prefix.is_prefix_of(self));
        Path {
            source: prefix.target,
            target: self.target,
            edges: self.edges[prefix.len()..].to_vec(),
        }
    }

    /// `self` followed by the single edge `e`; requires `s(e) = t(self)`.
    pub fn push(&self, g: &Graph, e: usize) -> Path {
        debug_assert_eq!(g.source(e), self.target);
        let mut edges = self.edges.clone();
        edges.push(e);
        Path {
            source: self.source,
            target: g.target(e),
            edges,
        }
    }

    /// Dot-separated edge ids, e.g. `e1.e2`.
    pub fn render(&self, g: &Graph) -> String {
        self.edges
            .iter()
            .map(|&e| g.edge(e).id.as_str())
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.edges.cmp(&other.edges))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All paths of length `k` in canonical order (empty paths per vertex when `k = 0`).
pub fn paths_of_length(g: &Graph, k: usize) -> Vec<Path> {
    let mut level: Vec<Path> = (0..g.vertex_count()).map(Path::empty).collect();
    for _ in 0..k {
        level = level
            .iter()
            .flat_map(|p| g.out_edges(p.target()).iter().map(|&e| p.push(g, e)))
            .collect();
    }
    level.sort();
    level
}

/// All paths of length at most `k`, shortest first.
pub fn paths_up_to(g: &Graph, k: usize) -> Vec<Path> {
    (0..=k).flat_map(|l| paths_of_length(g, l)).collect()
}
