//! Undirected simple graphs, the generator families and the perturbation
//! operators.
//!
//! Nodes are the contiguous labels `0..n`. Edges are stored once as `(u, v)`
//! with `u < v`, sorted lexicographically. Nodes introduced by a
//! perturbation always take the next free labels, so qubit `i` of a QAOA
//! circuit is node `i` of the graph before and after the perturbation.

mod generate;
mod perturb;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

pub use generate::{
    complete, cycle, empty, erdos_renyi, full_binary_tree, full_rary_tree, path, random_regular,
    star, REGULAR_RESTART_LIMIT,
};
pub use perturb::{apply_perturbation, enumerate_edge_deletions, Perturbation, PerturbationKind};

/// Generator family and the parameters it was built with.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Complete { n: usize },
    ErdosRenyi { n: usize, q: f64 },
    BinaryTree { height: usize },
    RaryTree { arity: usize, n: usize },
    RandomRegular { degree: usize, n: usize },
    Path { n: usize },
    Cycle { n: usize },
    Star { leaves: usize },
    Empty { n: usize },
    Custom,
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Complete { .. } => "complete",
            Family::ErdosRenyi { .. } => "erdos_renyi",
            Family::BinaryTree { .. } => "binary_tree",
            Family::RaryTree { .. } => "rary_tree",
            Family::RandomRegular { .. } => "regular",
            Family::Path { .. } => "path",
            Family::Cycle { .. } => "cycle",
            Family::Star { .. } => "star",
            Family::Empty { .. } => "empty",
            Family::Custom => "custom",
        }
    }
}

/// A perturbation as it was actually applied, with every random choice
/// resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AppliedPerturbation {
    /// `count` isolated nodes appended after the existing ones.
    Shadow { count: usize },
    /// Edge `(u, v)`, `u < v`, removed.
    DeleteEdge { u: usize, v: usize },
    /// New node `node` joined to `attach`.
    PendantEdge { attach: usize, node: usize },
}

impl fmt::Display for AppliedPerturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AppliedPerturbation::Shadow { count } => write!(f, "shadow:{count}"),
            AppliedPerturbation::DeleteEdge { u, v } => write!(f, "delete:{u}-{v}"),
            AppliedPerturbation::PendantEdge { attach, node } => {
                write!(f, "pendant:{attach}-{node}")
            }
        }
    }
}

impl FromStr for AppliedPerturbation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(alloc::format!("bad perturbation record `{s}`"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let pair = |rest: &str| -> Result<(usize, usize)> {
            let (a, b) = rest.split_once('-').ok_or_else(bad)?;
            Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
        };
        match kind {
            "shadow" => Ok(AppliedPerturbation::Shadow {
                count: rest.parse().map_err(|_| bad())?,
            }),
            "delete" => {
                let (u, v) = pair(rest)?;
                Ok(AppliedPerturbation::DeleteEdge { u, v })
            }
            "pendant" => {
                let (attach, node) = pair(rest)?;
                Ok(AppliedPerturbation::PendantEdge { attach, node })
            }
            _ => Err(bad()),
        }
    }
}

/// Provenance carried along with a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphMeta {
    pub family: Family,
    /// Generator seed; 0 for deterministic families.
    pub seed: u64,
    pub perturbations: Vec<AppliedPerturbation>,
}

impl GraphMeta {
    pub fn new(family: Family, seed: u64) -> Self {
        Self {
            family,
            seed,
            perturbations: Vec::new(),
        }
    }

    /// Comma-separated perturbation history, `None` for an unperturbed graph.
    pub fn perturbation_string(&self) -> Option<String> {
        if self.perturbations.is_empty() {
            return None;
        }
        let parts: Vec<String> = self
            .perturbations
            .iter()
            .map(|p| alloc::format!("{p}"))
            .collect();
        Some(parts.join(","))
    }

    pub fn parse_perturbations(s: &str) -> Result<Vec<AppliedPerturbation>> {
        s.split(',')
            .filter(|part| !part.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl Default for GraphMeta {
    fn default() -> Self {
        Self::new(Family::Custom, 0)
    }
}

/// Undirected simple graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    meta: GraphMeta,
}

impl Graph {
    /// Builds a graph from an arbitrary edge list.
    ///
    /// Edge orientation is normalized to `u < v` and the list is sorted.
    /// Self-loops, out-of-range endpoints and duplicate edges are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::with_meta(n, edges, GraphMeta::default())
    }

    pub fn with_meta(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        meta: GraphMeta,
    ) -> Result<Self> {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a, b));
            }
            for node in [a, b] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if list.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("duplicate edge".into()));
        }
        Ok(Self {
            n,
            edges: list,
            meta,
        })
    }

    /// Internal constructor for edge lists that already satisfy the invariants.
    pub(crate) fn from_sorted(n: usize, edges: Vec<(usize, usize)>, meta: GraphMeta) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(u, v)| u < v && v < n));
        Self { n, edges, meta }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn meta(&self) -> &GraphMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut GraphMeta {
        &mut self.meta
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    /// Checks every structural invariant: bounds, orientation, sortedness
    /// and the absence of duplicates.
    pub fn audit(&self) -> bool {
        self.edges.iter().all(|&(u, v)| u < v && v < self.n)
            && self.edges.windows(2).all(|w| w[0] < w[1])
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Sorted adjacency lists.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Row-major 0/1 adjacency matrix.
    pub fn adjacency(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = vec![0.0; n * n];
        for &(u, v) in &self.edges {
            a[u * n + v] = 1.0;
            a[v * n + u] = 1.0;
        }
        a
    }

    /// Adjacency rows as bit masks. Only valid for `n <= 64`.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "bit-mask adjacency limited to 64 nodes");
        let mut rows = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            rows[u] |= 1 << v;
            rows[v] |= 1 << u;
        }
        rows
    }

    pub fn isolated_count(&self) -> usize {
        self.degrees().iter().filter(|&&d| d == 0).count()
    }

    /// Common degree when every node has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        match deg.first() {
            None => Some(0),
            Some(&d) if deg.iter().all(|&x| x == d) => Some(d),
            Some(_) => None,
        }
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edges.len() == self.n - 1 && self.is_connected()
    }

    /// Induced subgraph on the nodes not in `removed`, relabeled in
    /// increasing order of the surviving labels.
    pub fn remove_nodes(&self, removed: &[usize]) -> Result<Graph> {
        let mut gone = vec![false; self.n];
        for &u in removed {
            if u >= self.n {
                return Err(Error::NodeOutOfRange { node: u, n: self.n });
            }
            gone[u] = true;
        }
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for u in 0..self.n {
            if !gone[u] {
                label[u] = next;
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| !gone[u] && !gone[v])
            .map(|&(u, v)| (label[u], label[v]))
            .collect();
        // Relabeling is monotone, so the filtered list stays sorted.
        Ok(Graph::from_sorted(next, edges, GraphMeta::default()))
    }

    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_sorted(self.n, edges, GraphMeta::default())
    }

    /// Image of the graph under `perm` (node `u` becomes `perm[u]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        Graph::with_meta(
            self.n,
            self.edges.iter().map(|&(u, v)| (perm[u], perm[v])),
            self.meta.clone(),
        )
    }

    /// Disjoint union; the nodes of `other` are shifted past this graph's.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph::from_sorted(self.n + other.n, edges, GraphMeta::default())
    }
}
