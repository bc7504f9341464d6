use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use super::{AppliedPerturbation, Graph};
use crate::error::{Error, Result};
use crate::rng;

/// What to do to a graph. `None` targets are drawn uniformly from the
/// perturbation seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PerturbationKind {
    Shadow(usize),
    DeleteEdge(Option<(usize, usize)>),
    PendantEdge(Option<usize>),
}

impl fmt::Display for PerturbationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PerturbationKind::Shadow(s) => write!(f, "shadow:{s}"),
            PerturbationKind::DeleteEdge(None) => f.write_str("delete"),
            PerturbationKind::DeleteEdge(Some((u, v))) => write!(f, "delete:{u}-{v}"),
            PerturbationKind::PendantEdge(None) => f.write_str("pendant"),
            PerturbationKind::PendantEdge(Some(u)) => write!(f, "pendant:{u}"),
        }
    }
}

impl FromStr for PerturbationKind {
    type Err = Error;

    /// Accepts `shadow:<s>`, `delete`, `delete:<u>-<v>`, `pendant` and
    /// `pendant:<u>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(alloc::format!("bad perturbation `{s}`"));
        let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a)),
            None => (s.trim(), None),
        };
        match (kind, arg) {
            ("shadow", Some(a)) => Ok(PerturbationKind::Shadow(num(a)?)),
            ("shadow", None) => Ok(PerturbationKind::Shadow(1)),
            ("delete", None) => Ok(PerturbationKind::DeleteEdge(None)),
            ("delete", Some(a)) => {
                let (u, v) = a.split_once('-').ok_or_else(bad)?;
                Ok(PerturbationKind::DeleteEdge(Some((num(u)?, num(v)?))))
            }
            ("pendant", None) => Ok(PerturbationKind::PendantEdge(None)),
            ("pendant", Some(a)) => Ok(PerturbationKind::PendantEdge(Some(num(a)?))),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Perturbation {
    pub kind: PerturbationKind,
    pub seed: u64,
}

impl Perturbation {
    pub fn new(kind: PerturbationKind, seed: u64) -> Self {
        Self { kind, seed }
    }

    pub fn shadow(count: usize) -> Self {
        Self::new(PerturbationKind::Shadow(count), 0)
    }

    pub fn delete_edge(u: usize, v: usize) -> Self {
        Self::new(PerturbationKind::DeleteEdge(Some((u, v))), 0)
    }

    pub fn pendant(u: usize) -> Self {
        Self::new(PerturbationKind::PendantEdge(Some(u)), 0)
    }
}

/// Applies `p` to `g`. The returned graph's metadata records the resolved
/// choice (which edge was deleted, where the pendant was attached).
pub fn apply_perturbation(g: &Graph, p: &Perturbation) -> Result<Graph> {
    let n = g.n();
    let mut meta = g.meta().clone();
    match p.kind {
        PerturbationKind::Shadow(count) => {
            if count == 0 {
                return Err(Error::InvalidParameter("shadow count must be >= 1".into()));
            }
            meta.perturbations.push(AppliedPerturbation::Shadow { count });
            Ok(Graph::from_sorted(n + count, g.edges().to_vec(), meta))
        }
        PerturbationKind::DeleteEdge(target) => {
            if g.edge_count() == 0 {
                return Err(Error::EmptyEdgeSet);
            }
            let index = match target {
                Some((a, b)) => {
                    for node in [a, b] {
                        if node >= n {
                            return Err(Error::NodeOutOfRange { node, n });
                        }
                    }
                    let key = (a.min(b), a.max(b));
                    g.edges()
                        .binary_search(&key)
                        .map_err(|_| Error::EdgeNotPresent(key.0, key.1))?
                }
                None => rng::stream(p.seed).gen_range(0..g.edge_count()),
            };
            let (u, v) = g.edges()[index];
            let mut edges = g.edges().to_vec();
            edges.remove(index);
            meta.perturbations.push(AppliedPerturbation::DeleteEdge { u, v });
            Ok(Graph::from_sorted(n, edges, meta))
        }
        PerturbationKind::PendantEdge(target) => {
            let attach = match target {
                Some(u) if u < n => u,
                Some(u) => return Err(Error::NodeOutOfRange { node: u, n }),
                None if n == 0 => return Err(Error::NodeOutOfRange { node: 0, n }),
                None => rng::stream(p.seed).gen_range(0..n),
            };
            let mut edges = g.edges().to_vec();
            // (attach, n) sorts after every existing edge starting at `attach`
            // and before every edge starting past it.
            let pos = edges.partition_point(|&e| e < (attach, n));
            edges.insert(pos, (attach, n));
            meta.perturbations
                .push(AppliedPerturbation::PendantEdge { attach, node: n });
            Ok(Graph::from_sorted(n + 1, edges, meta))
        }
    }
}

/// Every single-edge deletion of `g`, in edge-list order.
pub fn enumerate_edge_deletions(g: &Graph) -> Result<Vec<Graph>> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    g.edges()
        .iter()
        .map(|&(u, v)| apply_perturbation(g, &Perturbation::delete_edge(u, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, full_binary_tree, path};

    #[test]
    fn shadow_keeps_edges() {
        let g = complete(4);
        let h = apply_perturbation(&g, &Perturbation::shadow(2)).unwrap();
        assert_eq!((h.n(), h.edge_count()), (6, 6));
        assert_eq!(h.edges(), g.edges());
        assert_eq!(h.meta().perturbation_string().as_deref(), Some("shadow:2"));
    }

    #[test]
    fn delete_and_pendant() {
        let g = complete(4);
        let d = apply_perturbation(&g, &Perturbation::delete_edge(1, 0)).unwrap();
        assert_eq!((d.n(), d.edge_count()), (4, 5));
        assert!(!d.has_edge(0, 1));
        let p = apply_perturbation(&g, &Perturbation::pendant(0)).unwrap();
        assert_eq!((p.n(), p.edge_count()), (5, 7));
        assert_eq!(p.degrees()[4], 1);
        assert!(p.has_edge(0, 4));
        assert!(p.audit());
        assert_eq!(p.meta().perturbation_string().as_deref(), Some("pendant:0-4"));
    }

    #[test]
    fn errors() {
        let k1 = complete(1);
        assert_eq!(
            apply_perturbation(&k1, &Perturbation::new(PerturbationKind::DeleteEdge(None), 3)),
            Err(Error::EmptyEdgeSet)
        );
        let p3 = path(3);
        assert_eq!(
            apply_perturbation(&p3, &Perturbation::delete_edge(0, 2)),
            Err(Error::EdgeNotPresent(0, 2))
        );
        assert_eq!(
            apply_perturbation(&p3, &Perturbation::pendant(5)),
            Err(Error::NodeOutOfRange { node: 5, n: 3 })
        );
        assert!(enumerate_edge_deletions(&k1).is_err());
    }

    #[test]
    fn random_choice_is_seeded() {
        let g = full_binary_tree(3);
        for kind in [PerturbationKind::DeleteEdge(None), PerturbationKind::PendantEdge(None)] {
            let a = apply_perturbation(&g, &Perturbation::new(kind, 99)).unwrap();
            let b = apply_perturbation(&g, &Perturbation::new(kind, 99)).unwrap();
            assert_eq!(a, b);
            assert!(a.audit());
        }
    }

    #[test]
    fn deletions_of_small_graphs() {
        let k3 = enumerate_edge_deletions(&complete(3)).unwrap();
        assert_eq!(k3.len(), 3);
        assert!(k3.iter().all(|h| h.edge_count() == 2 && h.is_tree()));
        let p3 = enumerate_edge_deletions(&path(3)).unwrap();
        assert_eq!(p3.len(), 2);
        assert!(p3.iter().all(|h| h.edge_count() == 1 && h.isolated_count() == 1));
    }

    #[test]
    fn kind_parsing() {
        for s in ["shadow:2", "delete", "delete:0-1", "pendant", "pendant:3"] {
            assert_eq!(alloc::format!("{}", s.parse::<PerturbationKind>().unwrap()), s);
        }
        assert!("shadow:x".parse::<PerturbationKind>().is_err());
    }
}
