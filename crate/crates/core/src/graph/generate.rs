use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Family, Graph, GraphMeta};
use crate::error::{Error, Result};
use crate::rng;

/// Restart budget of the pairing-model regular-graph generator.
pub const REGULAR_RESTART_LIMIT: usize = 10_000;

fn build(n: usize, edges: Vec<(usize, usize)>, family: Family, seed: u64) -> Graph {
    Graph::from_sorted(n, edges, GraphMeta::new(family, seed))
}

/// `K_n`. `K_0` is the null graph and `K_1` a single isolated node.
pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    build(n, edges, Family::Complete { n }, 0)
}

/// `n` isolated nodes.
pub fn empty(n: usize) -> Graph {
    build(n, Vec::new(), Family::Empty { n }, 0)
}

/// Path on `n` nodes `0 - 1 - ... - n-1`.
pub fn path(n: usize) -> Graph {
    let edges = (1..n).map(|v| (v - 1, v)).collect();
    build(n, edges, Family::Path { n }, 0)
}

/// Cycle on `n >= 3` nodes.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a simple cycle needs at least three nodes");
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    edges.push((0, n - 1));
    edges.sort_unstable();
    build(n, edges, Family::Cycle { n }, 0)
}

/// Star `K_{1,leaves}` with the center at node 0.
pub fn star(leaves: usize) -> Graph {
    let edges = (1..=leaves).map(|v| (0, v)).collect();
    build(leaves + 1, edges, Family::Star { leaves }, 0)
}

/// Erdős–Rényi `G(n, q)`: every pair `u < v`, visited in lexicographic
/// order, is kept when the next uniform draw in `[0, 1)` is below `q`.
///
/// Connectivity is not enforced.
pub fn erdos_renyi(n: usize, q: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(alloc::format!(
            "edge probability {q} outside [0, 1]"
        )));
    }
    let mut rng = rng::stream(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < q {
                edges.push((u, v));
            }
        }
    }
    Ok(build(n, edges, Family::ErdosRenyi { n, q }, seed))
}

/// Rooted full binary tree of height `h` in level order (root 0, children of
/// `i` at `2i+1`, `2i+2`): `2^(h+1) - 1` nodes.
pub fn full_binary_tree(height: usize) -> Graph {
    let n = (1usize << (height + 1)) - 1;
    let edges = (1..n).map(|i| ((i - 1) / 2, i)).collect();
    build(n, edges, Family::BinaryTree { height }, 0)
}

/// Level-order filled `arity`-ary tree on exactly `n` nodes: node `i > 0`
/// hangs from `(i - 1) / arity`.
pub fn full_rary_tree(arity: usize, n: usize) -> Result<Graph> {
    if arity < 2 || n == 0 {
        return Err(Error::InvalidParameter(alloc::format!(
            "r-ary tree needs arity >= 2 and n >= 1, got arity {arity}, n {n}"
        )));
    }
    let edges = (1..n).map(|i| ((i - 1) / arity, i)).collect();
    Ok(build(n, edges, Family::RaryTree { arity, n }, 0))
}

/// Uniform-ish random `degree`-regular simple graph via the pairing model.
///
/// `degree` stubs per node are shuffled and paired consecutively; a pairing
/// with a self-loop or a repeated edge is thrown away and the whole
/// construction restarts, up to [`REGULAR_RESTART_LIMIT`] times.
pub fn random_regular(degree: usize, n: usize, seed: u64) -> Result<Graph> {
    if (degree * n) % 2 == 1 || (n > 0 && degree >= n) || (n == 0 && degree > 0) {
        return Err(Error::InfeasibleDegreeSequence { degree, n });
    }
    let family = Family::RandomRegular { degree, n };
    let mut rng = rng::stream(seed);
    let mut stubs: Vec<usize> = (0..n)
        .flat_map(|u| core::iter::repeat(u).take(degree))
        .collect();
    for _ in 0..REGULAR_RESTART_LIMIT {
        stubs.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = stubs
            .chunks_exact(2)
            .map(|pair| (pair[0].min(pair[1]), pair[0].max(pair[1])))
            .collect();
        if edges.iter().any(|&(u, v)| u == v) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Ok(build(n, edges, family, seed));
    }
    Err(Error::RestartLimit(REGULAR_RESTART_LIMIT))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_conventions() {
        assert_eq!(complete(4).edge_count(), 6);
        let k1 = complete(1);
        assert_eq!((k1.n(), k1.edge_count()), (1, 0));
        assert_eq!(complete(0).n(), 0);
        assert_eq!(complete(2).edges(), path(2).edges());
    }

    #[test]
    fn erdos_renyi_extremes_and_determinism() {
        assert_eq!(erdos_renyi(5, 0.0, 7).unwrap().edge_count(), 0);
        assert_eq!(erdos_renyi(5, 1.0, 7).unwrap().edges(), complete(5).edges());
        assert_eq!(erdos_renyi(8, 0.5, 42), erdos_renyi(8, 0.5, 42));
        assert!(erdos_renyi(4, 1.5, 0).is_err());
    }

    #[test]
    fn erdos_renyi_edge_count_concentrates() {
        // Bin(28, 1/2) puts mass ~0.987 on [8, 20].
        let inside = (0..1000u64)
            .filter(|&s| (8..=20).contains(&erdos_renyi(8, 0.5, s).unwrap().edge_count()))
            .count();
        assert!(inside > 950, "{inside} of 1000 inside [8, 20]");
    }

    #[test]
    fn binary_tree_shapes() {
        let t1 = full_binary_tree(1);
        assert_eq!((t1.n(), t1.edge_count()), (3, 2));
        assert_eq!(t1.edges(), path(3).relabel(&[1, 0, 2]).unwrap().edges());
        let t2 = full_binary_tree(2);
        assert_eq!((t2.n(), t2.edge_count()), (7, 6));
        let t0 = full_binary_tree(0);
        assert_eq!((t0.n(), t0.edge_count()), (1, 0));
    }

    #[test]
    fn rary_tree_fill() {
        assert_eq!(full_rary_tree(2, 4).unwrap().edges(), &[(0, 1), (0, 2), (1, 3)]);
        for h in 0..5 {
            let n = (1 << (h + 1)) - 1;
            assert_eq!(
                full_rary_tree(2, n).unwrap().edges(),
                full_binary_tree(h).edges()
            );
        }
        let t = full_rary_tree(2, 6).unwrap();
        assert_eq!(t.edge_count(), 5);
        // Node 2 (depth 1) has a single child, node 5.
        let deg = t.degrees();
        assert_eq!(deg, [2, 3, 2, 1, 1, 1]);
        assert!(full_rary_tree(1, 4).is_err());
    }

    #[test]
    fn random_regular_feasibility() {
        for seed in 0..5 {
            assert_eq!(random_regular(3, 4, seed).unwrap().edges(), complete(4).edges());
        }
        assert_eq!(
            random_regular(3, 5, 0),
            Err(Error::InfeasibleDegreeSequence { degree: 3, n: 5 })
        );
        assert!(random_regular(4, 4, 0).is_err());
        let g = random_regular(3, 10, 11).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 3));
        assert!(g.audit());
        assert_eq!(g, random_regular(3, 10, 11).unwrap());
    }
}
