//! Automorphism groups by orbit counting, with closed-form predictors for the
//! perturbed families.
//!
//! The order is computed as a product of orbit lengths along the stabilizer
//! chain of the base `0, 1, ..., n-1`: at level `k`, the orbit of node `k`
//! under the pointwise stabilizer of `0..k`. Each orbit is completed by
//! searching, for every candidate image not yet reached by the generators at
//! hand, for an automorphism that fixes the prefix and sends `k` there. The
//! search is color refinement plus individualization, so it stays fast on
//! the highly symmetric graphs (complete graphs, full trees, shadow nodes)
//! where naive permutation backtracking explodes.

mod predict;
mod refine;

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::char_poly;

pub use predict::{
    factorial, predict, predict_kn_deleted_edge_order, predict_kn_pendant_order,
    predict_shadow_order, predict_tree_deleted_edge_order, predict_tree_order,
    predict_tree_pendant_order, Prediction,
};

use refine::Matcher;

/// Largest graph accepted by the automorphism and isomorphism searches.
pub const AUT_NODE_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Enumerated,
    Predicted,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Enumerated => "enumerated",
            Method::Predicted => "predicted",
        }
    }
}

/// Closed-form rules for the order of a perturbed family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PredictionRule {
    /// `s` shadow nodes: `s! · |Aut(Γ)|`.
    Shadow,
    /// Full binary tree of height `h`: `2^(2^h - 1)`.
    BinaryTree,
    /// Full binary tree with one edge deleted.
    TreeDeletedEdge,
    /// Full binary tree with a pendant edge.
    TreePendant,
    /// `K_n` minus an edge: `2 (n-2)!`.
    CompleteDeletedEdge,
    /// `K_n` plus a pendant edge: `(n-1)!`.
    CompletePendant,
}

impl PredictionRule {
    pub const ALL: [PredictionRule; 6] = [
        Self::Shadow,
        Self::BinaryTree,
        Self::TreeDeletedEdge,
        Self::TreePendant,
        Self::CompleteDeletedEdge,
        Self::CompletePendant,
    ];

    /// Command-line token.
    pub fn token(self) -> &'static str {
        match self {
            Self::Shadow => "prop7",
            Self::BinaryTree => "prop8",
            Self::TreeDeletedEdge => "prop9",
            Self::TreePendant => "prop10",
            Self::CompleteDeletedEdge => "prop11",
            Self::CompletePendant => "prop12",
        }
    }
}

impl fmt::Display for PredictionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for PredictionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.token() == s)
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("unknown rule {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutReport {
    pub order: BigUint,
    /// Node permutations, `perm[u]` is the image of `u`.
    pub generators: Vec<Vec<usize>>,
    pub method: Method,
    pub prediction_rule: Option<PredictionRule>,
}

fn check_cap(n: usize) -> Result<()> {
    if n > AUT_NODE_CAP {
        return Err(Error::TooLarge {
            what: "automorphism search",
            n,
            cap: AUT_NODE_CAP,
        });
    }
    Ok(())
}

/// Exact `|Aut(g)|` with a generating set.
pub fn aut_order(g: &Graph) -> Result<AutReport> {
    let n = g.n();
    check_cap(n)?;
    let adj = g.neighbors();
    let matcher = Matcher::new(&adj, &adj);
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut order = BigUint::one();

    // Deepest level first, so that every generator found so far fixes the
    // prefix of the current level.
    for k in (0..n).rev() {
        let prefix: Vec<usize> = (0..k).collect();
        let candidates = matcher.candidates(&prefix, k);
        let mut orbit = orbit_of(k, &generators, n);
        for w in candidates {
            if orbit[w] {
                continue;
            }
            if let Some(sigma) = matcher.extend(&prefix, k, w) {
                generators.push(sigma);
                orbit = orbit_of(k, &generators, n);
            }
        }
        order *= BigUint::from(orbit.iter().filter(|&&b| b).count());
    }

    for sigma in &generators {
        if !preserves_adjacency_matrix(g, sigma) {
            return Err(Error::RelationViolated(
                "search returned a non-automorphism".into(),
            ));
        }
    }
    Ok(AutReport {
        order,
        generators,
        method: Method::Enumerated,
        prediction_rule: None,
    })
}

/// Closure of `{start}` under the generators.
fn orbit_of(start: usize, generators: &[Vec<usize>], n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for sigma in generators {
            let y = sigma[x];
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Checks `A = δᵀ A δ` with `δ` the permutation matrix of `sigma`
/// (`δ[u][sigma(u)] = 1`), by explicit matrix products.
pub fn preserves_adjacency_matrix(g: &Graph, sigma: &[usize]) -> bool {
    let n = g.n();
    if sigma.len() != n || !is_permutation(sigma) {
        return false;
    }
    let a = g.adjacency();
    let mut delta = vec![0.0; n * n];
    for (u, &s) in sigma.iter().enumerate() {
        delta[u * n + s] = 1.0;
    }
    let matmul = |x: &[f64], y: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let xik = x[i * n + k];
                if xik != 0.0 {
                    for j in 0..n {
                        out[i * n + j] += xik * y[k * n + j];
                    }
                }
            }
        }
        out
    };
    let mut delta_t = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            delta_t[j * n + i] = delta[i * n + j];
        }
    }
    matmul(&matmul(&delta_t, &a), &delta) == a
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !core::mem::replace(&mut seen[x], true))
}

/// An isomorphism `g1 -> g2` if one exists.
pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Result<Option<Vec<usize>>> {
    check_cap(g1.n().max(g2.n()))?;
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let (a1, a2) = (g1.neighbors(), g2.neighbors());
    Ok(Matcher::new(&a1, &a2).isomorphism())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CospectralReport {
    pub same_charpoly: bool,
    pub isomorphic: bool,
}

impl CospectralReport {
    pub fn cospectral_nonisomorphic(&self) -> bool {
        self.same_charpoly && !self.isomorphic
    }
}

pub fn cospectral_nonisomorphic_check(g1: &Graph, g2: &Graph) -> Result<CospectralReport> {
    if g1.n() == 0 || g2.n() == 0 {
        return Err(Error::EmptyInput);
    }
    let isomorphic = find_isomorphism(g1, g2)?.is_some();
    Ok(CospectralReport {
        same_charpoly: char_poly(g1) == char_poly(g2),
        isomorphic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        apply_perturbation, complete, cycle, empty, full_binary_tree, path, random_regular, star,
        Perturbation,
    };

    /// Counts automorphisms by trying every permutation (Heap's algorithm).
    pub(crate) fn brute_force_order(g: &Graph) -> u64 {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut count = 0u64;
        let is_aut = |p: &[usize]| g.edges().iter().all(|&(u, v)| g.has_edge(p[u], p[v]));
        let mut c = vec![0usize; n];
        if is_aut(&perm) {
            count += 1;
        }
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                if is_aut(&perm) {
                    count += 1;
                }
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        count
    }

    fn order(g: &Graph) -> u64 {
        let r = aut_order(g).unwrap();
        u64::try_from(&r.order).unwrap()
    }

    #[test]
    fn known_orders() {
        assert_eq!(order(&complete(4)), 24);
        assert_eq!(order(&full_binary_tree(2)), 8);
        assert_eq!(order(&star(4)), 24);
        assert_eq!(order(&complete(1)), 1);
        assert_eq!(order(&empty(0)), 1);
        assert_eq!(order(&cycle(7)), 14);
        assert_eq!(order(&complete(10)), 3_628_800);
        assert_eq!(order(&full_binary_tree(3)), 128);
    }

    #[test]
    fn matches_brute_force() {
        let mut graphs = vec![
            path(5),
            cycle(6),
            star(3),
            empty(4),
            path(3).disjoint_union(&empty(1)),
            cycle(4).disjoint_union(&empty(1)),
            random_regular(3, 8, 1).unwrap(),
        ];
        for seed in 0..12 {
            graphs.push(crate::graph::erdos_renyi(7, 0.5, seed).unwrap());
        }
        for g in &graphs {
            assert_eq!(order(g), brute_force_order(g), "{:?}", g.edges());
        }
    }

    #[test]
    fn generators_are_automorphisms() {
        for g in [complete(5), full_binary_tree(3), random_regular(3, 10, 7).unwrap()] {
            let r = aut_order(&g).unwrap();
            for s in &r.generators {
                assert!(g.edges().iter().all(|&(u, v)| g.has_edge(s[u], s[v])));
                assert!(preserves_adjacency_matrix(&g, s));
            }
        }
        assert!(!preserves_adjacency_matrix(&path(3), &[1, 0, 2]));
    }

    #[test]
    fn shadow_orders() {
        let k4 = complete(4);
        let two = apply_perturbation(&k4, &Perturbation::shadow(2)).unwrap();
        assert_eq!(order(&two), 48);
        let base = path(3).disjoint_union(&empty(1));
        assert_eq!(order(&base), 2);
        let grown = apply_perturbation(&base, &Perturbation::shadow(2)).unwrap();
        assert_eq!(order(&grown), 12);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(aut_order(&empty(33)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn cospectral_pairs() {
        let r = cospectral_nonisomorphic_check(&star(4), &cycle(4).disjoint_union(&empty(1)))
            .unwrap();
        assert!(r.same_charpoly && !r.isomorphic && r.cospectral_nonisomorphic());
        let r = cospectral_nonisomorphic_check(&complete(4), &complete(4)).unwrap();
        assert!(r.same_charpoly && r.isomorphic);
        let r = cospectral_nonisomorphic_check(&complete(3), &path(3)).unwrap();
        assert!(!r.same_charpoly && !r.isomorphic);
    }

    #[test]
    fn isomorphism_is_valid() {
        let g = random_regular(3, 12, 3).unwrap();
        let perm: Vec<usize> = (0..12).map(|i| (i * 5 + 3) % 12).collect();
        let h = g.relabel(&perm).unwrap();
        let iso = find_isomorphism(&g, &h).unwrap().unwrap();
        assert!(g.edges().iter().all(|&(u, v)| h.has_edge(iso[u], iso[v])));
        assert!(find_isomorphism(&path(4), &star(3)).unwrap().is_none());
    }
}
