//! Closed-form characteristic polynomials of perturbed graphs and numerical
//! checks of the resolvent identities for edge and node-pair deletion.

use alloc::vec;
use alloc::vec::Vec;

use super::charpoly::{char_poly, CharPoly};
use super::eigen::{eigen_decomposition, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::IntPoly;

/// Tolerance on the relative discrepancy of an identity check.
pub const IDENTITY_TOLERANCE: f64 = 1e-6;

/// Minimum distance between a sample point and any eigenvalue.
pub const POLE_CLEARANCE: f64 = 1e-2;

/// Outcome of a multipoint identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity: &'static str,
    pub points: Vec<f64>,
    /// Largest `|lhs - rhs| / scale` over the sample points, where `scale`
    /// is the larger of `|lhs|` and the sum of the absolute values of the
    /// terms on the right-hand side (at least 1).
    pub max_discrepancy: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// `φ_{Γ'} = λ^s · φ_Γ` for `s` added isolated nodes.
pub fn predicted_charpoly_shadow(phi: &CharPoly, s: usize) -> Result<CharPoly> {
    if s == 0 {
        return Err(Error::InvalidParameter("shadow count must be >= 1".into()));
    }
    CharPoly::new(phi.poly().shift(s))
}

/// `φ_{Γ_u} = λ·φ_Γ - φ_{Γ-u}` for a pendant edge attached at `u`.
pub fn predicted_charpoly_pendant(g: &Graph, u: usize) -> Result<CharPoly> {
    let without_u = g.remove_nodes(&[u])?;
    let lhs = char_poly(g).poly().shift(1);
    CharPoly::new(&lhs - char_poly(&without_u).poly())
}

/// Characteristic polynomial of a tree by the rooted-subtree recursion.
///
/// Each node `u` carries the pair `(φ_{C(u)}, φ_{C'(u)})`, where `C(u)` is
/// the subtree rooted at `u` and `C'(u)` is that subtree with `u` removed:
///
/// ```text
/// φ_{C'(u)} = Π_i φ_{C(s_i)}
/// φ_{C(u)}  = λ·φ_{C'(u)} - Σ_i φ_{C'(s_i)} · Π_{j≠i} φ_{C(s_j)}
/// ```
///
/// Leaves start at `(λ, 1)`. The number of polynomial operations is linear
/// in `n` (prefix/suffix products avoid the quadratic `Π_{j≠i}`).
pub fn tree_charpoly(g: &Graph, root: usize) -> Result<CharPoly> {
    let n = g.n();
    if root >= n {
        return Err(Error::NodeOutOfRange { node: root, n });
    }
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let adj = g.neighbors();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    parent[root] = root;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &w in &adj[u] {
            if parent[w] == usize::MAX {
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    let mut whole: Vec<IntPoly> = vec![IntPoly::zero(); n];
    let mut rest: Vec<IntPoly> = vec![IntPoly::zero(); n];
    let lambda = IntPoly::x();
    for &u in order.iter().rev() {
        let children: Vec<usize> = adj[u]
            .iter()
            .copied()
            .filter(|&w| parent[w] == u && w != u)
            .collect();
        let k = children.len();
        // prefix[i] = Π_{j<i} φ_{C(s_j)}, suffix[i] = Π_{j>=i} φ_{C(s_j)}
        let mut prefix = Vec::with_capacity(k + 1);
        prefix.push(IntPoly::one());
        for (i, &c) in children.iter().enumerate() {
            let next = &prefix[i] * &whole[c];
            prefix.push(next);
        }
        let mut suffix = vec![IntPoly::one(); k + 1];
        for i in (0..k).rev() {
            suffix[i] = &suffix[i + 1] * &whole[children[i]];
        }
        let mut correction = IntPoly::zero();
        for (i, &c) in children.iter().enumerate() {
            let others = &prefix[i] * &suffix[i + 1];
            correction = &correction + &(&rest[c] * &others);
        }
        rest[u] = prefix[k].clone();
        whole[u] = &(&lambda * &rest[u]) - &correction;
    }
    CharPoly::new(core::mem::take(&mut whole[root]))
}

/// Characteristic polynomial of the complement of an `r`-regular graph:
///
/// `φ_{Γ̄}(λ) = (-1)^n (λ - n + r + 1) φ_Γ(-λ - 1) / (λ + r + 1)`.
///
/// The division is exact; a non-zero remainder is reported as
/// [`Error::NonZeroRemainder`].
pub fn complement_charpoly(g: &Graph) -> Result<CharPoly> {
    let r = g.regular_degree().ok_or(Error::NotRegular)?;
    let n = g.n();
    if n == 0 {
        return CharPoly::new(IntPoly::one());
    }
    let reflected = char_poly(g).poly().compose_linear(-1, -1);
    let factor = IntPoly::linear(n as i64 - r as i64 - 1);
    let mut numerator = &factor * &reflected;
    if n % 2 == 1 {
        numerator = -&numerator;
    }
    let divisor = IntPoly::linear(-(r as i64) - 1);
    let (quotient, remainder) = numerator.div_rem_monic(&divisor)?;
    if !remainder.is_zero() {
        return Err(Error::NonZeroRemainder);
    }
    CharPoly::new(quotient)
}

/// `(λ - n + 1)(λ + 1)^(n - 1)`, the closed form for `K_n`, `n >= 1`.
pub fn complete_graph_charpoly(n: usize) -> CharPoly {
    if n == 0 {
        return CharPoly::new(IntPoly::one()).expect("monic");
    }
    let p = &IntPoly::linear(n as i64 - 1) * &IntPoly::linear(-1).pow(n as u32 - 1);
    CharPoly::new(p).expect("monic")
}

/// `2n + 1` points spread over `[-n-1, n+1]`, each nudged away from every
/// eigenvalue by at least [`POLE_CLEARANCE`].
pub fn sample_points(n: usize, eigenvalues: &[f64]) -> Vec<f64> {
    let half = (n + 1) as f64;
    let count = 2 * n + 1;
    let step = if count > 1 { 2.0 * half / (count - 1) as f64 } else { 0.0 };
    (0..count)
        .map(|k| {
            let mut x = -half + step * k as f64;
            while eigenvalues.iter().any(|&l| (x - l).abs() < POLE_CLEARANCE) {
                x += 0.0371;
            }
            x
        })
        .collect()
}

fn signed(value: f64, n: usize) -> f64 {
    if n % 2 == 0 {
        value
    } else {
        -value
    }
}

fn finish(identity: &'static str, points: Vec<f64>, discrepancies: Vec<f64>) -> IdentityReport {
    let max_discrepancy = discrepancies.iter().fold(0.0, |m: f64, &d| m.max(d));
    IdentityReport {
        identity,
        points,
        max_discrepancy,
        tolerance: IDENTITY_TOLERANCE,
        passed: max_discrepancy.is_finite() && max_discrepancy < IDENTITY_TOLERANCE,
    }
}

fn check_pair(g: &Graph, u: usize, v: usize) -> Result<()> {
    for node in [u, v] {
        if node >= g.n() {
            return Err(Error::NodeOutOfRange { node, n: g.n() });
        }
    }
    if u == v {
        return Err(Error::InvalidParameter("node pair must be distinct".into()));
    }
    Ok(())
}

/// Edge-deletion identity, in the `det(A - λI)` convention:
///
/// `φ_{Γ-uv} = φ_Γ - φ_{Γ-u-v} + 2 φ_Γ Σ_i p^(i)_uv / (λ - λ_i)`.
///
/// The left side is the exact polynomial of the edge-deleted graph. The right
/// side is built purely from the spectral decomposition of `Γ`: `φ_Γ` as the
/// product over eigenvalues and `φ_{Γ-u-v}` through the node-pair identity.
pub fn verify_deleted_edge_identity(g: &Graph, u: usize, v: usize) -> Result<IdentityReport> {
    let spec = eigen_decomposition(g)?;
    verify_deleted_edge_identity_with(g, &spec, u, v)
}

pub fn verify_deleted_edge_identity_with(
    g: &Graph,
    spec: &SpectralDecomposition,
    u: usize,
    v: usize,
) -> Result<IdentityReport> {
    check_pair(g, u, v)?;
    if !g.has_edge(u, v) {
        return Err(Error::EdgeNotPresent(u.min(v), u.max(v)));
    }
    let n = g.n();
    let deleted = Graph::new(n, g.edges().iter().copied().filter(|&e| e != (u.min(v), u.max(v))))?;
    let lhs_poly = char_poly(&deleted);
    let points = sample_points(n, &spec.eigenvalues);
    let discrepancies = points
        .iter()
        .map(|&x| {
            let lhs = signed(lhs_poly.eval(x), n);
            let phi = signed(spec.char_value(x), n);
            let (ruu, rvv, ruv) = (
                spec.resolvent(u, u, x),
                spec.resolvent(v, v, x),
                spec.resolvent(u, v, x),
            );
            let phi_minus_pair = phi * (ruu * rvv - ruv * ruv);
            let cross = 2.0 * phi * ruv;
            let rhs = phi - phi_minus_pair + cross;
            let scale = lhs.abs().max(phi.abs() + phi_minus_pair.abs() + cross.abs()).max(1.0);
            (lhs - rhs).abs() / scale
        })
        .collect();
    Ok(finish("edge-deletion", points, discrepancies))
}

/// Node-pair deletion identity, in the `det(A - λI)` convention:
///
/// `φ_{Γ-u-v} = φ_Γ [ Σ p_uu/(λ-λ_i) · Σ p_vv/(λ-λ_i) - (Σ p_uv/(λ-λ_i))^2 ]`.
///
/// Both sides carry the same sign factor because `Γ` and `Γ-u-v` differ by
/// two nodes.
pub fn verify_two_node_deletion_identity(
    g: &Graph,
    u: usize,
    v: usize,
) -> Result<IdentityReport> {
    let spec = eigen_decomposition(g)?;
    verify_two_node_deletion_identity_with(g, &spec, u, v)
}

pub fn verify_two_node_deletion_identity_with(
    g: &Graph,
    spec: &SpectralDecomposition,
    u: usize,
    v: usize,
) -> Result<IdentityReport> {
    check_pair(g, u, v)?;
    let n = g.n();
    let remainder = g.remove_nodes(&[u, v])?;
    let lhs_poly = char_poly(&remainder);
    let points = sample_points(n, &spec.eigenvalues);
    let discrepancies = points
        .iter()
        .map(|&x| {
            let lhs = signed(lhs_poly.eval(x), n - 2);
            let phi = signed(spec.char_value(x), n);
            let (ruu, rvv, ruv) = (
                spec.resolvent(u, u, x),
                spec.resolvent(v, v, x),
                spec.resolvent(u, v, x),
            );
            let rhs = phi * (ruu * rvv - ruv * ruv);
            let scale = lhs.abs().max(phi.abs() * ((ruu * rvv).abs() + ruv * ruv)).max(1.0);
            (lhs - rhs).abs() / scale
        })
        .collect();
    Ok(finish("node-pair-deletion", points, discrepancies))
}

/// `φ_{K_n}` evaluated through the complement of the empty graph, as an
/// exact integer check point.
pub fn complete_from_empty(n: usize) -> Result<CharPoly> {
    complement_charpoly(&crate::graph::empty(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        apply_perturbation, complete, cycle, empty, full_binary_tree, full_rary_tree, path, star,
        Perturbation,
    };

    #[test]
    fn shadow_prediction() {
        let k4 = char_poly(&complete(4));
        let p = predicted_charpoly_shadow(&k4, 1).unwrap();
        assert_eq!(p.poly(), &IntPoly::from_i64(&[0, -3, -8, -6, 0, 1]));
        let k0 = char_poly(&empty(0));
        assert_eq!(predicted_charpoly_shadow(&k0, 3).unwrap().poly(), &IntPoly::monomial(3));
        let two = apply_perturbation(&complete(4), &Perturbation::shadow(2)).unwrap();
        assert_eq!(predicted_charpoly_shadow(&k4, 2).unwrap(), char_poly(&two));
        assert!(predicted_charpoly_shadow(&k4, 0).is_err());
    }

    #[test]
    fn pendant_prediction() {
        assert_eq!(
            predicted_charpoly_pendant(&complete(1), 0).unwrap().poly(),
            &IntPoly::from_i64(&[-1, 0, 1])
        );
        assert_eq!(
            predicted_charpoly_pendant(&path(3), 0).unwrap(),
            char_poly(&path(4))
        );
        for u in 0..4 {
            let k4 = complete(4);
            let grown = apply_perturbation(&k4, &Perturbation::pendant(u)).unwrap();
            assert_eq!(predicted_charpoly_pendant(&k4, u).unwrap(), char_poly(&grown));
        }
        assert!(predicted_charpoly_pendant(&path(3), 3).is_err());
    }

    #[test]
    fn tree_recursion() {
        let t1 = full_binary_tree(1);
        assert_eq!(tree_charpoly(&t1, 0).unwrap().poly(), &IntPoly::from_i64(&[0, -2, 0, 1]));
        assert_eq!(tree_charpoly(&complete(1), 0).unwrap().poly(), &IntPoly::x());
        for h in 0..=4 {
            let t = full_binary_tree(h);
            assert_eq!(tree_charpoly(&t, 0).unwrap(), char_poly(&t));
        }
        let t = full_rary_tree(3, 11).unwrap();
        for root in [0, 4, 10] {
            assert_eq!(tree_charpoly(&t, root).unwrap(), char_poly(&t));
        }
        assert_eq!(tree_charpoly(&cycle(4), 0), Err(Error::NotATree));
        assert_eq!(tree_charpoly(&empty(2), 0), Err(Error::NotATree));
    }

    #[test]
    fn complement_identity() {
        for n in 1..8 {
            assert_eq!(complete_from_empty(n).unwrap(), complete_graph_charpoly(n));
        }
        assert_eq!(complement_charpoly(&complete(4)).unwrap().poly(), &IntPoly::monomial(4));
        let two_edges = IntPoly::from_i64(&[-1, 0, 1]).pow(2);
        assert_eq!(complement_charpoly(&cycle(4)).unwrap().poly(), &two_edges);
        assert_eq!(complement_charpoly(&path(3)), Err(Error::NotRegular));
    }

    #[test]
    fn edge_deletion_identity() {
        for (u, v) in complete(4).edges().to_vec() {
            assert!(verify_deleted_edge_identity(&complete(4), u, v).unwrap().passed);
        }
        let p3 = path(3);
        assert!(verify_deleted_edge_identity(&p3, 0, 1).unwrap().passed);
        let k3 = complete(3);
        let r = verify_deleted_edge_identity(&k3, 0, 2).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.points.len(), 7);
        assert_eq!(
            verify_deleted_edge_identity(&p3, 0, 2),
            Err(Error::EdgeNotPresent(0, 2))
        );
    }

    #[test]
    fn node_pair_identity() {
        for (u, v) in [(0, 1), (1, 3), (2, 3)] {
            assert!(verify_two_node_deletion_identity(&complete(4), u, v).unwrap().passed);
        }
        assert!(verify_two_node_deletion_identity(&star(4), 0, 1).unwrap().passed);
        assert!(verify_two_node_deletion_identity(&path(3), 0, 2).unwrap().passed);
        assert!(verify_two_node_deletion_identity(&path(3), 0, 0).is_err());
        assert!(verify_two_node_deletion_identity(&path(3), 0, 7).is_err());
    }

    #[test]
    fn sample_points_avoid_poles() {
        let eig = [2.0, 0.0, -2.0];
        let pts = sample_points(4, &eig);
        assert_eq!(pts.len(), 9);
        assert!(pts
            .iter()
            .all(|x| eig.iter().all(|l| (x - l).abs() >= POLE_CLEARANCE)));
    }
}
