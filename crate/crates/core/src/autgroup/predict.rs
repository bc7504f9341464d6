//! Closed-form automorphism group orders.
//!
//! Tree levels count depth from the root (depth 0). For an edge deletion the
//! level is the depth of the lower endpoint; for a pendant edge it is the
//! depth of the attachment node. `A(k) = 2^(2^k - 1)` denotes the order for
//! the full binary tree of height `k`, with `A(0) = 1`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use super::{aut_order, PredictionRule};
use crate::error::{Error, Result};
use crate::graph::{AppliedPerturbation, Family, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prediction {
    Value(BigUint),
    /// The rule's preconditions do not hold for this graph.
    NotApplicable(String),
}

impl Prediction {
    pub fn value(&self) -> Option<&BigUint> {
        match self {
            Prediction::Value(v) => Some(v),
            Prediction::NotApplicable(_) => None,
        }
    }
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `s! · base_order`. Bases that already have isolated nodes are outside the
/// rule: the new nodes join the existing ones in one larger symmetric factor.
pub fn predict_shadow_order(base_order: &BigUint, s: usize, base_has_isolated: bool) -> Prediction {
    if s == 0 {
        return Prediction::NotApplicable("shadow count must be >= 1".into());
    }
    if base_has_isolated {
        return Prediction::NotApplicable("base graph already has isolated nodes".into());
    }
    Prediction::Value(factorial(s) * base_order)
}

/// `2^(2^h - 1)`, from `|G_{h+1}| = 2 |G_h|^2` with `|G_0| = 1`.
pub fn predict_tree_order(height: usize) -> BigUint {
    BigUint::one() << ((1usize << height) - 1)
}

fn level_check(height: usize, level: usize) -> Result<()> {
    if height == 0 || level == 0 || level > height {
        return Err(Error::LevelOutOfRange { level, height });
    }
    Ok(())
}

fn product(range: core::ops::Range<usize>) -> BigUint {
    range.map(predict_tree_order).product()
}

/// Order after deleting one edge whose lower endpoint sits at depth `level`.
///
/// The cut-off part is a full tree of height `k = h - r` (factor `A(k)`).
/// Below the root, its former sibling subtree of height `k` keeps its own
/// symmetry but loses its swap partner, and each ancestor further up keeps
/// one intact sibling subtree of height `k+1, ..., h-1`.
///
/// When the deleted edge hangs from the root, the root is left with one
/// child subtree of height `k`. That is a star `K_{1,3}` for `k = 1` and a
/// single edge for `k = 0`, which carry extra symmetry.
pub fn predict_tree_deleted_edge_order(height: usize, level: usize) -> Result<BigUint> {
    level_check(height, level)?;
    let a = predict_tree_order;
    if height == 1 {
        return Ok(BigUint::from(2u32));
    }
    let k = height - level;
    if level == 1 {
        let root_side = match k {
            0 => BigUint::from(2u32),
            1 => BigUint::from(6u32),
            _ => a(k),
        };
        return Ok(a(k) * root_side);
    }
    Ok(a(k) * a(k) * product(k + 1..height))
}

/// Order after attaching a pendant edge to a node at depth `level`.
pub fn predict_tree_pendant_order(height: usize, level: usize) -> Result<BigUint> {
    level_check(height, level)?;
    if height == 1 {
        return Ok(BigUint::from(2u32));
    }
    let k = height - level;
    // The attachment's own subtree, with the new leaf hanging from its root.
    let local = match k {
        0 => BigUint::one(),
        1 => BigUint::from(6u32),
        _ => predict_tree_order(k),
    };
    Ok(local * product(k..height))
}

/// `2 (n-2)!`.
pub fn predict_kn_deleted_edge_order(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::InvalidParameter("complete graph needs n >= 2".into()));
    }
    Ok(BigUint::from(2u32) * factorial(n - 2))
}

/// `(n-1)!`. At `n = 2` the result is a path on three nodes, whose order 2
/// breaks the formula, so the domain starts at 3.
pub fn predict_kn_pendant_order(n: usize) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::InvalidParameter(
            "pendant rule for complete graphs needs n >= 3".into(),
        ));
    }
    Ok(factorial(n - 1))
}

fn tree_depth(node: usize) -> usize {
    (usize::BITS - 1 - (node + 1).leading_zeros()) as usize
}

fn single(perturbations: &[AppliedPerturbation]) -> Option<AppliedPerturbation> {
    match perturbations {
        [p] => Some(*p),
        _ => None,
    }
}

/// Evaluates `rule` for `g`, reading the family and perturbation history
/// from its metadata.
pub fn predict(g: &Graph, rule: PredictionRule) -> Result<Prediction> {
    let meta = g.meta();
    let na = |why: String| Ok(Prediction::NotApplicable(why));
    let last = single(&meta.perturbations);
    match rule {
        PredictionRule::Shadow => {
            let Some(AppliedPerturbation::Shadow { count }) = meta.perturbations.last().copied()
            else {
                return na("last perturbation is not a shadow addition".into());
            };
            let n = g.n();
            let added: Vec<usize> = (n - count..n).collect();
            let base = g.remove_nodes(&added)?;
            let base_order = aut_order(&base)?.order;
            Ok(predict_shadow_order(&base_order, count, base.isolated_count() > 0))
        }
        PredictionRule::BinaryTree => match (&meta.family, last) {
            (Family::BinaryTree { height }, None) if meta.perturbations.is_empty() => {
                Ok(Prediction::Value(predict_tree_order(*height)))
            }
            _ => na("needs an unperturbed full binary tree".into()),
        },
        PredictionRule::TreeDeletedEdge => match (&meta.family, last) {
            (Family::BinaryTree { height }, Some(AppliedPerturbation::DeleteEdge { v, .. })) => {
                Ok(Prediction::Value(predict_tree_deleted_edge_order(
                    *height,
                    tree_depth(v),
                )?))
            }
            _ => na("needs a full binary tree with one deleted edge".into()),
        },
        PredictionRule::TreePendant => match (&meta.family, last) {
            (Family::BinaryTree { height }, Some(AppliedPerturbation::PendantEdge { attach, .. })) => {
                let level = tree_depth(attach);
                if level == 0 {
                    return na("pendant at the root is outside the rule".into());
                }
                Ok(Prediction::Value(predict_tree_pendant_order(*height, level)?))
            }
            _ => na("needs a full binary tree with one pendant edge".into()),
        },
        PredictionRule::CompleteDeletedEdge => match (&meta.family, last) {
            (Family::Complete { n }, Some(AppliedPerturbation::DeleteEdge { .. })) => {
                Ok(Prediction::Value(predict_kn_deleted_edge_order(*n)?))
            }
            _ => na("needs a complete graph with one deleted edge".into()),
        },
        PredictionRule::CompletePendant => match (&meta.family, last) {
            (Family::Complete { n }, Some(AppliedPerturbation::PendantEdge { .. })) if *n >= 3 => {
                Ok(Prediction::Value(predict_kn_pendant_order(*n)?))
            }
            (Family::Complete { n }, Some(AppliedPerturbation::PendantEdge { .. })) => {
                na(format!("pendant rule needs n >= 3, got {n}"))
            }
            _ => na("needs a complete graph with one pendant edge".into()),
        },
    }
}
