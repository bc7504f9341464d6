//! Exact MaxCut by exhaustive bipartition search.
//!
//! Assignments are bit vectors `z ∈ {0,1}^n`; as a mask, bit `i` is `z_i`.
//! The search fixes `z_0 = 0`, so each bipartition is visited once.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{AppliedPerturbation, Graph, Perturbation, PerturbationKind};

/// Largest graph the exhaustive search accepts.
pub const BRUTE_FORCE_CAP: usize = 24;

/// How an assignment is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutSemantics {
    /// Edges whose endpoints are on opposite sides.
    #[default]
    Cut,
    /// `Σ_{(i,j)∈E} (1 - z_i z_j)` over `z ∈ {0,1}`: every edge counts
    /// unless both endpoints are 1.
    LiteralBinary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSolution {
    pub value: usize,
    /// Lexicographically smallest optimal assignment with `z_0 = 0`.
    pub witness: Vec<u8>,
    /// Optimal bipartitions, each counted once together with its complement.
    pub degenerate_count: u64,
}

/// Scores assignment `z` under the requested semantics.
pub fn cut_value(g: &Graph, z: &[u8], semantics: CutSemantics) -> Result<usize> {
    if z.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: z.len(),
        });
    }
    let bit = |i: usize| z[i] != 0;
    Ok(g.edges()
        .iter()
        .filter(|&&(u, v)| match semantics {
            CutSemantics::Cut => bit(u) != bit(v),
            CutSemantics::LiteralBinary => !(bit(u) && bit(v)),
        })
        .count())
}

/// Cut size of the bipartition encoded by `mask`, given bit-mask adjacency.
#[inline]
pub fn mask_cut(adjacency: &[u64], mask: u64) -> usize {
    adjacency
        .iter()
        .enumerate()
        .filter(|&(i, _)| mask >> i & 1 == 1)
        .map(|(_, &row)| (row & !mask).count_ones() as usize)
        .sum()
}

/// Partial sweep result, mergeable across disjoint mask ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepBest {
    pub value: usize,
    /// Optimal mask minimizing the lexicographic key.
    pub mask: u64,
    pub count: u64,
}

impl SweepBest {
    pub fn merge(self, other: SweepBest) -> SweepBest {
        use core::cmp::Ordering::*;
        match self.value.cmp(&other.value) {
            Greater => self,
            Less => other,
            Equal => SweepBest {
                value: self.value,
                mask: if lex_key(self.mask) <= lex_key(other.mask) {
                    self.mask
                } else {
                    other.mask
                },
                count: self.count + other.count,
            },
        }
    }
}

/// Ordering key making numeric comparison agree with lexicographic order of
/// `(z_0, z_1, ...)`.
#[inline]
fn lex_key(mask: u64) -> u64 {
    mask.reverse_bits()
}

/// Exhausts the half-open range `[lo, hi)` of masks over nodes `1..n`
/// (node 0 stays on side 0).
pub fn sweep_range(adjacency: &[u64], lo: u64, hi: u64) -> Option<SweepBest> {
    (lo..hi)
        .map(|half| {
            let mask = half << 1;
            SweepBest {
                value: mask_cut(adjacency, mask),
                mask,
                count: 1,
            }
        })
        .reduce(SweepBest::merge)
}

/// Number of masks the sweep visits: `2^(n-1)` (1 for `n <= 1`).
pub fn sweep_size(n: usize) -> u64 {
    1u64 << n.saturating_sub(1)
}

pub fn solution_from_sweep(n: usize, best: SweepBest) -> CutSolution {
    CutSolution {
        value: best.value,
        witness: (0..n).map(|i| (best.mask >> i & 1) as u8).collect(),
        degenerate_count: best.count,
    }
}

/// Exact MaxCut of `g`.
pub fn brute_force_maxcut(g: &Graph) -> Result<CutSolution> {
    let n = g.n();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            what: "brute-force MaxCut",
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let adjacency = g.adjacency_masks();
    let best = sweep_range(&adjacency, 0, sweep_size(n)).expect("non-empty sweep");
    Ok(solution_from_sweep(n, best))
}

/// MaxCut before and after a perturbation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftReport {
    pub perturbation: AppliedPerturbation,
    pub base: usize,
    pub perturbed: usize,
    pub shift: i64,
}

/// Applies `p` and checks the MaxCut shift rule for its kind: shadow
/// nodes leave it unchanged, a pendant edge adds exactly one, an edge
/// deletion lowers it by zero or one.
pub fn perturbation_shift(g: &Graph, p: &Perturbation) -> Result<ShiftReport> {
    let perturbed_graph = crate::graph::apply_perturbation(g, p)?;
    let applied = *perturbed_graph
        .meta()
        .perturbations
        .last()
        .expect("perturbation recorded");
    let base = brute_force_maxcut(g)?.value;
    let perturbed = brute_force_maxcut(&perturbed_graph)?.value;
    let shift = perturbed as i64 - base as i64;
    let ok = match p.kind {
        PerturbationKind::Shadow(_) => shift == 0,
        PerturbationKind::PendantEdge(_) => shift == 1,
        PerturbationKind::DeleteEdge(_) => shift == 0 || shift == -1,
    };
    if !ok {
        return Err(Error::RelationViolated(alloc::format!(
            "MaxCut shift {shift} after {applied}"
        )));
    }
    Ok(ShiftReport {
        perturbation: applied,
        base,
        perturbed,
        shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        apply_perturbation, complete, empty, full_rary_tree, random_regular, Perturbation,
    };

    /// Independent oracle: recursive enumeration over full assignments,
    /// scoring with `cut_value`.
    fn oracle(g: &Graph) -> (usize, u64) {
        fn go(g: &Graph, z: &mut Vec<u8>, best: &mut (usize, u64)) {
            if z.len() == g.n() {
                let v = cut_value(g, z, CutSemantics::Cut).unwrap();
                if v > best.0 {
                    *best = (v, 1);
                } else if v == best.0 {
                    best.1 += 1;
                }
                return;
            }
            for b in [0, 1] {
                z.push(b);
                go(g, z, best);
                z.pop();
            }
        }
        let mut best = (0, 0);
        go(g, &mut Vec::new(), &mut best);
        // Every bipartition appears twice among full assignments.
        (best.0, if g.n() == 0 { 1 } else { best.1 / 2 })
    }

    #[test]
    fn cut_value_semantics() {
        let k2 = complete(2);
        assert_eq!(cut_value(&k2, &[0, 1], CutSemantics::Cut).unwrap(), 1);
        assert_eq!(cut_value(&k2, &[1, 1], CutSemantics::Cut).unwrap(), 0);
        assert_eq!(cut_value(&k2, &[1, 1], CutSemantics::LiteralBinary).unwrap(), 0);
        let k4 = complete(4);
        assert_eq!(cut_value(&k4, &[0, 0, 1, 1], CutSemantics::LiteralBinary).unwrap(), 5);
        assert_eq!(cut_value(&k4, &[0, 0, 1, 1], CutSemantics::Cut).unwrap(), 4);
        assert_eq!(
            cut_value(&k4, &[0, 1], CutSemantics::Cut),
            Err(Error::LengthMismatch { expected: 4, got: 2 })
        );
    }

    #[test]
    fn known_values() {
        let k4 = brute_force_maxcut(&complete(4)).unwrap();
        assert_eq!(k4.value, 4);
        assert_eq!(k4.witness, [0, 0, 1, 1]);
        assert_eq!(k4.degenerate_count, 3);
        assert_eq!(brute_force_maxcut(&full_rary_tree(2, 10).unwrap()).unwrap().value, 9);
        let k4_minus = apply_perturbation(&complete(4), &Perturbation::delete_edge(0, 1)).unwrap();
        assert_eq!(brute_force_maxcut(&k4_minus).unwrap().value, 4);
        let e = brute_force_maxcut(&empty(3)).unwrap();
        assert_eq!((e.value, e.degenerate_count), (0, 4));
        assert_eq!(brute_force_maxcut(&empty(0)).unwrap().value, 0);
        assert!(brute_force_maxcut(&empty(25)).is_err());
    }

    #[test]
    fn matches_recursive_oracle() {
        for seed in 0..20 {
            let g = crate::graph::erdos_renyi(8, 0.5, seed).unwrap();
            let sol = brute_force_maxcut(&g).unwrap();
            assert_eq!((sol.value, sol.degenerate_count), oracle(&g));
            assert_eq!(cut_value(&g, &sol.witness, CutSemantics::Cut).unwrap(), sol.value);
        }
        let g = random_regular(3, 10, 5).unwrap();
        assert_eq!(brute_force_maxcut(&g).unwrap().value, oracle(&g).0);
    }

    #[test]
    fn split_sweep_equals_full_sweep() {
        let g = random_regular(3, 12, 1).unwrap();
        let adj = g.adjacency_masks();
        let total = sweep_size(12);
        let full = sweep_range(&adj, 0, total).unwrap();
        let parts = (0..7u64)
            .map(|k| sweep_range(&adj, total * k / 7, total * (k + 1) / 7))
            .flatten()
            .rev()
            .reduce(SweepBest::merge)
            .unwrap();
        assert_eq!(full, parts);
    }

    #[test]
    fn shift_rules() {
        let k4 = complete(4);
        assert_eq!(perturbation_shift(&k4, &Perturbation::shadow(2)).unwrap().shift, 0);
        assert_eq!(perturbation_shift(&k4, &Perturbation::pendant(0)).unwrap().shift, 1);
        assert_eq!(
            perturbation_shift(&k4, &Perturbation::delete_edge(0, 1)).unwrap().shift,
            0
        );
    }
}
