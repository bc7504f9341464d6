//! Named verification runs over a single graph, as exposed by
//! `spectrum --check`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::charpoly::char_poly;
use super::eigen::eigen_decomposition;
use super::identities::{
    complement_charpoly, complete_graph_charpoly, predicted_charpoly_pendant,
    predicted_charpoly_shadow, tree_charpoly, verify_deleted_edge_identity_with,
    verify_two_node_deletion_identity_with,
};
use crate::error::{Error, Result};
use crate::graph::{apply_perturbation, complete, Graph, Perturbation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralCheck {
    /// Shadow nodes multiply the polynomial by `λ^s` (s = 1, 2).
    Shadow,
    /// Edge-deletion identity for every edge.
    EdgeDeletion,
    /// Node-pair deletion identity for every pair.
    NodePairDeletion,
    /// Pendant-edge polynomial at every node.
    Pendant,
    /// Rooted recursion for trees.
    TreeRecursion,
    /// Complement formula for regular graphs.
    Complement,
    /// Closed form for the complete graph on the same node count.
    CompleteGraph,
}

impl SpectralCheck {
    pub const ALL: [SpectralCheck; 7] = [
        Self::Shadow,
        Self::EdgeDeletion,
        Self::NodePairDeletion,
        Self::Pendant,
        Self::TreeRecursion,
        Self::Complement,
        Self::CompleteGraph,
    ];

    /// Command-line token.
    pub fn token(self) -> &'static str {
        match self {
            Self::Shadow => "prop1",
            Self::EdgeDeletion => "prop2",
            Self::NodePairDeletion => "prop3",
            Self::Pendant => "prop4",
            Self::TreeRecursion => "cor1",
            Self::Complement => "prop5",
            Self::CompleteGraph => "cor2",
        }
    }
}

impl fmt::Display for SpectralCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for SpectralCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.token() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown check {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckItem {
    pub label: String,
    pub passed: bool,
    /// Relative discrepancy for numerical checks; `None` for exact ones.
    pub discrepancy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check: SpectralCheck,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

fn exact(label: String, passed: bool) -> CheckItem {
    CheckItem {
        label,
        passed,
        discrepancy: None,
    }
}

/// Runs `check` on `g`. Preconditions that do not hold (a non-tree for the
/// tree recursion, an irregular graph for the complement formula) are
/// errors rather than failed items.
pub fn run_check(g: &Graph, check: SpectralCheck) -> Result<CheckReport> {
    let n = g.n();
    let mut items = Vec::new();
    match check {
        SpectralCheck::Shadow => {
            let phi = char_poly(g);
            for s in [1, 2] {
                let direct = char_poly(&apply_perturbation(g, &Perturbation::shadow(s))?);
                let predicted = predicted_charpoly_shadow(&phi, s)?;
                items.push(exact(format!("shadow:{s}"), predicted == direct));
            }
        }
        SpectralCheck::EdgeDeletion => {
            let spec = eigen_decomposition(g)?;
            for &(u, v) in g.edges() {
                let r = verify_deleted_edge_identity_with(g, &spec, u, v)?;
                items.push(CheckItem {
                    label: format!("{u}-{v}"),
                    passed: r.passed,
                    discrepancy: Some(r.max_discrepancy),
                });
            }
        }
        SpectralCheck::NodePairDeletion => {
            let spec = eigen_decomposition(g)?;
            for u in 0..n {
                for v in u + 1..n {
                    let r = verify_two_node_deletion_identity_with(g, &spec, u, v)?;
                    items.push(CheckItem {
                        label: format!("{u},{v}"),
                        passed: r.passed,
                        discrepancy: Some(r.max_discrepancy),
                    });
                }
            }
        }
        SpectralCheck::Pendant => {
            for u in 0..n {
                let direct = char_poly(&apply_perturbation(g, &Perturbation::pendant(u))?);
                items.push(exact(
                    format!("pendant:{u}"),
                    predicted_charpoly_pendant(g, u)? == direct,
                ));
            }
        }
        SpectralCheck::TreeRecursion => {
            if n == 0 {
                return Err(Error::NotATree);
            }
            let direct = char_poly(g);
            for root in [0, n - 1] {
                items.push(exact(format!("root:{root}"), tree_charpoly(g, root)? == direct));
            }
        }
        SpectralCheck::Complement => {
            let predicted = complement_charpoly(g)?;
            items.push(exact(
                "complement".to_string(),
                predicted == char_poly(&g.complement()),
            ));
        }
        SpectralCheck::CompleteGraph => {
            let direct = char_poly(&complete(n));
            items.push(exact(
                format!("complete:{n}"),
                complete_graph_charpoly(n) == direct,
            ));
        }
    }
    Ok(CheckReport { check, items })
}
