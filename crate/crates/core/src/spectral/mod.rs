//! Exact characteristic polynomials, eigendecomposition, perturbation
//! identities, spectral radius and eigenvalue MaxCut bounds.

mod charpoly;
mod checks;
mod eigen;
mod identities;

pub use charpoly::{berkowitz, char_poly, CharPoly};
pub use checks::{run_check, CheckItem, CheckReport, SpectralCheck};
pub use eigen::{
    eigen_decomposition, eigen_decomposition_with, jacobi_eigen, Eigenspace,
    SpectralDecomposition, CLUSTER_TOLERANCE,
};
pub use identities::{
    complement_charpoly, complete_from_empty, complete_graph_charpoly,
    predicted_charpoly_pendant, predicted_charpoly_shadow, sample_points, tree_charpoly,
    verify_deleted_edge_identity, verify_deleted_edge_identity_with,
    verify_two_node_deletion_identity, verify_two_node_deletion_identity_with, IdentityReport,
    IDENTITY_TOLERANCE, POLE_CLEARANCE,
};

use crate::error::{Error, Result};
use crate::graph::{apply_perturbation, Graph, Perturbation, PerturbationKind};
use crate::maxcut::brute_force_maxcut;

/// Absolute tolerance when comparing spectral radii.
pub const RADIUS_TOLERANCE: f64 = 1e-9;

/// `max |λ_i|` of the adjacency matrix.
pub fn spectral_radius(g: &Graph) -> Result<f64> {
    Ok(eigen_decomposition(g)?.spectral_radius())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusReport {
    pub rho_base: f64,
    pub rho_pert: f64,
    pub delta: f64,
    pub equal: bool,
    /// Whether equality is a hard requirement for this perturbation kind.
    pub enforced: bool,
}

/// Compares the spectral radius before and after a perturbation.
///
/// Shadow nodes only append zero eigenvalues, so equality is required and a
/// mismatch is an error. Pendant edges and edge deletions generally move the
/// radius; their report is informational.
pub fn check_radius_preservation(g: &Graph, p: &Perturbation) -> Result<RadiusReport> {
    let perturbed = apply_perturbation(g, p)?;
    let rho_base = spectral_radius(g)?;
    let rho_pert = spectral_radius(&perturbed)?;
    let delta = (rho_pert - rho_base).abs();
    let equal = delta <= RADIUS_TOLERANCE;
    let enforced = matches!(p.kind, PerturbationKind::Shadow(_));
    if enforced && !equal {
        return Err(Error::RelationViolated(alloc::format!(
            "spectral radius moved by {delta:e} after adding shadow nodes"
        )));
    }
    Ok(RadiusReport {
        rho_base,
        rho_pert,
        delta,
        equal,
        enforced,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    /// `1/2 + ρ/2`.
    pub literal: f64,
    /// `|E|/2 - n·λ_min/4`, valid for every graph.
    pub sound: f64,
    pub maxcut: usize,
    pub literal_violated: bool,
    pub sound_violated: bool,
}

/// Slack allowed when comparing an integer cut against a float bound.
const BOUND_SLACK: f64 = 1e-9;

pub fn maxcut_upper_bounds(g: &Graph) -> Result<BoundsReport> {
    let spec = eigen_decomposition(g)?;
    let lambda_min = if g.n() == 0 { 0.0 } else { spec.lambda_min() };
    let maxcut = brute_force_maxcut(g)?.value;
    Ok(bounds_from_spectrum(
        g.n(),
        g.edge_count(),
        spec.spectral_radius(),
        lambda_min,
        maxcut,
    ))
}

/// The bounds from precomputed spectral data and a known MaxCut value.
pub fn bounds_from_spectrum(
    n: usize,
    edges: usize,
    rho: f64,
    lambda_min: f64,
    maxcut: usize,
) -> BoundsReport {
    let literal = 0.5 + 0.5 * rho;
    // Clamp the rounding noise around zero so K_1 reports exactly 0.
    let sound = (edges as f64 / 2.0 - n as f64 * lambda_min / 4.0).max(0.0);
    let cut = maxcut as f64;
    BoundsReport {
        literal,
        sound,
        maxcut,
        literal_violated: cut > literal + BOUND_SLACK,
        sound_violated: cut > sound + BOUND_SLACK,
    }
}
