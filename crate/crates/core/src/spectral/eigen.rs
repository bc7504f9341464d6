use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default tolerance for merging numerically equal eigenvalues.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;

const MAX_SWEEPS: usize = 100;

/// One distinct eigenvalue with its orthogonal projector.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenspace {
    pub value: f64,
    pub multiplicity: usize,
    /// Row-major `n x n` projector onto the eigenspace.
    pub projector: Vec<f64>,
}

/// `A = Σ λ_i P_i` over the distinct eigenvalues of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub n: usize,
    /// All eigenvalues with multiplicity, descending.
    pub eigenvalues: Vec<f64>,
    /// Distinct eigenvalues, descending.
    pub eigenspaces: Vec<Eigenspace>,
}

impl SpectralDecomposition {
    pub fn distinct_count(&self) -> usize {
        self.eigenspaces.len()
    }

    /// `Σ λ_i P_i`, row-major.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.n];
        for space in &self.eigenspaces {
            for (o, p) in out.iter_mut().zip(&space.projector) {
                *o += space.value * p;
            }
        }
        out
    }

    /// Resolvent entry `((xI - A)^{-1})_{uv} = Σ_i P_i[u][v] / (x - λ_i)`.
    pub fn resolvent(&self, u: usize, v: usize, x: f64) -> f64 {
        self.eigenspaces
            .iter()
            .map(|s| s.projector[u * self.n + v] / (x - s.value))
            .sum()
    }

    /// `det(xI - A)` from the eigenvalues.
    pub fn char_value(&self, x: f64) -> f64 {
        self.eigenvalues.iter().map(|&l| x - l).product()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .fold(0.0, |acc: f64, &l| acc.max(l.abs()))
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Eigendecomposition of the adjacency matrix with the default clustering
/// tolerance.
pub fn eigen_decomposition(g: &Graph) -> Result<SpectralDecomposition> {
    eigen_decomposition_with(g, CLUSTER_TOLERANCE)
}

pub fn eigen_decomposition_with(g: &Graph, cluster_tol: f64) -> Result<SpectralDecomposition> {
    let n = g.n();
    let (values, vectors) = jacobi_eigen(g.adjacency(), n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();

    let mut eigenspaces = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end - 1] - eigenvalues[end] <= cluster_tol {
            end += 1;
        }
        let members = &order[start..end];
        let mut projector = vec![0.0; n * n];
        for &k in members {
            for i in 0..n {
                let vik = vectors[i * n + k];
                for j in 0..n {
                    projector[i * n + j] += vik * vectors[j * n + k];
                }
            }
        }
        let value = eigenvalues[start..end].iter().sum::<f64>() / (end - start) as f64;
        eigenspaces.push(Eigenspace {
            value,
            multiplicity: end - start,
            projector,
        });
        start = end;
    }
    Ok(SpectralDecomposition {
        n,
        eigenvalues,
        eigenspaces,
    })
}

/// Cyclic Jacobi rotations on a symmetric row-major matrix.
///
/// Returns the eigenvalues (unsorted) and the eigenvectors as the columns of
/// a row-major `n x n` matrix.
pub fn jacobi_eigen(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = libm::sqrt(a.iter().map(|x| x * x).sum::<f64>()).max(1.0);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum();
        if libm::sqrt(off) <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure(MAX_SWEEPS));
    }
    Ok(((0..n).map(|i| a[i * n + i]).collect(), v))
}
