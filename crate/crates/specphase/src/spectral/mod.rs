//! Matrix-free spectral engine: modularity and normalized-Laplacian
//! operators, leading-eigenpair computation, and partition statistics.

mod lanczos;
mod operators;
mod outcome;

pub use lanczos::{leading_eigenpair, EigenPair, LanczosConfig};
pub use operators::{DeflatedWalkOperator, LinearOperator, ModularityOperator};
pub use outcome::{
    ipr, ones_alignment, overlap, partition_from_vector, spectral_outcome, write_eigenvector,
    SpectralOutcome,
};

use crate::error::Result;
use crate::graph::Graph;

/// Second-smallest eigenvalue of the normalized Laplacian
/// `L = I - D^{-1/2} A D^{-1/2}` on the non-isolated nodes, together with
/// the Cheeger lower bound `lambda2 / 2` on the optimal normalized cut.
#[derive(Debug, Clone, Copy)]
pub struct LaplacianLambda2 {
    pub lambda2: f64,
    pub cheeger_lower_bound: f64,
    pub disconnected: bool,
}

/// Compute λ₂ of the normalized Laplacian, matrix-free, with deflation of
/// the known Perron vector `D^{1/2} 1`. Disconnected graphs return 0 with
/// the flag set.
pub fn second_smallest_normalized_laplacian(
    g: &Graph,
    tol: f64,
    seed: u64,
) -> Result<LaplacianLambda2> {
    if !g.connected_on_nonisolated() {
        return Ok(LaplacianLambda2 { lambda2: 0.0, cheeger_lower_bound: 0.0, disconnected: true });
    }
    let op = DeflatedWalkOperator::new(g)?;
    // Largest eigenvalue of P(2I - L)P equals 2 - λ₂.
    let pair = leading_eigenpair(&op, &LanczosConfig { tol, seed, ..Default::default() })?;
    let lambda2 = (2.0 - pair.lambda).max(0.0);
    Ok(LaplacianLambda2 { lambda2, cheeger_lower_bound: lambda2 / 2.0, disconnected: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Provenance;

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                edges.push((i, j));
            }
        }
        Graph::from_edges(n, &edges, None, Provenance::External).unwrap()
    }

    #[test]
    fn k4_lambda2() {
        // normalized Laplacian of K_n has λ₂ = n/(n−1)
        let g = complete(4);
        let r = second_smallest_normalized_laplacian(&g, 1e-10, 1).unwrap();
        assert!(!r.disconnected);
        assert!((r.lambda2 - 4.0 / 3.0).abs() < 1e-8, "λ₂ = {}", r.lambda2);
        assert!((r.cheeger_lower_bound - 2.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn cycle4_lambda2() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], None, Provenance::External)
            .unwrap();
        let r = second_smallest_normalized_laplacian(&g, 1e-10, 1).unwrap();
        assert!((r.lambda2 - 1.0).abs() < 1e-8, "λ₂ = {}", r.lambda2);
    }

    #[test]
    fn disconnected_flag() {
        let mut edges = Vec::new();
        for b in [0u32, 4] {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    edges.push((b + i, b + j));
                }
            }
        }
        let g = Graph::from_edges(8, &edges, None, Provenance::External).unwrap();
        let r = second_smallest_normalized_laplacian(&g, 1e-10, 1).unwrap();
        assert!(r.disconnected);
        assert_eq!(r.lambda2, 0.0);
    }
}
