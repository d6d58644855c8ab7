//! Matrix-free symmetric linear operators over an immutable graph.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A symmetric linear operator given by its action on a vector.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    /// `y = Op x`; both slices have length `dim()`.
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// The modularity matrix `B = A - θ c cᵀ / K` as a matrix-free operator.
/// The rank-one null-model term is applied via the scalar `cᵀx`, so one
/// application costs O(edges + N).
pub struct ModularityOperator<'g> {
    graph: &'g Graph,
    theta: f64,
}

impl<'g> ModularityOperator<'g> {
    pub fn new(graph: &'g Graph, theta: f64) -> Result<Self> {
        if graph.total_degree() == 0 {
            return Err(Error::Parameter("modularity operator needs K > 0".into()));
        }
        Ok(Self { graph, theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }
}

impl LinearOperator for ModularityOperator<'_> {
    fn dim(&self) -> usize {
        self.graph.n_nodes()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        let degrees = self.graph.degrees();
        let mut c_dot_x = 0.0;
        for (i, &d) in degrees.iter().enumerate() {
            c_dot_x += d as f64 * x[i];
        }
        let scale = self.theta * c_dot_x / self.graph.total_degree() as f64;
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for &v in self.graph.neighbors(i) {
                acc += x[v as usize];
            }
            *yi = acc - scale * degrees[i] as f64;
        }
    }
}

/// `P (2I - L) P` on the non-isolated nodes, where
/// `L = I - D^{-1/2} A D^{-1/2}` and `P` projects out the Perron vector
/// `D^{1/2} 1`. Its largest eigenvalue is `2 - λ₂(L)`.
pub struct DeflatedWalkOperator<'g> {
    graph: &'g Graph,
    /// dense indices of non-isolated nodes
    nodes: Vec<u32>,
    /// position in `nodes` for each graph node, u32::MAX for isolated
    pos: Vec<u32>,
    inv_sqrt_deg: Vec<f64>,
    /// unit Perron vector in the reduced space
    perron: Vec<f64>,
}

impl<'g> DeflatedWalkOperator<'g> {
    pub fn new(graph: &'g Graph) -> Result<Self> {
        let nodes: Vec<u32> = (0..graph.n_nodes() as u32)
            .filter(|&u| graph.degree(u as usize) > 0)
            .collect();
        if nodes.is_empty() {
            return Err(Error::Parameter("graph has no edges".into()));
        }
        let mut pos = vec![u32::MAX; graph.n_nodes()];
        for (k, &u) in nodes.iter().enumerate() {
            pos[u as usize] = k as u32;
        }
        let inv_sqrt_deg: Vec<f64> =
            nodes.iter().map(|&u| 1.0 / (graph.degree(u as usize) as f64).sqrt()).collect();
        let norm = (graph.total_degree() as f64).sqrt();
        let perron: Vec<f64> =
            nodes.iter().map(|&u| (graph.degree(u as usize) as f64).sqrt() / norm).collect();
        Ok(Self { graph, nodes, pos, inv_sqrt_deg, perron })
    }

    fn project(&self, x: &mut [f64]) {
        let dot: f64 = self.perron.iter().zip(x.iter()).map(|(p, v)| p * v).sum();
        for (v, p) in x.iter_mut().zip(&self.perron) {
            *v -= dot * p;
        }
    }
}

impl LinearOperator for DeflatedWalkOperator<'_> {
    fn dim(&self) -> usize {
        self.nodes.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut xp = x.to_vec();
        self.project(&mut xp);
        for (k, &u) in self.nodes.iter().enumerate() {
            let mut acc = 0.0;
            for &v in self.graph.neighbors(u as usize) {
                let q = self.pos[v as usize] as usize;
                acc += xp[q] * self.inv_sqrt_deg[q];
            }
            y[k] = 2.0 * xp[k] - (xp[k] - self.inv_sqrt_deg[k] * acc);
        }
        self.project(y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Provenance;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)], None, Provenance::External).unwrap()
    }

    #[test]
    fn modularity_matvec_hand_case() {
        // path 0-1-2, θ=1, x=(1,0,0): c=(1,2,1), K=4, cᵀx=1
        let g = path3();
        let op = ModularityOperator::new(&g, 1.0).unwrap();
        let mut y = vec![0.0; 3];
        op.apply(&[1.0, 0.0, 0.0], &mut y);
        assert_eq!(y, vec![-0.25, 0.5, -0.25]);
    }

    #[test]
    fn regular_graph_ones_vector() {
        // any c-regular graph: B·1 = c(1−θ)·1
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], None, Provenance::External)
            .unwrap();
        for theta in [0.0, 0.3, 1.0, 2.0] {
            let op = ModularityOperator::new(&g, theta).unwrap();
            let mut y = vec![0.0; 4];
            op.apply(&[1.0; 4], &mut y);
            for &v in &y {
                assert!((v - 2.0 * (1.0 - theta)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_vector_maps_to_zero() {
        let g = path3();
        let op = ModularityOperator::new(&g, 1.7).unwrap();
        let mut y = vec![1.0; 3];
        op.apply(&[0.0; 3], &mut y);
        assert_eq!(y, vec![0.0; 3]);
    }

    #[test]
    fn empty_graph_rejected() {
        let g = Graph::from_edges(3, &[], None, Provenance::External).unwrap();
        assert!(ModularityOperator::new(&g, 1.0).is_err());
    }

    #[test]
    fn operator_symmetry_random_vectors() {
        let mut rng = rng_from_seed(7);
        let mut edges = Vec::new();
        let n = 40u32;
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < 0.15 {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(n as usize, &edges, None, Provenance::External).unwrap();
        let op = ModularityOperator::new(&g, 1.3).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
            let mut bx = vec![0.0; n as usize];
            let mut by = vec![0.0; n as usize];
            op.apply(&x, &mut bx);
            op.apply(&y, &mut by);
            let ybx: f64 = y.iter().zip(&bx).map(|(a, b)| a * b).sum();
            let xby: f64 = x.iter().zip(&by).map(|(a, b)| a * b).sum();
            assert!((ybx - xby).abs() <= 1e-10 * n as f64);
        }
    }
}
