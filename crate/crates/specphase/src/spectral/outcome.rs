//! Sign partitioning and statistics of a leading eigenvector.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::lanczos::{leading_eigenpair, LanczosConfig};
use super::operators::ModularityOperator;

/// Leading eigenpair of the modularity matrix with its partition and
/// statistics. `vector` is normalized to `Σ xᵢ² = N`; `residual` is
/// `‖Bx − λx‖ / √N` in that normalization.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralOutcome {
    pub lambda1: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub partition: Vec<u8>,
    pub unpartitioned: bool,
    /// Fraction of correctly classified vertices, when planted labels exist.
    pub overlap: Option<f64>,
    pub ipr: f64,
    /// |⟨1|x⟩| / N for the Σx²=N normalization.
    pub ones_alignment: f64,
    /// Leading Ritz gap below 10·tol; any vector in the eigenspace is
    /// reported.
    pub degenerate: bool,
}

/// Sign partition: label 1 for positive entries, 2 for negative; exact
/// zeros join the majority sign (tie → 1). `unpartitioned` is true when
/// all nonzero entries share one sign.
pub fn partition_from_vector(x: &[f64]) -> Result<(Vec<u8>, bool)> {
    if x.is_empty() {
        return Err(Error::Parameter("empty vector".into()));
    }
    let pos = x.iter().filter(|&&v| v > 0.0).count();
    let neg = x.iter().filter(|&&v| v < 0.0).count();
    if pos + neg == 0 {
        return Err(Error::DegenerateVector("all-zero vector has no sign partition".into()));
    }
    let zero_label: u8 = if neg > pos { 2 } else { 1 };
    let labels: Vec<u8> = x
        .iter()
        .map(|&v| {
            if v > 0.0 {
                1
            } else if v < 0.0 {
                2
            } else {
                zero_label
            }
        })
        .collect();
    let unpartitioned = pos == 0 || neg == 0;
    Ok((labels, unpartitioned))
}

/// Fraction of correctly classified vertices, maximized over the global
/// label swap.
pub fn overlap(partition: &[u8], planted: &[u8]) -> f64 {
    debug_assert_eq!(partition.len(), planted.len());
    let n = partition.len();
    let matches = partition.iter().zip(planted).filter(|(a, b)| a == b).count();
    let m = matches as f64 / n as f64;
    m.max(1.0 - m)
}

/// Inverse participation ratio `Σxᵢ⁴ / (Σxᵢ²)²`; scale-invariant.
pub fn ipr(x: &[f64]) -> Result<f64> {
    let s2: f64 = x.iter().map(|&v| v * v).sum();
    if s2 == 0.0 {
        return Err(Error::DegenerateVector("IPR of the zero vector".into()));
    }
    let s4: f64 = x.iter().map(|&v| v * v * v * v).sum();
    Ok(s4 / (s2 * s2))
}

/// `|⟨1|x⟩| / N` for a vector with `Σx² = N`; 1 on the uniform vector.
pub fn ones_alignment(x: &[f64]) -> f64 {
    let s: f64 = x.iter().sum();
    s.abs() / x.len() as f64
}

/// Solve the leading eigenpair of the modularity matrix at resolution θ
/// and assemble the full outcome.
pub fn spectral_outcome(g: &Graph, theta: f64, cfg: &LanczosConfig) -> Result<SpectralOutcome> {
    let op = ModularityOperator::new(g, theta)?;
    let pair = leading_eigenpair(&op, cfg)?;
    let n = g.n_nodes();

    // rescale to Σx² = N, sign convention: largest-magnitude entry positive
    let mut x = pair.vector;
    let scale = (n as f64).sqrt();
    for v in x.iter_mut() {
        *v *= scale;
    }
    let mut imax = 0usize;
    for (i, &v) in x.iter().enumerate() {
        if v.abs() > x[imax].abs() {
            imax = i;
        }
    }
    if x[imax] < 0.0 {
        for v in x.iter_mut() {
            *v = -*v;
        }
    }

    let (partition, unpartitioned) = partition_from_vector(&x)?;
    let overlap_val = g.planted_labels().map(|pl| overlap(&partition, pl));
    let ipr_val = ipr(&x)?;
    let ones = ones_alignment(&x);
    Ok(SpectralOutcome {
        lambda1: pair.lambda,
        residual: pair.residual,
        partition,
        unpartitioned,
        overlap: overlap_val,
        ipr: ipr_val,
        ones_alignment: ones,
        degenerate: pair.degenerate,
        vector: x,
    })
}

/// Eigenvector dump: header then one float per line, 17 significant digits.
pub fn write_eigenvector<W: Write>(mut w: W, out: &SpectralOutcome) -> Result<()> {
    writeln!(
        w,
        "# lambda={:.16e} residual={:.16e} n={}",
        out.lambda1,
        out.residual,
        out.vector.len()
    )?;
    for &v in &out.vector {
        writeln!(w, "{v:.16e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Provenance;

    #[test]
    fn partition_rules() {
        let (p, u) = partition_from_vector(&[0.3, -0.1, 0.7]).unwrap();
        assert_eq!(p, vec![1, 2, 1]);
        assert!(!u);

        let (p, u) = partition_from_vector(&[0.3, 0.1, 0.7]).unwrap();
        assert_eq!(p, vec![1, 1, 1]);
        assert!(u);

        let (p, u) = partition_from_vector(&[0.3, 0.0, 0.7]).unwrap();
        assert_eq!(p, vec![1, 1, 1]);
        assert!(u);

        assert!(matches!(
            partition_from_vector(&[0.0, 0.0]),
            Err(Error::DegenerateVector(_))
        ));
    }

    #[test]
    fn zero_joins_majority_negative_side() {
        let (p, _) = partition_from_vector(&[-0.5, 0.0, -0.2, 0.9]).unwrap();
        assert_eq!(p, vec![2, 2, 2, 1]);
    }

    #[test]
    fn overlap_swap_invariance() {
        let a = vec![1u8, 1, 2, 2];
        let b = vec![2u8, 2, 1, 1];
        assert_eq!(overlap(&a, &a), 1.0);
        assert_eq!(overlap(&a, &b), 1.0);
        let c = vec![1u8, 2, 2, 2];
        assert_eq!(overlap(&a, &c), 0.75);
    }

    #[test]
    fn ipr_limits() {
        let n = 100;
        let uniform = vec![1.0; n];
        assert!((ipr(&uniform).unwrap() - 1.0 / n as f64).abs() < 1e-15);
        let mut onehot = vec![0.0; n];
        onehot[3] = 2.5;
        assert_eq!(ipr(&onehot).unwrap(), 1.0);
        assert!((ipr(&[1.0, 1.0, 0.0, 0.0]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ipr_scale_invariant() {
        let x = [0.3, -1.2, 0.7, 2.0];
        let y: Vec<f64> = x.iter().map(|v| v * 17.3).collect();
        assert!((ipr(&x).unwrap() - ipr(&y).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn k3_outcome() {
        // K₃ at θ=1: λ₁ = 0 with the 1-vector; unpartitioned
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], None, Provenance::External)
            .unwrap();
        let out = spectral_outcome(&g, 1.0, &LanczosConfig::default()).unwrap();
        assert!(out.lambda1.abs() < 1e-8, "λ₁ = {}", out.lambda1);
        assert!(out.unpartitioned);
        assert!(out.ones_alignment > 0.999);
        // Σx² = N
        let s2: f64 = out.vector.iter().map(|v| v * v).sum();
        assert!((s2 - 3.0).abs() < 1e-8);
    }

    #[test]
    fn two_disjoint_k4_detects_split() {
        let mut edges = Vec::new();
        for b in [0u32, 4] {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    edges.push((b + i, b + j));
                }
            }
        }
        let labels = vec![1u8, 1, 1, 1, 2, 2, 2, 2];
        let g = Graph::from_edges(8, &edges, Some(labels), Provenance::External).unwrap();
        let out = spectral_outcome(&g, 1.0, &LanczosConfig::default()).unwrap();
        assert!((out.lambda1 - 3.0).abs() < 1e-8, "λ₁ = {}", out.lambda1);
        assert!(!out.unpartitioned);
        assert_eq!(out.overlap, Some(1.0));
        assert!(out.ones_alignment < 1e-6);
    }

    #[test]
    fn eigenvector_dump_format() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], None, Provenance::External)
            .unwrap();
        let out = spectral_outcome(&g, 1.0, &LanczosConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_eigenvector(&mut buf, &out).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("# lambda=") && header.ends_with("n=3"), "{header}");
        assert_eq!(lines.count(), 3);
    }
}
