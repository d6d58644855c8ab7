//! Sparse undirected simple graphs with optional planted block labels,
//! plus the edge-list file format.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dist::DegreeDistribution;
use crate::error::{Error, Result};

/// Which ensemble a planted graph is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PlantedKind {
    /// Random `c`-regular with exactly `round(γN)` cross edges.
    Regular { c: u32 },
    /// Bernoulli pairs: `c_in/N` within blocks, `c_out/N` across.
    Sbm { c_in: f64, c_out: f64 },
}

/// Parameters of a planted two-block random graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub n_nodes: usize,
    /// Fraction of nodes in block 1; block 2 holds the rest.
    pub p1: f64,
    pub kind: PlantedKind,
    /// Structure strength Γ in [0,1]; used by the Regular kind only.
    pub gamma_struct: f64,
    pub seed: u64,
}

impl PlantedSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 {
            return Err(Error::Parameter("N must be positive".into()));
        }
        if !(self.p1 > 0.0 && self.p1 < 1.0) {
            return Err(Error::Parameter(format!("p1 = {} not in (0,1)", self.p1)));
        }
        match self.kind {
            PlantedKind::Regular { c } => {
                if c < 3 {
                    return Err(Error::Parameter(format!("regular degree c = {c} must be >= 3")));
                }
                if !(0.0..=1.0).contains(&self.gamma_struct) {
                    return Err(Error::Parameter(format!(
                        "Gamma = {} not in [0,1]",
                        self.gamma_struct
                    )));
                }
            }
            PlantedKind::Sbm { c_in, c_out } => {
                let n = self.n_nodes as f64;
                if !(c_in >= 0.0 && c_out >= 0.0) {
                    return Err(Error::Parameter("c_in and c_out must be nonnegative".into()));
                }
                if c_in / n > 1.0 || c_out / n > 1.0 {
                    return Err(Error::Parameter(
                        "connection probability above 1 (c/N > 1)".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Number of block-1 nodes: `round(p1 * N)`.
    pub fn n_block1(&self) -> usize {
        (self.p1 * self.n_nodes as f64).round() as usize
    }
}

/// Where a graph came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    Planted(PlantedSpec),
    External,
}

/// Simple undirected graph with sorted per-node neighbor lists.
#[derive(Debug, Clone)]
pub struct Graph {
    n_nodes: usize,
    adjacency: Vec<Vec<u32>>,
    degrees: Vec<u32>,
    total_degree: u64,
    planted_labels: Option<Vec<u8>>,
    provenance: Provenance,
}

impl Graph {
    /// Build from an edge list; rejects self-loops and duplicate edges.
    pub fn from_edges(
        n_nodes: usize,
        edges: &[(u32, u32)],
        planted_labels: Option<Vec<u8>>,
        provenance: Provenance,
    ) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n_nodes];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::Parameter(format!("self-loop at node {u}")));
            }
            let (u, v) = (u as usize, v as usize);
            if u >= n_nodes || v >= n_nodes {
                return Err(Error::Parameter(format!("edge ({u},{v}) out of range")));
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
        for (i, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parameter(format!("duplicate edge at node {i}")));
            }
        }
        if let Some(labels) = &planted_labels {
            if labels.len() != n_nodes {
                return Err(Error::Parameter("label sequence length mismatch".into()));
            }
            if labels.iter().any(|&l| l != 1 && l != 2) {
                return Err(Error::Parameter("labels must be 1 or 2".into()));
            }
        }
        let degrees: Vec<u32> = adjacency.iter().map(|n| n.len() as u32).collect();
        let total_degree = degrees.iter().map(|&d| d as u64).sum();
        Ok(Self { n_nodes, adjacency, degrees, total_degree, planted_labels, provenance })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.adjacency[u]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, u: usize) -> u32 {
        self.degrees[u]
    }

    /// Volume K = sum of degrees = 2 |E|.
    pub fn total_degree(&self) -> u64 {
        self.total_degree
    }

    pub fn n_edges(&self) -> u64 {
        self.total_degree / 2
    }

    pub fn planted_labels(&self) -> Option<&[u8]> {
        self.planted_labels.as_deref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges as sorted `(u, v)` pairs with `u < v`, lexicographic order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.n_edges() as usize);
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs {
                if (u as u32) < v {
                    out.push((u as u32, v));
                }
            }
        }
        out
    }

    /// Number of edges whose endpoints carry different planted labels.
    pub fn cross_edge_count(&self) -> Option<u64> {
        let labels = self.planted_labels.as_deref()?;
        let mut count = 0;
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs {
                if (u as u32) < v && labels[u] != labels[v as usize] {
                    count += 1;
                }
            }
        }
        Some(count)
    }

    /// Exact per-degree node fractions; mean equals ΣcᵢN exactly.
    pub fn empirical_degree_distribution(&self) -> Result<DegreeDistribution> {
        if self.n_nodes == 0 {
            return Err(Error::Parameter("empty graph".into()));
        }
        let max_d = *self.degrees.iter().max().unwrap() as usize;
        let mut counts = vec![0u64; max_d + 1];
        for &d in &self.degrees {
            counts[d as usize] += 1;
        }
        let n = self.n_nodes as f64;
        let entries: Vec<(u32, f64)> = counts
            .iter()
            .enumerate()
            .filter(|&(d, &k)| d >= 1 && k > 0)
            .map(|(d, &k)| (d as u32, k as f64 / n))
            .collect();
        // Degree-0 nodes are excluded from the support; renormalize.
        let mass: f64 = entries.iter().map(|&(_, b)| b).sum();
        if mass == 0.0 {
            return Err(Error::Parameter("graph has no edges".into()));
        }
        DegreeDistribution::new(entries.into_iter().map(|(d, b)| (d, b / mass)).collect())
    }

    /// Connectivity of the subgraph induced on non-isolated nodes.
    pub fn connected_on_nonisolated(&self) -> bool {
        let start = match (0..self.n_nodes).find(|&u| self.degrees[u] > 0) {
            Some(u) => u,
            None => return true,
        };
        let mut seen = vec![false; self.n_nodes];
        let mut stack = vec![start];
        seen[start] = true;
        let mut visited = 0usize;
        while let Some(u) = stack.pop() {
            visited += 1;
            for &v in &self.adjacency[u] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    stack.push(v as usize);
                }
            }
        }
        let nonisolated = self.degrees.iter().filter(|&&d| d > 0).count();
        visited == nonisolated
    }

    /// Serialize to the edge-list text format.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        let mut buf = String::new();
        writeln!(buf, "# specphase-graph N={} K={}", self.n_nodes, self.total_degree).unwrap();
        for (u, v) in self.edges() {
            writeln!(buf, "{u} {v}").unwrap();
        }
        if let Some(labels) = &self.planted_labels {
            buf.push_str("# labels\n");
            for &l in labels {
                writeln!(buf, "{l}").unwrap();
            }
        }
        w.write_all(buf.as_bytes())?;
        Ok(())
    }

    pub fn write_edge_list_file<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_edge_list(std::io::BufWriter::new(f))
    }

    /// Parse the edge-list text format.
    pub fn read_edge_list<R: Read>(r: R) -> Result<Self> {
        let mut lines = BufReader::new(r).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge-list file".into()))??;
        let rest = header
            .strip_prefix("# specphase-graph ")
            .ok_or_else(|| Error::Parse(format!("bad header: {header}")))?;
        let mut n_nodes = None;
        let mut k_expected = None;
        for tok in rest.split_whitespace() {
            if let Some(v) = tok.strip_prefix("N=") {
                n_nodes = Some(v.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?);
            } else if let Some(v) = tok.strip_prefix("K=") {
                k_expected = Some(v.parse::<u64>().map_err(|e| Error::Parse(e.to_string()))?);
            }
        }
        let n_nodes = n_nodes.ok_or_else(|| Error::Parse("header missing N=".into()))?;
        let k_expected = k_expected.ok_or_else(|| Error::Parse("header missing K=".into()))?;

        let mut edges = Vec::new();
        let mut labels: Option<Vec<u8>> = None;
        let mut in_labels = false;
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line == "# labels" {
                in_labels = true;
                labels = Some(Vec::with_capacity(n_nodes));
                continue;
            }
            if in_labels {
                let l: u8 = line.parse().map_err(|_| Error::Parse(format!("bad label: {line}")))?;
                labels.as_mut().unwrap().push(l);
            } else {
                let mut it = line.split_whitespace();
                let u: u32 = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
                let v: u32 = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
                if u >= v {
                    return Err(Error::Parse(format!("edge line not u < v: {line}")));
                }
                edges.push((u, v));
            }
        }
        let g = Graph::from_edges(n_nodes, &edges, labels, Provenance::External)?;
        if g.total_degree != k_expected {
            return Err(Error::Parse(format!(
                "header K={} but edges give K={}",
                k_expected, g.total_degree
            )));
        }
        Ok(g)
    }

    pub fn read_edge_list_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        Graph::read_edge_list(std::fs::File::open(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)], None, Provenance::External).unwrap()
    }

    #[test]
    fn basic_invariants() {
        let g = path3();
        assert_eq!(g.n_nodes(), 3);
        assert_eq!(g.total_degree(), 4);
        assert_eq!(g.degrees(), &[1, 2, 1]);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(Graph::from_edges(2, &[(0, 0)], None, Provenance::External).is_err());
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)], None, Provenance::External).is_err());
    }

    #[test]
    fn empirical_distribution_path() {
        let g = path3();
        let d = g.empirical_degree_distribution().unwrap();
        let want = [(1u32, 2.0 / 3.0), (2u32, 1.0 / 3.0)];
        for (got, want) in d.entries().iter().zip(want.iter()) {
            assert_eq!(got.0, want.0);
            assert!((got.1 - want.1).abs() < 1e-15);
        }
        assert!((d.mean_degree() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn edge_list_round_trip_bit_exact() {
        let g = Graph::from_edges(
            4,
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
            Some(vec![1, 1, 2, 2]),
            Provenance::External,
        )
        .unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let g2 = Graph::read_edge_list(&buf[..]).unwrap();
        let mut buf2 = Vec::new();
        g2.write_edge_list(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
        assert_eq!(g2.planted_labels(), Some(&[1u8, 1, 2, 2][..]));
    }

    #[test]
    fn connectivity() {
        assert!(path3().connected_on_nonisolated());
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)], None, Provenance::External).unwrap();
        assert!(!g.connected_on_nonisolated());
        // isolated node does not break connectivity of the rest
        let g = Graph::from_edges(3, &[(0, 1)], None, Provenance::External).unwrap();
        assert!(g.connected_on_nonisolated());
    }
}
