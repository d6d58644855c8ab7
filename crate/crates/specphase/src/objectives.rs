//! Exact evaluation of the discrete objectives — modularity with a
//! resolution parameter and the normalized cut — plus an exhaustive
//! optimizer for small graphs.
//!
//! All bilinear forms (`sᵀAs`, `cᵀs`, cut sizes, side volumes) are integer
//! quantities and are computed in integer arithmetic; objective values are
//! compared as exact fractions so that optimum sets are free of float-tie
//! artifacts.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A two-sided labeling with the spin convention label 1 ↦ +1, 2 ↦ −1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    labels: Vec<u8>,
}

impl Bipartition {
    pub fn new(labels: Vec<u8>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Parameter("empty labeling".into()));
        }
        if labels.iter().any(|&l| l != 1 && l != 2) {
            return Err(Error::Parameter("labels must be 1 or 2".into()));
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn spins(&self) -> Vec<i8> {
        self.labels.iter().map(|&l| if l == 1 { 1 } else { -1 }).collect()
    }

    /// All nodes on one side.
    pub fn is_unpartitioned(&self) -> bool {
        self.labels.iter().all(|&l| l == self.labels[0])
    }
}

/// Integer bilinear statistics of a bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinStats {
    /// sᵀAs (each edge counted twice, signed).
    pub s_a_s: i64,
    /// cᵀs.
    pub c_s: i64,
    /// Directly counted cross edges |E(S₁,S₂)|.
    pub cut: i64,
    /// Volumes of the two sides.
    pub k1: i64,
    pub k2: i64,
}

fn spin_stats(g: &Graph, part: &Bipartition) -> SpinStats {
    let labels = part.labels();
    debug_assert_eq!(labels.len(), g.n_nodes());
    let mut s_a_s: i64 = 0;
    let mut cut: i64 = 0;
    for (u, &lu) in labels.iter().enumerate() {
        for &v in g.neighbors(u) {
            let lv = labels[v as usize];
            if lu == lv {
                s_a_s += 1;
            } else {
                s_a_s -= 1;
                if (u as u32) < v {
                    cut += 1;
                }
            }
        }
    }
    let mut c_s: i64 = 0;
    let mut k1: i64 = 0;
    let mut k2: i64 = 0;
    for (u, &l) in labels.iter().enumerate() {
        let d = g.degree(u) as i64;
        if l == 1 {
            c_s += d;
            k1 += d;
        } else {
            c_s -= d;
            k2 += d;
        }
    }
    SpinStats { s_a_s, c_s, cut, k1, k2 }
}

/// Modularity in the spin form `sᵀAs − θ (cᵀs)² / K` (partition-independent
/// constants dropped).
pub fn modularity_q(g: &Graph, part: &Bipartition, theta: f64) -> f64 {
    let st = spin_stats(g, part);
    let k = g.total_degree() as f64;
    st.s_a_s as f64 - theta * (st.c_s as f64).powi(2) / k
}

/// Normalized cut `K · |E(S₁,S₂)| / (K₁ K₂)`.
pub fn ncut(g: &Graph, part: &Bipartition) -> Result<f64> {
    let st = spin_stats(g, part);
    if st.k1 == 0 || st.k2 == 0 {
        return Err(Error::SingularPartition(
            "a side has zero volume; normalized cut is singular".into(),
        ));
    }
    Ok(g.total_degree() as f64 * st.cut as f64 / (st.k1 as f64 * st.k2 as f64))
}

/// Both routes to (cut, K₁, K₂): direct counting and the spin identities
/// `cut = (K − sᵀAs)/4`, `K₁ = (K + cᵀs)/2`, `K₂ = (K − cᵀs)/2`.
/// The two routes must agree exactly.
pub fn spin_identities(g: &Graph, part: &Bipartition) -> Result<SpinStats> {
    let st = spin_stats(g, part);
    let k = g.total_degree() as i64;
    let cut_id = (k - st.s_a_s) / 4;
    let k1_id = (k + st.c_s) / 2;
    let k2_id = (k - st.c_s) / 2;
    if (k - st.s_a_s) % 4 != 0
        || cut_id != st.cut
        || k1_id != st.k1
        || k2_id != st.k2
    {
        return Err(Error::Domain(format!(
            "spin identity violated: direct (cut={}, K1={}, K2={}) vs identity ({cut_id}, {k1_id}, {k2_id})",
            st.cut, st.k1, st.k2
        )));
    }
    Ok(st)
}

/// An exact rational with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parameter("zero denominator".into()));
        }
        let (mut num, mut den) = (num, den);
        if den < 0 {
            num = -num;
            den = -den;
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        Ok(Self { num: num / g, den: den / g })
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact fraction used for objective-value comparison (i128 to absorb
/// products of volumes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frac {
    pub num: i128,
    /// always positive
    pub den: i128,
}

impl Frac {
    fn new(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if den < 0 {
            Self { num: -num, den: -den }
        } else {
            Self { num, den }
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn cmp_frac(&self, other: &Frac) -> std::cmp::Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// Objective to optimize exhaustively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    /// Minimize the normalized cut over proper bipartitions.
    Ncut,
    /// Maximize Q_θ with an exact rational resolution parameter.
    Modularity(Rational),
    /// Maximize Q_θ with a float θ; ties use relative tolerance 1e−12.
    ModularityFloat(f64),
}

/// Result of exhaustive enumeration: the optimal value and every optimal
/// labeling (node 0 fixed to label 1 to quotient the global swap).
#[derive(Debug, Clone)]
pub struct Optima {
    pub value: f64,
    pub optima: Vec<Bipartition>,
}

const MAX_EXHAUSTIVE_NODES: usize = 20;

/// Enumerate all `2^(N−1) − 1` proper bipartitions and return every
/// argmin (ncut) or argmax (modularity) with the optimal value.
pub fn exhaustive_optima(g: &Graph, objective: Objective) -> Result<Optima> {
    let n = g.n_nodes();
    if n > MAX_EXHAUSTIVE_NODES {
        return Err(Error::Capacity(format!(
            "exhaustive enumeration supports N <= {MAX_EXHAUSTIVE_NODES}, got {n}"
        )));
    }
    if n < 2 {
        return Err(Error::Parameter("need at least two nodes".into()));
    }
    let k = g.total_degree() as i128;
    if k == 0 {
        return Err(Error::Parameter("graph has no edges".into()));
    }

    let mut best: Option<Frac> = None;
    let mut best_float: Option<f64> = None;
    let mut argopt: Vec<Vec<u8>> = Vec::new();

    for mask in 1u32..(1u32 << (n - 1)) {
        let mut labels = vec![1u8; n];
        for i in 0..n - 1 {
            if mask & (1 << i) != 0 {
                labels[i + 1] = 2;
            }
        }
        let part = Bipartition { labels };
        let st = spin_stats(g, &part);
        match objective {
            Objective::Ncut => {
                if st.k1 == 0 || st.k2 == 0 {
                    continue;
                }
                let val = Frac::new(k * st.cut as i128, st.k1 as i128 * st.k2 as i128);
                match &best {
                    None => {
                        best = Some(val);
                        argopt = vec![part.labels.clone()];
                    }
                    Some(b) => match val.cmp_frac(b) {
                        std::cmp::Ordering::Less => {
                            best = Some(val);
                            argopt = vec![part.labels.clone()];
                        }
                        std::cmp::Ordering::Equal => argopt.push(part.labels.clone()),
                        std::cmp::Ordering::Greater => {}
                    },
                }
            }
            Objective::Modularity(theta) => {
                // Q = (q·K·sᵀAs − p·(cᵀs)²) / (q·K)
                let (p, q) = (theta.num as i128, theta.den as i128);
                let val = Frac::new(
                    q * k * st.s_a_s as i128 - p * (st.c_s as i128) * (st.c_s as i128),
                    q * k,
                );
                match &best {
                    None => {
                        best = Some(val);
                        argopt = vec![part.labels.clone()];
                    }
                    Some(b) => match val.cmp_frac(b) {
                        std::cmp::Ordering::Greater => {
                            best = Some(val);
                            argopt = vec![part.labels.clone()];
                        }
                        std::cmp::Ordering::Equal => argopt.push(part.labels.clone()),
                        std::cmp::Ordering::Less => {}
                    },
                }
            }
            Objective::ModularityFloat(theta) => {
                let val =
                    st.s_a_s as f64 - theta * (st.c_s as f64).powi(2) / k as f64;
                match best_float {
                    None => {
                        best_float = Some(val);
                        argopt = vec![part.labels.clone()];
                    }
                    Some(b) => {
                        let tol = 1e-12 * b.abs().max(val.abs()).max(1.0);
                        if val > b + tol {
                            best_float = Some(val);
                            argopt = vec![part.labels.clone()];
                        } else if (val - b).abs() <= tol {
                            argopt.push(part.labels.clone());
                        }
                    }
                }
            }
        }
    }

    let value = match objective {
        Objective::ModularityFloat(_) => {
            best_float.ok_or_else(|| Error::SingularPartition("no proper bipartition".into()))?
        }
        _ => best
            .ok_or_else(|| Error::SingularPartition("no proper bipartition".into()))?
            .to_f64(),
    };
    Ok(Optima { value, optima: argopt.into_iter().map(|labels| Bipartition { labels }).collect() })
}

/// Exact optimal normalized cut θ* as a reduced fraction `K·cut/(K₁K₂)`.
pub fn exact_min_ncut(g: &Graph) -> Result<Rational> {
    let n = g.n_nodes();
    if n > MAX_EXHAUSTIVE_NODES {
        return Err(Error::Capacity(format!("N = {n} too large")));
    }
    let k = g.total_degree() as i128;
    let mut best: Option<Frac> = None;
    for mask in 1u32..(1u32 << (n - 1)) {
        let mut labels = vec![1u8; n];
        for i in 0..n - 1 {
            if mask & (1 << i) != 0 {
                labels[i + 1] = 2;
            }
        }
        let st = spin_stats(g, &Bipartition { labels });
        if st.k1 == 0 || st.k2 == 0 {
            continue;
        }
        let val = Frac::new(k * st.cut as i128, st.k1 as i128 * st.k2 as i128);
        if best.map_or(true, |b| val.cmp_frac(&b) == std::cmp::Ordering::Less) {
            best = Some(val);
        }
    }
    let b = best.ok_or_else(|| Error::SingularPartition("no proper bipartition".into()))?;
    let g128 = gcd(b.num.unsigned_abs() as u64, b.den.unsigned_abs() as u64).max(1) as i128;
    Rational::new((b.num / g128) as i64, (b.den / g128) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Provenance;

    fn two_k4() -> Graph {
        let mut edges = Vec::new();
        for b in [0u32, 4] {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    edges.push((b + i, b + j));
                }
            }
        }
        Graph::from_edges(8, &edges, None, Provenance::External).unwrap()
    }

    fn cycle4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], None, Provenance::External)
            .unwrap()
    }

    #[test]
    fn modularity_null_model_exactness() {
        // unpartitioned s = 1, θ=1: Q = K − K²/K = 0
        let g = cycle4();
        let part = Bipartition::new(vec![1, 1, 1, 1]).unwrap();
        assert_eq!(modularity_q(&g, &part, 1.0), 0.0);
    }

    #[test]
    fn two_k4_component_split() {
        let g = two_k4();
        let part = Bipartition::new(vec![1, 1, 1, 1, 2, 2, 2, 2]).unwrap();
        assert_eq!(modularity_q(&g, &part, 1.0), 24.0);
        assert_eq!(ncut(&g, &part).unwrap(), 0.0);
    }

    #[test]
    fn cycle4_diameter_split() {
        let g = cycle4();
        let part = Bipartition::new(vec![1, 1, 2, 2]).unwrap();
        assert_eq!(modularity_q(&g, &part, 1.0), 0.0);
        assert_eq!(ncut(&g, &part).unwrap(), 1.0);
        let st = spin_identities(&g, &part).unwrap();
        assert_eq!(st.cut, 2);
        assert_eq!((st.k1, st.k2), (4, 4));
    }

    #[test]
    fn singular_unpartitioned_ncut() {
        let g = cycle4();
        let part = Bipartition::new(vec![1, 1, 1, 1]).unwrap();
        assert!(matches!(ncut(&g, &part), Err(Error::SingularPartition(_))));
    }

    #[test]
    fn all_ones_spin_identity() {
        let g = cycle4();
        let part = Bipartition::new(vec![1; 4]).unwrap();
        let st = spin_identities(&g, &part).unwrap();
        assert_eq!(st.k1, 8);
        assert_eq!(st.k2, 0);
        assert_eq!(st.cut, 0);
    }

    #[test]
    fn exhaustive_two_k4_ncut() {
        let g = two_k4();
        let opt = exhaustive_optima(&g, Objective::Ncut).unwrap();
        assert_eq!(opt.value, 0.0);
        assert_eq!(opt.optima.len(), 1);
        assert_eq!(opt.optima[0].labels(), &[1, 1, 1, 1, 2, 2, 2, 2]);
    }

    #[test]
    fn exhaustive_cycle4_ncut_two_diameter_splits() {
        let g = cycle4();
        let opt = exhaustive_optima(&g, Objective::Ncut).unwrap();
        assert_eq!(opt.value, 1.0);
        let mut sets: Vec<&[u8]> = opt.optima.iter().map(|b| b.labels()).collect();
        sets.sort();
        assert_eq!(sets, vec![&[1u8, 1, 2, 2][..], &[1u8, 2, 2, 1][..]]);
    }

    #[test]
    fn equivalence_on_cycle4() {
        // θ* = min ncut = 1; argmax Q_{θ*} must equal the ncut argmin set
        let g = cycle4();
        let theta_star = exact_min_ncut(&g).unwrap();
        assert_eq!((theta_star.num, theta_star.den), (1, 1));
        let ncut_opt = exhaustive_optima(&g, Objective::Ncut).unwrap();
        let mod_opt = exhaustive_optima(&g, Objective::Modularity(theta_star)).unwrap();
        let mut a: Vec<_> = ncut_opt.optima.iter().map(|b| b.labels().to_vec()).collect();
        let mut b: Vec<_> = mod_opt.optima.iter().map(|b| b.labels().to_vec()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn capacity_error() {
        let edges: Vec<(u32, u32)> = (0..24).map(|i| (i, (i + 1) % 25)).collect();
        let g = Graph::from_edges(25, &edges, None, Provenance::External).unwrap();
        assert!(matches!(exhaustive_optima(&g, Objective::Ncut), Err(Error::Capacity(_))));
    }

    #[test]
    fn q_monotone_in_theta() {
        let g = cycle4();
        // c s ≠ 0 partition: {0} vs rest
        let part = Bipartition::new(vec![1, 2, 2, 2]).unwrap();
        let q1 = modularity_q(&g, &part, 0.5);
        let q2 = modularity_q(&g, &part, 1.0);
        let q3 = modularity_q(&g, &part, 2.0);
        assert!(q1 > q2 && q2 > q3);
        // cᵀs = 0 partition: constant in θ
        let bal = Bipartition::new(vec![1, 1, 2, 2]).unwrap();
        assert_eq!(modularity_q(&g, &bal, 0.5), modularity_q(&g, &bal, 2.0));
    }
}
