//! Planted two-block random graph generators and parameterization
//! conversions.
//!
//! Two ensembles are supported:
//!
//! * random `c`-regular graphs with exactly `round(γN)` edges between the
//!   blocks, the rest matched within each block;
//! * the sparse stochastic block model with Bernoulli pair probabilities
//!   `c_in/N` within and `c_out/N` across blocks.
//!
//! Both are deterministic functions of `(spec, seed)`.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, PlantedKind, PlantedSpec, Provenance};
use crate::rng::{derive_seed, rng_from_seed};

/// Round half to even, as used for the cross-edge count `round(γN)`.
fn round_half_even(x: f64) -> i64 {
    let floor = x.floor();
    let frac = x - floor;
    if (frac - 0.5).abs() < 1e-9 {
        let f = floor as i64;
        if f % 2 == 0 {
            f
        } else {
            f + 1
        }
    } else {
        x.round() as i64
    }
}

/// Conversions among the three equivalent structure-strength
/// parameterizations at fixed `(c̄, p1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureStrength {
    pub gamma_struct: f64,
    /// Cross-edge density γ (cross edges = γN).
    pub gamma_raw: f64,
    pub cin_minus_cout: f64,
}

/// Γ = 1 − γ/(c̄ p₁ p₂); for p1 = p2 = 1/2, c_in − c_out = 2 c̄ Γ.
pub fn from_gamma_struct(c_bar: f64, p1: f64, gamma_struct: f64) -> Result<StructureStrength> {
    if !(0.0..=1.0).contains(&gamma_struct) {
        return Err(Error::Parameter(format!("Gamma = {gamma_struct} not in [0,1]")));
    }
    let p2 = 1.0 - p1;
    let gamma_raw = c_bar * p1 * p2 * (1.0 - gamma_struct);
    Ok(StructureStrength { gamma_struct, gamma_raw, cin_minus_cout: 2.0 * c_bar * gamma_struct })
}

pub fn from_gamma_raw(c_bar: f64, p1: f64, gamma_raw: f64) -> Result<StructureStrength> {
    if gamma_raw < 0.0 {
        return Err(Error::Parameter(format!("gamma = {gamma_raw} must be nonnegative")));
    }
    let p2 = 1.0 - p1;
    let gamma_struct = 1.0 - gamma_raw / (c_bar * p1 * p2);
    if gamma_struct < -1e-12 {
        return Err(Error::Domain(format!(
            "gamma = {gamma_raw} exceeds the uniform-graph value {}",
            c_bar * p1 * p2
        )));
    }
    from_gamma_struct(c_bar, p1, gamma_struct.max(0.0))
}

/// Inverse of the Fig. 1 axis convention: c_in − c_out > 2c̄ would force a
/// negative c_out and is rejected.
pub fn from_cin_minus_cout(c_bar: f64, p1: f64, diff: f64) -> Result<StructureStrength> {
    if diff < 0.0 {
        return Err(Error::Parameter(format!("c_in - c_out = {diff} must be nonnegative")));
    }
    if diff > 2.0 * c_bar + 1e-12 {
        return Err(Error::Domain(format!(
            "c_in - c_out = {diff} > 2 c̄ = {} implies c_out < 0",
            2.0 * c_bar
        )));
    }
    from_gamma_struct(c_bar, p1, (diff / (2.0 * c_bar)).min(1.0))
}

/// Generate a planted random `c`-regular graph: every node has degree
/// exactly `c` and exactly `round(γN)` edges cross the blocks.
pub fn gen_planted_regular(spec: &PlantedSpec) -> Result<Graph> {
    spec.validate()?;
    let c = match spec.kind {
        PlantedKind::Regular { c } => c as usize,
        _ => return Err(Error::Parameter("spec kind is not Regular".into())),
    };
    let n = spec.n_nodes;
    if (c * n) % 2 != 0 {
        return Err(Error::Infeasible(format!("c*N = {} is odd; no regular graph exists", c * n)));
    }
    let n1 = spec.n_block1();
    let n2 = n - n1;
    if n1 == 0 || n2 == 0 {
        return Err(Error::Parameter("a block is empty".into()));
    }
    let p2 = 1.0 - spec.p1;
    let gamma_raw = c as f64 * spec.p1 * p2 * (1.0 - spec.gamma_struct);
    let mut m_cross = round_half_even(gamma_raw * n as f64) as usize;

    // Re-rounding rule: if the intra-stub parity fails, move one cross edge,
    // preferring -1. With cN even, both blocks fail or neither.
    if (c * n1).saturating_sub(m_cross) % 2 != 0 || (c * n2).saturating_sub(m_cross) % 2 != 0 {
        if m_cross > 0 {
            m_cross -= 1;
        } else {
            m_cross += 1;
        }
    }
    if m_cross > c * n1 || m_cross > c * n2 {
        return Err(Error::Infeasible(format!(
            "cross edges {m_cross} exceed a block's stub count"
        )));
    }
    // Necessary simplicity condition: a node with no cross stub needs c
    // distinct intra neighbors.
    for (nr, name) in [(n1, "block 1"), (n2, "block 2")] {
        if c > nr - 1 && m_cross < nr * (c - (nr - 1)) {
            return Err(Error::Infeasible(format!(
                "{name} has {nr} nodes but intra degree up to {c}; no simple graph exists"
            )));
        }
    }

    let max_attempts = 20;
    for attempt in 0..max_attempts {
        let seed = derive_seed(spec.seed, &[attempt]);
        if let Some(edges) = try_regular_once(n, n1, c, m_cross, seed) {
            let mut labels = vec![2u8; n];
            labels[..n1].fill(1);
            return Graph::from_edges(
                n,
                &edges,
                Some(labels),
                Provenance::Planted(spec.clone()),
            );
        }
    }
    Err(Error::Generation(format!(
        "no simple matching found after {max_attempts} attempts (N={n}, c={c}, cross={m_cross})"
    )))
}

/// One stub-matching attempt with bounded swap repair. Returns `None` when
/// the repair budget is exhausted.
fn try_regular_once(
    n: usize,
    n1: usize,
    c: usize,
    m_cross: usize,
    seed: u64,
) -> Option<Vec<(u32, u32)>> {
    let mut rng = rng_from_seed(seed);

    // Stub lists per block.
    let mut stubs1: Vec<u32> = (0..n1 as u32).flat_map(|u| std::iter::repeat_n(u, c)).collect();
    let mut stubs2: Vec<u32> =
        (n1 as u32..n as u32).flat_map(|u| std::iter::repeat_n(u, c)).collect();
    stubs1.shuffle(&mut rng);
    stubs2.shuffle(&mut rng);

    // First m_cross stubs of each block pair up across; the rest pair within.
    let mut cross: Vec<(u32, u32)> =
        stubs1[..m_cross].iter().zip(&stubs2[..m_cross]).map(|(&a, &b)| (a, b)).collect();
    let mut intra1: Vec<(u32, u32)> =
        stubs1[m_cross..].chunks_exact(2).map(|p| (p[0], p[1])).collect();
    let mut intra2: Vec<(u32, u32)> =
        stubs2[m_cross..].chunks_exact(2).map(|p| (p[0], p[1])).collect();

    let budget = 100 * n;
    let mut spent = 0usize;
    for pool in [&mut intra1, &mut intra2, &mut cross] {
        if !repair_pool(pool, &mut rng, budget, &mut spent) {
            return None;
        }
    }

    // Pools are individually simple; check simplicity across pools
    // (a cross pair can never coincide with an intra pair, so only the
    // three pools' internal duplicates mattered, already repaired).
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(c * n / 2);
    let mut seen = HashSet::with_capacity(c * n / 2);
    for &(a, b) in intra1.iter().chain(&intra2).chain(&cross) {
        let e = if a < b { (a, b) } else { (b, a) };
        if !seen.insert(e) {
            return None;
        }
        edges.push(e);
    }
    Some(edges)
}

/// Resolve self-loops and duplicate pairs within one pairing pool by random
/// edge swaps that preserve both endpoints' degrees and block membership.
fn repair_pool(
    pool: &mut [(u32, u32)],
    rng: &mut impl Rng,
    budget: usize,
    spent: &mut usize,
) -> bool {
    if pool.len() < 2 {
        return pool.iter().all(|&(a, b)| a != b);
    }
    let key = |a: u32, b: u32| if a < b { (a, b) } else { (b, a) };
    loop {
        let mut counts: std::collections::HashMap<(u32, u32), u32> =
            std::collections::HashMap::with_capacity(pool.len());
        let mut bad: Option<usize> = None;
        for (i, &(a, b)) in pool.iter().enumerate() {
            if a == b {
                bad.get_or_insert(i);
                continue;
            }
            let cnt = counts.entry(key(a, b)).or_insert(0);
            *cnt += 1;
            if *cnt > 1 {
                bad.get_or_insert(i);
            }
        }
        let i = match bad {
            None => return true,
            Some(i) => i,
        };
        let mut fixed = false;
        while *spent < budget {
            *spent += 1;
            let j = rng.random_range(0..pool.len());
            if j == i {
                continue;
            }
            // swap second endpoints: (a,b),(x,y) -> (a,y),(x,b)
            let (a, b) = pool[i];
            let (x, y) = pool[j];
            if a == y
                || x == b
                || key(a, y) == key(x, b)
                || counts.contains_key(&key(a, y))
                || counts.contains_key(&key(x, b))
            {
                continue;
            }
            pool[i] = (a, y);
            pool[j] = (x, b);
            fixed = true;
            break;
        }
        if !fixed {
            return false;
        }
    }
}

/// Sample the sparse stochastic block model via geometric skips over each
/// block pair, O(edges) expected time.
pub fn gen_sbm(spec: &PlantedSpec) -> Result<Graph> {
    spec.validate()?;
    let (c_in, c_out) = match spec.kind {
        PlantedKind::Sbm { c_in, c_out } => (c_in, c_out),
        _ => return Err(Error::Parameter("spec kind is not Sbm".into())),
    };
    let n = spec.n_nodes;
    let n1 = spec.n_block1();
    let p_in = c_in / n as f64;
    let p_out = c_out / n as f64;

    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut rng = rng_from_seed(derive_seed(spec.seed, &[0]));

    // within block 1: pairs (i,j), 0 <= i < j < n1
    sample_block_pairs(0, n1 as u32, p_in, &mut rng, &mut edges);
    // within block 2
    sample_block_pairs(n1 as u32, n as u32, p_in, &mut rng, &mut edges);
    // across: i in block 1, j in block 2
    sample_bipartite_pairs(n1 as u32, n as u32, p_out, &mut rng, &mut edges);

    let mut labels = vec![2u8; n];
    labels[..n1].fill(1);
    Graph::from_edges(n, &edges, Some(labels), Provenance::Planted(spec.clone()))
}

/// Geometric skip sampling over the upper-triangle pairs of [lo, hi).
fn sample_block_pairs(lo: u32, hi: u32, p: f64, rng: &mut impl Rng, edges: &mut Vec<(u32, u32)>) {
    if hi <= lo + 1 || p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        for i in lo..hi {
            for j in (i + 1)..hi {
                edges.push((i, j));
            }
        }
        return;
    }
    let ln_q = (1.0 - p).ln();
    let mut i = lo;
    let mut j = lo; // j will advance before the first emit
    loop {
        let u: f64 = rng.random::<f64>();
        let skip = (u.max(f64::MIN_POSITIVE).ln() / ln_q).floor() as u64 + 1;
        let mut jj = j as u64 + skip;
        while jj >= hi as u64 {
            jj -= hi as u64;
            i += 1;
            if i + 1 >= hi {
                return;
            }
            jj += i as u64 + 1;
        }
        j = jj as u32;
        edges.push((i, j));
    }
}

/// Geometric skip sampling over the full grid block1 x block2.
fn sample_bipartite_pairs(
    split: u32,
    n: u32,
    p: f64,
    rng: &mut impl Rng,
    edges: &mut Vec<(u32, u32)>,
) {
    if split == 0 || split == n || p <= 0.0 {
        return;
    }
    let cols = (n - split) as u64;
    let total = split as u64 * cols;
    if p >= 1.0 {
        for i in 0..split {
            for j in split..n {
                edges.push((i, j));
            }
        }
        return;
    }
    let ln_q = (1.0 - p).ln();
    let mut pos: u64 = 0; // 1-based position of next candidate
    loop {
        let u: f64 = rng.random::<f64>();
        let skip = (u.max(f64::MIN_POSITIVE).ln() / ln_q).floor() as u64 + 1;
        pos += skip;
        if pos > total {
            return;
        }
        let idx = pos - 1;
        let i = (idx / cols) as u32;
        let j = split + (idx % cols) as u32;
        edges.push((i, j));
    }
}
