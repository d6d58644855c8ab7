//! Finite-support degree distributions feeding the EMA solver.

use crate::error::{Error, Result};

/// A finite-support degree distribution: weights `b_t` on strictly
/// increasing degrees `c_t >= 1`, with cached mean degree.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    entries: Vec<(u32, f64)>,
    mean_degree: f64,
}

impl DegreeDistribution {
    /// Build from `(degree, weight)` pairs, validating the invariants:
    /// positive weights summing to one, strictly increasing degrees >= 1.
    pub fn new(entries: Vec<(u32, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Parameter("degree distribution has empty support".into()));
        }
        let mut total = 0.0;
        let mut mean = 0.0;
        let mut prev: Option<u32> = None;
        for &(c, b) in &entries {
            if c < 1 {
                return Err(Error::Parameter(format!("degree {c} < 1 in distribution")));
            }
            if let Some(p) = prev {
                if c <= p {
                    return Err(Error::Parameter("degrees must be strictly increasing".into()));
                }
            }
            if b <= 0.0 {
                return Err(Error::Parameter(format!("weight {b} for degree {c} not positive")));
            }
            prev = Some(c);
            total += b;
            mean += b * c as f64;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { entries, mean_degree: mean })
    }

    /// Single-atom distribution of a `c`-regular graph.
    pub fn regular(c: u32) -> Result<Self> {
        Self::new(vec![(c, 1.0)])
    }

    /// Poisson(c̄) restricted to degrees >= 1, truncated at the smallest
    /// `t_max` whose tail mass is below `epsilon`, then renormalized.
    /// Degree-0 mass is dropped: isolated nodes carry no stubs and do not
    /// enter the cavity structure.
    pub fn poisson_truncated(c_bar: f64, epsilon: f64) -> Result<Self> {
        if !(c_bar > 0.0) {
            return Err(Error::Parameter(format!("mean degree {c_bar} must be positive")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Parameter(format!("truncation epsilon {epsilon} not in (0,1)")));
        }
        // pmf via stable recurrence p_{t+1} = p_t * c̄ / (t+1)
        let mut pmf = vec![(-c_bar).exp()];
        let mut cum = pmf[0];
        let mut t = 0usize;
        while 1.0 - cum >= epsilon && t < 10_000 {
            let next = pmf[t] * c_bar / (t as f64 + 1.0);
            pmf.push(next);
            cum += next;
            t += 1;
        }
        let entries: Vec<(u32, f64)> = pmf
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, &p)| (d as u32, p))
            .collect();
        let mass: f64 = entries.iter().map(|&(_, p)| p).sum();
        let entries = entries.into_iter().map(|(d, p)| (d, p / mass)).collect();
        Self::new(entries)
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn mean_degree(&self) -> f64 {
        self.mean_degree
    }

    /// Largest degree in the support.
    pub fn max_degree(&self) -> u32 {
        self.entries.last().map(|&(c, _)| c).unwrap()
    }

    /// True when the support is a single atom (regular graph).
    pub fn is_regular(&self) -> bool {
        self.entries.len() == 1
    }

    /// Sub-distribution truncated at maximum degree `t`, renormalized.
    pub fn truncated_at(&self, t: u32) -> Result<Self> {
        let kept: Vec<(u32, f64)> =
            self.entries.iter().copied().filter(|&(c, _)| c <= t).collect();
        if kept.is_empty() {
            return Err(Error::Parameter(format!("no support at or below degree {t}")));
        }
        let mass: f64 = kept.iter().map(|&(_, b)| b).sum();
        Self::new(kept.into_iter().map(|(c, b)| (c, b / mass)).collect())
    }
}
