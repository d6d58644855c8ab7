//! Lanczos iteration with full reorthogonalization for the largest
//! algebraic eigenvalue of a symmetric operator.
//!
//! The modularity matrix is indefinite, so power iteration on magnitude is
//! unsafe; Lanczos targets the algebraic extreme directly. Ritz values of
//! the tridiagonal matrix are extracted by Sturm-sequence bisection and the
//! Ritz vector by shifted inverse iteration, both O(k) per step.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

use super::operators::LinearOperator;

#[derive(Debug, Clone, Copy)]
pub struct LanczosConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 0, seed: 0 }
    }
}

impl LanczosConfig {
    /// Default iteration cap: `10·sqrt(N) + 200`.
    pub fn effective_max_iter(&self, n: usize) -> usize {
        if self.max_iter > 0 {
            self.max_iter
        } else {
            (10.0 * (n as f64).sqrt()) as usize + 200
        }
    }
}

/// Converged leading eigenpair. `vector` has unit Euclidean norm; residual
/// is `‖Op x − λ x‖` for that unit vector.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub lambda: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    /// Top Ritz gap fell below `10·tol`: the leading eigenspace may be
    /// degenerate and any vector in it is acceptable.
    pub degenerate: bool,
    pub iterations: usize,
}

/// Largest-algebraic eigenpair of a symmetric operator.
pub fn leading_eigenpair(op: &dyn LinearOperator, cfg: &LanczosConfig) -> Result<EigenPair> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::Parameter("operator dimension is zero".into()));
    }
    if cfg.tol <= 0.0 {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    let max_iter = cfg.effective_max_iter(n).min(n).max(2.min(n));

    let mut rng = rng_from_seed(cfg.seed);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    let mut q = random_unit(&mut rng, n);
    let mut best_residual = f64::INFINITY;

    let mut w = vec![0.0; n];
    for j in 0..max_iter {
        basis.push(q.clone());
        op.apply(&q, &mut w);
        let alpha = dot(&q, &w);
        alphas.push(alpha);

        // Full reorthogonalization, two passes.
        for _ in 0..2 {
            for b in &basis {
                let d = dot(b, &w);
                axpy(&mut w, b, -d);
            }
        }
        let beta = norm(&w);

        // Convergence check on the current T_k.
        if j >= 1 || n == 1 {
            let k = alphas.len();
            let (theta, s) = top_ritz(&alphas, &betas);
            let est = if k < n { beta * s[k - 1].abs() } else { 0.0 };
            if est <= cfg.tol * theta.abs().max(1.0) || k == n {
                let (lambda, x, residual) = ritz_to_eigen(op, &basis, &alphas, &betas);
                best_residual = best_residual.min(residual);
                if residual <= cfg.tol * lambda.abs().max(1.0) {
                    let degenerate = if k >= 2 {
                        let theta2 = kth_largest_eig(&alphas, &betas, 2);
                        (lambda - theta2).abs() < 10.0 * cfg.tol
                    } else {
                        false
                    };
                    return Ok(EigenPair {
                        lambda,
                        vector: x,
                        residual,
                        degenerate,
                        iterations: k,
                    });
                }
            }
        }

        if basis.len() == n {
            break;
        }
        if beta < 1e-12 {
            // Invariant subspace: continue in a fresh random direction
            // orthogonal to the basis. β=0 keeps T block tridiagonal.
            let mut fresh = random_unit(&mut rng, n);
            for _ in 0..2 {
                for b in &basis {
                    let d = dot(b, &fresh);
                    axpy(&mut fresh, b, -d);
                }
            }
            let nrm = norm(&fresh);
            if nrm < 1e-12 {
                break;
            }
            scale(&mut fresh, 1.0 / nrm);
            betas.push(0.0);
            q = fresh;
        } else {
            let mut next = w.clone();
            scale(&mut next, 1.0 / beta);
            betas.push(beta);
            q = next;
        }
    }

    // Final attempt with whatever subspace we have.
    if !alphas.is_empty() {
        let (lambda, x, residual) = ritz_to_eigen(op, &basis, &alphas, &betas);
        if residual <= cfg.tol * lambda.abs().max(1.0) {
            return Ok(EigenPair {
                lambda,
                vector: x,
                residual,
                degenerate: false,
                iterations: alphas.len(),
            });
        }
        best_residual = best_residual.min(residual);
    }
    Err(Error::Convergence(
        format!("Lanczos did not converge in {max_iter} iterations"),
        best_residual,
    ))
}

fn ritz_to_eigen(
    op: &dyn LinearOperator,
    basis: &[Vec<f64>],
    alphas: &[f64],
    betas: &[f64],
) -> (f64, Vec<f64>, f64) {
    let n = op.dim();
    let (theta, s) = top_ritz(alphas, betas);
    let mut x = vec![0.0; n];
    for (b, &si) in basis.iter().zip(s.iter()) {
        axpy(&mut x, b, si);
    }
    let nrm = norm(&x);
    scale(&mut x, 1.0 / nrm);
    let mut bx = vec![0.0; n];
    op.apply(&x, &mut bx);
    // one Rayleigh-quotient refinement of λ
    let lambda = dot(&x, &bx);
    let _ = theta;
    let mut r = bx;
    axpy(&mut r, &x, -lambda);
    (lambda, x, norm(&r))
}

/// Largest Ritz value of the symmetric tridiagonal T and its eigenvector.
fn top_ritz(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let theta = kth_largest_eig(alphas, betas, 1);
    let s = tridiag_eigvec(alphas, betas, theta);
    (theta, s)
}

/// Number of eigenvalues of T strictly below `x` (Sturm/LDLᵀ count).
fn count_below(alphas: &[f64], betas: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0f64;
    for (i, &a) in alphas.iter().enumerate() {
        let b2 = if i == 0 { 0.0 } else { betas[i - 1] * betas[i - 1] };
        d = a - x - b2 / d;
        if d == 0.0 {
            d = 1e-300;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// k-th largest eigenvalue of T by bisection (k = 1 is the largest).
fn kth_largest_eig(alphas: &[f64], betas: &[f64], k: usize) -> f64 {
    let m = alphas.len();
    debug_assert!(k >= 1 && k <= m);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let bl = if i == 0 { 0.0 } else { betas[i - 1].abs() };
        let br = if i + 1 < m { betas[i].abs() } else { 0.0 };
        lo = lo.min(alphas[i] - bl - br);
        hi = hi.max(alphas[i] + bl + br);
    }
    lo -= 1e-10;
    hi += 1e-10;
    let want = m - k + 1; // eigenvalues strictly below x must reach this
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(alphas, betas, mid) >= want {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector of T for an isolated eigenvalue, by inverse iteration with
/// a partially pivoted tridiagonal solve.
fn tridiag_eigvec(alphas: &[f64], betas: &[f64], lambda: f64) -> Vec<f64> {
    let m = alphas.len();
    if m == 1 {
        return vec![1.0];
    }
    let mut v = vec![1.0 / (m as f64).sqrt(); m];
    for _ in 0..3 {
        let mut x = solve_shifted(alphas, betas, lambda, &v);
        let nrm = norm(&x);
        if !nrm.is_finite() || nrm == 0.0 {
            break;
        }
        scale(&mut x, 1.0 / nrm);
        v = x;
    }
    v
}

/// Solve `(T - λI) x = b` with partial pivoting (band LU, two
/// superdiagonals). Near-singular pivots are regularized; inverse
/// iteration then amplifies the eigen-direction.
fn solve_shifted(alphas: &[f64], betas: &[f64], lambda: f64, b: &[f64]) -> Vec<f64> {
    let m = alphas.len();
    let mut dd: Vec<f64> = alphas.iter().map(|&a| a - lambda).collect();
    let mut du: Vec<f64> = betas.to_vec();
    let dl: Vec<f64> = betas.to_vec();
    let mut du2 = vec![0.0f64; m.saturating_sub(2)];
    let mut x: Vec<f64> = b.to_vec();

    let guard = |v: f64| if v.abs() < 1e-300 { 1e-300 } else { v };

    for i in 0..m - 1 {
        if dd[i].abs() >= dl[i].abs() {
            let fact = dl[i] / guard(dd[i]);
            dd[i + 1] -= fact * du[i];
            x[i + 1] -= fact * x[i];
        } else {
            // swap rows i and i+1
            let fact = dd[i] / guard(dl[i]);
            dd[i] = dl[i];
            let temp = dd[i + 1];
            dd[i + 1] = du[i] - fact * temp;
            if i < m - 2 {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            du[i] = temp;
            x.swap(i, i + 1);
            x[i + 1] -= fact * x[i];
        }
    }
    // back substitution
    x[m - 1] /= guard(dd[m - 1]);
    if m >= 2 {
        x[m - 2] = (x[m - 2] - du[m - 2] * x[m - 1]) / guard(dd[m - 2]);
    }
    for i in (0..m.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / guard(dd[i]);
    }
    x
}

fn random_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let nrm = norm(&v);
        if nrm > 1e-6 {
            scale(&mut v, 1.0 / nrm);
            return v;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], x: &[f64], a: f64) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn scale(v: &mut [f64], a: f64) {
    for vi in v.iter_mut() {
        *vi *= a;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct DenseSym {
        n: usize,
        a: Vec<f64>,
    }

    impl LinearOperator for DenseSym {
        fn dim(&self) -> usize {
            self.n
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            for i in 0..self.n {
                y[i] = (0..self.n).map(|j| self.a[i * self.n + j] * x[j]).sum();
            }
        }
    }

    #[test]
    fn diagonal_matrix() {
        let n = 5;
        let mut a = vec![0.0; n * n];
        for (i, v) in [3.0, -1.0, 7.0, 0.5, 6.9].iter().enumerate() {
            a[i * n + i] = *v;
        }
        let op = DenseSym { n, a };
        let p = leading_eigenpair(&op, &LanczosConfig::default()).unwrap();
        assert!((p.lambda - 7.0).abs() < 1e-8);
        assert!(p.vector[2].abs() > 0.999);
    }

    #[test]
    fn indefinite_largest_algebraic_not_magnitude() {
        // largest magnitude is -10 but largest algebraic is 2
        let n = 3;
        let mut a = vec![0.0; n * n];
        a[0] = -10.0;
        a[4] = 2.0;
        a[8] = 1.0;
        let op = DenseSym { n, a };
        let p = leading_eigenpair(&op, &LanczosConfig::default()).unwrap();
        assert!((p.lambda - 2.0).abs() < 1e-8);
    }

    #[test]
    fn sturm_count_and_bisection() {
        // T = [[2,1,0],[1,2,1],[0,1,2]] has eigenvalues 2±√2, 2
        let alphas = [2.0, 2.0, 2.0];
        let betas = [1.0, 1.0];
        let l1 = kth_largest_eig(&alphas, &betas, 1);
        let l2 = kth_largest_eig(&alphas, &betas, 2);
        let l3 = kth_largest_eig(&alphas, &betas, 3);
        assert!((l1 - (2.0 + 2f64.sqrt())).abs() < 1e-10);
        assert!((l2 - 2.0).abs() < 1e-10);
        assert!((l3 - (2.0 - 2f64.sqrt())).abs() < 1e-10);
        let v = tridiag_eigvec(&alphas, &betas, l1);
        // residual of (T−λ)v
        let r0 = (2.0 - l1) * v[0] + v[1];
        let r1 = v[0] + (2.0 - l1) * v[1] + v[2];
        let r2 = v[1] + (2.0 - l1) * v[2];
        assert!(r0.abs() + r1.abs() + r2.abs() < 1e-8);
    }
}
