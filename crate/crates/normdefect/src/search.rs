//! Numerical search for size-(n+k) normal completions.
//!
//! Normality of `M = [[A, V],[W, Z]]` is a system of polynomial equations in
//! the free entries of `V`, `W`, `Z`: every entry of the commutator
//! `[M, M*]` must vanish. The search minimizes the squared Frobenius norm of
//! the commutator with Levenberg–Marquardt over randomized restarts. A
//! successful run is a certificate (the completion is re-verified
//! independently); a failed run is only "not found within budget", never a
//! proof of nonexistence.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::completion::{assemble, CompletionResult};
use crate::defect;
use crate::matrix::{re, ComplexMatrix};
use crate::{Error, Result, DEFAULT_TOL};

/// Budget and reproducibility knobs for a completion search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchConfig {
    /// Extension size.
    pub k: usize,
    pub restarts: usize,
    /// Levenberg-Marquardt iterations per restart.
    pub max_iters: usize,
    pub seed: u64,
    /// Success threshold on the relative normality residual.
    pub success_tol: f64,
    /// Scale of the random initial entries; defaults to the spectral norm
    /// of the matrix being completed.
    pub init_scale: Option<f64>,
    /// Restrict the extension blocks to real entries.
    pub real_only: bool,
}

impl SearchConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            restarts: 32,
            max_iters: 200,
            seed: 0,
            success_tol: 1e-8,
            init_scale: None,
            real_only: false,
        }
    }
}

/// Result of a search. `found` holds exactly when `best.residual` meets the
/// configured tolerance.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub found: bool,
    pub best: CompletionResult,
    /// Total LM iterations across executed restarts.
    pub iterations_used: usize,
    /// Index of the first successful restart plus one, or the full budget.
    pub restarts_used: usize,
}

/// Free-parameter layout: V, W, Z entries in row-major order, one or two
/// real coordinates per entry.
struct Layout {
    n: usize,
    k: usize,
    real_only: bool,
    positions: Vec<(usize, usize)>,
}

impl Layout {
    fn new(n: usize, k: usize, real_only: bool) -> Self {
        let d = n + k;
        let mut positions = Vec::with_capacity(k * (2 * n + k));
        for i in 0..n {
            for j in n..d {
                positions.push((i, j));
            }
        }
        for i in n..d {
            for j in 0..n {
                positions.push((i, j));
            }
        }
        for i in n..d {
            for j in n..d {
                positions.push((i, j));
            }
        }
        Self {
            n,
            k,
            real_only,
            positions,
        }
    }

    fn param_count(&self) -> usize {
        self.positions.len() * if self.real_only { 1 } else { 2 }
    }

    fn assemble(&self, a: &ComplexMatrix, theta: &[f64]) -> ComplexMatrix {
        let d = self.n + self.k;
        let mut m = ComplexMatrix::zeros(d, d);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, a.get(i, j));
            }
        }
        for (idx, &(i, j)) in self.positions.iter().enumerate() {
            let z = if self.real_only {
                re(theta[idx])
            } else {
                Complex64::new(theta[2 * idx], theta[2 * idx + 1])
            };
            m.set(i, j, z);
        }
        m
    }
}

fn commutator_unchecked(m: &ComplexMatrix) -> ComplexMatrix {
    m.commutator().expect("assembled extension is square")
}

/// `‖[M, M*]‖²_F` for `M = [[A, V],[W, Z]]`; zero exactly when the
/// extension is normal.
pub fn residual_objective(
    a: &ComplexMatrix,
    v: &ComplexMatrix,
    w: &ComplexMatrix,
    z: &ComplexMatrix,
) -> Result<f64> {
    let m = assemble(a, v, w, z)?;
    Ok(commutator_unchecked(&m).frobenius_norm().powi(2))
}

/// Objective value plus its gradient with respect to the free entries of
/// `V`, `W`, `Z` (row-major; one coordinate per entry when `real_only`,
/// otherwise real/imaginary pairs).
pub fn objective_and_gradient(
    a: &ComplexMatrix,
    v: &ComplexMatrix,
    w: &ComplexMatrix,
    z: &ComplexMatrix,
    real_only: bool,
) -> Result<(f64, Vec<f64>)> {
    let m = assemble(a, v, w, z)?;
    let layout = Layout::new(a.require_square()?, z.require_square()?, real_only);
    let c = commutator_unchecked(&m);
    let f = c.frobenius_norm().powi(2);
    // d f = 4 Re tr([C, M] dM*): the gradient at entry (p,q) is
    // 4 Re([C,M]_pq) in the real coordinate and 4 Im([C,M]_pq) in the
    // imaginary one.
    let g = c.multiply(&m)?.sub(&m.multiply(&c)?)?;
    let mut grad = Vec::with_capacity(layout.param_count());
    for &(p, q) in &layout.positions {
        let gpq = g.get(p, q);
        grad.push(4.0 * gpq.re);
        if !real_only {
            grad.push(4.0 * gpq.im);
        }
    }
    Ok((f, grad))
}

/// Residual vector (all commutator entries, split into real and imaginary
/// parts) and its Jacobian with respect to the layout parameters.
fn residual_and_jacobian(
    m: &ComplexMatrix,
    layout: &Layout,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let d = layout.n + layout.k;
    let c = commutator_unchecked(m);
    let mut r = DMatrix::zeros(2 * d * d, 1);
    for i in 0..d {
        for j in 0..d {
            r[(2 * (i * d + j), 0)] = c.get(i, j).re;
            r[(2 * (i * d + j) + 1, 0)] = c.get(i, j).im;
        }
    }
    let cols = layout.param_count() ;
    let mut jac = DMatrix::zeros(2 * d * d, cols);
    let mut dc = vec![Complex64::new(0.0, 0.0); d * d];
    let coords = if layout.real_only { 1 } else { 2 };
    for (idx, &(p, q)) in layout.positions.iter().enumerate() {
        for coord in 0..coords {
            for e in dc.iter_mut() {
                *e = Complex64::new(0.0, 0.0);
            }
            // dC = dM M* + M dM* - dM* M - M* dM with dM supported at (p,q).
            if coord == 0 {
                for j in 0..d {
                    dc[p * d + j] += m.get(j, q).conj();
                    dc[q * d + j] -= m.get(p, j);
                }
                for i in 0..d {
                    dc[i * d + p] += m.get(i, q);
                    dc[i * d + q] -= m.get(p, i).conj();
                }
            } else {
                let iu = Complex64::new(0.0, 1.0);
                for j in 0..d {
                    dc[p * d + j] += iu * m.get(j, q).conj();
                    dc[q * d + j] += iu * m.get(p, j);
                }
                for i in 0..d {
                    dc[i * d + p] -= iu * m.get(i, q);
                    dc[i * d + q] -= iu * m.get(p, i).conj();
                }
            }
            let col = idx * coords + coord;
            for i in 0..d {
                for j in 0..d {
                    jac[(2 * (i * d + j), col)] = dc[i * d + j].re;
                    jac[(2 * (i * d + j) + 1, col)] = dc[i * d + j].im;
                }
            }
        }
    }
    (r, jac)
}

fn relative_residual(m: &ComplexMatrix) -> f64 {
    commutator_unchecked(m).frobenius_norm() / f64::max(1.0, m.frobenius_norm().powi(2))
}

struct RestartResult {
    index: usize,
    theta: Vec<f64>,
    rel: f64,
    iters: usize,
    success: bool,
}

fn run_restart(
    a: &ComplexMatrix,
    layout: &Layout,
    mut theta: Vec<f64>,
    index: usize,
    config: &SearchConfig,
) -> RestartResult {
    let mut m = layout.assemble(a, &theta);
    let mut f = commutator_unchecked(&m).frobenius_norm().powi(2);
    let mut lambda = 1e-3;
    let mut iters = 0;
    for _ in 0..config.max_iters {
        let rel = relative_residual(&m);
        if rel <= config.success_tol {
            break;
        }
        iters += 1;
        let (r, jac) = residual_and_jacobian(&m, layout);
        let g = jac.transpose() * &r;
        if g.amax() <= 1e-16 {
            break;
        }
        let h = jac.transpose() * &jac;
        let mut accepted = false;
        for _ in 0..30 {
            let mut damped = h.clone();
            for i in 0..damped.nrows() {
                damped[(i, i)] += lambda * (h[(i, i)] + 1e-12);
            }
            let Some(chol) = damped.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let delta = chol.solve(&(-&g));
            let cand: Vec<f64> = theta
                .iter()
                .zip(delta.iter())
                .map(|(t, d)| t + d)
                .collect();
            let m_cand = layout.assemble(a, &cand);
            let f_cand = commutator_unchecked(&m_cand).frobenius_norm().powi(2);
            if f_cand.is_finite() && f_cand < f {
                theta = cand;
                m = m_cand;
                f = f_cand;
                lambda = (lambda / 3.0).max(1e-15);
                accepted = true;
                break;
            }
            lambda *= 4.0;
            if lambda > 1e15 {
                break;
            }
        }
        if !accepted {
            break;
        }
    }
    let rel = relative_residual(&m);
    RestartResult {
        index,
        theta,
        rel,
        iters,
        success: rel <= config.success_tol,
    }
}

fn initial_theta(layout: &Layout, index: usize, config: &SearchConfig, scale: f64) -> Vec<f64> {
    let count = layout.param_count();
    if index == 0 {
        // Always probe the zero extension first: it solves the problem
        // whenever the base matrix is already normal.
        return vec![0.0; count];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ index as u64);
    (0..count).map(|_| rng.gen_range(-scale..scale)).collect()
}

/// Multi-restart minimization of the commutator residual over all entries
/// of `V`, `W`, `Z`. Deterministic for a fixed config: restart `r` draws
/// its start from `seed ^ r`, restarts run in fixed-size chunks, and the
/// best result is the minimum under (residual, restart index).
pub fn search_completion(a: &ComplexMatrix, config: &SearchConfig) -> Result<SearchOutcome> {
    let n = a.require_square()?;
    if config.restarts == 0 || config.success_tol <= 0.0 {
        return Err(Error::ConditionViolated(
            "restarts >= 1 and success_tol > 0 required".into(),
        ));
    }
    if config.k == 0 {
        let residual = defect::normality_residual(a)?;
        if residual <= config.success_tol {
            let best = CompletionResult::from_parts(a.clone(), n)?;
            return Ok(SearchOutcome {
                found: true,
                best,
                iterations_used: 0,
                restarts_used: 0,
            });
        }
        return Err(Error::ConditionViolated(
            "k = 0 cannot complete a non-normal matrix".into(),
        ));
    }
    let layout = Layout::new(n, config.k, config.real_only);
    let scale = config
        .init_scale
        .unwrap_or_else(|| a.spectral_norm())
        .max(1e-3);

    const CHUNK: usize = 8;
    let mut best: Option<RestartResult> = None;
    let mut iterations_used = 0;
    let mut restarts_used = config.restarts;
    let mut found = false;
    let mut start = 0;
    while start < config.restarts {
        let end = (start + CHUNK).min(config.restarts);
        let chunk: Vec<RestartResult> = (start..end)
            .into_par_iter()
            .map(|idx| {
                let theta0 = initial_theta(&layout, idx, config, scale);
                run_restart(a, &layout, theta0, idx, config)
            })
            .collect();
        for r in chunk {
            iterations_used += r.iters;
            let better = match &best {
                None => true,
                Some(b) => (r.rel, r.index) < (b.rel, b.index),
            };
            if r.success && !found {
                found = true;
            }
            if better {
                best = Some(r);
            }
        }
        if found {
            restarts_used = best.as_ref().map(|b| b.index + 1).unwrap_or(end);
            break;
        }
        start = end;
    }
    let best = best.expect("at least one restart ran");
    let ext = layout.assemble(a, &best.theta);
    let result = CompletionResult::from_parts(ext, n)?;
    Ok(SearchOutcome {
        found: result.residual <= config.success_tol,
        best: result,
        iterations_used,
        restarts_used,
    })
}

/// Interval estimate of the defect obtained by searching increasing
/// extension sizes.
#[derive(Debug, Clone, Serialize)]
pub struct DefectEstimate {
    pub lower: usize,
    /// Smallest size at which a completion was certified.
    pub upper: usize,
    /// Of each probed size, whether the search succeeded.
    pub probed: Vec<(usize, bool)>,
    #[serde(skip)]
    pub best: CompletionResult,
}

impl DefectEstimate {
    pub fn exact(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

/// Brackets the defect: starts at the inertia lower bound and searches each
/// size up to the rank upper bound, where the scaled-unitary construction
/// guarantees success. Success at size k implies success at every larger
/// size (append a decoupled zero row/column), so the first hit closes the
/// bracket from above; the result is a point value only when the bracket
/// collapses.
pub fn defect_estimate(a: &ComplexMatrix, budget: &SearchConfig) -> Result<DefectEstimate> {
    let bounds = defect::defect_bounds(a, DEFAULT_TOL)?;
    if defect::normality_residual(a)? <= budget.success_tol || bounds.upper == 0 {
        let best = CompletionResult::from_parts(a.clone(), a.rows())?;
        return Ok(DefectEstimate {
            lower: 0,
            upper: 0,
            probed: Vec::new(),
            best,
        });
    }
    let mut probed = Vec::new();
    for k in bounds.lower.max(1)..bounds.upper {
        let mut config = budget.clone();
        config.k = k;
        let outcome = search_completion(a, &config)?;
        probed.push((k, outcome.found));
        if outcome.found {
            return Ok(DefectEstimate {
                lower: bounds.lower,
                upper: k,
                probed,
                best: outcome.best,
            });
        }
    }
    // At the upper bound the scaled-unitary construction succeeds without
    // searching.
    let fallback = defect::scaled_unitary_completion(a)?;
    if fallback.residual > budget.success_tol || fallback.defect < bounds.lower {
        return Err(Error::ConditionViolated(
            "the scaled-unitary completion failed to verify".into(),
        ));
    }
    probed.push((bounds.upper, true));
    Ok(DefectEstimate {
        lower: bounds.lower,
        upper: bounds.upper,
        probed,
        best: fallback,
    })
}
