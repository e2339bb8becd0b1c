//! Purity maximization over spectra satisfying a criterion.
//!
//! The feasible set is convex and permutation invariant while the purity is
//! convex, so maxima sit on the criterion boundary and local ascent can stall
//! at poor extreme points. The solver therefore runs many independent local
//! solves and keeps the best:
//!
//! * the search runs on the unordered probability simplex; each evaluation
//!   sorts the point (stable sort) and maps criterion gradients back through
//!   the realized permutation;
//! * the constraint enters as a quadratic penalty `μ · max(0, −margin)²` whose
//!   weight grows geometrically over several stages;
//! * each stage is projected-gradient ascent with an Armijo backtracking line
//!   search;
//! * the end point is pulled toward the maximally mixed spectrum just far
//!   enough that the exact (unsmoothed) margin is non-negative.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::reference_spectrum;
use crate::criteria::{abs_ppt_matrices_sorted, CriterionKind};
use crate::error::{Error, Result};
use crate::spectrum::{purity_of, Spectrum};

/// Smoothing offset for the square root in the qubit-qudit margin.
pub const SQRT_SMOOTHING: f64 = 1e-12;

const ARMIJO_C: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 50;
const STEP_EXPANSION: f64 = 4.0;
const SYMMETRY_TILT: f64 = 1e-3;
const RESTORE_BISECTIONS: usize = 200;

/// Which spectra are searched: an `m ⊗ n` system under one exact criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub m: usize,
    pub n: usize,
    pub criterion: CriterionKind,
}

impl Problem {
    /// Criterion inferred from min(m, n).
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::InvalidDimensions { m, n });
        }
        Ok(Problem {
            m,
            n,
            criterion: CriterionKind::for_dims(m, n)?,
        })
    }

    /// Explicit criterion; one subsystem must have the matching dimension.
    pub fn with_criterion(m: usize, n: usize, criterion: CriterionKind) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::InvalidDimensions { m, n });
        }
        let required = match criterion {
            CriterionKind::AbsSep2xN => 2,
            CriterionKind::AbsPPT3xN => 3,
            CriterionKind::MaximalBall => {
                let min_dim = m.min(n);
                return Err(Error::UnsupportedDimensions { m, n, min_dim });
            }
        };
        if m != required && n != required {
            return Err(Error::DimensionMismatch {
                criterion: criterion.name(),
                required,
                m,
                n,
            });
        }
        Ok(Problem { m, n, criterion })
    }

    pub fn dim(&self) -> usize {
        self.m * self.n
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Random Dirichlet starts, on top of the two deterministic ones.
    pub restarts: usize,
    pub seed: u64,
    /// Iteration cap per penalty stage.
    pub max_iters: usize,
    pub penalty_init: f64,
    pub penalty_growth: f64,
    pub penalty_stages: usize,
    pub step_tol: f64,
    pub constraint_tol: f64,
    pub dirichlet_alpha: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            restarts: 64,
            seed: 0,
            max_iters: 5000,
            penalty_init: 10.0,
            penalty_growth: 10.0,
            penalty_stages: 6,
            step_tol: 1e-12,
            constraint_tol: 1e-9,
            dirichlet_alpha: 1.0,
        }
    }
}

/// How a local solve was started.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartKind {
    Uniform,
    Reference,
    Random(usize),
    Given,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub m: usize,
    pub n: usize,
    pub criterion: CriterionKind,
    pub best_purity: f64,
    pub best_spectrum: Spectrum,
    /// Exact criterion margin at `best_spectrum`.
    pub margin_at_opt: f64,
    pub best_start: StartKind,
    pub restarts_total: usize,
    pub restarts_converged: usize,
    pub iterations_total: usize,
    /// Final purity of every local solve, in start order.
    pub restart_purities: Vec<f64>,
    pub wall_time: f64,
    pub seed: u64,
}

/// Dirichlet(α, …, α) draw on the `dim`-simplex, sorted descending.
pub fn sample_start<R: rand::Rng + ?Sized>(dim: usize, alpha: f64, rng: &mut R) -> Vec<f64> {
    let gamma = Gamma::new(alpha, 1.0).expect("alpha must be positive and finite");
    let mut v: Vec<f64> = (0..dim).map(|_| gamma.sample(rng)).collect();
    let total: f64 = v.iter().sum();
    if total > 0.0 && total.is_finite() {
        v.iter_mut().for_each(|x| *x /= total);
    } else {
        v.fill(1.0 / dim as f64);
    }
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Euclidean projection onto `{x ≥ 0, Σx = 1}` (sort and threshold).
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (j + 1) as f64;
        if u - candidate > 0.0 {
            threshold = candidate;
        }
    }
    v.iter().map(|&x| (x - threshold).max(0.0)).collect()
}

/// Indices of `x` ordered by non-increasing value; ties keep index order.
fn descending_permutation(x: &[f64]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..x.len()).collect();
    perm.sort_by(|&a, &b| x[b].total_cmp(&x[a]));
    perm
}

/// Smoothed criterion margin and its gradient with respect to the sorted
/// vector.
pub fn smoothed_margin_sorted(criterion: CriterionKind, sorted: &[f64]) -> (f64, Vec<f64>) {
    let len = sorted.len();
    let mut grad = vec![0.0; len];
    match criterion {
        CriterionKind::AbsSep2xN => {
            let (a, b) = (sorted[len - 3], sorted[len - 1]);
            let root = (a * b + SQRT_SMOOTHING * SQRT_SMOOTHING).sqrt();
            let margin = sorted[len - 2] + 2.0 * (root - SQRT_SMOOTHING) - sorted[0];
            grad[len - 2] += 1.0;
            grad[len - 3] += b / root;
            grad[len - 1] += a / root;
            grad[0] -= 1.0;
            (margin, grad)
        }
        CriterionKind::AbsPPT3xN => {
            let (first, second) = abs_ppt_matrices_sorted(sorted);
            let (l1, v1) = first.min_eigenpair();
            let (l2, v2) = second.min_eigenpair();
            let (margin, v, second_active) = if l1 <= l2 {
                (l1, v1, false)
            } else {
                (l2, v2, true)
            };
            // d λ_min / d A_ij = v_i v_j, with off-diagonal pairs counted twice.
            let bottom = |j: usize| len - 1 - j;
            let top = |k: usize| k - 1;
            grad[bottom(0)] += 2.0 * v[0] * v[0];
            grad[bottom(5)] += 2.0 * v[2] * v[2];
            let w12 = 2.0 * v[0] * v[1];
            grad[bottom(1)] += w12;
            grad[top(1)] -= w12;
            let w13 = 2.0 * v[0] * v[2];
            let w23 = 2.0 * v[1] * v[2];
            grad[bottom(4)] += w23;
            grad[top(3)] -= w23;
            if second_active {
                grad[bottom(3)] += 2.0 * v[1] * v[1];
                grad[bottom(2)] += w13;
            } else {
                grad[bottom(2)] += 2.0 * v[1] * v[1];
                grad[bottom(3)] += w13;
            }
            grad[top(2)] -= w13;
            (margin, grad)
        }
        CriterionKind::MaximalBall => {
            let margin = 1.0 / (len as f64 - 1.0) - purity_of(sorted);
            for (g, &s) in grad.iter_mut().zip(sorted) {
                *g = -2.0 * s;
            }
            (margin, grad)
        }
    }
}

/// Penalized objective `Σλᵢ² − μ · max(0, −margin)²` and its gradient at an
/// arbitrary (unsorted) point.
pub fn penalized_objective(problem: &Problem, lambda: &[f64], mu: f64) -> (f64, Vec<f64>) {
    let perm = descending_permutation(lambda);
    let sorted: Vec<f64> = perm.iter().map(|&i| lambda[i]).collect();
    let (margin, margin_grad) = smoothed_margin_sorted(problem.criterion, &sorted);
    let violation = (-margin).max(0.0);
    let value = purity_of(lambda) - mu * violation * violation;
    let mut grad: Vec<f64> = lambda.iter().map(|&x| 2.0 * x).collect();
    if violation > 0.0 {
        for (k, &i) in perm.iter().enumerate() {
            grad[i] += 2.0 * mu * violation * margin_grad[k];
        }
    }
    (value, grad)
}

fn penalized_value(problem: &Problem, lambda: &[f64], mu: f64) -> f64 {
    let mut sorted = lambda.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let (margin, _) = smoothed_margin_sorted(problem.criterion, &sorted);
    let violation = (-margin).max(0.0);
    purity_of(lambda) - mu * violation * violation
}

fn exact_margin(problem: &Problem, sorted: &[f64]) -> f64 {
    problem.criterion.margin_sorted(sorted)
}

/// Moves `sorted` toward the maximally mixed spectrum by the smallest amount
/// (up to bisection resolution) that makes the exact margin non-negative.
/// Along this segment the sort order is preserved.
fn restore_feasibility(problem: &Problem, sorted: &[f64]) -> Vec<f64> {
    if exact_margin(problem, sorted) >= 0.0 {
        return sorted.to_vec();
    }
    let uniform = 1.0 / sorted.len() as f64;
    let mix = |t: f64| -> Vec<f64> {
        sorted
            .iter()
            .map(|&x| (1.0 - t) * x + t * uniform)
            .collect()
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..RESTORE_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if exact_margin(problem, &mix(mid)) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    mix(hi)
}

/// The maximally mixed point minimizes the purity and is a stationary point of
/// the ascent; a constant vector is replaced by a small descending ramp.
fn break_symmetry(x: &mut [f64]) {
    let len = x.len();
    let (lo, hi) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if hi - lo > f64::EPSILON || len < 2 {
        return;
    }
    let base = 1.0 / len as f64;
    for (i, v) in x.iter_mut().enumerate() {
        let ramp = (len - 1) as f64 - 2.0 * i as f64;
        *v = base * (1.0 + SYMMETRY_TILT * ramp / (len - 1) as f64);
    }
}

/// Outcome of one local solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSolution {
    pub start: StartKind,
    pub purity: f64,
    /// Sorted descending, exactly feasible.
    pub spectrum: Vec<f64>,
    pub margin: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Staged-penalty projected-gradient ascent from `start`.
pub fn local_solve(problem: &Problem, start: &[f64], opts: &SolverOptions) -> LocalSolution {
    local_solve_tagged(problem, start, opts, StartKind::Given)
}

fn local_solve_tagged(
    problem: &Problem,
    start: &[f64],
    opts: &SolverOptions,
    tag: StartKind,
) -> LocalSolution {
    let mut x = project_to_simplex(start);
    break_symmetry(&mut x);
    // Best exactly-feasible point seen: the start and every stage end point.
    let mut incumbent = feasible_candidate(problem, &x);
    let mut iterations = 0;
    let mut converged = false;
    for stage in 0..opts.penalty_stages {
        let mu = opts.penalty_init * opts.penalty_growth.powi(stage as i32);
        converged = false;
        let mut last_step = 1.0f64;
        for _ in 0..opts.max_iters {
            iterations += 1;
            let (value, grad) = penalized_objective(problem, &x, mu);
            let full: Vec<f64> = x.iter().zip(&grad).map(|(a, g)| a + g).collect();
            let pg_norm = project_to_simplex(&full)
                .iter()
                .zip(&x)
                .map(|(p, a)| (p - a) * (p - a))
                .sum::<f64>()
                .sqrt();
            if pg_norm <= opts.step_tol * (1.0 + value.abs()) {
                converged = true;
                break;
            }
            let mut step = (last_step * STEP_EXPANSION).min(1.0);
            let mut accepted = None;
            for _ in 0..MAX_BACKTRACKS {
                let trial: Vec<f64> = x.iter().zip(&grad).map(|(a, g)| a + step * g).collect();
                let y = project_to_simplex(&trial);
                let ascent: f64 = grad
                    .iter()
                    .zip(y.iter().zip(&x))
                    .map(|(g, (b, a))| g * (b - a))
                    .sum();
                if ascent > 0.0 && penalized_value(problem, &y, mu) >= value + ARMIJO_C * ascent {
                    accepted = Some(y);
                    last_step = step;
                    break;
                }
                step *= 0.5;
            }
            match accepted {
                Some(y) => x = y,
                None => {
                    // No ascent direction survives at machine precision.
                    converged = true;
                    break;
                }
            }
        }
        let candidate = feasible_candidate(problem, &x);
        if purity_of(&candidate) > purity_of(&incumbent) {
            incumbent = candidate;
        }
    }
    LocalSolution {
        start: tag,
        purity: purity_of(&incumbent),
        margin: exact_margin(problem, &incumbent),
        spectrum: incumbent,
        iterations,
        converged,
    }
}

fn feasible_candidate(problem: &Problem, x: &[f64]) -> Vec<f64> {
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    restore_feasibility(problem, &sorted)
}

/// `true` if `a` should replace `b` as the incumbent: higher purity, or equal
/// purity (within 1e-12) and lexicographically larger sorted spectrum.
fn better(a: &LocalSolution, b: &LocalSolution) -> bool {
    if (a.purity - b.purity).abs() > 1e-12 {
        return a.purity > b.purity;
    }
    for (x, y) in a.spectrum.iter().zip(&b.spectrum) {
        if x != y {
            return x > y;
        }
    }
    false
}

/// The starts used by [`maximize_purity`], in order: uniform, the
/// reference spectrum (if any), then `opts.restarts` Dirichlet draws where
/// draw `i` uses its own generator seeded with `seed ^ i`.
pub fn starting_points(problem: &Problem, opts: &SolverOptions) -> Vec<(StartKind, Vec<f64>)> {
    let dim = problem.dim();
    let mut starts = vec![(StartKind::Uniform, vec![1.0 / dim as f64; dim])];
    if let Some(reference) = reference_spectrum(problem.m, problem.n, problem.criterion) {
        let restored = restore_feasibility(problem, reference.lambdas());
        starts.push((StartKind::Reference, restored));
    }
    for i in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ i as u64);
        starts.push((
            StartKind::Random(i),
            sample_start(dim, opts.dirichlet_alpha, &mut rng),
        ));
    }
    starts
}

/// Multi-start maximization. Deterministic for fixed `(problem, opts)`.
pub fn maximize_purity(problem: &Problem, opts: &SolverOptions) -> OptimizationResult {
    let clock = Instant::now();
    let starts = starting_points(problem, opts);
    let solutions: Vec<LocalSolution> = starts
        .par_iter()
        .map(|(tag, start)| local_solve_tagged(problem, start, opts, *tag))
        .collect();
    let mut best = &solutions[0];
    for s in &solutions[1..] {
        if better(s, best) {
            best = s;
        }
    }
    let best_spectrum = Spectrum::new(problem.m, problem.n, best.spectrum.clone())
        .expect("solver output lies on the simplex");
    OptimizationResult {
        m: problem.m,
        n: problem.n,
        criterion: problem.criterion,
        best_purity: best_spectrum.purity(),
        margin_at_opt: exact_margin(problem, best_spectrum.lambdas()),
        best_spectrum,
        best_start: best.start,
        restarts_total: solutions.len(),
        restarts_converged: solutions.iter().filter(|s| s.converged).count(),
        iterations_total: solutions.iter().map(|s| s.iterations).sum(),
        restart_purities: solutions.iter().map(|s| s.purity).collect(),
        wall_time: clock.elapsed().as_secs_f64(),
        seed: opts.seed,
    }
}
