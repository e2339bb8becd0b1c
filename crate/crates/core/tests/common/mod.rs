//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use abs_spectra::optimizer::{penalized_objective, sample_start, Problem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random sorted spectrum of length `dim`; the Dirichlet concentration cycles
/// so that both spread-out and nearly-degenerate spectra show up.
pub fn random_spectrum(dim: usize, rng: &mut ChaCha8Rng, i: usize) -> Vec<f64> {
    let alpha = [0.3, 1.0, 4.0][i % 3];
    sample_start(dim, alpha, rng)
}

pub fn sorted_desc(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// `λ_{2n−1} + 2√(λ_{2n−2} λ_{2n}) − λ₁` with 1-based indices into the
/// descending spectrum.
pub fn qubit_margin(values: &[f64]) -> f64 {
    let l = sorted_desc(values);
    let at = |i: usize| l[i - 1];
    let len = l.len();
    at(len - 1) + 2.0 * (at(len - 2) * at(len)).sqrt() - at(1)
}

/// The two qutrit-criterion matrices, written out with 1-based indices.
pub fn qutrit_matrices(values: &[f64]) -> [[[f64; 3]; 3]; 2] {
    let l = sorted_desc(values);
    let at = |i: usize| l[i - 1];
    let n3 = l.len();
    let first = [
        [2.0 * at(n3), at(n3 - 1) - at(1), at(n3 - 3) - at(2)],
        [at(n3 - 1) - at(1), 2.0 * at(n3 - 2), at(n3 - 4) - at(3)],
        [at(n3 - 3) - at(2), at(n3 - 4) - at(3), 2.0 * at(n3 - 5)],
    ];
    let second = [
        [2.0 * at(n3), at(n3 - 1) - at(1), at(n3 - 2) - at(2)],
        [at(n3 - 1) - at(1), 2.0 * at(n3 - 3), at(n3 - 4) - at(3)],
        [at(n3 - 2) - at(2), at(n3 - 4) - at(3), 2.0 * at(n3 - 5)],
    ];
    [first, second]
}

/// Smallest eigenvalue by bisection on positive definiteness of `A − tI`,
/// decided with Sylvester's criterion.
pub fn min_eig_bisection(a: &[[f64; 3]; 3]) -> f64 {
    let positive_definite = |t: f64| {
        let b = |i: usize, j: usize| a[i][j] - if i == j { t } else { 0.0 };
        let m1 = b(0, 0);
        let m2 = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
        let m3 = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
            - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
            + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
        m1 > 0.0 && m2 > 0.0 && m3 > 0.0
    };
    let bound: f64 = a.iter().flatten().map(|x| x.abs()).sum::<f64>() + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if positive_definite(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn qutrit_margin(values: &[f64]) -> f64 {
    let [a, b] = qutrit_matrices(values);
    min_eig_bisection(&a).min(min_eig_bisection(&b))
}

pub fn purity(values: &[f64]) -> f64 {
    values.iter().map(|x| x * x).sum()
}

/// Maximum-purity closed forms as exact fractions `(num, den)`.
pub fn qubit_conjecture_fraction(n: u64) -> (u64, u64) {
    if n.is_multiple_of(2) {
        (2, 3 * n)
    } else {
        (6 * n + 4, (3 * n + 1) * (3 * n + 1))
    }
}

pub fn qutrit_conjecture_fraction(n: u64) -> (u64, u64) {
    match n % 4 {
        0 => (4, 9 * n),
        1 => (36 * n + 8, (9 * n + 1) * (9 * n + 1)),
        2 => (36 * n + 16, (9 * n + 2) * (9 * n + 2)),
        _ => (36 * n - 8, (9 * n - 1) * (9 * n - 1)),
    }
}

pub fn fraction(f: (u64, u64)) -> f64 {
    f.0 as f64 / f.1 as f64
}

/// Mixes `values` toward uniform until `margin` becomes non-negative.
pub fn mix_to_boundary(values: &[f64], margin: impl Fn(&[f64]) -> f64) -> Vec<f64> {
    let u = 1.0 / values.len() as f64;
    let mix = |t: f64| {
        values
            .iter()
            .map(|&x| (1.0 - t) * x + t * u)
            .collect::<Vec<_>>()
    };
    if margin(values) >= 0.0 {
        return values.to_vec();
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if margin(&mix(mid)) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    mix(hi)
}

/// Largest per-component `|analytic − central difference| / max(1, |central difference|)`.
pub fn gradient_error(problem: &Problem, x: &[f64], mu: f64, h: f64) -> f64 {
    let (_, grad) = penalized_objective(problem, x, mu);
    let mut worst: f64 = 0.0;
    for i in 0..x.len() {
        let mut plus = x.to_vec();
        let mut minus = x.to_vec();
        plus[i] += h;
        minus[i] -= h;
        let fd = (penalized_objective(problem, &plus, mu).0
            - penalized_objective(problem, &minus, mu).0)
            / (2.0 * h);
        worst = worst.max((grad[i] - fd).abs() / fd.abs().max(1.0));
    }
    worst
}
