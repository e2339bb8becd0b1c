//! Exhaustive search over rational spectra `c / K`.
//!
//! Every non-increasing vector of non-negative integers summing to `K` is
//! visited once, in lexicographically descending order, without materializing
//! the list. The best feasible purity on the grid is a certified lower bound
//! on the true maximum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::CriterionKind;
use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

/// Upper limit on the number of grid points a search may visit.
pub const ENUMERATION_BUDGET: u128 = 100_000_000;

/// Exact-margin slack for criteria evaluated in floating point.
const FLOAT_MARGIN_TOL: f64 = 1e-12;

/// Non-increasing vectors `c₁ ≥ … ≥ c_len ≥ 0` with `Σcᵢ = total` and
/// `c₁ ≤ cap`, in lexicographically descending order.
#[derive(Debug, Clone)]
pub struct SortedCompositions {
    current: Option<Vec<u64>>,
    cap: u64,
}

impl SortedCompositions {
    pub fn new(len: usize, total: u64) -> Self {
        Self::bounded(len, total, total)
    }

    /// Only vectors whose entries are all `≤ cap`.
    pub fn bounded(len: usize, total: u64, cap: u64) -> Self {
        let current = (len > 0 && total <= cap.saturating_mul(len as u64)).then(|| {
            let mut v = vec![0; len];
            fill_greedy(&mut v, total, cap);
            v
        });
        SortedCompositions { current, cap }
    }
}

/// Lexicographically largest non-increasing fill of `slot` with sum `amount`
/// and entries `≤ cap`. The caller guarantees it fits.
fn fill_greedy(slot: &mut [u64], mut amount: u64, cap: u64) {
    for v in slot.iter_mut() {
        let take = amount.min(cap);
        *v = take;
        amount -= take;
    }
}

impl Iterator for SortedCompositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let len = next.len();
        let mut rest = 0u64;
        // Rightmost position that can drop by one while the tail absorbs the
        // difference under the new cap.
        for i in (0..len.saturating_sub(1)).rev() {
            rest += next[i + 1];
            let value = next[i];
            if value == 0 {
                continue;
            }
            let new_cap = (value - 1).min(self.cap);
            if rest < new_cap * (len - 1 - i) as u64 {
                next[i] = value - 1;
                fill_greedy(&mut next[i + 1..], rest + 1, new_cap);
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Number of partitions of `total` into at most `len` parts, i.e. the length
/// of [`SortedCompositions::new`]`(len, total)`.
pub fn count_sorted_compositions(len: usize, total: u64) -> u128 {
    let total = total as usize;
    // After processing part sizes 1..=j, ways[k] counts partitions of k into
    // parts of size ≤ j, equinumerous (by conjugation) with ≤ j parts.
    let mut ways = vec![0u128; total + 1];
    ways[0] = 1;
    for part in 1..=len.min(total) {
        for k in part..=total {
            ways[k] = ways[k].saturating_add(ways[k - part]);
        }
    }
    if len == 0 {
        return u128::from(total == 0);
    }
    ways[total]
}

/// Streams all sorted integer compositions of `total` into `len` parts,
/// refusing when there are more than [`ENUMERATION_BUDGET`].
pub fn enumerate_sorted_compositions(len: usize, total: u64) -> Result<SortedCompositions> {
    let estimated = count_sorted_compositions(len, total);
    if estimated > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            estimated,
            budget: ENUMERATION_BUDGET,
        });
    }
    Ok(SortedCompositions::new(len, total))
}

/// Grid resolution, dimensions and criterion of a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub resolution: u32,
    pub m: usize,
    pub n: usize,
    pub criterion: CriterionKind,
}

impl GridSpec {
    /// Criterion inferred from min(m, n).
    pub fn new(m: usize, n: usize, resolution: u32) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::InvalidDimensions { m, n });
        }
        Ok(GridSpec {
            resolution,
            m,
            n,
            criterion: CriterionKind::for_dims(m, n)?,
        })
    }

    /// Explicit criterion. The qubit (qutrit) criterion needs a subsystem of
    /// dimension 2 (3).
    pub fn with_criterion(
        m: usize,
        n: usize,
        resolution: u32,
        criterion: CriterionKind,
    ) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::InvalidDimensions { m, n });
        }
        let required = match criterion {
            CriterionKind::AbsSep2xN => Some(2),
            CriterionKind::AbsPPT3xN => Some(3),
            CriterionKind::MaximalBall => None,
        };
        if let Some(required) = required.filter(|&r| m != r && n != r) {
            return Err(Error::DimensionMismatch {
                criterion: criterion.name(),
                required,
                m,
                n,
            });
        }
        Ok(GridSpec {
            resolution,
            m,
            n,
            criterion,
        })
    }

    pub fn dim(&self) -> usize {
        self.m * self.n
    }

    pub fn estimated_points(&self) -> u128 {
        count_sorted_compositions(self.dim(), u64::from(self.resolution))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub spec: GridSpec,
    pub purity: f64,
    pub spectrum: Spectrum,
    /// Integer numerators of the maximizer.
    pub counts: Vec<u64>,
    pub visited: u128,
    pub feasible: u128,
}

/// Exact feasibility of the grid point `c / k`.
fn grid_feasible(criterion: CriterionKind, c: &[u64], k: u64) -> bool {
    let len = c.len();
    match criterion {
        CriterionKind::AbsSep2xN => {
            // c₁ ≤ c_{N−1} + 2√(c_{N−2} c_N), squared only when both sides are
            // non-negative.
            let (first, second_last) = (c[0], c[len - 2]);
            if first <= second_last {
                return true;
            }
            let gap = u128::from(first - second_last);
            gap * gap <= 4 * u128::from(c[len - 3]) * u128::from(c[len - 1])
        }
        CriterionKind::MaximalBall => {
            let sum_sq: u128 = c.iter().map(|&v| u128::from(v) * u128::from(v)).sum();
            (len as u128 - 1) * sum_sq <= u128::from(k) * u128::from(k)
        }
        CriterionKind::AbsPPT3xN => {
            let scaled: Vec<f64> = c.iter().map(|&v| v as f64 / k as f64).collect();
            criterion.margin_sorted(&scaled) >= -FLOAT_MARGIN_TOL
        }
    }
}

struct Best {
    sum_sq: u128,
    counts: Vec<u64>,
    visited: u128,
    feasible: u128,
}

/// Best feasible point among those with leading entry `lead`.
fn search_leading(spec: &GridSpec, lead: u64) -> Best {
    let len = spec.dim();
    let k = u64::from(spec.resolution);
    let mut best = Best {
        sum_sq: 0,
        counts: Vec::new(),
        visited: 0,
        feasible: 0,
    };
    let mut point = vec![0u64; len];
    point[0] = lead;
    for tail in SortedCompositions::bounded(len - 1, k - lead, lead) {
        point[1..].copy_from_slice(&tail);
        best.visited += 1;
        if !grid_feasible(spec.criterion, &point, k) {
            continue;
        }
        best.feasible += 1;
        let sum_sq: u128 = point.iter().map(|&v| u128::from(v) * u128::from(v)).sum();
        // Strict improvement keeps the lexicographically largest among ties.
        if best.counts.is_empty() || sum_sq > best.sum_sq {
            best.sum_sq = sum_sq;
            best.counts.clone_from(&point);
        }
    }
    best
}

/// Maximum purity over the grid `{c / K}` of sorted spectra satisfying the
/// criterion exactly, with its maximizer (lexicographically largest on ties).
///
/// The search is split by leading entry and reduced in descending order, so
/// the result does not depend on scheduling.
pub fn grid_max_purity(spec: &GridSpec) -> Result<GridResult> {
    if spec.resolution == 0 {
        return Err(Error::NoFeasiblePoint { resolution: 0 });
    }
    let estimated = spec.estimated_points();
    if estimated > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            estimated,
            budget: ENUMERATION_BUDGET,
        });
    }
    let len = spec.dim() as u64;
    let k = u64::from(spec.resolution);
    let smallest_lead = k.div_ceil(len);
    let leads: Vec<u64> = (smallest_lead..=k).rev().collect();
    let partials: Vec<Best> = leads
        .par_iter()
        .map(|&lead| search_leading(spec, lead))
        .collect();

    let mut visited = 0;
    let mut feasible = 0;
    let mut winner: Option<&Best> = None;
    for part in &partials {
        visited += part.visited;
        feasible += part.feasible;
        if part.counts.is_empty() {
            continue;
        }
        if winner.is_none_or(|w| part.sum_sq > w.sum_sq) {
            winner = Some(part);
        }
    }
    let winner = winner.ok_or(Error::NoFeasiblePoint {
        resolution: spec.resolution,
    })?;
    let values: Vec<f64> = winner.counts.iter().map(|&c| c as f64 / k as f64).collect();
    let spectrum = Spectrum::new(spec.m, spec.n, values)?;
    Ok(GridResult {
        spec: *spec,
        purity: winner.sum_sq as f64 / (k as f64 * k as f64),
        spectrum,
        counts: winner.counts.clone(),
        visited,
        feasible,
    })
}
