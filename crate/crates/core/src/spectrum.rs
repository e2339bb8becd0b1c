//! The spectrum of a bipartite state together with its subsystem dimensions.
//!
//! Every criterion in this crate depends on a state only through its
//! eigenvalues, so [`Spectrum`] is the only state representation. Eigenvalues
//! are kept sorted in non-increasing order and sum to one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|Σλ − 1|` accepted by [`Spectrum::new`].
pub const TOL_SUM: f64 = 1e-9;
/// Entries in `[-TOL_NONNEG, 0)` are clamped to zero; anything lower is rejected.
pub const TOL_NONNEG: f64 = 1e-12;

/// Descending probability vector of length `m * n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpectrum")]
pub struct Spectrum {
    m: usize,
    n: usize,
    lambdas: Vec<f64>,
}

/// Unvalidated wire form, `{"m": int, "n": int, "lambdas": [real, ...]}`.
#[derive(Debug, Clone, Deserialize)]
pub struct RawSpectrum {
    pub m: usize,
    pub n: usize,
    pub lambdas: Vec<f64>,
}

impl TryFrom<RawSpectrum> for Spectrum {
    type Error = Error;

    fn try_from(raw: RawSpectrum) -> Result<Self> {
        Spectrum::new(raw.m, raw.n, raw.lambdas)
    }
}

impl Spectrum {
    /// Validates `values` as the spectrum of an `m ⊗ n` state.
    ///
    /// Values are sorted descending, entries within [`TOL_NONNEG`] below zero
    /// are clamped to zero, and a sum within [`TOL_SUM`] of one is
    /// renormalized.
    pub fn new(m: usize, n: usize, values: impl Into<Vec<f64>>) -> Result<Self> {
        let mut lambdas = values.into();
        if m < 2 || n < 2 {
            return Err(Error::InvalidDimensions { m, n });
        }
        let expected = m * n;
        if lambdas.len() != expected {
            return Err(Error::WrongLength {
                m,
                n,
                expected,
                got: lambdas.len(),
            });
        }
        for (index, v) in lambdas.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if *v < -TOL_NONNEG {
                return Err(Error::NegativeEigenvalue { index, value: *v });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let sum: f64 = lambdas.iter().sum();
        if (sum - 1.0).abs() > TOL_SUM {
            return Err(Error::NotNormalized { sum });
        }
        // Rounding-level deviations are left alone so exact inputs stay exact.
        if (sum - 1.0).abs() > expected as f64 * f64::EPSILON {
            lambdas.iter_mut().for_each(|v| *v /= sum);
        }
        lambdas.sort_by(|a, b| b.total_cmp(a));
        Ok(Spectrum { m, n, lambdas })
    }

    /// The maximally mixed spectrum `I / (m n)`.
    pub fn maximally_mixed(m: usize, n: usize) -> Result<Self> {
        let total = m * n;
        Spectrum::new(m, n, vec![1.0 / total as f64; total])
    }

    /// A pure state `(1, 0, ..., 0)`.
    pub fn pure(m: usize, n: usize) -> Result<Self> {
        let mut v = vec![0.0; m * n];
        if let Some(first) = v.first_mut() {
            *first = 1.0;
        }
        Spectrum::new(m, n, v)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total dimension `N = m n`.
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    /// Eigenvalues in non-increasing order.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn into_lambdas(self) -> Vec<f64> {
        self.lambdas
    }

    /// Same eigenvalues with the subsystem roles exchanged.
    pub fn swapped(&self) -> Spectrum {
        Spectrum {
            m: self.n,
            n: self.m,
            lambdas: self.lambdas.clone(),
        }
    }

    /// `tr ρ² = Σ λᵢ²`.
    pub fn purity(&self) -> f64 {
        purity_of(&self.lambdas)
    }

    /// Hilbert-Schmidt distance from the maximally mixed state,
    /// `‖ρ − I/N‖₂ = √(tr ρ² − 1/N)`.
    pub fn hs_radius(&self) -> f64 {
        radius_from_purity(self.purity(), self.dim())
    }
}

/// `Σ vᵢ²` for any vector, normalized or not.
pub fn purity_of(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum()
}

/// `√(max(0, purity − 1/N))`.
pub fn radius_from_purity(purity: f64, dim: usize) -> f64 {
    (purity - 1.0 / dim as f64).max(0.0).sqrt()
}
