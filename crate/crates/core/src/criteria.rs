//! Spectral criteria, each reported as a signed margin (`≥ 0` means the
//! spectrum satisfies the criterion).
//!
//! * Maximal ball: `tr ρ² ≤ 1/(N−1)`, sufficient for absolute separability in
//!   every dimension.
//! * Qubit-qudit: `λ₁ ≤ λ_{2n−1} + 2√(λ_{2n−2} λ_{2n})`, necessary and
//!   sufficient for absolute separability (equivalently absolute PPT).
//! * Qutrit-qudit: joint positive semidefiniteness of two 3×3 matrices built
//!   from the smallest and largest eigenvalues, necessary and sufficient for
//!   absolute PPT when `n ≥ 3`. Applied with `n = 2` the matrices reject a
//!   small set of spectra that the qubit-qudit criterion accepts, so `3 ⊗ 2`
//!   defaults to the qubit-qudit criterion.
//!
//! The `*_sorted` kernels accept any non-increasing slice, normalized or not;
//! margins are positively homogeneous of degree one in it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{purity_of, Spectrum};
use crate::sym3::Sym3;

/// Default half-width of the "boundary" verdict band.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriterionKind {
    MaximalBall,
    AbsSep2xN,
    AbsPPT3xN,
}

impl CriterionKind {
    pub fn name(self) -> &'static str {
        match self {
            CriterionKind::MaximalBall => "maximal-ball",
            CriterionKind::AbsSep2xN => "abs-sep-2xn",
            CriterionKind::AbsPPT3xN => "abs-ppt-3xn",
        }
    }

    /// Criterion that decides membership for an `m ⊗ n` system, picked by the
    /// smaller subsystem.
    pub fn for_dims(m: usize, n: usize) -> Result<CriterionKind> {
        match m.min(n) {
            2 => Ok(CriterionKind::AbsSep2xN),
            3 => Ok(CriterionKind::AbsPPT3xN),
            min_dim => Err(Error::UnsupportedDimensions { m, n, min_dim }),
        }
    }

    /// Signed margin on a sorted (descending) vector of length `N`.
    ///
    /// The caller is responsible for `N` being compatible with the criterion.
    pub fn margin_sorted(self, sorted: &[f64]) -> f64 {
        match self {
            CriterionKind::MaximalBall => maximal_ball_margin_sorted(sorted),
            CriterionKind::AbsSep2xN => abs_sep_margin_sorted(sorted),
            CriterionKind::AbsPPT3xN => {
                let (first, second) = abs_ppt_matrices_sorted(sorted);
                first.min_eigenvalue().min(second.min_eigenvalue())
            }
        }
    }
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginPart {
    pub name: String,
    pub value: f64,
}

/// Signed feasibility slack with its per-constraint breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionMargin {
    pub kind: CriterionKind,
    pub margin: f64,
    pub parts: Vec<MarginPart>,
}

impl CriterionMargin {
    fn from_parts(kind: CriterionKind, parts: Vec<MarginPart>) -> Self {
        let margin = parts.iter().map(|p| p.value).fold(f64::INFINITY, f64::min);
        CriterionMargin {
            kind,
            margin,
            parts,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.margin >= 0.0
    }
}

/// `1/(N−1) − Σλᵢ²`.
pub fn maximal_ball_margin_sorted(values: &[f64]) -> f64 {
    1.0 / (values.len() as f64 - 1.0) - purity_of(values)
}

/// `λ_{2n−1} + 2√(λ_{2n−2} λ_{2n}) − λ₁` on a descending slice of even length ≥ 4.
pub fn abs_sep_margin_sorted(sorted: &[f64]) -> f64 {
    let len = sorted.len();
    debug_assert!(len >= 4 && len.is_multiple_of(2));
    let product = (sorted[len - 3] * sorted[len - 1]).max(0.0);
    sorted[len - 2] + 2.0 * product.sqrt() - sorted[0]
}

/// The two 3×3 matrices whose joint positive semidefiniteness characterizes
/// absolutely PPT qutrit-qudit spectra. Requires a descending slice whose
/// length is a multiple of three and at least six.
pub fn abs_ppt_matrices_sorted(sorted: &[f64]) -> (Sym3, Sym3) {
    let len = sorted.len();
    debug_assert!(len >= 6 && len.is_multiple_of(3));
    // 1-based λ_k is sorted[k - 1]; λ_{3n−j} is sorted[len − 1 − j].
    let top = |k: usize| sorted[k - 1];
    let bottom = |j: usize| sorted[len - 1 - j];
    let first = Sym3 {
        a11: 2.0 * bottom(0),
        a22: 2.0 * bottom(2),
        a33: 2.0 * bottom(5),
        a12: bottom(1) - top(1),
        a13: bottom(3) - top(2),
        a23: bottom(4) - top(3),
    };
    let second = Sym3 {
        a22: 2.0 * bottom(3),
        a13: bottom(2) - top(2),
        ..first
    };
    (first, second)
}

/// Maximal-ball margin `1/(N−1) − tr ρ²`.
pub fn maximal_ball_margin(s: &Spectrum) -> CriterionMargin {
    CriterionMargin::from_parts(
        CriterionKind::MaximalBall,
        vec![MarginPart {
            name: "purity_bound".into(),
            value: maximal_ball_margin_sorted(s.lambdas()),
        }],
    )
}

/// Qubit-qudit absolute-separability margin. Either subsystem may be the qubit.
pub fn abs_sep_2xn_margin(s: &Spectrum) -> Result<CriterionMargin> {
    if s.m() != 2 && s.n() != 2 {
        return Err(Error::DimensionMismatch {
            criterion: CriterionKind::AbsSep2xN.name(),
            required: 2,
            m: s.m(),
            n: s.n(),
        });
    }
    Ok(CriterionMargin::from_parts(
        CriterionKind::AbsSep2xN,
        vec![MarginPart {
            name: "eigenvalue_inequality".into(),
            value: abs_sep_margin_sorted(s.lambdas()),
        }],
    ))
}

/// The two qutrit-qudit matrices for `s`. Either subsystem may be the qutrit.
pub fn abs_ppt_3xn_matrices(s: &Spectrum) -> Result<(Sym3, Sym3)> {
    if s.m() != 3 && s.n() != 3 {
        return Err(Error::DimensionMismatch {
            criterion: CriterionKind::AbsPPT3xN.name(),
            required: 3,
            m: s.m(),
            n: s.n(),
        });
    }
    Ok(abs_ppt_matrices_sorted(s.lambdas()))
}

/// Qutrit-qudit absolute-PPT margin: the smaller of the two minimum
/// eigenvalues.
pub fn abs_ppt_3xn_margin(s: &Spectrum) -> Result<CriterionMargin> {
    let (first, second) = abs_ppt_3xn_matrices(s)?;
    Ok(CriterionMargin::from_parts(
        CriterionKind::AbsPPT3xN,
        vec![
            MarginPart {
                name: "min_eig_first".into(),
                value: first.min_eigenvalue(),
            },
            MarginPart {
                name: "min_eig_second".into(),
                value: second.min_eigenvalue(),
            },
        ],
    ))
}

/// Margin of `kind` for `s`, checking dimensions.
pub fn criterion_margin(kind: CriterionKind, s: &Spectrum) -> Result<CriterionMargin> {
    match kind {
        CriterionKind::MaximalBall => Ok(maximal_ball_margin(s)),
        CriterionKind::AbsSep2xN => abs_sep_2xn_margin(s),
        CriterionKind::AbsPPT3xN => abs_ppt_3xn_margin(s),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Feasible,
    Boundary,
    Infeasible,
    /// Outside the maximal ball with no exact criterion for these dimensions.
    Undetermined,
}

impl Verdict {
    pub fn from_margin(margin: f64, tol: f64) -> Verdict {
        if margin.abs() <= tol {
            Verdict::Boundary
        } else if margin > 0.0 {
            Verdict::Feasible
        } else {
            Verdict::Infeasible
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Feasible => "feasible",
            Verdict::Boundary => "boundary",
            Verdict::Infeasible => "infeasible",
            Verdict::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub m: usize,
    pub n: usize,
    pub purity: f64,
    pub hs_radius: f64,
    pub maximal_ball: CriterionMargin,
    /// Exact criterion for min(m, n) ∈ {2, 3}; `None` otherwise.
    pub criterion: Option<CriterionMargin>,
    pub verdict: Verdict,
    pub tol: f64,
}

/// Evaluates every applicable test on `s`.
///
/// When min(m, n) ∉ {2, 3} only the maximal ball is checked: inside it the
/// verdict is feasible, outside it is [`Verdict::Undetermined`].
pub fn classify(s: &Spectrum, tol: f64) -> Classification {
    let maximal_ball = maximal_ball_margin(s);
    let criterion = CriterionKind::for_dims(s.m(), s.n())
        .ok()
        .map(|kind| criterion_margin(kind, s).expect("kind chosen from dimensions"));
    let verdict = match &criterion {
        Some(c) => Verdict::from_margin(c.margin, tol),
        None if maximal_ball.margin >= -tol => Verdict::Feasible,
        None => Verdict::Undetermined,
    };
    Classification {
        m: s.m(),
        n: s.n(),
        purity: s.purity(),
        hs_radius: s.hs_radius(),
        maximal_ball,
        criterion,
        verdict,
        tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theorem_one() -> Spectrum {
        let d = 1.0 / (4.0 * 2f64.sqrt());
        Spectrum::new(2, 2, vec![0.25 + d, 0.25 + d, 0.25 - d, 0.25 - d]).unwrap()
    }

    fn table_row() -> Vec<f64> {
        vec![0.3, 0.3, 0.1, 0.1, 0.1, 0.1]
    }

    #[test]
    fn maximal_ball_examples() {
        let mixed = Spectrum::maximally_mixed(2, 2).unwrap();
        assert!((maximal_ball_margin(&mixed).margin - 1.0 / 12.0).abs() < 1e-15);
        assert!((maximal_ball_margin(&theorem_one()).margin + 1.0 / 24.0).abs() < 1e-15);
        let pure = Spectrum::pure(2, 2).unwrap();
        assert!((maximal_ball_margin(&pure).margin + 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn qubit_qudit_examples() {
        assert!(abs_sep_2xn_margin(&theorem_one()).unwrap().margin.abs() < 1e-15);
        let pure = Spectrum::pure(2, 2).unwrap();
        assert_eq!(abs_sep_2xn_margin(&pure).unwrap().margin, -1.0);
        let s = Spectrum::new(2, 3, table_row()).unwrap();
        assert!(abs_sep_2xn_margin(&s).unwrap().margin.abs() < 1e-15);
        let s = Spectrum::new(3, 3, vec![1.0 / 9.0; 9]).unwrap();
        assert!(matches!(
            abs_sep_2xn_margin(&s),
            Err(Error::DimensionMismatch { required: 2, .. })
        ));
    }

    #[test]
    fn qutrit_matrices_for_table_row() {
        let s = Spectrum::new(3, 2, table_row()).unwrap();
        let (first, _) = abs_ppt_3xn_matrices(&s).unwrap();
        let want = [[0.2, -0.2, -0.2], [-0.2, 0.2, 0.2], [-0.2, 0.2, 0.6]];
        for (row, want_row) in first.to_rows().iter().zip(want) {
            for (a, b) in row.iter().zip(want_row) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn qutrit_matrices_maximally_mixed() {
        let s = Spectrum::maximally_mixed(3, 2).unwrap();
        let (first, second) = abs_ppt_3xn_matrices(&s).unwrap();
        let third = 1.0 / 3.0;
        for m in [first, second] {
            assert_eq!(m, Sym3::diag(third, third, third));
        }
        assert!((abs_ppt_3xn_margin(&s).unwrap().margin - third).abs() < 1e-15);
    }

    #[test]
    fn qutrit_three_by_three_example() {
        let mut v = vec![1.0 / 11.0; 9];
        v[0] = 3.0 / 11.0;
        let s = Spectrum::new(3, 3, v).unwrap();
        let (first, _) = abs_ppt_3xn_matrices(&s).unwrap();
        let want = Sym3::from_rows([[2.0, -2.0, 0.0], [-2.0, 2.0, 0.0], [0.0, 0.0, 2.0]])
            .scaled(1.0 / 11.0);
        for (a, b) in first
            .to_rows()
            .iter()
            .flatten()
            .zip(want.to_rows().iter().flatten())
        {
            assert!((a - b).abs() < 1e-15);
        }
        let margin = abs_ppt_3xn_margin(&s).unwrap();
        assert!(margin.margin.abs() < 1e-15);
        assert_eq!(margin.parts.len(), 2);
    }

    #[test]
    fn qutrit_table_row_is_singular_psd() {
        let s = Spectrum::new(3, 2, table_row()).unwrap();
        assert!(abs_ppt_3xn_margin(&s).unwrap().margin.abs() < 1e-15);
        let pure = Spectrum::pure(2, 2).unwrap();
        assert!(abs_ppt_3xn_margin(&pure).is_err());
    }

    #[test]
    fn margin_is_min_over_parts() {
        let s = Spectrum::new(3, 3, vec![0.3, 0.2, 0.1, 0.1, 0.1, 0.05, 0.05, 0.05, 0.05]).unwrap();
        let m = abs_ppt_3xn_margin(&s).unwrap();
        let min = m
            .parts
            .iter()
            .map(|p| p.value)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(m.margin, min);
    }

    #[test]
    fn swapped_orientation_agrees() {
        let s = Spectrum::new(
            2,
            5,
            vec![0.2, 0.15, 0.15, 0.1, 0.1, 0.1, 0.05, 0.05, 0.05, 0.05],
        )
        .unwrap();
        assert_eq!(
            abs_sep_2xn_margin(&s).unwrap().margin,
            abs_sep_2xn_margin(&s.swapped()).unwrap().margin
        );
    }

    #[test]
    fn classify_examples() {
        let c = classify(&theorem_one(), 1e-9);
        assert_eq!(c.verdict, Verdict::Boundary);
        assert!((c.purity - 0.375).abs() < 1e-15);

        let c = classify(&Spectrum::maximally_mixed(5, 5).unwrap(), 1e-9);
        assert!(c.criterion.is_none());
        assert_eq!(c.verdict, Verdict::Feasible);

        let c = classify(&Spectrum::pure(4, 5).unwrap(), 1e-9);
        assert_eq!(c.verdict, Verdict::Undetermined);

        let mut v = vec![0.12; 6];
        v[0] = 0.4;
        let c = classify(&Spectrum::new(2, 3, v).unwrap(), 1e-9);
        assert!((c.criterion.unwrap().margin + 0.04).abs() < 1e-15);
        assert_eq!(c.verdict, Verdict::Infeasible);
    }

    #[test]
    fn criterion_inference() {
        assert_eq!(
            CriterionKind::for_dims(2, 7).unwrap(),
            CriterionKind::AbsSep2xN
        );
        assert_eq!(
            CriterionKind::for_dims(7, 3).unwrap(),
            CriterionKind::AbsPPT3xN
        );
        assert_eq!(
            CriterionKind::for_dims(3, 2).unwrap(),
            CriterionKind::AbsSep2xN
        );
        assert!(CriterionKind::for_dims(4, 4).is_err());
    }
}
