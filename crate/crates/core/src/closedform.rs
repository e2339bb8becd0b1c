//! Closed-form maximum purities, their optimal spectra and the equivalent
//! Hilbert-Schmidt radii, with a checker that measures each conjectured
//! spectrum against the exact criteria.
//!
//! * Two qubits: the maximum purity of an absolutely separable state is `3/8`,
//!   attained only at `λ₁ = λ₂ = 1/4 + 1/(4√2)`, `λ₃ = λ₄ = 1/4 − 1/(4√2)`.
//! * Qubit-qudit (`n ≥ 3`): conjectured maximum `2/(3n)` for even `n` and
//!   `(6n+4)/(3n+1)²` for odd `n`.
//! * Qutrit-qudit (`n ≥ 2`): conjectured maximum depending on `n mod 4`.
//!
//! Spectra are two-level: `k` copies of a large value followed by `N − k`
//! copies of a small one. Each level is a single division of small integers,
//! so the values are correctly rounded.

use serde::{Deserialize, Serialize};

use crate::criteria::{criterion_margin, CriterionKind, MarginPart};
use crate::error::{Error, Result};
use crate::spectrum::{radius_from_purity, Spectrum};

/// Default `|margin|` below which a conjectured spectrum counts as saturating
/// its criterion.
pub const DEFAULT_SATURATION_TOL: f64 = 1e-10;

/// Tolerance for the purity and radius identity checks in [`verify_conjecture`].
pub const IDENTITY_TOL: f64 = 1e-12;

/// Maximum purity of absolutely separable two-qubit states and the unique
/// spectrum attaining it.
pub fn two_qubit_optimum() -> (f64, Spectrum) {
    let offset = 1.0 / (4.0 * std::f64::consts::SQRT_2);
    let big = 0.25 + offset;
    let small = 0.25 - offset;
    let s = Spectrum::new(2, 2, vec![big, big, small, small])
        .expect("two-qubit optimum is a valid spectrum");
    (0.375, s)
}

fn check_qubit_domain(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Domain {
            what: "the qubit-qudit conjecture",
            domain: "n >= 3",
            value: n,
        });
    }
    Ok(())
}

fn check_qutrit_domain(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain {
            what: "the qutrit-qudit conjecture",
            domain: "n >= 2",
            value: n,
        });
    }
    Ok(())
}

/// Conjectured maximum purity of absolutely separable `2 ⊗ n` states.
pub fn conj_max_purity_2xn(n: usize) -> Result<f64> {
    check_qubit_domain(n)?;
    let nf = n as f64;
    Ok(if n.is_multiple_of(2) {
        2.0 / (3.0 * nf)
    } else {
        (6.0 * nf + 4.0) / ((3.0 * nf + 1.0) * (3.0 * nf + 1.0))
    })
}

/// Number of large entries and the two levels `(big, small)` of the
/// conjectured `2 ⊗ n` spectrum.
fn levels_2xn(n: usize) -> (usize, f64, f64) {
    let nf = n as f64;
    if n.is_multiple_of(2) {
        (n / 2, 1.0 / nf, 1.0 / (3.0 * nf))
    } else {
        let d = 3.0 * nf + 1.0;
        (n.div_ceil(2), 3.0 / d, 1.0 / d)
    }
}

/// Same for `3 ⊗ n`.
fn levels_3xn(n: usize) -> (usize, f64, f64) {
    let nf = n as f64;
    match n % 4 {
        0 => (3 * n / 4, 2.0 / (3.0 * nf), 2.0 / (9.0 * nf)),
        1 => (
            (3 * n + 1) / 4,
            6.0 / (9.0 * nf + 1.0),
            2.0 / (9.0 * nf + 1.0),
        ),
        2 => (
            (3 * n + 2) / 4,
            6.0 / (9.0 * nf + 2.0),
            2.0 / (9.0 * nf + 2.0),
        ),
        _ => (
            (3 * n - 1) / 4,
            6.0 / (9.0 * nf - 1.0),
            2.0 / (9.0 * nf - 1.0),
        ),
    }
}

fn two_level(m: usize, n: usize, (count, big, small): (usize, f64, f64)) -> Spectrum {
    let mut v = vec![small; m * n];
    v[..count].fill(big);
    Spectrum::new(m, n, v).expect("conjectured spectrum is normalized")
}

/// Spectrum at which the qubit-qudit conjecture is attained.
pub fn conj_spectrum_2xn(n: usize) -> Result<Spectrum> {
    check_qubit_domain(n)?;
    Ok(two_level(2, n, levels_2xn(n)))
}

/// Conjectured maximum purity of absolutely PPT `3 ⊗ n` states.
pub fn conj_max_purity_3xn(n: usize) -> Result<f64> {
    check_qutrit_domain(n)?;
    let nf = n as f64;
    let sq = |x: f64| x * x;
    Ok(match n % 4 {
        0 => 4.0 / (9.0 * nf),
        1 => (36.0 * nf + 8.0) / sq(9.0 * nf + 1.0),
        2 => (36.0 * nf + 16.0) / sq(9.0 * nf + 2.0),
        _ => (36.0 * nf - 8.0) / sq(9.0 * nf - 1.0),
    })
}

/// Spectrum at which the qutrit-qudit conjecture is attained.
pub fn conj_spectrum_3xn(n: usize) -> Result<Spectrum> {
    check_qutrit_domain(n)?;
    Ok(two_level(3, n, levels_3xn(n)))
}

/// Conjectured maximum purity for `m ∈ {2, 3}`.
pub fn conj_max_purity(m: usize, n: usize) -> Result<f64> {
    match m {
        2 => conj_max_purity_2xn(n),
        3 => conj_max_purity_3xn(n),
        _ => Err(Error::Domain {
            what: "the purity conjectures",
            domain: "m in {2, 3}",
            value: m,
        }),
    }
}

/// Conjectured optimal spectrum for `m ∈ {2, 3}`.
pub fn conj_spectrum(m: usize, n: usize) -> Result<Spectrum> {
    match m {
        2 => conj_spectrum_2xn(n),
        3 => conj_spectrum_3xn(n),
        _ => Err(Error::Domain {
            what: "the purity conjectures",
            domain: "m in {2, 3}",
            value: m,
        }),
    }
}

/// Radius of the smallest Hilbert-Schmidt ball around `I/N` containing the
/// absolutely separable (`m = 2`) or absolutely PPT (`m = 3`) states, as
/// conjectured. Evaluated from its own closed form, not from the purity.
pub fn conj_radius(m: usize, n: usize) -> Result<f64> {
    let nf = n as f64;
    match m {
        2 => {
            check_qubit_domain(n)?;
            Ok(if n.is_multiple_of(2) {
                1.0 / (6.0 * nf).sqrt()
            } else {
                (3.0 * nf * nf + 2.0 * nf - 1.0).sqrt() / ((3.0 * nf + 1.0) * (2.0 * nf).sqrt())
            })
        }
        3 => {
            check_qutrit_domain(n)?;
            let (num, den) = match n % 4 {
                0 => return Ok(1.0 / (3.0 * nf.sqrt())),
                1 => (27.0 * nf * nf + 6.0 * nf - 1.0, 9.0 * nf + 1.0),
                2 => (27.0 * nf * nf + 12.0 * nf - 4.0, 9.0 * nf + 2.0),
                _ => (27.0 * nf * nf - 6.0 * nf - 1.0, 9.0 * nf - 1.0),
            };
            Ok(num.sqrt() / (den * (3.0 * nf).sqrt()))
        }
        _ => Err(Error::Domain {
            what: "the radius conjectures",
            domain: "m in {2, 3}",
            value: m,
        }),
    }
}

/// Best known spectrum for the `criterion` on an `m ⊗ n` system: the two-qubit
/// optimum for `2 ⊗ 2`, otherwise the conjectured one. Used as a warm start.
pub fn reference_spectrum(m: usize, n: usize, criterion: CriterionKind) -> Option<Spectrum> {
    let total = m * n;
    let (side, other) = match criterion {
        CriterionKind::AbsSep2xN => (2, total / 2),
        CriterionKind::AbsPPT3xN => (3, total / 3),
        CriterionKind::MaximalBall => return None,
    };
    let base = match (side, other) {
        (2, 2) => two_qubit_optimum().1,
        _ => conj_spectrum(side, other).ok()?,
    };
    Spectrum::new(m, n, base.into_lambdas()).ok()
}

/// Outcome of checking one conjecture against the exact criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub m: usize,
    pub n: usize,
    pub criterion: CriterionKind,
    pub conjectured_purity: f64,
    pub conjectured_radius: f64,
    pub conjectured_spectrum: Spectrum,
    pub spectrum_valid: bool,
    /// Purity recomputed from the conjectured spectrum.
    pub measured_purity: f64,
    /// Hilbert-Schmidt radius of the conjectured spectrum.
    pub measured_radius: f64,
    pub criterion_margin: f64,
    pub criterion_parts: Vec<MarginPart>,
    pub conjecture_feasible: bool,
    pub saturated: bool,
    pub purity_matches_formula: bool,
    pub radius_matches_formula: bool,
    pub tol: f64,
}

/// Builds the conjectured spectrum for `m ⊗ n` (`m ∈ {2, 3}`), recomputes its
/// purity and radius, and measures the exact criterion margin.
///
/// Nothing is asserted about feasibility: the report records what the
/// criterion yields, including negative margins.
pub fn verify_conjecture(m: usize, n: usize, tol: f64) -> Result<ConjectureReport> {
    let purity = conj_max_purity(m, n)?;
    let radius = conj_radius(m, n)?;
    let spectrum = conj_spectrum(m, n)?;
    build_report(m, n, purity, radius, spectrum, tol)
}

/// [`verify_conjecture`], extended to `2 ⊗ 2` through the two-qubit optimum.
pub fn reference_report(m: usize, n: usize, tol: f64) -> Result<ConjectureReport> {
    if (m, n) == (2, 2) {
        let (purity, spectrum) = two_qubit_optimum();
        // √(3/8 − 1/4)
        let radius = 1.0 / (2.0 * std::f64::consts::SQRT_2);
        return build_report(m, n, purity, radius, spectrum, tol);
    }
    verify_conjecture(m, n, tol)
}

fn build_report(
    m: usize,
    n: usize,
    conjectured_purity: f64,
    conjectured_radius: f64,
    spectrum: Spectrum,
    tol: f64,
) -> Result<ConjectureReport> {
    let criterion = if m == 2 {
        CriterionKind::AbsSep2xN
    } else {
        CriterionKind::AbsPPT3xN
    };
    let margin = criterion_margin(criterion, &spectrum)?;
    let total: f64 = spectrum.lambdas().iter().sum();
    let spectrum_valid = (total - 1.0).abs() <= IDENTITY_TOL
        && spectrum.lambdas().iter().all(|&v| v >= 0.0)
        && spectrum.lambdas().windows(2).all(|w| w[0] >= w[1]);
    let measured_purity = spectrum.purity();
    let measured_radius = spectrum.hs_radius();
    Ok(ConjectureReport {
        m,
        n,
        criterion,
        conjectured_purity,
        conjectured_radius,
        spectrum_valid,
        measured_purity,
        measured_radius,
        criterion_margin: margin.margin,
        conjecture_feasible: margin.margin >= -tol,
        saturated: margin.margin.abs() <= tol,
        purity_matches_formula: (measured_purity - conjectured_purity).abs() <= IDENTITY_TOL,
        radius_matches_formula: (measured_radius - conjectured_radius).abs() <= IDENTITY_TOL
            && (radius_from_purity(conjectured_purity, m * n) - conjectured_radius).abs()
                <= IDENTITY_TOL,
        criterion_parts: margin.parts,
        conjectured_spectrum: spectrum,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::abs_sep_2xn_margin;

    #[test]
    fn two_qubit_values() {
        let (p, s) = two_qubit_optimum();
        assert_eq!(p, 0.375);
        let l = s.lambdas();
        assert!((l[0] - 0.4267766953).abs() < 1e-10);
        assert_eq!(l[0], l[1]);
        assert!((l[2] - 0.0732233047).abs() < 1e-10);
        assert_eq!(l[2], l[3]);
        assert!((s.purity() - 0.375).abs() < 1e-15);
        assert!(abs_sep_2xn_margin(&s).unwrap().margin.abs() < 1e-15);
    }

    #[test]
    fn qubit_formula_examples() {
        assert!((conj_max_purity_2xn(3).unwrap() - 0.22).abs() < 1e-15);
        assert!((conj_max_purity_2xn(4).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(conj_max_purity_2xn(5).unwrap(), 0.1328125);
        assert!(conj_max_purity_2xn(2).is_err());
    }

    #[test]
    fn qubit_spectrum_examples() {
        let s = conj_spectrum_2xn(3).unwrap();
        assert_eq!(s.lambdas(), &[0.3, 0.3, 0.1, 0.1, 0.1, 0.1]);
        let s = conj_spectrum_2xn(5).unwrap();
        assert_eq!(&s.lambdas()[..3], &[0.1875; 3]);
        assert_eq!(&s.lambdas()[3..], &[0.0625; 7]);
        let s = conj_spectrum_2xn(4).unwrap();
        assert_eq!(&s.lambdas()[..2], &[0.25; 2]);
        for v in &s.lambdas()[2..] {
            assert!((v - 1.0 / 12.0).abs() < 1e-17);
        }
    }

    #[test]
    fn qutrit_formula_examples() {
        assert!((conj_max_purity_3xn(2).unwrap() - 0.22).abs() < 1e-15);
        assert!((conj_max_purity_3xn(3).unwrap() - 100.0 / 676.0).abs() < 1e-15);
        assert!((conj_max_purity_3xn(4).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        assert!(conj_max_purity_3xn(1).is_err());
    }

    #[test]
    fn qutrit_spectrum_examples() {
        let s = conj_spectrum_3xn(2).unwrap();
        assert_eq!(s.lambdas(), &[0.3, 0.3, 0.1, 0.1, 0.1, 0.1]);
        let s = conj_spectrum_3xn(4).unwrap();
        assert!(s.lambdas()[..3]
            .iter()
            .all(|v| (v - 1.0 / 6.0).abs() < 1e-17));
        assert!(s.lambdas()[3..]
            .iter()
            .all(|v| (v - 1.0 / 18.0).abs() < 1e-17));
        let s = conj_spectrum_3xn(3).unwrap();
        assert!(s.lambdas()[..2]
            .iter()
            .all(|v| (v - 6.0 / 26.0).abs() < 1e-17));
        assert!(s.lambdas()[2..]
            .iter()
            .all(|v| (v - 2.0 / 26.0).abs() < 1e-17));
    }

    #[test]
    fn radius_examples() {
        assert!((conj_radius(2, 4).unwrap() - 1.0 / 24f64.sqrt()).abs() < 1e-15);
        assert!((conj_radius(2, 4).unwrap() - 0.204124).abs() < 1e-6);
        assert!((conj_radius(2, 3).unwrap() - 32f64.sqrt() / (10.0 * 6f64.sqrt())).abs() < 1e-15);
        assert!((conj_radius(2, 3).unwrap() - 0.230940).abs() < 1e-6);
        assert!((conj_radius(3, 4).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(conj_radius(4, 4).is_err());
        assert!(conj_radius(2, 2).is_err());
    }

    #[test]
    fn overlap_agrees() {
        assert!((conj_max_purity_2xn(3).unwrap() - conj_max_purity_3xn(2).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn verify_qubit_cases_saturate() {
        for n in [4, 5] {
            let r = verify_conjecture(2, n, DEFAULT_SATURATION_TOL).unwrap();
            assert!(r.purity_matches_formula);
            assert!(r.radius_matches_formula);
            assert!(r.spectrum_valid);
            assert!(
                r.criterion_margin.abs() < 1e-15,
                "n={n}: {}",
                r.criterion_margin
            );
            assert!(r.saturated && r.conjecture_feasible);
        }
    }

    #[test]
    fn verify_qutrit_four_reports_violation() {
        let r = verify_conjecture(3, 4, DEFAULT_SATURATION_TOL).unwrap();
        assert!(!r.conjecture_feasible);
        assert!(!r.saturated);
        assert!(r.purity_matches_formula);
        let first = r
            .criterion_parts
            .iter()
            .find(|p| p.name == "min_eig_first")
            .unwrap();
        assert!((first.value + 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn two_qubit_report() {
        let r = reference_report(2, 2, DEFAULT_SATURATION_TOL).unwrap();
        assert!(r.saturated && r.purity_matches_formula && r.radius_matches_formula);
        assert!(verify_conjecture(2, 2, DEFAULT_SATURATION_TOL).is_err());
    }

    #[test]
    fn reference_spectra() {
        let s = reference_spectrum(2, 2, CriterionKind::AbsSep2xN).unwrap();
        assert_eq!(s, two_qubit_optimum().1);
        let s = reference_spectrum(5, 2, CriterionKind::AbsSep2xN).unwrap();
        assert_eq!((s.m(), s.n()), (5, 2));
        assert_eq!(s.lambdas(), conj_spectrum_2xn(5).unwrap().lambdas());
        let s = reference_spectrum(2, 3, CriterionKind::AbsPPT3xN).unwrap();
        assert_eq!(s.lambdas(), conj_spectrum_3xn(2).unwrap().lambdas());
    }
}
