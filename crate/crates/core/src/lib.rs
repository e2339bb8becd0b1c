//! Absolute separability and absolute PPT from spectra.
//!
//! Decides, from its eigenvalues alone, whether every state of a qubit-qudit
//! (`2 ⊗ n`) or qutrit-qudit (`3 ⊗ n`) system with that spectrum is
//! separable (respectively PPT), and studies how large the purity of such a
//! state can be.
//!
//! ```
//! use abs_spectra::criteria::{classify, Verdict};
//! use abs_spectra::optimizer::{maximize_purity, Problem, SolverOptions};
//! use abs_spectra::spectrum::Spectrum;
//!
//! let s = Spectrum::new(2, 2, vec![0.25; 4])?;
//! assert_eq!(classify(&s, 1e-9).verdict, Verdict::Feasible);
//!
//! let opts = SolverOptions { restarts: 4, ..SolverOptions::default() };
//! let best = maximize_purity(&Problem::new(2, 2)?, &opts);
//! assert!((best.best_purity - 0.375).abs() < 1e-6);
//! # Ok::<(), abs_spectra::error::Error>(())
//! ```

pub mod closedform;
pub mod criteria;
pub mod error;
pub mod optimizer;
pub mod oracle;
pub mod report;
pub mod spectrum;
pub mod sym3;
