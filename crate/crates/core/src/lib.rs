//! Order-reduced mixed finite elements for two fourth-order model problems in 3D.
//!
//! A fourth-order problem posed on a second-order Sobolev space is rewritten as a
//! symmetric three-field saddle-point system on first-order spaces. Two instances
//! are implemented on tetrahedral meshes of the unit cube:
//!
//! - the bi-Laplacian `Δ(αΔu) = f` with clamped boundary, discretized on
//!   `P1 × (P1³ + edge bubbles) × Nédélec`;
//! - the fourth-order curl problem `curl² A curl² u + u = f`, discretized on
//!   `Nédélec × (P1³ + face bubbles) × Raviart–Thomas`.
//!
//! The crate also contains the verification machinery used to check the
//! discretizations: manufactured solutions, error norms and fitted rates, discrete
//! inf-sup constants, kernel coercivity and the stability of the discrete regular
//! decompositions.
//!
//! ```no_run
//! use ordfem::analysis::{convergence_study, manufactured_solution, StudyOptions};
//! use ordfem::assembly::ProblemKind;
//!
//! let problem = manufactured_solution(ProblemKind::BiLaplacian, Default::default());
//! let report = convergence_study(&problem, &[2, 4, 8], &StudyOptions::default()).unwrap();
//! println!("H1 rate of u: {:.3}", report.rates.err_u);
//! ```

pub mod analysis;
pub mod assembly;
pub mod error;
pub mod fe;
pub mod interp;
pub mod linalg;
pub mod mesh;
pub mod report;
pub mod solver;
pub mod sparse;

pub use error::{Error, Result};

/// Default seed for every randomized check.
pub const DEFAULT_SEED: u64 = 0x5EED;
