//! Verification: manufactured solutions, error norms, convergence studies and
//! discrete stability constants.

pub mod convergence;
pub mod manufactured;
pub mod norms;
pub mod stability;

pub use convergence::{
    convergence_study, fit_rate, solve_on_mesh, ConvergenceReport, ConvergenceRow, Rates, Solved, SolverChoice,
    StudyOptions,
};
pub use manufactured::{manufactured_solution, AnalyticField, CoefficientPreset, Manufactured};
pub use norms::{difference_norm, error_norm, ERROR_QUAD_DEGREE};
pub use stability::{
    decomposition_stability, decomposition_study, hypotheses, hypotheses_study, infsup_constant, infsup_study,
    interpolation_bound, kernel_coercivity, kernel_coercivity_raw, norm_equivalence, pairing_infsup, system_infsup,
    Coercivity, Decomposer, DecompositionReport, DecompositionStudy, HypothesesReport, HypothesesStudy, InfSup,
    InfSupStudy, InterpolationBound, Pairing, Spectrum, Split,
};

/// Relative spread `(max − min) / min` of a set of positive values.
pub fn drift(values: &[f64]) -> f64 {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if values.is_empty() || min <= 0.0 {
        return f64::INFINITY;
    }
    (max - min) / min
}
