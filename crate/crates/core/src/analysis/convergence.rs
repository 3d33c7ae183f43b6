//! Convergence studies on a sequence of structured cube meshes.

use serde::{Deserialize, Serialize};

use crate::assembly::{assemble_load, assemble_operator, BlockSystem, ProblemKind};
use crate::fe::DofHandler;
use crate::mesh::{build_structured_cube, Mesh};
use crate::solver::{solve_direct, solve_minres, BlockDiagonalPreconditioner, SolveReport, DEFAULT_MINRES_TOL};
use crate::sparse::norm2;
use crate::{Error, Result};

use super::manufactured::Manufactured;
use super::norms::{difference_norm, error_norm, ERROR_QUAD_DEGREE};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverChoice {
    #[default]
    Direct,
    Minres,
}

impl std::str::FromStr for SolverChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(SolverChoice::Direct),
            "minres" => Ok(SolverChoice::Minres),
            _ => Err(Error::InvalidArgument(format!("unknown solver `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyOptions {
    pub solver: SolverChoice,
    pub minres_tol: f64,
    pub error_degree: usize,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self { solver: SolverChoice::Direct, minres_tol: DEFAULT_MINRES_TOL, error_degree: ERROR_QUAD_DEGREE }
    }
}

/// One mesh of a convergence study.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    /// Dof counts of `(u, φ, auxiliary)`.
    pub dofs: [usize; 3],
    /// `‖u − u_h‖` in H¹ (bi-Laplacian) or H(curl) (quad-curl).
    pub err_u: f64,
    /// `‖φ − φ_h‖` in H¹.
    pub err_phi: f64,
    /// Distance of the auxiliary field to its value on the finest mesh.
    pub err_aux_ref: Option<f64>,
    /// Distance of the auxiliary field to its value on the next mesh.
    pub err_aux_cauchy: Option<f64>,
    pub relative_residual: f64,
    /// `‖B_YR u + B_YS φ‖₂ / ‖b‖₂`, the residual of the constraint row.
    pub constraint_residual: f64,
    pub iterations: Option<usize>,
}

/// Least-squares slopes of `log(error)` against `log(h)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rates {
    pub err_u: f64,
    pub err_phi: f64,
    pub err_aux_ref: Option<f64>,
    pub err_aux_cauchy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub problem: ProblemKind,
    pub coefficient: String,
    pub rows: Vec<ConvergenceRow>,
    pub rates: Rates,
}

/// Slope of the least-squares line through `(ln h, ln e)`; `None` with fewer
/// than two usable points.
pub fn fit_rate(h: &[f64], e: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = h
        .iter()
        .zip(e)
        .filter(|(h, e)| **h > 0.0 && **e > 0.0 && e.is_finite())
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// A solved discretization on one mesh.
pub struct Solved {
    pub n: usize,
    pub mesh: Mesh,
    pub system: BlockSystem,
    pub report: SolveReport,
    pub constraint_residual: f64,
}

impl Solved {
    pub fn field(&self, i: usize) -> &[f64] {
        self.system.split(&self.report.solution)[i]
    }
    pub fn handler(&self, i: usize) -> &DofHandler {
        &self.system.spaces[i]
    }
}

/// Assembles and solves the manufactured problem on the `n`-cube mesh.
pub fn solve_on_mesh(problem: &Manufactured, n: usize, opts: &StudyOptions) -> Result<Solved> {
    let mesh = build_structured_cube(n)?;
    let system = assemble_operator(&problem.spec, &mesh)?;
    let rhs = assemble_load(&problem.spec, &mesh)?.to_flat();
    let report = match opts.solver {
        SolverChoice::Direct => solve_direct(&system, &rhs)?,
        SolverChoice::Minres => {
            let pre = BlockDiagonalPreconditioner::for_system(&system, &mesh, problem.spec.quad_degree)?;
            solve_minres(&system.matrix, &rhs, &pre, opts.minres_tol, None)?
        }
    };
    let [u, phi, _] = system.split(&report.solution);
    let bu = system.b_yr.matvec(u);
    let bphi = system.b_ys.matvec(phi);
    let c: Vec<f64> = bu.iter().zip(&bphi).map(|(a, b)| a + b).collect();
    let bn = norm2(&rhs);
    let constraint_residual = if bn > 0.0 { norm2(&c) / bn } else { norm2(&c) };
    Ok(Solved { n, mesh, system, report, constraint_residual })
}

/// Solves on each mesh in `ns` and measures errors and rates.
///
/// `u` and `φ` are compared with the exact fields. The auxiliary field has no
/// closed form, so it is compared with the finest solution and with the
/// solution on the next mesh (nested meshes, no interpolation).
pub fn convergence_study(problem: &Manufactured, ns: &[usize], opts: &StudyOptions) -> Result<ConvergenceReport> {
    if ns.is_empty() {
        return Err(Error::InvalidArgument("no mesh sizes given".into()));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(format!("mesh sizes must be strictly increasing, got {ns:?}")));
    }
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidArgument(format!("mesh size {n} leaves no interior dofs; use n >= 2")));
    }
    let kind = problem.spec.kind;
    let [norm_u, norm_phi, norm_aux] = kind.norms();
    let deg = opts.error_degree;
    let solved: Vec<Solved> = ns.iter().map(|&n| solve_on_mesh(problem, n, opts)).collect::<Result<_>>()?;

    let nested = |a: &Solved, b: &Solved| b.n % a.n == 0;
    let finest = solved.last().unwrap();
    let mut rows = Vec::with_capacity(solved.len());
    for (i, s) in solved.iter().enumerate() {
        let err_u = error_norm(&s.mesh, s.handler(0), s.field(0), &problem.u, norm_u, deg)?;
        let err_phi = error_norm(&s.mesh, s.handler(1), s.field(1), &problem.phi, norm_phi, deg)?;
        let diff = |other: &Solved| {
            difference_norm(
                &s.mesh,
                s.handler(2),
                s.field(2),
                &other.mesh,
                other.handler(2),
                other.field(2),
                norm_aux,
                deg,
            )
        };
        let err_aux_ref = if i + 1 < solved.len() && nested(s, finest) { Some(diff(finest)?) } else { None };
        let err_aux_cauchy = match solved.get(i + 1) {
            Some(next) if nested(s, next) => Some(diff(next)?),
            _ => None,
        };
        rows.push(ConvergenceRow {
            n: s.n,
            h: s.mesh.h(),
            dofs: s.system.dims(),
            err_u,
            err_phi,
            err_aux_ref,
            err_aux_cauchy,
            relative_residual: s.report.relative_residual,
            constraint_residual: s.constraint_residual,
            iterations: s.report.iterations,
        });
    }
    let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let opt_rate = |pick: fn(&ConvergenceRow) -> Option<f64>| {
        let (h, e): (Vec<f64>, Vec<f64>) = rows.iter().filter_map(|r| pick(r).map(|e| (r.h, e))).unzip();
        fit_rate(&h, &e)
    };
    let rates = Rates {
        err_u: fit_rate(&hs, &rows.iter().map(|r| r.err_u).collect::<Vec<_>>()).unwrap_or(f64::NAN),
        err_phi: fit_rate(&hs, &rows.iter().map(|r| r.err_phi).collect::<Vec<_>>()).unwrap_or(f64::NAN),
        err_aux_ref: opt_rate(|r| r.err_aux_ref),
        err_aux_cauchy: opt_rate(|r| r.err_aux_cauchy),
    };
    Ok(ConvergenceReport { problem: kind, coefficient: problem.preset.label(), rows, rates })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_of_exact_power_law() {
        let h = [0.5, 0.25, 0.125];
        let e: Vec<f64> = h.iter().map(|h: &f64| 3.0 * h.powf(1.5)).collect();
        assert!((fit_rate(&h, &e).unwrap() - 1.5).abs() < 1e-12);
        assert!(fit_rate(&h[..1], &e[..1]).is_none());
    }
}
