//! Direct and MINRES solvers for the symmetric indefinite systems.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Llt, Lu};
use faer::{Mat, Side};
use serde::Serialize;

use crate::assembly::{assemble_gram, BlockSystem};
use crate::linalg::dense::{check_cap, sym_eigenvalues};
use crate::mesh::Mesh;
use crate::sparse::{dot, norm2, CsrMatrix};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Minres,
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    /// `‖b − Mx‖₂ / ‖b‖₂`, zero for a zero right-hand side.
    pub relative_residual: f64,
    pub method: Method,
    pub iterations: Option<usize>,
    pub inertia: Option<Inertia>,
}

/// Residual tolerance a direct solve must meet.
pub const DIRECT_TOL: f64 = 1e-10;

pub fn relative_residual(m: &CsrMatrix, x: &[f64], b: &[f64]) -> f64 {
    let bn = norm2(b);
    if bn == 0.0 {
        return norm2(&m.matvec(x));
    }
    let mx = m.matvec(x);
    let r: Vec<f64> = b.iter().zip(&mx).map(|(b, m)| b - m).collect();
    norm2(&r) / bn
}

fn check_square(m: &CsrMatrix, rhs: &[f64]) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() != rhs.len() {
        return Err(Error::InvalidArgument(format!(
            "system is {}x{} but the right-hand side has {} entries",
            m.nrows(),
            m.ncols(),
            rhs.len()
        )));
    }
    Ok(())
}

/// Sparse LU factorization kept for repeated solves.
pub struct SparseLu {
    lu: Lu<usize, f64>,
    n: usize,
}

impl SparseLu {
    pub fn new(m: &CsrMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidArgument("LU needs a square matrix".into()));
        }
        let lu = m.to_faer()?.sp_lu().map_err(|e| Error::SingularSystem(format!("sparse LU failed: {e:?}")))?;
        Ok(Self { lu, n: m.nrows() })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut b = Mat::from_fn(self.n, 1, |i, _| rhs[i]);
        self.lu.solve_in_place(b.as_mut());
        (0..self.n).map(|i| b[(i, 0)]).collect()
    }
}

/// Solves `M x = b` by sparse LU with up to two steps of iterative refinement.
pub fn solve_sparse_direct(m: &CsrMatrix, rhs: &[f64]) -> Result<SolveReport> {
    check_square(m, rhs)?;
    let n = rhs.len();
    if rhs.iter().all(|v| *v == 0.0) {
        return Ok(SolveReport {
            solution: vec![0.0; n],
            relative_residual: 0.0,
            method: Method::Direct,
            iterations: None,
            inertia: None,
        });
    }
    let lu = SparseLu::new(m)?;
    let mut x = lu.solve(rhs);
    let mut res = relative_residual(m, &x, rhs);
    for _ in 0..2 {
        if !(res.is_finite() && res >= DIRECT_TOL * 1e-3) {
            break;
        }
        let mx = m.matvec(&x);
        let r: Vec<f64> = rhs.iter().zip(&mx).map(|(b, v)| b - v).collect();
        let dx = lu.solve(&r);
        x.iter_mut().zip(&dx).for_each(|(x, d)| *x += d);
        res = relative_residual(m, &x, rhs);
    }
    if !res.is_finite() || x.iter().any(|v| !v.is_finite()) || res > DIRECT_TOL {
        return Err(Error::SingularSystem(format!("direct solve left relative residual {res:e}")));
    }
    Ok(SolveReport { solution: x, relative_residual: res, method: Method::Direct, iterations: None, inertia: None })
}

/// Direct solve of an assembled block system.
pub fn solve_direct(system: &BlockSystem, rhs: &[f64]) -> Result<SolveReport> {
    solve_sparse_direct(&system.matrix, rhs)
}

/// Inertia of a symmetric matrix from its dense spectrum. Eigenvalues with
/// `|λ| ≤ 1e-12 · max|λ|` count as zero.
pub fn inertia(m: &CsrMatrix) -> Result<Inertia> {
    check_cap(m.nrows())?;
    let eig = sym_eigenvalues(m.to_dense().as_ref())?;
    let scale = eig.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = 1e-12 * scale;
    Ok(Inertia {
        positive: eig.iter().filter(|v| **v > tol).count(),
        negative: eig.iter().filter(|v| **v < -tol).count(),
        zero: eig.iter().filter(|v| v.abs() <= tol).count(),
    })
}

/// Symmetric positive definite preconditioner `z = P⁻¹ r`.
pub trait Preconditioner {
    fn apply(&self, r: &[f64], z: &mut [f64]);
}

pub struct IdentityPreconditioner;

impl Preconditioner for IdentityPreconditioner {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
    }
}

/// Block-diagonal preconditioner with one sparse Cholesky factor per block.
pub struct BlockDiagonalPreconditioner {
    blocks: Vec<(usize, usize, Llt<usize, f64>)>,
}

impl BlockDiagonalPreconditioner {
    pub fn new(blocks: &[&CsrMatrix]) -> Result<Self> {
        let mut out = Vec::with_capacity(blocks.len());
        let mut offset = 0;
        for (i, b) in blocks.iter().enumerate() {
            if b.nrows() != b.ncols() {
                return Err(Error::InvalidArgument(format!("preconditioner block {i} is not square")));
            }
            let llt = b
                .to_faer()?
                .sp_cholesky(Side::Lower)
                .map_err(|_| Error::InvalidArgument(format!("preconditioner block {i} is not SPD")))?;
            out.push((offset, b.nrows(), llt));
            offset += b.nrows();
        }
        Ok(Self { blocks: out })
    }

    /// `diag(G_R, G_S, G_Y)` from the natural norms of the three fields.
    pub fn for_system(system: &BlockSystem, mesh: &Mesh, degree: usize) -> Result<Self> {
        let norms = system.kind.norms();
        let grams: Vec<CsrMatrix> =
            system.spaces.iter().zip(norms).map(|(h, n)| assemble_gram(h, n, mesh, degree)).collect::<Result<_>>()?;
        Self::new(&grams.iter().collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.blocks.last().map_or(0, |(o, n, _)| o + n)
    }
}

impl Preconditioner for BlockDiagonalPreconditioner {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        for (offset, n, llt) in &self.blocks {
            let mut b = Mat::from_fn(*n, 1, |i, _| r[offset + i]);
            llt.solve_in_place(b.as_mut());
            for i in 0..*n {
                z[offset + i] = b[(i, 0)];
            }
        }
    }
}

pub const DEFAULT_MINRES_TOL: f64 = 1e-10;

/// Preconditioned MINRES. Stops when the preconditioned residual norm falls
/// below `tol` times its initial value; at most `max_iter` iterations
/// (default `10 · n`).
pub fn solve_minres(
    m: &CsrMatrix,
    rhs: &[f64],
    precond: &dyn Preconditioner,
    tol: f64,
    max_iter: Option<usize>,
) -> Result<SolveReport> {
    check_square(m, rhs)?;
    let n = rhs.len();
    let max_iter = max_iter.unwrap_or(10 * n);
    let mut x = vec![0.0; n];
    let done = |x: Vec<f64>, iterations| {
        let relative_residual = relative_residual(m, &x, rhs);
        SolveReport {
            solution: x,
            relative_residual,
            method: Method::Minres,
            iterations: Some(iterations),
            inertia: None,
        }
    };

    let mut r1 = rhs.to_vec();
    let mut y = vec![0.0; n];
    precond.apply(&r1, &mut y);
    let beta1_sq = dot(&r1, &y);
    if beta1_sq < 0.0 {
        return Err(Error::InvalidArgument("preconditioner is not positive definite".into()));
    }
    let beta1 = beta1_sq.sqrt();
    if beta1 == 0.0 {
        return Ok(done(x, 0));
    }
    let mut r2 = r1.clone();
    let (mut oldb, mut beta, mut dbar, mut epsln, mut phibar) = (0.0, beta1, 0.0, 0.0, beta1);
    let (mut cs, mut sn) = (-1.0f64, 0.0f64);
    let mut w = vec![0.0; n];
    let mut w2 = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut av = vec![0.0; n];

    for itn in 1..=max_iter {
        let s = 1.0 / beta;
        v.iter_mut().zip(&y).for_each(|(v, y)| *v = s * y);
        m.matvec_into(&v, &mut av);
        if itn >= 2 {
            let c = beta / oldb;
            av.iter_mut().zip(&r1).for_each(|(a, r)| *a -= c * r);
        }
        let alfa = dot(&v, &av);
        let c = alfa / beta;
        av.iter_mut().zip(&r2).for_each(|(a, r)| *a -= c * r);
        std::mem::swap(&mut r1, &mut r2);
        r2.copy_from_slice(&av);
        precond.apply(&r2, &mut y);
        oldb = beta;
        let beta_sq = dot(&r2, &y);
        if beta_sq < 0.0 {
            return Err(Error::InvalidArgument("preconditioner is not positive definite".into()));
        }
        beta = beta_sq.sqrt();

        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = gbar.hypot(beta).max(f64::EPSILON);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;

        let denom = 1.0 / gamma;
        for i in 0..n {
            let w1 = w2[i];
            w2[i] = w[i];
            w[i] = (v[i] - oldeps * w1 - delta * w2[i]) * denom;
            x[i] += phi * w[i];
        }
        if phibar / beta1 < tol || beta == 0.0 {
            return Ok(done(x, itn));
        }
    }
    Err(Error::IterationLimit { iterations: max_iter, residual: phibar / beta1 })
}
