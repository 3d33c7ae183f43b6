//! Dense symmetric eigenproblems and nullspaces, used by the spectral checks.

use faer::linalg::triangular_solve::{solve_lower_triangular_in_place, solve_upper_triangular_in_place};
use faer::{Mat, MatRef, Par, Side};

use crate::{Error, Result};

/// Largest total dimension accepted by the dense spectral paths.
pub const DENSE_CAP: usize = 6000;

pub fn check_cap(size: usize) -> Result<()> {
    if size > DENSE_CAP {
        return Err(Error::Size { size, cap: DENSE_CAP });
    }
    Ok(())
}

fn check_square(m: MatRef<'_, f64>, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument(format!("{what} must be square, got {}x{}", m.nrows(), m.ncols())));
    }
    Ok(())
}

/// Eigenvalues of a symmetric matrix in nondecreasing order.
pub fn sym_eigenvalues(a: MatRef<'_, f64>) -> Result<Vec<f64>> {
    check_square(a, "matrix")?;
    a.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Backend(format!("eigensolver failed: {e:?}")))
}

/// Generalized symmetric-definite eigenproblem `A x = λ B x` with `B` SPD.
///
/// Returns the eigenvalues in nondecreasing order and, if requested, the
/// `B`-orthonormal eigenvectors as columns.
pub fn gen_sym_eigen(a: MatRef<'_, f64>, b: MatRef<'_, f64>, vectors: bool) -> Result<(Vec<f64>, Option<Mat<f64>>)> {
    check_square(a, "A")?;
    check_square(b, "B")?;
    if a.nrows() != b.nrows() {
        return Err(Error::InvalidArgument(format!(
            "A is {}x{} but B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), vectors.then(|| Mat::zeros(0, 0))));
    }
    let llt = b.llt(Side::Lower).map_err(|_| Error::InvalidArgument("B is not positive definite".into()))?;
    let l = llt.L();
    // C = L⁻¹ A L⁻ᵀ
    let mut c = a.to_owned();
    solve_lower_triangular_in_place(l, c.as_mut(), Par::Seq);
    let mut ct = c.transpose().to_owned();
    solve_lower_triangular_in_place(l, ct.as_mut(), Par::Seq);
    let sym = Mat::from_fn(n, n, |i, j| 0.5 * (ct[(i, j)] + ct[(j, i)]));
    if !vectors {
        return Ok((sym_eigenvalues(sym.as_ref())?, None));
    }
    let evd = sym.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Backend(format!("eigensolver failed: {e:?}")))?;
    let values: Vec<f64> = (0..n).map(|i| evd.S()[i]).collect();
    let mut x = evd.U().to_owned();
    solve_upper_triangular_in_place(l.transpose(), x.as_mut(), Par::Seq);
    Ok((values, Some(x)))
}

/// Orthonormal basis (as columns) of the nullspace of `a`, taking singular
/// values below `rel_tol · σ_max` as zero.
pub fn nullspace(a: MatRef<'_, f64>, rel_tol: f64) -> Result<Mat<f64>> {
    let (m, n) = (a.nrows(), a.ncols());
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    if m == 0 {
        return Ok(Mat::identity(n, n));
    }
    let svd = a.svd().map_err(|e| Error::Backend(format!("svd failed: {e:?}")))?;
    let s = svd.S();
    let k = m.min(n);
    let smax = if k > 0 { s[0] } else { 0.0 };
    let rank = (0..k).filter(|&i| s[i] > rel_tol * smax).count();
    Ok(svd.V().subcols(rank, n - rank).to_owned())
}

/// Dense matrix from row-major nested slices; convenient in tests.
pub fn from_rows(rows: &[&[f64]]) -> Mat<f64> {
    let ncols = rows.first().map_or(0, |r| r.len());
    Mat::from_fn(rows.len(), ncols, |i, j| rows[i][j])
}
