//! Error norms against exact fields and between solutions on nested meshes.

use crate::assembly::{map_cells, Norm};
use crate::fe::basis::eval_unchecked;
use crate::fe::quadrature::quadrature_rule;
use crate::fe::{combine, DofHandler, FieldEval};
use crate::linalg::small::{curl_of, mat_sub, sub, trace};
use crate::mesh::Mesh;
use crate::{Error, Result};

use super::manufactured::AnalyticField;

/// Default quadrature degree for error integrals.
pub const ERROR_QUAD_DEGREE: usize = 8;

fn check(handler: &DofHandler, coeffs: &[f64], norm: Norm) -> Result<()> {
    if !norm.applies_to(handler.kind()) {
        return Err(Error::InvalidArgument(format!("{norm:?} norm is not defined on {}", handler.kind())));
    }
    if coeffs.len() != handler.num_dofs() {
        return Err(Error::InvalidArgument(format!(
            "{} coefficients for a space with {} dofs",
            coeffs.len(),
            handler.num_dofs()
        )));
    }
    Ok(())
}

/// Squared norm density of the difference of two evaluations.
fn density(a: &FieldEval, b: &FieldEval, norm: Norm) -> Result<f64> {
    match (a, b) {
        (FieldEval::Scalar { value: va, grad: ga }, FieldEval::Scalar { value: vb, grad: gb }) => {
            let dv = va - vb;
            let dg = sub(ga, gb);
            Ok(dv * dv + if norm == Norm::L2 { 0.0 } else { crate::linalg::small::dot(&dg, &dg) })
        }
        (FieldEval::Vector { value: va, jacobian: ja }, FieldEval::Vector { value: vb, jacobian: jb }) => {
            let dv = sub(va, vb);
            let dj = mat_sub(ja, jb);
            let l2 = crate::linalg::small::dot(&dv, &dv);
            Ok(l2
                + match norm {
                    Norm::L2 => 0.0,
                    Norm::H1 => crate::linalg::small::frobenius_dot(&dj, &dj),
                    Norm::Hcurl => {
                        let c = curl_of(&dj);
                        crate::linalg::small::dot(&c, &c)
                    }
                    Norm::Hdiv => trace(&dj).powi(2),
                })
        }
        _ => Err(Error::InvalidArgument("scalar and vector fields cannot be compared".into())),
    }
}

/// `‖exact − u_h‖` in the given norm.
pub fn error_norm(
    mesh: &Mesh,
    handler: &DofHandler,
    coeffs: &[f64],
    exact: &AnalyticField,
    norm: Norm,
    degree: usize,
) -> Result<f64> {
    check(handler, coeffs, norm)?;
    if exact.is_vector() != handler.kind().is_vector() {
        return Err(Error::InvalidArgument("exact field and space differ in rank".into()));
    }
    let rule = quadrature_rule(degree)?;
    let parts = map_cells(mesh.num_cells(), |c| {
        let geom = mesh.geometry(c);
        let local = handler.gather(c, coeffs);
        let mut s = 0.0;
        for (bary, w) in rule.points.iter().zip(&rule.weights) {
            let uh = combine(&eval_unchecked(handler.kind(), geom, bary), &local);
            let ue = exact.eval(&geom.point(bary));
            s += w * 6.0 * geom.volume * density(&ue, &uh, norm)?;
        }
        Ok(s)
    })?;
    Ok(parts.iter().sum::<f64>().max(0.0).sqrt())
}

/// `‖u_coarse − u_fine‖` for discrete fields on nested structured meshes,
/// integrated cell by cell on the fine mesh.
#[allow(clippy::too_many_arguments)]
pub fn difference_norm(
    coarse_mesh: &Mesh,
    coarse: &DofHandler,
    coarse_coeffs: &[f64],
    fine_mesh: &Mesh,
    fine: &DofHandler,
    fine_coeffs: &[f64],
    norm: Norm,
    degree: usize,
) -> Result<f64> {
    check(coarse, coarse_coeffs, norm)?;
    check(fine, fine_coeffs, norm)?;
    if coarse.kind() != fine.kind() {
        return Err(Error::InvalidArgument("fields live in different space kinds".into()));
    }
    let rule = quadrature_rule(degree)?;
    let parts = map_cells(fine_mesh.num_cells(), |c| {
        let geom = fine_mesh.geometry(c);
        let centroid = geom.point(&[0.25; 4]);
        let (cc, _) = coarse_mesh
            .locate(&centroid)
            .ok_or_else(|| Error::InvalidArgument(format!("fine cell {c} is not covered by the coarse mesh")))?;
        let cgeom = coarse_mesh.geometry(cc);
        let clocal = coarse.gather(cc, coarse_coeffs);
        let flocal = fine.gather(c, fine_coeffs);
        let mut s = 0.0;
        for (bary, w) in rule.points.iter().zip(&rule.weights) {
            let x = geom.point(bary);
            let cb = cgeom.barycentric(&x);
            if cb.iter().any(|b| *b < -1e-9) {
                return Err(Error::InvalidArgument("meshes are not nested".into()));
            }
            let uc = combine(&eval_unchecked(coarse.kind(), cgeom, &cb), &clocal);
            let uf = combine(&eval_unchecked(fine.kind(), geom, bary), &flocal);
            s += w * 6.0 * geom.volume * density(&uc, &uf, norm)?;
        }
        Ok(s)
    })?;
    Ok(parts.iter().sum::<f64>().max(0.0).sqrt())
}
