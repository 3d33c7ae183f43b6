//! Canonical interpolation onto the Nédélec and Raviart–Thomas spaces.
//!
//! The Nédélec coefficient of a field on edge `e` is `∫_e v·t_e ds`; the RT
//! coefficient on face `f` is `∫_f v·n_f dA`. Both are realized as sparse
//! matrices acting on the coefficients of a discrete source field, so the same
//! code path serves the interpolation operator and the assembled forms.

use std::collections::BTreeMap;

use crate::fe::basis::eval_unchecked;
use crate::fe::quadrature::{edge_rule, triangle_rule};
use crate::fe::{BasisEval, DofHandler, SpaceKind};
use crate::linalg::small::{dot, Vec3};
use crate::mesh::{Mesh, Point3, LOCAL_EDGES, LOCAL_FACES};
use crate::sparse::{CsrMatrix, TripletBuilder};
use crate::{Error, Result};

/// Coefficients of a discrete field together with the kind of its space.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldCoeffs {
    pub kind: SpaceKind,
    pub values: Vec<f64>,
}

const CONFORMITY_TOL: f64 = 1e-12;

/// Quadrature points on an entity of a cell, in cell barycentrics, with
/// weights already scaled by the entity measure.
fn edge_points(mesh: &Mesh, cell: usize, local: usize) -> Vec<([f64; 4], f64)> {
    let [a, b] = LOCAL_EDGES[local];
    let len = mesh.geometry(cell).edge_length(local);
    let (ts, ws) = edge_rule();
    ts.iter()
        .zip(ws)
        .map(|(s, w)| {
            let mut bary = [0.0; 4];
            // Parametrize from the lower global vertex so points coincide
            // between neighbouring cells.
            let (lo, hi) = if mesh.cells()[cell][a] < mesh.cells()[cell][b] { (a, b) } else { (b, a) };
            bary[lo] = 1.0 - s;
            bary[hi] = *s;
            (bary, w * len)
        })
        .collect()
}

fn face_points(mesh: &Mesh, cell: usize, local: usize) -> Vec<([f64; 4], f64)> {
    let area = mesh.geometry(cell).face_area(local);
    let (ps, ws) = triangle_rule();
    let ids = mesh.cells()[cell];
    let mut verts = LOCAL_FACES[local];
    verts.sort_by_key(|v| ids[*v]);
    ps.iter()
        .zip(ws)
        .map(|(p, w)| {
            let mut bary = [0.0; 4];
            for (slot, v) in verts.iter().enumerate() {
                bary[*v] = p[slot];
            }
            (bary, w * area)
        })
        .collect()
}

fn local_index(list: &[usize], id: usize) -> usize {
    list.iter().position(|x| *x == id).expect("entity is incident to the cell")
}

/// Row of the interpolation matrix for one entity, computed from one cell.
fn moment_row(
    src: &DofHandler,
    mesh: &Mesh,
    cell: usize,
    points: &[([f64; 4], f64)],
    dir: &Vec3,
) -> BTreeMap<usize, f64> {
    let geom = mesh.geometry(cell);
    let dofs = src.local_dofs(cell);
    let signs = src.local_signs(cell);
    let mut row = BTreeMap::new();
    for (bary, w) in points {
        let BasisEval::Vector { values, .. } = eval_unchecked(src.kind(), geom, bary) else {
            unreachable!("source kinds are vector valued")
        };
        for (i, v) in values.iter().enumerate() {
            if let Some(d) = dofs[i] {
                let m = w * signs[i] * dot(v, dir);
                if m != 0.0 {
                    *row.entry(d).or_insert(0.0) += m;
                }
            }
        }
    }
    row
}

fn check_same(rows: &[BTreeMap<usize, f64>], what: &str) -> Result<()> {
    let first = &rows[0];
    let scale = first.values().fold(1.0f64, |m, v| m.max(v.abs()));
    for other in &rows[1..] {
        let keys = first.keys().chain(other.keys());
        for k in keys {
            let a = first.get(k).copied().unwrap_or(0.0);
            let b = other.get(k).copied().unwrap_or(0.0);
            if (a - b).abs() > CONFORMITY_TOL * scale {
                return Err(Error::NonConforming(format!(
                    "{what}: moment of dof {k} differs between incident cells ({a} vs {b})"
                )));
            }
        }
    }
    Ok(())
}

fn check_source(src: &DofHandler, allowed_self: SpaceKind) -> Result<()> {
    let k = src.kind();
    if k == allowed_self || (k.is_vector() && k.is_continuous()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("cannot interpolate a {k} field onto {allowed_self}")))
    }
}

/// Matrix `P` with `P·c` the Nédélec coefficients of the source field `c`.
pub fn nedelec_interpolation_matrix(mesh: &Mesh, src: &DofHandler, ned: &DofHandler) -> Result<CsrMatrix> {
    check_source(src, SpaceKind::Nedelec0)?;
    if ned.kind() != SpaceKind::Nedelec0 {
        return Err(Error::InvalidArgument(format!("target must be nedelec, got {}", ned.kind())));
    }
    let mut t = TripletBuilder::new(ned.num_dofs(), src.num_dofs());
    for e in 0..mesh.num_edges() {
        let Some(target) = ned.edge_dof(e) else { continue };
        let dir = mesh.edge_tangent(e);
        let rows: Vec<_> = mesh
            .edge_cells(e)
            .iter()
            .map(|&c| {
                let pts = edge_points(mesh, c, local_index(mesh.cell_edges(c), e));
                moment_row(src, mesh, c, &pts, &dir)
            })
            .collect();
        check_same(&rows, &format!("edge {e}"))?;
        for (d, v) in &rows[0] {
            t.push(target, *d, *v);
        }
    }
    Ok(t.build())
}

/// Matrix `P` with `P·c` the RT coefficients of the source field `c`.
pub fn rt_interpolation_matrix(mesh: &Mesh, src: &DofHandler, rt: &DofHandler) -> Result<CsrMatrix> {
    check_source(src, SpaceKind::RT0)?;
    if rt.kind() != SpaceKind::RT0 {
        return Err(Error::InvalidArgument(format!("target must be rt, got {}", rt.kind())));
    }
    let mut t = TripletBuilder::new(rt.num_dofs(), src.num_dofs());
    for f in 0..mesh.num_faces() {
        let Some(target) = rt.face_dof(f) else { continue };
        let dir = mesh.face_normal(f);
        let (c0, c1) = mesh.face_cells(f);
        let rows: Vec<_> = std::iter::once(c0)
            .chain(c1)
            .map(|c| {
                let pts = face_points(mesh, c, local_index(mesh.cell_faces(c), f));
                moment_row(src, mesh, c, &pts, &dir)
            })
            .collect();
        check_same(&rows, &format!("face {f}"))?;
        for (d, v) in &rows[0] {
            t.push(target, *d, *v);
        }
    }
    Ok(t.build())
}

fn apply(p: &CsrMatrix, src: &DofHandler, field: &FieldCoeffs, kind: SpaceKind) -> Result<FieldCoeffs> {
    if field.kind != src.kind() || field.values.len() != src.num_dofs() {
        return Err(Error::InvalidArgument(format!(
            "field of kind {} with {} values does not match a {} space with {} dofs",
            field.kind,
            field.values.len(),
            src.kind(),
            src.num_dofs()
        )));
    }
    Ok(FieldCoeffs { kind, values: p.matvec(&field.values) })
}

/// Nédélec interpolant of a discrete field.
pub fn interp_nedelec(mesh: &Mesh, src: &DofHandler, field: &FieldCoeffs, ned: &DofHandler) -> Result<FieldCoeffs> {
    let p = nedelec_interpolation_matrix(mesh, src, ned)?;
    apply(&p, src, field, SpaceKind::Nedelec0)
}

/// RT interpolant of a discrete field.
pub fn interp_rt(mesh: &Mesh, src: &DofHandler, field: &FieldCoeffs, rt: &DofHandler) -> Result<FieldCoeffs> {
    let p = rt_interpolation_matrix(mesh, src, rt)?;
    apply(&p, src, field, SpaceKind::RT0)
}

/// Edge moments of a point-evaluable field, with the same edge rule.
pub fn nedelec_moments<F: Fn(&Point3) -> Vec3>(mesh: &Mesh, ned: &DofHandler, f: F) -> Vec<f64> {
    let mut out = vec![0.0; ned.num_dofs()];
    for (e, [a, b]) in mesh.edges().iter().enumerate() {
        let Some(d) = ned.edge_dof(e) else { continue };
        let (xa, xb) = (mesh.vertices()[*a], mesh.vertices()[*b]);
        let t = mesh.edge_tangent(e);
        let len = crate::linalg::small::norm(&crate::linalg::small::sub(&xb, &xa));
        let (ts, ws) = edge_rule();
        out[d] = ts
            .iter()
            .zip(ws)
            .map(|(s, w)| {
                let x = [0, 1, 2].map(|k| (1.0 - s) * xa[k] + s * xb[k]);
                w * len * dot(&f(&x), &t)
            })
            .sum();
    }
    out
}

/// Face fluxes of a point-evaluable field, with the same triangle rule.
pub fn rt_fluxes<F: Fn(&Point3) -> Vec3>(mesh: &Mesh, rt: &DofHandler, f: F) -> Vec<f64> {
    let mut out = vec![0.0; rt.num_dofs()];
    let (ps, ws) = triangle_rule();
    for (fi, verts) in mesh.faces().iter().enumerate() {
        let Some(d) = rt.face_dof(fi) else { continue };
        let x = verts.map(|v| mesh.vertices()[v]);
        let n = mesh.face_normal(fi);
        let area = 0.5
            * crate::linalg::small::norm(&crate::linalg::small::cross(
                &crate::linalg::small::sub(&x[1], &x[0]),
                &crate::linalg::small::sub(&x[2], &x[0]),
            ));
        out[d] = ps
            .iter()
            .zip(ws)
            .map(|(p, w)| {
                let y = [0, 1, 2].map(|k| p[0] * x[0][k] + p[1] * x[1][k] + p[2] * x[2][k]);
                w * area * dot(&f(&y), &n)
            })
            .sum();
    }
    out
}

/// Nodal interpolant onto `P1` (scalar `f`, component 0) or the vertex part
/// of a vector-P1 kind (bubble coefficients are left at zero).
pub fn nodal_interpolant<F: Fn(&Point3) -> Vec3>(mesh: &Mesh, h: &DofHandler, f: F) -> Result<Vec<f64>> {
    let comps = match h.kind() {
        SpaceKind::P1 => 1,
        k if k.has_p1_vec() => 3,
        k => return Err(Error::InvalidArgument(format!("no nodal interpolant for {k}"))),
    };
    let mut out = vec![0.0; h.num_dofs()];
    for (v, x) in mesh.vertices().iter().enumerate() {
        let val = f(x);
        for (k, c) in val.iter().enumerate().take(comps) {
            if let Some(d) = h.vertex_dof(v, k) {
                out[d] = *c;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fe::{make_space, BcMode};
    use crate::mesh::build_structured_cube;

    #[test]
    fn edge_bubble_moment_is_a_sixth_of_the_length() {
        let m = build_structured_cube(2).unwrap();
        let src = make_space(&m, SpaceKind::EdgeBubbleVec, BcMode::Essential).unwrap();
        let ned = make_space(&m, SpaceKind::Nedelec0, BcMode::Essential).unwrap();
        let p = nedelec_interpolation_matrix(&m, &src, &ned).unwrap();
        for d in 0..src.num_dofs() {
            let crate::fe::Entity::Edge(e) = src.dof_entity(d).entity else { panic!() };
            let [a, b] = m.edges()[e];
            let len = crate::linalg::small::norm(&crate::linalg::small::sub(&m.vertices()[b], &m.vertices()[a]));
            let mut x = vec![0.0; src.num_dofs()];
            x[d] = 1.0;
            let y = p.matvec(&x);
            let nz: Vec<_> = y.iter().enumerate().filter(|(_, v)| v.abs() > 1e-14).collect();
            assert_eq!(nz.len(), 1);
            assert_eq!(nz[0].0, ned.edge_dof(e).unwrap());
            assert!((nz[0].1 - len / 6.0).abs() < 1e-14);
        }
    }

    #[test]
    fn wrong_kinds_are_rejected() {
        let m = build_structured_cube(2).unwrap();
        let p1 = make_space(&m, SpaceKind::P1, BcMode::Essential).unwrap();
        let ned = make_space(&m, SpaceKind::Nedelec0, BcMode::Essential).unwrap();
        let rt = make_space(&m, SpaceKind::RT0, BcMode::Essential).unwrap();
        assert!(nedelec_interpolation_matrix(&m, &p1, &ned).is_err());
        assert!(rt_interpolation_matrix(&m, &ned, &rt).is_err());
        assert!(nedelec_interpolation_matrix(&m, &ned, &rt).is_err());
    }
}
