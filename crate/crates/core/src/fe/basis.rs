//! Local shape functions on one tetrahedron.
//!
//! Functions are returned in their local orientation: Whitney edge forms and
//! edge bubbles run from the lower to the higher local vertex of
//! [`LOCAL_EDGES`], RT fields and face bubbles point out of the cell. The
//! [`DofHandler`](super::DofHandler) sign turns them into the global ones.

use crate::linalg::small::{add, mat_scale, mat_sub, norm, normalized, outer, scale, sub, Mat3, Vec3, ZERO3, ZERO33};
use crate::mesh::{CellGeometry, LOCAL_EDGES, LOCAL_FACES};
use crate::{Error, Result};

use super::SpaceKind;

/// Values and derivatives of all local basis functions of a space at one point.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisEval {
    Scalar {
        values: Vec<f64>,
        grads: Vec<Vec3>,
    },
    /// `jacobians[i][r][c] = ∂_c v_r` for basis function `i`.
    Vector {
        values: Vec<Vec3>,
        jacobians: Vec<Mat3>,
    },
}

impl BasisEval {
    pub fn len(&self) -> usize {
        match self {
            Self::Scalar { values, .. } => values.len(),
            Self::Vector { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn curl(&self, i: usize) -> Option<Vec3> {
        match self {
            Self::Vector { jacobians, .. } => Some(crate::linalg::small::curl_of(&jacobians[i])),
            Self::Scalar { .. } => None,
        }
    }

    pub fn div(&self, i: usize) -> Option<f64> {
        match self {
            Self::Vector { jacobians, .. } => Some(crate::linalg::small::trace(&jacobians[i])),
            Self::Scalar { .. } => None,
        }
    }
}

const BARY_TOL: f64 = 1e-12;

/// Evaluates every local basis function of `kind` at the barycentric point.
pub fn eval_basis(kind: SpaceKind, geom: &CellGeometry, bary: &[f64; 4]) -> Result<BasisEval> {
    let sum: f64 = bary.iter().sum();
    if bary.iter().any(|b| *b < -BARY_TOL) || (sum - 1.0).abs() > BARY_TOL {
        return Err(Error::InvalidArgument(format!("{bary:?} is not a point of the cell")));
    }
    Ok(eval_unchecked(kind, geom, bary))
}

pub(crate) fn eval_unchecked(kind: SpaceKind, geom: &CellGeometry, l: &[f64; 4]) -> BasisEval {
    let g = &geom.grad_bary;
    match kind {
        SpaceKind::P1 => BasisEval::Scalar { values: l.to_vec(), grads: g.to_vec() },
        SpaceKind::P0 => BasisEval::Scalar { values: vec![1.0], grads: vec![ZERO3] },
        SpaceKind::Nedelec0 => {
            let mut values = Vec::with_capacity(6);
            let mut jacobians = Vec::with_capacity(6);
            for [a, b] in LOCAL_EDGES {
                values.push(sub(&scale(l[a], &g[b]), &scale(l[b], &g[a])));
                jacobians.push(mat_sub(&outer(&g[b], &g[a]), &outer(&g[a], &g[b])));
            }
            BasisEval::Vector { values, jacobians }
        }
        SpaceKind::RT0 => {
            let s = 1.0 / (3.0 * geom.volume);
            let x = geom.point(l);
            let id = mat_scale(s, &[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
            let values = (0..4).map(|i| scale(s, &sub(&x, &geom.vertices[i]))).collect();
            BasisEval::Vector { values, jacobians: vec![id; 4] }
        }
        _ => {
            let mut values = Vec::with_capacity(kind.local_count());
            let mut jacobians = Vec::with_capacity(kind.local_count());
            if kind.has_p1_vec() {
                for v in 0..4 {
                    for k in 0..3 {
                        let mut e = ZERO3;
                        e[k] = l[v];
                        values.push(e);
                        let mut j = ZERO33;
                        j[k] = g[v];
                        jacobians.push(j);
                    }
                }
            }
            if kind.has_edge_bubbles() {
                for [a, b] in LOCAL_EDGES {
                    let t = normalized(&sub(&geom.vertices[b], &geom.vertices[a]));
                    let grad = add(&scale(l[a], &g[b]), &scale(l[b], &g[a]));
                    values.push(scale(l[a] * l[b], &t));
                    jacobians.push(outer(&t, &grad));
                }
            }
            if kind.has_face_bubbles() {
                for (i, &[a, b, c]) in LOCAL_FACES.iter().enumerate() {
                    let n = outward_normal(geom, i);
                    let grad =
                        add(&add(&scale(l[b] * l[c], &g[a]), &scale(l[a] * l[c], &g[b])), &scale(l[a] * l[b], &g[c]));
                    values.push(scale(l[a] * l[b] * l[c], &n));
                    jacobians.push(outer(&n, &grad));
                }
            }
            BasisEval::Vector { values, jacobians }
        }
    }
}

/// Unit outward normal of local face `i` (the face opposite vertex `i`).
pub fn outward_normal(geom: &CellGeometry, i: usize) -> Vec3 {
    let gi = geom.grad_bary[i];
    scale(-1.0 / norm(&gi), &gi)
}

/// Unit tangent of local edge `k`, from its lower to its higher local vertex.
pub fn local_tangent(geom: &CellGeometry, k: usize) -> Vec3 {
    let [a, b] = LOCAL_EDGES[k];
    normalized(&sub(&geom.vertices[b], &geom.vertices[a]))
}
