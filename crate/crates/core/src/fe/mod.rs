//! Finite element spaces on tetrahedral meshes: local bases, global dof
//! numbering and quadrature.

pub mod basis;
pub mod quadrature;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::small::{add, mat_add, mat_scale, scale, Mat3, Vec3, ZERO3, ZERO33};
use crate::mesh::{CellGeometry, Mesh};
use crate::sparse::{CsrMatrix, TripletBuilder};
use crate::{Error, Result};

pub use basis::{eval_basis, BasisEval};
pub use quadrature::{integrate_barycentric_monomial, quadrature_rule, QuadratureRule};

/// The element families used by the two mixed schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceKind {
    /// Continuous piecewise linears, one dof per vertex.
    P1,
    /// Vector continuous piecewise linears, three dofs per vertex.
    P1Vec,
    /// Tangential edge bubbles `λ_a λ_b t_e`, one dof per edge.
    EdgeBubbleVec,
    /// Normal face bubbles `λ_a λ_b λ_c n_f`, one dof per face.
    FaceBubbleVec,
    /// `P1Vec` followed by `EdgeBubbleVec`.
    P1VecPlusEdge,
    /// `P1Vec` followed by `FaceBubbleVec`.
    P1VecPlusFace,
    /// Lowest-order Nédélec edge element of the first kind.
    Nedelec0,
    /// Lowest-order Raviart–Thomas face element.
    RT0,
    /// Piecewise constants.
    P0,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 9] = [
        SpaceKind::P1,
        SpaceKind::P1Vec,
        SpaceKind::EdgeBubbleVec,
        SpaceKind::FaceBubbleVec,
        SpaceKind::P1VecPlusEdge,
        SpaceKind::P1VecPlusFace,
        SpaceKind::Nedelec0,
        SpaceKind::RT0,
        SpaceKind::P0,
    ];

    /// Number of basis functions on one cell.
    pub fn local_count(self) -> usize {
        match self {
            SpaceKind::P1 | SpaceKind::RT0 | SpaceKind::FaceBubbleVec => 4,
            SpaceKind::P1Vec => 12,
            SpaceKind::EdgeBubbleVec | SpaceKind::Nedelec0 => 6,
            SpaceKind::P1VecPlusEdge => 18,
            SpaceKind::P1VecPlusFace => 16,
            SpaceKind::P0 => 1,
        }
    }

    pub fn is_vector(self) -> bool {
        !matches!(self, SpaceKind::P1 | SpaceKind::P0)
    }

    pub fn has_p1_vec(self) -> bool {
        matches!(self, SpaceKind::P1Vec | SpaceKind::P1VecPlusEdge | SpaceKind::P1VecPlusFace)
    }

    pub fn has_edge_bubbles(self) -> bool {
        matches!(self, SpaceKind::EdgeBubbleVec | SpaceKind::P1VecPlusEdge)
    }

    pub fn has_face_bubbles(self) -> bool {
        matches!(self, SpaceKind::FaceBubbleVec | SpaceKind::P1VecPlusFace)
    }

    /// Whether functions of the space are globally continuous (H¹-conforming).
    pub fn is_continuous(self) -> bool {
        !matches!(self, SpaceKind::Nedelec0 | SpaceKind::RT0 | SpaceKind::P0)
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::P1 => "p1",
            SpaceKind::P1Vec => "p1vec",
            SpaceKind::EdgeBubbleVec => "edge-bubble",
            SpaceKind::FaceBubbleVec => "face-bubble",
            SpaceKind::P1VecPlusEdge => "p1vec+edge",
            SpaceKind::P1VecPlusFace => "p1vec+face",
            SpaceKind::Nedelec0 => "nedelec",
            SpaceKind::RT0 => "rt",
            SpaceKind::P0 => "p0",
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpaceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown space kind `{s}`")))
    }
}

/// Boundary treatment of a space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BcMode {
    None,
    /// Dofs on boundary entities are removed (the `h0` subspaces).
    Essential,
}

/// The mesh entity a global dof belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entity {
    Vertex(usize),
    Edge(usize),
    Face(usize),
    Cell(usize),
}

/// A global dof: its entity and, for vector Lagrange dofs, the component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DofEntity {
    pub entity: Entity,
    pub component: Option<u8>,
}

/// Global dof numbering of one space on one mesh.
///
/// For the enriched kinds the vector-P1 dofs come first (vertex-major,
/// component-minor) and the bubble dofs follow.
#[derive(Clone, Debug)]
pub struct DofHandler {
    kind: SpaceKind,
    bc: BcMode,
    num_dofs: usize,
    local_count: usize,
    cell_dofs: Vec<Option<usize>>,
    cell_signs: Vec<f64>,
    entities: Vec<DofEntity>,
    vertex_first: Vec<Option<usize>>,
    edge_dof: Vec<Option<usize>>,
    face_dof: Vec<Option<usize>>,
    p1_block: usize,
}

fn number(
    count: usize,
    boundary: impl Fn(usize) -> bool,
    bc: BcMode,
    next: &mut usize,
    stride: usize,
) -> Vec<Option<usize>> {
    (0..count)
        .map(|i| {
            if bc == BcMode::Essential && boundary(i) {
                None
            } else {
                let id = *next;
                *next += stride;
                Some(id)
            }
        })
        .collect()
}

/// Numbers the dofs of `kind` on `mesh`.
pub fn make_space(mesh: &Mesh, kind: SpaceKind, bc: BcMode) -> Result<DofHandler> {
    let mut next = 0;
    let mut entities = Vec::new();
    let none = |n: usize| vec![None; n];

    let vertex_first = if kind == SpaceKind::P1 || kind.has_p1_vec() {
        let stride = if kind == SpaceKind::P1 { 1 } else { 3 };
        let v = number(mesh.num_vertices(), |i| mesh.is_boundary_vertex(i), bc, &mut next, stride);
        for (i, d) in v.iter().enumerate() {
            if d.is_some() {
                if stride == 1 {
                    entities.push(DofEntity { entity: Entity::Vertex(i), component: None });
                } else {
                    for k in 0..3 {
                        entities.push(DofEntity { entity: Entity::Vertex(i), component: Some(k) });
                    }
                }
            }
        }
        v
    } else {
        none(mesh.num_vertices())
    };
    let p1_block = next;

    let edge_dof = if kind.has_edge_bubbles() || kind == SpaceKind::Nedelec0 {
        let e = number(mesh.num_edges(), |i| mesh.is_boundary_edge(i), bc, &mut next, 1);
        entities.extend(
            e.iter()
                .enumerate()
                .filter(|(_, d)| d.is_some())
                .map(|(i, _)| DofEntity { entity: Entity::Edge(i), component: None }),
        );
        e
    } else {
        none(mesh.num_edges())
    };

    let face_dof = if kind.has_face_bubbles() || kind == SpaceKind::RT0 {
        let f = number(mesh.num_faces(), |i| mesh.is_boundary_face(i), bc, &mut next, 1);
        entities.extend(
            f.iter()
                .enumerate()
                .filter(|(_, d)| d.is_some())
                .map(|(i, _)| DofEntity { entity: Entity::Face(i), component: None }),
        );
        f
    } else {
        none(mesh.num_faces())
    };

    if kind == SpaceKind::P0 {
        next = mesh.num_cells();
        entities.extend((0..next).map(|c| DofEntity { entity: Entity::Cell(c), component: None }));
    }

    let local_count = kind.local_count();
    let mut cell_dofs = Vec::with_capacity(local_count * mesh.num_cells());
    let mut cell_signs = Vec::with_capacity(local_count * mesh.num_cells());
    for c in 0..mesh.num_cells() {
        let cell = mesh.cells()[c];
        match kind {
            SpaceKind::P0 => {
                cell_dofs.push(Some(c));
                cell_signs.push(1.0);
            }
            SpaceKind::P1 => {
                for v in cell {
                    cell_dofs.push(vertex_first[v]);
                    cell_signs.push(1.0);
                }
            }
            _ => {
                if kind.has_p1_vec() {
                    for v in cell {
                        for k in 0..3 {
                            cell_dofs.push(vertex_first[v].map(|d| d + k));
                            cell_signs.push(1.0);
                        }
                    }
                }
                if kind.has_edge_bubbles() || kind == SpaceKind::Nedelec0 {
                    for (e, s) in mesh.cell_edges(c).iter().zip(mesh.cell_edge_signs(c)) {
                        cell_dofs.push(edge_dof[*e]);
                        cell_signs.push(f64::from(*s));
                    }
                }
                if kind.has_face_bubbles() || kind == SpaceKind::RT0 {
                    for (f, s) in mesh.cell_faces(c).iter().zip(mesh.cell_face_signs(c)) {
                        cell_dofs.push(face_dof[*f]);
                        cell_signs.push(f64::from(*s));
                    }
                }
            }
        }
    }
    debug_assert_eq!(entities.len(), next);

    Ok(DofHandler {
        kind,
        bc,
        num_dofs: next,
        local_count,
        cell_dofs,
        cell_signs,
        entities,
        vertex_first,
        edge_dof,
        face_dof,
        p1_block,
    })
}

impl DofHandler {
    pub fn kind(&self) -> SpaceKind {
        self.kind
    }
    pub fn bc(&self) -> BcMode {
        self.bc
    }
    pub fn num_dofs(&self) -> usize {
        self.num_dofs
    }
    pub fn local_count(&self) -> usize {
        self.local_count
    }

    /// Global dof of each local basis function of `cell`; `None` where the
    /// basis function was removed by the boundary condition.
    pub fn local_dofs(&self, cell: usize) -> &[Option<usize>] {
        &self.cell_dofs[cell * self.local_count..(cell + 1) * self.local_count]
    }

    /// `±1` per local basis function: the global basis function restricted to
    /// the cell is `sign ×` the local one.
    pub fn local_signs(&self, cell: usize) -> &[f64] {
        &self.cell_signs[cell * self.local_count..(cell + 1) * self.local_count]
    }

    pub fn dof_entity(&self, dof: usize) -> DofEntity {
        self.entities[dof]
    }

    /// Number of vector-P1 (or P1) dofs; bubble dofs of enriched kinds start here.
    pub fn p1_block_len(&self) -> usize {
        self.p1_block
    }

    pub fn vertex_dof(&self, v: usize, component: usize) -> Option<usize> {
        self.vertex_first[v].map(|d| d + component)
    }
    pub fn edge_dof(&self, e: usize) -> Option<usize> {
        self.edge_dof[e]
    }
    pub fn face_dof(&self, f: usize) -> Option<usize> {
        self.face_dof[f]
    }

    /// Signed local coefficients of a global coefficient vector on `cell`.
    pub fn gather(&self, cell: usize, coeffs: &[f64]) -> Vec<f64> {
        self.local_dofs(cell)
            .iter()
            .zip(self.local_signs(cell))
            .map(|(d, s)| d.map_or(0.0, |d| s * coeffs[d]))
            .collect()
    }
}

/// Value and first derivative of a finite element function at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldEval {
    Scalar { value: f64, grad: Vec3 },
    Vector { value: Vec3, jacobian: Mat3 },
}

impl FieldEval {
    pub fn curl(&self) -> Vec3 {
        match self {
            FieldEval::Vector { jacobian, .. } => crate::linalg::small::curl_of(jacobian),
            FieldEval::Scalar { .. } => ZERO3,
        }
    }

    pub fn div(&self) -> f64 {
        match self {
            FieldEval::Vector { jacobian, .. } => crate::linalg::small::trace(jacobian),
            FieldEval::Scalar { .. } => 0.0,
        }
    }
}

/// Combines basis values with signed local coefficients.
pub fn combine(eval: &BasisEval, local: &[f64]) -> FieldEval {
    match eval {
        BasisEval::Scalar { values, grads } => {
            let mut value = 0.0;
            let mut grad = ZERO3;
            for ((v, g), c) in values.iter().zip(grads).zip(local) {
                value += c * v;
                grad = add(&grad, &scale(*c, g));
            }
            FieldEval::Scalar { value, grad }
        }
        BasisEval::Vector { values, jacobians } => {
            let mut value = ZERO3;
            let mut jacobian = ZERO33;
            for ((v, j), c) in values.iter().zip(jacobians).zip(local) {
                value = add(&value, &scale(*c, v));
                jacobian = mat_add(&jacobian, &mat_scale(*c, j));
            }
            FieldEval::Vector { value, jacobian }
        }
    }
}

/// Evaluates the finite element function `coeffs` of `handler` on `cell`.
pub fn eval_field(
    handler: &DofHandler,
    geom: &CellGeometry,
    cell: usize,
    coeffs: &[f64],
    bary: &[f64; 4],
) -> Result<FieldEval> {
    if coeffs.len() != handler.num_dofs() {
        return Err(Error::InvalidArgument(format!(
            "{} coefficients for a space with {} dofs",
            coeffs.len(),
            handler.num_dofs()
        )));
    }
    let eval = eval_basis(handler.kind(), geom, bary)?;
    Ok(combine(&eval, &handler.gather(cell, coeffs)))
}

fn require(h: &DofHandler, kind: SpaceKind, role: &str) -> Result<()> {
    if h.kind() != kind {
        return Err(Error::InvalidArgument(format!("{role} space must be {kind}, got {}", h.kind())));
    }
    Ok(())
}

/// Coefficient matrix of `∇ : P1 → Nédélec` (edge `a<b` gets `p(b) − p(a)`).
pub fn gradient_matrix(mesh: &Mesh, p1: &DofHandler, ned: &DofHandler) -> Result<CsrMatrix> {
    require(p1, SpaceKind::P1, "source")?;
    require(ned, SpaceKind::Nedelec0, "target")?;
    let mut t = TripletBuilder::new(ned.num_dofs(), p1.num_dofs());
    for (e, [a, b]) in mesh.edges().iter().enumerate() {
        let Some(row) = ned.edge_dof(e) else { continue };
        if let Some(d) = p1.vertex_dof(*a, 0) {
            t.push(row, d, -1.0);
        }
        if let Some(d) = p1.vertex_dof(*b, 0) {
            t.push(row, d, 1.0);
        }
    }
    Ok(t.build())
}

/// Coefficient matrix of `curl : Nédélec → RT` (face flux = edge circulation).
pub fn curl_matrix(mesh: &Mesh, ned: &DofHandler, rt: &DofHandler) -> Result<CsrMatrix> {
    require(ned, SpaceKind::Nedelec0, "source")?;
    require(rt, SpaceKind::RT0, "target")?;
    let mut t = TripletBuilder::new(rt.num_dofs(), ned.num_dofs());
    for f in 0..mesh.num_faces() {
        let Some(row) = rt.face_dof(f) else { continue };
        for (e, s) in mesh.face_edges(f).iter().zip([1.0, 1.0, -1.0]) {
            if let Some(d) = ned.edge_dof(*e) {
                t.push(row, d, s);
            }
        }
    }
    Ok(t.build())
}

/// Matrix of `τ ↦ (∫_K div τ)_K` from RT coefficients to cells.
pub fn divergence_matrix(mesh: &Mesh, rt: &DofHandler) -> Result<CsrMatrix> {
    require(rt, SpaceKind::RT0, "source")?;
    let mut t = TripletBuilder::new(mesh.num_cells(), rt.num_dofs());
    for c in 0..mesh.num_cells() {
        for (d, s) in rt.local_dofs(c).iter().zip(rt.local_signs(c)) {
            if let Some(d) = d {
                t.push(c, *d, *s);
            }
        }
    }
    Ok(t.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_structured_cube;

    #[test]
    fn dof_counts() {
        let m1 = build_structured_cube(1).unwrap();
        let m2 = build_structured_cube(2).unwrap();
        assert_eq!(make_space(&m2, SpaceKind::P1, BcMode::Essential).unwrap().num_dofs(), 1);
        assert_eq!(make_space(&m1, SpaceKind::P1, BcMode::Essential).unwrap().num_dofs(), 0);
        assert_eq!(make_space(&m1, SpaceKind::RT0, BcMode::None).unwrap().num_dofs(), 18);
        let enriched = make_space(&m2, SpaceKind::P1VecPlusEdge, BcMode::Essential).unwrap();
        assert_eq!(enriched.num_dofs(), 3 + 26);
        assert_eq!(enriched.p1_block_len(), 3);
        let face = make_space(&m2, SpaceKind::P1VecPlusFace, BcMode::Essential).unwrap();
        assert_eq!(face.num_dofs(), 3 + 72);
    }

    #[test]
    fn essential_spaces_have_no_boundary_dofs() {
        let m = build_structured_cube(3).unwrap();
        for kind in SpaceKind::ALL {
            if kind == SpaceKind::P0 {
                continue;
            }
            let h = make_space(&m, kind, BcMode::Essential).unwrap();
            for d in 0..h.num_dofs() {
                let on_boundary = match h.dof_entity(d).entity {
                    Entity::Vertex(v) => m.is_boundary_vertex(v),
                    Entity::Edge(e) => m.is_boundary_edge(e),
                    Entity::Face(f) => m.is_boundary_face(f),
                    Entity::Cell(_) => false,
                };
                assert!(!on_boundary, "{kind}: dof {d}");
            }
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in SpaceKind::ALL {
            assert_eq!(kind.name().parse::<SpaceKind>().unwrap(), kind);
        }
        assert!(matches!("q2".parse::<SpaceKind>(), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn curl_of_gradient_vanishes() {
        let m = build_structured_cube(2).unwrap();
        let p1 = make_space(&m, SpaceKind::P1, BcMode::None).unwrap();
        let ned = make_space(&m, SpaceKind::Nedelec0, BcMode::None).unwrap();
        let rt = make_space(&m, SpaceKind::RT0, BcMode::None).unwrap();
        let cg = curl_matrix(&m, &ned, &rt).unwrap().matmul(&gradient_matrix(&m, &p1, &ned).unwrap()).unwrap();
        assert_eq!(cg.max_abs(), 0.0);
        let dc = divergence_matrix(&m, &rt).unwrap().matmul(&curl_matrix(&m, &ned, &rt).unwrap()).unwrap();
        assert_eq!(dc.max_abs(), 0.0);
    }
}
