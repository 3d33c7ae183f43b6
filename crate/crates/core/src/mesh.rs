//! Conforming tetrahedral meshes with globally oriented edges and faces.
//!
//! Edges are stored as sorted vertex pairs and oriented from the lower to the
//! higher vertex id. Faces are stored as sorted vertex triples `(p, q, r)` whose
//! normal is `(x_q - x_p) × (x_r - x_p)`. Every orientation-dependent sign in the
//! element code is therefore a function of global vertex ids only.

use std::collections::HashMap;
use std::io::Write;

use crate::linalg::small::{self, cross, dot, norm, sub, Vec3};
use crate::{Error, Result};

pub type Point3 = Vec3;

/// Local edge `k` of a cell joins local vertices `LOCAL_EDGES[k]`.
pub const LOCAL_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Local face `i` is the face opposite local vertex `i`.
pub const LOCAL_FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];

/// Affine data of one tetrahedron.
#[derive(Clone, Debug, PartialEq)]
pub struct CellGeometry {
    pub vertices: [Point3; 4],
    pub volume: f64,
    /// Constant gradients of the barycentric coordinates.
    pub grad_bary: [Vec3; 4],
}

impl CellGeometry {
    /// Geometry of the tetrahedron with the given vertices. Fails for flat cells.
    pub fn new(vertices: [Point3; 4]) -> Result<Self> {
        let rows = [sub(&vertices[1], &vertices[0]), sub(&vertices[2], &vertices[0]), sub(&vertices[3], &vertices[0])];
        let det = small::det(&rows);
        let inv = small::inverse(&rows)
            .ok_or_else(|| Error::Geometry(format!("tetrahedron {vertices:?} has zero volume")))?;
        // rows * inv = I, so column k of inv is the gradient of λ_{k+1}.
        let mut grad_bary = [[0.0; 3]; 4];
        for k in 0..3 {
            grad_bary[k + 1] = [inv[0][k], inv[1][k], inv[2][k]];
        }
        grad_bary[0] = [
            -(grad_bary[1][0] + grad_bary[2][0] + grad_bary[3][0]),
            -(grad_bary[1][1] + grad_bary[2][1] + grad_bary[3][1]),
            -(grad_bary[1][2] + grad_bary[2][2] + grad_bary[3][2]),
        ];
        Ok(Self { vertices, volume: det.abs() / 6.0, grad_bary })
    }

    pub fn point(&self, bary: &[f64; 4]) -> Point3 {
        let mut x = [0.0; 3];
        for (b, v) in bary.iter().zip(&self.vertices) {
            for d in 0..3 {
                x[d] += b * v[d];
            }
        }
        x
    }

    pub fn barycentric(&self, x: &Point3) -> [f64; 4] {
        let rel = sub(x, &self.vertices[0]);
        let l1 = dot(&self.grad_bary[1], &rel);
        let l2 = dot(&self.grad_bary[2], &rel);
        let l3 = dot(&self.grad_bary[3], &rel);
        [1.0 - l1 - l2 - l3, l1, l2, l3]
    }

    /// Longest edge.
    pub fn diameter(&self) -> f64 {
        LOCAL_EDGES.iter().map(|[a, b]| norm(&sub(&self.vertices[*b], &self.vertices[*a]))).fold(0.0, f64::max)
    }

    pub fn edge_length(&self, local_edge: usize) -> f64 {
        let [a, b] = LOCAL_EDGES[local_edge];
        norm(&sub(&self.vertices[b], &self.vertices[a]))
    }

    pub fn face_area(&self, local_face: usize) -> f64 {
        let [a, b, c] = LOCAL_FACES[local_face];
        let v = &self.vertices;
        0.5 * norm(&cross(&sub(&v[b], &v[a]), &sub(&v[c], &v[a])))
    }

    /// Radius of the inscribed sphere, `3|K| / |∂K|`.
    pub fn inradius(&self) -> f64 {
        let surface: f64 = (0..4).map(|f| self.face_area(f)).sum();
        3.0 * self.volume / surface
    }
}

/// A tetrahedral mesh together with its derived edges, faces, incidences and
/// boundary classification. Immutable once built.
#[derive(Clone, Debug)]
pub struct Mesh {
    vertices: Vec<Point3>,
    cells: Vec<[usize; 4]>,
    geometry: Vec<CellGeometry>,
    edges: Vec<[usize; 2]>,
    faces: Vec<[usize; 3]>,
    face_edges: Vec<[usize; 3]>,
    cell_edges: Vec<[usize; 6]>,
    cell_edge_signs: Vec<[i8; 6]>,
    cell_faces: Vec<[usize; 4]>,
    cell_face_signs: Vec<[i8; 4]>,
    edge_cell_offsets: Vec<usize>,
    edge_cell_ids: Vec<usize>,
    face_cells: Vec<(usize, Option<usize>)>,
    vertex_boundary: Vec<bool>,
    edge_boundary: Vec<bool>,
    face_boundary: Vec<bool>,
    grid_n: Option<usize>,
}

/// Freudenthal (Kuhn) split of `[0,1]³` into `n³` cubes of six tetrahedra.
///
/// Cell `6 * cube + p` is the simplex following the `p`-th axis permutation
/// from the cube's lower corner to its upper corner. The split is nested under
/// `n → 2n`.
pub fn build_structured_cube(n: usize) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::InvalidArgument("cube mesh needs n >= 1".into()));
    }
    const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let np = n + 1;
    let vid = |i: usize, j: usize, k: usize| i + np * (j + np * k);
    let h = 1.0 / n as f64;
    let mut vertices = Vec::with_capacity(np * np * np);
    for k in 0..np {
        for j in 0..np {
            for i in 0..np {
                vertices.push([i as f64 * h, j as f64 * h, k as f64 * h]);
            }
        }
    }
    let mut cells = Vec::with_capacity(6 * n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                for perm in PERMUTATIONS {
                    let mut corner = [i, j, k];
                    let mut cell = [vid(i, j, k); 4];
                    for (step, axis) in perm.iter().enumerate() {
                        corner[*axis] += 1;
                        cell[step + 1] = vid(corner[0], corner[1], corner[2]);
                    }
                    cells.push(cell);
                }
            }
        }
    }
    let mut mesh = derive_entities(vertices, cells)?;
    mesh.grid_n = Some(n);
    Ok(mesh)
}

/// Builds edges, faces, incidence maps with orientation signs and boundary flags
/// from raw vertices and cells. Cells with negative orientation are reordered
/// locally so that every stored cell has positive signed volume.
pub fn derive_entities(vertices: Vec<Point3>, mut cells: Vec<[usize; 4]>) -> Result<Mesh> {
    let nv = vertices.len();
    let mut geometry = Vec::with_capacity(cells.len());
    for (c, cell) in cells.iter_mut().enumerate() {
        if let Some(&bad) = cell.iter().find(|&&v| v >= nv) {
            return Err(Error::Topology(format!("cell {c} references missing vertex {bad}")));
        }
        let x = cell.map(|v| vertices[v]);
        let signed = small::det(&[sub(&x[1], &x[0]), sub(&x[2], &x[0]), sub(&x[3], &x[0])]);
        if signed < 0.0 {
            cell.swap(2, 3);
        }
        geometry.push(
            CellGeometry::new(cell.map(|v| vertices[v]))
                .map_err(|_| Error::Geometry(format!("cell {c} has zero volume")))?,
        );
    }

    let mut edge_ids: HashMap<[usize; 2], usize> = HashMap::new();
    let mut face_ids: HashMap<[usize; 3], usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut faces = Vec::new();
    let mut cell_edges = Vec::with_capacity(cells.len());
    let mut cell_edge_signs = Vec::with_capacity(cells.len());
    let mut cell_faces = Vec::with_capacity(cells.len());
    let mut cell_face_signs = Vec::with_capacity(cells.len());
    let mut face_cells: Vec<(usize, Option<usize>)> = Vec::new();
    let mut face_edges = Vec::new();

    for (c, cell) in cells.iter().enumerate() {
        let mut ce = [0; 6];
        let mut cs = [0i8; 6];
        for (k, [a, b]) in LOCAL_EDGES.iter().enumerate() {
            let (va, vb) = (cell[*a], cell[*b]);
            let key = if va < vb { [va, vb] } else { [vb, va] };
            let id = *edge_ids.entry(key).or_insert_with(|| {
                edges.push(key);
                edges.len() - 1
            });
            ce[k] = id;
            cs[k] = if va < vb { 1 } else { -1 };
        }
        let mut cf = [0; 4];
        let mut fs = [0i8; 4];
        for (i, local) in LOCAL_FACES.iter().enumerate() {
            let mut key = local.map(|l| cell[l]);
            key.sort_unstable();
            let id = match face_ids.get(&key) {
                Some(&id) => {
                    match &mut face_cells[id] {
                        (_, slot @ None) => *slot = Some(c),
                        (first, Some(second)) => {
                            return Err(Error::Topology(format!(
                                "face {key:?} shared by cells {first}, {second} and {c}"
                            )))
                        }
                    }
                    id
                }
                None => {
                    faces.push(key);
                    face_cells.push((c, None));
                    let [p, q, r] = key;
                    face_edges.push([edge_ids[&[p, q]], edge_ids[&[q, r]], edge_ids[&[p, r]]]);
                    face_ids.insert(key, faces.len() - 1);
                    faces.len() - 1
                }
            };
            cf[i] = id;
            // The global normal points away from the opposite vertex iff the
            // local basis function with outward flux keeps its sign.
            let [p, q, r] = key.map(|v| vertices[v]);
            let normal = cross(&sub(&q, &p), &sub(&r, &p));
            let away = dot(&sub(&p, &vertices[cell[i]]), &normal);
            fs[i] = if away > 0.0 { 1 } else { -1 };
        }
        cell_edges.push(ce);
        cell_edge_signs.push(cs);
        cell_faces.push(cf);
        cell_face_signs.push(fs);
    }

    let mut edge_counts = vec![0usize; edges.len() + 1];
    for ce in &cell_edges {
        for &e in ce {
            edge_counts[e + 1] += 1;
        }
    }
    for e in 0..edges.len() {
        edge_counts[e + 1] += edge_counts[e];
    }
    let edge_cell_offsets = edge_counts.clone();
    let mut fill = edge_counts;
    let mut edge_cell_ids = vec![0; edge_cell_offsets[edges.len()]];
    for (c, ce) in cell_edges.iter().enumerate() {
        for &e in ce {
            edge_cell_ids[fill[e]] = c;
            fill[e] += 1;
        }
    }

    let face_boundary: Vec<bool> = face_cells.iter().map(|(_, other)| other.is_none()).collect();
    let mut vertex_boundary = vec![false; nv];
    let mut edge_boundary = vec![false; edges.len()];
    for (f, face) in faces.iter().enumerate() {
        if !face_boundary[f] {
            continue;
        }
        for &v in face {
            vertex_boundary[v] = true;
        }
        for e in face_edges[f] {
            edge_boundary[e] = true;
        }
    }

    Ok(Mesh {
        vertices,
        cells,
        geometry,
        edges,
        faces,
        face_edges,
        cell_edges,
        cell_edge_signs,
        cell_faces,
        cell_face_signs,
        edge_cell_offsets,
        edge_cell_ids,
        face_cells,
        vertex_boundary,
        edge_boundary,
        face_boundary,
        grid_n: None,
    })
}

/// Geometry of one cell, recomputed from its vertices.
pub fn cell_geometry(mesh: &Mesh, cell: usize) -> Result<CellGeometry> {
    let ids = mesh.cells.get(cell).ok_or_else(|| Error::InvalidArgument(format!("cell {cell} out of range")))?;
    CellGeometry::new(ids.map(|v| mesh.vertices[v]))
}

impl Mesh {
    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }
    pub fn cells(&self) -> &[[usize; 4]] {
        &self.cells
    }
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Cached geometry of `cell`.
    pub fn geometry(&self, cell: usize) -> &CellGeometry {
        &self.geometry[cell]
    }

    /// Edges `[(p,q), (q,r), (p,r)]` of the face with sorted vertices `(p,q,r)`.
    /// The boundary circulation matching the face normal is `+,+,-`.
    pub fn face_edges(&self, face: usize) -> &[usize; 3] {
        &self.face_edges[face]
    }

    pub fn cell_edges(&self, cell: usize) -> &[usize; 6] {
        &self.cell_edges[cell]
    }

    /// `+1` where local edge `k` (from `LOCAL_EDGES[k][0]` to `[1]`) agrees with
    /// the global orientation of the edge.
    pub fn cell_edge_signs(&self, cell: usize) -> &[i8; 6] {
        &self.cell_edge_signs[cell]
    }

    pub fn cell_faces(&self, cell: usize) -> &[usize; 4] {
        &self.cell_faces[cell]
    }

    /// `+1` where the global normal of local face `i` points out of the cell.
    pub fn cell_face_signs(&self, cell: usize) -> &[i8; 4] {
        &self.cell_face_signs[cell]
    }

    pub fn edge_cells(&self, edge: usize) -> &[usize] {
        &self.edge_cell_ids[self.edge_cell_offsets[edge]..self.edge_cell_offsets[edge + 1]]
    }

    pub fn face_cells(&self, face: usize) -> (usize, Option<usize>) {
        self.face_cells[face]
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.vertex_boundary[v]
    }
    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_boundary[e]
    }
    pub fn is_boundary_face(&self, f: usize) -> bool {
        self.face_boundary[f]
    }

    pub fn num_interior_vertices(&self) -> usize {
        self.vertex_boundary.iter().filter(|b| !**b).count()
    }
    pub fn num_interior_edges(&self) -> usize {
        self.edge_boundary.iter().filter(|b| !**b).count()
    }
    pub fn num_interior_faces(&self) -> usize {
        self.face_boundary.iter().filter(|b| !**b).count()
    }

    /// Subdivision count of a structured cube mesh.
    pub fn grid_size(&self) -> Option<usize> {
        self.grid_n
    }

    /// Largest cell diameter.
    pub fn h(&self) -> f64 {
        self.geometry.iter().map(CellGeometry::diameter).fold(0.0, f64::max)
    }

    /// Unit tangent of `edge`, from its lower to its higher vertex.
    pub fn edge_tangent(&self, edge: usize) -> Vec3 {
        let [a, b] = self.edges[edge];
        small::normalized(&sub(&self.vertices[b], &self.vertices[a]))
    }

    /// Unit normal of `face` by the right-hand rule on its sorted vertices.
    pub fn face_normal(&self, face: usize) -> Vec3 {
        let [p, q, r] = self.faces[face].map(|v| self.vertices[v]);
        small::normalized(&cross(&sub(&q, &p), &sub(&r, &p)))
    }

    /// Finds a cell containing `x` and the barycentric coordinates of `x` in it.
    pub fn locate(&self, x: &Point3) -> Option<(usize, [f64; 4])> {
        const TOL: f64 = 1e-10;
        let candidates: Box<dyn Iterator<Item = usize>> = match self.grid_n {
            Some(n) => {
                let idx = x.map(|c| ((c * n as f64).floor().max(0.0) as usize).min(n - 1));
                let cube = idx[0] + n * (idx[1] + n * idx[2]);
                Box::new(6 * cube..6 * cube + 6)
            }
            None => Box::new(0..self.cells.len()),
        };
        let mut best: Option<(usize, [f64; 4], f64)> = None;
        for c in candidates {
            let bary = self.geometry[c].barycentric(x);
            let worst = bary.iter().copied().fold(f64::INFINITY, f64::min);
            if best.as_ref().is_none_or(|b| worst > b.2) {
                best = Some((c, bary, worst));
            }
        }
        best.filter(|b| b.2 >= -TOL).map(|(c, bary, _)| (c, bary))
    }

    /// Plain-text dump: a `tetmesh <nv> <ne> <nf> <nc>` header, vertex
    /// coordinates, then edge, face and cell vertex lists, one entity per line.
    pub fn write_dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "tetmesh {} {} {} {}",
            self.num_vertices(),
            self.num_edges(),
            self.num_faces(),
            self.num_cells()
        )?;
        for v in &self.vertices {
            writeln!(out, "{:.17e} {:.17e} {:.17e}", v[0], v[1], v[2])?;
        }
        for e in &self.edges {
            writeln!(out, "{} {}", e[0], e[1])?;
        }
        for f in &self.faces {
            writeln!(out, "{} {} {}", f[0], f[1], f[2])?;
        }
        for c in &self.cells {
            writeln!(out, "{} {} {} {}", c[0], c[1], c[2], c[3])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_tet() -> CellGeometry {
        CellGeometry::new([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap()
    }

    #[test]
    fn reference_tet_geometry() {
        let g = reference_tet();
        assert!((g.volume - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(g.grad_bary[0], [-1.0, -1.0, -1.0]);
        assert_eq!(g.grad_bary[1], [1.0, 0.0, 0.0]);
        let b = g.barycentric(&[0.1, 0.2, 0.3]);
        assert!((b[0] - 0.4).abs() < 1e-15 && (b[3] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn flat_cell_is_rejected() {
        let flat = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]];
        assert!(matches!(CellGeometry::new(flat), Err(Error::Geometry(_))));
        let err = derive_entities(flat.to_vec(), vec![[0, 1, 2, 3]]).unwrap_err();
        assert!(matches!(err, Error::Geometry(_)));
    }

    #[test]
    fn zero_subdivisions_rejected() {
        assert!(matches!(build_structured_cube(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn single_cube_counts() {
        let m = build_structured_cube(1).unwrap();
        assert_eq!((m.num_vertices(), m.num_cells()), (8, 6));
        assert_eq!((m.num_edges(), m.num_faces()), (19, 18));
        assert_eq!(m.faces().iter().enumerate().filter(|(f, _)| m.is_boundary_face(*f)).count(), 12);
        assert_eq!(m.num_interior_faces(), 6);
        assert_eq!(m.num_interior_vertices(), 0);
    }

    #[test]
    fn two_cube_counts() {
        let m = build_structured_cube(2).unwrap();
        assert_eq!((m.num_vertices(), m.num_cells()), (27, 48));
        assert_eq!(m.num_interior_vertices(), 1);
        let interior: Vec<_> = (0..27).filter(|&v| !m.is_boundary_vertex(v)).collect();
        assert_eq!(m.vertices()[interior[0]], [0.5, 0.5, 0.5]);
        assert_eq!(27 - m.num_interior_vertices(), 26);
    }

    #[test]
    fn overloaded_face_is_a_topology_error() {
        let verts =
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [0.3, 0.3, 1.0]];
        let cells = vec![[0, 1, 2, 3], [0, 1, 2, 4], [0, 1, 2, 5]];
        assert!(matches!(derive_entities(verts, cells), Err(Error::Topology(_))));
    }

    #[test]
    fn locate_finds_containing_cell() {
        let m = build_structured_cube(3).unwrap();
        for x in [[0.1, 0.5, 0.9], [1.0, 1.0, 1.0], [0.0, 0.0, 0.0], [0.33, 0.66, 0.5]] {
            let (c, bary) = m.locate(&x).unwrap();
            let back = m.geometry(c).point(&bary);
            assert!(small::norm(&sub(&back, &x)) < 1e-12);
            assert!(bary.iter().all(|b| *b >= -1e-10));
        }
        assert!(m.locate(&[1.5, 0.0, 0.0]).is_none());
    }

    #[test]
    fn dump_header() {
        let m = build_structured_cube(1).unwrap();
        let mut buf = Vec::new();
        m.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("tetmesh 8 19 18 6\n"));
        assert_eq!(text.lines().count(), 1 + 8 + 19 + 18 + 6);
    }
}
