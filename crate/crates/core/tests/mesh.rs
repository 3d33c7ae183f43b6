use ordfem::mesh::{build_structured_cube, cell_geometry, derive_entities, CellGeometry};
use ordfem::Error;
use proptest::prelude::*;

#[test]
fn entity_counts() {
    // (n, V, E, F, C, interior V, E, F)
    let table = [
        (1, 8, 19, 18, 6, 0, 1, 6),
        (2, 27, 98, 120, 48, 1, 26, 72),
        (3, 64, 279, 378, 162, 8, 117, 270),
        (4, 125, 604, 864, 384, 27, 316, 672),
    ];
    for (n, v, e, f, c, iv, ie, iff) in table {
        let m = build_structured_cube(n).unwrap();
        assert_eq!((m.num_vertices(), m.num_edges(), m.num_faces(), m.num_cells()), (v, e, f, c), "n={n}");
        assert_eq!((m.num_interior_vertices(), m.num_interior_edges(), m.num_interior_faces()), (iv, ie, iff), "n={n}");
    }
    let m = build_structured_cube(1).unwrap();
    assert_eq!((0..m.num_faces()).filter(|&f| m.is_boundary_face(f)).count(), 12);
    let m = build_structured_cube(2).unwrap();
    assert_eq!((0..m.num_vertices()).filter(|&v| m.is_boundary_vertex(v)).count(), 26);
    let centre = (0..27).find(|&v| !m.is_boundary_vertex(v)).unwrap();
    assert_eq!(m.vertices()[centre], [0.5; 3]);
}

#[test]
fn mesh_size_is_the_cube_diagonal() {
    for n in [1, 2, 5] {
        let m = build_structured_cube(n).unwrap();
        assert!((m.h() - 3f64.sqrt() / n as f64).abs() < 1e-14);
        assert_eq!(m.grid_size(), Some(n));
    }
    assert!(matches!(build_structured_cube(0), Err(Error::InvalidArgument(_))));
}

#[test]
fn reference_cell_geometry() {
    let g = CellGeometry::new([[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
    assert!((g.volume - 1.0 / 6.0).abs() < 1e-15);
    assert_eq!(g.grad_bary[0], [-1.0, -1.0, -1.0]);
}

#[test]
fn degenerate_cell_is_a_geometry_error() {
    let vertices = vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]];
    let m = derive_entities(vertices, vec![[0, 1, 2, 3]]);
    assert!(matches!(m, Err(Error::Geometry(_))));
}

#[test]
fn negatively_oriented_input_is_repaired() {
    let vertices = vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let m = derive_entities(vertices, vec![[0, 2, 1, 3]]).unwrap();
    let g = cell_geometry(&m, 0).unwrap();
    assert!(g.volume > 0.0);
    assert_eq!(m.num_interior_faces(), 0);
}

fn shape_ratio(g: &CellGeometry) -> f64 {
    g.diameter() / g.inradius()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn volumes_cover_the_cube(n in 1usize..7) {
        let m = build_structured_cube(n).unwrap();
        let total: f64 = (0..m.num_cells()).map(|c| m.geometry(c).volume).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn euler_characteristic_of_a_ball(n in 1usize..7) {
        let m = build_structured_cube(n).unwrap();
        let chi = m.num_vertices() as i64 - m.num_edges() as i64 + m.num_faces() as i64 - m.num_cells() as i64;
        prop_assert_eq!(chi, 1);
        prop_assert_eq!(m.num_cells(), 6 * n * n * n);
        prop_assert_eq!(m.num_vertices(), (n + 1).pow(3));
    }

    #[test]
    fn interior_faces_are_seen_with_opposite_signs(n in 1usize..6) {
        let m = build_structured_cube(n).unwrap();
        let mut seen = vec![Vec::new(); m.num_faces()];
        for c in 0..m.num_cells() {
            for (f, s) in m.cell_faces(c).iter().zip(m.cell_face_signs(c)) {
                seen[*f].push(*s);
            }
        }
        for (f, signs) in seen.iter().enumerate() {
            if m.is_boundary_face(f) {
                prop_assert_eq!(signs.len(), 1);
            } else {
                prop_assert_eq!(signs.len(), 2);
                prop_assert_eq!(signs[0], -signs[1]);
            }
        }
    }

    #[test]
    fn all_cells_share_one_shape(n in 1usize..6) {
        let m = build_structured_cube(n).unwrap();
        let r0 = shape_ratio(m.geometry(0));
        for c in 0..m.num_cells() {
            prop_assert!((shape_ratio(m.geometry(c)) - r0).abs() < 1e-10 * r0);
        }
    }

    #[test]
    fn barycentric_gradients_sum_to_zero(n in 1usize..5, cell in 0usize..1000) {
        let m = build_structured_cube(n).unwrap();
        let g = m.geometry(cell % m.num_cells());
        for k in 0..3 {
            let s: f64 = g.grad_bary.iter().map(|v| v[k]).sum();
            prop_assert!(s.abs() < 1e-12);
        }
        for (i, v) in g.vertices.iter().enumerate() {
            let b = g.barycentric(v);
            for (j, bj) in b.iter().enumerate() {
                let delta = if i == j { 1.0 } else { 0.0 };
                prop_assert!((bj - delta).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn refined_meshes_are_nested(n in 1usize..4, x in 0.0f64..1.0, y in 0.0f64..1.0, z in 0.0f64..1.0) {
        let coarse = build_structured_cube(n).unwrap();
        let fine = build_structured_cube(2 * n).unwrap();
        let (fc, _) = fine.locate(&[x, y, z]).unwrap();
        let (cc, _) = coarse.locate(&[x, y, z]).unwrap();
        let cg = coarse.geometry(cc);
        for v in fine.geometry(fc).vertices {
            prop_assert!(cg.barycentric(&v).iter().all(|b| *b > -1e-12));
        }
    }

    #[test]
    fn construction_is_deterministic(n in 1usize..5) {
        let (a, b) = (build_structured_cube(n).unwrap(), build_structured_cube(n).unwrap());
        prop_assert_eq!(a.cells(), b.cells());
        prop_assert_eq!(a.edges(), b.edges());
        prop_assert_eq!(a.faces(), b.faces());
    }
}
