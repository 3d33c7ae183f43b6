use std::sync::Arc;

use ordfem::analysis::{manufactured_solution, CoefficientPreset};
use ordfem::assembly::{
    assemble_form, assemble_functional, assemble_gram, assemble_load, assemble_operator, Norm, Op, ProblemKind,
    ProblemSpec, RhsField, Term,
};
use ordfem::fe::quadrature::quadrature_rule;
use ordfem::fe::{eval_field, make_space, BcMode, SpaceKind};
use ordfem::interp::{nedelec_moments, nodal_interpolant};
use ordfem::linalg::dense::sym_eigenvalues;
use ordfem::mesh::build_structured_cube;
use ordfem::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn block_dimensions_follow_the_entity_counts() {
    let m = build_structured_cube(2).unwrap();
    let s = assemble_operator(&ProblemSpec::new(ProblemKind::BiLaplacian), &m).unwrap();
    assert_eq!(s.dims(), [1, 3 + 26, 26]);
    assert_eq!(s.offsets, [0, 1, 30, 56]);
    let s = assemble_operator(&ProblemSpec::new(ProblemKind::QuadCurl), &m).unwrap();
    assert_eq!(s.dims(), [26, 3 + 72, 72]);
}

#[test]
fn single_cube_mesh() {
    // no interior vertex; the body diagonal and six inner faces remain
    let m = build_structured_cube(1).unwrap();
    let err = assemble_operator(&ProblemSpec::new(ProblemKind::BiLaplacian), &m);
    assert!(matches!(err, Err(Error::DegenerateSystem(_))));
    let s = assemble_operator(&ProblemSpec::new(ProblemKind::QuadCurl), &m).unwrap();
    assert_eq!(s.dims(), [1, 6, 6]);
}

#[test]
fn monolithic_matrices_are_symmetric() {
    let m = build_structured_cube(2).unwrap();
    for kind in [ProblemKind::BiLaplacian, ProblemKind::QuadCurl] {
        for preset in [CoefficientPreset::Unit, CoefficientPreset::Constant(3.0), CoefficientPreset::Bump] {
            let mut spec = manufactured_solution(kind, preset).spec;
            spec.quad_degree = 8;
            let s = assemble_operator(&spec, &m).unwrap();
            assert!(s.matrix.symmetry_defect() / s.matrix.max_abs() < 1e-12, "{kind} {preset:?}");
        }
    }
}

#[test]
fn mass_block_of_a_constant_field() {
    // N_0 holds no constants, so the constant goes into the full Nédélec
    // space; the L² Gram is the same form as the first quad-curl block.
    let m = build_structured_cube(2).unwrap();
    let ned = make_space(&m, SpaceKind::Nedelec0, BcMode::None).unwrap();
    let mass = assemble_gram(&ned, Norm::L2, &m, 6).unwrap();
    let c = [0.5, -2.0, 1.5];
    let x = nedelec_moments(&m, &ned, |_| c);
    let expected: f64 = c.iter().map(|v| v * v).sum();
    assert!((mass.quad_form(&x) - expected).abs() < 1e-12 * expected);
    let curl = assemble_form(&m, &ned, &ned, &[Term::new(Op::Curl, Op::Curl)], 6).unwrap();
    assert!(curl.quad_form(&x).abs() < 1e-12);
}

#[test]
fn zero_data_gives_zero_load() {
    let m = build_structured_cube(2).unwrap();
    for kind in [ProblemKind::BiLaplacian, ProblemKind::QuadCurl] {
        let load = assemble_load(&ProblemSpec::new(kind), &m).unwrap();
        assert!(load.to_flat().iter().all(|v| *v == 0.0));
    }
}

#[test]
fn unit_load_on_the_hat_function() {
    let m = build_structured_cube(2).unwrap();
    let mut spec = ProblemSpec::new(ProblemKind::BiLaplacian);
    spec.f1 = RhsField::Scalar(Arc::new(|_| 1.0));
    let load = assemble_load(&spec, &m).unwrap();
    let centre = (0..m.num_vertices()).find(|&v| !m.is_boundary_vertex(v)).unwrap();
    let expected: f64 =
        (0..m.num_cells()).filter(|&c| m.cells()[c].contains(&centre)).map(|c| m.geometry(c).volume / 4.0).sum();
    assert!((load.parts[0][0] - expected).abs() < 1e-15);
    assert!(load.parts[2].iter().all(|v| *v == 0.0));
}

#[test]
fn constant_vector_load_on_whitney_functions() {
    // ∫_K λ_a∇λ_b − λ_b∇λ_a = |K|/4 (∇λ_b − ∇λ_a), edge oriented from the lower id
    let m = build_structured_cube(2).unwrap();
    let ned = make_space(&m, SpaceKind::Nedelec0, BcMode::Essential).unwrap();
    let c = [1.0, -0.5, 2.0];
    let load = assemble_functional(&m, &ned, &RhsField::Vector(Arc::new(move |_| c)), 6).unwrap();
    for (e, [a, b]) in m.edges().iter().enumerate() {
        let Some(d) = ned.edge_dof(e) else { continue };
        let (lo, hi) = (a.min(b), a.max(b));
        let mut expected = 0.0;
        for cell in 0..m.num_cells() {
            let verts = m.cells()[cell];
            let (Some(i), Some(j)) = (verts.iter().position(|v| v == lo), verts.iter().position(|v| v == hi)) else {
                continue;
            };
            let g = m.geometry(cell);
            for k in 0..3 {
                expected += c[k] * g.volume / 4.0 * (g.grad_bary[j][k] - g.grad_bary[i][k]);
            }
        }
        assert!((load[d] - expected).abs() < 1e-14, "edge {e}");
    }
}

#[test]
fn gram_matrix_examples() {
    let m1 = build_structured_cube(1).unwrap();
    let p1 = make_space(&m1, SpaceKind::P1, BcMode::None).unwrap();
    let mass = assemble_gram(&p1, Norm::L2, &m1, 2).unwrap();
    assert!((mass.values().iter().sum::<f64>() - 1.0).abs() < 1e-14);

    let m = build_structured_cube(2).unwrap();
    let p0 = make_space(&m, SpaceKind::P0, BcMode::None).unwrap();
    let g = assemble_gram(&p0, Norm::L2, &m, 1).unwrap();
    assert_eq!(g.nnz(), m.num_cells());
    for c in 0..m.num_cells() {
        let d = p0.local_dofs(c)[0].unwrap();
        assert!((g.get(d, d) - m.geometry(c).volume).abs() < 1e-16);
    }

    let ned = make_space(&m, SpaceKind::Nedelec0, BcMode::Essential).unwrap();
    let hcurl = assemble_gram(&ned, Norm::Hcurl, &m, 6).unwrap();
    assert!(sym_eigenvalues(hcurl.to_dense().as_ref()).unwrap()[0] > 0.0);

    assert!(matches!(assemble_gram(&p1, Norm::Hdiv, &m1, 2), Err(Error::InvalidArgument(_))));
}

#[test]
fn block_forms_match_pointwise_evaluation() {
    let m = build_structured_cube(2).unwrap();
    let spec = manufactured_solution(ProblemKind::BiLaplacian, CoefficientPreset::Constant(2.5)).spec;
    let sys = assemble_operator(&spec, &m).unwrap();
    let s = &sys.spaces[1];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let phi: Vec<f64> = (0..s.num_dofs()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let rule = quadrature_rule(6).unwrap();
    let mut direct = 0.0;
    for c in 0..m.num_cells() {
        let g = m.geometry(c);
        for (b, w) in rule.points.iter().zip(&rule.weights) {
            let f = eval_field(s, g, c, &phi, b).unwrap();
            let curl = f.curl();
            direct += 6.0 * w * g.volume * (2.5 * f.div().powi(2) + curl.iter().map(|v| v * v).sum::<f64>());
        }
    }
    let block = sys.a_ss.quad_form(&phi);
    assert!((block - direct).abs() < 1e-12 * direct);
}

#[test]
fn curl_term_vanishes_on_gradients() {
    // ∇(x² + yz − 3xz) is linear, hence held exactly by the vertex part
    let m = build_structured_cube(2).unwrap();
    let s = make_space(&m, SpaceKind::P1VecPlusEdge, BcMode::None).unwrap();
    let phi = nodal_interpolant(&m, &s, |x| [2.0 * x[0] - 3.0 * x[2], x[2], x[1] - 3.0 * x[0]]).unwrap();
    let curl = assemble_form(&m, &s, &s, &[Term::new(Op::Curl, Op::Curl)], 6).unwrap();
    assert!(curl.quad_form(&phi).abs() < 1e-12);
    let div = assemble_form(&m, &s, &s, &[Term::new(Op::Div, Op::Div)], 6).unwrap();
    // div = 2, |Ω| = 1
    assert!((div.quad_form(&phi) - 4.0).abs() < 1e-12);
}

#[test]
fn assembly_is_bit_reproducible() {
    let m = build_structured_cube(3).unwrap();
    for kind in [ProblemKind::BiLaplacian, ProblemKind::QuadCurl] {
        let spec = manufactured_solution(kind, CoefficientPreset::Bump).spec;
        let a = assemble_operator(&spec, &m).unwrap();
        let b = assemble_operator(&spec, &m).unwrap();
        assert_eq!(a.matrix, b.matrix);
        assert_eq!(assemble_load(&spec, &m).unwrap(), assemble_load(&spec, &m).unwrap());
    }
}

#[cfg(feature = "parallel")]
#[test]
fn assembly_does_not_depend_on_the_thread_count() {
    let m = build_structured_cube(3).unwrap();
    let spec = manufactured_solution(ProblemKind::QuadCurl, CoefficientPreset::Unit).spec;
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| (assemble_operator(&spec, &m).unwrap().matrix, assemble_load(&spec, &m).unwrap()))
    };
    assert_eq!(run(1), run(4));
}
