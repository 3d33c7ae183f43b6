use ordfem::analysis::{
    convergence_study, decomposition_stability, difference_norm, drift, error_norm, interpolation_bound,
    kernel_coercivity, kernel_coercivity_raw, manufactured_solution, solve_on_mesh, AnalyticField, CoefficientPreset,
    Decomposer, Pairing, StudyOptions,
};
use ordfem::assembly::{assemble_gram, assemble_operator, Norm, ProblemKind, ProblemSpec};
use ordfem::fe::{gradient_matrix, make_space, BcMode, SpaceKind};
use ordfem::interp::nodal_interpolant;
use ordfem::linalg::dense::gen_sym_eigen;
use ordfem::mesh::build_structured_cube;
use ordfem::solver::solve_sparse_direct;
use ordfem::sparse::CsrMatrix;
use ordfem::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

#[test]
fn error_norm_examples() {
    let m = build_structured_cube(2).unwrap();
    let p1 = make_space(&m, SpaceKind::P1, BcMode::None).unwrap();
    let zero = vec![0.0; p1.num_dofs()];
    assert_eq!(error_norm(&m, &p1, &zero, &AnalyticField::zero(false), Norm::H1, 4).unwrap(), 0.0);

    let lin = AnalyticField::scalar(|x| (1.0 + 2.0 * x[0] - x[1] + 0.5 * x[2], [2.0, -1.0, 0.5]));
    let c: Vec<f64> = m.vertices().iter().map(|x| 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[2]).collect();
    assert!(error_norm(&m, &p1, &c, &lin, Norm::H1, 4).unwrap() < 1e-12);

    for (kind, norm) in [(SpaceKind::P1, Norm::L2), (SpaceKind::Nedelec0, Norm::L2), (SpaceKind::RT0, Norm::L2)] {
        let h = make_space(&m, kind, BcMode::Essential).unwrap();
        let c = random_vector(h.num_dofs(), 1);
        let mass = assemble_gram(&h, norm, &m, 4).unwrap();
        let e = error_norm(&m, &h, &c, &AnalyticField::zero(kind.is_vector()), norm, 4).unwrap();
        let expected = mass.quad_form(&c).sqrt();
        assert!((e - expected).abs() < 1e-12 * expected, "{kind}");
    }

    let err = error_norm(&m, &p1, &zero, &AnalyticField::zero(false), Norm::Hcurl, 4);
    assert!(matches!(err, Err(Error::InvalidArgument(_))));
}

#[test]
fn difference_of_nested_fields() {
    let (coarse, fine) = (build_structured_cube(2).unwrap(), build_structured_cube(4).unwrap());
    let hc = make_space(&coarse, SpaceKind::RT0, BcMode::Essential).unwrap();
    let hf = make_space(&fine, SpaceKind::RT0, BcMode::Essential).unwrap();
    let zero = vec![0.0; hf.num_dofs()];
    let c = random_vector(hc.num_dofs(), 2);
    // against zero the difference is the coarse field's own norm
    let own = assemble_gram(&hc, Norm::Hdiv, &coarse, 4).unwrap().quad_form(&c).sqrt();
    let d = difference_norm(&coarse, &hc, &c, &fine, &hf, &zero, Norm::Hdiv, 4).unwrap();
    assert!((d - own).abs() < 1e-12 * own);
    let same = difference_norm(&coarse, &hc, &c, &coarse, &hc, &c, Norm::Hdiv, 4).unwrap();
    assert!(same < 1e-14);
}

#[test]
fn bilaplacian_converges_at_first_order() {
    let p = manufactured_solution(ProblemKind::BiLaplacian, CoefficientPreset::Unit);
    let r = convergence_study(&p, &[2, 4, 8], &StudyOptions::default()).unwrap();
    assert!(r.rows.windows(2).all(|w| w[1].err_u < w[0].err_u && w[1].err_phi < w[0].err_phi));
    assert!((0.85..=1.3).contains(&r.rates.err_u), "H1 rate of u: {}", r.rates.err_u);
}

#[test]
fn quad_curl_converges_at_first_order() {
    let p = manufactured_solution(ProblemKind::QuadCurl, CoefficientPreset::Unit);
    let r = convergence_study(&p, &[2, 4, 8], &StudyOptions::default()).unwrap();
    assert!(r.rows.windows(2).all(|w| w[1].err_u < w[0].err_u && w[1].err_phi < w[0].err_phi));
    assert!((0.85..=1.3).contains(&r.rates.err_u), "H(curl) rate of u: {}", r.rates.err_u);
}

#[test]
fn study_rejects_bad_mesh_lists() {
    let p = manufactured_solution(ProblemKind::BiLaplacian, CoefficientPreset::Unit);
    let opts = StudyOptions::default();
    for ns in [&[][..], &[1, 2], &[4, 2], &[2, 2]] {
        assert!(matches!(convergence_study(&p, ns, &opts), Err(Error::InvalidArgument(_))), "{ns:?}");
    }
}

#[test]
fn solution_is_bounded_by_the_dual_norm_of_the_load() {
    // ‖x‖_G ≤ ‖b‖_{G⁻¹} / γ, with γ the smallest |λ| of M x = λ G x
    for kind in [ProblemKind::BiLaplacian, ProblemKind::QuadCurl] {
        let p = manufactured_solution(kind, CoefficientPreset::Unit);
        let s = solve_on_mesh(&p, 2, &StudyOptions::default()).unwrap();
        let grams: Vec<CsrMatrix> = s
            .system
            .spaces
            .iter()
            .zip(kind.norms())
            .map(|(h, norm)| assemble_gram(h, norm, &s.mesh, 6).unwrap())
            .collect();
        let g = CsrMatrix::from_blocks(
            &[vec![Some(&grams[0]), None, None], vec![None, Some(&grams[1]), None], vec![None, None, Some(&grams[2])]],
            &s.system.dims(),
            &s.system.dims(),
        )
        .unwrap();
        let (vals, _) = gen_sym_eigen(s.system.matrix.to_dense().as_ref(), g.to_dense().as_ref(), false).unwrap();
        let gamma = vals.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));

        let rhs = s.system.matrix.matvec(&s.report.solution);
        let f = &rhs[..s.system.offsets[1]];
        let dual = {
            let y = solve_sparse_direct(&grams[0], f).unwrap().solution;
            f.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>().sqrt()
        };
        // the sup over a random sample never exceeds the exact dual norm
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let v: Vec<f64> = (0..f.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let ratio = f.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>().abs() / grams[0].quad_form(&v).sqrt();
            assert!(ratio <= dual * (1.0 + 1e-12));
        }
        let norm_x = g.quad_form(&s.report.solution).sqrt();
        assert!(norm_x <= dual / gamma * (1.0 + 1e-10), "{kind}: {norm_x} > {dual} / {gamma}");
    }
}

#[test]
fn kernel_coercivity_examples() {
    let value = |kind, n| {
        let m = build_structured_cube(n).unwrap();
        let sys = assemble_operator(&ProblemSpec::new(kind), &m).unwrap();
        kernel_coercivity(&sys, &m, 6).unwrap()
    };
    let (c2, c3) = (value(ProblemKind::BiLaplacian, 2), value(ProblemKind::BiLaplacian, 3));
    assert!(c2.value > 0.0 && !c2.empty_kernel);
    assert!(drift(&[c2.value, c3.value]) < 0.3);
    assert!(value(ProblemKind::QuadCurl, 2).value > 0.0);

    // no constraint: the smallest generalized eigenvalue of A against G
    let a = CsrMatrix::diagonal(&[2.0, 6.0]);
    let g = CsrMatrix::diagonal(&[1.0, 2.0]);
    let c = kernel_coercivity_raw(&a, &g, &CsrMatrix::zeros(1, 2)).unwrap();
    assert!((c.value - 2.0).abs() < 1e-14 && c.kernel_dim == 2);
}

#[test]
fn gradients_decompose_without_cost() {
    let m = build_structured_cube(2).unwrap();
    let dec = Decomposer::new(&m, Pairing::Curl).unwrap();
    let w = random_vector(dec.first.num_dofs(), 5);
    let eta = gradient_matrix(&m, &dec.first, &dec.target).unwrap().matvec(&w);
    let split = dec.decompose(&eta).unwrap();
    assert!(split.residual < 1e-8);
    // (w, 0) is feasible, so the minimum cannot cost more
    let cost = split.norm_first.powi(2) + split.norm_smooth.powi(2);
    assert!(cost <= dec.gram_first.quad_form(&w) * (1.0 + 1e-10));
}

#[test]
fn interpolated_smooth_fields_decompose() {
    let m = build_structured_cube(3).unwrap();
    let dec = Decomposer::new(&m, Pairing::Curl).unwrap();
    let c = [0.3, -1.0, 0.7];
    let phi = nodal_interpolant(&m, &dec.smooth, |_| c).unwrap();
    let nf = dec.first.num_dofs();
    let x: Vec<f64> = std::iter::repeat_n(0.0, nf).chain(phi.iter().copied()).collect();
    let eta = dec.constraint.matvec(&x);
    let split = dec.decompose(&eta).unwrap();
    assert!(split.residual < 1e-8);
    let cost = split.norm_first.powi(2) + split.norm_smooth.powi(2);
    assert!(cost <= dec.gram_smooth.quad_form(&phi) * (1.0 + 1e-10));
}

#[test]
fn decomposition_ratio_is_stable() {
    for pairing in [Pairing::Curl, Pairing::Div] {
        let r2 = decomposition_stability(&build_structured_cube(2).unwrap(), pairing, 100, 0x5EED).unwrap();
        let r3 = decomposition_stability(&build_structured_cube(3).unwrap(), pairing, 100, 0x5EED).unwrap();
        for r in [&r2, &r3] {
            assert_eq!(r.reconstructed, 100);
            assert!(r.max_ratio <= r.exact_constant * (1.0 + 1e-10));
        }
        assert!(drift(&[r2.max_ratio, r3.max_ratio]) < 0.3, "{pairing}");
    }
}

#[test]
fn interpolation_bounds_are_stable() {
    for pairing in [Pairing::Curl, Pairing::Div] {
        let bounds: Vec<_> = [2, 3, 4]
            .iter()
            .map(|&n| interpolation_bound(&build_structured_cube(n).unwrap(), pairing, 200, 0x5EED).unwrap())
            .collect();
        for b in &bounds {
            assert!(b.sampled <= b.exact * (1.0 + 1e-12));
        }
        let observed: Vec<f64> = bounds.iter().map(|b| b.sampled).collect();
        assert!(drift(&observed) < 0.25, "{pairing}: {observed:?}");
    }
}

#[test]
fn exact_interpolation_bounds_are_stable() {
    for pairing in [Pairing::Curl, Pairing::Div] {
        let exact: Vec<f64> = [2, 3, 4]
            .iter()
            .map(|&n| interpolation_bound(&build_structured_cube(n).unwrap(), pairing, 0, 0).unwrap().exact)
            .collect();
        assert!(drift(&exact) < 0.25, "{pairing}: {exact:?}");
    }
}

#[test]
fn studies_are_deterministic() {
    let m = build_structured_cube(2).unwrap();
    assert_eq!(
        decomposition_stability(&m, Pairing::Div, 20, 9).unwrap(),
        decomposition_stability(&m, Pairing::Div, 20, 9).unwrap()
    );
    let p = manufactured_solution(ProblemKind::QuadCurl, CoefficientPreset::Bump);
    let opts = StudyOptions::default();
    assert_eq!(convergence_study(&p, &[2, 3], &opts).unwrap(), convergence_study(&p, &[2, 3], &opts).unwrap());
}
