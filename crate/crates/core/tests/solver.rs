use ordfem::analysis::{manufactured_solution, CoefficientPreset};
use ordfem::assembly::{assemble_gram, assemble_load, assemble_operator, BlockSystem, ProblemKind};
use ordfem::mesh::{build_structured_cube, Mesh};
use ordfem::solver::{
    inertia, solve_direct, solve_minres, BlockDiagonalPreconditioner, IdentityPreconditioner, DEFAULT_MINRES_TOL,
};
use ordfem::sparse::CsrMatrix;

fn setup(kind: ProblemKind, n: usize) -> (Mesh, BlockSystem, Vec<f64>) {
    let spec = manufactured_solution(kind, CoefficientPreset::Unit).spec;
    let mesh = build_structured_cube(n).unwrap();
    let sys = assemble_operator(&spec, &mesh).unwrap();
    let rhs = assemble_load(&spec, &mesh).unwrap().to_flat();
    (mesh, sys, rhs)
}

fn constraint_residual(sys: &BlockSystem, x: &[f64], rhs: &[f64]) -> f64 {
    let [u, phi, _] = sys.split(x);
    let c: Vec<f64> = sys.b_yr.matvec(u).iter().zip(sys.b_ys.matvec(phi)).map(|(a, b)| a + b).collect();
    norm(&c) / norm(rhs)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn saddle_point_inertia() {
    for kind in [ProblemKind::BiLaplacian, ProblemKind::QuadCurl] {
        let (_, sys, _) = setup(kind, 2);
        let i = inertia(&sys.matrix).unwrap();
        let [r, s, y] = sys.dims();
        assert_eq!((i.positive, i.negative, i.zero), (r + s, y, 0), "{kind}");
    }
}

#[test]
fn direct_solves_meet_the_residual_bound() {
    for kind in [ProblemKind::BiLaplacian, ProblemKind::QuadCurl] {
        let (_, sys, rhs) = setup(kind, 2);
        let rep = solve_direct(&sys, &rhs).unwrap();
        assert!(rep.relative_residual < 1e-10, "{kind}");
        // the third block row is an exact constraint
        assert!(constraint_residual(&sys, &rep.solution, &rhs) < 1e-10, "{kind}");
    }
}

#[test]
fn zero_load_gives_zero_solution() {
    let (mesh, sys, rhs) = setup(ProblemKind::QuadCurl, 2);
    let zero = vec![0.0; rhs.len()];
    assert!(solve_direct(&sys, &zero).unwrap().solution.iter().all(|v| *v == 0.0));
    let pre = BlockDiagonalPreconditioner::for_system(&sys, &mesh, 6).unwrap();
    let rep = solve_minres(&sys.matrix, &zero, &pre, 1e-8, None).unwrap();
    assert_eq!(rep.iterations, Some(0));
    assert!(rep.solution.iter().all(|v| *v == 0.0));
}

#[test]
fn solution_is_linear_in_the_load() {
    let (_, sys, rhs) = setup(ProblemKind::BiLaplacian, 2);
    let x = solve_direct(&sys, &rhs).unwrap().solution;
    let scaled: Vec<f64> = rhs.iter().map(|v| 10.0 * v).collect();
    let y = solve_direct(&sys, &scaled).unwrap().solution;
    let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 10.0 * a - b).collect();
    assert!(norm(&diff) <= 1e-9 * norm(&y));
}

fn gram_norm(grams: &[CsrMatrix], offsets: &[usize; 4], v: &[f64]) -> f64 {
    (0..3).map(|b| grams[b].quad_form(&v[offsets[b]..offsets[b + 1]])).sum::<f64>().sqrt()
}

#[test]
fn minres_agrees_with_the_direct_solve() {
    for kind in [ProblemKind::BiLaplacian, ProblemKind::QuadCurl] {
        let (mesh, sys, rhs) = setup(kind, 2);
        let direct = solve_direct(&sys, &rhs).unwrap().solution;
        let pre = BlockDiagonalPreconditioner::for_system(&sys, &mesh, 6).unwrap();
        let tol = DEFAULT_MINRES_TOL;
        let it = solve_minres(&sys.matrix, &rhs, &pre, tol, None).unwrap();
        assert!(it.iterations.unwrap() <= 10 * sys.matrix.nrows());
        let grams: Vec<_> =
            sys.spaces.iter().zip(kind.norms()).map(|(h, norm)| assemble_gram(h, norm, &mesh, 6).unwrap()).collect();
        let err: Vec<f64> = direct.iter().zip(&it.solution).map(|(a, b)| a - b).collect();
        let rel = gram_norm(&grams, &sys.offsets, &err) / gram_norm(&grams, &sys.offsets, &direct);
        assert!(rel <= 10.0 * tol, "{kind}: {rel:e}");
    }
}

#[test]
fn identity_preconditioner_on_a_definite_block() {
    let (_, sys, _) = setup(ProblemKind::QuadCurl, 2);
    let b: Vec<f64> = (0..sys.a_ss.nrows()).map(|i| (i as f64).sin()).collect();
    let direct = ordfem::solver::solve_sparse_direct(&sys.a_ss, &b).unwrap().solution;
    let it = solve_minres(&sys.a_ss, &b, &IdentityPreconditioner, 1e-12, None).unwrap().solution;
    let diff: Vec<f64> = direct.iter().zip(&it).map(|(a, b)| a - b).collect();
    assert!(norm(&diff) < 1e-8 * norm(&direct));
}

#[test]
fn preconditioned_iterations_do_not_grow_with_refinement() {
    let (coarse, fine) = (minres_count(ProblemKind::BiLaplacian, 2), minres_count(ProblemKind::BiLaplacian, 4));
    assert!((fine as f64) < 2.0 * coarse as f64, "{coarse} -> {fine} iterations");
}

fn minres_count(kind: ProblemKind, n: usize) -> usize {
    let (mesh, sys, rhs) = setup(kind, n);
    let pre = BlockDiagonalPreconditioner::for_system(&sys, &mesh, 6).unwrap();
    solve_minres(&sys.matrix, &rhs, &pre, 1e-8, None).unwrap().iterations.unwrap()
}

#[test]
fn iteration_counts_level_off() {
    for kind in [ProblemKind::BiLaplacian, ProblemKind::QuadCurl] {
        let (coarse, fine) = (minres_count(kind, 4), minres_count(kind, 8));
        assert!((fine as f64) < 2.0 * coarse as f64, "{kind}: {coarse} -> {fine} iterations");
    }
}

#[test]
fn solves_are_bit_reproducible() {
    let (mesh, sys, rhs) = setup(ProblemKind::QuadCurl, 3);
    assert_eq!(solve_direct(&sys, &rhs).unwrap(), solve_direct(&sys, &rhs).unwrap());
    let pre = BlockDiagonalPreconditioner::for_system(&sys, &mesh, 6).unwrap();
    let a = solve_minres(&sys.matrix, &rhs, &pre, 1e-8, None).unwrap();
    let b = solve_minres(&sys.matrix, &rhs, &pre, 1e-8, None).unwrap();
    assert_eq!(a, b);
}
