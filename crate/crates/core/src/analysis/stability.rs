//! Discrete stability constants: inf-sup constants, kernel coercivity,
//! interpolation bounds and the stability of the discrete regular
//! decompositions.

use faer::linalg::solvers::Solve;
use faer::{Mat, MatRef, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::assembly::{
    assemble_form_weighted, assemble_gram, assemble_operator, map_cells, BlockSystem, Norm, Op, ProblemKind,
    ProblemSpec, Term, DEFAULT_QUAD_DEGREE,
};
use crate::fe::{curl_matrix, divergence_matrix, gradient_matrix, make_space, BcMode, DofHandler, SpaceKind};
use crate::interp::{nedelec_interpolation_matrix, rt_interpolation_matrix};
use crate::linalg::dense::{check_cap, gen_sym_eigen, nullspace};
use crate::mesh::{build_structured_cube, Mesh};
use crate::solver::SparseLu;
use crate::sparse::{norm2, CsrMatrix};
use crate::{Error, Result};

/// Relative threshold below which a generalized eigenvalue counts as kernel.
pub const KERNEL_TOL: f64 = 1e-9;
/// Largest admissible constraint residual of a decomposition.
pub const DECOMPOSITION_TOL: f64 = 1e-8;

/// The two regular decompositions and their inf-sup pairings.
///
/// `Curl` pairs `P1³ + edge bubbles` with Nédélec (used by the bi-Laplacian),
/// `Div` pairs `P1³ + face bubbles` with Raviart–Thomas (used by the quad-curl
/// problem).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    Curl,
    Div,
}

impl Pairing {
    pub fn name(self) -> &'static str {
        match self {
            Pairing::Curl => "curl",
            Pairing::Div => "div",
        }
    }

    /// The pairing whose interpolation appears in the scheme of `kind`.
    pub fn of(kind: ProblemKind) -> Self {
        match kind {
            ProblemKind::BiLaplacian => Pairing::Curl,
            ProblemKind::QuadCurl => Pairing::Div,
        }
    }

    fn smooth_kind(self) -> SpaceKind {
        match self {
            Pairing::Curl => SpaceKind::P1VecPlusEdge,
            Pairing::Div => SpaceKind::P1VecPlusFace,
        }
    }
}

impl std::fmt::Display for Pairing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Pairing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "curl" => Ok(Pairing::Curl),
            "div" => Ok(Pairing::Div),
            _ => Err(Error::InvalidArgument(format!("unknown pairing `{s}` (expected curl or div)"))),
        }
    }
}

fn dense_of(m: &CsrMatrix) -> Result<Mat<f64>> {
    check_cap(m.nrows().max(m.ncols()))?;
    Ok(m.to_dense())
}

fn sym(m: MatRef<'_, f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

fn sparse_times_dense(a: &CsrMatrix, x: MatRef<'_, f64>) -> Mat<f64> {
    let mut out = Mat::zeros(a.nrows(), x.ncols());
    for i in 0..a.nrows() {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            for k in 0..x.ncols() {
                out[(i, k)] += v * x[(j, k)];
            }
        }
    }
    out
}

fn block_diag(blocks: &[&CsrMatrix]) -> Result<CsrMatrix> {
    let dims: Vec<usize> = blocks.iter().map(|b| b.nrows()).collect();
    let rows: Vec<Vec<Option<&CsrMatrix>>> =
        (0..blocks.len()).map(|i| (0..blocks.len()).map(|j| (i == j).then_some(blocks[i])).collect()).collect();
    CsrMatrix::from_blocks(&rows, &dims, &dims)
}

fn hstack(blocks: &[&CsrMatrix]) -> Result<CsrMatrix> {
    let nrows = blocks.first().map_or(0, |b| b.nrows());
    let cols: Vec<usize> = blocks.iter().map(|b| b.ncols()).collect();
    CsrMatrix::from_blocks(&[blocks.iter().map(|b| Some(*b)).collect()], &[nrows], &cols)
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Result of a discrete inf-sup computation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InfSup {
    pub beta: f64,
    /// Number of eigenvalues treated as kernel and skipped.
    pub kernel_dim: usize,
    /// Dimension of the multiplier space.
    pub dim: usize,
}

/// Inf-sup constant of `B : RS → Y'` in the Gram norms `G_RS`, `G_Y`.
///
/// `β²` is the smallest nonzero eigenvalue of `B G_RS⁻¹ Bᵀ y = λ G_Y y`;
/// eigenvalues below `KERNEL_TOL · λ_max` are counted as kernel.
pub fn infsup_constant(b: &CsrMatrix, gram_rs: &CsrMatrix, gram_y: &CsrMatrix) -> Result<InfSup> {
    let (ny, nrs) = (b.nrows(), b.ncols());
    if gram_rs.nrows() != nrs || gram_rs.ncols() != nrs || gram_y.nrows() != ny || gram_y.ncols() != ny {
        return Err(Error::InvalidArgument(format!(
            "B is {ny}x{nrs} but the Grams are {}x{} and {}x{}",
            gram_rs.nrows(),
            gram_rs.ncols(),
            gram_y.nrows(),
            gram_y.ncols()
        )));
    }
    if ny == 0 {
        return Ok(InfSup { beta: f64::INFINITY, kernel_dim: 0, dim: 0 });
    }
    let g = dense_of(gram_rs)?;
    let llt = g.llt(Side::Lower).map_err(|_| Error::InvalidArgument("G_RS is not positive definite".into()))?;
    let bt = dense_of(&b.transpose())?;
    let x = llt.solve(bt.as_ref());
    let s = sym(sparse_times_dense(b, x.as_ref()).as_ref());
    let (vals, _) = gen_sym_eigen(s.as_ref(), dense_of(gram_y)?.as_ref(), false)?;
    let lmax = vals.last().copied().unwrap_or(0.0);
    if lmax <= 0.0 {
        return Ok(InfSup { beta: 0.0, kernel_dim: ny, dim: ny });
    }
    let kernel_dim = vals.iter().filter(|&&v| v <= KERNEL_TOL * lmax).count();
    Ok(InfSup { beta: vals[kernel_dim].sqrt(), kernel_dim, dim: ny })
}

/// Inf-sup constant of the curl or div pairing on `mesh`.
///
/// Curl: `(curl Π^N ψ, τ)` for `ψ ∈ P1³_0 + edge bubbles`, `τ ∈ RT_0`, with
/// `H¹` and `H(div)` norms. The kernel (the complement of the curls) is
/// deflated, which restricts `τ` to the divergence-free subspace.
///
/// Div: `(div Π^RT ψ, q)` for `ψ ∈ P1³_0 + face bubbles`, `q ∈ P0`, with
/// `H¹` and `L²` norms. The constants form a one-dimensional kernel.
pub fn pairing_infsup(mesh: &Mesh, pairing: Pairing, degree: usize) -> Result<InfSup> {
    let s = make_space(mesh, pairing.smooth_kind(), BcMode::Essential)?;
    let rt = make_space(mesh, SpaceKind::RT0, BcMode::Essential)?;
    let gram_s = assemble_gram(&s, Norm::H1, mesh, degree)?;
    match pairing {
        Pairing::Curl => {
            let ned = make_space(mesh, SpaceKind::Nedelec0, BcMode::Essential)?;
            let p = nedelec_interpolation_matrix(mesh, &s, &ned)?;
            let curl = curl_matrix(mesh, &ned, &rt)?;
            let mass = assemble_gram(&rt, Norm::L2, mesh, degree)?;
            let b = mass.matmul(&curl.matmul(&p)?)?;
            infsup_constant(&b, &gram_s, &assemble_gram(&rt, Norm::Hdiv, mesh, degree)?)
        }
        Pairing::Div => {
            let p = rt_interpolation_matrix(mesh, &s, &rt)?;
            let b = divergence_matrix(mesh, &rt)?.matmul(&p)?;
            let vols: Vec<f64> = (0..mesh.num_cells()).map(|c| mesh.geometry(c).volume).collect();
            infsup_constant(&b, &gram_s, &CsrMatrix::diagonal(&vols))
        }
    }
}

/// Inf-sup constant of the full constraint `[B_YR | B_YS]` of a system.
pub fn system_infsup(system: &BlockSystem, mesh: &Mesh, degree: usize) -> Result<InfSup> {
    let b = hstack(&[&system.b_yr, &system.b_ys])?;
    let [nr, ns, _] = system.kind.norms();
    let gr = assemble_gram(&system.spaces[0], nr, mesh, degree)?;
    let gs = assemble_gram(&system.spaces[1], ns, mesh, degree)?;
    infsup_constant(&b, &block_diag(&[&gr, &gs])?, &system.gram_y)
}

/// Smallest Rayleigh quotient of a form on the kernel of a constraint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Coercivity {
    /// `+∞` when the kernel is trivial.
    pub value: f64,
    pub kernel_dim: usize,
    pub empty_kernel: bool,
}

/// `min_{z ∈ ker C} zᵀAz / zᵀGz`, with the kernel from a dense SVD.
pub fn kernel_coercivity_raw(a: &CsrMatrix, gram: &CsrMatrix, constraint: &CsrMatrix) -> Result<Coercivity> {
    let n = a.nrows();
    if a.ncols() != n || gram.nrows() != n || gram.ncols() != n || constraint.ncols() != n {
        return Err(Error::InvalidArgument("form, Gram and constraint sizes disagree".into()));
    }
    check_cap(n)?;
    let z = nullspace(constraint.to_dense().as_ref(), 1e-10)?;
    let k = z.ncols();
    if k == 0 {
        return Ok(Coercivity { value: f64::INFINITY, kernel_dim: 0, empty_kernel: true });
    }
    let az = z.transpose() * sparse_times_dense(a, z.as_ref());
    let gz = z.transpose() * sparse_times_dense(gram, z.as_ref());
    let (vals, _) = gen_sym_eigen(sym(az.as_ref()).as_ref(), sym(gz.as_ref()).as_ref(), false)?;
    Ok(Coercivity { value: vals[0], kernel_dim: k, empty_kernel: false })
}

/// Coercivity of `diag(a_RR, a_SS)` on the discrete kernel of `[B_YR | B_YS]`
/// in the natural norms of `R × S`.
pub fn kernel_coercivity(system: &BlockSystem, mesh: &Mesh, degree: usize) -> Result<Coercivity> {
    let [nr, ns, _] = system.kind.norms();
    let gr = assemble_gram(&system.spaces[0], nr, mesh, degree)?;
    let gs = assemble_gram(&system.spaces[1], ns, mesh, degree)?;
    kernel_coercivity_raw(
        &block_diag(&[&system.a_rr, &system.a_ss])?,
        &block_diag(&[&gr, &gs])?,
        &hstack(&[&system.b_yr, &system.b_ys])?,
    )
}

/// Bound of the interpolation `Π : S → Y` in the `H¹` and `Y` norms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterpolationBound {
    /// `sup_s ‖Π s‖_Y / ‖s‖_1`, from the largest generalized eigenvalue.
    pub exact: f64,
    /// Largest ratio over the random sample; never above `exact`.
    pub sampled: f64,
    pub samples: usize,
}

/// `‖Π s‖_Y ≤ C ‖s‖_1` for the interpolation of the given pairing.
pub fn interpolation_bound(mesh: &Mesh, pairing: Pairing, samples: usize, seed: u64) -> Result<InterpolationBound> {
    let deg = DEFAULT_QUAD_DEGREE;
    let s = make_space(mesh, pairing.smooth_kind(), BcMode::Essential)?;
    let (p, gy) = match pairing {
        Pairing::Curl => {
            let y = make_space(mesh, SpaceKind::Nedelec0, BcMode::Essential)?;
            (nedelec_interpolation_matrix(mesh, &s, &y)?, assemble_gram(&y, Norm::Hcurl, mesh, deg)?)
        }
        Pairing::Div => {
            let y = make_space(mesh, SpaceKind::RT0, BcMode::Essential)?;
            (rt_interpolation_matrix(mesh, &s, &y)?, assemble_gram(&y, Norm::Hdiv, mesh, deg)?)
        }
    };
    let gs = assemble_gram(&s, Norm::H1, mesh, deg)?;
    let ptgp = p.transpose().matmul(&gy.matmul(&p)?)?;
    let (vals, _) = gen_sym_eigen(dense_of(&ptgp)?.as_ref(), dense_of(&gs)?.as_ref(), false)?;
    let exact = vals.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled: f64 = 0.0;
    for _ in 0..samples {
        let x = gaussian_vector(&mut rng, s.num_dofs());
        sampled = sampled.max((ptgp.quad_form(&x) / gs.quad_form(&x)).sqrt());
    }
    Ok(InterpolationBound { exact, sampled, samples })
}

/// Extreme generalized eigenvalues of a norm-equivalence pencil.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub min: f64,
    pub max: f64,
}

/// Spectrum of the `H¹` Gram of `P1³_0 + bubbles` against the block diagonal
/// of the `H¹` Gram of the `P1³_0` part and the `h_K⁻²`-weighted mass of the
/// bubble part.
pub fn norm_equivalence(mesh: &Mesh, pairing: Pairing) -> Result<Spectrum> {
    let deg = DEFAULT_QUAD_DEGREE;
    let s = make_space(mesh, pairing.smooth_kind(), BcMode::Essential)?;
    let n = s.num_dofs();
    let split = s.p1_block_len();
    let full = assemble_gram(&s, Norm::H1, mesh, deg)?;
    let weighted = assemble_form_weighted(mesh, &s, &s, &[Term::new(Op::Value, Op::Value)], deg, |c| {
        mesh.geometry(c).diameter().powi(-2)
    })?;
    let (vertex, bubble): (Vec<usize>, Vec<usize>) = ((0..split).collect(), (split..n).collect());
    let reference = block_diag(&[&full.submatrix(&vertex, &vertex), &weighted.submatrix(&bubble, &bubble)])?;
    let (vals, _) = gen_sym_eigen(dense_of(&full)?.as_ref(), dense_of(&reference)?.as_ref(), false)?;
    match (vals.first(), vals.last()) {
        (Some(&min), Some(&max)) => Ok(Spectrum { min, max }),
        _ => Err(Error::DegenerateSystem("the space has no interior dofs".into())),
    }
}

/// One solved decomposition `η = C₁ w + Π φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub first: Vec<f64>,
    pub smooth: Vec<f64>,
    pub norm_first: f64,
    pub norm_smooth: f64,
    pub norm_target: f64,
    /// `(‖w‖ + ‖φ‖_1) / ‖η‖`.
    pub ratio: f64,
    /// `‖C x − η‖₂ / ‖η‖₂`.
    pub residual: f64,
}

/// Minimal-norm solver for the discrete regular decompositions
///
/// - `N_0 = ∇ P1_0 + Π^N (P1³_0 + edge bubbles)` (curl),
/// - `RT_0 = curl N_0 + Π^RT (P1³_0 + face bubbles)` (div).
///
/// The pair `(w, φ)` of smallest `‖w‖² + ‖φ‖²_1` reconstructing a target is
/// found from one factored KKT system.
pub struct Decomposer {
    pub pairing: Pairing,
    pub first: DofHandler,
    pub smooth: DofHandler,
    pub target: DofHandler,
    /// `[C₁ | Π]`, target coefficients from `(w, φ)`.
    pub constraint: CsrMatrix,
    pub gram: CsrMatrix,
    pub gram_first: CsrMatrix,
    pub gram_smooth: CsrMatrix,
    pub gram_target: CsrMatrix,
    lu: SparseLu,
    kkt: CsrMatrix,
}

impl Decomposer {
    pub fn new(mesh: &Mesh, pairing: Pairing) -> Result<Self> {
        let deg = DEFAULT_QUAD_DEGREE;
        let smooth = make_space(mesh, pairing.smooth_kind(), BcMode::Essential)?;
        let (first, target, first_norm, target_norm, c1, interp) = match pairing {
            Pairing::Curl => {
                let p1 = make_space(mesh, SpaceKind::P1, BcMode::Essential)?;
                let ned = make_space(mesh, SpaceKind::Nedelec0, BcMode::Essential)?;
                let g = gradient_matrix(mesh, &p1, &ned)?;
                let p = nedelec_interpolation_matrix(mesh, &smooth, &ned)?;
                (p1, ned, Norm::H1, Norm::Hcurl, g, p)
            }
            Pairing::Div => {
                let ned = make_space(mesh, SpaceKind::Nedelec0, BcMode::Essential)?;
                let rt = make_space(mesh, SpaceKind::RT0, BcMode::Essential)?;
                let c = curl_matrix(mesh, &ned, &rt)?;
                let p = rt_interpolation_matrix(mesh, &smooth, &rt)?;
                (ned, rt, Norm::Hcurl, Norm::Hdiv, c, p)
            }
        };
        if first.num_dofs() == 0 || smooth.num_dofs() == 0 || target.num_dofs() == 0 {
            return Err(Error::DegenerateSystem("decomposition spaces are empty on this mesh".into()));
        }
        let constraint = hstack(&[&c1, &interp])?;
        let gram_first = assemble_gram(&first, first_norm, mesh, deg)?;
        let gram_smooth = assemble_gram(&smooth, Norm::H1, mesh, deg)?;
        let gram = block_diag(&[&gram_first, &gram_smooth])?;
        let gram_target = assemble_gram(&target, target_norm, mesh, deg)?;
        let ct = constraint.transpose();
        let (nx, nt) = (constraint.ncols(), constraint.nrows());
        let kkt = CsrMatrix::from_blocks(
            &[vec![Some(&gram), Some(&ct)], vec![Some(&constraint), None]],
            &[nx, nt],
            &[nx, nt],
        )?;
        let lu = SparseLu::new(&kkt)
            .map_err(|_| Error::DecompositionFailure { residual: f64::INFINITY, tolerance: DECOMPOSITION_TOL })?;
        Ok(Self { pairing, first, smooth, target, constraint, gram, gram_first, gram_smooth, gram_target, lu, kkt })
    }

    /// Decomposes the target with coefficients `eta`.
    pub fn decompose(&self, eta: &[f64]) -> Result<Split> {
        let (nx, nt) = (self.constraint.ncols(), self.constraint.nrows());
        if eta.len() != nt {
            return Err(Error::InvalidArgument(format!("target has {} coefficients, expected {nt}", eta.len())));
        }
        let mut rhs = vec![0.0; nx + nt];
        rhs[nx..].copy_from_slice(eta);
        let mut x = self.lu.solve(&rhs);
        // one step of iterative refinement
        let r: Vec<f64> = rhs.iter().zip(self.kkt.matvec(&x)).map(|(b, ax)| b - ax).collect();
        for (xi, di) in x.iter_mut().zip(self.lu.solve(&r)) {
            *xi += di;
        }
        x.truncate(nx);
        let cx = self.constraint.matvec(&x);
        let diff: Vec<f64> = cx.iter().zip(eta).map(|(a, b)| a - b).collect();
        let scale = norm2(eta);
        let residual = if scale > 0.0 { norm2(&diff) / scale } else { norm2(&diff) };
        if !(residual <= DECOMPOSITION_TOL) {
            return Err(Error::DecompositionFailure { residual, tolerance: DECOMPOSITION_TOL });
        }
        let nf = self.first.num_dofs();
        let (first, smooth) = (x[..nf].to_vec(), x[nf..].to_vec());
        let norm_first = self.gram_first.quad_form(&first).max(0.0).sqrt();
        let norm_smooth = self.gram_smooth.quad_form(&smooth).max(0.0).sqrt();
        let norm_target = self.gram_target.quad_form(eta).max(0.0).sqrt();
        let ratio = (norm_first + norm_smooth) / norm_target;
        Ok(Split { first, smooth, norm_first, norm_smooth, norm_target, ratio, residual })
    }

    /// `1/β` for the map `(w, φ) ↦ η`: the exact supremum of
    /// `‖(w, φ)‖ / ‖η‖` over minimal-norm decompositions.
    pub fn exact_constant(&self) -> Result<f64> {
        let b = self.gram_target.matmul(&self.constraint)?;
        let s = infsup_constant(&b, &self.gram, &self.gram_target)?;
        if s.kernel_dim > 0 {
            return Err(Error::DecompositionFailure { residual: f64::INFINITY, tolerance: DECOMPOSITION_TOL });
        }
        Ok(1.0 / s.beta)
    }
}

/// Sampled stability of a discrete regular decomposition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub pairing: Pairing,
    pub n: Option<usize>,
    pub samples: usize,
    /// Number of targets reconstructed within the tolerance.
    pub reconstructed: usize,
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub max_residual: f64,
    /// `1/β` of the constraint map, computed densely.
    pub exact_constant: f64,
}

/// Decomposes `samples` random targets of unit norm and records the largest
/// stability ratio. Any failed reconstruction is an error.
pub fn decomposition_stability(
    mesh: &Mesh,
    pairing: Pairing,
    samples: usize,
    seed: u64,
) -> Result<DecompositionReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is needed".into()));
    }
    let dec = Decomposer::new(mesh, pairing)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let targets: Vec<Vec<f64>> = (0..samples)
        .map(|_| {
            let mut eta = gaussian_vector(&mut rng, dec.target.num_dofs());
            let s = dec.gram_target.quad_form(&eta).sqrt();
            eta.iter_mut().for_each(|v| *v /= s);
            eta
        })
        .collect();
    let splits = map_cells(samples, |i| dec.decompose(&targets[i]))?;
    let ratios = splits.iter().map(|s| s.ratio);
    Ok(DecompositionReport {
        pairing,
        n: mesh.grid_size(),
        samples,
        reconstructed: splits.len(),
        max_ratio: ratios.clone().fold(f64::NEG_INFINITY, f64::max),
        min_ratio: ratios.fold(f64::INFINITY, f64::min),
        max_residual: splits.iter().map(|s| s.residual).fold(0.0, f64::max),
        exact_constant: dec.exact_constant()?,
    })
}

/// The three hypotheses of the abstract well-posedness lemma, measured on one mesh.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesesReport {
    pub problem: ProblemKind,
    pub n: usize,
    pub interpolation: InterpolationBound,
    pub coercivity: Coercivity,
    pub infsup: InfSup,
}

pub fn hypotheses(kind: ProblemKind, n: usize, samples: usize, seed: u64) -> Result<HypothesesReport> {
    let mesh = build_structured_cube(n)?;
    let system = assemble_operator(&ProblemSpec::new(kind), &mesh)?;
    Ok(HypothesesReport {
        problem: kind,
        n,
        interpolation: interpolation_bound(&mesh, Pairing::of(kind), samples, seed)?,
        coercivity: kernel_coercivity(&system, &mesh, DEFAULT_QUAD_DEGREE)?,
        infsup: system_infsup(&system, &mesh, DEFAULT_QUAD_DEGREE)?,
    })
}

/// Inf-sup constants of one pairing over several meshes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfSupStudy {
    pub pair: Pairing,
    pub ns: Vec<usize>,
    pub betas: Vec<f64>,
    pub kernel_dims: Vec<usize>,
    pub drift: f64,
}

pub fn infsup_study(pairing: Pairing, ns: &[usize]) -> Result<InfSupStudy> {
    let results: Vec<InfSup> = ns
        .iter()
        .map(|&n| pairing_infsup(&build_structured_cube(n)?, pairing, DEFAULT_QUAD_DEGREE))
        .collect::<Result<_>>()?;
    let betas: Vec<f64> = results.iter().map(|r| r.beta).collect();
    Ok(InfSupStudy {
        pair: pairing,
        ns: ns.to_vec(),
        drift: super::drift(&betas),
        kernel_dims: results.iter().map(|r| r.kernel_dim).collect(),
        betas,
    })
}

/// Decomposition stability of one pairing over several meshes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionStudy {
    pub pair: Pairing,
    pub reports: Vec<DecompositionReport>,
    /// Drift of `max_ratio` across the meshes.
    pub drift: f64,
}

pub fn decomposition_study(pairing: Pairing, ns: &[usize], samples: usize, seed: u64) -> Result<DecompositionStudy> {
    let reports: Vec<DecompositionReport> = ns
        .iter()
        .map(|&n| decomposition_stability(&build_structured_cube(n)?, pairing, samples, seed))
        .collect::<Result<_>>()?;
    let ratios: Vec<f64> = reports.iter().map(|r| r.max_ratio).collect();
    Ok(DecompositionStudy { pair: pairing, drift: super::drift(&ratios), reports })
}

/// Hypotheses of one problem over several meshes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesesStudy {
    pub problem: ProblemKind,
    pub reports: Vec<HypothesesReport>,
    /// Drift of the exact interpolation bound.
    pub bound_drift: f64,
    pub coercivity_drift: f64,
    pub infsup_drift: f64,
}

pub fn hypotheses_study(kind: ProblemKind, ns: &[usize], samples: usize, seed: u64) -> Result<HypothesesStudy> {
    let reports: Vec<HypothesesReport> =
        ns.iter().map(|&n| hypotheses(kind, n, samples, seed)).collect::<Result<_>>()?;
    let pick = |f: fn(&HypothesesReport) -> f64| super::drift(&reports.iter().map(f).collect::<Vec<_>>());
    Ok(HypothesesStudy {
        problem: kind,
        bound_drift: pick(|r| r.interpolation.exact),
        coercivity_drift: pick(|r| r.coercivity.value),
        infsup_drift: pick(|r| r.infsup.beta),
        reports,
    })
}
