//! Assembly of the three-field saddle-point systems, load vectors and Gram
//! matrices.
//!
//! Both problems share the layout
//!
//! ```text
//! [ A_RR   0     B_YRᵀ ] [u]   [f_R]
//! [ 0      A_SS  B_YSᵀ ] [φ] = [f_S]
//! [ B_YR   B_YS  0     ] [ζ]   [0  ]
//! ```
//!
//! with `B_YS = G_Y · P`, where `P` interpolates the enriched vector field onto
//! `Y` and `G_Y` is the full H(curl) or H(div) Gram matrix of `Y`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::fe::basis::eval_unchecked;
use crate::fe::quadrature::quadrature_rule;
use crate::fe::{make_space, BasisEval, BcMode, DofHandler, SpaceKind};
use crate::interp::{nedelec_interpolation_matrix, rt_interpolation_matrix};
use crate::linalg::small::{dot, frobenius_dot, is_spd, mat_vec, Mat3, Vec3};
use crate::mesh::{Mesh, Point3};
use crate::sparse::{offsets_of, CsrMatrix, TripletBuilder};
use crate::{Error, Result};

/// Which fourth-order problem is discretized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// `Δ(α Δu) = f` with `u = ∂u/∂n = 0` on the boundary.
    BiLaplacian,
    /// `curl² A curl² u + u = f` with `u×n = (curl u)×n = 0` on the boundary.
    QuadCurl,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::BiLaplacian => "bilaplacian",
            ProblemKind::QuadCurl => "quadcurl",
        }
    }

    /// Space kinds of the three fields `(R, S, Y)`.
    pub fn spaces(self) -> [SpaceKind; 3] {
        match self {
            ProblemKind::BiLaplacian => [SpaceKind::P1, SpaceKind::P1VecPlusEdge, SpaceKind::Nedelec0],
            ProblemKind::QuadCurl => [SpaceKind::Nedelec0, SpaceKind::P1VecPlusFace, SpaceKind::RT0],
        }
    }

    /// Natural norms of the three fields.
    pub fn norms(self) -> [Norm; 3] {
        match self {
            ProblemKind::BiLaplacian => [Norm::H1, Norm::H1, Norm::Hcurl],
            ProblemKind::QuadCurl => [Norm::Hcurl, Norm::H1, Norm::Hdiv],
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bilaplacian" | "bilap" => Ok(ProblemKind::BiLaplacian),
            "quadcurl" | "curl4" => Ok(ProblemKind::QuadCurl),
            _ => Err(Error::InvalidArgument(format!("unknown problem `{s}`"))),
        }
    }
}

/// Norms for Gram matrices and errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Norm {
    L2,
    H1,
    Hcurl,
    Hdiv,
}

impl Norm {
    pub fn applies_to(self, kind: SpaceKind) -> bool {
        match self {
            Norm::L2 => true,
            Norm::H1 => kind.is_continuous(),
            Norm::Hcurl => kind.is_vector() && kind != SpaceKind::RT0,
            Norm::Hdiv => kind.is_vector() && kind != SpaceKind::Nedelec0,
        }
    }
}

pub type ScalarFn = Arc<dyn Fn(&Point3) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&Point3) -> Vec3 + Send + Sync>;
pub type MatrixFn = Arc<dyn Fn(&Point3) -> Mat3 + Send + Sync>;

/// The coefficient `α` (bi-Laplacian) or `A` (quad-curl).
#[derive(Clone)]
pub enum Coefficient {
    Constant(f64),
    /// A scalar field; for the quad-curl problem it means `A = a(x) I`.
    Scalar(ScalarFn),
    /// A symmetric positive definite matrix field.
    Matrix(MatrixFn),
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Constant(c) => write!(f, "Constant({c})"),
            Coefficient::Scalar(_) => f.write_str("Scalar(<fn>)"),
            Coefficient::Matrix(_) => f.write_str("Matrix(<fn>)"),
        }
    }
}

impl Coefficient {
    fn scalar_at(&self, x: &Point3) -> Result<f64> {
        let a = match self {
            Coefficient::Constant(c) => *c,
            Coefficient::Scalar(f) => f(x),
            Coefficient::Matrix(_) => {
                return Err(Error::InvalidArgument("a matrix coefficient needs a vector form".into()))
            }
        };
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidArgument(format!("coefficient {a} at {x:?} is not positive")));
        }
        Ok(a)
    }

    fn apply_at(&self, x: &Point3, v: &Vec3) -> Result<Vec3> {
        match self {
            Coefficient::Matrix(f) => {
                let a = f(x);
                if !is_spd(&a) {
                    return Err(Error::InvalidArgument(format!("coefficient {a:?} at {x:?} is not SPD")));
                }
                Ok(mat_vec(&a, v))
            }
            _ => {
                let s = self.scalar_at(x)?;
                Ok([s * v[0], s * v[1], s * v[2]])
            }
        }
    }
}

/// A right-hand side field.
#[derive(Clone)]
pub enum RhsField {
    Zero,
    Scalar(ScalarFn),
    Vector(VectorFn),
}

impl fmt::Debug for RhsField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RhsField::Zero => "Zero",
            RhsField::Scalar(_) => "Scalar(<fn>)",
            RhsField::Vector(_) => "Vector(<fn>)",
        })
    }
}

/// Problem data: kind, coefficient, right-hand sides and quadrature degree.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub coefficient: Coefficient,
    /// Scalar for the bi-Laplacian, vector for the quad-curl problem.
    pub f1: RhsField,
    /// Vector load on the `S` field.
    pub f2: RhsField,
    pub quad_degree: usize,
}

pub const DEFAULT_QUAD_DEGREE: usize = 6;

impl ProblemSpec {
    pub fn new(kind: ProblemKind) -> Self {
        Self {
            kind,
            coefficient: Coefficient::Constant(1.0),
            f1: RhsField::Zero,
            f2: RhsField::Zero,
            quad_degree: DEFAULT_QUAD_DEGREE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        quadrature_rule(self.quad_degree)?;
        if let Coefficient::Constant(c) = self.coefficient {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidArgument(format!("coefficient {c} is not positive")));
            }
        }
        if self.kind == ProblemKind::BiLaplacian && matches!(self.coefficient, Coefficient::Matrix(_)) {
            return Err(Error::InvalidArgument("the bi-Laplacian takes a scalar coefficient".into()));
        }
        match (self.kind, &self.f1) {
            (ProblemKind::BiLaplacian, RhsField::Vector(_)) => {
                return Err(Error::InvalidArgument("bi-Laplacian f1 must be scalar".into()))
            }
            (ProblemKind::QuadCurl, RhsField::Scalar(_)) => {
                return Err(Error::InvalidArgument("quad-curl f1 must be a vector field".into()))
            }
            _ => {}
        }
        if matches!(self.f2, RhsField::Scalar(_)) {
            return Err(Error::InvalidArgument("f2 must be a vector field".into()));
        }
        Ok(())
    }
}

/// The differential operator applied to a basis function inside a form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Value,
    /// Gradient of a scalar or full Jacobian of a vector field.
    Grad,
    Curl,
    Div,
}

#[derive(Clone, Copy)]
enum OpVal {
    S(f64),
    V(Vec3),
    M(Mat3),
}

fn op_value(eval: &BasisEval, i: usize, op: Op) -> OpVal {
    match (eval, op) {
        (BasisEval::Scalar { values, .. }, Op::Value) => OpVal::S(values[i]),
        (BasisEval::Scalar { grads, .. }, Op::Grad) => OpVal::V(grads[i]),
        (BasisEval::Vector { values, .. }, Op::Value) => OpVal::V(values[i]),
        (BasisEval::Vector { jacobians, .. }, Op::Grad) => OpVal::M(jacobians[i]),
        (e @ BasisEval::Vector { .. }, Op::Curl) => OpVal::V(e.curl(i).unwrap()),
        (e @ BasisEval::Vector { .. }, Op::Div) => OpVal::S(e.div(i).unwrap()),
        (BasisEval::Scalar { .. }, _) => unreachable!("checked when the form is built"),
    }
}

/// One term `scale · (coef · op(trial), op(test))` of a bilinear form.
#[derive(Clone, Debug)]
pub struct Term {
    pub test: Op,
    pub trial: Op,
    pub scale: f64,
    pub coefficient: Option<Coefficient>,
}

impl Term {
    pub fn new(test: Op, trial: Op) -> Self {
        Self { test, trial, scale: 1.0, coefficient: None }
    }
    pub fn scaled(mut self, s: f64) -> Self {
        self.scale = s;
        self
    }
    pub fn with(mut self, c: Coefficient) -> Self {
        self.coefficient = Some(c);
        self
    }
}

fn op_allowed(kind: SpaceKind, op: Op) -> bool {
    match op {
        Op::Value => true,
        Op::Grad => kind.is_continuous() || !kind.is_vector(),
        Op::Curl => Norm::Hcurl.applies_to(kind),
        Op::Div => Norm::Hdiv.applies_to(kind),
    }
}

fn pair(a: OpVal, b: OpVal) -> Option<f64> {
    match (a, b) {
        (OpVal::S(x), OpVal::S(y)) => Some(x * y),
        (OpVal::V(x), OpVal::V(y)) => Some(dot(&x, &y)),
        (OpVal::M(x), OpVal::M(y)) => Some(frobenius_dot(&x, &y)),
        _ => None,
    }
}

/// Assembles `Σ_terms ∫ scale · coef · op(trial_j) · op(test_i)` into a
/// `test.num_dofs() × trial.num_dofs()` matrix.
pub fn assemble_form(
    mesh: &Mesh,
    test: &DofHandler,
    trial: &DofHandler,
    terms: &[Term],
    degree: usize,
) -> Result<CsrMatrix> {
    assemble_form_weighted(mesh, test, trial, terms, degree, |_| 1.0)
}

/// [`assemble_form`] with every cell contribution multiplied by `cell_weight(cell)`.
pub fn assemble_form_weighted(
    mesh: &Mesh,
    test: &DofHandler,
    trial: &DofHandler,
    terms: &[Term],
    degree: usize,
    cell_weight: impl Fn(usize) -> f64 + Sync + Send,
) -> Result<CsrMatrix> {
    let rule = quadrature_rule(degree)?;
    for t in terms {
        if !op_allowed(test.kind(), t.test) || !op_allowed(trial.kind(), t.trial) {
            return Err(Error::InvalidArgument(format!(
                "operator pair {:?}/{:?} not defined on {}/{}",
                t.test,
                t.trial,
                test.kind(),
                trial.kind()
            )));
        }
    }
    let (nt, ns) = (test.local_count(), trial.local_count());
    let local = |c: usize| -> Result<Vec<f64>> {
        let geom = mesh.geometry(c);
        let mut out = vec![0.0; nt * ns];
        for (bary, w) in rule.points.iter().zip(&rule.weights) {
            let w = w * 6.0 * geom.volume * cell_weight(c);
            let x = geom.point(bary);
            let et = eval_unchecked(test.kind(), geom, bary);
            let es = if test.kind() == trial.kind() { et.clone() } else { eval_unchecked(trial.kind(), geom, bary) };
            for term in terms {
                let tv: Vec<OpVal> = (0..nt).map(|i| op_value(&et, i, term.test)).collect();
                let mut sv: Vec<OpVal> = (0..ns).map(|j| op_value(&es, j, term.trial)).collect();
                let mut s = w * term.scale;
                match &term.coefficient {
                    None => {}
                    Some(Coefficient::Matrix(_)) => {
                        let coef = term.coefficient.as_ref().unwrap();
                        for v in sv.iter_mut() {
                            match v {
                                OpVal::V(vec) => *vec = coef.apply_at(&x, vec)?,
                                _ => {
                                    return Err(Error::InvalidArgument(
                                        "matrix coefficient on a non-vector operator".into(),
                                    ))
                                }
                            }
                        }
                    }
                    Some(c) => s *= c.scalar_at(&x)?,
                }
                for (i, a) in tv.iter().enumerate() {
                    for (j, b) in sv.iter().enumerate() {
                        let p = pair(*a, *b).ok_or_else(|| {
                            Error::InvalidArgument(format!(
                                "operators {:?} and {:?} have different shapes",
                                term.test, term.trial
                            ))
                        })?;
                        out[i * ns + j] += s * p;
                    }
                }
            }
        }
        Ok(out)
    };
    let locals = map_cells(mesh.num_cells(), local)?;
    let mut b = TripletBuilder::with_capacity(test.num_dofs(), trial.num_dofs(), locals.len() * nt * ns);
    for (c, lm) in locals.iter().enumerate() {
        let (rd, rs) = (test.local_dofs(c), test.local_signs(c));
        let (cd, cs) = (trial.local_dofs(c), trial.local_signs(c));
        for i in 0..nt {
            let Some(r) = rd[i] else { continue };
            for j in 0..ns {
                let Some(col) = cd[j] else { continue };
                b.push(r, col, rs[i] * cs[j] * lm[i * ns + j]);
            }
        }
    }
    Ok(b.build())
}

/// Runs `f` on every cell, in parallel when enabled, returning results in cell order.
pub(crate) fn map_cells<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Gram matrix of the full `norm` inner product on the space of `handler`.
pub fn assemble_gram(handler: &DofHandler, norm: Norm, mesh: &Mesh, degree: usize) -> Result<CsrMatrix> {
    let kind = handler.kind();
    if !norm.applies_to(kind) {
        return Err(Error::InvalidArgument(format!("{norm:?} norm is not defined on {kind}")));
    }
    let mut terms = vec![Term::new(Op::Value, Op::Value)];
    match norm {
        Norm::L2 => {}
        Norm::H1 => terms.push(Term::new(Op::Grad, Op::Grad)),
        Norm::Hcurl => terms.push(Term::new(Op::Curl, Op::Curl)),
        Norm::Hdiv => terms.push(Term::new(Op::Div, Op::Div)),
    }
    assemble_form(mesh, handler, handler, &terms, degree)
}

/// Three handlers of a problem, in `(R, S, Y)` order, with essential boundary
/// conditions. Fails if any of them is empty.
pub fn problem_spaces(kind: ProblemKind, mesh: &Mesh) -> Result<[DofHandler; 3]> {
    let [r, s, y] = kind.spaces();
    let spaces = [
        make_space(mesh, r, BcMode::Essential)?,
        make_space(mesh, s, BcMode::Essential)?,
        make_space(mesh, y, BcMode::Essential)?,
    ];
    for (name, h) in ["R", "S", "Y"].iter().zip(&spaces) {
        if h.num_dofs() == 0 {
            return Err(Error::DegenerateSystem(format!(
                "{kind}: the {name} space ({}) has no interior dofs on this mesh",
                h.kind()
            )));
        }
    }
    Ok(spaces)
}

/// The assembled saddle-point system of one problem on one mesh.
#[derive(Clone, Debug)]
pub struct BlockSystem {
    pub kind: ProblemKind,
    /// `(R, S, Y)` handlers.
    pub spaces: [DofHandler; 3],
    pub a_rr: CsrMatrix,
    pub a_ss: CsrMatrix,
    /// `Y × R` constraint block.
    pub b_yr: CsrMatrix,
    /// `Y × S` constraint block, `G_Y · P`.
    pub b_ys: CsrMatrix,
    /// Inner product `c(·,·)` on `Y`.
    pub gram_y: CsrMatrix,
    /// Interpolation `S → Y`.
    pub interp: CsrMatrix,
    /// Monolithic symmetric matrix.
    pub matrix: CsrMatrix,
    /// Block offsets `[0, |R|, |R|+|S|, total]`.
    pub offsets: [usize; 4],
}

impl BlockSystem {
    pub fn dims(&self) -> [usize; 3] {
        [self.spaces[0].num_dofs(), self.spaces[1].num_dofs(), self.spaces[2].num_dofs()]
    }

    pub fn total_dofs(&self) -> usize {
        self.offsets[3]
    }

    /// Splits a monolithic vector into its three fields.
    pub fn split<'a>(&self, x: &'a [f64]) -> [&'a [f64]; 3] {
        let o = self.offsets;
        [&x[o[0]..o[1]], &x[o[1]..o[2]], &x[o[2]..o[3]]]
    }
}

/// Assembles the saddle-point operator of `spec` on `mesh`.
pub fn assemble_operator(spec: &ProblemSpec, mesh: &Mesh) -> Result<BlockSystem> {
    spec.validate()?;
    let spaces = problem_spaces(spec.kind, mesh)?;
    let [r, s, y] = &spaces;
    let deg = spec.quad_degree;
    let coef = spec.coefficient.clone();
    let (a_rr, a_ss, b_yr, gram_y, interp) = match spec.kind {
        ProblemKind::BiLaplacian => {
            let a_ss = assemble_form(
                mesh,
                s,
                s,
                &[Term::new(Op::Div, Op::Div).with(coef), Term::new(Op::Curl, Op::Curl)],
                deg,
            )?;
            let b_yr = assemble_form(mesh, y, r, &[Term::new(Op::Value, Op::Grad).scaled(-1.0)], deg)?;
            let gram_y = assemble_gram(y, Norm::Hcurl, mesh, deg)?;
            let p = nedelec_interpolation_matrix(mesh, s, y)?;
            (CsrMatrix::zeros(r.num_dofs(), r.num_dofs()), a_ss, b_yr, gram_y, p)
        }
        ProblemKind::QuadCurl => {
            let a_rr = assemble_gram(r, Norm::L2, mesh, deg)?;
            let a_ss = assemble_form(
                mesh,
                s,
                s,
                &[Term::new(Op::Curl, Op::Curl).with(coef), Term::new(Op::Div, Op::Div)],
                deg,
            )?;
            let b_yr = assemble_form(mesh, y, r, &[Term::new(Op::Value, Op::Curl).scaled(-1.0)], deg)?;
            let gram_y = assemble_gram(y, Norm::Hdiv, mesh, deg)?;
            let p = rt_interpolation_matrix(mesh, s, y)?;
            (a_rr, a_ss, b_yr, gram_y, p)
        }
    };
    let b_ys = gram_y.matmul(&interp)?;
    let (b_yr_t, b_ys_t) = (b_yr.transpose(), b_ys.transpose());
    let dims = [r.num_dofs(), s.num_dofs(), y.num_dofs()];
    let matrix = CsrMatrix::from_blocks(
        &[
            vec![Some(&a_rr), None, Some(&b_yr_t)],
            vec![None, Some(&a_ss), Some(&b_ys_t)],
            vec![Some(&b_yr), Some(&b_ys), None],
        ],
        &dims,
        &dims,
    )?;
    let off = offsets_of(&dims);
    Ok(BlockSystem {
        kind: spec.kind,
        spaces,
        a_rr,
        a_ss,
        b_yr,
        b_ys,
        gram_y,
        interp,
        matrix,
        offsets: [off[0], off[1], off[2], off[3]],
    })
}

/// Right-hand side in field blocks `(f_R, f_S, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockVector {
    pub parts: [Vec<f64>; 3],
}

impl BlockVector {
    pub fn to_flat(&self) -> Vec<f64> {
        self.parts.concat()
    }
}

/// `∫ f · v_i` for every basis function of `handler`.
pub fn assemble_functional(mesh: &Mesh, handler: &DofHandler, f: &RhsField, degree: usize) -> Result<Vec<f64>> {
    let n = handler.local_count();
    let kind = handler.kind();
    let rule = quadrature_rule(degree)?;
    match (f, kind.is_vector()) {
        (RhsField::Zero, _) => return Ok(vec![0.0; handler.num_dofs()]),
        (RhsField::Scalar(_), false) | (RhsField::Vector(_), true) => {}
        _ => return Err(Error::InvalidArgument(format!("load field does not match the {kind} space"))),
    }
    let locals = map_cells(mesh.num_cells(), |c| {
        let geom = mesh.geometry(c);
        let mut out = vec![0.0; n];
        for (bary, w) in rule.points.iter().zip(&rule.weights) {
            let w = w * 6.0 * geom.volume;
            let x = geom.point(bary);
            match (f, eval_unchecked(kind, geom, bary)) {
                (RhsField::Scalar(g), BasisEval::Scalar { values, .. }) => {
                    let gx = g(&x);
                    for (o, v) in out.iter_mut().zip(&values) {
                        *o += w * gx * v;
                    }
                }
                (RhsField::Vector(g), BasisEval::Vector { values, .. }) => {
                    let gx = g(&x);
                    for (o, v) in out.iter_mut().zip(&values) {
                        *o += w * dot(&gx, v);
                    }
                }
                _ => unreachable!(),
            }
        }
        Ok(out)
    })?;
    let mut rhs = vec![0.0; handler.num_dofs()];
    for (c, lv) in locals.iter().enumerate() {
        for ((d, s), v) in handler.local_dofs(c).iter().zip(handler.local_signs(c)).zip(lv) {
            if let Some(d) = d {
                rhs[*d] += s * v;
            }
        }
    }
    Ok(rhs)
}

/// Load vector of `spec` on `mesh`; the third block is zero.
pub fn assemble_load(spec: &ProblemSpec, mesh: &Mesh) -> Result<BlockVector> {
    spec.validate()?;
    let [r, s, y] = problem_spaces(spec.kind, mesh)?;
    Ok(BlockVector {
        parts: [
            assemble_functional(mesh, &r, &spec.f1, spec.quad_degree)?,
            assemble_functional(mesh, &s, &spec.f2, spec.quad_degree)?,
            vec![0.0; y.num_dofs()],
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_structured_cube;

    #[test]
    fn p0_mass_is_cell_volumes() {
        let m = build_structured_cube(2).unwrap();
        let h = make_space(&m, SpaceKind::P0, BcMode::None).unwrap();
        let g = assemble_gram(&h, Norm::L2, &m, 2).unwrap();
        assert_eq!(g.nnz(), m.num_cells());
        for c in 0..m.num_cells() {
            assert!((g.get(c, c) - m.geometry(c).volume).abs() < 1e-16);
        }
    }

    #[test]
    fn inapplicable_norms_are_rejected() {
        let m = build_structured_cube(1).unwrap();
        let ned = make_space(&m, SpaceKind::Nedelec0, BcMode::None).unwrap();
        let p1 = make_space(&m, SpaceKind::P1, BcMode::None).unwrap();
        assert!(assemble_gram(&ned, Norm::H1, &m, 2).is_err());
        assert!(assemble_gram(&ned, Norm::Hdiv, &m, 2).is_err());
        assert!(assemble_gram(&p1, Norm::Hcurl, &m, 2).is_err());
    }

    #[test]
    fn bilaplacian_needs_an_interior_vertex() {
        let m = build_structured_cube(1).unwrap();
        let err = assemble_operator(&ProblemSpec::new(ProblemKind::BiLaplacian), &m).unwrap_err();
        assert!(matches!(err, Error::DegenerateSystem(_)));
    }

    #[test]
    fn problem_names_parse() {
        assert_eq!("bilaplacian".parse::<ProblemKind>().unwrap(), ProblemKind::BiLaplacian);
        assert_eq!("quadcurl".parse::<ProblemKind>().unwrap(), ProblemKind::QuadCurl);
        assert!("stokes".parse::<ProblemKind>().is_err());
    }

    #[test]
    fn nonpositive_coefficient_is_rejected() {
        let m = build_structured_cube(2).unwrap();
        let mut spec = ProblemSpec::new(ProblemKind::BiLaplacian);
        spec.coefficient = Coefficient::Scalar(Arc::new(|x: &Point3| x[0] - 0.5));
        assert!(matches!(assemble_operator(&spec, &m), Err(Error::InvalidArgument(_))));
    }
}
