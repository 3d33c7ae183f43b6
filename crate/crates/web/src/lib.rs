//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string. The plain Rust functions behind them
//! are public so they can be tested natively.

use ordfem::analysis::{
    convergence_study, infsup_study, manufactured_solution, solve_on_mesh, CoefficientPreset, Pairing, StudyOptions,
};
use ordfem::assembly::ProblemKind;
use ordfem::fe::{eval_field, FieldEval};
use ordfem::report::Study;
use ordfem::{Error, Result};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest mesh the demo accepts; beyond this a browser tab stalls.
pub const MAX_N: usize = 6;

fn parse_meshes(ns: &str) -> Result<Vec<usize>> {
    let ns: Vec<usize> = ns
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad mesh size `{s}`"))))
        .collect::<Result<_>>()?;
    if let Some(n) = ns.iter().find(|&&n| n > MAX_N) {
        return Err(Error::InvalidArgument(format!("mesh size {n} is too large for the browser (max {MAX_N})")));
    }
    Ok(ns)
}

/// Convergence study of the manufactured problem, as a JSON report.
pub fn convergence_json(problem: &str, ns: &str, coefficient: &str) -> Result<String> {
    let kind: ProblemKind = problem.parse()?;
    let preset: CoefficientPreset = coefficient.parse()?;
    let report = convergence_study(&manufactured_solution(kind, preset), &parse_meshes(ns)?, &StudyOptions::default())?;
    Study::Convergence(report).to_json()
}

/// Inf-sup constants of a pairing, as a JSON report.
pub fn infsup_json(pair: &str, ns: &str) -> Result<String> {
    let pairing: Pairing = pair.parse()?;
    Study::InfSup(infsup_study(pairing, &parse_meshes(ns)?)?).to_json()
}

fn magnitude(e: &FieldEval) -> f64 {
    match e {
        FieldEval::Scalar { value, .. } => *value,
        FieldEval::Vector { value, .. } => value.iter().map(|v| v * v).sum::<f64>().sqrt(),
    }
}

/// Discrete and exact `u` (its magnitude for vector fields) on a
/// `resolution × resolution` grid of cell centres in the plane `z = const`,
/// row by row in `y`.
pub fn slice_json(problem: &str, n: usize, z: f64, resolution: usize) -> Result<String> {
    if n > MAX_N {
        return Err(Error::InvalidArgument(format!("mesh size {n} is too large for the browser (max {MAX_N})")));
    }
    if !(0.0..=1.0).contains(&z) || resolution == 0 || resolution > 256 {
        return Err(Error::InvalidArgument("need 0 <= z <= 1 and 1 <= resolution <= 256".into()));
    }
    let kind: ProblemKind = problem.parse()?;
    let p = manufactured_solution(kind, CoefficientPreset::Unit);
    let s = solve_on_mesh(&p, n, &StudyOptions::default())?;
    let mut discrete = Vec::with_capacity(resolution * resolution);
    let mut exact = Vec::with_capacity(resolution * resolution);
    for j in 0..resolution {
        for i in 0..resolution {
            let x = [(i as f64 + 0.5) / resolution as f64, (j as f64 + 0.5) / resolution as f64, z];
            let (cell, bary) =
                s.mesh.locate(&x).ok_or_else(|| Error::InvalidArgument(format!("point {x:?} is outside the mesh")))?;
            let uh = eval_field(s.handler(0), s.mesh.geometry(cell), cell, s.field(0), &bary)?;
            discrete.push(magnitude(&uh));
            exact.push(magnitude(&p.u.eval(&x)));
        }
    }
    let max_error = discrete.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(json!({
        "problem": kind.name(),
        "n": n,
        "z": z,
        "resolution": resolution,
        "dofs": s.system.dims(),
        "relative_residual": s.report.relative_residual,
        "discrete": discrete,
        "exact": exact,
        "max_error": max_error,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn convergence(problem: &str, ns: &str, coefficient: &str) -> std::result::Result<String, JsError> {
    convergence_json(problem, ns, coefficient).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn infsup(pair: &str, ns: &str) -> std::result::Result<String, JsError> {
    infsup_json(pair, ns).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn solution_slice(problem: &str, n: usize, z: f64, resolution: usize) -> std::result::Result<String, JsError> {
    slice_json(problem, n, z, resolution).map_err(|e| JsError::new(&e.to_string()))
}
