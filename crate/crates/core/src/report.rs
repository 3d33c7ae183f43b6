//! CSV and JSON writers for study results, and the windows checked by
//! `ordfem --check`.
//!
//! Floats in CSV are written with 17 significant digits; JSON uses the
//! shortest representation that round-trips. Every JSON document carries a
//! `"schema"` field.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::{ConvergenceReport, DecompositionStudy, HypothesesStudy, InfSupStudy};
use crate::assembly::ProblemKind;
use crate::{Error, Result};

pub const SCHEMA: &str = "ordfem/1";

/// Accepted window for fitted convergence rates.
pub const RATE_WINDOW: (f64, f64) = (0.7, 1.3);
pub const INFSUP_DRIFT: f64 = 0.25;
pub const DECOMPOSITION_DRIFT: f64 = 0.30;
pub const HYPOTHESES_DRIFT: f64 = 0.30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidArgument(format!("unknown format `{s}` (expected csv or json)"))),
        }
    }
}

/// The result of any study the command line can run.
#[derive(Clone, Debug, PartialEq)]
pub enum Study {
    Convergence(ConvergenceReport),
    InfSup(InfSupStudy),
    Decomposition(DecompositionStudy),
    Hypotheses(HypothesesStudy),
}

impl Study {
    pub fn name(&self) -> &'static str {
        match self {
            Study::Convergence(_) => "convergence",
            Study::InfSup(_) => "infsup",
            Study::Decomposition(_) => "decomposition",
            Study::Hypotheses(_) => "hypotheses",
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => Ok(self.to_csv()),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Doc<'a, T: Serialize> {
            schema: &'static str,
            study: &'static str,
            #[serde(flatten)]
            body: &'a T,
        }
        let name = self.name();
        let out = match self {
            Study::Convergence(r) => serde_json::to_string_pretty(&Doc { schema: SCHEMA, study: name, body: r }),
            Study::InfSup(r) => serde_json::to_string_pretty(&Doc { schema: SCHEMA, study: name, body: r }),
            Study::Decomposition(r) => serde_json::to_string_pretty(&Doc { schema: SCHEMA, study: name, body: r }),
            Study::Hypotheses(r) => serde_json::to_string_pretty(&Doc { schema: SCHEMA, study: name, body: r }),
        };
        out.map(|s| s + "\n").map_err(|e| Error::Backend(format!("json serialization failed: {e}")))
    }

    pub fn to_csv(&self) -> String {
        match self {
            Study::Convergence(r) => convergence_csv(r),
            Study::InfSup(r) => infsup_csv(r),
            Study::Decomposition(r) => decomposition_csv(r),
            Study::Hypotheses(r) => hypotheses_csv(r),
        }
    }

    /// Descriptions of every acceptance window the study misses.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let drift = |out: &mut Vec<String>, what: &str, d: f64, max: f64| {
            if !(d < max) {
                out.push(format!("{what} drifts by {d:.3}, limit {max}"));
            }
        };
        match self {
            Study::Convergence(r) => {
                let (lo, hi) = RATE_WINDOW;
                for (what, rate) in [("u", r.rates.err_u), ("phi", r.rates.err_phi)] {
                    if !(lo..=hi).contains(&rate) {
                        out.push(format!("rate of {what} is {rate:.3}, outside [{lo}, {hi}]"));
                    }
                }
            }
            Study::InfSup(r) => {
                for (n, b) in r.ns.iter().zip(&r.betas) {
                    if !(*b > 0.0) {
                        out.push(format!("inf-sup constant at n={n} is {b}"));
                    }
                }
                drift(&mut out, "inf-sup constant", r.drift, INFSUP_DRIFT);
            }
            Study::Decomposition(r) => {
                for d in &r.reports {
                    if d.reconstructed != d.samples {
                        out.push(format!("{} of {} targets reconstructed", d.reconstructed, d.samples));
                    }
                }
                drift(&mut out, "stability ratio", r.drift, DECOMPOSITION_DRIFT);
            }
            Study::Hypotheses(r) => {
                for h in &r.reports {
                    if !(h.interpolation.exact > 0.0) || !(h.coercivity.value > 0.0) {
                        out.push(format!("non-positive constant at n={}", h.n));
                    }
                }
                drift(&mut out, "interpolation bound", r.bound_drift, HYPOTHESES_DRIFT);
                drift(&mut out, "kernel coercivity", r.coercivity_drift, HYPOTHESES_DRIFT);
            }
        }
        out
    }
}

/// `{:.16e}`, or an empty field for missing and non-finite values.
pub fn csv_float(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:.16e}"),
        _ => String::new(),
    }
}

fn aux_name(kind: ProblemKind) -> &'static str {
    match kind {
        ProblemKind::BiLaplacian => "zeta",
        ProblemKind::QuadCurl => "sigma",
    }
}

/// One row per mesh and a final `rate` row.
pub fn convergence_csv(r: &ConvergenceReport) -> String {
    let aux = aux_name(r.problem);
    let unorm = match r.problem {
        ProblemKind::BiLaplacian => "h1",
        ProblemKind::QuadCurl => "hcurl",
    };
    let mut s = format!(
        "n,h,dof_u,dof_phi,dof_{aux},err_u_{unorm},err_phi_h1,err_{aux}_ref,err_{aux}_cauchy,\
         relative_residual,constraint_residual,iterations\n"
    );
    for row in &r.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            row.n,
            csv_float(Some(row.h)),
            row.dofs[0],
            row.dofs[1],
            row.dofs[2],
            csv_float(Some(row.err_u)),
            csv_float(Some(row.err_phi)),
            csv_float(row.err_aux_ref),
            csv_float(row.err_aux_cauchy),
            csv_float(Some(row.relative_residual)),
            csv_float(Some(row.constraint_residual)),
            row.iterations.map(|i| i.to_string()).unwrap_or_default(),
        );
    }
    let _ = writeln!(
        s,
        "rate,,,,,{},{},{},{},,,",
        csv_float(Some(r.rates.err_u)),
        csv_float(Some(r.rates.err_phi)),
        csv_float(r.rates.err_aux_ref),
        csv_float(r.rates.err_aux_cauchy),
    );
    s
}

pub fn infsup_csv(r: &InfSupStudy) -> String {
    let mut s = String::from("pair,n,beta,kernel_dim\n");
    for ((n, b), k) in r.ns.iter().zip(&r.betas).zip(&r.kernel_dims) {
        let _ = writeln!(s, "{},{n},{},{k}", r.pair, csv_float(Some(*b)));
    }
    let _ = writeln!(s, "{},drift,{},", r.pair, csv_float(Some(r.drift)));
    s
}

pub fn decomposition_csv(r: &DecompositionStudy) -> String {
    let mut s = String::from("pair,n,samples,reconstructed,max_ratio,min_ratio,max_residual,exact_constant\n");
    for d in &r.reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.pair,
            d.n.map(|n| n.to_string()).unwrap_or_default(),
            d.samples,
            d.reconstructed,
            csv_float(Some(d.max_ratio)),
            csv_float(Some(d.min_ratio)),
            csv_float(Some(d.max_residual)),
            csv_float(Some(d.exact_constant)),
        );
    }
    let _ = writeln!(s, "{},drift,,,{},,,", r.pair, csv_float(Some(r.drift)));
    s
}

pub fn hypotheses_csv(r: &HypothesesStudy) -> String {
    let mut s = String::from("problem,n,bound_exact,bound_sampled,coercivity,kernel_dim,infsup,infsup_kernel_dim\n");
    for h in &r.reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.problem,
            h.n,
            csv_float(Some(h.interpolation.exact)),
            csv_float(Some(h.interpolation.sampled)),
            csv_float(Some(h.coercivity.value)),
            h.coercivity.kernel_dim,
            csv_float(Some(h.infsup.beta)),
            h.infsup.kernel_dim,
        );
    }
    let _ = writeln!(
        s,
        "{},drift,{},,{},,{},",
        r.problem,
        csv_float(Some(r.bound_drift)),
        csv_float(Some(r.coercivity_drift)),
        csv_float(Some(r.infsup_drift)),
    );
    s
}
