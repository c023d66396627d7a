//! Command execution and output formatting.

use std::fmt::Write as _;
use std::path::Path;

use polyvortex_core::corotating::{
    corotating_absolute, corotating_nested, corotating_single, corotating_to_json, CorotatingPoint,
};
use polyvortex_core::dynamics::{classify, EquilibriumReport};
use polyvortex_core::nested::{
    absolute_equilibrium, classify_regime, scan_regimes, scan_to_csv, solve_nested,
    RegimeClassification, RegimeScanRow, SCAN_CSV_HEADER,
};
use polyvortex_core::plane::to_pair;
use polyvortex_core::polygon::{circulant_spectrum, vorticity_solution_space, PolygonRing};
use polyvortex_core::{conserved, fmt_f64, integrate, Error, PlanePoint, VortexSystem};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, Format, Plan, ValidationError};

#[derive(Debug)]
pub enum Failure {
    /// Bad input: exit status 2.
    Validation(String),
    /// The computation itself failed: exit status 3.
    Computation(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Computation(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Computation(m) => m,
        }
    }
}

impl From<ValidationError> for Failure {
    fn from(e: ValidationError) -> Self {
        Failure::Validation(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSystem(_) | Error::InvalidParameter(_) | Error::CloseVortices { .. } => {
                Failure::Validation(e.to_string())
            }
            _ => Failure::Computation(e.to_string()),
        }
    }
}

fn read_system(path: &Path) -> Result<VortexSystem, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    VortexSystem::from_json(&text)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output values serialize")
}

fn pair_or_null(p: Option<PlanePoint>) -> Value {
    p.map_or(Value::Null, |p| json!(to_pair(p)))
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn report_json(r: &EquilibriumReport) -> Value {
    json!({
        "kind": r.kind.label(),
        "omega": r.omega,
        "translation_velocity": pair_or_null(r.translation_velocity),
        "center": pair_or_null(r.center),
        "residual": r.residual,
        "max_speed": r.max_speed,
    })
}

const REPORT_CSV_HEADER: &str = "kind,omega,residual,max_speed,center_x,center_y,velocity_x,velocity_y";

fn report_csv_row(r: &EquilibriumReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.kind.label(),
        fmt_f64(r.omega),
        fmt_f64(r.residual),
        fmt_f64(r.max_speed),
        opt(r.center.map(|c| c.re)),
        opt(r.center.map(|c| c.im)),
        opt(r.translation_velocity.map(|v| v.re)),
        opt(r.translation_velocity.map(|v| v.im)),
    )
}

fn regime_json(c: &RegimeClassification) -> Value {
    json!({
        "n": c.n,
        "gamma_ratio": c.gamma_ratio,
        "regime_label": c.regime.label(),
        "aligned_predicted": c.aligned.to_string(),
        "staggered_predicted": c.staggered.to_string(),
        "mu_n": c.mu_n,
        "lambda_n": c.lambda_n,
    })
}

fn scan_row_json(row: &RegimeScanRow) -> Value {
    let mut v = regime_json(&row.classification);
    v["aligned_numeric"] = json!(row.aligned_numeric);
    v["staggered_numeric"] = json!(row.staggered_numeric);
    v
}

const POINTS_CSV_HEADER: &str = "ray,K,radius,x,y,residual";

fn points_csv(out: &mut String, prefix: &str, points: &[CorotatingPoint]) {
    for p in points {
        let _ = writeln!(
            out,
            "{prefix}{},{},{},{},{},{}",
            p.ray.label(),
            p.k,
            fmt_f64(p.radius),
            fmt_f64(p.position.re),
            fmt_f64(p.position.im),
            fmt_f64(p.residual)
        );
    }
}

/// Run a validated plan and return the artifact text, newline-terminated.
pub fn execute(plan: &Plan) -> Result<String, Failure> {
    let csv = plan.format == Format::Csv;
    let mut out = match &plan.command {
        Command::Verify { input, tol } => {
            let s = read_system(input)?;
            let r = classify(&s, *tol);
            if csv {
                format!("{REPORT_CSV_HEADER}\n{}", report_csv_row(&r))
            } else {
                let mut v = report_json(&r);
                v["conserved"] = serde_json::to_value(conserved(&s)).expect("finite");
                to_json(&v)
            }
        }
        Command::SolveNested { n, gamma1, gamma2, s1 } => {
            let result = solve_nested(*n, *gamma1, *gamma2, *s1)?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            if csv {
                let mut out = format!("alignment,x,{REPORT_CSV_HEADER}\n");
                for sol in &result.solutions {
                    let _ = writeln!(
                        out,
                        "{},{},{}",
                        sol.alignment.label(),
                        fmt_f64(sol.x),
                        report_csv_row(&sol.report)
                    );
                }
                out
            } else {
                let solutions: Vec<Value> = result
                    .solutions
                    .iter()
                    .map(|sol| {
                        let mut v = report_json(&sol.report);
                        v["alignment"] = json!(sol.alignment.label());
                        v["x"] = json!(sol.x);
                        v["system"] = serde_json::to_value(&sol.system).expect("finite");
                        v
                    })
                    .collect();
                to_json(&json!({
                    "n": n,
                    "gamma1": gamma1,
                    "gamma2": gamma2,
                    "s1": to_pair(*s1),
                    "solutions": solutions,
                    "warnings": result.warnings,
                }))
            }
        }
        Command::ClassifyRegime { n, ratio } => {
            let c = classify_regime(*n, *ratio)?;
            if csv {
                format!(
                    "n,gamma_ratio,regime_label,aligned_predicted,staggered_predicted,mu_n\n{},{},{},{},{},{}",
                    c.n,
                    fmt_f64(c.gamma_ratio),
                    c.regime.label(),
                    c.aligned,
                    c.staggered,
                    fmt_f64(c.mu_n)
                )
            } else {
                to_json(&regime_json(&c))
            }
        }
        Command::Scan { n, ratios } => {
            let rows = scan_regimes(*n, ratios)?;
            if csv {
                scan_to_csv(&rows)
            } else {
                debug_assert!(SCAN_CSV_HEADER.starts_with("n,"));
                to_json(&rows.iter().map(scan_row_json).collect::<Vec<_>>())
            }
        }
        Command::CorotateSingle { n, s1, gamma } => {
            let generator = PolygonRing::equal(*n, *s1, *gamma)?.to_system()?;
            let points = corotating_single(*n, *s1, *gamma)?;
            if csv {
                let mut out = format!("{POINTS_CSV_HEADER}\n");
                points_csv(&mut out, "", &points);
                out
            } else {
                corotating_to_json(&generator, &points)
            }
        }
        Command::CorotateNested { n, gamma1, gamma2, s1, alignment } => {
            let result = solve_nested(*n, *gamma1, *gamma2, *s1)?;
            let mut sets = Vec::new();
            for sol in result.solutions.iter().filter(|s| s.alignment == *alignment) {
                sets.push((sol.x, &sol.system, corotating_nested(&sol.config)?));
            }
            if csv {
                let mut out = format!("x,{POINTS_CSV_HEADER}\n");
                for (x, _, points) in &sets {
                    points_csv(&mut out, &format!("{},", fmt_f64(*x)), points);
                }
                out
            } else {
                let items: Vec<String> = sets
                    .iter()
                    .map(|(_, system, points)| corotating_to_json(system, points))
                    .collect();
                format!("[{}]", items.join(","))
            }
        }
        Command::CorotateAbsolute { n, gamma1 } => {
            let eq = absolute_equilibrium(*n, *gamma1)?;
            let points = [corotating_absolute(*n, *gamma1)?];
            if csv {
                let mut out = format!("{POINTS_CSV_HEADER}\n");
                points_csv(&mut out, "", &points);
                out
            } else {
                corotating_to_json(&eq.system, &points)
            }
        }
        Command::Simulate { input, t_end, rel_tol } => {
            let s = read_system(input)?;
            let traj = integrate(&s, *t_end, *rel_tol)?;
            if csv {
                traj.to_csv()
            } else {
                let states: Vec<Vec<[f64; 2]>> = traj
                    .states
                    .iter()
                    .map(|s| s.positions().iter().map(|&p| to_pair(p)).collect())
                    .collect();
                to_json(&json!({
                    "vorticities": s.vorticities(),
                    "times": traj.times,
                    "states": states,
                    "max_hamiltonian_drift": traj.max_hamiltonian_drift,
                    "max_distance_drift": traj.max_distance_drift,
                    "rejected_steps": traj.rejected_steps,
                }))
            }
        }
        Command::Spectrum { n, kind } => {
            let spec = circulant_spectrum(*n, *kind)?;
            if csv {
                let mut out = String::from("k,eigenvalue,closed_form\n");
                for (k, (e, c)) in spec.eigenvalues.iter().zip(&spec.closed_form).enumerate() {
                    let _ = writeln!(out, "{k},{},{}", fmt_f64(*e), fmt_f64(*c));
                }
                out
            } else {
                spec.to_json()
            }
        }
        Command::Rigidity { n, case } => {
            let space = vorticity_solution_space(*n, *case)?;
            if csv {
                let mut out = String::from("vector");
                for k in 0..*n {
                    let _ = write!(out, ",gamma_{k}");
                }
                out.push('\n');
                for (i, b) in space.basis.iter().enumerate() {
                    out.push_str(&i.to_string());
                    for x in b {
                        out.push(',');
                        out.push_str(&fmt_f64(*x));
                    }
                    out.push('\n');
                }
                out
            } else {
                to_json(&space)
            }
        }
    };
    if !out.ends_with('\n') {
        out.push('\n');
    }
    Ok(out)
}
