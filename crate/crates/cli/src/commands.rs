use clap::ValueEnum;
use num_complex::Complex64;
use qes_core::criticality::{critical_table, DEFAULT_CRITICAL_TOL};
use qes_core::qescore::{build_operator, qes_eigenvalues, to_reduced, QuarticSpec};
use qes_core::ratpoly::{
    format_rational, parse_rational, terminating_decimal, to_f64, Poly, Rational, DEFAULT_REFINE_TOL,
};
use qes_core::sextic::{sextic_char_poly, sextic_eigenvalues, SexticSpec};
use qes_core::shooting::{self, default_box, find_eigenvalues, SearchOptions, ShootingProblem, SweepRange};
use qes_core::verify::run_all;
use serde_json::{json, Map, Value};

use crate::output::{exact, float, float_text, Record, Table};
use crate::{Failure, Outcome, Params};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolyForm {
    Raw,
    Reduced,
}

fn fraction(name: &str, text: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(|_| Failure::Usage(format!("--{name}: not an exact fraction: {text:?}")))
}

fn spec(p: &Params) -> Result<QuarticSpec, Failure> {
    let (a, b) = (fraction("a", &p.a)?, fraction("b", &p.b)?);
    Ok(QuarticSpec::new(p.j, a, b)?)
}

fn tolerance(tol: Option<f64>, default: f64) -> Result<f64, Failure> {
    match tol {
        None => Ok(default),
        Some(t) if t > 0.0 && t < 1.0 => Ok(t),
        Some(t) => Err(Failure::Usage(format!("--tol must lie in (0, 1), got {t}"))),
    }
}

/// Exact values print as decimals when they terminate.
fn decimal(x: &Rational) -> String {
    terminating_decimal(x).unwrap_or_else(|| float_text(to_f64(x)))
}

fn coefficients(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(exact).collect())
}

fn poly_table(p: &Poly) -> Table {
    let mut t = Table::new(&["power", "coefficient"]);
    for (k, c) in p.coeffs().iter().enumerate() {
        t.push(vec![k.to_string(), format_rational(c)]);
    }
    t
}

fn complex(z: Complex64) -> Value {
    json!({ "re": float(z.re), "im": float(z.im) })
}

fn spec_params(r: &mut Record, s: &QuarticSpec) {
    r.param("J", s.j().into());
    r.param("a", exact(s.a()));
    r.param("b", exact(s.b()));
}

fn ok(record: Record) -> Result<Outcome, Failure> {
    Ok(Outcome { record, failure: None })
}

pub fn qpoly(p: &Params, form: PolyForm) -> Result<Outcome, Failure> {
    let s = spec(p)?;
    let raw = build_operator(&s).char_poly();
    let mut r = Record::new("qpoly");
    spec_params(&mut r, &s);
    let (poly, variable) = match form {
        PolyForm::Raw => (raw, "E"),
        PolyForm::Reduced => (to_reduced(&raw, &s), "F"),
    };
    r.param("form", if form == PolyForm::Raw { "raw" } else { "reduced" }.into());
    let mut result = Map::new();
    result.insert("variable".into(), variable.into());
    result.insert("degree".into(), poly.degree().unwrap_or(0).into());
    result.insert("coefficients".into(), coefficients(&poly));
    if form == PolyForm::Reduced {
        result.insert("K".into(), exact(&s.k()));
        result.insert("energy_shift".into(), exact(&s.energy_shift()));
        r.notes.push(format!("K = {}, E = F + {}", format_rational(&s.k()), format_rational(&s.energy_shift())));
    }
    r.result = Value::Object(result);
    r.table = poly_table(&poly);
    ok(r)
}

pub fn roots(p: &Params, tol: Option<f64>) -> Result<Outcome, Failure> {
    let s = spec(p)?;
    let tol = tolerance(tol, DEFAULT_REFINE_TOL)?;
    let q = qes_eigenvalues(&s, tol)?;
    let mut r = Record::new("roots");
    spec_params(&mut r, &s);
    r.param("tol", json!(tol));
    let intervals: Vec<Value> = q
        .isolation
        .intervals
        .iter()
        .map(|iv| json!({ "lo": exact(&iv.lo), "hi": exact(&iv.hi), "multiplicity": iv.multiplicity }))
        .collect();
    let all = q.all();
    r.result = json!({
        "char_poly": coefficients(&q.char_poly),
        "all_real": q.is_all_real(),
        "real_intervals": intervals,
        "eigenvalues": all.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
    });
    let mut t = Table::new(&["index", "re_E", "im_E"]);
    for (i, z) in all.iter().enumerate() {
        t.push(vec![i.to_string(), float_text(z.re), float_text(z.im)]);
    }
    r.table = t;
    ok(r)
}

fn j_range(text: &str) -> Result<(u32, u32), Failure> {
    let bad = || Failure::Usage(format!("--J: expected N or LO..HI, got {text:?}"));
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo.trim(), hi.trim().trim_start_matches('=')),
        None => (text.trim(), text.trim()),
    };
    let lo: u32 = lo.parse().map_err(|_| bad())?;
    let hi: u32 = hi.parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    if lo < 2 {
        return Err(Failure::Usage(format!(
            "J={lo} has a single QES level and no critical point; J must be >= 2"
        )));
    }
    Ok((lo, hi))
}

pub fn critical(j: &str, tol: Option<f64>) -> Result<Outcome, Failure> {
    let (lo, hi) = j_range(j)?;
    let tol = tolerance(tol, DEFAULT_CRITICAL_TOL)?;
    let mut r = Record::new("critical");
    r.param("J", format!("{lo}..{hi}").into());
    r.param("tol", json!(tol));
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut t = Table::new(&["J", "K_crit", "F_crit"]);
    for (j, res) in (lo..=hi).zip(critical_table(lo..=hi, tol)) {
        match res {
            Ok(cp) => {
                t.push(vec![j.to_string(), float_text(cp.k_crit), float_text(cp.f_crit)]);
                rows.push(json!({
                    "J": j,
                    "K_crit": float(cp.k_crit),
                    "F_crit": float(cp.f_crit),
                    "K_exact": exact(&cp.k_exact),
                    "F_exact": exact(&cp.f_exact),
                    "residual_q": float(cp.residuals.0),
                    "residual_dq": float(cp.residuals.1),
                    "polished": cp.polished,
                }));
            }
            Err(e) => failures.push(format!("J={j}: {e}")),
        }
    }
    r.result = json!({ "rows": rows, "failures": failures });
    r.table = t;
    let failure = (!failures.is_empty()).then(|| Failure::Numerical(failures.join("; ")));
    r.notes.extend(failures);
    Ok(Outcome { record: r, failure })
}

pub struct SpectrumArgs {
    pub count: usize,
    pub theta: f64,
    pub qes_seeds: bool,
    pub lattice: Option<f64>,
    pub tol: Option<f64>,
}

fn eigen_rows(report: &shooting::SpectrumReport) -> Vec<Value> {
    report
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, e)| {
            json!({
                "index": i,
                "kind": e.kind.name(),
                "re": float(e.value.re),
                "im": float(e.value.im),
                "residual": float(e.residual),
                "uncertainty": float(e.uncertainty),
            })
        })
        .collect()
}

pub fn spectrum(p: &Params, args: &SpectrumArgs) -> Result<Outcome, Failure> {
    let s = spec(p)?;
    if args.count == 0 {
        return Err(Failure::Usage("--count must be >= 1".into()));
    }
    let theta = args.theta.to_radians();
    let problem = ShootingProblem::quartic(s.clone())
        .with_angles(theta, -std::f64::consts::PI - theta)?
        .with_ode_tol(tolerance(args.tol, shooting::DEFAULT_ODE_TOL)?)?;
    let options = SearchOptions {
        qes_seeds: args.qes_seeds,
        lattice_step: args.lattice,
        ..SearchOptions::default()
    };
    let search_box = default_box(&problem, args.count)?;
    let report = find_eigenvalues(&problem, search_box, args.count, &options)?;

    let mut r = Record::new("spectrum");
    spec_params(&mut r, &s);
    r.param("count", args.count.into());
    r.param("theta_deg", json!(args.theta));
    r.param("ode_tol", json!(report.ode_tol));
    r.param("qes_seeds", args.qes_seeds.into());
    let b = report.search_box;
    r.result = json!({
        "eigenvalues": eigen_rows(&report),
        "qes_values": report.qes_values.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
        "search_box": { "re": [float(b.re_lo), float(b.re_hi)], "im": [float(b.im_lo), float(b.im_hi)] },
        "r_max": float(report.r_max),
        "w_evaluations": report.diagnostics.w_evaluations,
        "warning": report.warning,
    });
    let mut t = Table::new(&["index", "kind", "re_E", "im_E", "residual", "uncertainty"]);
    for (i, e) in report.eigenvalues.iter().enumerate() {
        t.push(vec![
            i.to_string(),
            e.kind.name().into(),
            float_text(e.value.re),
            float_text(e.value.im),
            format!("{:.3e}", e.residual),
            format!("{:.1e}", e.uncertainty),
        ]);
    }
    r.table = t;
    if let Some(w) = &report.warning {
        r.notes.push(format!("warning: {w}"));
        eprintln!("qes: warning: {w}");
    }
    ok(r)
}

fn b_range(text: &str) -> Result<SweepRange, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::Usage(format!("--b-range: expected lo:hi:step, got {text:?}")));
    }
    let range = SweepRange {
        lo: fraction("b-range", parts[0])?,
        hi: fraction("b-range", parts[1])?,
        step: fraction("b-range", parts[2])?,
    };
    range.points()?;
    Ok(range)
}

pub fn sweep(j: u32, a: &str, range: &str, count: usize, tol: Option<f64>) -> Result<Outcome, Failure> {
    let a = fraction("a", a)?;
    let range = b_range(range)?;
    if tol.is_some() {
        return Err(Failure::Usage("sweep runs at the default ODE tolerance; --tol is not supported".into()));
    }
    if count == 0 {
        return Err(Failure::Usage("--count must be >= 1".into()));
    }
    QuarticSpec::new(j, a.clone(), range.lo.clone())?;
    let points = shooting::sweep(j, &a, &range, count, &SearchOptions::default())?;

    let mut r = Record::new("sweep");
    r.param("J", j.into());
    r.param("a", exact(&a));
    r.param("b_lo", exact(&range.lo));
    r.param("b_hi", exact(&range.hi));
    r.param("b_step", exact(&range.step));
    r.param("count", count.into());
    let mut t = Table::new(&["b", "index", "kind", "re_E", "im_E", "residual"]);
    let mut json_points = Vec::new();
    let mut failures = Vec::new();
    for p in &points {
        let b = decimal(&p.b);
        match &p.report {
            Ok(report) => {
                for (i, e) in report.eigenvalues.iter().enumerate() {
                    t.push(vec![
                        b.clone(),
                        i.to_string(),
                        e.kind.name().into(),
                        float_text(e.value.re),
                        float_text(e.value.im),
                        format!("{:.3e}", e.residual),
                    ]);
                }
                json_points.push(json!({ "b": exact(&p.b), "eigenvalues": eigen_rows(report), "warning": report.warning }));
            }
            Err(e) => {
                failures.push(format!("b={b}: {e}"));
                json_points.push(json!({ "b": exact(&p.b), "error": e }));
            }
        }
    }
    r.result = json!({ "points": json_points });
    r.table = t;
    let failure = (!failures.is_empty()).then(|| Failure::Numerical(failures.join("; ")));
    r.notes.extend(failures);
    Ok(Outcome { record: r, failure })
}

pub fn sextic(j: u32, tol: Option<f64>) -> Result<Outcome, Failure> {
    let s = SexticSpec::new(j)?;
    let e = sextic_eigenvalues(s, tolerance(tol, DEFAULT_REFINE_TOL)?)?;
    let mut r = Record::new("sextic");
    r.param("J", j.into());
    r.result = json!({
        "char_poly": coefficients(&sextic_char_poly(s)),
        "eigenvalues": e.iter().map(|x| float(*x)).collect::<Vec<_>>(),
    });
    let mut t = Table::new(&["index", "E"]);
    for (i, x) in e.iter().enumerate() {
        t.push(vec![i.to_string(), float_text(*x)]);
    }
    r.table = t;
    ok(r)
}

pub fn verify() -> Result<Outcome, Failure> {
    let checks = run_all();
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let mut r = Record::new("verify");
    r.result = json!({
        "passed": failed.is_empty(),
        "checks": checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect::<Vec<_>>(),
    });
    let mut t = Table::new(&["check", "status", "detail"]);
    for c in &checks {
        t.push(vec![c.name.clone(), if c.passed { "ok" } else { "FAIL" }.into(), c.detail.clone()]);
    }
    r.table = t;
    r.notes.push(format!("{} of {} checks passed", checks.len() - failed.len(), checks.len()));
    let failure = (!failed.is_empty()).then(|| Failure::Verification(format!("failed: {}", failed.join(", "))));
    Ok(Outcome { record: r, failure })
}
