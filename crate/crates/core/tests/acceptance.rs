//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qes_core::criticality::{
    critical_table, last_place, real_root_count, CriticalPoint, DEFAULT_CRITICAL_TOL,
    REFERENCE_CRITICAL_VALUES,
};
use qes_core::qescore::{qes_eigenvalues, QuarticSpec};
use qes_core::ratpoly::{rat, ratio, round_dyadic, sturm_count, to_f64, Bound};
use qes_core::sextic::{sextic_char_poly, sextic_eigenvalues, SexticSpec};
use qes_core::shooting::{
    default_box, find_eigenvalues, sweep, EigenKind, SearchOptions, ShootingProblem, SweepRange,
};
use qes_core::verify::{commutator_check, equivalence_check, raw_identity, reduced_identity};

type Outcome = Result<String, String>;

fn within(label: &str, elapsed: Duration, budget: f64) -> Result<(), String> {
    if elapsed.as_secs_f64() < budget {
        Ok(())
    } else {
        Err(format!("{label} took {:.1}s, budget {budget}s", elapsed.as_secs_f64()))
    }
}

fn checks(list: Vec<qes_core::verify::Check>) -> Result<usize, String> {
    match list.iter().find(|c| !c.passed) {
        Some(c) => Err(format!("{}: {}", c.name, c.detail)),
        None => Ok(list.len()),
    }
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let n = checks((1..=5).map(raw_identity).collect())?;
    within("raw identities", t.elapsed(), 1.0)?;
    Ok(format!("{n} polynomials identical on their grids in {:.2}s", t.elapsed().as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let n = checks((1..=8).map(reduced_identity).collect())?;
    within("reduced identities", t.elapsed(), 2.0)?;
    Ok(format!("{n} polynomials identical, two realizations per K, in {:.2}s", t.elapsed().as_secs_f64()))
}

fn criterion_3(table: &[CriticalPoint], elapsed: Duration) -> Outcome {
    let mut worst: (f64, u32) = (0.0, 0);
    for ((j, k, f), cp) in REFERENCE_CRITICAL_VALUES.iter().zip(table) {
        assert_eq!(*j, cp.j);
        let dk = (cp.k_crit - k.parse::<f64>().unwrap()).abs() / last_place(k);
        let df = (cp.f_crit - f.parse::<f64>().unwrap()).abs() / last_place(f);
        if dk.max(df) > worst.0 {
            worst = (dk.max(df), *j);
        }
        if dk > 5.0 || df > 5.0 {
            return Err(format!("J={j}: K={} vs {k}, F={} vs {f}", cp.k_crit, cp.f_crit));
        }
    }
    within("table", elapsed, 30.0)?;
    Ok(format!(
        "J=2..29 within {:.2} units in the last place (worst J={}) in {:.1}s",
        worst.0,
        worst.1,
        elapsed.as_secs_f64()
    ))
}

fn criterion_4(table: &[CriticalPoint]) -> Outcome {
    let eps = ratio(1, 1000);
    let mut worst: f64 = 0.0;
    for cp in table {
        let (rq, rf) = cp.residuals;
        worst = worst.max(rq).max(rf);
        if !(rq < 1e-9 && rf < 1e-9) {
            return Err(format!("J={}: residuals {rq:e}, {rf:e}", cp.j));
        }
        // rounding moves K by ~1e-9, far inside the 1e-3 offset
        let k = round_dyadic(&cp.k_exact, 30);
        let above = real_root_count(cp.j, &(&k + &eps)).map_err(|e| e.to_string())?;
        let below = real_root_count(cp.j, &(&k - &eps)).map_err(|e| e.to_string())?;
        let j = cp.j as usize;
        if above.with_multiplicity != j || below.with_multiplicity + 2 != j {
            return Err(format!("J={}: {} real above, {} below", cp.j, above.with_multiplicity, below.with_multiplicity));
        }
    }
    Ok(format!("J=2..29: residuals <= {worst:.1e}; real count J above, J-2 below"))
}

fn criterion_5() -> Outcome {
    let c = commutator_check(12);
    let e = equivalence_check(10, 10, 0x5eed);
    checks(vec![c, e])?;
    Ok("relations exact for J<=12; generator and differential forms equal for J<=10 at 10 random (a, b)".into())
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let e = |j| sextic_eigenvalues(SexticSpec::new(j).unwrap(), 1e-14).map_err(|e| e.to_string());
    let close = |x: &[f64], y: &[f64]| x.len() == y.len() && x.iter().zip(y).all(|(a, b)| (a - b).abs() < 1e-12);
    let r8 = 8f64.sqrt();
    if e(1)? != vec![0.0] || !close(&e(2)?, &[-r8, r8]) || !close(&e(3)?, &[-8.0, 0.0, 8.0]) {
        return Err(format!("blocks: {:?} {:?} {:?}", e(1)?, e(2)?, e(3)?));
    }
    for j in 1..=20 {
        let p = sextic_char_poly(SexticSpec::new(j).unwrap());
        let n = sturm_count(&p, &Bound::NegInf, &Bound::PosInf).map_err(|e| e.to_string())?;
        if n != j as usize {
            return Err(format!("J={j}: {n} real roots"));
        }
    }
    within("sextic", t.elapsed(), 5.0)?;
    Ok(format!("J=1,2,3 exact to 1e-12, all real for J<=20, {:.2}s", t.elapsed().as_secs_f64()))
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let spec = QuarticSpec::new(3, rat(0), rat(1)).unwrap();
    let exact = qes_eigenvalues(&spec, 1e-14).map_err(|e| e.to_string())?.real_eigenvalues;
    let problem = ShootingProblem::quartic(spec);
    let options = SearchOptions {
        qes_seeds: false,
        ..SearchOptions::default()
    };
    let search_box = default_box(&problem, 5).map_err(|e| e.to_string())?;
    let report = find_eigenvalues(&problem, search_box, 5, &options).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (found, x) in report.eigenvalues.iter().zip(&exact) {
        let rel = (found.value - Complex64::new(*x, 0.0)).norm() / x.abs();
        worst = worst.max(rel);
        if rel > 1e-6 {
            return Err(format!("{} vs exact {x}", found.value));
        }
    }
    if report.eigenvalues.len() < 3 {
        return Err(format!("only {} eigenvalues found", report.eigenvalues.len()));
    }
    within("shooting", t.elapsed(), 60.0)?;
    Ok(format!(
        "unseeded search reproduces {exact:.6?} to {worst:.1e} relative in {:.1}s",
        t.elapsed().as_secs_f64()
    ))
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let range = SweepRange {
        lo: ratio(1, 5),
        hi: rat(2),
        step: ratio(1, 100),
    };
    let points = sweep(3, &rat(0), &range, 4, &SearchOptions::default()).map_err(|e| e.to_string())?;
    let boundary = ratio(3, 4);
    let (mut last_complex, mut first_all_real) = (f64::NEG_INFINITY, f64::INFINITY);
    for p in &points {
        let b = to_f64(&p.b);
        let report = p.report.as_ref().map_err(|e| format!("b={b}: {e}"))?;
        let qes: Vec<Complex64> = report.eigenvalues.iter().filter(|e| e.kind == EigenKind::Qes).map(|e| e.value).collect();
        if qes.len() != 3 {
            return Err(format!("b={b}: {} QES eigenvalues located", qes.len()));
        }
        let complex = qes.iter().filter(|z| z.im.abs() > 1e-4).count();
        if p.b > boundary {
            let top = qes.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            let lowest = report.eigenvalues.iter().filter(|e| e.kind == EigenKind::NonQes).all(|e| e.value.re > top);
            if complex != 0 || !lowest {
                return Err(format!("b={b}: {complex} complex QES values, lowest={lowest}"));
            }
            first_all_real = first_all_real.min(b);
        } else if p.b < boundary {
            if complex != 2 {
                return Err(format!("b={b}: {complex} complex QES values"));
            }
            last_complex = last_complex.max(b);
        }
    }
    let transition = 0.5 * (last_complex + first_all_real);
    if (transition - 0.75).abs() > 0.01 || first_all_real - last_complex > 0.03 {
        return Err(format!("transition between {last_complex} and {first_all_real}"));
    }
    within("sweep", t.elapsed(), 600.0)?;
    Ok(format!(
        "{} values of b: complex pair up to b={last_complex:.2}, real and lowest from b={first_all_real:.2}, transition at {transition:.3}, {:.0}s",
        points.len(),
        t.elapsed().as_secs_f64()
    ))
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let as_ = [ratio(-1, 1), ratio(-1, 2), rat(0), ratio(1, 2), rat(1)];
    let bs = [ratio(1, 2), rat(1), ratio(3, 2), rat(2), ratio(5, 2)];
    let options = SearchOptions {
        lattice_step: Some(3.0),
        ..SearchOptions::default()
    };
    let (mut checked, mut within_noise, mut findings) = (0usize, 0usize, Vec::new());
    for a in &as_ {
        for b in &bs {
            let spec = QuarticSpec::new(3, a.clone(), b.clone()).unwrap();
            let problem = ShootingProblem::quartic(spec);
            let search_box = default_box(&problem, 5).map_err(|e| e.to_string())?;
            match find_eigenvalues(&problem, search_box, 5, &options) {
                Ok(report) => {
                    for e in report.eigenvalues.iter().filter(|e| e.kind == EigenKind::NonQes) {
                        checked += 1;
                        let im = e.value.im.abs();
                        if im < 1e-7 {
                            continue;
                        }
                        let line = format!("a={a} b={b}: E={:.10} {:+.2e}i, uncertainty {:.1e}", e.value.re, e.value.im, e.uncertainty);
                        if im <= e.uncertainty {
                            within_noise += 1;
                            println!("    unresolved: {line}");
                        } else {
                            findings.push(line);
                        }
                    }
                }
                Err(e) => findings.push(format!("a={a} b={b}: search failed: {e}")),
            }
        }
    }
    for f in &findings {
        println!("    finding: {f}");
    }
    Ok(format!(
        "report only: {checked} non-QES eigenvalues on a 5x5 (a, b) grid; {} with |Im E| >= 1e-7 beyond their uncertainty, {within_noise} more within it; {:.0}s",
        findings.len(),
        t.elapsed().as_secs_f64()
    ))
}

fn criterion_10() -> Outcome {
    let spec = QuarticSpec::new(3, rat(0), rat(1)).unwrap();
    let mut spectra: Vec<Vec<Complex64>> = Vec::new();
    for deg in [-20.0, -30.0, -40.0] {
        let theta = deg * PI / 180.0;
        let problem = ShootingProblem::quartic(spec.clone())
            .with_angles(theta, -PI - theta)
            .map_err(|e| e.to_string())?;
        let search_box = default_box(&problem, 5).map_err(|e| e.to_string())?;
        let report = find_eigenvalues(&problem, search_box, 5, &SearchOptions::default()).map_err(|e| e.to_string())?;
        spectra.push(report.eigenvalues.iter().map(|e| e.value).collect());
    }
    let mut worst: f64 = 0.0;
    for s in &spectra[1..] {
        if s.len() != spectra[0].len() {
            return Err("different numbers of eigenvalues".into());
        }
        for (x, y) in s.iter().zip(&spectra[0]) {
            worst = worst.max((x - y).norm());
        }
    }
    if worst >= 1e-8 {
        return Err(format!("largest difference {worst:e}"));
    }
    Ok(format!("lowest {} eigenvalues agree to {worst:.1e}", spectra[0].len()))
}

fn run(n: usize, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
    match outcome {
        Ok(detail) => {
            println!("criterion {n:>2}: PASS  {detail}");
            true
        }
        Err(detail) => {
            println!("criterion {n:>2}: FAIL  {detail}");
            false
        }
    }
}

fn main() {
    let t = Instant::now();
    let table: Vec<CriticalPoint> = critical_table(2..=29, DEFAULT_CRITICAL_TOL)
        .into_iter()
        .filter_map(|r| r.ok())
        .collect();
    let table_time = t.elapsed();
    let complete = table.len() == 28;
    let results = [
        run(1, criterion_1),
        run(2, criterion_2),
        run(3, || if complete { criterion_3(&table, table_time) } else { Err("solver failed for some J".into()) }),
        run(4, || if complete { criterion_4(&table) } else { Err("solver failed for some J".into()) }),
        run(5, criterion_5),
        run(6, criterion_6),
        run(7, criterion_7),
        run(8, criterion_8),
        run(9, criterion_9),
        run(10, criterion_10),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
