//! Locating zeros of the matching determinant.

use std::cell::Cell;

use num_complex::Complex64;

use super::{wronskian_mismatch, Mismatch, Model, ShootingProblem};
use crate::error::{QesError, Result};
use crate::qescore::{qes_eigenvalues, QuarticSpec};
use crate::ratpoly::{to_f64, Rational};
use crate::sextic::sextic_eigenvalues;

/// Roots closer than this are the same root (unless a QES multiplicity says otherwise).
pub const DEDUPE_DISTANCE: f64 = 1e-6;
/// Relative distance at which a shooting root is identified with a QES root.
pub const QES_MATCH_TOL: f64 = 1e-6;

const SECANT_MAX_ITERATIONS: usize = 60;
const SECANT_MAX_STEP: f64 = 2.0;
const REAL_REFINE_ITERATIONS: usize = 100;
/// Residual accepted when re-converging at the looser tolerance.
const UNCERTAINTY_ACCEPT: f64 = 1e-6;

/// Closed rectangle in the complex energy plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBox {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl SearchBox {
    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Result<Self> {
        let ok = [re_lo, re_hi, im_lo, im_hi].iter().all(|v| v.is_finite());
        if !ok || re_lo >= re_hi || im_lo > im_hi {
            return Err(QesError::InvalidParameter(format!(
                "empty search box [{re_lo}, {re_hi}] x [{im_lo}, {im_hi}]"
            )));
        }
        Ok(SearchBox {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        })
    }

    /// `Re E in [e_min - 5, e_min + 10 count]`, `Im E in [-5, 5]`.
    pub fn around(e_min: f64, count: usize) -> Self {
        SearchBox {
            re_lo: e_min - 5.0,
            re_hi: e_min + 10.0 * count.max(1) as f64,
            im_lo: -5.0,
            im_hi: 5.0,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_lo && z.re <= self.re_hi && z.im >= self.im_lo && z.im <= self.im_hi
    }

    /// `contains` for the box grown by `margin` on every side.
    fn contains_loosely(&self, z: Complex64, margin: f64) -> bool {
        z.re >= self.re_lo - margin
            && z.re <= self.re_hi + margin
            && z.im >= self.im_lo - margin
            && z.im <= self.im_hi + margin
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    /// Start from the exactly known QES values.
    pub qes_seeds: bool,
    /// Additional starting points (e.g. the previous sweep point).
    pub extra_seeds: Vec<Complex64>,
    /// Grid spacing of the real-axis sign scan; `None` disables the scan.
    pub scan_step: Option<f64>,
    /// Spacing of an off-axis seed lattice; `None` disables it.
    pub lattice_step: Option<f64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            qes_seeds: true,
            extra_seeds: Vec::new(),
            scan_step: Some(0.25),
            lattice_step: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EigenKind {
    Qes,
    NonQes,
}

impl EigenKind {
    pub fn name(self) -> &'static str {
        match self {
            EigenKind::Qes => "qes",
            EigenKind::NonQes => "nonqes",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub kind: EigenKind,
    /// Normalized `|W|` at `value`.
    pub residual: f64,
    /// Distance to the root re-converged at ten times the ODE tolerance.
    /// Integration errors scale about linearly with the tolerance, so this
    /// overestimates the error of `value`; infinite if the re-run failed.
    pub uncertainty: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub w_evaluations: usize,
    pub ode_steps: usize,
    pub rescales: usize,
    pub secant_runs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Eigenvalue>,
    /// Exactly known QES values used for labelling (empty for none).
    pub qes_values: Vec<Complex64>,
    pub model: Model,
    pub search_box: SearchBox,
    pub requested: usize,
    pub theta_right: f64,
    pub theta_left: f64,
    pub r_max: f64,
    pub ode_tol: f64,
    pub diagnostics: Diagnostics,
    /// Set when fewer than `requested` eigenvalues were found.
    pub warning: Option<String>,
}

struct Context<'a> {
    problem: &'a ShootingProblem,
    search_box: SearchBox,
    accept: f64,
    evaluations: Cell<usize>,
    steps: Cell<usize>,
    rescales: Cell<usize>,
    secant_runs: Cell<usize>,
}

impl Context<'_> {
    fn eval(&self, e: Complex64) -> Result<Mismatch> {
        let m = wronskian_mismatch(self.problem, e)?;
        self.evaluations.set(self.evaluations.get() + 1);
        self.steps.set(self.steps.get() + m.steps);
        self.rescales.set(self.rescales.get() + m.rescales);
        Ok(m)
    }

    /// Complex secant iteration; `None` if it leaves the box or stalls above
    /// the acceptance residual.
    fn secant(&self, z0: Complex64, z1: Complex64) -> Option<(Complex64, f64)> {
        self.secant_runs.set(self.secant_runs.get() + 1);
        let (mut z0, mut z1) = (z0, z1);
        let mut w0 = self.eval(z0).ok()?;
        let mut w1 = self.eval(z1).ok()?;
        let mut best = if w0.residual < w1.residual { (z0, w0.residual) } else { (z1, w1.residual) };
        for _ in 0..SECANT_MAX_ITERATIONS {
            let denom = w1.w - w0.w;
            if denom.norm() == 0.0 || !denom.is_finite() {
                break;
            }
            let mut step = w1.w * (z1 - z0) / denom;
            if !step.is_finite() {
                break;
            }
            if step.norm() > SECANT_MAX_STEP {
                step *= SECANT_MAX_STEP / step.norm();
            }
            let z2 = z1 - step;
            if !self.search_box.contains_loosely(z2, 1.0) {
                return None;
            }
            let w2 = self.eval(z2).ok()?;
            if w2.residual < best.1 {
                best = (z2, w2.residual);
            }
            (z0, w0, z1, w1) = (z1, w1, z2, w2);
            if step.norm() <= 1e-13 * (1.0 + z2.norm()) {
                break;
            }
        }
        (best.1 < self.accept).then_some(best)
    }

    /// Refines from a seed with a small complex offset, so the imaginary part
    /// is determined by the iteration rather than inherited from the seed.
    fn polish(&self, seed: Complex64) -> Option<(Complex64, f64)> {
        let scale = 1.0 + seed.norm();
        let z0 = seed + Complex64::new(0.0, 1e-4 * scale);
        let z1 = seed + Complex64::new(1e-6 * scale, 1e-3 * scale);
        self.secant(z0, z1)
    }

    /// Polishes a seed that is already accurate (an exact QES value): keeps
    /// it unless the secant finds something with a smaller residual nearby.
    fn polish_exact(&self, seed: Complex64) -> Option<(Complex64, f64)> {
        let at_seed = self.eval(seed).ok()?;
        let scale = 1.0 + seed.norm();
        let iterated = self.secant(seed, seed + Complex64::new(1e-7 * scale, 1e-7 * scale));
        match iterated {
            Some((z, r)) if r < at_seed.residual && (z - seed).norm() < QES_MATCH_TOL * scale => {
                Some((z, r))
            }
            _ if at_seed.residual < self.accept => Some((seed, at_seed.residual)),
            other => other,
        }
    }
}

/// Exactly known values for labelling, repeated by multiplicity.
fn known_values(problem: &ShootingProblem) -> Result<Vec<Complex64>> {
    match problem.model() {
        Model::Quartic(spec) => Ok(qes_eigenvalues(spec, 1e-14)?.all()),
        Model::Sextic(spec) => Ok(sextic_eigenvalues(*spec, 1e-14)?
            .into_iter()
            .map(|e| Complex64::new(e, 0.0))
            .collect()),
    }
}

fn matches(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= QES_MATCH_TOL * (1.0 + b.norm())
}

struct Collected {
    roots: Vec<(Complex64, f64)>,
    known: Vec<Complex64>,
}

impl Collected {
    /// How many copies of `z` may appear: the multiplicity of a matching
    /// known value, else one.
    fn allowed(&self, z: Complex64) -> usize {
        let m = self.known.iter().filter(|k| matches(z, **k)).count();
        m.max(1)
    }

    fn push(&mut self, z: Complex64, residual: f64) -> bool {
        let near = self
            .roots
            .iter()
            .filter(|(r, _)| (r - z).norm() < DEDUPE_DISTANCE * (1.0 + z.norm()).max(1.0))
            .count();
        if near >= self.allowed(z) {
            return false;
        }
        self.roots.push((z, residual));
        true
    }

    fn real_roots(&self) -> Vec<f64> {
        self.roots
            .iter()
            .filter(|(z, _)| z.im.abs() < 1e-8 * (1.0 + z.re.abs()))
            .map(|(z, _)| z.re)
            .collect()
    }
}

/// Locates up to `count` eigenvalues of `problem` inside `search_box`.
pub fn find_eigenvalues(
    problem: &ShootingProblem,
    search_box: SearchBox,
    count: usize,
    options: &SearchOptions,
) -> Result<SpectrumReport> {
    if count == 0 {
        return Err(QesError::InvalidParameter("count must be >= 1".into()));
    }
    problem.validate()?;
    let ctx = Context {
        problem,
        search_box,
        accept: 10.0 * problem.ode_tol(),
        evaluations: Cell::new(0),
        steps: Cell::new(0),
        rescales: Cell::new(0),
        secant_runs: Cell::new(0),
    };
    let known = known_values(problem)?;
    let mut found = Collected {
        roots: Vec::new(),
        known: known.clone(),
    };

    if options.qes_seeds {
        for &seed in &known {
            if !search_box.contains(seed) {
                continue;
            }
            if let Some((z, r)) = ctx.polish_exact(seed) {
                found.push(z, r);
            }
        }
    }
    for &seed in &options.extra_seeds {
        if !search_box.contains(seed) {
            continue;
        }
        if let Some((z, r)) = ctx.polish(seed) {
            if search_box.contains(z) {
                found.push(z, r);
            }
        }
    }
    if let Some(step) = options.scan_step {
        scan_real_axis(&ctx, &mut found, step)?;
    }
    if let Some(step) = options.lattice_step {
        probe_lattice(&ctx, &mut found, step);
    }

    let mut eigenvalues: Vec<Eigenvalue> = found
        .roots
        .iter()
        .filter(|(z, _)| search_box.contains(*z))
        .map(|&(value, residual)| Eigenvalue {
            value,
            residual,
            uncertainty: f64::INFINITY,
            kind: if known.iter().any(|k| matches(value, *k)) {
                EigenKind::Qes
            } else {
                EigenKind::NonQes
            },
        })
        .collect();
    eigenvalues.sort_by(|x, y| {
        x.value
            .re
            .total_cmp(&y.value.re)
            .then(x.value.im.total_cmp(&y.value.im))
    });
    eigenvalues.truncate(count);
    let loose = problem.clone().with_ode_tol((10.0 * problem.ode_tol()).min(1e-3))?;
    let check = Context {
        problem: &loose,
        search_box,
        accept: UNCERTAINTY_ACCEPT,
        evaluations: Cell::new(0),
        steps: Cell::new(0),
        rescales: Cell::new(0),
        secant_runs: Cell::new(0),
    };
    for e in &mut eigenvalues {
        let z = e.value;
        let dz = Complex64::new(1e-7, 1e-7) * (1.0 + z.norm());
        if let Some((w, _)) = check.secant(z, z + dz) {
            e.uncertainty = (w - z).norm();
        }
    }
    for (total, part) in [
        (&ctx.evaluations, &check.evaluations),
        (&ctx.steps, &check.steps),
        (&ctx.rescales, &check.rescales),
        (&ctx.secant_runs, &check.secant_runs),
    ] {
        total.set(total.get() + part.get());
    }
    let warning = (eigenvalues.len() < count).then(|| {
        format!(
            "found {} of {count} eigenvalues in the search box",
            eigenvalues.len()
        )
    });
    Ok(SpectrumReport {
        eigenvalues,
        qes_values: known,
        model: problem.model().clone(),
        search_box,
        requested: count,
        theta_right: problem.theta_right(),
        theta_left: problem.theta_left(),
        r_max: problem.r_max(),
        ode_tol: problem.ode_tol(),
        diagnostics: Diagnostics {
            w_evaluations: ctx.evaluations.get(),
            ode_steps: ctx.steps.get(),
            rescales: ctx.rescales.get(),
            secant_runs: ctx.secant_runs.get(),
        },
        warning,
    })
}

/// Sign changes of the real, phase-adjusted `W`, deflated by the real roots
/// already known so that only new roots change sign.
fn scan_real_axis(ctx: &Context, found: &mut Collected, step: f64) -> Result<()> {
    if step.is_nan() || step <= 0.0 {
        return Err(QesError::InvalidParameter(format!("scan step must be positive, got {step}")));
    }
    let b = ctx.search_box;
    if b.im_lo > 0.0 || b.im_hi < 0.0 {
        return Ok(());
    }
    let n = ((b.re_hi - b.re_lo) / step).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=n).map(|k| b.re_lo + (b.re_hi - b.re_lo) * k as f64 / n as f64).collect();
    let ws: Vec<Complex64> = grid
        .iter()
        .map(|&e| ctx.eval(Complex64::new(e, 0.0)).map(|m| m.w))
        .collect::<Result<_>>()?;
    // W is real on the axis up to a constant phase; remove it
    let Some(pivot) = ws.iter().copied().filter(|w| w.is_finite()).max_by(|x, y| x.norm().total_cmp(&y.norm())) else {
        return Ok(());
    };
    if pivot.norm() == 0.0 {
        return Ok(());
    }
    let phase = pivot.conj() / pivot.norm();
    let known = found.real_roots();
    let deflated = |e: f64, w: Complex64| -> f64 {
        let mut v = (w * phase).re;
        for r in &known {
            let d = e - r;
            if d != 0.0 {
                v /= d;
            }
        }
        v
    };
    let g: Vec<f64> = grid.iter().zip(&ws).map(|(&e, &w)| deflated(e, w)).collect();

    for k in 0..n {
        let (ga, gb) = (g[k], g[k + 1]);
        if !(ga.is_finite() && gb.is_finite()) || ga.signum() == gb.signum() || ga == 0.0 {
            continue;
        }
        let eval_g = |e: f64| -> Option<f64> {
            let w = ctx.eval(Complex64::new(e, 0.0)).ok()?.w;
            Some(deflated(e, w))
        };
        let Some(root) = illinois(eval_g, grid[k], grid[k + 1], ga, gb) else {
            continue;
        };
        if let Some((z, r)) = ctx.polish(Complex64::new(root, 0.0)) {
            found.push(z, r);
        }
    }
    Ok(())
}

/// Regula falsi with the Illinois modification on a sign-changing bracket.
fn illinois(f: impl Fn(f64) -> Option<f64>, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> Option<f64> {
    let mut side = 0i8;
    for _ in 0..REAL_REFINE_ITERATIONS {
        let c = (a * fb - b * fa) / (fb - fa);
        let c = if c.is_finite() && c > a.min(b) && c < a.max(b) { c } else { 0.5 * (a + b) };
        let fc = f(c)?;
        if fc == 0.0 || (b - a).abs() < 1e-13 * (1.0 + c.abs()) {
            return Some(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Some(0.5 * (a + b))
}

/// Secant runs from a lattice of off-axis points, to catch non-real roots
/// the real scan cannot see.
fn probe_lattice(ctx: &Context, found: &mut Collected, step: f64) {
    if step.is_nan() || step <= 0.0 {
        return;
    }
    let b = ctx.search_box;
    let nr = ((b.re_hi - b.re_lo) / step).floor() as usize;
    let ni = ((b.im_hi - b.im_lo) / step).floor() as usize;
    for p in 0..=nr {
        for q in 0..=ni {
            let z = Complex64::new(b.re_lo + p as f64 * step, b.im_lo + q as f64 * step);
            if z.im.abs() < 0.5 * step {
                continue;
            }
            let z1 = z + Complex64::new(1e-3, 1e-3);
            if let Some((root, r)) = ctx.secant(z, z1) {
                if b.contains(root) {
                    found.push(root, r);
                }
            }
        }
    }
}

/// `lo, lo + step, ..., <= hi` in exact arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRange {
    pub lo: Rational,
    pub hi: Rational,
    pub step: Rational,
}

impl SweepRange {
    pub fn points(&self) -> Result<Vec<Rational>> {
        if self.step <= Rational::from_integer(0.into()) {
            return Err(QesError::InvalidParameter("sweep step must be positive".into()));
        }
        if self.lo > self.hi {
            return Err(QesError::InvalidParameter("sweep range is empty".into()));
        }
        let mut out = Vec::new();
        let mut b = self.lo.clone();
        while b <= self.hi {
            out.push(b.clone());
            b += &self.step;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub b: Rational,
    /// Failures are recorded as messages; the sweep continues.
    pub report: std::result::Result<SpectrumReport, String>,
}

/// Spectra along a line of `b` at fixed `J` and `a`, each point seeded with
/// the eigenvalues of the previous one.
pub fn sweep(
    j: u32,
    a: &Rational,
    range: &SweepRange,
    count: usize,
    options: &SearchOptions,
) -> Result<Vec<SweepPoint>> {
    let bs = range.points()?;
    let mut out = Vec::with_capacity(bs.len());
    let mut previous: Vec<Complex64> = Vec::new();
    for b in bs {
        let report = sweep_point(j, a, &b, count, options, &previous);
        if let Ok(r) = &report {
            previous = r.eigenvalues.iter().map(|e| e.value).collect();
        }
        out.push(SweepPoint {
            b,
            report: report.map_err(|e| e.to_string()),
        });
    }
    Ok(out)
}

fn sweep_point(
    j: u32,
    a: &Rational,
    b: &Rational,
    count: usize,
    options: &SearchOptions,
    previous: &[Complex64],
) -> Result<SpectrumReport> {
    let spec = QuarticSpec::new(j, a.clone(), b.clone())?;
    let problem = ShootingProblem::quartic(spec);
    let search_box = default_box(&problem, count)?;
    let mut opts = options.clone();
    opts.extra_seeds.extend_from_slice(previous);
    find_eigenvalues(&problem, search_box, count, &opts)
}

/// The default box around the lowest known value (or `E = 0` if none is known).
pub fn default_box(problem: &ShootingProblem, count: usize) -> Result<SearchBox> {
    let known = known_values(problem)?;
    let e_min = known
        .iter()
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    let e_min = if e_min.is_finite() {
        e_min
    } else {
        match problem.model() {
            Model::Quartic(spec) => to_f64(&spec.energy_shift()),
            Model::Sextic(_) => 0.0,
        }
    };
    Ok(SearchBox::around(e_min, count))
}
