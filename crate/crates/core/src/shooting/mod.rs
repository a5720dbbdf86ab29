//! Two-sided shooting for `-psi'' + V psi = E psi` with decay imposed inside
//! the Stokes wedges, plus the real-line sextic variant.
//!
//! Each ray solution is written as `psi = exp(S(x)) chi(x)` with the
//! asymptotic exponent `S`, so `chi` only grows polynomially along the ray
//! and the unwanted (growing) mode is damped during inward integration.
//! `chi` is started from its leading power `x^(J-1)` (quartic) or
//! `x^(2J-2)` (sextic) at `r = R_max`; that start does not depend on `E`,
//! so the mismatch function is analytic in `E`.

pub mod ode;
mod search;

pub use search::{
    default_box, find_eigenvalues, sweep, Diagnostics, EigenKind, Eigenvalue, SearchBox, SearchOptions, SpectrumReport,
    SweepPoint, SweepRange,
};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QesError, Result};
use crate::qescore::QuarticSpec;
use crate::ratpoly::to_f64;
use crate::sextic::SexticSpec;

use ode::{integrate, Tolerances};

/// Decay factor at the ray end used to pick the default `R_max`.
pub const DEFAULT_DECAY: f64 = 1e-14;
pub const DEFAULT_ODE_TOL: f64 = 1e-13;
pub const DEFAULT_THETA_RIGHT: f64 = -PI / 6.0;
pub const DEFAULT_THETA_LEFT: f64 = -5.0 * PI / 6.0;

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Quartic(QuarticSpec),
    /// Even sector of `x^6 - (4J-1)x^2` on the real line.
    Sextic(SexticSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShootingProblem {
    model: Model,
    theta_right: f64,
    theta_left: f64,
    r_max: f64,
    ode_tol: f64,
    // cached floating-point parameters
    j: u32,
    a: f64,
    b: f64,
}

/// `(3 ln(1/decay) / |sin 3 theta|)^(1/3)`, where `|exp(S)| = decay`.
pub fn quartic_r_max(theta: f64, decay: f64) -> f64 {
    (3.0 * (1.0 / decay).ln() / (3.0 * theta).sin().abs()).cbrt()
}

/// `(4 ln(1/decay))^(1/4)`, where `exp(-x^4/4) = decay`.
pub fn sextic_r_max(decay: f64) -> f64 {
    (4.0 * (1.0 / decay).ln()).powf(0.25)
}

impl ShootingProblem {
    /// Wedge-centre rays and the default `R_max`.
    pub fn quartic(spec: QuarticSpec) -> Self {
        let (j, a, b) = (spec.j(), to_f64(spec.a()), to_f64(spec.b()));
        ShootingProblem {
            model: Model::Quartic(spec),
            theta_right: DEFAULT_THETA_RIGHT,
            theta_left: DEFAULT_THETA_LEFT,
            r_max: quartic_r_max(DEFAULT_THETA_RIGHT, DEFAULT_DECAY),
            ode_tol: DEFAULT_ODE_TOL,
            j,
            a,
            b,
        }
    }

    /// The positive real axis; the left side is its mirror image.
    pub fn sextic(spec: SexticSpec) -> Self {
        ShootingProblem {
            j: spec.j(),
            model: Model::Sextic(spec),
            theta_right: 0.0,
            theta_left: PI,
            r_max: sextic_r_max(DEFAULT_DECAY),
            ode_tol: DEFAULT_ODE_TOL,
            a: 0.0,
            b: 0.0,
        }
    }

    /// Sets both angles (radians) and recomputes the default `R_max` for
    /// the slower-decaying ray.
    pub fn with_angles(mut self, theta_right: f64, theta_left: f64) -> Result<Self> {
        self.theta_right = theta_right;
        self.theta_left = theta_left;
        if let Model::Quartic(_) = self.model {
            self.r_max = quartic_r_max(theta_right, DEFAULT_DECAY)
                .max(quartic_r_max(theta_left, DEFAULT_DECAY));
        }
        self.validate()?;
        Ok(self)
    }

    pub fn with_r_max(mut self, r_max: f64) -> Result<Self> {
        self.r_max = r_max;
        self.validate()?;
        Ok(self)
    }

    pub fn with_ode_tol(mut self, tol: f64) -> Result<Self> {
        self.ode_tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(QesError::InvalidParameter(msg));
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return bad(format!("R_max must be positive, got {}", self.r_max));
        }
        if !(self.ode_tol > 0.0 && self.ode_tol < 1.0) {
            return bad(format!("ODE tolerance must lie in (0, 1), got {}", self.ode_tol));
        }
        if let Model::Quartic(_) = self.model {
            let deg = |t: f64| t.to_degrees();
            let (r, l) = (deg(self.theta_right), deg(self.theta_left));
            if !(r > -60.0 && r < 0.0) {
                return bad(format!("right ray {r} deg is outside the wedge (-60, 0)"));
            }
            if !(l > -180.0 && l < -120.0) {
                return bad(format!("left ray {l} deg is outside the wedge (-180, -120)"));
            }
        }
        Ok(())
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn theta_right(&self) -> f64 {
        self.theta_right
    }

    pub fn theta_left(&self) -> f64 {
        self.theta_left
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn ode_tol(&self) -> f64 {
        self.ode_tol
    }

    /// The matching point; always the origin.
    pub fn match_point(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn theta(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.theta_left,
            Side::Right => self.theta_right,
        }
    }

    /// `V(x)` for the model.
    pub fn potential(&self, x: Complex64) -> Complex64 {
        let i = Complex64::i();
        match self.model {
            Model::Quartic(_) => {
                let (a, b, j) = (self.a, self.b, self.j as f64);
                let x2 = x * x;
                -x2 * x2 + i * 2.0 * a * x2 * x + (a * a - 2.0 * b) * x2 + i * 2.0 * (a * b - j) * x
            }
            Model::Sextic(_) => {
                let x2 = x * x;
                x2 * x2 * x2 - (4.0 * self.j as f64 - 1.0) * x2
            }
        }
    }

    /// `S'(x)`, the derivative of the asymptotic exponent.
    fn exponent_slope(&self, x: Complex64) -> Complex64 {
        let i = Complex64::i();
        match self.model {
            Model::Quartic(_) => -i * x * x - self.a * x - i * self.b,
            Model::Sextic(_) => -x * x * x,
        }
    }

    /// Leading power of `chi` at infinity.
    fn chi_power(&self) -> i32 {
        match self.model {
            Model::Quartic(_) => self.j as i32 - 1,
            Model::Sextic(_) => 2 * self.j as i32 - 2,
        }
    }

    /// `chi'' = P(x) chi' - (R(x) + E) chi`.
    fn chi_coefficients(&self, x: Complex64) -> (Complex64, Complex64) {
        let i = Complex64::i();
        match self.model {
            Model::Quartic(_) => {
                let (a, b, j) = (self.a, self.b, self.j as f64);
                let p = i * 2.0 * x * x + 2.0 * a * x + i * 2.0 * b;
                let r = i * 2.0 * (j - 1.0) * x - b * b - a;
                (p, r)
            }
            Model::Sextic(_) => {
                let p = 2.0 * x * x * x;
                let r = 4.0 * (self.j as f64 - 1.0) * x * x;
                (p, r)
            }
        }
    }
}

/// Solution data at the matching point for one ray.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayEnd {
    pub psi: Complex64,
    /// `d psi / dx` (not `d/dr`).
    pub dpsi: Complex64,
    /// True values are `psi * exp(log_scale)`; nonzero only after rescaling.
    pub log_scale: f64,
    pub rescales: usize,
    pub steps: usize,
}

pub fn integrate_ray(problem: &ShootingProblem, e: Complex64, side: Side) -> Result<RayEnd> {
    if !(e.re.is_finite() && e.im.is_finite()) {
        return Err(QesError::InvalidParameter(format!("non-finite energy {e}")));
    }
    problem.validate()?;
    let dir = Complex64::from_polar(1.0, problem.theta(side));
    let dir2 = dir * dir;
    let n = problem.chi_power();
    let x0 = dir * problem.r_max;
    let chi0 = x0.powi(n);
    let dchi0 = if n == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        x0.powi(n - 1) * n as f64
    };
    // state is (chi, d chi / dr)
    let y0 = [chi0, dchi0 * dir];
    let rhs = |r: f64, y: &ode::State| {
        let x = dir * r;
        let (p, q) = problem.chi_coefficients(x);
        [y[1], p * y[1] * dir - (q + e) * y[0] * dir2]
    };
    let tol = Tolerances {
        rtol: problem.ode_tol,
        atol: 1e-300,
    };
    let run = integrate(rhs, problem.r_max, 0.0, y0, tol)?;
    let chi = run.state[0];
    let dchi = run.state[1] / dir;
    let origin = problem.match_point();
    Ok(RayEnd {
        psi: chi,
        dpsi: dchi + problem.exponent_slope(origin) * chi,
        log_scale: run.log_scale,
        rescales: run.rescales,
        steps: run.accepted + run.rejected,
    })
}

/// The matching determinant and its scale-free size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mismatch {
    /// Analytic in `E`; zero exactly at eigenvalues.
    pub w: Complex64,
    /// `|W| / (|(psi_L, psi'_L)| |(psi_R, psi'_R)|)`, i.e. `W` with both
    /// sides normalized to unit size at the match point; lies in `[0, 1]`.
    pub residual: f64,
    pub rescales: usize,
    pub steps: usize,
}

/// `W = psi_L psi'_R - psi'_L psi_R` at the origin. For the sextic the two
/// sides are mirror images and only even states are sought, so `W = psi'_R(0)`
/// with residual `|psi'| / |(psi, psi')|`.
pub fn wronskian_mismatch(problem: &ShootingProblem, e: Complex64) -> Result<Mismatch> {
    let right = integrate_ray(problem, e, Side::Right)?;
    if let Model::Sextic(_) = problem.model {
        let w = right.dpsi * right.log_scale.exp();
        let size = right.psi.norm().hypot(right.dpsi.norm());
        return Ok(Mismatch {
            w,
            residual: if size > 0.0 { right.dpsi.norm() / size } else { 0.0 },
            rescales: right.rescales,
            steps: right.steps,
        });
    }
    let left = integrate_ray(problem, e, Side::Left)?;
    let raw = left.psi * right.dpsi - left.dpsi * right.psi;
    let size = left.psi.norm().hypot(left.dpsi.norm()) * right.psi.norm().hypot(right.dpsi.norm());
    Ok(Mismatch {
        w: raw * (left.log_scale + right.log_scale).exp(),
        residual: if size > 0.0 { raw.norm() / size } else { 0.0 },
        rescales: left.rescales + right.rescales,
        steps: left.steps + right.steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{rat, ratio};

    fn j3_b1() -> ShootingProblem {
        ShootingProblem::quartic(QuarticSpec::new(3, rat(0), rat(1)).unwrap())
    }

    #[test]
    fn default_r_max() {
        let r = quartic_r_max(DEFAULT_THETA_RIGHT, DEFAULT_DECAY);
        assert!((r - 4.5899).abs() < 1e-3, "{r}");
        assert!((r.powi(3) / 3.0 - 14.0 * 10f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn angles_are_validated() {
        assert!(j3_b1().with_angles(-70f64.to_radians(), DEFAULT_THETA_LEFT).is_err());
        assert!(j3_b1().with_angles(DEFAULT_THETA_RIGHT, -100f64.to_radians()).is_err());
        assert!(j3_b1().with_r_max(0.0).is_err());
        assert!(j3_b1().with_ode_tol(-1.0).is_err());
        let p = j3_b1().with_angles(-20f64.to_radians(), -160f64.to_radians()).unwrap();
        assert!(p.r_max() > quartic_r_max(DEFAULT_THETA_RIGHT, DEFAULT_DECAY));
    }

    #[test]
    fn qes_root_is_matched() {
        // largest root of F^3 - 16F - 16, shifted by b^2 = 1
        let e = Complex64::new(4.428_639_486_755_07 + 1.0, 0.0);
        let m = wronskian_mismatch(&j3_b1(), e).unwrap();
        assert!(m.residual < 1e-8, "{}", m.residual);
    }

    #[test]
    fn generic_energy_is_not_matched() {
        let m = wronskian_mismatch(&j3_b1(), Complex64::new(100.0, 50.0)).unwrap();
        assert!(m.w.norm() > 0.0 && m.w.is_finite());
        // halfway between the QES values -0.0784 and 5.4286
        let mid = wronskian_mismatch(&j3_b1(), Complex64::new(2.675, 0.0)).unwrap();
        assert!(mid.w.norm() > 1e-3 && mid.residual > 1e-3, "{mid:?}");
    }

    #[test]
    fn real_axis_gives_real_mismatch() {
        let m = wronskian_mismatch(&j3_b1(), Complex64::new(2.7, 0.0)).unwrap();
        assert!(m.w.im.abs() < 1e-9 * m.w.norm(), "{}", m.w);
    }

    #[test]
    fn conjugate_energy_conjugates_mismatch() {
        let p = ShootingProblem::quartic(QuarticSpec::new(2, ratio(1, 3), ratio(-1, 2)).unwrap());
        let e = Complex64::new(3.1, 0.8);
        let w = wronskian_mismatch(&p, e).unwrap().w;
        let wc = wronskian_mismatch(&p, e.conj()).unwrap().w;
        assert!((wc - w.conj()).norm() < 1e-9 * w.norm(), "{w} {wc}");
    }

    #[test]
    fn sextic_even_matching() {
        let p = ShootingProblem::sextic(SexticSpec::new(2).unwrap());
        let end = integrate_ray(&p, Complex64::new(8f64.sqrt(), 0.0), Side::Right).unwrap();
        assert!(end.dpsi.norm() < 1e-8 * end.psi.norm(), "{end:?}");
        let off = integrate_ray(&p, Complex64::new(1.0, 0.0), Side::Right).unwrap();
        assert!(off.dpsi.norm() > 1e-3 * off.psi.norm());
    }

    #[test]
    fn rejects_non_finite_energy() {
        assert!(integrate_ray(&j3_b1(), Complex64::new(f64::NAN, 0.0), Side::Left).is_err());
    }
}
