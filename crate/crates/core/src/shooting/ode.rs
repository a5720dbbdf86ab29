//! Adaptive Dormand–Prince 5(4) for `y' = f(t, y)` with `y` in C^2.

use num_complex::Complex64;

use crate::error::{QesError, Result};

pub type State = [Complex64; 2];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Magnitude above which the state is renormalized.
const RESCALE_THRESHOLD: f64 = 1e150;
const MAX_STEPS: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

/// End state plus bookkeeping. The true solution is `state * exp(log_scale)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integration {
    pub state: State,
    pub log_scale: f64,
    pub accepted: usize,
    pub rejected: usize,
    pub rescales: usize,
}

fn lin(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += k[0] * (h * c);
        out[1] += k[1] * (h * c);
    }
    out
}

/// Integrates from `t0` to `t1` (either direction).
pub fn integrate(
    f: impl Fn(f64, &State) -> State,
    t0: f64,
    t1: f64,
    y0: State,
    tol: Tolerances,
) -> Result<Integration> {
    let span = t1 - t0;
    let dir = span.signum();
    let min_step = 1e-14 * span.abs().max(1.0);
    let mut h = dir * (span.abs() * 1e-3).max(min_step * 10.0);
    let mut t = t0;
    let mut y = y0;
    let mut out = Integration {
        state: y0,
        log_scale: 0.0,
        accepted: 0,
        rejected: 0,
        rescales: 0,
    };
    let mut k1 = f(t, &y);
    while (t1 - t) * dir > 0.0 {
        if out.accepted + out.rejected > MAX_STEPS {
            return Err(QesError::StiffSegment { r: t });
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let k2 = f(t + C2 * h, &lin(&y, &[(A21, &k1)], h));
        let k3 = f(t + C3 * h, &lin(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = f(t + C4 * h, &lin(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = f(
            t + C5 * h,
            &lin(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = f(
            t + h,
            &lin(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
        );
        let y_new = lin(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
        let k7 = f(t + h, &y_new);

        let mut err: f64 = 0.0;
        for i in 0..2 {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let scale = tol.atol + tol.rtol * y[i].norm().max(y_new[i].norm());
            err = err.max(e.norm() / scale);
        }
        if !err.is_finite() {
            err = 1e10;
        }

        if err <= 1.0 {
            t += h;
            y = y_new;
            k1 = k7;
            out.accepted += 1;
            let mag = y[0].norm().max(y[1].norm());
            if mag > RESCALE_THRESHOLD {
                y[0] /= mag;
                y[1] /= mag;
                k1[0] /= mag;
                k1[1] /= mag;
                out.log_scale += mag.ln();
                out.rescales += 1;
            }
        } else {
            out.rejected += 1;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h.abs() < min_step && (t1 - t) * dir > min_step {
            return Err(QesError::StiffSegment { r: t });
        }
    }
    out.state = y;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: Tolerances = Tolerances {
        rtol: 1e-11,
        atol: 1e-300,
    };

    #[test]
    fn harmonic_oscillator_backwards() {
        // y'' = -y from t=2 to 0 with y(2)=cos 2, y'(2) = -sin 2
        let y0 = [Complex64::new(2f64.cos(), 0.0), Complex64::new(-(2f64.sin()), 0.0)];
        let res = integrate(|_, y| [y[1], -y[0]], 2.0, 0.0, y0, TOL).unwrap();
        assert!((res.state[0] - 1.0).norm() < 1e-10);
        assert!(res.state[1].norm() < 1e-10);
    }

    #[test]
    fn complex_exponential() {
        // y' = i y, exact e^{it}
        let y0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let i = Complex64::new(0.0, 1.0);
        let res = integrate(|_, y| [i * y[0], i * y[1]], 0.0, 3.0, y0, TOL).unwrap();
        let exact = (i * 3.0).exp();
        assert!((res.state[0] - exact).norm() < 1e-10);
    }

    #[test]
    fn rescaling_tracks_growth() {
        // y' = 500 y over [0, 1]: e^500 overflows the threshold
        let y0 = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        let res = integrate(|_, y| [y[0] * 500.0, y[1] * 500.0], 0.0, 1.0, y0, TOL).unwrap();
        assert!(res.rescales > 0);
        let log_mag = res.state[0].norm().ln() + res.log_scale;
        assert!((log_mag - 500.0).abs() < 1e-8, "{log_mag}");
    }
}
