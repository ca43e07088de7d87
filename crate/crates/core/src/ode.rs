//! Adaptive Dormand–Prince 5(4) integration of small fixed-size systems.

use num_traits::Float;

use crate::{Error, Result};

/// Step-control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-12, max_steps: 200_000 }
    }
}

/// Final state of an integration and the work it took.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint<const N: usize> {
    pub y: [f64; N],
    pub accepted: usize,
    pub rejected: usize,
}

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
// Fifth-order minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (w, k) in terms {
        for i in 0..N {
            out[i] += h * w * k[i];
        }
    }
    out
}

/// Integrates `y' = f(x, y)` from `x0` to `x1 > x0`.
///
/// The local error estimate is measured in the max norm scaled by
/// `atol + rtol·|y|`; the step size follows the usual PI-free controller with
/// safety factor 0.9. The first-same-as-last stage is reused.
pub fn integrate<const N: usize, F>(mut f: F, x0: f64, y0: [f64; N], x1: f64, tol: Tolerances) -> Result<Endpoint<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let span = x1 - x0;
    if !(span > 0.0) || !span.is_finite() {
        return Err(Error::ArgumentOutOfRange { name: "x1 - x0", value: span, expected: "finite and > 0" });
    }
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);
    let mut h = initial_step(&y, &k1, span, tol);
    let (mut accepted, mut rejected) = (0, 0);

    while x < x1 {
        if accepted + rejected >= tol.max_steps {
            return Err(Error::StepBudgetExceeded { steps: tol.max_steps, x });
        }
        let last = x + h >= x1;
        if last {
            h = x1 - x;
        }
        let k2 = f(x + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = f(x + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(x + C4 * h, &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(x + C5 * h, &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(x + h, &combine(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = combine(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let x_new = if last { x1 } else { x + h };
        let k7 = f(x_new, &y_new);

        let mut err: f64 = 0.0;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max(e.abs() / sc);
        }
        if !err.is_finite() {
            return Err(Error::NonFinite { what: "ODE error estimate" });
        }

        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        if err <= 1.0 {
            x = x_new;
            y = y_new;
            k1 = k7;
            accepted += 1;
            h *= factor;
        } else {
            rejected += 1;
            h *= factor.min(1.0);
            if h.abs() <= 1e-14 * x.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { x, h });
            }
        }
    }
    Ok(Endpoint { y, accepted, rejected })
}

/// Hairer's starting-step heuristic, simplified to one explicit estimate.
fn initial_step<const N: usize>(y: &[f64; N], dy: &[f64; N], span: f64, tol: Tolerances) -> f64 {
    let mut d0: f64 = 0.0;
    let mut d1: f64 = 0.0;
    for i in 0..N {
        let sc = tol.atol + tol.rtol * y[i].abs();
        d0 = d0.max(y[i].abs() / sc);
        d1 = d1.max(dy[i].abs() / sc);
    }
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span).min(0.05 * span.max(1e-3)).max(1e-8 * span)
}
