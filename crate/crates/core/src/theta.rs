//! Jacobi Theta `Θ`, Eta `H` and Zeta `Z = Θ'/Θ` from nome series.
//!
//! With `v = πu/2K`: `Θ(u) = θ₄(v, q)`, `H(u) = θ₁(v, q)`. Arguments are
//! first reduced to the cell `Re ∈ (-K, K]`, `Im ∈ (-K̄, K̄]` with the exact
//! quasi-periodicity factors, so the series only ever see `|Im v| ≤ πK̄/2K`.

use core::f64::consts::PI;

use num_traits::Float;

use crate::elliptic::{EllipticConstants, Jacobi, POLE_THRESHOLD};
use crate::{Error, Result, C64};

/// Default relative truncation tolerance of the series.
pub const SERIES_TOL: f64 = 1e-16;
/// Default cap on the number of series terms.
pub const SERIES_CAP: usize = 200;

/// Series evaluator at one modulus.
#[derive(Debug, Clone, Copy)]
struct Series {
    k: f64,
    q: f64,
    tol: f64,
    cap: usize,
}

impl Series {
    /// `(θ₄, θ₄', θ₄'')` in `v`.
    fn theta4(&self, v: C64) -> (C64, C64, C64) {
        let one = C64::new(1.0, 0.0);
        if self.q == 0.0 {
            return (one, C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        }
        let (mut s0, mut s1, mut s2) = (one, C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        let ln_q = self.q.ln();
        let grow = 2.0 * v.im.abs();
        for n in 1..=self.cap {
            let nf = n as f64;
            let mag = (nf * nf * ln_q).exp();
            let qn = if n % 2 == 1 { -mag } else { mag };
            let arg = v * (2.0 * nf);
            let (c, s) = (arg.cos(), arg.sin());
            s0 += c * (2.0 * qn);
            s1 += s * (-4.0 * nf * qn);
            s2 += c * (-8.0 * nf * nf * qn);
            let bound = mag * (nf * grow).exp() * (1.0 + 4.0 * nf * nf);
            if bound < self.tol * s0.norm() {
                break;
            }
        }
        (s0, s1, s2)
    }

    /// `θ₁` in `v`.
    fn theta1(&self, v: C64) -> C64 {
        if self.q == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let ln_q = self.q.ln();
        let scale = 2.0 * (0.25 * ln_q).exp();
        let grow = v.im.abs();
        let mut sum = C64::new(0.0, 0.0);
        for n in 0..self.cap {
            let h = n as f64 + 0.5;
            let mag = (h * h * ln_q).exp();
            let qn = if n % 2 == 1 { -mag } else { mag };
            sum += (v * (2.0 * h)).sin() * (2.0 * qn);
            if mag * (2.0 * h * grow).exp() < self.tol * scale {
                break;
            }
        }
        sum
    }

    fn v_of(&self, u: C64) -> C64 {
        u * (PI / (2.0 * self.k))
    }

    /// `Z` by the series, for arguments with `|Im u| ≤ K̄/2` (no reduction).
    fn zeta_raw(&self, u: C64) -> C64 {
        let (t, dt, _) = self.theta4(self.v_of(u));
        dt / t * (PI / (2.0 * self.k))
    }

    /// `Z` on the real axis, reduced by the period `2K`.
    fn zeta_real(&self, x: f64) -> f64 {
        let p = 2.0 * self.k;
        let r = x - p * (x / p).round();
        self.zeta_raw(C64::new(r, 0.0)).re
    }
}

/// `(Z(z), pole distance)`-style result of the `K + iy` identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KLineZeta {
    /// From the theta series.
    pub direct: C64,
    /// From the closed form in `d̄n`, `s̄c`, `Z̄`, `πy/2KK̄`.
    pub identity: C64,
}

impl KLineZeta {
    pub fn discrepancy(&self) -> f64 {
        (self.direct - self.identity).norm()
    }
}

/// Parameter context for the theta/zeta layer: elliptic constants plus the
/// series truncation policy.
#[derive(Debug, Clone, Copy)]
pub struct ThetaContext {
    pub constants: EllipticConstants,
    /// Cap on the number of series terms.
    pub truncation: usize,
    /// Relative size of the last retained term.
    pub tol: f64,
    series: Series,
    /// Series at the complementary modulus, absent at `κ = 0`.
    bar: Option<Series>,
    jacobi: Jacobi,
}

impl ThetaContext {
    pub fn new(constants: EllipticConstants) -> Result<Self> {
        Self::with_truncation(constants, SERIES_CAP, SERIES_TOL)
    }

    pub fn with_truncation(constants: EllipticConstants, truncation: usize, tol: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&constants.q) {
            return Err(Error::NoConvergence { what: "theta series (q >= 1)", iterations: 0 });
        }
        let series = Series { k: constants.k, q: constants.q, tol, cap: truncation };
        let bar = (constants.q > 0.0).then(|| Series {
            k: constants.kbar,
            q: (-PI * constants.k / constants.kbar).exp(),
            tol,
            cap: truncation,
        });
        Ok(Self { constants, truncation, tol, series, bar, jacobi: Jacobi::new(constants.modulus) })
    }

    pub fn jacobi(&self) -> &Jacobi {
        &self.jacobi
    }

    pub fn k(&self) -> f64 {
        self.constants.k
    }

    pub fn kbar(&self) -> f64 {
        self.constants.kbar
    }

    /// Splits `z = w + 2Kp + 2iK̄n` with `w` in the fundamental cell.
    fn reduce(&self, z: C64) -> (C64, i64, i64) {
        let (k, kb) = (self.constants.k, self.constants.kbar);
        let n = if kb.is_finite() { (z.im / (2.0 * kb)).round() } else { 0.0 };
        let p = (z.re / (2.0 * k)).round();
        (C64::new(z.re - 2.0 * k * p, z.im - 2.0 * kb * n), p as i64, n as i64)
    }

    /// `(Θ(z), H(z))`.
    pub fn theta_pair(&self, z: C64) -> (C64, C64) {
        let (w, p, n) = self.reduce(z);
        let v = self.series.v_of(w);
        let theta = self.series.theta4(v).0;
        let mut eta = self.series.theta1(v);
        if p % 2 != 0 {
            eta = -eta;
        }
        if n == 0 {
            return (theta, eta);
        }
        // Θ(w + 2iK̄n) = (-1)ⁿ q^{-n²} e^{-iπnw/K} Θ(w), same factor for H.
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let log_factor = C64::new(-nf * nf * self.constants.q.ln(), 0.0) - C64::new(0.0, PI * nf / self.constants.k) * w;
        let factor = log_factor.exp() * sign;
        (theta * factor, eta * factor)
    }

    /// Jacobi Zeta `Z(z) = Θ'(z)/Θ(z)`.
    pub fn zeta(&self, z: C64) -> Result<C64> {
        if self.constants.q == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        if z.im == 0.0 {
            return Ok(C64::new(self.series.zeta_real(z.re), 0.0));
        }
        let (k, kb) = (self.constants.k, self.constants.kbar);
        let (mut w, _, n) = self.reduce(z);
        let shift = C64::new(0.0, -PI * n as f64 / k);
        let pole = C64::new(0.0, kb.copysign(w.im));
        let distance = (w - pole).norm();
        if distance < POLE_THRESHOLD {
            let full_pole = z - w + pole;
            return Err(Error::Pole { value: z, pole: full_pole, distance });
        }
        let flip = w.im < 0.0;
        if flip {
            w = -w;
        }
        let mut value = if w.im > 0.5 * kb {
            // Z(u + iK̄) = Z(u) + cn u dn u / sn u - iπ/2K
            let u = w - C64::new(0.0, kb);
            let t = self.jacobi.eval_unchecked(u);
            self.series.zeta_raw(u) + t.cn * t.dn / t.sn - C64::new(0.0, PI / (2.0 * k))
        } else {
            self.series.zeta_raw(w)
        };
        if flip {
            value = -value;
        }
        Ok(value + shift)
    }

    /// `Z'(x)` on the real axis, termwise from the series.
    pub fn zeta_prime(&self, x: f64) -> f64 {
        let p = 2.0 * self.constants.k;
        let r = x - p * (x / p).round();
        let (t, dt, ddt) = self.series.theta4(self.series.v_of(C64::new(r, 0.0)));
        let c = PI / (2.0 * self.constants.k);
        let ratio = dt / t;
        ((ddt / t - ratio * ratio) * (c * c)).re
    }

    /// `Z̄(y)`, the Zeta function of the complementary modulus on the real axis.
    pub fn zeta_bar(&self, y: f64) -> f64 {
        self.bar.map_or(0.0, |s| s.zeta_real(y))
    }

    /// `(Re Z(iy), Re Z(K+iy), Re[Z(-x+iy) + Z(x+iy)])`.
    pub fn reality_checks(&self, y: f64, x: f64) -> Result<[f64; 3]> {
        let k = self.constants.k;
        Ok([
            self.zeta(C64::new(0.0, y))?.re,
            self.zeta(C64::new(k, y))?.re,
            (self.zeta(C64::new(-x, y))? + self.zeta(C64::new(x, y))?).re,
        ])
    }

    /// The identity path for `Z(K + iy)` alone:
    /// `i[d̄n s̄c - Z̄ - πy/2KK̄ - κ² s̄n/(c̄n d̄n)]`.
    pub fn zeta_on_k_line_identity(&self, y: f64) -> Result<C64> {
        let (k, kb) = (self.constants.k, self.constants.kbar);
        let (s, c, d) = self.jacobi.real_bar(y);
        let den = c * d;
        let pole_y = kb + 2.0 * kb * ((y - kb) / (2.0 * kb)).round();
        let distance = (y - pole_y).abs();
        if distance < POLE_THRESHOLD || den == 0.0 {
            return Err(Error::Pole {
                value: C64::new(k, y),
                pole: C64::new(k, pole_y),
                distance,
            });
        }
        let m = self.constants.modulus.m;
        let inner = d * s / c - self.zeta_bar(y) - PI * y / (2.0 * k * kb) - m * s / den;
        Ok(C64::new(0.0, inner))
    }

    /// `Z(K + iy)` by the theta series and by the closed identity.
    pub fn zeta_on_k_line(&self, y: f64) -> Result<KLineZeta> {
        let identity = self.zeta_on_k_line_identity(y)?;
        let direct = self.zeta(C64::new(self.constants.k, y))?;
        Ok(KLineZeta { direct, identity })
    }

    /// Partial Fourier sum `Z(x) = (π/K) Σ sin(nπx/K) / sinh(nπK̄/K)`.
    pub fn zeta_fourier(&self, x: f64, terms: usize) -> f64 {
        let (k, kb) = (self.constants.k, self.constants.kbar);
        if !kb.is_finite() {
            return 0.0;
        }
        (1..=terms)
            .map(|n| {
                let nf = n as f64;
                (nf * PI * x / k).sin() / (nf * PI * kb / k).sinh()
            })
            .sum::<f64>()
            * (PI / k)
    }

    /// Partial Fourier sum of `Z'(x)`.
    pub fn zeta_prime_fourier(&self, x: f64, terms: usize) -> f64 {
        let (k, kb) = (self.constants.k, self.constants.kbar);
        if !kb.is_finite() {
            return 0.0;
        }
        let c = PI / k;
        (1..=terms)
            .map(|n| {
                let nf = n as f64;
                nf * (nf * c * x).cos() / (nf * PI * kb / k).sinh()
            })
            .sum::<f64>()
            * (c * c)
    }
}
