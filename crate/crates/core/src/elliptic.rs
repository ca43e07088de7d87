//! Complete elliptic integrals and Jacobi elliptic functions.
//!
//! Everything here is parametrised by the modulus `κ` (with `m = κ²`), the
//! convention used throughout the crate. `K, E` come from the AGM; the
//! real-argument triple `sn, cn, dn` from the descending AGM ladder; complex
//! arguments from the addition theorem applied to `x + iy`, with the
//! imaginary part handled by Jacobi's imaginary transformation (functions of
//! `y` at the complementary modulus `κ̄`).

use core::f64::consts::{FRAC_PI_2, PI};

use num_traits::Float;

use crate::{Error, Result, C64};

/// Distance to a lattice pole below which evaluation is refused.
pub const POLE_THRESHOLD: f64 = 1e-8;

/// Bounds of the `m = κ²` window accepted by the trajectory solvers.
pub const M_CLAMP: f64 = 1e-6;

/// Elliptic modulus `κ ∈ [0, 1]`, stored together with `m = κ²` and the
/// complementary parameter `1 - m` (kept separately so that `κ̄` stays
/// accurate when `κ → 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    pub kappa: f64,
    pub kappa_bar: f64,
    pub m: f64,
    m1: f64,
}

impl Modulus {
    /// From the parameter `m = κ²`.
    pub fn from_m(m: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::ModulusOutOfRange { name: "m", value: m, expected: "0 <= m <= 1" });
        }
        Ok(Self::from_parts(m, 1.0 - m))
    }

    /// From the modulus `κ` itself.
    pub fn from_kappa(kappa: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&kappa) {
            return Err(Error::ModulusOutOfRange {
                name: "kappa",
                value: kappa,
                expected: "0 <= kappa <= 1",
            });
        }
        Ok(Self::from_parts(kappa * kappa, (1.0 - kappa) * (1.0 + kappa)))
    }

    fn from_parts(m: f64, m1: f64) -> Self {
        Self { kappa: m.sqrt(), kappa_bar: m1.sqrt(), m, m1 }
    }

    /// `1 - κ²`.
    pub fn m1(&self) -> f64 {
        self.m1
    }

    /// The complementary modulus `κ̄ = √(1-κ²)`.
    pub fn complement(&self) -> Self {
        Self { kappa: self.kappa_bar, kappa_bar: self.kappa, m: self.m1, m1: self.m }
    }

    /// The modulus pulled into `[M_CLAMP, 1 - M_CLAMP]`; the flag reports
    /// whether anything changed.
    pub fn clamped(&self) -> (Self, bool) {
        if self.m < M_CLAMP {
            (Self::from_parts(M_CLAMP, 1.0 - M_CLAMP), true)
        } else if self.m1 < M_CLAMP {
            (Self::from_parts(1.0 - M_CLAMP, M_CLAMP), true)
        } else {
            (*self, false)
        }
    }
}

/// `K, K̄, E, Ē` and the nome `q = exp(-π K̄/K)` for one modulus.
///
/// At `κ = 0` the complementary integral is infinite: `K̄ = ∞`, `Ē = 1`,
/// `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticConstants {
    pub modulus: Modulus,
    pub k: f64,
    pub kbar: f64,
    pub e: f64,
    pub ebar: f64,
    pub q: f64,
}

impl EllipticConstants {
    /// `K·Ē + K̄·E - K·K̄ - π/2`; zero by Legendre's relation.
    pub fn legendre_residual(&self) -> f64 {
        self.k * self.ebar + self.kbar * self.e - self.k * self.kbar - FRAC_PI_2
    }

    /// Constants of the complementary modulus (requires `0 < κ < 1`).
    pub fn complement(&self) -> Self {
        Self {
            modulus: self.modulus.complement(),
            k: self.kbar,
            kbar: self.k,
            e: self.ebar,
            ebar: self.e,
            q: (-PI * self.k / self.kbar).exp(),
        }
    }
}

/// AGM evaluation of `K(m)` and `E(m)` given `m` and `1 - m`.
fn agm_k_e(m: f64, m1: f64) -> (f64, f64) {
    if m == 0.0 {
        return (FRAC_PI_2, FRAC_PI_2);
    }
    let mut a = 1.0;
    let mut b = m1.sqrt();
    let mut sum = 0.5 * m;
    let mut pow = 0.5;
    for _ in 0..64 {
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
        // Convergence is quadratic: the next c is below 1e-18·a. Waiting for
        // c to vanish lets rounding in a - b feed 2ⁿc² into E.
        if c.abs() <= 1e-9 * a {
            break;
        }
    }
    let k = FRAC_PI_2 / a;
    (k, k * (1.0 - sum))
}

/// Complete elliptic integrals and nome for `κ ∈ [0, 1)`.
pub fn compute_constants(modulus: &Modulus) -> Result<EllipticConstants> {
    if modulus.m1 == 0.0 {
        return Err(Error::SingularModulus);
    }
    let (k, e) = agm_k_e(modulus.m, modulus.m1);
    let (kbar, ebar, q) = if modulus.m == 0.0 {
        (f64::INFINITY, 1.0, 0.0)
    } else {
        let (kb, eb) = agm_k_e(modulus.m1, modulus.m);
        (kb, eb, (-PI * kb / k).exp())
    };
    Ok(EllipticConstants { modulus: *modulus, k, kbar, e, ebar, q })
}

/// Values of `sn, cn, dn` at one (complex) argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: C64,
    pub cn: C64,
    pub dn: C64,
}

impl JacobiTriple {
    /// `(|sn²+cn²-1|, |dn²+κ²sn²-1|)`.
    pub fn identity_residuals(&self, m: f64) -> (f64, f64) {
        let one = C64::new(1.0, 0.0);
        let s2 = self.sn * self.sn;
        ((s2 + self.cn * self.cn - one).norm(), (self.dn * self.dn + s2 * m - one).norm())
    }
}

const LADDER_MAX: usize = 16;

/// Descending AGM sequence `(a_n, c_n)` for one parameter; independent of the
/// argument, so it is built once per modulus.
#[derive(Debug, Clone, Copy)]
struct AgmLadder {
    a: [f64; LADDER_MAX],
    c: [f64; LADDER_MAX],
    len: usize,
}

impl AgmLadder {
    fn new(m: f64, m1: f64) -> Self {
        let mut a = [0.0; LADDER_MAX];
        let mut c = [0.0; LADDER_MAX];
        a[0] = 1.0;
        c[0] = m.sqrt();
        let mut b = m1.sqrt();
        let mut len = 1;
        while len < LADDER_MAX {
            let (ap, cp) = (a[len - 1], c[len - 1]);
            if cp.abs() <= f64::EPSILON * ap {
                break;
            }
            a[len] = 0.5 * (ap + b);
            c[len] = 0.5 * (ap - b);
            b = (ap * b).sqrt();
            len += 1;
        }
        Self { a, c, len }
    }

    /// Jacobi amplitude `am(u)` for `|u|` within a few quarter periods.
    fn amplitude(&self, u: f64) -> f64 {
        let n = self.len - 1;
        let mut phi = (1u64 << n) as f64 * self.a[n] * u;
        for j in (1..=n).rev() {
            phi = 0.5 * (phi + (self.c[j] / self.a[j] * phi.sin()).asin());
        }
        phi
    }
}

/// Real-argument `(sn, cn, dn)` for one parameter, with precomputed ladder.
#[derive(Debug, Clone, Copy)]
struct RealJacobi {
    m: f64,
    m1: f64,
    /// Real period `4K`, infinite at `m = 1`.
    period: f64,
    ladder: AgmLadder,
}

impl RealJacobi {
    fn new(m: f64, m1: f64) -> Self {
        let period = if m1 == 0.0 { f64::INFINITY } else { 4.0 * agm_k_e(m, m1).0 };
        Self { m, m1, period, ladder: AgmLadder::new(m, m1) }
    }

    fn eval(&self, u: f64) -> (f64, f64, f64) {
        if self.m == 0.0 {
            let (s, c) = u.sin_cos();
            return (s, c, 1.0);
        }
        if self.m1 == 0.0 {
            let sech = 1.0 / u.cosh();
            return (u.tanh(), sech, sech);
        }
        let r = u - self.period * (u / self.period).round();
        let a = r.abs();
        let quarter = 0.25 * self.period;
        // Fold (K, 2K] onto [0, K) and pin the quarter period so that
        // cn(K) = 0 exactly.
        let (s, c) = if a == quarter {
            (1.0, 0.0)
        } else if a > quarter {
            let (s, c) = self.ladder.amplitude(2.0 * quarter - a).sin_cos();
            (s, -c)
        } else {
            self.ladder.amplitude(a).sin_cos()
        };
        // dn² = κ̄² + κ² cn²: no cancellation when κ → 1 and cn → 0.
        let d = (self.m1 + self.m * c * c).sqrt();
        (s.copysign(r), c, d)
    }
}

/// Jacobi elliptic functions at a fixed modulus, with everything that does
/// not depend on the argument precomputed.
#[derive(Debug, Clone, Copy)]
pub struct Jacobi {
    modulus: Modulus,
    k: f64,
    kbar: f64,
    re: RealJacobi,
    im: RealJacobi,
}

impl Jacobi {
    pub fn new(modulus: Modulus) -> Self {
        let re = RealJacobi::new(modulus.m, modulus.m1);
        let im = RealJacobi::new(modulus.m1, modulus.m);
        Self { modulus, k: re.period / 4.0, kbar: im.period / 4.0, re, im }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// The evaluator for `κ̄` (real and imaginary roles swapped).
    pub fn complement(&self) -> Self {
        Self { modulus: self.modulus.complement(), k: self.kbar, kbar: self.k, re: self.im, im: self.re }
    }

    /// `(sn, cn, dn)(x, κ)` for real `x`.
    pub fn real(&self, x: f64) -> (f64, f64, f64) {
        self.re.eval(x)
    }

    /// `(sn, cn, dn)(y, κ̄)` for real `y`.
    pub fn real_bar(&self, y: f64) -> (f64, f64, f64) {
        self.im.eval(y)
    }

    /// Nearest pole of the triple (poles sit at `2Kp + i(2q+1)K̄`) and the
    /// distance to it.
    pub fn nearest_pole(&self, z: C64) -> (C64, f64) {
        let px = if self.k.is_finite() { 2.0 * self.k * (z.re / (2.0 * self.k)).round() } else { 0.0 };
        if !self.kbar.is_finite() {
            return (C64::new(px, f64::INFINITY), f64::INFINITY);
        }
        let py = self.kbar + 2.0 * self.kbar * ((z.im - self.kbar) / (2.0 * self.kbar)).round();
        let pole = C64::new(px, py);
        (pole, (z - pole).norm())
    }

    /// `(sn, cn, dn)(z, κ)` for complex `z`.
    pub fn eval(&self, z: C64) -> Result<JacobiTriple> {
        let (pole, distance) = self.nearest_pole(z);
        if distance < POLE_THRESHOLD {
            return Err(Error::Pole { value: z, pole, distance });
        }
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: C64) -> JacobiTriple {
        let (s, c, d) = self.re.eval(z.re);
        if z.im == 0.0 {
            return JacobiTriple { sn: C64::new(s, 0.0), cn: C64::new(c, 0.0), dn: C64::new(d, 0.0) };
        }
        let (s1, c1, d1) = self.im.eval(z.im);
        let m = self.modulus.m;
        let den = c1 * c1 + m * s * s * s1 * s1;
        JacobiTriple {
            sn: C64::new(s * d1, c * d * s1 * c1) / den,
            cn: C64::new(c * c1, -s * d * s1 * d1) / den,
            dn: C64::new(d * c1 * d1, -m * s * c * s1) / den,
        }
    }
}

/// `(sn, cn, dn)(z, κ)`; see [`Jacobi`] to amortise the setup over many calls.
pub fn jacobi_eval(z: C64, modulus: &Modulus) -> Result<JacobiTriple> {
    Jacobi::new(*modulus).eval(z)
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
pub fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    for _ in 0..64 {
        let mu = (x + y + z) / 3.0;
        let (dx, dy, dz) = (1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu);
        let eps = dx.abs().max(dy.abs()).max(dz.abs());
        if eps < 1e-4 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / mu.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
    let mu = (x + y + z) / 3.0;
    1.0 / mu.sqrt()
}

/// The unique `x ∈ [0, K]` with `cn(x, κ) = c`.
///
/// Closed form `x = F(arccos c | κ)` through `R_F`, polished with one Newton
/// step on `cn`.
pub fn invert_cn(c: f64, modulus: &Modulus) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::ArgumentOutOfRange { name: "c", value: c, expected: "0 <= c <= 1" });
    }
    if c == 1.0 {
        return Ok(0.0);
    }
    let m = modulus.m;
    let s2 = (1.0 - c) * (1.0 + c);
    let s = s2.sqrt();
    let mut x = s * carlson_rf(c * c, 1.0 - m * s2, 1.0);
    if c == 0.0 {
        return Ok(x);
    }
    let jac = RealJacobi::new(m, modulus.m1);
    let (sn, cn, dn) = jac.eval(x);
    let slope = sn * dn;
    if slope > 1e-3 {
        x += (cn - c) / slope;
    }
    Ok(x)
}
