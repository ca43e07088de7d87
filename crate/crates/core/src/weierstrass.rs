//! The `n = 2` problem in Weierstrass form,
//! `Λ'' = [6℘(u) + E] Λ`, and its link to the Jacobi form.
//!
//! Lattice data come from the modulus: `e₁ - e₃ = s = (K/ω₁)²`,
//! `κ² = (e₂-e₃)/(e₁-e₃)`, `ω₂ = iK̄/√s`. With `w = √s·u`,
//!
//! ```text
//!     ℘(u) = e₃ + s ns²w,     ζ(u) = η₁u/ω₁ + √s [Z(w) + cn w dn w / sn w]
//! ```
//!
//! On the line `u = ω₁ + ix` the potential `-6℘` is the Lamé potential of
//! the *complementary* modulus: `E = s·ε(κ̄) - 6e₁` and `k = √s·k(κ̄)`. The
//! edges `(-√3g₂, -3e₁, -3e₂, -3e₃, √3g₂)` therefore map onto the Jacobi
//! edges at `κ` by `E_j = s(6 - ε_{6-j}) - 6e₁`: an affine map of slope `-s`
//! that reverses the order.

use core::f64::consts::PI;

use num_traits::Float;

use crate::bands::{band_edges, BandEdges};
use crate::elliptic::{compute_constants, Modulus, POLE_THRESHOLD};
use crate::theta::ThetaContext;
use crate::{Error, Result, C64};

/// Lattice data of `℘` for one modulus and real half-period.
#[derive(Debug, Clone, Copy)]
pub struct WeierstrassData {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub g2: f64,
    pub g3: f64,
    pub omega1: f64,
    pub omega2: C64,
    pub eta1: f64,
    pub eta2: C64,
    /// `e₁ - e₃`.
    pub scale: f64,
    ctx: ThetaContext,
}

/// Spectral data at one energy `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralFunctions {
    pub energy: f64,
    /// `X = C₀℘² + C₁℘ + C₂` with `(C₀, C₁, C₂) = (18, -6E, 2E² - 9g₂/2)`.
    pub x_coeffs: [f64; 3],
    /// `℘(t₁,₂) = E/6 ± √(3g₂ - E²)/(2√3)`.
    pub wp_t1: C64,
    pub wp_t2: C64,
    /// `3g₂ - E² < 0`: the two values are complex conjugates.
    pub complex_pair: bool,
    /// `Q² = -(E² - 3g₂)(16E³ - 36Eg₂ + 108g₃)`.
    pub q_squared: f64,
    pub edges: [f64; 5],
}

/// Result of the Weierstrass momentum formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassMomentum {
    /// `Re Σ (ζ(t_r) - η₂ t_r/ω₂)` on the branch with `℘'(t₁) + ℘'(t₂) = 0`.
    pub k: f64,
    pub imag: f64,
    /// `|k|` folded into `[0, π/2|ω₂|]`.
    pub reduced: f64,
    pub t1: C64,
    pub t2: C64,
    /// Both sign choices for `t₂` give a real `k`; reality alone does not
    /// select the branch.
    pub ambiguous_by_reality: bool,
}

/// Widths and gaps `[w₁, g₁, w₂, g₂]` on both sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyReport {
    pub m: f64,
    pub scale: f64,
    pub weierstrass: [f64; 4],
    /// Same-modulus Jacobi values, paired position by position.
    pub jacobi: [f64; 4],
    /// Jacobi values at `κ̄` times `s`, the exact counterpart for every `κ`.
    pub jacobi_complement: [f64; 4],
    pub literal_max_diff: f64,
    pub complement_max_diff: f64,
    /// Least-squares fit `E_j = a + b·ε_{6-j}(κ)` over the five edges.
    pub affine_slope: f64,
    pub affine_intercept: f64,
    pub affine_max_dev: f64,
}

impl ConsistencyReport {
    /// The complement pairing and the affine edge map hold to `tol`.
    pub fn passes(&self, tol: f64) -> bool {
        self.complement_max_diff < tol && self.affine_max_dev < tol
    }

    /// The same-modulus pairing also holds (it does at `κ² = 1/2`).
    pub fn literal_passes(&self, tol: f64) -> bool {
        self.literal_max_diff < tol
    }
}

fn widths_gaps(e: &[f64; 5]) -> [f64; 4] {
    [e[1] - e[0], e[2] - e[1], e[3] - e[2], e[4] - e[3]]
}

impl WeierstrassData {
    /// Lattice with `κ² = (e₂-e₃)/(e₁-e₃)` and real half-period `ω₁`.
    pub fn from_modulus(modulus: &Modulus, omega1: f64) -> Result<Self> {
        let m = modulus.m;
        if !(m > 0.0 && modulus.m1() > 0.0) {
            return Err(Error::ModulusOutOfRange { name: "m", value: m, expected: "0 < m < 1" });
        }
        if !(omega1 > 0.0 && omega1.is_finite()) {
            return Err(Error::ArgumentOutOfRange { name: "omega1", value: omega1, expected: "> 0" });
        }
        let c = compute_constants(modulus)?;
        let s = (c.k / omega1).powi(2);
        let e1 = s * (2.0 - m) / 3.0;
        let e2 = s * (2.0 * m - 1.0) / 3.0;
        let e3 = -s * (1.0 + m) / 3.0;
        let g2 = -4.0 * (e1 * e2 + e2 * e3 + e1 * e3);
        let g3 = 4.0 * e1 * e2 * e3;
        let omega2 = C64::new(0.0, c.kbar / s.sqrt());
        let eta1 = c.k * c.e / omega1 - e1 * omega1;
        let mut wd = Self {
            e1,
            e2,
            e3,
            g2,
            g3,
            omega1,
            omega2,
            eta1,
            eta2: C64::new(0.0, 0.0),
            scale: s,
            ctx: ThetaContext::new(c)?,
        };
        wd.eta2 = wd.zeta_cell(omega2)?;
        Ok(wd)
    }

    pub fn modulus(&self) -> Modulus {
        self.ctx.constants.modulus
    }

    fn w_of(&self, u: C64) -> C64 {
        u * self.scale.sqrt()
    }

    fn check_lattice_pole(&self, u: C64) -> Result<()> {
        let a = (u.re / (2.0 * self.omega1)).round();
        let b = (u.im / (2.0 * self.omega2.im)).round();
        let pole = C64::new(2.0 * a * self.omega1, 2.0 * b * self.omega2.im);
        let distance = (u - pole).norm();
        if distance < POLE_THRESHOLD {
            return Err(Error::Pole { value: u, pole, distance });
        }
        Ok(())
    }

    /// `℘(u)`.
    pub fn wp(&self, u: C64) -> Result<C64> {
        self.check_lattice_pole(u)?;
        let sn = self.ctx.jacobi().eval(self.w_of(u))?.sn;
        Ok(C64::new(self.e3, 0.0) + self.scale / (sn * sn))
    }

    /// `℘'(u) = -2s^{3/2} cn dn / sn³`.
    pub fn wp_prime(&self, u: C64) -> Result<C64> {
        self.check_lattice_pole(u)?;
        let t = self.ctx.jacobi().eval(self.w_of(u))?;
        Ok(t.cn * t.dn / (t.sn * t.sn * t.sn) * (-2.0 * self.scale.powf(1.5)))
    }

    /// `ζ(u)` for `u` in the strip `|Im w| ≤ K̄` (no lattice reduction).
    fn zeta_cell(&self, u: C64) -> Result<C64> {
        let (k, kb) = (self.ctx.k(), self.ctx.kbar());
        let w = self.w_of(u);
        let root = self.scale.sqrt();
        let linear = u * (self.eta1 / self.omega1);
        let f = if w.im > 0.5 * kb {
            self.ctx.zeta(w - C64::new(0.0, kb))? - C64::new(0.0, PI / (2.0 * k))
        } else if w.im < -0.5 * kb {
            self.ctx.zeta(w + C64::new(0.0, kb))? + C64::new(0.0, PI / (2.0 * k))
        } else {
            let t = self.ctx.jacobi().eval(w)?;
            self.ctx.zeta(w)? + t.cn * t.dn / t.sn
        };
        Ok(linear + f * root)
    }

    /// Weierstrass `ζ(u)`, reduced by `ζ(u + 2ω) = ζ(u) + 2η`.
    pub fn zeta(&self, u: C64) -> Result<C64> {
        self.check_lattice_pole(u)?;
        let a = (u.re / (2.0 * self.omega1)).round();
        let b = (u.im / (2.0 * self.omega2.im)).round();
        let u0 = u - C64::new(2.0 * a * self.omega1, 2.0 * b * self.omega2.im);
        Ok(self.zeta_cell(u0)? + 2.0 * a * self.eta1 + self.eta2 * (2.0 * b))
    }

    /// `η₁ω₂ - η₂ω₁ - iπ/2`.
    pub fn legendre_residual(&self) -> C64 {
        self.omega2 * self.eta1 - self.eta2 * self.omega1 - C64::new(0.0, 0.5 * PI)
    }

    /// `(-√3g₂, -3e₁, -3e₂, -3e₃, √3g₂)`.
    pub fn edges(&self) -> [f64; 5] {
        let r = (3.0 * self.g2).sqrt();
        [-r, -3.0 * self.e1, -3.0 * self.e2, -3.0 * self.e3, r]
    }

    /// `Q²(E)`.
    pub fn q_squared(&self, e: f64) -> f64 {
        -(e * e - 3.0 * self.g2) * (16.0 * e * e * e - 36.0 * e * self.g2 + 108.0 * self.g3)
    }

    /// `Q²` from the Wronskian of `√X exp(∓Q∫du/X)` evaluated at a point
    /// where `℘ = p`: `-4[X²(6℘+E) - XX''/2 + X'²/4]`. Constant in `p` when
    /// `X` solves its third-order equation.
    pub fn q_squared_from_x(&self, e: f64, p: C64) -> C64 {
        let [c0, c1, c2] = Self::x_coeffs(e, self.g2);
        let x = p * p * c0 + p * c1 + c2;
        let wp1_sq = p * p * p * 4.0 - p * self.g2 - self.g3;
        let wp2 = p * p * 6.0 - 0.5 * self.g2;
        let dx_dp = p * (2.0 * c0) + c1;
        let x1_sq = dx_dp * dx_dp * wp1_sq;
        let x2 = wp1_sq * (2.0 * c0) + dx_dp * wp2;
        -(x * x * (p * 6.0 + e) - x * x2 * 0.5 + x1_sq * 0.25) * 4.0
    }

    fn x_coeffs(e: f64, g2: f64) -> [f64; 3] {
        [18.0, -6.0 * e, 2.0 * e * e - 4.5 * g2]
    }

    /// `X` coefficients, `℘(t₁,₂)`, `Q²` and the edges at energy `E`.
    pub fn spectral_functions(&self, e: f64) -> SpectralFunctions {
        let disc = 3.0 * self.g2 - e * e;
        let root = C64::new(disc, 0.0).sqrt() / (2.0 * 3.0f64.sqrt());
        let centre = C64::new(e / 6.0, 0.0);
        SpectralFunctions {
            energy: e,
            x_coeffs: Self::x_coeffs(e, self.g2),
            wp_t1: centre + root,
            wp_t2: centre - root,
            complex_pair: disc < 0.0,
            q_squared: self.q_squared(e),
            edges: self.edges(),
        }
    }

    /// A preimage `t` of `℘(t) = target` with `Re t ∈ [0, ω₁]`,
    /// `Im t ∈ [-|ω₂|, |ω₂|]`: coarse grid, then Newton.
    pub fn invert_wp(&self, target: C64) -> Result<C64> {
        const NA: usize = 24;
        const NB: usize = 24;
        let (w1, w2) = (self.omega1, self.omega2.im);
        let mut best = (f64::INFINITY, C64::new(0.5 * w1, 0.0));
        for i in 0..=NA {
            for j in 0..=2 * NB {
                let t = C64::new(w1 * i as f64 / NA as f64, w2 * (j as f64 / NB as f64 - 1.0));
                if let Ok(v) = self.wp(t) {
                    let d = (v - target).norm();
                    if d < best.0 {
                        best = (d, t);
                    }
                }
            }
        }
        let scale = 1.0 + target.norm();
        let mut t = best.1;
        for _ in 0..60 {
            let f = self.wp(t)? - target;
            if f.norm() <= 1e-15 * scale {
                return Ok(t);
            }
            let d = self.wp_prime(t)?;
            if d.norm() == 0.0 {
                break;
            }
            let step = f / d;
            t -= step;
            if step.norm() <= 1e-16 * (1.0 + t.norm()) {
                break;
            }
        }
        let f = (self.wp(t)? - target).norm();
        if f <= 1e-8 * scale {
            Ok(t)
        } else {
            Err(Error::NoConvergence { what: "℘ inversion", iterations: 60 })
        }
    }

    /// Band index (1..=3) of `E`, or `None` in a gap.
    pub fn band_of(&self, e: f64) -> Option<u8> {
        let ed = self.edges();
        if e >= ed[0] && e <= ed[1] {
            Some(1)
        } else if e >= ed[2] && e <= ed[3] {
            Some(2)
        } else if e >= ed[4] {
            Some(3)
        } else {
            None
        }
    }

    /// `k = Σ_r (ζ(t_r) - η₂ t_r/ω₂)`.
    ///
    /// `℘(t_r)` fixes each `t_r` only up to sign; the pair with
    /// `℘'(t₁) + ℘'(t₂) = 0` is taken.
    pub fn momentum_weierstrass(&self, e: f64) -> Result<WeierstrassMomentum> {
        if self.band_of(e).is_none() {
            return Err(Error::InGap { eps: e, discriminant: f64::NAN });
        }
        let sf = self.spectral_functions(e);
        let t1 = self.invert_wp(sf.wp_t1)?;
        let t2 = self.invert_wp(sf.wp_t2)?;
        let p1 = self.wp_prime(t1)?;
        let p2 = self.wp_prime(t2)?;
        let term = |t: C64| -> Result<C64> { Ok(self.zeta(t)? - self.eta2 * t / self.omega2) };
        let z1 = term(t1)?;
        let plus = z1 + term(t2)?;
        let minus = z1 + term(-t2)?;
        let (k, t2) = if (p1 - p2).norm() <= (p1 + p2).norm() { (minus, -t2) } else { (plus, t2) };
        let tol = 1e-9 * (1.0 + k.norm());
        let ambiguous = plus.im.abs() < tol && minus.im.abs() < tol && (plus.re - minus.re).abs() > tol;
        let unit = PI / self.omega2.im;
        let r = k.re.abs() - unit * (k.re.abs() / unit).floor();
        Ok(WeierstrassMomentum {
            k: k.re,
            imag: k.im,
            reduced: r.min(unit - r),
            t1,
            t2,
            ambiguous_by_reality: ambiguous,
        })
    }

    /// Jacobi energy at the complementary modulus for Weierstrass energy `E`.
    pub fn complement_energy(&self, e: f64) -> f64 {
        (e + 6.0 * self.e1) / self.scale
    }
}

/// Widths and gaps from both forms (with `ω₁ = K`, so `e₁ - e₃ = 1`), the
/// complementary-modulus pairing, and the affine map between the edge sets.
pub fn consistency_check(modulus: &Modulus) -> Result<ConsistencyReport> {
    let c = compute_constants(modulus)?;
    let wd = WeierstrassData::from_modulus(modulus, c.k)?;
    let we = wd.edges();
    let je: BandEdges = band_edges(modulus);
    let jc = band_edges(&modulus.complement());
    let weierstrass = widths_gaps(&we);
    let jacobi = widths_gaps(&je.eps);
    let mut jacobi_complement = widths_gaps(&jc.eps);
    for v in &mut jacobi_complement {
        *v *= wd.scale;
    }
    let max_diff = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);

    // E_j against ε_{6-j}
    let xs: [f64; 5] = core::array::from_fn(|j| je.eps[4 - j]);
    let n = 5.0;
    let (sx, sy) = (xs.iter().sum::<f64>(), we.iter().sum::<f64>());
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&we).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let dev = xs.iter().zip(&we).map(|(x, y)| (intercept + slope * x - y).abs()).fold(0.0, f64::max);

    Ok(ConsistencyReport {
        m: modulus.m,
        scale: wd.scale,
        weierstrass,
        jacobi,
        jacobi_complement,
        literal_max_diff: max_diff(&weierstrass, &jacobi),
        complement_max_diff: max_diff(&weierstrass, &jacobi_complement),
        affine_slope: slope,
        affine_intercept: intercept,
        affine_max_dev: dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> WeierstrassData {
        let md = Modulus::from_m(0.5).unwrap();
        let k = compute_constants(&md).unwrap().k;
        WeierstrassData::from_modulus(&md, k).unwrap()
    }

    #[test]
    fn roots_at_half() {
        let wd = half();
        assert!((wd.e1 - 0.5).abs() < 1e-15 && wd.e2.abs() < 1e-15 && (wd.e3 + 0.5).abs() < 1e-15);
        assert!((wd.g2 - 1.0).abs() < 1e-14 && wd.g3.abs() < 1e-15);
        let s3 = 3.0f64.sqrt();
        for (a, b) in wd.edges().iter().zip([-s3, -1.5, 0.0, 1.5, s3]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn unit_scale_e1() {
        let md = Modulus::from_m(0.3).unwrap();
        let k = compute_constants(&md).unwrap().k;
        let wd = WeierstrassData::from_modulus(&md, k).unwrap();
        assert!((wd.e1 - 1.7 / 3.0).abs() < 1e-15);
        assert!((wd.e1 + wd.e2 + wd.e3).abs() < 1e-15);
    }

    #[test]
    fn legendre_relation() {
        assert!(half().legendre_residual().norm() < 1e-12);
    }

    #[test]
    fn q_squared_vanishes_at_edges() {
        let wd = half();
        for e in wd.edges() {
            assert!(wd.q_squared(e).abs() < 1e-12, "{e}");
        }
        let sf = wd.spectral_functions(3.0f64.sqrt());
        assert!((sf.wp_t1 - sf.wp_t2).norm() < 1e-7);
    }

    #[test]
    fn wronskian_closed_form() {
        let wd = half();
        let e = 0.77;
        for p in [C64::new(0.3, 0.0), C64::new(-1.2, 0.4), C64::new(2.0, -1.0)] {
            let q = wd.q_squared(e);
            assert!((wd.q_squared_from_x(e, p) - q).norm() < 1e-11 * q.abs());
        }
    }

    #[test]
    fn consistency_at_half_both_pairings() {
        let r = consistency_check(&Modulus::from_m(0.5).unwrap()).unwrap();
        assert!(r.passes(1e-10) && r.literal_passes(1e-10), "{r:?}");
        assert!((r.weierstrass[0] - (3.0f64.sqrt() - 1.5)).abs() < 1e-12);
        assert!((r.weierstrass[1] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn consistency_off_half_needs_complement() {
        let r = consistency_check(&Modulus::from_m(0.3).unwrap()).unwrap();
        assert!(r.passes(1e-10), "{r:?}");
        assert!(!r.literal_passes(1e-10));
        assert!((r.affine_slope + r.scale).abs() < 1e-12);
    }

    #[test]
    fn momentum_matches_complement_jacobi() {
        use crate::bands::{Band, LameBands};
        for m in [0.3, 0.5, 0.7] {
            let md = Modulus::from_m(m).unwrap();
            let wd = WeierstrassData::from_modulus(&md, 1.3).unwrap();
            let lb = LameBands::new(md.complement()).unwrap();
            for band in Band::ALL {
                for t in [0.2, 0.5, 0.8] {
                    let p = lb.point(band, t).unwrap();
                    let e = wd.scale * p.eps - 6.0 * wd.e1;
                    let km = wd.momentum_weierstrass(e).unwrap();
                    assert!(km.imag.abs() < 1e-9, "m={m} {band} t={t}: {km:?}");
                    let kj = wd.scale.sqrt() * p.k;
                    let u = PI / wd.omega2.im;
                    let r = kj.rem_euclid(u);
                    let want = r.min(u - r);
                    assert!((km.reduced - want).abs() < 1e-8, "m={m} {band} t={t}: {} vs {want}", km.reduced);
                }
            }
        }
    }
}
