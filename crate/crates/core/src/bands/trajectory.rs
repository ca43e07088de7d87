//! The three `(α₁, α₂)` trajectories.
//!
//! Band 1 lives on `α = K + iy`. Writing `a(y) = s̄n c̄n / d̄n³`, the
//! constraint is `a(y₁) + a(y₂) = 0`. With `u = y₁ + 2K̄ ∈ [c₀, K̄]` and
//! `w = 2K̄ - y₂ ∈ [0, c₀]` it becomes `a(u) = a(w)` on either side of the
//! maximum of `a` at `c₀`; `w` is swept and `u` solved for.
//!
//! Band 2 pairs `K + iy₁` with `iy₂`: `κ̄² a(y₁) = b(y₂)`,
//! `b(y) = s̄n d̄n / c̄n³`; `y₁` is swept down from `K̄` and `y₂` solved for.
//!
//! Band 3 uses `α = ∓x + iy` with `x` swept down from `x₀`; `y` comes from
//! the rational expression for `s̄n² y` and is then polished on the raw
//! constraint `Im[sn cn dn (x+iy)] = 0`.

use core::f64::consts::PI;

use alloc::boxed::Box;
use num_traits::Float;

use super::{AlphaPair, Band, BandPoint, LameBands};
use crate::elliptic::invert_cn;
use crate::roots::{bisect, brent};
use crate::{Error, Result, C64};

/// Slack on the fundamental-region bounds.
const REGION_SLACK: f64 = 1e-12;

impl LameBands {
    fn bar(&self, y: f64) -> (f64, f64, f64) {
        self.ctx.jacobi().real_bar(y)
    }

    fn a_bar(&self, y: f64) -> f64 {
        let (s, c, d) = self.bar(y);
        s * c / (d * d * d)
    }

    fn b_bar(&self, y: f64) -> f64 {
        let (s, c, d) = self.bar(y);
        s * d / (c * c * c)
    }

    /// The trajectory point of `band` at `t ∈ [0, 1]` (band 3: `[0, 1)`).
    pub fn point(&self, band: Band, t: f64) -> Result<BandPoint> {
        self.point_inner(band, t).map_err(|e| match e {
            e @ Error::Trajectory { .. } => e,
            other => Error::Trajectory { band: band.index(), t, m: self.modulus().m, source: Box::new(other) },
        })
    }

    pub fn band1_point(&self, t: f64) -> Result<BandPoint> {
        self.point(Band::One, t)
    }

    pub fn band2_point(&self, t: f64) -> Result<BandPoint> {
        self.point(Band::Two, t)
    }

    pub fn band3_point(&self, t: f64) -> Result<BandPoint> {
        self.point(Band::Three, t)
    }

    fn point_inner(&self, band: Band, t: f64) -> Result<BandPoint> {
        let pair = self.pair_at(band, t)?;
        self.check_region(&pair)?;
        let edge = self.edge_values(band, t);
        let check = match self.hh_energy_and_residual(&pair) {
            Ok(h) => Some(h),
            Err(_) if edge.is_some() => None,
            Err(e) => return Err(e),
        };
        let (k, reality) = self.momentum_from_alphas(&pair)?;
        let (k, eps) = match edge {
            Some(v) => v,
            None => (k, self.closed_form_energy(&pair)?),
        };
        Ok(BandPoint { t, k, eps, pair, check, reality })
    }

    /// Exact `(k, ε)` at the trajectory endpoints.
    fn edge_values(&self, band: Band, t: f64) -> Option<(f64, f64)> {
        let e = self.edges.eps;
        let unit = self.zone_unit();
        match (band, t) {
            (Band::One, t) if t == 0.0 => Some((0.0, e[0])),
            (Band::One, t) if t == 1.0 => Some((0.5 * unit, e[1])),
            (Band::Two, t) if t == 0.0 => Some((0.5 * unit, e[2])),
            (Band::Two, t) if t == 1.0 => Some((unit, e[3])),
            (Band::Three, t) if t == 0.0 => Some((unit, e[4])),
            _ => None,
        }
    }

    /// The `(α₁, α₂)` pair at trajectory parameter `t`.
    pub fn pair_at(&self, band: Band, t: f64) -> Result<AlphaPair> {
        let t_max_ok = match band {
            Band::Three => t < 1.0,
            _ => t <= 1.0,
        };
        if !(t >= 0.0 && t_max_ok) {
            return Err(Error::ArgumentOutOfRange {
                name: "t",
                value: t,
                expected: if band == Band::Three { "0 <= t < 1" } else { "0 <= t <= 1" },
            });
        }
        let (k, kb) = (self.ctx.k(), self.ctx.kbar());
        let c0 = self.params.c0;
        let (c1, c2) = match band {
            Band::One => {
                if t == 1.0 {
                    (-kb, 2.0 * kb)
                } else {
                    let w = c0 * (1.0 - t);
                    let target = self.a_bar(w);
                    let u = if t == 0.0 || self.a_bar(c0) <= target {
                        c0
                    } else {
                        bisect("band-1 constraint", c0, kb, |u| self.a_bar(u) - target)?
                    };
                    (u - 2.0 * kb, 2.0 * kb - w)
                }
            }
            Band::Two => {
                if t == 0.0 || t == 1.0 {
                    ((1.0 - t) * kb, 0.0)
                } else {
                    let y1 = kb * (1.0 - t);
                    let target = self.modulus().m1() * self.a_bar(y1);
                    // b̄ rises monotonically to ∞ at K̄. For κ² near 1/2 the root
                    // stays below K̄/2; for small κ² it does not.
                    let mut hi = 0.5 * kb;
                    let mut gap = 0.5 * kb;
                    while self.b_bar(hi) < target {
                        gap *= 0.5;
                        if gap < 1e-12 * kb {
                            return Err(Error::RegionViolation { band: 2, c1: y1, c2: f64::NAN });
                        }
                        hi = kb - gap;
                    }
                    (y1, bisect("band-2 constraint", 0.0, hi, |y| self.b_bar(y) - target)?)
                }
            }
            Band::Three => {
                let x0 = self.params.x0;
                if t == 0.0 {
                    (x0, 0.0)
                } else {
                    let x = x0 * (1.0 - t);
                    (x, self.band3_height(x)?)
                }
            }
        };
        Ok(AlphaPair::from_coords(band, c1, c2, k))
    }

    /// `s̄n² y` on the band-3 trajectory from the rational form.
    pub fn band3_sn2(&self, x: f64) -> f64 {
        let m = self.modulus().m;
        let m1 = self.modulus().m1();
        let (s, c, d) = self.ctx.jacobi().real(x);
        let (s2, c2, d2) = (s * s, c * c, d * d);
        (m * s2 * c2 + s2 * d2 - c2 * d2) / ((m1 * s2 - c2 - m * s2 * c2) * d2)
    }

    /// Solves the band-3 constraint for `y` at given `x ∈ (0, x₀)`.
    fn band3_height(&self, x: f64) -> Result<f64> {
        let kb = self.ctx.kbar();
        let r = self.band3_sn2(x);
        if !(0.0..1.0).contains(&r) {
            return Err(Error::RegionViolation { band: 3, c1: x, c2: f64::NAN });
        }
        let bar = self.modulus().complement();
        let y0 = invert_cn((1.0 - r).sqrt(), &bar)?;

        // Raw constraint with the trivial root at y = 0 divided out.
        let jac = self.ctx.jacobi();
        let h = |y: f64| {
            let t = jac.eval_unchecked(C64::new(x, y));
            (t.sn * t.cn * t.dn).im / y
        };
        let f0 = h(y0);
        if f0 == 0.0 {
            return Ok(y0);
        }
        let mut delta = 1e-12 * y0.max(1e-3);
        while delta < kb {
            let lo = (y0 - delta).max(0.5 * y0);
            let hi = (y0 + delta).min(kb);
            let (fl, fh) = (h(lo), h(hi));
            if fl.signum() != fh.signum() && fl.is_finite() && fh.is_finite() {
                return brent("band-3 constraint", lo, hi, 0.0, h);
            }
            if lo <= 0.5 * y0 && hi >= kb {
                break;
            }
            delta *= 8.0;
        }
        Err(Error::Bracket { what: "band-3 constraint", lo: 0.5 * y0, hi: kb, f_lo: f0, f_hi: f64::NAN })
    }

    fn check_region(&self, pair: &AlphaPair) -> Result<()> {
        let (k, kb) = (self.ctx.k(), self.ctx.kbar());
        let (c1, c2) = (pair.coords.c1, pair.coords.c2);
        let s = REGION_SLACK * kb.max(k);
        let inside = match pair.band {
            Band::One => c1 > -1.5 * kb - s && c1 <= -kb + s && c2 > kb - s && c2 <= 2.0 * kb + s,
            Band::Two => c1 >= -s && c1 <= kb + s && c2 >= -s && c2 < kb,
            Band::Three => c1 >= -s && c1 <= 0.5 * k + s && c2 >= -s && c2 <= kb + s,
        };
        if inside {
            Ok(())
        } else {
            Err(Error::RegionViolation { band: pair.band.index(), c1, c2 })
        }
    }

    /// Energy from the band-specific closed form (valid on the trajectory).
    pub fn closed_form_energy(&self, pair: &AlphaPair) -> Result<f64> {
        let m = self.modulus().m;
        let m1 = self.modulus().m1();
        let (y1, y2) = (pair.coords.c1, pair.coords.c2);
        let eps = match pair.band {
            Band::One => {
                let (s1, c1, d1) = self.bar(y1);
                let (s2, c2, d2) = self.bar(y2);
                2.0 * m + m1 * c1 * c1 / (d1 * d1) + m1 * c2 * c2 / (d2 * d2) + 2.0 * m1 * m1 * (s1 * c1 / d1) * (s2 * c2 / d2)
            }
            Band::Two => {
                let (_, c1, d1) = self.bar(y1);
                let (_, c2, d2) = self.bar(y2);
                let c2sq = c2 * c2;
                2.0 * m + m1 * c1 * c1 / (d1 * d1) + d2 * d2 / c2sq + 2.0 * d1 * d1 * d2 * d2 / (c2sq * c2sq)
            }
            Band::Three => {
                let jac = self.ctx.jacobi();
                let a = jac.eval(pair.alpha1)?;
                let b = jac.eval(pair.alpha2)?;
                let e = a.dn * a.dn + b.dn * b.dn - a.cn * a.dn * b.cn * b.dn / (a.sn * b.sn) * 2.0;
                2.0 * m + e.re
            }
        };
        if eps.is_finite() {
            Ok(eps)
        } else {
            Err(Error::NonFinite { what: "closed-form energy" })
        }
    }

    /// Momentum of a band-1 or band-2 pair through the closed expressions
    /// of `Z(K+iy)` and `Z(iy)` in functions of the complementary modulus.
    /// Band 3 falls back to the theta series.
    pub fn momentum_closed_form(&self, pair: &AlphaPair) -> Result<f64> {
        let (k, kb) = (self.ctx.k(), self.ctx.kbar());
        let m1 = self.modulus().m1();
        let lin = |y: f64| self.ctx.zeta_bar(y) + PI * y / (2.0 * k * kb);
        let g = |y: f64| {
            let (s, c, d) = self.bar(y);
            m1 * s * c / d - lin(y)
        };
        let h = |y: f64| {
            let (s, c, d) = self.bar(y);
            d * s / c - lin(y)
        };
        let (y1, y2) = (pair.coords.c1, pair.coords.c2);
        let raw = match pair.band {
            Band::One => g(y1) + g(y2),
            Band::Two => g(y1) + h(y2),
            Band::Three => return Ok(self.momentum_from_alphas(pair)?.0),
        } + self.zone_unit();
        Ok(self.fold(pair.band, raw))
    }

    /// The `t` at which `band` reaches momentum `k` (monotone bisection).
    pub fn t_at_momentum(&self, band: Band, k: f64) -> Result<f64> {
        self.t_solve(band, k, |p| p.k)
    }

    /// The `t` at which `band` reaches energy `eps`.
    pub fn t_at_energy(&self, band: Band, eps: f64) -> Result<f64> {
        self.t_solve(band, eps, |p| p.eps)
    }

    fn t_solve<F: Fn(&BandPoint) -> f64>(&self, band: Band, target: f64, value: F) -> Result<f64> {
        let at = |t: f64| self.point(band, t).map(|p| value(&p));
        let lo_val = at(0.0)?;
        if target <= lo_val {
            return if target == lo_val {
                Ok(0.0)
            } else {
                Err(Error::ArgumentOutOfRange { name: "target", value: target, expected: "inside the band" })
            };
        }
        let mut hi = 1.0;
        if band == Band::Three {
            // Walk towards the pole until the target is passed.
            let mut j = 1;
            loop {
                hi = 1.0 - 0.5f64.powi(j);
                match at(hi) {
                    Ok(v) if v >= target => break,
                    Ok(_) if j < 40 => j += 1,
                    Ok(v) => {
                        return Err(Error::Bracket { what: "band-3 parameter", lo: 0.0, hi, f_lo: lo_val - target, f_hi: v - target })
                    }
                    Err(e) => return Err(e),
                }
            }
        } else {
            let hi_val = at(1.0)?;
            if target >= hi_val {
                return if target == hi_val {
                    Ok(1.0)
                } else {
                    Err(Error::ArgumentOutOfRange { name: "target", value: target, expected: "inside the band" })
                };
            }
        }
        let mut failure = None;
        let t = bisect("trajectory parameter", 0.0, hi, |t| match at(t) {
            Ok(v) => v - target,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        });
        match failure {
            Some(e) => Err(e),
            None => t,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::Modulus;

    fn solver(m: f64) -> LameBands {
        LameBands::new(Modulus::from_m(m).unwrap()).unwrap()
    }

    #[test]
    fn endpoints_reproduce_edges() {
        let b = solver(0.5);
        let e = b.edges().eps;
        let unit = b.zone_unit();
        let cases = [
            (Band::One, 0.0, 0.0, e[0]),
            (Band::One, 1.0, 0.5 * unit, e[1]),
            (Band::Two, 0.0, 0.5 * unit, e[2]),
            (Band::Two, 1.0, unit, e[3]),
            (Band::Three, 0.0, unit, e[4]),
        ];
        for (band, t, k, eps) in cases {
            let p = b.point(band, t).unwrap();
            assert_eq!((p.k, p.eps), (k, eps));
            assert!(p.reality < 1e-12, "{band} {t}: {}", p.reality);
            // The momentum formula lands on the same zone boundary.
            let (kd, _) = b.momentum_from_alphas(&p.pair).unwrap();
            assert!((kd - k).abs() < 1e-9, "{band} t={t}: {kd} vs {k}");
            if let Some(h) = p.check {
                assert!((h.eps - eps).abs() < 1e-9, "{band} t={t}: {} vs {eps}", h.eps);
            }
        }
    }

    #[test]
    fn interior_points_satisfy_constraint() {
        for m in [0.2, 0.5, 0.8] {
            let b = solver(m);
            for band in Band::ALL {
                for t in [0.1, 0.5, 0.9] {
                    let p = b.point(band, t).unwrap();
                    let h = p.check.unwrap();
                    assert!(h.residual < 1e-10, "m={m} {band} t={t}: residual {}", h.residual);
                    assert!((h.eps - p.eps).abs() < 1e-10, "m={m} {band} t={t}: {} vs {}", h.eps, p.eps);
                    assert!(p.reality < 1e-10);
                }
            }
        }
    }

    #[test]
    fn closed_form_momentum_matches_series() {
        let b = solver(0.5);
        for band in [Band::One, Band::Two] {
            for t in [0.0, 0.3, 0.7, 1.0] {
                let p = b.point(band, t).unwrap();
                let kc = b.momentum_closed_form(&p.pair).unwrap();
                assert!((kc - p.k).abs() < 1e-10, "{band} t={t}: {kc} vs {}", p.k);
            }
        }
    }

    #[test]
    fn band3_rejects_pole() {
        let b = solver(0.5);
        assert!(b.point(Band::Three, 1.0).is_err());
        assert!(b.point(Band::One, 1.5).is_err());
    }

    #[test]
    fn inverse_parametrisation() {
        let b = solver(0.5);
        let p = b.point(Band::Two, 0.37).unwrap();
        let t = b.t_at_momentum(Band::Two, p.k).unwrap();
        assert!((t - 0.37).abs() < 1e-9);
        let t = b.t_at_energy(Band::Two, p.eps).unwrap();
        assert!((t - 0.37).abs() < 1e-9);
    }
}
