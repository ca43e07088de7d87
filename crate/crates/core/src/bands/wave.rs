//! Hermite–Halphen–Bloch wavefunction
//! `ψ(x) = Π H(x+αⱼ)/Θ(x) · e^{-x Z(αⱼ)}`.

use alloc::vec::Vec;

use num_traits::Float;

use super::{AlphaPair, LameBands};
use crate::{Error, Result, C64};

/// Constraint residual above which a pair is refused for `ψ`.
pub const PSI_CONSTRAINT_TOL: f64 = 1e-8;

/// Finite-difference step for the ODE residual.
pub const FD_STEP: f64 = 2e-3;

/// One sample of `ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSample {
    pub x: f64,
    pub psi: C64,
}

/// Pair brought into `Im ∈ (-K̄, K̄]` together with `Σ Z` at the reduced values.
#[derive(Debug, Clone, Copy)]
struct Prepared {
    a1: C64,
    a2: C64,
    zsum: C64,
}

impl LameBands {
    fn reduce_imag(&self, a: C64) -> C64 {
        let p = 2.0 * self.ctx.kbar();
        C64::new(a.re, a.im - p * (a.im / p).round())
    }

    fn prepare(&self, pair: &AlphaPair) -> Result<Prepared> {
        match self.hh_energy_and_residual(pair) {
            Ok(h) if h.residual > PSI_CONSTRAINT_TOL => {
                return Err(Error::ConstraintViolation { residual: h.residual, tolerance: PSI_CONSTRAINT_TOL })
            }
            // Edge pairs with `sn α = 0` have no finite sum-rule energy but
            // still give a valid ψ.
            Ok(_) | Err(Error::NonFinite { .. }) => {}
            Err(e) => return Err(e),
        }
        let (a1, a2) = (self.reduce_imag(pair.alpha1), self.reduce_imag(pair.alpha2));
        let zsum = self.ctx.zeta(a1)? + self.ctx.zeta(a2)?;
        Ok(Prepared { a1, a2, zsum })
    }

    fn psi_prepared(&self, x: f64, p: &Prepared) -> C64 {
        let (theta, _) = self.ctx.theta_pair(C64::new(x, 0.0));
        let h1 = self.ctx.theta_pair(p.a1 + x).1;
        let h2 = self.ctx.theta_pair(p.a2 + x).1;
        h1 * h2 / (theta * theta) * (-p.zsum * x).exp()
    }

    /// Unnormalised `ψ(x)` of a trajectory pair.
    pub fn bloch_psi(&self, x: f64, pair: &AlphaPair) -> Result<C64> {
        let p = self.prepare(pair)?;
        Ok(self.psi_prepared(x, &p))
    }

    /// `ψ` on a grid, scaled so that `max |ψ| = 1`.
    pub fn sample_psi(&self, pair: &AlphaPair, xs: &[f64]) -> Result<Vec<WaveSample>> {
        let p = self.prepare(pair)?;
        let mut out: Vec<WaveSample> = xs.iter().map(|&x| WaveSample { x, psi: self.psi_prepared(x, &p) }).collect();
        let peak = out.iter().map(|s| s.psi.norm()).fold(0.0, f64::max);
        if !(peak > 0.0 && peak.is_finite()) {
            return Err(Error::NonFinite { what: "wavefunction" });
        }
        for s in &mut out {
            s.psi /= peak;
        }
        Ok(out)
    }

    /// `max |ψ(x+2K) - ξψ(x)| / max |ψ|` over the grid, with
    /// `ξ = e^{-2K Σ Z(αⱼ)}`.
    pub fn quasi_periodicity_residual(&self, pair: &AlphaPair, xs: &[f64]) -> Result<f64> {
        let p = self.prepare(pair)?;
        let xi = (-p.zsum * (2.0 * self.ctx.k())).exp();
        let period = 2.0 * self.ctx.k();
        let (mut worst, mut peak) = (0.0f64, 0.0f64);
        for &x in xs {
            let a = self.psi_prepared(x, &p);
            let b = self.psi_prepared(x + period, &p);
            worst = worst.max((b - xi * a).norm());
            peak = peak.max(a.norm()).max(b.norm());
        }
        Ok(worst / peak)
    }

    /// `max |ψ'' + (ε - 6κ² sn²x) ψ| / max |ψ|` over the grid, with `ψ''`
    /// from the fourth-order central difference.
    pub fn ode_residual(&self, pair: &AlphaPair, eps: f64, xs: &[f64]) -> Result<f64> {
        let p = self.prepare(pair)?;
        let h = FD_STEP;
        let m = self.modulus().m;
        let (mut worst, mut peak) = (0.0f64, 0.0f64);
        for &x in xs {
            let f = |d: f64| self.psi_prepared(x + d * h, &p);
            let (fm2, fm1, f0, fp1, fp2) = (f(-2.0), f(-1.0), f(0.0), f(1.0), f(2.0));
            let d2 = (-fm2 + fm1 * 16.0 - f0 * 30.0 + fp1 * 16.0 - fp2) / (12.0 * h * h);
            let s = self.ctx.jacobi().real(x).0;
            worst = worst.max((d2 + f0 * (eps - 6.0 * m * s * s)).norm());
            peak = peak.max(f0.norm());
        }
        Ok(worst / peak)
    }
}
