//! The Lamé potential as a lattice of Pöschl–Teller wells:
//!
//! ```text
//!     κ² sn²x = -(π/2K̄)² Σ_ℓ sech²[π(x - 2Kℓ)/2K̄] + Ē/K̄
//! ```
//!
//! checked against direct evaluation of `sn`, together with the
//! intermediate `κ² sn²x = 1 - E/K - Z'(x)`.

use core::f64::consts::PI;

use num_traits::Float;

use crate::elliptic::{compute_constants, EllipticConstants, Jacobi, Modulus};
use crate::theta::ThetaContext;
use crate::{Error, Result};

pub const DEFAULT_TRUNCATION: usize = 25;
pub const DEFAULT_GRID_POINTS: usize = 400;

/// Evenly spaced sample points on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl Grid {
    /// `points` samples on `[0, 2K]`.
    pub fn period(c: &EllipticConstants, points: usize) -> Self {
        Self { x_min: 0.0, x_max: 2.0 * c.k, points }
    }

    pub fn x(&self, i: usize) -> f64 {
        if self.points < 2 {
            return self.x_min;
        }
        if i + 1 == self.points {
            return self.x_max;
        }
        self.x_min + (self.x_max - self.x_min) * i as f64 / (self.points - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionReport {
    pub kappa: f64,
    pub truncation: usize,
    pub grid: Grid,
    /// `sup |κ² sn²x - sum|` over the grid.
    pub sup_diff: f64,
    /// Terms used in the Fourier sum of `Z'`.
    pub fourier_n: usize,
    /// `sup |κ² sn²x - (1 - E/K - Z'(x))|` with `Z'` from the theta series.
    pub zeta_prime_residual: f64,
    /// The same with `Z'` from its Fourier sum.
    pub fourier_residual: f64,
}

fn require_interior(modulus: &Modulus) -> Result<EllipticConstants> {
    if !(modulus.m > 0.0 && modulus.m1() > 0.0) {
        return Err(Error::ModulusOutOfRange { name: "m", value: modulus.m, expected: "0 < m < 1" });
    }
    compute_constants(modulus)
}

/// Terms of the `Z'` Fourier sum needed to reach double precision.
pub fn fourier_terms(c: &EllipticConstants) -> usize {
    let decay = PI * c.kbar / c.k;
    ((40.0 / decay).ceil() as usize).clamp(8, 4000)
}

fn sech_sum(c: &EllipticConstants, x: f64, truncation: usize) -> f64 {
    let a = PI / (2.0 * c.kbar);
    let l = truncation as i64;
    let sum: f64 = (-l..=l)
        .map(|j| {
            let s = 1.0 / (a * (x - 2.0 * c.k * j as f64)).cosh();
            s * s
        })
        .sum();
    -a * a * sum + c.ebar / c.kbar
}

/// Partial sum over `|ℓ| ≤ L` plus `Ē/K̄`.
pub fn potential_sech_sum(x: f64, truncation: usize, modulus: &Modulus) -> Result<f64> {
    let c = require_interior(modulus)?;
    Ok(sech_sum(&c, x, truncation))
}

/// Compare the well lattice and the `Z'` route with `κ² sn²x` on `grid`.
pub fn verify_decomposition(modulus: &Modulus, truncation: usize, grid: Option<Grid>) -> Result<DecompositionReport> {
    let c = require_interior(modulus)?;
    let grid = grid.unwrap_or_else(|| Grid::period(&c, DEFAULT_GRID_POINTS));
    if grid.points == 0 || !(grid.x_min.is_finite() && grid.x_max.is_finite()) {
        return Err(Error::ArgumentOutOfRange { name: "grid points", value: grid.points as f64, expected: ">= 1" });
    }
    let jac = Jacobi::new(*modulus);
    let ctx = ThetaContext::new(c)?;
    let n = fourier_terms(&c);
    let shift = 1.0 - c.e / c.k;
    let (mut sup, mut zp, mut fr) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..grid.points {
        let x = grid.x(i);
        let sn = jac.real(x).0;
        let v = modulus.m * sn * sn;
        sup = sup.max((v - sech_sum(&c, x, truncation)).abs());
        zp = zp.max((v - (shift - ctx.zeta_prime(x))).abs());
        fr = fr.max((v - (shift - ctx.zeta_prime_fourier(x, n))).abs());
    }
    Ok(DecompositionReport {
        kappa: modulus.kappa,
        truncation,
        grid,
        sup_diff: sup,
        fourier_n: n,
        zeta_prime_residual: zp,
        fourier_residual: fr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_modulus_default() {
        let r = verify_decomposition(&Modulus::from_m(0.5).unwrap(), DEFAULT_TRUNCATION, None).unwrap();
        assert!(r.sup_diff < 1e-9, "{r:?}");
        assert!(r.zeta_prime_residual < 1e-10 && r.fourier_residual < 1e-10, "{r:?}");
    }

    #[test]
    fn truncation_improves() {
        let md = Modulus::from_m(0.5).unwrap();
        let d: [f64; 3] = [0, 5, 25].map(|l| verify_decomposition(&md, l, None).unwrap().sup_diff);
        // L = 5 already sits at the rounding floor
        assert!(d[0] > d[1] && d[2] <= d[1] + 1e-13, "{d:?}");
        let e: [f64; 3] = [0, 1, 2].map(|l| verify_decomposition(&md, l, None).unwrap().sup_diff);
        assert!(e[0] > e[1] && e[1] > e[2], "{e:?}");
    }

    #[test]
    fn origin_tends_to_zero() {
        let md = Modulus::from_m(0.5).unwrap();
        assert!(potential_sech_sum(0.0, 25, &md).unwrap().abs() < 1e-12);
    }

    #[test]
    fn near_one_is_tanh_squared() {
        let md = Modulus::from_m(1.0 - 1e-6).unwrap();
        for x in [0.1, 0.5, 1.3] {
            let t = x.tanh();
            assert!((potential_sech_sum(x, 25, &md).unwrap() - t * t).abs() < 1e-5);
        }
    }

    #[test]
    fn zero_modulus_refused() {
        assert!(potential_sech_sum(0.3, 5, &Modulus::from_m(0.0).unwrap()).is_err());
    }
}
