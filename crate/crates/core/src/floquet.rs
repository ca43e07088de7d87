//! Floquet analysis of Hill's equation `ψ'' = (V(x) - ε) ψ` by direct
//! integration over one period. This is the numerical authority the analytic
//! band solution is checked against.
//!
//! Alongside the two fundamental solutions the Prüfer angle
//! `θ = atan2(u₂, u₂')` of the Dirichlet solution is integrated as a fifth
//! component, which gives the zone index without any phase unwrapping.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::elliptic::{compute_constants, Jacobi, Modulus};
use crate::ode::{integrate, Tolerances};
use crate::roots::bisect;
use crate::{Error, Result};

/// Local error tolerance used for every monodromy integration.
pub const ODE_TOL: f64 = 1e-12;

/// Slack on `|Δ| ≤ 2` accepted as "in band".
pub const DISCRIMINANT_SLACK: f64 = 1e-9;

/// Transfer matrix over one period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monodromy {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
    pub eps: f64,
    /// Strength index of `n(n+1)κ²sn²x` (0 for a generic Hill potential).
    pub n: u32,
    pub period: f64,
    /// Prüfer angle of the Dirichlet solution at the end of the period.
    pub pruefer: f64,
    pub steps: usize,
}

impl Monodromy {
    /// The trace `Δ`.
    pub fn discriminant(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Number of zeros of the Dirichlet solution in `(0, period]`; the
    /// energy lies in the closure of zone `[jπ, (j+1)π]` of `period·k`.
    pub fn zone(&self) -> i64 {
        (self.pruefer / PI).floor() as i64
    }

    /// Bloch momentum in the extended zone, `None` in a gap.
    pub fn momentum(&self) -> Option<f64> {
        let half = 0.5 * self.discriminant();
        if half.abs() > 1.0 + 0.5 * DISCRIMINANT_SLACK {
            return None;
        }
        let a = half.clamp(-1.0, 1.0).acos();
        let j = self.zone();
        let phase = if j % 2 == 0 { a } else { PI - a };
        Some((j as f64 * PI + phase) / self.period)
    }
}

/// Monodromy of `ψ'' = (V(x) - ε)ψ` for a `period`-periodic potential.
pub fn integrate_hill<V>(eps: f64, period: f64, n: u32, potential: V) -> Result<Monodromy>
where
    V: Fn(f64) -> f64,
{
    if !eps.is_finite() {
        return Err(Error::NonFinite { what: "energy" });
    }
    let tol = Tolerances { rtol: ODE_TOL, atol: ODE_TOL, ..Tolerances::default() };
    let rhs = |x: f64, y: &[f64; 5]| {
        let w = potential(x) - eps;
        let (s, c) = y[4].sin_cos();
        [y[1], w * y[0], y[3], w * y[2], c * c - w * s * s]
    };
    let end = integrate(rhs, 0.0, [1.0, 0.0, 0.0, 1.0, 0.0], period, tol)?;
    let y = end.y;
    Ok(Monodromy {
        m11: y[0],
        m12: y[2],
        m21: y[1],
        m22: y[3],
        eps,
        n,
        period,
        pruefer: y[4],
        steps: end.accepted,
    })
}

fn lame_setup(modulus: &Modulus) -> Result<(f64, Jacobi)> {
    let c = compute_constants(modulus)?;
    Ok((2.0 * c.k, Jacobi::new(*modulus)))
}

/// Monodromy of the Lamé equation `-ψ'' + n(n+1)κ²sn²x ψ = εψ` over `[0, 2K]`.
pub fn integrate_monodromy(eps: f64, modulus: &Modulus, n: u32) -> Result<Monodromy> {
    if n == 0 {
        return Err(Error::ArgumentOutOfRange { name: "n", value: 0.0, expected: "n >= 1" });
    }
    let (period, jac) = lame_setup(modulus)?;
    let strength = (n * (n + 1)) as f64 * modulus.m;
    integrate_hill(eps, period, n, |x| {
        let s = jac.real(x).0;
        strength * s * s
    })
}

/// A maximal energy interval with `|Δ(ε)| ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandInterval {
    pub lo: f64,
    pub hi: f64,
    /// Sign of `Δ` at each end: `+1` periodic, `-1` antiperiodic edge. An end
    /// clipped by the scan window reports the sign found there.
    pub lo_sign: i8,
    pub hi_sign: i8,
}

/// Allowed bands of the Lamé operator inside `[eps_lo, eps_hi]`.
///
/// `resolution` uniform cells are scanned for sign changes of `|Δ| - 2`;
/// each crossing is refined by bisection to a bracket below `1e-8`.
pub fn scan_bands(eps_lo: f64, eps_hi: f64, resolution: usize, modulus: &Modulus, n: u32) -> Result<Vec<BandInterval>> {
    if !(eps_lo < eps_hi) {
        return Err(Error::ArgumentOutOfRange { name: "eps_hi - eps_lo", value: eps_hi - eps_lo, expected: "> 0" });
    }
    let resolution = resolution.max(2);
    let disc = |e: f64| integrate_monodromy(e, modulus, n).map(|m| m.discriminant());
    let mut grid = Vec::with_capacity(resolution + 1);
    for i in 0..=resolution {
        let e = eps_lo + (eps_hi - eps_lo) * i as f64 / resolution as f64;
        grid.push((e, disc(e)?));
    }

    let allowed = |d: f64| d.abs() <= 2.0;
    let sign = |d: f64| if d >= 0.0 { 1i8 } else { -1i8 };
    let refine = |a: f64, b: f64| -> Result<(f64, f64)> {
        let mut failure = None;
        let x = bisect("|Δ| - 2", a, b, |e| match disc(e) {
            Ok(d) => d.abs() - 2.0,
            Err(err) => {
                failure.get_or_insert(err);
                f64::NAN
            }
        });
        if let Some(err) = failure {
            return Err(err);
        }
        let x = x?;
        Ok((x, disc(x)?))
    };

    let mut out = Vec::new();
    let mut open: Option<(f64, i8)> = if allowed(grid[0].1) { Some((grid[0].0, sign(grid[0].1))) } else { None };
    for w in grid.windows(2) {
        let ((ea, da), (eb, db)) = (w[0], w[1]);
        match (allowed(da), allowed(db)) {
            (false, true) => {
                let (e, d) = refine(ea, eb)?;
                open = Some((e, sign(d)));
            }
            (true, false) => {
                let (e, d) = refine(ea, eb)?;
                if let Some((lo, lo_sign)) = open.take() {
                    out.push(BandInterval { lo, hi: e, lo_sign, hi_sign: sign(d) });
                }
            }
            _ => {}
        }
    }
    if let Some((lo, lo_sign)) = open {
        let d = grid[resolution].1;
        out.push(BandInterval { lo, hi: eps_hi, lo_sign, hi_sign: sign(d) });
    }

    let full = (n * (n + 1)) as f64;
    let expected = n as usize + 1;
    if modulus.m > 0.0 && modulus.m < 1.0 && eps_lo <= 0.0 && eps_hi >= full && out.len() < expected {
        return Err(Error::Resolution { found: out.len(), expected });
    }
    Ok(out)
}

/// Extended-zone momentum `k ≥ 0` with `cos(2Kk) = Δ(ε)/2`, checked against
/// the requested band (`1..=n+1`; the last one is semi-infinite).
pub fn k_of_epsilon(eps: f64, band: u8, modulus: &Modulus, n: u32) -> Result<f64> {
    let mono = integrate_monodromy(eps, modulus, n)?;
    let k = mono.momentum().ok_or(Error::InGap { eps, discriminant: mono.discriminant() })?;
    let unit = PI / mono.period;
    let b = band as f64;
    let (lo, hi) = if band as u32 > n { ((b - 1.0) * unit, f64::INFINITY) } else { ((b - 1.0) * unit, b * unit) };
    let slack = 1e-6 * unit;
    if band == 0 || k < lo - slack || k > hi + slack {
        return Err(Error::WrongBand { eps, band, zone: mono.zone() });
    }
    Ok(k)
}
