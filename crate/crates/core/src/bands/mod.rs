//! Band structure of the `n = 2` Lamé operator from the Hermite–Halphen
//! ansatz.
//!
//! A Bloch state is labelled by a pair `(α₁, α₂)` of complex parameters. Each
//! band is a real one-parameter curve of such pairs; [`LameBands`] walks
//! these curves (parameter `t ∈ [0, 1]` from band bottom to top), and
//! evaluates energy, momentum and wavefunction at each point.

use core::f64::consts::PI;
use core::fmt;

use num_traits::Float;

use crate::elliptic::{compute_constants, invert_cn, Jacobi, Modulus};
use crate::theta::ThetaContext;
use crate::{Error, Result, C64};

mod dispersion;
mod trajectory;
mod wave;

pub use dispersion::{Dispersion, Spacing};
pub use wave::WaveSample;

/// Tolerance on `|Re Σ Z(αⱼ)|` accepted by the momentum formula.
pub const REALITY_TOL: f64 = 1e-9;

/// One of the three bands of the `n = 2` spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Band {
    One = 1,
    Two = 2,
    Three = 3,
}

impl Band {
    pub const ALL: [Band; 3] = [Band::One, Band::Two, Band::Three];

    pub fn index(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for Band {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Band::One),
            2 => Ok(Band::Two),
            3 => Ok(Band::Three),
            _ => Err(Error::ArgumentOutOfRange { name: "band", value: v as f64, expected: "1, 2 or 3" }),
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// The five band-edge energies `ε₁ ≤ … ≤ ε₅`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandEdges {
    pub eps: [f64; 5],
}

impl BandEdges {
    /// Widths of the two finite bands.
    pub fn widths(&self) -> [f64; 2] {
        [self.eps[1] - self.eps[0], self.eps[3] - self.eps[2]]
    }

    /// Widths of the two gaps.
    pub fn gaps(&self) -> [f64; 2] {
        [self.eps[2] - self.eps[1], self.eps[4] - self.eps[3]]
    }

    /// Energy range `(bottom, top)` of a band; the third is unbounded.
    pub fn range(&self, band: Band) -> (f64, f64) {
        match band {
            Band::One => (self.eps[0], self.eps[1]),
            Band::Two => (self.eps[2], self.eps[3]),
            Band::Three => (self.eps[4], f64::INFINITY),
        }
    }
}

/// Closed-form band edges:
/// `2(1+κ²) ∓ 2√(κ⁴-κ²+1)`, `1+κ²`, `1+4κ²`, `4+κ²`.
pub fn band_edges(modulus: &Modulus) -> BandEdges {
    let m = modulus.m;
    let r = (m * m - m + 1.0).sqrt();
    BandEdges { eps: [2.0 * (1.0 + m) - 2.0 * r, 1.0 + m, 1.0 + 4.0 * m, 4.0 + m, 2.0 * (1.0 + m) + 2.0 * r] }
}

/// Trajectory coordinates of a pair; their meaning depends on the band:
/// band 1 `(y₁, y₂)` with `αⱼ = K + iyⱼ`; band 2 `(y₁, y₂)` with
/// `α₁ = K + iy₁, α₂ = iy₂`; band 3 `(x, y)` with `α = ∓x + iy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandCoords {
    pub c1: f64,
    pub c2: f64,
}

/// A Hermite–Halphen parameter pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaPair {
    pub alpha1: C64,
    pub alpha2: C64,
    pub band: Band,
    pub coords: BandCoords,
}

impl AlphaPair {
    /// Builds the pair from trajectory coordinates.
    pub fn from_coords(band: Band, c1: f64, c2: f64, k: f64) -> Self {
        let (alpha1, alpha2) = match band {
            Band::One => (C64::new(k, c1), C64::new(k, c2)),
            Band::Two => (C64::new(k, c1), C64::new(0.0, c2)),
            Band::Three => (C64::new(-c1, c2), C64::new(c1, c2)),
        };
        Self { alpha1, alpha2, band, coords: BandCoords { c1, c2 } }
    }
}

/// Energy from the sum rule and the residual of the pair constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HhEvaluation {
    pub eps: f64,
    /// Imaginary part of the energy expression; zero on a valid trajectory.
    pub eps_imag: f64,
    pub residual: f64,
}

/// Locations of the band-1 bottom (`α = K ∓ ic₀`) and band-3 bottom
/// (`α = ∓x₀`), with the residuals of their defining equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeParameters {
    pub c0: f64,
    pub x0: f64,
    pub c0_residual: f64,
    pub x0_residual: f64,
}

/// A sampled point of a band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    pub t: f64,
    pub k: f64,
    pub eps: f64,
    pub pair: AlphaPair,
    /// Sum-rule energy and constraint residual at the pair; `None` at the
    /// band edges where the constraint is `0/0` and the closed forms are
    /// used instead.
    pub check: Option<HhEvaluation>,
    /// `|Re Σ Z(αⱼ)|`.
    pub reality: f64,
}

/// The band solver at one modulus `0 < κ < 1`.
#[derive(Debug, Clone, Copy)]
pub struct LameBands {
    ctx: ThetaContext,
    edges: BandEdges,
    params: EdgeParameters,
}

impl LameBands {
    pub fn new(modulus: Modulus) -> Result<Self> {
        if !(modulus.m > 0.0 && modulus.m1() > 0.0) {
            return Err(Error::ModulusOutOfRange { name: "m", value: modulus.m, expected: "0 < m < 1" });
        }
        let ctx = ThetaContext::new(compute_constants(&modulus)?)?;
        let params = edge_parameters(&modulus)?;
        Ok(Self { ctx, edges: band_edges(&modulus), params })
    }

    pub fn modulus(&self) -> Modulus {
        self.ctx.constants.modulus
    }

    pub fn context(&self) -> &ThetaContext {
        &self.ctx
    }

    pub fn edges(&self) -> BandEdges {
        self.edges
    }

    pub fn edge_parameters(&self) -> EdgeParameters {
        self.params
    }

    fn jacobi(&self) -> &Jacobi {
        self.ctx.jacobi()
    }

    /// `π/K`, the width of two momentum zones.
    pub fn zone_unit(&self) -> f64 {
        PI / self.ctx.k()
    }

    /// Energy from the sum rule and the pair-constraint residual
    /// `|(s₁c₁d₁ + s₂c₂d₂)/(sn²α₁ - sn²α₂)|`.
    ///
    /// When `sn²α₁ = sn²α₂` (a pair symmetric about the real line, as at the
    /// band-1 bottom) the constraint reduces to its numerator, which is then
    /// reported as the residual; a non-vanishing numerator there is
    /// [`Error::CoincidentParameters`].
    pub fn hh_energy_and_residual(&self, pair: &AlphaPair) -> Result<HhEvaluation> {
        let a = self.jacobi().eval(pair.alpha1)?;
        let b = self.jacobi().eval(pair.alpha2)?;
        let one = C64::new(1.0, 0.0);
        let (sa2, sb2) = (a.sn * a.sn, b.sn * b.sn);
        let cross = a.cn * a.dn / a.sn + b.cn * b.dn / b.sn;
        let eps = one / sa2 + one / sb2 - cross * cross;
        if !(eps.re.is_finite() && eps.im.is_finite()) {
            return Err(Error::NonFinite { what: "sum-rule energy" });
        }
        let (pa, pb) = (a.sn * a.cn * a.dn, b.sn * b.cn * b.dn);
        let num = pa + pb;
        let den = sa2 - sb2;
        let residual = if den.norm() <= 1e-14 * (1.0 + sa2.norm() + sb2.norm()) {
            if num.norm() > 1e-10 * (1.0 + pa.norm() + pb.norm()) {
                return Err(Error::CoincidentParameters { numerator: num.norm() });
            }
            num.norm()
        } else {
            (num / den).norm()
        };
        Ok(HhEvaluation { eps: eps.re, eps_imag: eps.im, residual })
    }

    /// `Σ Z(αⱼ)` at the pair.
    pub fn zeta_sum(&self, pair: &AlphaPair) -> Result<C64> {
        Ok(self.ctx.zeta(pair.alpha1)? + self.ctx.zeta(pair.alpha2)?)
    }

    /// Floquet multiplier `ξ = e^{-2K Σ Z(αⱼ)}` of the pair.
    pub fn floquet_multiplier(&self, pair: &AlphaPair) -> Result<C64> {
        Ok((-self.zeta_sum(pair)? * (2.0 * self.ctx.k())).exp())
    }

    /// `k = -i Σ Z(αⱼ) + π/K` placed in the band's zone, plus the reality
    /// residual `|Re Σ Z|`.
    ///
    /// The formula fixes `k` modulo `π/K`; bands 1 and 2 fold the remainder
    /// into `[0, π/2K]` and `[π/2K, π/K]`, band 3 needs no folding.
    pub fn momentum_from_alphas(&self, pair: &AlphaPair) -> Result<(f64, f64)> {
        let sum = self.zeta_sum(pair)?;
        let reality = sum.re.abs();
        if !(reality <= REALITY_TOL) {
            return Err(Error::RealityViolation { residual: reality, tolerance: REALITY_TOL });
        }
        let raw = sum.im + self.zone_unit();
        Ok((self.fold(pair.band, raw), reality))
    }

    fn fold(&self, band: Band, raw: f64) -> f64 {
        let unit = self.zone_unit();
        let half = 0.5 * unit;
        match band {
            Band::Three => raw,
            Band::One | Band::Two => {
                let r = raw - unit * (raw / unit).floor();
                let r = if unit - r < 1e-14 * unit { 0.0 } else { r };
                let first = band == Band::One;
                if (r <= half) == first {
                    r
                } else {
                    unit - r
                }
            }
        }
    }
}

/// `c₀ ∈ (0, K̄)` with `κ̄² c̄n² c₀ = 1 - √(κ⁴-κ²+1)` and `x₀ ∈ (0, K)` with
/// `dn²x₀ + cn²x₀ dn²x₀ / sn²x₀ = 1 + √(κ⁴-κ²+1)`.
pub fn edge_parameters(modulus: &Modulus) -> Result<EdgeParameters> {
    let (m, m1) = (modulus.m, modulus.m1());
    if !(m > 0.0 && m1 > 0.0) {
        return Err(Error::ModulusOutOfRange { name: "m", value: m, expected: "0 < m < 1" });
    }
    let r = (m * m - m + 1.0).sqrt();
    let bar = modulus.complement();
    // 1 - r = m(1-m)/(1+r) without cancellation.
    let one_minus_r = m * m1 / (1.0 + r);
    let c0 = invert_cn((one_minus_r / m1).sqrt().min(1.0), &bar)?;
    // sn²x₀ = 1/(1+m+r)
    let x0 = invert_cn(((m + r) / (1.0 + m + r)).sqrt(), modulus)?;

    let jac = Jacobi::new(*modulus);
    let cb = jac.real_bar(c0).1;
    let (s, c, d) = jac.real(x0);
    Ok(EdgeParameters {
        c0,
        x0,
        c0_residual: (m1 * cb * cb - one_minus_r).abs(),
        x0_residual: (d * d + c * c * d * d / (s * s) - (1.0 + r)).abs(),
    })
}
