//! Sampling `ε(k)` along a band.

use alloc::vec::Vec;

use super::{Band, BandPoint, LameBands};
use crate::{Error, Result};

/// How samples are placed along a band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    /// Uniform in the trajectory parameter `t`.
    #[default]
    UniformT,
    /// Uniform in `k`, each sample located by bisection on `t`.
    UniformK,
}

/// Ordered `(k, ε)` samples of one band. Only `k ≥ 0` is produced;
/// `ε(-k) = ε(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispersion {
    pub band: Band,
    pub samples: Vec<BandPoint>,
}

impl Dispersion {
    /// `ε` strictly increasing together with `k`.
    pub fn is_monotone(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].k > w[0].k && w[1].eps > w[0].eps)
    }

    /// `max ε - min ε` over the samples.
    pub fn energy_span(&self) -> f64 {
        let lo = self.samples.iter().map(|p| p.eps).fold(f64::INFINITY, f64::min);
        let hi = self.samples.iter().map(|p| p.eps).fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }
}

impl LameBands {
    /// Default momentum cap of the semi-infinite band, `4π/K`.
    pub fn default_k_max(&self) -> f64 {
        4.0 * self.zone_unit()
    }

    /// Largest band-3 parameter needed to reach `k_max`.
    pub fn band3_t_max(&self, k_max: f64) -> Result<f64> {
        if !(k_max > self.zone_unit()) {
            return Err(Error::ArgumentOutOfRange { name: "k_max", value: k_max, expected: "k_max > π/K" });
        }
        self.t_at_momentum(Band::Three, k_max)
    }

    /// `n_samples` points of `band`, uniform in `t`; band 3 stops at `k_max`.
    pub fn dispersion(&self, band: Band, n_samples: usize, k_max: f64) -> Result<Dispersion> {
        self.dispersion_with(band, n_samples, k_max, Spacing::UniformT)
    }

    pub fn dispersion_with(&self, band: Band, n_samples: usize, k_max: f64, spacing: Spacing) -> Result<Dispersion> {
        if n_samples < 2 {
            return Err(Error::ArgumentOutOfRange { name: "n_samples", value: n_samples as f64, expected: ">= 2" });
        }
        let t_hi = match band {
            Band::Three => self.band3_t_max(k_max)?,
            _ => 1.0,
        };
        let last = (n_samples - 1) as f64;
        let mut samples = Vec::with_capacity(n_samples);
        match spacing {
            Spacing::UniformT => {
                for i in 0..n_samples {
                    let t = if i + 1 == n_samples { t_hi } else { t_hi * i as f64 / last };
                    samples.push(self.point(band, t)?);
                }
            }
            Spacing::UniformK => {
                let k_lo = self.point(band, 0.0)?.k;
                let end = self.point(band, t_hi)?;
                for i in 0..n_samples {
                    let p = if i == 0 {
                        self.point(band, 0.0)?
                    } else if i + 1 == n_samples {
                        end
                    } else {
                        let k = k_lo + (end.k - k_lo) * i as f64 / last;
                        self.point(band, self.t_at_momentum(band, k)?)?
                    };
                    samples.push(p);
                }
            }
        }
        Ok(Dispersion { band, samples })
    }
}
