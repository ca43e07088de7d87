use alloc::boxed::Box;

use crate::C64;

/// Errors raised by the numerical layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("modulus parameter out of range: {name} = {value} (expected {expected})")]
    ModulusOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// κ = 1: K(κ) is infinite and the lattice degenerates.
    #[error("singular modulus κ = 1: complete integral K diverges")]
    SingularModulus,

    #[error("argument {value} is within {distance:e} of the pole at {pole}")]
    Pole { value: C64, pole: C64, distance: f64 },

    #[error("argument out of range: {name} = {value} (expected {expected})")]
    ArgumentOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("root of {what} not bracketed on [{lo}, {hi}] (f = {f_lo:e}, {f_hi:e})")]
    Bracket {
        what: &'static str,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    /// `sn²α₁ = sn²α₂` while the constraint numerator does not vanish.
    #[error("coincident parameters: sn²α₁ = sn²α₂ makes the pair constraint singular (numerator {numerator:e})")]
    CoincidentParameters { numerator: f64 },

    #[error("reality condition violated: |Re ΣZ(α)| = {residual:e} exceeds {tolerance:e}")]
    RealityViolation { residual: f64, tolerance: f64 },

    #[error("band {band} trajectory left its fundamental region: coords ({c1}, {c2})")]
    RegionViolation { band: u8, c1: f64, c2: f64 },

    #[error("pair constraint residual {residual:e} exceeds {tolerance:e}")]
    ConstraintViolation { residual: f64, tolerance: f64 },

    #[error("ODE step budget of {steps} exceeded at x = {x}")]
    StepBudgetExceeded { steps: usize, x: f64 },

    #[error("step size underflow at x = {x} (h = {h:e})")]
    StepSizeUnderflow { x: f64, h: f64 },

    #[error("energy {eps} lies in a gap (discriminant {discriminant})")]
    InGap { eps: f64, discriminant: f64 },

    #[error("energy {eps} is not in band {band} (zone index {zone})")]
    WrongBand { eps: f64, band: u8, zone: i64 },

    #[error("scan resolution too coarse: found {found} band intervals, expected {expected}")]
    Resolution { found: usize, expected: usize },

    #[error("band {band} at t = {t} (κ² = {m}): {source}")]
    Trajectory {
        band: u8,
        t: f64,
        m: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },
}

pub type Result<T> = core::result::Result<T, Error>;
