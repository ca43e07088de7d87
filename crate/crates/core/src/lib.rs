//! Bloch band structure of the two-gap Lamé equation
//!
//! ```text
//!     -ψ''(x) + 6 κ² sn²(x, κ) ψ(x) = ε ψ(x)
//! ```
//!
//! solved in closed form through the Hermite–Halphen product of Jacobi
//! Eta/Theta functions, with every analytic quantity checkable against an
//! independent numerical route:
//!
//! * [`elliptic`]: complete integrals, Jacobi `sn/cn/dn` for complex arguments.
//! * [`theta`]: Jacobi `Θ`, `H` and Zeta via nome series.
//! * [`bands`]: band edges, the three `(α₁, α₂)` trajectories, energies,
//!   crystal momentum, Bloch wavefunctions and dispersion sampling.
//! * [`floquet`]: monodromy-matrix integration of the ODE (the oracle).
//! * [`weierstrass`]: the same spectrum written with `℘`, `ζ`, `e₁,e₂,e₃`.
//! * [`decomposition`]: the `sech²` lattice form of the potential.
//!
//! The crate is `no_std` (it needs `alloc` for sample vectors only).

#![no_std]
// The `Float` imports are needed without std. Whenever another crate in the
// build links std, its inherent float methods take precedence and the
// imports look unused.
#![allow(unused_imports)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bands;
pub mod decomposition;
pub mod elliptic;
mod error;
pub mod floquet;
pub mod ode;
pub mod roots;
pub mod theta;
pub mod weierstrass;

pub use error::{Error, Result};

pub use bands::{
    band_edges, AlphaPair, Band, BandCoords, BandEdges, BandPoint, Dispersion, EdgeParameters, HhEvaluation,
    LameBands, Spacing,
};

pub use elliptic::{compute_constants, invert_cn, jacobi_eval, EllipticConstants, Jacobi, JacobiTriple, Modulus};
pub use floquet::{integrate_monodromy, k_of_epsilon, scan_bands, BandInterval, Monodromy};
pub use theta::ThetaContext;
pub use weierstrass::{consistency_check, ConsistencyReport, SpectralFunctions, WeierstrassData, WeierstrassMomentum};
pub use decomposition::{potential_sech_sum, verify_decomposition, DecompositionReport, Grid};

/// Complex double, used for every analytic continuation in the crate.
pub type C64 = num_complex::Complex64;
