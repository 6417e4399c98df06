//! Large-order perturbation theory for the PT-symmetric cubic oscillator
//! `H = p^2 + x^2/4 + i*lambda*x^3`.
//!
//! The crate is split along the lines of the analysis:
//!
//! * [`perturbation`] generates the exact Rayleigh-Schrodinger coefficients
//!   `b_n` of `E(lambda) - 1/2 = sum b_n lambda^(2n)` and persists them.
//! * [`pade`] builds exact-rational Padé approximants of the once-subtracted
//!   series, the diagonal/subdiagonal ladder, and the Stieltjes ordering check.
//! * [`spectral`] solves the complex Schrodinger equation by shooting, as an
//!   independent source of ground-state energies.
//! * [`asymptotics`] compares `b_n` against the leading and WKB-corrected
//!   large-order predictions and evaluates the dispersion-relation quantities.
//!
//! Exact arithmetic uses [`dashu`] integers and rationals throughout; the
//! only rounding happens when a value is rendered at a requested precision.

pub mod asymptotics;
pub mod numeric;
pub mod pade;
pub mod perturbation;
pub mod spectral;

pub use numeric::{parse_rational, Fixed, HighPrecision};
pub use perturbation::{compute_coefficients, PerturbationSeries};
