//! Faber polynomials, exterior remainders, and Bergman orthonormal polynomials
//! for piecewise-analytic Jordan curves, with an exact-arithmetic engine for
//! the two-circular-arc lens curve.
//!
//! The crate has three layers:
//!
//! - exact: arbitrary-precision rational sequences and pi-linear closed forms
//!   for the lens curve (corners at +-1, exterior angle pi/2, exterior map
//!   phi(z) = (z + 1/z)/2),
//! - hp + quad: dyadic high-precision floats and corner-graded boundary
//!   quadrature, the numeric oracle for the exact layer,
//! - faber + bergman + asym: Faber construction for general exterior maps,
//!   Bergman orthonormal bases over interior domains, and sequence
//!   diagnostics (extrapolation, sharpness checks, curve sweeps).

pub mod asym;
pub mod bergman;
pub mod curvespec;
pub mod exact;
pub mod faber;
pub mod hp;
mod limb;
pub mod maps;
pub mod path;
pub mod poly;
pub mod quad;
pub mod report;







