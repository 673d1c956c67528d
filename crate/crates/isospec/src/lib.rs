//! Exact spectral geometry toolkit.
//!
//! Computes complete Hodge Laplacian spectrum segments for flat tori and
//! their quotients by affine involutions, round spheres and their quotients
//! (projective spaces, hemispheres, diagonal orbifolds), and Riemannian
//! products, together with displacement-length spectra, fixed-point sets,
//! heat-expansion coefficients, and the combinatorics of hyperbolic surfaces
//! glued from right-angled hexagons.
//!
//! All eigenvalues are exact: a value is a pair of rationals `q0 + q1 * 4pi^2`,
//! compared through certified rational enclosures of `pi^2`, never through
//! floating point. Spectrum segments are complete below an explicit cutoff,
//! so equality of segments is a certificate and a difference pinpoints the
//! first eigenvalue where multiplicities diverge.

pub mod descriptor;
pub mod eigenvalue;
pub mod flat;
pub mod heat;
pub mod hyperbolic;
pub mod matrix;
pub mod pi;
pub mod products;
pub mod rational;
pub mod scenario;
pub mod segment;
pub mod sphere;

pub use eigenvalue::Eigenvalue;
pub use rational::Rational;
pub use segment::{ComparisonOutcome, SpectrumSegment};
