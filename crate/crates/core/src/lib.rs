//! Numerical laboratory for multiple ergodic averages on explicit torus
//! systems.
//!
//! The crate is organized around a handful of concrete objects:
//!
//! * [`numbers`] — exact scalars (rationals and quadratic irrationals) with
//!   decidable subgroup-of-the-torus membership, plus elementary
//!   number-theoretic functions.
//! * [`seqgen`] — integer sequences (Beatty, primes, squarefree) and
//!   arithmetic weights (von Mangoldt family, W-tricked variants,
//!   trigonometric polynomials).
//! * [`dynsys`] — torus rotations and the unipotent skew product
//!   `(y, z) ↦ (y + α, z + y)`, with closed-form n-th iterates, observables,
//!   and exact discrete spectra.
//! * [`correlate`] — multi-correlation sequences and L²-valued averages along
//!   index sequences and weights.
//! * [`spectral`] — Rauzy-type spectrum estimation: correlation coefficients,
//!   FFT scans, peak detection, containment checks.
//! * [`gowers`] — truncated Gowers uniformity norms with a fast U² path.
//! * [`verify`] — theorem harnesses that compute both sides of each
//!   convergence statement at increasing N and report L² distances.
//! * [`grammar`] — the compact text grammar used by the CLI to name systems,
//!   observables, sequences and weights.

pub mod correlate;
pub mod dynsys;
pub mod gowers;
pub mod grammar;
pub mod numbers;
pub mod seqgen;
pub mod spectral;
pub mod sum;
pub mod verify;

pub use num_complex::Complex64;

/// e(θ) = exp(2πiθ).
#[inline]
pub fn e(theta: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * theta).sin_cos();
    Complex64::new(c, s)
}

/// Distance on the circle R/Z: min(|x−y|, 1−|x−y|) after reduction mod 1.
#[inline]
pub fn circle_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}
