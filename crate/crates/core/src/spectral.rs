//! Rauzy-type spectrum estimation for bounded sequences.
//!
//! The scan evaluates (1/N)·Σ_{n≤N} η(n)e(−θn) on the FFT grid θ = j/N′ with
//! N′ = oversample · next_pow2(N); peaks are extracted greedily with a
//! sidelobe exclusion window and optionally refined by golden-section search
//! on the exact correlation coefficient.

use crate::numbers::ExactScalar;
use crate::sum::pairwise_sum;
use crate::{Complex64, circle_dist, e};
use rustfft::FftPlanner;
use serde::Serialize;

/// (1/N) Σ_{n=1}^{N} η(n) e(−θn), pairwise-summed.
pub fn correlation_coefficient(eta: &[Complex64], theta: f64) -> Complex64 {
    let terms: Vec<Complex64> = eta
        .iter()
        .enumerate()
        .map(|(i, v)| v * e((-theta * (i + 1) as f64).fract()))
        .collect();
    pairwise_sum(&terms) / eta.len() as f64
}

/// Magnitudes of the correlation coefficient on the frequency grid j/N′.
#[derive(Debug, Clone)]
pub struct SpectrumScan {
    pub n: usize,
    pub fft_size: usize,
    pub magnitudes: Vec<f64>,
}

impl SpectrumScan {
    pub fn theta(&self, bin: usize) -> f64 {
        bin as f64 / self.fft_size as f64
    }

    /// CSV rows `theta,magnitude`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "theta,magnitude")?;
        for (j, m) in self.magnitudes.iter().enumerate() {
            writeln!(
                w,
                "{},{}",
                crate::correlate::fmt_f64(self.theta(j)),
                crate::correlate::fmt_f64(*m)
            )?;
        }
        Ok(())
    }

    /// Scaling guard: (N/N′)·Σ_bins magnitude² must equal (1/N)·Σ|η(n)|².
    pub fn parseval_check(&self, eta: &[Complex64]) -> (f64, f64) {
        let lhs: f64 =
            self.magnitudes.iter().map(|m| m * m).sum::<f64>() * self.n as f64 / self.fft_size as f64;
        let rhs: f64 = eta.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.n as f64;
        (lhs, rhs)
    }
}

/// FFT of the zero-padded sequence over N′ = oversample·next_pow2(N) bins,
/// scaled by 1/N. `oversample` must be a power of two.
pub fn spectrum_scan(eta: &[Complex64], oversample: usize) -> SpectrumScan {
    let n = eta.len();
    assert!(n >= 16, "scan needs at least 16 samples");
    assert!(oversample.is_power_of_two(), "oversample must be a power of 2");
    let fft_size = oversample * n.next_power_of_two();
    // x[t] = η(t) with the 1-based sequence at offsets 1..=N (mod N′), so bin
    // j equals Σ_n η(n)e(−n·j/N′) exactly; only t = N′ can fold, to bin 0.
    let mut buf = vec![Complex64::new(0.0, 0.0); fft_size];
    for (t, v) in eta.iter().enumerate() {
        buf[(t + 1) % fft_size] += v;
    }
    FftPlanner::new().plan_fft_forward(fft_size).process(&mut buf);
    let scale = 1.0 / n as f64;
    SpectrumScan {
        n,
        fft_size,
        magnitudes: buf.into_iter().map(|v| v.norm() * scale).collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Peak {
    pub theta: f64,
    pub magnitude: f64,
    pub refined: bool,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct PeakReport {
    pub peaks: Vec<Peak>,
}

/// Greedy peak extraction: repeatedly take the largest remaining bin above
/// the threshold and suppress its neighborhood. The exclusion window (in
/// units of 1/N) hides the Dirichlet-kernel sidelobes of an extracted peak,
/// whose first few local maxima sit above τ = 0.05 for a unimodular
/// character.
pub fn peak_detect(scan: &SpectrumScan, eta: &[Complex64], tau: f64, refine: bool) -> PeakReport {
    assert!(tau > 0.0, "threshold must be positive");
    const EXCLUSION_OVER_N: f64 = 8.0;
    let bins = scan.fft_size;
    let radius = ((EXCLUSION_OVER_N * bins as f64 / scan.n as f64).ceil() as usize).max(1);
    let mut live = scan.magnitudes.clone();
    let mut peaks = Vec::new();
    while let Some((best, &mag)) = live
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
    {
        if mag < tau {
            break;
        }
        let mut theta = scan.theta(best);
        let mut refined = false;
        let mut magnitude = mag;
        if refine {
            let width = 1.0 / bins as f64;
            let (t, m) = golden_refine(eta, theta - width, theta + width, 1.0 / (10.0 * scan.n as f64));
            theta = t.rem_euclid(1.0);
            magnitude = m;
            refined = true;
        }
        peaks.push(Peak {
            theta,
            magnitude,
            refined,
        });
        // suppress the neighborhood (cyclically)
        for d in 0..=radius.min(bins - 1) {
            live[(best + d) % bins] = f64::NEG_INFINITY;
            live[(best + bins - d) % bins] = f64::NEG_INFINITY;
        }
    }
    peaks.sort_by(|a, b| b.magnitude.partial_cmp(&a.magnitude).unwrap());
    PeakReport { peaks }
}

/// Golden-section maximization of |correlation_coefficient| on [lo, hi].
fn golden_refine(eta: &[Complex64], mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let f = |t: f64| correlation_coefficient(eta, t).norm();
    let mut a = hi - (hi - lo) * INV_PHI;
    let mut b = lo + (hi - lo) * INV_PHI;
    let mut fa = f(a);
    let mut fb = f(b);
    while hi - lo > tol {
        if fa > fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - (hi - lo) * INV_PHI;
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + (hi - lo) * INV_PHI;
            fb = f(b);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentReport {
    pub pass: bool,
    pub tolerance: f64,
    /// peaks with no spectrum element within tolerance, with their nearest
    /// distance
    pub violations: Vec<(f64, f64)>,
}

/// Every detected peak must sit within `tol` (circle metric) of some element
/// of the theoretical spectrum; an empty peak list passes vacuously.
pub fn containment_check(
    peaks: &PeakReport,
    sigma_t: &[ExactScalar],
    tol: f64,
) -> ContainmentReport {
    let sigma: Vec<f64> = sigma_t.iter().map(|s| s.to_f64().rem_euclid(1.0)).collect();
    let mut violations = Vec::new();
    for p in &peaks.peaks {
        let nearest = sigma
            .iter()
            .map(|s| circle_dist(p.theta, *s))
            .fold(f64::INFINITY, f64::min);
        if nearest > tol {
            violations.push((p.theta, nearest));
        }
    }
    ContainmentReport {
        pass: violations.is_empty(),
        tolerance: tol,
        violations,
    }
}
