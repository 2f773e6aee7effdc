//! Truncated Gowers uniformity norms U^s_[N] with a fast U² path.
//!
//! Conventions, pinned by the witness values in the tests: the input F is
//! truncated to [1, N] (zero outside); the base norm is
//! ‖F‖_{U¹} = |(1/N)·Σ_{n∈[N]} F(n)|; one level up,
//!
//! ‖F‖_{U^{s+1}}^{2^{s+1}} = (1/N)·Σ_{h∈[N]} ‖F_N·S^h F̄_N‖_{U^s},
//!
//! with h running over {1,…,N} and the shifted products truncated to their
//! overlapping support. No renormalization is applied, so the constant
//! sequence has ‖1‖_{U²_[N]} = ((N−1)/2N)^{1/4} < 1; reported values are
//! comparable between runs of this laboratory but not to the cube-counting
//! normalization of the norms. The off-by-one choice h ∈ {1..N} versus
//! {0..N−1} moves reported values by at most 1/N.

use crate::numbers::{NumberError, primorial};
use crate::seqgen::{PrimeSieve, SeqError, beatty_indicator};
use crate::numbers::{ExactScalar, euler_totient};
use crate::sum::{pairwise_mean, pairwise_sum_f64};
use crate::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GowersError {
    #[error("budget exceeded: U^{s} at N={n} (the naive recursion is capped at s<=3, N<=4096)")]
    BudgetExceeded { s: u32, n: usize },
    #[error(transparent)]
    Number(#[from] NumberError),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

pub type Result<T> = std::result::Result<T, GowersError>;

/// ‖F‖_{U^s_[N]} for the truncated sequence F(1..N).
///
/// s = 1 and 2 are unrestricted (U² switches to the FFT autocorrelation for
/// large N; the two routes agree to 1e−10 and are cross-pinned in tests);
/// s = 3 takes the naive h-recursion and is budget-capped at N ≤ 4096.
pub fn gowers_norm(f: &[Complex64], s: u32) -> Result<f64> {
    let n = f.len();
    assert!(n >= 1 && s >= 1);
    match s {
        1 => Ok(u1(f)),
        2 => {
            if n <= 8192 {
                Ok(u2_energy_naive(f).powf(0.25))
            } else {
                Ok(u2_energy_fft(f).powf(0.25))
            }
        }
        3 => {
            if n > 4096 {
                return Err(GowersError::BudgetExceeded { s, n });
            }
            // e₃ = (1/N)·Σ_h ‖G_h‖_{U²}
            let energies: Vec<f64> = (1..=n)
                .into_par_iter()
                .map(|h| {
                    let g = shifted_product(f, h);
                    u2_energy_fft(&g).powf(0.25)
                })
                .collect();
            Ok((pairwise_sum_f64(&energies) / n as f64).powf(1.0 / 8.0))
        }
        _ => Err(GowersError::BudgetExceeded { s, n }),
    }
}

fn u1(f: &[Complex64]) -> f64 {
    pairwise_mean(f).norm()
}

/// G_h(n) = F(n)·conj(F(n+h)) on the overlapping support, zero-extended to N.
fn shifted_product(f: &[Complex64], h: usize) -> Vec<Complex64> {
    let n = f.len();
    let mut g = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n.saturating_sub(h) {
        g[i] = f[i] * f[i + h].conj();
    }
    g
}

/// e₂(F) = (1/N)·Σ_{h=1}^{N} |c_h| with c_h = (1/N)·Σ_n F(n)·conj(F(n+h)).
fn u2_energy_naive(f: &[Complex64]) -> f64 {
    let n = f.len();
    let mags: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|h| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n.saturating_sub(h) {
                acc += f[i] * f[i + h].conj();
            }
            acc.norm() / n as f64
        })
        .collect();
    pairwise_sum_f64(&mags) / n as f64
}

/// Same quantity through one FFT: the linear autocorrelation of the
/// zero-padded input, O(N log N).
fn u2_energy_fft(f: &[Complex64]) -> f64 {
    let n = f.len();
    let size = (2 * n + 1).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); size];
    buf[..n].copy_from_slice(f);
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    for v in buf.iter_mut() {
        *v = Complex64::new(v.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    // |buf[h]| = size · |Σ_i f(i)·conj(f(i+h))| for 1 ≤ h ≤ n (no wraparound)
    let scale = 1.0 / (size as f64 * n as f64);
    let mags: Vec<f64> = (1..=n).map(|h| buf[h].norm() * scale).collect();
    pairwise_sum_f64(&mags) / n as f64
}

/// ‖F‖_{U²_[N]} by the FFT route; equal to `gowers_norm(f, 2)` to 1e−10.
pub fn gowers_u2_fft(f: &[Complex64]) -> f64 {
    u2_energy_fft(f).powf(0.25)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WTrickMode {
    Classic,
    Beatty,
}

#[derive(Debug, Clone)]
pub struct WTrickReport {
    pub w: u64,
    pub big_w: u64,
    /// uniformity norm per admissible residue b
    pub per_b: Vec<(u64, f64)>,
    pub max_b: u64,
    pub value: f64,
}

/// max over admissible residues b (b ≤ W, gcd(b,W) = 1) of
/// ‖Λ_{W,b} − base‖_{U^s_[N]}, where Λ_{W,b}(n) = (φ(W)/W)·Λ'(Wn+b) and the
/// base is 1 (classic) or the indicator of B(θ,γ,W,b) = {n : Wn+b in the
/// Beatty set} (beatty mode).
pub fn w_trick_uniformity(
    w: u64,
    n_len: usize,
    s: u32,
    mode: WTrickMode,
    beatty: Option<(&ExactScalar, &ExactScalar)>,
) -> Result<WTrickReport> {
    let big_w = primorial(w)?;
    let scale = euler_totient(big_w) as f64 / big_w as f64;
    let limit = big_w
        .checked_mul(n_len as u64)
        .and_then(|v| v.checked_add(big_w))
        .ok_or(NumberError::Overflow)?;
    let sieve = PrimeSieve::new(limit.max(2));
    let mut per_b = Vec::new();
    for b in 1..=big_w {
        if gcd_u64(b, big_w) != 1 {
            continue;
        }
        let f: Vec<Complex64> = (1..=n_len as u64)
            .map(|n| {
                let m = big_w * n + b;
                let lam = if sieve.is_prime(m) { scale * (m as f64).ln() } else { 0.0 };
                let base = match mode {
                    WTrickMode::Classic => 1.0,
                    WTrickMode::Beatty => {
                        let (theta, gamma) = beatty.expect("beatty mode needs theta, gamma");
                        if beatty_indicator(theta, gamma, m as i64)? {
                            1.0
                        } else {
                            0.0
                        }
                    }
                };
                Ok(Complex64::new(lam - base, 0.0))
            })
            .collect::<Result<_>>()?;
        per_b.push((b, gowers_norm(&f, s)?));
    }
    let (max_b, value) = per_b
        .iter()
        .cloned()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .expect("at least b = 1 is admissible");
    Ok(WTrickReport {
        w,
        big_w,
        per_b,
        max_b,
        value,
    })
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Both sides of the weighted-average bound: the L² norm over samples of
/// (1/N)·Σ_n F(n)·Πⱼ fⱼ(T^{jn}·), and ‖F‖_{U^k_[N]} with k the number of
/// observables. No constant is asserted between them; the report is for
/// side-by-side inspection.
pub struct TransferDiagnostic {
    pub lhs: f64,
    pub u_norm: f64,
}

pub fn uniformity_transfer_diagnostic(
    sys: &crate::dynsys::TorusSystem,
    obs: &[crate::dynsys::Observable],
    f: &[Complex64],
    m_samples: usize,
) -> std::result::Result<TransferDiagnostic, Box<dyn std::error::Error + Send + Sync>> {
    let g = crate::correlate::average_with_weights(
        sys,
        obs,
        f,
        m_samples,
        crate::correlate::QuadraturePath::Auto,
    )?;
    let lhs = crate::correlate::l2_norm(&g);
    let u_norm = gowers_norm(f, obs.len() as u32)?;
    Ok(TransferDiagnostic { lhs, u_norm })
}
