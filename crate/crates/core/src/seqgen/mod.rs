//! Integer sequences and arithmetic weight functions: Beatty sequences,
//! primes, squarefree numbers, the von Mangoldt family with W-trick, and
//! Besicovitch trigonometric-polynomial fitting.
//!
//! All Beatty arithmetic runs in exact arithmetic (comparisons of quadratic
//! irrationals against integers), never through a float floor: a float floor
//! misclassifies near-integer multiples and corrupts indicator spectra.

mod sieve;

pub use sieve::{PrimeSieve, SquarefreeSieve};

use crate::numbers::{ExactScalar, NumberError, euler_totient, primorial};
use crate::sum::{pairwise_mean, pairwise_sum_f64};
use crate::{Complex64, e};
use std::cmp::Ordering;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeqError {
    #[error(transparent)]
    Number(#[from] NumberError),
    #[error("theta must be positive, found {0}")]
    NonPositiveTheta(String),
    #[error("beatty membership requires theta >= 1 (use beatty_hit_count below 1), found {0}")]
    ThetaBelowOne(String),
    #[error("evaluation at n={n} is outside the constructed range [1, {max}]")]
    OutOfRange { n: u64, max: u64 },
    #[error("frequencies must be distinct mod 1")]
    DuplicateFrequency,
}

pub type Result<T> = std::result::Result<T, SeqError>;

// --- Beatty sequences -------------------------------------------------------

/// ⌊θn + γ⌋ by exact floor.
pub fn beatty_term(theta: &ExactScalar, gamma: &ExactScalar, n: i64) -> Result<i64> {
    if theta.signum() <= 0 {
        return Err(SeqError::NonPositiveTheta(theta.to_string()));
    }
    let v = theta.mul_int(n as i128)?;
    let v = v.add(gamma)?;
    Ok(v.floor() as i64)
}

/// Membership of m in {⌊θn + γ⌋ : n ∈ Z} for θ ≥ 1, decided exactly through
/// the circle-interval characterization: m·θ⁻¹ mod 1 ∈ (a, b] with
/// a = (γ−1)/θ and b = γ/θ. When a ≥ b the interval wraps as (a,1] ∪ (0,b].
pub fn beatty_indicator(theta: &ExactScalar, gamma: &ExactScalar, m: i64) -> Result<bool> {
    if theta.signum() <= 0 {
        return Err(SeqError::NonPositiveTheta(theta.to_string()));
    }
    if theta.cmp_exact(&ExactScalar::one()) == Ordering::Less {
        return Err(SeqError::ThetaBelowOne(theta.to_string()));
    }
    if *theta == ExactScalar::one() {
        return Ok(true); // every integer: the arc is the full circle
    }
    let inv = theta.recip()?;
    let t = inv.mul_int(m as i128)?.reduce_mod1()?;
    let a = gamma
        .sub(&ExactScalar::one())?
        .mul(&inv)?
        .reduce_mod1()?;
    let b = gamma.mul(&inv)?.reduce_mod1()?;
    Ok(circle_half_open_contains(&a, &b, &t))
}

/// x ∈ (a, b] on the circle with representatives in [0,1); 1 ≡ 0.
fn circle_half_open_contains(a: &ExactScalar, b: &ExactScalar, x: &ExactScalar) -> bool {
    match a.cmp_exact(b) {
        Ordering::Less => {
            a.cmp_exact(x) == Ordering::Less && x.cmp_exact(b) != Ordering::Greater
        }
        Ordering::Greater => {
            // (a,1] ∪ (0,b]; the point 1 is represented by 0
            x.is_zero()
                || a.cmp_exact(x) == Ordering::Less
                || (x.signum() > 0 && x.cmp_exact(b) != Ordering::Greater)
        }
        Ordering::Equal => false, // zero-length arc (θ > 1 keeps this nonempty upstream)
    }
}

/// |{m : ⌊mθ + γ⌋ = n}| by the exact interval count
/// ⌈(n+1−γ)/θ⌉ − ⌈(n−γ)/θ⌉.
pub fn beatty_hit_count(theta: &ExactScalar, gamma: &ExactScalar, n: i64) -> Result<u64> {
    if theta.signum() <= 0 {
        return Err(SeqError::NonPositiveTheta(theta.to_string()));
    }
    let lo = ExactScalar::integer(n as i128)
        .sub(gamma)?
        .div(theta)?
        .ceil();
    let hi = ExactScalar::integer(n as i128 + 1)
        .sub(gamma)?
        .div(theta)?
        .ceil();
    Ok((hi - lo).max(0) as u64)
}

/// The increasing enumeration of {⌊θn + γ⌋ : n ∈ Z} ∩ [1, max_value]
/// (θ ≥ 1, so the map n ↦ ⌊θn+γ⌋ is strictly increasing).
pub fn beatty_set_terms(
    theta: &ExactScalar,
    gamma: &ExactScalar,
    max_value: i64,
) -> Result<Vec<i64>> {
    if theta.cmp_exact(&ExactScalar::one()) == Ordering::Less {
        return Err(SeqError::ThetaBelowOne(theta.to_string()));
    }
    // smallest n with θn + γ ≥ 1, i.e. n ≥ (1 − γ)/θ
    let start = ExactScalar::one().sub(gamma)?.div(theta)?.ceil() as i64;
    let mut out = Vec::new();
    let mut n = start;
    loop {
        let v = beatty_term(theta, gamma, n)?;
        if v > max_value {
            return Ok(out);
        }
        if v >= 1 {
            out.push(v);
        }
        n += 1;
    }
}

// --- index sequences ---------------------------------------------------------

/// How a kind enters an average: as iterate exponents a(n) indexed by the
/// summation variable, or as a member set selected from the summation range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMode {
    ByIndex,
    ByMembership,
}

#[derive(Debug, Clone)]
pub enum IndexKind {
    /// a(n) = qn + r
    Arithmetic { q: i64, r: i64 },
    /// a(n) = ⌊θn + γ⌋
    Beatty { theta: ExactScalar, gamma: ExactScalar },
    Squarefree,
    Primes,
    /// primes that lie in the Beatty set {⌊θn+γ⌋ : n ∈ Z}
    BeattyPrimes { theta: ExactScalar, gamma: ExactScalar },
    Explicit(Vec<i64>),
}

#[derive(Debug)]
pub struct IndexSequence {
    kind: IndexKind,
    /// sorted members ≤ n_max for the membership kinds
    members: Vec<i64>,
    n_max: u64,
}

impl IndexSequence {
    /// For by-index kinds `n_max` bounds the summation index; for membership
    /// kinds it bounds the member values.
    pub fn build(kind: IndexKind, n_max: u64) -> Result<Self> {
        let members = match &kind {
            IndexKind::Primes => {
                let s = PrimeSieve::new(n_max.max(2));
                s.primes().take_while(|&p| p <= n_max).map(|p| p as i64).collect()
            }
            IndexKind::Squarefree => {
                let s = SquarefreeSieve::new(n_max.max(1));
                (1..=n_max).filter(|&n| s.is_squarefree(n)).map(|n| n as i64).collect()
            }
            IndexKind::BeattyPrimes { theta, gamma } => {
                let s = PrimeSieve::new(n_max.max(2));
                let mut v = Vec::new();
                for p in s.primes().take_while(|&p| p <= n_max) {
                    if beatty_indicator(theta, gamma, p as i64)? {
                        v.push(p as i64);
                    }
                }
                v
            }
            IndexKind::Beatty { theta, .. } => {
                if theta.cmp_exact(&ExactScalar::one()) == Ordering::Less {
                    return Err(SeqError::ThetaBelowOne(theta.to_string()));
                }
                Vec::new()
            }
            _ => Vec::new(),
        };
        Ok(IndexSequence { kind, members, n_max })
    }

    pub fn kind(&self) -> &IndexKind {
        &self.kind
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn mode(&self) -> SelectionMode {
        match self.kind {
            IndexKind::Arithmetic { .. } | IndexKind::Beatty { .. } | IndexKind::Explicit(_) => {
                SelectionMode::ByIndex
            }
            _ => SelectionMode::ByMembership,
        }
    }

    /// Iterate exponents contributed by the window [lo, hi] of the summation
    /// range: a(lo)..a(hi) for by-index kinds, the members inside [lo, hi]
    /// for membership kinds.
    pub fn exponents_for_window(&self, lo: u64, hi: u64) -> Result<Vec<i64>> {
        if hi > self.n_max || lo < 1 || lo > hi {
            return Err(SeqError::OutOfRange { n: hi, max: self.n_max });
        }
        match &self.kind {
            IndexKind::Arithmetic { q, r } => {
                Ok((lo..=hi).map(|n| q * n as i64 + r).collect())
            }
            IndexKind::Beatty { theta, gamma } => (lo..=hi)
                .map(|n| beatty_term(theta, gamma, n as i64))
                .collect(),
            IndexKind::Explicit(v) => Ok(v[(lo - 1) as usize..=(hi - 1) as usize].to_vec()),
            _ => {
                let from = self.members.partition_point(|&m| (m as u64) < lo);
                let to = self.members.partition_point(|&m| m as u64 <= hi);
                Ok(self.members[from..to].to_vec())
            }
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            IndexKind::Arithmetic { q, r } => format!("arith:q={q},r={r}"),
            IndexKind::Beatty { theta, gamma } => format!("beatty:theta={theta},gamma={gamma}"),
            IndexKind::Squarefree => "squarefree".into(),
            IndexKind::Primes => "primes".into(),
            IndexKind::BeattyPrimes { theta, gamma } => {
                format!("beatty_primes:theta={theta},gamma={gamma}")
            }
            IndexKind::Explicit(v) => format!("explicit[len={}]", v.len()),
        }
    }
}

// --- weights ------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum WeightKind {
    /// Λ(n): log p on prime powers pᵏ, 0 elsewhere
    Mangoldt,
    /// Λ'(n) = log(n)·1_P(n)
    MangoldtPrime,
    /// Λ_{W,b}(n) = (φ(W)/W)·Λ'(Wn+b), W the primorial of w
    MangoldtWb { w: u64, b: u64 },
    /// Λ_{θ,γ}(n) = log(n)·1_{P(θ,γ)}(n)
    MangoldtBeatty { theta: ExactScalar, gamma: ExactScalar },
    /// Λ_{θ,γ,W,b}(n) = (φ(W)/W)·Λ_{θ,γ}(Wn+b)
    MangoldtBeattyWb {
        theta: ExactScalar,
        gamma: ExactScalar,
        w: u64,
        b: u64,
    },
    /// indicator of an index-sequence membership set
    Indicator(Arc<IndexSequence>),
    /// ρ(n) = Σⱼ cⱼ·e(θⱼ n)
    TrigPoly { terms: Vec<(Complex64, ExactScalar)> },
    Const(Complex64),
}

pub struct WeightSequence {
    kind: WeightKind,
    sieve: Option<Arc<PrimeSieve>>,
    /// scale (φ(W)/W) and modulus data for the W-tricked kinds
    wb: Option<(u64, f64)>, // (W, φ(W)/W)
    n_max: u64,
    /// cached float frequencies for trig polynomials
    trig: Vec<(Complex64, f64)>,
}

impl WeightSequence {
    pub fn build(kind: WeightKind, n_max: u64) -> Result<Self> {
        let mut wb = None;
        let sieve = match &kind {
            WeightKind::MangoldtPrime | WeightKind::MangoldtBeatty { .. } => {
                Some(Arc::new(PrimeSieve::new(n_max.max(2))))
            }
            WeightKind::MangoldtWb { w, b } | WeightKind::MangoldtBeattyWb { w, b, .. } => {
                let big_w = primorial(*w)?;
                wb = Some((big_w, euler_totient(big_w) as f64 / big_w as f64));
                let limit = big_w
                    .checked_mul(n_max)
                    .and_then(|v| v.checked_add(*b))
                    .ok_or(NumberError::Overflow)?;
                Some(Arc::new(PrimeSieve::new(limit)))
            }
            _ => None,
        };
        let trig = match &kind {
            WeightKind::TrigPoly { terms } => {
                let mut freqs: Vec<ExactScalar> = Vec::new();
                for (_, f) in terms {
                    let f = f.reduce_mod1()?;
                    if freqs.contains(&f) {
                        return Err(SeqError::DuplicateFrequency);
                    }
                    freqs.push(f);
                }
                terms
                    .iter()
                    .map(|(c, f)| Ok((*c, f.reduce_mod1()?.to_f64())))
                    .collect::<Result<_>>()?
            }
            _ => Vec::new(),
        };
        Ok(WeightSequence {
            kind,
            sieve,
            wb,
            n_max,
            trig,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn eval(&self, n: u64) -> Result<Complex64> {
        if n < 1 || n > self.n_max {
            return Err(SeqError::OutOfRange { n, max: self.n_max });
        }
        let re = |x: f64| Complex64::new(x, 0.0);
        match &self.kind {
            WeightKind::Mangoldt => Ok(re(mangoldt(n))),
            WeightKind::MangoldtPrime => {
                let s = self.sieve.as_ref().unwrap();
                Ok(re(if s.is_prime(n) { (n as f64).ln() } else { 0.0 }))
            }
            WeightKind::MangoldtWb { b, .. } => {
                let (big_w, scale) = self.wb.unwrap();
                let m = big_w * n + b;
                let s = self.sieve.as_ref().unwrap();
                Ok(re(if s.is_prime(m) { scale * (m as f64).ln() } else { 0.0 }))
            }
            WeightKind::MangoldtBeatty { theta, gamma } => {
                let s = self.sieve.as_ref().unwrap();
                if s.is_prime(n) && beatty_indicator(theta, gamma, n as i64)? {
                    Ok(re((n as f64).ln()))
                } else {
                    Ok(re(0.0))
                }
            }
            WeightKind::MangoldtBeattyWb { theta, gamma, b, .. } => {
                let (big_w, scale) = self.wb.unwrap();
                let m = big_w * n + b;
                let s = self.sieve.as_ref().unwrap();
                if s.is_prime(m) && beatty_indicator(theta, gamma, m as i64)? {
                    Ok(re(scale * (m as f64).ln()))
                } else {
                    Ok(re(0.0))
                }
            }
            WeightKind::Indicator(idx) => Ok(re(match &idx.kind {
                IndexKind::Arithmetic { q, r } => {
                    let n = n as i64;
                    if n >= q + r && (n - r).rem_euclid(*q) == 0 { 1.0 } else { 0.0 }
                }
                IndexKind::Beatty { theta, gamma } => {
                    if beatty_indicator(theta, gamma, n as i64)? { 1.0 } else { 0.0 }
                }
                _ => {
                    if idx.members.binary_search(&(n as i64)).is_ok() { 1.0 } else { 0.0 }
                }
            })),
            WeightKind::TrigPoly { .. } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, f) in &self.trig {
                    acc += c * e((f * n as f64).fract());
                }
                Ok(acc)
            }
            WeightKind::Const(c) => Ok(*c),
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            WeightKind::Mangoldt => "mangoldt".into(),
            WeightKind::MangoldtPrime => "mangoldt_prime".into(),
            WeightKind::MangoldtWb { w, b } => format!("mangoldt_wb:w={w},b={b}"),
            WeightKind::MangoldtBeatty { theta, gamma } => {
                format!("mangoldt_beatty:theta={theta},gamma={gamma}")
            }
            WeightKind::MangoldtBeattyWb { theta, gamma, w, b } => {
                format!("mangoldt_beatty_wb:theta={theta},gamma={gamma},w={w},b={b}")
            }
            WeightKind::Indicator(idx) => format!("indicator:{}", idx.describe()),
            WeightKind::TrigPoly { terms } => format!("trig_poly[{} terms]", terms.len()),
            WeightKind::Const(c) => format!("const:{c}"),
        }
    }
}

/// Λ(n): log p when n = pᵏ (k ≥ 1), else 0.
pub fn mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut m = n;
    let mut p = 0u64;
    for cand in std::iter::once(2).chain((3..).step_by(2)) {
        if cand * cand > m {
            break;
        }
        if m.is_multiple_of(cand) {
            p = cand;
            break;
        }
    }
    if p == 0 {
        return (n as f64).ln(); // n itself is prime
    }
    while m.is_multiple_of(p) {
        m /= p;
    }
    if m == 1 {
        (p as f64).ln()
    } else {
        0.0
    }
}

// --- Besicovitch fitting ------------------------------------------------------

/// Fit φ over [1, N] by the trigonometric polynomial with the given
/// frequencies: cⱼ = (1/N) Σ φ(n) e(−θⱼ n), and report the averaged
/// absolute residual (1/N) Σ |φ(n) − ρ(n)|.
pub fn besicovitch_fit(
    phi: &[Complex64],
    freqs: &[ExactScalar],
) -> Result<(Vec<Complex64>, f64)> {
    let n_len = phi.len();
    let mut reduced: Vec<f64> = Vec::with_capacity(freqs.len());
    let mut seen: Vec<ExactScalar> = Vec::new();
    for f in freqs {
        let r = f.reduce_mod1()?;
        if seen.contains(&r) {
            return Err(SeqError::DuplicateFrequency);
        }
        seen.push(r);
        reduced.push(r.to_f64());
    }
    let coeffs: Vec<Complex64> = reduced
        .iter()
        .map(|&th| {
            let terms: Vec<Complex64> = (1..=n_len)
                .map(|n| phi[n - 1] * e((-th * n as f64).fract()))
                .collect();
            pairwise_mean(&terms)
        })
        .collect();
    let residuals: Vec<f64> = (1..=n_len)
        .map(|n| {
            let mut rho = Complex64::new(0.0, 0.0);
            for (c, &th) in coeffs.iter().zip(reduced.iter()) {
                rho += c * e((th * n as f64).fract());
            }
            (phi[n - 1] - rho).norm()
        })
        .collect();
    let residual = pairwise_sum_f64(&residuals) / n_len as f64;
    Ok((coeffs, residual))
}

#[cfg(test)]
mod tests;
