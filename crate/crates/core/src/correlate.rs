//! Multi-correlation sequences and L²-valued empirical averages.
//!
//! The central objects are
//!
//! * α(n) = ∫ f₀·Tⁿf₁⋯T^{kn}f_k dμ, approximated by grid quadrature, and
//! * g_N(x) = normalized Σ_n w(n)·Πⱼ fⱼ(T^{j·a(n)} x), the L²-valued average
//!   along an index sequence or weight.
//!
//! Two evaluation paths produce the same numbers: a generic sample loop, and
//! a character path that evaluates the grid sum of a product of characters in
//! closed form (the grid average of e(A·u/G) is exactly [G | A]). The
//! character path reproduces grid aliasing faithfully, so it is a fast
//! implementation of the same quadrature, not a different estimator.

use crate::dynsys::{Observable, SampleKind, SampleSet, TorusPoint, TorusSystem, sample_measure, sample_orbit};
use crate::numbers::{ExactScalar, NumberError};
use crate::seqgen::{IndexSequence, SeqError, WeightSequence};
use crate::sum::{pairwise_mean, pairwise_sum, pairwise_sum_f64};
use crate::{Complex64, e};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CorrError {
    #[error(transparent)]
    Number(#[from] NumberError),
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error("need at least two observables (f0 and f1)")]
    TooFewObservables,
    #[error("empty selection: no indices selected in the window")]
    EmptySelection,
    #[error("empirical functions live on different sample sets: {0} vs {1}")]
    MismatchedSampleSets(String, String),
    #[error("character path requested but an observable is not a trigonometric polynomial")]
    NotCharacterLike,
    #[error("the character path needs grid quadrature; orbit sampling takes the sample loop")]
    CharacterPathNeedsGrid,
    #[error("normalizing weight sum is numerically zero")]
    ZeroWeightSum,
}

pub type Result<T> = std::result::Result<T, CorrError>;

/// Which sample set approximates Lebesgue measure: the exact uniform grid
/// (default) or single-orbit Birkhoff samples started at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Grid { m_target: usize },
    Orbit { m_target: usize },
}

impl From<usize> for Quadrature {
    fn from(m_target: usize) -> Self {
        Quadrature::Grid { m_target }
    }
}

impl Quadrature {
    fn build(self, sys: &TorusSystem) -> SampleSet {
        match self {
            Quadrature::Grid { m_target } => sample_measure(sys, m_target),
            Quadrature::Orbit { m_target } => {
                let origin = TorusPoint::from_exact(vec![
                    crate::numbers::ExactScalar::zero();
                    sys.dim()
                ]);
                sample_orbit(sys, &origin, m_target)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadraturePath {
    /// character path when all observables are trigonometric polynomials,
    /// sample loop otherwise
    Auto,
    SampleLoop,
    CharacterExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// divide by the number of contributing terms
    Count,
    /// divide by the window length
    Cesaro,
    /// divide by the sum of the weights over the window
    WeightSum,
}

#[derive(Debug, Clone)]
pub struct Provenance {
    pub system: String,
    pub observables: Vec<String>,
    pub quadrature: String,
    pub path: &'static str,
}

impl Provenance {
    pub fn comment_lines(&self) -> Vec<String> {
        vec![
            format!("# system: {}", self.system),
            format!("# observables: {}", self.observables.join(" ")),
            format!("# quadrature: {} ({})", self.quadrature, self.path),
        ]
    }
}

/// α(1..N) with full provenance; values[i] is α(i+1).
#[derive(Debug, Clone)]
pub struct CorrelationSeries {
    pub values: Vec<Complex64>,
    pub provenance: Provenance,
}

impl CorrelationSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// CSV rows `n,re,im` preceded by provenance comment lines.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        for line in self.provenance.comment_lines() {
            writeln!(w, "{line}")?;
        }
        writeln!(w, "n,re,im")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{},{}", i + 1, fmt_f64(v.re), fmt_f64(v.im))?;
        }
        Ok(())
    }
}

/// 17-significant-digit scientific notation: round-trip safe, locale-free.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Function on a fixed quadrature sample set; comparable only on identical
/// sample sets.
#[derive(Debug, Clone)]
pub struct EmpiricalFunction {
    pub values: Vec<Complex64>,
    pub sample_id: String,
    /// how the function was produced (selector, window, normalization); not
    /// part of sample-set compatibility
    pub provenance: String,
}

impl EmpiricalFunction {
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# samples: {}", self.sample_id)?;
        writeln!(w, "# average: {}", self.provenance)?;
        writeln!(w, "sample_id,re,im")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{},{}", i, fmt_f64(v.re), fmt_f64(v.im))?;
        }
        Ok(())
    }

    pub fn scale(&self, c: Complex64) -> EmpiricalFunction {
        EmpiricalFunction {
            values: self.values.iter().map(|v| v * c).collect(),
            sample_id: self.sample_id.clone(),
            provenance: format!("{} (scaled)", self.provenance),
        }
    }
}

/// √ of the mean of |g−h|² over the shared sample set.
pub fn l2_distance(g: &EmpiricalFunction, h: &EmpiricalFunction) -> Result<f64> {
    if g.sample_id != h.sample_id || g.values.len() != h.values.len() {
        return Err(CorrError::MismatchedSampleSets(
            g.sample_id.clone(),
            h.sample_id.clone(),
        ));
    }
    let sq: Vec<f64> = g
        .values
        .iter()
        .zip(h.values.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .collect();
    Ok((pairwise_sum_f64(&sq) / sq.len() as f64).sqrt())
}

/// L² norm of g over its sample set.
pub fn l2_norm(g: &EmpiricalFunction) -> f64 {
    let sq: Vec<f64> = g.values.iter().map(|v| v.norm_sqr()).collect();
    (pairwise_sum_f64(&sq) / sq.len() as f64).sqrt()
}

/// Arithmetic mean of values[M..=N] (1-based window), through the pairwise tree.
pub fn cesaro(series: &[Complex64], window: (usize, usize)) -> Complex64 {
    let (m, n) = window;
    assert!(m >= 1 && m <= n && n <= series.len(), "window out of range");
    pairwise_mean(&series[m - 1..n])
}

// --- character-path machinery -----------------------------------------------

/// Character-path availability: trigonometric-polynomial observables on grid
/// quadrature only.
fn char_terms_for(
    samples: &SampleSet,
    obs: &[Observable],
    path: QuadraturePath,
) -> Result<Option<Vec<CharTerm>>> {
    match path {
        QuadraturePath::SampleLoop => Ok(None),
        QuadraturePath::Auto => {
            if samples.kind == SampleKind::Grid {
                Ok(expand_char_terms(obs))
            } else {
                Ok(None)
            }
        }
        QuadraturePath::CharacterExact => {
            if samples.kind != SampleKind::Grid {
                return Err(CorrError::CharacterPathNeedsGrid);
            }
            Ok(Some(expand_char_terms(obs).ok_or(CorrError::NotCharacterLike)?))
        }
    }
}

/// One multilinear term of the product Πⱼ fⱼ(T^{sⱼ}·): a coefficient and one
/// frequency vector per observable.
struct CharTerm {
    coeff: Complex64,
    freqs: Vec<Vec<i64>>, // per observable position
}

/// Expand observables (each a character or trig polynomial) into the product's
/// multilinear terms. Returns None when an observable is not character-like or
/// the expansion would exceed the term budget.
fn expand_char_terms(obs: &[Observable]) -> Option<Vec<CharTerm>> {
    const TERM_BUDGET: usize = 256;
    let mut terms = vec![CharTerm {
        coeff: Complex64::new(1.0, 0.0),
        freqs: Vec::new(),
    }];
    for f in obs {
        let factors: Vec<(Complex64, Vec<i64>)> = match f {
            Observable::Character { freqs } => vec![(Complex64::new(1.0, 0.0), freqs.clone())],
            Observable::TrigPoly { terms } => terms.clone(),
            Observable::ArcIndicator { .. } => return None,
        };
        let mut next = Vec::with_capacity(terms.len() * factors.len());
        for t in &terms {
            for (c, fr) in &factors {
                next.push(CharTerm {
                    coeff: t.coeff * c,
                    freqs: {
                        let mut v = t.freqs.clone();
                        v.push(fr.clone());
                        v
                    },
                });
            }
        }
        if next.len() > TERM_BUDGET {
            return None;
        }
        terms = next;
    }
    Some(terms)
}

/// Exact grid average of one multilinear character term over the quadrature
/// grid, for iterate exponents s_j (j-th observable evaluated at T^{s_j}x).
///
/// Rotation: Πⱼ e(⟨mⱼ, x + sⱼα⟩) integrates to e(Σ sⱼ⟨mⱼ,α⟩) iff every axis
/// frequency sum is ≡ 0 mod the grid side. Skew product: the z-frequencies
/// shift the y-frequency sum by Σ lⱼsⱼ and the phase by Σ lⱼ·C(sⱼ,2)·α.
fn char_term_grid_value(
    sys: &TorusSystem,
    side: usize,
    term: &CharTerm,
    exps: &[i64],
) -> Result<Complex64> {
    let g = side as i128;
    match sys {
        TorusSystem::Rotation { alphas } => {
            for axis in 0..alphas.len() {
                let total: i128 = term.freqs.iter().map(|m| m[axis] as i128).sum();
                if total.rem_euclid(g) != 0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
            }
            let mut phase = ExactScalar::zero();
            for (m, &s) in term.freqs.iter().zip(exps.iter()) {
                for (axis, alpha) in alphas.iter().enumerate() {
                    let c = (m[axis] as i128)
                        .checked_mul(s as i128)
                        .ok_or(NumberError::Overflow)?;
                    phase = phase.add(&alpha.mul_int(c)?)?;
                }
            }
            Ok(term.coeff * e(phase.reduce_mod1()?.to_f64()))
        }
        TorusSystem::Skew2 { alpha } => {
            let mut a_y: i128 = 0;
            let mut a_z: i128 = 0;
            let mut p: i128 = 0; // phase = p·α
            for (m, &s) in term.freqs.iter().zip(exps.iter()) {
                let (k, l) = (m[0] as i128, m[1] as i128);
                let s = s as i128;
                let binom = s
                    .checked_mul(s - 1)
                    .map(|v| v / 2)
                    .ok_or(NumberError::Overflow)?;
                a_y = a_y
                    .checked_add(k + l.checked_mul(s).ok_or(NumberError::Overflow)?)
                    .ok_or(NumberError::Overflow)?;
                a_z += l;
                let kp = k.checked_mul(s).ok_or(NumberError::Overflow)?;
                let lp = l.checked_mul(binom).ok_or(NumberError::Overflow)?;
                p = kp
                    .checked_add(lp)
                    .and_then(|v| v.checked_add(p))
                    .ok_or(NumberError::Overflow)?;
            }
            if a_y.rem_euclid(g) != 0 || a_z.rem_euclid(g) != 0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let phase = alpha.mul_int(p)?.reduce_mod1()?;
            Ok(term.coeff * e(phase.to_f64()))
        }
    }
}

// --- generic sample-loop kernel -----------------------------------------------

/// Per-exponent iterate data, precomputed once in exact arithmetic and applied
/// to every sample in floats.
enum StepOffsets {
    Rotation(Vec<f64>),
    /// (s, s·α mod 1, C(s,2)·α mod 1)
    Skew { s: i64, lin: f64, quad: f64 },
}

fn step_offsets(sys: &TorusSystem, s: i64) -> Result<StepOffsets> {
    match sys {
        TorusSystem::Rotation { alphas } => {
            let offs = alphas
                .iter()
                .map(|a| {
                    Ok(a.mul_int(s as i128)
                        ?
                        .reduce_mod1()?
                        .to_f64())
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(StepOffsets::Rotation(offs))
        }
        TorusSystem::Skew2 { alpha } => {
            let binom = (s as i128) * (s as i128 - 1) / 2;
            let lin = alpha
                .mul_int(s as i128)
                ?
                .reduce_mod1()?
                .to_f64();
            let quad = alpha
                .mul_int(binom)
                ?
                .reduce_mod1()?
                .to_f64();
            Ok(StepOffsets::Skew { s, lin, quad })
        }
    }
}

/// Coordinates of T^s(xᵢ) for grid sample i, written into `buf`.
fn apply_offsets(off: &StepOffsets, grid: &SampleSet, i: usize, buf: &mut [f64]) {
    match off {
        StepOffsets::Rotation(offs) => {
            for (b, (x, o)) in buf
                .iter_mut()
                .zip(grid.points[i].coords().iter().zip(offs.iter()))
            {
                let v = x + o;
                *b = if v >= 1.0 { v - 1.0 } else { v };
            }
        }
        StepOffsets::Skew { s, lin, quad } => {
            if grid.kind == SampleKind::Grid {
                let side = grid.side as u64;
                let u = (i / grid.side) as u64;
                let v = (i % grid.side) as u64;
                let y = u as f64 / side as f64;
                let z = v as f64 / side as f64;
                // s·y for y = u/side, exactly: ((s·u) mod side)/side
                let su = (*s as i128 * u as i128).rem_euclid(side as i128) as f64;
                buf[0] = (y + lin).rem_euclid(1.0);
                buf[1] = (z + su / side as f64 + quad).rem_euclid(1.0);
            } else {
                let y = grid.points[i].coords()[0];
                let z = grid.points[i].coords()[1];
                buf[0] = (y + lin).rem_euclid(1.0);
                buf[1] = (z + (*s as f64 * y).rem_euclid(1.0) + quad).rem_euclid(1.0);
            }
        }
    }
}

/// (1/M) Σᵢ Πⱼ fⱼ(T^{sⱼ}xᵢ) over the grid, by direct evaluation.
fn sample_loop_value(
    sys: &TorusSystem,
    grid: &SampleSet,
    obs: &[Observable],
    exps: &[i64],
) -> Result<Complex64> {
    let offsets: Vec<StepOffsets> = exps
        .iter()
        .map(|&s| step_offsets(sys, s))
        .collect::<Result<_>>()?;
    let d = grid.dim;
    let terms: Vec<Complex64> = (0..grid.len())
        .map(|i| {
            let mut buf = vec![0.0; d];
            let mut prod = Complex64::new(1.0, 0.0);
            for (f, off) in obs.iter().zip(offsets.iter()) {
                apply_offsets(off, grid, i, &mut buf);
                prod *= f.eval(&buf);
            }
            prod
        })
        .collect();
    Ok(pairwise_mean(&terms))
}

// --- multicorrelation -----------------------------------------------------------

/// α(n) = (1/M) Σ_m f₀(x_m)·f₁(Tⁿx_m)⋯f_k(T^{kn}x_m) for n = 1..=n_max.
///
/// `obs` is f₀..f_k; `m_samples` requests the quadrature grid size. Exact for
/// character observables whose frequencies stay below the grid side.
pub fn multicorrelation(
    sys: &TorusSystem,
    obs: &[Observable],
    n_max: u64,
    quad: impl Into<Quadrature>,
    path: QuadraturePath,
) -> Result<CorrelationSeries> {
    if obs.len() < 2 {
        return Err(CorrError::TooFewObservables);
    }
    let grid = quad.into().build(sys);
    let char_terms = char_terms_for(&grid, obs, path)?;

    let exps_for = |n: u64| -> Vec<i64> { (0..obs.len() as i64).map(|j| j * n as i64).collect() };

    let values: Vec<Complex64> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let exps = exps_for(n);
            match &char_terms {
                Some(terms) => {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for t in terms {
                        acc += char_term_grid_value(sys, grid.side, t, &exps)?;
                    }
                    Ok(acc)
                }
                None => sample_loop_value(sys, &grid, obs, &exps),
            }
        })
        .collect::<Result<_>>()?;

    Ok(CorrelationSeries {
        values,
        provenance: Provenance {
            system: sys.describe(),
            observables: obs.iter().map(|f| f.describe()).collect(),
            quadrature: grid.id(),
            path: if char_terms.is_some() {
                "character-exact"
            } else {
                "sample-loop"
            },
        },
    })
}

// --- averages along sequences and weights ----------------------------------------

/// What to average along: an index sequence (its exponents for the window) or
/// a weight over the raw progression.
pub enum Selector<'a> {
    Index(&'a IndexSequence),
    Weight(&'a WeightSequence),
    /// the identity progression a(n) = n with unit weights
    Plain,
}

impl Selector<'_> {
    fn describe(&self) -> String {
        match self {
            Selector::Index(i) => format!("idx:{}", i.describe()),
            Selector::Weight(w) => format!("weight:{}", w.describe()),
            Selector::Plain => "plain".into(),
        }
    }

    /// (exponent, weight) pairs contributed by the window [lo, hi].
    fn items(&self, lo: u64, hi: u64) -> Result<Vec<(i64, Complex64)>> {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Selector::Plain => Ok((lo..=hi).map(|n| (n as i64, one)).collect()),
            Selector::Index(idx) => Ok(idx
                .exponents_for_window(lo, hi)?
                .into_iter()
                .map(|a| (a, one))
                .collect()),
            Selector::Weight(w) => {
                let mut items = Vec::new();
                for n in lo..=hi {
                    let v = w.eval(n)?;
                    if v.norm_sqr() != 0.0 {
                        items.push((n as i64, v));
                    }
                }
                Ok(items)
            }
        }
    }

    /// Sum of raw weights over the window (1 per index for index selectors).
    fn weight_sum(&self, lo: u64, hi: u64) -> Result<Complex64> {
        match self {
            Selector::Plain => Ok(Complex64::new((hi - lo + 1) as f64, 0.0)),
            Selector::Index(idx) => {
                Ok(Complex64::new(idx.exponents_for_window(lo, hi)?.len() as f64, 0.0))
            }
            Selector::Weight(w) => {
                let vals: Vec<Complex64> = (lo..=hi).map(|n| w.eval(n)).collect::<crate::seqgen::Result<_>>()?;
                Ok(pairwise_sum(&vals))
            }
        }
    }
}

/// g(x) = normalized Σ over selected n of w(n)·Πⱼ fⱼ(T^{j·a(n)}x) as a
/// function on the quadrature grid. `obs` is f₁..f_k (no f₀: the average is
/// L²-valued, not integrated).
pub fn average_along(
    sys: &TorusSystem,
    obs: &[Observable],
    selector: &Selector,
    window: (u64, u64),
    quad: impl Into<Quadrature>,
    norm: Normalization,
    path: QuadraturePath,
) -> Result<EmpiricalFunction> {
    if obs.is_empty() {
        return Err(CorrError::TooFewObservables);
    }
    let (lo, hi) = window;
    let items = selector.items(lo, hi)?;
    if items.is_empty() {
        return Err(CorrError::EmptySelection);
    }
    let divisor = match norm {
        Normalization::Count => Complex64::new(items.len() as f64, 0.0),
        Normalization::Cesaro => Complex64::new((hi - lo + 1) as f64, 0.0),
        Normalization::WeightSum => {
            let s = selector.weight_sum(lo, hi)?;
            // "zero" relative to the total weight mass: dividing by a sum
            // that cancelled to rounding noise would amplify garbage
            let mass: f64 = items.iter().map(|(_, w)| w.norm()).sum();
            if s.norm() < 1e-12 * mass.max(f64::MIN_POSITIVE) {
                return Err(CorrError::ZeroWeightSum);
            }
            s
        }
    };

    let grid = quad.into().build(sys);
    let char_terms = char_terms_for(&grid, obs, path)?;

    let values = match &char_terms {
        Some(terms) => {
            average_character_path(sys, &grid, terms, &items)?
        }
        None => {
            // Precompute iterate offsets per item once; evaluate per sample
            // with a fixed pairwise tree over the items.
            let offsets: Vec<(Vec<StepOffsets>, Complex64)> = items
                .iter()
                .map(|(a, w)| {
                    let per_j = (1..=obs.len() as i64)
                        .map(|j| {
                            let s = j.checked_mul(*a).ok_or(NumberError::Overflow)?;
                            step_offsets(sys, s)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok((per_j, *w))
                })
                .collect::<Result<_>>()?;
            assert!(grid.dim <= 4, "sample-loop averages support dimension <= 4");
            (0..grid.len())
                .into_par_iter()
                .map(|i| {
                    crate::sum::pairwise_sum_by(offsets.len(), &|t| {
                        let (per_j, w) = &offsets[t];
                        let mut buf = [0.0f64; 4];
                        let mut prod = Complex64::new(1.0, 0.0);
                        for (f, off) in obs.iter().zip(per_j.iter()) {
                            apply_offsets(off, &grid, i, &mut buf[..grid.dim]);
                            prod *= f.eval(&buf[..grid.dim]);
                        }
                        prod * w
                    })
                })
                .collect()
        }
    };

    Ok(EmpiricalFunction {
        values: values.into_iter().map(|v| v / divisor).collect(),
        sample_id: format!("{}|{}", sys.describe(), grid.id()),
        provenance: format!(
            "{} window=[{lo},{hi}] norm={norm:?} obs={}",
            selector.describe(),
            obs.iter().map(|f| f.describe()).collect::<Vec<_>>().join(" ")
        ),
    })
}

/// Average with explicit weights w(n) for n = 1..=len(weights): Cesàro
/// normalization over that range; zero weights are skipped in the sum.
pub fn average_with_weights(
    sys: &TorusSystem,
    obs: &[Observable],
    weights: &[Complex64],
    quad: impl Into<Quadrature>,
    path: QuadraturePath,
) -> Result<EmpiricalFunction> {
    let quad = quad.into();
    if obs.is_empty() {
        return Err(CorrError::TooFewObservables);
    }
    let items: Vec<(i64, Complex64)> = weights
        .iter()
        .enumerate()
        .filter(|(_, w)| w.norm_sqr() != 0.0)
        .map(|(i, w)| (i as i64 + 1, *w))
        .collect();
    if items.is_empty() {
        // a zero weight still has a well-defined (zero) Cesàro average
        let grid = quad.build(sys);
        return Ok(EmpiricalFunction {
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            sample_id: format!("{}|{}", sys.describe(), grid.id()),
            provenance: "explicit-weights (all zero)".into(),
        });
    }
    let grid = quad.build(sys);
    let char_terms = char_terms_for(&grid, obs, path)?;
    let values = match &char_terms {
        Some(terms) => average_character_path(sys, &grid, terms, &items)?,
        None => {
            let offsets: Vec<(Vec<StepOffsets>, Complex64)> = items
                .iter()
                .map(|(a, w)| {
                    let per_j = (1..=obs.len() as i64)
                        .map(|j| step_offsets(sys, j * a))
                        .collect::<Result<Vec<_>>>()?;
                    Ok((per_j, *w))
                })
                .collect::<Result<_>>()?;
            (0..grid.len())
                .into_par_iter()
                .map(|i| {
                    crate::sum::pairwise_sum_by(offsets.len(), &|t| {
                        let (per_j, w) = &offsets[t];
                        let mut buf = [0.0f64; 4];
                        let mut prod = Complex64::new(1.0, 0.0);
                        for (f, off) in obs.iter().zip(per_j.iter()) {
                            apply_offsets(off, &grid, i, &mut buf[..grid.dim]);
                            prod *= f.eval(&buf[..grid.dim]);
                        }
                        prod * w
                    })
                })
                .collect()
        }
    };
    let divisor = weights.len() as f64;
    Ok(EmpiricalFunction {
        values: values.into_iter().map(|v| v / divisor).collect(),
        sample_id: format!("{}|{}", sys.describe(), grid.id()),
        provenance: format!(
            "explicit-weights len={} obs={}",
            weights.len(),
            obs.iter().map(|f| f.describe()).collect::<Vec<_>>().join(" ")
        ),
    })
}

/// Character path for averages: the n-sum collapses to per-term scalars (and
/// for the skew product, to one scalar per residue of the drifting
/// y-frequency mod the grid side).
fn average_character_path(
    sys: &TorusSystem,
    grid: &SampleSet,
    terms: &[CharTerm],
    items: &[(i64, Complex64)],
) -> Result<Vec<Complex64>> {
    let g = grid.side as i128;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    for term in terms {
        match sys {
            TorusSystem::Rotation { alphas } => {
                let d = alphas.len();
                // axis frequency sums are exponent-independent
                let freq_sum: Vec<i128> = (0..d)
                    .map(|axis| term.freqs.iter().map(|m| m[axis] as i128).sum())
                    .collect();
                // scalar part: Σ_items w·e(a·E), E = Σⱼ j⟨mⱼ,α⟩
                let mut e_scalar = ExactScalar::zero();
                for (j, m) in term.freqs.iter().enumerate() {
                    for (axis, alpha) in alphas.iter().enumerate() {
                        let c = (m[axis] as i128)
                            .checked_mul(j as i128 + 1)
                            .ok_or(NumberError::Overflow)?;
                        e_scalar = e_scalar.add(&alpha.mul_int(c)?)?;
                    }
                }
                let phases: Vec<Complex64> = items
                    .par_iter()
                    .map(|(a, w)| {
                        Ok(*w * e(e_scalar
                            .mul_int(*a as i128)
                            ?
                            .reduce_mod1()?
                            .to_f64()))
                    })
                    .collect::<Result<_>>()?;
                let scalar = term.coeff * pairwise_sum(&phases);
                // spatial part: e(⟨freq_sum, x⟩) on the grid
                for (i, v) in values.iter_mut().enumerate() {
                    let coords = grid.points[i].coords();
                    let mut phase = 0.0;
                    for (axis, x) in coords.iter().enumerate() {
                        phase += freq_sum[axis] as f64 * x;
                    }
                    *v += scalar * e(phase);
                }
            }
            TorusSystem::Skew2 { alpha } => {
                // per-observable (k, l); iterate exponents are sⱼ = j·a
                let kl: Vec<(i128, i128)> = term
                    .freqs
                    .iter()
                    .map(|m| (m[0] as i128, m[1] as i128))
                    .collect();
                // the z-frequency sum is exponent-independent and survives as
                // a phase on the sample's z coordinate
                let a_z: i128 = kl.iter().map(|&(_, l)| l).sum();
                // bucket items by the drifting y-frequency A_y(a) mod side
                let mut buckets = vec![Complex64::new(0.0, 0.0); grid.side];
                for (a, w) in items {
                    let mut a_y: i128 = 0;
                    let mut p: i128 = 0;
                    for (j, &(k, l)) in kl.iter().enumerate() {
                        let s = (j as i128 + 1)
                            .checked_mul(*a as i128)
                            .ok_or(NumberError::Overflow)?;
                        let binom = s
                            .checked_mul(s - 1)
                            .map(|v| v / 2)
                            .ok_or(NumberError::Overflow)?;
                        a_y = a_y
                            .checked_add(k + l.checked_mul(s).ok_or(NumberError::Overflow)?)
                            .ok_or(NumberError::Overflow)?;
                        p = p
                            .checked_add(k.checked_mul(s).ok_or(NumberError::Overflow)?)
                            .and_then(|v| v.checked_add(l.checked_mul(binom)?))
                            .ok_or(NumberError::Overflow)?;
                    }
                    let phase = alpha.mul_int(p)?.reduce_mod1()?;
                    buckets[a_y.rem_euclid(g) as usize] += w * e(phase.to_f64());
                }
                // g(u,v) = e(A_z·v/side)·Σ_c buckets[c]·e(c·u/side)
                let side = grid.side;
                let row: Vec<Complex64> = (0..side)
                    .into_par_iter()
                    .map(|u| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (c, b) in buckets.iter().enumerate() {
                            if b.norm_sqr() != 0.0 {
                                acc += b * e(((c * u) % side) as f64 / side as f64);
                            }
                        }
                        acc * term.coeff
                    })
                    .collect();
                let zmod = a_z.rem_euclid(g) as usize;
                for u in 0..side {
                    for v in 0..side {
                        let zphase = e(((zmod * v) % side) as f64 / side as f64);
                        values[u * side + v] += row[u] * zphase;
                    }
                }
            }
        }
    }
    Ok(values)
}
