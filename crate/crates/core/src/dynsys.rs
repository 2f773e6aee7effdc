//! Explicit measure-preserving systems on tori with closed-form iteration.
//!
//! Two families cover every hypothesis pattern that matters here: rotations
//! of T^d, and the unipotent skew product `(y, z) ↦ (y + α, z + y)` on T²
//! whose n-th iterate is `(y + nα, z + ny + C(n,2)·α)`. Both iterate in O(1),
//! so correlation sequences up to n = 10⁶ stay cheap.
//!
//! Orbit coordinates carry exact shadows: the offsets nα mod 1 are computed
//! in exact arithmetic and floated at evaluation time, because float
//! accumulation over 10⁶ steps would otherwise drift.

use crate::numbers::{ExactScalar, rationally_independent};
use crate::{Complex64, e};

#[derive(Debug, Clone, PartialEq)]
pub enum TorusSystem {
    Rotation { alphas: Vec<ExactScalar> },
    Skew2 { alpha: ExactScalar },
}

impl TorusSystem {
    pub fn rotation1(alpha: ExactScalar) -> Self {
        TorusSystem::Rotation { alphas: vec![alpha] }
    }

    pub fn skew2(alpha: ExactScalar) -> Self {
        TorusSystem::Skew2 { alpha }
    }

    pub fn dim(&self) -> usize {
        match self {
            TorusSystem::Rotation { alphas } => alphas.len(),
            TorusSystem::Skew2 { .. } => 2,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            TorusSystem::Rotation { alphas } => {
                let parts: Vec<String> = alphas.iter().map(|a| a.to_string()).collect();
                format!("rot[{}]", parts.join(","))
            }
            TorusSystem::Skew2 { alpha } => format!("skew[{alpha}]"),
        }
    }

    /// Closed-form n-th iterate (n may be negative; the maps are invertible).
    pub fn iterate(&self, x: &TorusPoint, n: i64) -> TorusPoint {
        match self {
            TorusSystem::Rotation { alphas } => {
                if let Some(exact) = x.exact_coords() {
                    let stepped: Option<Vec<ExactScalar>> = exact
                        .iter()
                        .zip(alphas.iter())
                        .map(|(c, a)| {
                            a.mul_int(n as i128)
                                .and_then(|off| c.add(&off))
                                .and_then(|v| v.reduce_mod1())
                                .ok()
                        })
                        .collect();
                    if let Some(coords) = stepped {
                        return TorusPoint::from_exact(coords);
                    }
                }
                let coords = x
                    .coords()
                    .iter()
                    .zip(alphas.iter())
                    .map(|(c, a)| {
                        let off = a
                            .mul_int(n as i128)
                            .and_then(|v| v.reduce_mod1())
                            .map(|v| v.to_f64())
                            .unwrap_or_else(|_| (a.to_f64() * n as f64).rem_euclid(1.0));
                        (c + off).rem_euclid(1.0)
                    })
                    .collect();
                TorusPoint::from_floats(coords)
            }
            TorusSystem::Skew2 { alpha } => {
                let binom = n as i128 * (n as i128 - 1) / 2;
                if let Some(exact) = x.exact_coords() {
                    let (y, z) = (&exact[0], &exact[1]);
                    let attempt = (|| {
                        let y2 = y.add(&alpha.mul_int(n as i128)?)?.reduce_mod1()?;
                        let z2 = z
                            .add(&y.mul_int(n as i128)?)?
                            .add(&alpha.mul_int(binom)?)?
                            .reduce_mod1()?;
                        Ok::<_, crate::numbers::NumberError>(vec![y2, z2])
                    })();
                    if let Ok(coords) = attempt {
                        return TorusPoint::from_exact(coords);
                    }
                }
                let y = x.coords()[0];
                let z = x.coords()[1];
                let off_a = alpha
                    .mul_int(n as i128)
                    .and_then(|v| v.reduce_mod1())
                    .map(|v| v.to_f64())
                    .unwrap_or(0.0);
                let off_b = alpha
                    .mul_int(binom)
                    .and_then(|v| v.reduce_mod1())
                    .map(|v| v.to_f64())
                    .unwrap_or(0.0);
                let y2 = (y + off_a).rem_euclid(1.0);
                let z2 = (z + (n as f64 * y).rem_euclid(1.0) + off_b).rem_euclid(1.0);
                TorusPoint::from_floats(vec![y2, z2])
            }
        }
    }

    /// σ(T) truncated to integer coefficient vectors with entries |m| ≤ bound:
    /// rotations have spectrum {⟨m, α⟩ mod 1}; the skew product's Kronecker
    /// factor is its base rotation, so the spectrum is {mα mod 1}.
    pub fn theoretical_spectrum(&self, m_bound: i64) -> Vec<ExactScalar> {
        assert!(m_bound >= 1);
        let mut out: Vec<ExactScalar> = Vec::new();
        let mut push = |v: ExactScalar| {
            if !out.contains(&v) {
                out.push(v);
            }
        };
        match self {
            TorusSystem::Rotation { alphas } => {
                let d = alphas.len();
                let width = 2 * m_bound + 1;
                let combos = (width as u64).pow(d as u32);
                for idx in 0..combos {
                    let mut rem = idx;
                    let mut acc = ExactScalar::zero();
                    let mut ok = true;
                    for alpha in alphas {
                        let m = (rem % width as u64) as i64 - m_bound;
                        rem /= width as u64;
                        match alpha.mul_int(m as i128).and_then(|t| acc.add(&t)) {
                            Ok(v) => acc = v,
                            Err(_) => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if ok {
                        if let Ok(v) = acc.reduce_mod1() {
                            push(v);
                        }
                    }
                }
            }
            TorusSystem::Skew2 { alpha } => {
                for m in -m_bound..=m_bound {
                    if let Ok(v) = alpha.mul_int(m as i128).and_then(|v| v.reduce_mod1()) {
                        push(v);
                    }
                }
            }
        }
        out.sort_by(|a, b| a.cmp_exact(b));
        out
    }

    /// Exact total-ergodicity test: rotations need {1, α₁, …} rationally
    /// independent; the skew product needs α irrational.
    pub fn is_totally_ergodic(&self) -> bool {
        match self {
            TorusSystem::Rotation { alphas } => rationally_independent(alphas),
            TorusSystem::Skew2 { alpha } => !alpha.is_rational(),
        }
    }
}

/// Point of T^d: float coordinates in [0,1), optionally with exact shadows.
#[derive(Debug, Clone)]
pub struct TorusPoint {
    coords: Vec<f64>,
    exact: Option<Vec<ExactScalar>>,
}

impl TorusPoint {
    pub fn from_floats(coords: Vec<f64>) -> Self {
        let coords = coords.into_iter().map(|c| c.rem_euclid(1.0)).collect();
        TorusPoint { coords, exact: None }
    }

    pub fn from_exact(coords: Vec<ExactScalar>) -> Self {
        let reduced: Vec<ExactScalar> = coords
            .into_iter()
            .map(|c| c.reduce_mod1().expect("reduce_mod1 of finite scalar"))
            .collect();
        let floats = reduced.iter().map(|c| c.to_f64().rem_euclid(1.0)).collect();
        TorusPoint {
            coords: floats,
            exact: Some(reduced),
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn exact_coords(&self) -> Option<&[ExactScalar]> {
        self.exact.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Bounded observable on T^d (or on a product of tori for pair orbits).
#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    /// e(⟨m, x⟩)
    Character { freqs: Vec<i64> },
    /// Σⱼ cⱼ·e(⟨mⱼ, x⟩)
    TrigPoly { terms: Vec<(Complex64, Vec<i64>)> },
    /// indicator of the half-open arc (a, b] in one coordinate, wrapping
    /// mod 1 when a ≥ b
    ArcIndicator { axis: usize, a: f64, b: f64 },
}

impl Observable {
    pub fn character(freqs: Vec<i64>) -> Self {
        Observable::Character { freqs }
    }

    pub fn one(dim: usize) -> Self {
        Observable::Character { freqs: vec![0; dim] }
    }

    pub fn eval(&self, coords: &[f64]) -> Complex64 {
        match self {
            Observable::Character { freqs } => {
                let mut phase = 0.0;
                for (m, x) in freqs.iter().zip(coords.iter()) {
                    phase += *m as f64 * x;
                }
                e(phase)
            }
            Observable::TrigPoly { terms } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, freqs) in terms {
                    let mut phase = 0.0;
                    for (m, x) in freqs.iter().zip(coords.iter()) {
                        phase += *m as f64 * x;
                    }
                    acc += c * e(phase);
                }
                acc
            }
            Observable::ArcIndicator { axis, a, b } => {
                let x = coords[*axis].rem_euclid(1.0);
                let inside = if a < b {
                    x > *a && x <= *b
                } else {
                    // wrap: (a,1] ∪ (0,b], with 1 represented as 0
                    x == 0.0 || x > *a || (x > 0.0 && x <= *b)
                };
                Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
            }
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            Observable::Character { .. } => 1.0,
            Observable::TrigPoly { terms } => terms.iter().map(|(c, _)| c.norm()).sum(),
            Observable::ArcIndicator { .. } => 1.0,
        }
    }

    pub fn conj(&self) -> Observable {
        match self {
            Observable::Character { freqs } => Observable::Character {
                freqs: freqs.iter().map(|m| -m).collect(),
            },
            Observable::TrigPoly { terms } => Observable::TrigPoly {
                terms: terms
                    .iter()
                    .map(|(c, f)| (c.conj(), f.iter().map(|m| -m).collect()))
                    .collect(),
            },
            arc @ Observable::ArcIndicator { .. } => arc.clone(),
        }
    }

    /// f ∘ T as an observable of the same class (characters pick up a phase;
    /// for the skew product the y-frequency shifts by the z-frequency).
    /// Arc indicators do not precompose in closed form.
    pub fn precompose(&self, sys: &TorusSystem) -> Option<Observable> {
        let map_term = |c: Complex64, freqs: &[i64]| -> Option<(Complex64, Vec<i64>)> {
            match sys {
                TorusSystem::Rotation { alphas } => {
                    let mut shift = ExactScalar::zero();
                    for (m, a) in freqs.iter().zip(alphas.iter()) {
                        shift = shift.add(&a.mul_int(*m as i128).ok()?).ok()?;
                    }
                    let phase = shift.reduce_mod1().ok()?.to_f64();
                    Some((c * e(phase), freqs.to_vec()))
                }
                TorusSystem::Skew2 { alpha } => {
                    let (k, l) = (freqs[0], freqs[1]);
                    let phase = alpha.mul_int(k as i128).ok()?.reduce_mod1().ok()?.to_f64();
                    Some((c * e(phase), vec![k + l, l]))
                }
            }
        };
        match self {
            Observable::Character { freqs } => {
                let (c, f) = map_term(Complex64::new(1.0, 0.0), freqs)?;
                Some(Observable::TrigPoly { terms: vec![(c, f)] })
            }
            Observable::TrigPoly { terms } => {
                let mapped: Option<Vec<_>> =
                    terms.iter().map(|(c, f)| map_term(*c, f)).collect();
                Some(Observable::TrigPoly { terms: mapped? })
            }
            Observable::ArcIndicator { .. } => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Observable::Character { freqs } => {
                let parts: Vec<String> = freqs.iter().map(|m| m.to_string()).collect();
                format!("char:{}", parts.join(","))
            }
            Observable::TrigPoly { terms } => format!("trig[{} terms]", terms.len()),
            Observable::ArcIndicator { axis, a, b } => format!("arc:axis={axis},a={a},b={b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// uniform lattice with the given side per axis
    Grid,
    /// single-orbit Birkhoff samples T^j(x₀); justified by unique ergodicity
    Orbit,
}

/// Quadrature sample set over T^d.
///
/// The default grid has side points j/G per axis, so characters of frequency
/// below G integrate exactly; a character whose frequency is a multiple of G
/// aliases to 1 instead of 0 — callers must keep observable frequencies below
/// the grid size. Orbit sampling trades that exactness for genuine dynamics.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub points: Vec<TorusPoint>,
    /// grid side per axis (grid sets only; 0 for orbit sets)
    pub side: usize,
    pub dim: usize,
    pub kind: SampleKind,
}

impl SampleSet {
    pub fn id(&self) -> String {
        match self.kind {
            SampleKind::Grid => format!("grid:d={},side={}", self.dim, self.side),
            SampleKind::Orbit => format!("orbit:d={},len={}", self.dim, self.points.len()),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Lattice coordinates (base-`side` digits) of sample `i`, innermost
    /// axis last.
    pub fn lattice_coords(&self, i: usize) -> Vec<usize> {
        let mut rem = i;
        let mut out = vec![0; self.dim];
        for axis in (0..self.dim).rev() {
            out[axis] = rem % self.side;
            rem /= self.side;
        }
        out
    }
}

/// Deterministic quadrature sampling of Lebesgue measure: at least `m_target`
/// points arranged as the uniform grid with side ⌈m_target^(1/d)⌉.
pub fn sample_measure(sys: &TorusSystem, m_target: usize) -> SampleSet {
    assert!(m_target >= 1);
    let d = sys.dim();
    let side = match d {
        1 => m_target,
        2 => (m_target as f64).sqrt().ceil() as usize,
        _ => (m_target as f64).powf(1.0 / d as f64).ceil() as usize,
    }
    .max(1);
    let total = side.pow(d as u32);
    let mut points = Vec::with_capacity(total);
    for i in 0..total {
        let mut rem = i;
        let mut coords = Vec::with_capacity(d);
        for _ in 0..d {
            let u = rem % side;
            rem /= side;
            coords.push(ExactScalar::rational(u as i128, side as i128).expect("side > 0"));
        }
        coords.reverse();
        points.push(TorusPoint::from_exact(coords));
    }
    SampleSet {
        points,
        side,
        dim: d,
        kind: SampleKind::Grid,
    }
}

/// Birkhoff samples T^j(x₀), j = 0..m: the orbit-quadrature alternative to
/// the grid, available behind a flag. Strict ergodicity makes every orbit
/// equidistribute, so the origin is an acceptable default start.
pub fn sample_orbit(sys: &TorusSystem, x0: &TorusPoint, m_target: usize) -> SampleSet {
    assert!(m_target >= 1);
    let points = (0..m_target as i64).map(|j| sys.iterate(x0, j)).collect();
    SampleSet {
        points,
        side: 0,
        dim: sys.dim(),
        kind: SampleKind::Orbit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::parse_exact;
    use crate::sum::pairwise_mean;

    fn es(s: &str) -> ExactScalar {
        parse_exact(s).unwrap()
    }

    #[test]
    fn iterate_examples() {
        let rot = TorusSystem::rotation1(es("1/4"));
        let x = TorusPoint::from_exact(vec![ExactScalar::zero()]);
        let y = rot.iterate(&x, 3);
        assert_eq!(y.exact_coords().unwrap()[0], es("3/4"));

        let skew = TorusSystem::skew2(es("1/10"));
        let x = TorusPoint::from_exact(vec![es("1/4"), ExactScalar::zero()]);
        let y = skew.iterate(&x, 3);
        // three explicit applications: C(3,2) = 3 gives z = 3/4 + 3/10 mod 1
        assert_eq!(y.exact_coords().unwrap()[0], es("11/20").reduce_mod1().unwrap());
        assert!((y.coords()[0] - 0.55).abs() < 1e-15);
        assert!((y.coords()[1] - 0.05).abs() < 1e-15);

        let id = skew.iterate(&x, 0);
        assert_eq!(id.exact_coords().unwrap(), x.exact_coords().unwrap());
    }

    #[test]
    fn iterate_group_law_exact() {
        let skew = TorusSystem::skew2(es("3/7"));
        let x = TorusPoint::from_exact(vec![es("1/3"), es("2/5")]);
        for (m, n) in [(2i64, 3i64), (5, -2), (-4, -3), (10, 7)] {
            let a = skew.iterate(&x, m + n);
            let b = skew.iterate(&skew.iterate(&x, m), n);
            assert_eq!(a.exact_coords().unwrap(), b.exact_coords().unwrap());
        }
    }

    #[test]
    fn closed_form_matches_step_loop() {
        // exact integer step-loop oracle vs the closed form, 100 random (α, x):
        // with α = k/P and x on the 2^20 grid, the whole orbit lives on the
        // lattice (1/(P·2^20))·Z², so the loop below is exact in i128.
        const P: i128 = 1_000_003;
        const G: i128 = 1 << 20;
        let d = P * G;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rnd = move |m: i128| -> i128 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as i128) % m
        };
        for _ in 0..100 {
            let k = rnd(P);
            let u = rnd(G);
            let v = rnd(G);
            let sys = TorusSystem::skew2(ExactScalar::rational(k, P).unwrap());
            let x = TorusPoint::from_floats(vec![u as f64 / G as f64, v as f64 / G as f64]);
            let a = sys.iterate(&x, 10_000).coords().to_vec();

            let step = k * G;
            let mut y = u * P;
            let mut z = v * P;
            for _ in 0..10_000 {
                let ny = (y + step) % d;
                let nz = (z + y) % d;
                y = ny;
                z = nz;
            }
            let (yf, zf) = (y as f64 / d as f64, z as f64 / d as f64);
            assert!(crate::circle_dist(a[0], yf) < 1e-10, "{} vs {yf}", a[0]);
            assert!(crate::circle_dist(a[1], zf) < 1e-10, "{} vs {zf}", a[1]);
        }
    }

    #[test]
    fn spectrum_examples() {
        let r3 = TorusSystem::rotation1(es("1/3"));
        let spec = r3.theoretical_spectrum(2);
        assert_eq!(spec, vec![es("0"), es("1/3"), es("2/3")]);

        let ra = TorusSystem::rotation1(es("sqrt(2)-1"));
        let spec = ra.theoretical_spectrum(1);
        assert_eq!(spec.len(), 3);
        assert!(spec.contains(&ExactScalar::zero()));
        assert!(spec.contains(&es("sqrt(2)-1")));
        assert!(spec.contains(&es("2-sqrt(2)")));

        let sk = TorusSystem::skew2(es("sqrt(2)-1"));
        assert_eq!(sk.theoretical_spectrum(1), ra.theoretical_spectrum(1));
    }

    #[test]
    fn spectrum_closed_under_negation_and_contains_zero() {
        for sys in [
            TorusSystem::rotation1(es("sqrt(2)-1")),
            TorusSystem::Rotation { alphas: vec![es("sqrt(2)-1"), es("1/3")] },
            TorusSystem::skew2(es("(sqrt(5)-1)/2")),
        ] {
            let spec = sys.theoretical_spectrum(3);
            assert!(spec.contains(&ExactScalar::zero()));
            for v in &spec {
                let neg = v.neg().reduce_mod1().unwrap();
                assert!(spec.contains(&neg), "negation of {v} missing");
            }
        }
    }

    #[test]
    fn total_ergodicity_examples() {
        assert!(!TorusSystem::rotation1(es("1/2")).is_totally_ergodic());
        assert!(TorusSystem::rotation1(es("sqrt(2)-1")).is_totally_ergodic());
        assert!(!TorusSystem::skew2(es("3/7")).is_totally_ergodic());
        assert!(TorusSystem::skew2(es("sqrt(2)-1")).is_totally_ergodic());
    }

    #[test]
    fn sample_grid_examples() {
        let rot = TorusSystem::rotation1(es("1/3"));
        let s = sample_measure(&rot, 4);
        let xs: Vec<f64> = s.points.iter().map(|p| p.coords()[0]).collect();
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75]);

        // frequency-1 character integrates to 0 on any grid of size >= 2
        let f = Observable::character(vec![1]);
        let vals: Vec<Complex64> = s.points.iter().map(|p| f.eval(p.coords())).collect();
        assert!(pairwise_mean(&vals).norm() < 1e-15);

        // frequency-M character aliases to 1: documented hazard
        let alias = Observable::character(vec![4]);
        let vals: Vec<Complex64> = s.points.iter().map(|p| alias.eval(p.coords())).collect();
        assert!((pairwise_mean(&vals) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn measure_invariance_under_one_step() {
        // quadrature of a character before and after one step agrees
        for sys in [TorusSystem::rotation1(es("sqrt(2)-1")), TorusSystem::skew2(es("sqrt(2)-1"))] {
            let grid = sample_measure(&sys, if sys.dim() == 1 { 64 } else { 64 * 64 });
            for f in [
                Observable::character(vec![1, 0][..sys.dim()].to_vec()),
                Observable::character(vec![2, 1][..sys.dim()].to_vec()),
            ] {
                let before: Vec<Complex64> =
                    grid.points.iter().map(|p| f.eval(p.coords())).collect();
                let after: Vec<Complex64> = grid
                    .points
                    .iter()
                    .map(|p| f.eval(sys.iterate(p, 1).coords()))
                    .collect();
                let diff = (pairwise_mean(&before) - pairwise_mean(&after)).norm();
                assert!(diff < 1e-12, "invariance failed for {}", f.describe());
            }
        }
    }

    #[test]
    fn grid_quadrature_exact_below_grid_size() {
        let sys = TorusSystem::skew2(es("1/7"));
        let grid = sample_measure(&sys, 32 * 32);
        let f = Observable::TrigPoly {
            terms: vec![
                (Complex64::new(0.7, 0.0), vec![3, -2]),
                (Complex64::new(0.0, -1.3), vec![0, 5]),
                (Complex64::new(2.0, 0.5), vec![0, 0]),
            ],
        };
        let vals: Vec<Complex64> = grid.points.iter().map(|p| f.eval(p.coords())).collect();
        // exact integral keeps only the constant term
        assert!((pairwise_mean(&vals) - Complex64::new(2.0, 0.5)).norm() < 1e-12);
    }
}
