//! Exact scalar arithmetic over Q and real quadratic fields, with decidable
//! torus-subgroup membership.
//!
//! Every frequency that enters a hypothesis check is an [`ExactScalar`]:
//! either a rational `p/q` in lowest terms or a quadratic irrational
//! `(a + b√d)/c` with `d > 1` squarefree and `b ≠ 0`. Floats are rejected at
//! these interfaces because irrationality is undecidable from a float.
//!
//! All integer arithmetic is checked 128-bit; overflow is an error, never
//! wraparound.

mod parse;

pub use parse::parse_exact;

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumberError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands lie in distinct quadratic fields (sqrt({0}) vs sqrt({1}))")]
    MixedFields(i128, i128),
    #[error("sqrt of a negative integer is not a real scalar")]
    NegativeSqrt,
    #[error("radicand {0} is too large (limit 1e12)")]
    RadicandTooLarge(i128),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, NumberError>;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn c_add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(NumberError::Overflow)
}

fn c_sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(NumberError::Overflow)
}

fn c_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(NumberError::Overflow)
}

/// Rational number in lowest terms with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(NumberError::DivisionByZero);
        }
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Ok(Rational {
            num: sign * (num / g),
            den: (den / g).abs(),
        })
    }

    pub fn integer(n: i128) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn add(&self, o: &Rational) -> Result<Rational> {
        Rational::new(
            c_add(c_mul(self.num, o.den)?, c_mul(o.num, self.den)?)?,
            c_mul(self.den, o.den)?,
        )
    }

    pub fn sub(&self, o: &Rational) -> Result<Rational> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Rational) -> Result<Rational> {
        Rational::new(c_mul(self.num, o.num)?, c_mul(self.den, o.den)?)
    }

    pub fn div(&self, o: &Rational) -> Result<Rational> {
        if o.num == 0 {
            return Err(NumberError::DivisionByZero);
        }
        Rational::new(c_mul(self.num, o.den)?, c_mul(self.den, o.num)?)
    }

    pub fn neg(&self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }

    pub fn floor(&self) -> i128 {
        self.num.div_euclid(self.den)
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.num.div_euclid(self.den);
        let r = self.num.rem_euclid(self.den);
        q as f64 + r as f64 / self.den as f64
    }

    fn cmp_exact(&self, o: &Rational) -> Ordering {
        // Denominators are positive, so cross-multiplication preserves order.
        // 128-bit products of canonical mod-1 scalars stay in range; saturate
        // as a last resort rather than panic.
        let l = self.num.checked_mul(o.den);
        let r = o.num.checked_mul(self.den);
        match (l, r) {
            (Some(l), Some(r)) => l.cmp(&r),
            _ => self
                .to_f64()
                .partial_cmp(&o.to_f64())
                .unwrap_or(Ordering::Equal),
        }
    }
}

/// Quadratic irrational `(a + b√d)/c`, canonical: `c > 0`, `gcd(a,b,c) = 1`,
/// `d > 1` squarefree, `b ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quadratic {
    a: i128,
    b: i128,
    c: i128,
    d: i128,
}

/// Real number represented exactly: rational or quadratic irrational.
///
/// Equality is structural on the canonical form, which coincides with
/// numerical equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExactScalar {
    Rational(Rational),
    Quadratic(Quadratic),
}

/// Strip the square part of `d ≥ 0`: returns `(s, d')` with `d = s²·d'`,
/// `d'` squarefree. Trial division is O(√d); callers bound d.
fn squarefree_part(mut d: i128) -> (i128, i128) {
    let mut s = 1i128;
    let mut f = 2i128;
    while f * f <= d {
        while d % (f * f) == 0 {
            d /= f * f;
            s *= f;
        }
        f += 1;
    }
    (s, d)
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::Rational(Rational::integer(0))
    }

    pub fn one() -> Self {
        ExactScalar::Rational(Rational::integer(1))
    }

    pub fn integer(n: i128) -> Self {
        ExactScalar::Rational(Rational::integer(n))
    }

    pub fn rational(num: i128, den: i128) -> Result<Self> {
        Ok(ExactScalar::Rational(Rational::new(num, den)?))
    }

    /// √k for a nonnegative integer k (rational when k is a perfect square).
    pub fn sqrt_int(k: i128) -> Result<Self> {
        if k < 0 {
            return Err(NumberError::NegativeSqrt);
        }
        ExactScalar::quadratic(0, 1, 1, k)
    }

    /// `(a + b√d)/c`; canonicalizes (including extracting the square part
    /// of d) and collapses to a rational when the irrational part vanishes.
    pub fn quadratic(a: i128, b: i128, c: i128, d: i128) -> Result<Self> {
        if c == 0 {
            return Err(NumberError::DivisionByZero);
        }
        if d < 0 {
            return Err(NumberError::NegativeSqrt);
        }
        if d > 1_000_000_000_000 {
            return Err(NumberError::RadicandTooLarge(d));
        }
        let (s, d) = squarefree_part(d);
        let b = c_mul(b, s)?;
        if b == 0 || d <= 1 {
            // √1 = 1 and √0 = 0 fold into the rational part.
            let num = if d == 1 { c_add(a, b)? } else { a };
            return Ok(ExactScalar::Rational(Rational::new(num, c)?));
        }
        let sign = if c < 0 { -1 } else { 1 };
        let g = gcd(gcd(a, b), c).max(1) * sign;
        Ok(ExactScalar::Quadratic(Quadratic {
            a: a / g,
            b: b / g,
            c: c / g,
            d,
        }))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactScalar::Rational(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactScalar::Rational(r) if r.is_zero())
    }

    /// Decomposition `x = rat + coeff·√d` over the basis {1, √d}.
    /// `irr` is `None` for rationals; `coeff ≠ 0` otherwise.
    pub fn parts(&self) -> (Rational, Option<(i128, Rational)>) {
        match self {
            ExactScalar::Rational(r) => (*r, None),
            ExactScalar::Quadratic(q) => (
                Rational::new(q.a, q.c).expect("canonical"),
                Some((q.d, Rational::new(q.b, q.c).expect("canonical"))),
            ),
        }
    }

    fn from_parts(rat: Rational, irr: Option<(i128, Rational)>) -> Result<Self> {
        match irr {
            None => Ok(ExactScalar::Rational(rat)),
            Some((d, coeff)) => {
                // (p/q) + (u/v)√d  =  (pv + qu√d)/(qv)
                ExactScalar::quadratic(
                    c_mul(rat.num, coeff.den)?,
                    c_mul(coeff.num, rat.den)?,
                    c_mul(rat.den, coeff.den)?,
                    d,
                )
            }
        }
    }

    pub fn add(&self, o: &ExactScalar) -> Result<ExactScalar> {
        let (r1, i1) = self.parts();
        let (r2, i2) = o.parts();
        let rat = r1.add(&r2)?;
        let irr = match (i1, i2) {
            (None, x) | (x, None) => x,
            (Some((d1, c1)), Some((d2, c2))) => {
                if d1 != d2 {
                    return Err(NumberError::MixedFields(d1, d2));
                }
                let c = c1.add(&c2)?;
                if c.is_zero() {
                    None
                } else {
                    Some((d1, c))
                }
            }
        };
        ExactScalar::from_parts(rat, irr)
    }

    pub fn sub(&self, o: &ExactScalar) -> Result<ExactScalar> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ExactScalar {
        match self {
            ExactScalar::Rational(r) => ExactScalar::Rational(r.neg()),
            ExactScalar::Quadratic(q) => ExactScalar::Quadratic(Quadratic {
                a: -q.a,
                b: -q.b,
                c: q.c,
                d: q.d,
            }),
        }
    }

    pub fn mul(&self, o: &ExactScalar) -> Result<ExactScalar> {
        match (self, o) {
            (ExactScalar::Rational(r), _) => o.mul_rational(r),
            (_, ExactScalar::Rational(r)) => self.mul_rational(r),
            (ExactScalar::Quadratic(p), ExactScalar::Quadratic(q)) => {
                if p.d != q.d {
                    return Err(NumberError::MixedFields(p.d, q.d));
                }
                // (a+b√d)(a'+b'√d) = (aa'+bb'd) + (ab'+a'b)√d
                ExactScalar::quadratic(
                    c_add(c_mul(p.a, q.a)?, c_mul(c_mul(p.b, q.b)?, p.d)?)?,
                    c_add(c_mul(p.a, q.b)?, c_mul(p.b, q.a)?)?,
                    c_mul(p.c, q.c)?,
                    p.d,
                )
            }
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Result<ExactScalar> {
        match self {
            ExactScalar::Rational(s) => Ok(ExactScalar::Rational(s.mul(r)?)),
            ExactScalar::Quadratic(q) => ExactScalar::quadratic(
                c_mul(q.a, r.num)?,
                c_mul(q.b, r.num)?,
                c_mul(q.c, r.den)?,
                q.d,
            ),
        }
    }

    pub fn mul_int(&self, n: i128) -> Result<ExactScalar> {
        self.mul_rational(&Rational::integer(n))
    }

    pub fn recip(&self) -> Result<ExactScalar> {
        match self {
            ExactScalar::Rational(r) => {
                if r.num == 0 {
                    return Err(NumberError::DivisionByZero);
                }
                Ok(ExactScalar::Rational(Rational::new(r.den, r.num)?))
            }
            ExactScalar::Quadratic(q) => {
                // c/(a+b√d) = c(a−b√d)/(a²−b²d); the norm is nonzero since
                // d is squarefree > 1 and b ≠ 0.
                let norm = c_sub(c_mul(q.a, q.a)?, c_mul(c_mul(q.b, q.b)?, q.d)?)?;
                ExactScalar::quadratic(c_mul(q.c, q.a)?, -c_mul(q.c, q.b)?, norm, q.d)
            }
        }
    }

    pub fn div(&self, o: &ExactScalar) -> Result<ExactScalar> {
        self.mul(&o.recip()?)
    }

    /// Exact sign, decided without floating point.
    pub fn signum(&self) -> i32 {
        match self {
            ExactScalar::Rational(r) => r.num.signum() as i32,
            ExactScalar::Quadratic(q) => {
                // sign of a + b√d (c > 0 canonical)
                let (a, b, d) = (q.a, q.b, q.d);
                if a >= 0 && b > 0 {
                    1
                } else if a <= 0 && b < 0 {
                    -1
                } else {
                    // mixed signs: compare a² against b²d; for coefficients so
                    // large the squares overflow i128, the double-double
                    // projection still resolves the sign
                    let squares = a
                        .checked_mul(a)
                        .zip(b.checked_mul(b).and_then(|bb| bb.checked_mul(d)));
                    match squares {
                        Some((aa, bbd)) => {
                            let ord = if b < 0 { aa.cmp(&bbd) } else { bbd.cmp(&aa) };
                            match ord {
                                Ordering::Greater => 1,
                                Ordering::Less => -1,
                                Ordering::Equal => 0, // unreachable for canonical forms
                            }
                        }
                        None => {
                            let v = self.to_f64();
                            if v > 0.0 {
                                1
                            } else if v < 0.0 {
                                -1
                            } else {
                                0
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn cmp_exact(&self, o: &ExactScalar) -> Ordering {
        if self == o {
            return Ordering::Equal;
        }
        match (self, o) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => a.cmp_exact(b),
            _ => match self.sub(o) {
                Ok(diff) => match diff.signum() {
                    1 => Ordering::Greater,
                    -1 => Ordering::Less,
                    _ => Ordering::Equal,
                },
                // Mixed fields: fall back to high-precision floats. Distinct
                // quadratic irrationals from different fields are never equal,
                // and acceptance-scale values differ by far more than 1e-30.
                Err(_) => self
                    .to_f64()
                    .partial_cmp(&o.to_f64())
                    .unwrap_or(Ordering::Equal),
            },
        }
    }

    fn cmp_int(&self, t: i128) -> Ordering {
        match self {
            ExactScalar::Rational(r) => r.num.cmp(&c_mul(t, r.den).unwrap_or(i128::MAX)),
            ExactScalar::Quadratic(q) => {
                let shifted = ExactScalar::Quadratic(Quadratic {
                    a: q.a - t * q.c,
                    b: q.b,
                    c: q.c,
                    d: q.d,
                });
                match shifted.signum() {
                    1 => Ordering::Greater,
                    -1 => Ordering::Less,
                    _ => Ordering::Equal,
                }
            }
        }
    }

    /// Exact floor. Never consults the float projection for the decision;
    /// the f64 value only seeds the search.
    pub fn floor(&self) -> i128 {
        match self {
            ExactScalar::Rational(r) => r.floor(),
            ExactScalar::Quadratic(_) => {
                let mut n = self.to_f64().floor() as i128;
                while self.cmp_int(n) == Ordering::Less {
                    n -= 1;
                }
                while self.cmp_int(n + 1) != Ordering::Less {
                    n += 1;
                }
                n
            }
        }
    }

    pub fn ceil(&self) -> i128 {
        -self.neg().floor()
    }

    /// Canonical representative in [0, 1).
    pub fn reduce_mod1(&self) -> Result<ExactScalar> {
        self.sub(&ExactScalar::integer(self.floor()))
    }

    /// Float projection via double-double evaluation, so that heavily
    /// cancelled coefficients (e.g. after `reduce_mod1` of n²α terms) still
    /// project to full f64 accuracy.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactScalar::Rational(r) => r.to_f64(),
            ExactScalar::Quadratic(q) => {
                let s = dd_sqrt(q.d as f64);
                let b = dd_from_i128(q.b);
                let a = dd_from_i128(q.a);
                // two_sum in dd_add renormalizes, so num.0 carries the full
                // cancelled value and num.1 the sub-ulp correction.
                let num = dd_add(a, dd_mul(b, s));
                num.0 / q.c as f64 + num.1 / q.c as f64
            }
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => {
                if r.den == 1 {
                    write!(f, "{}", r.num)
                } else {
                    write!(f, "{}/{}", r.num, r.den)
                }
            }
            ExactScalar::Quadratic(q) => {
                write!(f, "({}+{}*sqrt({}))/{}", q.a, q.b, q.d, q.c)
            }
        }
    }
}

// --- double-double kernel -------------------------------------------------

type Dd = (f64, f64);

fn two_sum(x: f64, y: f64) -> Dd {
    let s = x + y;
    let bb = s - x;
    (s, (x - (s - bb)) + (y - bb))
}

fn two_prod(x: f64, y: f64) -> Dd {
    let p = x * y;
    (p, f64::mul_add(x, y, -p))
}

fn dd_add(a: Dd, b: Dd) -> Dd {
    let (s, e) = two_sum(a.0, b.0);
    let e = e + a.1 + b.1;
    let (hi, lo) = two_sum(s, e);
    (hi, lo)
}

fn dd_mul(a: Dd, b: Dd) -> Dd {
    let (p, e) = two_prod(a.0, b.0);
    let e = e + a.0 * b.1 + a.1 * b.0;
    let (hi, lo) = two_sum(p, e);
    (hi, lo)
}

fn dd_from_i128(x: i128) -> Dd {
    let hi = x as f64;
    let lo = (x - hi as i128) as f64;
    (hi, lo)
}

fn dd_sqrt(d: f64) -> Dd {
    let hi = d.sqrt();
    let lo = f64::mul_add(hi, -hi, d) / (2.0 * hi);
    (hi, lo)
}

// --- subgroup membership ----------------------------------------------------

/// Finitely generated subgroup of the torus T = R/Z, optionally together with
/// all of Q/Z (for conditions of the form ⟨Q, θ⁻¹⟩).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyGroupSpec {
    pub generators: Vec<ExactScalar>,
    pub includes_rationals: bool,
}

impl FrequencyGroupSpec {
    pub fn new(generators: Vec<ExactScalar>, includes_rationals: bool) -> Self {
        FrequencyGroupSpec {
            generators,
            includes_rationals,
        }
    }

    pub fn cyclic(g: ExactScalar) -> Self {
        Self::new(vec![g], false)
    }

    pub fn rationals() -> Self {
        Self::new(Vec::new(), true)
    }
}

impl fmt::Display for FrequencyGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        let mut first = true;
        if self.includes_rationals {
            write!(f, "Q")?;
            first = false;
        }
        for g in &self.generators {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
            first = false;
        }
        write!(f, ">")
    }
}

/// Extended gcd: (g, x, y) with a·x + b·y = g ≥ 0.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Particular solution and kernel basis of one linear Diophantine equation.
type DiophantineSolution = (Vec<i128>, Vec<Vec<i128>>);

/// Solve Σ mᵢ·cᵢ = t over the integers, where cᵢ, t are rationals.
/// Returns a particular solution together with a basis of the solution
/// kernel, or `None` when no integer solution exists.
fn solve_linear_diophantine(coeffs: &[Rational], t: &Rational) -> Result<Option<DiophantineSolution>> {
    // Clear denominators: L·(Σ mᵢcᵢ) = L·t with L = lcm of all denominators.
    let mut l: i128 = t.den;
    for c in coeffs {
        l = c_mul(l / gcd(l, c.den), c.den)?;
    }
    let ints: Vec<i128> = coeffs
        .iter()
        .map(|c| c_mul(c.num, l / c.den))
        .collect::<Result<_>>()?;
    let target = c_mul(t.num, l / t.den)?;

    // Running gcd with Bezout combination; each new coefficient contributes
    // one kernel basis vector.
    let n = ints.len();
    let mut combo = vec![0i128; n]; // Σ comboᵢ·intsᵢ = g
    let mut kernel: Vec<Vec<i128>> = Vec::new();
    let mut g = 0i128;
    for (i, &ci) in ints.iter().enumerate() {
        if g == 0 {
            if ci != 0 {
                g = ci.abs();
                combo[i] = ci.signum();
            } else {
                // coefficient 0: eᵢ is free
                let mut v = vec![0i128; n];
                v[i] = 1;
                kernel.push(v);
            }
            continue;
        }
        if ci == 0 {
            let mut v = vec![0i128; n];
            v[i] = 1;
            kernel.push(v);
            continue;
        }
        let (g2, x, y) = ext_gcd(g, ci);
        // kernel vector: (ci/g2)·combo − (g/g2)·eᵢ annihilates the form
        let mut v: Vec<i128> = combo.iter().map(|&m| c_mul(m, ci / g2)).collect::<Result<_>>()?;
        v[i] = c_sub(v[i], g / g2)?;
        kernel.push(v);
        for m in combo.iter_mut() {
            *m = c_mul(*m, x)?;
        }
        combo[i] = c_add(combo[i], y)?;
        g = g2;
    }
    if g == 0 {
        return Ok(if target == 0 {
            Some((vec![0; n], kernel))
        } else {
            None
        });
    }
    if target % g != 0 {
        return Ok(None);
    }
    let scale = target / g;
    let particular: Vec<i128> = combo.iter().map(|&m| c_mul(m, scale)).collect::<Result<_>>()?;
    Ok(Some((particular, kernel)))
}

/// Decide whether `x mod 1` lies in the subgroup of T described by `spec`.
///
/// Works over the basis {1} ∪ {√d : d squarefree}: square roots of distinct
/// squarefree integers are linearly independent over Q, so the irrational
/// components give one linear Diophantine system per field and the leftover
/// rational part a congruence mod the rational sublattice.
pub fn subgroup_contains(spec: &FrequencyGroupSpec, x: &ExactScalar) -> Result<bool> {
    let x = x.reduce_mod1()?;
    let (x_rat, x_irr) = x.parts();

    // Group generator components by field.
    use std::collections::BTreeMap;
    let mut fields: BTreeMap<i128, Vec<(Rational, Rational)>> = BTreeMap::new(); // d -> (coeff, rat part)
    let mut rational_gens: Vec<Rational> = Vec::new();
    for g in &spec.generators {
        let (r, irr) = g.reduce_mod1()?.parts();
        match irr {
            None => rational_gens.push(r),
            Some((d, coeff)) => fields.entry(d).or_default().push((coeff, r)),
        }
    }

    if let Some((dx, _)) = x_irr {
        if !fields.contains_key(&dx) {
            return Ok(false);
        }
    }

    // Rational residue the combination must realize mod the rational
    // sublattice, starting from x's own rational part.
    let mut residue = x_rat;
    // Rationals reachable by the generators: rational generators plus the
    // rational drift of each kernel direction of the per-field systems.
    let mut reachable: Vec<Rational> = rational_gens;

    for (d, gens) in &fields {
        let coeffs: Vec<Rational> = gens.iter().map(|(c, _)| *c).collect();
        let target = match x_irr {
            Some((dx, cx)) if dx == *d => cx,
            _ => Rational::integer(0),
        };
        let Some((particular, kernel)) = solve_linear_diophantine(&coeffs, &target)? else {
            return Ok(false);
        };
        for (m, (_, r)) in particular.iter().zip(gens.iter()) {
            residue = residue.sub(&r.mul(&Rational::integer(*m))?)?;
        }
        for v in &kernel {
            let mut drift = Rational::integer(0);
            for (m, (_, r)) in v.iter().zip(gens.iter()) {
                drift = drift.add(&r.mul(&Rational::integer(*m))?)?;
            }
            if !drift.is_zero() {
                reachable.push(drift);
            }
        }
    }

    if spec.includes_rationals {
        // Any rational residue is absorbed by Q.
        return Ok(true);
    }

    // Subgroup of Q generated by `reachable` and 1 is cyclic: c·Z with
    // c = gcd of all numerators over the common denominator (1 included).
    let mut l: i128 = 1;
    for r in &reachable {
        l = c_mul(l / gcd(l, r.den), r.den)?;
    }
    let mut g = l; // contribution of the generator 1 = l/l
    for r in &reachable {
        g = gcd(g, c_mul(r.num, l / r.den)?);
    }
    // residue ∈ (g/l)·Z  ⟺  residue·l/g ∈ Z
    let scaled = residue.mul(&Rational::new(l, g)?)?;
    Ok(scaled.is_integer())
}

/// True iff no nontrivial integer combination Σ mᵢxᵢ lies in Z.
///
/// Exact: a rational member is dependent on its own; two members of the same
/// quadratic field always admit a combination with rational value, and some
/// integer multiple of any rational lands in Z; members of distinct fields
/// are independent because the irrational components must vanish separately.
pub fn rationally_independent(xs: &[ExactScalar]) -> bool {
    let mut seen_fields = std::collections::BTreeSet::new();
    for x in xs {
        match x.parts() {
            (_, None) => return false,
            (_, Some((d, _))) => {
                if !seen_fields.insert(d) {
                    return false;
                }
            }
        }
    }
    true
}

// --- elementary number theory ----------------------------------------------

/// Euler's totient by trial-division factorization.
pub fn euler_totient(mut w: u64) -> u64 {
    assert!(w >= 1, "totient of 0 is undefined");
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= w {
        if w.is_multiple_of(p) {
            let mut pk = 1u64;
            while w.is_multiple_of(p) {
                w /= p;
                pk *= p;
            }
            phi *= pk - pk / p;
        }
        p += 1;
    }
    if w > 1 {
        phi *= w - 1;
    }
    phi
}

/// W = ∏_{p ≤ w} p, the primorial; overflow is an error.
pub fn primorial(w: u64) -> Result<u64> {
    let mut acc: u64 = 1;
    let mut n = 2u64;
    while n <= w {
        let mut is_p = n >= 2;
        let mut f = 2u64;
        while f * f <= n {
            if n.is_multiple_of(f) {
                is_p = false;
                break;
            }
            f += 1;
        }
        if is_p {
            acc = acc.checked_mul(n).ok_or(NumberError::Overflow)?;
        }
        n += 1;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests;
