use super::*;
use crate::numbers::parse_exact;

fn es(s: &str) -> ExactScalar {
    parse_exact(s).unwrap()
}

/// Brute-force enumeration oracle: {⌊θn+γ⌋ : n ∈ Z} ∩ [1, max].
fn enumerate_beatty(theta: &ExactScalar, gamma: &ExactScalar, max: i64) -> Vec<i64> {
    let mut out = std::collections::BTreeSet::new();
    // generous index range so every value in [1, max] is covered
    for n in -2 * max - 10..=2 * max + 10 {
        let v = beatty_term(theta, gamma, n).unwrap();
        if (1..=max).contains(&v) {
            out.insert(v);
        }
    }
    out.into_iter().collect()
}

#[test]
fn beatty_term_examples() {
    // exact floor of 5√2 ≈ 7.071
    assert_eq!(beatty_term(&es("sqrt(2)"), &ExactScalar::zero(), 5).unwrap(), 7);
    assert_eq!(beatty_term(&ExactScalar::one(), &ExactScalar::zero(), 9).unwrap(), 9);
    assert_eq!(beatty_term(&es("3/2"), &ExactScalar::zero(), 3).unwrap(), 4);
}

#[test]
fn beatty_indicator_examples() {
    let th = es("3/2");
    let z = ExactScalar::zero();
    // enumeration gives {1,3,4,6,7,...}
    assert!(beatty_indicator(&th, &z, 4).unwrap());
    assert!(!beatty_indicator(&th, &z, 2).unwrap());
    for m in 1..=20 {
        assert!(beatty_indicator(&ExactScalar::one(), &z, m).unwrap());
    }
    assert!(matches!(
        beatty_indicator(&es("2/3"), &z, 1),
        Err(SeqError::ThetaBelowOne(_))
    ));
}

#[test]
fn indicator_matches_enumeration_exhaustively() {
    let grid: Vec<(ExactScalar, ExactScalar)> = vec![
        (es("sqrt(2)"), es("0")),
        (es("sqrt(2)"), es("0.3")),
        (es("3/2"), es("0")),
        (es("3/2"), es("4")),
        (es("(1+1*sqrt(5))/2"), es("1/4")),
        (es("1"), es("0")),
        (es("5/2"), es("2")),
        (es("sqrt(3)"), es("-2/3")),
    ];
    let max = 10_000i64;
    for (theta, gamma) in grid {
        let set: std::collections::BTreeSet<i64> =
            enumerate_beatty(&theta, &gamma, max).into_iter().collect();
        for m in 1..=max {
            assert_eq!(
                beatty_indicator(&theta, &gamma, m).unwrap(),
                set.contains(&m),
                "theta={theta} gamma={gamma} m={m}"
            );
        }
    }
}

#[test]
fn hit_count_examples() {
    let z = ExactScalar::zero();
    // enumeration: floor(2m/3) = 1 only at m=2; = 2 at m=3,4
    assert_eq!(beatty_hit_count(&es("2/3"), &z, 1).unwrap(), 1);
    assert_eq!(beatty_hit_count(&es("2/3"), &z, 2).unwrap(), 2);
    assert_eq!(beatty_hit_count(&es("2"), &z, 3).unwrap(), 0);
}

#[test]
fn hit_count_matches_direct_count_and_telescopes() {
    let cases = [
        (es("2/3"), es("0")),
        (es("1/sqrt(2)"), es("0.3")),
        (es("2/5"), es("1/3")),
        (es("sqrt(2)"), es("0")),
    ];
    for (theta, gamma) in cases {
        let mut total = 0u64;
        for n in 0..=200i64 {
            let direct = (1..=1000i64)
                .filter(|&m| beatty_term(&theta, &gamma, m).unwrap() == n)
                .count() as u64;
            let counted = beatty_hit_count(&theta, &gamma, n).unwrap();
            // the interval formula counts m over all of Z; restrict the
            // comparison to n whose preimages are safely inside [1, 1000]
            if n >= 2 && beatty_term(&theta, &gamma, 999).unwrap() > n {
                assert_eq!(counted, direct, "theta={theta} gamma={gamma} n={n}");
            }
            total += counted;
        }
        // telescoping: Σ_n |{m: ⌊mθ+γ⌋ = n}| over 0 ≤ n ≤ 200 equals the
        // direct count of m ∈ Z with ⌊mθ+γ⌋ in that range (the preimages all
        // fall well inside the scanned m window for these θ)
        let direct = (-3000i64..=3000)
            .filter(|&m| (0..=200).contains(&beatty_term(&theta, &gamma, m).unwrap()))
            .count() as u64;
        assert_eq!(total, direct, "telescope theta={theta}");
    }
}

#[test]
fn hit_count_stays_within_the_two_value_band() {
    // for θ < 1 the count per n is k−1 or k with k = min{j : jθ > 1}
    for (theta, gamma) in [
        (es("2/3"), es("0")),
        (es("1/sqrt(2)"), es("1/5")),
        (es("2/5"), es("0.3")),
    ] {
        let inv = theta.recip().unwrap();
        let hit_bound = inv.floor() as u64 + 1; // min{j: jθ > 1} for irrational 1/θ
        for n in 1..=2000i64 {
            let c = beatty_hit_count(&theta, &gamma, n).unwrap();
            assert!(
                c == hit_bound || c == hit_bound - 1,
                "theta={theta} n={n} count={c} bound={hit_bound}"
            );
        }
    }
}

#[test]
fn beatty_density_approaches_one_over_theta() {
    for theta in [es("sqrt(2)"), es("3/2"), es("(1+1*sqrt(5))/2")] {
        for gamma in [es("0"), es("0.3")] {
            let n = 50_000i64;
            let count = beatty_set_terms(&theta, &gamma, n).unwrap().len() as f64;
            let dens = count / n as f64;
            let expect = theta.recip().unwrap().to_f64();
            assert!(
                (dens - expect).abs() <= 10.0 / n as f64,
                "theta={theta} gamma={gamma}: density {dens} vs {expect}"
            );
        }
    }
}

#[test]
fn index_sequence_windows() {
    let ap = IndexSequence::build(IndexKind::Arithmetic { q: 3, r: 1 }, 100).unwrap();
    assert_eq!(ap.exponents_for_window(1, 4).unwrap(), vec![4, 7, 10, 13]);
    assert_eq!(ap.mode(), SelectionMode::ByIndex);

    let pr = IndexSequence::build(IndexKind::Primes, 30).unwrap();
    assert_eq!(
        pr.exponents_for_window(1, 30).unwrap(),
        vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    );
    assert_eq!(pr.exponents_for_window(10, 20).unwrap(), vec![11, 13, 17, 19]);
    assert_eq!(pr.mode(), SelectionMode::ByMembership);

    let bp = IndexSequence::build(
        IndexKind::BeattyPrimes { theta: es("sqrt(2)"), gamma: es("0") },
        50,
    )
    .unwrap();
    // Beatty(√2): 1,2,4,5,7,8,9,11,12,14,...; primes therein
    let members = bp.exponents_for_window(1, 50).unwrap();
    for &m in &members {
        assert!(beatty_indicator(&es("sqrt(2)"), &es("0"), m).unwrap());
    }
    assert!(members.contains(&2));
    assert!(!members.contains(&3));
}

#[test]
fn weight_eval_examples() {
    let lam = WeightSequence::build(WeightKind::Mangoldt, 100).unwrap();
    assert!((lam.eval(8).unwrap().re - 2f64.ln()).abs() < 1e-15);
    assert_eq!(lam.eval(1).unwrap().re, 0.0);
    assert!((lam.eval(7).unwrap().re - 7f64.ln()).abs() < 1e-15);
    assert_eq!(lam.eval(6).unwrap().re, 0.0);

    let lamp = WeightSequence::build(WeightKind::MangoldtPrime, 100).unwrap();
    assert_eq!(lamp.eval(8).unwrap().re, 0.0);
    assert!((lamp.eval(7).unwrap().re - 7f64.ln()).abs() < 1e-15);

    // Λ_{6,5}(1) = (φ(6)/6)·Λ'(11) = (1/3)·log 11
    let wb = WeightSequence::build(WeightKind::MangoldtWb { w: 3, b: 5 }, 100).unwrap();
    assert!((wb.eval(1).unwrap().re - 11f64.ln() / 3.0).abs() < 1e-15);

    assert!(matches!(
        lam.eval(101),
        Err(SeqError::OutOfRange { n: 101, max: 100 })
    ));
}

#[test]
fn mertens_scale_mean_of_mangoldt_prime() {
    let n = 1_000_000u64;
    let s = PrimeSieve::new(n);
    let mut acc = 0.0;
    for p in s.primes() {
        acc += (p as f64).ln();
    }
    let mean = acc / n as f64;
    assert!((mean - 1.0).abs() < 0.02, "mean {mean}");
}

#[test]
fn besicovitch_fit_exact_character() {
    let n = 3 * 512;
    let phi: Vec<Complex64> = (1..=n).map(|k| e(k as f64 / 3.0)).collect();
    let freqs = vec![es("0"), es("1/3"), es("2/3")];
    let (coeffs, residual) = besicovitch_fit(&phi, &freqs).unwrap();
    assert!(coeffs[0].norm() < 1e-12);
    assert!((coeffs[1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    assert!(coeffs[2].norm() < 1e-12);
    assert!(residual < 1e-12);
}

#[test]
fn besicovitch_fit_squarefree_residual_decreases_in_d() {
    let n = 1 << 15;
    let sieve = SquarefreeSieve::new(n);
    let phi: Vec<Complex64> = (1..=n)
        .map(|k| Complex64::new(if sieve.is_squarefree(k) { 1.0 } else { 0.0 }, 0.0))
        .collect();
    let mut residuals = Vec::new();
    for dmax in [2u64, 3, 5] {
        let mut freqs = Vec::new();
        for d in 1..=dmax {
            for a in 0..d * d {
                let f = ExactScalar::rational(a as i128, (d * d) as i128).unwrap();
                let f = f.reduce_mod1().unwrap();
                if !freqs.contains(&f) {
                    freqs.push(f);
                }
            }
        }
        let (_, residual) = besicovitch_fit(&phi, &freqs).unwrap();
        residuals.push(residual);
    }
    assert!(
        residuals[0] > residuals[1] && residuals[1] > residuals[2],
        "residuals {residuals:?}"
    );
}

#[test]
fn besicovitch_fit_quadratic_phase_has_no_linear_spectrum() {
    let n = 1 << 16;
    let alpha = std::f64::consts::SQRT_2;
    let phi: Vec<Complex64> = (1..=n)
        .map(|k| {
            let k = k as f64;
            e((k * k * alpha).fract())
        })
        .collect();
    for theta in [es("0"), es("sqrt(2)-1"), es("1/3")] {
        let (coeffs, _) = besicovitch_fit(&phi, &[theta]).unwrap();
        assert!(coeffs[0].norm() < 0.05, "coeff {}", coeffs[0].norm());
    }
}

#[test]
fn duplicate_frequencies_rejected() {
    let phi = vec![Complex64::new(1.0, 0.0); 8];
    assert!(matches!(
        besicovitch_fit(&phi, &[es("1/3"), es("4/3")]),
        Err(SeqError::DuplicateFrequency)
    ));
}
