use super::*;

fn es(s: &str) -> ExactScalar {
    parse_exact(s).unwrap()
}

#[test]
fn canonical_forms_collapse() {
    // square part of d is extracted, b = 0 folds to a rational
    assert_eq!(es("sqrt(8)"), es("2*sqrt(2)"));
    assert_eq!(es("sqrt(9)"), ExactScalar::integer(3));
    assert_eq!(es("sqrt(2)*sqrt(2)"), ExactScalar::integer(2));
    assert_eq!(es("4/6"), es("2/3"));
    assert_eq!(es("(2+2*sqrt(2))/4"), es("(1+1*sqrt(2))/2"));
}

#[test]
fn reduce_mod1_examples() {
    assert_eq!(es("3/2").reduce_mod1().unwrap(), es("1/2"));
    assert_eq!(
        es("(1+1*sqrt(5))/2").reduce_mod1().unwrap(),
        es("(-1+1*sqrt(5))/2")
    );
    assert_eq!(ExactScalar::zero().reduce_mod1().unwrap(), ExactScalar::zero());
}

#[test]
fn floor_is_exact_near_integers() {
    assert_eq!(es("sqrt(2)").floor(), 1);
    assert_eq!(es("-1*sqrt(2)").floor(), -2);
    assert_eq!(es("7/2").floor(), 3);
    assert_eq!(es("-7/2").floor(), -4);
    assert_eq!(ExactScalar::integer(5).floor(), 5);
    // 5*sqrt(2) = 7.071...: the floor decision is made exactly
    assert_eq!(es("5*sqrt(2)").floor(), 7);
    // (99+70*sqrt(2)) is within 6e-5 of 198: floor must not be fooled
    assert_eq!(es("99+70*sqrt(2)").floor(), 197);
    assert_eq!(es("-99-70*sqrt(2)").floor(), -198);
}

#[test]
fn float_projection_tracks_cancellation() {
    // 70√2 − 99 ≈ −5.05e−3 cancels badly in naive float evaluation. The
    // algebraic identity 70√2 − 99 = −1/(99 + 70√2) gives a
    // cancellation-free reference accurate to ~1e−18.
    let x = es("70*sqrt(2)-99");
    assert_eq!(x, ExactScalar::integer(-1).div(&es("99+70*sqrt(2)")).unwrap());
    let reference = -1.0 / (99.0 + 70.0 * std::f64::consts::SQRT_2);
    assert!((x.to_f64() - reference).abs() < 3e-18);
    // the naive evaluation is ~1e−14 off; the projection must beat it
    let naive = 70.0 * std::f64::consts::SQRT_2 - 99.0;
    assert!((x.to_f64() - reference).abs() < (naive - reference).abs());
    // large coefficients from n²α-type phases stay in [0,1) after reduction
    let big = es("sqrt(2)").mul_int(1_000_000_007).unwrap();
    let frac = big.reduce_mod1().unwrap().to_f64();
    assert!((0.0..1.0).contains(&frac));
}

#[test]
fn display_round_trips() {
    for s in [
        "1/2",
        "-3/7",
        "5",
        "sqrt(2)",
        "(1+1*sqrt(5))/2",
        "(-4+3*sqrt(10))/7",
        "0.3",
    ] {
        let v = es(s);
        assert_eq!(parse_exact(&v.to_string()).unwrap(), v, "round-trip of {s}");
    }
}

#[test]
fn arithmetic_identities() {
    let phi = es("(1+1*sqrt(5))/2");
    // golden ratio: φ² = φ + 1
    assert_eq!(phi.mul(&phi).unwrap(), phi.add(&ExactScalar::one()).unwrap());
    // 1/φ = φ − 1
    assert_eq!(phi.recip().unwrap(), phi.sub(&ExactScalar::one()).unwrap());
    // 1/√2 = √2/2
    assert_eq!(es("sqrt(2)").recip().unwrap(), es("sqrt(2)/2"));
    assert_eq!(es("1/sqrt(2)"), es("sqrt(2)/2"));
}

#[test]
fn mixed_field_addition_is_rejected() {
    assert!(matches!(
        es("sqrt(2)").add(&es("sqrt(5)")),
        Err(NumberError::MixedFields(2, 5))
    ));
}

#[test]
fn subgroup_examples() {
    let third = FrequencyGroupSpec::cyclic(es("1/3"));
    assert!(subgroup_contains(&third, &es("2/3")).unwrap());
    assert!(!subgroup_contains(&third, &es("1/2")).unwrap());

    // <1/sqrt(2)> does not contain the golden-ratio conjugate: the fields
    // Q(sqrt 2) and Q(sqrt 5) only meet in Q.
    let inv_sqrt2 = FrequencyGroupSpec::cyclic(es("1/sqrt(2)"));
    assert!(!subgroup_contains(&inv_sqrt2, &es("(sqrt(5)-1)/2")).unwrap());
    assert!(subgroup_contains(&inv_sqrt2, &es("sqrt(2)/2")).unwrap());
    assert!(subgroup_contains(&inv_sqrt2, &es("3/sqrt(2)")).unwrap());
    assert!(!subgroup_contains(&inv_sqrt2, &es("1/5")).unwrap());
    assert!(subgroup_contains(&inv_sqrt2, &ExactScalar::zero()).unwrap());
}

#[test]
fn subgroup_with_rationals_component() {
    // <Q, 1/theta> for theta = sqrt(2)
    let g = FrequencyGroupSpec::new(vec![es("1/sqrt(2)")], true);
    assert!(subgroup_contains(&g, &es("1/7")).unwrap());
    assert!(subgroup_contains(&g, &es("3/sqrt(2)+2/5")).unwrap());
    assert!(!subgroup_contains(&g, &es("sqrt(5)")).unwrap());
    // alpha = sqrt(2)-1 IS in <Q, 1/sqrt(2)>: sqrt(2) = 2·(1/sqrt 2)
    assert!(subgroup_contains(&g, &es("sqrt(2)-1")).unwrap());
}

#[test]
fn subgroup_multiples_of_generator() {
    let gens = [es("1/3"), es("1/sqrt(2)"), es("(sqrt(5)-1)/2"), es("2/7")];
    for g in gens {
        let spec = FrequencyGroupSpec::cyclic(g);
        for k in -100i128..=100 {
            let x = g.mul_int(k).unwrap().reduce_mod1().unwrap();
            assert!(
                subgroup_contains(&spec, &x).unwrap(),
                "k={k} g={g} should be a member"
            );
            // membership is invariant under a further mod-1 reduction
            assert!(subgroup_contains(&spec, &x.reduce_mod1().unwrap()).unwrap());
        }
    }
}

#[test]
fn subgroup_two_generators_same_field() {
    // <sqrt(2)/2, sqrt(2)/3>: contains sqrt(2)/6 = sqrt(2)/2 - sqrt(2)/3
    let g = FrequencyGroupSpec::new(vec![es("sqrt(2)/2"), es("sqrt(2)/3")], false);
    assert!(subgroup_contains(&g, &es("sqrt(2)/6")).unwrap());
    assert!(subgroup_contains(&g, &es("5*sqrt(2)/6").reduce_mod1().unwrap()).unwrap());
    assert!(!subgroup_contains(&g, &es("sqrt(2)/12")).unwrap());
    // kernel direction (3, -2) drifts by 0 here, so no extra rationals appear
    assert!(!subgroup_contains(&g, &es("1/2")).unwrap());
}

#[test]
fn rational_independence_examples() {
    assert!(!rationally_independent(&[es("1/2")]));
    assert!(rationally_independent(&[es("sqrt(2)-1")]));
    assert!(rationally_independent(&[es("sqrt(2)-1"), es("(sqrt(5)-1)/2")]));
    // same field twice is always dependent
    assert!(!rationally_independent(&[es("sqrt(2)"), es("sqrt(2)/2")]));
    assert!(!rationally_independent(&[es("sqrt(2)"), es("1-sqrt(2)")]));
    assert!(rationally_independent(&[]));
}

#[test]
fn independence_agrees_with_kind_tag_on_singletons() {
    for s in ["1/2", "3", "-7/5", "sqrt(2)", "(1+1*sqrt(5))/2", "sqrt(3)-4/3"] {
        let x = es(s);
        assert_eq!(rationally_independent(&[x]), !x.is_rational());
    }
}

#[test]
fn totient_values() {
    assert_eq!(euler_totient(1), 1);
    assert_eq!(euler_totient(6), 2);
    // direct count oracle
    let count = (1..=30u64).filter(|b| gcd(*b as i128, 30) == 1).count() as u64;
    assert_eq!(count, 8);
    assert_eq!(euler_totient(30), 8);
}

#[test]
fn totient_of_primes_first_hundred() {
    // sieve oracle for the first 100 primes
    let mut primes = Vec::new();
    let mut n = 2u64;
    while primes.len() < 100 {
        if (2..n).take_while(|f| f * f <= n).all(|f| n % f != 0) {
            primes.push(n);
        }
        n += 1;
    }
    for p in primes {
        assert_eq!(euler_totient(p), p - 1);
    }
}

#[test]
fn primorial_values() {
    assert_eq!(primorial(1).unwrap(), 1);
    assert_eq!(primorial(3).unwrap(), 6);
    // direct product oracle: 2·3·5·7·11·13
    assert_eq!(primorial(13).unwrap(), 2 * 3 * 5 * 7 * 11 * 13);
    assert_eq!(primorial(13).unwrap(), 30030);
    assert!(primorial(200).is_err()); // overflows u64
}

#[test]
fn ordering_is_exact() {
    assert_eq!(es("sqrt(2)").cmp_exact(&es("141/100")), Ordering::Greater);
    assert_eq!(es("sqrt(2)").cmp_exact(&es("142/100")), Ordering::Less);
    assert_eq!(
        es("(1+1*sqrt(5))/2").cmp_exact(&es("(1+1*sqrt(5))/2")),
        Ordering::Equal
    );
    // 99/70 is a convergent of sqrt(2); still decided correctly
    assert_eq!(es("99/70").cmp_exact(&es("sqrt(2)")), Ordering::Greater);
    assert_eq!(es("sqrt(2)").cmp_exact(&es("239/169")), Ordering::Greater);
}
