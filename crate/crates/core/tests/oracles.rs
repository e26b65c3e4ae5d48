//! Worked example values checked against small independent computations.

use num_bigint::BigInt;
use towerforge::gamma::{
    artin_images, make_gamma, presentation::Orientation, presentation_consistency, AbelianSubspace,
};
use towerforge::intarith::{
    is_prime, kronecker, prime_disc_factorization, validate_triple, Case, TripleError,
};
use towerforge::qforms::class_group;
use towerforge::quadunits::{congruence_obstructs, eta_witness, solve_norm_form, NormFormOutcome};
use towerforge::scan::{enumerate_triples, ScanBounds};
use towerforge::towers::verify_triple;

fn trial_division(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Reduced positive definite forms of discriminant `d`, counted directly.
fn count_reduced(d: i64) -> usize {
    let mut h = 0;
    for a in 1..=((-d) as f64 / 3.0).sqrt() as i64 + 1 {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            let g = [a, b.abs(), c].iter().fold(0, |g, &x| gcd(g, x));
            if g == 1 {
                h += 1;
            }
        }
    }
    h
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn symbol_examples() {
    let squares: Vec<i64> = (1..11).map(|x| x * x % 11).collect();
    assert!(squares.contains(&(-420i64).rem_euclid(11)));
    assert_eq!(kronecker(-420, 11), 1);
    assert_eq!(kronecker(3, 5), -1);
    assert_eq!(kronecker(7, 1), 1);
}

#[test]
fn primality_examples() {
    assert!(trial_division(10007));
    assert!(is_prime(10007).unwrap());
    for n in 2..5000 {
        assert_eq!(is_prime(n).unwrap(), trial_division(n as u64), "{n}");
    }
}

#[test]
fn factorization_examples() {
    let mut v: Vec<i64> = prime_disc_factorization(-420)
        .unwrap()
        .iter()
        .map(|p| p.value())
        .collect();
    v.sort_unstable();
    assert_eq!(v, vec![-7, -4, -3, 5]);
    assert_eq!(v.iter().product::<i64>(), -420);
    let mut v: Vec<i64> = prime_disc_factorization(12)
        .unwrap()
        .iter()
        .map(|p| p.value())
        .collect();
    v.sort_unstable();
    assert_eq!(v, vec![-4, -3]);
}

#[test]
fn triple_examples() {
    assert_eq!(validate_triple(5, 3, 7).unwrap().case, Case::A);
    // (3/23): 3^11 mod 23 = 1
    let euler = (0..11).fold(1u64, |a, _| a * 3 % 23);
    assert_eq!(euler, 1);
    assert_eq!(validate_triple(5, 3, 23).unwrap().case, Case::B);
    assert_eq!(4 * 4 % 13, 3);
    assert!(matches!(
        validate_triple(13, 3, 7),
        Err(TripleError::SymbolCondition {
            num: 3,
            den: 13,
            value: 1
        })
    ));
}

#[test]
fn class_group_examples() {
    // The 2-rank is t - 1; the order comes from a direct count.
    for (d, h, two) in [
        (-420, 8, vec![2, 2, 2]),
        (-276, 8, vec![2, 4]),
        (-84, 4, vec![2, 2]),
    ] {
        assert_eq!(count_reduced(d), h);
        let g = class_group(d).unwrap();
        assert_eq!(g.h, h);
        assert_eq!(g.two_sylow.factors(), two.as_slice());
    }
}

#[test]
fn norm_form_examples() {
    assert_eq!(5 * 16 - 21 * 4, -4);
    let s = solve_norm_form(5, 21, -4).unwrap();
    assert_eq!(s.solution(), Some((&BigInt::from(4), &BigInt::from(2))));
    let s = solve_norm_form(1, 3, -2).unwrap();
    assert_eq!(s.solution(), Some((&BigInt::from(1), &BigInt::from(1))));
    // 3x^2 = 4 (mod 5) needs x^2 = 3, and the squares mod 5 are 0, 1, 4.
    let sq5: Vec<i64> = (0..5).map(|x| x * x % 5).collect();
    assert!(!sq5.contains(&3));
    assert!(congruence_obstructs(3, 35, 4, 5));
    assert!(matches!(
        solve_norm_form(3, 35, 4).unwrap(),
        NormFormOutcome::Insoluble(_)
    ));
}

#[test]
fn eta_witness_examples() {
    let w = eta_witness(&validate_triple(5, 3, 7).unwrap()).unwrap();
    assert_eq!((w.x.clone(), w.y.clone(), w.u), (4.into(), 2.into(), 1));
    // (2 sqrt 5 + sqrt 21)^2 = 41 + 4 sqrt 105, halved coordinates (82, 8)
    assert_eq!(
        (w.eta_squared.a.clone(), w.eta_squared.b.clone()),
        (82.into(), 8.into())
    );

    let w = eta_witness(&validate_triple(5, 3, 23).unwrap()).unwrap();
    let search = (1i64..)
        .find_map(|y| {
            let x2 = 69 * y * y - 4;
            let x = ((x2 / 5) as f64).sqrt().round() as i64;
            (x2 % 5 == 0 && 5 * x * x == x2).then_some((x, y))
        })
        .unwrap();
    assert_eq!(
        (w.x.clone(), w.y.clone()),
        (search.0.into(), search.1.into())
    );
    assert_eq!(w.eta_norm(), BigInt::from(-1));
}

#[test]
fn gamma_examples() {
    for n in 1..=6u32 {
        let g = make_gamma(n).unwrap();
        let count = 2 * (1usize << (n + 1)) * 4;
        assert_eq!(g.order(), count);
        let max_order = g.elements().map(|x| g.element_order(x)).max().unwrap();
        assert_eq!(g.exponent(), max_order);
        assert_eq!(max_order, 4u64.max(1 << (n + 1)));
        let whole = g.whole();
        let derived = g.derived_subgroup(&whole).unwrap();
        let expected = g.subgroup_closure(&[g.element(0, 2, 0), g.element(0, 1 << n, 2)]);
        assert_eq!(derived.elements, expected.elements);
        assert_eq!(derived.order(), count / 8);
        let st = g.subgroup_closure(&[g.sigma(), g.tau()]);
        assert_eq!(st.order(), (1 << (n + 1)) * 4);
    }
    let r = presentation_consistency(2).unwrap();
    assert!(r.adopted_passes());
    assert!(!r.variant(1, Orientation::RhoTau).unwrap().passes);
}

#[test]
fn artin_examples() {
    // N_4 A ~ zpq in case A and zq in case B, with z -> r, p -> s, A -> t:
    // solve for the image of q.
    let (r, s, t) = (1u8, 2u8, 4u8);
    assert_eq!(artin_images(Case::A)[2], t ^ r ^ s);
    assert_eq!(artin_images(Case::B)[2], t ^ r);
    assert_eq!(artin_images(Case::A)[0], r);
    assert_eq!(AbelianSubspace::span(&[2, 5]).order(), 4);
}

#[test]
fn tower_examples() {
    let c = verify_triple(5, 3, 7).unwrap();
    // j = 3: k_3 = k(sqrt(-4p)), subfields Q(sqrt -20), Q(sqrt 21), Q(sqrt -420)
    let h2 = |d: i64| class_group(d).unwrap().two_sylow.order();
    let wide21 = class_group(21).unwrap().wide_two_class_number();
    assert_eq!(h2(-20) * wide21 * h2(-420) / 2, 8);
    assert_eq!(c.quadratic[2].h_kuroda, 8);

    let c = verify_triple(5, 3, 23).unwrap();
    let n = c.n.unwrap();
    assert_eq!(n, 2);
    assert_eq!(c.quartic[4].cl2_gamma.factors(), &[4, 1 << n]);
}

#[test]
fn scan_count_baseline() {
    let sieve: Vec<u64> = (2..=250).filter(|&x| trial_division(x)).collect();
    let legendre = |a: u64, p: u64| (0..(p - 1) / 2).fold(1, |acc, _| acc * (a % p) % p) == 1;
    let mut count = 0;
    for &p in sieve.iter().filter(|&&x| x % 8 == 5) {
        for &q in sieve.iter().filter(|&&x| x % 8 == 3) {
            for &qp in sieve.iter().filter(|&&x| x % 8 == 7) {
                if !legendre(q, p) && !legendre(qp, p) {
                    count += 1;
                }
            }
        }
    }
    assert_eq!(enumerate_triples(ScanBounds::uniform(250)).len(), count);
    assert_eq!(count, 852);
}
