mod common;

use common::{classical_positive_digits, engel_classical, pierce_classical, pierce_odd_witness, q, rng, sylvester_classical, sys};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use perron_core::{
    alternating::{is_member_is, pm_digits_of, pm_inf, pm_sup, ISResult, PmDigits},
    positive::{cyl_inf, digits_of},
    system::{min_next_digit, r_value},
    validate_prefix, Error, PrefixBase, Rational,
};
use rand::Rng;

fn inv(n: &BigUint) -> Rational {
    Rational::new(1.into(), n.clone().into())
}

fn product(ds: &[BigUint]) -> BigUint {
    ds.iter().product()
}

/// Random strictly or weakly increasing digit strings starting at 2.
fn increasing(rng: &mut impl Rng, len: usize, strict: bool) -> Vec<BigUint> {
    let mut d = 2u64;
    let mut out = Vec::new();
    for _ in 0..len {
        out.push(BigUint::from(d));
        d += rng.gen_range(if strict { 1..5 } else { 0..4 });
    }
    out
}

#[test]
fn engel_series_is_positive_series() {
    let mut rng = rng(11);
    for _ in 0..50 {
        let digits = increasing(&mut rng, 10, false);
        let base = PrefixBase::new(sys("engel"), digits.clone()).unwrap();
        for k in 1..=10 {
            let classical: Rational = (1..=k).map(|n| inv(&product(&digits[..n]))).sum();
            assert_eq!(cyl_inf(&base.truncated(k)), classical);
        }
    }
    let engel = sys("engel");
    assert_eq!(engel.r(&[2u32.into()]), BigUint::one());
}

#[test]
fn sylvester_series_is_positive_series() {
    let mut rng = rng(12);
    for _ in 0..30 {
        let mut base = PrefixBase::empty(sys("sylvester"));
        for _ in 0..6 {
            let d = base.min_next_digit() + rng.gen_range(0u32..3);
            base.push(d).unwrap();
        }
        let classical: Rational = base.digits().iter().map(inv).sum();
        assert_eq!(cyl_inf(&base), classical);
    }
}

#[test]
fn pierce_series_is_alternating_series() {
    let mut rng = rng(13);
    for _ in 0..50 {
        let qs = increasing(&mut rng, 10, true);
        let digits: Vec<BigUint> = qs.iter().map(|d| d + 1u32).collect();
        let base = PrefixBase::new(sys("pierce"), digits).unwrap();
        let mut partial = Rational::zero();
        for k in 1..=10 {
            let term = inv(&product(&qs[..k]));
            if k % 2 == 1 {
                partial += term;
                assert_eq!(pm_sup(&base.truncated(k)), partial);
            } else {
                partial -= term;
                assert_eq!(pm_inf(&base.truncated(k)), partial);
            }
        }
    }
    let pierce = sys("pierce");
    assert_eq!(pierce.r(&[3u32.into(), 4u32.into()]), BigUint::from(4u32));
}

#[test]
fn engel_three_sevenths() {
    // 3/7 = 1/3 + 1/(3·4) + 1/(3·4·7)
    let (classical, terminated) = engel_classical(&q(3, 7), 3);
    assert!(terminated);
    assert_eq!(classical, vec![BigUint::from(3u32), 4u32.into(), 7u32.into()]);
    let got = digits_of(sys("engel"), &q(3, 7), 3).unwrap();
    assert_eq!(got.digits(), classical_positive_digits("engel", &q(3, 7), 3).as_slice());
    assert_eq!(got.digits(), &[3u32.into(), 4u32.into(), 8u32.into()]);
}

#[test]
fn r_values_follow_classical_conditions() {
    let base = validate_prefix([2u32, 5], sys("engel")).unwrap();
    assert_eq!(r_value(&base), BigUint::from(4u32));
    // Engel digits are non-decreasing, so the digit after 5 can be 5 itself.
    assert_eq!(min_next_digit(&base), BigUint::from(5u32));

    let base = validate_prefix([2u32], sys("sylvester")).unwrap();
    assert_eq!(r_value(&base), BigUint::from(2u32));
    assert_eq!(min_next_digit(&base), BigUint::from(3u32));
    // Greedy Egyptian fractions of 1/2 + 1/3 + 1/7 pick exactly these minimal digits.
    let (greedy, terminated) = sylvester_classical(&(q(1, 2) + q(1, 3) + q(1, 7)), 5);
    assert!(terminated);
    assert_eq!(greedy, vec![BigUint::from(2u32), 3u32.into(), 7u32.into()]);
    let mut b = base.clone();
    b.push_minimal();
    b.push_minimal();
    assert_eq!(b.digits(), greedy.as_slice());
}

#[test]
fn engel_rejects_decreasing_digits() {
    assert_eq!(
        validate_prefix([2u32, 5, 4], sys("engel")).unwrap_err(),
        Error::InvalidDigit {
            index: 3,
            digit: 4u32.into(),
            minimum: 5u32.into()
        }
    );
}

#[test]
fn pierce_terminations_are_members() {
    for (n, d) in [(1, 2), (2, 5), (3, 7), (5, 13), (17, 91)] {
        let x = q(n, d);
        let witness = pierce_odd_witness(&x);
        match is_member_is(sys("pierce"), &x, 64).unwrap() {
            ISResult::Member { witness: w } => {
                assert_eq!(w.digits(), witness.as_slice(), "{x}");
                assert_eq!(pm_sup(&w), x);
            }
            other => panic!("{x}: {other:?}"),
        }
    }
    assert_eq!(pierce_classical(&q(2, 5)), vec![BigUint::from(2u32), 5u32.into()]);
    match pm_digits_of(sys("pierce"), &q(1, 2), 4).unwrap() {
        PmDigits::Member { witness, .. } => assert_eq!(witness.digits(), &[3u32.into()]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn alternating_luroth_two_fifths_cycles() {
    match is_member_is(sys("alt-luroth"), &q(2, 5), 64).unwrap() {
        ISResult::NotMember(cycle) => {
            assert_eq!(cycle.orbit, vec![q(2, 5), q(3, 5), q(4, 5), q(2, 5)]);
            assert_eq!(
                cycle.digits.digits(),
                &[3u32.into(), 2u32.into(), 2u32.into()]
            );
        }
        other => panic!("{other:?}"),
    }
    match pm_digits_of(sys("alt-luroth"), &q(2, 5), 6).unwrap() {
        PmDigits::Regular(b) => {
            let want: Vec<BigUint> = [3u32, 2, 2, 3, 2, 2].iter().map(|&d| d.into()).collect();
            assert_eq!(b.digits(), want.as_slice());
        }
        other => panic!("{other:?}"),
    }
}
