mod common;

use common::*;
use curvelct_core::poly::{intersection_multiplicity, quotient_dimension, QuotientDim};
use curvelct_core::skp::{curve_descriptor, normal_form, skp_valuation, ValuationDescriptor};
use curvelct_core::{ExtRat, Field};

const Q: Field = Field::Rational;

fn laws_hold(value: impl Fn(&curvelct_core::BivarPoly) -> ExtRat, seed: u64, rounds: usize) -> usize {
    let mut r = rng(seed);
    let mut checked = 0;
    for _ in 0..rounds {
        let g = random_centered(&mut r, Q, 3, 4);
        let h = random_centered(&mut r, Q, 3, 4);
        assert_eq!(value(&g.mul(&h)), value(&g).add(&value(&h)), "product {g} * {h}");
        let s = g.add(&h);
        if !s.is_zero() {
            assert!(value(&s) >= ExtRat::min(&value(&g), &value(&h)), "sum {g} + {h}");
        }
        checked += 1;
    }
    checked
}

#[test]
fn key_polynomial_valuations_are_valuations() {
    let mut r = rng(11);
    let mut total = 0;
    for round in 0..20 {
        let v = random_valuation(&mut r);
        total += laws_hold(|g| skp_valuation(&v, g).unwrap(), 100 + round, 12);
    }
    assert!(total >= 200);
}

#[test]
fn curve_semivaluations_are_semivaluations() {
    let mut total = 0;
    for (i, (f, _)) in corpus().iter().enumerate() {
        let v = curve_descriptor(&normal_form(&poly(f, Q)).unwrap().poly).unwrap();
        total += laws_hold(|g| skp_valuation(&v, g).unwrap(), 200 + i as u64, 30);
    }
    assert!(total >= 200);
}

#[test]
fn intersection_multiplicity_is_a_semivaluation() {
    let mut total = 0;
    for (i, (f, _)) in corpus().iter().enumerate() {
        let f = poly(f, Q);
        total += laws_hold(|g| intersection_multiplicity(&f, g).unwrap(), 300 + i as u64, 30);
    }
    assert!(total >= 200);
}

#[test]
fn curve_valuation_matches_intersection_numbers() {
    let mut r = rng(5);
    for (f, _) in corpus() {
        let nf = normal_form(&poly(&f, Q)).unwrap().poly;
        let v = curve_descriptor(&nf).unwrap();
        for _ in 0..10 {
            let g = random_centered(&mut r, Q, 3, 5);
            let by_keys = skp_valuation(&v, &g).unwrap().scale(&v.scale);
            assert_eq!(by_keys, intersection_multiplicity(&nf, &g).unwrap(), "{f} against {g}");
        }
    }
}

#[test]
fn resultant_and_linear_algebra_agree() {
    let mut r = rng(17);
    let mut stabilized = 0;
    let mut tries = 0;
    while stabilized < 25 {
        tries += 1;
        assert!(tries < 500, "too few stabilized pairs");
        let f = random_weierstrass(&mut r, Q);
        let g = random_centered(&mut r, Q, 3, 4);
        let by_res = intersection_multiplicity(&f, &g).unwrap();
        match quotient_dimension(&f, &g, 14) {
            QuotientDim::Finite(d) => {
                assert_eq!(by_res, ExtRat::int(d), "({f}, {g})");
                stabilized += 1;
            }
            QuotientDim::ExceedsBound => {}
        }
    }
}

#[test]
fn monomial_valuations_match_weights() {
    let v = ValuationDescriptor::monomial(Q, ExtRat::int(2), ExtRat::int(3)).unwrap();
    assert_eq!(skp_valuation(&v, &poly("y^2 - x^3", Q)).unwrap(), ExtRat::int(6));
    assert_eq!(skp_valuation(&v, &poly("x*y + y^5", Q)).unwrap(), ExtRat::int(5));
}
