mod common;

use common::*;
use curvelct_core::newton::{
    compare_scaled, howald_lct, lct_monom_closedform, lp_vertex_min, monom_ideal, newton_polygon, scaled_polygon_check,
};
use curvelct_core::skp::normal_form;
use curvelct_core::{ExtRat, Field, Rat};
use proptest::prelude::*;

const Q: Field = Field::Rational;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn howald_matches_the_diagonal(gens in prop::collection::vec((0u32..12, 0u32..12), 1..6)) {
        let poly = newton_polygon(&gens);
        prop_assert_eq!(howald_lct(&poly), diagonal_threshold(&gens));
    }

    #[test]
    fn scaling_a_polygon_scales_the_threshold(gens in prop::collection::vec((1u32..9, 0u32..9), 1..5), c in 1i64..5) {
        let poly = newton_polygon(&gens);
        let scaled: Vec<(u32, u32)> = gens.iter().map(|&(a, b)| (a * c as u32, b * c as u32)).collect();
        let direct = howald_lct(&newton_polygon(&scaled));
        prop_assert_eq!(direct, howald_lct(&poly).scale(&Rat::new(1, c)));
    }
}

#[test]
fn corpus_polygons_scale() {
    for (f, _) in corpus() {
        let skp = normal_form(&poly(&f, Q)).unwrap().skp;
        for j in 2..=skp.k() {
            let check = scaled_polygon_check(&skp, j).unwrap();
            assert!(check.holds, "{f} at {j}");
        }
        let last = skp.keys().last().unwrap();
        let mutated = last.add(&poly("x*y", Q));
        let scale = Rat::new(i64::from(skp.deg(skp.k())), i64::from(skp.step(1).unwrap().n));
        let check = compare_scaled(&mutated, skp.key(2), &scale).unwrap();
        assert!(!check.holds && check.certificate.is_some(), "{f}");
    }
}

#[test]
fn closed_form_matches_howald_on_the_corpus() {
    for field in fields() {
        for (f, lct) in corpus() {
            let skp = normal_form(&poly(&f, field)).unwrap().skp;
            assert_eq!(lct_monom_closedform(&skp).unwrap(), lct, "{f} over {field}");
            let gens = monom_ideal(skp.keys().last().unwrap()).unwrap();
            assert_eq!(howald_lct(&newton_polygon(&gens)), ExtRat::of(lct.clone()));
            assert_eq!(diagonal_threshold(&gens), ExtRat::of(lct));
        }
    }
}

#[test]
fn lp_bound_on_random_sequences() {
    let mut r = rng(23);
    let mut checked = 0;
    for _ in 0..60 {
        let k = 3 + usize::from(rand::Rng::gen_bool(&mut r, 0.5));
        let skp = random_skp(&mut r, k);
        for j in 2..skp.k() {
            let out = lp_vertex_min(&skp, j).unwrap();
            assert!(out.minimum > out.bound, "{skp} at {j}");
            assert!(out.direct.unwrap() > ExtRat::of(out.bound.clone()), "{skp} at {j}");
            checked += 1;
        }
    }
    assert!(checked >= 60);
}

#[test]
fn lp_bound_on_the_corpus() {
    for (f, _) in corpus() {
        let skp = normal_form(&poly(&f, Q)).unwrap().skp;
        for j in 2..skp.k() {
            let out = lp_vertex_min(&skp, j).unwrap();
            assert!(out.minimum > out.bound, "{f} at {j}");
        }
    }
}
