mod common;

use common::*;
use curvelct_core::skp::{curve_descriptor, normal_form, skp_valuation, ValuationDescriptor};
use curvelct_core::valtree::{
    a_over_alpha_minimum, a_over_alpha_samples, lct_formula, multiplicity, skewness, skewness_product_check, thinness,
    tree_meet,
};
use curvelct_core::{ExtRat, Field, Rat};

const Q: Field = Field::Rational;

/// `v <= w` in the tree order.
fn below(v: &ValuationDescriptor, w: &ValuationDescriptor) -> bool {
    tree_meet(v, w).unwrap() == *v
}

fn sample_points(seed: u64) -> Vec<ValuationDescriptor> {
    let mut r = rng(seed);
    let mut out: Vec<ValuationDescriptor> = (0..12).map(|_| random_valuation(&mut r)).collect();
    out.push(ValuationDescriptor::root(Q));
    for (f, _) in corpus() {
        out.push(curve_descriptor(&normal_form(&poly(&f, Q)).unwrap().poly).unwrap());
    }
    out.push(curve_descriptor(&poly("x", Q)).unwrap());
    // tree points are normalized: drop the presentation scale
    out.into_iter().map(|v| ValuationDescriptor::new(v.skp)).collect()
}

#[test]
fn meet_is_a_semilattice() {
    let pts = sample_points(3);
    for v in &pts {
        assert_eq!(tree_meet(v, v).unwrap(), *v);
        for w in &pts {
            let m = tree_meet(v, w).unwrap();
            assert_eq!(m, tree_meet(w, v).unwrap());
            assert!(below(&m, v) && below(&m, w), "{} /\\ {}", v.skp, w.skp);
            for u in pts.iter().take(6) {
                let left = tree_meet(&m, u).unwrap();
                let right = tree_meet(v, &tree_meet(w, u).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn meet_lowers_skewness_and_multiplicity() {
    let pts = sample_points(4);
    for v in &pts {
        for w in &pts {
            let m = tree_meet(v, w).unwrap();
            assert!(skewness(&m).unwrap() <= skewness(v).unwrap());
            assert!(multiplicity(&m) <= multiplicity(v));
        }
    }
}

#[test]
fn skewness_times_multiplicity_is_the_value() {
    let pts = sample_points(5);
    let branches: Vec<_> = corpus()
        .iter()
        .map(|(f, _)| normal_form(&poly(f, Q)).unwrap().poly)
        .chain([poly("x", Q), poly("y", Q), poly("y - x^2", Q), poly("y^2 - 2*x^3", Q)])
        .collect();
    for v in pts.iter().filter(|v| skewness(v).unwrap() != ExtRat::Inf) {
        for g in &branches {
            assert_eq!(skewness_product_check(v, g).unwrap(), skp_valuation(v, g).unwrap(), "{} on {g}", v.skp);
        }
    }
}

#[test]
fn thinness_grows_along_segments() {
    let mut r = rng(6);
    for _ in 0..30 {
        let v = random_valuation(&mut r);
        let a = thinness(&v).unwrap();
        assert!(a >= ExtRat::int(2));
        let m = tree_meet(&v, &ValuationDescriptor::root(Q)).unwrap();
        assert!(thinness(&m).unwrap() <= a);
    }
}

#[test]
fn a_over_alpha_profile_on_the_corpus() {
    for (f, lct) in corpus() {
        let nf = normal_form(&poly(&f, Q)).unwrap().poly;
        let vf = curve_descriptor(&nf).unwrap();
        let samples = a_over_alpha_samples(&vf, 20).unwrap();
        let (v1, min) = a_over_alpha_minimum(&vf).unwrap();
        let at = samples.iter().position(|s| ExtRat::of(s.1.clone()) == min).expect("minimum sampled");
        assert!(samples[..=at].windows(2).all(|w| w[1].1 < w[0].1), "{f}");
        assert!(samples[at..].windows(2).all(|w| w[1].1 > w[0].1), "{f}");
        let vy = curve_descriptor(&poly("y", Q)).unwrap();
        assert_eq!(tree_meet(&vy, &vf).unwrap(), v1, "{f}");
        assert_eq!(lct_formula(&nf, false).unwrap().lct, lct);
        assert_eq!(ExtRat::of(Rat::one() + skewness(&v1).unwrap().finite().unwrap().recip().unwrap()), min);
    }
}
