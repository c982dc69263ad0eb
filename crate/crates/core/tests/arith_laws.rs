use curvelct_core::poly::parse_poly;
use curvelct_core::{BivarPoly, ExtRat, Field, Rat};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| Rat::new(n, d))
}

fn ext() -> impl Strategy<Value = ExtRat> {
    prop_oneof![
        4 => (0i64..50, 1i64..20).prop_map(|(n, d)| ExtRat::of(Rat::new(n, d))),
        1 => Just(ExtRat::Inf),
    ]
}

fn small_poly(field: Field) -> impl Strategy<Value = BivarPoly> {
    prop::collection::vec((-5i64..=5, 0u32..4, 0u32..4), 0..5)
        .prop_map(move |t| BivarPoly::from_ints(field, &t))
}

proptest! {
    #[test]
    fn rationals_form_a_field(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.recip().unwrap(), Rat::one());
        }
        prop_assert_eq!(a.to_string().parse::<Rat>().unwrap(), a);
    }

    #[test]
    fn extended_values_are_a_tropical_semiring(a in ext(), b in ext(), c in ext()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(ExtRat::min(&a, &b), ExtRat::min(&b, &a));
        prop_assert_eq!(a.add(&ExtRat::min(&b, &c)), ExtRat::min(&a.add(&b), &a.add(&c)));
        prop_assert_eq!(a.add(&ExtRat::Inf), ExtRat::Inf);
        prop_assert_eq!(a.scale(&Rat::zero()), ExtRat::zero());
        prop_assert!(ExtRat::min(&a, &b) <= a);
    }

    #[test]
    fn prime_field_inverses(n in 1i64..1000, p in prop::sample::select(vec![2u32, 3, 5, 7, 101])) {
        let field = Field::Prime(p);
        let x = field.int(n);
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
        prop_assert!(x.pow(u64::from(p)) == x);
    }

    #[test]
    fn polynomial_ring_laws(f in small_poly(Field::Rational), g in small_poly(Field::Rational), h in small_poly(Field::Rational)) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        if !g.is_zero() {
            prop_assert_eq!(f.mul(&g).div_exact(&g), Some(f.clone()));
        }
        prop_assert_eq!(parse_poly(&f.to_string(), Field::Rational).unwrap(), f);
    }

    #[test]
    fn printing_round_trips_over_prime_fields(f in small_poly(Field::Prime(7))) {
        prop_assert_eq!(parse_poly(&f.to_string(), Field::Prime(7)).unwrap(), f);
    }
}
