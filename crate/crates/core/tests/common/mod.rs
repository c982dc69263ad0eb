//! Corpus and random generators shared by the integration suites.
#![allow(dead_code)]

use curvelct_core::poly::{parse_poly, BivarPoly};
use curvelct_core::resolution::ResolutionTree;
use curvelct_core::skp::{monomial_product, validate_skp, value_relation, RawSkp, Skp, ValuationDescriptor};
use curvelct_core::{ExtRat, Field, Rat};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

/// Branches with their thresholds.
pub fn corpus() -> Vec<(String, Rat)> {
    let mut out: Vec<(String, Rat)> = vec![
        ("y^2 - x^3".into(), Rat::new(5, 6)),
        ("y^3 - x^4".into(), Rat::new(7, 12)),
        ("y^3 - x^5".into(), Rat::new(8, 15)),
        ("(y^2 - x^3)^2 - x^5*y".into(), Rat::new(5, 12)),
    ];
    for g in 2..=5i64 {
        out.push((format!("y^2 - x^{}", 2 * g + 1), Rat::new(1, 2) + Rat::new(1, 2 * g + 1)));
    }
    out
}

pub fn fields() -> Vec<Field> {
    vec![Field::Rational, Field::Prime(5), Field::Prime(7), Field::Prime(101)]
}

pub fn poly(s: &str, field: Field) -> BivarPoly {
    parse_poly(s, field).expect("test polynomial parses")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A polynomial with up to `terms` terms, coefficients in `-3..=3` and
/// exponents below `deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, field: Field, terms: usize, deg: u32) -> BivarPoly {
    let t: Vec<(i64, u32, u32)> =
        (0..terms).map(|_| (rng.gen_range(-3..=3), rng.gen_range(0..deg), rng.gen_range(0..deg))).collect();
    BivarPoly::from_ints(field, &t)
}

/// A nonzero polynomial vanishing at the origin.
pub fn random_centered(rng: &mut ChaCha8Rng, field: Field, terms: usize, deg: u32) -> BivarPoly {
    loop {
        let g = random_poly(rng, field, terms, deg);
        if !g.is_zero() && g.constant_term().is_zero() {
            return g;
        }
    }
}

/// `y^d + sum c_ij x^i y^j` with `i >= 1`, `j < d`.
pub fn random_weierstrass(rng: &mut ChaCha8Rng, field: Field) -> BivarPoly {
    let d = rng.gen_range(1..=3u32);
    let mut t = vec![(1i64, 0u32, d)];
    for _ in 0..rng.gen_range(1..=3) {
        t.push((rng.gen_range(-3..=3), rng.gen_range(1..=5), rng.gen_range(0..d)));
    }
    let f = BivarPoly::from_ints(field, &t);
    if f.at_x_zero().num_terms() == 1 { f } else { random_weierstrass(rng, field) }
}

fn nonzero_int(rng: &mut ChaCha8Rng) -> i64 {
    if rng.gen_bool(0.5) { rng.gen_range(1..=3) } else { -rng.gen_range(1..=3) }
}

/// A valid key polynomial sequence with `b_0 = 1 < b_1` and `k` keys after `x`.
pub fn random_skp(rng: &mut ChaCha8Rng, k: usize) -> Skp {
    let field = Field::Rational;
    'retry: loop {
        let n1 = rng.gen_range(1..=3i64);
        let b1 = Rat::new(n1 + rng.gen_range(1..=3 * n1), n1);
        let mut keys = vec![BivarPoly::x(field), BivarPoly::y(field)];
        let mut values = vec![Rat::one(), b1];
        for j in 1..k {
            let (n, m) = value_relation(&values).expect("small values");
            if m[0] < 0 {
                continue 'retry;
            }
            let m: Vec<u32> = m.iter().map(|&e| e as u32).collect();
            let theta = field.int(nonzero_int(rng));
            let next = keys[j].pow(n).sub(&monomial_product(&keys, &m).scale(&theta));
            let bump = Rat::new(rng.gen_range(1..=3), rng.gen_range(1..=3));
            values.push(&values[j] * &Rat::from_int(n as i64) + bump);
            keys.push(next);
        }
        let raw = RawSkp::new(keys, values.into_iter().map(ExtRat::of).collect());
        if let Ok(s) = validate_skp(&raw) {
            return s;
        }
    }
}

pub fn random_valuation(rng: &mut ChaCha8Rng) -> ValuationDescriptor {
    let k = rng.gen_range(1..=3);
    ValuationDescriptor::new(random_skp(rng, k))
}

/// A tree of at most `max_nodes` divisors built by random free and satellite blow-ups.
pub fn random_tree(rng: &mut ChaCha8Rng, max_nodes: usize) -> ResolutionTree {
    let (mut t, _) = ResolutionTree::with_root(Field::Rational);
    let target = rng.gen_range(1..=max_nodes);
    while t.len() < target {
        let edges = t.edges();
        if !edges.is_empty() && rng.gen_bool(0.5) {
            let (i, j) = edges[rng.gen_range(0..edges.len())];
            t.blowup_satellite(i, j).expect("adjacent pair");
        } else {
            let p = rng.gen_range(0..t.len());
            t.blowup_free(p).expect("free points exist over Q");
        }
    }
    t
}

/// `1 / t` where `(t, t)` is the first diagonal point of the region spanned
/// by the generators, found by checking every generator and every pair.
pub fn diagonal_threshold(gens: &[(u32, u32)]) -> ExtRat {
    let mut best: Option<Rat> = None;
    let mut offer = |t: Rat| {
        if best.as_ref().is_none_or(|b| t < *b) {
            best = Some(t);
        }
    };
    for &(a, b) in gens {
        offer(Rat::from_int(a.max(b) as i64));
    }
    for (i, &(a1, b1)) in gens.iter().enumerate() {
        for &(a2, b2) in &gens[i + 1..] {
            // lambda (a1 - b1) + (1 - lambda)(a2 - b2) = 0
            let (d1, d2) = (a1 as i64 - b1 as i64, a2 as i64 - b2 as i64);
            if d1 == d2 || (d1 > 0) == (d2 > 0) && d1 != 0 && d2 != 0 {
                continue;
            }
            let lambda = Rat::new(-d2, d1 - d2);
            if lambda.is_negative() || lambda > Rat::one() {
                continue;
            }
            let t = &lambda * &Rat::from_int(a1 as i64) + (Rat::one() - lambda.clone()) * Rat::from_int(a2 as i64);
            offer(t);
        }
    }
    match best {
        Some(t) if t.is_zero() => ExtRat::Inf,
        Some(t) => ExtRat::of(t.recip().expect("positive")),
        None => ExtRat::Inf,
    }
}
