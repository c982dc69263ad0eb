//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test -p curvelct --test acceptance -- --nocapture --test-threads=1`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use common::*;
use curvelct::{run, Method, RunConfig, Verdict};
use curvelct_core::newton::{compare_scaled, howald_lct, lp_vertex_min, newton_polygon, scaled_polygon_check};
use curvelct_core::poly::{intersection_multiplicity, quotient_dimension, QuotientDim};
use curvelct_core::resolution::{chart_discrepancy, divisor_valuation, pullback_m_order, ResolutionTree};
use curvelct_core::skp::{curve_descriptor, normal_form, skp_valuation, Skp};
use curvelct_core::valtree::{a_over_alpha_minimum, a_over_alpha_samples, skewness, thinness, tree_meet, SMOOTH_WARNING};
use curvelct_core::{BivarPoly, Error, ExtRat, Field, Rat};
use rand::Rng;

type Outcome = Result<String, String>;

fn report(n: u32, title: &str, outcome: Outcome) {
    match outcome {
        Ok(detail) => println!("criterion {n:>2} PASS  {title}: {detail}"),
        Err(why) => {
            println!("criterion {n:>2} FAIL  {title}: {why}");
            panic!("criterion {n} failed: {why}");
        }
    }
}

fn check(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(why()) }
}

fn corpus_skps() -> Vec<(String, Skp)> {
    let mut out = Vec::new();
    for field in fields() {
        for (f, _) in corpus() {
            out.push((format!("{f} over {field}"), normal_form(&poly(&f, field)).unwrap().skp));
        }
    }
    out
}

#[test]
fn criterion_01_three_methods_agree_on_the_corpus() {
    let outcome = (|| {
        let mut runs = 0;
        for field in fields() {
            for (f, lct) in corpus() {
                let r = run(&RunConfig::new(field, f.clone())).map_err(|e| format!("{f} over {field}: {e}"))?;
                let want = ExtRat::of(lct.clone());
                let values = r.values();
                check(values.len() == 3 && values.iter().all(|(_, v)| *v == want), || {
                    format!("{f} over {field}: {values:?}, expected {lct}")
                })?;
                check(r.verdict == Verdict::Agree, || format!("{f} over {field}: verdict {}", r.verdict))?;
                runs += 1;
            }
        }
        Ok(format!("{runs} curve/field pairs, all three methods equal"))
    })();
    report(1, "formula = resolution = Howald on the corpus", outcome);
}

#[test]
fn criterion_02_small_characteristic() {
    let outcome = (|| {
        for p in [2, 3] {
            let c = RunConfig::new(Field::Prime(p), "y^2 - x^3").with_methods(vec![Method::Formula, Method::Resolution]);
            let r = run(&c).map_err(|e| format!("F_{p}: {e}"))?;
            let want = ExtRat::of(Rat::new(5, 6));
            check(r.values().iter().all(|(_, v)| *v == want), || format!("F_{p}: {:?}", r.values()))?;
        }
        Ok("y^2 - x^3 gives 5/6 over F_2 and F_3 by formula and resolution".into())
    })();
    report(2, "characteristic independence", outcome);
}

#[test]
fn criterion_03_farey_weights_match_charts() {
    let outcome = (|| {
        let mut r = rng(2024);
        let (mut trees, mut nodes) = (0, 0);
        for _ in 0..120 {
            let t = random_tree(&mut r, 8);
            for n in t.nodes() {
                let a = chart_discrepancy(&t, n.id).map_err(|e| e.to_string())?;
                let b = pullback_m_order(&t, n.id).map_err(|e| e.to_string())?;
                check((a, b) == (n.weight.a, n.weight.b), || format!("E_{}: chart ({a}, {b})", n.id))?;
                nodes += 1;
            }
            trees += 1;
        }
        Ok(format!("{trees} random trees, {nodes} divisors, zero failures"))
    })();
    report(3, "Farey weights are log discrepancy and order of m", outcome);
}

#[test]
fn criterion_04_thinness_is_a_over_b() {
    let outcome = (|| {
        let (mut t, e0) = ResolutionTree::with_root(Field::Rational);
        let bu = |r: Result<usize, Error>| r.map_err(|e| e.to_string());
        let e1 = bu(t.blowup_free(e0))?;
        let e2 = bu(t.blowup_satellite(e0, e1))?;
        let e3 = bu(t.blowup_satellite(e0, e2))?;
        let e4 = bu(t.blowup_satellite(e1, e2))?;
        let e5 = bu(t.blowup_satellite(e1, e4))?;
        let e6 = bu(t.blowup_free(e1))?;
        let e7 = bu(t.blowup_satellite(e0, e3))?;
        let e8 = bu(t.blowup_free(e2))?;
        let e9 = bu(t.blowup_satellite(e3, e2))?;
        let e10 = bu(t.blowup_free(e5))?;
        let wanted =
            [(e0, 2, 1), (e1, 3, 1), (e2, 5, 2), (e3, 7, 3), (e4, 8, 3), (e5, 11, 4), (e6, 4, 1), (e7, 9, 4), (e8, 6, 2), (e9, 12, 5), (e10, 12, 4)];
        for (e, a, b) in wanted {
            let w = t.node(e).map_err(|e| e.to_string())?.weight;
            check((w.a, w.b) == (a, b), || format!("E_{e} has weight {w:?}, wanted ({a}, {b})"))?;
            let dv = divisor_valuation(&t, e).map_err(|e| e.to_string())?;
            let th = thinness(&dv.descriptor).map_err(|e| e.to_string())?;
            check(th == ExtRat::of(Rat::new(a as i64, b as i64)), || format!("E_{e}: thinness {th}, a/b = {a}/{b}"))?;
        }
        Ok(format!("{} divisorial valuations, thinness = a/b", wanted.len()))
    })();
    report(4, "thinness equals the Farey ratio", outcome);
}

#[test]
fn criterion_05_polygons_scale() {
    let outcome = (|| {
        let (mut checks, mut mutations) = (0, 0);
        for (name, skp) in corpus_skps() {
            for j in 2..=skp.k() {
                let c = scaled_polygon_check(&skp, j).map_err(|e| format!("{name}: {e}"))?;
                check(c.holds, || format!("{name} at j = {j}: certificate {:?}", c.certificate))?;
                checks += 1;
            }
            let field = skp.field();
            let mutated = skp.keys().last().unwrap().add(&BivarPoly::monomial(field.one(), 1, 1));
            let scale = Rat::new(i64::from(skp.deg(skp.k())), i64::from(skp.step(1).unwrap().n));
            let c = compare_scaled(&mutated, skp.key(2), &scale).map_err(|e| e.to_string())?;
            check(!c.holds && c.certificate.is_some(), || format!("{name}: mutation not detected"))?;
            mutations += 1;
        }
        Ok(format!("{checks} scaled polygons hold, {mutations} mutations caught with certificates"))
    })();
    report(5, "Newton polygons of key polynomials scale", outcome);
}

#[test]
fn criterion_06_lp_bound() {
    let outcome = (|| {
        let mut skps = corpus_skps();
        let mut r = rng(6);
        let mut random = 0;
        while random < 50 {
            let k = r.gen_range(3..=4);
            skps.push((format!("random #{random}"), random_skp(&mut r, k)));
            random += 1;
        }
        let mut checked = 0;
        for (name, skp) in &skps {
            for j in 2..skp.k() {
                let out = lp_vertex_min(skp, j).map_err(|e| format!("{name} at {j}: {e}"))?;
                let bound = ExtRat::of(out.bound.clone());
                check(out.minimum > out.bound && out.direct.clone().is_some_and(|d| d > bound), || {
                    format!("{name} at {j}: {out:?}")
                })?;
                checked += 1;
            }
        }
        Ok(format!("{checked} steps over {} sequences ({random} random), zero violations", skps.len()))
    })();
    report(6, "vertex minimum exceeds b_1 d_(j+1)", outcome);
}

#[test]
fn criterion_07_a_over_alpha_profile() {
    let outcome = (|| {
        let vy = curve_descriptor(&poly("y", Field::Rational)).map_err(|e| e.to_string())?;
        for (f, _) in corpus() {
            let nf = normal_form(&poly(&f, Field::Rational)).map_err(|e| e.to_string())?.poly;
            let vf = curve_descriptor(&nf).map_err(|e| e.to_string())?;
            let samples = a_over_alpha_samples(&vf, 20).map_err(|e| e.to_string())?;
            let (v1, min) = a_over_alpha_minimum(&vf).map_err(|e| e.to_string())?;
            let at = samples.iter().position(|s| ExtRat::of(s.1.clone()) == min).ok_or(format!("{f}: minimum not sampled"))?;
            let down = samples[..=at].windows(2).all(|w| w[1].1 < w[0].1);
            let up = samples[at..].windows(2).all(|w| w[1].1 > w[0].1);
            check(down && up, || format!("{f}: profile {samples:?}"))?;
            let alpha = skewness(&v1).map_err(|e| e.to_string())?;
            let expected = ExtRat::int(1).add(&alpha.reciprocal().map_err(|e| e.to_string())?);
            check(min == expected, || format!("{f}: minimum {min}, 1 + 1/alpha = {expected}"))?;
            let meet = tree_meet(&vy, &vf).map_err(|e| e.to_string())?;
            check(meet == v1, || format!("{f}: v_y meet v_f = {}, v_1 = {}", meet.skp, v1.skp))?;
        }
        Ok(format!("{} curves: decrease then increase, minimum 1 + 1/alpha(v_1), v_1 = v_y meet v_f", corpus().len()))
    })();
    report(7, "A/alpha profile", outcome);
}

#[test]
fn criterion_08_oracles_agree() {
    let outcome = (|| {
        let mut r = rng(8);
        let (mut pairs, mut tries) = (0, 0);
        while pairs < 25 {
            tries += 1;
            if tries > 1000 {
                return Err(format!("only {pairs} stabilized pairs"));
            }
            let f = random_weierstrass(&mut r, Field::Rational);
            let g = random_centered(&mut r, Field::Rational, 3, 4);
            if let QuotientDim::Finite(d) = quotient_dimension(&f, &g, 14) {
                let i = intersection_multiplicity(&f, &g).map_err(|e| e.to_string())?;
                check(i == ExtRat::int(d), || format!("({f}, {g}): resultant {i}, linear algebra {d}"))?;
                pairs += 1;
            }
        }
        let mut polygons = 0;
        for _ in 0..150 {
            let n = r.gen_range(1..=5);
            let gens: Vec<(u32, u32)> = (0..n).map(|_| (r.gen_range(0..12), r.gen_range(0..12))).collect();
            let h = howald_lct(&newton_polygon(&gens));
            let d = diagonal_threshold(&gens);
            check(h == d, || format!("{gens:?}: edges {h}, diagonal {d}"))?;
            polygons += 1;
        }
        Ok(format!("{pairs} stabilized pairs, {polygons} polygons, exact agreement"))
    })();
    report(8, "oracle consistency", outcome);
}

#[test]
fn criterion_09_semivaluation_laws() {
    let outcome = (|| {
        let mut r = rng(9);
        let mut instances = 0;
        let corpus_f: Vec<BivarPoly> =
            corpus().iter().map(|(f, _)| normal_form(&poly(f, Field::Rational)).unwrap().poly).collect();
        for round in 0..120 {
            let g = random_centered(&mut r, Field::Rational, 3, 4);
            let h = random_centered(&mut r, Field::Rational, 3, 4);
            let v = if round % 2 == 0 {
                random_valuation(&mut r)
            } else {
                curve_descriptor(&corpus_f[round % corpus_f.len()]).map_err(|e| e.to_string())?
            };
            let f = &corpus_f[round % corpus_f.len()];
            let by_keys = |p: &BivarPoly| skp_valuation(&v, p).map_err(|e| e.to_string());
            let by_int = |p: &BivarPoly| intersection_multiplicity(f, p).map_err(|e| e.to_string());
            for (name, val) in [("keys", &by_keys as &dyn Fn(&BivarPoly) -> Result<ExtRat, String>), ("intersection", &by_int)] {
                let (vg, vh) = (val(&g)?, val(&h)?);
                check(val(&g.mul(&h))? == vg.add(&vh), || format!("{name}: product law fails on {g}, {h}"))?;
                let s = g.add(&h);
                if !s.is_zero() {
                    check(val(&s)? >= ExtRat::min(&vg, &vh), || format!("{name}: ultrametric law fails on {g}, {h}"))?;
                }
                instances += 1;
            }
        }
        Ok(format!("{instances} instances, zero failures"))
    })();
    report(9, "semivaluation laws", outcome);
}

#[test]
fn criterion_10_smooth_branch_guard() {
    let outcome = (|| {
        let c = RunConfig::new(Field::Rational, "y - x^2").allow_smooth(true);
        let r = run(&c).map_err(|e| e.to_string())?;
        let formula = r.formula.as_ref().map(|f| f.lct.clone());
        let resolution = r.resolution.as_ref().map(|x| x.lct.clone());
        check(formula == Some(Rat::new(3, 2)), || format!("formula {formula:?}"))?;
        check(resolution == Some(Rat::one()), || format!("resolution {resolution:?}"))?;
        check(r.verdict == Verdict::DisagreeByDesign, || format!("verdict {}", r.verdict))?;
        check(r.warning.as_deref() == Some(SMOOTH_WARNING), || format!("warning {:?}", r.warning))?;
        let err = run(&RunConfig::new(Field::Rational, "y - x^2")).err().map(|e| e.to_string()).unwrap_or_default();
        check(err.contains(&Error::SmoothBranch.to_string()), || format!("without the flag: {err:?}"))?;
        let bin = env!("CARGO_BIN_EXE_curvelct");
        let status = |args: &[&str]| std::process::Command::new(bin).args(args).output().map(|o| o.status.code());
        let with = status(&["compute", "--poly", "y - x^2", "--allow-smooth"]).map_err(|e| e.to_string())?;
        let without = status(&["compute", "--poly", "y - x^2"]).map_err(|e| e.to_string())?;
        check(with == Some(0) && without == Some(1), || format!("exit codes {with:?} and {without:?}"))?;
        Ok("3/2 vs capped 1, DISAGREE-BY-DESIGN with warning; SmoothBranch without the flag".into())
    })();
    report(10, "smooth-branch guard", outcome);
}
