//! Invariants of valuations on the valuative tree: skewness, multiplicity,
//! thinness, approximating sequences and meets, plus the threshold formula.

use serde::Serialize;

use crate::arith::{ExtRat, Rat};
use crate::error::{Error, Result};
use crate::poly::{intersection_multiplicity, BivarPoly, CoordinateChange};
use crate::skp::{curve_descriptor, normal_form, Skp, ValuationDescriptor};

/// Which tangent direction at the origin a normalized valuation lies over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Root,
    /// `v(x) > v(y) = 1`.
    X,
    /// `v(x) = 1`, everything else.
    Y,
}

fn one() -> ExtRat {
    ExtRat::int(1)
}

fn side(v: &ValuationDescriptor) -> Result<Side> {
    let s = &v.skp;
    let (b0, b1) = (s.value(0), s.value(1));
    if *b0 == one() {
        if s.k() == 1 && *b1 == one() {
            return Ok(Side::Root);
        }
        if *b1 >= one() {
            return Ok(Side::Y);
        }
    }
    if *b1 == one() && *b0 > one() && s.k() == 1 {
        return Ok(Side::X);
    }
    Err(Error::NotNormalized)
}

fn ext_mul(a: &ExtRat, b: &ExtRat) -> ExtRat {
    match (a.finite(), b.finite()) {
        (Some(x), _) => b.scale(x),
        (None, Some(y)) => a.scale(y),
        (None, None) => ExtRat::Inf,
    }
}

/// `b_0 * b_k / deg_y U_k`, infinite for curve semivaluations.
pub fn skewness(v: &ValuationDescriptor) -> Result<ExtRat> {
    side(v)?;
    let s = &v.skp;
    let k = s.k();
    Ok(ext_mul(s.value(0), s.value(k)).scale(&Rat::new(1, s.deg(k) as i64)))
}

/// `deg_y U_k`.
pub fn multiplicity(v: &ValuationDescriptor) -> u32 {
    v.skp.deg(v.skp.k())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub valuation: ValuationDescriptor,
    /// Multiplicity on the segment ending at this stage.
    pub mult: u32,
    pub skew: ExtRat,
}

/// `ord_m = v_0 < v_1 < ... < v_g < v`, the points where the multiplicity jumps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxSequence {
    pub stages: Vec<Stage>,
}

pub fn approximating_sequence(v: &ValuationDescriptor) -> Result<ApproxSequence> {
    let field = v.skp.field();
    let mut stages = vec![Stage { valuation: ValuationDescriptor::root(field), mult: 1, skew: one() }];
    if side(v)? == Side::Root {
        return Ok(ApproxSequence { stages });
    }
    let s = &v.skp;
    for j in 1..s.k() {
        if s.step(j).expect("inner step").n > 1 {
            let valuation = ValuationDescriptor::new(s.prefix(j));
            let skew = skewness(&valuation)?;
            stages.push(Stage { valuation, mult: s.deg(j), skew });
        }
    }
    stages.push(Stage { valuation: v.clone(), mult: multiplicity(v), skew: skewness(v)? });
    Ok(ApproxSequence { stages })
}

/// `2 + sum m_j (t_j - t_{j-1})` over the approximating sequence.
pub fn thinness(v: &ValuationDescriptor) -> Result<ExtRat> {
    let seq = approximating_sequence(v)?;
    let mut acc = Rat::from_int(2);
    for pair in seq.stages.windows(2) {
        let (Some(lo), Some(hi)) = (pair[0].skew.finite(), pair[1].skew.finite()) else {
            return Ok(ExtRat::Inf);
        };
        acc = acc + (hi - lo) * Rat::from_int(pair[1].mult as i64);
    }
    Ok(ExtRat::of(acc))
}

/// Greatest lower bound in the tree order.
pub fn tree_meet(v: &ValuationDescriptor, w: &ValuationDescriptor) -> Result<ValuationDescriptor> {
    let field = v.skp.field();
    if w.skp.field() != field {
        return Err(Error::FieldMismatch);
    }
    let skp = match (side(v)?, side(w)?) {
        (Side::X, Side::X) => {
            let b0 = ExtRat::min(v.skp.value(0), w.skp.value(0));
            return ValuationDescriptor::monomial(field, b0, one());
        }
        (Side::Y, Side::Y) => meet_y_side(&v.skp, &w.skp),
        _ => return Ok(ValuationDescriptor::root(field)),
    };
    Ok(ValuationDescriptor::new(skp))
}

fn meet_y_side(a: &Skp, b: &Skp) -> Skp {
    let mut j = 1;
    loop {
        // keys agree up to j, values up to j - 1
        let (va, vb) = (a.value(j), b.value(j));
        if va != vb {
            return if va < vb { a.prefix(j) } else { b.prefix(j) };
        }
        if j == a.k() {
            return a.clone();
        }
        if j == b.k() {
            return b.clone();
        }
        if a.key(j + 1) != b.key(j + 1) {
            return a.prefix(j);
        }
        j += 1;
    }
}

/// The point of the segment `[ord_m, v]` with skewness `t`.
pub fn point_at_skewness(v: &ValuationDescriptor, t: &Rat) -> Result<ValuationDescriptor> {
    let field = v.skp.field();
    let te = ExtRat::new(t.clone())?;
    if te < one() || te > skewness(v)? {
        return Err(Error::OutOfSegment(t.to_string()));
    }
    if te == one() {
        return Ok(ValuationDescriptor::root(field));
    }
    match side(v)? {
        Side::X => ValuationDescriptor::monomial(field, te, one()),
        Side::Root => unreachable!("skewness of the root is 1"),
        Side::Y => {
            let s = &v.skp;
            let j = (1..=s.k())
                .find(|&j| te <= s.value(j).scale(&Rat::new(1, s.deg(j) as i64)))
                .expect("t is at most the skewness of v");
            let value = ExtRat::of(t * &Rat::from_int(s.deg(j) as i64));
            Ok(ValuationDescriptor::new(s.prefix(j).with_last_value(value)?))
        }
    }
}

/// `alpha(v /\ v_g) * ord_m(g)`, which equals `v(g)` for a branch `g`.
pub fn skewness_product_check(v: &ValuationDescriptor, g: &BivarPoly) -> Result<ExtRat> {
    let vg = curve_descriptor(g)?;
    let meet = tree_meet(v, &vg)?;
    Ok(skewness(&meet)?.scale(&Rat::from_int(g.ord_m()? as i64)))
}

/// `A_thin(w) / alpha(w)` for a valuation of finite skewness.
pub fn a_over_alpha(w: &ValuationDescriptor) -> Result<Rat> {
    match (thinness(w)?, skewness(w)?) {
        (ExtRat::Finite(a), ExtRat::Finite(t)) => Ok(a / t),
        _ => Err(Error::OutOfSegment("inf".into())),
    }
}

/// The first stage `v_1` after `ord_m` and the minimum `1 + 1/alpha(v_1)` of
/// `A_thin / alpha` on `[ord_m, v]`.
pub fn a_over_alpha_minimum(v: &ValuationDescriptor) -> Result<(ValuationDescriptor, ExtRat)> {
    let seq = approximating_sequence(v)?;
    let first = seq.stages.get(1).ok_or(Error::DegenerateSegment)?;
    let min = one().add(&first.skew.reciprocal()?);
    Ok((first.valuation.clone(), min))
}

/// `(t, A_thin/alpha)` at `count` evenly spaced skewness values on the
/// segment `[ord_m, v]`, truncated above the last finite stage when `v` is a
/// curve. The skewness of `v_1` is always among the samples.
pub fn a_over_alpha_samples(v: &ValuationDescriptor, count: usize) -> Result<Vec<(Rat, Rat)>> {
    let seq = approximating_sequence(v)?;
    if seq.stages.len() < 2 || count < 2 {
        return Err(Error::DegenerateSegment);
    }
    let top = match skewness(v)? {
        ExtRat::Finite(t) => t,
        ExtRat::Inf => {
            let last = seq.stages.iter().filter_map(|s| s.skew.finite()).max().expect("root is finite");
            last + &Rat::one()
        }
    };
    let lo = Rat::one();
    let step = (&top - &lo) / Rat::from_int(count as i64 - 1);
    let mut ts: Vec<Rat> = (0..count).map(|i| &lo + &(&step * &Rat::from_int(i as i64))).collect();
    if let Some(t1) = seq.stages[1].skew.finite() {
        if !ts.contains(t1) {
            ts.push(t1.clone());
            ts.sort();
        }
    }
    ts.into_iter()
        .map(|t| {
            let w = point_at_skewness(v, &t)?;
            Ok((t, a_over_alpha(&w)?))
        })
        .collect()
}

/// Result of the valuative threshold formula.
#[derive(Clone, Debug, Serialize)]
pub struct FormulaLct {
    pub lct: Rat,
    pub vfx: ExtRat,
    pub vfy: ExtRat,
    pub skp: Skp,
    pub method: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub coordinates: Vec<CoordinateChange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

pub const SMOOTH_WARNING: &str =
    "smooth branch: the formula value is not the threshold of the germ, which is 1";

/// `1/v_f(x) + 1/v_f(y)` in coordinates adapted to the branch, cross-checked
/// against `(1/d_k)(1 + b_0/b_1)` from its key polynomials.
pub fn lct_formula(f: &BivarPoly, allow_smooth: bool) -> Result<FormulaLct> {
    let nf = normal_form(f).map_err(|e| match e {
        Error::NotUnibranchTangentCone => Error::ReducibleInput("tangent cone has several directions".into()),
        other => other,
    })?;
    let field = f.field();
    let smooth = nf.poly.ord_m()? == 1;
    if smooth && !allow_smooth {
        return Err(Error::SmoothBranch);
    }
    let vfx = intersection_multiplicity(&nf.poly, &BivarPoly::x(field))?;
    let vfy = intersection_multiplicity(&nf.poly, &BivarPoly::y(field))?;
    let sum = vfx.reciprocal()?.add(&vfy.reciprocal()?);
    let lct = sum.finite().expect("v_f(x) is positive").clone();

    let s = &nf.skp;
    let ratio = s.value(1).reciprocal()?.scale(s.value(0).finite().expect("b_0 = 1"));
    let closed = one().add(&ratio).scale(&Rat::new(1, s.deg(s.k()) as i64));
    if closed != sum {
        return Err(Error::InternalMismatch(format!("formula gives {sum} but the key polynomials give {closed}")));
    }
    Ok(FormulaLct {
        lct,
        vfx,
        vfy,
        skp: nf.skp,
        method: "formula",
        coordinates: nf.changes,
        warning: smooth.then(|| SMOOTH_WARNING.to_string()),
    })
}
