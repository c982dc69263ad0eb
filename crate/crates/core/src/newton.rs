//! Newton polygons of monomial ideals in two variables, the threshold of a
//! monomial ideal, and the polygon and linear-programming facts about key
//! polynomials.

use serde::Serialize;

use crate::arith::{ExtRat, Rat};
use crate::error::{Error, Result};
use crate::poly::{monomial_valuation, BivarPoly, Exp, MonomialWeights};
use crate::skp::Skp;

/// Half-plane `p u1 + q u2 >= r`, stored with `r = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub p: Rat,
    pub q: Rat,
    pub r: Rat,
}

impl Edge {
    fn through(a: &(Rat, Rat), b: &(Rat, Rat)) -> Edge {
        let p = &a.1 - &b.1;
        let q = &b.0 - &a.0;
        let r = &(&p * &a.0) + &(&q * &a.1);
        Edge { p: &p / &r, q: &q / &r, r: Rat::one() }
    }

    pub fn contains(&self, u: &(Rat, Rat)) -> bool {
        &(&self.p * &u.0) + &(&self.q * &u.1) >= self.r
    }
}

/// Convex hull of a monomial set plus the nonnegative quadrant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub generators: Vec<Exp>,
    /// Increasing `u1`, decreasing `u2`.
    pub vertices: Vec<(Rat, Rat)>,
    /// Bounded edges between consecutive vertices, then the rays `u1 >= c`
    /// and `u2 >= c` when `c > 0`. Empty for the unit ideal.
    pub edges: Vec<Edge>,
}

#[derive(Serialize)]
struct PolygonJson<'a> {
    vertices: Vec<[&'a Rat; 2]>,
    edges: &'a [Edge],
}

impl Serialize for NewtonPolygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonJson { vertices: self.vertices.iter().map(|v| [&v.0, &v.1]).collect(), edges: &self.edges }
            .serialize(s)
    }
}

impl NewtonPolygon {
    pub fn contains(&self, u: &(Rat, Rat)) -> bool {
        !u.0.is_negative() && !u.1.is_negative() && self.edges.iter().all(|e| e.contains(u))
    }

    /// `c * P` for `c > 0`.
    pub fn scaled(&self, c: &Rat) -> NewtonPolygon {
        NewtonPolygon {
            generators: Vec::new(),
            vertices: self.vertices.iter().map(|v| (&v.0 * c, &v.1 * c)).collect(),
            edges: self.edges.iter().map(|e| Edge { p: &e.p / c, q: &e.q / c, r: Rat::one() }).collect(),
        }
    }

    /// Same region: equal canonical vertex and edge lists.
    pub fn same_region(&self, other: &NewtonPolygon) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

/// The support of `f` minimalized under divisibility, by increasing `u1`.
pub fn monom_ideal(f: &BivarPoly) -> Result<Vec<Exp>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(minimalize(f.support()))
}

fn minimalize(gens: impl IntoIterator<Item = Exp>) -> Vec<Exp> {
    let mut pts: Vec<Exp> = gens.into_iter().collect();
    pts.sort();
    pts.dedup();
    let mut out: Vec<Exp> = Vec::new();
    for e in pts {
        // sorted by u1, so e is minimal iff its u2 is below every kept u2
        if out.last().is_none_or(|l| e.1 < l.1) {
            out.push(e);
        }
    }
    out
}

pub fn newton_polygon(gens: &[Exp]) -> NewtonPolygon {
    let generators = minimalize(gens.iter().copied());
    assert!(!generators.is_empty(), "Newton polygon of the empty set");
    let pt = |e: &Exp| (Rat::from_int(e.0 as i64), Rat::from_int(e.1 as i64));
    // lower convex chain; a point on or above the segment of its neighbours is dropped
    let mut hull: Vec<(Rat, Rat)> = Vec::new();
    for e in &generators {
        let c = pt(e);
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            let cross = &(&(&b.0 - &a.0) * &(&c.1 - &a.1)) - &(&(&b.1 - &a.1) * &(&c.0 - &a.0));
            if cross.is_positive() {
                break;
            }
            hull.pop();
        }
        hull.push(c);
    }
    let mut edges = Vec::new();
    if hull[0].0.is_zero() && hull[0].1.is_zero() {
        return NewtonPolygon { generators, vertices: hull, edges };
    }
    for w in hull.windows(2) {
        edges.push(Edge::through(&w[0], &w[1]));
    }
    let first_u1 = &hull[0].0;
    if first_u1.is_positive() {
        edges.push(Edge { p: first_u1.recip().expect("positive"), q: Rat::zero(), r: Rat::one() });
    }
    let last_u2 = &hull[hull.len() - 1].1;
    if last_u2.is_positive() {
        edges.push(Edge { p: Rat::zero(), q: last_u2.recip().expect("positive"), r: Rat::one() });
    }
    NewtonPolygon { generators, vertices: hull, edges }
}

/// Largest `lambda` with `(1, 1)` in `lambda * P`: `min (p + q) / r` over the
/// edges, infinite for the unit ideal.
pub fn howald_lct(poly: &NewtonPolygon) -> ExtRat {
    poly.edges
        .iter()
        .map(|e| ExtRat::of(&(&e.p + &e.q) / &e.r))
        .min()
        .unwrap_or(ExtRat::Inf)
}

/// Outcome of comparing `Newt(U_j)` with `scale * Newt(U_2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonCheck {
    pub holds: bool,
    pub scale: Rat,
    /// A generator of `U_j` outside the scaled polygon, or a vertex of the
    /// scaled polygon missing from `Newt(U_j)`.
    pub certificate: Option<(Rat, Rat)>,
}

fn require_normalized(skp: &Skp) -> Result<()> {
    if *skp.value(0) == ExtRat::int(1) && *skp.value(1) > ExtRat::int(1) {
        Ok(())
    } else {
        Err(Error::NotNormalized)
    }
}

/// `Newt(U_j) = (d_j / n_1) Newt(U_2)`.
pub fn scaled_polygon_check(skp: &Skp, j: usize) -> Result<PolygonCheck> {
    require_normalized(skp)?;
    if j < 2 || j > skp.k() {
        return Err(Error::IndexOutOfRange { index: j });
    }
    let n1 = skp.step(1).expect("k >= 2").n;
    let scale = Rat::new(skp.deg(j) as i64, n1 as i64);
    compare_scaled(skp.key(j), skp.key(2), &scale)
}

/// [`scaled_polygon_check`] on explicit polynomials, for corrupted inputs.
pub fn compare_scaled(u_j: &BivarPoly, u_2: &BivarPoly, scale: &Rat) -> Result<PolygonCheck> {
    let target = newton_polygon(&monom_ideal(u_2)?).scaled(scale);
    let actual = newton_polygon(&monom_ideal(u_j)?);
    let pt = |e: &Exp| (Rat::from_int(e.0 as i64), Rat::from_int(e.1 as i64));
    let outside = actual.generators.iter().map(pt).find(|u| !target.contains(u));
    let missing = || target.vertices.iter().find(|v| !actual.vertices.contains(v)).cloned();
    let holds = actual.same_region(&target);
    let certificate = if holds { None } else { outside.or_else(missing) };
    Ok(PolygonCheck { holds, scale: scale.clone(), certificate })
}

/// `(1/d_k)(1 + b_0/b_1)`, checked against the threshold of `Monom(U_k)`.
pub fn lct_monom_closedform(skp: &Skp) -> Result<Rat> {
    require_normalized(skp)?;
    let k = skp.k();
    if k < 2 {
        return Err(Error::IndexOutOfRange { index: k });
    }
    let ratio = skp.value(1).reciprocal()?.scale(skp.value(0).finite().expect("b_0 = 1"));
    let closed = ExtRat::int(1).add(&ratio).scale(&Rat::new(1, skp.deg(k) as i64));
    let howald = howald_lct(&newton_polygon(&monom_ideal(skp.key(k))?));
    if closed != howald {
        return Err(Error::InternalMismatch(format!("closed form {closed} but polygon threshold {howald}")));
    }
    Ok(closed.finite().expect("finite").clone())
}

/// Minimum of the linear program over `{sum m_l b_l = n_j b_j, m >= 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LpOutcome {
    /// Argmin vertex `(n_j b_j / b_l) e_l`.
    pub vertex: Vec<Rat>,
    pub minimum: Rat,
    /// `b_1 d_{j+1}`.
    pub bound: Rat,
    /// Objective at the actual exponents `m_{j,l}`, when known.
    pub at_exponents: Option<Rat>,
    /// `v_(1, b_1)` of the expanded product `U_0^m_0 ... U_{j-1}^m_{j-1}`.
    pub direct: Option<ExtRat>,
}

/// The vertex minimum of `m_0 + b_1 sum_{l >= 1} m_l d_l` for step `j` and the
/// strict inequality `minimum > b_1 d_{j+1}`.
pub fn lp_vertex_min(skp: &Skp, j: usize) -> Result<LpOutcome> {
    require_normalized(skp)?;
    if j < 2 || j >= skp.k() {
        return Err(Error::IndexOutOfRange { index: j });
    }
    let values: Vec<Rat> = (0..=j).map(|l| skp.value(l).finite().expect("finite below k").clone()).collect();
    let degs: Vec<u32> = (0..=j).map(|l| skp.deg(l)).collect();
    let step = skp.step(j).expect("j < k");
    let mut out = lp_vertex_min_raw(&values, &degs, step.n, Some(&step.m))?;
    let w = MonomialWeights::finite(Rat::one(), values[1].clone());
    let direct = monomial_valuation(&w, &skp.monomial(j).expect("j < k"))?;
    if direct <= ExtRat::of(out.bound.clone()) {
        return Err(Error::LemmaViolated(format!("monomial value {direct} is at most {}", out.bound)));
    }
    out.direct = Some(direct);
    Ok(out)
}

/// [`lp_vertex_min`] on explicit data `b_0..b_j`, `d_0..d_j` and `n_j`, so
/// that inconsistent inputs can be fed in.
pub fn lp_vertex_min_raw(values: &[Rat], degs: &[u32], n: u32, exps: Option<&[u32]>) -> Result<LpOutcome> {
    let j = values.len() - 1;
    let target = &values[j] * &Rat::from_int(n as i64);
    let cost = |l: usize| if l == 0 { Rat::one() } else { &values[1] * &Rat::from_int(degs[l] as i64) };
    let (best, minimum) = (0..j)
        .map(|l| (l, &cost(l) * &(&target / &values[l])))
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("j >= 1");
    let mut vertex = vec![Rat::zero(); j];
    vertex[best] = &target / &values[best];
    let bound = &values[1] * &Rat::from_int((degs[j] * n) as i64);
    let at_exponents = exps.map(|m| m.iter().enumerate().fold(Rat::zero(), |acc, (l, &e)| acc + cost(l) * Rat::from_int(e as i64)));
    if minimum <= bound {
        return Err(Error::LemmaViolated(format!("vertex minimum {minimum} is at most {bound}")));
    }
    if let Some(a) = &at_exponents {
        if *a < minimum {
            return Err(Error::LemmaViolated(format!("feasible point beats the vertex minimum: {a} < {minimum}")));
        }
    }
    Ok(LpOutcome { vertex, minimum, bound, at_exponents, direct: None })
}
