//! Iterated point blow-ups of the plane with exact chart algebra.
//!
//! Every point of a model is described by a [`LocalChart`]: the original
//! coordinates `x = X(u, v)`, `y = Y(u, v)` as polynomials in local
//! coordinates centered at the point, plus the exceptional divisors
//! `{u = 0}` and `{v = 0}` through it, if any. Blowing up a point uses the
//! two standard charts `(u, uv)` and `(uv, v)`.

mod curve;
mod export;
mod probe;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::arith::{Field, FieldElem, Rat};
use crate::error::{Error, Result};
use crate::poly::BivarPoly;

pub use curve::{resolution_lct, resolve_curve, resolve_curve_with, ResolutionLct, DEFAULT_MAX_BLOWUPS};
pub use probe::{divisor_valuation, farey_multiplicity_probe, DivisorValuation};

/// Farey parameters `(a, b)` of an exceptional divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FareyWeight {
    pub a: u64,
    pub b: u64,
}

impl FareyWeight {
    pub const ROOT: FareyWeight = FareyWeight { a: 2, b: 1 };

    pub fn free_child(self) -> FareyWeight {
        FareyWeight { a: self.a + 1, b: self.b }
    }

    pub fn satellite(self, other: FareyWeight) -> FareyWeight {
        FareyWeight { a: self.a + other.a, b: self.b + other.b }
    }

    pub fn ratio(self) -> Rat {
        Rat::new(self.a as i64, self.b as i64)
    }
}

/// Local coordinates at a point of a blow-up model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalChart {
    pub x: BivarPoly,
    pub y: BivarPoly,
    /// Exceptional divisor `{u = 0}` through the point.
    pub div_u: Option<usize>,
    /// Exceptional divisor `{v = 0}` through the point.
    pub div_v: Option<usize>,
}

impl LocalChart {
    /// The origin of the plane before any blow-up.
    pub fn origin(field: Field) -> LocalChart {
        LocalChart { x: BivarPoly::x(field), y: BivarPoly::y(field), div_u: None, div_v: None }
    }

    fn compose(&self, su: &BivarPoly, sv: &BivarPoly) -> (BivarPoly, BivarPoly) {
        (self.x.substitute(su, sv), self.y.substitute(su, sv))
    }

    /// Point `v = c` on the new divisor in the chart `(u, uv)`.
    fn chart_a(&self, new: usize, c: &FieldElem) -> LocalChart {
        let field = self.x.field();
        let u = BivarPoly::x(field);
        let v = BivarPoly::y(field).add(&BivarPoly::constant(c.clone()));
        let (x, y) = self.compose(&u, &u.mul(&v));
        let div_v = if c.is_zero() { self.div_v } else { None };
        LocalChart { x, y, div_u: Some(new), div_v }
    }

    /// Origin of the chart `(uv, v)`.
    fn chart_b(&self, new: usize) -> LocalChart {
        let field = self.x.field();
        let (u, v) = (BivarPoly::x(field), BivarPoly::y(field));
        let (x, y) = self.compose(&u.mul(&v), &v);
        LocalChart { x, y, div_u: self.div_u, div_v: Some(new) }
    }

    pub fn divisors(&self) -> Vec<usize> {
        self.div_u.into_iter().chain(self.div_v).collect()
    }

    /// `g(X(u, v), Y(u, v))`.
    pub fn pull_back(&self, g: &BivarPoly) -> BivarPoly {
        g.substitute(&self.x, &self.y)
    }
}

/// An exceptional divisor.
#[derive(Clone, Debug)]
pub struct Node {
    pub id: usize,
    pub weight: FareyWeight,
    /// Divisors through the blown-up point: none for the first blow-up, one
    /// for a free point, two for a satellite point.
    pub parents: Vec<usize>,
    /// Chart around the generic point of the divisor, which is `{u = 0}`.
    pub chart: LocalChart,
    /// The point that was blown up.
    pub center: LocalChart,
    /// `ord_E` of the pulled-back curve, when resolving one.
    pub n: Option<u64>,
}

/// A finite sequence of point blow-ups over the origin.
#[derive(Clone, Debug)]
pub struct ResolutionTree {
    field: Field,
    nodes: Vec<Node>,
    /// Intersection points of pairs of divisors in the current model.
    meets: BTreeMap<(usize, usize), LocalChart>,
    /// Parameters `c` of points on each divisor that are no longer free.
    used: Vec<Vec<FieldElem>>,
}

fn pair(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

fn ord_u(p: &BivarPoly) -> u64 {
    p.ord_x().map_or(u64::MAX, u64::from)
}

impl ResolutionTree {
    pub fn new(field: Field) -> ResolutionTree {
        ResolutionTree { field, nodes: Vec::new(), meets: BTreeMap::new(), used: Vec::new() }
    }

    /// Blow up the origin, creating `E_0`.
    pub fn with_root(field: Field) -> (ResolutionTree, usize) {
        let mut t = ResolutionTree::new(field);
        let id = t.blowup_at(&LocalChart::origin(field));
        (t, id)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> Result<&Node> {
        self.nodes.get(id).ok_or(Error::IndexOutOfRange { index: id })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Pairs of divisors meeting in the current model: the dual graph.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.meets.keys().copied().collect()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.meets.contains_key(&pair(i, j))
    }

    /// Blow up a point given by its chart and record the new divisor.
    pub fn blowup_at(&mut self, p: &LocalChart) -> usize {
        let id = self.nodes.len();
        let parents = p.divisors();
        let weight = match parents[..] {
            [] => FareyWeight::ROOT,
            [d] => self.nodes[d].weight.free_child(),
            [d, e] => self.nodes[d].weight.satellite(self.nodes[e].weight),
            _ => unreachable!("at most two divisors through a point"),
        };
        if let [d, e] = parents[..] {
            self.meets.remove(&pair(d, e));
        }
        let zero = self.field.zero();
        let a_origin = p.chart_a(id, &zero);
        let mut used = Vec::new();
        if let Some(d) = p.div_v {
            self.meets.insert(pair(d, id), a_origin.clone());
            used.push(zero.clone());
        }
        if let Some(d) = p.div_u {
            self.meets.insert(pair(d, id), p.chart_b(id));
        }
        let chart = LocalChart { div_v: None, ..a_origin };
        self.nodes.push(Node { id, weight, parents, chart, center: p.clone(), n: None });
        self.used.push(used);
        id
    }

    /// Chart at the free point `v = c` of divisor `parent`.
    pub fn free_point(&self, parent: usize, c: &FieldElem) -> Result<LocalChart> {
        let node = self.node(parent)?;
        if self.used[parent].contains(c) {
            return Err(Error::PointUnavailable(parent));
        }
        let field = self.field;
        let (u, v) = (BivarPoly::x(field), BivarPoly::y(field).add(&BivarPoly::constant(c.clone())));
        let (x, y) = node.chart.compose(&u, &v);
        Ok(LocalChart { x, y, div_u: Some(parent), div_v: None })
    }

    /// Blow up the free point `v = c` on `parent`.
    pub fn blowup_free_at(&mut self, parent: usize, c: &FieldElem) -> Result<usize> {
        let p = self.free_point(parent, c)?;
        self.used[parent].push(c.clone());
        Ok(self.blowup_at(&p))
    }

    /// Blow up some free point on `parent`; the new weight is `(a + 1, b)`.
    pub fn blowup_free(&mut self, parent: usize) -> Result<usize> {
        self.node(parent)?;
        let c = self.next_free_param(parent).ok_or(Error::PointUnavailable(parent))?;
        self.blowup_free_at(parent, &c)
    }

    fn next_free_param(&self, parent: usize) -> Option<FieldElem> {
        let limit = match self.field {
            Field::Prime(p) => p as i64,
            Field::Rational => i64::MAX,
        };
        (0..limit).map(|i| self.field.int(i)).find(|c| !self.used[parent].contains(c))
    }

    /// Blow up the intersection point of two adjacent divisors; the new
    /// weight is the sum of theirs.
    pub fn blowup_satellite(&mut self, p1: usize, p2: usize) -> Result<usize> {
        self.node(p1)?;
        self.node(p2)?;
        let p = self.meets.get(&pair(p1, p2)).cloned().ok_or(Error::NotAdjacent(p1, p2))?;
        Ok(self.blowup_at(&p))
    }

    pub(crate) fn mark_used(&mut self, divisor: usize, c: FieldElem) {
        self.used[divisor].push(c);
    }

    pub(crate) fn set_n(&mut self, id: usize, n: u64) {
        self.nodes[id].n = Some(n);
    }
}

/// `A_X(E) = 1 + ord_E(Jac)`, read off the chart of `E` and checked against `a(E)`.
pub fn chart_discrepancy(tree: &ResolutionTree, e: usize) -> Result<u64> {
    let node = tree.node(e)?;
    let c = &node.chart;
    let jac = c.x.derivative_x().mul(&c.y.derivative_y()).sub(&c.x.derivative_y().mul(&c.y.derivative_x()));
    let a = 1 + ord_u(&jac);
    if a != node.weight.a {
        return Err(Error::FareyMismatch(format!("E_{e}: chart gives A = {a}, Farey a = {}", node.weight.a)));
    }
    Ok(a)
}

/// `ord_E(m) = min(ord_E x, ord_E y)`, checked against `b(E)`.
pub fn pullback_m_order(tree: &ResolutionTree, e: usize) -> Result<u64> {
    let node = tree.node(e)?;
    let b = ord_u(&node.chart.x).min(ord_u(&node.chart.y));
    if b != node.weight.b {
        return Err(Error::FareyMismatch(format!("E_{e}: chart gives b = {b}, Farey b = {}", node.weight.b)));
    }
    Ok(b)
}

/// `ord_E(g)` for the pull-back of `g`.
pub fn divisor_order(tree: &ResolutionTree, e: usize, g: &BivarPoly) -> Result<u64> {
    Ok(ord_u(&tree.node(e)?.chart.pull_back(g)))
}

/// Divisors `E' >= e` in the dual graph rooted at `E_0`.
pub(crate) fn subtree(edges: &[(usize, usize)], count: usize, e: usize) -> BTreeSet<usize> {
    let mut adj = vec![Vec::new(); count];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut parent = vec![usize::MAX; count];
    let mut order = vec![0usize];
    parent[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let n = order[i];
        for &m in &adj[n] {
            if parent[m] == usize::MAX {
                parent[m] = n;
                order.push(m);
            }
        }
        i += 1;
    }
    order
        .into_iter()
        .filter(|&n| {
            let mut cur = n;
            loop {
                if cur == e {
                    return true;
                }
                if cur == 0 {
                    return false;
                }
                cur = parent[cur];
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn w(a: u64, b: u64) -> FareyWeight {
        FareyWeight { a, b }
    }

    #[test]
    fn free_examples() {
        assert_eq!(w(2, 1).free_child(), w(3, 1));
        assert_eq!(w(3, 1).free_child(), w(4, 1));
        assert_eq!(w(5, 2).free_child(), w(6, 2));
        let (mut t, e0) = ResolutionTree::with_root(Q);
        let e1 = t.blowup_free(e0).unwrap();
        let e2 = t.blowup_free(e1).unwrap();
        assert_eq!(t.node(e2).unwrap().weight, w(4, 1));
        assert_eq!(chart_discrepancy(&t, e2).unwrap(), 4);
    }

    #[test]
    fn satellite_examples() {
        assert_eq!(w(2, 1).satellite(w(3, 1)), w(5, 2));
        assert_eq!(w(2, 1).satellite(w(5, 2)), w(7, 3));
        assert_eq!(w(3, 1).satellite(w(5, 2)), w(8, 3));
        let (mut t, e0) = ResolutionTree::with_root(Q);
        let e1 = t.blowup_free(e0).unwrap();
        let e2 = t.blowup_satellite(e0, e1).unwrap();
        assert_eq!(t.node(e2).unwrap().weight, w(5, 2));
        assert!(!t.adjacent(e0, e1));
        assert_eq!(t.blowup_satellite(e0, e1), Err(Error::NotAdjacent(e0, e1)));
        let e3 = t.blowup_satellite(e0, e2).unwrap();
        let e4 = t.blowup_satellite(e1, e2).unwrap();
        assert_eq!(t.node(e3).unwrap().weight, w(7, 3));
        assert_eq!(t.node(e4).unwrap().weight, w(8, 3));
        for e in 0..t.len() {
            assert_eq!(chart_discrepancy(&t, e).unwrap(), t.node(e).unwrap().weight.a);
            assert_eq!(pullback_m_order(&t, e).unwrap(), t.node(e).unwrap().weight.b);
        }
    }

    #[test]
    fn first_divisor_orders() {
        let (t, e0) = ResolutionTree::with_root(Q);
        assert_eq!(chart_discrepancy(&t, e0).unwrap(), 2);
        assert_eq!(pullback_m_order(&t, e0).unwrap(), 1);
    }

    #[test]
    fn free_points_run_out_over_small_fields() {
        let (mut t, e0) = ResolutionTree::with_root(Field::Prime(2));
        t.blowup_free(e0).unwrap();
        t.blowup_free(e0).unwrap();
        assert_eq!(t.blowup_free(e0), Err(Error::PointUnavailable(e0)));
    }

    #[test]
    fn subtree_follows_dual_graph() {
        let (mut t, e0) = ResolutionTree::with_root(Q);
        let e1 = t.blowup_free(e0).unwrap();
        let e2 = t.blowup_satellite(e0, e1).unwrap();
        let s = subtree(&t.edges(), t.len(), e2);
        assert_eq!(s, BTreeSet::from([e1, e2]));
    }
}
