//! Valuations attached to exceptional divisors.

use std::collections::BTreeSet;

use super::{ord_u, subtree, FareyWeight, ResolutionTree};
use crate::arith::{ExtRat, Rat};
use crate::error::{Error, Result};
use crate::poly::BivarPoly;
use crate::skp::{monomial_product, value_relation, validate_skp, RawSkp, ValuationDescriptor};

const MAX_KEYS: usize = 64;

/// Smallest `b(E')` over divisors `E' >= e` in the dual graph rooted at
/// `E_0`, over all models reachable from `tree` by at most `depth` further
/// free or satellite blow-ups above `e`.
pub fn farey_multiplicity_probe(tree: &ResolutionTree, e: usize, depth: u32) -> Result<u64> {
    tree.node(e)?;
    let weights: Vec<FareyWeight> = tree.nodes().iter().map(|n| n.weight).collect();
    let edges = tree.edges();
    let above = subtree(&edges, weights.len(), e);
    let edges: BTreeSet<(usize, usize)> = edges.into_iter().filter(|(i, j)| above.contains(i) && above.contains(j)).collect();
    let mut state = Combinatorial { weights, above, edges };
    Ok(state.search(depth))
}

struct Combinatorial {
    weights: Vec<FareyWeight>,
    above: BTreeSet<usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl Combinatorial {
    fn current(&self) -> u64 {
        self.above.iter().map(|&i| self.weights[i].b).min().expect("contains the start divisor")
    }

    fn search(&mut self, depth: u32) -> u64 {
        let mut best = self.current();
        if depth == 0 || best == 1 {
            return best;
        }
        let id = self.weights.len();
        for d in self.above.clone() {
            self.weights.push(self.weights[d].free_child());
            self.above.insert(id);
            self.edges.insert((d, id));
            best = best.min(self.search(depth - 1));
            self.edges.remove(&(d, id));
            self.above.remove(&id);
            self.weights.pop();
        }
        for (d, f) in self.edges.clone() {
            self.weights.push(self.weights[d].satellite(self.weights[f]));
            self.above.insert(id);
            self.edges.remove(&(d, f));
            self.edges.insert((d, id));
            self.edges.insert((f, id));
            best = best.min(self.search(depth - 1));
            self.edges.remove(&(f, id));
            self.edges.remove(&(d, id));
            self.edges.insert((d, f));
            self.above.remove(&id);
            self.weights.pop();
        }
        best
    }
}

/// Normalized divisorial valuation `ord_E / b(E)` as key polynomials.
#[derive(Clone, Debug)]
pub struct DivisorValuation {
    pub descriptor: ValuationDescriptor,
    /// The key polynomials are in the coordinates `(y, x)`.
    pub swapped: bool,
}

/// Read the key polynomials of `ord_E` off the chart of `E`: starting from
/// `x, y`, extend by `U^n - theta * monomial` as long as the leading
/// coefficients along `E` of `U^n` and the monomial are proportional.
pub fn divisor_valuation(tree: &ResolutionTree, e: usize) -> Result<DivisorValuation> {
    let node = tree.node(e)?;
    let field = tree.field();
    let (mut cx, mut cy) = (node.chart.x.clone(), node.chart.y.clone());
    let swapped = ord_u(&cx) > ord_u(&cy);
    if swapped {
        std::mem::swap(&mut cx, &mut cy);
    }
    let b = ord_u(&cx).min(ord_u(&cy));
    let value = |pulled: &BivarPoly| Rat::new(ord_u(pulled) as i64, b as i64);

    let mut keys = vec![BivarPoly::x(field), BivarPoly::y(field)];
    let mut pulled = vec![cx.clone(), cy.clone()];
    let mut values = vec![value(&cx), value(&cy)];
    loop {
        if keys.len() > MAX_KEYS {
            return Err(Error::InternalMismatch(format!("E_{e}: key polynomials do not terminate")));
        }
        let j = keys.len() - 1;
        let (n, m) = value_relation(&values)?;
        if m[0] < 0 {
            return Err(Error::InternalMismatch(format!("E_{e}: value outside the semigroup")));
        }
        let m: Vec<u32> = m.iter().map(|&x| x as u32).collect();
        let power = pulled[j].pow(n);
        let mono = monomial_product(&pulled, &m);
        let ord = power.ord_x().expect("nonzero");
        let theta = power.x_slice(ord).div_exact(&mono.x_slice(ord)).and_then(|q| {
            let c = q.constant_term();
            (q.num_terms() == 1 && !c.is_zero()).then_some(c)
        });
        let Some(theta) = theta else { break };
        let next_pulled = power.sub(&mono.scale(&theta));
        let next = keys[j].pow(n).sub(&monomial_product(&keys, &m).scale(&theta));
        values.push(value(&next_pulled));
        pulled.push(next_pulled);
        keys.push(next);
    }
    let skp = validate_skp(&RawSkp::new(keys, values.into_iter().map(ExtRat::of).collect()))?;
    let descriptor = ValuationDescriptor::new(skp);
    let pulled_value = |g: &BivarPoly| ExtRat::of(value(&g.substitute(&cx, &cy)));
    let probes = (0..4u32).flat_map(|i| (0..4 - i).map(move |j| (i, j)));
    for (i, j) in probes {
        let g = BivarPoly::monomial(field.one(), i, j).add(&BivarPoly::monomial(field.one(), j + 1, i));
        if descriptor.skp.eval(&g) != pulled_value(&g) {
            return Err(Error::InternalMismatch(format!("E_{e}: key polynomials disagree with the chart on {g}")));
        }
    }
    Ok(DivisorValuation { descriptor, swapped })
}
