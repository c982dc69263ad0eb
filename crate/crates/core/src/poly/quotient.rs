//! Brute-force linear algebra oracle for `dim k[[x,y]]/(f, g)`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{BivarPoly, Exp};
use crate::arith::FieldElem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientDim {
    Finite(u64),
    /// `dim k[x,y]/(f, g, m^B)` had not stabilized for any `B <= bound`.
    ExceedsBound,
}

/// Dimension of `k[x,y]/(f, g) + m^B`, computed as the number of monomials of
/// degree below `b` minus the rank of the truncated multiples of `f, g`.
fn truncated_dim(f: &BivarPoly, g: &BivarPoly, b: u32) -> u64 {
    let n_monomials = (b as u64) * (b as u64 + 1) / 2;
    let mut pivots: HashMap<Exp, BTreeMap<Exp, FieldElem>> = HashMap::new();
    let mut rank = 0u64;
    for h in [f, g] {
        let Ok(oh) = h.ord_m() else { continue };
        if oh >= b {
            continue;
        }
        for d in 0..b - oh {
            for i in 0..=d {
                let mut row: BTreeMap<Exp, FieldElem> = BTreeMap::new();
                for (e, c) in h.terms() {
                    let ne = (e.0 + i, e.1 + d - i);
                    if ne.0 + ne.1 < b {
                        row.insert(ne, c.clone());
                    }
                }
                if reduce_insert(&mut pivots, row) {
                    rank += 1;
                }
            }
        }
    }
    n_monomials - rank
}

fn reduce_insert(pivots: &mut HashMap<Exp, BTreeMap<Exp, FieldElem>>, mut row: BTreeMap<Exp, FieldElem>) -> bool {
    loop {
        let Some((lead, c)) = row.iter().next_back().map(|(e, c)| (*e, c.clone())) else {
            return false;
        };
        match pivots.get(&lead) {
            Some(p) => {
                for (e, v) in p {
                    let nv = &row.get(e).cloned().unwrap_or_else(|| c.field().zero()) - &(&c * v);
                    if nv.is_zero() {
                        row.remove(e);
                    } else {
                        row.insert(*e, nv);
                    }
                }
            }
            None => {
                let inv = c.inv().expect("nonzero");
                let normalized = row.into_iter().map(|(e, v)| (e, &v * &inv)).collect();
                pivots.insert(lead, normalized);
                return true;
            }
        }
    }
}

/// `dim k[[x,y]]/(f, g)` by exact linear algebra on truncations, reporting
/// [`QuotientDim::ExceedsBound`] when the truncated dimensions have not
/// stabilized by `bound`.
pub fn quotient_dimension(f: &BivarPoly, g: &BivarPoly, bound: u32) -> QuotientDim {
    let mut prev = truncated_dim(f, g, 1);
    for b in 2..=bound {
        let cur = truncated_dim(f, g, b);
        if cur == prev {
            return QuotientDim::Finite(cur);
        }
        prev = cur;
    }
    QuotientDim::ExceedsBound
}
