//! Embedded resolution of a plane curve germ.

use serde::Serialize;

use super::{chart_discrepancy, ord_u, LocalChart, ResolutionTree};
use crate::arith::{Field, Rat};
use crate::error::{Error, Result};
use crate::poly::{resultant_y, roots_in_field, BivarPoly};

pub const DEFAULT_MAX_BLOWUPS: usize = 64;

struct Active {
    chart: LocalChart,
    /// Local equation of the strict transform.
    h: BivarPoly,
}

/// The total transform is a normal crossing divisor at this point.
fn is_snc(pt: &Active) -> Result<bool> {
    if !pt.h.constant_term().is_zero() {
        return Ok(true);
    }
    if pt.h.ord_m()? > 1 {
        return Ok(false);
    }
    Ok(match (pt.chart.div_u, pt.chart.div_v) {
        (None, None) => true,
        (Some(_), Some(_)) => false,
        (Some(_), None) => !pt.h.coeff(0, 1).is_zero(),
        (None, Some(_)) => !pt.h.coeff(1, 0).is_zero(),
    })
}

fn has_repeated_factor(f: &BivarPoly) -> bool {
    let test = |g: &BivarPoly| {
        let d = g.derivative_y();
        g.deg_y().unwrap_or(0) >= 1 && !d.is_zero() && resultant_y(g, &d).is_zero()
    };
    test(f) || test(&f.swap_xy())
}

/// Resolve `f` at the origin with the default blow-up budget.
pub fn resolve_curve(f: &BivarPoly) -> Result<ResolutionTree> {
    resolve_curve_with(f, DEFAULT_MAX_BLOWUPS)
}

/// Blow up points until the total transform of `f` has normal crossings,
/// recording `N_E = ord_E(f)` on each divisor.
pub fn resolve_curve_with(f: &BivarPoly, max_blowups: usize) -> Result<ResolutionTree> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.constant_term().is_zero() {
        return Err(Error::NotCentered);
    }
    let field = f.field();
    if field == Field::Rational && has_repeated_factor(f) {
        return Err(Error::NonSquareFree);
    }
    let mut tree = ResolutionTree::new(field);
    let mut stack = vec![Active { chart: LocalChart::origin(field), h: f.clone() }];
    while let Some(pt) = stack.pop() {
        if is_snc(&pt)? {
            continue;
        }
        if tree.len() >= max_blowups {
            return Err(if has_repeated_factor(f) { Error::NonSquareFree } else { Error::TooManyBlowups(max_blowups) });
        }
        let mult = pt.h.ord_m()?;
        let id = tree.blowup_at(&pt.chart);
        let n: u64 = pt.chart.divisors().iter().map(|&d| tree.nodes[d].n.unwrap_or(0)).sum::<u64>() + u64::from(mult);
        let direct = ord_u(&tree.nodes[id].chart.pull_back(f));
        if direct != n {
            return Err(Error::InternalMismatch(format!("E_{id}: N = {n} by accumulation, {direct} by substitution")));
        }
        tree.set_n(id, n);

        let (u, v) = (BivarPoly::x(field), BivarPoly::y(field));
        let ha = pt.h.substitute(&u, &u.mul(&v)).unshift(mult, 0);
        let on_e = ha.at_x_zero().to_upoly_y();
        let roots = roots_in_field(&on_e)?;
        let deg = on_e.deg().unwrap_or(0);
        if roots.iter().map(|r| r.1 as usize).sum::<usize>() < deg {
            return Err(Error::FieldRootNeeded);
        }
        for (c, _) in roots {
            let chart = pt.chart.chart_a(id, &c);
            let h = ha.substitute(&u, &v.add(&BivarPoly::constant(c.clone())));
            tree.mark_used(id, c);
            stack.push(Active { chart, h });
        }
        if deg < mult as usize {
            let h = pt.h.substitute(&u.mul(&v), &v).unshift(0, mult);
            stack.push(Active { chart: pt.chart.chart_b(id), h });
        }
    }
    Ok(tree)
}

/// Threshold read off a resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionLct {
    /// `min A(E)/N(E)` over exceptional divisors, if there are any.
    pub exceptional: Option<Rat>,
    /// The divisor attaining it.
    pub argmin: Option<usize>,
    /// The minimum including the strict transform, which contributes 1.
    pub capped: Rat,
}

pub fn resolution_lct(tree: &ResolutionTree) -> Result<ResolutionLct> {
    let mut best: Option<(Rat, usize)> = None;
    for node in tree.nodes() {
        let a = chart_discrepancy(tree, node.id)?;
        let n = node.n.ok_or_else(|| Error::InternalMismatch(format!("E_{} has no curve order", node.id)))?;
        let r = Rat::new(a as i64, n as i64);
        if best.as_ref().is_none_or(|b| r < b.0) {
            best = Some((r, node.id));
        }
    }
    let capped = match &best {
        Some((r, _)) if *r < Rat::one() => r.clone(),
        _ => Rat::one(),
    };
    Ok(ResolutionLct { exceptional: best.as_ref().map(|b| b.0.clone()), argmin: best.map(|b| b.1), capped })
}
