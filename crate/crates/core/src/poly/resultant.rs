//! Sylvester resultants in `y` and the intersection multiplicity oracle.

use super::{BivarPoly, UPoly};
use crate::arith::ExtRat;
use crate::error::{Error, Result};

/// Determinant of the Sylvester matrix of two polynomials in `y` whose
/// coefficients (lowest degree first) are given as bivariate polynomials.
///
/// The coefficient ring is `k[x, t]` for an auxiliary second variable `t`,
/// which lets callers take resultants with a symbolic parameter. With the
/// rows of `f` first, `Res(f, g) = lc(f)^deg(g) * prod g(roots of f)`.
pub fn sylvester_det(f: &[BivarPoly], g: &[BivarPoly]) -> BivarPoly {
    let field = f.first().or(g.first()).expect("nonempty coefficient list").field();
    let (m, n) = (f.len() - 1, g.len() - 1);
    if m == 0 {
        return f[0].pow(n as u32);
    }
    if n == 0 {
        return g[0].pow(m as u32);
    }
    let size = m + n;
    let mut mat = vec![vec![BivarPoly::zero(field); size]; size];
    for r in 0..n {
        for k in 0..=m {
            mat[r][r + k] = f[m - k].clone();
        }
    }
    for r in 0..m {
        for k in 0..=n {
            mat[n + r][r + k] = g[n - k].clone();
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut a: Vec<Vec<BivarPoly>>) -> BivarPoly {
    let n = a.len();
    let field = a[0][0].field();
    let mut negate = false;
    let mut prev = BivarPoly::one(field);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BivarPoly::zero(field),
            }
        }
        if k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = BivarPoly::zero(field);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// `Res_y(f, g)` as a polynomial in `x`. Uses `Res_y(f, g) = g^deg_y(f)`
/// when `g` is free of `y`.
pub fn resultant_y(f: &BivarPoly, g: &BivarPoly) -> UPoly {
    if g.is_zero() || f.is_zero() {
        return UPoly::zero(f.field());
    }
    sylvester_det(&f.y_coeffs(), &g.y_coeffs()).to_upoly_x()
}

/// Checks that `f` is a Weierstrass polynomial in `y` up to a constant
/// factor and returns it made monic.
pub fn weierstrass_monic(f: &BivarPoly) -> Result<BivarPoly> {
    let d = match f.deg_y() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::NotWeierstrass),
    };
    let f = f.monic_y().map_err(|_| Error::NotWeierstrass)?;
    let at0 = f.at_x_zero();
    if at0.num_terms() != 1 || at0.coeff(0, d).is_zero() {
        return Err(Error::NotWeierstrass);
    }
    Ok(f)
}

/// Intersection multiplicity `dim k[[x,y]]/(f, g)` for a Weierstrass
/// polynomial `f`: the `x`-order of `Res_y(f, g)`, infinite exactly when
/// the resultant vanishes.
pub fn intersection_multiplicity(f: &BivarPoly, g: &BivarPoly) -> Result<ExtRat> {
    let f = weierstrass_monic(f)?;
    let r = resultant_y(&f, g);
    Ok(match r.ord() {
        Some(k) => ExtRat::int(k as u64),
        None => ExtRat::Inf,
    })
}
