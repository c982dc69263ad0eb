//! Exact bivariate polynomials over Q or F_p.

mod coords;
mod parse;
mod quotient;
mod resultant;
mod univariate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{ExtRat, Field, FieldElem, Rat};
use crate::error::{Error, Result};

pub use coords::{normalize_coordinates, CoordinateChange};
pub use parse::parse_poly;
pub use quotient::{quotient_dimension, QuotientDim};
pub use resultant::{intersection_multiplicity, resultant_y, sylvester_det, weierstrass_monic};
pub use univariate::{linear_power_root, roots_in_field, UPoly};

/// Exponent pair `(i, j)` of the monomial `x^i y^j`.
pub type Exp = (u32, u32);

/// Sparse polynomial in `x, y`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BivarPoly {
    field: Field,
    terms: BTreeMap<Exp, FieldElem>,
}

impl BivarPoly {
    pub fn zero(field: Field) -> BivarPoly {
        BivarPoly { field, terms: BTreeMap::new() }
    }

    pub fn constant(c: FieldElem) -> BivarPoly {
        BivarPoly::monomial(c, 0, 0)
    }

    pub fn one(field: Field) -> BivarPoly {
        BivarPoly::constant(field.one())
    }

    pub fn monomial(c: FieldElem, i: u32, j: u32) -> BivarPoly {
        let mut p = BivarPoly::zero(c.field());
        p.add_term((i, j), c);
        p
    }

    pub fn x(field: Field) -> BivarPoly {
        BivarPoly::monomial(field.one(), 1, 0)
    }

    pub fn y(field: Field) -> BivarPoly {
        BivarPoly::monomial(field.one(), 0, 1)
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (Exp, FieldElem)>) -> BivarPoly {
        let mut p = BivarPoly::zero(field);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_ints(field: Field, terms: &[(i64, u32, u32)]) -> BivarPoly {
        BivarPoly::from_terms(field, terms.iter().map(|&(c, i, j)| ((i, j), field.int(c))))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &FieldElem)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = Exp> + '_ {
        self.terms.keys().copied()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> FieldElem {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, e: Exp, c: FieldElem) {
        assert_eq!(c.field(), self.field, "field mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c);
        }
        out
    }

    pub fn neg(&self) -> BivarPoly {
        self.scale(&-&self.field.one())
    }

    pub fn scale(&self, c: &FieldElem) -> BivarPoly {
        if c.is_zero() {
            return BivarPoly::zero(self.field);
        }
        BivarPoly { field: self.field, terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn mul(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero(self.field);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term((ea.0 + eb.0, ea.1 + eb.1), ca * cb);
            }
        }
        out
    }

    /// Multiply by the monomial `x^i y^j`.
    pub fn shift(&self, i: u32, j: u32) -> BivarPoly {
        BivarPoly { field: self.field, terms: self.terms.iter().map(|(e, c)| ((e.0 + i, e.1 + j), c.clone())).collect() }
    }

    pub fn pow(&self, mut e: u32) -> BivarPoly {
        let mut base = self.clone();
        let mut acc = BivarPoly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.1).max()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0 + e.1).max()
    }

    /// Minimal `x`-exponent over the support.
    pub fn ord_x(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).min()
    }

    /// Minimal `y`-exponent over the support.
    pub fn ord_y(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.1).min()
    }

    /// m-adic order: minimal total degree over the support.
    pub fn ord_m(&self) -> Result<u32> {
        self.terms.keys().map(|e| e.0 + e.1).min().ok_or(Error::ZeroPolynomial)
    }

    /// Homogeneous part of lowest degree.
    pub fn tangent_cone(&self) -> Result<BivarPoly> {
        let m = self.ord_m()?;
        Ok(self.homogeneous_part(m))
    }

    pub fn homogeneous_part(&self, d: u32) -> BivarPoly {
        BivarPoly {
            field: self.field,
            terms: self.terms.iter().filter(|(e, _)| e.0 + e.1 == d).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(0, 0)
    }

    /// Coefficients of `y^0, y^1, ...` as polynomials in `x` alone.
    pub fn y_coeffs(&self) -> Vec<BivarPoly> {
        let n = match self.deg_y() {
            Some(d) => d as usize + 1,
            None => return Vec::new(),
        };
        let mut out = vec![BivarPoly::zero(self.field); n];
        for (e, c) in &self.terms {
            out[e.1 as usize].add_term((e.0, 0), c.clone());
        }
        out
    }

    /// Inverse of [`y_coeffs`](Self::y_coeffs).
    pub fn from_y_coeffs(field: Field, coeffs: &[BivarPoly]) -> BivarPoly {
        let mut out = BivarPoly::zero(field);
        for (j, c) in coeffs.iter().enumerate() {
            for (e, v) in &c.terms {
                out.add_term((e.0, e.1 + j as u32), v.clone());
            }
        }
        out
    }

    pub fn leading_y_coeff(&self) -> Option<BivarPoly> {
        self.y_coeffs().pop()
    }

    /// The constant leading coefficient in `y`, if the leading coefficient
    /// is a nonzero constant.
    pub fn constant_lc_y(&self) -> Option<FieldElem> {
        let lc = self.leading_y_coeff()?;
        if lc.num_terms() == 1 && lc.terms.contains_key(&(0, 0)) {
            Some(lc.coeff(0, 0))
        } else {
            None
        }
    }

    pub fn is_monic_y(&self) -> bool {
        self.constant_lc_y().is_some_and(|c| c.is_one())
    }

    /// Make the polynomial monic in `y` when its `y`-leading coefficient is a constant.
    pub fn monic_y(&self) -> Result<BivarPoly> {
        let c = self.constant_lc_y().ok_or(Error::NotMonic)?;
        Ok(self.scale(&c.inv().expect("nonzero leading coefficient")))
    }

    /// `f(0, y)`.
    pub fn at_x_zero(&self) -> BivarPoly {
        BivarPoly {
            field: self.field,
            terms: self.terms.iter().filter(|(e, _)| e.0 == 0).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Coefficient polynomial (in `y`, stored with `x`-exponent 0) of `x^i`.
    pub fn x_slice(&self, i: u32) -> BivarPoly {
        BivarPoly {
            field: self.field,
            terms: self.terms.iter().filter(|(e, _)| e.0 == i).map(|(e, c)| ((0, e.1), c.clone())).collect(),
        }
    }

    pub fn swap_xy(&self) -> BivarPoly {
        BivarPoly { field: self.field, terms: self.terms.iter().map(|(e, c)| ((e.1, e.0), c.clone())).collect() }
    }

    pub fn derivative_x(&self) -> BivarPoly {
        let mut out = BivarPoly::zero(self.field);
        for (e, c) in &self.terms {
            if e.0 > 0 {
                out.add_term((e.0 - 1, e.1), c * &self.field.int(e.0 as i64));
            }
        }
        out
    }

    pub fn derivative_y(&self) -> BivarPoly {
        self.swap_xy().derivative_x().swap_xy()
    }

    /// Composition `f(X(x, y), Y(x, y))`.
    pub fn substitute(&self, xs: &BivarPoly, ys: &BivarPoly) -> BivarPoly {
        let mut xpow: Vec<BivarPoly> = vec![BivarPoly::one(self.field)];
        let mut ypow: Vec<BivarPoly> = vec![BivarPoly::one(self.field)];
        let mut out = BivarPoly::zero(self.field);
        for (e, c) in &self.terms {
            while xpow.len() <= e.0 as usize {
                let next = xpow.last().unwrap().mul(xs);
                xpow.push(next);
            }
            while ypow.len() <= e.1 as usize {
                let next = ypow.last().unwrap().mul(ys);
                ypow.push(next);
            }
            let t = xpow[e.0 as usize].mul(&ypow[e.1 as usize]).scale(c);
            out = out.add(&t);
        }
        out
    }

    /// Divide out `x^i y^j`; the monomial must divide every term.
    pub fn unshift(&self, i: u32, j: u32) -> BivarPoly {
        BivarPoly {
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    assert!(e.0 >= i && e.1 >= j, "monomial does not divide");
                    ((e.0 - i, e.1 - j), c.clone())
                })
                .collect(),
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &BivarPoly) -> Option<BivarPoly> {
        // lex order with y major: leading term of d must divide leading term of the remainder
        let key = |e: &Exp| (e.1, e.0);
        let (dl, dc) = d.terms.iter().max_by_key(|(e, _)| key(e))?;
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut q = BivarPoly::zero(self.field);
        while let Some((rl, rc)) = rem.terms.iter().max_by_key(|(e, _)| key(e)).map(|(e, c)| (*e, c.clone())) {
            if rl.0 < dl.0 || rl.1 < dl.1 {
                return None;
            }
            let (i, j) = (rl.0 - dl.0, rl.1 - dl.1);
            let c = &rc * &dc_inv;
            rem = rem.sub(&d.shift(i, j).scale(&c));
            q.add_term((i, j), c);
        }
        Some(q)
    }

    /// Evaluate at a point.
    pub fn eval(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            acc = &acc + &(&(c * &x.pow(e.0 as u64)) * &y.pow(e.1 as u64));
        }
        acc
    }

    /// As a univariate polynomial, when only `x` occurs.
    pub fn to_upoly_x(&self) -> UPoly {
        let mut coeffs = vec![self.field.zero(); self.deg_x().map_or(0, |d| d as usize + 1)];
        for (e, c) in &self.terms {
            assert_eq!(e.1, 0, "polynomial involves y");
            coeffs[e.0 as usize] = c.clone();
        }
        UPoly::new(self.field, coeffs)
    }

    /// As a univariate polynomial, when only `y` occurs.
    pub fn to_upoly_y(&self) -> UPoly {
        self.swap_xy().to_upoly_x()
    }

    /// Reinterpret over another field (coefficients reduced through their
    /// rational values). Only meaningful from Q.
    pub fn reduce_to(&self, field: Field) -> Result<BivarPoly> {
        let mut out = BivarPoly::zero(field);
        for (e, c) in &self.terms {
            let v = match c {
                FieldElem::Q(r) => field.rat(r)?,
                FieldElem::Fp(..) if c.field() == field => c.clone(),
                FieldElem::Fp(..) => return Err(Error::FieldMismatch),
            };
            out.add_term(*e, v);
        }
        Ok(out)
    }
}

pub fn ord_m(f: &BivarPoly) -> Result<u32> {
    f.ord_m()
}

pub fn tangent_cone(f: &BivarPoly) -> Result<BivarPoly> {
    f.tangent_cone()
}

/// Weight vector of a monomial valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialWeights {
    pub w_x: ExtRat,
    pub w_y: ExtRat,
}

impl MonomialWeights {
    pub fn new(w_x: ExtRat, w_y: ExtRat) -> MonomialWeights {
        MonomialWeights { w_x, w_y }
    }

    pub fn finite(w_x: Rat, w_y: Rat) -> MonomialWeights {
        MonomialWeights { w_x: ExtRat::of(w_x), w_y: ExtRat::of(w_y) }
    }

    pub fn is_centered(&self) -> bool {
        let pos = |w: &ExtRat| matches!(w, ExtRat::Finite(r) if r.is_positive());
        pos(&self.w_x) && pos(&self.w_y)
    }
}

/// `min { w_x i + w_y j }` over the support of `f`.
pub fn monomial_valuation(w: &MonomialWeights, f: &BivarPoly) -> Result<ExtRat> {
    f.support()
        .map(|(i, j)| w.w_x.scale(&Rat::from_int(i as i64)).add(&w.w_y.scale(&Rat::from_int(j as i64))))
        .min()
        .ok_or(Error::ZeroPolynomial)
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // descending y-degree, then descending x-degree
        let mut first = true;
        let mut ordered: Vec<(&Exp, &FieldElem)> = self.terms.iter().collect();
        ordered.sort_by_key(|t| std::cmp::Reverse((t.0 .1, t.0 .0)));
        for (e, c) in ordered {
            let neg = c.is_negative_repr();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            let is_const = e.0 == 0 && e.1 == 0;
            if !mag.is_one() || is_const {
                parts.push(mag.to_string());
            }
            for (var, k) in [("x", e.0), ("y", e.1)] {
                match k {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    _ => parts.push(format!("{var}^{k}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self, self.field)
    }
}

impl Serialize for BivarPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Polynomials deserialize over Q; callers reduce with [`BivarPoly::reduce_to`].
impl<'de> Deserialize<'de> for BivarPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<BivarPoly, D::Error> {
        let s = String::deserialize(d)?;
        parse_poly(&s, Field::Rational).map_err(serde::de::Error::custom)
    }
}
