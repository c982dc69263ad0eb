//! Univariate polynomials over the coefficient field and root finding.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{Field, FieldElem, Rat};
use crate::error::{Error, Result};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl UPoly {
    pub fn new(field: Field, mut coeffs: Vec<FieldElem>) -> UPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { field, coeffs }
    }

    pub fn zero(field: Field) -> UPoly {
        UPoly { field, coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElem) -> UPoly {
        UPoly::new(c.field(), vec![c])
    }

    /// `t - c`.
    pub fn linear(c: &FieldElem) -> UPoly {
        let f = c.field();
        UPoly::new(f, vec![-c, f.one()])
    }

    pub fn monomial(c: FieldElem, k: usize) -> UPoly {
        let f = c.field();
        let mut v = vec![f.zero(); k];
        v.push(c);
        UPoly::new(f, v)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> FieldElem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Index of the lowest nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new(self.field, (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new(self.field, (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn scale(&self, c: &FieldElem) -> UPoly {
        UPoly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(self.field);
        }
        let mut v = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        UPoly::new(self.field, v)
    }

    pub fn pow(&self, mut e: u64) -> UPoly {
        let mut base = self.clone();
        let mut acc = UPoly::constant(self.field.one());
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

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.deg().expect("division by zero polynomial");
        let inv = d.lc().inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * dc);
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (UPoly::new(self.field, q), UPoly::new(self.field, rem))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> UPoly {
        match self.lc().inv() {
            Some(i) => self.scale(&i),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, t: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.field,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &self.field.int(i as i64)).collect(),
        )
    }

    /// `self^e mod m`.
    fn powmod(&self, mut e: u64, m: &UPoly) -> UPoly {
        let mut base = self.rem(m);
        let mut acc = UPoly::constant(self.field.one()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*t"),
                _ => format!("({c})*t^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// If `q = c (t - a)^m` with `deg q = m`, returns `a`.
///
/// Works in every characteristic: when `p | m` the polynomial must be a
/// polynomial in `t^(p^e)` and the root is recovered through Frobenius,
/// which is the identity on F_p.
pub fn linear_power_root(q: &UPoly, m: usize) -> Option<FieldElem> {
    if q.deg() != Some(m) || m == 0 {
        return None;
    }
    let field = q.field();
    let p = field.characteristic() as usize;
    let mut stride = 1usize;
    let mut reduced_m = m;
    if p > 0 {
        while reduced_m.is_multiple_of(p) {
            reduced_m /= p;
            stride *= p;
        }
    }
    // q(t) = c (t^stride - a)^reduced_m
    if q.coeffs().iter().enumerate().any(|(i, c)| i % stride != 0 && !c.is_zero()) {
        return None;
    }
    let c = q.lc();
    let next = q.coeff(stride * (reduced_m - 1));
    let a = -&(&next / &(&c * &field.int(reduced_m as i64)));
    let candidate = UPoly::linear(&a).pow(m as u64).scale(&c);
    (candidate == *q).then_some(a)
}

/// Distinct roots of `q` in the base field, each with its multiplicity.
pub fn roots_in_field(q: &UPoly) -> Result<Vec<(FieldElem, u32)>> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let roots = match q.field() {
        Field::Prime(p) => fp_roots(q, p),
        Field::Rational => rational_roots(q)?,
    };
    let mut out = Vec::new();
    for r in roots {
        let lin = UPoly::linear(&r);
        let mut rest = q.clone();
        let mut mult = 0;
        loop {
            let (quo, rem) = rest.divrem(&lin);
            if !rem.is_zero() {
                break;
            }
            rest = quo;
            mult += 1;
        }
        out.push((r, mult));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn fp_roots(q: &UPoly, p: u32) -> Vec<FieldElem> {
    let field = q.field();
    if p <= 1 << 16 {
        return (0..p as i64).map(|v| field.int(v)).filter(|v| q.eval(v).is_zero()).collect();
    }
    // product of the distinct linear factors: gcd(q, t^p - t)
    let t = UPoly::monomial(field.one(), 1);
    let tp = t.powmod(p as u64, q);
    let split = q.gcd(&tp.sub(&t));
    let mut out = Vec::new();
    split_linear(&split, p, &mut out);
    out
}

fn split_linear(g: &UPoly, p: u32, out: &mut Vec<FieldElem>) {
    let field = g.field();
    match g.deg() {
        None | Some(0) => {}
        Some(1) => {
            let g = g.monic();
            out.push(-&g.coeff(0));
        }
        Some(_) => {
            // deterministic equal-degree splitting with shifts t + a
            for a in 0..p as i64 {
                let shifted = UPoly::new(field, vec![field.int(a), field.one()]);
                let h = shifted.powmod((p as u64 - 1) / 2, g).sub(&UPoly::constant(field.one()));
                let d = g.gcd(&h);
                if let Some(dd) = d.deg() {
                    if dd > 0 && Some(dd) < g.deg() {
                        split_linear(&d, p, out);
                        split_linear(&g.divrem(&d).0, p, out);
                        return;
                    }
                }
            }
        }
    }
}

fn rational_roots(q: &UPoly) -> Result<Vec<FieldElem>> {
    // integer coefficients
    let mut lcm = BigInt::from(1);
    for c in q.coeffs() {
        let r = c.as_rat().expect("rational coefficient");
        lcm = lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = q
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.as_rat().expect("rational coefficient");
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    let mut out = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
    if low > 0 {
        out.push(Field::Rational.zero());
    }
    let a0 = ints[low].abs();
    let an = ints.last().expect("nonzero").abs();
    let (a0, an) = match (a0.to_u64(), an.to_u64()) {
        (Some(a), Some(b)) => (a, b),
        // coefficients beyond 64 bits are outside the supported search range
        _ => return Err(Error::FieldRootNeeded),
    };
    let mut seen = std::collections::BTreeSet::new();
    for num in divisors(a0) {
        for den in divisors(an) {
            for sign in [1i64, -1] {
                let r = Rat::from_big(BigInt::from(num) * sign, BigInt::from(den));
                if seen.insert(r.clone()) {
                    let v = FieldElem::Q(r);
                    if q.eval(&v).is_zero() {
                        out.push(v);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}
