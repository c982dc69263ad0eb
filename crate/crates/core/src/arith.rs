//! Exact scalars: rationals, the extended value space `[0, inf]`, and the
//! coefficient fields Q and F_p.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn from_int(n: i64) -> Rat {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Rat {
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::ZeroReciprocal);
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// Integer value if the rational is integral and fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn pow(&self, e: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Largest `g` with `a, b` both in `g * Z`. `gcd(0, b) = |b|`.
    pub fn gcd(a: &Rat, b: &Rat) -> Rat {
        // a = p/q, b = r/s: gcd = gcd(p*s, r*q) / (q*s)
        let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
        Rat::from_big(num, a.denom() * b.denom())
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let bad = || Error::Parse { pos: 0, msg: format!("invalid rational {s:?}") };
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Rat::from_big(n, d))
            }
            None => Ok(Rat::from_bigint(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat(self.0.$m(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

/// A value in `[0, inf]`: a nonnegative rational or infinity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Finite(Rat),
    Inf,
}

impl ExtRat {
    pub fn new(r: Rat) -> Result<ExtRat> {
        if r.is_negative() {
            return Err(Error::NegativeValue(r.to_string()));
        }
        Ok(ExtRat::Finite(r))
    }

    /// Panics on negative input; for literals known to be nonnegative.
    pub fn of(r: Rat) -> ExtRat {
        ExtRat::new(r).expect("nonnegative value")
    }

    pub fn int(n: u64) -> ExtRat {
        ExtRat::Finite(Rat::from_bigint(n.into()))
    }

    pub fn zero() -> ExtRat {
        ExtRat::Finite(Rat::zero())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtRat::Inf)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Finite(r) if r.is_zero())
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::Inf => None,
        }
    }

    pub fn add(&self, other: &ExtRat) -> ExtRat {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a + b),
            _ => ExtRat::Inf,
        }
    }

    pub fn min(&self, other: &ExtRat) -> ExtRat {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `n * self` with the convention `0 * inf = 0`.
    pub fn scale(&self, n: &Rat) -> ExtRat {
        assert!(!n.is_negative(), "negative scale");
        match self {
            ExtRat::Finite(a) => ExtRat::Finite(a * n),
            ExtRat::Inf if n.is_zero() => ExtRat::zero(),
            ExtRat::Inf => ExtRat::Inf,
        }
    }

    pub fn reciprocal(&self) -> Result<ExtRat> {
        match self {
            ExtRat::Inf => Ok(ExtRat::zero()),
            ExtRat::Finite(r) => Ok(ExtRat::Finite(r.recip()?)),
        }
    }
}

pub fn ext_add(a: &ExtRat, b: &ExtRat) -> ExtRat {
    a.add(b)
}

pub fn ext_reciprocal(a: &ExtRat) -> Result<ExtRat> {
    a.reciprocal()
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Inf, ExtRat::Inf) => Ordering::Equal,
            (ExtRat::Inf, _) => Ordering::Greater,
            (_, ExtRat::Inf) => Ordering::Less,
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
        }
    }
}

impl From<Rat> for ExtRat {
    fn from(r: Rat) -> ExtRat {
        ExtRat::of(r)
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(r) => write!(f, "{r}"),
            ExtRat::Inf => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtRat {
    type Err = Error;
    fn from_str(s: &str) -> Result<ExtRat> {
        if s.trim().eq_ignore_ascii_case("inf") {
            Ok(ExtRat::Inf)
        } else {
            ExtRat::new(s.parse()?)
        }
    }
}

impl Serialize for ExtRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<ExtRat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Coefficient field: the rationals or a prime field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> FieldElem {
        self.int(0)
    }

    pub fn one(self) -> FieldElem {
        self.int(1)
    }

    pub fn int(self, n: i64) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Q(Rat::from_int(n)),
            Field::Prime(p) => FieldElem::Fp(n.rem_euclid(p as i64) as u32, p),
        }
    }

    pub fn bigint(self, n: &BigInt) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Q(Rat::from_bigint(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldElem::Fp(r.to_u32().expect("reduced residue"), p)
            }
        }
    }

    /// Image of a rational; fails in F_p when p divides the denominator.
    pub fn rat(self, r: &Rat) -> Result<FieldElem> {
        match self {
            Field::Rational => Ok(FieldElem::Q(r.clone())),
            Field::Prime(_) => {
                let den = self.bigint(r.denom());
                let inv = den.inv().ok_or_else(|| Error::NotInField(r.to_string()))?;
                Ok(&self.bigint(r.numer()) * &inv)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Field> {
        let t = s.trim().to_ascii_lowercase();
        if t == "q" || t == "qq" || t == "rational" {
            return Ok(Field::Rational);
        }
        let p = t
            .strip_prefix("fp:")
            .or_else(|| t.strip_prefix("f"))
            .and_then(|d| d.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown field {s:?}") })?;
        Field::prime(p)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of Q or F_p. F_p elements carry their modulus.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElem {
    Q(Rat),
    Fp(u32, u32),
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Q(_) => Field::Rational,
            FieldElem::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_zero(),
            FieldElem::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(r) => *r == Rat::one(),
            FieldElem::Fp(v, _) => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        match self {
            FieldElem::Q(r) => Some(FieldElem::Q(r.recip().ok()?)),
            FieldElem::Fp(v, p) => Some(FieldElem::Fp(pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32, *p)),
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            FieldElem::Q(r) => Some(r),
            FieldElem::Fp(..) => None,
        }
    }

    /// True when the printed form needs a leading minus sign.
    pub fn is_negative_repr(&self) -> bool {
        matches!(self, FieldElem::Q(r) if r.is_negative())
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(r) => write!(f, "{r}"),
            FieldElem::Fp(v, _) => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(r) => write!(f, "{r}"),
            FieldElem::Fp(v, p) => write!(f, "{v} (mod {p})"),
        }
    }
}

fn fp_pair(a: &FieldElem, b: &FieldElem) -> (u64, u64, u32) {
    match (a, b) {
        (FieldElem::Fp(x, p), FieldElem::Fp(y, q)) if p == q => (*x as u64, *y as u64, *p),
        _ => panic!("field mismatch: {a:?} vs {b:?}"),
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        if let (FieldElem::Q(a), FieldElem::Q(b)) = (self, rhs) {
            return FieldElem::Q(a + b);
        }
        let (a, b, p) = fp_pair(self, rhs);
        FieldElem::Fp(((a + b) % p as u64) as u32, p)
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        if let (FieldElem::Q(a), FieldElem::Q(b)) = (self, rhs) {
            return FieldElem::Q(a - b);
        }
        let (a, b, p) = fp_pair(self, rhs);
        FieldElem::Fp(((a + p as u64 - b) % p as u64) as u32, p)
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        if let (FieldElem::Q(a), FieldElem::Q(b)) = (self, rhs) {
            return FieldElem::Q(a * b);
        }
        let (a, b, p) = fp_pair(self, rhs);
        FieldElem::Fp((a * b % p as u64) as u32, p)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &FieldElem {
    type Output = FieldElem;
    fn div(self, rhs: &FieldElem) -> FieldElem {
        self * &rhs.inv().expect("division by zero field element")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Fp(v, p) => FieldElem::Fp((*p - *v) % *p, *p),
        }
    }
}

macro_rules! fe_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
    };
}
fe_owned!(Add, add);
fe_owned!(Sub, sub);
fe_owned!(Mul, mul);
fe_owned!(Div, div);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}
