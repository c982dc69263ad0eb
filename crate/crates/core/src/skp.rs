//! Sequences of key polynomials: validation, evaluation of the valuation they
//! define, and extraction of the sequence attached to an irreducible curve.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{ExtRat, Field, FieldElem, Rat};
use crate::error::{Error, Result};
use crate::poly::{
    intersection_multiplicity, linear_power_root, monomial_valuation, normalize_coordinates, parse_poly,
    sylvester_det, weierstrass_monic, BivarPoly, CoordinateChange, MonomialWeights,
};

/// Upper bound on the length of an extracted sequence.
const MAX_STEPS: usize = 256;

/// Data of the step `U_{j+1} = U_j^n - theta * U_0^m_0 ... U_{j-1}^m_{j-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub n: u32,
    pub m: Vec<u32>,
    pub theta: FieldElem,
}

/// A validated sequence of key polynomials `[(U_0..U_k); (b_0..b_k)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skp {
    keys: Vec<BivarPoly>,
    values: Vec<ExtRat>,
    steps: Vec<Step>,
    degs: Vec<u32>,
}

/// Unchecked key polynomial data, optionally with claimed step data that
/// [`validate_skp`] compares against the recomputed values.
#[derive(Clone, Debug)]
pub struct RawSkp {
    pub keys: Vec<BivarPoly>,
    pub values: Vec<ExtRat>,
    pub n: Option<Vec<u32>>,
    pub m: Option<Vec<Vec<u32>>>,
    pub theta: Option<Vec<FieldElem>>,
}

impl RawSkp {
    pub fn new(keys: Vec<BivarPoly>, values: Vec<ExtRat>) -> RawSkp {
        RawSkp { keys, values, n: None, m: None, theta: None }
    }
}

/// JSON shape of an [`Skp`]; polynomials and field elements as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkpRecord {
    pub keys: Vec<String>,
    pub values: Vec<ExtRat>,
    #[serde(default)]
    pub n: Vec<u32>,
    #[serde(default)]
    pub m: Vec<Vec<u32>>,
    #[serde(default)]
    pub theta: Vec<String>,
}

impl SkpRecord {
    pub fn to_raw(&self, field: Field) -> Result<RawSkp> {
        let keys = self.keys.iter().map(|s| parse_poly(s, field)).collect::<Result<Vec<_>>>()?;
        let mut raw = RawSkp::new(keys, self.values.clone());
        if !self.n.is_empty() {
            raw.n = Some(self.n.clone());
        }
        if !self.m.is_empty() {
            raw.m = Some(self.m.clone());
        }
        if !self.theta.is_empty() {
            let theta = self.theta.iter().map(|s| field.rat(&s.parse()?)).collect::<Result<Vec<_>>>()?;
            raw.theta = Some(theta);
        }
        Ok(raw)
    }
}

/// `n_j` and `m_{j,0..j-1}` from the values `b_0..b_j`: `n_j` is the order of
/// `b_j` modulo the group generated by the earlier values and the exponents
/// are the mixed-radix digits with `0 <= m_{j,l} < n_l` for `l >= 1`.
/// `m_{j,0}` is returned signed so callers can reject negative solutions.
pub fn value_relation(b: &[Rat]) -> Result<(u32, Vec<i64>)> {
    let j = b.len() - 1;
    let too_big = || Error::MalformedSkp("value relation has an exponent beyond 2^31".into());
    // lattice[l] generates the group spanned by b_0..b_{l-1}
    let mut lattice = vec![Rat::zero(), b[0].clone()];
    for l in 1..j {
        let g = Rat::gcd(&lattice[l], &b[l]);
        lattice.push(g);
    }
    let order = |l: usize| -> Result<u32> { (&b[l] / &lattice[l]).denom().to_u32().ok_or_else(too_big) };
    let n = order(j)?;
    let mut rest = &b[j] * &Rat::from_int(n as i64);
    let mut m = vec![0i64; j];
    for l in (1..j).rev() {
        let nl = order(l)?;
        let digit = (0..nl)
            .find(|&c| ((&rest - &(&b[l] * &Rat::from_int(c as i64))) / lattice[l].clone()).is_integer())
            .expect("a residue class always has a representative");
        m[l] = digit as i64;
        rest = &rest - &(&b[l] * &Rat::from_int(digit as i64));
    }
    m[0] = (&rest / &b[0]).to_i64().ok_or_else(too_big)?;
    Ok((n, m))
}

/// `prod U_l^{m_l}`.
pub fn monomial_product(keys: &[BivarPoly], m: &[u32]) -> BivarPoly {
    let field = keys[0].field();
    m.iter().zip(keys).fold(BivarPoly::one(field), |acc, (&e, u)| acc.mul(&u.pow(e)))
}

/// `theta` with `U^n - next = theta * mono`, if it exists and is nonzero.
fn s3_theta(u: &BivarPoly, n: u32, next: &BivarPoly, mono: &BivarPoly) -> Option<FieldElem> {
    let q = u.pow(n).sub(next).div_exact(mono)?;
    let c = q.constant_term();
    (q.num_terms() == 1 && !c.is_zero()).then_some(c)
}

impl Skp {
    /// Index of the last key polynomial.
    pub fn k(&self) -> usize {
        self.keys.len() - 1
    }

    pub fn field(&self) -> Field {
        self.keys[0].field()
    }

    pub fn keys(&self) -> &[BivarPoly] {
        &self.keys
    }

    pub fn values(&self) -> &[ExtRat] {
        &self.values
    }

    pub fn key(&self, j: usize) -> &BivarPoly {
        &self.keys[j]
    }

    pub fn value(&self, j: usize) -> &ExtRat {
        &self.values[j]
    }

    pub fn last_value(&self) -> &ExtRat {
        &self.values[self.k()]
    }

    /// Steps `j = 1..k-1`, stored at position `j - 1`.
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Step data for `1 <= j < k`.
    pub fn step(&self, j: usize) -> Option<&Step> {
        j.checked_sub(1).and_then(|i| self.steps.get(i))
    }

    /// `deg_y U_j` (zero for `U_0 = x`).
    pub fn deg(&self, j: usize) -> u32 {
        self.degs[j]
    }

    pub fn is_curve(&self) -> bool {
        self.values.iter().any(ExtRat::is_inf)
    }

    /// `U_0^m_0 ... U_{j-1}^m_{j-1}` for step `j`.
    pub fn monomial(&self, j: usize) -> Option<BivarPoly> {
        self.step(j).map(|s| monomial_product(&self.keys, &s.m))
    }

    /// The first `j + 1` key polynomials with their values.
    pub fn prefix(&self, j: usize) -> Skp {
        assert!(j >= 1 && j <= self.k(), "prefix index out of range");
        Skp {
            keys: self.keys[..=j].to_vec(),
            values: self.values[..=j].to_vec(),
            steps: self.steps[..j - 1].to_vec(),
            degs: self.degs[..=j].to_vec(),
        }
    }

    /// Same key polynomials with the last value replaced.
    pub fn with_last_value(&self, value: ExtRat) -> Result<Skp> {
        let k = self.k();
        if value.is_zero() || (value.is_inf() && self.values[0].is_inf()) {
            return Err(Error::MalformedSkp("value must be positive and finite on x".into()));
        }
        if k >= 2 {
            let prev = &self.values[k - 1];
            let n = self.steps[k - 2].n;
            if value <= prev.scale(&Rat::from_int(n as i64)) {
                return Err(Error::ViolatesS2 { index: k - 1 });
            }
        }
        let mut out = self.clone();
        out.values[k] = value;
        Ok(out)
    }

    /// Divide every value by `c > 0`; the relations are scale invariant.
    pub fn rescaled(&self, c: &Rat) -> Skp {
        let inv = c.recip().expect("positive scale");
        let mut out = self.clone();
        for v in &mut out.values {
            *v = v.scale(&inv);
        }
        out
    }

    /// The valuation of `g` (infinite for `g = 0`).
    pub fn eval(&self, g: &BivarPoly) -> ExtRat {
        self.eval_level(self.k(), g)
    }

    fn eval_level(&self, level: usize, g: &BivarPoly) -> ExtRat {
        if g.is_zero() {
            return ExtRat::Inf;
        }
        if level == 1 {
            let w = MonomialWeights::new(self.values[0].clone(), self.values[1].clone());
            return monomial_valuation(&w, g).expect("nonzero");
        }
        let coeffs = key_expansion(g, &self.keys[level]).expect("key polynomials are monic");
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| self.eval_level(level - 1, c).add(&self.values[level].scale(&Rat::from_int(i as i64))))
            .min()
            .expect("nonzero polynomial has a nonzero coefficient")
    }

    pub fn record(&self) -> SkpRecord {
        SkpRecord {
            keys: self.keys.iter().map(ToString::to_string).collect(),
            values: self.values.clone(),
            n: self.steps.iter().map(|s| s.n).collect(),
            m: self.steps.iter().map(|s| s.m.clone()).collect(),
            theta: self.steps.iter().map(|s| s.theta.to_string()).collect(),
        }
    }

    pub fn from_record(rec: &SkpRecord, field: Field) -> Result<Skp> {
        validate_skp(&rec.to_raw(field)?)
    }
}

impl Serialize for Skp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.record().serialize(s)
    }
}

impl fmt::Display for Skp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys: Vec<String> = self.keys.iter().map(ToString::to_string).collect();
        let values: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "[({}); ({})]", keys.join(", "), values.join(", "))
    }
}

/// Check (S1)-(S3) and recompute `n_j`, `m_{j,l}`, `theta_j` and the degrees.
pub fn validate_skp(raw: &RawSkp) -> Result<Skp> {
    let (keys, values) = (&raw.keys, &raw.values);
    if keys.len() < 2 || keys.len() != values.len() {
        return Err(Error::MalformedSkp("need at least x, y and one value per key".into()));
    }
    let field = keys[0].field();
    if keys.iter().any(|u| u.field() != field) {
        return Err(Error::FieldMismatch);
    }
    if keys[0] != BivarPoly::x(field) || keys[1] != BivarPoly::y(field) {
        return Err(Error::ViolatesS1);
    }
    let k = keys.len() - 1;
    if values.iter().any(ExtRat::is_zero) {
        return Err(Error::MalformedSkp("values must be positive".into()));
    }
    if values[..k].iter().enumerate().any(|(j, v)| v.is_inf() && !(j == 0 && k == 1)) {
        return Err(Error::MalformedSkp("only the last value may be infinite".into()));
    }
    if values[0].is_inf() && values[1].is_inf() {
        return Err(Error::MalformedSkp("x and y cannot both have infinite value".into()));
    }
    let claimed_len_ok = |len: usize| len == k.saturating_sub(1);
    if raw.n.as_ref().is_some_and(|v| !claimed_len_ok(v.len()))
        || raw.m.as_ref().is_some_and(|v| !claimed_len_ok(v.len()))
        || raw.theta.as_ref().is_some_and(|v| !claimed_len_ok(v.len()))
    {
        return Err(Error::MalformedSkp("step data must have one entry per step".into()));
    }

    let mut steps = Vec::new();
    let mut degs = vec![0, 1];
    for j in 1..k {
        let finite: Vec<Rat> = values[..=j].iter().map(|v| v.finite().expect("checked finite").clone()).collect();
        let (n, m) = value_relation(&finite)?;
        if m[0] < 0 {
            return Err(Error::ViolatesS2 { index: j });
        }
        let m: Vec<u32> = m.iter().map(|&e| e as u32).collect();
        if let Some(claim) = raw.n.as_ref().map(|v| v[j - 1]) {
            if claim != n {
                return Err(if claim > n && claim % n == 0 {
                    Error::NonMinimalN { index: j }
                } else {
                    Error::ViolatesS2 { index: j }
                });
            }
        }
        if let Some(claim) = raw.m.as_ref().map(|v| &v[j - 1]) {
            if *claim != m {
                let sums_match = claim.len() == j
                    && claim.iter().zip(&finite).fold(Rat::zero(), |acc, (&e, b)| acc + b * &Rat::from_int(e as i64))
                        == &finite[j] * &Rat::from_int(n as i64);
                return Err(if sums_match { Error::ExponentOutOfRange { index: j } } else { Error::ViolatesS2 { index: j } });
            }
        }
        let bound = values[j].scale(&Rat::from_int(n as i64));
        if values[j + 1] <= bound {
            return Err(Error::ViolatesS2 { index: j });
        }
        let mono = monomial_product(keys, &m);
        let theta = s3_theta(&keys[j], n, &keys[j + 1], &mono).ok_or(Error::ViolatesS3 { index: j })?;
        if raw.theta.as_ref().is_some_and(|t| t[j - 1] != theta) {
            return Err(Error::ViolatesS3 { index: j });
        }
        degs.push(degs[j] * n);
        steps.push(Step { n, m, theta });
    }
    Ok(Skp { keys: keys.clone(), values: values.clone(), steps, degs })
}

/// Coefficients `g_i` of the expansion `g = sum g_i U^i` with `deg_y g_i < deg_y U`.
pub fn key_expansion(g: &BivarPoly, u: &BivarPoly) -> Result<Vec<BivarPoly>> {
    if !u.is_monic_y() || u.deg_y() == Some(0) {
        return Err(Error::NotMonic);
    }
    let mut out = Vec::new();
    let mut rest = g.clone();
    while !rest.is_zero() {
        let (q, r) = divrem_monic_y(&rest, u);
        out.push(r);
        rest = q;
    }
    Ok(out)
}

/// Division in `(k[x])[y]` by a polynomial monic in `y`.
fn divrem_monic_y(g: &BivarPoly, u: &BivarPoly) -> (BivarPoly, BivarPoly) {
    let field = g.field();
    let d = u.deg_y().expect("nonzero divisor");
    let mut q = BivarPoly::zero(field);
    let mut r = g.clone();
    while let Some(e) = r.deg_y().filter(|&e| e >= d) {
        let top = r.y_coeffs().pop().expect("nonzero").shift(0, e - d);
        r = r.sub(&top.mul(u));
        q = q.add(&top);
    }
    (q, r)
}

/// The three kinds of valuation an [`Skp`] can describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValuationKind {
    Monomial,
    Divisorial,
    Curve,
}

/// A valuation given by an [`Skp`], together with the factor `scale` such
/// that `scale * skp_value` is the non-normalized presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationDescriptor {
    pub skp: Skp,
    pub kind: ValuationKind,
    pub scale: Rat,
}

impl ValuationDescriptor {
    pub fn new(skp: Skp) -> ValuationDescriptor {
        ValuationDescriptor::with_scale(skp, Rat::one())
    }

    pub fn with_scale(skp: Skp, scale: Rat) -> ValuationDescriptor {
        let kind = if skp.is_curve() {
            ValuationKind::Curve
        } else if skp.k() == 1 {
            ValuationKind::Monomial
        } else {
            ValuationKind::Divisorial
        };
        ValuationDescriptor { skp, kind, scale }
    }

    /// `ord_m`, the root of the valuative tree.
    pub fn root(field: Field) -> ValuationDescriptor {
        ValuationDescriptor::monomial(field, ExtRat::int(1), ExtRat::int(1)).expect("valid weights")
    }

    pub fn monomial(field: Field, w_x: ExtRat, w_y: ExtRat) -> Result<ValuationDescriptor> {
        let raw = RawSkp::new(vec![BivarPoly::x(field), BivarPoly::y(field)], vec![w_x, w_y]);
        Ok(ValuationDescriptor::new(validate_skp(&raw)?))
    }

    pub fn from_parts(keys: Vec<BivarPoly>, values: Vec<ExtRat>) -> Result<ValuationDescriptor> {
        Ok(ValuationDescriptor::new(validate_skp(&RawSkp::new(keys, values))?))
    }

    /// `min(b_0, b_1) = 1`.
    pub fn is_normalized(&self) -> bool {
        ExtRat::min(&self.skp.values[0], &self.skp.values[1]) == ExtRat::int(1)
    }

    /// The same valuation presented with `v(m) = 1`.
    pub fn normalized(&self) -> ValuationDescriptor {
        let c = ExtRat::min(&self.skp.values[0], &self.skp.values[1]);
        let c = c.finite().expect("not both infinite");
        ValuationDescriptor::with_scale(self.skp.rescaled(c), &self.scale * c)
    }

    /// Non-normalized value `scale * v(g)`.
    pub fn eval_scaled(&self, g: &BivarPoly) -> Result<ExtRat> {
        Ok(skp_valuation(self, g)?.scale(&self.scale))
    }
}

/// The valuation of `g` defined by the key polynomials of `v`.
pub fn skp_valuation(v: &ValuationDescriptor, g: &BivarPoly) -> Result<ExtRat> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(v.skp.eval(g))
}

/// The `theta` making `ord_x Res_y(f, power - theta * mono)` jump above its
/// generic value. `f` must be a monic Weierstrass polynomial.
///
/// The resultant is computed once with `theta` as a second variable; its
/// lowest `x`-coefficient must be `c (theta - theta_0)^e` for a branch.
pub fn solve_theta(f: &BivarPoly, power: &BivarPoly, mono: &BivarPoly) -> Result<FieldElem> {
    let field = f.field();
    let pc = power.y_coeffs();
    let mc = mono.y_coeffs();
    let len = pc.len().max(mc.len());
    let g: Vec<BivarPoly> = (0..len)
        .map(|i| {
            let a = pc.get(i).cloned().unwrap_or_else(|| BivarPoly::zero(field));
            let b = mc.get(i).map_or_else(|| BivarPoly::zero(field), |b| b.shift(0, 1));
            a.sub(&b)
        })
        .collect();
    let res = sylvester_det(&f.y_coeffs(), &g);
    let generic = res.ord_x().ok_or(Error::MultipleRoots)?;
    let lead = res.x_slice(generic).to_upoly_y();
    let e = lead.deg().unwrap_or(0);
    if e == 0 {
        return Err(Error::ReducibleInput("no value of theta raises the intersection order".into()));
    }
    match linear_power_root(&lead, e) {
        Some(t) if !t.is_zero() => Ok(t),
        _ => Err(Error::MultipleRoots),
    }
}

/// The key polynomials of the branch `f`, with values normalized so that
/// `b_0 = v_f(x) / ord_m(f) = 1`. Fails with `ReducibleInput` when the
/// construction breaks down, which certifies that `f` is not a branch.
pub fn skp_from_curve(f: &BivarPoly) -> Result<Skp> {
    let ord = f.ord_m()?;
    let cone = f.tangent_cone()?;
    if ord == 0 || cone.num_terms() != 1 || cone.coeff(0, ord).is_zero() {
        return Err(Error::NotNormalized);
    }
    let f = weierstrass_monic(f)?;
    let field = f.field();
    let total = f.deg_y().expect("Weierstrass");
    let inv_total = Rat::new(1, total as i64);
    let value = |u: &BivarPoly| -> Result<ExtRat> { Ok(intersection_multiplicity(&f, u)?.scale(&inv_total)) };

    let mut keys = vec![BivarPoly::x(field), BivarPoly::y(field)];
    let mut values = vec![value(&keys[0])?, value(&keys[1])?];
    let mut steps = Vec::new();
    let mut degs = vec![0u32, 1];
    for _ in 0..MAX_STEPS {
        let j = keys.len() - 1;
        let Some(beta) = values[j].finite().cloned() else { break };
        let finite: Vec<Rat> = values.iter().map(|v| v.finite().expect("finite before the end").clone()).collect();
        let (n, m) = value_relation(&finite)?;
        if m[0] < 0 {
            return Err(Error::ReducibleInput(format!("value {beta} is outside the value semigroup")));
        }
        let next_deg = degs[j] * n;
        if total % next_deg != 0 {
            return Err(Error::ReducibleInput(format!("key polynomial degree {next_deg} does not divide {total}")));
        }
        let m: Vec<u32> = m.iter().map(|&e| e as u32).collect();
        let mono = monomial_product(&keys, &m);
        let power = keys[j].pow(n);
        let theta = solve_theta(&f, &power, &mono).map_err(|e| match e {
            Error::MultipleRoots => Error::ReducibleInput(format!("no unique theta at step {j}")),
            other => other,
        })?;
        let next = power.sub(&mono.scale(&theta));
        let next_value = value(&next)?;
        if next_value <= ExtRat::of(&beta * &Rat::from_int(n as i64)) {
            return Err(Error::ReducibleInput(format!("value fails to increase at step {j}")));
        }
        steps.push(Step { n, m, theta });
        degs.push(next_deg);
        keys.push(next);
        values.push(next_value);
    }
    if !values.last().expect("nonempty").is_inf() {
        return Err(Error::ReducibleInput(format!("no terminating key polynomial within {MAX_STEPS} steps")));
    }
    if *keys.last().expect("nonempty") != f {
        return Err(Error::ReducibleInput("a proper factor of the input has infinite value".into()));
    }
    Ok(Skp { keys, values, steps, degs })
}

/// The normalized curve semivaluation of `g` in the current coordinates:
/// `x` times a unit gives `[(x, y); (inf, 1)]`, anything else must have
/// tangent cone `y^ord_m(g)`. The scale is `ord_m(g)`.
pub fn curve_descriptor(g: &BivarPoly) -> Result<ValuationDescriptor> {
    let field = g.field();
    if g.support().all(|e| e.0 >= 1) && !g.coeff(1, 0).is_zero() {
        return ValuationDescriptor::monomial(field, ExtRat::Inf, ExtRat::int(1));
    }
    let skp = skp_from_curve(g)?;
    let scale = Rat::from_int(g.ord_m()? as i64);
    Ok(ValuationDescriptor::with_scale(skp, scale))
}

/// A branch in coordinates adapted to it.
#[derive(Clone, Debug, Serialize)]
pub struct NormalForm {
    pub poly: BivarPoly,
    pub changes: Vec<CoordinateChange>,
    pub skp: Skp,
}

/// Bring a branch to tangent cone `y^ord_m(f)`, make it monic and, for a
/// singular branch, give `y` maximal contact: while `U_2 = y - theta x^m`,
/// replace `y` by `U_2` so that the first step has `n_1 > 1`.
pub fn normal_form(f: &BivarPoly) -> Result<NormalForm> {
    let (g, first) = normalize_coordinates(f)?;
    let mut changes = Vec::new();
    if first != CoordinateChange::Identity {
        changes.push(first);
    }
    let mut poly = weierstrass_monic(&g)?;
    let mut skp = skp_from_curve(&poly)?;
    while poly.deg_y() >= Some(2) && skp.k() >= 2 && skp.steps[0].n == 1 {
        let step = &skp.steps[0];
        let change = CoordinateChange::contact(step.theta.clone(), step.m[0]);
        poly = change.apply(&poly);
        changes.push(change);
        skp = skp_from_curve(&poly)?;
    }
    Ok(NormalForm { poly, changes, skp })
}
