use serde::Serialize;

use super::{linear_power_root, BivarPoly};
use crate::arith::FieldElem;
use crate::error::{Error, Result};

/// Linear coordinate change applied by [`normalize_coordinates`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CoordinateChange {
    Identity,
    /// `x <-> y`.
    Swap,
    /// `y -> y + c x`.
    Shear { c: String, #[serde(skip)] value: FieldElem },
    /// `y -> y + c x^power`, used to give `y` maximal contact with a branch.
    Contact { c: String, power: u32, #[serde(skip)] value: FieldElem },
}

impl CoordinateChange {
    pub fn apply(&self, f: &BivarPoly) -> BivarPoly {
        match self {
            CoordinateChange::Identity => f.clone(),
            CoordinateChange::Swap => f.swap_xy(),
            CoordinateChange::Shear { value, .. } => {
                let field = f.field();
                let y = BivarPoly::y(field).add(&BivarPoly::x(field).scale(value));
                f.substitute(&BivarPoly::x(field), &y)
            }
            CoordinateChange::Contact { value, power, .. } => {
                let field = f.field();
                let y = BivarPoly::y(field).add(&BivarPoly::monomial(value.clone(), *power, 0));
                f.substitute(&BivarPoly::x(field), &y)
            }
        }
    }

    pub fn contact(value: FieldElem, power: u32) -> CoordinateChange {
        CoordinateChange::Contact { c: value.to_string(), power, value }
    }
}

/// Change coordinates so that the tangent cone becomes `y^ord_m(f)`.
pub fn normalize_coordinates(f: &BivarPoly) -> Result<(BivarPoly, CoordinateChange)> {
    let m = f.ord_m()?;
    if m == 0 {
        return Err(Error::NotCentered);
    }
    let cone = f.tangent_cone()?;
    // cone(1, t) as a polynomial in t
    let in_t = cone.substitute(&BivarPoly::one(f.field()), &BivarPoly::x(f.field())).to_upoly_x();
    let change = match in_t.deg() {
        Some(0) if cone.num_terms() == 1 => CoordinateChange::Swap,
        Some(d) if d == m as usize => {
            let a = linear_power_root(&in_t, m as usize).ok_or(Error::NotUnibranchTangentCone)?;
            if a.is_zero() {
                CoordinateChange::Identity
            } else {
                CoordinateChange::Shear { c: a.to_string(), value: a }
            }
        }
        _ => return Err(Error::NotUnibranchTangentCone),
    };
    let g = change.apply(f);
    debug_assert_eq!(g.tangent_cone()?.num_terms(), 1);
    Ok((g, change))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Field;
    use crate::poly::parse_poly;

    const Q: Field = Field::Rational;

    fn p(s: &str) -> BivarPoly {
        parse_poly(s, Q).unwrap()
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize_coordinates(&p("x^2 - y^3")).unwrap(), (p("y^2 - x^3"), CoordinateChange::Swap));
        let (g, ch) = normalize_coordinates(&p("(y - x)^2 - x^3")).unwrap();
        assert_eq!(g, p("y^2 - x^3"));
        assert!(matches!(ch, CoordinateChange::Shear { ref c, .. } if c == "1"));
        assert_eq!(normalize_coordinates(&p("y^2 - x^3")).unwrap(), (p("y^2 - x^3"), CoordinateChange::Identity));
    }

    #[test]
    fn rejects_split_tangent_cones() {
        assert_eq!(normalize_coordinates(&p("y^2 - x^2")), Err(Error::NotUnibranchTangentCone));
        assert_eq!(normalize_coordinates(&p("y^2 + x^2")), Err(Error::NotUnibranchTangentCone));
        assert_eq!(normalize_coordinates(&p("x*y + y^3")), Err(Error::NotUnibranchTangentCone));
        assert_eq!(normalize_coordinates(&p("1 + x")), Err(Error::NotCentered));
    }

    #[test]
    fn shear_in_positive_characteristic() {
        let f3 = Field::Prime(3);
        let f = parse_poly("(y - 2*x)^3 - x^4", f3).unwrap();
        let (g, _) = normalize_coordinates(&f).unwrap();
        assert_eq!(g, parse_poly("y^3 - x^4", f3).unwrap());
    }
}
