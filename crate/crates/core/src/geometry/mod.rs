//! The surfaces w² = Ax⁶ + By⁶ + Cz⁶ and curves on them.

pub mod divisor;
pub mod forms;
pub mod reference;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::Rational;

pub use divisor::{conjugate_divisor, reduce_divisor_mod_p, verify_on_surface, Divisor, DivisorKind, LineFamily};
pub use forms::{Form, FormRing, Monomial};
pub use reference::{auxiliary_divisors, fibration_fiber_check, reference_divisors, supersingular_divisor};

/// w² = A x⁶ + B y⁶ + C z⁶ in P(1,1,1,3).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surface {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Surface {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(Error::Degenerate("coefficients must be nonzero".into()));
        }
        Ok(Surface { a, b, c })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()), Rational::from_integer(c.into()))
    }

    pub fn sextic(&self, x: &Rational, y: &Rational, z: &Rational) -> Rational {
        let p6 = |t: &Rational| num_traits::pow(t.clone(), 6);
        &self.a * p6(x) + &self.b * p6(y) + &self.c * p6(z)
    }

    pub fn contains(&self, p: &WeightedPoint) -> bool {
        &p.w * &p.w == self.sextic(&p.x, &p.y, &p.z)
    }
}

impl std::fmt::Display for Surface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "w^2 = ({})x^6 + ({})y^6 + ({})z^6", self.a, self.b, self.c)
    }
}

/// A rational point with weights (1, 1, 1, 3).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
    pub w: Rational,
}
