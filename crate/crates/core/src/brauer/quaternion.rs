//! The quaternion algebra (Q(√−ac)/Q, (y² + cz²)/x²) on
//! w² = 4a x⁶ + 2b y⁶ + 2bc³ z⁶.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::Rational;
use crate::localfields::cover::{adaptive_cover, CoverConfig, IntSurface, LocalPoint, RealPoint};
use crate::localfields::padic::{is_square_rational, PadicNumber};
use crate::localfields::symbols::{hilbert2, hilbert2_padic, InvariantValue, Place};

use super::{Evidence, ValueSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionAlgebraDatum {
    #[serde(with = "crate::exact::decimal")]
    pub a: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub b: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub c: BigInt,
}

type Bivariate = BTreeMap<(u32, u32), BigInt>;

fn poly_mul(f: &Bivariate, g: &Bivariate) -> Bivariate {
    let mut out = Bivariate::new();
    for ((i, j), a) in f {
        for ((k, l), b) in g {
            *out.entry((i + k, j + l)).or_insert_with(BigInt::zero) += a * b;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn rat(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

impl QuaternionAlgebraDatum {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::from_big(a.into(), b.into(), c.into())
    }

    pub fn from_big(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(Error::Degenerate("a, b, c must be nonzero".into()));
        }
        Ok(QuaternionAlgebraDatum { a, b, c })
    }

    pub fn surface(&self) -> IntSurface {
        IntSurface::new(
            &self.a * 4,
            &self.b * 2,
            &self.b * 2 * &self.c * &self.c * &self.c,
        )
    }

    /// −ac, the discriminant of the splitting field.
    pub fn alpha(&self) -> Rational {
        rat(&(-(&self.a * &self.c)))
    }

    /// 2b·(y² + cz²)·(y⁴ − cy²z² + c²z⁴) = 2b y⁶ + 2bc³ z⁶ as polynomials,
    /// i.e. w² − 4ax⁶ on the surface.
    pub fn identity_holds(&self) -> bool {
        let c = &self.c;
        let g: Bivariate = [((2, 0), BigInt::from(1)), ((0, 2), c.clone())].into_iter().collect();
        let h: Bivariate = [((4, 0), BigInt::from(1)), ((2, 2), -c), ((0, 4), c * c)]
            .into_iter()
            .collect();
        let two_b: Bivariate = [((0, 0), &self.b * 2)].into_iter().collect();
        let lhs = poly_mul(&two_b, &poly_mul(&g, &h));
        let s = self.surface();
        let mut rhs = Bivariate::new();
        rhs.insert((6, 0), s.b.clone());
        rhs.insert((0, 6), s.c.clone());
        lhs == rhs
    }

    /// Invariant at a point given by exact integers (x, y, z) at the place v.
    pub fn eval_exact(&self, y: &BigInt, z: &BigInt, v: &Place) -> InvariantValue {
        let g = y * y + &self.c * z * z;
        if !g.is_zero() {
            return hilbert2(&self.alpha(), &rat(&g), v);
        }
        let h = y.pow(4) - &self.c * y * y * z * z + &self.c * &self.c * z.pow(4);
        if !h.is_zero() {
            return hilbert2(&rat(&self.a), &rat(&(&self.b * 2)), v) + hilbert2(&rat(&self.a), &rat(&h), v);
        }
        // y = z = 0 forces 4a to be a square at v
        InvariantValue::ZERO
    }

    pub fn eval_quat_invariant(&self, pt: &LocalPoint) -> InvariantValue {
        self.eval_exact(&pt.y, &pt.z, &Place::Prime(pt.p.clone()))
    }

    pub fn eval_real(&self, pt: &RealPoint) -> InvariantValue {
        self.eval_exact(&pt.y, &pt.z, &Place::Infinity)
    }

    /// Invariant on a residue ball, None if the square classes of both
    /// y² + cz² and y⁴ − cy²z² + c²z⁴ are undetermined.
    pub fn class_eval(&self, coords: &[PadicNumber; 3], p: &BigInt) -> Option<InvariantValue> {
        let a = rat(&self.a);
        if is_square_rational(&a, p) || is_square_rational(&self.alpha(), p) {
            return Some(InvariantValue::ZERO);
        }
        let prec = coords[1].abs_prec().max(coords[2].abs_prec()).max(1) as u32 + 8;
        let c = PadicNumber::from_rational(&rat(&self.c), p, prec);
        let y2 = coords[1].mul(&coords[1]);
        let z2 = coords[2].mul(&coords[2]);
        let g = y2.add(&c.mul(&z2));
        if g.is_known_nonzero() {
            if let Some(val) = hilbert2_padic(&self.alpha(), &g) {
                return Some(val);
            }
        }
        let h = y2.mul(&y2).sub(&c.mul(&y2).mul(&z2)).add(&c.mul(&c).mul(&z2).mul(&z2));
        if !h.is_known_nonzero() {
            return None;
        }
        let base = hilbert2(&a, &rat(&(&self.b * 2)), &Place::Prime(p.clone()));
        hilbert2_padic(&a, &h).map(|v| base + v)
    }

    /// Value set over X(R) by sign analysis of g = y² + cz² on R ≥ 0.
    pub fn real_value_set(&self) -> (BTreeSet<InvariantValue>, String) {
        let set = |v: InvariantValue| [v].into_iter().collect::<BTreeSet<_>>();
        if self.alpha().is_positive() {
            return (set(InvariantValue::ZERO), "−ac > 0".into());
        }
        if self.c.is_positive() {
            return (set(InvariantValue::ZERO), "c > 0 so y² + cz² ≥ 0".into());
        }
        // c < 0 and then a < 0: R ≥ 0 ties the sign of g to the sign of b
        if self.b.is_positive() {
            (set(InvariantValue::ZERO), "R ≥ 0 forces y² + cz² ≥ 0 when b > 0".into())
        } else {
            (set(InvariantValue::HALF), "R ≥ 0 forces y² + cz² ≤ 0 when b < 0".into())
        }
    }

    /// Residue-cover value set at a finite prime.
    pub fn cover_value_set(&self, p: &BigInt, cfg: &CoverConfig) -> ValueSet {
        let s = self.surface();
        let res = adaptive_cover(&s, p, cfg, |coords, _w| self.class_eval(coords, p));
        ValueSet {
            certified: res.is_certified(),
            values: res.witnessed_set(),
            possible: res.possible_set(),
            evidence: Evidence::from_cover("residue cover of the Hilbert-symbol square classes", &res),
        }
    }

    /// The hand analysis for triples satisfying the family conditions:
    /// {[a,2b]₂ + [a,2−c]₂} at 2, {0} elsewhere.
    pub fn fast_path(&self, v: &Place) -> BTreeSet<InvariantValue> {
        let val = match v {
            Place::Prime(p) if p == &BigInt::from(2) => {
                let a = rat(&self.a);
                hilbert2(&a, &rat(&(&self.b * 2)), v) + hilbert2(&a, &rat(&(2 - &self.c)), v)
            }
            _ => InvariantValue::ZERO,
        };
        [val].into_iter().collect()
    }

    /// Primes where the invariant can be nonzero, plus ∞.
    pub fn support_primes(&self) -> Result<Vec<BigInt>> {
        let n = &self.a * &self.b * &self.c * 6;
        crate::search::primes::prime_factors(&n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_identity() {
        for (a, b, c) in [(-1, 1, 7), (3, -5, 11), (1, 1, 1)] {
            assert!(QuaternionAlgebraDatum::new(a, b, c).unwrap().identity_holds());
        }
    }

    #[test]
    fn point_with_w_and_x_zero() {
        // at a good odd prime the form3 branch gives [a,2b] + [a,3] = 0
        let d = QuaternionAlgebraDatum::new(-1, 1, 7).unwrap();
        let v = Place::prime(5);
        let base = hilbert2(&rat(&d.a), &rat(&(&d.b * 2)), &v);
        assert_eq!(base + hilbert2(&rat(&d.a), &Rational::from_integer(3.into()), &v), InvariantValue::ZERO);
    }

    #[test]
    fn real_sign_analysis_matches_samples() {
        for (a, b, c) in [(-1, 1, 7), (-1, 1, -3), (-1, -1, -3), (2, -1, 5), (-3, -1, -1)] {
            let d = QuaternionAlgebraDatum::new(a, b, c).unwrap();
            let s = d.surface();
            let (claimed, _) = d.real_value_set();
            let mut seen = BTreeSet::new();
            for x in -4i64..=4 {
                for y in -4i64..=4 {
                    for z in -4i64..=4 {
                        let (xb, yb, zb) = (BigInt::from(x), BigInt::from(y), BigInt::from(z));
                        if x == 0 && y == 0 && z == 0 {
                            continue;
                        }
                        let r = s.rhs(&xb, &yb, &zb);
                        if r.is_negative() {
                            continue;
                        }
                        seen.insert(d.eval_real(&RealPoint { x: xb, y: yb, z: zb, r }));
                    }
                }
            }
            if !seen.is_empty() {
                assert_eq!(seen, claimed, "{:?}", (a, b, c));
            }
        }
    }
}
