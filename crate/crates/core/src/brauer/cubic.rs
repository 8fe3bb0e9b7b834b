//! The cyclic algebra (K(∛θ)/K, f) over K = Q(√−3) on
//! w² = −3m² x⁶ + B y⁶ + C z⁶ with f = (w − m√−3 x³)/(w + m√−3 x³) and
//! θ ≡ C/B modulo cubes.

use std::cell::Cell;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::Rational;
use crate::localfields::cover::{adaptive_cover, special_vectors, CoverConfig, IntSurface, LocalPoint};
use crate::localfields::local::{is_cube_local, is_cube_rational_local, split_residue_value, KPlace, LocalFieldElement};
use crate::localfields::padic::PadicNumber;
use crate::localfields::symbols::{cubic_symbol, InvariantValue};

use super::{Evidence, ValueSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicAlgebraDatum {
    /// A = −3m²
    #[serde(with = "crate::exact::decimal")]
    pub m: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub b: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub c: BigInt,
    /// cube-free integer with θ ≡ C/B modulo cubes
    #[serde(with = "crate::exact::decimal")]
    pub theta: BigInt,
}

/// Cube-free part of n·d² for C/B = n/d.
fn cube_free_ratio(b: &BigInt, c: &BigInt) -> Result<BigInt> {
    let q = Rational::new(c.clone(), b.clone());
    let n = q.numer() * q.denom() * q.denom();
    let mut out = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    for p in crate::search::primes::prime_factors(&n)? {
        let mut e = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            e += 1;
        }
        out *= p.pow(e % 3);
    }
    Ok(out)
}

/// The value and whether the c1/c2 expressions were compared.
struct Eval {
    value: InvariantValue,
    cross_checked: bool,
}

impl CubicAlgebraDatum {
    pub fn new(m: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if m.is_zero() || b.is_zero() || c.is_zero() {
            return Err(Error::Degenerate("m, B, C must be nonzero".into()));
        }
        let theta = cube_free_ratio(&b, &c)?;
        Ok(CubicAlgebraDatum { m, b, c, theta })
    }

    /// w² = −3x⁶ + p y⁶ + 224p z⁶.
    pub fn family(p: &BigInt) -> Result<Self> {
        Self::new(BigInt::one(), p.clone(), p * 224)
    }

    pub fn surface(&self) -> IntSurface {
        IntSurface::new(-(&self.m * &self.m * BigInt::from(3)), self.b.clone(), self.c.clone())
    }

    pub fn theta_rational(&self) -> Rational {
        Rational::from_integer(self.theta.clone())
    }

    /// −3·A is a square (A = −3m² by construction) and θ is not a cube.
    pub fn is_nontrivial(&self) -> bool {
        !crate::exact::rational::is_cube(&self.theta_rational())
    }

    /// u₋ = w − m√−3x³ and u₊ = w + m√−3x³ in K_v.
    fn u_pair(&self, kv: &KPlace, x: &PadicNumber, w: &PadicNumber, prec: u32) -> (LocalFieldElement, LocalFieldElement) {
        let m = PadicNumber::from_rational(&Rational::from_integer(self.m.clone()), &kv.p, prec);
        let x3 = kv.embed(&x.pow(3).mul(&m));
        let sx3 = kv.sqrt_minus3(prec).mul(&x3);
        let wk = kv.embed(w);
        (wk.sub(&sx3), wk.add(&sx3))
    }

    /// Invariant over Q_p from an invariant over K_v (×2 at inert places).
    pub fn to_qp(kv: &KPlace, v: InvariantValue) -> InvariantValue {
        if kv.is_split() {
            v
        } else {
            v.times(2)
        }
    }

    fn symbol_theta(&self, u: &LocalFieldElement, kv: &KPlace, prec: u32) -> Option<InvariantValue> {
        u.valuation()?;
        cubic_symbol(u, &kv.from_rational(&self.theta_rational(), prec), kv).ok()
    }

    fn b_symbol(&self, kv: &KPlace, prec: u32) -> Result<InvariantValue> {
        let b = kv.from_rational(&Rational::from_integer(self.b.clone()), prec);
        cubic_symbol(&b, &kv.from_rational(&self.theta_rational(), prec), kv)
    }

    /// [f, θ]_v over K_v via c1 = [u₋,θ] − [u₊,θ], c2 = [B,θ] − 2[u₊,θ],
    /// c3 = 2[u₋,θ] − [B,θ]; c1 and c2 are compared when both are defined.
    fn eval_kv(&self, kv: &KPlace, x: &PadicNumber, w: &PadicNumber, prec: u32, bsym: InvariantValue) -> Result<Option<Eval>> {
        let (um, up) = self.u_pair(kv, x, w, prec);
        let sm = self.symbol_theta(&um, kv, prec);
        let sp = self.symbol_theta(&up, kv, prec);
        Ok(match (sm, sp) {
            (Some(a), Some(b)) => {
                let c1 = a - b;
                let c2 = bsym - b.times(2);
                if c1 != c2 {
                    return Err(Error::Degenerate(format!(
                        "cubic invariant expressions disagree at {}: {} vs {}",
                        kv.p, c1, c2
                    )));
                }
                Some(Eval {
                    value: c1,
                    cross_checked: true,
                })
            }
            (None, Some(b)) => Some(Eval {
                value: bsym - b.times(2),
                cross_checked: false,
            }),
            (Some(a), None) => Some(Eval {
                value: a.times(2) - bsym,
                cross_checked: false,
            }),
            (None, None) => None,
        })
    }

    /// Invariant at a local point (p ≠ 3), over Q_p.
    pub fn eval_cubic_invariant(&self, pt: &LocalPoint) -> Result<InvariantValue> {
        let p = &pt.p;
        if p == &BigInt::from(3) {
            if is_cube_rational_local(&self.theta_rational(), p) {
                return Ok(InvariantValue::ZERO);
            }
            return Err(Error::Unsupported("cubic symbol at residue characteristic 3".into()));
        }
        let prec = pt.w.prec + 10;
        let kv = KPlace::new(p, prec)?;
        let x = PadicNumber::from_int_mod(&pt.x, p, prec as i64);
        let (um, up) = self.u_pair(&kv, &x, &pt.w, prec);
        if um.valuation().is_none() || up.valuation().is_none() {
            return Err(Error::Degenerate("point on w² + 3m²x⁶ = 0 (or too little precision)".into()));
        }
        let bsym = self.b_symbol(&kv, prec)?;
        match self.eval_kv(&kv, &x, &pt.w, prec, bsym)? {
            Some(e) => Ok(Self::to_qp(&kv, e.value)),
            None => Err(Error::PrecisionExhausted {
                p: p.to_string(),
                cap: pt.w.prec,
            }),
        }
    }

    /// Residue-cover value set at p ≠ 3 (over Q_p).
    pub fn cover_value_set(&self, p: &BigInt, cfg: &CoverConfig) -> Result<ValueSet> {
        let prec = cfg.max_depth + 12;
        let kv = KPlace::new(p, prec)?;
        let bsym = self.b_symbol(&kv, prec)?;
        let s = self.surface();
        let checked = Cell::new(0usize);
        let failure: Cell<Option<String>> = Cell::new(None);
        let res = adaptive_cover(&s, p, cfg, |coords, w| match self.eval_kv(&kv, &coords[0], w, prec, bsym) {
            Ok(Some(e)) => {
                if e.cross_checked {
                    checked.set(checked.get() + 1);
                }
                Some(Self::to_qp(&kv, e.value))
            }
            Ok(None) => None,
            Err(err) => {
                failure.set(Some(err.to_string()));
                None
            }
        });
        if let Some(msg) = failure.take() {
            return Err(Error::Degenerate(msg));
        }
        let mut evidence = Evidence::from_cover("residue cover of the cubic-symbol classes", &res);
        evidence.notes.push(format!("{} evaluations cross-checked by two expressions", checked.get()));
        if !kv.is_split() {
            evidence.notes.push("inert place: invariant over Q_p is twice the invariant over K_v".into());
        }
        Ok(ValueSet {
            certified: res.is_certified(),
            values: res.witnessed_set(),
            possible: res.possible_set(),
            evidence,
        })
    }

    /// Symbolic value set where θ is a cube in K_v (or in Q_3).
    pub fn theta_is_local_cube(&self, p: &BigInt) -> Result<bool> {
        if p == &BigInt::from(3) {
            return Ok(is_cube_rational_local(&self.theta_rational(), p));
        }
        let kv = KPlace::new(p, 8)?;
        is_cube_local(&kv.from_rational(&self.theta_rational(), 8), &kv)
    }

    /// Values at lifts of the small special points, both branches of w.
    pub fn witnessed_values(&self, p: &BigInt, digits: u32) -> BTreeSet<InvariantValue> {
        let s = self.surface();
        let mut out = BTreeSet::new();
        for v in special_vectors(p) {
            let [x, y, z] = v.map(BigInt::from);
            if let Some(pt) = LocalPoint::lift(&s, p, &x, &y, &z, digits) {
                for q in [pt.clone(), pt.negate_w()] {
                    if let Ok(val) = self.eval_cubic_invariant(&q) {
                        out.insert(val);
                    }
                }
            }
        }
        out
    }

    /// Primes where the invariant can be nonzero.
    pub fn support_primes(&self) -> Result<Vec<BigInt>> {
        let mut ps = crate::search::primes::prime_factors(&(&self.b * &self.c * &self.theta * &self.m * 6))?;
        ps.sort();
        ps.dedup();
        Ok(ps)
    }

    /// The case analysis for the family w² = −3x⁶ + py⁶ + 224p z⁶ (θ = 28):
    /// {1/3, 2/3} at 7, {0} at 2 and 3 and wherever 28 is a cube.
    pub fn fast_path(&self, p: &BigInt) -> Option<BTreeSet<InvariantValue>> {
        if self.theta != BigInt::from(28) || !self.m.is_one() || self.c != &self.b * 224 {
            return None;
        }
        if p == &BigInt::from(7) {
            return Some([InvariantValue::THIRD, InvariantValue::TWO_THIRDS].into_iter().collect());
        }
        if p == &BigInt::from(2) || p == &BigInt::from(3) || self.theta_is_local_cube(p).ok()? {
            return Some([InvariantValue::ZERO].into_iter().collect());
        }
        None
    }
}

/// What a 7-adic (or any split) residue class says about u₋, u₊ mod p.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SplitScanClass {
    BothUnits,
    MinusDivisible {
        #[serde(with = "crate::exact::decimal")]
        plus_residue: BigInt,
    },
    PlusDivisible {
        #[serde(with = "crate::exact::decimal")]
        minus_residue: BigInt,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitScan {
    #[serde(with = "crate::exact::decimal")]
    pub p: BigInt,
    pub certified: bool,
    pub classes: Vec<SplitScanClass>,
    pub evidence: Evidence,
}

impl SplitScan {
    /// No class has u₋ and u₊ both units.
    pub fn both_units_impossible(&self) -> bool {
        self.certified && !self.classes.contains(&SplitScanClass::BothUnits)
    }

    /// Residues of u₊ on classes with u₋ divisible by the prime.
    pub fn plus_residues(&self) -> BTreeSet<BigInt> {
        self.classes
            .iter()
            .filter_map(|c| match c {
                SplitScanClass::MinusDivisible { plus_residue } => Some(plus_residue.clone()),
                _ => None,
            })
            .collect()
    }
}

/// Class scan of u± mod p at a split prime.
pub fn split_scan(d: &CubicAlgebraDatum, p: &BigInt, cfg: &CoverConfig) -> Result<SplitScan> {
    let prec = cfg.max_depth + 12;
    let kv = KPlace::new(p, prec)?;
    if !kv.is_split() {
        return Err(Error::Degenerate(format!("{} is not split in Q(√−3)", p)));
    }
    let s = d.surface();
    let res = adaptive_cover(&s, p, cfg, |coords, w| {
        let (um, up) = d.u_pair(&kv, &coords[0], w, prec);
        let res_of = |u: &LocalFieldElement| -> Option<BigInt> {
            if u.abs_prec() < 1 {
                return None;
            }
            match u.valuation() {
                Some(v) if v == 0 => split_residue_value(&u.unit_residue()?),
                _ => Some(BigInt::zero()),
            }
        };
        let (rm, rp) = (res_of(&um)?, res_of(&up)?);
        Some(match (rm.is_zero(), rp.is_zero()) {
            (false, false) => SplitScanClass::BothUnits,
            (true, _) => SplitScanClass::MinusDivisible { plus_residue: rp },
            (false, true) => SplitScanClass::PlusDivisible { minus_residue: rm },
        })
    });
    Ok(SplitScan {
        p: p.clone(),
        certified: res.is_certified(),
        classes: res.possible_set().into_iter().collect(),
        evidence: Evidence::from_cover("residue scan of w ± √−3x³ modulo the prime", &res),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CongruenceScan {
    #[serde(with = "crate::exact::decimal")]
    pub p: BigInt,
    pub modulus_exponent: u32,
    pub certified: bool,
    /// one entry per distinct outcome: f ≡ 1 mod p^k or not
    pub outcomes: Vec<bool>,
    pub evidence: Evidence,
}

impl CongruenceScan {
    pub fn all_congruent(&self) -> bool {
        self.certified && self.outcomes == vec![true]
    }
}

/// Scan of f mod p^k·O_v over all classes (used at p = 2, k = 3).
pub fn congruence_scan(d: &CubicAlgebraDatum, p: &BigInt, k: u32, cfg: &CoverConfig) -> Result<CongruenceScan> {
    let prec = cfg.max_depth + 12;
    let kv = KPlace::new(p, prec)?;
    let s = d.surface();
    let one = kv.one(prec);
    let res = adaptive_cover(&s, p, cfg, |coords, w| {
        let (um, up) = d.u_pair(&kv, &coords[0], w, prec);
        up.valuation()?;
        let f = um.div(&up).ok()?;
        f.congruent(&one, k as i64)
    });
    Ok(CongruenceScan {
        p: p.clone(),
        modulus_exponent: k,
        certified: res.is_certified(),
        outcomes: res.possible_set().into_iter().collect(),
        evidence: Evidence::from_cover("residue scan of f modulo p^k", &res),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfields::cover::LocalPoint;

    #[test]
    fn theta_of_the_family() {
        let d = CubicAlgebraDatum::family(&BigInt::from(97)).unwrap();
        assert_eq!(d.theta, BigInt::from(28));
        assert!(d.is_nontrivial());
        assert_eq!(d.fast_path(&BigInt::from(7)).unwrap().len(), 2);
    }

    #[test]
    fn inert_doubling() {
        let kv = KPlace::new(&BigInt::from(5), 4).unwrap();
        assert_eq!(CubicAlgebraDatum::to_qp(&kv, InvariantValue::THIRD), InvariantValue::TWO_THIRDS);
        let kv = KPlace::new(&BigInt::from(7), 4).unwrap();
        assert_eq!(CubicAlgebraDatum::to_qp(&kv, InvariantValue::THIRD), InvariantValue::THIRD);
    }

    #[test]
    fn seven_adic_values_at_points() {
        let d = CubicAlgebraDatum::family(&BigInt::from(97)).unwrap();
        let s = d.surface();
        let seven = BigInt::from(7);
        let mut seen = BTreeSet::new();
        for x in 0..7i64 {
            for y in 0..7i64 {
                for z in 0..7i64 {
                    if x % 7 == 0 && y % 7 == 0 && z % 7 == 0 {
                        continue;
                    }
                    let [xb, yb, zb] = [x, y, z].map(BigInt::from);
                    if let Some(pt) = LocalPoint::lift(&s, &seven, &xb, &yb, &zb, 12) {
                        for q in [pt.clone(), pt.negate_w()] {
                            if let Ok(v) = d.eval_cubic_invariant(&q) {
                                seen.insert(v);
                            }
                        }
                    }
                }
            }
        }
        let expect: BTreeSet<_> = [InvariantValue::THIRD, InvariantValue::TWO_THIRDS].into_iter().collect();
        assert_eq!(seen, expect);
    }
}
