//! Completions of K = Q(√−3) at primes of residue characteristic ≠ 3.
//!
//! For p ≡ 1 mod 3 the place is fixed by a root s of s² = −3 in Z_p (the one
//! with the smallest residue) and K_v = Q_p. For p ≡ 2 mod 3 (including
//! p = 2) K_v is the unramified quadratic extension, stored in the integral
//! basis {1, ω} with ω² = −1 − ω.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::padic::{hensel_lift, ppow, sqrt_mod_prime, PadicNumber};
use crate::error::{Error, Result};
use crate::exact::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KPlaceKind {
    /// √−3 ↦ s ∈ Z_p, s known to `prec` digits
    Split { s: PadicNumber },
    Inert,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KPlace {
    #[serde(with = "crate::exact::decimal")]
    pub p: BigInt,
    pub kind: KPlaceKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalFieldElement {
    Base(PadicNumber),
    /// re + om·ω
    Quadratic { re: PadicNumber, om: PadicNumber },
}

impl KPlace {
    pub fn new(p: &BigInt, prec: u32) -> Result<Self> {
        let three = BigInt::from(3);
        match (p % &three).to_u32().unwrap() {
            0 => Err(Error::Unsupported("residue characteristic 3 (wild)".into())),
            1 => {
                let r = sqrt_mod_prime(&(p - 3u32), p).expect("-3 is a square mod p = 1 mod 3");
                let r = r.clone().min(p - &r);
                let f = vec![BigInt::from(3), BigInt::zero(), BigInt::one()];
                let s = hensel_lift(&f, &r, p, prec)?;
                Ok(KPlace {
                    p: p.clone(),
                    kind: KPlaceKind::Split {
                        s: PadicNumber::from_int_mod(&s, p, prec as i64),
                    },
                })
            }
            _ => Ok(KPlace {
                p: p.clone(),
                kind: KPlaceKind::Inert,
            }),
        }
    }

    pub fn is_split(&self) -> bool {
        matches!(self.kind, KPlaceKind::Split { .. })
    }

    /// Residue field size.
    pub fn q(&self) -> BigInt {
        if self.is_split() {
            self.p.clone()
        } else {
            &self.p * &self.p
        }
    }

    /// [K_v : Q_p].
    pub fn local_degree(&self) -> u32 {
        if self.is_split() {
            1
        } else {
            2
        }
    }

    pub fn embed(&self, x: &PadicNumber) -> LocalFieldElement {
        match self.kind {
            KPlaceKind::Split { .. } => LocalFieldElement::Base(x.clone()),
            KPlaceKind::Inert => LocalFieldElement::Quadratic {
                re: x.clone(),
                om: PadicNumber::zero_mod(&self.p, x.abs_prec().max(0)),
            },
        }
    }

    pub fn from_rational(&self, q: &Rational, prec: u32) -> LocalFieldElement {
        self.embed(&PadicNumber::from_rational(q, &self.p, prec))
    }

    /// The image of √−3 (to `prec` digits).
    pub fn sqrt_minus3(&self, prec: u32) -> LocalFieldElement {
        match &self.kind {
            KPlaceKind::Split { s } => LocalFieldElement::Base(s.with_prec(prec)),
            KPlaceKind::Inert => LocalFieldElement::Quadratic {
                re: PadicNumber::one(&self.p, prec),
                om: PadicNumber::from_i64(2, &self.p, prec),
            },
        }
    }

    /// The image of ω = ζ⁴ = (−1 + √−3)/2, reduced to the residue field.
    pub fn omega_residue(&self) -> Residue {
        match &self.kind {
            KPlaceKind::Split { s } => {
                let p = &self.p;
                let two_inv = crate::exact::rational::mod_inverse(&BigInt::from(2), p).unwrap();
                Residue::Fp(((&s.unit - 1u32) * two_inv).mod_floor(p))
            }
            KPlaceKind::Inert => Residue::Fp2(BigInt::zero(), BigInt::one()),
        }
    }

    pub fn one(&self, prec: u32) -> LocalFieldElement {
        self.embed(&PadicNumber::one(&self.p, prec))
    }

    /// Residue-field power map x ↦ x^e.
    pub fn residue_pow(&self, x: &Residue, e: &BigInt) -> Residue {
        let p = &self.p;
        match x {
            Residue::Fp(a) => Residue::Fp(a.modpow(e, p)),
            Residue::Fp2(a, b) => {
                let mut base = (a.clone(), b.clone());
                let mut acc = (BigInt::one(), BigInt::zero());
                let mut e = e.clone();
                while !e.is_zero() {
                    if e.is_odd() {
                        acc = fp2_mul(&acc, &base, p);
                    }
                    base = fp2_mul(&base, &base, p);
                    e >>= 1;
                }
                Residue::Fp2(acc.0, acc.1)
            }
        }
    }

    pub fn residue_mul(&self, x: &Residue, y: &Residue) -> Residue {
        match (x, y) {
            (Residue::Fp(a), Residue::Fp(b)) => Residue::Fp((a * b).mod_floor(&self.p)),
            (Residue::Fp2(a, b), Residue::Fp2(c, d)) => {
                let r = fp2_mul(&(a.clone(), b.clone()), &(c.clone(), d.clone()), &self.p);
                Residue::Fp2(r.0, r.1)
            }
            _ => panic!("mixed residue fields"),
        }
    }
}

fn fp2_mul(x: &(BigInt, BigInt), y: &(BigInt, BigInt), p: &BigInt) -> (BigInt, BigInt) {
    // (a + bω)(c + dω) = ac − bd + (ad + bc − bd)ω
    let bd = &x.1 * &y.1;
    (
        (&x.0 * &y.0 - &bd).mod_floor(p),
        (&x.0 * &y.1 + &x.1 * &y.0 - &bd).mod_floor(p),
    )
}

/// An element of the residue field F_p or F_p[ω].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Residue {
    Fp(BigInt),
    Fp2(BigInt, BigInt),
}

impl std::fmt::Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Residue::Fp(a) => write!(f, "{}", a),
            Residue::Fp2(a, b) => write!(f, "{}+{}w", a, b),
        }
    }
}

impl LocalFieldElement {
    pub fn p(&self) -> &BigInt {
        match self {
            LocalFieldElement::Base(x) => &x.p,
            LocalFieldElement::Quadratic { re, .. } => &re.p,
        }
    }

    /// Valuation (normalized on K_v; unramified so it extends v_p), if the
    /// element is known to be nonzero.
    pub fn valuation(&self) -> Option<i64> {
        match self {
            LocalFieldElement::Base(x) => x.valuation(),
            LocalFieldElement::Quadratic { re, om } => {
                let n = re.abs_prec().min(om.abs_prec());
                let v = [re, om].iter().filter(|c| c.is_known_nonzero()).map(|c| c.val).min()?;
                (v < n).then_some(v)
            }
        }
    }

    /// Absolute precision.
    pub fn abs_prec(&self) -> i64 {
        match self {
            LocalFieldElement::Base(x) => x.abs_prec(),
            LocalFieldElement::Quadratic { re, om } => re.abs_prec().min(om.abs_prec()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (LocalFieldElement::Base(a), LocalFieldElement::Base(b)) => LocalFieldElement::Base(a.add(b)),
            (LocalFieldElement::Quadratic { re: a, om: b }, LocalFieldElement::Quadratic { re: c, om: d }) => {
                LocalFieldElement::Quadratic { re: a.add(c), om: b.add(d) }
            }
            _ => panic!("mixed local fields"),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            LocalFieldElement::Base(a) => LocalFieldElement::Base(a.neg()),
            LocalFieldElement::Quadratic { re, om } => LocalFieldElement::Quadratic {
                re: re.neg(),
                om: om.neg(),
            },
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (LocalFieldElement::Base(a), LocalFieldElement::Base(b)) => LocalFieldElement::Base(a.mul(b)),
            (LocalFieldElement::Quadratic { re: a, om: b }, LocalFieldElement::Quadratic { re: c, om: d }) => {
                let bd = b.mul(d);
                LocalFieldElement::Quadratic {
                    re: a.mul(c).sub(&bd),
                    om: a.mul(d).add(&b.mul(c)).sub(&bd),
                }
            }
            _ => panic!("mixed local fields"),
        }
    }

    /// Galois conjugate over Q_p (ω ↦ ω² = −1 − ω); identity on Q_p.
    pub fn conj(&self) -> Self {
        match self {
            LocalFieldElement::Base(_) => self.clone(),
            LocalFieldElement::Quadratic { re, om } => LocalFieldElement::Quadratic {
                re: re.sub(om),
                om: om.neg(),
            },
        }
    }

    /// Norm to Q_p.
    pub fn norm(&self) -> PadicNumber {
        match self {
            LocalFieldElement::Base(a) => a.clone(),
            LocalFieldElement::Quadratic { .. } => match self.mul(&self.conj()) {
                LocalFieldElement::Quadratic { re, .. } => re,
                _ => unreachable!(),
            },
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match self {
            LocalFieldElement::Base(a) => Ok(LocalFieldElement::Base(a.inv()?)),
            LocalFieldElement::Quadratic { .. } => {
                let n = self.norm().inv()?;
                let c = self.conj();
                Ok(c.mul(&LocalFieldElement::Quadratic {
                    om: PadicNumber::zero_mod(&n.p, n.abs_prec()),
                    re: n,
                }))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow_i(&self, e: i64, one: &Self) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = one.clone();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Divides by p^k exactly (shift of valuations).
    pub fn shift(&self, k: i64) -> Self {
        let sh = |x: &PadicNumber| {
            let mut y = x.clone();
            y.val -= k;
            y
        };
        match self {
            LocalFieldElement::Base(a) => LocalFieldElement::Base(sh(a)),
            LocalFieldElement::Quadratic { re, om } => LocalFieldElement::Quadratic { re: sh(re), om: sh(om) },
        }
    }

    /// Residue of u = x / p^v(x), if determined.
    pub fn unit_residue(&self) -> Option<Residue> {
        let v = self.valuation()?;
        let u = self.shift(v);
        match &u {
            LocalFieldElement::Base(a) => a.unit_residue().map(Residue::Fp),
            LocalFieldElement::Quadratic { re, om } => {
                if u.abs_prec() < 1 {
                    return None;
                }
                let digit = |c: &PadicNumber| -> BigInt {
                    if c.prec == 0 || c.val > 0 {
                        BigInt::zero()
                    } else {
                        c.unit.mod_floor(&c.p)
                    }
                };
                Some(Residue::Fp2(digit(re), digit(om)))
            }
        }
    }

    /// Congruence test x ≡ y mod p^k O_v, if decidable.
    pub fn congruent(&self, other: &Self, k: i64) -> Option<bool> {
        let d = self.sub(other);
        match d.valuation() {
            Some(v) => Some(v >= k),
            None => (d.abs_prec() >= k).then_some(true),
        }
    }
}

/// Cube test in K_v (or Q_3 for rationals). p = 3 is handled only for
/// rational inputs, by the exact rule on Q_3 (units ≡ ±1 mod 9 are cubes;
/// in particular anything ≡ 1 mod 27 satisfies v(x − 1) > 2·v(3)).
pub fn is_cube_local(x: &LocalFieldElement, place: &KPlace) -> Result<bool> {
    let v = x.valuation().ok_or_else(|| Error::PrecisionExhausted {
        p: place.p.to_string(),
        cap: x.abs_prec().max(0) as u32,
    })?;
    if v.rem_euclid(3) != 0 {
        return Ok(false);
    }
    let r = x.unit_residue().ok_or_else(|| Error::PrecisionExhausted {
        p: place.p.to_string(),
        cap: 1,
    })?;
    let q = place.q();
    let e = (&q - 1u32) / 3u32;
    if (&q - 1u32) % 3u32 != BigInt::zero() {
        // cubing is bijective on the residue field and Hensel applies
        return Ok(true);
    }
    Ok(place.residue_pow(&r, &e) == residue_one(&r))
}

pub fn residue_one(r: &Residue) -> Residue {
    match r {
        Residue::Fp(_) => Residue::Fp(BigInt::one()),
        Residue::Fp2(..) => Residue::Fp2(BigInt::one(), BigInt::zero()),
    }
}

/// Cube test for a rational at any prime, including p = 3.
pub fn is_cube_rational_local(q: &Rational, p: &BigInt) -> bool {
    super::padic::is_nth_power_rational(q, p, 3)
}

/// A residue in K_v ≅ Q_p for split places, as an integer representative.
pub fn split_residue_value(r: &Residue) -> Option<BigInt> {
    match r {
        Residue::Fp(a) => Some(a.clone()),
        _ => None,
    }
}

/// p^k as an element.
pub fn p_power(place: &KPlace, k: u32, prec: u32) -> LocalFieldElement {
    place.embed(&PadicNumber::from_int_mod(&ppow(&place.p, k), &place.p, k as i64 + prec as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    #[test]
    fn split_and_inert_places() {
        let seven = KPlace::new(&BigInt::from(7), 10).unwrap();
        assert!(seven.is_split());
        let s = seven.sqrt_minus3(10);
        let sq = s.mul(&s);
        assert_eq!(sq, seven.from_rational(&int(-3), 10));
        assert_eq!(seven.omega_residue(), Residue::Fp(BigInt::from(4)));
        let two = KPlace::new(&BigInt::from(2), 10).unwrap();
        assert!(!two.is_split());
        let s2 = two.sqrt_minus3(10);
        let sq2 = s2.mul(&s2);
        assert_eq!(sq2.congruent(&two.from_rational(&int(-3), 10), 10), Some(true));
        assert!(KPlace::new(&BigInt::from(3), 10).is_err());
    }

    #[test]
    fn inverse_and_norm_in_unramified_extension() {
        let two = KPlace::new(&BigInt::from(2), 12).unwrap();
        let x = LocalFieldElement::Quadratic {
            re: PadicNumber::from_i64(3, &two.p, 12),
            om: PadicNumber::from_i64(6, &two.p, 12),
        };
        let y = x.inv().unwrap();
        let one = x.mul(&y);
        assert_eq!(one.congruent(&two.one(12), 10), Some(true));
        // N(3 + 6ω) = 9 − 18 + 36 = 27
        assert_eq!(x.norm().eq_checked(&PadicNumber::from_i64(27, &two.p, 12)).is_err(), true);
    }

    #[test]
    fn cube_tests() {
        assert!(is_cube_rational_local(&int(28), &BigInt::from(3)));
        let seven = KPlace::new(&BigInt::from(7), 6).unwrap();
        assert!(!is_cube_local(&seven.from_rational(&int(7), 6), &seven).unwrap());
        assert!(!is_cube_local(&seven.from_rational(&int(3), 6), &seven).unwrap());
        assert!(is_cube_local(&seven.from_rational(&int(6), 6), &seven).unwrap());
        let two = KPlace::new(&BigInt::from(2), 8).unwrap();
        // units ≡ 1 mod 8 in Q₂(√−3) are cubes
        for u in [9i64, 17, 25, -7] {
            assert!(is_cube_local(&two.from_rational(&int(u), 8), &two).unwrap());
        }
        let w = two.sqrt_minus3(8);
        // ω itself is not a cube: its residue generates F₄^×
        let omega = w.sub(&two.one(8)).mul(&two.from_rational(&crate::exact::rational::rat(1, 2), 8));
        assert!(!is_cube_local(&omega, &two).unwrap());
    }
}
