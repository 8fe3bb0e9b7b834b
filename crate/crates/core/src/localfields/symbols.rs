//! Places, invariant values, quadratic Hilbert symbols over Q and tame cubic
//! norm-residue symbols over completions of Q(√−3).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::local::{KPlace, LocalFieldElement, Residue};
use super::padic::{legendre, PadicNumber};
use crate::error::{Error, Result};
use crate::exact::rational::{split_valuation, Rational};

/// A place of Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Prime(BigInt),
}

impl Place {
    pub fn prime(p: i64) -> Self {
        Place::Prime(BigInt::from(p))
    }

    pub fn as_prime(&self) -> Option<&BigInt> {
        match self {
            Place::Prime(p) => Some(p),
            Place::Infinity => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{}", p),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(Place::Infinity);
        }
        s.parse::<BigInt>()
            .map(Place::Prime)
            .map_err(|_| Error::Degenerate(format!("bad place {}", s)))
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// k/6 in Q/Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantValue(u8);

impl InvariantValue {
    pub const ZERO: Self = InvariantValue(0);
    pub const HALF: Self = InvariantValue(3);
    pub const THIRD: Self = InvariantValue(2);
    pub const TWO_THIRDS: Self = InvariantValue(4);

    pub fn from_sixths(k: i64) -> Self {
        InvariantValue(k.rem_euclid(6) as u8)
    }

    pub fn from_thirds(k: i64) -> Self {
        Self::from_sixths(2 * k)
    }

    pub fn sixths(self) -> i64 {
        self.0 as i64
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn times(self, n: i64) -> Self {
        Self::from_sixths(self.0 as i64 * n)
    }
}

impl std::ops::Add for InvariantValue {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::from_sixths(self.0 as i64 + o.0 as i64)
    }
}

impl std::ops::Neg for InvariantValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_sixths(-(self.0 as i64))
    }
}

impl std::ops::Sub for InvariantValue {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = (self.0 as i64).gcd(&6);
        if self.0 == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0 as i64 / g, 6 / g)
        }
    }
}

impl FromStr for InvariantValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Degenerate(format!("bad invariant {}", s));
        if s == "0" {
            return Ok(Self::ZERO);
        }
        let (n, d) = s.split_once('/').ok_or_else(bad)?;
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d <= 0 || 6 % d != 0 {
            return Err(bad());
        }
        Ok(Self::from_sixths(n * (6 / d)))
    }
}

impl Serialize for InvariantValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for InvariantValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn unit_mod(u: &Rational, m: i64) -> i64 {
    let m = BigInt::from(m);
    crate::exact::rational::reduce_mod(u, &m).unwrap().to_i64().unwrap()
}

/// Additive Hilbert symbol [a, b]_v ∈ {0, 1/2}.
pub fn hilbert2(a: &Rational, b: &Rational, v: &Place) -> InvariantValue {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    let half = |odd: bool| if odd { InvariantValue::HALF } else { InvariantValue::ZERO };
    match v {
        Place::Infinity => half(a.is_negative() && b.is_negative()),
        Place::Prime(p) if p == &BigInt::from(2) => {
            let (alpha, u) = split_valuation(a, p);
            let (beta, w) = split_valuation(b, p);
            let u8_ = unit_mod(&u, 8);
            let w8 = unit_mod(&w, 8);
            let eps = |x: i64| ((x - 1) / 2).rem_euclid(2);
            let omega = |x: i64| ((x * x - 1) / 8).rem_euclid(2);
            let e = eps(u8_) * eps(w8) + alpha * omega(w8) + beta * omega(u8_);
            half(e.rem_euclid(2) == 1)
        }
        Place::Prime(p) => {
            let (alpha, u) = split_valuation(a, p);
            let (beta, w) = split_valuation(b, p);
            let ur = crate::exact::rational::reduce_mod(&u, p).unwrap();
            let wr = crate::exact::rational::reduce_mod(&w, p).unwrap();
            let mut sign = 1i32;
            if (alpha * beta).rem_euclid(2) == 1 && (p % BigInt::from(4)) == BigInt::from(3) {
                sign = -sign;
            }
            if beta.rem_euclid(2) == 1 {
                sign *= legendre(&ur, p);
            }
            if alpha.rem_euclid(2) == 1 {
                sign *= legendre(&wr, p);
            }
            half(sign == -1)
        }
    }
}

/// Places where [a, b]_v can be nonzero: ∞, 2 and odd primes dividing ab.
pub fn hilbert_support(a: &Rational, b: &Rational) -> Vec<Place> {
    let mut primes: Vec<BigInt> = Vec::new();
    for q in [a, b] {
        for n in [q.numer(), q.denom()] {
            for p in crate::exact::rational::small_prime_factors(n) {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
    }
    if !primes.contains(&BigInt::from(2)) {
        primes.push(BigInt::from(2));
    }
    primes.sort();
    let mut out = vec![Place::Infinity];
    out.extend(primes.into_iter().map(Place::Prime));
    out
}

/// Tame cubic symbol [a, b]_v on K_v (residue characteristic ≠ 3):
/// χ((−1)^{v(a)v(b)} b^{v(a)} / a^{v(b)} mod 𝔭) with χ(x) = k/3 when
/// x^{(q−1)/3} = ω̄^k.
pub fn cubic_symbol(a: &LocalFieldElement, b: &LocalFieldElement, place: &KPlace) -> Result<InvariantValue> {
    let undecided = || Error::PrecisionExhausted {
        p: place.p.to_string(),
        cap: a.abs_prec().min(b.abs_prec()).max(0) as u32,
    };
    let va = a.valuation().ok_or_else(undecided)?;
    let vb = b.valuation().ok_or_else(undecided)?;
    let ua = a.shift(va).unit_residue().ok_or_else(undecided)?;
    let ub = b.shift(vb).unit_residue().ok_or_else(undecided)?;
    let mut x = residue_power(place, &ub, va);
    x = place.residue_mul(&x, &residue_power(place, &ua, -vb));
    if (va * vb).rem_euclid(2) == 1 {
        x = place.residue_mul(&x, &residue_neg_one(place, &x));
    }
    cubic_character(&x, place)
}

fn residue_neg_one(place: &KPlace, like: &Residue) -> Residue {
    let m1 = &place.p - 1u32;
    match like {
        Residue::Fp(_) => Residue::Fp(m1),
        Residue::Fp2(..) => Residue::Fp2(m1, BigInt::zero()),
    }
}

fn residue_power(place: &KPlace, r: &Residue, e: i64) -> Residue {
    let q = place.q();
    // r^(q-2) is the inverse in the residue field
    let exp = if e >= 0 {
        BigInt::from(e)
    } else {
        (&q - 2u32) * BigInt::from(-e)
    };
    place.residue_pow(r, &exp)
}

/// χ(x) = k/3 with x^{(q−1)/3} = ω̄^k.
pub fn cubic_character(x: &Residue, place: &KPlace) -> Result<InvariantValue> {
    let q = place.q();
    let e = (&q - 1u32) / 3u32;
    let y = place.residue_pow(x, &e);
    let w = place.omega_residue();
    let mut pw = super::local::residue_one(&w);
    for k in 0..3 {
        if pw == y {
            return Ok(InvariantValue::from_thirds(k));
        }
        pw = place.residue_mul(&pw, &w);
    }
    Err(Error::Degenerate(format!("residue {} is not in the cube-root group mod {}", x, place.p)))
}

/// Convenience: cubic symbol of two rationals at a place of K over p.
pub fn cubic_symbol_rational(a: &Rational, b: &Rational, place: &KPlace) -> Result<InvariantValue> {
    let prec = 4;
    cubic_symbol(&place.from_rational(a, prec), &place.from_rational(b, prec), place)
}

/// Number of digits needed to decide square classes of units.
pub fn square_class_digits(p: &BigInt) -> u32 {
    if p == &BigInt::from(2) {
        3
    } else {
        1
    }
}

/// Hilbert symbol [a, x]_p with a rational and x p-adic (square class of x
/// must be determined).
pub fn hilbert2_padic(a: &Rational, x: &PadicNumber) -> Option<InvariantValue> {
    let v = x.valuation()?;
    if x.prec < square_class_digits(&x.p) {
        return None;
    }
    // replace x by a rational with the same square class
    let digits = square_class_digits(&x.p);
    let u = x.unit.mod_floor(&super::padic::ppow(&x.p, digits));
    let pv = if v >= 0 {
        Rational::from_integer(super::padic::ppow(&x.p, v as u32))
    } else {
        Rational::new(1.into(), super::padic::ppow(&x.p, (-v) as u32))
    };
    let rep = Rational::from_integer(u) * pv;
    Some(hilbert2(a, &rep, &Place::Prime(x.p.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn hilbert_examples() {
        for v in [Place::Infinity, Place::prime(2), Place::prime(3), Place::prime(7)] {
            assert_eq!(hilbert2(&int(1), &int(-5), &v), InvariantValue::ZERO);
        }
        assert_eq!(hilbert2(&int(-1), &int(-1), &Place::Infinity), InvariantValue::HALF);
        assert_eq!(hilbert2(&int(-1), &int(-1), &Place::prime(2)), InvariantValue::HALF);
        assert_eq!(hilbert2(&int(-1), &int(-1), &Place::prime(3)), InvariantValue::ZERO);
        assert_eq!(hilbert2(&int(2), &int(3), &Place::prime(3)), InvariantValue::HALF);
        assert_eq!(hilbert2(&rat(5, 9), &int(7), &Place::prime(7)), InvariantValue::HALF);
    }

    #[test]
    fn invariant_strings() {
        for k in 0..6 {
            let v = InvariantValue::from_sixths(k);
            assert_eq!(v.to_string().parse::<InvariantValue>().unwrap(), v);
        }
        assert_eq!(InvariantValue::THIRD.to_string(), "1/3");
        assert_eq!(InvariantValue::THIRD + InvariantValue::TWO_THIRDS, InvariantValue::ZERO);
    }

    #[test]
    fn cubic_examples_at_seven() {
        let v = KPlace::new(&BigInt::from(7), 6).unwrap();
        assert_eq!(cubic_symbol_rational(&int(3), &int(7), &v).unwrap(), InvariantValue::THIRD);
        assert_eq!(cubic_symbol_rational(&int(3), &int(4), &v).unwrap(), InvariantValue::ZERO);
        assert_eq!(cubic_symbol_rational(&int(3), &int(28), &v).unwrap(), InvariantValue::THIRD);
        assert_eq!(cubic_symbol_rational(&int(5), &int(11), &v).unwrap(), InvariantValue::ZERO);
        assert!(KPlace::new(&BigInt::from(3), 4).is_err());
    }
}
