//! p-adic numbers with tracked relative precision, Hensel lifting and
//! power-class tests in Q_p.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{int_valuation, mod_inverse, Rational};

/// p^val · unit with the unit known modulo p^prec. `prec == 0` means the
/// number is only known to lie in p^val Z_p (it may be zero).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicNumber {
    #[serde(with = "crate::exact::decimal")]
    pub p: BigInt,
    pub val: i64,
    #[serde(with = "crate::exact::decimal")]
    pub unit: BigInt,
    pub prec: u32,
}

pub fn ppow(p: &BigInt, k: u32) -> BigInt {
    num_traits::pow(p.clone(), k as usize)
}

impl PadicNumber {
    /// O(p^n).
    pub fn zero_mod(p: &BigInt, n: i64) -> Self {
        PadicNumber {
            p: p.clone(),
            val: n,
            unit: BigInt::zero(),
            prec: 0,
        }
    }

    /// An integer known modulo p^abs_prec.
    pub fn from_int_mod(n: &BigInt, p: &BigInt, abs_prec: i64) -> Self {
        if abs_prec <= 0 {
            return Self::zero_mod(p, abs_prec.max(0));
        }
        let m = ppow(p, abs_prec as u32);
        let r = n.mod_floor(&m);
        if r.is_zero() {
            return Self::zero_mod(p, abs_prec);
        }
        let v = int_valuation(&r, p);
        let prec = (abs_prec - v) as u32;
        let unit = (r / ppow(p, v as u32)).mod_floor(&ppow(p, prec));
        PadicNumber {
            p: p.clone(),
            val: v,
            unit,
            prec,
        }
    }

    /// A nonzero rational with `prec` digits of relative precision; zero
    /// becomes O(p^prec).
    pub fn from_rational(q: &Rational, p: &BigInt, prec: u32) -> Self {
        if q.is_zero() {
            return Self::zero_mod(p, prec as i64);
        }
        let vn = int_valuation(q.numer(), p);
        let vd = int_valuation(q.denom(), p);
        let m = ppow(p, prec);
        let n = q.numer() / ppow(p, vn as u32);
        let d = q.denom() / ppow(p, vd as u32);
        let unit = (n * mod_inverse(&d, &m).expect("unit denominator")).mod_floor(&m);
        PadicNumber {
            p: p.clone(),
            val: vn - vd,
            unit,
            prec,
        }
    }

    pub fn from_i64(n: i64, p: &BigInt, prec: u32) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()), p, prec)
    }

    pub fn one(p: &BigInt, prec: u32) -> Self {
        Self::from_i64(1, p, prec)
    }

    pub fn is_known_nonzero(&self) -> bool {
        self.prec > 0
    }

    /// Valuation if the number is known to be nonzero.
    pub fn valuation(&self) -> Option<i64> {
        (self.prec > 0).then_some(self.val)
    }

    /// The number is known modulo p^abs_prec.
    pub fn abs_prec(&self) -> i64 {
        self.val + self.prec as i64
    }

    pub fn unit_residue(&self) -> Option<BigInt> {
        (self.prec > 0).then(|| self.unit.mod_floor(&self.p))
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let prec = prec.min(self.prec);
        PadicNumber {
            p: self.p.clone(),
            val: self.val,
            unit: self.unit.mod_floor(&ppow(&self.p, prec)),
            prec,
        }
    }

    /// Representative integer (times p^val if val < 0, as a rational).
    pub fn to_rational(&self) -> Rational {
        let u = Rational::from_integer(self.unit.clone());
        if self.val >= 0 {
            u * Rational::from_integer(ppow(&self.p, self.val as u32))
        } else {
            u / Rational::from_integer(ppow(&self.p, (-self.val) as u32))
        }
    }

    /// Integer representative modulo p^abs_prec, for val ≥ 0.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.val < 0 {
            return None;
        }
        Some(&self.unit * ppow(&self.p, self.val as u32))
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        if self.prec > 0 {
            out.unit = (-&self.unit).mod_floor(&ppow(&self.p, self.prec));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let p = &self.p;
        let n = self.abs_prec().min(other.abs_prec());
        let m = self.val.min(other.val).min(n);
        if n <= m {
            return Self::zero_mod(p, n);
        }
        let width = (n - m) as u32;
        let modulus = ppow(p, width);
        let lift = |x: &Self| -> BigInt {
            if x.prec == 0 || x.val >= n {
                BigInt::zero()
            } else {
                &x.unit * ppow(p, (x.val - m) as u32)
            }
        };
        let t = (lift(self) + lift(other)).mod_floor(&modulus);
        if t.is_zero() {
            return Self::zero_mod(p, n);
        }
        let j = int_valuation(&t, p);
        let prec = width - j as u32;
        PadicNumber {
            p: p.clone(),
            val: m + j,
            unit: (t / ppow(p, j as u32)).mod_floor(&ppow(p, prec)),
            prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        if prec == 0 {
            return Self::zero_mod(&self.p, self.val + other.val);
        }
        PadicNumber {
            p: self.p.clone(),
            val: self.val + other.val,
            unit: (&self.unit * &other.unit).mod_floor(&ppow(&self.p, prec)),
            prec,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.prec == 0 {
            return Err(Error::PrecisionExhausted {
                p: self.p.to_string(),
                cap: 0,
            });
        }
        let m = ppow(&self.p, self.prec);
        Ok(PadicNumber {
            p: self.p.clone(),
            val: -self.val,
            unit: mod_inverse(&self.unit, &m).expect("unit"),
            prec: self.prec,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(&self.p, self.prec.max(1));
        if self.prec == 0 {
            return Self::zero_mod(&self.p, self.val * e as i64);
        }
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Ok(false) when the numbers differ; an error when the available
    /// precision cannot tell them apart.
    pub fn eq_checked(&self, other: &Self) -> Result<bool> {
        let d = self.sub(other);
        if d.is_known_nonzero() {
            Ok(false)
        } else {
            Err(Error::PrecisionExhausted {
                p: self.p.to_string(),
                cap: d.val.max(0) as u32,
            })
        }
    }

    fn is_two(&self) -> bool {
        self.p == BigInt::from(2)
    }

    /// Square class test: Ok(true/false), or an error if undecidable at
    /// this precision.
    pub fn is_square(&self) -> Result<bool> {
        if self.prec == 0 {
            return Err(self.undecided());
        }
        if self.val.rem_euclid(2) != 0 {
            return Ok(false);
        }
        if self.is_two() {
            if self.prec < 3 {
                return Err(self.undecided());
            }
            Ok((&self.unit % BigInt::from(8)) == BigInt::one())
        } else {
            Ok(legendre(&self.unit, &self.p) == 1)
        }
    }

    /// Square root if the number is a square, to the precision it determines.
    pub fn sqrt(&self) -> Result<Option<Self>> {
        if !self.is_square()? {
            return Ok(None);
        }
        let target = if self.is_two() { self.prec - 1 } else { self.prec };
        let approx = if self.is_two() {
            BigInt::one()
        } else {
            sqrt_mod_prime(&self.unit.mod_floor(&self.p), &self.p).expect("quadratic residue")
        };
        let f = vec![-self.unit.clone(), BigInt::zero(), BigInt::one()];
        let r = hensel_lift(&f, &approx, &self.p, target)?;
        Ok(Some(PadicNumber {
            p: self.p.clone(),
            val: self.val / 2,
            unit: r,
            prec: target,
        }))
    }

    fn undecided(&self) -> Error {
        Error::PrecisionExhausted {
            p: self.p.to_string(),
            cap: self.abs_prec().max(0) as u32,
        }
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prec == 0 {
            write!(f, "O({}^{})", self.p, self.val)
        } else {
            write!(f, "{}^{}*{} + O({}^{})", self.p, self.val, self.unit, self.p, self.abs_prec())
        }
    }
}

/// Legendre symbol (a/p) for odd prime p: 1, -1 or 0.
pub fn legendre(a: &BigInt, p: &BigInt) -> i32 {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return 0;
    }
    let e = (p - 1u32) / 2u32;
    if a.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// Tonelli–Shanks square root of a quadratic residue modulo an odd prime.
pub fn sqrt_mod_prime(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    if p == &BigInt::from(2) {
        return Some(a);
    }
    if legendre(&a, p) != 1 {
        return None;
    }
    let one = BigInt::one();
    let pm1: BigInt = p - 1u32;
    let mut q = pm1.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while legendre(&z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + 1u32) / 2u32), p);
    while !t.is_one() {
        let mut i = 0u32;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = (&tt * &tt) % p;
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = c.modpow(&(&one << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (&r * &b) % p;
    }
    Some(r)
}

fn eval_poly(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn deriv(f: &[BigInt]) -> Vec<BigInt> {
    f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

fn val_or(n: &BigInt, p: &BigInt, cap: i64) -> i64 {
    if n.is_zero() {
        cap
    } else {
        int_valuation(n, p).min(cap)
    }
}

/// Lifts an approximate root `a` of f (integer coefficients, low degree
/// first) to a root modulo p^target. Requires v(f(a)) > 2 v(f′(a)); the
/// returned residue is that of the unique root near `a`.
pub fn hensel_lift(f: &[BigInt], a: &BigInt, p: &BigInt, target: u32) -> Result<BigInt> {
    let df = deriv(f);
    let cap = target as i64 * 2 + 64;
    let fa = eval_poly(f, a);
    let dfa = eval_poly(&df, a);
    if dfa.is_zero() {
        return Err(inconclusive(p, target));
    }
    let t = int_valuation(&dfa, p);
    if val_or(&fa, p, cap) <= 2 * t {
        return Err(inconclusive(p, target));
    }
    let work = ppow(p, target + 2 * t as u32 + 1);
    let mut x = a.mod_floor(&work);
    loop {
        let fx = eval_poly(f, &x).mod_floor(&work);
        let vf = val_or(&fx, p, cap);
        if vf - t >= target as i64 || fx.is_zero() {
            return Ok(x.mod_floor(&ppow(p, target)));
        }
        let dfx = eval_poly(&df, &x);
        // v(f′(x)) stays t along the Newton sequence
        let pt = ppow(p, t as u32);
        let u = (&dfx / &pt).mod_floor(&work);
        let uinv = mod_inverse(&u, &work).ok_or_else(|| inconclusive(p, target))?;
        let step = (&fx / &pt) * uinv;
        x = (x - step).mod_floor(&work);
    }
}

fn inconclusive(p: &BigInt, target: u32) -> Error {
    Error::Unsupported(format!("Hensel criterion fails at p = {} (target precision {})", p, target))
}

/// Exact test of whether a nonzero rational is an n-th power in Q_p.
///
/// Uses the residue search mod p^(2 v(n) + 1) followed by Hensel's criterion.
pub fn is_nth_power_rational(q: &Rational, p: &BigInt, n: u32) -> bool {
    assert!(!q.is_zero());
    let x = PadicNumber::from_rational(q, p, 1);
    if x.val.rem_euclid(n as i64) != 0 {
        return false;
    }
    let vn = int_valuation(&BigInt::from(n), p) as u32;
    let k = 2 * vn + 1;
    let unit = PadicNumber::from_rational(q, p, k).unit;
    unit_is_nth_power(&unit, p, n, k)
}

fn unit_is_nth_power(unit: &BigInt, p: &BigInt, n: u32, k: u32) -> bool {
    let m = ppow(p, k);
    if m > BigInt::from(1u64 << 20) {
        // large residue ring: only k = 1 can get here, use the power map
        let pm1: BigInt = p - 1u32;
        let g = pm1.gcd(&BigInt::from(n));
        return unit.modpow(&(&pm1 / g), p).is_one();
    }
    let mm = m.to_u64().unwrap();
    let target = unit.mod_floor(&m);
    (1..mm).any(|t| {
        let t = BigInt::from(t);
        !(&t % p).is_zero() && t.modpow(&BigInt::from(n), &m) == target
    })
}

/// Square test for rationals in Q_p (p = 2 handled by the mod-8 rule).
pub fn is_square_rational(q: &Rational, p: &BigInt) -> bool {
    let x = PadicNumber::from_rational(q, p, 3);
    x.is_square().expect("three digits decide squares")
}

/// Digits of an integer as a residue string, mostly for certificates.
pub fn residue_string(n: &BigInt, p: &BigInt, k: u32) -> String {
    n.mod_floor(&ppow(p, k)).to_string()
}

pub fn abs_val(n: &BigInt) -> BigInt {
    n.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn arithmetic_tracks_precision() {
        let p = b(7);
        let x = PadicNumber::from_rational(&rat(1, 3), &p, 5);
        let y = PadicNumber::from_i64(3, &p, 5);
        let one = x.mul(&y);
        assert_eq!(one, PadicNumber::one(&p, 5));
        let z = PadicNumber::from_i64(49, &p, 4);
        let s = z.add(&PadicNumber::from_i64(-49, &p, 4));
        assert!(!s.is_known_nonzero());
        assert_eq!(s.abs_prec(), 6);
        assert!(s.eq_checked(&PadicNumber::zero_mod(&p, 6)).is_err());
        let w = PadicNumber::from_i64(50, &p, 3).sub(&PadicNumber::from_i64(1, &p, 3));
        assert_eq!(w.valuation(), Some(2));
        assert_eq!(w.prec, 1);
    }

    #[test]
    fn hensel_examples() {
        // w² = 17 over Q₂ from w ≡ 1 mod 8
        let f = vec![b(-17), b(0), b(1)];
        let r = hensel_lift(&f, &b(1), &b(2), 20).unwrap();
        assert_eq!((&r * &r - BigInt::from(17)).mod_floor(&ppow(&b(2), 20)), b(0));
        // w² = 2 over Q₂ has no certified lift from any start
        let g = vec![b(-2), b(0), b(1)];
        for a in 0..16 {
            assert!(hensel_lift(&g, &b(a), &b(2), 10).is_err());
        }
        assert!(!is_square_rational(&int(2), &b(2)));
    }

    #[test]
    fn sixth_powers_in_q2() {
        for u in (1..200i64).step_by(2) {
            assert_eq!(is_nth_power_rational(&int(u), &b(2), 6), u % 8 == 1, "u = {}", u);
        }
    }

    #[test]
    fn cubes_in_q3() {
        assert!(is_nth_power_rational(&int(28), &b(3), 3));
        assert!(is_nth_power_rational(&int(-28), &b(3), 3));
        assert!(!is_nth_power_rational(&int(4), &b(3), 3));
        assert!(is_nth_power_rational(&int(10), &b(3), 3));
        assert!(!is_nth_power_rational(&int(7), &b(7), 3));
    }

    #[test]
    fn tonelli_shanks() {
        let p = b(10009);
        for a in 1..200 {
            if let Some(r) = sqrt_mod_prime(&b(a), &p) {
                assert_eq!((&r * &r) % &p, b(a));
            } else {
                assert_eq!(legendre(&b(a), &p), -1);
            }
        }
        let sq = PadicNumber::from_i64(-3, &b(7), 6).sqrt().unwrap().unwrap();
        assert_eq!(sq.mul(&sq), PadicNumber::from_i64(-3, &b(7), 6));
    }
}
