use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Reduced fraction with positive denominator (the `num-rational` invariant).
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact n-th root of an integer, if it exists. Negative inputs only have odd roots.
pub fn integer_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if k == 0 {
        return None;
    }
    if n.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return integer_nth_root(&(-n), k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Decides whether `q` is an n-th power in Q and returns a root when it is.
///
/// Only n in {2, 3, 6} are meaningful for this crate but any positive n works.
pub fn rational_power_class(q: &Rational, n: u32) -> Option<Rational> {
    assert!(!q.is_zero(), "power class of zero is undefined");
    let num = integer_nth_root(q.numer(), n)?;
    let den = integer_nth_root(q.denom(), n)?;
    Some(Rational::new(num, den))
}

pub fn is_square(q: &Rational) -> bool {
    rational_power_class(q, 2).is_some()
}

pub fn is_cube(q: &Rational) -> bool {
    rational_power_class(q, 3).is_some()
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    assert!(!n.is_zero(), "valuation of zero");
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(q: &Rational, p: &BigInt) -> i64 {
    int_valuation(q.numer(), p) - int_valuation(q.denom(), p)
}

/// Writes a nonzero rational as p^v * u with u a p-adic unit.
pub fn split_valuation(q: &Rational, p: &BigInt) -> (i64, Rational) {
    let v = valuation(q, p);
    let pv = num_traits::pow(p.clone(), v.unsigned_abs() as usize);
    let u = if v >= 0 {
        q / Rational::from_integer(pv)
    } else {
        q * Rational::from_integer(pv)
    };
    (v, u)
}

/// Reduction of a p-integral rational modulo m = p^k (m > 1).
pub fn reduce_mod(q: &Rational, m: &BigInt) -> Option<BigInt> {
    let den = q.denom().mod_floor(m);
    let inv = mod_inverse(&den, m)?;
    Some((q.numer() * inv).mod_floor(m))
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else if e.gcd == -BigInt::one() {
        Some((-e.x).mod_floor(m))
    } else {
        None
    }
}

/// Distinct prime factors of |n| by trial division (for desk-sized inputs).
pub fn small_prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        if (&m % &d).is_zero() {
            out.push(d.clone());
            while (&m % &d).is_zero() {
                m /= &d;
            }
        }
        d += 1;
    }
    if m > BigInt::one() {
        out.push(m);
    }
    out
}

/// Squarefree test for nonzero integers (trial division).
pub fn is_squarefree(n: &BigInt) -> bool {
    small_prime_factors(n)
        .iter()
        .all(|p| !(n % (p * p)).is_zero())
}

pub fn sign(q: &Rational) -> Sign {
    q.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_classes() {
        assert_eq!(rational_power_class(&int(8), 3), Some(int(2)));
        assert_eq!(rational_power_class(&int(28), 3), None);
        assert_eq!(rational_power_class(&int(-27), 3), Some(int(-3)));
        assert_eq!(rational_power_class(&int(-4), 2), None);
        assert_eq!(rational_power_class(&rat(64, 729), 6), Some(rat(2, 3)));
        for c in [-7i64, -2, 3, 11, 1234] {
            let cube = int(c * c * c);
            assert_eq!(rational_power_class(&cube, 3), Some(int(c)));
        }
    }

    #[test]
    fn valuations() {
        let p = BigInt::from(7);
        assert_eq!(valuation(&rat(98, 3), &p), 2);
        assert_eq!(valuation(&rat(3, 49), &p), -2);
        let (v, u) = split_valuation(&rat(-28, 5), &BigInt::from(2));
        assert_eq!(v, 2);
        assert_eq!(u, rat(-7, 5));
        assert_eq!(reduce_mod(&rat(1, 3), &BigInt::from(7)), Some(BigInt::from(5)));
    }

    #[test]
    fn squarefree() {
        assert!(is_squarefree(&BigInt::from(-7)));
        assert!(is_squarefree(&BigInt::from(1)));
        assert!(!is_squarefree(&BigInt::from(18)));
        assert!(is_squarefree(&BigInt::from(91)));
    }
}
