//! Finite fields F_{p^k} with a fixed irreducible modulus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::field::Field;
use super::rational::Rational;
use super::tower::TowerElement;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    k: usize,
    /// Monic irreducible of degree k, low coefficient first (length k + 1).
    modulus: Vec<u64>,
}

pub type FqElem = Vec<u64>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` modulo a monic `m` over F_p.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &mc) in m.iter().enumerate() {
            let sub = mulmod(lead, mc, p);
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let inv = powmod(*y.last().unwrap(), p - 2, p);
        let monic: Vec<u64> = y.iter().map(|&c| mulmod(c, inv, p)).collect();
        let r = poly_rem(&x, &monic, p);
        x = monic;
        y = r;
    }
    x
}

fn poly_powmod(base: &[u64], mut e: BigInt, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    let two = BigInt::from(2);
    while !e.is_zero() {
        if e.is_odd() {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        e /= &two;
    }
    acc
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    let x = vec![0u64, 1];
    let pk = num_traits::pow(BigInt::from(p), k);
    let mut t = poly_powmod(&x, pk, f, p);
    // x^{p^k} - x ≡ 0
    while t.len() < 2 {
        t.push(0);
    }
    t[1] = (t[1] + p - 1) % p;
    trim(&mut t);
    if !t.is_empty() {
        return false;
    }
    let mut kk = k;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= kk {
        if kk % d == 0 {
            primes.push(d);
            while kk % d == 0 {
                kk /= d;
            }
        }
        d += 1;
    }
    if kk > 1 {
        primes.push(kk);
    }
    for r in primes {
        let e = num_traits::pow(BigInt::from(p), k / r);
        let mut t = poly_powmod(&x, e, f, p);
        while t.len() < 2 {
            t.push(0);
        }
        t[1] = (t[1] + p - 1) % p;
        trim(&mut t);
        let g = poly_gcd(f, &t, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl FiniteField {
    /// F_{p^k}; the modulus is the first monic irreducible in lexicographic
    /// order of its coefficient list (constant term varying fastest).
    pub fn new(p: u64, k: usize) -> Self {
        assert!(p >= 2 && k >= 1);
        if k == 1 {
            return FiniteField { p, k, modulus: vec![0, 1] };
        }
        let count = p.pow(k as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(k + 1);
            let mut t = idx;
            for _ in 0..k {
                f.push(t % p);
                t /= p;
            }
            f.push(1);
            if f[0] != 0 && is_irreducible(&f, p) {
                return FiniteField { p, k, modulus: f };
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    pub fn prime(p: u64) -> Self {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn element(&self, coeffs: &[u64]) -> FqElem {
        let mut v: Vec<u64> = coeffs.iter().map(|c| c % self.p).collect();
        v.resize(self.k, 0);
        let r = poly_rem(&v, &self.modulus, self.p);
        self.pad(r)
    }

    fn pad(&self, mut v: Vec<u64>) -> FqElem {
        v.resize(self.k, 0);
        v
    }

    /// The generator x of the polynomial basis (equal to 0 when k = 1 is
    /// meaningless, so k = 1 returns 1).
    pub fn generator(&self) -> FqElem {
        if self.k == 1 {
            return self.one();
        }
        self.element(&[0, 1])
    }

    /// Enumerates all field elements in a fixed order (small fields only).
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order()).map(move |mut idx| {
            let mut v = Vec::with_capacity(self.k);
            for _ in 0..self.k {
                v.push(idx % self.p);
                idx /= self.p;
            }
            v
        })
    }

    pub fn from_rational(&self, q: &Rational) -> Option<FqElem> {
        let p = BigInt::from(self.p);
        let d = q.denom().mod_floor(&p).to_u64()?;
        if d == 0 {
            return None;
        }
        let n = q.numer().mod_floor(&p).to_u64()?;
        Some(self.pad(vec![mulmod(n, powmod(d, self.p - 2, self.p), self.p)]))
    }

    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        self.pow(a, self.p)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: &FqElem) -> u64 {
        let n = self.order() - 1;
        let mut best = n;
        let mut d = 1;
        while d * d <= n {
            if n % d == 0 {
                for c in [d, n / d] {
                    if c < best && self.pow(a, c) == self.one() {
                        best = c;
                    }
                }
            }
            d += 1;
        }
        best
    }

    /// All elements of exact multiplicative order n, in enumeration order.
    pub fn roots_of_unity_of_order(&self, n: u64) -> Vec<FqElem> {
        if (self.order() - 1) % n != 0 {
            return Vec::new();
        }
        self.elements()
            .filter(|e| !self.is_zero(e) && self.pow(e, n) == self.one() && self.mult_order(e) == n)
            .collect()
    }

    /// All roots of x^n = a (small fields only).
    pub fn nth_roots(&self, a: &FqElem, n: u64) -> Vec<FqElem> {
        self.elements().filter(|e| self.pow(e, n) == *a).collect()
    }

    pub fn is_square(&self, a: &FqElem) -> bool {
        if self.is_zero(a) || self.p == 2 {
            return true;
        }
        self.pow(a, (self.order() - 1) / 2) == self.one()
    }
}

impl Field for FiniteField {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        vec![0; self.k]
    }
    fn one(&self) -> FqElem {
        let mut v = vec![0; self.k];
        v[0] = 1 % self.p;
        v
    }
    fn from_i64(&self, n: i64) -> FqElem {
        let r = n.rem_euclid(self.p as i64) as u64;
        self.pad(vec![r])
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        if self.k == 1 {
            return vec![mulmod(a[0], b[0], self.p)];
        }
        let prod = poly_mul(a, b, self.p);
        self.pad(poly_rem(&prod, &self.modulus, self.p))
    }
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// Tonelli–Shanks over F_q (q odd); characteristic 2 uses the Frobenius inverse.
    fn sqrt(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        let q = self.order();
        if self.p == 2 {
            return Some(self.pow(a, q / 2));
        }
        if !self.is_square(a) {
            return None;
        }
        let mut s = 0;
        let mut t = q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = self
            .elements()
            .find(|e| !self.is_zero(e) && !self.is_square(e))
            .expect("a nonresidue exists in odd characteristic");
        let mut m = s;
        let mut c = self.pow(&z, t);
        let mut x = self.pow(a, (t + 1) / 2);
        let mut b = self.pow(a, t);
        let one = self.one();
        while b != one {
            let mut i = 0;
            let mut bb = b.clone();
            while bb != one {
                bb = self.mul(&bb, &bb);
                i += 1;
            }
            let mut cc = c.clone();
            for _ in 0..(m - i - 1) {
                cc = self.mul(&cc, &cc);
            }
            x = self.mul(&x, &cc);
            c = self.mul(&cc, &cc);
            b = self.mul(&b, &c);
            m = i;
        }
        Some(x)
    }
}

/// A ring map Q(ζ, s) → F_q fixed by the images of ζ and s.
#[derive(Clone, Debug)]
pub struct TowerEmbedding {
    pub field: FiniteField,
    pub zeta: FqElem,
    pub s: FqElem,
}

impl TowerEmbedding {
    /// Checks that the chosen images satisfy Φ₁₂(ζ̄) = 0 and s̄³ = 2.
    pub fn new(field: FiniteField, zeta: FqElem, s: FqElem) -> Result<Self> {
        let f = &field;
        let z2 = f.mul(&zeta, &zeta);
        let z4 = f.mul(&z2, &z2);
        let phi = f.add(&f.sub(&z4, &z2), &f.one());
        if !f.is_zero(&phi) {
            return Err(Error::Embedding("image of zeta is not a root of x^4 - x^2 + 1".into()));
        }
        if f.pow(&s, 3) != f.from_i64(2) {
            return Err(Error::Embedding("image of s is not a cube root of 2".into()));
        }
        Ok(TowerEmbedding { field, zeta, s })
    }

    /// All embeddings into the given field, in enumeration order.
    pub fn all(field: &FiniteField) -> Vec<TowerEmbedding> {
        let zetas = field.roots_of_unity_of_order(12);
        let ss = field.nth_roots(&field.from_i64(2), 3);
        let mut out = Vec::new();
        for z in &zetas {
            for s in &ss {
                out.push(TowerEmbedding {
                    field: field.clone(),
                    zeta: z.clone(),
                    s: s.clone(),
                });
            }
        }
        out
    }

    pub fn map(&self, x: &TowerElement) -> Result<FqElem> {
        let f = &self.field;
        let mut acc = f.zero();
        for j in 0..3 {
            for i in 0..4 {
                let c = x.coord(i, j);
                if c.is_zero() {
                    continue;
                }
                let cr = f.from_rational(c).ok_or_else(|| {
                    Error::Embedding(format!("coefficient {} not integral at {}", c, f.p()))
                })?;
                let mono = f.mul(&f.pow(&self.zeta, i as u64), &f.pow(&self.s, j as u64));
                acc = f.add(&acc, &f.mul(&cr, &mono));
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f25_basics() {
        let f = FiniteField::new(5, 2);
        assert_eq!(f.order(), 25);
        let count = f.elements().count();
        assert_eq!(count, 25);
        for a in f.elements() {
            // Frobenius fixed-point property x^{q} = x
            assert_eq!(f.pow(&a, 25), a);
            if !f.is_zero(&a) {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
            if let Some(r) = f.sqrt(&a) {
                assert_eq!(f.mul(&r, &r), a);
            }
        }
        assert_eq!(f.roots_of_unity_of_order(12).len(), 4);
        assert_eq!(f.nth_roots(&f.from_i64(2), 3).len(), 3);
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative() {
        let f = FiniteField::new(7, 3);
        let elems: Vec<_> = f.elements().step_by(17).collect();
        for a in &elems {
            for b in &elems {
                assert_eq!(f.frobenius(&f.add(a, b)), f.add(&f.frobenius(a), &f.frobenius(b)));
                assert_eq!(f.frobenius(&f.mul(a, b)), f.mul(&f.frobenius(a), &f.frobenius(b)));
            }
        }
    }

    #[test]
    fn prime_field_sqrt() {
        let f = FiniteField::prime(97);
        for n in 1..97 {
            let a = f.from_i64(n);
            match f.sqrt(&a) {
                Some(r) => assert_eq!(f.mul(&r, &r), a),
                None => assert!(!f.is_square(&a)),
            }
        }
    }

    #[test]
    fn embeddings_into_f25() {
        let f = FiniteField::new(5, 2);
        let embs = TowerEmbedding::all(&f);
        assert_eq!(embs.len(), 12);
        let t = crate::exact::tower::Tower;
        let sq3 = t.sqrt3();
        for e in &embs {
            let img = e.map(&sq3).unwrap();
            assert_eq!(f.mul(&img, &img), f.from_i64(3));
        }
    }
}
