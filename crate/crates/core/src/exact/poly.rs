//! Dense univariate polynomials over a `Field`, coefficients low degree first.

use super::field::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    pub coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

/// Polynomial arithmetic bound to a field context.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    pub field: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F) -> Self {
        PolyRing { field }
    }

    pub fn make(&self, mut coeffs: Vec<F::Elem>) -> Poly<F::Elem> {
        while let Some(c) = coeffs.last() {
            if self.field.is_zero(c) {
                coeffs.pop();
            } else {
                break;
            }
        }
        Poly { coeffs }
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.make(vec![c])
    }

    /// x - r
    pub fn linear(&self, r: &F::Elem) -> Poly<F::Elem> {
        self.make(vec![self.field.neg(r), self.field.one()])
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.field.zero();
        let out = (0..n)
            .map(|i| {
                let x = a.coeffs.get(i).unwrap_or(&z);
                let y = b.coeffs.get(i).unwrap_or(&z);
                self.field.add(x, y)
            })
            .collect();
        self.make(out)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.make(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut out = vec![self.field.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(x, y));
            }
        }
        self.make(out)
    }

    pub fn pow(&self, a: &Poly<F::Elem>, e: u32) -> Poly<F::Elem> {
        let mut acc = self.constant(self.field.one());
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Division with remainder; panics on division by zero.
    pub fn divrem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>) {
        let db = b.degree().expect("division by the zero polynomial");
        let inv = self.field.inv(b.lead().unwrap()).unwrap();
        let mut r = a.coeffs.clone();
        let mut q = vec![self.field.zero(); a.coeffs.len().saturating_sub(db).max(1)];
        while r.len() > db && !r.is_empty() {
            let lead = r.last().unwrap().clone();
            if self.field.is_zero(&lead) {
                r.pop();
                continue;
            }
            let c = self.field.mul(&lead, &inv);
            let shift = r.len() - 1 - db;
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[shift + i] = self.field.sub(&r[shift + i], &self.field.mul(&c, bc));
            }
            q[shift] = c;
            r.pop();
        }
        (self.make(q), self.make(r))
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.lead() {
            None => self.zero(),
            Some(l) => self.scale(a, &self.field.inv(l).unwrap()),
        }
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = self.divrem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    pub fn eval(&self, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        let mut acc = self.field.zero();
        for c in a.coeffs.iter().rev() {
            acc = self.field.add(&self.field.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.make(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| self.field.mul(c, &self.field.from_i64(i as i64)))
                .collect(),
        )
    }

    /// Largest m with x^m dividing a (a nonzero).
    pub fn order_at_zero(&self, a: &Poly<F::Elem>) -> usize {
        a.coeffs
            .iter()
            .position(|c| !self.field.is_zero(c))
            .expect("order of the zero polynomial")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::Rationals;
    use crate::exact::finite::FiniteField;
    use crate::exact::rational::int;

    #[test]
    fn gcd_over_q() {
        let r = PolyRing::new(Rationals);
        let a = r.mul(&r.linear(&int(1)), &r.linear(&int(2)));
        let b = r.mul(&r.linear(&int(2)), &r.linear(&int(-5)));
        assert_eq!(r.gcd(&a, &b), r.linear(&int(2)));
        let (q, rem) = r.divrem(&r.mul(&a, &b), &a);
        assert!(rem.is_zero());
        assert_eq!(q, b);
    }

    #[test]
    fn gcd_over_fq() {
        let f = FiniteField::new(5, 2);
        let r = PolyRing::new(f.clone());
        let g = f.generator();
        let a = r.pow(&r.linear(&g), 3);
        let b = r.mul(&r.linear(&g), &r.linear(&f.one()));
        assert_eq!(r.gcd(&a, &b), r.linear(&g));
        assert_eq!(r.order_at_zero(&r.pow(&r.linear(&f.zero()), 4)), 4);
    }
}
