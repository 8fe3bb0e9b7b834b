//! Sparse ternary forms in x, y, z over a `Field`.

use std::collections::BTreeMap;

use crate::exact::field::Field;

/// Exponents of x, y, z. Keys sort lexicographically with x > y > z, so the
/// largest key is the lex-leading monomial.
pub type Monomial = [u32; 3];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form<E> {
    pub terms: BTreeMap<Monomial, E>,
}

impl<E: Clone> Form<E> {
    pub fn zero() -> Self {
        Form { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m[0] + m[1] + m[2])
    }

    pub fn leading(&self) -> Option<(&Monomial, &E)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }

    /// Applies a coefficient map (which must send nonzero to nonzero or be
    /// followed by `FormRing::clean`).
    pub fn map<G: Clone>(&self, f: impl Fn(&E) -> G) -> Form<G> {
        Form {
            terms: self.terms.iter().map(|(m, c)| (*m, f(c))).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FormRing<F: Field> {
    pub field: F,
}

impl<F: Field> FormRing<F> {
    pub fn new(field: F) -> Self {
        FormRing { field }
    }

    pub fn clean(&self, mut f: Form<F::Elem>) -> Form<F::Elem> {
        f.terms.retain(|_, c| !self.field.is_zero(c));
        f
    }

    pub fn from_terms(&self, terms: Vec<(Monomial, F::Elem)>) -> Form<F::Elem> {
        let mut out: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        for (m, c) in terms {
            let e = out.entry(m).or_insert_with(|| self.field.zero());
            *e = self.field.add(e, &c);
        }
        self.clean(Form { terms: out })
    }

    pub fn monomial(&self, m: Monomial, c: F::Elem) -> Form<F::Elem> {
        self.from_terms(vec![(m, c)])
    }

    pub fn var(&self, i: usize) -> Form<F::Elem> {
        let mut m = [0; 3];
        m[i] = 1;
        self.monomial(m, self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Form<F::Elem> {
        self.monomial([0, 0, 0], c)
    }

    pub fn add(&self, a: &Form<F::Elem>, b: &Form<F::Elem>) -> Form<F::Elem> {
        let mut out = a.terms.clone();
        for (m, c) in &b.terms {
            match out.get_mut(m) {
                Some(e) => *e = self.field.add(e, c),
                None => {
                    out.insert(*m, c.clone());
                }
            }
        }
        self.clean(Form { terms: out })
    }

    pub fn neg(&self, a: &Form<F::Elem>) -> Form<F::Elem> {
        a.map(|c| self.field.neg(c))
    }

    pub fn sub(&self, a: &Form<F::Elem>, b: &Form<F::Elem>) -> Form<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Form<F::Elem>, s: &F::Elem) -> Form<F::Elem> {
        self.clean(a.map(|c| self.field.mul(c, s)))
    }

    pub fn mul(&self, a: &Form<F::Elem>, b: &Form<F::Elem>) -> Form<F::Elem> {
        let mut out: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
                let p = self.field.mul(ca, cb);
                match out.get_mut(&m) {
                    Some(e) => *e = self.field.add(e, &p),
                    None => {
                        out.insert(m, p);
                    }
                }
            }
        }
        self.clean(Form { terms: out })
    }

    pub fn pow(&self, a: &Form<F::Elem>, e: u32) -> Form<F::Elem> {
        let mut acc = self.constant(self.field.one());
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Substitutes x, y, z by the given forms.
    pub fn substitute(&self, a: &Form<F::Elem>, images: &[Form<F::Elem>; 3]) -> Form<F::Elem> {
        let max = |i: usize| a.terms.keys().map(|m| m[i]).max().unwrap_or(0);
        let powers: Vec<Vec<Form<F::Elem>>> = (0..3)
            .map(|i| {
                let mut v = vec![self.constant(self.field.one())];
                for k in 0..max(i) {
                    let next = self.mul(&v[k as usize], &images[i]);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Form::zero();
        for (m, c) in &a.terms {
            let t = self.mul(
                &self.mul(&powers[0][m[0] as usize], &powers[1][m[1] as usize]),
                &powers[2][m[2] as usize],
            );
            out = self.add(&out, &self.scale(&t, c));
        }
        out
    }

    /// Rescales the variables: x ↦ λ₀x, y ↦ λ₁y, z ↦ λ₂z.
    pub fn rescale(&self, a: &Form<F::Elem>, lambda: &[F::Elem; 3]) -> Form<F::Elem> {
        self.clean(Form {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut v = c.clone();
                    for i in 0..3 {
                        v = self.field.mul(&v, &self.field.pow(&lambda[i], m[i] as u64));
                    }
                    (*m, v)
                })
                .collect(),
        })
    }

    pub fn eval(&self, a: &Form<F::Elem>, pt: &[F::Elem; 3]) -> F::Elem {
        let mut acc = self.field.zero();
        for (m, c) in &a.terms {
            let mut t = c.clone();
            for i in 0..3 {
                t = self.field.mul(&t, &self.field.pow(&pt[i], m[i] as u64));
            }
            acc = self.field.add(&acc, &t);
        }
        acc
    }

    /// Divides by the lex-leading coefficient.
    pub fn monic(&self, a: &Form<F::Elem>) -> Form<F::Elem> {
        match a.leading() {
            None => a.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("nonzero leading coefficient");
                self.scale(a, &inv)
            }
        }
    }

    /// Remainder of `a` under division by `q` in lex order: no monomial of the
    /// result is divisible by the leading monomial of `q`. Unique given `q`.
    pub fn rem(&self, a: &Form<F::Elem>, q: &Form<F::Elem>) -> Form<F::Elem> {
        let (lm, lc) = q.leading().expect("division by zero form");
        let lm = *lm;
        let lc_inv = self.field.inv(lc).unwrap();
        let divides = |m: &Monomial| (0..3).all(|i| m[i] >= lm[i]);
        let mut r = a.clone();
        loop {
            let target = r.terms.iter().rev().find(|(m, _)| divides(m)).map(|(m, c)| (*m, c.clone()));
            let Some((m, c)) = target else {
                return r;
            };
            let shift = [m[0] - lm[0], m[1] - lm[1], m[2] - lm[2]];
            let factor = self.field.mul(&c, &lc_inv);
            let mut sub = BTreeMap::new();
            for (qm, qc) in &q.terms {
                sub.insert(
                    [qm[0] + shift[0], qm[1] + shift[1], qm[2] + shift[2]],
                    self.field.mul(qc, &factor),
                );
            }
            r = self.sub(&r, &Form { terms: sub });
        }
    }

    /// Partial derivative in variable i.
    pub fn derivative(&self, a: &Form<F::Elem>, i: usize) -> Form<F::Elem> {
        self.from_terms(
            a.terms
                .iter()
                .filter(|(m, _)| m[i] > 0)
                .map(|(m, c)| {
                    let mut m2 = *m;
                    m2[i] -= 1;
                    (m2, self.field.mul(c, &self.field.from_i64(m[i] as i64)))
                })
                .collect(),
        )
    }
}
