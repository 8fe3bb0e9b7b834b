//! Intersection numbers of curves {q = 0, w = W} on w² = F(x, y, z).
//!
//! The first curve's plane curve is parametrized by binary forms γ(t, u). On
//! the surface the ideal of the second curve is (q₂, w − W₂), so the local
//! multiplicity at a common point is the smaller of the orders of q₂∘γ and
//! (W₁ − W₂)∘γ at its parameter, and the total is the degree of their gcd.

use crate::error::{Error, Result};
use crate::exact::field::Field;
use crate::exact::poly::{Poly, PolyRing};
use crate::geometry::divisor::Divisor;
use crate::geometry::forms::{Form, FormRing};

/// Homogeneous polynomial in (t, u): `coeffs[k]` multiplies t^k u^{deg-k}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm<E> {
    pub degree: usize,
    pub coeffs: Vec<E>,
}

/// γ(t, u) with image the plane curve of a line or smooth conic.
#[derive(Clone, Debug)]
pub struct Parametrization<E> {
    pub degree: usize,
    pub coords: [BinaryForm<E>; 3],
    /// conic data (P0, E1, E2) for inverting the map
    frame: Option<[[E; 3]; 3]>,
    /// line data (P0, P1)
    line_points: Option<[[E; 3]; 2]>,
}

pub struct Engine<F: Field> {
    pub ring: FormRing<F>,
    pub polys: PolyRing<F>,
}

impl<F: Field> Engine<F> {
    pub fn new(field: F) -> Self {
        Engine {
            ring: FormRing::new(field.clone()),
            polys: PolyRing::new(field),
        }
    }

    fn field(&self) -> &F {
        &self.ring.field
    }

    fn bf_zero(&self, degree: usize) -> BinaryForm<F::Elem> {
        BinaryForm {
            degree,
            coeffs: vec![self.field().zero(); degree + 1],
        }
    }

    fn bf_add(&self, a: &BinaryForm<F::Elem>, b: &BinaryForm<F::Elem>) -> BinaryForm<F::Elem> {
        assert_eq!(a.degree, b.degree);
        BinaryForm {
            degree: a.degree,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.field().add(x, y)).collect(),
        }
    }

    fn bf_scale(&self, a: &BinaryForm<F::Elem>, c: &F::Elem) -> BinaryForm<F::Elem> {
        BinaryForm {
            degree: a.degree,
            coeffs: a.coeffs.iter().map(|x| self.field().mul(x, c)).collect(),
        }
    }

    fn bf_mul(&self, a: &BinaryForm<F::Elem>, b: &BinaryForm<F::Elem>) -> BinaryForm<F::Elem> {
        let mut out = self.bf_zero(a.degree + b.degree);
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.field().is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out.coeffs[i + j] = self.field().add(&out.coeffs[i + j], &self.field().mul(x, y));
            }
        }
        out
    }

    fn bf_is_zero(&self, a: &BinaryForm<F::Elem>) -> bool {
        a.coeffs.iter().all(|c| self.field().is_zero(c))
    }

    /// Pulls a ternary form back along γ.
    pub fn pullback(&self, f: &Form<F::Elem>, gamma: &Parametrization<F::Elem>) -> BinaryForm<F::Elem> {
        let deg = f.degree().unwrap_or(0) as usize * gamma.degree;
        let mut out = self.bf_zero(deg);
        let one = BinaryForm {
            degree: 0,
            coeffs: vec![self.field().one()],
        };
        let max_e = f.terms.keys().flat_map(|m| m.iter().copied()).max().unwrap_or(0) as usize;
        let powers: Vec<Vec<BinaryForm<F::Elem>>> = (0..3)
            .map(|i| {
                let mut v = vec![one.clone()];
                for k in 0..max_e {
                    let next = self.bf_mul(&v[k], &gamma.coords[i]);
                    v.push(next);
                }
                v
            })
            .collect();
        for (m, c) in &f.terms {
            let t = self.bf_mul(
                &self.bf_mul(&powers[0][m[0] as usize], &powers[1][m[1] as usize]),
                &powers[2][m[2] as usize],
            );
            out = self.bf_add(&out, &self.bf_scale(&t, c));
        }
        out
    }

    fn linear_coeffs(&self, q: &Form<F::Elem>) -> [F::Elem; 3] {
        let f = self.field();
        let get = |m: [u32; 3]| q.coeff(&m).cloned().unwrap_or_else(|| f.zero());
        [get([1, 0, 0]), get([0, 1, 0]), get([0, 0, 1])]
    }

    /// Symmetric matrix B with q(X) = Xᵀ B X (char ≠ 2).
    fn quadric_matrix(&self, q: &Form<F::Elem>) -> [[F::Elem; 3]; 3] {
        let f = self.field();
        let half = f.inv(&f.from_i64(2)).expect("characteristic 2 is not supported");
        let get = |m: [u32; 3]| q.coeff(&m).cloned().unwrap_or_else(|| f.zero());
        let xx = get([2, 0, 0]);
        let yy = get([0, 2, 0]);
        let zz = get([0, 0, 2]);
        let xy = f.mul(&get([1, 1, 0]), &half);
        let xz = f.mul(&get([1, 0, 1]), &half);
        let yz = f.mul(&get([0, 1, 1]), &half);
        [
            [xx, xy.clone(), xz.clone()],
            [xy, yy, yz.clone()],
            [xz, yz, zz],
        ]
    }

    fn bilinear(&self, b: &[[F::Elem; 3]; 3], x: &[F::Elem; 3], y: &[F::Elem; 3]) -> F::Elem {
        let f = self.field();
        let mut acc = f.zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = f.add(&acc, &f.mul(&f.mul(&x[i], &b[i][j]), &y[j]));
            }
        }
        acc
    }

    fn unit(&self, i: usize) -> [F::Elem; 3] {
        let f = self.field();
        let mut v = [f.zero(), f.zero(), f.zero()];
        v[i] = f.one();
        v
    }

    pub fn parametrize(&self, d: &Divisor<F::Elem>) -> Result<Parametrization<F::Elem>> {
        let f = self.field();
        match d.plane.degree() {
            Some(1) => {
                let l = self.linear_coeffs(&d.plane);
                // two independent points on the line l·X = 0
                let k = (0..3).find(|&i| !f.is_zero(&l[i])).unwrap();
                let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
                let mut pts = Vec::new();
                for &j in &others {
                    let mut p = self.unit(j);
                    p[k] = f.neg(&f.div(&l[j], &l[k]).unwrap());
                    pts.push(p);
                }
                let (p0, p1) = (pts[0].clone(), pts[1].clone());
                let coords = std::array::from_fn(|i| BinaryForm {
                    degree: 1,
                    // t·P0 + u·P1: coeffs[0] multiplies u, coeffs[1] multiplies t
                    coeffs: vec![p1[i].clone(), p0[i].clone()],
                });
                Ok(Parametrization {
                    degree: 1,
                    coords,
                    frame: None,
                    line_points: Some([p0, p1]),
                })
            }
            Some(2) => {
                let p0 = d
                    .base_point
                    .clone()
                    .ok_or_else(|| Error::Degenerate(format!("{}: conic without base point", d.label)))?;
                let b = self.quadric_matrix(&d.plane);
                let k = (0..3).find(|&i| !f.is_zero(&p0[i])).unwrap();
                let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
                let e1 = self.unit(others[0]);
                let e2 = self.unit(others[1]);
                // V = t E1 + u E2; γ = q(V) P0 − 2 B(P0, V) V
                let lin = |e: &[F::Elem; 3]| self.bilinear(&b, &p0, e);
                let b1 = lin(&e1);
                let b2 = lin(&e2);
                let q11 = self.bilinear(&b, &e1, &e1);
                let q12 = self.bilinear(&b, &e1, &e2);
                let q22 = self.bilinear(&b, &e2, &e2);
                // q(V) = q11 t² + 2 q12 t u + q22 u²  → coeffs [u², tu, t²]
                let qv = BinaryForm {
                    degree: 2,
                    coeffs: vec![q22, f.add(&q12, &q12), q11],
                };
                let bv = BinaryForm {
                    degree: 1,
                    coeffs: vec![b2, b1],
                };
                let two = f.from_i64(2);
                let coords = std::array::from_fn(|i| {
                    let vi = BinaryForm {
                        degree: 1,
                        coeffs: vec![e2[i].clone(), e1[i].clone()],
                    };
                    let first = self.bf_scale(&qv, &p0[i]);
                    let second = self.bf_scale(&self.bf_mul(&bv, &vi), &f.neg(&two));
                    self.bf_add(&first, &second)
                });
                let gamma = Parametrization {
                    degree: 2,
                    coords,
                    frame: Some([p0, e1, e2]),
                    line_points: None,
                };
                if !self.bf_is_zero(&self.pullback(&d.plane, &gamma)) {
                    return Err(Error::Degenerate(format!("{}: parametrization leaves the conic", d.label)));
                }
                Ok(gamma)
            }
            _ => Err(Error::Degenerate(format!("{}: plane curve must be a line or conic", d.label))),
        }
    }

    fn dehomogenize(&self, a: &BinaryForm<F::Elem>) -> Poly<F::Elem> {
        self.polys.make(a.coeffs.clone())
    }

    /// Degree of the gcd of two binary forms, at least one nonzero.
    fn gcd_degree(&self, a: &BinaryForm<F::Elem>, b: &BinaryForm<F::Elem>) -> usize {
        let pa = self.dehomogenize(a);
        let pb = self.dehomogenize(b);
        let inf = |p: &Poly<F::Elem>, d: usize| match p.degree() {
            Some(k) => d - k,
            None => usize::MAX,
        };
        let g = self.polys.gcd(&pa, &pb);
        let affine = g.degree().unwrap_or(0);
        let at_inf = inf(&pa, a.degree).min(inf(&pb, b.degree));
        affine + at_inf
    }

    /// The two generators q₂∘γ and (W₁ − W₂)∘γ restricted to the first curve.
    pub fn restricted_generators(
        &self,
        d1: &Divisor<F::Elem>,
        d2: &Divisor<F::Elem>,
    ) -> Result<(Parametrization<F::Elem>, BinaryForm<F::Elem>, BinaryForm<F::Elem>)> {
        let gamma = self.parametrize(d1)?;
        let g1 = self.pullback(&d2.plane, &gamma);
        let dw = self.ring.sub(&d1.w, &d2.w);
        // W₁ − W₂ may vanish identically; keep its nominal degree 3
        let g2 = if dw.is_zero() {
            self.bf_zero(3 * gamma.degree)
        } else {
            self.pullback(&dw, &gamma)
        };
        Ok((gamma, g1, g2))
    }

    /// D₁·D₂ for curves on the surface (−2 when the curves coincide).
    /// D₁·D₂. Curves over reducible plane conics (possible after reduction
    /// mod p) are split into their line components and paired bilinearly.
    pub fn intersection_number(&self, d1: &Divisor<F::Elem>, d2: &Divisor<F::Elem>) -> Result<i64> {
        let c1 = self.components(d1)?;
        let c2 = self.components(d2)?;
        let mut total = 0;
        for a in &c1 {
            for b in &c2 {
                total += self.irreducible_intersection(a, b)?;
            }
        }
        Ok(total)
    }

    fn irreducible_intersection(&self, d1: &Divisor<F::Elem>, d2: &Divisor<F::Elem>) -> Result<i64> {
        let (_, g1, g2) = self.restricted_generators(d1, d2)?;
        let z1 = self.bf_is_zero(&g1);
        let z2 = self.bf_is_zero(&g2);
        Ok(match (z1, z2) {
            (true, true) => -2,
            (true, false) => g2.degree as i64,
            (false, true) => g1.degree as i64,
            (false, false) => self.gcd_degree(&g1, &g2) as i64,
        })
    }

    /// The curve itself, or its two line components when the plane conic is
    /// a pair of distinct lines defined over the field.
    pub fn components(&self, d: &Divisor<F::Elem>) -> Result<Vec<Divisor<F::Elem>>> {
        if d.plane.degree() != Some(2) {
            return Ok(vec![d.clone()]);
        }
        let f = self.field();
        let b = self.quadric_matrix(&d.plane);
        let cross = |x: &[F::Elem; 3], y: &[F::Elem; 3]| -> [F::Elem; 3] {
            [
                f.sub(&f.mul(&x[1], &y[2]), &f.mul(&x[2], &y[1])),
                f.sub(&f.mul(&x[2], &y[0]), &f.mul(&x[0], &y[2])),
                f.sub(&f.mul(&x[0], &y[1]), &f.mul(&x[1], &y[0])),
            ]
        };
        let dot = |x: &[F::Elem; 3], y: &[F::Elem; 3]| (0..3).fold(f.zero(), |acc, i| f.add(&acc, &f.mul(&x[i], &y[i])));
        let is_null = |v: &[F::Elem; 3]| v.iter().all(|c| f.is_zero(c));
        if !f.is_zero(&dot(&b[0], &cross(&b[1], &b[2]))) {
            return Ok(vec![d.clone()]);
        }
        // singular point: cross product of two independent rows
        let sing = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| cross(&b[i], &b[j]))
            .find(|v| !is_null(v))
            .ok_or_else(|| Error::Unsupported(format!("{}: plane conic is a double line", d.label)))?;
        // restrict to the coordinate line X_k = 0 missing the singular point
        let k = (0..3).find(|&i| !f.is_zero(&sing[i])).unwrap();
        let (i, j) = match k {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        // q(e_i s + e_j t) = A s² + 2B s t + C t²
        let (a, bb, c) = (b[i][i].clone(), b[i][j].clone(), b[j][j].clone());
        let disc = f.sub(&f.mul(&bb, &bb), &f.mul(&a, &c));
        let root = f
            .sqrt(&disc)
            .ok_or_else(|| Error::Unsupported(format!("{}: conic splits only over an extension", d.label)))?;
        let mut pts = Vec::new();
        if f.is_zero(&a) {
            // s = 1, t = 0 is a root; the other is C t + 2B s = 0
            pts.push(self.unit(i));
            let mut q = self.unit(i);
            q[i] = c.clone();
            q[j] = f.neg(&f.add(&bb, &bb));
            pts.push(q);
        } else {
            for sign in [1i64, -1] {
                // s/t = (−B ± √disc)/A
                let mut q = [f.zero(), f.zero(), f.zero()];
                q[i] = f.add(&f.neg(&bb), &f.mul(&f.from_i64(sign), &root));
                q[j] = a.clone();
                pts.push(q);
            }
        }
        let ring = &self.ring;
        let mut out = Vec::new();
        for (n, q) in pts.iter().enumerate() {
            let l = cross(&sing, q);
            if is_null(&l) {
                return Err(Error::Unsupported(format!("{}: plane conic is a double line", d.label)));
            }
            let plane = ring.from_terms(vec![
                ([1, 0, 0], l[0].clone()),
                ([0, 1, 0], l[1].clone()),
                ([0, 0, 1], l[2].clone()),
            ]);
            let plane = ring.monic(&plane);
            let w = ring.rem(&d.w, &plane);
            out.push(Divisor {
                label: format!("{}.{}", d.label, n + 1),
                plane,
                w,
                base_point: None,
            });
        }
        if out[0].plane == out[1].plane {
            return Err(Error::Unsupported(format!("{}: plane conic is a double line", d.label)));
        }
        Ok(out)
    }

    pub fn parameter_of(&self, gamma: &Parametrization<F::Elem>, p: &[F::Elem; 3]) -> Result<[F::Elem; 2]> {
        let f = self.field();
        if let Some([p0, p1]) = &gamma.line_points {
            // p = t P0 + u P1
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let det = f.sub(&f.mul(&p0[i], &p1[j]), &f.mul(&p0[j], &p1[i]));
                if !f.is_zero(&det) {
                    let t = f.div(&f.sub(&f.mul(&p[i], &p1[j]), &f.mul(&p[j], &p1[i])), &det).unwrap();
                    let u = f.div(&f.sub(&f.mul(&p0[i], &p[j]), &f.mul(&p0[j], &p[i])), &det).unwrap();
                    return Ok([t, u]);
                }
            }
            return Err(Error::Degenerate("line points are dependent".into()));
        }
        let [p0, e1, e2] = gamma.frame.as_ref().expect("conic frame");
        // frame is P0 with two unit vectors: solve p = a P0 + b E1 + c E2
        let k = (0..3).find(|&i| f.is_zero(&e1[i]) && f.is_zero(&e2[i])).unwrap();
        let a = f.div(&p[k], &p0[k]).unwrap();
        let i1 = (0..3).find(|&i| !f.is_zero(&e1[i])).unwrap();
        let i2 = (0..3).find(|&i| !f.is_zero(&e2[i])).unwrap();
        let b = f.sub(&p[i1], &f.mul(&a, &p0[i1]));
        let c = f.sub(&p[i2], &f.mul(&a, &p0[i2]));
        if !f.is_zero(&b) || !f.is_zero(&c) {
            return Ok([b, c]);
        }
        // p = P0: handled by base_parameter
        Err(Error::Degenerate("base point parameter requires the tangent direction".into()))
    }

    fn order_at(&self, a: &BinaryForm<F::Elem>, par: &[F::Elem; 2]) -> Option<usize> {
        if self.bf_is_zero(a) {
            return None;
        }
        let f = self.field();
        let p = self.dehomogenize(a);
        if f.is_zero(&par[1]) {
            return Some(a.degree - p.degree().unwrap());
        }
        let r = f.div(&par[0], &par[1]).unwrap();
        let lin = self.polys.linear(&r);
        let mut q = p;
        let mut k = 0;
        loop {
            let (quo, rem) = self.polys.divrem(&q, &lin);
            if !rem.is_zero() {
                return Some(k);
            }
            q = quo;
            k += 1;
        }
    }

    /// Local multiplicity at a point [X:Y:Z] of the first curve (w is then
    /// determined by its w-form). Zero if the point is not on the second curve.
    pub fn intersection_multiplicity(
        &self,
        d1: &Divisor<F::Elem>,
        d2: &Divisor<F::Elem>,
        p: &[F::Elem; 3],
    ) -> Result<usize> {
        let (gamma, g1, g2) = self.restricted_generators(d1, d2)?;
        if self.bf_is_zero(&g1) && self.bf_is_zero(&g2) {
            return Err(Error::Degenerate("equal curves have no local multiplicity".into()));
        }
        let par = match self.parameter_of(&gamma, p) {
            Ok(par) => par,
            Err(_) => self.base_parameter(&gamma),
        };
        let o1 = self.order_at(&g1, &par);
        let o2 = self.order_at(&g2, &par);
        Ok(match (o1, o2) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!(),
        })
    }

    /// Parameter mapping to the conic base point P0: the tangent direction.
    fn base_parameter(&self, gamma: &Parametrization<F::Elem>) -> [F::Elem; 2] {
        let f = self.field();
        // γ(t,u) ∝ P0 exactly where the component along E1, E2 vanishes; that
        // component is −2 B(P0,V)·V, so the parameter is the root of B(P0, V).
        let [p0, e1, e2] = gamma.frame.as_ref().unwrap();
        let i1 = (0..3).find(|&i| !f.is_zero(&e1[i])).unwrap();
        let k = (0..3).find(|&i| f.is_zero(&e1[i]) && f.is_zero(&e2[i])).unwrap();
        // coordinate i1 of γ minus (γ_k / P0_k) P0_{i1} is −2 B(P0,V) t; read
        // B(P0,V) = β₀ u + β₁ t from γ's coefficients
        let gk = &gamma.coords[k];
        let gi = &gamma.coords[i1];
        let ratio = f.div(&p0[i1], &p0[k]).unwrap();
        // c(t,u) = γ_i1 − ratio·γ_k = −2 B(P0,V)·t
        let c: Vec<F::Elem> = gi.coeffs.iter().zip(&gk.coeffs).map(|(a, b)| f.sub(a, &f.mul(&ratio, b))).collect();
        // c = −2 (β₀ u + β₁ t) t → coeffs [0, −2β₀, −2β₁]
        let beta0 = &c[1];
        let beta1 = &c[2];
        // root of β₀ u + β₁ t
        [f.neg(beta0), beta1.clone()]
    }
}
