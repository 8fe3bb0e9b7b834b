//! Curves on the surface given by a plane form and a w-form.

use serde::{Deserialize, Serialize};

use super::forms::{Form, FormRing, Monomial};
use crate::error::{Error, Result};
use crate::exact::field::Field;
use crate::exact::finite::{FqElem, TowerEmbedding};
use crate::exact::tower::{Tower, TowerElement};
use crate::galois::group::GaloisElement;

/// The curve {plane = 0, w = w_form} on w² = F(x, y, z).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor<E> {
    pub label: String,
    pub plane: Form<E>,
    pub w: Form<E>,
    /// A point of the plane curve, used to parametrize conics.
    pub base_point: Option<[E; 3]>,
}

/// Equations in canonical form: the plane form monic in lex order and the
/// w-form reduced modulo it. Two divisors are equal iff their keys are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorKey<E> {
    pub plane: Form<E>,
    pub w: Form<E>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineFamily {
    /// w = ±x³, y = ζ^k z
    YZ,
    /// w = ±y³, z = ζ^k x
    ZX,
    /// w = ±z³, x = ζ^k y
    XY,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DivisorKind {
    Line {
        family: LineFamily,
        zeta_exponent: u32,
        sheet: i8,
    },
    Conic,
    Other,
}

impl<E: Clone> Divisor<E> {
    pub fn plane_degree(&self) -> u32 {
        self.plane.degree().unwrap_or(0)
    }
}

pub fn canonicalize<F: Field>(ring: &FormRing<F>, d: &Divisor<F::Elem>) -> Divisor<F::Elem> {
    let plane = ring.monic(&d.plane);
    let w = ring.rem(&d.w, &plane);
    Divisor {
        label: d.label.clone(),
        plane,
        w,
        base_point: d.base_point.clone(),
    }
}

pub fn key<F: Field>(ring: &FormRing<F>, d: &Divisor<F::Elem>) -> DivisorKey<F::Elem> {
    let c = canonicalize(ring, d);
    DivisorKey { plane: c.plane, w: c.w }
}

/// A·x⁶ + B·y⁶ + C·z⁶.
pub fn sextic<F: Field>(ring: &FormRing<F>, coeffs: &[F::Elem; 3]) -> Form<F::Elem> {
    ring.from_terms(vec![
        ([6, 0, 0], coeffs[0].clone()),
        ([0, 6, 0], coeffs[1].clone()),
        ([0, 0, 6], coeffs[2].clone()),
    ])
}

/// Remainder of w_form² − F modulo the plane form; zero iff the curve lies on
/// the surface.
pub fn surface_remainder<F: Field>(
    ring: &FormRing<F>,
    d: &Divisor<F::Elem>,
    coeffs: &[F::Elem; 3],
) -> Form<F::Elem> {
    let e = ring.sub(&ring.mul(&d.w, &d.w), &sextic(ring, coeffs));
    ring.rem(&e, &d.plane)
}

pub fn verify_on_surface<F: Field>(ring: &FormRing<F>, d: &Divisor<F::Elem>, coeffs: &[F::Elem; 3]) -> Result<()> {
    let r = surface_remainder(ring, d, coeffs);
    if !r.is_zero() {
        return Err(Error::NotOnSurface(format!("{}: remainder {:?}", d.label, r)));
    }
    if let Some(p) = &d.base_point {
        if !ring.field.is_zero(&ring.eval(&d.plane, p)) {
            return Err(Error::NotOnSurface(format!("{}: base point off the plane curve", d.label)));
        }
    }
    Ok(())
}

/// The reference surface w² = x⁶ + y⁶ + z⁶ over a field.
pub fn reference_coeffs<F: Field>(field: &F) -> [F::Elem; 3] {
    [field.one(), field.one(), field.one()]
}

/// Action of a tuple on a curve of the reference surface:
/// plane and w-forms become q^σ(x, μ^{-b}y, μ^{-b-c}z) and (−1)^e W^σ(…).
pub fn conjugate_divisor(g: &GaloisElement, d: &Divisor<TowerElement>) -> Divisor<TowerElement> {
    let t = Tower;
    let ring = FormRing::new(t);
    let sigma = |x: &TowerElement| t.automorphism(x, g.u as u32, g.a as u32);
    let lam = [
        t.one(),
        t.zeta_pow(-2 * g.b as i64),
        t.zeta_pow(-2 * (g.b as i64 + g.c as i64)),
    ];
    let plane = ring.rescale(&ring.clean(d.plane.map(sigma)), &lam);
    let mut w = ring.rescale(&ring.clean(d.w.map(sigma)), &lam);
    if g.e == 1 {
        w = ring.neg(&w);
    }
    let base_point = d.base_point.as_ref().map(|p| {
        let mu_b = t.zeta_pow(2 * g.b as i64);
        let mu_bc = t.zeta_pow(2 * (g.b as i64 + g.c as i64));
        [sigma(&p[0]), t.mul(&mu_b, &sigma(&p[1])), t.mul(&mu_bc, &sigma(&p[2]))]
    });
    canonicalize(
        &ring,
        &Divisor {
            label: format!("{}*{}", g, d.label),
            plane,
            w,
            base_point,
        },
    )
}

/// Image of a point of the reference surface, (x, y, z, w) ↦ (x^σ, μ^b y^σ, μ^{b+c} z^σ, (−1)^e w^σ).
pub fn conjugate_point(g: &GaloisElement, p: &[TowerElement; 4]) -> [TowerElement; 4] {
    let t = Tower;
    let sigma = |x: &TowerElement| t.automorphism(x, g.u as u32, g.a as u32);
    let mut w = sigma(&p[3]);
    if g.e == 1 {
        w = t.neg(&w);
    }
    [
        sigma(&p[0]),
        t.mul(&t.zeta_pow(2 * g.b as i64), &sigma(&p[1])),
        t.mul(&t.zeta_pow(2 * (g.b as i64 + g.c as i64)), &sigma(&p[2])),
        w,
    ]
}

/// Reduction of a tower divisor through an embedding into a finite field.
pub fn reduce_divisor_mod_p(d: &Divisor<TowerElement>, emb: &TowerEmbedding) -> Result<Divisor<FqElem>> {
    let p = emb.field.p();
    if p == 2 || p == 3 {
        return Err(Error::Unsupported(format!(
            "the reference surface is singular in characteristic {}",
            p
        )));
    }
    let ring = FormRing::new(emb.field.clone());
    let map_form = |f: &Form<TowerElement>| -> Result<Form<FqElem>> {
        let mut terms: Vec<(Monomial, FqElem)> = Vec::new();
        for (m, c) in &f.terms {
            terms.push((*m, emb.map(c)?));
        }
        Ok(ring.from_terms(terms))
    };
    let plane = map_form(&d.plane)?;
    if plane.degree() != d.plane.degree() {
        return Err(Error::Embedding(format!("{}: plane form degenerates mod {}", d.label, p)));
    }
    let w = map_form(&d.w)?;
    let base_point = match &d.base_point {
        None => None,
        Some(bp) => {
            let pt = [emb.map(&bp[0])?, emb.map(&bp[1])?, emb.map(&bp[2])?];
            if pt.iter().all(|c| ring.field.is_zero(c)) {
                None
            } else {
                Some(pt)
            }
        }
    };
    Ok(canonicalize(
        &ring,
        &Divisor {
            label: format!("{} mod {}", d.label, p),
            plane,
            w,
            base_point,
        },
    ))
}

/// Recognizes the three families of lines; everything else is a conic or other.
pub fn classify(d: &Divisor<TowerElement>) -> DivisorKind {
    let t = Tower;
    let ring = FormRing::new(t);
    let c = canonicalize(&ring, d);
    match c.plane.degree() {
        Some(2) => return DivisorKind::Conic,
        Some(1) if c.plane.terms.len() == 2 => {}
        _ => return DivisorKind::Other,
    }
    let vars: Vec<usize> = c.plane.terms.keys().map(|m| m.iter().position(|&e| e == 1).unwrap()).collect();
    // keys ascend, so vars = [trailing, leading] with leading the smaller index
    let (trail, lead) = (vars[0], vars[1]);
    let mut mt = [0u32; 3];
    mt[trail] = 1;
    // plane is v_lead - r v_trail
    let r = t.neg(c.plane.coeff(&mt).unwrap());
    let (family, wv, ratio) = match (lead, trail) {
        (1, 2) => (LineFamily::YZ, 0, r),
        (0, 2) => (LineFamily::ZX, 1, t.inv(&r).unwrap()),
        (0, 1) => (LineFamily::XY, 2, r),
        _ => return DivisorKind::Other,
    };
    let mut mw = [0u32; 3];
    mw[wv] = 3;
    if c.w.terms.len() != 1 {
        return DivisorKind::Other;
    }
    let sheet = match c.w.coeff(&mw) {
        Some(v) if *v == t.one() => 1i8,
        Some(v) if *v == t.neg(&t.one()) => -1i8,
        _ => return DivisorKind::Other,
    };
    match (0..12u32).find(|&k| t.zeta_pow(k as i64) == ratio) {
        Some(k) => DivisorKind::Line {
            family,
            zeta_exponent: k,
            sheet,
        },
        None => DivisorKind::Other,
    }
}

/// JSON-friendly record of a divisor over the tower.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivisorRecord {
    pub label: String,
    pub kind: DivisorKind,
    pub plane: Vec<(Monomial, Vec<String>)>,
    pub w: Vec<(Monomial, Vec<String>)>,
}

pub fn export_divisor(d: &Divisor<TowerElement>) -> DivisorRecord {
    let enc = |f: &Form<TowerElement>| {
        f.terms
            .iter()
            .map(|(m, c)| (*m, c.coords.iter().map(|q| q.to_string()).collect()))
            .collect()
    };
    DivisorRecord {
        label: d.label.clone(),
        kind: classify(d),
        plane: enc(&d.plane),
        w: enc(&d.w),
    }
}
