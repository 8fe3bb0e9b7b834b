//! div(f) as a norm of catalogued curves, checked on w² = x⁶ + y⁶ + z⁶.
//!
//! Both algebras become the reference surface after rescaling x, y, z, and
//! f becomes (w − x³)/(w + x³) (cubic) or (y² + z²)/x² up to constants
//! (quaternion).

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::AlgebraDatum;
use crate::error::{Error, Result};
use crate::exact::field::Field;
use crate::exact::tower::Tower;
use crate::galois::{all_elements, Catalogue, GaloisElement};
use crate::geometry::forms::{Form, FormRing};
use crate::geometry::reference::line_yz;
use crate::exact::tower::TowerElement;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormIdentityReport {
    pub ok: bool,
    pub zeros: Vec<String>,
    pub poles: Vec<String>,
    /// (check, passed)
    pub checks: Vec<(String, bool)>,
}

impl NormIdentityReport {
    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(s, _)| s.as_str()).collect()
    }
}

fn class_sum(cat: &Catalogue, idx: &[usize]) -> Vec<i64> {
    let mut v = vec![0i64; 20];
    for &i in idx {
        for (a, b) in v.iter_mut().zip(&cat.classes[i]) {
            *a += b;
        }
    }
    v
}

fn self_intersection(cat: &Catalogue, v: &[i64]) -> BigInt {
    let b: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    cat.gram.pair(&b, &b)
}

/// f vanishes on the curve: `form` reduces to zero on its plane after w is
/// replaced by the curve's w-form.
fn vanishes_on(ring: &FormRing<Tower>, cat: &Catalogue, i: usize, form_of_w: impl Fn(&Form<TowerElement>) -> Form<TowerElement>) -> bool {
    let d = &cat.divisors[i];
    ring.rem(&form_of_w(&d.w), &d.plane).is_zero()
}

/// An order-3 element fixing ζ that moves y = ζ^k z to y = ζ^{k+4} z on both sheets.
fn norm_generator(cat: &Catalogue) -> Result<GaloisElement> {
    let d1 = cat.lookup(&line_yz("", 3, 1))?;
    let d3 = cat.lookup(&line_yz("", 7, 1))?;
    let d13 = cat.lookup(&line_yz("", 3, -1))?;
    let d13b = cat.lookup(&line_yz("", 7, -1))?;
    for g in all_elements() {
        if g.u == 1 && g.e == 0 && g.order() == 3 && cat.act(&g, d1)? == d3 && cat.act(&g, d13)? == d13b {
            return Ok(g);
        }
    }
    Err(Error::Degenerate("no order-3 element rotating the lines y = ζ^k z".into()))
}

fn orbit_sum(cat: &Catalogue, g: &GaloisElement, seeds: &[usize]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for &s in seeds {
        let mut i = s;
        for _ in 0..3 {
            out.push(i);
            i = cat.act(g, i)?;
        }
    }
    Ok(out)
}

pub fn verify_divisor_norm_identity(datum: &AlgebraDatum, cat: &Catalogue) -> Result<NormIdentityReport> {
    let t = Tower;
    let ring = FormRing::new(t);
    let label = |i: usize| cat.divisors[i].label.clone();
    let mut checks = Vec::new();
    let (zeros, poles) = match datum {
        AlgebraDatum::Trivial { .. } => {
            return Ok(NormIdentityReport {
                ok: true,
                zeros: Vec::new(),
                poles: Vec::new(),
                checks: vec![("f = 1 has empty divisor".into(), true)],
            })
        }
        AlgebraDatum::Cubic(_) => {
            let g = norm_generator(cat)?;
            let d1 = cat.lookup(&line_yz("", 3, 1))?;
            let d4 = cat.lookup(&line_yz("", 9, 1))?;
            let d13 = cat.lookup(&line_yz("", 3, -1))?;
            let d13p = cat.lookup(&line_yz("", 9, -1))?;
            let zeros = orbit_sum(cat, &g, &[d1, d4])?;
            let poles = orbit_sum(cat, &g, &[d13, d13p])?;
            let x3 = ring.monomial([3, 0, 0], t.one());
            checks.push((
                "each curve of N(D1 + D4) lies on w = x³".into(),
                zeros.iter().all(|&i| vanishes_on(&ring, cat, i, |w| ring.sub(w, &x3))),
            ));
            checks.push((
                "each curve of N(D13 + D13') lies on w = −x³".into(),
                poles.iter().all(|&i| vanishes_on(&ring, cat, i, |w| ring.add(w, &x3))),
            ));
            let distinct = |v: &[usize]| {
                let mut s = v.to_vec();
                s.sort();
                s.dedup();
                s.len() == v.len()
            };
            checks.push(("zero and pole curves are distinct (multiplicity one)".into(), distinct(&zeros) && distinct(&poles)));
            // w − x³ is a section of O(3): its divisor has class 3H with (3H)² = 18
            let h = class_sum(cat, &[d1, d13]);
            let hz: Vec<i64> = h.iter().map(|&x| 3 * x).collect();
            let cz = class_sum(cat, &zeros);
            let cp = class_sum(cat, &poles);
            checks.push(("class of the zero divisor is 3H".into(), cz == hz));
            checks.push(("class of the pole divisor is 3H".into(), cp == hz));
            checks.push(("(3H)² = 18".into(), self_intersection(cat, &cz) == BigInt::from(18)));
            checks.push(("class of div(f) is 0".into(), cz == cp));
            (zeros, poles)
        }
        AlgebraDatum::Quaternion(_) => {
            let d1 = cat.lookup(&line_yz("", 3, 1))?;
            let d13 = cat.lookup(&line_yz("", 3, -1))?;
            let d4 = cat.lookup(&line_yz("", 9, 1))?;
            let d13p = cat.lookup(&line_yz("", 9, -1))?;
            let zeros = vec![d1, d13, d4, d13p];
            let y2z2 = ring.add(&ring.monomial([0, 2, 0], t.one()), &ring.monomial([0, 0, 2], t.one()));
            checks.push((
                "D1, D1', D4, D4' lie on y² + z² = 0".into(),
                zeros.iter().all(|&i| ring.rem(&y2z2, &cat.divisors[i].plane).is_zero()),
            ));
            let h1 = class_sum(cat, &[d1, d13]);
            let h4 = class_sum(cat, &[d4, d13p]);
            checks.push(("D1 + D1' and D4 + D4' are both the hyperplane class H".into(), h1 == h4));
            checks.push(("H² = 2".into(), self_intersection(cat, &h1) == BigInt::from(2)));
            let cz = class_sum(cat, &zeros);
            let two_h: Vec<i64> = h1.iter().map(|&x| 2 * x).collect();
            checks.push(("zero divisor has class 2H, the class of the pole divisor 2(x = 0)".into(), cz == two_h));
            (zeros, Vec::new())
        }
    };
    Ok(NormIdentityReport {
        ok: checks.iter().all(|(_, ok)| *ok),
        zeros: zeros.into_iter().map(label).collect(),
        poles: poles.into_iter().map(label).collect(),
        checks,
    })
}
