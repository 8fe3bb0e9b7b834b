//! The twenty reference curves on w² = x⁶ + y⁶ + z⁶, the auxiliary curves
//! D₁₃′ and D′₂₀, the elliptic fibration check and the supersingular curve
//! over F₂₅.

use super::divisor::{canonicalize, reference_coeffs, verify_on_surface, Divisor};
use super::forms::{Form, FormRing, Monomial};
use crate::error::{Error, Result};
use crate::exact::field::Field;
use crate::exact::finite::{FiniteField, FqElem};
use crate::exact::rational::int;
use crate::exact::tower::{tower_normalize, Tower, TowerElement};

/// Σ c·ζ^i·s^j from integer triples (i, j, c).
fn tw(terms: &[(u32, u32, i64)]) -> TowerElement {
    let t: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, int(c))).collect();
    tower_normalize(&t)
}

fn form(ring: &FormRing<Tower>, terms: Vec<(Monomial, TowerElement)>) -> Form<TowerElement> {
    ring.from_terms(terms)
}

/// a₅, c₅, r₅, v₅ with a₅ read as the plain product 2ζ(−ζ²+2)ζ⁴/3.
pub fn d20_constants() -> [TowerElement; 4] {
    let t = Tower;
    let third = TowerElement::from_rational(crate::exact::rational::rat(1, 3));
    let z = t.zeta();
    let z2m2 = tw(&[(2, 0, 1), (0, 0, -2)]);
    let a5 = t.mul(&t.mul(&t.mul(&t.mul(&t.from_i64(2), &z), &t.neg(&z2m2)), &t.zeta_pow(4)), &third);
    let c5 = t.mul(&t.mul(&z, &z2m2), &third);
    let r5 = t.neg(&t.mul(&t.mul(&t.sqrt3(), &z), &z2m2));
    let v5 = t.mul(&t.from_i64(-2), &t.mul(&t.sqrt3(), &t.zeta_pow(2)));
    [a5, c5, r5, v5]
}

fn line(label: &str, plane: Form<TowerElement>, w: Form<TowerElement>) -> Divisor<TowerElement> {
    Divisor {
        label: label.to_string(),
        plane,
        w,
        base_point: None,
    }
}

/// w = ±x³, y = ζ^k z
pub fn line_yz(label: &str, k: i64, sheet: i64) -> Divisor<TowerElement> {
    let t = Tower;
    let r = FormRing::new(t);
    line(
        label,
        form(&r, vec![([0, 1, 0], t.one()), ([0, 0, 1], t.neg(&t.zeta_pow(k)))]),
        form(&r, vec![([3, 0, 0], t.from_i64(sheet))]),
    )
}

/// w = ±y³, z = ζ^k x
pub fn line_zx(label: &str, k: i64, sheet: i64) -> Divisor<TowerElement> {
    let t = Tower;
    let r = FormRing::new(t);
    line(
        label,
        form(&r, vec![([0, 0, 1], t.one()), ([1, 0, 0], t.neg(&t.zeta_pow(k)))]),
        form(&r, vec![([0, 3, 0], t.from_i64(sheet))]),
    )
}

/// w = ±z³, x = ζ^k y
pub fn line_xy(label: &str, k: i64, sheet: i64) -> Divisor<TowerElement> {
    let t = Tower;
    let r = FormRing::new(t);
    line(
        label,
        form(&r, vec![([1, 0, 0], t.one()), ([0, 1, 0], t.neg(&t.zeta_pow(k)))]),
        form(&r, vec![([0, 0, 3], t.from_i64(sheet))]),
    )
}

fn conic(
    label: &str,
    plane: Vec<(Monomial, TowerElement)>,
    w: Vec<(Monomial, TowerElement)>,
    base: [TowerElement; 3],
) -> Divisor<TowerElement> {
    let r = FormRing::new(Tower);
    Divisor {
        label: label.to_string(),
        plane: form(&r, plane),
        w: form(&r, w),
        base_point: Some(base),
    }
}

/// D₁..D₂₀ in order, as printed, not yet canonicalized.
pub fn reference_divisors_raw() -> Vec<Divisor<TowerElement>> {
    let t = Tower;
    let mut out = Vec::with_capacity(20);
    for i in 1..=5i64 {
        out.push(line_yz(&format!("D{}", i), 2 * i + 1, 1));
    }
    for j in 6..=9i64 {
        out.push(line_zx(&format!("D{}", j), 2 * j + 3, 1));
    }
    for k in 10..=12i64 {
        out.push(line_xy(&format!("D{}", k), 2 * k + 7, 1));
    }
    out.push(line_yz("D13", 3, -1));

    let one_m2z2 = tw(&[(0, 0, 1), (2, 0, -2)]);
    let w1415 = vec![([2, 1, 0], t.mul(&t.s(), &one_m2z2)), ([0, 3, 0], one_m2z2.clone())];
    out.push(conic(
        "D14",
        vec![([2, 0, 0], t.one()), ([0, 2, 0], t.s_pow(2)), ([0, 0, 2], t.one())],
        w1415.clone(),
        [t.zeta_pow(3), t.zero(), t.one()],
    ));
    out.push(conic(
        "D15",
        vec![
            ([2, 0, 0], t.zeta_pow(4)),
            ([0, 2, 0], t.mul(&t.zeta_pow(4), &t.s_pow(2))),
            ([0, 0, 2], t.one()),
        ],
        w1415,
        [t.zeta_pow(7), t.zero(), t.one()],
    ));
    out.push(conic(
        "D16",
        vec![
            ([2, 0, 0], t.from_i64(-2)),
            ([1, 1, 0], tw(&[(0, 1, 1), (2, 1, -2)])),
            ([0, 2, 0], t.s_pow(2)),
            ([0, 0, 2], t.one()),
        ],
        vec![
            ([3, 0, 0], t.from_i64(-3)),
            ([2, 1, 0], tw(&[(0, 1, 2), (2, 1, -4)])),
            ([1, 2, 0], tw(&[(0, 2, 3)])),
            ([0, 3, 0], tw(&[(2, 0, 2), (0, 0, -1)])),
        ],
        [t.zero(), t.one(), tw(&[(3, 1, 1)])],
    ));
    out.push(conic(
        "D17",
        vec![
            ([2, 0, 0], tw(&[(4, 2, 1)])),
            ([1, 1, 0], tw(&[(2, 1, 1), (0, 1, 1)])),
            ([0, 2, 0], tw(&[(4, 0, -2)])),
            ([0, 0, 2], t.one()),
        ],
        vec![
            ([3, 0, 0], one_m2z2.clone()),
            ([2, 1, 0], tw(&[(0, 2, -3)])),
            ([1, 2, 0], tw(&[(2, 1, 4), (0, 1, -2)])),
            ([0, 3, 0], t.from_i64(3)),
        ],
        [t.one(), t.zero(), tw(&[(5, 1, 1)])],
    ));
    let w1819 = vec![
        ([0, 3, 0], t.from_i64(-3)),
        ([0, 2, 1], tw(&[(0, 1, 2), (2, 1, -4)])),
        ([0, 1, 2], tw(&[(0, 2, 3)])),
        ([0, 0, 3], tw(&[(2, 0, 2), (0, 0, -1)])),
    ];
    out.push(conic(
        "D18",
        vec![
            ([2, 0, 0], t.one()),
            ([0, 2, 0], t.from_i64(-2)),
            ([0, 1, 1], tw(&[(0, 1, 1), (2, 1, -2)])),
            ([0, 0, 2], t.s_pow(2)),
        ],
        w1819.clone(),
        [tw(&[(3, 1, 1)]), t.zero(), t.one()],
    ));
    out.push(conic(
        "D19",
        vec![
            ([2, 0, 0], t.one()),
            ([0, 2, 0], tw(&[(2, 0, 2)])),
            ([0, 1, 1], tw(&[(2, 1, 1), (0, 1, -2)])),
            ([0, 0, 2], tw(&[(2, 2, -1)])),
        ],
        w1819,
        [tw(&[(1, 1, 1)]), t.zero(), t.one()],
    ));
    let [a5, c5, r5, v5] = d20_constants();
    out.push(conic(
        "D20",
        vec![
            ([2, 0, 0], a5),
            ([0, 2, 0], c5.clone()),
            ([0, 0, 2], c5),
            ([0, 1, 1], t.one()),
        ],
        vec![([3, 0, 0], r5), ([1, 1, 1], v5)],
        [t.zero(), t.zeta(), t.one()],
    ));
    out
}

/// D₁..D₂₀, canonicalized and checked against the surface.
pub fn reference_divisors() -> Result<Vec<Divisor<TowerElement>>> {
    let ring = FormRing::new(Tower);
    let coeffs = reference_coeffs(&Tower);
    reference_divisors_raw()
        .into_iter()
        .map(|d| {
            verify_on_surface(&ring, &d, &coeffs)?;
            Ok(canonicalize(&ring, &d))
        })
        .collect()
}

/// D₁₃′ = {w = −x³, y = ζ⁹z} (the opposite sheet over D₄'s line) and
/// D′₂₀ = {w = z³, x = ζ⁹y}.
pub fn auxiliary_divisors() -> Vec<Divisor<TowerElement>> {
    let ring = FormRing::new(Tower);
    vec![
        canonicalize(&ring, &line_yz("D13'", 9, -1)),
        canonicalize(&ring, &line_xy("D'20", 9, 1)),
    ]
}

/// Outcome of the elliptic fibration check.
#[derive(Clone, Debug)]
pub struct FiberCheck {
    pub identity_holds: bool,
    /// Indices k with ζ^k a cube root of −i (fiber over [0:1]).
    pub fiber_exponents: Vec<u32>,
    /// Labels of reference divisors forming that fiber.
    pub fiber_components: Vec<String>,
    /// Exponents for the fiber over [1:0] (cube roots of i, sheet w = −x³).
    pub opposite_fiber_exponents: Vec<u32>,
    pub factorization_holds: bool,
}

impl FiberCheck {
    pub fn passed(&self) -> bool {
        self.identity_holds
            && self.factorization_holds
            && self.fiber_components == ["D1", "D3", "D5"]
            && self.opposite_fiber_exponents.iter().all(|k| !self.fiber_exponents.contains(k))
    }
}

/// Checks (w + x³)(w − x³) ≡ (y³ + iz³)(y³ − iz³) modulo the surface and
/// decomposes the fiber {w = x³, y³ + iz³ = 0} of [w − x³ : y³ − iz³].
pub fn fibration_fiber_check() -> Result<FiberCheck> {
    let t = Tower;
    let r = FormRing::new(t);
    // as polynomials in x, y, z with w² replaced by x⁶ + y⁶ + z⁶
    let lhs = r.sub(&r.from_terms(vec![([0, 6, 0], t.one()), ([0, 0, 6], t.one())]), &Form::zero());
    let i = t.i();
    let y3 = r.monomial([0, 3, 0], t.one());
    let iz3 = r.monomial([0, 0, 3], i.clone());
    let rhs = r.mul(&r.add(&y3, &iz3), &r.sub(&y3, &iz3));
    let identity_holds = lhs == rhs;

    let minus_i = t.neg(&i);
    let fiber_exponents: Vec<u32> = (0..12u32)
        .filter(|&k| t.pow(&t.zeta_pow(k as i64), 3) == minus_i)
        .collect();
    let opposite_fiber_exponents: Vec<u32> = (0..12u32)
        .filter(|&k| t.pow(&t.zeta_pow(k as i64), 3) == i)
        .collect();

    // ∏ (y − θz) = y³ + i z³ over the cube roots θ of −i
    let mut prod = r.constant(t.one());
    for &k in &fiber_exponents {
        let lin = r.from_terms(vec![([0, 1, 0], t.one()), ([0, 0, 1], t.neg(&t.zeta_pow(k as i64)))]);
        prod = r.mul(&prod, &lin);
    }
    let factorization_holds = prod == r.add(&y3, &iz3) && fiber_exponents.len() == 3;

    let refs = reference_divisors()?;
    let mut fiber_components = Vec::new();
    for &k in &fiber_exponents {
        let target = canonicalize(&r, &line_yz("", k as i64, 1));
        let hit = refs
            .iter()
            .find(|d| d.plane == target.plane && d.w == target.w)
            .ok_or_else(|| Error::Degenerate(format!("fiber line y = ζ^{} z is not a reference divisor", k)))?;
        fiber_components.push(hit.label.clone());
    }
    fiber_components.sort_by_key(|l| l[1..].parse::<u32>().unwrap_or(u32::MAX));
    Ok(FiberCheck {
        identity_holds,
        fiber_exponents,
        fiber_components,
        opposite_fiber_exponents,
        factorization_holds,
    })
}

/// The supersingular curve D′ on w² = x⁶ + y⁶ + z⁶ over F₂₅:
/// w = −(2x³ − (2α+1)x²y + 2xy² + (2α+1)y³), z = (α+2)x + αy, α² + α + 1 = 0.
/// Returns the curve for the first root α (in enumeration order) that lies on
/// the surface.
pub fn supersingular_divisor(f25: &FiniteField) -> Result<(Divisor<FqElem>, FqElem)> {
    assert_eq!((f25.p(), f25.degree()), (5, 2));
    let r = FormRing::new(f25.clone());
    let f = f25;
    let roots: Vec<FqElem> = f
        .elements()
        .filter(|a| {
            let v = f.add(&f.add(&f.mul(a, a), a), &f.one());
            f.is_zero(&v)
        })
        .collect();
    let coeffs = reference_coeffs(f);
    for alpha in roots {
        let two_a_1 = f.add(&f.mul(&f.from_i64(2), &alpha), &f.one());
        let w = r.neg(&r.from_terms(vec![
            ([3, 0, 0], f.from_i64(2)),
            ([2, 1, 0], f.neg(&two_a_1)),
            ([1, 2, 0], f.from_i64(2)),
            ([0, 3, 0], two_a_1.clone()),
        ]));
        let plane = r.from_terms(vec![
            ([0, 0, 1], f.one()),
            ([1, 0, 0], f.neg(&f.add(&alpha, &f.from_i64(2)))),
            ([0, 1, 0], f.neg(&alpha)),
        ]);
        let d = canonicalize(
            &r,
            &Divisor {
                label: "D'".into(),
                plane,
                w,
                base_point: None,
            },
        );
        if verify_on_surface(&r, &d, &coeffs).is_ok() {
            return Ok((d, alpha));
        }
    }
    Err(Error::NotOnSurface("D' for either root of t^2 + t + 1".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::divisor::{classify, conjugate_divisor, DivisorKind, LineFamily};
    use crate::galois::group::GaloisElement;

    #[test]
    fn reference_divisors_lie_on_surface() {
        let refs = reference_divisors().unwrap();
        assert_eq!(refs.len(), 20);
        let ring = FormRing::new(Tower);
        for d in auxiliary_divisors() {
            verify_on_surface(&ring, &d, &reference_coeffs(&Tower)).unwrap();
        }
    }

    #[test]
    fn wrong_line_is_rejected() {
        let ring = FormRing::new(Tower);
        let bad = line_yz("bad", 2, 1);
        assert!(verify_on_surface(&ring, &bad, &reference_coeffs(&Tower)).is_err());
    }

    #[test]
    fn labels_classify() {
        let refs = reference_divisors().unwrap();
        assert_eq!(
            classify(&refs[0]),
            DivisorKind::Line { family: LineFamily::YZ, zeta_exponent: 3, sheet: 1 }
        );
        assert_eq!(
            classify(&refs[12]),
            DivisorKind::Line { family: LineFamily::YZ, zeta_exponent: 3, sheet: -1 }
        );
        assert_eq!(
            classify(&refs[5]),
            DivisorKind::Line { family: LineFamily::ZX, zeta_exponent: 3, sheet: 1 }
        );
        assert_eq!(
            classify(&refs[9]),
            DivisorKind::Line { family: LineFamily::XY, zeta_exponent: 3, sheet: 1 }
        );
        assert_eq!(classify(&refs[19]), DivisorKind::Conic);
    }

    #[test]
    fn complex_conjugation_sends_d1_to_d4() {
        let refs = reference_divisors().unwrap();
        let g = GaloisElement::new(11, 0, 0, 0, 0);
        let img = conjugate_divisor(&g, &refs[0]);
        assert_eq!((img.plane.clone(), img.w.clone()), (refs[3].plane.clone(), refs[3].w.clone()));
    }

    #[test]
    fn fiber_is_d1_d3_d5() {
        let fc = fibration_fiber_check().unwrap();
        assert!(fc.passed(), "{:?}", fc);
        assert_eq!(fc.fiber_exponents, vec![3, 7, 11]);
        assert_eq!(fc.opposite_fiber_exponents, vec![1, 5, 9]);
    }

    #[test]
    fn supersingular_curve_on_f25() {
        let f = FiniteField::new(5, 2);
        let (d, _) = supersingular_divisor(&f).unwrap();
        assert_eq!(d.plane.degree(), Some(1));
    }
}
