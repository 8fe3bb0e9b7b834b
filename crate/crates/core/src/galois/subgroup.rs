//! Subgroups of the order-864 group: closures, stabilizers, index-2 kernels
//! and the subgroup cut out by the coefficients of a particular surface.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::catalogue::{mat_vec, ActionMatrices};
use super::group::{all_elements, standard_generators, GaloisElement, GROUP_ORDER};
use crate::error::{Error, Result};
use crate::exact::rational::Rational;
use crate::geometry::Surface;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    /// sorted by index
    pub elements: Vec<GaloisElement>,
    pub generators: Vec<GaloisElement>,
}

impl Subgroup {
    pub fn full() -> Self {
        Subgroup::from_elements(all_elements())
    }

    pub fn trivial() -> Self {
        Subgroup {
            elements: vec![GaloisElement::identity()],
            generators: Vec::new(),
        }
    }

    /// The elements satisfying `pred`; the predicate must define a subgroup.
    pub fn from_predicate(pred: impl Fn(&GaloisElement) -> bool) -> Result<Self> {
        let elements: Vec<GaloisElement> = all_elements().into_iter().filter(|g| pred(g)).collect();
        let h = Subgroup::from_elements(elements);
        h.check_closed()?;
        Ok(h)
    }

    /// Wraps a closed element set and picks generators greedily.
    pub fn from_elements(mut elements: Vec<GaloisElement>) -> Self {
        elements.sort_by_key(|g| g.index());
        elements.dedup();
        let generators = greedy_generators(&elements);
        Subgroup { elements, generators }
    }

    pub fn generated_by(gens: &[GaloisElement]) -> Self {
        Subgroup::from_elements(closure(gens))
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_in_g(&self) -> usize {
        GROUP_ORDER / self.order()
    }

    pub fn contains(&self, g: &GaloisElement) -> bool {
        self.elements.binary_search_by_key(&g.index(), |x| x.index()).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_elements(self.elements.iter().filter(|g| other.contains(g)).copied().collect())
    }

    pub fn filter(&self, pred: impl Fn(&GaloisElement) -> bool) -> Result<Subgroup> {
        let h = Subgroup::from_elements(self.elements.iter().filter(|g| pred(g)).copied().collect());
        h.check_closed()?;
        Ok(h)
    }

    pub fn check_closed(&self) -> Result<()> {
        if !self.contains(&GaloisElement::identity()) {
            return Err(Error::Degenerate("subgroup without identity".into()));
        }
        for g in &self.elements {
            if !self.contains(&g.inverse()) {
                return Err(Error::Degenerate(format!("{} has no inverse in the set", g)));
            }
            for h in &self.generators {
                if !self.contains(&g.compose(h)) {
                    return Err(Error::Degenerate(format!("set not closed at {}∘{}", g, h)));
                }
            }
        }
        if closure(&self.generators).len() != self.order() {
            return Err(Error::Degenerate("generators do not generate the set".into()));
        }
        Ok(())
    }
}

/// Subgroup generated by `gens`.
pub fn closure(gens: &[GaloisElement]) -> Vec<GaloisElement> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(GaloisElement::identity());
    queue.push_back(GaloisElement::identity());
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.compose(s);
            if seen.insert(h) {
                queue.push_back(h);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by_key(|g| g.index());
    out
}

/// Greedy: repeatedly add the element whose addition generates the most.
fn greedy_generators(elements: &[GaloisElement]) -> Vec<GaloisElement> {
    let mut gens: Vec<GaloisElement> = Vec::new();
    let mut span: HashSet<GaloisElement> = [GaloisElement::identity()].into_iter().collect();
    while span.len() < elements.len() {
        let mut best: Option<(usize, GaloisElement)> = None;
        let mut tried = HashSet::new();
        for g in elements {
            if span.contains(g) || !tried.insert(*g) {
                continue;
            }
            let mut cand = gens.clone();
            cand.push(*g);
            let size = closure(&cand).len();
            if best.map_or(true, |(b, _)| size > b) {
                best = Some((size, *g));
            }
            if size == elements.len() {
                break;
            }
        }
        let (_, g) = best.expect("element outside the span");
        gens.push(g);
        span = closure(&gens).into_iter().collect();
    }
    gens
}

/// {g ∈ H : M(g)c ≡ c mod 2}
pub fn mod2_stabilizer(am: &ActionMatrices, within: &Subgroup, c: &[i64]) -> Subgroup {
    Subgroup::from_elements(
        within
            .elements
            .iter()
            .filter(|g| {
                am.apply(g, c)
                    .iter()
                    .zip(c)
                    .all(|(x, y)| (x - y).rem_euclid(2) == 0)
            })
            .copied()
            .collect(),
    )
}

/// {g ∈ H : M(g)c = c}
pub fn stabilizer(am: &ActionMatrices, within: &Subgroup, c: &[i64]) -> Subgroup {
    Subgroup::from_elements(within.elements.iter().filter(|g| am.apply(g, c) == c).copied().collect())
}

pub fn orbit(am: &ActionMatrices, h: &Subgroup, c: &[i64]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = h.elements.iter().map(|g| mat_vec(am.get(g), c)).collect();
    out.sort();
    out.dedup();
    out
}

/// Homomorphisms G → Z/2, as values on the standard generators, found by
/// propagating along a spanning tree of the Cayley graph and checking every
/// edge. The zero homomorphism is excluded.
pub fn homomorphisms_to_z2() -> Vec<HashMap<GaloisElement, u8>> {
    let gens = standard_generators();
    let mut out = Vec::new();
    for mask in 1u32..(1 << gens.len()) {
        let val = |i: usize| ((mask >> i) & 1) as u8;
        let mut phi: HashMap<GaloisElement, u8> = HashMap::new();
        phi.insert(GaloisElement::identity(), 0);
        let mut queue = VecDeque::from([GaloisElement::identity()]);
        let mut ok = true;
        'bfs: while let Some(g) = queue.pop_front() {
            let pg = phi[&g];
            for (i, s) in gens.iter().enumerate() {
                let h = g.compose(s);
                let ph = pg ^ val(i);
                match phi.get(&h) {
                    Some(&x) if x != ph => {
                        ok = false;
                        break 'bfs;
                    }
                    Some(_) => {}
                    None => {
                        phi.insert(h, ph);
                        queue.push_back(h);
                    }
                }
            }
        }
        if ok {
            out.push(phi);
        }
    }
    out
}

/// All index-2 subgroups of G.
pub fn index2_subgroups() -> Vec<Subgroup> {
    let mut out: Vec<Subgroup> = homomorphisms_to_z2()
        .into_iter()
        .map(|phi| Subgroup::from_elements(phi.into_iter().filter(|(_, v)| *v == 0).map(|(g, _)| g).collect()))
        .collect();
    out.sort_by_key(|h| h.elements.iter().map(|g| g.index()).collect::<Vec<_>>());
    out.dedup();
    out
}

/// Square-class characters: the sign by which g moves √(−1), √3, √A, √B, √C.
pub fn square_characters(g: &GaloisElement) -> [i8; 5] {
    let sign = |k: u8| if k % 2 == 0 { 1 } else { -1 };
    [
        g.chi_minus1(),
        g.chi_3(),
        sign(g.e),
        sign(g.e + g.b),
        sign(g.e + g.b + g.c),
    ]
}

/// Tags of the four index-2 subgroups with 3-torsion, as exponent vectors
/// over (−1, 3, A, B, C) of the rational number that becomes a square.
pub const TAG_3ABC: [u8; 5] = [0, 1, 1, 1, 1];
pub const TAG_M3A: [u8; 5] = [1, 1, 1, 0, 0];
pub const TAG_M3B: [u8; 5] = [1, 1, 0, 1, 0];
pub const TAG_M3C: [u8; 5] = [1, 1, 0, 0, 1];

pub fn tag_name(tag: &[u8; 5]) -> &'static str {
    match *tag {
        TAG_3ABC => "3ABC square",
        TAG_M3A => "-3A square",
        TAG_M3B => "-3B square",
        TAG_M3C => "-3C square",
        _ => "other",
    }
}

/// The kernel of the character attached to a square-class exponent vector.
pub fn square_relation_subgroup(exps: &[u8; 5]) -> Subgroup {
    Subgroup::from_elements(
        all_elements()
            .into_iter()
            .filter(|g| square_character_value(g, exps) == 1)
            .collect(),
    )
}

fn square_character_value(g: &GaloisElement, exps: &[u8; 5]) -> i8 {
    square_characters(g)
        .iter()
        .zip(exps)
        .map(|(c, &e)| if e % 2 == 1 { *c } else { 1 })
        .product()
}

/// a·m₁ + b·m₂ + c·m₃ mod 3: how g moves ∛2^{m₁}(A/B)^{m₂}(B/C)^{m₃} (real roots).
fn cube_character_value(g: &GaloisElement, exps: &[u8; 3]) -> u8 {
    ((g.a as u32 * exps[0] as u32 + g.b as u32 * exps[1] as u32 + g.c as u32 * exps[2] as u32) % 3) as u8
}

fn is_rational_square(q: &Rational) -> bool {
    if q.is_zero() {
        return true;
    }
    !q.is_negative() && is_int_square(q.numer()) && is_int_square(q.denom())
}

fn is_int_square(n: &BigInt) -> bool {
    let r = n.sqrt();
    &(&r * &r) == n
}

fn is_rational_cube(q: &Rational) -> bool {
    let cube = |n: &BigInt| {
        let r = n.cbrt();
        &(&r * &r * &r) == n
    };
    cube(q.numer()) && cube(q.denom())
}

fn rat_pow(q: &Rational, e: u8) -> Rational {
    let mut acc = Rational::from_integer(BigInt::from(1));
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// Relations detected among the coefficients of a surface.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct KummerRelations {
    /// exponent vectors over (−1, 3, A, B, C) whose product is a square
    pub squares: Vec<[u8; 5]>,
    /// exponent vectors over (2, A/B, B/C) whose product is a cube
    pub cubes: Vec<[u8; 3]>,
    /// relations outside the list this module models
    pub warnings: Vec<String>,
}

pub fn kummer_relations(s: &Surface) -> Result<KummerRelations> {
    if s.a.is_zero() || s.b.is_zero() || s.c.is_zero() {
        return Err(Error::Degenerate("A·B·C = 0".into()));
    }
    let minus_one = Rational::from_integer(BigInt::from(-1));
    let two = Rational::from_integer(BigInt::from(2));
    let three = Rational::from_integer(BigInt::from(3));
    let base = [minus_one, three.clone(), s.a.clone(), s.b.clone(), s.c.clone()];
    let mut rel = KummerRelations::default();
    for mask in 1u32..32 {
        let exps: [u8; 5] = std::array::from_fn(|i| ((mask >> i) & 1) as u8);
        let q = base.iter().zip(&exps).fold(Rational::from_integer(BigInt::from(1)), |acc, (b, &e)| acc * rat_pow(b, e));
        if is_rational_square(&q) {
            rel.squares.push(exps);
        } else if exps[2..].iter().any(|&e| e == 1) && is_rational_square(&(q * &two)) {
            rel.warnings.push(format!("2·{:?} is a square (not modelled)", exps));
        }
    }
    let ab = &s.a / &s.b;
    let bc = &s.b / &s.c;
    let cbase = [two, ab, bc];
    for idx in 1u32..27 {
        let exps: [u8; 3] = [(idx % 3) as u8, ((idx / 3) % 3) as u8, ((idx / 9) % 3) as u8];
        let q = cbase
            .iter()
            .zip(&exps)
            .fold(Rational::from_integer(BigInt::from(1)), |acc, (b, &e)| acc * rat_pow(b, e));
        if is_rational_cube(&q) {
            rel.cubes.push(exps);
        } else if exps[1..].iter().any(|&e| e != 0)
            && (is_rational_cube(&(&q * &three)) || is_rational_cube(&(&q * &three * &three)))
        {
            rel.warnings.push(format!("3·{:?} is a cube (not modelled)", exps));
        }
    }
    for w in &rel.warnings {
        log::warn!("generic-assumption: {}", w);
    }
    Ok(rel)
}

/// The subgroup of G compatible with every detected relation; G itself for
/// generic coefficients.
pub fn subgroup_for_surface(s: &Surface) -> Result<Subgroup> {
    let rel = kummer_relations(s)?;
    Subgroup::from_predicate(|g| {
        rel.squares.iter().all(|e| square_character_value(g, e) == 1)
            && rel.cubes.iter().all(|e| cube_character_value(g, e) == 0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_standard_generators_is_g() {
        assert_eq!(closure(&standard_generators()).len(), GROUP_ORDER);
        assert!(Subgroup::full().check_closed().is_ok());
        assert!(Subgroup::full().generators.len() <= 5);
    }

    #[test]
    fn index2_kernels_are_subgroups() {
        let subs = index2_subgroups();
        // the abelianization has 2-rank 4: (u mod 4), (u mod 3), b, c/e combinations
        assert!(!subs.is_empty());
        for h in &subs {
            assert_eq!(h.order(), 432);
            h.check_closed().unwrap();
        }
        for tag in [TAG_3ABC, TAG_M3A, TAG_M3B, TAG_M3C] {
            let h = square_relation_subgroup(&tag);
            assert!(subs.contains(&h), "{}", tag_name(&tag));
        }
    }

    #[test]
    fn generic_surface_gives_g() {
        let s = Surface::from_ints(5, 7, 11).unwrap();
        assert_eq!(subgroup_for_surface(&s).unwrap().order(), GROUP_ORDER);
    }

    #[test]
    fn minus_three_a_square() {
        let s = Surface::from_ints(-3, 5, 7).unwrap();
        let h = subgroup_for_surface(&s).unwrap();
        assert_eq!(h, square_relation_subgroup(&TAG_M3A));
    }

    #[test]
    fn cube_ratio_index_three() {
        // C/B = 8 is a cube, nothing else holds
        let s = Surface::from_ints(7, 5, 40).unwrap();
        let h = subgroup_for_surface(&s).unwrap();
        assert_eq!(h.order(), 288);
        assert!(h.elements.iter().all(|g| g.c % 3 == 0));
    }

    #[test]
    fn zero_coefficient_rejected() {
        let one = Rational::from_integer(BigInt::from(1));
        let s = Surface {
            a: Rational::zero(),
            b: one.clone(),
            c: one,
        };
        assert!(kummer_relations(&s).is_err());
    }
}
