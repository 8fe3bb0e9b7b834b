//! The order-864 group of tuples (u, a, b, c, e).
//!
//! u ∈ (Z/12)^× acts on ζ, a ∈ Z/3 sends s to ω^a s, b and c are the μ₆
//! twists of α/β and β/γ, e the sign twist of α³.

use std::fmt;

use serde::{Deserialize, Serialize};

pub const UNITS_12: [u8; 4] = [1, 5, 7, 11];

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaloisElement {
    pub u: u8,
    pub a: u8,
    pub b: u8,
    pub c: u8,
    pub e: u8,
}

impl fmt::Debug for GaloisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.u, self.a, self.b, self.c, self.e)
    }
}

impl fmt::Display for GaloisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl GaloisElement {
    pub fn new(u: i64, a: i64, b: i64, c: i64, e: i64) -> Self {
        let u = u.rem_euclid(12) as u8;
        assert!(UNITS_12.contains(&u), "u must be a unit mod 12");
        GaloisElement {
            u,
            a: a.rem_euclid(3) as u8,
            b: b.rem_euclid(6) as u8,
            c: c.rem_euclid(6) as u8,
            e: e.rem_euclid(2) as u8,
        }
    }

    pub fn identity() -> Self {
        GaloisElement { u: 1, a: 0, b: 0, c: 0, e: 0 }
    }

    /// g∘h: first h, then g.
    pub fn compose(&self, h: &GaloisElement) -> GaloisElement {
        let u = self.u as i64;
        GaloisElement::new(
            u * h.u as i64,
            self.a as i64 + u * h.a as i64,
            self.b as i64 + u * h.b as i64,
            self.c as i64 + u * h.c as i64,
            (self.e + h.e) as i64,
        )
    }

    pub fn inverse(&self) -> GaloisElement {
        // u is its own inverse mod 12
        let u = self.u as i64;
        GaloisElement::new(
            u,
            -u * self.a as i64,
            -u * self.b as i64,
            -u * self.c as i64,
            self.e as i64,
        )
    }

    pub fn pow(&self, n: u32) -> GaloisElement {
        let mut acc = GaloisElement::identity();
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn order(&self) -> u32 {
        let mut g = *self;
        let mut n = 1;
        while g != GaloisElement::identity() {
            g = self.compose(&g);
            n += 1;
        }
        n
    }

    pub fn is_identity(&self) -> bool {
        *self == GaloisElement::identity()
    }

    /// Index in 0..864 (u-index major).
    pub fn index(&self) -> usize {
        let ui = UNITS_12.iter().position(|&x| x == self.u).unwrap();
        ((((ui * 3 + self.a as usize) * 6 + self.b as usize) * 6 + self.c as usize) * 2) + self.e as usize
    }

    pub fn from_index(mut i: usize) -> Self {
        let e = i % 2;
        i /= 2;
        let c = i % 6;
        i /= 6;
        let b = i % 6;
        i /= 6;
        let a = i % 3;
        i /= 3;
        GaloisElement {
            u: UNITS_12[i],
            a: a as u8,
            b: b as u8,
            c: c as u8,
            e: e as u8,
        }
    }

    /// χ₋₃(u) = +1 iff u ≡ 1 mod 3 (action on √−3).
    pub fn chi_minus3(&self) -> i8 {
        if self.u % 3 == 1 {
            1
        } else {
            -1
        }
    }

    /// χ₋₁(u) = +1 iff u ≡ 1 mod 4 (action on i).
    pub fn chi_minus1(&self) -> i8 {
        if self.u % 4 == 1 {
            1
        } else {
            -1
        }
    }

    /// χ₁₂(u) = +1 iff u ≡ ±1 mod 12 (action on √3).
    pub fn chi_3(&self) -> i8 {
        if self.u == 1 || self.u == 11 {
            1
        } else {
            -1
        }
    }
}

pub const GROUP_ORDER: usize = 864;

pub fn all_elements() -> Vec<GaloisElement> {
    (0..GROUP_ORDER).map(GaloisElement::from_index).collect()
}

/// A small generating set of the full group.
pub fn standard_generators() -> Vec<GaloisElement> {
    vec![
        GaloisElement::new(5, 0, 0, 0, 0),
        GaloisElement::new(7, 0, 0, 0, 0),
        GaloisElement::new(1, 1, 0, 0, 0),
        GaloisElement::new(1, 0, 1, 0, 0),
        GaloisElement::new(1, 0, 0, 1, 0),
        GaloisElement::new(1, 0, 0, 0, 1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn indexing_roundtrip() {
        for i in 0..GROUP_ORDER {
            assert_eq!(GaloisElement::from_index(i).index(), i);
        }
    }

    #[test]
    fn group_axioms_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(864);
        let all = all_elements();
        for _ in 0..20_000 {
            let g = all[rng.gen_range(0..GROUP_ORDER)];
            let h = all[rng.gen_range(0..GROUP_ORDER)];
            let k = all[rng.gen_range(0..GROUP_ORDER)];
            assert_eq!(g.compose(&h).compose(&k), g.compose(&h.compose(&k)));
            assert!(g.compose(&g.inverse()).is_identity());
            assert!(g.inverse().compose(&g).is_identity());
        }
    }

    #[test]
    fn generators_generate() {
        let mut seen = std::collections::HashSet::new();
        let mut frontier = vec![GaloisElement::identity()];
        seen.insert(GaloisElement::identity());
        while let Some(g) = frontier.pop() {
            for s in standard_generators() {
                let h = s.compose(&g);
                if seen.insert(h) {
                    frontier.push(h);
                }
            }
        }
        assert_eq!(seen.len(), GROUP_ORDER);
    }
}
