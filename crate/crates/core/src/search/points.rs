//! Sieved search for rational points of bounded height.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::localfields::cover::IntSurface;

const MODULI: [u64; 12] = [64, 63, 65, 11, 17, 19, 23, 29, 31, 37, 41, 43];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSearch {
    pub bound: u64,
    /// primitive triples that reached the exact square test
    pub exact_tests: u64,
    /// points (x, y, z, w) with x, y, z, w ≥ 0
    pub points: Vec<[String; 4]>,
}

impl PointSearch {
    pub fn points_big(&self) -> Vec<[BigInt; 4]> {
        self.points
            .iter()
            .map(|p| p.clone().map(|s| s.parse().unwrap()))
            .collect()
    }
}

struct Sieve {
    m: u64,
    sixth: Vec<u64>,
    square: Vec<bool>,
    coeffs: [u64; 3],
}

impl Sieve {
    fn new(m: u64, s: &IntSurface) -> Self {
        let sixth = (0..m).map(|r| (0..6).fold(1u64, |acc, _| acc * r % m)).collect();
        let mut square = vec![false; m as usize];
        for r in 0..m {
            square[(r * r % m) as usize] = true;
        }
        let mb = BigInt::from(m);
        let c = |x: &BigInt| x.mod_floor(&mb).to_u64().unwrap();
        Sieve {
            m,
            sixth,
            square,
            coeffs: [c(&s.a), c(&s.b), c(&s.c)],
        }
    }

    #[inline]
    fn passes(&self, x: u64, y: u64, z: u64) -> bool {
        let m = self.m;
        let r = (self.coeffs[0] * self.sixth[(x % m) as usize]
            + self.coeffs[1] * self.sixth[(y % m) as usize]
            + self.coeffs[2] * self.sixth[(z % m) as usize])
            % m;
        self.square[r as usize]
    }
}

/// All primitive (x, y, z) with 0 ≤ x, y, z ≤ bound and R(x, y, z) a square.
pub fn search_points(s: &IntSurface, bound: u64) -> PointSearch {
    let sieves: Vec<Sieve> = MODULI.iter().map(|&m| Sieve::new(m, s)).collect();
    let fits_i128 = {
        let mx = [&s.a, &s.b, &s.c].iter().map(|c| c.abs()).max().unwrap();
        mx.bits() + 6 * (64 - bound.leading_zeros() as u64) + 3 < 126
    };
    let coeffs_i128: Option<[i128; 3]> = if fits_i128 {
        Some([s.a.to_i128().unwrap(), s.b.to_i128().unwrap(), s.c.to_i128().unwrap()])
    } else {
        None
    };
    let results: Vec<(u64, Vec<[String; 4]>)> = (0..=bound)
        .into_par_iter()
        .map(|x| {
            let mut tests = 0u64;
            let mut found = Vec::new();
            for y in 0..=bound {
                let gxy = x.gcd(&y);
                for z in 0..=bound {
                    if gxy.gcd(&z) != 1 {
                        continue;
                    }
                    if !sieves.iter().all(|sv| sv.passes(x, y, z)) {
                        continue;
                    }
                    tests += 1;
                    if let Some(c) = coeffs_i128 {
                        let p6 = |t: u64| (t as i128).pow(6);
                        let r = c[0] * p6(x) + c[1] * p6(y) + c[2] * p6(z);
                        if r < 0 {
                            continue;
                        }
                        let w = (r as u128).sqrt();
                        if w * w == r as u128 {
                            found.push([x.to_string(), y.to_string(), z.to_string(), w.to_string()]);
                        }
                    } else {
                        let r = s.rhs(&x.into(), &y.into(), &z.into());
                        if r.is_negative() {
                            continue;
                        }
                        let w = r.sqrt();
                        if &w * &w == r {
                            found.push([x.to_string(), y.to_string(), z.to_string(), w.to_string()]);
                        }
                    }
                }
            }
            (tests, found)
        })
        .collect();
    let mut out = PointSearch {
        bound,
        exact_tests: 0,
        points: Vec::new(),
    };
    for (t, f) in results {
        out.exact_tests += t;
        out.points.extend(f);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermat_type_surface_has_obvious_points() {
        let s = IntSurface::from_i64(1, 1, 1);
        let r = search_points(&s, 3);
        assert!(r.points.contains(&["1", "0", "0", "1"].map(String::from)));
        // every reported point is on the surface
        for p in r.points_big() {
            assert_eq!(&p[3] * &p[3], s.rhs(&p[0], &p[1], &p[2]));
        }
    }

    #[test]
    fn sieve_never_drops_points() {
        // brute force without the sieve on a small box
        let s = IntSurface::from_i64(-3, 97, 1);
        let r = search_points(&s, 12);
        let mut brute = Vec::new();
        for x in 0..=12u64 {
            for y in 0..=12u64 {
                for z in 0..=12u64 {
                    if x.gcd(&y).gcd(&z) != 1 {
                        continue;
                    }
                    let v = s.rhs(&x.into(), &y.into(), &z.into());
                    if !v.is_negative() && v.sqrt().pow(2) == v {
                        brute.push([x, y, z]);
                    }
                }
            }
        }
        let got: Vec<[u64; 3]> = r.points_big().iter().map(|p| [0, 1, 2].map(|i| p[i].to_u64().unwrap())).collect();
        assert_eq!(got, brute);
    }
}
