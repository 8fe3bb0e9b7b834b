//! Closure of the reference curves under the group, their classes in the
//! d₁..d₂₀ basis, and the action matrices.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::group::{all_elements, standard_generators, GaloisElement, GROUP_ORDER};
use crate::error::{Error, Result};
use crate::exact::field::Field;
use crate::exact::finite::{FiniteField, TowerEmbedding};
use crate::exact::matrix::{inverse_rational, IntMatrix};
use crate::exact::rational::Rational;
use crate::exact::tower::{Tower, TowerElement};
use crate::geometry::divisor::{conjugate_divisor, key, reduce_divisor_mod_p, Divisor, DivisorKey};
use crate::geometry::forms::FormRing;
use crate::geometry::reference::{auxiliary_divisors, reference_divisors};
use crate::intersection::engine::Engine;
use crate::intersection::gram::{gram_matrix, GramMatrix};

/// Smallest prime p > `above` with p ≡ 1 mod 12 and 2 a cube mod p, so the
/// whole tower embeds into F_p.
pub fn split_prime(above: u64) -> u64 {
    let mut p = above + 1;
    loop {
        if p % 12 == 1 && is_prime_u64(p) {
            let f = FiniteField::prime(p);
            if f.pow(&f.from_i64(2), (p - 1) / 3) == f.one() {
                return p;
            }
        }
        p += 1;
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The first embedding of the tower into F_p (p split) in enumeration order.
pub fn split_embedding(p: u64) -> Result<TowerEmbedding> {
    let f = FiniteField::prime(p);
    // primitive 12th roots and cube roots of 2 by exponentiation of a generator
    let n = p - 1;
    let g = (2..p)
        .map(|a| f.from_i64(a as i64))
        .find(|a| {
            let mut m = n;
            let mut q = 2;
            let mut ok = true;
            while m > 1 {
                if m % q == 0 {
                    if f.pow(a, n / q) == f.one() {
                        ok = false;
                        break;
                    }
                    while m % q == 0 {
                        m /= q;
                    }
                }
                q += 1;
            }
            ok
        })
        .ok_or_else(|| Error::Embedding("no primitive root".into()))?;
    let zeta = f.pow(&g, n / 12);
    let two = f.from_i64(2);
    let s = (0..3)
        .map(|k| f.mul(&f.pow(&g, k * n / 3), &cube_root(&f, &two, &g)))
        .find(|c| f.pow(c, 3) == two)
        .ok_or_else(|| Error::Embedding("2 is not a cube".into()))?;
    TowerEmbedding::new(f, zeta, s)
}

fn cube_root(f: &FiniteField, a: &Vec<u64>, g: &Vec<u64>) -> Vec<u64> {
    // discrete log by baby-step giant-step, then divide by 3
    let p = f.p();
    let n = p - 1;
    let m = (n as f64).sqrt().ceil() as u64 + 1;
    let mut table = HashMap::new();
    let mut cur = f.one();
    for j in 0..m {
        table.entry(cur.clone()).or_insert(j);
        cur = f.mul(&cur, g);
    }
    let factor = f.inv(&f.pow(g, m)).unwrap();
    let mut gamma = a.clone();
    for i in 0..m {
        if let Some(j) = table.get(&gamma) {
            let k = i * m + j;
            return f.pow(g, k / 3);
        }
        gamma = f.mul(&gamma, &factor);
    }
    f.zero()
}

/// Catalogued curves with their classes and the permutation action.
#[derive(Clone, Debug)]
pub struct Catalogue {
    pub divisors: Vec<Divisor<TowerElement>>,
    pub index: HashMap<DivisorKey<TowerElement>, usize>,
    /// class of each divisor in the d₁..d₂₀ basis
    pub classes: Vec<Vec<i64>>,
    pub gram: GramMatrix,
    /// the prime used to compute catalogue classes
    pub class_prime: u64,
}

impl Catalogue {
    /// Closure of D₁..D₂₀, D₁₃′, D′₂₀ under the group, with classes computed
    /// over a split prime and checked against the char-0 Gram.
    pub fn build() -> Result<Self> {
        let t = Tower;
        let ring = FormRing::new(t);
        let mut seeds = reference_divisors()?;
        seeds.extend(auxiliary_divisors());
        let mut divisors: Vec<Divisor<TowerElement>> = Vec::new();
        let mut index = HashMap::new();
        for d in seeds {
            let k = key(&ring, &d);
            if !index.contains_key(&k) {
                index.insert(k, divisors.len());
                divisors.push(d);
            }
        }
        let gens = standard_generators();
        let mut frontier: Vec<usize> = (0..divisors.len()).collect();
        while let Some(i) = frontier.pop() {
            for g in &gens {
                let img = conjugate_divisor(g, &divisors[i]);
                let k = key(&ring, &img);
                if !index.contains_key(&k) {
                    index.insert(k, divisors.len());
                    frontier.push(divisors.len());
                    let mut img = img;
                    img.label = format!("C{}", divisors.len());
                    divisors.push(img);
                }
            }
        }
        log::info!("catalogue closure: {} curves", divisors.len());

        let basis: Vec<Divisor<TowerElement>> = divisors[..20].to_vec();
        let engine0 = Engine::new(t);
        let gram = gram_matrix(&engine0, &basis)?;

        let p = split_prime(10_000);
        let emb = split_embedding(p)?;
        let engine_p = Engine::new(emb.field.clone());
        let reduced: Vec<Divisor<Vec<u64>>> = divisors
            .iter()
            .map(|d| reduce_divisor_mod_p(d, &emb))
            .collect::<Result<_>>()?;
        // distinct curves stay distinct after reduction
        {
            let rp = FormRing::new(emb.field.clone());
            let mut seen = std::collections::HashSet::new();
            for d in &reduced {
                if !seen.insert(key(&rp, d)) {
                    return Err(Error::Degenerate(format!("curves collide mod {}", p)));
                }
            }
        }
        let gram_p = gram_matrix(&engine_p, &reduced[..20])?;
        if gram_p.matrix != gram.matrix {
            return Err(Error::Degenerate(format!("Gram mod {} differs from char 0", p)));
        }
        let ginv = inverse_rational(&gram.matrix).ok_or_else(|| Error::Degenerate("singular Gram".into()))?;
        let mut classes = Vec::with_capacity(divisors.len());
        for (i, d) in reduced.iter().enumerate() {
            let v: Vec<i64> = reduced[..20]
                .iter()
                .map(|b| engine_p.intersection_number(d, b))
                .collect::<Result<_>>()?;
            classes.push(solve_class(&ginv, &v).ok_or_else(|| {
                Error::NotIntegral(format!("{} (catalogue entry {})", divisors[i].label, i))
            })?);
        }
        Ok(Catalogue {
            divisors,
            index,
            classes,
            gram,
            class_prime: p,
        })
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn lookup(&self, d: &Divisor<TowerElement>) -> Result<usize> {
        let ring = FormRing::new(Tower);
        self.index
            .get(&key(&ring, d))
            .copied()
            .ok_or_else(|| Error::Degenerate(format!("{} left the catalogue", d.label)))
    }

    /// g·D as a catalogue index.
    pub fn act(&self, g: &GaloisElement, i: usize) -> Result<usize> {
        self.lookup(&conjugate_divisor(g, &self.divisors[i]))
    }

    /// Columns are the classes of g·d₁, …, g·d₂₀.
    pub fn action_matrix(&self, g: &GaloisElement) -> Result<IntMatrix> {
        let mut m = IntMatrix::zeros(20, 20);
        for j in 0..20 {
            let img = self.act(g, j)?;
            for (i, &c) in self.classes[img].iter().enumerate() {
                m.set(i, j, BigInt::from(c));
            }
        }
        Ok(m)
    }

    /// Action matrices for all 864 elements, indexed by `GaloisElement::index`.
    pub fn all_action_matrices(&self) -> Result<ActionMatrices> {
        let mats = all_elements()
            .iter()
            .map(|g| self.action_matrix(g).map(|m| m.to_i64_rows().unwrap()))
            .collect::<Result<Vec<_>>>()?;
        Ok(ActionMatrices { mats })
    }

    pub fn class_of(&self, label: &str) -> Option<&Vec<i64>> {
        self.divisors.iter().position(|d| d.label == label).map(|i| &self.classes[i])
    }
}

fn solve_class(ginv: &[Vec<Rational>], v: &[i64]) -> Option<Vec<i64>> {
    let mut out = Vec::with_capacity(ginv.len());
    for row in ginv {
        let mut acc = Rational::zero();
        for (a, &b) in row.iter().zip(v) {
            if b != 0 {
                acc += a * Rational::from_integer(BigInt::from(b));
            }
        }
        if !acc.denom().is_one() {
            return None;
        }
        out.push(acc.numer().to_i64()?);
    }
    Some(out)
}

/// Small dense matrices for all group elements.
#[derive(Clone, Debug)]
pub struct ActionMatrices {
    pub mats: Vec<Vec<Vec<i64>>>,
}

impl ActionMatrices {
    pub fn get(&self, g: &GaloisElement) -> &Vec<Vec<i64>> {
        &self.mats[g.index()]
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn apply(&self, g: &GaloisElement, v: &[i64]) -> Vec<i64> {
        mat_vec(self.get(g), v)
    }

    /// Checks MᵀGM = G for every element and M(gh) = M(g)M(h) on the given pairs.
    pub fn verify(&self, gram: &GramMatrix, pairs: &[(GaloisElement, GaloisElement)]) -> Result<()> {
        let g = gram.matrix.to_i64_rows().unwrap();
        for (idx, m) in self.mats.iter().enumerate() {
            let mt = transpose(m);
            if mat_mul(&mat_mul(&mt, &g), m) != g {
                return Err(Error::Degenerate(format!(
                    "action of {} does not preserve the pairing",
                    GaloisElement::from_index(idx)
                )));
            }
        }
        for (a, b) in pairs {
            if mat_mul(self.get(a), self.get(b)) != *self.get(&a.compose(b)) {
                return Err(Error::Degenerate(format!("M({}∘{}) ≠ M({})M({})", a, b, a, b)));
            }
        }
        if self.mats.len() != GROUP_ORDER {
            return Err(Error::Degenerate("missing action matrices".into()));
        }
        Ok(())
    }
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for l in 0..k {
            let x = a[i][l];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * b[l][j];
            }
        }
    }
    out
}

pub fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Floor-mod helper for reductions of integer vectors.
pub fn vec_mod(v: &[i64], m: i64) -> Vec<i64> {
    v.iter().map(|x| x.mod_floor(&m)).collect()
}
