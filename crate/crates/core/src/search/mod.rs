//! Condition checkers and generators for the two families of
//! counterexamples, plus a sieved rational-point search.

pub mod points;
pub mod primes;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brauer::{bm_verdict, AlgebraDatum, Certificate, CubicAlgebraDatum, QuaternionAlgebraDatum, Verdict, VerdictConfig};
use crate::error::Result;
use crate::localfields::padic::legendre;

pub use points::{search_points, PointSearch};
pub use primes::{prime_factors, prove_prime, PrimalityProof};

/// The residue triples (a, b, c) mod 8 allowed by condition (viii).
pub const MOD8_TABLE: [(u8, u8, u8); 24] = [
    (3, 1, 1),
    (3, 3, 3),
    (3, 3, 7),
    (3, 5, 1),
    (3, 7, 3),
    (3, 7, 7),
    (5, 1, 1),
    (5, 1, 5),
    (5, 1, 7),
    (5, 3, 1),
    (5, 3, 5),
    (5, 3, 7),
    (5, 5, 1),
    (5, 5, 5),
    (5, 5, 7),
    (5, 7, 1),
    (5, 7, 5),
    (5, 7, 7),
    (7, 1, 3),
    (7, 1, 7),
    (7, 3, 5),
    (7, 5, 3),
    (7, 5, 7),
    (7, 7, 5),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuatReport {
    #[serde(with = "crate::exact::decimal")]
    pub a: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub b: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub c: BigInt,
    pub odd: bool,
    pub conditions: Vec<ConditionResult>,
}

impl QuatReport {
    pub fn passed(&self) -> bool {
        self.odd && self.conditions.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.conditions.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

fn cond(name: &str, passed: bool, detail: String) -> ConditionResult {
    ConditionResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

fn odd_prime_divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return Vec::new();
    }
    prime_factors(n)
        .unwrap_or_default()
        .into_iter()
        .filter(|p| p != &BigInt::from(2))
        .collect()
}

fn mod_n(x: &BigInt, n: i64) -> i64 {
    x.mod_floor(&BigInt::from(n)).to_i64().unwrap()
}

/// Conditions (i)–(viii) for the quaternion family, one entry each.
pub fn check_quat_conditions(a: &BigInt, b: &BigInt, c: &BigInt) -> QuatReport {
    let two = BigInt::from(2);
    let odd = [a, b, c].iter().all(|x| x.is_odd());
    let nonzero = !(a.is_zero() || b.is_zero() || c.is_zero());
    let mut out = Vec::with_capacity(8);

    // (i) valuations at primes > 3 dividing a or b
    let mut bad = Vec::new();
    for x in [a, b] {
        for p in odd_prime_divisors(x) {
            if p > BigInt::from(3) {
                let v = valuation(x, &p);
                if ![1, 2, 4, 5].contains(&v) {
                    bad.push(format!("v_{}({}) = {}", p, x, v));
                }
            }
        }
    }
    out.push(cond("i", nonzero && bad.is_empty(), bad.join(", ")));

    // (ii)
    let sqf = nonzero && crate::exact::rational::is_squarefree(c);
    out.push(cond("ii", sqf, format!("c = {}", c)));

    // (iii)
    out.push(cond("iii", a.is_positive() || b.is_positive(), String::new()));

    // (iv)
    let a3 = mod_n(a, 3);
    let mac3 = mod_n(&-(a * c), 3);
    out.push(cond("iv", a3 == 1 || mac3 == 1, format!("a ≡ {}, −ac ≡ {} mod 3", a3, mac3)));

    // (v)
    let mut bad = Vec::new();
    for p in odd_prime_divisors(a) {
        if !c.is_multiple_of(&p) {
            bad.push(format!("{} ∤ c", p));
        } else if legendre(&(&two * b).mod_floor(&p), &p) != 1 {
            bad.push(format!("(2b/{}) ≠ 1", p));
        }
    }
    out.push(cond("v", nonzero && bad.is_empty(), bad.join(", ")));

    // (vi)
    let mut bad = Vec::new();
    for p in odd_prime_divisors(b) {
        if legendre(&a.mod_floor(&p), &p) != 1 {
            bad.push(format!("(a/{}) ≠ 1", p));
        }
        if legendre(&(-c).mod_floor(&p), &p) != 1 {
            bad.push(format!("(−c/{}) ≠ 1", p));
        }
    }
    out.push(cond("vi", nonzero && bad.is_empty(), bad.join(", ")));

    // (vii)
    let seven_bad = c.is_multiple_of(&BigInt::from(7)) && {
        let (x, y) = (mod_n(&(a * 4), 7), mod_n(&(b * 2), 7));
        x == y && [3, 5, 6].contains(&x)
    };
    out.push(cond("vii", !seven_bad, String::new()));

    // (viii)
    let t = (mod_n(a, 8) as u8, mod_n(b, 8) as u8, mod_n(c, 8) as u8);
    out.push(cond("viii", MOD8_TABLE.contains(&t), format!("{:?} mod 8", t)));

    QuatReport {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        odd,
        conditions: out,
    }
}

/// Every odd triple with |a|, |b|, |c| ≤ bound passing the conditions, with
/// its certificate.
pub fn search_quat(bound: i64, cfg: &VerdictConfig) -> Result<Vec<(QuatReport, Certificate)>> {
    let mut triples = Vec::new();
    let odd: Vec<i64> = (-bound..=bound).filter(|x| x % 2 != 0).collect();
    for &a in &odd {
        for &b in &odd {
            for &c in &odd {
                let r = check_quat_conditions(&a.into(), &b.into(), &c.into());
                if r.passed() {
                    triples.push(r);
                }
            }
        }
    }
    log::info!("{} triples with |a|, |b|, |c| ≤ {} pass the conditions", triples.len(), bound);
    triples
        .into_par_iter()
        .map(|r| {
            let d = QuaternionAlgebraDatum::from_big(r.a.clone(), r.b.clone(), r.c.clone())?;
            let cert = bm_verdict(&AlgebraDatum::Quaternion(d), cfg)?;
            Ok((r, cert))
        })
        .collect()
}

/// 2⁷ · ∏_{3 ≤ q ≤ 23} q³.
pub fn infrem_modulus() -> BigInt {
    let mut m = BigInt::from(128);
    for q in [3u32, 5, 7, 11, 13, 17, 19, 23] {
        m *= BigInt::from(q).pow(3);
    }
    m
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CubicCandidate {
    pub k: u64,
    #[serde(with = "crate::exact::decimal")]
    pub p: BigInt,
    pub proof: PrimalityProof,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CubicSearch {
    pub certified: Vec<CubicCandidate>,
    /// primes p ≡ 97 mod M whose surface does not certify, with the verdict
    pub rejected: Vec<(u64, String, Verdict)>,
    pub composite: usize,
}

/// Primes p = 97 + kM (k = 0, 1, …) whose surfaces
/// w² = −3x⁶ + p y⁶ + 224p z⁶ certify as obstructions, until `count` do.
pub fn search_cubic_primes(count: usize, cfg: &VerdictConfig) -> Result<CubicSearch> {
    let m = infrem_modulus();
    let mut out = CubicSearch::default();
    let mut k = 0u64;
    while out.certified.len() < count {
        let p = BigInt::from(97) + &m * BigInt::from(k);
        debug_assert!((&p % 8u32).is_one());
        let quick = num_prime::nt_funcs::is_prime(&p.to_biguint().unwrap(), None).probably();
        let proof = if quick { prove_prime(&p)? } else { None };
        match proof {
            None => out.composite += 1,
            Some(proof) => {
                let d = CubicAlgebraDatum::family(&p)?;
                let cert = bm_verdict(&AlgebraDatum::Cubic(d), cfg)?;
                if cert.verdict == Verdict::Obstruction {
                    log::info!("k = {}: p = {} certifies", k, p);
                    out.certified.push(CubicCandidate {
                        k,
                        p,
                        proof,
                        certificate: cert,
                    });
                } else {
                    log::info!("k = {}: p = {} is prime but gives verdict {:?}", k, p, cert.verdict);
                    out.rejected.push((k, p.to_string(), cert.verdict));
                }
            }
        }
        k += 1;
    }
    Ok(out)
}
