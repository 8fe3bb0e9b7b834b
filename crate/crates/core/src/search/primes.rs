//! Factorization of coefficient-sized integers and Lucas–Pratt primality proofs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 10_000;

/// Distinct prime divisors of n (n ≠ 0), ascending.
pub fn prime_factors(n: &BigInt) -> Result<Vec<BigInt>> {
    if n.is_zero() {
        return Err(Error::Degenerate("factoring zero".into()));
    }
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if (&bd * &bd) > m {
            break;
        }
        if m.is_multiple_of(&bd) {
            out.push(bd.clone());
            while m.is_multiple_of(&bd) {
                m /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m.is_one() {
        return Ok(out);
    }
    out.extend(large_cofactor(&m)?);
    out.sort();
    out.dedup();
    Ok(out)
}

fn large_cofactor(m: &BigInt) -> Result<Vec<BigInt>> {
    if let Some(small) = m.to_u128() {
        return Ok(num_prime::nt_funcs::factorize128(small).into_keys().map(BigInt::from).collect());
    }
    if num_prime::nt_funcs::is_prime(&m.to_biguint().unwrap(), None).probably() {
        if prove_prime(m)?.is_some() {
            return Ok(vec![m.clone()]);
        }
    }
    for k in [2u32, 3] {
        let r = m.nth_root(k);
        if r.pow(k) == *m {
            return large_cofactor(&r);
        }
    }
    Err(Error::Unsupported(format!("cofactor {} exceeds 128 bits", m)))
}

/// A primality certificate: below 2⁶⁴ a deterministic Miller–Rabin run,
/// above it a Lucas witness with certified factors of p − 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimalityProof {
    MillerRabin64 {
        #[serde(with = "crate::exact::decimal")]
        p: BigInt,
    },
    Lucas {
        #[serde(with = "crate::exact::decimal")]
        p: BigInt,
        #[serde(with = "crate::exact::decimal")]
        witness: BigInt,
        factors: Vec<PrimalityProof>,
    },
}

impl PrimalityProof {
    pub fn prime(&self) -> &BigInt {
        match self {
            PrimalityProof::MillerRabin64 { p } | PrimalityProof::Lucas { p, .. } => p,
        }
    }

    /// Re-checks the whole tree.
    pub fn verify(&self) -> bool {
        match self {
            PrimalityProof::MillerRabin64 { p } => p.to_u64().is_some_and(num_prime::nt_funcs::is_prime64),
            PrimalityProof::Lucas { p, witness, factors } => {
                let pm1 = p - 1u32;
                let mut m = pm1.clone();
                for f in factors {
                    if !f.verify() {
                        return false;
                    }
                    let q = f.prime();
                    if !m.is_multiple_of(q) {
                        return false;
                    }
                    while m.is_multiple_of(q) {
                        m /= q;
                    }
                    if witness.modpow(&(&pm1 / q), p).is_one() {
                        return false;
                    }
                }
                m.is_one() && witness.modpow(&pm1, p).is_one()
            }
        }
    }
}

/// Primality proof for p ≥ 2, None if p is composite.
pub fn prove_prime(p: &BigInt) -> Result<Option<PrimalityProof>> {
    if p < &BigInt::from(2) {
        return Ok(None);
    }
    if let Some(small) = p.to_u64() {
        return Ok(num_prime::nt_funcs::is_prime64(small).then(|| PrimalityProof::MillerRabin64 { p: p.clone() }));
    }
    let pm1 = p - 1u32;
    // quick Fermat filter
    if !BigInt::from(2).modpow(&pm1, p).is_one() {
        return Ok(None);
    }
    let qs = prime_factors(&pm1)?;
    let mut factors = Vec::with_capacity(qs.len());
    for q in &qs {
        match prove_prime(q)? {
            Some(pr) => factors.push(pr),
            None => return Err(Error::Degenerate(format!("factor {} of p − 1 is not prime", q))),
        }
    }
    let mut a = BigInt::from(2);
    while a < BigInt::from(1000) {
        if a.modpow(&pm1, p).is_one() && qs.iter().all(|q| !a.modpow(&(&pm1 / q), p).is_one()) {
            return Ok(Some(PrimalityProof::Lucas {
                p: p.clone(),
                witness: a,
                factors,
            }));
        }
        a += 1u32;
    }
    // no primitive root among small a: composite with overwhelming likelihood, but check
    if num_prime::nt_funcs::is_prime(&p.to_biguint().unwrap(), None).probably() {
        return Err(Error::Unsupported(format!("no small Lucas witness for {}", p)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_of_small_and_large() {
        assert_eq!(prime_factors(&BigInt::from(-84)).unwrap(), vec![2.into(), 3.into(), 7.into()]);
        let n: BigInt = "177654844280109995246448000".parse().unwrap();
        let f = prime_factors(&n).unwrap();
        let expect: Vec<BigInt> = [2, 3, 5, 7, 11, 13, 17, 19, 23].iter().map(|&q| BigInt::from(q)).collect();
        assert_eq!(f, expect);
    }

    #[test]
    fn lucas_proof_for_large_prime() {
        // 2^89 − 1
        let p: BigInt = (BigInt::one() << 89) - 1u32;
        let pr = prove_prime(&p).unwrap().unwrap();
        assert!(matches!(pr, PrimalityProof::Lucas { .. }));
        assert!(pr.verify());
        let c = &p * BigInt::from(3);
        assert!(prove_prime(&c).unwrap().is_none());
        assert!(prove_prime(&BigInt::from(97)).unwrap().unwrap().verify());
    }
}
