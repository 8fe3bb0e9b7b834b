//! The two explicit Brauer classes, per-place value sets, the adelic sum and
//! the obstruction verdict.

pub mod cubic;
pub mod norm;
pub mod quaternion;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localfields::cover::{local_points_exists, CoverConfig, CoverResult, IntSurface, LocalPoint, Solubility};
use crate::localfields::padic::{is_square_rational, PadicNumber};
use crate::localfields::symbols::{InvariantValue, Place};
use crate::exact::rational::Rational;

pub use cubic::{congruence_scan, split_scan, CubicAlgebraDatum, SplitScanClass};
pub use norm::{verify_divisor_norm_identity, NormIdentityReport};
pub use quaternion::QuaternionAlgebraDatum;

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub method: String,
    /// deepest residue level used (p-adic digits)
    pub precision: u32,
    pub classes: usize,
    pub dropped: usize,
    pub undecided: usize,
    pub examined: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fast_path: Option<Vec<InvariantValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fast_path_agrees: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl Evidence {
    pub fn symbolic(method: &str) -> Self {
        Evidence {
            method: method.to_string(),
            ..Default::default()
        }
    }

    pub fn from_cover<T: Clone + Ord>(method: &str, r: &CoverResult<T>) -> Self {
        Evidence {
            method: method.to_string(),
            precision: r.max_depth,
            classes: r.classes.len(),
            dropped: r.dropped,
            undecided: r.undecided.len(),
            examined: r.examined,
            ..Default::default()
        }
    }
}

/// Witnessed values and, when certified, the complete value set.
#[derive(Clone, Debug)]
pub struct ValueSet {
    pub certified: bool,
    pub values: BTreeSet<InvariantValue>,
    pub possible: BTreeSet<InvariantValue>,
    pub evidence: Evidence,
}

impl ValueSet {
    fn exact(values: BTreeSet<InvariantValue>, evidence: Evidence) -> Self {
        ValueSet {
            certified: true,
            possible: values.clone(),
            values,
            evidence,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AlgebraDatum {
    Quaternion(QuaternionAlgebraDatum),
    Cubic(CubicAlgebraDatum),
    /// f = 1
    Trivial {
        #[serde(with = "crate::exact::decimal")]
        a: BigInt,
        #[serde(with = "crate::exact::decimal")]
        b: BigInt,
        #[serde(with = "crate::exact::decimal")]
        c: BigInt,
    },
}

impl AlgebraDatum {
    pub fn surface(&self) -> IntSurface {
        match self {
            AlgebraDatum::Quaternion(q) => q.surface(),
            AlgebraDatum::Cubic(c) => c.surface(),
            AlgebraDatum::Trivial { a, b, c } => IntSurface::new(a.clone(), b.clone(), c.clone()),
        }
    }

    fn support_primes(&self) -> Result<Vec<BigInt>> {
        match self {
            AlgebraDatum::Quaternion(q) => q.support_primes(),
            AlgebraDatum::Cubic(c) => c.support_primes(),
            AlgebraDatum::Trivial { .. } => Ok(Vec::new()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceCoefficients {
    #[serde(rename = "A", with = "crate::exact::decimal")]
    pub a: BigInt,
    #[serde(rename = "B", with = "crate::exact::decimal")]
    pub b: BigInt,
    #[serde(rename = "C", with = "crate::exact::decimal")]
    pub c: BigInt,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlaceRecord {
    pub v: Place,
    pub solubility: Solubility,
    /// witnessed values; the full value set when `certified`
    pub values: Vec<InvariantValue>,
    pub certified: bool,
    pub evidence: Evidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Obstruction,
    None,
    Undecided,
    NotLocallySoluble,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub version: u32,
    pub surface: SurfaceCoefficients,
    pub algebra: AlgebraDatum,
    pub places: Vec<PlaceRecord>,
    /// every place not listed
    pub other_places: String,
    pub sum_set: Vec<InvariantValue>,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn place(&self, v: &Place) -> Option<&PlaceRecord> {
        self.places.iter().find(|r| &r.v == v)
    }

    pub fn values_at(&self, v: &Place) -> Option<BTreeSet<InvariantValue>> {
        self.place(v).map(|r| r.values.iter().copied().collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Clone, Debug)]
pub struct VerdictConfig {
    pub cover: CoverConfig,
    /// local solubility is searched explicitly at every prime up to this bound
    pub explicit_prime_bound: u64,
    /// residue covers are used at primes up to this bound
    pub cover_prime_bound: u64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig {
            cover: CoverConfig::default(),
            explicit_prime_bound: 100,
            cover_prime_bound: 300,
        }
    }
}

/// Minkowski sum of finite subsets of Q/Z.
pub fn minkowski_sum(sets: &[BTreeSet<InvariantValue>]) -> BTreeSet<InvariantValue> {
    let mut acc: BTreeSet<InvariantValue> = [InvariantValue::ZERO].into_iter().collect();
    for s in sets {
        acc = acc.iter().flat_map(|a| s.iter().map(move |b| *a + *b)).collect();
    }
    acc
}

fn small_primes(bound: u64) -> Vec<BigInt> {
    (2..=bound)
        .filter(|&n| num_prime::nt_funcs::is_prime64(n))
        .map(BigInt::from)
        .collect()
}

fn quat_conditions_hold(q: &QuaternionAlgebraDatum) -> bool {
    crate::search::check_quat_conditions(&q.a, &q.b, &q.c).passed()
}

fn singleton(v: InvariantValue) -> BTreeSet<InvariantValue> {
    [v].into_iter().collect()
}

fn finite_value_set(datum: &AlgebraDatum, p: &BigInt, in_support: bool, cfg: &VerdictConfig) -> Result<ValueSet> {
    if !in_support {
        return Ok(ValueSet::exact(
            singleton(InvariantValue::ZERO),
            Evidence::symbolic("unit argument: p is prime to 6 and to every coefficient"),
        ));
    }
    let small = p.to_u64().is_some_and(|n| n <= cfg.cover_prime_bound);
    let mut vs = match datum {
        AlgebraDatum::Trivial { .. } => ValueSet::exact(singleton(InvariantValue::ZERO), Evidence::symbolic("f = 1")),
        AlgebraDatum::Quaternion(q) => {
            let alpha = q.alpha();
            if is_square_rational(&Rational::from_integer(q.a.clone()), p) {
                ValueSet::exact(singleton(InvariantValue::ZERO), Evidence::symbolic("a is a square in Q_p"))
            } else if is_square_rational(&alpha, p) {
                ValueSet::exact(singleton(InvariantValue::ZERO), Evidence::symbolic("−ac is a square in Q_p"))
            } else if small {
                q.cover_value_set(p, &cfg.cover)
            } else {
                return Ok(ValueSet {
                    certified: false,
                    values: BTreeSet::new(),
                    possible: BTreeSet::new(),
                    evidence: Evidence::symbolic("prime too large for a residue cover"),
                });
            }
        }
        AlgebraDatum::Cubic(c) => {
            if p == &BigInt::from(3) {
                if c.theta_is_local_cube(p)? {
                    ValueSet::exact(singleton(InvariantValue::ZERO), Evidence::symbolic("θ is a cube in Q_3"))
                } else {
                    return Ok(ValueSet {
                        certified: false,
                        values: BTreeSet::new(),
                        possible: BTreeSet::new(),
                        evidence: Evidence::symbolic("wild cubic symbol at 3 is not supported"),
                    });
                }
            } else if c.theta_is_local_cube(p)? {
                ValueSet::exact(singleton(InvariantValue::ZERO), Evidence::symbolic("θ is a cube in K_v"))
            } else if small {
                c.cover_value_set(p, &cfg.cover)?
            } else {
                let values = c.witnessed_values(p, cfg.cover.witness_digits);
                ValueSet {
                    certified: false,
                    possible: values.clone(),
                    values,
                    evidence: Evidence::symbolic("values at lifted special points (no complete cover)"),
                }
            }
        }
    };
    let fast = match datum {
        AlgebraDatum::Quaternion(q) if quat_conditions_hold(q) => Some(q.fast_path(&Place::Prime(p.clone()))),
        AlgebraDatum::Cubic(c) => c.fast_path(p),
        _ => None,
    };
    if let Some(f) = fast {
        vs.evidence.fast_path_agrees = Some(!vs.certified || vs.values == f);
        vs.evidence.fast_path = Some(f.into_iter().collect());
    }
    Ok(vs)
}

fn real_value_set(datum: &AlgebraDatum) -> ValueSet {
    match datum {
        AlgebraDatum::Quaternion(q) => {
            let (set, why) = q.real_value_set();
            let mut vs = ValueSet::exact(set, Evidence::symbolic(&format!("sign analysis: {}", why)));
            if quat_conditions_hold(q) {
                let f = q.fast_path(&Place::Infinity);
                vs.evidence.fast_path_agrees = Some(vs.values == f);
                vs.evidence.fast_path = Some(f.into_iter().collect());
            }
            vs
        }
        AlgebraDatum::Cubic(_) => ValueSet::exact(
            singleton(InvariantValue::ZERO),
            Evidence::symbolic("3-torsion class at a real place"),
        ),
        AlgebraDatum::Trivial { .. } => ValueSet::exact(singleton(InvariantValue::ZERO), Evidence::symbolic("f = 1")),
    }
}

fn place_record(datum: &AlgebraDatum, v: &Place, in_support: bool, cfg: &VerdictConfig) -> Result<PlaceRecord> {
    let s = datum.surface();
    let solubility = local_points_exists(&s, v, &cfg.cover);
    if matches!(solubility, Solubility::Empty { .. }) {
        return Ok(PlaceRecord {
            v: v.clone(),
            solubility,
            values: Vec::new(),
            certified: true,
            evidence: Evidence::symbolic("no local points"),
        });
    }
    let vs = match v {
        Place::Infinity => real_value_set(datum),
        Place::Prime(p) => finite_value_set(datum, p, in_support, cfg)?,
    };
    log::debug!("place {}: values {:?} certified {}", v, vs.values, vs.certified);
    Ok(PlaceRecord {
        v: v.clone(),
        solubility,
        values: vs.values.into_iter().collect(),
        certified: vs.certified,
        evidence: vs.evidence,
    })
}

/// Local solubility everywhere, per-place value sets and the verdict.
pub fn bm_verdict(datum: &AlgebraDatum, cfg: &VerdictConfig) -> Result<Certificate> {
    let s = datum.surface();
    let support = datum.support_primes()?;
    let coeff_primes = crate::search::primes::prime_factors(&(&s.a * &s.b * &s.c * 6))?;
    let mut primes: BTreeSet<BigInt> = small_primes(cfg.explicit_prime_bound).into_iter().collect();
    primes.extend(support.iter().cloned());
    primes.extend(coeff_primes.iter().cloned());
    let mut places = vec![Place::Infinity];
    places.extend(primes.into_iter().map(Place::Prime));

    let records: Vec<PlaceRecord> = places
        .par_iter()
        .map(|v| {
            let in_support = match v {
                Place::Infinity => true,
                Place::Prime(p) => support.contains(p),
            };
            place_record(datum, v, in_support, cfg)
        })
        .collect::<Result<_>>()?;

    let sets: Vec<BTreeSet<InvariantValue>> = records.iter().map(|r| r.values.iter().copied().collect()).collect();
    let sum = minkowski_sum(&sets);
    let any_empty = records.iter().any(|r| matches!(r.solubility, Solubility::Empty { .. }));
    let all_soluble = records.iter().all(|r| r.solubility.is_soluble());
    let all_certified = records.iter().all(|r| r.certified);
    let fast_paths_agree = records.iter().all(|r| r.evidence.fast_path_agrees != Some(false));
    if !fast_paths_agree {
        return Err(Error::Degenerate("residue cover disagrees with the hand analysis".into()));
    }
    let verdict = if any_empty {
        Verdict::NotLocallySoluble
    } else if all_soluble && sum.contains(&InvariantValue::ZERO) {
        // witnessed values already give an adelic point with sum 0
        Verdict::None
    } else if all_soluble && all_certified {
        Verdict::Obstruction
    } else {
        Verdict::Undecided
    };
    Ok(Certificate {
        version: CERTIFICATE_VERSION,
        surface: SurfaceCoefficients {
            a: s.a.clone(),
            b: s.b.clone(),
            c: s.c.clone(),
        },
        algebra: datum.clone(),
        places: records,
        other_places: format!(
            "every prime above {} prime to 6ABC: the smooth genus-2 curve z = 0 has F_p-points by the Weil bound \
             (p ≥ 17), which lift by Hensel; the invariant is 0 by the unit argument",
            cfg.explicit_prime_bound
        ),
        sum_set: sum.into_iter().collect(),
        verdict,
    })
}

/// Σ_v inv_v A(P) at a rational point (x, y, z, w), with the per-place terms.
pub fn reciprocity_sum(datum: &AlgebraDatum, pt: &[BigInt; 4]) -> Result<(InvariantValue, Vec<(Place, InvariantValue)>)> {
    let s = datum.surface();
    let [x, y, z, w] = pt;
    if &(w * w) != &s.rhs(x, y, z) {
        return Err(Error::NotOnSurface(format!("({}, {}, {}, {})", x, y, z, w)));
    }
    let mut terms = vec![(Place::Infinity, InvariantValue::ZERO)];
    match datum {
        AlgebraDatum::Trivial { .. } => {}
        AlgebraDatum::Quaternion(q) => {
            terms[0].1 = q.eval_exact(y, z, &Place::Infinity);
            let g = y * y + &q.c * z * z;
            let h = y.pow(4) - &q.c * y * y * z * z + &q.c * &q.c * z.pow(4);
            let mut n = &q.a * &q.b * &q.c * 2;
            for t in [&g, &h] {
                if !t.is_zero() {
                    n *= t;
                }
            }
            for p in crate::search::primes::prime_factors(&n)? {
                terms.push((Place::Prime(p.clone()), q.eval_exact(y, z, &Place::Prime(p))));
            }
        }
        AlgebraDatum::Cubic(c) => {
            let t = &s.b * y.pow(6) + &s.c * z.pow(6);
            if t.is_zero() {
                return Err(Error::Degenerate("point on w² + 3m²x⁶ = 0".into()));
            }
            let n = &c.b * &c.c * &c.theta * &c.m * &t * 6;
            for p in crate::search::primes::prime_factors(&n)? {
                let lp = LocalPoint {
                    p: p.clone(),
                    x: x.clone(),
                    y: y.clone(),
                    z: z.clone(),
                    w: PadicNumber::from_int_mod(w, &p, 60),
                };
                terms.push((Place::Prime(p), c.eval_cubic_invariant(&lp)?));
            }
        }
    }
    let total = terms.iter().fold(InvariantValue::ZERO, |acc, (_, v)| acc + *v);
    Ok((total, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minkowski() {
        let a: BTreeSet<_> = [InvariantValue::THIRD, InvariantValue::TWO_THIRDS].into_iter().collect();
        let z = singleton(InvariantValue::ZERO);
        assert_eq!(minkowski_sum(&[a.clone(), z.clone()]), a);
        assert!(minkowski_sum(&[a.clone(), a]).contains(&InvariantValue::ZERO));
        assert_eq!(minkowski_sum(&[]), z);
    }
}
