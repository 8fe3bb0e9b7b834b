use std::collections::BTreeSet;

use num_bigint::BigInt;
use sextic_k3::brauer::cubic::{congruence_scan, split_scan};
use sextic_k3::brauer::{
    bm_verdict, minkowski_sum, reciprocity_sum, verify_divisor_norm_identity, AlgebraDatum, Certificate, CubicAlgebraDatum,
    QuaternionAlgebraDatum, Verdict, VerdictConfig,
};
use sextic_k3::galois::catalogue::Catalogue;
use sextic_k3::localfields::cover::LocalPoint;
use sextic_k3::localfields::padic::PadicNumber;
use sextic_k3::localfields::symbols::{InvariantValue, Place};
use sextic_k3::search::{search_cubic_primes, search_points};

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn set(vals: &[InvariantValue]) -> BTreeSet<InvariantValue> {
    vals.iter().copied().collect()
}

fn quat(a: i64, b: i64, c: i64) -> AlgebraDatum {
    AlgebraDatum::Quaternion(QuaternionAlgebraDatum::new(a, b, c).unwrap())
}

fn cubic97() -> CubicAlgebraDatum {
    CubicAlgebraDatum::family(&big(97)).unwrap()
}

fn json_roundtrip(cert: &Certificate) {
    let s = cert.to_json().unwrap();
    let back: Certificate = serde_json::from_str(&s).unwrap();
    assert_eq!(back.to_json().unwrap(), s);
    assert_eq!(back.verdict, cert.verdict);
}

#[test]
fn quaternion_certificate() {
    let cert = bm_verdict(&quat(-1, 1, 7), &VerdictConfig::default()).unwrap();
    assert_eq!(cert.verdict, Verdict::Obstruction);
    assert_eq!(cert.values_at(&Place::prime(2)).unwrap(), set(&[InvariantValue::HALF]));
    for r in &cert.places {
        assert!(r.certified, "{:?}", r.v);
        if r.v != Place::prime(2) {
            assert_eq!(r.values, vec![InvariantValue::ZERO], "{:?}", r.v);
        }
    }
    assert!(!cert.sum_set.contains(&InvariantValue::ZERO));
    json_roundtrip(&cert);
}

#[test]
fn cubic_certificate_and_scans() {
    let d = cubic97();
    assert!(d.is_nontrivial());
    let cfg = VerdictConfig::default();
    let cert = bm_verdict(&AlgebraDatum::Cubic(d.clone()), &cfg).unwrap();
    assert_eq!(cert.verdict, Verdict::Obstruction);
    assert_eq!(cert.values_at(&Place::prime(7)).unwrap(), set(&[InvariantValue::THIRD, InvariantValue::TWO_THIRDS]));
    let sum: BTreeSet<InvariantValue> = cert.sum_set.iter().copied().collect();
    assert_eq!(sum, set(&[InvariantValue::THIRD, InvariantValue::TWO_THIRDS]));
    json_roundtrip(&cert);

    let s7 = split_scan(&d, &big(7), &cfg.cover).unwrap();
    assert!(s7.both_units_impossible());
    assert_eq!(s7.plus_residues(), [big(4)].into_iter().collect());
    let s2 = congruence_scan(&d, &big(2), 3, &cfg.cover).unwrap();
    assert!(s2.all_congruent());
}

#[test]
fn trivial_algebra_has_no_obstruction() {
    let d = AlgebraDatum::Trivial { a: big(1), b: big(1), c: big(1) };
    let cert = bm_verdict(&d, &VerdictConfig::default()).unwrap();
    assert_eq!(cert.verdict, Verdict::None);
}

#[test]
fn minkowski_sums() {
    let h = set(&[InvariantValue::HALF]);
    let z = set(&[InvariantValue::ZERO]);
    assert_eq!(minkowski_sum(&[h.clone(), h.clone()]), z);
    assert_eq!(minkowski_sum(&[]), z);
    let t = set(&[InvariantValue::THIRD, InvariantValue::TWO_THIRDS]);
    assert_eq!(minkowski_sum(&[t.clone(), z]), t);
}

#[test]
fn cubic_search_first_four() {
    let s = search_cubic_primes(4, &VerdictConfig::default()).unwrap();
    let ks: Vec<u64> = s.certified.iter().map(|c| c.k).collect();
    assert_eq!(ks, [0, 7, 10, 12]);
    assert!(s.certified.windows(2).all(|w| w[0].p < w[1].p));
    for c in &s.certified {
        assert!(c.proof.verify());
        assert_eq!(c.proof.prime(), &c.p);
        assert_eq!(c.certificate.verdict, Verdict::Obstruction);
    }
    assert!(s.rejected.iter().any(|(k, _, _)| *k == 4));
}

#[test]
fn reciprocity_at_rational_points() {
    let surfaces = [
        AlgebraDatum::Cubic(CubicAlgebraDatum::new(big(1), big(1), big(10)).unwrap()),
        AlgebraDatum::Cubic(CubicAlgebraDatum::new(big(1), big(1), big(28)).unwrap()),
        AlgebraDatum::Cubic(CubicAlgebraDatum::new(big(1), big(7), big(70)).unwrap()),
        quat(1, 3, 5),
        quat(3, 1, 1),
    ];
    let (mut checked, mut nonzero_terms) = (0, 0);
    for d in &surfaces {
        for p in search_points(&d.surface(), 12).points_big().into_iter().take(6) {
            let Ok((sum, terms)) = reciprocity_sum(d, &p) else { continue };
            assert!(sum.is_zero(), "{:?} at {:?}", d, p);
            checked += 1;
            if terms.iter().any(|(_, t)| !t.is_zero()) {
                nonzero_terms += 1;
            }
        }
    }
    assert!(checked >= 10, "{}", checked);
    assert!(nonzero_terms > 0);
    let d = &surfaces[0];
    assert!(reciprocity_sum(d, &[big(1), big(1), big(1), big(5)]).is_err());
}

#[test]
fn norm_identity_for_both_algebras() {
    let cat = Catalogue::build().unwrap();
    for d in [quat(-1, 1, 7), AlgebraDatum::Cubic(cubic97())] {
        let r = verify_divisor_norm_identity(&d, &cat).unwrap();
        assert!(r.ok, "{:?}", r.failures());
    }
}

fn lifted_points(d: &CubicAlgebraDatum, p: &BigInt, digits: u32) -> Vec<LocalPoint> {
    let s = d.surface();
    let mut out = Vec::new();
    for x in 0..6i64 {
        for y in 0..6i64 {
            for z in 1..6i64 {
                if let Some(pt) = LocalPoint::lift(&s, p, &big(x), &big(y), &big(z), digits) {
                    if d.eval_cubic_invariant(&pt).is_ok() {
                        out.push(pt);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn cubic_invariant_is_projective_and_lift_independent() {
    let d = cubic97();
    let p = big(7);
    let pts = lifted_points(&d, &p, 20);
    assert!(!pts.is_empty());
    for pt in pts.iter().take(12) {
        let v = d.eval_cubic_invariant(pt).unwrap();
        for lambda in [2i64, 3, 7] {
            let l = big(lambda);
            let scaled = LocalPoint {
                p: p.clone(),
                x: &pt.x * &l,
                y: &pt.y * &l,
                z: &pt.z * &l,
                w: pt.w.mul(&PadicNumber::from_int_mod(&(&l * &l * &l), &p, 40)),
            };
            assert_eq!(d.eval_cubic_invariant(&scaled).unwrap(), v, "λ = {}", lambda);
        }
        // a deeper lift of the same point
        let deep = LocalPoint::lift(&d.surface(), &p, &pt.x, &pt.y, &pt.z, 30).unwrap();
        // the branch agreeing with pt.w to more digits
        let closeness = |q: &LocalPoint| q.w.sub(&pt.w).valuation().unwrap_or(i64::MAX);
        let flipped = deep.negate_w();
        let same_branch = if closeness(&deep) >= closeness(&flipped) { deep } else { flipped };
        assert_eq!(d.eval_cubic_invariant(&same_branch).unwrap(), v);
    }
}
