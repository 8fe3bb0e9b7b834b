use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use sextic_k3::exact::rational::Rational;
use sextic_k3::localfields::local::{KPlace, LocalFieldElement};
use sextic_k3::localfields::symbols::{cubic_symbol, hilbert2, hilbert_support, InvariantValue, Place};

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn cfg(cases: u32, seed: u64) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn nonzero() -> impl Strategy<Value = i64> {
    (-20_000i64..20_000).prop_filter("nonzero", |v| *v != 0)
}

/// Primitive solutions of z² = ax² + by² modulo m = p^k, by brute force.
fn has_primitive_solution(a: i64, b: i64, p: i64, k: u32) -> bool {
    let m = p.pow(k);
    let mut square_unit = vec![false; m as usize];
    let mut square_any = vec![false; m as usize];
    for z in 0..m {
        let s = (z * z % m) as usize;
        square_any[s] = true;
        if z % p != 0 {
            square_unit[s] = true;
        }
    }
    for x in 0..m {
        for y in 0..m {
            let r = ((a * x % m * x + b * y % m * y) % m).rem_euclid(m) as usize;
            let xy_unit = x % p != 0 || y % p != 0;
            if (xy_unit && square_any[r]) || square_unit[r] {
                return true;
            }
        }
    }
    false
}

fn squarefree_in(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi)
        .filter(|&n| n != 0 && sextic_k3::exact::rational::is_squarefree(&BigInt::from(n)))
        .collect()
}

#[test]
fn hilbert_matches_brute_force_at_odd_primes() {
    // squarefree entries have valuation ≤ 1, where solubility mod p³ decides
    let vals = squarefree_in(-30, 30);
    for p in [3i64, 5, 7] {
        for (i, &a) in vals.iter().enumerate() {
            for &b in vals.iter().skip(i % 5).step_by(5) {
                let want = if has_primitive_solution(a, b, p, 3) { InvariantValue::ZERO } else { InvariantValue::HALF };
                assert_eq!(hilbert2(&q(a), &q(b), &Place::prime(p)), want, "({}, {})_{}", a, b, p);
            }
        }
    }
}

#[test]
fn hilbert_matches_brute_force_at_two() {
    let vals = squarefree_in(-15, 15);
    for &a in &vals {
        for &b in &vals {
            let want = if has_primitive_solution(a, b, 2, 6) { InvariantValue::ZERO } else { InvariantValue::HALF };
            assert_eq!(hilbert2(&q(a), &q(b), &Place::prime(2)), want, "({}, {})_2", a, b);
        }
    }
}

#[test]
fn hilbert_real_place() {
    let inf = Place::Infinity;
    assert_eq!(hilbert2(&q(-1), &q(-1), &inf), InvariantValue::HALF);
    assert_eq!(hilbert2(&q(-1), &q(3), &inf), InvariantValue::ZERO);
}

proptest! {
    #![proptest_config(cfg(1000, 0x4117))]

    #[test]
    fn hilbert_bimultiplicative(a in nonzero(), b in nonzero(), c in nonzero()) {
        let (a, b, c) = (q(a), q(b), q(c));
        let bc = &b * &c;
        let mut places = hilbert_support(&a, &bc);
        places.extend(hilbert_support(&a, &b));
        places.extend(hilbert_support(&a, &c));
        for v in &places {
            prop_assert_eq!(hilbert2(&a, &b, v) + hilbert2(&a, &c, v), hilbert2(&a, &bc, v));
        }
    }

    #[test]
    fn hilbert_product_formula(a in nonzero(), b in nonzero()) {
        let (a, b) = (q(a), q(b));
        let total = hilbert_support(&a, &b).iter().fold(InvariantValue::ZERO, |s, v| s + hilbert2(&a, &b, v));
        prop_assert!(total.is_zero());
        // outside the support every symbol vanishes
        for p in [3i64, 5, 7, 11, 13] {
            let v = Place::prime(p);
            if !hilbert_support(&a, &b).contains(&v) {
                prop_assert!(hilbert2(&a, &b, &v).is_zero());
            }
        }
    }
}

const PREC: u32 = 24;

fn seven() -> KPlace {
    KPlace::new(&BigInt::from(7), PREC).unwrap()
}

fn element(kv: &KPlace, r: i64, s: i64) -> LocalFieldElement {
    kv.from_rational(&q(r), PREC).add(&kv.sqrt_minus3(PREC).mul(&kv.from_rational(&q(s), PREC)))
}

fn kv_element() -> impl Strategy<Value = (i64, i64)> {
    (nonzero(), -400i64..400)
}

proptest! {
    #![proptest_config(cfg(1000, 0x7777))]

    #[test]
    fn cubic_symbol_bimultiplicative_and_antisymmetric((r1, s1) in kv_element(), (r2, s2) in kv_element(), (r3, s3) in kv_element()) {
        let kv = seven();
        let (a, b, c) = (element(&kv, r1, s1), element(&kv, r2, s2), element(&kv, r3, s3));
        prop_assume!(a.valuation().is_some() && b.valuation().is_some() && c.valuation().is_some());
        let sym = |x: &LocalFieldElement, y: &LocalFieldElement| cubic_symbol(x, y, &kv).unwrap();
        prop_assert_eq!(sym(&a, &b) + sym(&a, &c), sym(&a, &b.mul(&c)));
        prop_assert_eq!(sym(&a, &b), -sym(&b, &a));
        prop_assert_eq!(sym(&a, &b).times(3), InvariantValue::ZERO);
    }
}

#[test]
fn cubic_symbol_of_cube_is_trivial() {
    let kv = seven();
    let x = element(&kv, 5, 2);
    let cube = x.mul(&x).mul(&x);
    for (r, s) in [(3, 0), (7, 1), (28, 0), (2, -5)] {
        assert!(cubic_symbol(&element(&kv, r, s), &cube, &kv).unwrap().is_zero());
    }
    // 28 = 4·7 is not a cube at 7: a uniformizer pairs nontrivially with 3
    assert_eq!(cubic_symbol(&element(&kv, 3, 0), &element(&kv, 28, 0), &kv).unwrap(), InvariantValue::THIRD);
}
