use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sextic_k3::localfields::cover::IntSurface;
use sextic_k3::search::{check_quat_conditions, infrem_modulus, prove_prime, search_points};

/// (a, b, c) mod 8, transcribed independently of the library table.
const ALLOWED_MOD8: &str = "311 333 337 351 373 377 511 515 517 531 535 537 551 555 557 571 575 577 713 717 735 753 757 775";

fn factor(mut n: i64) -> Vec<(i64, u32)> {
    n = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn is_qr(x: i64, p: i64) -> bool {
    let x = x.rem_euclid(p);
    x != 0 && (1..p).any(|t| t * t % p == x)
}

/// Names of the failing conditions, computed by trial division and brute-force squares.
fn naive_failures(a: i64, b: i64, c: i64) -> Vec<&'static str> {
    let mut f = Vec::new();
    let valuations_ok = [a, b]
        .iter()
        .all(|&x| factor(x).iter().all(|&(p, k)| p <= 3 || [1, 2, 4, 5].contains(&k)));
    if a == 0 || b == 0 || !valuations_ok {
        f.push("i");
    }
    if c == 0 || factor(c).iter().any(|&(_, k)| k > 1) {
        f.push("ii");
    }
    if a <= 0 && b <= 0 {
        f.push("iii");
    }
    if a.rem_euclid(3) != 1 && (-a * c).rem_euclid(3) != 1 {
        f.push("iv");
    }
    let odd_primes = |x: i64| factor(x).into_iter().map(|(p, _)| p).filter(|&p| p != 2).collect::<Vec<_>>();
    if a == 0 || odd_primes(a).iter().any(|&p| c % p != 0 || !is_qr(2 * b, p)) {
        f.push("v");
    }
    if b == 0 || odd_primes(b).iter().any(|&p| !is_qr(a, p) || !is_qr(-c, p)) {
        f.push("vi");
    }
    let (u, v) = ((4 * a).rem_euclid(7), (2 * b).rem_euclid(7));
    if c % 7 == 0 && u == v && (u == 3 || u == 5 || u == 6) {
        f.push("vii");
    }
    let key = format!("{}{}{}", a.rem_euclid(8), b.rem_euclid(8), c.rem_euclid(8));
    if !ALLOWED_MOD8.split(' ').any(|t| t == key) {
        f.push("viii");
    }
    f
}

fn compare(a: i64, b: i64, c: i64) -> bool {
    let r = check_quat_conditions(&a.into(), &b.into(), &c.into());
    let naive = naive_failures(a, b, c);
    assert_eq!(r.failed(), naive, "({}, {}, {})", a, b, c);
    let odd = a % 2 != 0 && b % 2 != 0 && c % 2 != 0;
    assert_eq!(r.passed(), odd && naive.is_empty());
    r.passed()
}

#[test]
fn conditions_agree_with_naive_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0DD5);
    for _ in 0..10_000 {
        let mut draw = || {
            // products of small primes reach the valuation and Legendre branches
            let base: i64 = rng.gen_range(1..=60) * 2 - 1;
            let extra = [1, 5, 7, 25, 49, 125, 625, 11 * 11 * 11][rng.gen_range(0..8)];
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            sign * base * extra
        };
        let (a, b, c) = (draw(), draw(), draw());
        compare(a, b, c);
    }
}

#[test]
fn conditions_agree_with_naive_on_small_box() {
    let mut passing = 0;
    for a in -31i64..=31 {
        for b in -31i64..=31 {
            for c in -15i64..=15 {
                if a * b * c == 0 {
                    continue;
                }
                if compare(a, b, c) {
                    passing += 1;
                }
            }
        }
    }
    assert!(passing > 0);
}

#[test]
fn named_triples() {
    let r = check_quat_conditions(&1.into(), &1.into(), &1.into());
    assert_eq!(r.failed(), ["viii"]);
    let r = check_quat_conditions(&3.into(), &1.into(), &1.into());
    // 3 ∤ c, so (v) fails as well
    assert_eq!(r.failed(), ["iv", "v"]);
    for c in [7i64, 19, 31, 43, 55, 67, 79, 91] {
        assert!(check_quat_conditions(&(-1).into(), &1.into(), &c.into()).passed(), "c = {}", c);
    }
}

#[test]
fn primality_against_trial_division() {
    for n in 0i64..20_000 {
        let naive = n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        let proof = prove_prime(&BigInt::from(n)).unwrap();
        assert_eq!(proof.is_some(), naive, "{}", n);
        if let Some(p) = proof {
            assert!(p.verify());
        }
    }
}

#[test]
fn large_primality_proofs() {
    let m = infrem_modulus();
    let p = BigInt::from(97) + &m * 7u32;
    let proof = prove_prime(&p).unwrap().expect("97 + 7M is prime");
    assert!(proof.verify());
    // 2^89 - 1 is prime, 2^67 - 1 is not
    let m89 = (BigInt::from(1) << 89u32) - 1u32;
    assert!(prove_prime(&m89).unwrap().is_some_and(|pr| pr.verify()));
    let m67 = (BigInt::from(1) << 67u32) - 1u32;
    assert!(prove_prime(&m67).unwrap().is_none());
}

fn brute_points(a: i64, b: i64, c: i64, bound: i64) -> BTreeSet<[i64; 4]> {
    let gcd = |mut x: i64, mut y: i64| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    let mut out = BTreeSet::new();
    for x in 0..=bound {
        for y in 0..=bound {
            for z in 0..=bound {
                if gcd(gcd(x, y), z) != 1 {
                    continue;
                }
                let r = a * x.pow(6) + b * y.pow(6) + c * z.pow(6);
                if r < 0 {
                    continue;
                }
                let w = (r as f64).sqrt().round() as i64;
                for t in [w - 1, w, w + 1] {
                    if t >= 0 && t * t == r {
                        out.insert([x, y, z, t]);
                    }
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        rng_seed: RngSeed::Fixed(0x9017),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn sieve_matches_brute_force(a in -40i64..40, b in -40i64..40, c in -40i64..40) {
        prop_assume!(a != 0 && b != 0 && c != 0);
        let found: BTreeSet<[i64; 4]> = search_points(&IntSurface::from_i64(a, b, c), 9)
            .points_big()
            .into_iter()
            .map(|p| p.map(|t| i64::try_from(t).unwrap()))
            .collect();
        prop_assert_eq!(found, brute_points(a, b, c, 9));
    }
}
