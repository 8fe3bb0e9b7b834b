//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Three criteria contain clauses that do not hold for this implementation.
//! They are reported as FAIL and the test asserts that exactly those clauses
//! fail, so any other regression still breaks the build:
//!   3: the mod-2 candidate is d6+d9+d14, not d6+d9+d15;
//!   5: three index-2 subgroups carry Z/3, not four;
//!   9: the height-10⁴ point search is out of reach on this hardware, and a
//!      smaller pinned bound is run instead.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sextic_k3::brauer::cubic::{congruence_scan, split_scan};
use sextic_k3::brauer::{bm_verdict, reciprocity_sum, AlgebraDatum, CubicAlgebraDatum, QuaternionAlgebraDatum, Verdict, VerdictConfig};
use sextic_k3::exact::rational::Rational;
use sextic_k3::galois::cohomology::{cyclic_h1_oracle, h1};
use sextic_k3::galois::{all_elements, GaloisElement, Subgroup};
use sextic_k3::intersection::saturation::indicator;
use sextic_k3::intersection::{GramMatrix, Supersingular};
use sextic_k3::localfields::cover::Solubility;
use sextic_k3::localfields::local::{KPlace, LocalFieldElement};
use sextic_k3::localfields::symbols::{cubic_symbol, hilbert2, hilbert_support, InvariantValue, Place};
use sextic_k3::report::{self, LatticeData};
use sextic_k3::search::{check_quat_conditions, search_cubic_primes, search_points};

const SEED: u64 = 0x5EED_0001;
const RANDOM_PAIRS: usize = 1000;
const CYCLIC_SUBGROUPS: usize = 20;
/// Height bound actually searched for criterion 9 (the criterion asks for 10⁴).
const POINT_BOUND: u64 = 200;
const REQUIRED_POINT_BOUND: u64 = 10_000;

struct Criterion {
    id: u32,
    clauses: Vec<(String, bool)>,
}

impl Criterion {
    fn new(id: u32) -> Self {
        Criterion { id, clauses: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.clauses.push((name.into(), ok));
    }

    fn passed(&self) -> bool {
        self.clauses.iter().all(|(_, ok)| *ok)
    }

    fn failing(&self) -> BTreeSet<String> {
        self.clauses.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.clone()).collect()
    }

    fn print(&self) {
        println!("criterion {}: {}", self.id, if self.passed() { "PASS" } else { "FAIL" });
        for (n, ok) in &self.clauses {
            println!("    [{}] {}", if *ok { "ok" } else { "FAILED" }, n);
        }
    }
}

fn within(t: Duration, limit: Duration) -> bool {
    t <= limit
}

fn criterion1() -> (Criterion, GramMatrix) {
    let mut c = Criterion::new(1);
    let t = Instant::now();
    let g = report::reference_gram().unwrap();
    let computed = t.elapsed();
    let r = report::lattice_report(&g).unwrap();
    c.check("Gram of d1..d20 is symmetric", r.symmetric);
    c.check("diagonal entries are -2", r.minus_two_diagonal);
    c.check(format!("det = -432 (got {})", r.det), r.det == BigInt::from(-432));
    c.check(format!("computed in ≤ 10 min ({:.2?})", computed), within(computed, Duration::from_secs(600)));
    let cached = g.to_json().unwrap();
    let t = Instant::now();
    let back = GramMatrix::from_json(&cached).unwrap();
    let ok = back == g && back.det() == BigInt::from(-432);
    let warm = t.elapsed();
    c.check(format!("reload from cached JSON in ≤ 1 s ({:.2?})", warm), ok && within(warm, Duration::from_secs(1)));
    (c, g)
}

fn criterion2() -> Criterion {
    let mut c = Criterion::new(2);
    let cached = report::alternate_gram().unwrap().to_json().unwrap();
    let t = Instant::now();
    let g = GramMatrix::from_json(&cached).unwrap();
    let r = report::lattice_report(&g).unwrap();
    let elapsed = t.elapsed();
    let expect_det = -BigInt::from(16 * 243);
    c.check(format!("det M′ = -2⁴·3⁵ (got {})", r.det), r.det == expect_det);
    c.check(
        format!("discriminant group (Z/4)²×(Z/3)³×Z/9 (primary parts {:?})", r.primary_parts),
        r.primary_parts == vec![3, 3, 3, 4, 4, 9],
    );
    c.check("Nikulin two-generator predicate rejects M′", !r.at_most_two_generators);
    c.check(format!("from cached Gram in ≤ 1 s ({:.2?})", elapsed), within(elapsed, Duration::from_secs(1)));
    c
}

fn criterion3(data: &LatticeData) -> Criterion {
    let mut c = Criterion::new(3);
    let t = Instant::now();
    let r = report::saturation_report(data).unwrap();
    // the printed class, paired directly with D′
    let ss = Supersingular::new().unwrap();
    let red = ss.reduce_all(&sextic_k3::geometry::reference_divisors().unwrap()).unwrap();
    let printed = indicator(20, &[6, 9, 15]);
    let printed_pairing = ss.supersingular_pairing(&printed, &red).unwrap();
    let elapsed = t.elapsed();
    c.check(
        format!("mod-2 candidate set is exactly {{d6+d9+d15}} (got {{{}}})", r.mod2_candidates.join(", ")),
        r.mod2_candidates == ["d6+d9+d15"],
    );
    c.check(format!("(d6+d9+d15)·D′ = 1 over F25 (got {})", printed_pairing), printed_pairing == 1);
    c.check(
        format!("computed mod-2 candidates pair to 1 with D′ (got {:?})", r.mod2_pairings_with_dprime),
        !r.mod2_pairings_with_dprime.is_empty() && r.mod2_pairings_with_dprime.iter().all(|&x| x == 1),
    );
    c.check("mod-3 candidate set contains d1+d3+d5", r.mod3_candidates.iter().any(|s| s == "d1+d3+d5"));
    c.check(
        format!("fiber over [0:1] is exactly {{D1, D3, D5}} (got {:?})", r.fiber_components),
        r.fiber_check_passed && r.fiber_components == ["D1", "D3", "D5"],
    );
    c.check(format!("in ≤ 2 min ({:.2?})", elapsed), within(elapsed, Duration::from_secs(120)));
    c
}

fn criterion4(data: &LatticeData) -> Criterion {
    let mut c = Criterion::new(4);
    let r = report::saturation_report(data).unwrap();
    c.check(format!("M′ over F25 has det -3888 (got {})", r.alternate_det_mod5), r.alternate_det_mod5 == BigInt::from(-3888));
    c.check("S(2,5) = 2M′", r.s25_equals_2m);
    c.check(format!("S(3,5) ⊆ 3M′ + Z·({})", r.s35_vector), r.s35_in_3m_plus_d);
    c
}

fn criterion5(data: &LatticeData) -> Criterion {
    let mut c = Criterion::new(5);
    let am = data.action();
    let t = Instant::now();
    let full = report::subgroup_cohomology(&am, &Subgroup::full()).unwrap();
    c.check(format!("H¹(G, P̄) = 0 for |G| = 864 (got {})", full.description), full.order == 864 && full.h1.is_zero());
    let r = report::cohomology_report(data).unwrap();
    let z3: Vec<&(String, String)> = r.index2_with_3torsion.iter().filter(|(_, d)| d == "Z/3").collect();
    c.check(
        format!("every index-2 subgroup with 3-torsion has H¹ = Z/3 ({:?})", r.index2_with_3torsion),
        z3.len() == r.index2_with_3torsion.len(),
    );
    c.check(
        format!(
            "exactly four index-2 subgroups (of {}) have H¹ = Z/3 (got {})",
            r.index2_subgroups,
            z3.len()
        ),
        z3.len() == 4,
    );
    c.check(format!("K = Q(√-3) case: H¹ = Z/3 (got {})", r.k_case.description), r.k_case.description == "Z/3");
    c.check(
        format!("H¹(H₁, P̄)[2] ≠ 0 via d1-d4 (H¹(H₁) = {})", r.quaternion.h1_cohomology),
        r.quaternion.class_nonzero_on_h1,
    );
    c.check("restriction of that class to H₂ is zero", !r.quaternion.class_nonzero_on_h2);
    c.check(format!("ker N/im Δ ≅ Z/3 (got {:?})", r.norm.invariant_factors), r.norm.invariant_factors == vec![3]);
    c.check(
        format!("d1+d4-d13-d13′ generates it (class order {:?})", r.norm.candidate_order),
        r.norm.candidate_order == Some(3),
    );
    let elapsed = t.elapsed();
    c.check(format!("in ≤ 10 min per subgroup ({:.2?} total)", elapsed), within(elapsed, Duration::from_secs(600)));
    c
}

fn locally_soluble_with_witnesses(cert: &sextic_k3::brauer::Certificate) -> bool {
    cert.places.iter().all(|r| match &r.solubility {
        Solubility::Witness { point, .. } => point.verify(&cert.algebra.surface()),
        Solubility::RealWitness { .. } | Solubility::Tag { .. } => true,
        _ => false,
    })
}

fn criterion6() -> Criterion {
    let mut c = Criterion::new(6);
    let t = Instant::now();
    let d = QuaternionAlgebraDatum::new(-1, 1, 7).unwrap();
    let cert = bm_verdict(&AlgebraDatum::Quaternion(d), &VerdictConfig::default()).unwrap();
    let elapsed = t.elapsed();
    c.check("everywhere locally soluble with witnesses", locally_soluble_with_witnesses(&cert));
    let at2 = cert.place(&Place::prime(2)).unwrap();
    c.check("value set {1/2} at v = 2, certified", at2.certified && at2.values == [InvariantValue::HALF]);
    c.check(
        "value set {0} at every other place, certified",
        cert.places
            .iter()
            .filter(|r| r.v != Place::prime(2))
            .all(|r| r.certified && r.values == [InvariantValue::ZERO]),
    );
    c.check(format!("verdict obstruction (got {:?})", cert.verdict), cert.verdict == Verdict::Obstruction);
    c.check(format!("in ≤ 5 min ({:.2?})", elapsed), within(elapsed, Duration::from_secs(300)));
    c
}

fn criterion7() -> Criterion {
    let mut c = Criterion::new(7);
    let t = Instant::now();
    let cfg = VerdictConfig::default();
    let d = CubicAlgebraDatum::family(&BigInt::from(97)).unwrap();
    let cert = bm_verdict(&AlgebraDatum::Cubic(d.clone()), &cfg).unwrap();
    c.check("everywhere locally soluble with witnesses", locally_soluble_with_witnesses(&cert));
    let seven = Place::prime(7);
    c.check(
        "value set {0} at every v ≠ 7, certified",
        cert.places
            .iter()
            .filter(|r| r.v != seven)
            .all(|r| r.certified && r.values == [InvariantValue::ZERO]),
    );
    let at7 = cert.place(&seven).unwrap();
    c.check(
        "value set exactly {1/3, 2/3} at 7, certified",
        at7.certified && at7.values == [InvariantValue::THIRD, InvariantValue::TWO_THIRDS],
    );
    let s7 = split_scan(&d, &BigInt::from(7), &cfg.cover).unwrap();
    c.check("7-adic scan: no class with both w ± √-3x³ units (Case 1 impossible)", s7.certified && s7.both_units_impossible());
    let pm3: BTreeSet<BigInt> = [BigInt::from(3), BigInt::from(4)].into_iter().collect();
    c.check(
        format!("7-adic scan: w + √-3x³ ≡ ±3 mod 7 where it is a unit (residues {:?})", s7.plus_residues()),
        !s7.plus_residues().is_empty() && s7.plus_residues().is_subset(&pm3),
    );
    let s2 = congruence_scan(&d, &BigInt::from(2), 3, &cfg.cover).unwrap();
    c.check("2-adic scan: f(P) ≡ 1 mod 8 on all classes", s2.certified && s2.all_congruent());
    c.check(format!("verdict obstruction (got {:?})", cert.verdict), cert.verdict == Verdict::Obstruction);
    let elapsed = t.elapsed();
    c.check(format!("in ≤ 10 min ({:.2?})", elapsed), within(elapsed, Duration::from_secs(600)));
    c
}

fn criterion8() -> Criterion {
    let mut c = Criterion::new(8);
    let cfg = VerdictConfig::default();
    let cs: Vec<i64> = (1..=100)
        .filter(|c| c % 24 == 7 || c % 24 == 19)
        .filter(|&c| sextic_k3::exact::rational::is_squarefree(&BigInt::from(c)))
        .collect();
    let mut bad = Vec::new();
    for &cc in &cs {
        let r = check_quat_conditions(&BigInt::from(-1), &BigInt::from(1), &BigInt::from(cc));
        let d = QuaternionAlgebraDatum::new(-1, 1, cc).unwrap();
        let cert = bm_verdict(&AlgebraDatum::Quaternion(d), &cfg).unwrap();
        if !r.passed() || cert.verdict != Verdict::Obstruction {
            bad.push(cc);
        }
    }
    c.check(
        format!("(-1, 1, c) passes (i)-(viii) and certifies for c in {:?} (failures {:?})", cs, bad),
        bad.is_empty() && cs.len() == 8,
    );
    let s = search_cubic_primes(4, &cfg).unwrap();
    let beyond: Vec<String> = s.certified.iter().filter(|x| x.k > 0).map(|x| x.p.to_string()).collect();
    let proofs_ok = s.certified.iter().all(|x| x.proof.verify() && x.certificate.verdict == Verdict::Obstruction);
    c.check(
        format!("at least 3 generated primes beyond 97 certify ({} found)", beyond.len()),
        beyond.len() >= 3 && proofs_ok,
    );
    c
}

fn random_nonzero(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    loop {
        let v: i64 = rng.gen_range(-bound..=bound);
        if v != 0 {
            return Rational::from_integer(BigInt::from(v));
        }
    }
}

fn hilbert_suite(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let (mut bimult, mut product) = (0, 0);
    for _ in 0..RANDOM_PAIRS {
        let (a, b, b2) = (random_nonzero(rng, 5000), random_nonzero(rng, 5000), random_nonzero(rng, 5000));
        let bb = &b * &b2;
        let places: BTreeSet<Place> = hilbert_support(&a, &bb)
            .into_iter()
            .chain(hilbert_support(&a, &b))
            .chain(hilbert_support(&a, &b2))
            .collect();
        if places.iter().all(|v| hilbert2(&a, &b, v) + hilbert2(&a, &b2, v) == hilbert2(&a, &bb, v)) {
            bimult += 1;
        }
        let sum = hilbert_support(&a, &b).iter().fold(InvariantValue::ZERO, |s, v| s + hilbert2(&a, &b, v));
        if sum.is_zero() {
            product += 1;
        }
    }
    (bimult, product)
}

fn random_unit_times_power(rng: &mut ChaCha8Rng, kv: &KPlace, prec: u32) -> LocalFieldElement {
    loop {
        let r1 = random_nonzero(rng, 400);
        let r2 = Rational::from_integer(BigInt::from(rng.gen_range(-400i64..=400)));
        let x = kv
            .from_rational(&r1, prec)
            .add(&kv.sqrt_minus3(prec).mul(&kv.from_rational(&r2, prec)));
        if x.valuation().is_some() {
            return x;
        }
    }
}

fn cubic_suite(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let prec = 24;
    let kv = KPlace::new(&BigInt::from(7), prec).unwrap();
    let (mut bimult, mut anti) = (0, 0);
    for _ in 0..RANDOM_PAIRS {
        let a = random_unit_times_power(rng, &kv, prec);
        let b = random_unit_times_power(rng, &kv, prec);
        let b2 = random_unit_times_power(rng, &kv, prec);
        let s = |x: &LocalFieldElement, y: &LocalFieldElement| cubic_symbol(x, y, &kv).unwrap();
        if s(&a, &b) + s(&a, &b2) == s(&a, &b.mul(&b2)) {
            bimult += 1;
        }
        if s(&a, &b) == -s(&b, &a) {
            anti += 1;
        }
    }
    (bimult, anti)
}

fn cyclic_suite(data: &LatticeData, rng: &mut ChaCha8Rng) -> usize {
    let am = data.action();
    let all = all_elements();
    let mut agree = 0;
    for _ in 0..CYCLIC_SUBGROUPS {
        let g: GaloisElement = all[rng.gen_range(0..all.len())];
        let h = Subgroup::generated_by(&[g]);
        let cocycle = h1(&am, &h).unwrap().result();
        let oracle = cyclic_h1_oracle(am.get(&g), g.order() as usize).unwrap();
        if cocycle.free_rank == 0 && cocycle.invariant_factors == oracle {
            agree += 1;
        }
    }
    agree
}

/// Non-obstructed surfaces with rational points of small height.
fn reciprocity_surfaces() -> Vec<AlgebraDatum> {
    let mut out = Vec::new();
    for (m, b, c) in [(1, 1, 10), (1, 1, 17), (1, 1, 19), (1, 1, 28), (1, 7, 70)] {
        out.push(AlgebraDatum::Cubic(
            CubicAlgebraDatum::new(BigInt::from(m), BigInt::from(b), BigInt::from(c)).unwrap(),
        ));
    }
    for (a, b, c) in [(1, 1, 1), (1, 3, 5), (3, 1, 1)] {
        out.push(AlgebraDatum::Quaternion(QuaternionAlgebraDatum::new(a, b, c).unwrap()));
    }
    out
}

fn reciprocity_suite() -> (usize, usize, usize) {
    let (mut points, mut zero, mut nonzero_terms) = (0, 0, 0);
    for d in reciprocity_surfaces() {
        let found = search_points(&d.surface(), 12);
        for p in found.points_big().into_iter().take(6) {
            let pt = [p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()];
            let Ok((sum, terms)) = reciprocity_sum(&d, &pt) else { continue };
            points += 1;
            if sum.is_zero() {
                zero += 1;
            }
            if terms.iter().any(|(_, v)| !v.is_zero()) {
                nonzero_terms += 1;
            }
        }
    }
    (points, zero, nonzero_terms)
}

fn criterion9(data: &LatticeData, gram: &GramMatrix) -> Criterion {
    let mut c = Criterion::new(9);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (bm, pf) = hilbert_suite(&mut rng);
    c.check(format!("Hilbert bimultiplicativity on {} pairs ({} hold)", RANDOM_PAIRS, bm), bm == RANDOM_PAIRS);
    c.check(format!("Hilbert product formula on {} pairs ({} hold)", RANDOM_PAIRS, pf), pf == RANDOM_PAIRS);
    let (cb, ca) = cubic_suite(&mut rng);
    c.check(format!("cubic symbol bimultiplicativity at v | 7 on {} pairs ({} hold)", RANDOM_PAIRS, cb), cb == RANDOM_PAIRS);
    c.check(format!("cubic symbol antisymmetry at v | 7 on {} pairs ({} hold)", RANDOM_PAIRS, ca), ca == RANDOM_PAIRS);
    let am = data.action();
    let all = all_elements();
    let pairs: Vec<(GaloisElement, GaloisElement)> = (0..200)
        .map(|_| (all[rng.gen_range(0..864)], all[rng.gen_range(0..864)]))
        .collect();
    c.check("MᵀGM = G for all 864 action matrices", am.len() == 864 && am.verify(gram, &pairs).is_ok());
    let agree = cyclic_suite(data, &mut rng);
    c.check(
        format!("cocycle H¹ = ker N/im(1-σ) on {} random cyclic subgroups ({} agree)", CYCLIC_SUBGROUPS, agree),
        agree == CYCLIC_SUBGROUPS,
    );
    let (points, zero, nonzero_terms) = reciprocity_suite();
    c.check(
        format!(
            "reciprocity sum = 0 at rational points of non-obstructed surfaces ({}/{} points, {} with nonzero local terms)",
            zero, points, nonzero_terms
        ),
        points > 0 && zero == points && nonzero_terms > 0,
    );
    let certified = [
        QuaternionAlgebraDatum::new(-1, 1, 7).unwrap().surface(),
        CubicAlgebraDatum::family(&BigInt::from(97)).unwrap().surface(),
    ];
    let found: usize = certified.iter().map(|s| search_points(s, POINT_BOUND).points.len()).sum();
    c.check(format!("no rational points up to height {} on certified surfaces ({} found)", POINT_BOUND, found), found == 0);
    c.check(
        format!("search up to height {} (only {} attainable here)", REQUIRED_POINT_BOUND, POINT_BOUND),
        POINT_BOUND >= REQUIRED_POINT_BOUND,
    );
    c
}

#[test]
fn acceptance() {
    let (c1, gram) = criterion1();
    c1.print();
    let c2 = criterion2();
    c2.print();
    let data = LatticeData::compute().unwrap();
    let c3 = criterion3(&data);
    c3.print();
    let c4 = criterion4(&data);
    c4.print();
    let c5 = criterion5(&data);
    c5.print();
    let c6 = criterion6();
    c6.print();
    let c7 = criterion7();
    c7.print();
    let c8 = criterion8();
    c8.print();
    let c9 = criterion9(&data, &gram);
    c9.print();

    for c in [&c1, &c2, &c4, &c6, &c7, &c8] {
        assert!(c.passed(), "criterion {} regressed: {:?}", c.id, c.failing());
    }
    // documented failures: exactly these clauses, nothing else
    let only = |c: &Criterion, prefix: &str| {
        let f = c.failing();
        assert_eq!(f.len(), 1, "criterion {}: unexpected failures {:?}", c.id, f);
        assert!(f.iter().next().unwrap().starts_with(prefix), "criterion {}: {:?}", c.id, f);
    };
    only(&c3, "mod-2 candidate set is exactly {d6+d9+d15} (got {d6+d9+d14})");
    only(&c5, "exactly four index-2 subgroups (of 31) have H¹ = Z/3 (got 3)");
    only(&c9, "search up to height 10000");
}
