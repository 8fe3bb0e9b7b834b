use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use sextic_k3::galois::cohomology::{cyclic_h1_oracle, h1};
use sextic_k3::galois::catalogue::{mat_mul, transpose};
use sextic_k3::galois::{all_elements, GaloisElement, Subgroup};
use sextic_k3::intersection::saturation::indicator;
use sextic_k3::intersection::GramMatrix;
use sextic_k3::report::{self, class_label, LatticeData};

fn data() -> &'static LatticeData {
    static D: OnceLock<LatticeData> = OnceLock::new();
    D.get_or_init(|| LatticeData::compute().unwrap())
}

fn pair(g: &GramMatrix, a: &[i64], b: &[i64]) -> i64 {
    (0..g.dim()).map(|i| (0..g.dim()).map(|j| a[i] * g.entry(i, j) * b[j]).sum::<i64>()).sum()
}

#[test]
fn reference_lattice() {
    let g = report::reference_gram().unwrap();
    let r = report::lattice_report(&g).unwrap();
    assert!(r.symmetric && r.minus_two_diagonal);
    assert_eq!(r.det, BigInt::from(-432));
    assert_eq!(r.signature, (1, 19));
    assert_eq!(r.primary_parts, vec![3, 4, 4, 9]);
    assert!(r.at_most_two_generators);
    // the catalogue computes the same matrix independently over F_p
    assert_eq!(g, data().gram);
}

#[test]
fn alternate_lattice() {
    let r = report::lattice_report(&report::alternate_gram().unwrap()).unwrap();
    assert_eq!(r.det, BigInt::from(-3888));
    assert_eq!(r.primary_parts, vec![3, 3, 3, 4, 4, 9]);
    assert!(!r.at_most_two_generators);
    assert_eq!(r.labels.last().unwrap(), "D'20");
}

#[test]
fn gram_json_roundtrip() {
    let g = report::reference_gram().unwrap();
    let s = g.to_json().unwrap();
    let back = GramMatrix::from_json(&s).unwrap();
    assert_eq!(back, g);
    assert_eq!(back.to_json().unwrap(), s);
    // break symmetry: entry (0, 1) := entry (0, 0)
    let mut v: serde_json::Value = serde_json::from_str(&s).unwrap();
    let d00 = v["matrix"]["data"][0].clone();
    v["matrix"]["data"][1] = d00;
    assert!(GramMatrix::from_json(&v.to_string()).is_err());
}

#[test]
fn lattice_data_roundtrip() {
    let d = data();
    let s = serde_json::to_string(d).unwrap();
    let back: LatticeData = serde_json::from_str(&s).unwrap();
    assert_eq!(&back, d);
    assert_eq!(d.matrices.len(), 864);
    assert_eq!(report::catalogue_fingerprint().unwrap(), report::catalogue_fingerprint().unwrap());
}

#[test]
fn class_labels() {
    assert_eq!(class_label(&indicator(20, &[6, 9, 14])), "d6+d9+d14");
    let mut v = vec![0; 20];
    v[0] = 2;
    v[3] = -1;
    assert_eq!(class_label(&v), "2d1-d4");
    assert_eq!(class_label(&[0; 20]), "0");
}

#[test]
fn saturation_candidates_against_direct_parity() {
    let g = &data().gram;
    let r = report::saturation_report(data()).unwrap();
    assert_eq!(r.mod2_candidates, ["d6+d9+d14"]);
    assert_eq!(r.mod3_candidates, ["d1+d3+d5", "2d1+2d3+2d5"]);
    // oracle: the computed class is 2-divisible against every basis vector
    let v = indicator(20, &[6, 9, 14]);
    assert_eq!(pair(g, &v, &v).rem_euclid(4), 0);
    for i in 1..=20 {
        assert_eq!(pair(g, &v, &indicator(20, &[i])).rem_euclid(2), 0, "d{}", i);
    }
    // the printed class fails against d6
    let w = indicator(20, &[6, 9, 15]);
    assert_eq!(pair(g, &w, &indicator(20, &[6])).rem_euclid(2), 1);
    let u = indicator(20, &[1, 3, 5]);
    for i in 1..=20 {
        assert_eq!(pair(g, &u, &indicator(20, &[i])).rem_euclid(3), 0, "d{}", i);
    }
    assert_eq!(r.mod2_pairings_with_dprime, vec![1]);
    assert_eq!(r.fiber_components, ["D1", "D3", "D5"]);
    assert!(r.s25_equals_2m && r.s35_in_3m_plus_d);
    assert_eq!(r.dprime_orbit_size, 216);
}

#[test]
fn action_preserves_pairing_for_all_elements() {
    let g = data().gram.matrix.to_i64_rows().unwrap();
    for m in &data().matrices {
        assert_eq!(mat_mul(&mat_mul(&transpose(m), &g), m), g);
    }
}

#[test]
fn cohomology_summary() {
    let r = report::cohomology_report(data()).unwrap();
    assert!(r.full_group.h1.is_zero());
    assert_eq!(r.index2_subgroups, 31);
    let tags: Vec<&str> = r.index2_with_3torsion.iter().map(|(t, _)| t.as_str()).collect();
    assert_eq!(tags, ["-3A square", "-3B square", "-3C square"]);
    assert_eq!(r.k_case.order, 216);
    assert_eq!(r.k_case.h1.invariant_factors, vec![3]);
    assert_eq!((r.quaternion.h1_order, r.quaternion.h2_order, r.quaternion.orbit_size), (288, 144, 2));
    assert!(r.quaternion.class_nonzero_on_h1 && !r.quaternion.class_nonzero_on_h2);
    assert_eq!(r.norm.invariant_factors, vec![3]);
    assert_eq!(r.norm.candidate_order, Some(3));
}

#[test]
fn subgroup_tags() {
    let am = data().action();
    for t in report::SUBGROUP_TAGS {
        let h = report::subgroup_for_tag(t, &am).unwrap();
        h.check_closed().unwrap();
    }
    assert!(report::subgroup_for_tag("nope", &am).is_err());
    assert_eq!(report::subgroup_for_tag("3abc", &am).unwrap().order(), 432);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, rng_seed: RngSeed::Fixed(0xC0C7), failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn action_is_a_homomorphism(i in 0usize..864, j in 0usize..864) {
        let am = data().action();
        let (g, h) = (GaloisElement::from_index(i), GaloisElement::from_index(j));
        prop_assert_eq!(&mat_mul(am.get(&g), am.get(&h)), am.get(&g.compose(&h)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, rng_seed: RngSeed::Fixed(0xC7C1), failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cocycle_h1_matches_cyclic_oracle(i in 0usize..864) {
        let am = data().action();
        let g = all_elements()[i];
        let h = Subgroup::generated_by(&[g]);
        let r = h1(&am, &h).unwrap().result();
        let oracle = cyclic_h1_oracle(am.get(&g), g.order() as usize).unwrap();
        prop_assert_eq!(r.free_rank, 0);
        prop_assert_eq!(r.invariant_factors, oracle);
    }
}
