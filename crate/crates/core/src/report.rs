//! End-to-end lattice and cohomology computations on the reference surface,
//! packaged as serializable reports for the command line and the test suites.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::tower::Tower;
use crate::galois::cohomology::{
    cubic_case, h1, h1_two_torsion, index2_subgroups_with_3torsion, quaternion_subgroups, two_torsion_class_nonzero,
    CohomologyResult, NormKernel,
};
use crate::galois::subgroup::{index2_subgroups, orbit, square_relation_subgroup, TAG_3ABC, TAG_M3A, TAG_M3B, TAG_M3C};
use crate::galois::{subgroup_for_surface, ActionMatrices, Catalogue, GaloisElement, Subgroup};
use crate::geometry::{auxiliary_divisors, fibration_fiber_check, reference_divisors, Surface};
use crate::intersection::gram::{has_minus_two_diagonal, primary_parts};
use crate::intersection::saturation::indicator;
use crate::intersection::{discriminant_group, gram_matrix, nikulin_two_generator_test, s_rp, saturation_kernel_candidates, Engine, GramMatrix, Supersingular};

pub const LATTICE_DATA_VERSION: u32 = 1;

/// Text that determines the catalogue: the seed curves and the data version.
/// Cache keys are hashes of this string.
pub fn catalogue_fingerprint() -> Result<String> {
    let mut seeds = reference_divisors()?;
    seeds.extend(auxiliary_divisors());
    Ok(format!("lattice-data v{}\n{:?}", LATTICE_DATA_VERSION, seeds))
}

/// The catalogue reduced to what downstream computations read: labels,
/// classes, the Gram matrix of d₁..d₂₀ and the 864 action matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeData {
    pub version: u32,
    pub labels: Vec<String>,
    pub classes: Vec<Vec<i64>>,
    pub gram: GramMatrix,
    pub matrices: Vec<Vec<Vec<i64>>>,
}

impl LatticeData {
    pub fn compute() -> Result<Self> {
        let cat = Catalogue::build()?;
        let am = cat.all_action_matrices()?;
        Ok(LatticeData {
            version: LATTICE_DATA_VERSION,
            labels: cat.divisors.iter().map(|d| d.label.clone()).collect(),
            classes: cat.classes.clone(),
            gram: cat.gram.clone(),
            matrices: am.mats,
        })
    }

    pub fn action(&self) -> ActionMatrices {
        ActionMatrices {
            mats: self.matrices.clone(),
        }
    }

    pub fn class_of(&self, label: &str) -> Result<&Vec<i64>> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.classes[i])
            .ok_or_else(|| Error::Degenerate(format!("no catalogued curve {}", label)))
    }
}

/// Intersection matrix of D₁..D₂₀ computed by the engine.
pub fn reference_gram() -> Result<GramMatrix> {
    gram_matrix(&Engine::new(Tower), &reference_divisors()?)
}

/// Intersection matrix of M′ = ⟨D₁..D₁₉, D′₂₀⟩.
pub fn alternate_basis() -> Result<Vec<crate::geometry::Divisor<crate::exact::tower::TowerElement>>> {
    let mut b = reference_divisors()?;
    b.truncate(19);
    b.push(auxiliary_divisors()[1].clone());
    Ok(b)
}

pub fn alternate_gram() -> Result<GramMatrix> {
    gram_matrix(&Engine::new(Tower), &alternate_basis()?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeReport {
    pub labels: Vec<String>,
    pub symmetric: bool,
    pub minus_two_diagonal: bool,
    #[serde(with = "crate::exact::decimal")]
    pub det: BigInt,
    pub signature: (usize, usize),
    /// invariant factors of the discriminant group
    pub invariant_factors: Vec<u64>,
    /// its primary decomposition
    pub primary_parts: Vec<u64>,
    pub at_most_two_generators: bool,
}

pub fn lattice_report(g: &GramMatrix) -> Result<LatticeReport> {
    let factors = discriminant_group(&g.matrix)?;
    Ok(LatticeReport {
        labels: g.labels.clone(),
        symmetric: g.matrix.is_symmetric(),
        minus_two_diagonal: has_minus_two_diagonal(g),
        det: g.det(),
        signature: g.signature(),
        invariant_factors: crate::galois::cohomology::abs_factors(&factors),
        primary_parts: primary_parts(&factors),
        at_most_two_generators: nikulin_two_generator_test(&factors),
    })
}

/// Writes a class as "d6+d9+d14", "2d1+d3" or "d1-d4".
pub fn class_label(v: &[i64]) -> String {
    let mut s = String::new();
    for (i, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if c.abs() != 1 {
            s.push_str(&c.abs().to_string());
        }
        s.push_str(&format!("d{}", i + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SaturationReport {
    pub mod2_candidates: Vec<String>,
    pub mod3_candidates: Vec<String>,
    /// c·D′ over F₂₅ for each mod-2 candidate
    pub mod2_pairings_with_dprime: Vec<i64>,
    pub fiber_components: Vec<String>,
    pub fiber_check_passed: bool,
    /// det of M′ recomputed over F₂₅
    #[serde(with = "crate::exact::decimal")]
    pub alternate_det_mod5: BigInt,
    pub dprime_orbit_size: usize,
    pub s25_equals_2m: bool,
    pub s35_kernel: Vec<String>,
    /// d₁+d₄+d₆+d₉+d₁₀+d′₂₀ − (d₂+d₃+d₇+d₈+d₁₁+d₁₂) in the M′ basis
    pub s35_vector: String,
    pub s35_in_3m_plus_d: bool,
}

fn sylow_matrices(am: &ActionMatrices, elems: impl Iterator<Item = GaloisElement>) -> Vec<Vec<Vec<i64>>> {
    elems.map(|g| am.get(&g).clone()).collect()
}

/// The printed 3-divisibility vector on the M′ basis.
pub fn s35_vector() -> Vec<i64> {
    let mut d = indicator(20, &[1, 4, 6, 9, 10, 20]);
    for i in [2, 3, 7, 8, 11, 12] {
        d[i - 1] = -1;
    }
    d
}

/// Candidate kernels of M/2M and M/3M, the F₅ pairing with D′, the
/// fibration fiber and the sets S₂,₅ and S₃,₅ for M′.
pub fn saturation_report(data: &LatticeData) -> Result<SaturationReport> {
    let am = data.action();
    // Sylow subgroups of Gal(Q(ζ, s)/Q)
    let syl2 = sylow_matrices(&am, [1, 5, 7, 11].into_iter().map(|u| GaloisElement::new(u, 0, 0, 0, 0)));
    let syl3 = sylow_matrices(&am, (0..3).map(|a| GaloisElement::new(1, a, 0, 0, 0)));
    let c2 = saturation_kernel_candidates(&data.gram, 2, &syl2);
    let c3 = saturation_kernel_candidates(&data.gram, 3, &syl3);

    let ss = Supersingular::new()?;
    let refs = reference_divisors()?;
    let red = ss.reduce_all(&refs)?;
    let pairings = c2
        .iter()
        .map(|c| ss.supersingular_pairing(c, &red))
        .collect::<Result<Vec<_>>>()?;

    let fiber = fibration_fiber_check()?;

    let red_alt = ss.reduce_all(&alternate_basis()?)?;
    let g_alt = gram_matrix(&ss.engine, &red_alt)?;
    let orbit = ss.dprime_orbit();
    let extra = ss.extra_pairings(&orbit, &red_alt)?;
    let s2 = s_rp(&g_alt, &extra, 2);
    let s3 = s_rp(&g_alt, &extra, 3);
    let d = s35_vector();
    Ok(SaturationReport {
        mod2_candidates: c2.iter().map(|c| class_label(c)).collect(),
        mod3_candidates: c3.iter().map(|c| class_label(c)).collect(),
        mod2_pairings_with_dprime: pairings,
        fiber_components: fiber.fiber_components.clone(),
        fiber_check_passed: fiber.passed(),
        alternate_det_mod5: g_alt.det(),
        dprime_orbit_size: orbit.len(),
        s25_equals_2m: s2.is_r_times_full(),
        s35_kernel: s3.kernel_mod_r.iter().map(|k| class_label(k)).collect(),
        s35_vector: class_label(&d).replace("d20", "d'20"),
        s35_in_3m_plus_d: s3.contained_in_r_plus(&d),
    })
}

/// Named subgroups accepted by the cohomology command.
pub const SUBGROUP_TAGS: [&str; 7] = ["generic", "3abc", "-3a", "-3b", "-3c", "k", "cube"];

/// The subgroup behind a tag. "k" is H_K for K = Q(√−3) in the −3A case,
/// "cube" is H₁, the mod-2 stabilizer of d₁ − d₄.
pub fn subgroup_for_tag(tag: &str, am: &ActionMatrices) -> Result<Subgroup> {
    Ok(match tag {
        "generic" => Subgroup::full(),
        "3abc" => square_relation_subgroup(&TAG_3ABC),
        "-3a" => square_relation_subgroup(&TAG_M3A),
        "-3b" => square_relation_subgroup(&TAG_M3B),
        "-3c" => square_relation_subgroup(&TAG_M3C),
        "k" => cubic_case()?.h_k,
        "cube" => quaternion_subgroups(am, &quaternion_class()).0,
        _ => {
            return Err(Error::Degenerate(format!(
                "unknown subgroup tag {} (expected one of {})",
                tag,
                SUBGROUP_TAGS.join(", ")
            )))
        }
    })
}

pub fn subgroup_for_coefficients(a: i64, b: i64, c: i64) -> Result<Subgroup> {
    subgroup_for_surface(&Surface::from_ints(a, b, c)?)
}

/// d₁ − d₄.
pub fn quaternion_class() -> Vec<i64> {
    let mut c = indicator(20, &[1]);
    c[3] = -1;
    c
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubgroupCohomology {
    pub order: usize,
    pub h1: CohomologyResult,
    pub description: String,
    /// dimension of H¹(H, P̄)[2]
    pub two_torsion_dimension: usize,
}

pub fn subgroup_cohomology(am: &ActionMatrices, h: &Subgroup) -> Result<SubgroupCohomology> {
    let r = h1(am, h)?.result();
    Ok(SubgroupCohomology {
        order: h.order(),
        description: r.describe(),
        h1: r,
        two_torsion_dimension: h1_two_torsion(am, h).dimension,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuaternionTorsion {
    pub h1_order: usize,
    pub h2_order: usize,
    pub orbit_size: usize,
    /// H¹(H₁, P̄)
    pub h1_cohomology: String,
    pub class_nonzero_on_h1: bool,
    pub class_nonzero_on_h2: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormReport {
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<String>,
    pub fixed_rank: usize,
    /// d₁ + d₄ − d₁₃ − d₁₃′
    pub candidate: String,
    pub candidate_order: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub full_group: SubgroupCohomology,
    pub index2_subgroups: usize,
    /// (tag, H¹) for the index-2 subgroups with 3-torsion
    pub index2_with_3torsion: Vec<(String, String)>,
    pub k_case: SubgroupCohomology,
    pub quaternion: QuaternionTorsion,
    pub norm: NormReport,
}

pub fn quaternion_torsion(am: &ActionMatrices) -> Result<QuaternionTorsion> {
    let c = quaternion_class();
    let (h1g, h2g) = quaternion_subgroups(am, &c);
    let nonzero = |h: &Subgroup| {
        two_torsion_class_nonzero(am, h, &c).ok_or_else(|| Error::Degenerate("d₁ − d₄ is not fixed mod 2".into()))
    };
    Ok(QuaternionTorsion {
        h1_order: h1g.order(),
        h2_order: h2g.order(),
        orbit_size: orbit(am, &h1g, &c).len(),
        h1_cohomology: h1(am, &h1g)?.result().describe(),
        class_nonzero_on_h1: nonzero(&h1g)?,
        class_nonzero_on_h2: nonzero(&h2g)?,
    })
}

pub fn norm_report(data: &LatticeData) -> Result<NormReport> {
    let am = data.action();
    let case = cubic_case()?;
    let nk = NormKernel::new(&am, &case.h_l, &case.sigma, 3)?;
    let s = nk.summary();
    let mut cand = vec![0i64; 20];
    for (label, sign) in [("D1", 1), ("D4", 1), ("D13", -1), ("D13'", -1)] {
        for (x, y) in cand.iter_mut().zip(data.class_of(label)?) {
            *x += sign * y;
        }
    }
    Ok(NormReport {
        invariant_factors: s.invariant_factors,
        generators: s.generators.iter().map(|g| class_label(g)).collect(),
        fixed_rank: s.fixed_rank,
        candidate: class_label(&cand),
        candidate_order: nk.class_order(&cand).and_then(|o| o.try_into().ok()),
    })
}

pub fn cohomology_report(data: &LatticeData) -> Result<CohomologyReport> {
    let am = data.action();
    let full_group = subgroup_cohomology(&am, &Subgroup::full())?;
    let with3 = index2_subgroups_with_3torsion(&am)?;
    let k_case = subgroup_cohomology(&am, &cubic_case()?.h_k)?;
    Ok(CohomologyReport {
        full_group,
        index2_subgroups: index2_subgroups().len(),
        index2_with_3torsion: with3.iter().map(|(_, t, r)| (t.to_string(), r.describe())).collect(),
        k_case,
        quaternion: quaternion_torsion(&am)?,
        norm: norm_report(data)?,
    })
}
