//! Saturation of the span of the reference classes: candidate kernels of
//! M/rM → P̄/rP̄, the supersingular reduction at 5 and the sets S_{r,5}.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::engine::Engine;
use super::gram::GramMatrix;
use crate::error::{Error, Result};
use crate::exact::field::Field;
use crate::exact::finite::{FiniteField, FqElem, TowerEmbedding};
use crate::exact::matrix::{kernel_mod_p, lattice_basis, IntMatrix};
use crate::exact::tower::TowerElement;
use crate::geometry::divisor::{key, reduce_divisor_mod_p, Divisor};
use crate::geometry::forms::{Form, FormRing};
use crate::geometry::reference::supersingular_divisor;

/// Nonzero d̄ ∈ (M/rM)^H with d·d ≡ 0 mod r² and d·d′ ≡ 0 mod r for all d′,
/// entries in [0, r). `action` lists the matrices of the group H.
pub fn saturation_kernel_candidates(gram: &GramMatrix, r: i64, action: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let n = gram.dim();
    let g = gram.matrix.to_i64_rows().expect("small Gram entries");
    let mut rows: Vec<Vec<i64>> = g.clone();
    for m in action {
        for i in 0..n {
            let mut row = m[i].clone();
            row[i] -= 1;
            rows.push(row);
        }
    }
    let basis = kernel_mod_p(&rows, n, r);
    let dim = basis.len() as u32;
    let total = (r as u64).pow(dim);
    let mut out = Vec::new();
    for idx in 1..total {
        let mut coeffs = Vec::with_capacity(dim as usize);
        let mut t = idx;
        for _ in 0..dim {
            coeffs.push((t % r as u64) as i64);
            t /= r as u64;
        }
        let mut d = vec![0i64; n];
        for (c, b) in coeffs.iter().zip(&basis) {
            for k in 0..n {
                d[k] = (d[k] + c * b[k]).rem_euclid(r);
            }
        }
        let dd: i64 = (0..n).map(|i| (0..n).map(|j| d[i] * g[i][j] * d[j]).sum::<i64>()).sum();
        if dd.rem_euclid(r * r) == 0 {
            out.push(d);
        }
    }
    out
}

/// 0/1 vector with ones at the given 1-based indices.
pub fn indicator(n: usize, ones: &[usize]) -> Vec<i64> {
    let mut v = vec![0; n];
    for &i in ones {
        v[i - 1] = 1;
    }
    v
}

/// The reduction of the reference surface at 5 with the curve D′.
pub struct Supersingular {
    pub field: FiniteField,
    pub embedding: TowerEmbedding,
    pub alpha: FqElem,
    pub dprime: Divisor<FqElem>,
    pub engine: Engine<FiniteField>,
}

impl Supersingular {
    /// ζ̄ is the first primitive 12th root of unity in F₂₅ (enumeration order)
    /// and s̄ = 3, the cube root of 2 in F₅.
    pub fn new() -> Result<Self> {
        let field = FiniteField::new(5, 2);
        let (dprime, alpha) = supersingular_divisor(&field)?;
        let zeta = field
            .roots_of_unity_of_order(12)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Embedding("no 12th roots of unity in F25".into()))?;
        let embedding = TowerEmbedding::new(field.clone(), zeta, field.from_i64(3))?;
        let engine = Engine::new(field.clone());
        Ok(Supersingular {
            field,
            embedding,
            alpha,
            dprime,
            engine,
        })
    }

    pub fn reduce(&self, d: &Divisor<TowerElement>) -> Result<Divisor<FqElem>> {
        reduce_divisor_mod_p(d, &self.embedding)
    }

    pub fn reduce_all(&self, ds: &[Divisor<TowerElement>]) -> Result<Vec<Divisor<FqElem>>> {
        ds.iter().map(|d| self.reduce(d)).collect()
    }

    /// D·D′ for each divisor.
    pub fn pairings_with_dprime(&self, reduced: &[Divisor<FqElem>]) -> Result<Vec<i64>> {
        reduced
            .iter()
            .map(|d| self.engine.intersection_number(d, &self.dprime))
            .collect()
    }

    /// c·d′ for an integer class c in the basis `reduced`.
    pub fn supersingular_pairing(&self, class: &[i64], reduced: &[Divisor<FqElem>]) -> Result<i64> {
        let v = self.pairings_with_dprime(reduced)?;
        Ok(class.iter().zip(&v).map(|(a, b)| a * b).sum())
    }

    /// Images of D′ under the automorphisms of x⁶ + y⁶ + z⁶ = w² over F₂₅
    /// generated by coordinate permutations, μ₆ scalings, w ↦ −w and the
    /// Frobenius; deduplicated.
    pub fn dprime_orbit(&self) -> Vec<Divisor<FqElem>> {
        let f = &self.field;
        let ring = FormRing::new(f.clone());
        let mu6: Vec<FqElem> = f.elements().filter(|e| !f.is_zero(e) && f.pow(e, 6) == f.one()).collect();
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let frob_form = |fm: &Form<FqElem>| ring.clean(fm.map(|c| f.frobenius(c)));
        for frob in [false, true] {
            let base_plane = if frob { frob_form(&self.dprime.plane) } else { self.dprime.plane.clone() };
            let base_w = if frob { frob_form(&self.dprime.w) } else { self.dprime.w.clone() };
            for perm in &perms {
                let vars = [ring.var(perm[0]), ring.var(perm[1]), ring.var(perm[2])];
                let plane_p = ring.substitute(&base_plane, &vars);
                let w_p = ring.substitute(&base_w, &vars);
                // scale y and z only: an overall scaling is absorbed by the weights
                for e1 in &mu6 {
                    for e2 in &mu6 {
                        let lam = [f.one(), e1.clone(), e2.clone()];
                        let plane = ring.rescale(&plane_p, &lam);
                        let w0 = ring.rescale(&w_p, &lam);
                        for sign in [1i64, -1] {
                            let w = ring.scale(&w0, &f.from_i64(sign));
                            let d = Divisor {
                                label: format!("D'[{}]", out.len()),
                                plane: plane.clone(),
                                w,
                                base_point: None,
                            };
                            if seen.insert(key(&ring, &d)) {
                                out.push(crate::geometry::divisor::canonicalize(&ring, &d));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Pairing matrix: one row per extra divisor, one column per basis divisor.
    pub fn extra_pairings(&self, extras: &[Divisor<FqElem>], reduced_basis: &[Divisor<FqElem>]) -> Result<Vec<Vec<i64>>> {
        extras
            .iter()
            .map(|x| {
                reduced_basis
                    .iter()
                    .map(|b| self.engine.intersection_number(b, x))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect()
    }
}

/// S_{r,p} = {d ∈ L : d·x ≡ 0 mod r for all x in the basis and the extra divisors}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SublatticeModR {
    pub r: i64,
    /// basis of S/rL inside L/rL
    pub kernel_mod_r: Vec<Vec<i64>>,
    /// Z-basis of S
    pub basis: Vec<Vec<i64>>,
}

impl SublatticeModR {
    pub fn is_r_times_full(&self) -> bool {
        self.kernel_mod_r.is_empty()
    }

    /// S ⊆ rL + Z·d
    pub fn contained_in_r_plus(&self, d: &[i64]) -> bool {
        let r = self.r;
        let dm: Vec<i64> = d.iter().map(|x| x.rem_euclid(r)).collect();
        // every kernel vector must be a multiple of d mod r
        self.kernel_mod_r.iter().all(|k| (0..r).any(|c| k.iter().zip(&dm).all(|(a, b)| (a - c * b).rem_euclid(r) == 0)))
    }
}

pub fn s_rp(gram: &GramMatrix, extra_pairings: &[Vec<i64>], r: i64) -> SublatticeModR {
    let n = gram.dim();
    let mut rows = gram.matrix.to_i64_rows().unwrap();
    rows.extend(extra_pairings.iter().cloned());
    let kernel = kernel_mod_p(&rows, n, r);
    let mut gens: Vec<Vec<BigInt>> = kernel.iter().map(|k| k.iter().map(|&x| BigInt::from(x)).collect()).collect();
    for i in 0..n {
        let mut e = vec![BigInt::from(0); n];
        e[i] = BigInt::from(r);
        gens.push(e);
    }
    let basis = lattice_basis(&IntMatrix::from_rows(&gens))
        .into_iter()
        .map(|v| v.iter().map(|x| x.to_i64().unwrap()).collect())
        .collect();
    SublatticeModR {
        r,
        kernel_mod_r: kernel,
        basis,
    }
}
