//! H¹ of finite groups acting on lattices.
//!
//! Cocycles are determined by their values on a generating set. Values on
//! every other element follow along a spanning tree of the Cayley graph,
//! and each non-tree edge contributes one block of linear conditions coming
//! from f(gs) = f(g) + g·f(s).

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::catalogue::{identity, mat_mul, mat_vec, ActionMatrices};
use super::group::GaloisElement;
use super::subgroup::Subgroup;
use crate::error::{Error, Result};
use crate::exact::matrix::{integer_kernel, smith_normal_form, IntMatrix, RowSpace, Smith};

/// A finite group acting on Zⁿ through integer matrices (column vectors).
pub trait GroupAction {
    type Elem: Copy + Eq + Hash + Debug;
    fn identity(&self) -> Self::Elem;
    /// g∘h
    fn compose(&self, g: &Self::Elem, h: &Self::Elem) -> Self::Elem;
    fn matrix(&self, g: &Self::Elem) -> Vec<Vec<i64>>;
    fn dim(&self) -> usize;
}

pub struct GaloisAction<'a> {
    pub matrices: &'a ActionMatrices,
}

impl GroupAction for GaloisAction<'_> {
    type Elem = GaloisElement;
    fn identity(&self) -> GaloisElement {
        GaloisElement::identity()
    }
    fn compose(&self, g: &GaloisElement, h: &GaloisElement) -> GaloisElement {
        g.compose(h)
    }
    fn matrix(&self, g: &GaloisElement) -> Vec<Vec<i64>> {
        self.matrices.get(g).clone()
    }
    fn dim(&self) -> usize {
        self.matrices.mats[0].len()
    }
}

/// Z/n acting through powers of σ.
pub struct CyclicAction {
    pub sigma: Vec<Vec<i64>>,
    pub order: usize,
    powers: Vec<Vec<Vec<i64>>>,
}

impl CyclicAction {
    pub fn new(sigma: Vec<Vec<i64>>, order: usize) -> Result<Self> {
        let n = sigma.len();
        let mut powers = vec![identity(n)];
        for k in 1..=order {
            powers.push(mat_mul(&sigma, &powers[k - 1]));
        }
        if powers[order] != identity(n) {
            return Err(Error::Degenerate(format!("σ does not have order dividing {}", order)));
        }
        powers.truncate(order);
        Ok(CyclicAction { sigma, order, powers })
    }
}

impl GroupAction for CyclicAction {
    type Elem = usize;
    fn identity(&self) -> usize {
        0
    }
    fn compose(&self, g: &usize, h: &usize) -> usize {
        (g + h) % self.order
    }
    fn matrix(&self, g: &usize) -> Vec<Vec<i64>> {
        self.powers[*g].clone()
    }
    fn dim(&self) -> usize {
        self.sigma.len()
    }
}

/// A saturated sublattice of Zⁿ with a basis and a coordinate map.
#[derive(Clone, Debug)]
pub struct SaturatedLattice {
    pub basis: Vec<Vec<BigInt>>,
    ambient: usize,
    v: Option<IntMatrix>,
}

impl SaturatedLattice {
    /// (span_Q of `vectors`) ∩ Zⁿ
    pub fn from_spanning(vectors: &[Vec<BigInt>], ambient: usize) -> Self {
        let nonzero: Vec<Vec<BigInt>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
        if nonzero.is_empty() {
            return SaturatedLattice {
                basis: Vec::new(),
                ambient,
                v: None,
            };
        }
        let snf = smith_normal_form(&IntMatrix::from_rows(&nonzero));
        let r = snf.rank();
        SaturatedLattice {
            basis: (0..r).map(|i| snf.v_inv.row_vec(i)).collect(),
            ambient,
            v: Some(snf.v),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Integer coordinates of x in the basis, or None if x is not in the lattice.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let Some(v) = &self.v else {
            return x.iter().all(|c| c.is_zero()).then(Vec::new);
        };
        let y = v.vec_mul(x);
        let r = self.rank();
        if y[r..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(y[..r].to_vec())
    }

    pub fn from_coords(&self, y: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.ambient];
        for (c, b) in y.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }
}

/// Zʳ modulo the row span of a relation matrix.
#[derive(Clone, Debug)]
pub struct FinitelyGenerated {
    pub rank: usize,
    smith: Option<Smith>,
}

impl FinitelyGenerated {
    pub fn new(relations: &[Vec<BigInt>], rank: usize) -> Self {
        let rows: Vec<Vec<BigInt>> = relations.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
        let smith = if rows.is_empty() || rank == 0 {
            None
        } else {
            Some(smith_normal_form(&IntMatrix::from_rows(&rows)))
        };
        FinitelyGenerated { rank, smith }
    }

    fn diagonal(&self) -> Vec<BigInt> {
        match &self.smith {
            None => vec![BigInt::zero(); self.rank],
            Some(s) => {
                let mut d = s.invariant_factors();
                d.resize(self.rank, BigInt::zero());
                d
            }
        }
    }

    /// Torsion invariant factors (> 1), ascending.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| d > &BigInt::one()).collect()
    }

    pub fn free_rank(&self) -> usize {
        self.diagonal().iter().filter(|d| d.is_zero()).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion().is_empty() && self.free_rank() == 0
    }

    /// Coordinates in the diagonal basis, reduced mod each factor.
    pub fn normal_form(&self, y: &[BigInt]) -> Vec<BigInt> {
        let z = match &self.smith {
            None => y.to_vec(),
            Some(s) => s.v.vec_mul(y),
        };
        z.iter()
            .zip(self.diagonal())
            .map(|(x, d)| if d.is_zero() { x.clone() } else { x.mod_floor(&d) })
            .collect()
    }

    pub fn is_zero_class(&self, y: &[BigInt]) -> bool {
        self.normal_form(y).iter().all(|x| x.is_zero())
    }

    /// Order of the class of y (None when infinite).
    pub fn class_order(&self, y: &[BigInt]) -> Option<BigInt> {
        let z = self.normal_form(y);
        let mut order = BigInt::one();
        for (x, d) in z.iter().zip(self.diagonal()) {
            if x.is_zero() {
                continue;
            }
            if d.is_zero() {
                return None;
            }
            order = order.lcm(&(&d / x.gcd(&d)));
        }
        Some(order)
    }

    /// Elements of Zʳ generating the torsion summands, one per factor > 1.
    pub fn torsion_generators(&self) -> Vec<Vec<BigInt>> {
        let Some(s) = &self.smith else {
            return Vec::new();
        };
        self.diagonal()
            .iter()
            .enumerate()
            .filter(|(_, d)| *d > &BigInt::one())
            .map(|(i, _)| s.v_inv.row_vec(i))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyResult {
    pub group_order: usize,
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
    /// cocycle values on the generators (concatenated), one per invariant factor
    pub representatives: Vec<Vec<i64>>,
}

impl CohomologyResult {
    pub fn is_zero(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn two_rank(&self) -> usize {
        self.invariant_factors.iter().filter(|d| *d % 2 == 0).count()
    }

    pub fn three_rank(&self) -> usize {
        self.invariant_factors.iter().filter(|d| *d % 3 == 0).count()
    }

    pub fn describe(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{}", d)).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.join(" x ")
    }
}

/// Z¹(H, L) in generator coordinates, with the coboundaries and the quotient.
pub struct CocycleSpace<A: GroupAction> {
    pub generators: Vec<A::Elem>,
    pub elements: Vec<A::Elem>,
    position: HashMap<A::Elem, usize>,
    /// f(g) = paths[g] · x, an n × (n·k) matrix per element
    paths: Vec<Vec<Vec<i64>>>,
    pub cocycles: SaturatedLattice,
    pub quotient: FinitelyGenerated,
    n: usize,
}

impl<A: GroupAction> CocycleSpace<A> {
    pub fn new(action: &A, elements: &[A::Elem], generators: &[A::Elem]) -> Result<Self> {
        let n = action.dim();
        let k = generators.len();
        let ncols = n * k;
        let matrices: HashMap<A::Elem, Vec<Vec<i64>>> = elements.iter().map(|g| (*g, action.matrix(g))).collect();
        // spanning tree by BFS from the identity
        let id = action.identity();
        let mut position = HashMap::new();
        let mut order = Vec::with_capacity(elements.len());
        let mut paths: Vec<Vec<Vec<i64>>> = Vec::with_capacity(elements.len());
        position.insert(id, 0);
        order.push(id);
        paths.push(vec![vec![0i64; ncols]; n]);
        let mut tree_edges = std::collections::HashSet::new();
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            let pg = position[&g];
            for (si, s) in generators.iter().enumerate() {
                let h = action.compose(&g, s);
                if position.contains_key(&h) {
                    continue;
                }
                let mut a = paths[pg].clone();
                add_block(&mut a, &matrices[&g], si, n);
                position.insert(h, order.len());
                order.push(h);
                paths.push(a);
                tree_edges.insert((pg, si));
                queue.push_back(h);
            }
        }
        if order.len() != elements.len() {
            return Err(Error::Degenerate(format!(
                "generators reach {} of {} elements",
                order.len(),
                elements.len()
            )));
        }
        // expected rank of Z¹ equals the rank of B¹ = n − rank(L^H)
        let mut fixed_rows = Vec::new();
        for s in generators {
            let m = &matrices[s];
            for (i, row) in m.iter().enumerate() {
                let mut r: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
                r[i] -= 1;
                fixed_rows.push(r);
            }
        }
        let b1_rank = if fixed_rows.is_empty() {
            0
        } else {
            IntMatrix::from_rows(&fixed_rows).rank()
        };
        let target = ncols - b1_rank;
        let mut selector = ModPEchelon::new(ncols);
        let mut selected: Vec<Vec<i64>> = Vec::new();
        'outer: for (gi, g) in order.iter().enumerate() {
            for (si, s) in generators.iter().enumerate() {
                if selector.rank() == target {
                    break 'outer;
                }
                if tree_edges.contains(&(gi, si)) {
                    continue;
                }
                let h = action.compose(g, s);
                let hi = position[&h];
                let mut rhs = paths[gi].clone();
                add_block(&mut rhs, &matrices[g], si, n);
                for row in 0..n {
                    let r: Vec<i64> = paths[hi][row].iter().zip(&rhs[row]).map(|(a, b)| a - b).collect();
                    if selector.insert(&r) {
                        selected.push(r);
                    }
                }
            }
        }
        if selector.rank() != target {
            return Err(Error::Degenerate(format!(
                "cocycle conditions have rank {} but {} was expected",
                selector.rank(),
                target
            )));
        }
        let mut rs = RowSpace::new(ncols);
        for r in &selected {
            rs.insert(r.iter().map(|&x| BigInt::from(x)).collect());
        }
        let cocycles = SaturatedLattice::from_spanning(&rs.kernel_vectors(), ncols);
        // coboundaries of the basis vectors e_i
        let mut relations = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = vec![BigInt::zero(); ncols];
            for (si, s) in generators.iter().enumerate() {
                let m = &matrices[s];
                for r in 0..n {
                    let v = m[r][i] - i64::from(r == i);
                    x[si * n + r] = BigInt::from(v);
                }
            }
            let y = cocycles
                .coords(&x)
                .ok_or_else(|| Error::Degenerate("coboundary outside the cocycle lattice".into()))?;
            relations.push(y);
        }
        let quotient = FinitelyGenerated::new(&relations, cocycles.rank());
        let elements_in_order = order;
        Ok(CocycleSpace {
            generators: generators.to_vec(),
            elements: elements_in_order,
            position,
            paths,
            cocycles,
            quotient,
            n,
        })
    }

    pub fn result(&self) -> CohomologyResult {
        let reps = self
            .quotient
            .torsion_generators()
            .iter()
            .map(|y| {
                self.cocycles
                    .from_coords(y)
                    .iter()
                    .map(|x| x.to_i64().expect("small cocycle"))
                    .collect()
            })
            .collect();
        CohomologyResult {
            group_order: self.elements.len(),
            invariant_factors: self.quotient.torsion().iter().map(|d| d.to_u64().unwrap()).collect(),
            free_rank: self.quotient.free_rank(),
            representatives: reps,
        }
    }

    /// f(g) for the cocycle with generator values x.
    pub fn evaluate(&self, x: &[i64], g: &A::Elem) -> Option<Vec<i64>> {
        let p = &self.paths[*self.position.get(g)?];
        Some(mat_vec(p, x))
    }

    /// Checks the cocycle identity on every pair (g, s) with s a generator.
    pub fn is_cocycle(&self, action: &A, x: &[i64]) -> bool {
        self.elements.iter().all(|g| {
            let fg = self.evaluate(x, g).unwrap();
            let mg = action.matrix(g);
            self.generators.iter().enumerate().all(|(si, s)| {
                let fs = &x[si * self.n..(si + 1) * self.n];
                let gfs = mat_vec(&mg, fs);
                let lhs = self.evaluate(x, &action.compose(g, s)).unwrap();
                lhs.iter().zip(fg.iter().zip(&gfs)).all(|(l, (a, b))| *l == a + b)
            })
        })
    }

    /// Quotient coordinates of a cocycle given by its generator values.
    pub fn class_of(&self, x: &[i64]) -> Option<Vec<BigInt>> {
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.cocycles.coords(&xb).map(|y| self.quotient.normal_form(&y))
    }

    pub fn is_coboundary(&self, x: &[i64]) -> Option<bool> {
        self.class_of(x).map(|z| z.iter().all(|c| c.is_zero()))
    }

    /// Generator values of the restriction of a cocycle to `smaller`.
    pub fn restrict(&self, x: &[i64], smaller: &CocycleSpace<A>) -> Option<Vec<i64>> {
        let mut out = Vec::with_capacity(smaller.generators.len() * self.n);
        for s in &smaller.generators {
            out.extend(self.evaluate(x, s)?);
        }
        Some(out)
    }
}

fn add_block(a: &mut [Vec<i64>], m: &[Vec<i64>], block: usize, n: usize) {
    for r in 0..n {
        for c in 0..n {
            a[r][block * n + c] += m[r][c];
        }
    }
}

/// Incremental row echelon form over F_P for a large prime P; rows that are
/// independent mod P are independent over Q.
struct ModPEchelon {
    rows: Vec<(usize, Vec<u64>)>,
    ncols: usize,
}

const BIG_PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 − 1

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % BIG_PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

impl ModPEchelon {
    fn new(ncols: usize) -> Self {
        ModPEchelon { rows: Vec::new(), ncols }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, r: &[i64]) -> bool {
        let mut v: Vec<u64> = r.iter().map(|&x| x.rem_euclid(BIG_PRIME as i64) as u64).collect();
        for (pc, row) in &self.rows {
            let f = v[*pc];
            if f == 0 {
                continue;
            }
            for c in 0..self.ncols {
                if row[c] != 0 {
                    v[c] = (v[c] + BIG_PRIME - mulmod(f, row[c])) % BIG_PRIME;
                }
            }
        }
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = powmod(v[pc], BIG_PRIME - 2);
        for x in v.iter_mut() {
            *x = mulmod(*x, inv);
        }
        self.rows.push((pc, v));
        true
    }
}

/// H¹(H, P̄) for a subgroup, using its own generators.
pub fn h1<'a>(matrices: &'a ActionMatrices, h: &Subgroup) -> Result<CocycleSpace<GaloisAction<'a>>> {
    let action = GaloisAction { matrices };
    let gens = if h.generators.is_empty() {
        vec![GaloisElement::identity()]
    } else {
        h.generators.clone()
    };
    CocycleSpace::new(&action, &h.elements, &gens)
}

/// ker N / im(1 − σ) for σ of order n on Zᵐ (column convention), with
/// generators of the torsion part as vectors in Zᵐ.
pub fn cyclic_norm_quotient(sigma: &[Vec<i64>], order: usize) -> Result<(FinitelyGenerated, SaturatedLattice)> {
    let action = CyclicAction::new(sigma.to_vec(), order)?;
    let m = sigma.len();
    let mut norm = vec![vec![0i64; m]; m];
    for k in 0..order {
        let p = action.matrix(&k);
        for i in 0..m {
            for j in 0..m {
                norm[i][j] += p[i][j];
            }
        }
    }
    let kernel = SaturatedLattice::from_spanning(&integer_kernel(&IntMatrix::from_i64_rows(&norm)), m);
    let mut relations = Vec::new();
    for j in 0..m {
        let col: Vec<BigInt> = (0..m).map(|i| BigInt::from(sigma[i][j] - i64::from(i == j))).collect();
        relations.push(
            kernel
                .coords(&col)
                .ok_or_else(|| Error::Degenerate("(σ − 1)e_j outside ker N".into()))?,
        );
    }
    let rank = kernel.rank();
    Ok((FinitelyGenerated::new(&relations, rank), kernel))
}

/// H¹ of a cyclic group by the formula ker N / im(1 − σ).
pub fn cyclic_h1_oracle(sigma: &[Vec<i64>], order: usize) -> Result<Vec<u64>> {
    let (q, _) = cyclic_norm_quotient(sigma, order)?;
    Ok(q.torsion().iter().map(|d| d.to_u64().unwrap()).collect())
}

/// The fixed sublattice L^H (rows are a basis in d₁..d₂₀ coordinates).
pub fn fixed_lattice(matrices: &ActionMatrices, h: &Subgroup) -> SaturatedLattice {
    let n = matrices.mats[0].len();
    let mut rows = Vec::new();
    for g in &h.generators {
        let m = matrices.get(g);
        for (i, row) in m.iter().enumerate() {
            let mut r: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
            r[i] -= 1;
            rows.push(r);
        }
    }
    if rows.is_empty() {
        let id: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect())
            .collect();
        return SaturatedLattice::from_spanning(&id, n);
    }
    SaturatedLattice::from_spanning(&integer_kernel(&IntMatrix::from_rows(&rows)), n)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormQuotient {
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<Vec<i64>>,
    /// rank of the fixed lattice P̄^{H_L}
    pub fixed_rank: usize,
}

/// ker(1 + σ + … + σⁿ⁻¹)/im(1 − σ) on P̄^{H_L}, where σ ∈ H_K generates H_K/H_L.
pub struct NormKernel {
    pub fixed: SaturatedLattice,
    pub quotient: FinitelyGenerated,
    pub kernel: SaturatedLattice,
}

impl NormKernel {
    pub fn new(matrices: &ActionMatrices, h_l: &Subgroup, sigma: &GaloisElement, order: usize) -> Result<Self> {
        let fixed = fixed_lattice(matrices, h_l);
        let m = fixed.rank();
        let ms = matrices.get(sigma);
        // σ on the fixed lattice: column j is the coordinate vector of σ·b_j
        let mut sig = vec![vec![0i64; m]; m];
        for (j, b) in fixed.basis.iter().enumerate() {
            let bi: Vec<i64> = b.iter().map(|x| x.to_i64().unwrap()).collect();
            let img: Vec<BigInt> = mat_vec(ms, &bi).into_iter().map(BigInt::from).collect();
            let y = fixed
                .coords(&img)
                .ok_or_else(|| Error::Degenerate("σ does not preserve the fixed lattice".into()))?;
            for i in 0..m {
                sig[i][j] = y[i].to_i64().unwrap();
            }
        }
        let (quotient, kernel) = cyclic_norm_quotient(&sig, order)?;
        Ok(NormKernel { fixed, quotient, kernel })
    }

    pub fn summary(&self) -> NormQuotient {
        let generators = self
            .quotient
            .torsion_generators()
            .iter()
            .map(|y| {
                let in_fixed = self.kernel.from_coords(y);
                self.fixed
                    .from_coords(&in_fixed)
                    .iter()
                    .map(|x| x.to_i64().unwrap())
                    .collect()
            })
            .collect();
        NormQuotient {
            invariant_factors: self.quotient.torsion().iter().map(|d| d.to_u64().unwrap()).collect(),
            generators,
            fixed_rank: self.fixed.rank(),
        }
    }

    /// Quotient class of a class c ∈ P̄ (d-coordinates); None if c ∉ ker N.
    pub fn class_of(&self, c: &[i64]) -> Option<Vec<BigInt>> {
        let cb: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let y = self.fixed.coords(&cb)?;
        let z = self.kernel.coords(&y)?;
        Some(self.quotient.normal_form(&z))
    }

    pub fn class_order(&self, c: &[i64]) -> Option<BigInt> {
        let cb: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let y = self.fixed.coords(&cb)?;
        let z = self.kernel.coords(&y)?;
        self.quotient.class_order(&z)
    }
}

/// dim_F₂ (L/2L)^H / (L^H/2L^H), with representatives of a complement.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwoTorsion {
    pub dimension: usize,
    pub representatives: Vec<Vec<i64>>,
}

pub fn h1_two_torsion(matrices: &ActionMatrices, h: &Subgroup) -> TwoTorsion {
    let n = matrices.mats[0].len();
    let mut rows = Vec::new();
    for g in &h.generators {
        let m = matrices.get(g);
        for (i, row) in m.iter().enumerate() {
            let mut r = row.clone();
            r[i] -= 1;
            rows.push(r);
        }
    }
    let fixed_mod2 = crate::exact::matrix::kernel_mod_p(&rows, n, 2);
    let fixed = fixed_lattice(matrices, h);
    // extend the image of L^H mod 2 to a basis of (L/2L)^H
    let mut span: Vec<Vec<i64>> = Vec::new();
    let mut reps = Vec::new();
    let reduce = |span: &Vec<Vec<i64>>, v: &[i64]| -> bool {
        let mut rows = span.clone();
        rows.push(v.to_vec());
        f2_rank(&rows) > f2_rank(span)
    };
    for b in &fixed.basis {
        let v: Vec<i64> = b.iter().map(|x| x.mod_floor(&BigInt::from(2)).to_i64().unwrap()).collect();
        if reduce(&span, &v) {
            span.push(v);
        }
    }
    for v in fixed_mod2 {
        if reduce(&span, &v) {
            span.push(v.clone());
            reps.push(v);
        }
    }
    TwoTorsion {
        dimension: reps.len(),
        representatives: reps,
    }
}

/// Whether c mod 2 ∈ (L/2L)^H gives a nonzero class in H¹(H, L)[2].
pub fn two_torsion_class_nonzero(matrices: &ActionMatrices, h: &Subgroup, c: &[i64]) -> Option<bool> {
    let fixed_mod2 = h
        .generators
        .iter()
        .all(|g| matrices.apply(g, c).iter().zip(c).all(|(a, b)| (a - b).rem_euclid(2) == 0));
    if !fixed_mod2 {
        return None;
    }
    let fixed = fixed_lattice(matrices, h);
    let span: Vec<Vec<i64>> = fixed
        .basis
        .iter()
        .map(|b| b.iter().map(|x| x.mod_floor(&BigInt::from(2)).to_i64().unwrap()).collect())
        .collect();
    let cm: Vec<i64> = c.iter().map(|x| x.rem_euclid(2)).collect();
    let mut with = span.clone();
    with.push(cm);
    Some(f2_rank(&with) > f2_rank(&span))
}

fn f2_rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let n = rows[0].len();
    n - crate::exact::matrix::kernel_mod_p(rows, n, 2).len()
}

/// The connecting-map cocycle g ↦ (g·c − c)/2 on the generators of H.
pub fn connecting_cocycle(matrices: &ActionMatrices, h: &Subgroup, c: &[i64]) -> Option<Vec<i64>> {
    let mut out = Vec::new();
    for g in &h.generators {
        for (x, y) in matrices.apply(g, c).iter().zip(c) {
            let d = x - y;
            if d % 2 != 0 {
                return None;
            }
            out.push(d / 2);
        }
    }
    Some(out)
}

pub fn abs_factors(v: &[BigInt]) -> Vec<u64> {
    v.iter().map(|d| d.abs().to_u64().unwrap()).collect()
}

/// Index-2 subgroups whose H¹ has 3-torsion, with their condition tag.
pub fn index2_subgroups_with_3torsion(matrices: &ActionMatrices) -> Result<Vec<(Subgroup, &'static str, CohomologyResult)>> {
    use super::subgroup::{index2_subgroups, square_relation_subgroup, tag_name, TAG_3ABC, TAG_M3A, TAG_M3B, TAG_M3C};
    let tags = [TAG_3ABC, TAG_M3A, TAG_M3B, TAG_M3C];
    let mut out = Vec::new();
    for h in index2_subgroups() {
        let r = h1(matrices, &h)?.result();
        if r.three_rank() == 0 {
            continue;
        }
        let tag = tags
            .iter()
            .find(|t| square_relation_subgroup(t) == h)
            .map(|t| tag_name(t))
            .unwrap_or("untagged");
        out.push((h, tag, r));
    }
    Ok(out)
}

/// H₁ = mod-2 stabilizer of c in G and H₂ = stabilizer of c in H₁.
pub fn quaternion_subgroups(matrices: &ActionMatrices, c: &[i64]) -> (Subgroup, Subgroup) {
    use super::subgroup::{mod2_stabilizer, stabilizer};
    let h1 = mod2_stabilizer(matrices, &Subgroup::full(), c);
    let h2 = stabilizer(matrices, &h1, c);
    (h1, h2)
}

/// The groups for the −3A-square case: H over Q, H_K for K = Q(√−3), H_L for
/// L = K((γ/β)²), and a generator σ of H_K/H_L.
pub struct CubicCase {
    pub h_q: Subgroup,
    pub h_k: Subgroup,
    pub h_l: Subgroup,
    pub sigma: GaloisElement,
}

pub fn cubic_case() -> Result<CubicCase> {
    use super::subgroup::{square_relation_subgroup, TAG_M3A};
    let h_q = square_relation_subgroup(&TAG_M3A);
    let h_k = h_q.filter(|g| g.chi_minus3() == 1)?;
    let h_l = h_k.filter(|g| g.c % 3 == 0)?;
    let sigma = GaloisElement::new(1, 0, 0, 1, 0);
    if !h_k.contains(&sigma) || h_l.contains(&sigma) {
        return Err(Error::Degenerate("σ must lie in H_K outside H_L".into()));
    }
    Ok(CubicCase { h_q, h_k, h_l, sigma })
}

/// Whether restriction H¹(big)[3] → H¹(small) is injective (checked on the
/// generators of the 3-part).
pub fn restriction_injective_on_3<'a>(
    big: &CocycleSpace<GaloisAction<'a>>,
    small: &CocycleSpace<GaloisAction<'a>>,
) -> bool {
    let r = big.result();
    r.invariant_factors
        .iter()
        .zip(&r.representatives)
        .filter(|(d, _)| *d % 3 == 0)
        .all(|(d, x)| {
            // scale to the 3-primary part before restricting
            let m = (*d / 3u64.pow(three_adic(*d))) as i64;
            let x3: Vec<i64> = x.iter().map(|v| v * m).collect();
            match big.restrict(&x3, small).and_then(|y| small.is_coboundary(&y)) {
                Some(zero) => !zero,
                None => false,
            }
        })
}

fn three_adic(mut d: u64) -> u32 {
    let mut k = 0;
    while d % 3 == 0 {
        d /= 3;
        k += 1;
    }
    k
}

/// Action matrices keyed by "u,a,b,c,e".
pub fn action_matrices_json(matrices: &ActionMatrices) -> Result<String> {
    let map: std::collections::BTreeMap<String, &Vec<Vec<i64>>> = super::group::all_elements()
        .iter()
        .map(|g| (format!("{},{},{},{},{}", g.u, g.a, g.b, g.c, g.e), matrices.get(g)))
        .collect();
    Ok(serde_json::to_string(&map)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_space(sigma: Vec<Vec<i64>>, order: usize) -> CohomologyResult {
        let action = CyclicAction::new(sigma, order).unwrap();
        let elements: Vec<usize> = (0..order).collect();
        CocycleSpace::new(&action, &elements, &[1]).unwrap().result()
    }

    #[test]
    fn c2_negation_on_z() {
        // f(σ) = a is a cocycle for every a (f(σ²) = a − a = 0); coboundaries are −2m
        let r = cyclic_space(vec![vec![-1]], 2);
        assert_eq!(r.invariant_factors, vec![2]);
        assert_eq!(cyclic_h1_oracle(&[vec![-1]], 2).unwrap(), vec![2]);
    }

    #[test]
    fn trivial_action_has_no_h1() {
        let r = cyclic_space(vec![vec![1]], 3);
        assert!(r.is_zero());
    }

    #[test]
    fn permutation_module_is_acyclic() {
        let sigma = vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]];
        assert!(cyclic_space(sigma.clone(), 3).is_zero());
        assert!(cyclic_h1_oracle(&sigma, 3).unwrap().is_empty());
    }

    #[test]
    fn augmentation_ideal_of_c3() {
        // σ on {x ∈ Z³ : Σx = 0}: N = 0 and det(σ − 1) = 3
        let sigma = vec![vec![0, -1], vec![1, -1]];
        assert_eq!(cyclic_space(sigma.clone(), 3).invariant_factors, vec![3]);
        assert_eq!(cyclic_h1_oracle(&sigma, 3).unwrap(), vec![3]);
    }

    #[test]
    fn saturated_coordinates_roundtrip() {
        let v = vec![vec![BigInt::from(2), BigInt::from(4), BigInt::from(0)]];
        let l = SaturatedLattice::from_spanning(&v, 3);
        assert_eq!(l.rank(), 1);
        let x = vec![BigInt::from(-3), BigInt::from(-6), BigInt::from(0)];
        let y = l.coords(&x).unwrap();
        assert_eq!(l.from_coords(&y), x);
        assert!(l.coords(&[BigInt::from(1), BigInt::from(0), BigInt::from(0)]).is_none());
    }
}
