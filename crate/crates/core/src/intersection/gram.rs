//! Gram matrices, discriminant groups and the projection-formula suite.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::engine::Engine;
use crate::error::{Error, Result};
use crate::exact::field::Field;
use crate::exact::matrix::{smith_normal_form, IntMatrix};
use crate::geometry::divisor::Divisor;

/// A symmetric pairing matrix with labels for its basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub labels: Vec<String>,
    pub matrix: IntMatrix,
}

impl GramMatrix {
    pub fn det(&self) -> BigInt {
        self.matrix.det()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix.get(i, j).to_i64().unwrap()
    }

    pub fn pair(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let gb = self.matrix.mul_vec(b);
        a.iter().zip(&gb).map(|(x, y)| x * y).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: GramMatrix = serde_json::from_str(s)?;
        if !g.matrix.is_symmetric() || g.matrix.rows() != g.labels.len() {
            return Err(Error::Degenerate("imported Gram matrix is not symmetric".into()));
        }
        Ok(g)
    }

    /// (positive, negative) eigenvalue counts, by Sylvester's law on an
    /// exact LDLᵀ over Q.
    pub fn signature(&self) -> (usize, usize) {
        use crate::exact::rational::Rational;
        let n = self.dim();
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| Rational::from_integer(self.matrix.get(i, j).clone())).collect())
            .collect();
        let (mut pos, mut neg) = (0, 0);
        let mut k = 0;
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            // diagonal pivot if any; otherwise combine two indices
            if let Some(pi) = active.iter().position(|&i| !a[i][i].is_zero()) {
                let p = active.remove(pi);
                let d = a[p][p].clone();
                if d.is_positive() {
                    pos += 1;
                } else {
                    neg += 1;
                }
                for &i in &active {
                    let f = &a[i][p] / &d;
                    for &j in &active {
                        let v = &a[i][j] - &f * &a[p][j];
                        a[i][j] = v;
                    }
                }
            } else {
                let found = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero());
                let Some((i, j)) = found else { break };
                // replace e_i by e_i + e_j: a[i][i] becomes 2 a[i][j] ≠ 0
                for &m in &active.clone() {
                    let v = &a[i][m] + &a[j][m];
                    a[i][m] = v;
                }
                for &m in &active.clone() {
                    let v = &a[m][i] + &a[m][j];
                    a[m][i] = v;
                }
            }
            k += 1;
            if k > 4 * n + 4 {
                break;
            }
        }
        (pos, neg)
    }
}

/// Pairs every divisor with every other; diagonal entries come from the
/// engine too (−2 for equal curves). Both orders are computed and compared.
pub fn gram_matrix<F: Field>(engine: &Engine<F>, divisors: &[Divisor<F::Elem>]) -> Result<GramMatrix> {
    let n = divisors.len();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let a = engine.intersection_number(&divisors[i], &divisors[j])?;
            if i != j {
                let b = engine.intersection_number(&divisors[j], &divisors[i])?;
                if a != b {
                    return Err(Error::Degenerate(format!(
                        "asymmetric pairing {}·{} = {} but {}·{} = {}",
                        divisors[i].label, divisors[j].label, a, divisors[j].label, divisors[i].label, b
                    )));
                }
            }
            m.set(i, j, BigInt::from(a));
            m.set(j, i, BigInt::from(a));
        }
    }
    Ok(GramMatrix {
        labels: divisors.iter().map(|d| d.label.clone()).collect(),
        matrix: m,
    })
}

/// Pairings of one divisor against a list.
pub fn pairing_vector<F: Field>(
    engine: &Engine<F>,
    d: &Divisor<F::Elem>,
    basis: &[Divisor<F::Elem>],
) -> Result<Vec<i64>> {
    basis.iter().map(|b| engine.intersection_number(d, b)).collect()
}

/// Invariant factors (> 1) of coker G.
pub fn discriminant_group(g: &IntMatrix) -> Result<Vec<BigInt>> {
    if g.det().is_zero() {
        return Err(Error::Degenerate("degenerate Gram matrix".into()));
    }
    let snf = smith_normal_form(g);
    Ok(snf.invariant_factors().into_iter().filter(|d| !d.is_one()).collect())
}

/// True iff the group with these invariant factors needs at most two generators.
pub fn nikulin_two_generator_test(factors: &[BigInt]) -> bool {
    factors.iter().filter(|d| !d.is_one()).count() <= 2
}

/// Primary decomposition of ⊕ Z/d_i as a sorted list of prime powers.
pub fn primary_parts(factors: &[BigInt]) -> Vec<u64> {
    let mut out = Vec::new();
    for d in factors {
        let mut n = d.to_u64().expect("small invariant factor");
        let mut p = 2;
        while n > 1 {
            if n % p == 0 {
                let mut q = 1;
                while n % p == 0 {
                    n /= p;
                    q *= p;
                }
                out.push(q);
            }
            p += 1;
        }
    }
    out.sort();
    out
}

/// Projection formula: for a component D over a line or conic with opposite
/// sheet D⁻, (D + D⁻)·C = deg(plane curve of D)·deg(plane curve of C).
pub fn projection_formula_check<F: Field>(
    engine: &Engine<F>,
    pairs: &[(Divisor<F::Elem>, Divisor<F::Elem>)],
    others: &[Divisor<F::Elem>],
) -> Result<()> {
    for (d, dm) in pairs {
        let self_pair = engine.intersection_number(d, dm)?;
        let expect_self = 3 * d.plane_degree() as i64;
        if self_pair != expect_self {
            return Err(Error::Degenerate(format!(
                "{}·{} = {}, expected {}",
                d.label, dm.label, self_pair, expect_self
            )));
        }
        for c in others {
            let v = engine.intersection_number(d, c)? + engine.intersection_number(dm, c)?;
            let expect = (d.plane_degree() * c.plane_degree()) as i64;
            if v != expect {
                return Err(Error::Degenerate(format!(
                    "({} + {})·{} = {}, expected {}",
                    d.label, dm.label, c.label, v, expect
                )));
            }
        }
    }
    Ok(())
}

/// The opposite sheet {q = 0, w = −W}.
pub fn opposite_sheet<F: Field>(engine: &Engine<F>, d: &Divisor<F::Elem>) -> Divisor<F::Elem> {
    Divisor {
        label: format!("{}-", d.label),
        plane: d.plane.clone(),
        w: engine.ring.neg(&d.w),
        base_point: d.base_point.clone(),
    }
}

pub fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn has_minus_two_diagonal(g: &GramMatrix) -> bool {
    g.matrix.is_symmetric() && (0..g.dim()).all(|i| g.matrix.get(i, i) == &BigInt::from(-2))
}
