//! Integer matrices: products, determinants, Smith normal form, row spaces,
//! kernels and lattice saturation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let conv: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut m = Self::from_rows(&conv);
        if rows.is_empty() {
            m.cols = 0;
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, BigInt::from(e));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<BigInt> {
        self.row(r).to_vec()
    }

    pub fn col_vec(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (r, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o += x * self.get(r, c);
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Stacks rows of `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        if self.rows == 0 {
            return other.clone();
        }
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| self.row_vec(r)).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        let mut rs = RowSpace::new(self.cols);
        for r in 0..self.rows {
            rs.insert(self.row_vec(r));
        }
        rs.rank()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(src, c) * q;
            if !v.is_zero() {
                self.data[dst * self.cols + c] += v;
            }
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, src) * q;
            if !v.is_zero() {
                self.data[r * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = -&self.data[idx];
        }
    }
}

/// Smith normal form S = U·A·V with U, V unimodular; `v_inv` is V⁻¹.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    /// Nonzero diagonal entries (the invariant factors, positive).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.s.rows.min(self.s.cols);
        (0..n)
            .map(|i| self.s.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Quotient rounded to nearest, so remainders stay at most |b|/2.
fn nearest_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    let twice: BigInt = r * 2;
    if twice.abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let mut s = a.clone();
    let m = s.rows;
    let n = s.cols;
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut vi = IntMatrix::identity(n);

    // Column ops on S are mirrored on V; the inverse op is applied to V⁻¹ as a row op.
    for t in 0..m.min(n) {
        loop {
            // pivot: smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for r in t..m {
                for c in t..n {
                    let x = s.get(r, c);
                    if !x.is_zero() {
                        let better = match best {
                            None => true,
                            Some((br, bc)) => x.abs() < s.get(br, bc).abs(),
                        };
                        if better {
                            best = Some((r, c));
                        }
                    }
                }
            }
            let Some((pr, pc)) = best else {
                return finish(s, u, v, vi);
            };
            s.swap_rows(t, pr);
            u.swap_rows(t, pr);
            s.swap_cols(t, pc);
            v.swap_cols(t, pc);
            vi.swap_rows(t, pc);

            let mut dirty = false;
            for r in t + 1..m {
                if s.get(r, t).is_zero() {
                    continue;
                }
                let q = -nearest_div(s.get(r, t), s.get(t, t));
                s.add_row(r, t, &q);
                u.add_row(r, t, &q);
                if !s.get(r, t).is_zero() {
                    dirty = true;
                }
            }
            for c in t + 1..n {
                if s.get(t, c).is_zero() {
                    continue;
                }
                let q = -nearest_div(s.get(t, c), s.get(t, t));
                s.add_col(c, t, &q);
                v.add_col(c, t, &q);
                // V⁻¹: row t -= q row c
                vi.add_row(t, c, &(-&q));
                if !s.get(t, c).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let p = s.get(t, t).clone();
            let mut bad_row = None;
            'outer: for r in t + 1..m {
                for c in t + 1..n {
                    if !(s.get(r, c) % &p).is_zero() {
                        bad_row = Some(r);
                        break 'outer;
                    }
                }
            }
            match bad_row {
                Some(r) => {
                    let one = BigInt::one();
                    s.add_row(t, r, &one);
                    u.add_row(t, r, &one);
                }
                None => {
                    if s.get(t, t).is_negative() {
                        s.negate_row(t);
                        u.negate_row(t);
                    }
                    break;
                }
            }
        }
    }
    finish(s, u, v, vi)
}

fn finish(s: IntMatrix, u: IntMatrix, v: IntMatrix, v_inv: IntMatrix) -> Smith {
    Smith { s, u, v, v_inv }
}

/// Rational row space kept in echelon form with primitive integer rows.
#[derive(Clone, Debug)]
pub struct RowSpace {
    ncols: usize,
    /// (pivot column, row) sorted by pivot column.
    rows: Vec<(usize, Vec<BigInt>)>,
}

fn make_primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    let lead_neg = v.iter().find(|x| !x.is_zero()).map_or(false, |x| x.is_negative());
    if lead_neg {
        g = -g;
    }
    if !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        RowSpace {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `v` against the current rows; returns the remainder (primitive).
    pub fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ncols);
        for (pc, row) in &self.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let g = row[*pc].gcd(&v[*pc]);
            let a = &row[*pc] / &g;
            let b = &v[*pc] / &g;
            for (x, y) in v.iter_mut().zip(row) {
                *x = &a * &*x - &b * y;
            }
            make_primitive(&mut v);
        }
        v
    }

    /// Inserts `v`; returns true when the rank grew.
    pub fn insert(&mut self, v: Vec<BigInt>) -> bool {
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        make_primitive(&mut r);
        // clear the new pivot column from earlier rows
        for (_, row) in self.rows.iter_mut() {
            if row[pc].is_zero() {
                continue;
            }
            let g = r[pc].gcd(&row[pc]);
            let a = &r[pc] / &g;
            let b = &row[pc] / &g;
            for (x, y) in row.iter_mut().zip(&r) {
                *x = &a * &*x - &b * y;
            }
            make_primitive(row);
        }
        let pos = self.rows.partition_point(|(c, _)| *c < pc);
        self.rows.insert(pos, (pc, r));
        true
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    /// A basis of the rational kernel {x : row·x = 0 for all rows}, integral vectors.
    pub fn kernel_vectors(&self) -> Vec<Vec<BigInt>> {
        let pivots: Vec<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if pivots.contains(&free) {
                continue;
            }
            // rows are fully reduced on pivot columns, so each pivot variable is
            // determined by the free ones: p_i * x_{c_i} = -row_i[free]
            let mut den = BigInt::one();
            for (pc, row) in &self.rows {
                den = den.lcm(&row[*pc]);
            }
            let mut x = vec![BigInt::zero(); self.ncols];
            x[free] = den.clone();
            for (pc, row) in &self.rows {
                x[*pc] = -(&row[free] * &den) / &row[*pc];
            }
            make_primitive(&mut x);
            out.push(x);
        }
        out
    }
}

/// Integer basis of the lattice (span_Q of `vectors`) ∩ Zⁿ.
pub fn saturate(vectors: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_rows(vectors);
    let snf = smith_normal_form(&m);
    debug_assert_eq!(m.cols(), ncols);
    (0..snf.rank()).map(|i| snf.v_inv.row_vec(i)).collect()
}

/// Integer basis of {x ∈ Zⁿ : A x = 0}.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let mut rs = RowSpace::new(a.cols());
    for r in 0..a.rows() {
        rs.insert(a.row_vec(r));
    }
    saturate(&rs.kernel_vectors(), a.cols())
}

/// Solves x·B = v for x over Q, where the rows of B are linearly independent.
pub fn solve_row_combination(basis: &IntMatrix, v: &[BigInt]) -> Option<Vec<Rational>> {
    // normal equations (B Bᵀ) x = B v, exact over Q
    let k = basis.rows();
    let bbt = basis.mul(&basis.transpose());
    let bv = basis.mul_vec(v);
    let mut m: Vec<Vec<Rational>> = (0..k)
        .map(|i| (0..k).map(|j| Rational::from_integer(bbt.get(i, j).clone())).collect())
        .collect();
    let mut rhs: Vec<Rational> = bv.into_iter().map(Rational::from_integer).collect();
    let x = super::tower::solve_dense(&mut m, &mut rhs)?;
    // verify
    let mut recon = vec![Rational::zero(); basis.cols()];
    for (i, xi) in x.iter().enumerate() {
        for (c, rc) in recon.iter_mut().enumerate() {
            *rc += xi * Rational::from_integer(basis.get(i, c).clone());
        }
    }
    let ok = recon
        .iter()
        .zip(v)
        .all(|(a, b)| *a == Rational::from_integer(b.clone()));
    if ok {
        Some(x)
    } else {
        None
    }
}

/// Solves M x = b over Q for square nonsingular M.
pub fn solve_rational(m: &IntMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| Rational::from_integer(m.get(i, j).clone())).collect())
        .collect();
    let mut rhs = b.to_vec();
    super::tower::solve_dense(&mut a, &mut rhs)
}

/// Adjugate-free inverse of a unimodular or general integer matrix, over Q.
pub fn inverse_rational(m: &IntMatrix) -> Option<Vec<Vec<Rational>>> {
    let n = m.rows();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        cols.push(solve_rational(m, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Basis of {x ∈ F_p^n : A x = 0} for a small prime p, entries in [0, p).
pub fn kernel_mod_p(rows: &[Vec<i64>], ncols: usize, p: i64) -> Vec<Vec<i64>> {
    let inv = |a: i64| -> i64 {
        let mut r = 1i64;
        let mut b = a.rem_euclid(p);
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let iv = inv(m[row][col]);
        for x in m[row].iter_mut() {
            *x = *x * iv % p;
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..ncols {
                    m[r][c] = (m[r][c] - f * m[row][c]).rem_euclid(p);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut x = vec![0i64; ncols];
        x[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = (-m[r][free]).rem_euclid(p);
        }
        out.push(x);
    }
    out
}

/// Basis of the row lattice spanned by `gens` (nonzero rows of S·V⁻¹).
pub fn lattice_basis(gens: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(gens);
    let d = snf.invariant_factors();
    d.iter()
        .enumerate()
        .map(|(i, di)| snf.v_inv.row(i).iter().map(|x| x * di).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_smith(a: &IntMatrix) {
        let snf = smith_normal_form(a);
        assert_eq!(snf.u.mul(a).mul(&snf.v), snf.s);
        assert!(snf.u.det().abs().is_one());
        assert!(snf.v.det().abs().is_one());
        assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(a.cols()));
        let d = snf.invariant_factors();
        for w in d.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    assert!(snf.s.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn small_examples() {
        let snf = smith_normal_form(&IntMatrix::identity(4));
        assert_eq!(snf.s, IntMatrix::identity(4));
        let snf = smith_normal_form(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(snf.s, IntMatrix::diagonal(&[1, 6]));
    }

    #[test]
    fn kernel_mod_small_prime() {
        let k = kernel_mod_p(&[vec![1, 1, 0], vec![0, 1, 1]], 3, 2);
        assert_eq!(k, vec![vec![1, 1, 1]]);
        let k = kernel_mod_p(&[vec![3, 6, 9]], 3, 3);
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn determinant() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 1, 0], vec![1, 3, 4], vec![0, 5, -1]]);
        assert_eq!(m.det(), BigInt::from(2 * (-3 - 20) - (-1)));
    }

    #[test]
    fn kernel_and_saturation() {
        let a = IntMatrix::from_i64_rows(&[vec![2, 4, 6], vec![1, 2, 3]]);
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        // saturation of 2Z ⊕ 0 is Z ⊕ 0
        let s = saturate(&[vec![BigInt::from(2), BigInt::from(0)]], 2);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![BigInt::one(), BigInt::zero()]);
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed), failure_persistence: None, ..ProptestConfig::default() })]
        #[test]
        fn smith_recomposes(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(-9i64..10, 36)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|r| (0..cols).map(|c| seed[r * 6 + c]).collect()).collect();
            let a = IntMatrix::from_i64_rows(&data);
            check_smith(&a);
        }
    }
}
