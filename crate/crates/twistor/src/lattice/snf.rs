//! Dense integer matrices over arbitrary-precision integers, with the Smith
//! normal form, kernels, column-space bases, saturation, and integer solves
//! that the lattice computations are built on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A dense matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "dimension mismatch");
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    /// The submatrix of the listed columns.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Fraction-free (Bareiss) determinant of a square matrix.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            let tmp = a[(k, j)].clone();
                            a[(k, j)] = a[(i, j)].clone();
                            a[(i, j)] = tmp;
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let add = q * &self[(b, j)];
            self[(a, j)] += add;
        }
    }

    /// col[a] += q * col[b]
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let add = q * &self[(i, b)];
            self[(i, a)] += add;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Display for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Result of the Smith normal form `left * m * right = d`.
#[derive(Debug, Clone)]
pub struct Snf {
    /// Diagonal matrix with nonnegative entries `d1 | d2 | ...`.
    pub d: IntMat,
    /// Unimodular row transform.
    pub left: IntMat,
    /// Unimodular column transform.
    pub right: IntMat,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl Snf {
    /// The nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Replaces rows `r1`, `r2` by the unimodular combination
/// `(m11*r1 + m12*r2, m21*r1 + m22*r2)`.
fn two_row_transform(
    a: &mut IntMat,
    r1: usize,
    r2: usize,
    m11: &BigInt,
    m12: &BigInt,
    m21: &BigInt,
    m22: &BigInt,
) {
    for j in 0..a.cols {
        let x = a[(r1, j)].clone();
        let y = a[(r2, j)].clone();
        a[(r1, j)] = m11 * &x + m12 * &y;
        a[(r2, j)] = m21 * &x + m22 * &y;
    }
}

/// Column version of [`two_row_transform`].
fn two_col_transform(
    a: &mut IntMat,
    c1: usize,
    c2: usize,
    m11: &BigInt,
    m12: &BigInt,
    m21: &BigInt,
    m22: &BigInt,
) {
    for i in 0..a.rows {
        let x = a[(i, c1)].clone();
        let y = a[(i, c2)].clone();
        a[(i, c1)] = m11 * &x + m12 * &y;
        a[(i, c2)] = m21 * &x + m22 * &y;
    }
}

/// Clears the pivot row and column at stage `k`, assuming a nonzero pivot at
/// `(k, k)` and leaving everything left of / above stage `k` untouched.
/// Entries not divisible by the pivot are absorbed by a single extended-gcd
/// 2x2 transform, which replaces the pivot by the gcd; a column transform
/// can refill the pivot column, but only while strictly shrinking the pivot,
/// so the loop terminates.
fn clear_stage(a: &mut IntMat, left: &mut IntMat, right: &mut IntMat, k: usize) {
    let (rows, cols) = (a.rows, a.cols);
    loop {
        for i in k + 1..rows {
            if a[(i, k)].is_zero() {
                continue;
            }
            if (&a[(i, k)] % &a[(k, k)]).is_zero() {
                let q = -(&a[(i, k)] / &a[(k, k)]);
                a.add_row(i, k, &q);
                left.add_row(i, k, &q);
            } else {
                let e = a[(k, k)].extended_gcd(&a[(i, k)]);
                let u = &a[(k, k)] / &e.gcd;
                let v = &a[(i, k)] / &e.gcd;
                two_row_transform(a, k, i, &e.x, &e.y, &(-v.clone()), &u);
                two_row_transform(left, k, i, &e.x, &e.y, &(-v), &u);
            }
        }
        let mut pivot_shrunk = false;
        for j in k + 1..cols {
            if a[(k, j)].is_zero() {
                continue;
            }
            if (&a[(k, j)] % &a[(k, k)]).is_zero() {
                let q = -(&a[(k, j)] / &a[(k, k)]);
                a.add_col(j, k, &q);
                right.add_col(j, k, &q);
            } else {
                let e = a[(k, k)].extended_gcd(&a[(k, j)]);
                let u = &a[(k, k)] / &e.gcd;
                let v = &a[(k, j)] / &e.gcd;
                two_col_transform(a, k, j, &e.x, &e.y, &(-v.clone()), &u);
                two_col_transform(right, k, j, &e.x, &e.y, &(-v), &u);
                pivot_shrunk = true;
            }
        }
        if !pivot_shrunk && (k + 1..rows).all(|i| a[(i, k)].is_zero()) {
            break;
        }
    }
}

/// Computes the Smith normal form over the integers: unimodular `left`,
/// `right` with `left * m * right` diagonal, entries nonnegative and each
/// dividing the next. Exact arbitrary-precision arithmetic throughout.
///
/// Diagonalization runs first; the divisibility chain is then enforced
/// pairwise on the diagonal, replacing `(d_i, d_j)` by `(gcd, lcm)`. Working
/// on the diagonal keeps entries bounded by products of invariant factors.
pub fn smith_normal_form(m: &IntMat) -> Snf {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut left = IntMat::identity(rows);
    let mut right = IntMat::identity(cols);
    let n = rows.min(cols);

    let mut rank = n;
    for k in 0..n {
        // Pivot of minimal absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !a[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            rank = k;
            break;
        };
        a.swap_rows(k, pi);
        left.swap_rows(k, pi);
        a.swap_cols(k, pj);
        right.swap_cols(k, pj);
        clear_stage(&mut a, &mut left, &mut right, k);
        if a[(k, k)].is_negative() {
            a.negate_row(k);
            left.negate_row(k);
        }
    }

    // Enforce d_i | d_j for i < j: adding column j to column i makes the
    // stage-i clearing compute gcd(d_i, d_j) in place, with the complement
    // lcm(d_i, d_j) landing back on the diagonal at (j, j).
    loop {
        let mut chained = true;
        'scan: for i in 0..rank {
            for j in i + 1..rank {
                if !(&a[(j, j)] % &a[(i, i)]).is_zero() {
                    let one = BigInt::one();
                    a.add_col(i, j, &one);
                    right.add_col(i, j, &one);
                    clear_stage(&mut a, &mut left, &mut right, i);
                    if a[(i, i)].is_negative() {
                        a.negate_row(i);
                        left.negate_row(i);
                    }
                    if a[(j, j)].is_negative() {
                        a.negate_row(j);
                        left.negate_row(j);
                    }
                    chained = false;
                    break 'scan;
                }
            }
        }
        if chained {
            break;
        }
    }

    Snf {
        rank,
        d: a,
        left,
        right,
    }
}

/// Basis (as columns) of the kernel `{x : m x = 0}`. The returned lattice is
/// the full, saturated kernel.
pub fn col_kernel(m: &IntMat) -> IntMat {
    if m.rows == 0 {
        return IntMat::identity(m.cols);
    }
    let snf = smith_normal_form(m);
    let idx: Vec<usize> = (snf.rank..m.cols).collect();
    snf.right.select_columns(&idx)
}

/// Basis (as columns) of the column lattice of `m`: the first `rank` columns
/// of `m * right`.
pub fn column_space_basis(m: &IntMat) -> IntMat {
    let snf = smith_normal_form(m);
    let prod = m.mul(&snf.right);
    let idx: Vec<usize> = (0..snf.rank).collect();
    prod.select_columns(&idx)
}

/// Basis of the saturation of the column lattice of `m` inside the ambient
/// `Z^rows`: the double orthogonal-complement kernel.
pub fn saturate_columns(m: &IntMat) -> IntMat {
    let perp = col_kernel(&m.transpose());
    col_kernel(&perp.transpose())
}

/// Solves `m x = v` over the integers, returning any solution.
pub fn solve_columns(m: &IntMat, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows, v.len(), "dimension mismatch");
    let snf = smith_normal_form(m);
    let uv = snf.left.mul_vec(v);
    let mut y = vec![BigInt::zero(); m.cols];
    for (i, uvi) in uv.iter().enumerate() {
        if i < snf.rank {
            let (q, r) = uvi.div_rem(&snf.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            if i < m.cols {
                y[i] = q;
            }
        } else if !uvi.is_zero() {
            return None;
        }
    }
    Some(snf.right.mul_vec(&y))
}

/// Whether `v` lies in the column lattice of `m`.
pub fn in_column_lattice(m: &IntMat, v: &[BigInt]) -> bool {
    solve_columns(m, v).is_some()
}

/// Whether two column lattices in the same ambient space are equal,
/// by mutual membership of generators.
pub fn lattices_equal(a: &IntMat, b: &IntMat) -> bool {
    assert_eq!(a.rows, b.rows, "dimension mismatch");
    (0..b.cols).all(|j| in_column_lattice(a, &b.column(j)))
        && (0..a.cols).all(|j| in_column_lattice(b, &a.column(j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn snf_identity() {
        let m = IntMat::identity(3);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, m);
        assert_eq!(snf.rank, 3);
    }

    #[test]
    fn snf_known_matrix() {
        // gcd of entries is 2 and |det| = 8, so the invariants are (2, 4).
        let m = IntMat::from_rows(&[vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors(), vec![big(2), big(4)]);
        assert_eq!(snf.left.mul(&m).mul(&snf.right), snf.d);
        assert_eq!(snf.left.determinant().abs(), big(1));
        assert_eq!(snf.right.determinant().abs(), big(1));
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMat::zeros(2, 3);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank, 0);
        assert!(snf.d.is_zero());
    }

    #[test]
    fn snf_classic_example() {
        let m = IntMat::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors(), vec![big(2), big(2), big(156)]);
        assert_eq!(snf.left.mul(&m).mul(&snf.right), snf.d);
    }

    #[test]
    fn snf_rectangular_and_divisibility() {
        let m = IntMat::from_rows(&[vec![6, 10, 15], vec![10, 15, 6]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.left.mul(&m).mul(&snf.right), snf.d);
        let f = snf.invariant_factors();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn kernel_and_solve() {
        let m = IntMat::from_rows(&[vec![1, 1]]);
        let k = col_kernel(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        // Kernel generated by (1, -1) up to sign.
        assert_eq!(k[(0, 0)].abs(), big(1));
        assert_eq!(&k[(0, 0)] + &k[(1, 0)], big(0));

        let m = IntMat::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(
            solve_columns(&m, &[big(4), big(9)]),
            Some(vec![big(2), big(3)])
        );
        assert_eq!(solve_columns(&m, &[big(1), big(0)]), None);
    }

    #[test]
    fn saturation_of_index_two_sublattice() {
        let m = IntMat::from_rows(&[vec![2]]);
        let sat = saturate_columns(&m);
        assert_eq!(sat.cols(), 1);
        assert_eq!(sat[(0, 0)].abs(), big(1));

        // Saturating twice changes nothing.
        let again = saturate_columns(&sat);
        assert!(lattices_equal(&sat, &again));
    }

    #[test]
    fn column_space_basis_spans() {
        let m = IntMat::from_rows(&[vec![2, 4, 6], vec![1, 2, 3]]);
        let b = column_space_basis(&m);
        assert_eq!(b.cols(), 1);
        assert!(lattices_equal(&b, &m));
    }

    #[test]
    fn kernel_of_empty_matrix_is_everything() {
        let m = IntMat::zeros(0, 3);
        let k = col_kernel(&m);
        assert_eq!(k, IntMat::identity(3));
    }

    #[test]
    fn snf_with_entries_beyond_machine_range() {
        // An 8x8 whose determinant overflows i64; everything stays exact.
        let mut m = IntMat::zeros(8, 8);
        for i in 0..8 {
            for j in 0..8 {
                m[(i, j)] = BigInt::from((i as i64 + 2).pow(3) * 999_983 + j as i64 * 37);
            }
            m[(i, i)] += BigInt::from(1_000_003i64).pow(3);
        }
        let snf = smith_normal_form(&m);
        assert_eq!(snf.left.mul(&m).mul(&snf.right), snf.d);
        assert_eq!(snf.left.determinant().abs(), big(1));
        assert_eq!(snf.right.determinant().abs(), big(1));
        let det = m.determinant().abs();
        assert!(det > BigInt::from(i64::MAX));
        let product: BigInt = snf.invariant_factors().iter().product();
        assert_eq!(det, product);
    }
}
