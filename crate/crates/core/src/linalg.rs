//! Integer and field linear algebra: Smith and Hermite normal forms,
//! integer kernels, and Gaussian elimination over any [`Field`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Field, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, a: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.a[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        IntMatrix { rows: rows.len(), cols, a: rows }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            cols,
        )
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<BigInt>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.a[i][j] = c[i].clone();
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.a[i][j].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.a[j][i] = self.a[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.a[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.a[i][j] += &self.a[i][k] * &other.a[k][j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        self.a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.a.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }
}

/// `u * m * v == d` with `d` diagonal in a divisor chain and `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.a[i][i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d.a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d.a[i][j].abs() < d.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_signs(u, d, v);
            };
            d.a.swap(t, pi);
            u.a.swap(t, pi);
            for row in d.a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.a.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..rows {
                if d.a[i][t].is_zero() {
                    continue;
                }
                let q = d.a[i][t].div_floor(&d.a[t][t]);
                row_axpy(&mut d.a, i, t, &q);
                row_axpy(&mut u.a, i, t, &q);
                clean &= d.a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if d.a[t][j].is_zero() {
                    continue;
                }
                let q = d.a[t][j].div_floor(&d.a[t][t]);
                col_axpy(&mut d.a, j, t, &q);
                col_axpy(&mut v.a, j, t, &q);
                clean &= d.a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.a[i][j].is_multiple_of(&d.a[t][t])));
            match offender {
                Some(i) => {
                    let one = -BigInt::one();
                    row_axpy(&mut d.a, t, i, &one);
                    row_axpy(&mut u.a, t, i, &one);
                }
                None => break,
            }
        }
    }
    finish_signs(u, d, v)
}

fn finish_signs(mut u: IntMatrix, mut d: IntMatrix, v: IntMatrix) -> SmithForm {
    for t in 0..d.rows.min(d.cols) {
        if d.a[t][t].is_negative() {
            for x in d.a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u.a[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    SmithForm { u, d, v }
}

/// `rows[dst] -= q * rows[src]`
fn row_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let src_row = a[src].clone();
    for (x, y) in a[dst].iter_mut().zip(src_row.iter()) {
        *x -= q * y;
    }
}

/// `col[dst] -= q * col[src]`
fn col_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let s = row[src].clone();
        row[dst] -= q * s;
    }
}

/// Hermite normal form of the lattice spanned by `rows`: echelon rows with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped, so the result is a canonical lattice basis.
pub fn hermite_rows(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut p = 0;
    for col in 0..ncols {
        loop {
            let mut best: Option<usize> = None;
            for i in p..a.len() {
                if !a[i][col].is_zero()
                    && best.is_none_or(|b| a[i][col].abs() < a[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(p, b);
            let mut clean = true;
            for i in p + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[p][col]);
                row_axpy(&mut a, i, p, &q);
                clean &= a[i][col].is_zero();
            }
            if clean {
                break;
            }
        }
        if p < a.len() && !a[p][col].is_zero() {
            if a[p][col].is_negative() {
                for x in a[p].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..p {
                let q = a[i][col].div_floor(&a[p][col]);
                if !q.is_zero() {
                    row_axpy(&mut a, i, p, &q);
                }
            }
            p += 1;
        }
    }
    a.truncate(p);
    a
}

/// A basis of the integer kernel `{x ∈ ℤ^n : m x = 0}`; the span is saturated.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    if m.rows == 0 {
        return IntMatrix::identity(m.cols).a;
    }
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols).map(|j| snf.v.column(j)).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>], ncols: usize) -> usize {
    let mut work = m.to_vec();
    rref(&mut work, ncols).len()
}

/// Basis of `{x : m x = 0}`; one vector per free column, with a one in that
/// column and zeros in the other free columns.
pub fn nullspace<F: Field>(m: &[Vec<F>], ncols: usize, zero: &F) -> Vec<Vec<F>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); ncols];
        v[free] = zero.one_like();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = work[r][free].neg();
        }
        basis.push(v);
    }
    basis
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solution<F> {
    Unique(Vec<F>),
    Inconsistent,
    /// Consistent, but the solution space has the given positive dimension.
    Underdetermined(usize),
}

/// Solves the (possibly overdetermined) system `a x = b`.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F], ncols: usize) -> Solution<F> {
    assert_eq!(a.len(), b.len());
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.contains(&ncols) {
        return Solution::Inconsistent;
    }
    if pivots.len() < ncols {
        return Solution::Underdetermined(ncols - pivots.len());
    }
    Solution::Unique((0..ncols).map(|r| aug[r][ncols].clone()).collect())
}

pub fn det<F: Field>(m: &[Vec<F>], one: &F) -> F {
    let n = m.len();
    let mut a = m.to_vec();
    let mut acc = one.clone();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return one.zero_like();
        };
        if p != c {
            a.swap(p, c);
            acc = acc.neg();
        }
        acc = acc.mul(&a[c][c]);
        let inv = a[c][c].inv();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            let pivot_row = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(pivot_row.iter()).skip(c) {
                *x = x.sub(&f.mul(y));
            }
        }
    }
    acc
}

pub fn to_rational_rows(m: &IntMatrix) -> Vec<Vec<Rational>> {
    m.a.iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn im(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn diag(d: &[i64]) -> Vec<BigInt> {
        d.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_small_cases() {
        assert_eq!(smith_normal_form(&im(&[vec![2]])).diagonal(), diag(&[2]));
        assert_eq!(smith_normal_form(&im(&[vec![1, 0], vec![0, 1]])).diagonal(), diag(&[1, 1]));
        let s = smith_normal_form(&im(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal(), diag(&[2, 4]));
        let m = im(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    }

    #[test]
    fn snf_rectangular_and_zero() {
        let m = im(&[vec![0, 0, 0], vec![0, 0, 0]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.rank(), 0);
        let m = im(&[vec![2, 3, 5]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal(), diag(&[1]));
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = hermite_rows(&[diag(&[1, 1]), diag(&[1, -1])], 2);
        let b = hermite_rows(&[diag(&[2, 0]), diag(&[1, 1]), diag(&[3, -1])], 2);
        assert_eq!(a, b);
        assert_eq!(a, vec![diag(&[1, 1]), diag(&[0, 2])]);
        assert!(hermite_rows(&[diag(&[0, 0])], 2).is_empty());
    }

    #[test]
    fn kernel_of_row() {
        let k = integer_kernel(&im(&[vec![1, 1, 1]]));
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v.iter().sum::<BigInt>(), BigInt::zero());
        }
        // saturated: the kernel lattice has index 1 in its rational span
        let h = hermite_rows(&k, 3);
        assert_eq!(h, vec![diag(&[1, 0, -1]), diag(&[0, 1, -1])]);
    }

    #[test]
    fn bareiss_matches_field_det() {
        let m = im(&[vec![2, -1, 3], vec![0, 4, 1], vec![5, 2, -2]]);
        let q = to_rational_rows(&m);
        assert_eq!(Rational::from_integer(m.det()), det(&q, &rat_int(1)));
        assert_eq!(m.det(), BigInt::from(-85));
    }

    #[test]
    fn solve_outcomes() {
        let a = vec![vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(-1)], vec![rat_int(2), rat_int(0)]];
        let b = vec![rat_int(3), rat_int(1), rat_int(4)];
        assert_eq!(solve(&a, &b, 2), Solution::Unique(vec![rat_int(2), rat_int(1)]));
        let b = vec![rat_int(3), rat_int(1), rat_int(5)];
        assert_eq!(solve(&a, &b, 2), Solution::Inconsistent);
        let a = vec![vec![rat_int(1), rat_int(1)]];
        assert_eq!(solve(&a, &[rat(1, 2)], 2), Solution::Underdetermined(1));
    }

    #[test]
    fn nullspace_vectors_are_solutions() {
        let m = vec![vec![rat_int(1), rat_int(2), rat_int(3)], vec![rat_int(2), rat_int(4), rat_int(6)]];
        let ns = nullspace(&m, 3, &rat_int(0));
        assert_eq!(ns.len(), 2);
        for v in ns {
            let r: Rational = m[0].iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(Zero::is_zero(&r));
        }
    }
}
