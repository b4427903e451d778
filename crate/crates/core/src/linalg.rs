//! Exact dense linear algebra over the rationals.
//!
//! Everything here works on [`Rational`] entries, so ranks and kernels are
//! exact. Pivoting is deterministic: the first nonzero entry of a column
//! (scanning rows top to bottom) becomes the pivot.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`, reduced.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from row vectors; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols,
            entries,
        })
    }

    /// Integer matrix from nested slices. Panics on ragged input.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.as_ref().len(), cols, "ragged integer matrix");
                r.as_ref().iter().map(|&x| rat(x)).collect()
            })
            .collect();
        Matrix::from_rows(cols, data).expect("row lengths checked")
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let mut m = Matrix::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `m · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    /// `r · m` for a row vector `r`.
    pub fn vec_mul(&self, r: &[Rational]) -> Result<Vec<Rational>> {
        if r.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: r.len(),
            });
        }
        let mut out = vec![Rational::zero(); self.cols];
        for (i, ri) in r.iter().enumerate() {
            if ri.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(self.row(i)) {
                if !e.is_zero() {
                    *o += ri * e;
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// `row[target] -= factor * row[source]`
    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: &Rational) {
        for c in 0..self.cols {
            let s = &self.entries[source * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let delta = factor * s;
            self.entries[target * self.cols + c] -= delta;
        }
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &self.entries[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &mut self.entries[r * self.cols + c]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for (i, e) in self.row(r).iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Result of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivot_columns: Vec<usize>,
    pub rank: usize,
}

/// Reduced row-echelon form by forward elimination followed by
/// back-substitution.
pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut pivot_row = 0;

    // forward pass: unit pivots, zeros below
    for col in 0..a.cols {
        if pivot_row == a.rows {
            break;
        }
        let Some(found) = (pivot_row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(pivot_row, found);
        let inv = a[(pivot_row, col)].recip();
        for c in col..a.cols {
            let v = &a.entries[pivot_row * a.cols + c];
            if !v.is_zero() {
                a.entries[pivot_row * a.cols + c] = v * &inv;
            }
        }
        for r in pivot_row + 1..a.rows {
            if a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            a.sub_row_multiple(r, pivot_row, &factor);
        }
        pivots.push(col);
        pivot_row += 1;
    }

    // back-substitution: zeros above each pivot
    for (i, &col) in pivots.iter().enumerate().rev() {
        for r in 0..i {
            if a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            a.sub_row_multiple(r, i, &factor);
        }
    }

    let rank = pivots.len();
    Rref {
        reduced: a,
        pivot_columns: pivots,
        rank,
    }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).rank
}

/// Basis of `{ v : m·v = 0 }`, one vector per free column.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Rational>> {
    let Rref {
        reduced,
        pivot_columns,
        ..
    } = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivot_columns {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (row, &p) in pivot_columns.iter().enumerate() {
            let e = &reduced[(row, free)];
            if !e.is_zero() {
                v[p] = -e.clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Basis of `{ r : r·m = 0 }`.
pub fn left_kernel_basis(m: &Matrix) -> Vec<Vec<Rational>> {
    kernel_basis(&m.transpose())
}

/// Whether `v` is a rational combination of `basis`.
pub fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> Result<bool> {
    for b in basis {
        if b.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                found: b.len(),
            });
        }
    }
    if basis.is_empty() {
        return Ok(v.iter().all(Zero::is_zero));
    }
    let without = Matrix::from_rows(v.len(), basis.to_vec())?;
    let mut rows = basis.to_vec();
    rows.push(v.to_vec());
    let with = Matrix::from_rows(v.len(), rows)?;
    Ok(rank(&without) == rank(&with))
}

/// Canonical basis of the row space spanned by `rows`, in RREF with zero
/// rows dropped. Two sets of vectors span the same space iff their
/// canonical bases are equal.
pub fn row_space_basis(len: usize, rows: &[Vec<Rational>]) -> Result<Rref> {
    let m = Matrix::from_rows(len, rows.to_vec())?;
    let Rref {
        reduced,
        pivot_columns,
        rank,
    } = rref(&m);
    let kept = (0..rank).map(|r| reduced.row(r).to_vec()).collect();
    Ok(Rref {
        reduced: Matrix::from_rows(len, kept)?,
        pivot_columns,
        rank,
    })
}

/// Canonical complement of `sub` inside `whole`: vectors of `whole` are
/// reduced to vanish on the pivot columns of `sub`, then brought to RREF.
/// The result depends only on the two subspaces, not on the bases given.
pub fn quotient_basis(
    len: usize,
    whole: &[Vec<Rational>],
    sub: &[Vec<Rational>],
) -> Result<Vec<Vec<Rational>>> {
    let sub = row_space_basis(len, sub)?;
    let mut reduced = Vec::with_capacity(whole.len());
    for w in whole {
        if w.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: w.len(),
            });
        }
        let mut v = w.clone();
        for (i, &p) in sub.pivot_columns.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, s) in v.iter_mut().zip(sub.reduced.row(i)) {
                if !s.is_zero() {
                    *x -= &factor * s;
                }
            }
        }
        reduced.push(v);
    }
    let basis = row_space_basis(len, &reduced)?;
    Ok((0..basis.rank)
        .map(|r| basis.reduced.row(r).to_vec())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rref_of_singular_diagonal() {
        let r = rref(&Matrix::from_i64(&[[2, 0], [0, 0]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivot_columns, vec![0]);
        assert_eq!(r.reduced, Matrix::from_i64(&[[1, 0], [0, 0]]));
    }

    #[test]
    fn oscillator_operator_rank_and_kernels() {
        let a = Matrix::diagonal(&ints(&[3, 0, -1, 0, 3]));
        assert_eq!(rank(&a), 3);
        let e = |i: usize| {
            let mut v = vec![rat(0); 5];
            v[i] = rat(1);
            v
        };
        assert_eq!(kernel_basis(&a), vec![e(1), e(3)]);
        assert_eq!(left_kernel_basis(&a), vec![e(1), e(3)]);
    }

    #[test]
    fn kernel_of_rank_one_symmetric() {
        let k = kernel_basis(&Matrix::from_i64(&[[1, 1], [1, 1]]));
        assert_eq!(k, vec![ints(&[-1, 1])]);
    }

    #[test]
    fn full_rank_has_trivial_kernels() {
        assert!(kernel_basis(&Matrix::identity(3)).is_empty());
        assert!(left_kernel_basis(&Matrix::from_i64(&[[1, 2], [3, 4]])).is_empty());
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        assert_eq!(rank(&Matrix::zeros(0, 0)), 0);
        assert_eq!(rank(&Matrix::zeros(0, 3)), 0);
        assert_eq!(kernel_basis(&Matrix::zeros(0, 2)).len(), 2);
        assert_eq!(left_kernel_basis(&Matrix::zeros(2, 0)).len(), 2);
    }

    #[test]
    fn span_membership() {
        assert!(in_span(&[ints(&[1, 0])], &ints(&[3, 0])).unwrap());
        assert!(in_span(&[], &ints(&[0, 0])).unwrap());
        assert!(!in_span(&[], &ints(&[1, 0])).unwrap());
        // 5 = a + b, 2 = a - b  =>  a = 7/2, b = 3/2
        assert!(in_span(&[ints(&[1, 1]), ints(&[1, -1])], &ints(&[5, 2])).unwrap());
        assert!(!in_span(&[ints(&[1, 1])], &ints(&[5, 2])).unwrap());
    }

    #[test]
    fn span_dimension_mismatch_is_an_error() {
        assert_eq!(
            in_span(&[ints(&[1, 0, 0])], &ints(&[1, 0])),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn rational_entries_stay_exact() {
        let m = Matrix::from_rows(
            2,
            vec![
                vec![ratio(1, 3), ratio(2, 3)],
                vec![ratio(1, 6), ratio(1, 3)],
            ],
        )
        .unwrap();
        let r = rref(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(r.reduced.row(0), &[rat(1), rat(2)][..]);
    }

    #[test]
    fn quotient_is_basis_independent() {
        let whole = [ints(&[1, 0, 0]), ints(&[0, 1, 0])];
        let a = quotient_basis(3, &whole, &[ints(&[1, 1, 0])]).unwrap();
        let b = quotient_basis(
            3,
            &[ints(&[1, 1, 0]), ints(&[1, -1, 0])],
            &[ints(&[2, 2, 0])],
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a, vec![ints(&[0, 1, 0])]);
    }
}
