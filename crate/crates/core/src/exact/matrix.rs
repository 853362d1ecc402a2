use alloc::fmt;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::DeltaPoly;

/// Row-major matrix over `Z[d]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<DeltaPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixError {
    NotSquare { rows: usize, cols: usize },
    ShapeMismatch,
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::NotSquare { rows, cols } => {
                write!(f, "matrix is {rows}x{cols}, not square")
            }
            MatrixError::ShapeMismatch => write!(f, "matrix shapes do not match"),
        }
    }
}

impl core::error::Error for MatrixError {}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<DeltaPoly>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        PolyMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix::new(rows, cols, vec![DeltaPoly::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = PolyMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = DeltaPoly::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> DeltaPoly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[DeltaPoly] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Leading principal `k x k` block.
    pub fn leading_block(&self, k: usize) -> PolyMatrix {
        assert!(k <= self.rows && k <= self.cols);
        PolyMatrix::from_fn(k, k, |i, j| self[(i, j)].clone())
    }

    pub fn matmul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::ShapeMismatch);
        }
        Ok(PolyMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = DeltaPoly::zero();
            for k in 0..self.cols {
                acc = &acc + &(&self[(i, k)] * &rhs[(k, j)]);
            }
            acc
        }))
    }

    /// Exact determinant by Bareiss fraction-free elimination. All interior
    /// divisions are by the previous pivot and are exact in `Z[d]`.
    pub fn det_fraction_free(&self) -> Result<DeltaPoly, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(DeltaPoly::one());
        }
        let mut m = self.entries.clone();
        let at = |m: &Vec<DeltaPoly>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = false;
        let mut prev = DeltaPoly::one();
        for k in 0..n - 1 {
            if at(&m, k, k).is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !at(&m, r, k).is_zero()) else {
                    return Ok(DeltaPoly::zero());
                };
                for j in 0..n {
                    m.swap(k * n + j, swap * n + j);
                }
                sign = !sign;
            }
            let pivot = at(&m, k, k);
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&at(&m, i, j) * &pivot) - &(&at(&m, i, k) * &at(&m, k, j));
                    m[i * n + j] = num
                        .exact_div(&prev)
                        .expect("Bareiss division is exact over an integral domain");
                }
                m[i * n + k] = DeltaPoly::zero();
            }
            prev = pivot;
        }
        let det = at(&m, n - 1, n - 1);
        Ok(if sign { -&det } else { det })
    }

    /// Rank over the fraction field `Q(d)`, again by fraction-free
    /// elimination with column pivoting.
    pub fn rank_over_fractions(&self) -> usize {
        let mut m = self.entries.clone();
        let rows = self.rows;
        let cols = self.cols;
        let at = |m: &Vec<DeltaPoly>, i: usize, j: usize| m[i * cols + j].clone();
        let mut prev = DeltaPoly::one();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(p) = (row..rows).find(|&r| !at(&m, r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..cols {
                    m.swap(row * cols + j, p * cols + j);
                }
            }
            let pivot = at(&m, row, col);
            for i in row + 1..rows {
                for j in col + 1..cols {
                    let num = &(&at(&m, i, j) * &pivot) - &(&at(&m, i, col) * &at(&m, row, j));
                    m[i * cols + j] = num
                        .exact_div(&prev)
                        .expect("Bareiss division is exact over an integral domain");
                }
                m[i * cols + col] = DeltaPoly::zero();
            }
            prev = pivot;
            rank += 1;
            row += 1;
        }
        rank
    }

    /// Exact rank of the matrix evaluated at the rational point `d = x`.
    pub fn rank_at(&self, x: &BigRational) -> usize {
        let evaluated: Vec<BigRational> = self.entries.iter().map(|p| p.evaluate(x)).collect();
        rational_rank(self.rows, self.cols, evaluated)
    }
}

impl core::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = DeltaPoly;
    fn index(&self, (i, j): (usize, usize)) -> &DeltaPoly {
        &self.entries[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut DeltaPoly {
        &mut self.entries[i * self.cols + j]
    }
}

/// Gaussian elimination rank of a row-major rational matrix.
pub fn rational_rank(rows: usize, cols: usize, mut m: Vec<BigRational>) -> usize {
    assert_eq!(m.len(), rows * cols);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r * cols + col].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..cols {
                m.swap(row * cols + j, p * cols + j);
            }
        }
        let inv = m[row * cols + col].recip();
        for j in col..cols {
            let v = &m[row * cols + j] * &inv;
            m[row * cols + j] = v;
        }
        for i in row + 1..rows {
            let factor = m[i * cols + col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..cols {
                let v = &m[i * cols + j] - &(&factor * &m[row * cols + j]);
                m[i * cols + j] = v;
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}

/// Solve `A x = b` over `Q` for a column vector, `None` if inconsistent.
/// `a` is row-major `rows x cols`; used by callers that expand elements in a
/// known-independent spanning set.
pub(crate) fn solve_rational(
    rows: usize,
    cols: usize,
    a: &[BigRational],
    b: &[BigRational],
) -> Option<Vec<BigRational>> {
    assert_eq!(a.len(), rows * cols);
    assert_eq!(b.len(), rows);
    let width = cols + 1;
    let mut m: Vec<BigRational> = Vec::with_capacity(rows * width);
    for i in 0..rows {
        m.extend(a[i * cols..(i + 1) * cols].iter().cloned());
        m.push(b[i].clone());
    }
    let mut pivot_col_of_row = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r * width + col].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..width {
                m.swap(row * width + j, p * width + j);
            }
        }
        let inv = m[row * width + col].recip();
        for j in col..width {
            let v = &m[row * width + j] * &inv;
            m[row * width + j] = v;
        }
        for i in 0..rows {
            if i == row {
                continue;
            }
            let factor = m[i * width + col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..width {
                let v = &m[i * width + j] - &(&factor * &m[row * width + j]);
                m[i * width + j] = v;
            }
        }
        pivot_col_of_row.push(col);
        row += 1;
    }
    // Inconsistent if a zero row has nonzero rhs.
    for i in row..rows {
        if !m[i * width + cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivot_col_of_row.iter().enumerate() {
        x[c] = m[r * width + cols].clone();
    }
    Some(x)
}

/// Basis of the right nullspace of a row-major rational matrix.
pub fn rational_nullspace(rows: usize, cols: usize, mut m: Vec<BigRational>) -> Vec<Vec<BigRational>> {
    assert_eq!(m.len(), rows * cols);
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r * cols + col].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..cols {
                m.swap(row * cols + j, p * cols + j);
            }
        }
        let inv = m[row * cols + col].recip();
        for j in col..cols {
            let v = &m[row * cols + j] * &inv;
            m[row * cols + j] = v;
        }
        for i in 0..rows {
            if i == row {
                continue;
            }
            let factor = m[i * cols + col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..cols {
                let v = &m[i * cols + j] - &(&factor * &m[row * cols + j]);
                m[i * cols + j] = v;
            }
        }
        pivot_col_of_row.push(col);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_col_of_row.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = -m[r * cols + free].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
pub(crate) fn big_rational(n: i64, d: i64) -> BigRational {
    use num_bigint::BigInt;
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_bigint::BigInt;

    fn tri(n: usize) -> PolyMatrix {
        // The tridiagonal d/1 matrix.
        PolyMatrix::from_fn(n, n, |i, j| {
            if i == j {
                DeltaPoly::delta()
            } else if i.abs_diff(j) == 1 {
                DeltaPoly::one()
            } else {
                DeltaPoly::zero()
            }
        })
    }

    /// Cofactor-expansion determinant, the independent oracle for Bareiss.
    fn det_cofactor(m: &PolyMatrix) -> DeltaPoly {
        let n = m.rows();
        if n == 0 {
            return DeltaPoly::one();
        }
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = DeltaPoly::zero();
        for j in 0..n {
            if m[(0, j)].is_zero() {
                continue;
            }
            let minor = PolyMatrix::from_fn(n - 1, n - 1, |r, c| {
                m[(r + 1, if c < j { c } else { c + 1 })].clone()
            });
            let term = &m[(0, j)] * &det_cofactor(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn det_of_identity() {
        assert_eq!(
            PolyMatrix::identity(4).det_fraction_free().unwrap(),
            DeltaPoly::one()
        );
    }

    #[test]
    fn det_of_tridiagonal_3x3() {
        // d^3 - 2d, frozen from cofactor expansion by hand.
        let expect = DeltaPoly::from_i64_coeffs(&[0, -2, 0, 1]);
        assert_eq!(tri(3).det_fraction_free().unwrap(), expect);
        assert_eq!(det_cofactor(&tri(3)), expect);
    }

    #[test]
    fn det_matches_cofactor_oracle_on_small_matrices() {
        for n in 0..=4 {
            let mut seed = 0x9e3779b97f4a7c15u64;
            let m = PolyMatrix::from_fn(n, n, |_, _| {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let c = ((seed >> 33) % 7) as i64 - 3;
                let k = ((seed >> 20) % 2) as usize;
                DeltaPoly::monomial(BigInt::from(c), k)
            });
            assert_eq!(m.det_fraction_free().unwrap(), det_cofactor(&m), "n={n}");
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let a = tri(3);
        let b = PolyMatrix::from_fn(3, 3, |i, j| {
            DeltaPoly::from_i64_coeffs(&[(i + 2 * j) as i64 % 3, i64::from(i == j)])
        });
        let ab = a.matmul(&b).unwrap();
        assert_eq!(
            ab.det_fraction_free().unwrap(),
            &a.det_fraction_free().unwrap() * &b.det_fraction_free().unwrap()
        );
    }

    #[test]
    fn rank_at_points() {
        let m = tri(3); // det = d^3 - 2d, roots 0, +-sqrt2
        assert_eq!(m.rank_at(&big_rational(7, 1)), 3);
        assert_eq!(m.rank_at(&big_rational(0, 1)), 2);
        assert_eq!(PolyMatrix::zero(3, 3).rank_at(&big_rational(5, 1)), 0);
    }

    #[test]
    fn rank_over_fractions_sees_generic_rank() {
        assert_eq!(tri(3).rank_over_fractions(), 3);
        let mut m = PolyMatrix::zero(2, 3);
        m[(0, 0)] = DeltaPoly::delta();
        m[(1, 0)] = DeltaPoly::delta_pow(2);
        assert_eq!(m.rank_over_fractions(), 1);
    }

    #[test]
    fn solve_rational_finds_coordinates() {
        // Columns (1,0,1) and (0,1,1); solve for (2,3,5).
        let a: Vec<BigRational> = [1, 0, 0, 1, 1, 1]
            .iter()
            .map(|&v| big_rational(v, 1))
            .collect();
        let b: Vec<BigRational> = [2, 3, 5].iter().map(|&v| big_rational(v, 1)).collect();
        let x = solve_rational(3, 2, &a, &b).unwrap();
        assert_eq!(x, vec![big_rational(2, 1), big_rational(3, 1)]);
        let b_bad: Vec<BigRational> = [2, 3, 6].iter().map(|&v| big_rational(v, 1)).collect();
        assert!(solve_rational(3, 2, &a, &b_bad).is_none());
    }
}
