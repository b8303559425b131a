//! Self-contained dense kernels, generic over the scalar precision.
//!
//! Storage is column-major and every kernel accumulates in a fixed order, so
//! identical inputs at a given precision produce bit-identical outputs. None
//! of the factorizations halt on numerical breakdown: a failed Cholesky pivot
//! or a zero triangular diagonal produces NaN/Inf entries that propagate to
//! the caller.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::precision::{ConvertFrom, Scalar};

/// Dense matrix with column-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Matrix {
            rows,
            cols,
            data: vec![T::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Column-major entries, row index varying fastest.
    pub fn from_column_major(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn column(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Copy of the contiguous column range `lo..hi`.
    pub fn columns(&self, lo: usize, hi: usize) -> Matrix<T> {
        assert!(lo < hi && hi <= self.cols);
        Matrix {
            rows: self.rows,
            cols: hi - lo,
            data: self.data[lo * self.rows..hi * self.rows].to_vec(),
        }
    }

    /// Overwrite columns starting at `start` with the columns of `src`.
    pub fn set_columns(&mut self, start: usize, src: &Matrix<T>) {
        assert_eq!(self.rows, src.rows);
        assert!(start + src.cols <= self.cols);
        let lo = start * self.rows;
        self.data[lo..lo + src.data.len()].copy_from_slice(&src.data);
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Elementwise difference in this precision.
    pub fn sub(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    /// Symmetric part (M + Mᵀ)/2; the halving is exact in binary arithmetic.
    pub fn symmetrize(&self) -> Matrix<T> {
        assert_eq!(self.rows, self.cols);
        let half = T::from_f64(0.5);
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)]) * half
        })
    }

    pub fn has_non_finite(&self) -> bool {
        self.data.iter().any(|x| !x.is_finite())
    }

    pub fn has_nan(&self) -> bool {
        self.data.iter().any(|x| x.is_nan())
    }

    /// Rounding conversion into another precision, entry by entry.
    pub fn convert<U: Scalar + ConvertFrom<T>>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| U::convert_from(x)).collect(),
        }
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

/// Square matrix whose entries strictly below the diagonal are exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperTriangular<T> {
    mat: Matrix<T>,
}

impl<T: Scalar> UpperTriangular<T> {
    /// Wrap a square matrix, forcing the strict lower triangle to zero.
    pub fn new(mut mat: Matrix<T>) -> Self {
        assert_eq!(mat.rows(), mat.cols(), "triangular factor must be square");
        for j in 0..mat.cols() {
            for i in j + 1..mat.rows() {
                mat[(i, j)] = T::ZERO;
            }
        }
        UpperTriangular { mat }
    }

    pub fn identity(n: usize) -> Self {
        UpperTriangular {
            mat: Matrix::identity(n),
        }
    }

    pub fn order(&self) -> usize {
        self.mat.rows()
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.mat
    }

    pub fn convert<U: Scalar + ConvertFrom<T>>(&self) -> UpperTriangular<U> {
        UpperTriangular {
            mat: self.mat.convert::<U>(),
        }
    }
}

impl<T: Scalar> Index<(usize, usize)> for UpperTriangular<T> {
    type Output = T;

    #[inline]
    fn index(&self, ij: (usize, usize)) -> &T {
        &self.mat[ij]
    }
}

/// QR factorization pair: orthonormal `q` and upper-triangular `r`.
#[derive(Clone, Debug)]
pub struct QrFactors<T> {
    pub q: Matrix<T>,
    pub r: UpperTriangular<T>,
}

/// Transpose marker for [`matmul`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trans {
    No,
    Yes,
}

/// Matrix product `op_a(A) * op_b(B)` with classical inner-product-order
/// accumulation, all arithmetic in `T`.
pub fn matmul<T: Scalar>(a: &Matrix<T>, op_a: Trans, b: &Matrix<T>, op_b: Trans) -> Matrix<T> {
    let (am, ak) = match op_a {
        Trans::No => (a.rows(), a.cols()),
        Trans::Yes => (a.cols(), a.rows()),
    };
    let (bk, bn) = match op_b {
        Trans::No => (b.rows(), b.cols()),
        Trans::Yes => (b.cols(), b.rows()),
    };
    assert_eq!(ak, bk, "inner dimensions must agree");
    let at = |i: usize, k: usize| match op_a {
        Trans::No => a[(i, k)],
        Trans::Yes => a[(k, i)],
    };
    let bt = |k: usize, j: usize| match op_b {
        Trans::No => b[(k, j)],
        Trans::Yes => b[(j, k)],
    };
    let mut c = Matrix::zeros(am, bn);
    for j in 0..bn {
        for i in 0..am {
            let mut acc = T::ZERO;
            for k in 0..ak {
                acc = acc + at(i, k) * bt(k, j);
            }
            c[(i, j)] = acc;
        }
    }
    c
}

/// Upper Cholesky factor of a symmetric matrix, never halting.
///
/// Only the upper triangle of `a` is read. A non-positive or NaN pivot takes
/// the square root anyway, producing NaN entries that flow through the rest
/// of the factorization; the call always runs to completion.
pub fn cholesky_nonstop<T: Scalar>(a: &Matrix<T>) -> UpperTriangular<T> {
    assert_eq!(a.rows(), a.cols(), "Cholesky input must be square");
    let n = a.rows();
    let mut r = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..j {
            let mut s = a[(i, j)];
            for k in 0..i {
                s = s - r[(k, i)] * r[(k, j)];
            }
            r[(i, j)] = s / r[(i, i)];
        }
        let mut d = a[(j, j)];
        for k in 0..j {
            d = d - r[(k, j)] * r[(k, j)];
        }
        r[(j, j)] = d.sqrt();
    }
    UpperTriangular { mat: r }
}

/// Economy Householder QR of a tall matrix (`rows >= cols`).
///
/// The diagonal of `r` is made nonnegative by flipping reflector signs, which
/// keeps oracle comparisons sign-unambiguous. Rank deficiency shows up as
/// (near-)zero diagonal entries of `r` while `q` stays numerically
/// orthonormal.
pub fn householder_qr<T: Scalar>(x: &Matrix<T>) -> QrFactors<T> {
    let (m, n) = (x.rows(), x.cols());
    assert!(m >= n && n >= 1, "householder_qr requires rows >= cols >= 1");
    let mut r = x.clone();
    // Reflector j is stored as (v over rows j..m, beta = 2 / vᵀv).
    let mut reflectors: Vec<(Vec<T>, T)> = Vec::with_capacity(n);

    for j in 0..n {
        let mut norm2 = T::ZERO;
        for i in j..m {
            let v = r[(i, j)];
            norm2 = norm2 + v * v;
        }
        let norm = norm2.sqrt();
        if norm == T::ZERO {
            reflectors.push((Vec::new(), T::ZERO));
            continue;
        }
        let x0 = r[(j, j)];
        // alpha = -sign(x0) * norm avoids cancellation in v[0].
        let alpha = if x0 >= T::ZERO { -norm } else { norm };
        let mut v: Vec<T> = (j..m).map(|i| r[(i, j)]).collect();
        v[0] = x0 - alpha;
        let mut vtv = T::ZERO;
        for &vi in &v {
            vtv = vtv + vi * vi;
        }
        let beta = if vtv == T::ZERO {
            T::ZERO
        } else {
            (T::ONE + T::ONE) / vtv
        };
        // Apply H = I - beta v vᵀ to the trailing columns.
        for c in j..n {
            let mut dot = T::ZERO;
            for (off, &vi) in v.iter().enumerate() {
                dot = dot + vi * r[(j + off, c)];
            }
            let scale = beta * dot;
            for (off, &vi) in v.iter().enumerate() {
                let e = r[(j + off, c)];
                r[(j + off, c)] = e - scale * vi;
            }
        }
        reflectors.push((v, beta));
    }

    // Accumulate the economy Q by applying reflectors to I(:, 0..n) in reverse.
    let mut q = Matrix::zeros(m, n);
    for i in 0..n {
        q[(i, i)] = T::ONE;
    }
    for j in (0..n).rev() {
        let (v, beta) = &reflectors[j];
        if v.is_empty() {
            continue;
        }
        for c in 0..n {
            let mut dot = T::ZERO;
            for (off, &vi) in v.iter().enumerate() {
                dot = dot + vi * q[(j + off, c)];
            }
            let scale = *beta * dot;
            for (off, &vi) in v.iter().enumerate() {
                let e = q[(j + off, c)];
                q[(j + off, c)] = e - scale * vi;
            }
        }
    }

    // Sign convention: nonnegative diagonal of R.
    for j in 0..n {
        if r[(j, j)] < T::ZERO {
            for c in j..n {
                r[(j, c)] = -r[(j, c)];
            }
            for i in 0..m {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }

    let rn = Matrix::from_fn(n, n, |i, j| if i <= j { r[(i, j)] } else { T::ZERO });
    QrFactors {
        q,
        r: UpperTriangular { mat: rn },
    }
}

/// Solve `Q R = V` for `Q` by back substitution along each row.
///
/// A zero (or NaN) diagonal entry of `r` yields Inf/NaN in the output; the
/// call always completes.
pub fn tri_solve_right<T: Scalar>(v: &Matrix<T>, r: &UpperTriangular<T>) -> Matrix<T> {
    let (m, s) = (v.rows(), v.cols());
    assert_eq!(r.order(), s, "triangular factor must match column count");
    let mut q = Matrix::zeros(m, s);
    for j in 0..s {
        for i in 0..m {
            let mut acc = v[(i, j)];
            for k in 0..j {
                acc = acc - q[(i, k)] * r[(k, j)];
            }
            q[(i, j)] = acc / r[(j, j)];
        }
    }
    q
}

/// Error for norm computations on matrices with NaN or infinite entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonFiniteInput;

impl fmt::Display for NonFiniteInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("norm undefined: input contains NaN or infinite entries")
    }
}

impl std::error::Error for NonFiniteInput {}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Singular values in descending order via one-sided Jacobi.
///
/// Tall inputs are reduced with a Householder QR first and the rotation sweep
/// runs on the square factor. One-sided Jacobi keeps high relative accuracy
/// on graded matrices, which matters because the test-matrix generators
/// spread singular values across many orders of magnitude.
pub fn singular_values(a: &Matrix<f64>) -> Result<Vec<f64>, NonFiniteInput> {
    if a.has_non_finite() {
        return Err(NonFiniteInput);
    }
    let mut w = if a.rows() >= a.cols() {
        a.clone()
    } else {
        a.transpose()
    };
    if w.rows() > w.cols() {
        w = householder_qr(&w).r.into_matrix();
    }
    let (m, n) = (w.rows(), w.cols());

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for k in 0..m {
                    let wi = w[(k, i)];
                    let wj = w[(k, j)];
                    alpha += wi * wi;
                    beta += wj * wj;
                    gamma += wi * wj;
                }
                if gamma == 0.0 || alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                // Columns already orthogonal at working precision: rotating
                // further cannot improve the factorization.
                if gamma.abs() <= 1e-15 * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..m {
                    let wi = w[(k, i)];
                    let wj = w[(k, j)];
                    w[(k, i)] = c * wi - s * wj;
                    w[(k, j)] = s * wi + c * wj;
                }
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = (0..n)
        .map(|j| {
            let mut s = 0.0;
            for k in 0..m {
                s += w[(k, j)] * w[(k, j)];
            }
            s.sqrt()
        })
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

/// Induced matrix 2-norm (largest singular value).
pub fn two_norm(a: &Matrix<f64>) -> Result<f64, NonFiniteInput> {
    Ok(singular_values(a)?[0])
}

/// 2-condition number: ratio of extreme singular values (+inf when singular).
pub fn cond2(a: &Matrix<f64>) -> Result<f64, NonFiniteInput> {
    let sv = singular_values(a)?;
    let smax = sv[0];
    let smin = *sv.last().unwrap();
    if smin == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(smax / smin)
    }
}
