//! Dense complex-matrix kernel: arithmetic, Kronecker products, partial
//! trace/transpose over tensor factors, and eigendecompositions.
//!
//! Matrices are stored row-major. Composite tensor indices are big-endian:
//! for factors `(d0, d1, ..)` the index of the tuple `(i0, i1, ..)` is
//! `((i0 * d1 + i1) * d2 + ..)`, so the first factor varies slowest.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

mod eig;

pub use eig::{eig_general, eig_hermitian};

/// Errors from the dense linear-algebra kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not hermitian: max |A - A^dag| = {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("eigenvalue iteration did not converge within {0} steps")]
    NoConvergence(usize),
    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        let m = CMat { rows, cols, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Matrix unit `e_ij` of side `n`: a single 1 at row `i`, column `j`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        assert!(i < n && j < n, "matrix unit index out of range");
        let mut m = CMat::zeros(n, n);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = CMat::zeros(n, n);
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let values: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        CMat::diag(&values)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds from rows of `(re, im)` pairs; panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        CMat { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    fn check_finite(&self) -> Result<()> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * factor)
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "hadamard shape mismatch");
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * other[(i, j)])
    }

    /// Entrywise l2 (Frobenius) norm.
    pub fn norm_l2(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Entrywise l1 norm.
    pub fn norm_l1(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).sum::<f64>()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in max_abs_diff");
        let mut d = 0.0f64;
        for (a, b) in self.data.iter().zip(other.data.iter()) {
            d = d.max((a - b).norm());
        }
        d
    }

    /// Max-norm deviation from hermiticity, `max |A - A^dag|`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut d = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// Scale-relative hermiticity gate, `1e-10 * max(1, max |A|)`.
    pub fn herm_tol(&self) -> f64 {
        1e-10 * self.max_abs().max(1.0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && self.hermiticity_defect() <= self.herm_tol()
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMat {
    type Output = CMat;

    fn add(self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape mismatch");
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }
}

impl Sub for &CMat {
    type Output = CMat;

    fn sub(self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub shape mismatch");
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }
}

impl Mul for &CMat {
    type Output = CMat;

    fn mul(self, other: &CMat) -> CMat {
        self.matmul(other)
    }
}

impl Mul<Complex64> for &CMat {
    type Output = CMat;

    fn mul(self, factor: Complex64) -> CMat {
        self.scale(factor)
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product: block `(i, j)` of the result is `a[i,j] * b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for p in 0..b.rows {
                for q in 0..b.cols {
                    out[(i * b.rows + p, j * b.cols + q)] = aij * b[(p, q)];
                }
            }
        }
    }
    out
}

/// Ordered factor dimensions of a square matrix viewed as an operator on a
/// tensor product. Big-endian: the first factor varies slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorShape {
    dims: Vec<usize>,
}

impl FactorShape {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(LinalgError::ShapeMismatch(
                "factor dimensions must be a nonempty list of positive integers".into(),
            ));
        }
        Ok(FactorShape { dims: dims.to_vec() })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    /// Side length of the matrices this shape describes.
    pub fn side(&self) -> usize {
        self.dims.iter().product()
    }

    fn check_matches(&self, a: &CMat) -> Result<()> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare { rows: a.rows, cols: a.cols });
        }
        if a.rows != self.side() {
            return Err(LinalgError::ShapeMismatch(format!(
                "factor shape {:?} implies side {}, matrix is {}x{}",
                self.dims,
                self.side(),
                a.rows,
                a.cols
            )));
        }
        Ok(())
    }

    /// Splits a composite index into per-factor indices.
    pub fn decompose(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = idx % self.dims[k];
            idx /= self.dims[k];
        }
        out
    }

    /// Recombines per-factor indices into a composite index.
    pub fn compose(&self, parts: &[usize]) -> usize {
        debug_assert_eq!(parts.len(), self.dims.len());
        let mut idx = 0;
        for (k, &p) in parts.iter().enumerate() {
            debug_assert!(p < self.dims[k]);
            idx = idx * self.dims[k] + p;
        }
        idx
    }

    fn check_factor_set(&self, set: &[usize], what: &str) -> Result<()> {
        let k = self.dims.len();
        let mut seen = vec![false; k];
        for &f in set {
            if f >= k {
                return Err(LinalgError::ShapeMismatch(format!(
                    "{what} factor index {f} out of range for {k} factors"
                )));
            }
            if seen[f] {
                return Err(LinalgError::ShapeMismatch(format!(
                    "{what} factor index {f} listed twice"
                )));
            }
            seen[f] = true;
        }
        Ok(())
    }
}

/// Traces out every factor not in `keep`; kept factors retain their order.
pub fn partial_trace(a: &CMat, shape: &FactorShape, keep: &[usize]) -> Result<CMat> {
    shape.check_matches(a)?;
    shape.check_factor_set(keep, "keep")?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let kept_dims: Vec<usize> = kept.iter().map(|&f| shape.dims[f]).collect();
    let out_side: usize = kept_dims.iter().product();
    let out_shape = FactorShape { dims: if kept_dims.is_empty() { vec![1] } else { kept_dims } };

    let side = shape.side();
    let mut out = CMat::zeros(out_side.max(1), out_side.max(1));
    for r in 0..side {
        let ri = shape.decompose(r);
        for c in 0..side {
            let ci = shape.decompose(c);
            // traced factors must match between row and column
            let traced_match = (0..shape.dims.len())
                .filter(|f| !kept.contains(f))
                .all(|f| ri[f] == ci[f]);
            if !traced_match {
                continue;
            }
            let ro: Vec<usize> = kept.iter().map(|&f| ri[f]).collect();
            let co: Vec<usize> = kept.iter().map(|&f| ci[f]).collect();
            let (or, oc) = if kept.is_empty() {
                (0, 0)
            } else {
                (out_shape.compose(&ro), out_shape.compose(&co))
            };
            out[(or, oc)] += a[(r, c)];
        }
    }
    Ok(out)
}

/// Transposes the factors in `flip`, swapping their row/column indices.
pub fn partial_transpose(a: &CMat, shape: &FactorShape, flip: &[usize]) -> Result<CMat> {
    shape.check_matches(a)?;
    shape.check_factor_set(flip, "flip")?;
    let side = shape.side();
    let mut out = CMat::zeros(side, side);
    for r in 0..side {
        let ri = shape.decompose(r);
        for c in 0..side {
            let ci = shape.decompose(c);
            let mut ro = ri.clone();
            let mut co = ci.clone();
            for &f in flip {
                ro[f] = ci[f];
                co[f] = ri[f];
            }
            out[(shape.compose(&ro), shape.compose(&co))] = a[(r, c)];
        }
    }
    Ok(out)
}

/// Reorders tensor factors: factor `perm[k]` of the input becomes factor `k`
/// of the output, on rows and columns alike.
pub fn permute_factors(a: &CMat, shape: &FactorShape, perm: &[usize]) -> Result<CMat> {
    shape.check_matches(a)?;
    shape.check_factor_set(perm, "permutation")?;
    if perm.len() != shape.num_factors() {
        return Err(LinalgError::ShapeMismatch(format!(
            "permutation of length {} for {} factors",
            perm.len(),
            shape.num_factors()
        )));
    }
    let out_dims: Vec<usize> = perm.iter().map(|&f| shape.dims[f]).collect();
    let out_shape = FactorShape { dims: out_dims };
    let side = shape.side();
    let mut out = CMat::zeros(side, side);
    for r in 0..side {
        let ri = shape.decompose(r);
        for c in 0..side {
            let ci = shape.decompose(c);
            let ro: Vec<usize> = perm.iter().map(|&f| ri[f]).collect();
            let co: Vec<usize> = perm.iter().map(|&f| ci[f]).collect();
            out[(out_shape.compose(&ro), out_shape.compose(&co))] = a[(r, c)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
