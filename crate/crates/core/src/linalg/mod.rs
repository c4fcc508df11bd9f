//! Dense complex linear algebra on coordinate spaces `ℂ^d`.
//!
//! Operators are stored as [`LinOperator`] (a validated `DMatrix<Complex64>`),
//! vectors as [`HVector`]. Decompositions go through a one-sided Jacobi SVD
//! ([`svd`]) that keeps small singular values accurate, which is what the
//! pseudo-inverse and every rank decision in the crate depend on.

mod douglas;
mod svd;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{mismatch, Error, Result};

pub use douglas::{
    douglas_factor, kernels_coincide, loewner_bisect, loewner_leq, range_inclusion,
    RangeInclusion,
};
pub use svd::{svd, SvdFactorization};

pub type Scalar = Complex<f64>;

/// Relative cut for counting a singular value toward the rank:
/// `σ_k > RANK_EPS · σ_max · max(rows, cols)`.
pub const RANK_EPS: f64 = 1e-10;

/// Default relative tolerance for exact operator identities.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance on `‖A − A*‖ / (1 + ‖A‖)` before an operand counts as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> Scalar {
    Complex::new(re, im)
}

pub fn r(re: f64) -> Scalar {
    Complex::new(re, 0.0)
}

fn all_finite<'a>(mut it: impl Iterator<Item = &'a Scalar>) -> bool {
    it.all(|z| z.re.is_finite() && z.im.is_finite())
}

/// A vector of `H ≅ ℂ^d`, `d ≥ 1`.
#[derive(Clone, PartialEq)]
pub struct HVector(DVector<Scalar>);

impl HVector {
    pub fn new(entries: Vec<Scalar>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| r(x)).collect())
    }

    pub fn from_vector(v: DVector<Scalar>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidInput("vector must have dimension ≥ 1".into()));
        }
        if !all_finite(v.iter()) {
            return Err(Error::InvalidInput("vector has non-finite entries".into()));
        }
        Ok(Self(v))
    }

    pub(crate) fn from_vector_unchecked(v: DVector<Scalar>) -> Self {
        debug_assert!(!v.is_empty());
        Self(v)
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::from_vector(DVector::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn vector(&self) -> &DVector<Scalar> {
        &self.0
    }

    pub fn into_vector(self) -> DVector<Scalar> {
        self.0
    }

    pub fn entries(&self) -> &[Scalar] {
        self.0.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.norm_squared()
    }

    /// `⟨self, other⟩ = Σ self_i · conj(other_i)`, linear in `self`.
    pub fn inner(&self, other: &HVector) -> Result<Scalar> {
        if self.dim() != other.dim() {
            return Err(mismatch("HVector::inner", self.dim(), other.dim()));
        }
        Ok(other.0.dotc(&self.0))
    }
}

impl fmt::Debug for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("HVector").field(&self.0.as_slice()).finish()
    }
}

/// Matrix of a bounded operator between coordinate spaces, `rows, cols ≥ 1`.
#[derive(Clone, PartialEq)]
pub struct LinOperator(DMatrix<Scalar>);

impl LinOperator {
    /// Builds a `rows × cols` operator from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(mismatch("LinOperator::new", rows * cols, entries.len()));
        }
        Self::from_matrix(DMatrix::from_row_slice(rows, cols, &entries))
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != cols) {
            return Err(mismatch("LinOperator::from_rows", cols, bad.len()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| r(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_matrix(m: DMatrix<Scalar>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::InvalidInput(format!(
                "operator shape {}×{} is empty",
                m.nrows(),
                m.ncols()
            )));
        }
        if !all_finite(m.iter()) {
            return Err(Error::InvalidInput("operator has non-finite entries".into()));
        }
        Ok(Self(m))
    }

    /// Products and sums of validated operators stay finite unless they
    /// overflow; callers inside the crate use this for derived operators.
    pub(crate) fn from_matrix_unchecked(m: DMatrix<Scalar>) -> Self {
        debug_assert!(m.nrows() > 0 && m.ncols() > 0);
        Self(m)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_matrix(DMatrix::identity(dim, dim))
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_matrix(DMatrix::zeros(rows, cols))
    }

    pub fn diagonal(values: &[Scalar]) -> Result<Self> {
        Self::from_matrix(DMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    pub fn real_diagonal(values: &[f64]) -> Result<Self> {
        Self::diagonal(&values.iter().map(|&x| r(x)).collect::<Vec<_>>())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.0[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<Scalar> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Scalar> {
        self.0
    }

    pub fn adjoint(&self) -> LinOperator {
        Self(self.0.adjoint())
    }

    pub fn op_norm(&self) -> f64 {
        svd::singular_values(&self.0).first().copied().unwrap_or(0.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.0, RANK_EPS)
    }

    pub fn pinv(&self) -> LinOperator {
        pinv(self)
    }

    pub fn scale(&self, s: Scalar) -> LinOperator {
        Self(&self.0 * s)
    }

    /// `‖A − A*‖ ≤ tol · (1 + ‖A‖)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && hermitian_defect(self) <= tol * (1.0 + self.op_norm())
    }

    /// Checked composition `self · rhs`.
    pub fn compose(&self, rhs: &LinOperator) -> Result<LinOperator> {
        if self.cols() != rhs.rows() {
            return Err(mismatch("LinOperator::compose", self.cols(), rhs.rows()));
        }
        Ok(Self(&self.0 * &rhs.0))
    }

    pub fn apply(&self, v: &HVector) -> Result<HVector> {
        if self.cols() != v.dim() {
            return Err(mismatch("LinOperator::apply", self.cols(), v.dim()));
        }
        Ok(HVector(&self.0 * &v.0))
    }

    /// `‖self − other‖` in operator norm.
    pub fn distance(&self, other: &LinOperator) -> Result<f64> {
        if self.0.shape() != other.0.shape() {
            return Err(mismatch(
                "LinOperator::distance",
                format!("{:?}", self.0.shape()),
                format!("{:?}", other.0.shape()),
            ));
        }
        Ok(svd::spectral_norm(&(&self.0 - &other.0)))
    }

    /// `[self | other]`, both with the same number of rows.
    pub fn hstack(&self, other: &LinOperator) -> Result<LinOperator> {
        if self.rows() != other.rows() {
            return Err(mismatch("LinOperator::hstack", self.rows(), other.rows()));
        }
        let mut m = DMatrix::zeros(self.rows(), self.cols() + other.cols());
        m.columns_mut(0, self.cols()).copy_from(&self.0);
        m.columns_mut(self.cols(), other.cols()).copy_from(&other.0);
        Ok(Self(m))
    }

    /// `[self; other]`, both with the same number of columns.
    pub fn vstack(&self, other: &LinOperator) -> Result<LinOperator> {
        if self.cols() != other.cols() {
            return Err(mismatch("LinOperator::vstack", self.cols(), other.cols()));
        }
        let mut m = DMatrix::zeros(self.rows() + other.rows(), self.cols());
        m.rows_mut(0, self.rows()).copy_from(&self.0);
        m.rows_mut(self.rows(), other.rows()).copy_from(&other.0);
        Ok(Self(m))
    }
}

impl fmt::Debug for LinOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinOperator{}", self.0)
    }
}

// Shape mismatches in the operator algebra are programming errors and panic,
// matching nalgebra; use `compose` for a checked product.
impl Mul for &LinOperator {
    type Output = LinOperator;
    fn mul(self, rhs: &LinOperator) -> LinOperator {
        LinOperator(&self.0 * &rhs.0)
    }
}

impl Add for &LinOperator {
    type Output = LinOperator;
    fn add(self, rhs: &LinOperator) -> LinOperator {
        LinOperator(&self.0 + &rhs.0)
    }
}

impl Sub for &LinOperator {
    type Output = LinOperator;
    fn sub(self, rhs: &LinOperator) -> LinOperator {
        LinOperator(&self.0 - &rhs.0)
    }
}

impl Neg for &LinOperator {
    type Output = LinOperator;
    fn neg(self) -> LinOperator {
        LinOperator(-&self.0)
    }
}

pub fn adjoint(a: &LinOperator) -> LinOperator {
    a.adjoint()
}

pub fn op_norm(a: &LinOperator) -> f64 {
    a.op_norm()
}

/// Moore–Penrose pseudo-inverse `A†`, cut at the default rank threshold.
pub fn pinv(a: &LinOperator) -> LinOperator {
    let f = svd::factor(a.matrix(), RANK_EPS);
    LinOperator(f.pinv_matrix(a.cols(), a.rows()))
}

/// Orthogonal projector onto `R(A)`, i.e. `A A†`.
pub fn range_projector(a: &LinOperator) -> LinOperator {
    let f = svd::factor(a.matrix(), RANK_EPS);
    LinOperator(&f.left * f.left.adjoint())
}

/// Orthogonal projector onto `N(A)⊥ = R(A*)`, i.e. `A† A`.
pub fn corange_projector(a: &LinOperator) -> LinOperator {
    let f = svd::factor(a.matrix(), RANK_EPS);
    LinOperator(&f.right * f.right.adjoint())
}

/// Orthonormal basis of `N(A)` as the columns of a `cols × k` matrix
/// (`k` may be zero).
pub fn null_space_basis(a: &LinOperator) -> DMatrix<Scalar> {
    let n = a.cols();
    let f = svd::factor(a.matrix(), RANK_EPS);
    let complement = DMatrix::<Scalar>::identity(n, n) - &f.right * f.right.adjoint();
    // The complement projector has singular values 1 (on N(A)) and 0, so the
    // cut is absolute: a relative one would keep roundoff when N(A) = {0}.
    let g = svd::factor(&complement, 0.0);
    let k = g.singulars.iter().take_while(|s| **s > 0.5).count();
    g.left.columns(0, k).into_owned()
}

/// Eigenvalues of a Hermitian operator in ascending order.
pub fn hermitian_eigenvalues(a: &LinOperator) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(mismatch("hermitian_eigenvalues", "square", format!("{}×{}", a.rows(), a.cols())));
    }
    let defect = hermitian_defect(a);
    if defect > HERMITIAN_TOL * (1.0 + a.op_norm()) {
        return Err(Error::NotHermitian { asymmetry: defect });
    }
    Ok(sorted_eigenvalues(a.matrix()))
}

pub(crate) fn sorted_eigenvalues(m: &DMatrix<Scalar>) -> Vec<f64> {
    let sym = (m + m.adjoint()) * r(0.5);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn hermitian_defect(a: &LinOperator) -> f64 {
    svd::spectral_norm(&(a.matrix() - a.matrix().adjoint()))
}

pub(crate) fn rank_of(m: &DMatrix<Scalar>, rank_tol: f64) -> usize {
    svd::factor(m, rank_tol).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &LinOperator, b: &LinOperator, tol: f64) -> bool {
        a.distance(b).unwrap() <= tol
    }

    #[test]
    fn adjoint_examples() {
        let i2 = LinOperator::identity(2).unwrap();
        assert_eq!(adjoint(&i2), i2);

        let n = LinOperator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let nt = LinOperator::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(adjoint(&n), nt);

        let i = LinOperator::new(1, 1, vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(adjoint(&i).get(0, 0), c(0.0, -1.0));
        assert_eq!(adjoint(&adjoint(&i)), i);
    }

    #[test]
    fn op_norm_examples() {
        assert!((op_norm(&LinOperator::identity(2).unwrap()) - 1.0).abs() < 1e-15);
        let d = LinOperator::real_diagonal(&[3.0, -4.0]).unwrap();
        assert!((op_norm(&d) - 4.0).abs() < 1e-14);
        let ones = LinOperator::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert!((op_norm(&ones) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn pinv_examples() {
        let d = LinOperator::real_diagonal(&[2.0, 0.0]).unwrap();
        let expected = LinOperator::real_diagonal(&[0.5, 0.0]).unwrap();
        assert!(close(&pinv(&d), &expected, 1e-15));

        let i3 = LinOperator::identity(3).unwrap();
        assert!(close(&pinv(&i3), &i3, 1e-15));

        // Solving the four Penrose equations for a 2×1 column (1,1)ᵀ by hand
        // gives the row (1/2, 1/2).
        let col = LinOperator::from_real_rows(&[&[1.0], &[1.0]]).unwrap();
        let row = LinOperator::from_real_rows(&[&[0.5, 0.5]]).unwrap();
        assert!(close(&pinv(&col), &row, 1e-15));
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(LinOperator::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(LinOperator::new(0, 3, vec![]).is_err());
        assert!(HVector::new(vec![c(f64::INFINITY, 0.0)]).is_err());
        assert!(HVector::new(vec![]).is_err());
        assert!(LinOperator::from_rows(&[vec![r(1.0)], vec![r(1.0), r(2.0)]]).is_err());
    }

    #[test]
    fn projectors_on_rank_one() {
        let a = LinOperator::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let p = LinOperator::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(close(&range_projector(&a), &p, 1e-14));
        assert!(close(&corange_projector(&a), &p, 1e-14));
        let ns = null_space_basis(&a);
        assert_eq!(ns.ncols(), 1);
        let v = ns.column(0);
        assert!((v[0] + v[1]).norm() < 1e-14);
        assert!(null_space_basis(&LinOperator::identity(3).unwrap()).ncols() == 0);
    }

    #[test]
    fn null_space_of_invertible_matrix_is_empty() {
        // I − VV* is pure roundoff here; none of it may survive as a kernel.
        let mut rng = crate::rng::stream(5);
        for n in 1..10 {
            let a = LinOperator::from_matrix(crate::rng::gaussian_matrix(&mut rng, n, n)).unwrap();
            assert_eq!(null_space_basis(&a).ncols(), 0, "n = {n}");
        }
    }

    #[test]
    fn hermitian_eigenvalues_rejects_asymmetric() {
        let n = LinOperator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&n), Err(Error::NotHermitian { .. })));
        let h = LinOperator::from_rows(&[vec![r(2.0), c(0.0, 1.0)], vec![c(0.0, -1.0), r(2.0)]])
            .unwrap();
        let ev = hermitian_eigenvalues(&h).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn inner_is_linear_in_first_argument() {
        let a = HVector::new(vec![c(0.0, 1.0), r(0.0)]).unwrap();
        let b = HVector::new(vec![r(1.0), r(0.0)]).unwrap();
        assert_eq!(a.inner(&b).unwrap(), c(0.0, 1.0));
        assert_eq!(b.inner(&a).unwrap(), c(0.0, -1.0));
    }
}
