//! Dense complex linear algebra: Hermitian eigendecomposition, matrix
//! exponential, SVD null spaces and density-matrix validation.
//!
//! All matrices are column-major `nalgebra` matrices, so the column-stacking
//! `vec(X)` is the raw storage order of `X`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::format::cmatrix_serde;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn to_complex(m: &DMatrix<f64>) -> ComplexMatrix {
    m.map(|x| c(x, 0.0))
}

pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

/// Largest entry modulus.
pub fn max_norm(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn hermitian_violation(m: &ComplexMatrix) -> f64 {
    max_norm(&(m - m.adjoint()))
}

pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Column-stacking vectorization.
pub fn vectorize(m: &ComplexMatrix) -> ComplexVector {
    ComplexVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vectorize`] for an `n x n` matrix.
pub fn unvectorize(v: &ComplexVector, n: usize) -> ComplexMatrix {
    assert_eq!(v.len(), n * n, "vector length is not n^2");
    ComplexMatrix::from_column_slice(n, n, v.as_slice())
}

fn ensure_square(a: &ComplexMatrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    Ok(())
}

fn ensure_finite(a: &ComplexMatrix) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Real spectrum with an orthonormal eigenbasis, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector for `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&x| c(x, 0.0)),
        ));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }
}

/// Eigendecomposition of a Hermitian matrix. With `assert_hermitian` the
/// input must satisfy `||a - a^dagger||_max <= 1e-10`; otherwise the
/// Hermitian part `(a + a^dagger)/2` is decomposed.
pub fn hermitian_eig(a: &ComplexMatrix, assert_hermitian: bool) -> Result<Spectrum> {
    ensure_square(a)?;
    ensure_finite(a)?;
    if assert_hermitian {
        let violation = hermitian_violation(a);
        if violation > Tolerances::default().hermitian {
            return Err(Error::NotHermitian { violation });
        }
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(Spectrum { eigenvalues: vec![], eigenvectors: a.clone() });
    }
    let eig = hermitize(a).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let eigenvalues = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
pub fn symmetric_eig(a: &DMatrix<f64>) -> Result<Spectrum> {
    hermitian_eig(&to_complex(a), true)
}

/// Matrix exponential by scaling and squaring with Pade approximants.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(a)?;
    ensure_finite(a)?;
    if a.nrows() == 0 {
        return Ok(a.clone());
    }
    Ok(a.exp())
}

pub fn expm_real(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if a.nrows() == 0 {
        return Ok(a.clone());
    }
    Ok(a.exp())
}

/// Threshold below which a singular value counts as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankTolerance {
    /// Multiple of the largest singular value.
    Relative(f64),
    Absolute(f64),
}

impl Default for RankTolerance {
    fn default() -> Self {
        RankTolerance::Relative(Tolerances::default().rank)
    }
}

/// Null space together with the singular values that decided it.
#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Orthonormal basis vectors.
    pub basis: Vec<ComplexVector>,
    pub largest_singular_value: f64,
    /// Smallest singular value of the (square-padded) matrix.
    pub smallest_singular_value: f64,
    /// Smallest singular value that was kept as nonzero, if any.
    pub smallest_retained: Option<f64>,
    pub threshold: f64,
}

impl NullSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Orthonormal basis of the right null space of `a`.
pub fn null_space(a: &ComplexMatrix, tol: RankTolerance) -> Result<Vec<ComplexVector>> {
    null_space_detail(a, tol).map(|ns| ns.basis)
}

pub fn null_space_detail(a: &ComplexMatrix, tol: RankTolerance) -> Result<NullSpace> {
    ensure_finite(a)?;
    let cols = a.ncols();
    if cols == 0 {
        return Ok(NullSpace {
            basis: vec![],
            largest_singular_value: 0.0,
            smallest_singular_value: 0.0,
            smallest_retained: None,
            threshold: 0.0,
        });
    }
    // Wide matrices are padded with zero rows so the SVD yields a full V.
    let padded = if a.nrows() < cols {
        let mut p = ComplexMatrix::zeros(cols, cols);
        p.rows_mut(0, a.nrows()).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let sigma = &svd.singular_values;
    let v_t = svd.v_t.expect("V requested");
    let largest = sigma.iter().copied().fold(0.0_f64, f64::max);
    let smallest = sigma.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = match tol {
        RankTolerance::Relative(r) => r * largest,
        RankTolerance::Absolute(t) => t,
    };

    if largest == 0.0 {
        let basis =
            (0..cols).map(|j| ComplexVector::from_fn(cols, |i, _| c(if i == j { 1.0 } else { 0.0 }, 0.0))).collect();
        return Ok(NullSpace {
            basis,
            largest_singular_value: 0.0,
            smallest_singular_value: 0.0,
            smallest_retained: None,
            threshold,
        });
    }

    let mut basis = Vec::new();
    let mut smallest_retained: Option<f64> = None;
    for (i, &s) in sigma.iter().enumerate() {
        if s <= threshold {
            basis.push(v_t.row(i).adjoint());
        } else {
            smallest_retained = Some(smallest_retained.map_or(s, |m: f64| m.min(s)));
        }
    }
    Ok(NullSpace {
        basis,
        largest_singular_value: largest,
        smallest_singular_value: smallest,
        smallest_retained,
        threshold,
    })
}

/// Eigenvalues of a general square complex matrix via the Schur form.
pub fn general_eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    ensure_square(a)?;
    ensure_finite(a)?;
    // The deflation test rarely passes at machine epsilon itself, so try a
    // short ladder of thresholds, tightest first.
    let max_iter = 200 * a.nrows().max(10);
    for eps in [1e-15, 1e-14, 1e-12] {
        if let Some(schur) = a.clone().try_schur(eps, max_iter) {
            let (_, t) = schur.unpack();
            return Ok(t.diagonal().iter().copied().collect());
        }
    }
    Err(Error::InvalidArgument("Schur iteration did not converge".into()))
}

/// Trace-one Hermitian positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DensityMatrix {
    #[serde(with = "cmatrix_serde")]
    data: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates with the default tolerances.
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        validate_density(&a)
    }

    /// Wraps without checking. Callers must guarantee the invariants.
    pub fn new_unchecked(data: ComplexMatrix) -> Self {
        Self { data }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self { data: ComplexMatrix::identity(n, n).scale(1.0 / n as f64) }
    }

    /// `|j><j|`.
    pub fn vertex(n: usize, j: usize) -> Self {
        let mut data = ComplexMatrix::zeros(n, n);
        data[(j, j)] = c(1.0, 0.0);
        Self { data }
    }

    /// `|psi><psi|` for a unit vector.
    pub fn pure(psi: &ComplexVector) -> Self {
        Self { data: psi * psi.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.data
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.data
    }

    /// Real diagonal, i.e. the site occupation distribution.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.data[(j, j)].re).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eig(&self.data, false).map(|s| s.min()).unwrap_or(f64::NAN)
    }
}

/// Validates `a` as a density matrix with the default tolerances.
pub fn validate_density(a: &ComplexMatrix) -> Result<DensityMatrix> {
    validate_density_with(a, &Tolerances::default(), Tolerances::default().psd)
}

/// Validates `a`, Hermitizing first when the asymmetry is within tolerance.
pub fn validate_density_with(a: &ComplexMatrix, tol: &Tolerances, psd_tol: f64) -> Result<DensityMatrix> {
    ensure_square(a)?;
    ensure_finite(a)?;
    let violation = hermitian_violation(a);
    if violation > tol.hermitian {
        return Err(Error::NotHermitian { violation });
    }
    let h = hermitize(a);
    let deviation = (h.trace() - c(1.0, 0.0)).norm();
    if deviation > tol.trace {
        return Err(Error::Trace { deviation });
    }
    let min_eigenvalue = hermitian_eig(&h, false)?.min();
    if min_eigenvalue < -psd_tol {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(DensityMatrix { data: h })
}

/// Random full-rank state `G G^dagger / tr(G G^dagger)` with independent
/// complex standard-normal entries in `G`.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let p = &g * g.adjoint();
    let tr = p.trace().re;
    DensityMatrix::new_unchecked(hermitize(&p.unscale(tr)))
}

/// Random unit vector with complex standard-normal components.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    let v = ComplexVector::from_fn(n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let norm = v.norm();
    v.unscale(norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn real(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
        to_complex(&DMatrix::from_row_slice(rows, cols, data))
    }

    fn path3_laplacian() -> ComplexMatrix {
        real(3, 3, &[1., -1., 0., -1., 2., -1., 0., -1., 1.])
    }

    #[test]
    fn path3_laplacian_spectrum() {
        let s = hermitian_eig(&path3_laplacian(), true).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([0.0, 1.0, 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        assert!(max_norm(&(s.reconstruct() - path3_laplacian())) < 1e-12);
    }

    #[test]
    fn identity_and_cycle_spectra() {
        let s = hermitian_eig(&ComplexMatrix::identity(4, 4), true).unwrap();
        assert_eq!(s.eigenvalues.len(), 4);
        assert!(s.eigenvalues.iter().all(|&x| (x - 1.0).abs() < 1e-14));
        // char. poly of the 3-cycle Laplacian: -x (x - 3)^2
        let l = real(3, 3, &[2., -1., -1., -1., 2., -1., -1., -1., 2.]);
        let s = hermitian_eig(&l, true).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([0.0, 3.0, 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn eig_errors() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&rect, true), Err(Error::NotSquare { .. })));
        let mut a = ComplexMatrix::zeros(2, 2);
        a[(0, 1)] = c(1.0, 0.0);
        match hermitian_eig(&a, true) {
            Err(Error::NotHermitian { violation }) => assert_abs_diff_eq!(violation, 1.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(hermitian_eig(&a, false).is_ok());
    }

    #[test]
    fn expm_examples() {
        let z = ComplexMatrix::zeros(3, 3);
        assert_eq!(expm(&z).unwrap(), ComplexMatrix::identity(3, 3));
        let d = real(2, 2, &[1., 0., 0., 2.]);
        let e = expm(&d).unwrap();
        assert!((e[(0, 0)].re - 1f64.exp()).abs() < 1e-14 * 1f64.exp());
        assert!((e[(1, 1)].re - 2f64.exp()).abs() < 1e-14 * 2f64.exp());
        assert!(e[(0, 1)].norm() < 1e-15);
        let nil = real(2, 2, &[0., 1., 0., 0.]);
        assert!(max_norm(&(expm(&nil).unwrap() - real(2, 2, &[1., 1., 0., 1.]))) < 1e-15);
    }

    #[test]
    fn expm_errors() {
        assert!(matches!(expm(&ComplexMatrix::zeros(2, 1)), Err(Error::NotSquare { .. })));
        let mut a = ComplexMatrix::zeros(2, 2);
        a[(0, 0)] = c(f64::NAN, 0.0);
        assert!(matches!(expm(&a), Err(Error::NonFinite)));
    }

    #[test]
    fn expm_large_norm_relative_accuracy() {
        // diag(-500, 300) scaled check against the scalar exponentials
        let a = real(2, 2, &[-500., 0., 0., 300.]);
        let e = expm(&a).unwrap();
        assert!((e[(1, 1)].re / 300f64.exp() - 1.0).abs() < 1e-12);
        assert!(e[(0, 0)].re.abs() <= 1e-200);
    }

    #[test]
    fn null_space_examples() {
        let ns = null_space(&path3_laplacian(), RankTolerance::default()).unwrap();
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        let phase = v[0] / v[0].norm();
        for j in 0..3 {
            assert_abs_diff_eq!((v[j] / phase).re, 3f64.sqrt() / 3.0, epsilon = 1e-12);
            assert_abs_diff_eq!((v[j] / phase).im, 0.0, epsilon = 1e-12);
        }
        assert!(null_space(&ComplexMatrix::identity(4, 4), RankTolerance::default()).unwrap().is_empty());
    }

    #[test]
    fn null_space_of_wide_and_zero_matrices() {
        let wide = real(1, 3, &[1., 1., 1.]);
        let ns = null_space(&wide, RankTolerance::default()).unwrap();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&wide * v).norm() < 1e-14);
        }
        assert_eq!(null_space(&ComplexMatrix::zeros(0, 4), RankTolerance::default()).unwrap().len(), 4);
        assert_eq!(null_space(&ComplexMatrix::zeros(3, 2), RankTolerance::Absolute(1e-12)).unwrap().len(), 2);
    }

    #[test]
    fn validate_density_examples() {
        let mixed = ComplexMatrix::identity(3, 3).scale(1.0 / 3.0);
        assert!(validate_density(&mixed).is_ok());
        let bad = real(2, 2, &[1.2, 0., 0., -0.2]);
        match validate_density(&bad) {
            Err(Error::NotPositive { min_eigenvalue }) => assert_abs_diff_eq!(min_eigenvalue, -0.2, epsilon = 1e-14),
            other => panic!("unexpected {other:?}"),
        }
        let trace2 = ComplexMatrix::identity(2, 2);
        assert!(matches!(validate_density(&trace2), Err(Error::Trace { .. })));
        let mut nh = mixed.clone();
        nh[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(validate_density(&nh), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn validate_hermitizes_small_asymmetry() {
        let mut a = ComplexMatrix::identity(2, 2).scale(0.5);
        a[(0, 1)] = c(1e-12, 0.0);
        let rho = validate_density(&a).unwrap();
        assert_eq!(rho.matrix()[(0, 1)], rho.matrix()[(1, 0)].conj());
    }

    #[test]
    fn random_density_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..6 {
            let rho = random_density(n, &mut rng);
            assert!(validate_density(rho.matrix()).is_ok());
            assert!(rho.min_eigenvalue() > 0.0);
        }
    }

    #[test]
    fn general_eigenvalues_of_triangular() {
        let mut a = ComplexMatrix::zeros(3, 3);
        a[(0, 0)] = c(-1.0, 2.0);
        a[(1, 1)] = c(0.5, 0.0);
        a[(2, 2)] = c(0.0, -3.0);
        a[(0, 2)] = c(4.0, 1.0);
        let mut ev = general_eigenvalues(&a).unwrap();
        ev.sort_by(|x, y| x.re.total_cmp(&y.re));
        assert!((ev[0] - c(-1.0, 2.0)).norm() < 1e-12);
        assert!((ev[1] - c(0.0, -3.0)).norm() < 1e-12);
        assert!((ev[2] - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn vectorization_is_column_stacking() {
        let m = ComplexMatrix::from_fn(2, 2, |r, col| c((r + 2 * col) as f64, 0.0));
        let v = vectorize(&m);
        assert_eq!(v.iter().map(|z| z.re).collect::<Vec<_>>(), vec![0., 1., 2., 3.]);
        assert_eq!(unvectorize(&v, 2), m);
    }
}
