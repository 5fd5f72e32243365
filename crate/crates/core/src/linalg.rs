//! Dense complex helpers shared by the rest of the crate.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

#[cfg(test)]
pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
#[cfg(test)]
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `(M + M*) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `(M - M*) / 2i`, Hermitian, so that `x* M x = x* H x + i x* S x`.
pub fn skew_part(m: &CMatrix) -> CMatrix {
    (m - m.adjoint()) * c(0.0, -0.5)
}

/// Full SVD whose reconstruction is verified.
///
/// The complex bidiagonal iteration occasionally stalls on a spurious split
/// at machine epsilon and returns factors off by `1e-3`. A looser epsilon or
/// the adjoint avoids it.
fn svd(m: &CMatrix) -> SVD<C64, nalgebra::Dyn, nalgebra::Dyn> {
    let scale = m.norm().max(f64::MIN_POSITIVE) * m.nrows().max(m.ncols()) as f64;
    let ok = |s: &SVD<C64, nalgebra::Dyn, nalgebra::Dyn>, target: &CMatrix| {
        match (&s.u, &s.v_t) {
            (Some(u), Some(vt)) => {
                let sigma = CMatrix::from_diagonal(&s.singular_values.map(real));
                (u * sigma * vt - target).norm() <= 1e-12 * scale
            }
            _ => false,
        }
    };
    let first = SVD::new(m.clone(), true, true);
    if ok(&first, m) {
        return first;
    }
    for eps in [1e-13, 1e-12] {
        if let Some(s) = SVD::try_new(m.clone(), true, true, eps * scale, 0) {
            if ok(&s, m) {
                return s;
            }
        }
    }
    let adj = m.adjoint();
    let t = SVD::new(adj.clone(), true, true);
    if ok(&t, &adj) {
        return SVD {
            u: t.v_t.map(|v| v.adjoint()),
            v_t: t.u.map(|u| u.adjoint()),
            singular_values: t.singular_values,
        };
    }
    first
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    svd(m)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted ascending.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(h));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn min_eigenvalue(h: &CMatrix) -> f64 {
    hermitian_eigen(h).0.first().copied().unwrap_or(f64::INFINITY)
}

/// Columns of `basis` selected by `keep`.
pub fn select_columns(basis: &CMatrix, keep: &[usize]) -> CMatrix {
    let mut out = CMatrix::zeros(basis.nrows(), keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        out.set_column(dst, &basis.column(src));
    }
    out
}

/// Orthonormal (standard inner product) basis of the column space, truncating
/// singular values at `tol * σ_max`.
pub fn range_basis(m: &CMatrix, tol: f64) -> CMatrix {
    range_basis_scaled(m, tol, None)
}

/// As [`range_basis`], cutting at `tol * scale` instead of `tol * σ_max` when `scale` is given.
pub fn range_basis_scaled(m: &CMatrix, tol: f64, scale: Option<f64>) -> CMatrix {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return CMatrix::zeros(rows, 0);
    }
    let svd = svd(m);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let u = svd.u.expect("left singular vectors requested");
    if smax <= f64::MIN_POSITIVE && scale.is_none() {
        return CMatrix::zeros(rows, 0);
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > tol * scale.unwrap_or(smax))
        .collect();
    select_columns(&u, &keep)
}

/// Orthonormal basis of `{x : M x = 0}` with a relative singular-value cut.
pub fn null_space(m: &CMatrix, tol: f64) -> CMatrix {
    null_space_scaled(m, tol, None)
}

/// As [`null_space`] with an optional absolute scale for the cut.
pub fn null_space_scaled(m: &CMatrix, tol: f64, scale: Option<f64>) -> CMatrix {
    let cols = m.ncols();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMatrix::identity(cols, cols);
    }
    // Pad with zero rows so the SVD returns a full right basis.
    let rows = m.nrows().max(cols);
    let mut padded = CMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = svd(&padded);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let v = svd.v_t.expect("right singular vectors requested").adjoint();
    if smax <= f64::MIN_POSITIVE && scale.is_none() {
        return CMatrix::identity(cols, cols);
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= tol * scale.unwrap_or(smax))
        .collect();
    select_columns(&v, &keep)
}

/// Numerical rank with a relative cut.
pub fn rank(m: &CMatrix, tol: f64) -> usize {
    range_basis(m, tol).ncols()
}

/// Moore-Penrose pseudo-inverse with a relative cut.
pub fn pseudo_inverse(m: &CMatrix, tol: f64) -> CMatrix {
    let (r, cdim) = m.shape();
    if r == 0 || cdim == 0 {
        return CMatrix::zeros(cdim, r);
    }
    let svd = svd(m);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v requested");
    let mut out = CMatrix::zeros(cdim, r);
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > tol * smax && s > 0.0 {
            out += vt.row(i).adjoint() * u.column(i).adjoint() * real(1.0 / s);
        }
    }
    out
}

/// `M^n` by repeated squaring.
pub fn matrix_power(m: &CMatrix, mut n: u64) -> CMatrix {
    let dim = m.nrows();
    let mut result = CMatrix::identity(dim, dim);
    let mut base = m.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

/// `‖x‖²` for the Hermitian form `x* H x`, real part.
pub fn quad(h: &CMatrix, x: &CVector) -> C64 {
    (x.adjoint() * h * x)[(0, 0)]
}

/// Stack two equally wide matrices vertically.
pub fn vstack(top: &CMatrix, bottom: &CMatrix) -> CMatrix {
    assert_eq!(top.ncols(), bottom.ncols());
    let mut out = CMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.view_mut((0, 0), top.shape()).copy_from(top);
    out.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    out
}

/// Concatenate two matrices with equal row counts.
pub fn hstack(left: &CMatrix, right: &CMatrix) -> CMatrix {
    assert_eq!(left.nrows(), right.nrows());
    let mut out = CMatrix::zeros(left.nrows(), left.ncols() + right.ncols());
    out.view_mut((0, 0), left.shape()).copy_from(left);
    out.view_mut((0, left.ncols()), right.shape()).copy_from(right);
    out
}

pub fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut(a.shape(), b.shape()).copy_from(b);
    out
}
