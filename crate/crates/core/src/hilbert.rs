//! Finite-dimensional complex Hilbert spaces and their subspaces.
//!
//! An [`HSpace`] is `C^d` with either the standard inner product or
//! `(u, v) = v* G u` for a Hermitian positive-definite Gram matrix `G`.
//! Every [`Subspace`] carries a `G`-orthonormal basis, and all set-level
//! operations reduce to one relative singular-value threshold (`tol`).

use std::sync::Arc;

use nalgebra::Cholesky;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64};

/// Default relative singular-value threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Membership tests accept a relative residual up to this multiple of `tol`.
const MEMBERSHIP_FACTOR: f64 = 1e3;

#[derive(Debug)]
struct Gram {
    gram: CMatrix,
    /// `L*` for `G = L L*`.
    l_adj: CMatrix,
    /// `(L*)^{-1}`.
    l_adj_inv: CMatrix,
}

/// `C^d` with an optional weighted inner product.
#[derive(Debug, Clone)]
pub struct HSpace {
    dim: usize,
    gram: Option<Arc<Gram>>,
}

impl PartialEq for HSpace {
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        match (&self.gram, &other.gram) {
            (None, None) => true,
            (Some(a), Some(b)) if Arc::ptr_eq(a, b) => true,
            _ => {
                let diff = (self.gram_matrix() - other.gram_matrix()).norm();
                diff <= 1e-12 * (1.0 + self.gram_matrix().norm())
            }
        }
    }
}

impl HSpace {
    /// `C^dim` with the standard inner product.
    pub fn new(dim: usize) -> Self {
        HSpace { dim, gram: None }
    }

    /// `C^d` with `(u, v) = v* G u`.
    pub fn with_gram(gram: CMatrix) -> Result<Self> {
        let dim = gram.nrows();
        if gram.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: gram.ncols(),
            });
        }
        let asym = (&gram - gram.adjoint()).norm();
        if asym > 1e-10 * (1.0 + gram.norm()) {
            return Err(Error::InvalidGram);
        }
        let gram = linalg::hermitian_part(&gram);
        if dim > 0 && linalg::min_eigenvalue(&gram) <= 0.0 {
            return Err(Error::InvalidGram);
        }
        let chol = Cholesky::new(gram.clone()).ok_or(Error::InvalidGram)?;
        let l_adj = chol.l().adjoint();
        let l_adj_inv = l_adj.clone().try_inverse().ok_or(Error::InvalidGram)?;
        Ok(HSpace {
            dim,
            gram: Some(Arc::new(Gram {
                gram,
                l_adj,
                l_adj_inv,
            })),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_standard(&self) -> bool {
        self.gram.is_none()
    }

    pub fn gram_matrix(&self) -> CMatrix {
        match &self.gram {
            Some(g) => g.gram.clone(),
            None => CMatrix::identity(self.dim, self.dim),
        }
    }

    /// `G x` (columnwise).
    pub fn apply_gram(&self, x: &CMatrix) -> CMatrix {
        match &self.gram {
            Some(g) => &g.gram * x,
            None => x.clone(),
        }
    }

    /// Coordinates in which this inner product becomes the standard one.
    pub fn whiten(&self, x: &CMatrix) -> CMatrix {
        match &self.gram {
            Some(g) => &g.l_adj * x,
            None => x.clone(),
        }
    }

    pub fn unwhiten(&self, y: &CMatrix) -> CMatrix {
        match &self.gram {
            Some(g) => &g.l_adj_inv * y,
            None => y.clone(),
        }
    }

    /// `(u, v) = v* G u`.
    pub fn inner(&self, u: &CVector, v: &CVector) -> C64 {
        match &self.gram {
            Some(g) => (v.adjoint() * &g.gram * u)[(0, 0)],
            None => v.dotc(u),
        }
    }

    pub fn norm(&self, u: &CVector) -> f64 {
        self.inner(u, u).re.max(0.0).sqrt()
    }

    /// `G`-adjoint of an operator: `G^{-1} M* G`.
    pub fn adjoint(&self, m: &CMatrix) -> CMatrix {
        match &self.gram {
            Some(g) => {
                let ginv = &g.l_adj_inv * g.l_adj_inv.adjoint();
                ginv * m.adjoint() * &g.gram
            }
            None => m.adjoint(),
        }
    }

    /// Operator norm induced by this inner product.
    pub fn operator_norm(&self, m: &CMatrix) -> f64 {
        match &self.gram {
            Some(g) => linalg::op_norm(&(&g.l_adj * m * &g.l_adj_inv)),
            None => linalg::op_norm(m),
        }
    }

    /// `H × H` with the block-diagonal Gram matrix.
    pub fn product(&self) -> HSpace {
        match &self.gram {
            Some(g) => HSpace {
                dim: 2 * self.dim,
                gram: Some(Arc::new(Gram {
                    gram: linalg::block_diag(&g.gram, &g.gram),
                    l_adj: linalg::block_diag(&g.l_adj, &g.l_adj),
                    l_adj_inv: linalg::block_diag(&g.l_adj_inv, &g.l_adj_inv),
                })),
            },
            None => HSpace::new(2 * self.dim),
        }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: n,
            });
        }
        Ok(())
    }
}

/// A linear subspace of an [`HSpace`] with a `G`-orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    space: HSpace,
    basis: CMatrix,
    tol: f64,
}

/// `G`-orthonormal span of `vectors`.
pub fn orthonormalize(vectors: &[CVector], space: &HSpace, tol: f64) -> Result<Subspace> {
    let mut cols = CMatrix::zeros(space.dim(), vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        space.check_dim(v.len())?;
        cols.set_column(j, v);
    }
    Subspace::from_columns(&cols, space, tol)
}

impl Subspace {
    /// Span of the columns of `cols`.
    pub fn from_columns(cols: &CMatrix, space: &HSpace, tol: f64) -> Result<Self> {
        space.check_dim(cols.nrows())?;
        let white = space.whiten(cols);
        let basis = space.unwhiten(&linalg::range_basis(&white, tol));
        Ok(Subspace {
            space: space.clone(),
            basis,
            tol,
        })
    }

    /// Span with an absolute cut `tol * scale` on whitened singular values.
    pub fn from_columns_scaled(cols: &CMatrix, space: &HSpace, tol: f64, scale: f64) -> Result<Self> {
        space.check_dim(cols.nrows())?;
        let white = space.whiten(cols);
        let basis = space.unwhiten(&linalg::range_basis_scaled(&white, tol, Some(scale)));
        Ok(Subspace {
            space: space.clone(),
            basis,
            tol,
        })
    }

    pub fn zero(space: &HSpace) -> Self {
        Subspace {
            space: space.clone(),
            basis: CMatrix::zeros(space.dim(), 0),
            tol: DEFAULT_RANK_TOL,
        }
    }

    pub fn full(space: &HSpace) -> Self {
        Subspace {
            space: space.clone(),
            basis: space.unwhiten(&CMatrix::identity(space.dim(), space.dim())),
            tol: DEFAULT_RANK_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn ambient(&self) -> &HSpace {
        &self.space
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.space.dim()
    }

    /// Basis in whitened coordinates (standard-orthonormal columns).
    fn white_basis(&self) -> CMatrix {
        self.space.whiten(&self.basis)
    }

    /// The `G`-orthogonal projector onto this subspace, `B B* G`.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.space.apply_gram(&self.basis).adjoint()
    }

    /// Coordinates `B* G u` of `u` in this basis.
    pub fn coordinates(&self, u: &CVector) -> CVector {
        self.space.apply_gram(&self.basis).adjoint() * u
    }

    /// Relative distance `‖u - P u‖ / ‖u‖` (zero for `u = 0`).
    pub fn relative_distance(&self, u: &CVector) -> f64 {
        let norm = self.space.norm(u);
        if norm == 0.0 {
            return 0.0;
        }
        let residual = u - &self.basis * self.coordinates(u);
        self.space.norm(&residual) / norm
    }

    pub fn contains(&self, u: &CVector) -> bool {
        self.relative_distance(u) <= MEMBERSHIP_FACTOR * self.tol
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.space != other.space {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// `G`-orthogonal complement.
    pub fn ortho_complement(&self) -> Subspace {
        let white = self.white_basis();
        let comp = if white.ncols() == 0 {
            CMatrix::identity(self.space.dim(), self.space.dim())
        } else {
            linalg::null_space(&white.adjoint(), self.tol)
        };
        Subspace {
            space: self.space.clone(),
            basis: self.space.unwhiten(&comp),
            tol: self.tol,
        }
    }

    /// `S + T`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let cols = linalg::hstack(&self.basis, &other.basis);
        Subspace::from_columns(&cols, &self.space, self.tol.max(other.tol))
    }

    /// `S ∩ T = (S^⊥ + T^⊥)^⊥`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        Ok(self
            .ortho_complement()
            .sum(&other.ortho_complement())?
            .ortho_complement())
    }

    /// Gap `‖P_S - P_T‖` measured in the ambient inner product.
    pub fn gap(&self, other: &Subspace) -> Result<f64> {
        self.check_same_ambient(other)?;
        let a = self.white_basis();
        let b = other.white_basis();
        Ok(linalg::op_norm(&(&a * a.adjoint() - &b * b.adjoint())))
    }

    /// Set equality up to `tol` on the projector gap.
    pub fn approx_eq(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim() && self.gap(other).map(|g| g <= tol).unwrap_or(false)
    }

    /// `S ⊆ T` up to `tol` (every basis vector of `S` is within `tol` of `T`).
    pub fn is_subset_of(&self, other: &Subspace, tol: f64) -> Result<bool> {
        self.check_same_ambient(other)?;
        Ok((0..self.dim()).all(|j| {
            let v = self.basis.column(j).into_owned();
            other.relative_distance(&v) <= tol
        }))
    }
}

/// Matrix exponential (Padé scaling and squaring).
pub fn matrix_exp(m: &CMatrix) -> CMatrix {
    assert!(m.is_square(), "matrix_exp needs a square matrix");
    if m.nrows() == 0 {
        return m.clone();
    }
    m.exp()
}

/// Orthogonal projector onto a subspace; see [`Subspace::projector`].
pub fn projector(s: &Subspace) -> CMatrix {
    s.projector()
}
