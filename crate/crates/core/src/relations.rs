//! Linear relations (graphs) in `H`: subspaces of `H × H`.
//!
//! A relation is stored as a `G ⊕ G`-orthonormal basis of its graph in
//! `C^{2d}`, stacked as `[X; Y]` so that the columns are the pairs `(x, y)`.
//! Operators and genuinely multivalued graphs share this representation.

use crate::error::{Error, Result};
use crate::forms::{self, SectorParams};
use crate::hilbert::{HSpace, Subspace, DEFAULT_RANK_TOL};
use crate::linalg::{self, CMatrix, CVector, C64};

/// Gap tolerance for the `A = A° ⊕ ({0} × D(A)^⊥)` reconstruction.
pub const DECOMPOSITION_TOL: f64 = 1e-8;

/// Orthogonality tolerance between the multivalued part and the domain.
const ORTHOGONALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct LinearRelation {
    space: HSpace,
    graph: Subspace,
}

/// Result of inverting a relation.
#[derive(Debug, Clone)]
pub enum Inversion {
    /// The inverse is an everywhere-defined operator.
    Invertible(CMatrix),
    /// The reflected graph `{(y, x)}`, which is not an everywhere-defined operator.
    NotInvertible(LinearRelation),
}

impl Inversion {
    pub fn is_invertible(&self) -> bool {
        matches!(self, Inversion::Invertible(_))
    }

    pub fn matrix(&self) -> Option<&CMatrix> {
        match self {
            Inversion::Invertible(m) => Some(m),
            Inversion::NotInvertible(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotMSectorialReason {
    /// Some `(0, y) ∈ A` has `y` not orthogonal to `D(A)`.
    MultivaluedNotOrthogonal,
    /// The pair inner products leave every sector at the maximal vertex.
    NumericalRange,
    /// `A - (γ - 1)I` is not invertible.
    NotInvertible,
}

impl std::fmt::Display for NotMSectorialReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NotMSectorialReason::MultivaluedNotOrthogonal => "multivalued part not orthogonal to domain",
            NotMSectorialReason::NumericalRange => "numerical range not in a sector at the maximal vertex",
            NotMSectorialReason::NotInvertible => "A - (γ - 1)I is not invertible",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MSector {
    MSectorial(SectorParams),
    NotMSectorial(NotMSectorialReason),
}

impl MSector {
    pub fn params(&self) -> Option<SectorParams> {
        match self {
            MSector::MSectorial(p) => Some(*p),
            MSector::NotMSectorial(_) => None,
        }
    }

    pub fn is_m_sectorial(&self) -> bool {
        matches!(self, MSector::MSectorial(_))
    }
}

/// `A°` in a basis of `D(A)` together with the reconstruction residual.
#[derive(Debug, Clone)]
pub struct SingleValuedPart {
    /// `D(A)`, whose basis fixes the coordinates of `matrix`.
    pub domain: Subspace,
    /// `A°` as a `k × k` matrix: `A°(B e) = B (matrix e)`.
    pub matrix: CMatrix,
    /// Gap between `A` and `graph(A°) ⊕ ({0} × D(A)^⊥)`.
    pub residual: f64,
}

impl SingleValuedPart {
    /// `A°` extended by zero on `D(A)^⊥`, as a `d × d` matrix.
    pub fn ambient_matrix(&self) -> CMatrix {
        let b = self.domain.basis();
        let g = self.domain.ambient().apply_gram(b);
        b * &self.matrix * g.adjoint()
    }

    pub fn reconstructs(&self) -> bool {
        self.residual <= DECOMPOSITION_TOL
    }
}

impl LinearRelation {
    /// Relation whose graph is spanned by the pairs `(xs[:, j], ys[:, j])`.
    pub fn from_pairs(space: &HSpace, xs: &CMatrix, ys: &CMatrix, tol: f64) -> Result<Self> {
        let d = space.dim();
        for m in [xs, ys] {
            if m.nrows() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: m.nrows(),
                });
            }
        }
        if xs.ncols() != ys.ncols() {
            return Err(Error::DimensionMismatch {
                expected: xs.ncols(),
                actual: ys.ncols(),
            });
        }
        let graph = Subspace::from_columns(&linalg::vstack(xs, ys), &space.product(), tol)?;
        Ok(LinearRelation {
            space: space.clone(),
            graph,
        })
    }

    /// Relation from a subspace of `H × H`.
    pub fn from_graph(space: &HSpace, graph: Subspace) -> Result<Self> {
        if graph.ambient() != &space.product() {
            return Err(Error::AmbientMismatch);
        }
        Ok(LinearRelation {
            space: space.clone(),
            graph,
        })
    }

    /// `{(x, M x) : x ∈ H}`.
    pub fn from_operator(space: &HSpace, m: &CMatrix) -> Result<Self> {
        let d = space.dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: m.nrows(),
            });
        }
        LinearRelation::from_pairs(space, &CMatrix::identity(d, d), m, DEFAULT_RANK_TOL)
    }

    /// `{0} × H`.
    pub fn zero_domain(space: &HSpace) -> Self {
        let d = space.dim();
        LinearRelation::from_pairs(space, &CMatrix::zeros(d, d), &CMatrix::identity(d, d), DEFAULT_RANK_TOL)
            .expect("square blocks")
    }

    pub fn ambient(&self) -> &HSpace {
        &self.space
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    pub fn tol(&self) -> f64 {
        self.graph.tol()
    }

    fn x_block(&self) -> CMatrix {
        self.graph.basis().rows(0, self.space.dim()).into_owned()
    }

    fn y_block(&self) -> CMatrix {
        let d = self.space.dim();
        self.graph.basis().rows(d, d).into_owned()
    }

    // Blocks of an orthonormal graph basis have whitened norm at most 1, so
    // rank decisions on them use an absolute cut.
    fn span(&self, cols: &CMatrix) -> Subspace {
        Subspace::from_columns_scaled(cols, &self.space, self.tol(), 1.0).expect("columns live in H")
    }

    fn block_null(&self, block: &CMatrix) -> CMatrix {
        linalg::null_space_scaled(&self.space.whiten(block), self.tol(), Some(1.0))
    }

    /// `D(A) = {x : ∃y, (x, y) ∈ A}`.
    pub fn domain(&self) -> Subspace {
        self.span(&self.x_block())
    }

    /// `{y : ∃x, (x, y) ∈ A}`.
    pub fn range(&self) -> Subspace {
        self.span(&self.y_block())
    }

    /// `{y : (0, y) ∈ A}`.
    pub fn multivalued_part(&self) -> Subspace {
        let null = self.block_null(&self.x_block());
        self.span(&(self.y_block() * null))
    }

    /// `{x : (x, 0) ∈ A}`.
    pub fn kernel(&self) -> Subspace {
        let null = self.block_null(&self.y_block());
        self.span(&(self.x_block() * null))
    }

    /// `(true, {0})` for operators, `(false, mul A)` otherwise.
    pub fn is_single_valued(&self) -> (bool, Subspace) {
        let mul = self.multivalued_part();
        (mul.is_zero(), mul)
    }

    pub fn contains(&self, x: &CVector, y: &CVector) -> bool {
        let mut pair = CVector::zeros(2 * self.space.dim());
        pair.rows_mut(0, x.len()).copy_from(x);
        pair.rows_mut(self.space.dim(), y.len()).copy_from(y);
        self.graph.contains(&pair)
    }

    /// `A + λI = {(x, y + λx)}`.
    pub fn shift(&self, lambda: C64) -> LinearRelation {
        let x = self.x_block();
        let y = self.y_block() + &x * lambda;
        LinearRelation::from_pairs(&self.space, &x, &y, self.tol()).expect("same shapes")
    }

    /// The reflected graph `{(y, x)}`.
    pub fn reflect(&self) -> LinearRelation {
        LinearRelation::from_pairs(&self.space, &self.y_block(), &self.x_block(), self.tol())
            .expect("same shapes")
    }

    /// Inverse as a matrix when `A` is injective and surjective.
    pub fn invert(&self) -> Inversion {
        let d = self.space.dim();
        let x = self.x_block();
        let y = self.y_block();
        let injective = self.kernel().is_zero();
        let surjective = linalg::range_basis_scaled(&self.space.whiten(&y), self.tol(), Some(1.0)).ncols() == d;
        if injective && surjective {
            Inversion::Invertible(x * linalg::pseudo_inverse(&y, self.tol()))
        } else {
            Inversion::NotInvertible(self.reflect())
        }
    }

    /// `(A - λI)^{-1}`.
    pub fn resolvent(&self, lambda: C64) -> Result<CMatrix> {
        match self.shift(-lambda).invert() {
            Inversion::Invertible(m) => Ok(m),
            Inversion::NotInvertible(_) => Err(Error::NotInResolventSet),
        }
    }

    pub fn in_resolvent_set(&self, lambda: C64) -> bool {
        self.shift(-lambda).invert().is_invertible()
    }

    /// Set equality of graphs up to `tol`.
    pub fn approx_eq(&self, other: &LinearRelation, tol: f64) -> bool {
        self.space == other.space && self.graph.approx_eq(&other.graph, tol)
    }

    /// Largest `|(y, x)|` over unit `x ∈ D(A)` and unit `y ∈ mul A`.
    fn multivalued_overlap(&self, domain: &Subspace) -> f64 {
        let mul = self.multivalued_part();
        if mul.is_zero() || domain.is_zero() {
            return 0.0;
        }
        linalg::op_norm(&(self.space.apply_gram(domain.basis()).adjoint() * mul.basis()))
    }

    /// `A°` in coordinates of a basis of `D(A)`, without requiring m-sectoriality.
    pub fn operator_part(&self) -> SingleValuedPart {
        let domain = self.domain();
        let b = domain.basis();
        let coeffs = linalg::pseudo_inverse(&self.x_block(), self.tol()) * b;
        let matrix = self.space.apply_gram(b).adjoint() * self.y_block() * coeffs;
        let perp = domain.ortho_complement();
        let d = self.space.dim();
        let xs = linalg::hstack(b, &CMatrix::zeros(d, perp.dim()));
        let ys = linalg::hstack(&(b * &matrix), perp.basis());
        let rebuilt = LinearRelation::from_pairs(&self.space, &xs, &ys, self.tol())
            .expect("shapes agree");
        let residual = if rebuilt.graph.dim() != self.graph.dim() {
            1.0
        } else {
            rebuilt.graph.gap(&self.graph).unwrap_or(1.0)
        };
        SingleValuedPart {
            domain,
            matrix,
            residual,
        }
    }

    /// `A° = A ∩ (D(A) × D(A))` with a certificate that `A = A° ⊕ ({0} × D(A)^⊥)`.
    pub fn single_valued_part(&self) -> Result<SingleValuedPart> {
        let part = self.operator_part();
        if !part.reconstructs() {
            return Err(Error::DecompositionFailure {
                residual: part.residual,
            });
        }
        Ok(part)
    }

    /// Minimal `tan θ` with `(y - γx, x) ∈ Σ_θ` on the graph, if `γ` is admissible.
    pub fn tan_theta_at_vertex(&self, vertex: f64) -> Option<f64> {
        let part = self.operator_part();
        if self.multivalued_overlap(&part.domain) > ORTHOGONALITY_TOL {
            return None;
        }
        forms::tan_theta_at_vertex(&part.matrix, vertex, self.tol())
    }

    /// Numerical-range condition at `vertex` plus invertibility of `A - (γ - 1)I`.
    pub fn is_m_sectorial_at(&self, vertex: f64) -> bool {
        self.tan_theta_at_vertex(vertex).is_some() && self.in_resolvent_set(C64::new(vertex - 1.0, 0.0))
    }

    /// Maximal vertex and minimal semi-angle, or the first failed condition.
    pub fn sector(&self) -> MSector {
        let part = self.operator_part();
        if self.multivalued_overlap(&part.domain) > ORTHOGONALITY_TOL {
            return MSector::NotMSectorial(NotMSectorialReason::MultivaluedNotOrthogonal);
        }
        let params = match forms::analyze_sector(&part.matrix, self.tol()).params() {
            Some(p) => p,
            None => return MSector::NotMSectorial(NotMSectorialReason::NumericalRange),
        };
        if !self.in_resolvent_set(C64::new(params.vertex - 1.0, 0.0)) {
            return MSector::NotMSectorial(NotMSectorialReason::NotInvertible);
        }
        MSector::MSectorial(params)
    }

    /// A vertex at which `A` is m-sectorial: the maximal one when possible,
    /// otherwise one unit below it.
    pub fn certified_vertex(&self) -> Result<f64> {
        match self.sector() {
            MSector::MSectorial(p) => Ok(p.vertex),
            MSector::NotMSectorial(NotMSectorialReason::NumericalRange) => {
                let vertex = self.max_vertex() - 1.0;
                if self.is_m_sectorial_at(vertex) {
                    Ok(vertex)
                } else {
                    Err(Error::NotMSectorial(NotMSectorialReason::NumericalRange.to_string()))
                }
            }
            MSector::NotMSectorial(reason) => Err(Error::NotMSectorial(reason.to_string())),
        }
    }

    /// Alias of [`LinearRelation::sector`].
    pub fn is_m_sectorial(&self) -> MSector {
        self.sector()
    }

    /// `max Re(y, x)/‖x‖²`-type lower bound: the largest admissible vertex.
    pub fn max_vertex(&self) -> f64 {
        let part = self.operator_part();
        if part.domain.is_zero() {
            return 0.0;
        }
        linalg::min_eigenvalue(&linalg::hermitian_part(&part.matrix))
    }
}
