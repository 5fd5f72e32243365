//! Graphs associated with forms.
//!
//! A closed form `a` on `D(a) ⊆ H` has the graph
//! `{(u, f) ∈ D(a) × H : a(u, v) = (f, v) for all v ∈ D(a)}`. A represented
//! form `(ã, j)` lives on an auxiliary space `V` with a map `j: V → H` and
//! has the graph `{(j u, f) : ã(u, v) = (f, j v) for all v ∈ V}`. When `j` is
//! not injective this reaches forms that are not closable in `H`.
//!
//! `ã(u, v) = v* Ã u` in raw coordinates of `V`, matching the convention of
//! [`SesqForm`].

use rand::Rng;

use crate::error::{Error, Hypothesis, Result};
use crate::forms::SesqForm;
use crate::hilbert::{HSpace, Subspace, DEFAULT_RANK_TOL};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::random;
use crate::relations::LinearRelation;

/// Fraction of the saturated ellipticity scale used as `μ`.
pub const ELLIPTICITY_FRACTION: f64 = 0.5;

/// Largest `ω` tried before declaring a represented form non-elliptic.
const MAX_OMEGA: f64 = 1e12;

/// `Re ã(u) + ω‖j u‖² ≥ μ‖u‖²_V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipticity {
    pub omega: f64,
    pub mu: f64,
}

/// A form `ã` on `V` together with `j: V → H`.
#[derive(Debug, Clone)]
pub struct RepresentedForm {
    v_space: HSpace,
    h_space: HSpace,
    j: CMatrix,
    a: CMatrix,
    continuity: f64,
    ellipticity: Option<Ellipticity>,
}

impl RepresentedForm {
    /// `j` is `d × m`, `ã` is `m × m`.
    pub fn new(v_space: HSpace, h_space: HSpace, j: CMatrix, a: CMatrix) -> Result<Self> {
        let m = v_space.dim();
        let d = h_space.dim();
        if j.shape() != (d, m) {
            return Err(Error::DimensionMismatch {
                expected: d * m,
                actual: j.nrows() * j.ncols(),
            });
        }
        if a.shape() != (m, m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: a.nrows().max(a.ncols()),
            });
        }
        let mut rf = RepresentedForm {
            v_space,
            h_space,
            j,
            a,
            continuity: 0.0,
            ellipticity: None,
        };
        rf.continuity = linalg::op_norm(&rf.white_a());
        rf.ellipticity = check_j_elliptic(&rf).ok();
        Ok(rf)
    }

    /// `V = D(a)` in the coordinates of its basis, `j` the inclusion.
    pub fn from_form(a: &SesqForm) -> Self {
        let k = a.domain().dim();
        RepresentedForm::new(
            HSpace::new(k),
            a.ambient().clone(),
            a.domain().basis().clone(),
            a.matrix().clone(),
        )
        .expect("shapes follow the form")
    }

    pub fn v_space(&self) -> &HSpace {
        &self.v_space
    }

    pub fn h_space(&self) -> &HSpace {
        &self.h_space
    }

    pub fn j(&self) -> &CMatrix {
        &self.j
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.a
    }

    /// `M` with `|ã(u, v)| ≤ M ‖u‖_V ‖v‖_V`.
    pub fn continuity(&self) -> f64 {
        self.continuity
    }

    pub fn ellipticity(&self) -> Option<Ellipticity> {
        self.ellipticity
    }

    /// `ã(u, v)` for raw `V` coordinates.
    pub fn evaluate(&self, u: &CVector, v: &CVector) -> C64 {
        (v.adjoint() * &self.a * u)[(0, 0)]
    }

    /// Same `j`, new form matrix.
    pub fn with_matrix(&self, a: CMatrix) -> Result<Self> {
        RepresentedForm::new(self.v_space.clone(), self.h_space.clone(), self.j.clone(), a)
    }

    /// Restriction to the span of the `G_V`-orthonormal columns of `basis`.
    pub fn restrict(&self, basis: &CMatrix) -> Result<Self> {
        let r = basis.ncols();
        RepresentedForm::new(
            HSpace::new(r),
            self.h_space.clone(),
            &self.j * basis,
            basis.adjoint() * &self.a * basis,
        )
    }

    /// `U_V* Ã U_V` with `U_V` the unwhitening map of `V`.
    pub(crate) fn white_a(&self) -> CMatrix {
        let u = self.v_space.unwhiten(&CMatrix::identity(self.v_space.dim(), self.v_space.dim()));
        u.adjoint() * &self.a * u
    }

    /// `j` from whitened `V` to whitened `H`.
    pub(crate) fn white_j(&self) -> CMatrix {
        let m = self.v_space.dim();
        self.h_space
            .whiten(&(&self.j * self.v_space.unwhiten(&CMatrix::identity(m, m))))
    }

    /// `j* j` on whitened `V`.
    pub(crate) fn white_mass(&self) -> CMatrix {
        let jw = self.white_j();
        jw.adjoint() * jw
    }
}

/// Smallest eigenvalue of `Re ã + ω j* j` on whitened `V`.
fn ellipticity_margin(ra: &CMatrix, mass: &CMatrix, omega: f64) -> f64 {
    linalg::min_eigenvalue(&(ra + mass * linalg::real(omega)))
}

/// A feasible `(ω, μ)` with small `ω`.
///
/// `f(ω) = λ_min(Re ã + ω j*j)` is concave and non-decreasing. If `f(0) > 0`
/// the pair `(0, f(0))` is returned. Otherwise `ω` is doubled until `f` is
/// positive, `μ` is set to [`ELLIPTICITY_FRACTION`] of that value and `ω` is
/// bisected down to the smallest value reaching `μ`.
pub fn check_j_elliptic(rf: &RepresentedForm) -> Result<Ellipticity> {
    let m = rf.v_space.dim();
    if m == 0 {
        return Ok(Ellipticity { omega: 0.0, mu: 1.0 });
    }
    let ra = linalg::hermitian_part(&rf.white_a());
    let mass = rf.white_mass();
    let scale = linalg::op_norm(&ra).max(linalg::op_norm(&mass)).max(f64::MIN_POSITIVE);
    let floor = 1e3 * DEFAULT_RANK_TOL * scale;
    let f0 = ellipticity_margin(&ra, &mass, 0.0);
    if f0 > floor {
        return Ok(Ellipticity { omega: 0.0, mu: f0 });
    }
    if linalg::op_norm(&mass) == 0.0 {
        return Err(Error::EllipticityFailure);
    }
    let mut hi = 1.0;
    let mut f_hi = ellipticity_margin(&ra, &mass, hi);
    while f_hi <= floor {
        hi *= 2.0;
        if hi > MAX_OMEGA * scale.max(1.0) {
            return Err(Error::EllipticityFailure);
        }
        f_hi = ellipticity_margin(&ra, &mass, hi);
    }
    let mu = ELLIPTICITY_FRACTION * f_hi;
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ellipticity_margin(&ra, &mass, mid) >= mu {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(Ellipticity { omega: hi, mu })
}

/// Whether `Re ã(u) + ω‖j u‖² ≥ μ‖u‖²_V` holds for all `u`.
pub fn ellipticity_feasible(rf: &RepresentedForm, omega: f64, mu: f64) -> bool {
    if rf.v_space.dim() == 0 {
        return true;
    }
    let ra = linalg::hermitian_part(&rf.white_a());
    let margin = ellipticity_margin(&ra, &rf.white_mass(), omega);
    margin >= mu - 1e3 * DEFAULT_RANK_TOL * (1.0 + mu.abs())
}

fn require_m_sectorial(relation: LinearRelation, vertex: f64) -> Result<LinearRelation> {
    if relation.is_m_sectorial_at(vertex) {
        Ok(relation)
    } else {
        let reason = match relation.sector() {
            crate::relations::MSector::NotMSectorial(r) => r.to_string(),
            _ => format!("not m-sectorial at vertex {vertex}"),
        };
        Err(Error::NotMSectorial(reason))
    }
}

/// Graph of the operator associated with a form on `D(a)`.
///
/// With `D(a) = span B`, `B* G B = I`, the defining condition reads
/// `M x = B* G f`, whose solutions are `f = B M x + g` with `g ⊥ D(a)`.
pub fn graph_of_closed_form(a: &SesqForm) -> Result<LinearRelation> {
    let space = a.ambient();
    let d = space.dim();
    let b = a.domain().basis();
    let perp = a.domain().ortho_complement();
    let xs = linalg::hstack(b, &CMatrix::zeros(d, perp.dim()));
    let ys = linalg::hstack(&(b * a.matrix()), perp.basis());
    let relation = LinearRelation::from_pairs(space, &xs, &ys, a.domain().tol())?;
    require_m_sectorial(relation, a.max_vertex() - 1.0)
}

/// Graph associated with a `j`-elliptic represented form.
pub fn graph_of_represented_form(rf: &RepresentedForm) -> Result<LinearRelation> {
    let ell = rf.ellipticity.ok_or(Error::EllipticityFailure)?;
    let m = rf.v_space.dim();
    let d = rf.h_space.dim();
    let aw = rf.white_a();
    let jw = rf.white_j();
    // Ã_w u = J_w* f over (u, f), whitened on both sides.
    let system = linalg::hstack(&aw, &(-jw.adjoint()));
    let null = if m == 0 {
        CMatrix::identity(d, d)
    } else {
        linalg::null_space(&system, DEFAULT_RANK_TOL)
    };
    let u = null.rows(0, m).into_owned();
    let f = null.rows(m, d).into_owned();
    let xs = rf.h_space.unwhiten(&(&jw * u));
    let ys = rf.h_space.unwhiten(&f);
    let relation = LinearRelation::from_pairs(&rf.h_space, &xs, &ys, DEFAULT_RANK_TOL)?;
    require_m_sectorial(relation, -ell.omega - 1.0)
}

/// Whether the constant sequence `u_n = x` witnesses `(x, f)` for `a`:
/// `x ∈ D(a)` and `a(x, v) = (f, v)` on a basis of `D(a)`.
pub fn constant_sequence_witnesses(a: &SesqForm, x: &CVector, f: &CVector, tol: f64) -> bool {
    if !a.domain().contains(x) {
        return false;
    }
    let coords = a.domain().coordinates(x);
    let lhs = a.matrix() * &coords;
    let rhs = a.ambient().apply_gram(a.domain().basis()).adjoint() * f;
    let scale = 1.0 + linalg::op_norm(a.matrix()) * coords.norm() + rhs.norm();
    (lhs - rhs).norm() <= tol * scale
}

/// Sampled agreement between the sequential definition and the relation `A`.
///
/// Pairs drawn from `A` with `x ∈ D(a)` must be witnessed by a constant
/// sequence; the same pairs with `f` moved inside `D(a)` must not be.
pub fn sequential_characterization_check(a: &SesqForm, relation: &LinearRelation, trials: usize, seed: u64) -> bool {
    let mut rng = random::rng(seed);
    let d = relation.ambient().dim();
    let basis = relation.graph().basis();
    let tol = 1e-8;
    for _ in 0..trials {
        let coeffs = random::vector(&mut rng, basis.ncols());
        let pair = basis * coeffs;
        let x = pair.rows(0, d).into_owned();
        let f = pair.rows(d, d).into_owned();
        if a.domain().contains(&x) && !constant_sequence_witnesses(a, &x, &f, tol) {
            return false;
        }
        if a.domain().is_zero() {
            continue;
        }
        let k = a.domain().dim();
        let shift = a.domain().basis() * random::vector(&mut rng, k);
        let size: f64 = rng.random_range(0.5..2.0);
        let norm = relation.ambient().norm(&shift).max(f64::MIN_POSITIVE);
        let perturbed = &f + shift * linalg::real(size / norm);
        if a.domain().contains(&x) && constant_sequence_witnesses(a, &x, &perturbed, tol) {
            return false;
        }
        if relation.contains(&x, &perturbed) {
            return false;
        }
    }
    true
}

/// Check the hypotheses linking `a` with `(ã, j)` through `q: D(a) → V`,
/// then compare the two graphs.
///
/// `q` maps coordinates in the basis of `D(a)` to raw coordinates of `V`.
pub fn lemma_3_1_consistency(a: &SesqForm, rf: &RepresentedForm, q: &CMatrix) -> Result<bool> {
    let k = a.domain().dim();
    let m = rf.v_space.dim();
    if q.shape() != (m, k) {
        return Err(Error::DimensionMismatch {
            expected: m * k,
            actual: q.nrows() * q.ncols(),
        });
    }
    let tol = 1e-8;
    let qw = rf.v_space.whiten(q);
    if linalg::rank(&qw, DEFAULT_RANK_TOL) != m {
        return Err(Error::HypothesisViolation(Hypothesis::Density));
    }
    // ‖u‖²_{D(a)} = Re a(u) + (1 - γ)‖u‖² against ‖q u‖²_V.
    let gamma = a.max_vertex();
    let graph = a.real_part_matrix() + CMatrix::identity(k, k) * linalg::real(1.0 - gamma);
    let (gvals, gvecs) = linalg::hermitian_eigen(&graph);
    let mut inv_root = gvecs.clone();
    for (j, &g) in gvals.iter().enumerate() {
        inv_root.column_mut(j).scale_mut(1.0 / g.max(f64::MIN_POSITIVE).sqrt());
    }
    let pencil = inv_root.adjoint() * qw.adjoint() * &qw * &inv_root;
    let (pvals, _) = linalg::hermitian_eigen(&pencil);
    let lo = pvals.first().copied().unwrap_or(1.0);
    let hi = pvals.last().copied().unwrap_or(1.0);
    if !(lo > DEFAULT_RANK_TOL * hi.max(1.0)) {
        return Err(Error::HypothesisViolation(Hypothesis::NormEquivalence));
    }
    let b = a.domain().basis();
    let jq = &rf.j * q;
    if (&jq - b).norm() > tol * (1.0 + b.norm()) {
        return Err(Error::HypothesisViolation(Hypothesis::JCompositionQ));
    }
    let pulled = q.adjoint() * &rf.a * q;
    if (&pulled - a.matrix()).norm() > tol * (1.0 + a.matrix().norm()) {
        return Err(Error::HypothesisViolation(Hypothesis::FormAgreement));
    }
    let closed = graph_of_closed_form(a)?;
    let represented = graph_of_represented_form(rf)?;
    Ok(closed.approx_eq(&represented, 1e-8))
}

/// Subspace of `V` on which `j` vanishes, as raw `V` coordinates.
pub(crate) fn kernel_of_j(rf: &RepresentedForm) -> CMatrix {
    let jw = rf.white_j();
    if jw.ncols() == 0 {
        return CMatrix::zeros(0, 0);
    }
    let null = linalg::null_space(&jw, DEFAULT_RANK_TOL);
    rf.v_space.unwhiten(&null)
}

/// `ker j` as a subspace of `V`.
pub fn j_kernel(rf: &RepresentedForm) -> Subspace {
    Subspace::from_columns(&kernel_of_j(rf), &rf.v_space, DEFAULT_RANK_TOL)
        .expect("columns live in V")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::orthonormalize;
    use crate::linalg::{real, ONE, ZERO};

    fn e(d: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(d);
        v[i] = ONE;
        v
    }

    #[test]
    fn trivial_forms_give_operator_graphs() {
        let space = HSpace::new(3);
        let full = Subspace::full(&space);
        let zero = graph_of_closed_form(&SesqForm::zero(full.clone())).unwrap();
        assert!(zero.approx_eq(&LinearRelation::from_operator(&space, &CMatrix::zeros(3, 3)).unwrap(), 1e-12));
        let id = graph_of_closed_form(&SesqForm::inner_product(full)).unwrap();
        assert!(id.approx_eq(&LinearRelation::from_operator(&space, &CMatrix::identity(3, 3)).unwrap(), 1e-12));
    }

    #[test]
    fn line_domain_graph_matches_brute_force_solve() {
        let space = HSpace::new(2);
        let line = orthonormalize(&[e(2, 0)], &space, DEFAULT_RANK_TOL).unwrap();
        let a = SesqForm::new(line, CMatrix::from_element(1, 1, ONE)).unwrap();
        let graph = graph_of_closed_form(&a).unwrap();
        // Brute force: (c e1, f) with a(c e1, e1) = (f, e1), i.e. f1 = c.
        let system = CMatrix::from_row_slice(1, 3, &[ONE, real(-1.0), ZERO]);
        let null = linalg::null_space(&system, 1e-12);
        let mut xs = CMatrix::zeros(2, null.ncols());
        let mut ys = CMatrix::zeros(2, null.ncols());
        for j in 0..null.ncols() {
            xs[(0, j)] = null[(0, j)];
            ys[(0, j)] = null[(1, j)];
            ys[(1, j)] = null[(2, j)];
        }
        let oracle = LinearRelation::from_pairs(&space, &xs, &ys, 1e-10).unwrap();
        assert!(graph.approx_eq(&oracle, 1e-12));
        assert!(graph.contains(&e(2, 0), &(e(2, 0) + e(2, 1) * real(3.0))));
    }

    fn example_43(d: usize) -> RepresentedForm {
        let mut j = CMatrix::zeros(d, d + 1);
        j.view_mut((0, 0), (d, d)).copy_from(&CMatrix::identity(d, d));
        let mut a = CMatrix::zeros(d + 1, d + 1);
        a[(d, d)] = ONE;
        RepresentedForm::new(HSpace::new(d + 1), HSpace::new(d), j, a).unwrap()
    }

    #[test]
    fn example_43_represented_graph_is_zero_operator() {
        let rf = example_43(3);
        let graph = graph_of_represented_form(&rf).unwrap();
        let zero = LinearRelation::from_operator(&HSpace::new(3), &CMatrix::zeros(3, 3)).unwrap();
        assert!(graph.approx_eq(&zero, 1e-10));
        assert!(graph.contains(&e(3, 1), &CVector::zeros(3)));
        assert!(!graph.contains(&e(3, 1), &e(3, 0)));
    }

    #[test]
    fn ellipticity_examples() {
        let rf = RepresentedForm::new(HSpace::new(2), HSpace::new(2), CMatrix::zeros(2, 2), CMatrix::identity(2, 2))
            .unwrap();
        let ell = check_j_elliptic(&rf).unwrap();
        assert_eq!(ell.omega, 0.0);
        assert!((ell.mu - 1.0).abs() < 1e-12);
        let degenerate =
            RepresentedForm::new(HSpace::new(2), HSpace::new(2), CMatrix::zeros(2, 2), CMatrix::zeros(2, 2)).unwrap();
        assert_eq!(check_j_elliptic(&degenerate), Err(Error::EllipticityFailure));
        assert_eq!(
            graph_of_represented_form(&degenerate).unwrap_err(),
            Error::EllipticityFailure
        );
        let ex = example_43(2);
        // |λ|² + ‖u‖² ≥ ½(‖u‖² + |λ|²).
        assert!(ellipticity_feasible(&ex, 1.0, 0.5));
        let found = ex.ellipticity().unwrap();
        assert!(ellipticity_feasible(&ex, found.omega, found.mu));
        assert!((found.omega - 0.5).abs() < 1e-9 && (found.mu - 0.5).abs() < 1e-12);
    }

    #[test]
    fn identity_j_collapses_to_closed_form() {
        let space = HSpace::new(2);
        let m = CMatrix::from_row_slice(2, 2, &[real(2.0), C64::new(0.0, 1.0), C64::new(0.0, 1.0), real(1.0)]);
        let a = SesqForm::new(Subspace::full(&space), m.clone()).unwrap();
        let rf = RepresentedForm::new(HSpace::new(2), space, CMatrix::identity(2, 2), m).unwrap();
        assert!(graph_of_closed_form(&a)
            .unwrap()
            .approx_eq(&graph_of_represented_form(&rf).unwrap(), 1e-10));
    }

    #[test]
    fn empty_v_gives_zero_domain() {
        let rf = RepresentedForm::new(HSpace::new(0), HSpace::new(2), CMatrix::zeros(2, 0), CMatrix::zeros(0, 0))
            .unwrap();
        let graph = graph_of_represented_form(&rf).unwrap();
        assert!(graph.approx_eq(&LinearRelation::zero_domain(&HSpace::new(2)), 1e-12));
    }

    #[test]
    fn consistency_examples() {
        let space = HSpace::new(2);
        let m = CMatrix::from_row_slice(2, 2, &[real(1.0), real(0.5), real(-0.5), real(2.0)]);
        let a = SesqForm::new(Subspace::full(&space), m.clone()).unwrap();
        let rf = RepresentedForm::from_form(&a);
        assert_eq!(lemma_3_1_consistency(&a, &rf, &CMatrix::identity(2, 2)), Ok(true));
        let scaled =
            RepresentedForm::new(HSpace::with_gram(CMatrix::identity(2, 2) * real(4.0)).unwrap(), space.clone(), CMatrix::identity(2, 2), m.clone())
                .unwrap();
        assert_eq!(lemma_3_1_consistency(&a, &scaled, &CMatrix::identity(2, 2)), Ok(true));
        let bad_j = RepresentedForm::new(HSpace::new(2), space, CMatrix::identity(2, 2) * real(2.0), m).unwrap();
        let err = lemma_3_1_consistency(&a, &bad_j, &CMatrix::identity(2, 2)).unwrap_err();
        assert_eq!(err, Error::HypothesisViolation(Hypothesis::JCompositionQ));
        assert_eq!(err.to_string(), "hypothesis violated: jq");
    }

    #[test]
    fn sequential_check_examples() {
        let space = HSpace::new(3);
        let line = orthonormalize(&[e(3, 0) + e(3, 2)], &space, DEFAULT_RANK_TOL).unwrap();
        let a = SesqForm::new(line, CMatrix::from_element(1, 1, C64::new(2.0, 1.0))).unwrap();
        let graph = graph_of_closed_form(&a).unwrap();
        assert!(sequential_characterization_check(&a, &graph, 20, 7));
        let u = a.domain().basis().column(0).into_owned();
        let f = a.domain().basis() * a.matrix() * a.domain().coordinates(&u);
        assert!(constant_sequence_witnesses(&a, &u, &f, 1e-10));
        assert!(!constant_sequence_witnesses(&a, &u, &(&f + &u), 1e-10));
    }
}
