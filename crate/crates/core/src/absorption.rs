//! Absorption: the graphs of `a_n = a + (n - 1) b` and their limit.
//!
//! Indexing is shifted so that `A_1` is the graph of `a`. Both forms live on
//! the auxiliary space `V` of a [`RepresentedForm`]; a plain [`SesqForm`] is
//! wrapped with `V = D(a)` and `j` the inclusion. The limit is the graph of
//! `(ã, j)` restricted to `Z_∞ = {u ∈ V : b̃(u) = 0}`, which for `b̃` with
//! vertex 0 is the kernel of the Hermitian part of `b̃`.

use rand::Rng;

use crate::association::{graph_of_represented_form, kernel_of_j, RepresentedForm};
use crate::error::{Error, Result};
use crate::forms::{self, FormBound, SesqForm};
use crate::hilbert::{HSpace, Subspace, DEFAULT_RANK_TOL};
use crate::linalg::{self, CMatrix, CVector};
use crate::random;
use crate::relations::LinearRelation;
use crate::semigroups::{
    default_probes, semigroup, strong_error, trotter_product, validate_schedule, ConvergenceReport,
};

/// Relative tolerance for `b(u, v) = (B u, v)` and for closability.
const MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct AbsorptionProblem {
    a: RepresentedForm,
    /// `b̃(u, v) = v* B̃ u` on raw `V` coordinates.
    b: CMatrix,
    bound: Option<(f64, f64)>,
}

/// Both tracks of an absorption run.
#[derive(Debug, Clone)]
pub struct AbsorptionReport {
    /// `max_f ‖(A_n + I)^{-1} f - (A_∞ + I)^{-1} f‖`.
    pub resolvent: ConvergenceReport,
    /// `max_f ‖(e^{-(t/n)A} P)^n f - e^{-tA_∞} f‖`.
    pub product: ConvergenceReport,
}

impl AbsorptionProblem {
    /// Problem without bound constants; see [`AbsorptionProblem::with_bound_constants`].
    pub fn new(a: RepresentedForm, b: CMatrix) -> Result<Self> {
        let m = a.v_space().dim();
        if b.shape() != (m, m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: b.nrows().max(b.ncols()),
            });
        }
        let p = AbsorptionProblem { a, b, bound: None };
        if forms::tan_theta_at_vertex(&p.white_b(), 0.0, DEFAULT_RANK_TOL).is_none() {
            return Err(Error::VertexNotAdmissible { vertex: 0.0 });
        }
        Ok(p)
    }

    /// `a` and `b` on the same domain of `H`, expressed in `a`'s basis.
    pub fn from_forms(a: &SesqForm, b: &SesqForm) -> Result<Self> {
        if a.ambient() != b.ambient() {
            return Err(Error::AmbientMismatch);
        }
        if !a.domain().approx_eq(b.domain(), 1e3 * a.domain().tol().max(b.domain().tol())) {
            return Err(Error::InvalidArgument("absorption needs D(a) = D(b)".into()));
        }
        let t = a.ambient().apply_gram(b.domain().basis()).adjoint() * a.domain().basis();
        let mb = t.adjoint() * b.matrix() * t;
        AbsorptionProblem::new(RepresentedForm::from_form(a), mb)
    }

    /// Attach near-minimal `(c1, c2)` with `|b̃(u)| ≤ c1 Re ã(u) + c2 ‖j u‖²`.
    /// Leaves the constants absent when no such pair exists.
    pub fn with_bound_constants(mut self) -> Self {
        self.bound = match self.compute_bound() {
            FormBound::Constants { c1, c2 } => Some((c1, c2)),
            FormBound::Unbounded => None,
        };
        self
    }

    pub fn with_constants(mut self, c1: f64, c2: f64) -> Self {
        self.bound = Some((c1, c2));
        self
    }

    fn compute_bound(&self) -> FormBound {
        forms::bound_constants(
            &self.white_b(),
            &linalg::hermitian_part(&self.a.white_a()),
            &self.a.white_mass(),
            DEFAULT_RANK_TOL,
        )
    }

    /// Whether `(c1, c2)` satisfies the bound on a fine phase grid.
    pub fn bound_feasible(&self, c1: f64, c2: f64) -> bool {
        forms::bound_feasible(
            &self.white_b(),
            &linalg::hermitian_part(&self.a.white_a()),
            &self.a.white_mass(),
            c1,
            c2,
        )
    }

    pub fn form(&self) -> &RepresentedForm {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn bound_constants(&self) -> Option<(f64, f64)> {
        self.bound
    }

    pub fn h_space(&self) -> &HSpace {
        self.a.h_space()
    }

    fn white_b(&self) -> CMatrix {
        let m = self.a.v_space().dim();
        let u = self.a.v_space().unwhiten(&CMatrix::identity(m, m));
        u.adjoint() * &self.b * u
    }

    /// `(ã + (n - 1) b̃, j)`.
    pub fn form_at(&self, n: u64) -> Result<RepresentedForm> {
        if n == 0 {
            return Err(Error::InvalidArgument("absorption indices start at 1".into()));
        }
        let weight = (n - 1) as f64;
        self.a.with_matrix(self.a.matrix() + &self.b * linalg::real(weight))
    }

    /// `A_n`, the graph of `(ã + (n - 1) b̃, j)`.
    pub fn absorption_graph(&self, n: u64) -> Result<LinearRelation> {
        graph_of_represented_form(&self.form_at(n)?)
    }

    /// `Z_∞` as `G_V`-orthonormal raw columns.
    fn z_infinity_basis(&self) -> CMatrix {
        let bw = linalg::hermitian_part(&self.white_b());
        let m = bw.nrows();
        if m == 0 {
            return CMatrix::zeros(0, 0);
        }
        let null = linalg::null_space(&bw, DEFAULT_RANK_TOL);
        self.a.v_space().unwhiten(&null)
    }

    /// `Z_∞ = {u ∈ V : b̃(u) = 0}`.
    pub fn z_infinity(&self) -> Subspace {
        Subspace::from_columns(&self.z_infinity_basis(), self.a.v_space(), DEFAULT_RANK_TOL)
            .expect("columns live in V")
    }

    /// `A_∞`, the graph of `(ã, j)` restricted to `Z_∞`.
    pub fn limit_graph(&self) -> Result<LinearRelation> {
        if self.bound.is_none() {
            return Err(Error::MissingBoundConstants);
        }
        graph_of_represented_form(&self.a.restrict(&self.z_infinity_basis())?)
    }

    /// Projector onto the closure of `{u ∈ D(a) : b(u) = 0}` in `H`.
    ///
    /// `(ã, j)` defines a form on `H` exactly when `ã` and `b̃` vanish on
    /// `ker j` in both arguments; otherwise the result is `NotClosable`.
    /// Under that condition the set is `j(Z_∞)`.
    pub fn projection_thm_4_1(&self) -> Result<CMatrix> {
        let kernel = kernel_of_j(&self.a);
        if kernel.ncols() > 0 {
            for m in [self.a.matrix(), &self.b] {
                let leak = (m * &kernel).norm() + (kernel.adjoint() * m).norm();
                if leak > MATCH_TOL * (1.0 + m.norm()) {
                    return Err(Error::NotClosable);
                }
            }
        }
        let image = self.a.j() * self.z_infinity_basis();
        let cols = if image.ncols() == 0 {
            CMatrix::zeros(self.h_space().dim(), 0)
        } else {
            image
        };
        Ok(Subspace::from_columns(&cols, self.h_space(), DEFAULT_RANK_TOL)?.projector())
    }

    /// Projector onto `ker(B + B†)` after checking `b̃(u, v) = (B j u, j v)`.
    pub fn projection_thm_4_2(&self, big_b: &CMatrix) -> Result<CMatrix> {
        let h = self.h_space();
        let d = h.dim();
        if big_b.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: big_b.nrows(),
            });
        }
        let j = self.a.j();
        let pulled = j.adjoint() * h.apply_gram(big_b) * j;
        let residual = (&pulled - &self.b).norm();
        if residual > MATCH_TOL * (1.0 + self.b.norm() + pulled.norm()) {
            return Err(Error::MismatchWithFormB { residual });
        }
        Ok(kernel_projector(h, &(big_b + h.adjoint(big_b))))
    }

    /// Strong resolvent and product-formula tracks for a candidate projector.
    pub fn verify_absorption(&self, p: &CMatrix, t: f64, schedule: &[u64]) -> Result<AbsorptionReport> {
        validate_schedule(schedule)?;
        let h = self.h_space();
        let limit = self.limit_graph()?;
        let r_inf = limit.resolvent(linalg::real(-1.0))?;
        let target = semigroup(&limit, t)?;
        let a1 = self.absorption_graph(1)?;
        let probes = default_probes(h);
        let mut res_errors = Vec::with_capacity(schedule.len());
        let mut prod_errors = Vec::with_capacity(schedule.len());
        for &n in schedule {
            let r_n = self.absorption_graph(n)?.resolvent(linalg::real(-1.0))?;
            res_errors.push(strong_error(h, &(r_n - &r_inf), &probes));
            let product = trotter_product(&a1, p, t, n)?;
            prod_errors.push(strong_error(h, &(product - &target), &probes));
        }
        let resolvent = ConvergenceReport::new(schedule.to_vec(), res_errors, Default::default())?
            .with_meta("track", "resolvent");
        let product = ConvergenceReport::new(schedule.to_vec(), prod_errors, Default::default())?
            .with_meta("track", "product")
            .with_meta("t", t);
        Ok(AbsorptionReport { resolvent, product })
    }
}

/// `G`-orthogonal projector onto the kernel of a `G`-self-adjoint `S`.
fn kernel_projector(h: &HSpace, s: &CMatrix) -> CMatrix {
    let d = h.dim();
    // L* S L^{-*} is Hermitian for G-self-adjoint S.
    let white = h.whiten(&(s * h.unwhiten(&CMatrix::identity(d, d))));
    let null = linalg::null_space(&linalg::hermitian_part(&white), DEFAULT_RANK_TOL);
    let cols = if null.ncols() == 0 {
        CMatrix::zeros(d, 0)
    } else {
        h.unwhiten(&null)
    };
    Subspace::from_columns(&cols, h, DEFAULT_RANK_TOL)
        .expect("columns live in H")
        .projector()
}

/// `A_n` for `n ≥ 1`.
pub fn absorption_graphs(p: &AbsorptionProblem, n: u64) -> Result<LinearRelation> {
    p.absorption_graph(n)
}

pub fn limit_graph_absorption(p: &AbsorptionProblem) -> Result<LinearRelation> {
    p.limit_graph()
}

/// Seeded problem with `b(u, v) = (B j u, j v)` for a sectorial `B` of
/// corank at least one. With `injective = false`, `V = C^{d+1}` and `j` has a
/// one-dimensional kernel. Returns the problem and `B`.
pub fn random_bounded_problem<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    injective: bool,
) -> Result<(AbsorptionProblem, CMatrix)> {
    if d < 2 {
        return Err(Error::InvalidArgument("need d ≥ 2 for a corank-one B".into()));
    }
    let h = HSpace::new(d);
    let rank = rng.random_range(1..d);
    let big_b = random::sectorial_matrix(rng, d, rank, 0.5);
    let m = if injective { d } else { d + 1 };
    let mut j = CMatrix::zeros(d, m);
    j.view_mut((0, 0), (d, d)).fill_with_identity();
    if !injective {
        j.set_column(d, &random::vector(rng, d));
    }
    let a = random::sectorial_matrix(rng, m, m, 0.5) + CMatrix::identity(m, m) * linalg::real(0.1);
    let b = j.adjoint() * &big_b * &j;
    let rf = RepresentedForm::new(HSpace::new(m), h, j, a)?;
    Ok((AbsorptionProblem::new(rf, b)?.with_bound_constants(), big_b))
}

/// The finite-dimensional model with `Z = H × C`, `j(u, λ) = u`,
/// `ã((u₁, λ₁), (u₂, λ₂)) = λ₁ λ̄₂` and `b̃ = ((I - P₀)·, ·)_Z`, where `P₀`
/// projects onto `span (φ, 1)`.
#[derive(Debug, Clone)]
pub struct Example43 {
    pub problem: AbsorptionProblem,
    pub phi: CVector,
    /// Projector of `H` onto `span φ`.
    pub p1: CMatrix,
    /// `P₀` on `Z`.
    pub p0: CMatrix,
}

/// Deviations measured by [`Example43::verify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example43Checks {
    /// `‖A - 0‖` as a graph gap.
    pub a_is_zero: f64,
    /// Gap between `Z_∞` and `span (φ, 1)`.
    pub z_infinity: f64,
    /// Gap between `D(A_∞)` and `span φ`.
    pub domain: f64,
    /// Gap between `mul A_∞` and `φ^⊥`.
    pub multivalued: f64,
    /// Gap between `A_∞` and `{(cφ, cφ + y) : y ⊥ φ}`.
    pub limit_graph: f64,
    /// `‖e^{-tA_∞} - e^{-t} P₁‖`.
    pub semigroup: f64,
}

impl Example43Checks {
    pub fn max(&self) -> f64 {
        [
            self.a_is_zero,
            self.z_infinity,
            self.domain,
            self.multivalued,
            self.limit_graph,
            self.semigroup,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn example_4_3_scenario(d: usize, phi: &CVector) -> Result<Example43> {
    if d == 0 || phi.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d.max(1),
            actual: phi.len(),
        });
    }
    if (phi.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument("φ must be a unit vector".into()));
    }
    let h = HSpace::new(d);
    let mut j = CMatrix::zeros(d, d + 1);
    j.view_mut((0, 0), (d, d)).fill_with_identity();
    let mut a = CMatrix::zeros(d + 1, d + 1);
    a[(d, d)] = linalg::real(1.0);
    let mut w = CVector::zeros(d + 1);
    w.rows_mut(0, d).copy_from(phi);
    w[d] = linalg::real(1.0);
    let p0 = &w * w.adjoint() * linalg::real(0.5);
    let b = CMatrix::identity(d + 1, d + 1) - &p0;
    let rf = RepresentedForm::new(HSpace::new(d + 1), h, j, a)?;
    // b(u) ≤ ‖u‖² = ‖j u‖² + ã(u)
    let problem = AbsorptionProblem::new(rf, b)?.with_constants(1.0, 1.0);
    let p1 = phi * phi.adjoint();
    Ok(Example43 {
        problem,
        phi: phi.clone(),
        p1,
        p0,
    })
}

impl Example43 {
    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    /// `φ^⊥` in `H`.
    fn phi_perp(&self) -> Subspace {
        self.phi_line().ortho_complement()
    }

    fn phi_line(&self) -> Subspace {
        let h = self.problem.h_space();
        Subspace::from_columns(&CMatrix::from_columns(&[self.phi.clone()]), h, DEFAULT_RANK_TOL)
            .expect("φ lives in H")
    }

    /// `{(cφ, cφ + y) : c ∈ C, y ⊥ φ}`.
    pub fn expected_limit(&self) -> LinearRelation {
        let d = self.dim();
        let h = self.problem.h_space();
        let perp = self.phi_perp();
        let xs = linalg::hstack(&CMatrix::from_columns(&[self.phi.clone()]), &CMatrix::zeros(d, perp.dim()));
        let ys = linalg::hstack(&CMatrix::from_columns(&[self.phi.clone()]), perp.basis());
        LinearRelation::from_pairs(h, &xs, &ys, DEFAULT_RANK_TOL).expect("shapes agree")
    }

    pub fn verify(&self, t: f64) -> Result<Example43Checks> {
        let d = self.dim();
        let h = self.problem.h_space();
        let a = self.problem.absorption_graph(1)?;
        let zero = LinearRelation::from_operator(h, &CMatrix::zeros(d, d))?;
        let a_is_zero = graph_gap(&a, &zero);
        let mut w = CVector::zeros(d + 1);
        w.rows_mut(0, d).copy_from(&self.phi);
        w[d] = linalg::real(1.0);
        let span_w = Subspace::from_columns(&CMatrix::from_columns(&[w]), self.problem.form().v_space(), DEFAULT_RANK_TOL)?;
        let z = self.problem.z_infinity();
        let z_infinity = subspace_gap(&z, &span_w);
        let limit = self.problem.limit_graph()?;
        let domain = subspace_gap(&limit.domain(), &self.phi_line());
        let multivalued = subspace_gap(&limit.multivalued_part(), &self.phi_perp());
        let limit_graph = graph_gap(&limit, &self.expected_limit());
        let expected = &self.p1 * linalg::real((-t).exp());
        let semigroup = h.operator_norm(&(semigroup(&limit, t)? - expected));
        Ok(Example43Checks {
            a_is_zero,
            z_infinity,
            domain,
            multivalued,
            limit_graph,
            semigroup,
        })
    }

    /// Product-formula errors `(e^{-(t/n)A} P)^n` against `e^{-tA_∞}` for a candidate `P`.
    pub fn product_errors(&self, p: &CMatrix, t: f64, schedule: &[u64]) -> Result<ConvergenceReport> {
        let a = self.problem.absorption_graph(1)?;
        let limit = self.problem.limit_graph()?;
        crate::semigroups::product_formula_report(&a, p, &limit, t, schedule)
    }
}

/// Projector gap, or 1 when dimensions differ.
fn subspace_gap(a: &Subspace, b: &Subspace) -> f64 {
    if a.dim() != b.dim() {
        return 1.0;
    }
    a.gap(b).unwrap_or(1.0)
}

fn graph_gap(a: &LinearRelation, b: &LinearRelation) -> f64 {
    subspace_gap(a.graph(), b.graph())
}

/// `Σ |u_{i+1} - u_i|²` scaled by `(d + 1)²`, the Neumann second-difference form.
pub fn neumann_matrix(d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    let h2 = ((d + 1) * (d + 1)) as f64;
    for i in 0..d.saturating_sub(1) {
        m[(i, i)] += linalg::real(h2);
        m[(i + 1, i + 1)] += linalg::real(h2);
        m[(i, i + 1)] -= linalg::real(h2);
        m[(i + 1, i)] -= linalg::real(h2);
    }
    m
}

/// `B = e₁e₁* + e_d e_d*`, so that `b(u) = |u₁|² + |u_d|²`.
pub fn boundary_operator(d: usize) -> CMatrix {
    let mut b = CMatrix::zeros(d, d);
    b[(0, 0)] = linalg::real(1.0);
    b[(d - 1, d - 1)] = linalg::real(1.0);
    b
}

/// Discrete Neumann form absorbed by the boundary penalty `|u₁|² + |u_d|²`.
/// An analogue of the Neumann-to-Dirichlet passage on a grid, not a PDE model.
pub fn neumann_dirichlet_problem(d: usize) -> Result<AbsorptionProblem> {
    if d < 3 {
        return Err(Error::InvalidArgument("the grid needs at least three points".into()));
    }
    let h = HSpace::new(d);
    let full = Subspace::full(&h);
    let a = SesqForm::new(full.clone(), neumann_matrix(d))?;
    let b = SesqForm::from_operator(full, &boundary_operator(d))?;
    Ok(AbsorptionProblem::from_forms(&a, &b)?.with_bound_constants())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real, ONE};

    fn e(d: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(d);
        v[i] = ONE;
        v
    }

    fn operator_problem(a: CMatrix, b: CMatrix) -> AbsorptionProblem {
        let full = Subspace::full(&HSpace::new(a.nrows()));
        let fa = SesqForm::new(full.clone(), a).unwrap();
        let fb = SesqForm::new(full, b).unwrap();
        AbsorptionProblem::from_forms(&fa, &fb).unwrap().with_bound_constants()
    }

    #[test]
    fn zero_b_keeps_the_graph() {
        let a = CMatrix::from_row_slice(2, 2, &[real(1.0), c(0.0, 0.5), c(0.0, 0.5), real(2.0)]);
        let p = operator_problem(a, CMatrix::zeros(2, 2));
        let a1 = p.absorption_graph(1).unwrap();
        for n in [2, 5] {
            assert!(p.absorption_graph(n).unwrap().approx_eq(&a1, 1e-10));
        }
        assert!(p.z_infinity().is_full());
        assert!(p.limit_graph().unwrap().approx_eq(&a1, 1e-10));
        assert!((p.projection_thm_4_1().unwrap() - CMatrix::identity(2, 2)).norm() < 1e-12);
        assert!((p.projection_thm_4_2(&CMatrix::zeros(2, 2)).unwrap() - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn identity_b_on_zero_form() {
        let p = operator_problem(CMatrix::zeros(2, 2), CMatrix::identity(2, 2));
        let a3 = p.absorption_graph(3).unwrap();
        let expected = LinearRelation::from_operator(&HSpace::new(2), &(CMatrix::identity(2, 2) * real(2.0))).unwrap();
        assert!(a3.approx_eq(&expected, 1e-10));
        assert!(p.z_infinity().is_zero());
        assert!(p
            .limit_graph()
            .unwrap()
            .approx_eq(&LinearRelation::zero_domain(&HSpace::new(2)), 1e-12));
        assert!(p.projection_thm_4_1().unwrap().norm() < 1e-12);
        assert!(p.projection_thm_4_2(&CMatrix::identity(2, 2)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn rank_one_b_projects_onto_complement() {
        let phi = (e(2, 0) + e(2, 1)) * real(0.5f64.sqrt());
        let big_b = &phi * phi.adjoint() * real(0.5);
        let p = operator_problem(CMatrix::identity(2, 2), big_b.clone());
        let proj = p.projection_thm_4_2(&big_b).unwrap();
        let expected = CMatrix::identity(2, 2) - &phi * phi.adjoint();
        assert!((&proj - &expected).norm() < 1e-12);
        assert!((p.projection_thm_4_1().unwrap() - proj).norm() < 1e-10);
        assert!(matches!(
            p.projection_thm_4_2(&CMatrix::identity(2, 2)),
            Err(Error::MismatchWithFormB { .. })
        ));
    }

    #[test]
    fn missing_constants_are_reported() {
        let full = Subspace::full(&HSpace::new(2));
        let fa = SesqForm::inner_product(full.clone());
        let p = AbsorptionProblem::from_forms(&fa, &SesqForm::zero(full)).unwrap();
        assert_eq!(p.limit_graph().unwrap_err(), Error::MissingBoundConstants);
    }

    #[test]
    fn example_43_reproduction() {
        let phi = e(2, 0);
        let ex = example_4_3_scenario(2, &phi).unwrap();
        let checks = ex.verify(1.0).unwrap();
        assert!(checks.max() <= 1e-10, "{checks:?}");
        assert!(ex.problem.bound_feasible(1.0, 1.0));
        let s = semigroup(&ex.problem.limit_graph().unwrap(), 1.0).unwrap();
        let mut expected = CMatrix::zeros(2, 2);
        expected[(0, 0)] = real((-1.0f64).exp());
        assert!((s - expected).norm() < 1e-12);
        // P₀(u, λ) = ½((u, φ) + λ)(φ, 1).
        let u = CVector::from_vec(vec![c(0.3, 0.1), c(-1.0, 2.0), c(0.5, 0.0)]);
        let coef = (u[0] + u[2]) * real(0.5);
        let expected_p0 = CVector::from_vec(vec![coef, real(0.0), coef]);
        assert!((&ex.p0 * &u - expected_p0).norm() < 1e-14);
        assert_eq!(ex.problem.projection_thm_4_1().unwrap_err(), Error::NotClosable);
    }

    #[test]
    fn neumann_dirichlet_projects_onto_interior() {
        let p = neumann_dirichlet_problem(5).unwrap();
        let proj = p.projection_thm_4_1().unwrap();
        let mut expected = CMatrix::identity(5, 5);
        expected[(0, 0)] = real(0.0);
        expected[(4, 4)] = real(0.0);
        assert!((&proj - &expected).norm() < 1e-10);
        assert!((p.projection_thm_4_2(&boundary_operator(5)).unwrap() - expected).norm() < 1e-10);
    }
}
