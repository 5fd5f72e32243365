//! Sesquilinear forms on subspaces and their sector analysis.
//!
//! A form `a` with domain `D(a)` is stored in the coordinates of a
//! `G`-orthonormal basis `B` of `D(a)`: `a(u, v) = y* M x` for `u = B x`,
//! `v = B y`. In these coordinates `‖u‖ = |x|`, so the sector analysis is a
//! standard Hermitian eigenproblem.
//!
//! Vertex and semi-angle are not unique. [`SesqForm::sector`] reports the
//! maximal vertex `γ = min Re a(u)/‖u‖²` and, for that vertex, the minimal
//! semi-angle. When the imaginary part does not vanish on the minimizers of
//! the real part, no semi-angle works at the maximal vertex and the form is
//! reported as [`Sector::NotSectorial`]; smaller vertices can still be queried
//! with [`SesqForm::tan_theta_at_vertex`].

use crate::error::{Error, Result};
use crate::hilbert::{HSpace, Subspace};
use crate::linalg::{self, CMatrix, CVector, C64};

/// Eigenvalue clusters and skew residuals are compared against this multiple
/// of the rank tolerance, relative to `‖M‖`.
const SECTOR_TOL_FACTOR: f64 = 100.0;

/// Vertex `γ` and `tan θ` of a sector `γ + Σ_θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorParams {
    pub vertex: f64,
    pub tan_theta: f64,
}

impl SectorParams {
    pub fn semi_angle(&self) -> f64 {
        self.tan_theta.atan()
    }

    /// Whether `z - vertex·r` lies in the closed sector for `z = a(u)`, `r = ‖u‖²`.
    pub fn contains(&self, z: C64, norm_sq: f64, tol: f64) -> bool {
        let shifted_re = z.re - self.vertex * norm_sq;
        z.im.abs() <= self.tan_theta * shifted_re + tol
    }
}

/// Outcome of the canonical sector analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sector {
    Sectorial(SectorParams),
    NotSectorial,
}

impl Sector {
    pub fn params(&self) -> Option<SectorParams> {
        match self {
            Sector::Sectorial(p) => Some(*p),
            Sector::NotSectorial => None,
        }
    }

    pub fn is_sectorial(&self) -> bool {
        matches!(self, Sector::Sectorial(_))
    }
}

/// Sector analysis of `x* M x` against `|x|²`.
pub(crate) fn analyze_sector(m: &CMatrix, tol: f64) -> Sector {
    let k = m.nrows();
    let scale = linalg::op_norm(m);
    if k == 0 || scale == 0.0 {
        return Sector::Sectorial(SectorParams {
            vertex: 0.0,
            tan_theta: 0.0,
        });
    }
    let tau = SECTOR_TOL_FACTOR * tol * scale;
    let herm = linalg::hermitian_part(m);
    let skew = linalg::skew_part(m);
    let (values, vectors) = linalg::hermitian_eigen(&herm);
    let mut gamma = values[0];
    let null: Vec<usize> = (0..k).filter(|&i| values[i] - gamma <= tau).collect();
    let rest: Vec<usize> = (0..k).filter(|&i| values[i] - gamma > tau).collect();
    let null_basis = linalg::select_columns(&vectors, &null);
    if linalg::op_norm(&(&skew * &null_basis)) > tau {
        return Sector::NotSectorial;
    }
    let tan_theta = if rest.is_empty() {
        0.0
    } else {
        let mut w = linalg::select_columns(&vectors, &rest);
        for (j, &i) in rest.iter().enumerate() {
            let s = 1.0 / (values[i] - gamma).sqrt();
            w.column_mut(j).scale_mut(s);
        }
        spectral_radius_hermitian(&(w.adjoint() * &skew * &w))
    };
    if gamma.abs() <= tau {
        gamma = 0.0;
    }
    Sector::Sectorial(SectorParams {
        vertex: gamma,
        tan_theta,
    })
}

/// Minimal `tan θ` for a prescribed vertex, or `None` if the vertex is not admissible.
pub(crate) fn tan_theta_at_vertex(m: &CMatrix, vertex: f64, tol: f64) -> Option<f64> {
    let k = m.nrows();
    if k == 0 {
        return Some(0.0);
    }
    let scale = linalg::op_norm(m).max(vertex.abs());
    let tau = SECTOR_TOL_FACTOR * tol * scale.max(f64::MIN_POSITIVE);
    let herm = linalg::hermitian_part(m);
    let (values, vectors) = linalg::hermitian_eigen(&herm);
    let gamma_max = values[0];
    if vertex > gamma_max + tau {
        return None;
    }
    if vertex >= gamma_max - tau {
        return analyze_sector(m, tol).params().map(|p| p.tan_theta);
    }
    let skew = linalg::skew_part(m);
    let mut w = vectors;
    for j in 0..k {
        let s = 1.0 / (values[j] - vertex).sqrt();
        w.column_mut(j).scale_mut(s);
    }
    Some(spectral_radius_hermitian(&(w.adjoint() * skew * &w)))
}

fn spectral_radius_hermitian(h: &CMatrix) -> f64 {
    let (values, _) = linalg::hermitian_eigen(h);
    values.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// A sesquilinear form on a subspace `D(a)` of `H`.
#[derive(Debug, Clone)]
pub struct SesqForm {
    domain: Subspace,
    matrix: CMatrix,
    sector: Sector,
}

impl SesqForm {
    /// Form with coordinate matrix `matrix` in the basis of `domain`.
    pub fn new(domain: Subspace, matrix: CMatrix) -> Result<Self> {
        let k = domain.dim();
        if matrix.nrows() != k || matrix.ncols() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        let sector = analyze_sector(&matrix, domain.tol());
        Ok(SesqForm {
            domain,
            matrix,
            sector,
        })
    }

    /// `a(u, v) = (op u, v)_H` restricted to `domain`.
    pub fn from_operator(domain: Subspace, op: &CMatrix) -> Result<Self> {
        let d = domain.ambient().dim();
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: op.nrows(),
            });
        }
        let b = domain.basis();
        let m = domain.ambient().apply_gram(b).adjoint() * op * b;
        SesqForm::new(domain, m)
    }

    pub fn zero(domain: Subspace) -> Self {
        let k = domain.dim();
        SesqForm::new(domain, CMatrix::zeros(k, k)).expect("square by construction")
    }

    /// The restriction of the inner product of `H` to `domain`.
    pub fn inner_product(domain: Subspace) -> Self {
        let k = domain.dim();
        SesqForm::new(domain, CMatrix::identity(k, k)).expect("square by construction")
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn ambient(&self) -> &HSpace {
        self.domain.ambient()
    }

    /// Coordinate matrix; also the matrix of the associated operator on `D(a)`.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn real_part_matrix(&self) -> CMatrix {
        linalg::hermitian_part(&self.matrix)
    }

    pub fn imag_part_matrix(&self) -> CMatrix {
        linalg::skew_part(&self.matrix)
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn sector_params(&self) -> Option<SectorParams> {
        self.sector.params()
    }

    /// `min Re a(u) / ‖u‖²`, the largest vertex any sector can have.
    pub fn max_vertex(&self) -> f64 {
        if self.domain.dim() == 0 {
            return 0.0;
        }
        linalg::min_eigenvalue(&self.real_part_matrix())
    }

    /// Minimal `tan θ` with `a(u) - γ‖u‖² ∈ Σ_θ`, if `γ` is an admissible vertex.
    pub fn tan_theta_at_vertex(&self, vertex: f64) -> Option<f64> {
        tan_theta_at_vertex(&self.matrix, vertex, self.domain.tol())
    }

    fn coords(&self, u: &CVector) -> Result<CVector> {
        let d = self.ambient().dim();
        if u.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: u.len(),
            });
        }
        if !self.domain.contains(u) {
            return Err(Error::DomainViolation {
                distance: self.domain.relative_distance(u),
            });
        }
        Ok(self.domain.coordinates(u))
    }

    /// `a(u, v)`: linear in `u`, conjugate-linear in `v`.
    pub fn evaluate(&self, u: &CVector, v: &CVector) -> Result<C64> {
        let x = self.coords(u)?;
        let y = self.coords(v)?;
        Ok((y.adjoint() * &self.matrix * x)[(0, 0)])
    }

    /// `a(u) = a(u, u)`.
    pub fn value(&self, u: &CVector) -> Result<C64> {
        self.evaluate(u, u)
    }

    /// Coordinates of `other`'s domain basis in this form's basis.
    fn transfer_from(&self, target: &Subspace) -> CMatrix {
        self.ambient().apply_gram(self.domain.basis()).adjoint() * target.basis()
    }

    /// Restriction to a subspace of `D(a)`, expressed in the basis of `sub`.
    pub fn restrict(&self, sub: &Subspace) -> Result<SesqForm> {
        if sub.ambient() != self.ambient() {
            return Err(Error::AmbientMismatch);
        }
        let tol = 1e3 * self.domain.tol().max(sub.tol());
        if !sub.is_subset_of(&self.domain, tol)? {
            let worst = (0..sub.dim())
                .map(|j| self.domain.relative_distance(&sub.basis().column(j).into_owned()))
                .fold(0.0, f64::max);
            return Err(Error::DomainViolation { distance: worst });
        }
        let t = self.transfer_from(sub);
        SesqForm::new(sub.clone(), t.adjoint() * &self.matrix * t)
    }

    /// `a + b` on `D(a) ∩ D(b)`.
    pub fn add(&self, other: &SesqForm) -> Result<SesqForm> {
        if self.ambient() != other.ambient() {
            return Err(Error::AmbientMismatch);
        }
        let domain = self.domain.intersect(&other.domain)?;
        let ta = self.transfer_from(&domain);
        let tb = other.transfer_from(&domain);
        let m = ta.adjoint() * &self.matrix * ta + tb.adjoint() * &other.matrix * tb;
        SesqForm::new(domain, m)
    }

    /// `s·a` for `s ≥ 0`.
    pub fn scale(&self, s: f64) -> Result<SesqForm> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "form scale must be a finite non-negative real, got {s}"
            )));
        }
        SesqForm::new(self.domain.clone(), self.matrix.map(|z| z * s))
    }

    /// `(Re a(u) + (1 - γ)‖u‖²)^{1/2}` with the cached vertex `γ`.
    pub fn graph_norm(&self, u: &CVector) -> Result<f64> {
        let params = self.sector.params().ok_or(Error::NotSectorial)?;
        let val = self.value(u)?;
        let norm_sq = self.ambient().norm(u).powi(2);
        Ok((val.re + (1.0 - params.vertex) * norm_sq).max(0.0).sqrt())
    }

    /// `(|b(u,v)|, (1 + tan θ)(Re b(u))^{1/2}(Re b(v))^{1/2})` for a form with vertex 0.
    pub fn sector_cs_bound(&self, u: &CVector, v: &CVector) -> Result<(f64, f64)> {
        let tan = self
            .tan_theta_at_vertex(0.0)
            .ok_or(Error::VertexNotAdmissible { vertex: 0.0 })?;
        let lhs = self.evaluate(u, v)?.norm();
        let ru = self.value(u)?.re.max(0.0);
        let rv = self.value(v)?.re.max(0.0);
        Ok((lhs, (1.0 + tan) * ru.sqrt() * rv.sqrt()))
    }
}

/// Constants for `|b(u)| ≤ c1 Re a(u) + c2 ‖u‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FormBound {
    Constants { c1: f64, c2: f64 },
    Unbounded,
}

impl FormBound {
    pub fn constants(&self) -> Option<(f64, f64)> {
        match self {
            FormBound::Constants { c1, c2 } => Some((*c1, *c2)),
            FormBound::Unbounded => None,
        }
    }
}

/// Near-minimal constants with `|b(u)| ≤ c1 Re a(u) + c2 ‖u‖²` on `D(a) = D(b)`.
pub fn form_bound_constants(a: &SesqForm, b: &SesqForm) -> Result<FormBound> {
    let mb = aligned_matrix(a, b)?;
    let k = a.domain.dim();
    Ok(bound_constants(
        &mb,
        &a.real_part_matrix(),
        &CMatrix::identity(k, k),
        a.domain.tol(),
    ))
}

/// Whether `(c1, c2)` satisfies the bound, checked on a fine phase grid.
pub fn form_bound_feasible(a: &SesqForm, b: &SesqForm, c1: f64, c2: f64) -> Result<bool> {
    let mb = aligned_matrix(a, b)?;
    let k = a.domain.dim();
    Ok(bound_feasible(
        &mb,
        &a.real_part_matrix(),
        &CMatrix::identity(k, k),
        c1,
        c2,
    ))
}

/// `b`'s matrix expressed in `a`'s domain basis.
fn aligned_matrix(a: &SesqForm, b: &SesqForm) -> Result<CMatrix> {
    if a.ambient() != b.ambient() {
        return Err(Error::AmbientMismatch);
    }
    let tol = 1e3 * a.domain.tol().max(b.domain.tol());
    if !a.domain.approx_eq(&b.domain, tol) {
        return Err(Error::InvalidArgument(
            "form bound constants need D(a) = D(b)".into(),
        ));
    }
    let t = b.transfer_from(&a.domain);
    Ok(t.adjoint() * &b.matrix * t)
}

const PHASE_GRID: usize = 64;
const FEASIBILITY_GRID: usize = 720;

/// `herm(e^{-iφ} M)`, whose quadratic form is `Re(e^{-iφ} b(x))`.
fn rotated_real_part(mb: &CMatrix, phi: f64) -> CMatrix {
    linalg::hermitian_part(&(mb * C64::from_polar(1.0, -phi)))
}

/// Split of a PSD mass matrix into its range (whitened) and null directions.
struct MassSplit {
    whiten_range: CMatrix,
    range: CMatrix,
    null: CMatrix,
}

impl MassSplit {
    fn new(mass: &CMatrix, tol: f64) -> Self {
        let (values, vectors) = linalg::hermitian_eigen(mass);
        let top = values.last().copied().unwrap_or(0.0).max(0.0);
        let cut = SECTOR_TOL_FACTOR * tol * top;
        let keep: Vec<usize> = (0..values.len()).filter(|&i| values[i] > cut).collect();
        let drop: Vec<usize> = (0..values.len()).filter(|&i| values[i] <= cut).collect();
        let range = linalg::select_columns(&vectors, &keep);
        let mut whiten_range = range.clone();
        for (j, &i) in keep.iter().enumerate() {
            whiten_range.column_mut(j).scale_mut(1.0 / values[i].sqrt());
        }
        MassSplit {
            whiten_range,
            range,
            null: linalg::select_columns(&vectors, &drop),
        }
    }

    /// `sup_x x* F x / x* K x` (infinite when `F` is not dominated on `ker K`).
    fn max_ratio(&self, f: &CMatrix, tol: f64) -> f64 {
        let scale = linalg::op_norm(f).max(f64::MIN_POSITIVE);
        let tau = SECTOR_TOL_FACTOR * tol * scale;
        if self.null.ncols() == 0 {
            let w = &self.whiten_range;
            return linalg::hermitian_eigen(&(w.adjoint() * f * w))
                .0
                .last()
                .copied()
                .unwrap_or(f64::NEG_INFINITY);
        }
        let n = &self.null;
        let fnn = n.adjoint() * f * n;
        let (vals, vecs) = linalg::hermitian_eigen(&fnn);
        if vals.last().copied().unwrap_or(f64::NEG_INFINITY) > tau {
            return f64::INFINITY;
        }
        let flat: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] >= -tau).collect();
        let neg: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] < -tau).collect();
        let fnc = n.adjoint() * f * &self.range;
        if !flat.is_empty() {
            let q0 = linalg::select_columns(&vecs, &flat);
            if linalg::op_norm(&(q0.adjoint() * &fnc)) > tau {
                return f64::INFINITY;
            }
        }
        if self.range.ncols() == 0 {
            return f64::NEG_INFINITY;
        }
        let mut schur = self.range.adjoint() * f * &self.range;
        if !neg.is_empty() {
            let qn = linalg::select_columns(&vecs, &neg);
            let mut inv = CMatrix::zeros(neg.len(), neg.len());
            for (j, &i) in neg.iter().enumerate() {
                inv[(j, j)] = linalg::real(1.0 / vals[i]);
            }
            let coupling = qn.adjoint() * &fnc;
            schur -= coupling.adjoint() * inv * coupling;
        }
        // Whitening restricted to range coordinates.
        let w = self.range.adjoint() * &self.whiten_range;
        linalg::hermitian_eigen(&(w.adjoint() * schur * &w))
            .0
            .last()
            .copied()
            .unwrap_or(f64::NEG_INFINITY)
    }
}

/// Smallest `c2` for a given `c1`, maximized over the phase.
fn min_c2(mb: &CMatrix, ra: &CMatrix, split: &MassSplit, c1: f64, tol: f64) -> f64 {
    let g = |phi: f64| split.max_ratio(&(rotated_real_part(mb, phi) - ra * linalg::real(c1)), tol);
    let step = std::f64::consts::TAU / PHASE_GRID as f64;
    let mut best_phi = 0.0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..PHASE_GRID {
        let phi = i as f64 * step;
        let val = g(phi);
        if val == f64::INFINITY {
            return f64::INFINITY;
        }
        if val > best {
            best = val;
            best_phi = phi;
        }
    }
    // Golden-section refinement around the best grid phase.
    let (mut lo, mut hi) = (best_phi - step, best_phi + step);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..40 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = g(x1);
        }
    }
    let refined = best.max(f1).max(f2);
    let scale = linalg::op_norm(mb).max(f64::MIN_POSITIVE);
    if refined <= 0.0 {
        0.0
    } else {
        refined * (1.0 + 1e-9) + 1e-12 * scale
    }
}

/// Line search over `c1` minimizing `c1 + c2(c1)`.
pub(crate) fn bound_constants(mb: &CMatrix, ra: &CMatrix, mass: &CMatrix, tol: f64) -> FormBound {
    let split = MassSplit::new(mass, tol);
    let nb = linalg::op_norm(mb);
    if nb == 0.0 {
        return FormBound::Constants { c1: 0.0, c2: 0.0 };
    }
    let na = linalg::op_norm(ra);
    let s = if na > 0.0 { nb / na } else { 1.0 };
    let mut candidates = vec![0.0];
    candidates.extend((-10..=10).map(|j| s * 2f64.powi(j)));
    let objective = |c1: f64| {
        let c2 = min_c2(mb, ra, &split, c1, tol);
        (c1 + c2, c2)
    };
    let evals: Vec<(f64, f64)> = candidates.iter().map(|&c1| objective(c1)).collect();
    let (best_idx, _) = evals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .expect("non-empty candidate list");
    if !evals[best_idx].0.is_finite() {
        return FormBound::Unbounded;
    }
    let mut best_c1 = candidates[best_idx];
    let mut best = evals[best_idx];
    let lo = if best_idx == 0 { 0.0 } else { candidates[best_idx - 1] };
    let hi = candidates.get(best_idx + 1).copied().unwrap_or(candidates[best_idx] * 2.0);
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..20 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        let (e1, e2) = (objective(m1), objective(m2));
        if e1.0 < best.0 {
            best = e1;
            best_c1 = m1;
        }
        if e2.0 < best.0 {
            best = e2;
            best_c1 = m2;
        }
        if e1.0 <= e2.0 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    FormBound::Constants {
        c1: best_c1,
        c2: best.1,
    }
}

pub(crate) fn bound_feasible(mb: &CMatrix, ra: &CMatrix, mass: &CMatrix, c1: f64, c2: f64) -> bool {
    let scale = linalg::op_norm(mb) + c1 * linalg::op_norm(ra) + c2 * linalg::op_norm(mass);
    let tol = 1e-9 * scale.max(f64::MIN_POSITIVE);
    let base = ra * linalg::real(c1) + mass * linalg::real(c2);
    (0..FEASIBILITY_GRID).all(|i| {
        let phi = i as f64 * std::f64::consts::TAU / FEASIBILITY_GRID as f64;
        linalg::min_eigenvalue(&(&base - rotated_real_part(mb, phi))) >= -tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{orthonormalize, DEFAULT_RANK_TOL};
    use crate::linalg::{c, real, ONE, ZERO};

    fn e(d: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(d);
        v[i] = ONE;
        v
    }

    fn line(d: usize, i: usize) -> Subspace {
        orthonormalize(&[e(d, i)], &HSpace::new(d), DEFAULT_RANK_TOL).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let full = Subspace::full(&HSpace::new(2));
        let id = SesqForm::inner_product(full.clone());
        assert_eq!(id.evaluate(&e(2, 0), &e(2, 0)).unwrap(), ONE);
        let zero = SesqForm::zero(full);
        assert_eq!(zero.evaluate(&e(2, 0), &e(2, 1)).unwrap(), ZERO);
        let f = SesqForm::new(line(1, 0), CMatrix::from_element(1, 1, c(1.0, 1.0))).unwrap();
        assert_eq!(f.evaluate(&e(1, 0), &e(1, 0)).unwrap(), c(1.0, 1.0));
    }

    #[test]
    fn evaluate_outside_domain_fails() {
        let f = SesqForm::inner_product(line(2, 0));
        assert!(matches!(
            f.evaluate(&e(2, 1), &e(2, 0)),
            Err(Error::DomainViolation { .. })
        ));
    }

    #[test]
    fn conjugate_linearity_in_second_slot() {
        let full = Subspace::full(&HSpace::new(2));
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.3), real(2.0), c(0.0, -1.0), real(0.5)]);
        let f = SesqForm::new(full, m).unwrap();
        let u = e(2, 0) + e(2, 1) * c(0.2, 0.7);
        let v = e(2, 1) - e(2, 0) * c(1.5, 0.1);
        let s = c(0.3, -2.0);
        let base = f.evaluate(&u, &v).unwrap();
        assert!((f.evaluate(&(u.clone() * s), &v).unwrap() - s * base).norm() < 1e-12);
        assert!((f.evaluate(&u, &(v.clone() * s)).unwrap() - s.conj() * base).norm() < 1e-12);
    }

    #[test]
    fn identity_form_sector() {
        let f = SesqForm::inner_product(Subspace::full(&HSpace::new(3)));
        assert_eq!(
            f.sector(),
            Sector::Sectorial(SectorParams {
                vertex: 1.0,
                tan_theta: 0.0
            })
        );
    }

    #[test]
    fn purely_imaginary_form_is_not_sectorial() {
        let f = SesqForm::new(line(1, 0), CMatrix::from_element(1, 1, c(0.0, 1.0))).unwrap();
        assert_eq!(f.sector(), Sector::NotSectorial);
        // A smaller vertex still works: i ∈ 1 + Σ_θ with tan θ = 1.
        assert!((f.tan_theta_at_vertex(-1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(f.tan_theta_at_vertex(0.5).is_none());
    }

    #[test]
    fn one_plus_i_has_no_semi_angle_at_its_maximal_vertex() {
        let f = SesqForm::new(line(1, 0), CMatrix::from_element(1, 1, c(1.0, 1.0))).unwrap();
        assert_eq!(f.max_vertex(), 1.0);
        assert_eq!(f.sector(), Sector::NotSectorial);
        // 1 + i lies on the ray of angle π/4 from the origin.
        assert!((f.tan_theta_at_vertex(0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn add_and_scale_examples() {
        let space = HSpace::new(2);
        let full = Subspace::full(&space);
        let m = CMatrix::from_row_slice(2, 2, &[real(2.0), c(0.0, 1.0), real(0.5), real(1.0)]);
        let a = SesqForm::new(full.clone(), m).unwrap();
        let sum = a.add(&SesqForm::zero(full)).unwrap();
        assert!((sum.matrix() - a.matrix()).norm() < 1e-12);
        let twice = a.add(&a).unwrap();
        assert!((twice.matrix() - a.scale(2.0).unwrap().matrix()).norm() < 1e-12);
        let disjoint = SesqForm::inner_product(line(2, 0)).add(&SesqForm::inner_product(line(2, 1)));
        assert_eq!(disjoint.unwrap().domain().dim(), 0);
        assert!(a.scale(-1.0).is_err());
    }

    #[test]
    fn graph_norm_examples() {
        let space = HSpace::new(2);
        let u = e(2, 0) * c(0.6, 0.8) + e(2, 1) * real(2.0);
        let norm = space.norm(&u);
        let zero = SesqForm::zero(Subspace::full(&space));
        assert!((zero.graph_norm(&u).unwrap() - norm).abs() < 1e-12);
        let id = SesqForm::inner_product(Subspace::full(&space));
        assert!((id.graph_norm(&u).unwrap() - norm).abs() < 1e-12);
        let two = SesqForm::new(line(2, 0), CMatrix::from_element(1, 1, real(2.0))).unwrap();
        assert_eq!(two.sector_params().unwrap().vertex, 2.0);
        assert!((two.graph_norm(&e(2, 0)).unwrap() - 1.0).abs() < 1e-12);
        let skew = SesqForm::new(line(1, 0), CMatrix::from_element(1, 1, c(0.0, 1.0))).unwrap();
        assert_eq!(skew.graph_norm(&e(1, 0)).unwrap_err(), Error::NotSectorial);
    }

    #[test]
    fn cs_bound_examples() {
        let space = HSpace::new(2);
        let psd = CMatrix::from_diagonal(&CVector::from_vec(vec![real(2.0), real(0.5)]));
        let b = SesqForm::new(Subspace::full(&space), psd).unwrap();
        let u = e(2, 0) + e(2, 1);
        let (lhs, rhs) = b.sector_cs_bound(&u, &u).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        let (lhs, rhs) = b.sector_cs_bound(&e(2, 0), &e(2, 1)).unwrap();
        assert_eq!(lhs, 0.0);
        assert!(rhs > 0.0);
        let neg = SesqForm::inner_product(Subspace::full(&space)).scale(1.0).unwrap();
        let shifted =
            SesqForm::new(Subspace::full(&space), neg.matrix() * real(-1.0)).unwrap();
        assert!(matches!(
            shifted.sector_cs_bound(&u, &u),
            Err(Error::VertexNotAdmissible { .. })
        ));
    }

    #[test]
    fn bound_constants_examples() {
        let space = HSpace::new(3);
        let full = Subspace::full(&space);
        let r = CMatrix::from_row_slice(
            3,
            3,
            &[real(2.0), real(1.0), ZERO, real(1.0), real(2.0), ZERO, ZERO, ZERO, ZERO],
        );
        let a = SesqForm::new(full.clone(), r).unwrap();
        assert!(form_bound_feasible(&a, &a, 1.0, 0.0).unwrap());
        assert!(!form_bound_feasible(&a, &a, 0.5, 0.0).unwrap());
        let zero = SesqForm::zero(full.clone());
        assert_eq!(
            form_bound_constants(&a, &zero).unwrap(),
            FormBound::Constants { c1: 0.0, c2: 0.0 }
        );
        // ‖B‖ = 3 gives |(Bu, u)| ≤ 3‖u‖².
        let bop = CMatrix::from_row_slice(
            3,
            3,
            &[real(3.0), ZERO, ZERO, ZERO, c(0.0, 2.0), ZERO, ZERO, ZERO, real(-1.0)],
        );
        let b = SesqForm::from_operator(full, &bop).unwrap();
        assert!(form_bound_feasible(&a, &b, 0.0, 3.0).unwrap());
        let (c1, c2) = form_bound_constants(&a, &b).unwrap().constants().unwrap();
        assert!(form_bound_feasible(&a, &b, c1, c2).unwrap());
        assert!(c1 + c2 <= 3.0 + 1e-9);
    }
}
