//! Seeded instance generators.
//!
//! All randomness goes through [`rng`], a `ChaCha8Rng` seeded from a `u64`
//! with `SeedableRng::seed_from_u64`. Complex entries are
//! `(N(0,1) + i N(0,1)) / √2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::forms::SesqForm;
use crate::hilbert::{HSpace, Subspace, DEFAULT_RANK_TOL};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::relations::LinearRelation;
use crate::series::{FormSequence, TailRule};

pub type ScenarioRng = ChaCha8Rng;

pub fn rng(seed: u64) -> ScenarioRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CVector {
    CVector::from_fn(d, |_, _| complex_normal(rng))
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, space: &HSpace) -> CVector {
    loop {
        let v = vector(rng, space.dim());
        let n = space.norm(&v);
        if n > 1e-8 {
            return v.unscale(n);
        }
    }
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, k: usize) -> CMatrix {
    linalg::hermitian_part(&matrix(rng, k, k))
}

/// Random subspace of dimension `k` (generically exact).
pub fn subspace<R: Rng + ?Sized>(rng: &mut R, space: &HSpace, k: usize) -> Subspace {
    Subspace::from_columns(&matrix(rng, space.dim(), k), space, DEFAULT_RANK_TOL)
        .expect("columns have the ambient dimension")
}

/// Random Hermitian PSD `k × k` matrix of the given rank, spectrum in `[0.5, 2]`.
pub fn psd<R: Rng + ?Sized>(rng: &mut R, k: usize, rank: usize) -> CMatrix {
    let q = linalg::range_basis(&matrix(rng, k, rank.min(k)), DEFAULT_RANK_TOL);
    let mut out = CMatrix::zeros(k, k);
    for j in 0..q.ncols() {
        let lambda: f64 = rng.random_range(0.5..2.0);
        let col = q.column(j);
        out += &col * col.adjoint() * linalg::real(lambda);
    }
    out
}

/// `C* (I + iK) C` with `‖K‖ = tan_theta`: vertex 0 and semi-angle at most `atan(tan_theta)`.
pub fn sectorial_matrix<R: Rng + ?Sized>(rng: &mut R, k: usize, rank: usize, tan_theta: f64) -> CMatrix {
    let root = psd(rng, k, rank);
    let mut skew = hermitian(rng, k);
    let norm = linalg::op_norm(&skew);
    if norm > 0.0 {
        skew *= linalg::real(tan_theta / norm);
    }
    let inner = CMatrix::identity(k, k) + skew * C64::new(0.0, 1.0);
    &root * inner * &root
}

/// Sectorial form with vertex 0 on `domain`.
pub fn sectorial_form<R: Rng + ?Sized>(rng: &mut R, domain: Subspace, rank: usize, tan_theta: f64) -> SesqForm {
    let k = domain.dim();
    let m = sectorial_matrix(rng, k, rank, tan_theta);
    SesqForm::new(domain, m).expect("square by construction")
}

/// Random m-sectorial relation `graph(A°) ⊕ ({0} × D^⊥)` with `dim D = k`.
pub fn m_sectorial_relation<R: Rng + ?Sized>(
    rng: &mut R,
    space: &HSpace,
    k: usize,
    tan_theta: f64,
    shift: f64,
) -> LinearRelation {
    let domain = subspace(rng, space, k);
    let core = sectorial_matrix(rng, k, k, tan_theta) + CMatrix::identity(k, k) * linalg::real(shift);
    let perp = domain.ortho_complement();
    let b = domain.basis();
    let d = space.dim();
    let xs = linalg::hstack(b, &CMatrix::zeros(d, perp.dim()));
    let ys = linalg::hstack(&(b * core), perp.basis());
    LinearRelation::from_pairs(space, &xs, &ys, DEFAULT_RANK_TOL).expect("shapes agree")
}

/// Random relation spanned by `r` random pairs; generally neither sectorial nor single-valued.
pub fn relation<R: Rng + ?Sized>(rng: &mut R, space: &HSpace, r: usize) -> LinearRelation {
    let d = space.dim();
    let xs = matrix(rng, d, r);
    let ys = matrix(rng, d, r);
    LinearRelation::from_pairs(space, &xs, &ys, DEFAULT_RANK_TOL).expect("shapes agree")
}

/// Unit probes: the normalized standard basis followed by `extra` seeded random unit vectors.
pub fn probe_set(space: &HSpace, extra: usize, seed: u64) -> Vec<CVector> {
    let d = space.dim();
    let mut probes: Vec<CVector> = (0..d)
        .map(|i| {
            let mut v = CVector::zeros(d);
            v[i] = C64::new(1.0, 0.0);
            let n = space.norm(&v);
            v.unscale(n)
        })
        .collect();
    let mut g = rng(seed);
    probes.extend((0..extra).map(|_| unit_vector(&mut g, space)));
    probes
}

/// Number of random probes appended to the standard basis.
pub const RANDOM_PROBES: usize = 16;

/// Random sequence for convergence sweeps: `n_head` sectorial terms with
/// `tan θ ≤ tan_theta`, each on a random domain of dimension at least `d - 1`.
pub fn form_sequence<R: Rng + ?Sized>(
    rng: &mut R,
    space: &HSpace,
    n_head: usize,
    tail: TailRule,
    tan_theta: f64,
) -> FormSequence {
    let d = space.dim();
    let head = (0..n_head)
        .map(|_| {
            let k = if d > 1 && rng.random_bool(0.3) { d - 1 } else { d };
            let domain = if k == d { Subspace::full(space) } else { subspace(rng, space, k) };
            let rank = rng.random_range(1..=k);
            sectorial_form(rng, domain, rank, tan_theta)
        })
        .collect();
    FormSequence::new(head, tail).expect("terms have vertex 0")
}

/// Increasing sequence of positive symmetric forms on `H`.
pub fn kato_simon_sequence<R: Rng + ?Sized>(rng: &mut R, space: &HSpace, n_head: usize, tail: TailRule) -> FormSequence {
    let d = space.dim();
    let head = (0..n_head)
        .map(|_| {
            let rank = rng.random_range(1..=d);
            SesqForm::new(Subspace::full(space), psd(rng, d, rank)).expect("square by construction")
        })
        .collect();
    FormSequence::new(head, tail).expect("terms have vertex 0")
}
