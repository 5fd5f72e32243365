//! Series `a_n = b_1 + … + b_n` of sectorial forms with vertex 0.
//!
//! A sequence is a finite head `b_1..b_N` followed by a tail rule for
//! `n > N`:
//! - [`TailRule::Zero`]: `b_n = 0`,
//! - [`TailRule::Constant`]: `b_n = b_N`,
//! - [`TailRule::Geometric`]: `b_n = ρ^{n-N} b_N`.
//!
//! Partial sums and the limit form have closed forms under each rule. The
//! [`Tower`] realizes the weighted spaces `V_n`, their direct sum and the
//! compatible subspace `W_∞` for a finite number of levels.

use std::collections::BTreeMap;

use crate::association::{graph_of_closed_form, RepresentedForm};
use crate::error::{Error, Result};
use crate::forms::SesqForm;
use crate::hilbert::{HSpace, Subspace, DEFAULT_RANK_TOL};
use crate::linalg::{self, CMatrix, CVector};
use crate::relations::LinearRelation;
use crate::semigroups::{default_probes, validate_schedule, ConvergenceReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailRule {
    Zero,
    Constant,
    Geometric(f64),
}

impl TailRule {
    pub fn name(&self) -> &'static str {
        match self {
            TailRule::Zero => "zero",
            TailRule::Constant => "constant",
            TailRule::Geometric(_) => "geometric",
        }
    }

    /// Total weight of the tail terms `n + 1, …, m` relative to `b_N`, for `N ≤ n ≤ m`.
    fn weight(&self, from: u64, to: u64) -> f64 {
        let steps = to.saturating_sub(from);
        match *self {
            TailRule::Zero => 0.0,
            TailRule::Constant => steps as f64,
            TailRule::Geometric(rho) => {
                // Σ_{k=from+1}^{to} ρ^{k-N} with the exponent offset from `from`.
                let start = rho.powi(i32::try_from(from).unwrap_or(i32::MAX));
                start * rho * (1.0 - rho.powi(i32::try_from(steps).unwrap_or(i32::MAX))) / (1.0 - rho)
            }
        }
    }
}

/// Head forms with vertex 0 and a tail rule.
#[derive(Debug, Clone)]
pub struct FormSequence {
    head: Vec<SesqForm>,
    tail: TailRule,
    tan_theta: f64,
    /// `b_1 + … + b_k` for `k = 1..N`.
    head_sums: Vec<SesqForm>,
}

impl FormSequence {
    pub fn new(head: Vec<SesqForm>, tail: TailRule) -> Result<Self> {
        let first = head
            .first()
            .ok_or_else(|| Error::InvalidArgument("a form sequence needs at least one head form".into()))?;
        if let TailRule::Geometric(rho) = tail {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(Error::InvalidArgument(format!("geometric ratio must lie in (0, 1), got {rho}")));
            }
        }
        let mut tan_theta: f64 = 0.0;
        for b in &head {
            if b.ambient() != first.ambient() {
                return Err(Error::AmbientMismatch);
            }
            let t = b
                .tan_theta_at_vertex(0.0)
                .ok_or(Error::VertexNotAdmissible { vertex: 0.0 })?;
            tan_theta = tan_theta.max(t);
        }
        let mut head_sums: Vec<SesqForm> = Vec::with_capacity(head.len());
        for b in &head {
            let next = match head_sums.last() {
                Some(s) => s.add(b)?,
                None => b.clone(),
            };
            head_sums.push(next);
        }
        Ok(FormSequence {
            head,
            tail,
            tan_theta,
            head_sums,
        })
    }

    pub fn ambient(&self) -> &HSpace {
        self.head[0].ambient()
    }

    pub fn head(&self) -> &[SesqForm] {
        &self.head
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    /// `N`, the head length.
    pub fn len(&self) -> usize {
        self.head.len()
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty()
    }

    /// Common bound on `tan θ` at vertex 0.
    pub fn tan_theta(&self) -> f64 {
        self.tan_theta
    }

    fn last(&self) -> &SesqForm {
        self.head.last().expect("non-empty head")
    }

    /// `b_n` for `n ≥ 1`.
    pub fn term(&self, n: u64) -> Result<SesqForm> {
        check_index(n)?;
        let big_n = self.head.len() as u64;
        if n <= big_n {
            return Ok(self.head[(n - 1) as usize].clone());
        }
        match self.tail {
            TailRule::Zero => Ok(SesqForm::zero(Subspace::full(self.ambient()))),
            TailRule::Constant => Ok(self.last().clone()),
            TailRule::Geometric(rho) => self.last().scale(rho.powf((n - big_n) as f64)),
        }
    }

    /// `a_n = b_1 + … + b_n` on `D(b_1) ∩ … ∩ D(b_n)`.
    pub fn partial_sum(&self, n: u64) -> Result<SesqForm> {
        check_index(n)?;
        let big_n = self.head.len() as u64;
        if n <= big_n {
            return Ok(self.head_sums[(n - 1) as usize].clone());
        }
        let base = self.head_sums.last().expect("non-empty head");
        let w = self.tail.weight(0, n - big_n);
        if w == 0.0 {
            return Ok(base.clone());
        }
        base.add(&self.last().scale(w)?)
    }

    /// The limit form `a_∞`.
    pub fn limit_form(&self) -> Result<SesqForm> {
        let base = self.head_sums.last().expect("non-empty head");
        match self.tail {
            TailRule::Zero => Ok(base.clone()),
            TailRule::Geometric(rho) => base.add(&self.last().scale(rho / (1.0 - rho))?),
            TailRule::Constant => {
                // b_N vanishes identically on its kernel; dropping it keeps
                // rounding noise out of the limit.
                let kernel = real_part_kernel(self.last(), base.domain());
                match self.head_sums.len() {
                    1 => Ok(SesqForm::zero(kernel)),
                    n => self.head_sums[n - 2].restrict(&kernel),
                }
            }
        }
    }
}

fn check_index(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("sequence indices start at 1".into()));
    }
    Ok(())
}

/// `{u ∈ S : Re b(u) = 0}` for `S ⊆ D(b)` and `b` with vertex 0.
pub(crate) fn real_part_kernel(b: &SesqForm, s: &Subspace) -> Subspace {
    let restricted = b.restrict(s).expect("subspace of the form domain");
    let null = linalg::null_space(&restricted.real_part_matrix(), DEFAULT_RANK_TOL);
    let cols = if null.ncols() == 0 {
        CMatrix::zeros(s.ambient().dim(), 0)
    } else {
        s.basis() * null
    };
    Subspace::from_columns(&cols, s.ambient(), s.tol()).expect("columns live in H")
}

/// `[A_1, …, A_n]`.
pub fn partial_sum_graphs(seq: &FormSequence, n: u64) -> Result<Vec<LinearRelation>> {
    check_index(n)?;
    (1..=n).map(|k| graph_of_closed_form(&seq.partial_sum(k)?)).collect()
}

/// Graph of the limit form together with the strong resolvent report.
#[derive(Debug, Clone)]
pub struct SeriesConvergence {
    pub limit: LinearRelation,
    pub report: ConvergenceReport,
    /// `min (‖f‖ - ‖u_n‖)` over probes and schedule.
    pub norm_slack: f64,
    /// `min (‖f‖² - Re a_n(u_n))` over probes and schedule.
    pub energy_slack: f64,
}

/// `max_f ‖(A_n + I)^{-1} f - (A_∞ + I)^{-1} f‖` along the schedule, with the
/// a-priori bounds on `u_n = (A_n + I)^{-1} f`.
pub fn limit_graph_and_convergence(seq: &FormSequence, schedule: &[u64]) -> Result<SeriesConvergence> {
    validate_schedule(schedule)?;
    let space = seq.ambient();
    let limit = graph_of_closed_form(&seq.limit_form()?)?;
    let r_inf = limit.resolvent(linalg::real(-1.0))?;
    let probes = default_probes(space);
    let mut errors = Vec::with_capacity(schedule.len());
    let mut norm_slack = f64::INFINITY;
    let mut energy_slack = f64::INFINITY;
    for &n in schedule {
        let a_n = seq.partial_sum(n)?;
        let graph = graph_of_closed_form(&a_n)?;
        let r_n = graph.resolvent(linalg::real(-1.0))?;
        let mut worst: f64 = 0.0;
        for f in &probes {
            let u = &r_n * f;
            worst = worst.max(space.norm(&(&u - &r_inf * f)));
            let f_norm = space.norm(f);
            norm_slack = norm_slack.min(f_norm - space.norm(&u));
            let energy = form_energy(&a_n, &u);
            energy_slack = energy_slack.min(f_norm * f_norm - energy);
        }
        errors.push(worst);
    }
    let mut meta = BTreeMap::new();
    meta.insert("track".to_string(), "resolvent".to_string());
    meta.insert("tail".to_string(), seq.tail.name().to_string());
    let report = ConvergenceReport::new(schedule.to_vec(), errors, meta)?;
    Ok(SeriesConvergence {
        limit,
        report,
        norm_slack,
        energy_slack,
    })
}

/// `Re a(u)` after projecting `u` onto `D(a)` (it lies there up to rounding).
fn form_energy(a: &SesqForm, u: &CVector) -> f64 {
    let x = a.domain().coordinates(u);
    linalg::quad(a.matrix(), &x).re
}

/// `D(a_∞) ⊆ D(A_∞)`, and density of `D(a_∞)` forces `A_∞` to be single-valued.
pub fn prop_3_3_check(seq: &FormSequence) -> Result<bool> {
    let limit_form = seq.limit_form()?;
    let limit = graph_of_closed_form(&limit_form)?;
    let inclusion = limit_form.domain().is_subset_of(&limit.domain(), 1e-8)?;
    let single_valued = !limit_form.domain().is_full() || limit.is_single_valued().0;
    Ok(inclusion && single_valued)
}

/// One level `V_n` of the tower.
#[derive(Debug, Clone)]
pub struct TowerLevel {
    /// `E_n`, a `G`-orthonormal basis of `D(a_n)` (the identity for `n = 0`).
    pub basis: CMatrix,
    /// `V_n` in the coordinates of `E_n`, with `‖x‖²_n = Σ_k 2^{-(n-k)} Re b̃_{nk}(x)`.
    pub space: HSpace,
    /// `b̃_{nk}` for `k = 0..=n` in the coordinates of `E_n`.
    pub forms: Vec<CMatrix>,
}

impl TowerLevel {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `ã_n = Σ_{k=1}^n b̃_{nk}`.
    pub fn a_tilde(&self) -> CMatrix {
        let k = self.dim();
        self.forms
            .iter()
            .skip(1)
            .fold(CMatrix::zeros(k, k), |acc, b| acc + b)
    }
}

/// Levels `V_0..V_L`, their direct sum `V` and the compatible subspace `W_∞`.
#[derive(Debug, Clone)]
pub struct Tower {
    h: HSpace,
    levels: Vec<TowerLevel>,
    offsets: Vec<usize>,
    sum_space: HSpace,
    w_infinity: Subspace,
    tail: TailRule,
    /// `b_N` in H-level terms, used for the tail of the boundedness test.
    last_term: SesqForm,
    head_len: usize,
}

/// Build levels `0..=levels`, raised to the head length if necessary so that
/// every tail level repeats the domain of the last one.
pub fn build_tower(seq: &FormSequence, levels: usize) -> Result<Tower> {
    let top = levels.max(seq.len()).max(1);
    let h = seq.ambient().clone();
    let d = h.dim();
    let mut out = Vec::with_capacity(top + 1);
    out.push(TowerLevel {
        basis: CMatrix::identity(d, d),
        space: h.clone(),
        forms: vec![h.gram_matrix()],
    });
    for n in 1..=top {
        let a_n = seq.partial_sum(n as u64)?;
        let domain = a_n.domain().clone();
        let e = domain.basis().clone();
        let k = e.ncols();
        let mut forms = vec![CMatrix::identity(k, k)];
        for j in 1..=n {
            let b = seq.term(j as u64)?;
            forms.push(b.restrict(&domain)?.matrix().clone());
        }
        let mut gram = CMatrix::zeros(k, k);
        for (j, b) in forms.iter().enumerate() {
            let w = 0.5f64.powi((n - j) as i32);
            gram += linalg::hermitian_part(b) * linalg::real(w);
        }
        out.push(TowerLevel {
            basis: e,
            space: HSpace::with_gram(gram)?,
            forms,
        });
    }
    let mut offsets = Vec::with_capacity(out.len() + 1);
    let mut acc = 0;
    for level in &out {
        offsets.push(acc);
        acc += level.dim();
    }
    offsets.push(acc);
    let mut gram = CMatrix::zeros(acc, acc);
    for (n, level) in out.iter().enumerate() {
        gram.view_mut((offsets[n], offsets[n]), (level.dim(), level.dim()))
            .copy_from(&level.space.gram_matrix());
    }
    let sum_space = HSpace::with_gram(gram)?;
    let limit = seq.limit_form()?;
    let mut tower = Tower {
        h,
        levels: out,
        offsets,
        w_infinity: Subspace::zero(&sum_space),
        sum_space,
        tail: seq.tail(),
        last_term: seq.last().clone(),
        head_len: seq.len(),
    };
    let e_inf = limit.domain().basis();
    let stacked = tower.lift_columns(e_inf);
    tower.w_infinity = Subspace::from_columns(&stacked, &tower.sum_space, DEFAULT_RANK_TOL)?;
    Ok(tower)
}

/// Compatibility and norm-bound test on a tuple `(u_0, …, u_L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma33Check {
    pub compatible: bool,
    pub bound_holds: bool,
    /// `2 (sup Re ã_n(u_n) + ‖u_0‖²) - Σ ‖u_n‖²_{V_n}`.
    pub slack: f64,
}

impl Tower {
    pub fn ambient(&self) -> &HSpace {
        &self.h
    }

    pub fn levels(&self) -> &[TowerLevel] {
        &self.levels
    }

    /// Index of the top level `L`.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn sum_space(&self) -> &HSpace {
        &self.sum_space
    }

    pub fn w_infinity(&self) -> &Subspace {
        &self.w_infinity
    }

    /// `Φ_{nm}: V_n → V_m` for `m ≤ n`.
    pub fn phi(&self, n: usize, m: usize) -> CMatrix {
        assert!(m <= n && n <= self.top(), "need m ≤ n ≤ top");
        let en = &self.levels[n].basis;
        if m == 0 {
            return en.clone();
        }
        let em = &self.levels[m].basis;
        self.h.apply_gram(em).adjoint() * en
    }

    /// `q_n(u)` for `u ∈ D(a_n)` (coordinates in `E_n`).
    pub fn q(&self, n: usize, u: &CVector) -> CVector {
        if n == 0 {
            return u.clone();
        }
        self.h.apply_gram(&self.levels[n].basis).adjoint() * u
    }

    /// Block `n` of a direct-sum vector.
    pub fn block(&self, v: &CVector, n: usize) -> CVector {
        v.rows(self.offsets[n], self.levels[n].dim()).into_owned()
    }

    /// Concatenate per-level coordinates into a direct-sum vector.
    pub fn stack(&self, parts: &[CVector]) -> CVector {
        let mut out = CVector::zeros(self.sum_space.dim());
        for (n, p) in parts.iter().enumerate().take(self.levels.len()) {
            out.rows_mut(self.offsets[n], p.len()).copy_from(p);
        }
        out
    }

    /// `(q_0(u), …, q_L(u))` for each column `u` (H coordinates).
    fn lift_columns(&self, cols: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.sum_space.dim(), cols.ncols());
        for j in 0..cols.ncols() {
            let u = cols.column(j).into_owned();
            let parts: Vec<CVector> = (0..self.levels.len()).map(|n| self.q(n, &u)).collect();
            out.set_column(j, &self.stack(&parts));
        }
        out
    }

    /// The canonical element `(q_n(u))_n` of `u ∈ D(a_L)`.
    pub fn canonical_element(&self, u: &CVector) -> Vec<CVector> {
        (0..self.levels.len()).map(|n| self.q(n, u)).collect()
    }

    /// `I_n: V_n → V`, `x ↦ (Φ_{n0} x, …, Φ_{nn} x, 0, …)`.
    pub fn inject(&self, n: usize) -> CMatrix {
        let k = self.levels[n].dim();
        let mut out = CMatrix::zeros(self.sum_space.dim(), k);
        for m in 0..=n {
            out.view_mut((self.offsets[m], 0), (self.levels[m].dim(), k))
                .copy_from(&self.phi(n, m));
        }
        out
    }

    /// `W_n = I_n(V_n)`.
    pub fn w(&self, n: usize) -> Subspace {
        Subspace::from_columns(&self.inject(n), &self.sum_space, DEFAULT_RANK_TOL).expect("columns live in V")
    }

    /// `T_m`, keeping blocks `0..=m`.
    pub fn truncation(&self, m: usize) -> CMatrix {
        let total = self.sum_space.dim();
        let keep = self.offsets[m + 1];
        let mut out = CMatrix::zeros(total, total);
        out.view_mut((0, 0), (keep, keep)).fill_with_identity();
        out
    }

    /// `b̂_k(u, v) = b̃_{kk}(π_k u, π_k v)` as a matrix on `V`.
    pub fn b_hat(&self, k: usize) -> CMatrix {
        let total = self.sum_space.dim();
        let level = &self.levels[k];
        let mut out = CMatrix::zeros(total, total);
        out.view_mut((self.offsets[k], self.offsets[k]), (level.dim(), level.dim()))
            .copy_from(&level.forms[k]);
        out
    }

    /// `â_n = Σ_{k=1}^n b̂_k` (and `â_0 = b̂_0`).
    pub fn a_hat(&self, n: usize) -> CMatrix {
        if n == 0 {
            return self.b_hat(0);
        }
        let total = self.sum_space.dim();
        (1..=n).fold(CMatrix::zeros(total, total), |acc, k| acc + self.b_hat(k))
    }

    /// `sup_n Re ã_n(u_n)` including the tail levels past `L`, where
    /// `u_n = u_L` as an element of `D(a_L)`.
    fn sup_energy(&self, parts: &[CVector]) -> f64 {
        let top = self.top();
        let mut sup: f64 = 0.0;
        for (n, level) in self.levels.iter().enumerate().skip(1) {
            sup = sup.max(linalg::quad(&level.a_tilde(), &parts[n]).re);
        }
        let last = &self.levels[top];
        let u_top = &last.basis * &parts[top];
        let at_top = linalg::quad(&last.a_tilde(), &parts[top]).re;
        let tail_re = form_energy(&self.last_term, &u_top);
        let steps_past = (top - self.head_len) as u64;
        match self.tail {
            TailRule::Zero => sup,
            TailRule::Geometric(rho) => {
                // Remaining mass Σ_{n>L} ρ^{n-N} Re b_N(u).
                let remaining = rho.powi(steps_past as i32 + 1) / (1.0 - rho);
                sup.max(at_top + remaining * tail_re.max(0.0))
            }
            TailRule::Constant => {
                let scale = 1.0 + self.last_term.matrix().norm();
                if tail_re.abs() <= 1e-10 * scale * (1.0 + parts[top].norm_squared()) {
                    sup
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Test `(u_0, …, u_L)`, one coordinate vector per level, for membership
    /// in the limit domain and the norm bound.
    pub fn lemma_3_3_check(&self, parts: &[CVector]) -> Result<Lemma33Check> {
        if parts.len() != self.levels.len() {
            return Err(Error::DimensionMismatch {
                expected: self.levels.len(),
                actual: parts.len(),
            });
        }
        for (n, p) in parts.iter().enumerate() {
            if p.len() != self.levels[n].dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.levels[n].dim(),
                    actual: p.len(),
                });
            }
        }
        let scale = 1.0 + parts.iter().map(|p| p.norm()).fold(0.0, f64::max);
        let mut phi_ok = true;
        for n in 1..parts.len() {
            for m in 0..n {
                let diff = self.phi(n, m) * &parts[n] - &parts[m];
                if diff.norm() > 1e-8 * scale {
                    phi_ok = false;
                }
            }
        }
        let sup = self.sup_energy(parts);
        let compatible = phi_ok && sup.is_finite();
        let norm_sq: f64 = parts
            .iter()
            .enumerate()
            .map(|(n, p)| self.levels[n].space.norm(p).powi(2))
            .sum();
        let u0 = self.h.norm(&parts[0]);
        let slack = 2.0 * (sup + u0 * u0) - norm_sq;
        Ok(Lemma33Check {
            compatible,
            bound_holds: slack >= -1e-10 * (1.0 + norm_sq),
            slack,
        })
    }

    /// `(â_∞, j)` restricted to `W_∞`, in the coordinates of its basis.
    pub fn represented_limit(&self, limit: &SesqForm) -> Result<RepresentedForm> {
        let w = self.w_infinity.basis();
        let r = w.ncols();
        let d = self.h.dim();
        let j = w.rows(0, d).into_owned();
        let c = if limit.domain().dim() == 0 {
            CMatrix::zeros(0, r)
        } else {
            self.h.apply_gram(limit.domain().basis()).adjoint() * &j
        };
        RepresentedForm::new(HSpace::new(r), self.h.clone(), j, c.adjoint() * limit.matrix() * c)
    }
}
