//! The acceptance battery behind `sectorial verify`.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use sectorial::absorption::{example_4_3_scenario, random_bounded_problem};
use sectorial::linalg::{self, real};
use sectorial::random::{self, ScenarioRng};
use sectorial::relations::Inversion;
use sectorial::semigroups::resolvent_power_report;
use sectorial::series::{build_tower, limit_graph_and_convergence, TailRule};
use sectorial::{CMatrix, CVector, HSpace, LinearRelation, SesqForm, Subspace, C64};

use rand::Rng;

use crate::config::{ScenarioConfig, ScenarioKind, Tolerances, SCHEMA_VERSION};
use crate::report;
use crate::scenario::run_scenario;

pub const CRITERIA: [(&str, &str); 10] = [
    ("example43", "counterexample semigroup and graph structure to 1e-10"),
    ("no_projection", "product formula with P in {P1, I, 0} never converges"),
    ("series_convergence", "50 series: resolvent error at 2^10 <= 1e-6, a-priori bounds"),
    ("kato_simon", "50 increasing symmetric sequences: monotone, <= 1e-8"),
    ("semigroup_oracle", "100 relations: resolvent powers within C/n, slope <= -0.9"),
    ("bounded_b_product", "25 bounded-B problems: both tracks <= 1e-6, projections agree"),
    ("tower_compatibility", "100 tower elements: compatibility and norm bound"),
    ("graph_algebra", "500 relations: shift/invert/resolvent against brute force"),
    ("sector_calculus", "200 forms: sector Cauchy-Schwarz and basis invariance"),
    ("cli_determinism", "example43 scenario CSV is byte-identical across runs"),
];

/// Deliberate faults for checking that the battery notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Negate the semi-angle reported by the sector analysis.
    SectorSign,
}

impl std::str::FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sector-sign" => Ok(Mutation::SectorSign),
            other => Err(format!("unknown mutation `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Overrides the convergence tolerance (1e-6) of the series and product criteria.
    pub tol: Option<f64>,
    pub mutation: Option<Mutation>,
}

impl VerifyOptions {
    fn tol_conv(&self) -> f64 {
        self.tol.unwrap_or(1e-6)
    }

    fn rng(&self, criterion: u64, instance: u64) -> ScenarioRng {
        random::rng(self.seed ^ (criterion << 40) ^ instance.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

pub fn criterion_ids() -> impl Iterator<Item = &'static str> {
    CRITERIA.iter().map(|(id, _)| *id)
}

/// Run the criteria whose id contains `filter` (all when `None`).
pub fn verify_suite(filter: Option<&str>, opts: &VerifyOptions) -> Vec<CriterionResult> {
    criterion_ids()
        .filter(|id| filter.is_none_or(|f| id.contains(f)))
        .filter_map(|id| run_criterion(id, opts))
        .collect()
}

pub fn run_criterion(id: &str, opts: &VerifyOptions) -> Option<CriterionResult> {
    let (id, _) = CRITERIA.iter().find(|(c, _)| *c == id)?;
    let start = Instant::now();
    let outcome = match *id {
        "example43" => example43(opts),
        "no_projection" => no_projection(opts),
        "series_convergence" => series_convergence(opts),
        "kato_simon" => kato_simon(opts),
        "semigroup_oracle" => semigroup_oracle(opts),
        "bounded_b_product" => bounded_b_product(opts),
        "tower_compatibility" => tower_compatibility(opts),
        "graph_algebra" => graph_algebra(opts),
        "sector_calculus" => sector_calculus(opts),
        "cli_determinism" => cli_determinism(opts),
        _ => unreachable!("ids come from CRITERIA"),
    };
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok((pass, detail)) => (pass, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionResult {
        id,
        pass,
        detail,
        elapsed,
    })
}

pub fn format_table(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    let width = results.iter().map(|r| r.id.len()).max().unwrap_or(2);
    for r in results {
        let _ = writeln!(
            out,
            "{} {:<width$} {:>8.2}s  {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.elapsed.as_secs_f64(),
            r.detail
        );
    }
    out
}

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;

fn powers_of_two(from: u32, to: u32) -> Vec<u64> {
    (from..=to).map(|k| 1u64 << k).collect()
}

fn example43(opts: &VerifyOptions) -> Outcome {
    let mut worst: f64 = 0.0;
    let start = Instant::now();
    for (i, d) in [2usize, 5, 10].into_iter().enumerate() {
        let phi = random::unit_vector(&mut opts.rng(1, i as u64), &HSpace::new(d));
        let ex = example_4_3_scenario(d, &phi)?;
        for t in [0.1, 1.0, 10.0] {
            worst = worst.max(ex.verify(t)?.max());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        worst <= 1e-10 && secs < 1.0,
        format!("max deviation {worst:.2e}, {secs:.3}s (limit 1s)"),
    ))
}

fn no_projection(opts: &VerifyOptions) -> Outcome {
    let floor = 0.1 * ((-1.0f64).exp() - 1.0).abs();
    let schedule = powers_of_two(0, 12);
    let mut least = f64::INFINITY;
    for (i, d) in [2usize, 5, 10].into_iter().enumerate() {
        let phi = random::unit_vector(&mut opts.rng(2, i as u64), &HSpace::new(d));
        let ex = example_4_3_scenario(d, &phi)?;
        for p in [ex.p1.clone(), CMatrix::identity(d, d), CMatrix::zeros(d, d)] {
            let report = ex.product_errors(&p, 1.0, &schedule)?;
            least = report.errors.iter().cloned().fold(least, f64::min);
        }
    }
    Ok((
        least > floor,
        format!("smallest product error {least:.3e} vs floor {floor:.3e}"),
    ))
}

fn mixed_tail(i: usize, g: &mut ScenarioRng) -> TailRule {
    match i % 3 {
        0 => TailRule::Zero,
        1 => TailRule::Constant,
        _ => TailRule::Geometric(g.random_range(0.2..0.8)),
    }
}

fn series_convergence(opts: &VerifyOptions) -> Outcome {
    let tol = opts.tol_conv();
    let schedule = powers_of_two(0, 10);
    let tan = (std::f64::consts::PI / 3.0).tan();
    let start = Instant::now();
    let mut failures: Vec<String> = Vec::new();
    let mut worst_by_tail = [0.0f64; 3];
    let mut worst_slack = f64::INFINITY;
    for i in 0..50usize {
        let mut g = opts.rng(3, i as u64);
        let d = 1 + i % 8;
        let n = 1 + (i / 8) % 5;
        let tail = mixed_tail(i, &mut g);
        let seq = random::form_sequence(&mut g, &HSpace::new(d), n, tail, tan);
        let run = limit_graph_and_convergence(&seq, &schedule)?;
        let err = run.report.final_error();
        worst_by_tail[i % 3] = worst_by_tail[i % 3].max(err);
        let slack = run.norm_slack.min(run.energy_slack);
        worst_slack = worst_slack.min(slack);
        if err > tol || slack < -1e-10 {
            failures.push(format!("#{i}({})", tail.name()));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        failures.is_empty() && secs < 30.0,
        format!(
            "{} of 50 over tol {tol:.0e}; worst final error zero {:.1e} constant {:.1e} geometric {:.1e}; min slack {worst_slack:.1e}; {secs:.1}s",
            failures.len(),
            worst_by_tail[0],
            worst_by_tail[1],
            worst_by_tail[2]
        ),
    ))
}

fn kato_simon(opts: &VerifyOptions) -> Outcome {
    let schedule = powers_of_two(0, 10);
    let mut bad = 0;
    let mut worst_final: f64 = 0.0;
    let mut worst_rise = f64::NEG_INFINITY;
    for i in 0..50usize {
        let mut g = opts.rng(4, i as u64);
        let d = 1 + i % 8;
        let n = 1 + (i / 8) % 5;
        let tail = if i % 2 == 0 {
            TailRule::Zero
        } else {
            TailRule::Geometric(g.random_range(0.3..0.7))
        };
        let seq = random::kato_simon_sequence(&mut g, &HSpace::new(d), n, tail);
        let report = limit_graph_and_convergence(&seq, &schedule)?.report;
        let rise = report.errors.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        worst_rise = worst_rise.max(rise);
        worst_final = worst_final.max(report.final_error());
        if !report.is_non_increasing(1e-9) || report.final_error() > 1e-8 {
            bad += 1;
        }
    }
    Ok((
        bad == 0,
        format!("{bad} of 50 failing; worst final {worst_final:.1e}, largest step increase {worst_rise:.1e}"),
    ))
}

fn semigroup_oracle(opts: &VerifyOptions) -> Outcome {
    let schedule = powers_of_two(4, 12);
    let mut bad = 0;
    let mut worst_slope = f64::NEG_INFINITY;
    let mut worst_ratio: f64 = 0.0;
    for i in 0..100usize {
        let mut g = opts.rng(5, i as u64);
        let d = 1 + i % 8;
        let space = HSpace::new(d);
        let k = g.random_range(1..=d);
        let tan = g.random_range(0.0..1.5);
        let shift = g.random_range(0.0..1.0);
        let a = random::m_sectorial_relation(&mut g, &space, k, tan, shift);
        let report = resolvent_power_report(&a, 1.0, &schedule)?;
        let a0 = linalg::op_norm(&a.single_valued_part()?.matrix);
        let budget = 1e-3 * (1.0 + a0 * a0);
        worst_slope = worst_slope.max(report.fitted_rate);
        worst_ratio = worst_ratio.max(report.final_error() / budget);
        if report.fitted_rate > -0.9 || report.final_error() > budget {
            bad += 1;
        }
    }
    Ok((
        bad == 0,
        format!("{bad} of 100 failing; steepest-worst slope {worst_slope:.3}, final/budget {worst_ratio:.2e}"),
    ))
}

fn bounded_b_product(opts: &VerifyOptions) -> Outcome {
    let tol = opts.tol_conv();
    let schedule = powers_of_two(4, 12);
    let mut bad = 0;
    let mut worst_res: f64 = 0.0;
    let mut worst_prod: f64 = 0.0;
    let mut worst_agree: f64 = 0.0;
    let mut compared = 0;
    let mut slopes = Vec::new();
    for i in 0..25usize {
        let mut g = opts.rng(6, i as u64);
        let d = 2 + i % 5;
        let (problem, big_b) = random_bounded_problem(&mut g, d, i % 2 == 0)?;
        let p = problem.projection_thm_4_2(&big_b)?;
        let mut ok = true;
        if let Ok(p1) = problem.projection_thm_4_1() {
            compared += 1;
            let gap = (&p1 - &p).norm();
            worst_agree = worst_agree.max(gap);
            ok &= gap <= 1e-8;
        }
        let rep = problem.verify_absorption(&p, 1.0, &schedule)?;
        worst_res = worst_res.max(rep.resolvent.final_error());
        worst_prod = worst_prod.max(rep.product.final_error());
        slopes.push(rep.product.fitted_rate);
        ok &= rep.resolvent.final_error() <= tol && rep.product.final_error() <= tol;
        if !ok {
            bad += 1;
        }
    }
    let mean_slope = slopes.iter().sum::<f64>() / slopes.len() as f64;
    Ok((
        bad == 0,
        format!(
            "{bad} of 25 failing; worst final resolvent {worst_res:.1e}, product {worst_prod:.1e} (tol {tol:.0e}, mean slope {mean_slope:.2}); projections agree to {worst_agree:.1e} on {compared}"
        ),
    ))
}

fn tower_compatibility(opts: &VerifyOptions) -> Outcome {
    let mut disagreements = 0;
    let mut worst_slack = f64::INFINITY;
    let mut compatible_seen = 0;
    for s in 0..20usize {
        let mut g = opts.rng(7, s as u64);
        let d = 1 + s % 4;
        let n = 1 + s % 3;
        let tail = mixed_tail(s, &mut g);
        let seq = random::form_sequence(&mut g, &HSpace::new(d), n, tail, 1.0);
        let tower = build_tower(&seq, n + 1)?;
        let limit = seq.limit_form()?;
        for e in 0..5usize {
            let u: CVector = if e % 2 == 0 && limit.domain().dim() > 0 {
                limit.domain().basis() * random::vector(&mut g, limit.domain().dim())
            } else {
                random::vector(&mut g, d)
            };
            let mut parts = tower.canonical_element(&u);
            if e == 4 {
                let last = parts.len() - 1;
                let k = parts[last].len();
                parts[last] += random::vector(&mut g, k);
            }
            let check = tower.lemma_3_3_check(&parts)?;
            let u0 = &parts[0];
            let consistent = (0..parts.len()).all(|m| (tower.q(m, u0) - &parts[m]).norm() <= 1e-8 * (1.0 + u0.norm()));
            let brute = consistent && limit.domain().contains(u0);
            if brute != check.compatible {
                disagreements += 1;
            }
            if check.compatible {
                compatible_seen += 1;
                worst_slack = worst_slack.min(check.slack);
            }
        }
    }
    Ok((
        disagreements == 0 && worst_slack >= -1e-10,
        format!("{disagreements} disagreements in 100; {compatible_seen} compatible, min bound slack {worst_slack:.2e}"),
    ))
}

/// `(A - λ)^{-1}` straight from generating pairs, or `None` if `λ ∈ σ(A)`.
fn brute_resolvent(xs: &CMatrix, ys: &CMatrix, lambda: C64) -> Option<CMatrix> {
    let d = xs.nrows();
    let shifted = ys - xs * lambda;
    let stacked = linalg::vstack(xs, &shifted);
    let graph_dim = linalg::rank(&stacked, 1e-10);
    let range_dim = linalg::rank(&shifted, 1e-10);
    if graph_dim != d || range_dim != d {
        return None;
    }
    // Solve X = R (Y - λX) in the least-squares sense over the pairs.
    Some(xs * linalg::pseudo_inverse(&shifted, 1e-10))
}

fn graph_algebra(opts: &VerifyOptions) -> Outcome {
    let mut shift_bad = 0;
    let mut invert_bad = 0;
    let mut resolvent_bad = 0;
    let mut identity_bad = 0;
    let mut worst: f64 = 0.0;
    for i in 0..500usize {
        let mut g = opts.rng(8, i as u64);
        let d = 1 + i % 6;
        let space = HSpace::new(d);
        let (xs, ys) = match i % 3 {
            0 => {
                let m = random::matrix(&mut g, d, d);
                (CMatrix::identity(d, d), m)
            }
            1 => {
                let k = g.random_range(0..=d);
                let dom = random::subspace(&mut g, &space, k);
                let core = random::sectorial_matrix(&mut g, k, k, 0.8);
                let perp = dom.ortho_complement();
                (
                    linalg::hstack(dom.basis(), &CMatrix::zeros(d, perp.dim())),
                    linalg::hstack(&(dom.basis() * core), perp.basis()),
                )
            }
            _ => {
                let r = g.random_range(1..=d);
                (random::matrix(&mut g, d, r), random::matrix(&mut g, d, r))
            }
        };
        let a = LinearRelation::from_pairs(&space, &xs, &ys, 1e-10)?;
        let scale = 1.0 + xs.norm() + ys.norm();
        let lambda = linalg::c(g.random_range(-1.0..1.0), g.random_range(-1.0..1.0));
        let shifted = a.shift(lambda);
        let contains_all =
            (0..xs.ncols()).all(|j| shifted.contains(&xs.column(j).into_owned(), &(ys.column(j) + xs.column(j) * lambda)));
        if !contains_all || shifted.graph().dim() != a.graph().dim() {
            shift_bad += 1;
        }
        let brute_inv = brute_resolvent(&xs, &ys, C64::new(0.0, 0.0));
        match (a.invert(), &brute_inv) {
            (Inversion::Invertible(m), Some(b)) => {
                let gap = (&m - b).norm() / (1.0 + b.norm());
                worst = worst.max(gap);
                if gap > 1e-9 {
                    invert_bad += 1;
                }
            }
            (Inversion::NotInvertible(r), None) => {
                if !r.approx_eq(&a.reflect(), 1e-9) {
                    invert_bad += 1;
                }
            }
            _ => invert_bad += 1,
        }
        let (l, mu) = (real(-1.0), real(-2.0));
        let (rl, rm) = (a.resolvent(l).ok(), a.resolvent(mu).ok());
        let (bl, bm) = (brute_resolvent(&xs, &ys, l), brute_resolvent(&xs, &ys, mu));
        if rl.is_some() != bl.is_some() || rm.is_some() != bm.is_some() {
            resolvent_bad += 1;
            continue;
        }
        if let (Some(rl), Some(bl)) = (&rl, &bl) {
            let gap = (rl - bl).norm() / (1.0 + bl.norm());
            worst = worst.max(gap);
            if gap > 1e-9 {
                resolvent_bad += 1;
            }
        }
        if let (Some(rl), Some(rm)) = (rl, rm) {
            let lhs = &rl - &rm;
            let rhs = (&rl * &rm) * (l - mu);
            if (lhs - rhs).norm() > 1e-8 * (1.0 + rl.norm() * rm.norm()) {
                identity_bad += 1;
            }
        }
        let _ = scale;
    }
    let total = shift_bad + invert_bad + resolvent_bad + identity_bad;
    Ok((
        total == 0,
        format!(
            "failures: shift {shift_bad}, invert {invert_bad}, resolvent {resolvent_bad}, identity {identity_bad}; worst relative gap {worst:.1e}"
        ),
    ))
}

/// `tan θ` at vertex 0 as the battery sees it, with the mutation applied.
fn sector_tan(form: &SesqForm, mutation: Option<Mutation>) -> Option<f64> {
    let tan = form.tan_theta_at_vertex(0.0)?;
    match mutation {
        Some(Mutation::SectorSign) => Some(-tan),
        None => Some(tan),
    }
}

fn sector_calculus(opts: &VerifyOptions) -> Outcome {
    let mut cs_violations = 0;
    let mut basis_violations = 0;
    let mut worst_excess = f64::NEG_INFINITY;
    for i in 0..200usize {
        let mut g = opts.rng(9, i as u64);
        let d = 1 + i % 7;
        let space = HSpace::new(d);
        let k = g.random_range(1..=d);
        let dom = random::subspace(&mut g, &space, k);
        let rank = g.random_range(1..=k);
        let tan_bound = g.random_range(0.0..2.0);
        let form = random::sectorial_form(&mut g, dom.clone(), rank, tan_bound);
        let Some(tan) = sector_tan(&form, opts.mutation) else {
            cs_violations += 1;
            continue;
        };
        for _ in 0..10 {
            let u = dom.basis() * random::vector(&mut g, k);
            let v = dom.basis() * random::vector(&mut g, k);
            let lhs = form.evaluate(&u, &v)?.norm();
            let ru = form.value(&u)?.re.max(0.0);
            let rv = form.value(&v)?.re.max(0.0);
            let rhs = (1.0 + tan) * ru.sqrt() * rv.sqrt();
            worst_excess = worst_excess.max(lhs - rhs);
            if lhs > rhs + 1e-10 {
                cs_violations += 1;
            }
        }
        // Same form in a basis re-orthonormalized from mixed spanning vectors.
        let mixed = dom.basis() * random::matrix(&mut g, k, k + 2);
        let dom2 = Subspace::from_columns(&mixed, &space, 1e-10)?;
        let t = dom.basis().adjoint() * dom2.basis();
        let rebased = SesqForm::new(dom2, t.adjoint() * form.matrix() * &t)?;
        let tan2 = sector_tan(&rebased, None);
        let v1 = form.max_vertex();
        let v2 = rebased.max_vertex();
        let tan_ok = tan2.is_some_and(|t2| (t2 - tan.abs()).abs() <= 1e-8 * (1.0 + t2));
        if !tan_ok || (v1 - v2).abs() > 1e-8 * (1.0 + v1.abs()) {
            basis_violations += 1;
        }
    }
    Ok((
        cs_violations == 0 && basis_violations == 0,
        format!(
            "sector Cauchy-Schwarz violations {cs_violations}, basis-invariance violations {basis_violations}; max |b(u,v)| - bound {worst_excess:.1e}"
        ),
    ))
}

pub fn determinism_config(seed: u64) -> ScenarioConfig {
    ScenarioConfig {
        version: SCHEMA_VERSION,
        kind: ScenarioKind::Example43,
        dimension: 2,
        seed,
        tail: None,
        schedule: powers_of_two(0, 8),
        t_values: vec![0.1, 1.0, 10.0],
        tolerances: Tolerances::default(),
        output: None,
    }
}

fn cli_determinism(opts: &VerifyOptions) -> Outcome {
    let config = determinism_config(opts.seed);
    let first = report::csv(&run_scenario(&config)?.rows);
    let second = report::csv(&run_scenario(&config)?.rows);
    let same = first.as_bytes() == second.as_bytes();
    Ok((
        same,
        format!("{} bytes, {}", first.len(), if same { "identical" } else { "differ" }),
    ))
}
