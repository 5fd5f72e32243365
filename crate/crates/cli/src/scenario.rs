//! Scenario execution.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sectorial::absorption::{self, boundary_operator, neumann_dirichlet_problem, AbsorptionProblem};
use sectorial::association::graph_of_closed_form;
use sectorial::linalg::real;
use sectorial::random;
use sectorial::semigroups::{default_probes, fit_rate, semigroup, strong_error};
use sectorial::series::{limit_graph_and_convergence, FormSequence, TailRule};
use sectorial::{CMatrix, HSpace};

use crate::config::{ScenarioConfig, ScenarioKind, TailConfig, TailKind};
use crate::error::{CliError, ConfigError};
use crate::report::{self, Check, RawReport, Row, Summary};

/// Bound on the sector of generated series terms: `θ ≤ π/3`.
const SERIES_TAN_THETA: f64 = 1.732_050_807_568_877_2;
/// Slack allowed on the a-priori bounds `‖u_n‖ ≤ ‖f‖` and `Re a_n(u_n) ≤ ‖f‖²`.
const BOUND_SLACK: f64 = -1e-10;

fn tail_rule(tail: Option<&TailConfig>, fallback: TailRule) -> (TailRule, usize) {
    match tail {
        None => (fallback, 3),
        Some(t) => {
            let rule = match t.rule {
                TailKind::Zero => TailRule::Zero,
                TailKind::Constant => TailRule::Constant,
                TailKind::Geometric => TailRule::Geometric(t.rho.unwrap_or(0.5)),
            };
            (rule, t.head_len)
        }
    }
}

fn rate(schedule: &[u64], errors: &[f64]) -> Option<f64> {
    let r = fit_rate(schedule, errors);
    r.is_finite().then_some(r)
}

fn t_key(track: &str, t: f64) -> String {
    format!("{track} t={}", report::fmt_float(t))
}

/// `max_f ‖e^{-tA_n} f - e^{-tA_∞} f‖` for the partial sums of a sequence.
fn series_semigroup_errors(seq: &FormSequence, limit: &CMatrix, t: f64, schedule: &[u64]) -> Result<Vec<f64>, CliError> {
    let space = seq.ambient();
    let probes = default_probes(space);
    let mut out = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let graph = graph_of_closed_form(&seq.partial_sum(n)?)?;
        out.push(strong_error(space, &(semigroup(&graph, t)? - limit), &probes));
    }
    Ok(out)
}

fn run_sequence(config: &ScenarioConfig, seq: &FormSequence, monotone: bool) -> Result<(Vec<Row>, Summary), CliError> {
    let conv = limit_graph_and_convergence(seq, &config.schedule)?;
    let mut rows = Vec::new();
    let mut rates = BTreeMap::new();
    rates.insert("resolvent".to_string(), rate(&config.schedule, &conv.report.errors));
    for &t in &config.t_values {
        let limit = semigroup(&conv.limit, t)?;
        let prod = series_semigroup_errors(seq, &limit, t, &config.schedule)?;
        rates.insert(t_key("semigroup", t), rate(&config.schedule, &prod));
        for (i, &n) in config.schedule.iter().enumerate() {
            rows.push(Row {
                n,
                t,
                err_resolvent: conv.report.errors[i],
                err_product: prod[i],
            });
        }
    }
    let mut checks = vec![
        Check::at_most("final resolvent error", conv.report.final_error(), config.tolerances.tol_conv),
        Check::above("norm bound slack", conv.norm_slack, BOUND_SLACK),
        Check::above("energy bound slack", conv.energy_slack, BOUND_SLACK),
    ];
    if monotone {
        let worst_rise = conv
            .report
            .errors
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check::at_most("largest increase between steps", worst_rise.max(0.0), 1e-9));
    }
    Ok((rows, Summary::new(rates, checks)))
}

fn run_absorption(
    config: &ScenarioConfig,
    problem: &AbsorptionProblem,
    p: &CMatrix,
    mut checks: Vec<Check>,
) -> Result<(Vec<Row>, Summary), CliError> {
    let mut rows = Vec::new();
    let mut rates = BTreeMap::new();
    for &t in &config.t_values {
        let rep = problem.verify_absorption(p, t, &config.schedule)?;
        rates.insert("resolvent".to_string(), rate(&config.schedule, &rep.resolvent.errors));
        rates.insert(t_key("product", t), rate(&config.schedule, &rep.product.errors));
        for (i, &n) in config.schedule.iter().enumerate() {
            rows.push(Row {
                n,
                t,
                err_resolvent: rep.resolvent.errors[i],
                err_product: rep.product.errors[i],
            });
        }
        checks.push(Check::at_most(
            &format!("final resolvent error (t = {t})"),
            rep.resolvent.final_error(),
            config.tolerances.tol_conv,
        ));
        checks.push(Check::at_most(
            &format!("final product error (t = {t})"),
            rep.product.final_error(),
            config.tolerances.tol_conv,
        ));
    }
    Ok((rows, Summary::new(rates, checks)))
}

fn run_example43(config: &ScenarioConfig) -> Result<(Vec<Row>, Summary), CliError> {
    let d = config.dimension;
    let mut g = random::rng(config.seed);
    let phi = random::unit_vector(&mut g, &HSpace::new(d));
    let ex = absorption::example_4_3_scenario(d, &phi)?;
    let space = ex.problem.h_space().clone();
    let probes = default_probes(&space);
    let limit = ex.problem.limit_graph()?;
    let r_inf = limit.resolvent(real(-1.0))?;
    let mut res_errors = Vec::with_capacity(config.schedule.len());
    for &n in &config.schedule {
        let r_n = ex.problem.absorption_graph(n)?.resolvent(real(-1.0))?;
        res_errors.push(strong_error(&space, &(r_n - &r_inf), &probes));
    }
    let mut rows = Vec::new();
    let mut rates = BTreeMap::new();
    rates.insert("resolvent".to_string(), rate(&config.schedule, &res_errors));
    let structural = config.tolerances.rank_tol;
    let mut checks = Vec::new();
    for &t in &config.t_values {
        let c = ex.verify(t)?;
        if t == config.t_values[0] {
            checks.push(Check::at_most("A is the zero operator", c.a_is_zero, structural));
            checks.push(Check::at_most("Z_inf = span(phi, 1)", c.z_infinity, structural));
            checks.push(Check::at_most("D(A_inf) = span phi", c.domain, structural));
            checks.push(Check::at_most("mul A_inf = phi^perp", c.multivalued, structural));
            checks.push(Check::at_most("A_inf = {(c phi, c phi + y)}", c.limit_graph, structural));
        }
        checks.push(Check::at_most(
            &format!("‖e^(-t A_inf) - e^(-t) P1‖ (t = {t})"),
            c.semigroup,
            1e-10,
        ));
        // Candidate projection P1: the product formula stalls at P1.
        let prod = ex.product_errors(&ex.p1, t, &config.schedule)?;
        rates.insert(t_key("product P1", t), rate(&config.schedule, &prod.errors));
        let floor = 0.1 * ((-t).exp() - 1.0).abs();
        let least = prod.errors.iter().cloned().fold(f64::INFINITY, f64::min);
        checks.push(Check::above(&format!("P1 product plateau (t = {t})"), least, floor));
        for (i, &n) in config.schedule.iter().enumerate() {
            rows.push(Row {
                n,
                t,
                err_resolvent: res_errors[i],
                err_product: prod.errors[i],
            });
        }
    }
    Ok((rows, Summary::new(rates, checks)))
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<RawReport, CliError> {
    config.validate()?;
    let d = config.dimension;
    let space = HSpace::new(d);
    let (rows, summary) = match config.kind {
        ScenarioKind::Series => {
            let (rule, head) = tail_rule(config.tail.as_ref(), TailRule::Zero);
            let mut g = random::rng(config.seed);
            let seq = random::form_sequence(&mut g, &space, head, rule, SERIES_TAN_THETA);
            run_sequence(config, &seq, false)?
        }
        ScenarioKind::KatoSimon => {
            let (rule, head) = tail_rule(config.tail.as_ref(), TailRule::Geometric(0.5));
            let mut g = random::rng(config.seed);
            let seq = random::kato_simon_sequence(&mut g, &space, head, rule);
            run_sequence(config, &seq, true)?
        }
        ScenarioKind::Absorption => {
            let mut g = random::rng(config.seed);
            let (problem, big_b) = absorption::random_bounded_problem(&mut g, d, true)?;
            let p2 = problem.projection_thm_4_2(&big_b)?;
            let p1 = problem.projection_thm_4_1()?;
            let checks = vec![Check::at_most("projection agreement", (&p1 - &p2).norm(), 1e-8)];
            run_absorption(config, &problem, &p2, checks)?
        }
        ScenarioKind::NeumannDirichlet => {
            let problem = neumann_dirichlet_problem(d)?;
            let p = problem.projection_thm_4_1()?;
            let mut interior = CMatrix::identity(d, d);
            interior[(0, 0)] = real(0.0);
            interior[(d - 1, d - 1)] = real(0.0);
            let p2 = problem.projection_thm_4_2(&boundary_operator(d))?;
            let checks = vec![
                Check::at_most("P projects onto the interior", (&p - &interior).norm(), config.tolerances.rank_tol),
                Check::at_most("projection agreement", (&p - &p2).norm(), 1e-8),
            ];
            run_absorption(config, &problem, &p, checks)?
        }
        ScenarioKind::Example43 => run_example43(config)?,
    };
    Ok(RawReport {
        scenario: config.kind.name().to_string(),
        seed: config.seed,
        dimension: d,
        rows,
        summary,
    })
}

/// Write `<kind>.csv`, `<kind>_summary.json` and `<kind>_raw.json` into `dir`.
pub fn write_outputs(report: &RawReport, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{}.csv", report.scenario));
    let summary_path = dir.join(format!("{}_summary.json", report.scenario));
    let raw_path = dir.join(format!("{}_raw.json", report.scenario));
    std::fs::write(&csv_path, report::csv(&report.rows))?;
    std::fs::write(&summary_path, serde_json::to_string_pretty(&report.summary)? + "\n")?;
    std::fs::write(&raw_path, serde_json::to_string_pretty(report)? + "\n")?;
    Ok(vec![csv_path, summary_path, raw_path])
}

/// What `run_batch` reports for one config.
#[derive(Debug, Clone)]
pub struct BatchOutcome {
    pub scenario: String,
    pub pass: bool,
    pub paths: Vec<PathBuf>,
}

/// Run several configs concurrently, one thread each, and write their outputs.
///
/// Two configs writing the same scenario into the same directory are rejected
/// up front. Outcomes come back sorted by scenario id, then output directory.
pub fn run_batch(configs: &[ScenarioConfig]) -> Result<Vec<BatchOutcome>, CliError> {
    let mut targets: Vec<(&str, PathBuf)> = configs.iter().map(|c| (c.kind.name(), c.output_dir())).collect();
    targets.sort();
    if let Some(w) = targets.windows(2).find(|w| w[0] == w[1]) {
        return Err(ConfigError {
            field: "output".into(),
            message: format!("two configs write {} into {}", w[0].0, w[0].1.display()),
        }
        .into());
    }
    let results: Vec<Result<BatchOutcome, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|config| {
                s.spawn(move || {
                    let report = run_scenario(config)?;
                    let paths = write_outputs(&report, &config.output_dir())?;
                    Ok(BatchOutcome {
                        scenario: report.scenario,
                        pass: report.summary.pass,
                        paths,
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    });
    let mut outcomes = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    outcomes.sort_by(|a, b| (&a.scenario, &a.paths).cmp(&(&b.scenario, &b.paths)));
    Ok(outcomes)
}

pub fn load_raw(path: &Path) -> Result<RawReport, CliError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}
