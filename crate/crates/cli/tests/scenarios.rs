use sectorial_cli::{run_scenario, ScenarioConfig, ScenarioKind, TailConfig, TailKind, Tolerances, SCHEMA_VERSION};

fn config(kind: ScenarioKind, dimension: usize, schedule: Vec<u64>, t_values: Vec<f64>) -> ScenarioConfig {
    ScenarioConfig {
        version: SCHEMA_VERSION,
        kind,
        dimension,
        seed: 5,
        tail: None,
        schedule,
        t_values,
        tolerances: Tolerances::default(),
        output: None,
    }
}

fn powers(to: u32) -> Vec<u64> {
    (0..=to).map(|k| 1u64 << k).collect()
}

#[test]
fn example43_semigroup_check_at_t1() {
    let report = run_scenario(&config(ScenarioKind::Example43, 2, powers(6), vec![1.0])).unwrap();
    let check = report
        .summary
        .checks
        .iter()
        .find(|c| c.name.starts_with("‖e^(-t A_inf) - e^(-t) P1‖"))
        .unwrap();
    assert!(check.value <= 1e-10 && check.pass);
    assert!(report.summary.pass);
}

#[test]
fn zero_tail_series_is_exact_past_the_head() {
    let mut c = config(ScenarioKind::Series, 4, powers(8), vec![0.5, 2.0]);
    c.tail = Some(TailConfig {
        rule: TailKind::Zero,
        rho: None,
        head_len: 3,
    });
    let report = run_scenario(&c).unwrap();
    for row in report.rows.iter().filter(|r| r.n >= 3) {
        assert!(row.err_resolvent <= 1e-12, "{row:?}");
        assert!(row.err_product <= 1e-12, "{row:?}");
    }
    assert!(report.summary.pass);
}

/// Least-squares slope of log(err) against log(n), computed from the CSV text.
fn slope_from_csv(csv: &str, column: usize) -> f64 {
    let pts: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[0].ln(), f[column].ln())
        })
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / m, sy / m);
    let cov: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    cov / var
}

#[test]
fn rank_one_absorption_converges_like_one_over_n() {
    // d = 2 gives a rank-one B.
    let mut c = config(ScenarioKind::Absorption, 2, (4..=12).map(|k| 1u64 << k).collect(), vec![1.0]);
    c.tolerances.tol_conv = 1e-2;
    let report = run_scenario(&c).unwrap();
    let csv = sectorial_cli::report::csv(&report.rows);
    for column in [2, 3] {
        let slope = slope_from_csv(&csv, column);
        assert!((slope + 1.0).abs() < 0.1, "column {column}: slope {slope}");
    }
}

#[test]
fn every_kind_carries_checks() {
    let kinds = [
        (ScenarioKind::Series, 3),
        (ScenarioKind::KatoSimon, 3),
        (ScenarioKind::Absorption, 3),
        (ScenarioKind::NeumannDirichlet, 4),
        (ScenarioKind::Example43, 3),
    ];
    for (kind, d) in kinds {
        let mut c = config(kind, d, powers(4), vec![1.0]);
        c.tolerances.tol_conv = 1.0;
        let report = run_scenario(&c).unwrap();
        assert!(!report.summary.checks.is_empty(), "{kind:?}");
        assert_eq!(report.rows.len(), 5);
        assert_eq!(report.scenario, kind.name());
    }
}

#[test]
fn absorption_below_two_dimensions_is_a_config_error() {
    let c = config(ScenarioKind::Absorption, 1, powers(2), vec![1.0]);
    assert!(matches!(run_scenario(&c), Err(sectorial_cli::CliError::Config(_))));
}
