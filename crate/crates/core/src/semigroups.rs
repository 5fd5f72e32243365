//! Semigroups generated by minus an m-sectorial graph and product formulas.
//!
//! `e^{-tA}` is evaluated through the decomposition
//! `A = A° ⊕ ({0} × D(A)^⊥)` as `e^{-tA°}` on `D(A)` and zero on `D(A)^⊥`.
//! The resolvent powers `((I + (t/n)A)^{-1})^n` are kept as an independent
//! oracle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hilbert::{matrix_exp, HSpace};
use crate::linalg::{self, CMatrix, CVector};
use crate::random;
use crate::relations::LinearRelation;

/// Seed of the random half of the default probe set.
pub const PROBE_SEED: u64 = 0x5EC7_0A11;

/// Tolerance for `P² = P` and `P = P†`.
const PROJECTOR_TOL: f64 = 1e-10;

/// `e^{-tA}` together with its arguments.
#[derive(Debug, Clone)]
pub struct SemigroupEval {
    pub relation: LinearRelation,
    pub t: f64,
    pub matrix: CMatrix,
}

impl SemigroupEval {
    pub fn new(relation: &LinearRelation, t: f64) -> Result<Self> {
        Ok(SemigroupEval {
            relation: relation.clone(),
            t,
            matrix: semigroup(relation, t)?,
        })
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be positive and finite, got {t}")));
    }
    Ok(())
}

/// `e^{-tA} = e^{-tA°} ⊕ 0`.
pub fn semigroup(a: &LinearRelation, t: f64) -> Result<CMatrix> {
    check_time(t)?;
    a.certified_vertex()?;
    let part = a
        .single_valued_part()
        .map_err(|e| Error::NotMSectorial(e.to_string()))?;
    let b = part.domain.basis();
    let k = part.matrix.nrows();
    let exp = matrix_exp(&(&part.matrix * linalg::real(-t)));
    let g_b = a.ambient().apply_gram(b);
    debug_assert_eq!(exp.nrows(), k);
    Ok(b * exp * g_b.adjoint())
}

/// `((I + (t/n)A)^{-1})^n`.
pub fn resolvent_power_approx(a: &LinearRelation, t: f64, n: u64) -> Result<CMatrix> {
    check_time(t)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let s = t / n as f64;
    // (I + sA)^{-1} = (1/s)(A + 1/s)^{-1}.
    let step = a.resolvent(linalg::real(-1.0 / s))? * linalg::real(1.0 / s);
    Ok(linalg::matrix_power(&step, n))
}

/// Largest of `‖P² - P‖` and `‖P - P†‖` in the norm of `space`.
pub fn projector_residual(space: &HSpace, p: &CMatrix) -> f64 {
    let idem = space.operator_norm(&(p * p - p));
    let adj = space.operator_norm(&(p - space.adjoint(p)));
    idem.max(adj)
}

pub fn check_projector(space: &HSpace, p: &CMatrix) -> Result<()> {
    let d = space.dim();
    if p.shape() != (d, d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: p.nrows(),
        });
    }
    let residual = projector_residual(space, p);
    if residual > PROJECTOR_TOL * (1.0 + space.operator_norm(p)) {
        return Err(Error::ProjectorViolation { residual });
    }
    Ok(())
}

/// `(e^{-(t/n)A} P)^n`.
pub fn trotter_product(a: &LinearRelation, p: &CMatrix, t: f64, n: u64) -> Result<CMatrix> {
    check_projector(a.ambient(), p)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let step = semigroup(a, t / n as f64)? * p;
    Ok(linalg::matrix_power(&step, n))
}

/// Errors along a schedule with a fitted log-log slope.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub schedule: Vec<u64>,
    pub errors: Vec<f64>,
    pub fitted_rate: f64,
    pub metadata: BTreeMap<String, String>,
}

impl ConvergenceReport {
    pub fn new(schedule: Vec<u64>, errors: Vec<f64>, metadata: BTreeMap<String, String>) -> Result<Self> {
        validate_schedule(&schedule)?;
        if schedule.len() != errors.len() {
            return Err(Error::DimensionMismatch {
                expected: schedule.len(),
                actual: errors.len(),
            });
        }
        let fitted_rate = fit_rate(&schedule, &errors);
        Ok(ConvergenceReport {
            schedule,
            errors,
            fitted_rate,
            metadata,
        })
    }

    pub fn final_error(&self) -> f64 {
        self.errors.last().copied().unwrap_or(0.0)
    }

    pub fn max_error(&self) -> f64 {
        self.errors.iter().cloned().fold(0.0, f64::max)
    }

    /// `errors[i+1] ≤ errors[i] + jitter` for every step.
    pub fn is_non_increasing(&self, jitter: f64) -> bool {
        self.errors.windows(2).all(|w| w[1] <= w[0] + jitter)
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }
}

pub fn validate_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.first() == Some(&0) {
        return Err(Error::InvalidArgument("schedule entries must be positive".into()));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("schedule must be strictly increasing".into()));
    }
    Ok(())
}

/// Least-squares slope of `ln error` against `ln n`; zero errors are floored
/// at the smallest positive normal. `NaN` with fewer than two points.
pub fn fit_rate(schedule: &[u64], errors: &[f64]) -> f64 {
    let n = schedule.len().min(errors.len());
    if n < 2 {
        return f64::NAN;
    }
    let xs: Vec<f64> = schedule[..n].iter().map(|&s| (s as f64).ln()).collect();
    let ys: Vec<f64> = errors[..n].iter().map(|&e| e.max(f64::MIN_POSITIVE).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        f64::NAN
    } else {
        sxy / sxx
    }
}

/// Unit-norm probes: the standard basis and [`random::RANDOM_PROBES`] seeded vectors.
pub fn default_probes(space: &HSpace) -> Vec<CVector> {
    random::probe_set(space, random::RANDOM_PROBES, PROBE_SEED)
}

/// `max_f ‖M f‖` over the probes.
pub fn strong_error(space: &HSpace, m: &CMatrix, probes: &[CVector]) -> f64 {
    probes.iter().map(|f| space.norm(&(m * f))).fold(0.0, f64::max)
}

/// `max_f ‖(e^{-(t/n)A} P)^n f - e^{-tA_∞} f‖` along the schedule.
pub fn product_formula_report(
    a: &LinearRelation,
    p: &CMatrix,
    a_inf: &LinearRelation,
    t: f64,
    schedule: &[u64],
) -> Result<ConvergenceReport> {
    validate_schedule(schedule)?;
    let target = semigroup(a_inf, t)?;
    let probes = default_probes(a.ambient());
    let mut errors = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let product = trotter_product(a, p, t, n)?;
        errors.push(strong_error(a.ambient(), &(product - &target), &probes));
    }
    let mut meta = BTreeMap::new();
    meta.insert("track".to_string(), "product".to_string());
    meta.insert("t".to_string(), format!("{t}"));
    ConvergenceReport::new(schedule.to_vec(), errors, meta)
}

/// `‖resolvent_power_approx(A, t, n) - e^{-tA}‖` in operator norm along the schedule.
pub fn resolvent_power_report(a: &LinearRelation, t: f64, schedule: &[u64]) -> Result<ConvergenceReport> {
    validate_schedule(schedule)?;
    let exact = semigroup(a, t)?;
    let mut errors = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let approx = resolvent_power_approx(a, t, n)?;
        errors.push(a.ambient().operator_norm(&(approx - &exact)));
    }
    let mut meta = BTreeMap::new();
    meta.insert("track".to_string(), "resolvent_power".to_string());
    meta.insert("t".to_string(), format!("{t}"));
    ConvergenceReport::new(schedule.to_vec(), errors, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real};

    #[test]
    fn semigroup_examples() {
        let space = HSpace::new(3);
        let id = LinearRelation::from_operator(&space, &CMatrix::identity(3, 3)).unwrap();
        let e = semigroup(&id, 0.7).unwrap();
        assert!((e - CMatrix::identity(3, 3) * real((-0.7f64).exp())).norm() < 1e-14);
        let zero_domain = LinearRelation::zero_domain(&space);
        assert!(semigroup(&zero_domain, 2.0).unwrap().norm() < 1e-14);
        assert!(matches!(semigroup(&id, 0.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn resolvent_power_examples() {
        let space = HSpace::new(2);
        let zero = LinearRelation::from_operator(&space, &CMatrix::zeros(2, 2)).unwrap();
        for n in [1, 3, 17] {
            let r = resolvent_power_approx(&zero, 1.0, n).unwrap();
            assert!((r - CMatrix::identity(2, 2)).norm() < 1e-12);
        }
        let one = LinearRelation::from_operator(&HSpace::new(1), &CMatrix::identity(1, 1)).unwrap();
        let r = resolvent_power_approx(&one, 1.0, 1).unwrap();
        assert!((r[(0, 0)] - real(0.5)).norm() < 1e-14);
    }

    #[test]
    fn trotter_examples() {
        let space = HSpace::new(2);
        let m = CMatrix::from_row_slice(2, 2, &[real(1.0), c(0.3, 0.2), real(-0.1), real(2.0)]);
        let a = LinearRelation::from_operator(&space, &m).unwrap();
        let id = CMatrix::identity(2, 2);
        let exact = semigroup(&a, 1.5).unwrap();
        for n in [1, 2, 8] {
            assert!((trotter_product(&a, &id, 1.5, n).unwrap() - &exact).norm() < 1e-12);
        }
        let zero = LinearRelation::from_operator(&space, &CMatrix::zeros(2, 2)).unwrap();
        let p = CMatrix::from_element(2, 2, real(0.5));
        assert!((trotter_product(&zero, &p, 1.0, 5).unwrap() - &p).norm() < 1e-12);
        let not_projector = CMatrix::from_row_slice(2, 2, &[real(1.0), real(1.0), real(0.0), real(0.0)]);
        assert!(matches!(
            trotter_product(&zero, &not_projector, 1.0, 5),
            Err(Error::ProjectorViolation { .. })
        ));
    }

    #[test]
    fn report_checks_schedule_and_fits_slope() {
        let sched = vec![2, 4, 8, 16];
        let errors: Vec<f64> = sched.iter().map(|&n| 3.0 / n as f64).collect();
        let r = ConvergenceReport::new(sched, errors, BTreeMap::new()).unwrap();
        assert!((r.fitted_rate + 1.0).abs() < 1e-12);
        assert!(ConvergenceReport::new(vec![4, 2], vec![0.0, 0.0], BTreeMap::new()).is_err());
        assert!(ConvergenceReport::new(vec![1, 2], vec![0.0], BTreeMap::new()).is_err());
    }

    #[test]
    fn identical_relations_give_zero_product_error() {
        let space = HSpace::new(2);
        let m = CMatrix::from_row_slice(2, 2, &[real(2.0), real(1.0), real(0.0), real(1.0)]);
        let a = LinearRelation::from_operator(&space, &m).unwrap();
        let r = product_formula_report(&a, &CMatrix::identity(2, 2), &a, 1.0, &[1, 4, 16]).unwrap();
        assert!(r.max_error() <= 1e-10);
    }
}
