use proptest::prelude::*;
use sectorial::absorption::{
    example_4_3_scenario, limit_graph_absorption, neumann_dirichlet_problem, random_bounded_problem, AbsorptionProblem,
};
use sectorial::association::j_kernel;
use sectorial::linalg::{self, real};
use sectorial::random;
use sectorial::semigroups::{default_probes, trotter_product};
use sectorial::series::{FormSequence, TailRule};
use sectorial::{CMatrix, CVector, HSpace, SesqForm, Subspace};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projections_agree_when_both_apply(seed in any::<u64>(), d in 2usize..6) {
        let mut g = random::rng(seed);
        let (p, b) = random_bounded_problem(&mut g, d, true).unwrap();
        let p1 = p.projection_thm_4_1().unwrap();
        let p2 = p.projection_thm_4_2(&b).unwrap();
        prop_assert!((p1 - p2).norm() <= 1e-8);
    }

    #[test]
    fn kernel_of_j_sits_inside_z_infinity(seed in any::<u64>(), d in 2usize..6, injective in any::<bool>()) {
        let mut g = random::rng(seed);
        let (p, _) = random_bounded_problem(&mut g, d, injective).unwrap();
        let z = p.z_infinity();
        let ker = j_kernel(p.form());
        prop_assert!(ker.is_subset_of(&z, 1e-8).unwrap());
        // ker(j|Z_∞) = ker j ∩ Z_∞.
        let jz = p.form().j() * z.basis();
        let null = linalg::null_space_scaled(&jz, 1e-10, Some(1.0));
        let restricted = if null.ncols() == 0 {
            Subspace::zero(p.form().v_space())
        } else {
            Subspace::from_columns(&(z.basis() * null), p.form().v_space(), 1e-10).unwrap()
        };
        let inter = ker.intersect(&z).unwrap();
        prop_assert_eq!(restricted.dim(), inter.dim());
        if inter.dim() > 0 {
            prop_assert!(restricted.gap(&inter).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn absorption_limit_matches_constant_tail(seed in any::<u64>(), d in 1usize..6, rank in 0usize..6) {
        let mut g = random::rng(seed);
        let full = Subspace::full(&HSpace::new(d));
        let a = random::sectorial_form(&mut g, full.clone(), d, 0.7);
        let b = random::sectorial_form(&mut g, full, rank.min(d), 0.4);
        let p = AbsorptionProblem::from_forms(&a, &b).unwrap().with_bound_constants();
        let seq = FormSequence::new(vec![a, b], TailRule::Constant).unwrap();
        let series_limit = sectorial::association::graph_of_closed_form(&seq.limit_form().unwrap()).unwrap();
        prop_assert!(limit_graph_absorption(&p).unwrap().approx_eq(&series_limit, 1e-8));
    }

    #[test]
    fn symmetric_absorption_is_monotone(seed in any::<u64>(), d in 1usize..6) {
        let mut g = random::rng(seed);
        let full = Subspace::full(&HSpace::new(d));
        let a = SesqForm::new(full.clone(), random::psd(&mut g, d, d)).unwrap();
        let b = SesqForm::new(full, random::psd(&mut g, d, 1 + seed as usize % d)).unwrap();
        let p = AbsorptionProblem::from_forms(&a, &b).unwrap();
        let probes = default_probes(&HSpace::new(d));
        let mut last = vec![f64::INFINITY; probes.len()];
        for n in [1u64, 2, 4, 16, 64] {
            let r = p.absorption_graph(n).unwrap().resolvent(real(-1.0)).unwrap();
            // Order of resolvents: (R_n f, f) is non-increasing. The norms
            // ‖R_n f‖ need not be when the forms do not commute.
            for (i, f) in probes.iter().enumerate() {
                let now = f.dotc(&(&r * f)).re;
                prop_assert!(now <= last[i] + 1e-10);
                last[i] = now;
            }
        }
    }
}

#[test]
fn example_43_holds_for_every_dimension() {
    for (d, seed) in [(2usize, 1u64), (5, 2), (10, 3)] {
        let mut g = random::rng(seed);
        let phi = random::unit_vector(&mut g, &HSpace::new(d));
        let ex = example_4_3_scenario(d, &phi).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let checks = ex.verify(t).unwrap();
            assert!(checks.max() <= 1e-10, "d {d} t {t}: {checks:?}");
        }
    }
}

#[test]
fn example_43_product_formula_cannot_converge() {
    let phi = CVector::from_vec(vec![real(0.6), linalg::c(0.0, 0.8)]);
    let ex = example_4_3_scenario(2, &phi).unwrap();
    let floor = 0.1 * ((-1.0f64).exp() - 1.0).abs();
    for p in [ex.p1.clone(), CMatrix::identity(2, 2), CMatrix::zeros(2, 2)] {
        let report = ex.product_errors(&p, 1.0, &[1, 16, 256, 4096]).unwrap();
        assert!(report.errors.iter().all(|&e| e > floor), "{:?}", report.errors);
        // A = 0, so the product is P itself.
        let a = ex.problem.absorption_graph(1).unwrap();
        assert!((trotter_product(&a, &p, 1.0, 7).unwrap() - &p).norm() < 1e-12);
    }
}

#[test]
fn neumann_dirichlet_limit_lives_on_the_interior() {
    let p = neumann_dirichlet_problem(6).unwrap();
    let limit = p.limit_graph().unwrap();
    let interior = p.projection_thm_4_1().unwrap();
    assert!((limit.domain().projector() - interior).norm() < 1e-10);
}

#[test]
fn b_zero_product_formula_is_exact() {
    let mut g = random::rng(5);
    let full = Subspace::full(&HSpace::new(3));
    let a = random::sectorial_form(&mut g, full.clone(), 3, 0.5);
    let p = AbsorptionProblem::from_forms(&a, &SesqForm::zero(full)).unwrap().with_bound_constants();
    let proj = p.projection_thm_4_1().unwrap();
    let report = p.verify_absorption(&proj, 1.0, &[1, 2, 8]).unwrap();
    assert!(report.product.max_error() <= 1e-10);
    assert!(report.resolvent.max_error() <= 1e-10);
}
