use proptest::prelude::*;
use sectorial::association::graph_of_closed_form;
use sectorial::linalg::{self, real};
use sectorial::random;
use sectorial::series::{build_tower, limit_graph_and_convergence, FormSequence, TailRule};
use sectorial::{CVector, HSpace};

fn tail_from(code: u8, rho: f64) -> TailRule {
    match code % 3 {
        0 => TailRule::Zero,
        1 => TailRule::Constant,
        _ => TailRule::Geometric(rho),
    }
}

fn sequence(seed: u64, d: usize, n: usize, tail: TailRule) -> FormSequence {
    let mut g = random::rng(seed);
    random::form_sequence(&mut g, &HSpace::new(d), n, tail, 3f64.sqrt())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn limit_form_stays_in_the_sector(seed in any::<u64>(), d in 1usize..6, n in 1usize..5, code in 0u8..3, rho in 0.1f64..0.9) {
        let seq = sequence(seed, d, n, tail_from(code, rho));
        let limit = seq.limit_form().unwrap();
        let tan = limit.tan_theta_at_vertex(0.0);
        prop_assert!(tan.is_some());
        prop_assert!(tan.unwrap() <= seq.tan_theta() + 1e-8);
    }

    #[test]
    fn partial_sum_resolvents_are_contractions(seed in any::<u64>(), d in 1usize..6, n in 1usize..5, code in 0u8..3) {
        let seq = sequence(seed, d, n, tail_from(code, 0.5));
        let space = HSpace::new(d);
        for k in [1u64, 2, 5, 17] {
            let r = graph_of_closed_form(&seq.partial_sum(k).unwrap()).unwrap().resolvent(real(-1.0)).unwrap();
            prop_assert!(space.operator_norm(&r) <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn tower_norms_and_maps(seed in any::<u64>(), d in 1usize..5, n in 1usize..4, code in 0u8..3) {
        let seq = sequence(seed, d, n, tail_from(code, 0.5));
        let tower = build_tower(&seq, n + 1).unwrap();
        let mut g = random::rng(seed ^ 1);
        let top = tower.top();
        let dom = seq.partial_sum(top as u64).unwrap().domain().clone();
        if dom.dim() == 0 {
            return Ok(());
        }
        let u = dom.basis() * random::vector(&mut g, dom.dim());
        let h = HSpace::new(d);
        for lvl in 1..=top {
            let qn = tower.q(lvl, &u);
            // ‖u‖²_n = Σ_k 2^{-(n-k)} Re b_k(u), with b_0 the inner product.
            let mut expected = 0.5f64.powi(lvl as i32) * h.norm(&u).powi(2);
            for k in 1..=lvl {
                expected += 0.5f64.powi((lvl - k) as i32) * seq.term(k as u64).unwrap().value(&u).unwrap().re;
            }
            let got = tower.levels()[lvl].space.norm(&qn).powi(2);
            prop_assert!((got - expected).abs() <= 1e-10 * (1.0 + expected.abs()));
            for m in 0..lvl {
                let lhs = tower.phi(lvl, m) * &qn;
                prop_assert!((lhs - tower.q(m, &u)).norm() <= 1e-10 * (1.0 + u.norm()));
            }
        }
        // â_N(I_N q_N u) = a_N(u).
        let lifted = tower.inject(top) * tower.q(top, &u);
        let lhs = linalg::quad(&tower.a_hat(top), &lifted);
        let rhs = seq.partial_sum(top as u64).unwrap().value(&u).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn truncations_map_w_n_into_w_m(seed in any::<u64>(), d in 1usize..5, n in 1usize..4) {
        let seq = sequence(seed, d, n, TailRule::Zero);
        let tower = build_tower(&seq, n + 1).unwrap();
        let mut g = random::rng(seed ^ 2);
        for big in 0..=tower.top() {
            let w_n = tower.w(big);
            for m in 0..=big {
                let w_m = tower.w(m);
                for _ in 0..2 {
                    if w_n.dim() == 0 {
                        continue;
                    }
                    let v = w_n.basis() * random::vector(&mut g, w_n.dim());
                    let tv = tower.truncation(m) * &v;
                    prop_assert!(w_m.contains(&tv));
                    let a = tower.a_hat(m);
                    let diff = linalg::quad(&a, &tv) - linalg::quad(&a, &v);
                    prop_assert!(diff.norm() <= 1e-10 * (1.0 + v.norm_squared() * a.norm()));
                }
            }
        }
    }
}

#[test]
fn zero_tail_reports_are_stationary_past_the_head() {
    for seed in 0..6 {
        let seq = sequence(seed, 4, 3, TailRule::Zero);
        let run = limit_graph_and_convergence(&seq, &[3, 4, 8, 64]).unwrap();
        assert!(run.report.errors.iter().all(|&e| e <= 1e-12), "{:?}", run.report.errors);
    }
}

#[test]
fn tower_check_matches_brute_force() {
    for seed in 0..10u64 {
        let tail = tail_from(seed as u8, 0.5);
        let seq = sequence(seed, 3, 2, tail);
        let tower = build_tower(&seq, 3).unwrap();
        let limit = seq.limit_form().unwrap();
        let mut g = random::rng(seed + 77);
        for trial in 0..6 {
            let u: CVector = if trial % 2 == 0 && limit.domain().dim() > 0 {
                limit.domain().basis() * random::vector(&mut g, limit.domain().dim())
            } else {
                random::vector(&mut g, 3)
            };
            let mut parts = tower.canonical_element(&u);
            if trial % 3 == 2 {
                let last = parts.len() - 1;
                let k = parts[last].len();
                parts[last] += random::vector(&mut g, k);
            }
            let check = tower.lemma_3_3_check(&parts).unwrap();
            // Brute force: parts come from one u ∈ D(a_∞) at every level.
            let u0 = &parts[0];
            let consistent = (0..parts.len()).all(|n| (tower.q(n, u0) - &parts[n]).norm() <= 1e-8 * (1.0 + u0.norm()));
            let brute = consistent && limit.domain().contains(u0);
            assert_eq!(check.compatible, brute, "seed {seed} trial {trial} tail {tail:?}");
            assert!(check.bound_holds);
        }
    }
}
