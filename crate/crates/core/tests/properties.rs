use proptest::prelude::*;

use msp_core::enumerate1d::{build_quarter_tables, Enumerator};
use msp_core::solver::{solve, SolveMode, SolverConfig, Verdict};
use msp_core::{brute_force_all, parse_instance, surrogate_reduce, write_instance, MspInstance};

/// Rows, a planted selection and whether to use it for the right-hand side.
fn instance(max_m: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = MspInstance> {
    (1..=max_m, n, prop::sample::select(vec![3u64, 10, 100]))
        .prop_flat_map(|(m, n, k)| {
            (
                prop::collection::vec(prop::collection::vec(0..k, n), m),
                prop::collection::vec(any::<bool>(), n),
                any::<bool>(),
            )
        })
        .prop_map(|(rows, x, planted)| {
            let d: Vec<u64> = rows
                .iter()
                .map(|row| {
                    if planted {
                        row.iter().zip(&x).filter(|(_, &b)| b).map(|(a, _)| a).sum()
                    } else {
                        row.iter().sum::<u64>() / 2
                    }
                })
                .collect();
            MspInstance::from_rows(&rows, &d).unwrap()
        })
}

fn forced(mode: SolveMode) -> SolverConfig {
    SolverConfig {
        oracle_threshold: 0,
        ..SolverConfig::sequential(mode)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn all_solutions_match_exhaustion(inst in instance(3, 4..=14), chunk in prop::sample::select(vec![1usize, 7, 1 << 20])) {
        let expected = brute_force_all(&inst).unwrap();
        let cfg = SolverConfig { chunk_pairs: Some(chunk), ..forced(SolveMode::AllSolutions) };
        let res = solve(&inst, &cfg).unwrap();
        prop_assert_eq!(&res.solutions, &expected);
        prop_assert!(res.stats.exhausted);
        let verdict = if expected.is_empty() { Verdict::Infeasible } else { Verdict::Feasible };
        prop_assert_eq!(res.verdict, verdict);
    }

    #[test]
    fn first_solution_is_one_of_all(inst in instance(3, 4..=14)) {
        let all = brute_force_all(&inst).unwrap();
        for depth in [1, 3] {
            let cfg = SolverConfig { pipeline_depth: depth, worker_count: depth, ..forced(SolveMode::FirstSolution) };
            let res = solve(&inst, &cfg).unwrap();
            prop_assert!(res.solutions.len() <= 1);
            prop_assert_eq!(res.solutions.is_empty(), all.is_empty());
            if let Some(x) = res.solutions.first() {
                prop_assert!(all.contains(x));
            }
        }
    }

    #[test]
    fn reduction_preserves_solutions(inst in instance(3, 1..=12), r in 2usize..=3) {
        prop_assume!(r <= inst.m());
        let reduced = surrogate_reduce(&inst, r).unwrap();
        prop_assert_eq!(reduced.m(), inst.m() - r + 1);
        prop_assert_eq!(brute_force_all(&reduced).unwrap(), brute_force_all(&inst).unwrap());
        let cfg = SolverConfig { reduce_rows: r, ..forced(SolveMode::AllSolutions) };
        prop_assert_eq!(solve(&inst, &cfg).unwrap().solutions, brute_force_all(&inst).unwrap());
    }

    #[test]
    fn text_round_trip(inst in instance(4, 1..=20)) {
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn batches_drain_monotonically(inst in instance(1, 4..=16)) {
        let tables = build_quarter_tables(&inst, 0).unwrap();
        let target = inst.rhs()[0];
        let mut last: Option<(u64, u64)> = None;
        for batch in Enumerator::new(&tables, target) {
            prop_assert_eq!(batch.alpha + batch.beta, target);
            prop_assert!(!batch.left_pairs.is_empty() && !batch.right_pairs.is_empty());
            if let Some((a, b)) = last {
                prop_assert!(batch.alpha > a && batch.beta < b);
            }
            for &(i, j) in &batch.left_pairs {
                prop_assert_eq!(tables.a.weight(i as usize) + tables.b.weight(j as usize), batch.alpha);
            }
            for &(k, l) in &batch.right_pairs {
                prop_assert_eq!(tables.c.weight(k as usize) + tables.d.weight(l as usize), batch.beta);
            }
            last = Some((batch.alpha, batch.beta));
        }
    }
}
