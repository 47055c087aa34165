//! Solver correctness against independent oracles: exhaustive enumeration
//! for tiny planning MILPs, vertex enumeration for small random LPs.

mod common;

use common::{milp_oracle, tiny_instance, VertexLp};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use solnet::model::{build_pl, restrict, scenario_fixes, Scenario};
use solnet::sizing::{size_instance, SizingConfig};
use solnet::solver::{branch_and_bound, solve_lp, LpStatus, SolveOptions, SolveStatus};
use solnet::MilpProblem;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn tiny_instances_match_enumeration_oracle() {
    for seed in 0..20 {
        let inst = tiny_instance(seed);
        let sized = size_instance(&inst, &SizingConfig::default());
        let model = build_pl(&inst, &sized).unwrap();
        let oracle = milp_oracle(&inst, &sized);
        let sol = branch_and_bound(&model.problem, &SolveOptions::default()).unwrap();
        match oracle {
            Some(best) => {
                assert_eq!(sol.status, SolveStatus::Optimal, "seed {seed}");
                let got = sol.objective.unwrap();
                assert!(
                    rel_close(got, best, 1e-6),
                    "seed {seed}: solver {got} vs oracle {best}"
                );
            }
            None => {
                assert_eq!(sol.status, SolveStatus::Infeasible, "seed {seed}");
            }
        }
    }
}

#[test]
fn restriction_monotonicity_on_tiny_instances() {
    // Removing fixes can only improve the optimum: PL <= P2/P3 <= P1, etc.
    for seed in [1, 3, 5, 11] {
        let inst = tiny_instance(seed);
        let sized = size_instance(&inst, &SizingConfig::default());
        let model = build_pl(&inst, &sized).unwrap();
        let solve = |which: Scenario| -> f64 {
            let fixes = scenario_fixes(&model, which, 1, None).unwrap();
            let p = restrict(&model.problem, &fixes).unwrap();
            branch_and_bound(&p, &SolveOptions::default())
                .unwrap()
                .objective
                .expect("tiny scenario instances are feasible")
        };
        let pl = solve(Scenario::Pl);
        let p1 = solve(Scenario::P1);
        let p2 = solve(Scenario::P2);
        let p3 = solve(Scenario::P3);
        let tol = 1e-6 * p1.abs().max(1.0);
        assert!(pl <= p2 + tol && pl <= p3 + tol, "seed {seed}");
        assert!(p2 <= p1 + tol && p3 <= p1 + tol, "seed {seed}");
    }
}

#[test]
fn lp_matches_vertex_enumeration_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..40 {
        let n = rng.random_range(2..=4usize);
        let m = rng.random_range(1..=5usize);
        let lo = vec![0.0; n];
        let hi: Vec<f64> = (0..n).map(|_| rng.random_range(1..=4) as f64).collect();
        // Rows are built through a random interior point so the LP is
        // always feasible; boxes keep it bounded.
        let x0: Vec<f64> = hi.iter().map(|&h| rng.random_range(0.0..h)).collect();
        let mut rows = Vec::new();
        for _ in 0..m {
            let a: Vec<f64> = (0..n).map(|_| rng.random_range(-3..=3) as f64).collect();
            if a.iter().all(|&c| c == 0.0) {
                continue;
            }
            let ax0: f64 = a.iter().zip(&x0).map(|(c, v)| c * v).sum();
            let le = rng.random_bool(0.5);
            let slack = rng.random_range(0.0..2.0);
            let b = if le { ax0 + slack } else { ax0 - slack };
            rows.push((a, le, b));
        }
        let cost: Vec<f64> = (0..n).map(|_| rng.random_range(-5..=5) as f64).collect();
        let oracle = VertexLp { cost: cost.clone(), rows: rows.clone(), lo: lo.clone(), hi: hi.clone() };
        let expected = oracle.optimum().expect("feasible by construction");

        let problem = dense_lp_problem(&cost, &rows, &lo, &hi);
        let got = solve_lp(&problem).unwrap();
        assert_eq!(got.status, LpStatus::Optimal, "case {case}");
        assert!(
            (got.objective - expected).abs() <= 1e-7 * expected.abs().max(1.0),
            "case {case}: simplex {} vs vertex oracle {expected}",
            got.objective
        );
    }
}

fn dense_lp_problem(
    cost: &[f64],
    rows: &[(Vec<f64>, bool, f64)],
    lo: &[f64],
    hi: &[f64],
) -> MilpProblem {
    use solnet::model::{Row, Sense, VarId, VarKind, VarRef};
    let variables = (0..cost.len())
        .map(|k| VarRef {
            id: VarId::Install { j: k as u32 },
            kind: VarKind::Continuous,
            lo: lo[k],
            hi: hi[k],
        })
        .collect();
    let rows = rows
        .iter()
        .enumerate()
        .map(|(r, (a, le, b))| Row {
            name: format!("r{r}"),
            coeffs: a.iter().enumerate().filter(|(_, &c)| c != 0.0).map(|(k, &c)| (k, c)).collect(),
            sense: if *le { Sense::Le } else { Sense::Ge },
            rhs: *b,
        })
        .collect();
    MilpProblem { variables, rows, objective: cost.to_vec(), objective_constant: 0.0 }
}

#[test]
fn lp_relaxation_bounds_tiny_milp() {
    let inst = tiny_instance(2);
    let sized = size_instance(&inst, &SizingConfig::default());
    let model = build_pl(&inst, &sized).unwrap();
    let lp = solve_lp(&model.problem).unwrap();
    assert_eq!(lp.status, LpStatus::Optimal);
    let milp = branch_and_bound(&model.problem, &SolveOptions::default()).unwrap();
    assert!(lp.objective <= milp.objective.unwrap() + 1e-6);
}

#[test]
fn deterministic_solutions_across_runs_and_budgets() {
    let inst = tiny_instance(6);
    let sized = size_instance(&inst, &SizingConfig::default());
    let model = build_pl(&inst, &sized).unwrap();
    let run = |threads: usize| {
        let opts = SolveOptions { threads, ..Default::default() };
        branch_and_bound(&model.problem, &opts).unwrap()
    };
    let a = run(1);
    let b = run(4);
    let c = run(1);
    assert_eq!(a.values, b.values);
    assert_eq!(a.node_count, b.node_count);
    assert_eq!(a.values, c.values);
    assert_eq!(
        a.to_json(&model.problem).to_string(),
        b.to_json(&model.problem).to_string()
    );
}
