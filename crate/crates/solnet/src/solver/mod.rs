//! Exact MILP solution: LP relaxations via bounded-variable primal simplex,
//! plus branch-and-bound with warm starts and relative-gap termination.
//!
//! The search is best-bound over open nodes with depth-first diving from
//! each popped node. One simplex instance is shared across the whole tree:
//! branching only edits variable bounds, so the basis is kept and every
//! node LP is a warm re-solve. Execution is serial and deterministic; the
//! thread budget in the options is consumed by callers that run independent
//! solves in parallel (scenario sweeps), never inside a single solve.

mod presolve;
mod simplex;

pub use simplex::BasisStatus;

use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::model::{check_feasibility, MilpProblem, VarKind, INT_TOL};
use presolve::{presolve, Presolve, Reduced};
use simplex::{LpOutcome, Simplex};

/// Gap at or below which a solve counts as proven optimal.
pub const OPTIMAL_GAP: f64 = 1e-6;

/// Solver controls.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Relative-gap termination threshold.
    pub gap_tol: f64,
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Feasible assignment used to seed the incumbent (after validation).
    pub warm_start: Option<Vec<f64>>,
    /// Worker budget for callers running independent solves in parallel.
    pub threads: usize,
    /// Serial, budget-independent execution (always honored; the flag is
    /// recorded for reporting).
    pub deterministic: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            gap_tol: OPTIMAL_GAP,
            node_limit: None,
            time_limit: None,
            warm_start: None,
            threads: 1,
            deterministic: true,
        }
    }
}

impl SolveOptions {
    pub fn with_gap(gap_tol: f64) -> Self {
        Self { gap_tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    GapLimit,
    TimeLimit,
    Infeasible,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::GapLimit => "gap_limit",
            SolveStatus::TimeLimit => "time_limit",
            SolveStatus::Infeasible => "infeasible",
        }
    }
}

/// Result of a branch-and-bound run.
#[derive(Debug, Clone)]
pub struct Solution {
    pub status: SolveStatus,
    /// Incumbent assignment over all problem variables; empty when no
    /// incumbent exists. Binaries are exactly 0 or 1.
    pub values: Vec<f64>,
    pub objective: Option<f64>,
    pub best_bound: f64,
    /// `(objective - best_bound) / max(|objective|, 1)`; `None` without an
    /// incumbent.
    pub rel_gap: Option<f64>,
    pub node_count: u64,
    pub lp_iterations: u64,
    pub wall_time: Duration,
}

impl Solution {
    pub fn has_incumbent(&self) -> bool {
        self.objective.is_some()
    }

    /// Machine-readable form; excludes wall time so that deterministic runs
    /// serialize identically.
    pub fn to_json(&self, problem: &MilpProblem) -> serde_json::Value {
        let finite = |x: f64| x.is_finite().then_some(x);
        let mut values = serde_json::Map::new();
        if self.has_incumbent() {
            for (k, v) in problem.variables.iter().enumerate() {
                values.insert(v.id.to_string(), serde_json::json!(self.values[k]));
            }
        }
        serde_json::json!({
            "status": self.status.as_str(),
            "objective": self.objective,
            "bound": finite(self.best_bound),
            "gap": self.rel_gap.and_then(finite),
            "node_count": self.node_count,
            "values": values,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of solving the LP relaxation.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Values per variable; empty unless optimal.
    pub values: Vec<f64>,
    pub objective: f64,
    /// Basis role per variable; empty unless optimal.
    pub basis: Vec<BasisStatus>,
    pub iterations: u64,
}

/// Solves the LP relaxation of `problem` (integrality dropped, bounds kept).
pub fn solve_lp(problem: &MilpProblem) -> Result<LpSolution> {
    let red = match presolve(problem, false) {
        Presolve::Infeasible(_) => {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                values: vec![],
                objective: f64::INFINITY,
                basis: vec![],
                iterations: 0,
            })
        }
        Presolve::Reduced(red) => red,
    };
    let mut spx = build_simplex(&red);
    let outcome = spx.reoptimize(None)?;
    let status = match outcome {
        LpOutcome::Optimal => LpStatus::Optimal,
        LpOutcome::Infeasible => LpStatus::Infeasible,
        LpOutcome::Unbounded => LpStatus::Unbounded,
        LpOutcome::DeadlineHit => unreachable!("no deadline was set"),
    };
    if status != LpStatus::Optimal {
        return Ok(LpSolution {
            status,
            values: vec![],
            objective: if status == LpStatus::Infeasible { f64::INFINITY } else { f64::NEG_INFINITY },
            basis: vec![],
            iterations: spx.iterations(),
        });
    }
    let values = red.expand(&spx.values());
    let basis = (0..problem.n_vars())
        .map(|k| match red.fixed[k] {
            Some(_) => BasisStatus::AtLower,
            None => {
                let r = red.keep.binary_search(&k).unwrap();
                spx.basis_status(r)
            }
        })
        .collect();
    Ok(LpSolution {
        status,
        objective: spx.objective() + red.objective_constant,
        values,
        basis,
        iterations: spx.iterations(),
    })
}

/// Warm-start screening result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WarmStartCheck {
    Accepted,
    Rejected(String),
}

/// Accepts an assignment iff it satisfies every row and bound to the model
/// feasibility tolerance and every binary is integral.
pub fn validate_warm_start(problem: &MilpProblem, values: &[f64]) -> WarmStartCheck {
    if values.len() != problem.n_vars() {
        return WarmStartCheck::Rejected(format!(
            "assignment covers {} of {} variables",
            values.len(),
            problem.n_vars()
        ));
    }
    for (k, v) in problem.variables.iter().enumerate() {
        if v.kind == VarKind::Binary && (values[k] - values[k].round()).abs() > INT_TOL {
            return WarmStartCheck::Rejected(format!("{} = {} is not integral", v.id, values[k]));
        }
    }
    let report = check_feasibility(problem, values);
    if !report.is_feasible() {
        let detail = report
            .row_violations
            .first()
            .map(|&(r, amt)| format!("row {} violated by {amt:.3e}", problem.rows[r].name))
            .or_else(|| {
                report
                    .bound_violations
                    .first()
                    .map(|&(k, amt)| {
                        format!("bound on {} violated by {amt:.3e}", problem.variables[k].id)
                    })
            })
            .unwrap_or_else(|| "unknown violation".into());
        return WarmStartCheck::Rejected(detail);
    }
    WarmStartCheck::Accepted
}

struct HeapNode {
    bound: f64,
    id: u64,
    /// Bound fixes on reduced variables along the path from the root.
    changes: Vec<(usize, f64)>,
}

impl PartialEq for HeapNode {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for HeapNode {}
impl PartialOrd for HeapNode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapNode {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // BinaryHeap is a max-heap: invert so the smallest bound pops first,
        // oldest node on ties.
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| other.id.cmp(&self.id))
    }
}

fn build_simplex(red: &Reduced) -> Simplex {
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); red.n_vars()];
    let mut senses = Vec::with_capacity(red.rows.len());
    let mut rhs = Vec::with_capacity(red.rows.len());
    for (r, row) in red.rows.iter().enumerate() {
        for &(k, c) in &row.coeffs {
            cols[k].push((r, c));
        }
        senses.push(row.sense);
        rhs.push(row.rhs);
    }
    Simplex::new(cols, red.cost.clone(), red.lo.clone(), red.hi.clone(), &senses, rhs)
}

/// Exact branch-and-bound over the problem's binary variables.
///
/// Node selection is best-bound with depth-first diving; branching picks
/// the most fractional binary, ties broken by the lowest variable index.
/// The incumbent is seeded from the warm start when one validates.
pub fn branch_and_bound(problem: &MilpProblem, options: &SolveOptions) -> Result<Solution> {
    let t0 = Instant::now();
    let deadline = options.time_limit.map(|d| t0 + d);

    let red = match presolve(problem, true) {
        Presolve::Infeasible(msg) => {
            log::info!("presolve proved infeasibility: {msg}");
            return Ok(Solution {
                status: SolveStatus::Infeasible,
                values: vec![],
                objective: None,
                best_bound: f64::INFINITY,
                rel_gap: None,
                node_count: 0,
                lp_iterations: 0,
                wall_time: t0.elapsed(),
            });
        }
        Presolve::Reduced(red) => red,
    };

    let mut spx = build_simplex(&red);
    let binaries: Vec<usize> =
        (0..red.n_vars()).filter(|&k| red.binary[k]).collect();
    let root_bounds: Vec<(f64, f64)> = red.lo.iter().copied().zip(red.hi.iter().copied()).collect();

    // Incumbent in the original variable space.
    let mut incumbent: Option<(Vec<f64>, f64)> = None;
    if let Some(ws) = &options.warm_start {
        match validate_warm_start(problem, ws) {
            WarmStartCheck::Accepted => {
                let obj = problem.objective_value(ws);
                log::info!("warm start accepted with objective {obj:.6}");
                incumbent = Some((ws.clone(), obj));
            }
            WarmStartCheck::Rejected(why) => {
                log::warn!("warm start rejected: {why}");
            }
        }
    }

    let mut heap: BinaryHeap<HeapNode> = BinaryHeap::new();
    heap.push(HeapNode { bound: f64::NEG_INFINITY, id: 0, changes: vec![] });
    let mut next_id: u64 = 1;
    let mut node_count: u64 = 0;
    // Bound fixes currently applied to the simplex (with scratch entries
    // from incumbent polishing).
    let mut applied: Vec<usize> = Vec::new();

    let cutoff = |inc: &Option<(Vec<f64>, f64)>, gap_tol: f64| -> f64 {
        match inc {
            Some((_, obj)) => obj - gap_tol * obj.abs().max(1.0),
            None => f64::INFINITY,
        }
    };
    let out_of_time = |deadline: Option<Instant>| deadline.is_some_and(|d| Instant::now() >= d);

    let mut status = None::<SolveStatus>;
    let mut open_bound_at_stop = f64::NEG_INFINITY;
    // Lowest bound among nodes discarded without full exploration (cutoff
    // prunes and integral closes); keeps the reported bound honest.
    let mut pruned_min = f64::INFINITY;

    'search: while let Some(node) = heap.pop() {
        if node.bound >= cutoff(&incumbent, options.gap_tol) {
            // Best-bound order: everything left is pruned too.
            pruned_min = pruned_min.min(node.bound);
            break;
        }
        if out_of_time(deadline) {
            status = Some(SolveStatus::TimeLimit);
            open_bound_at_stop = node.bound;
            break;
        }
        if options.node_limit.is_some_and(|nl| node_count >= nl) {
            status = Some(SolveStatus::TimeLimit);
            open_bound_at_stop = node.bound;
            break;
        }

        // Switch the shared simplex to this node's bounds.
        for &k in &applied {
            spx.set_bound(k, root_bounds[k].0, root_bounds[k].1);
        }
        applied.clear();
        for &(k, v) in &node.changes {
            spx.set_bound(k, v, v);
            applied.push(k);
        }

        // Depth-first dive from this node.
        let mut dive_changes = node.changes;
        let mut dive_parent_bound = node.bound;
        loop {
            if options.node_limit.is_some_and(|nl| node_count >= nl) || out_of_time(deadline) {
                status = Some(SolveStatus::TimeLimit);
                open_bound_at_stop = dive_parent_bound;
                break 'search;
            }
            node_count += 1;
            let outcome = spx.reoptimize(deadline)?;
            match outcome {
                LpOutcome::DeadlineHit => {
                    status = Some(SolveStatus::TimeLimit);
                    open_bound_at_stop = dive_parent_bound;
                    break 'search;
                }
                LpOutcome::Infeasible => break,
                LpOutcome::Unbounded => {
                    return Err(Error::Numerical(
                        "LP relaxation unbounded; the model guarantees finite bounds".into(),
                    ));
                }
                LpOutcome::Optimal => {}
            }
            let obj = spx.objective() + red.objective_constant;
            if obj >= cutoff(&incumbent, options.gap_tol) {
                pruned_min = pruned_min.min(obj);
                break; // prune the dive
            }

            // Most fractional binary, lowest index on ties.
            let mut branch: Option<(usize, f64, f64)> = None; // (var, value, fractionality)
            for &k in &binaries {
                let v = spx.value(k);
                let frac = (v - v.round()).abs();
                if frac > INT_TOL && branch.as_ref().is_none_or(|&(_, _, bf)| frac > bf + 1e-12) {
                    branch = Some((k, v, frac));
                }
            }

            match branch {
                None => {
                    // Integral point: fix binaries at their rounded values and
                    // re-solve so the continuous completion is simplex-exact.
                    for &k in &binaries {
                        let v = spx.value(k).round();
                        spx.set_bound(k, v, v);
                        applied.push(k);
                    }
                    let polish = spx.reoptimize(deadline)?;
                    if polish != LpOutcome::Optimal {
                        return Err(Error::Numerical(format!(
                            "continuous completion after rounding failed: {polish:?}"
                        )));
                    }
                    let pobj = spx.objective() + red.objective_constant;
                    if incumbent.as_ref().is_none_or(|&(_, best)| pobj < best - 1e-12) {
                        let mut reduced_vals = spx.values();
                        for &k in &binaries {
                            reduced_vals[k] = reduced_vals[k].round();
                        }
                        let full = red.expand(&reduced_vals);
                        let open = heap.peek().map_or(pobj, |n| n.bound.min(pobj));
                        log::info!(
                            "incumbent: t={:.2}s node={} obj={:.6} bound={:.6} gap={:.3e}",
                            t0.elapsed().as_secs_f64(),
                            node_count,
                            pobj,
                            open,
                            (pobj - open) / pobj.abs().max(1.0)
                        );
                        incumbent = Some((full, pobj));
                    }
                    // The node is closed at its LP bound; any residual gap to
                    // the polished value stays in the reported bound.
                    pruned_min = pruned_min.min(obj);
                    break;
                }
                Some((q, v, _)) => {
                    let dive_val = if v - v.floor() >= 0.5 { 1.0 } else { 0.0 };
                    let mut other = dive_changes.clone();
                    other.push((q, 1.0 - dive_val));
                    heap.push(HeapNode { bound: obj, id: next_id, changes: other });
                    next_id += 1;
                    dive_changes.push((q, dive_val));
                    spx.set_bound(q, dive_val, dive_val);
                    applied.push(q);
                    dive_parent_bound = obj;
                }
            }
        }
    }

    // Termination bookkeeping.
    let lp_iterations = spx.iterations();
    let wall_time = t0.elapsed();
    let (status, best_bound) = match status {
        Some(SolveStatus::TimeLimit) => {
            let open = heap
                .iter()
                .map(|n| n.bound)
                .fold(open_bound_at_stop.min(pruned_min), f64::min);
            (SolveStatus::TimeLimit, open)
        }
        _ => match &incumbent {
            Some((_, obj)) => {
                // Tree exhausted or cut off at the gap: remaining open nodes
                // (if any) and every pruned bound are within the tolerance.
                let open = heap.iter().map(|n| n.bound).fold(pruned_min, f64::min);
                let bound = open.min(*obj);
                let gap = (obj - bound) / obj.abs().max(1.0);
                let st = if gap <= OPTIMAL_GAP + 1e-15 {
                    SolveStatus::Optimal
                } else {
                    SolveStatus::GapLimit
                };
                (st, bound)
            }
            None => (SolveStatus::Infeasible, f64::INFINITY),
        },
    };

    let (values, objective, rel_gap) = match incumbent {
        Some((values, obj)) => {
            let report = check_feasibility(problem, &values);
            if !report.is_feasible() {
                return Err(Error::Numerical(format!(
                    "incumbent violates the model by {:.3e}",
                    report.max_violation
                )));
            }
            let gap = ((obj - best_bound) / obj.abs().max(1.0)).max(0.0);
            (values, Some(obj), Some(gap))
        }
        None => (vec![], None, None),
    };

    Ok(Solution {
        status,
        values,
        objective,
        best_bound,
        rel_gap,
        node_count,
        lp_iterations,
        wall_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Row, Sense, VarId, VarRef};

    fn binary(j: u32) -> VarRef {
        VarRef { id: VarId::Install { j }, kind: VarKind::Binary, lo: 0.0, hi: 1.0 }
    }

    fn knapsack() -> MilpProblem {
        // max 8a + 5b + 4c s.t. 6a + 4b + 3c <= 12  (as minimization)
        MilpProblem {
            variables: vec![binary(0), binary(1), binary(2)],
            rows: vec![Row {
                name: "cap".into(),
                coeffs: vec![(0, 6.0), (1, 4.0), (2, 3.0)],
                sense: Sense::Le,
                rhs: 12.0,
            }],
            objective: vec![-8.0, -5.0, -4.0],
            objective_constant: 0.0,
        }
    }

    #[test]
    fn solves_knapsack_to_optimality() {
        let sol = branch_and_bound(&knapsack(), &SolveOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective.unwrap() + 13.0).abs() < 1e-9);
        let v = &sol.values;
        assert_eq!((v[0], v[1], v[2]), (1.0, 1.0, 0.0));
        assert!(sol.rel_gap.unwrap() <= OPTIMAL_GAP);
    }

    #[test]
    fn lp_relaxation_bounds_the_milp() {
        let p = knapsack();
        let lp = solve_lp(&p).unwrap();
        assert_eq!(lp.status, LpStatus::Optimal);
        let milp = branch_and_bound(&p, &SolveOptions::default()).unwrap();
        assert!(lp.objective <= milp.objective.unwrap() + 1e-9);
    }

    #[test]
    fn all_binaries_fixed_returns_unique_point() {
        let mut p = knapsack();
        for v in &mut p.variables {
            v.lo = 1.0;
            v.hi = 1.0;
        }
        // 6+4+3 = 13 > 12: infeasible when everything is forced on.
        let sol = branch_and_bound(&p, &SolveOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);

        let mut p = knapsack();
        for (k, v) in p.variables.iter_mut().enumerate() {
            let val = if k == 0 { 0.0 } else { 1.0 };
            v.lo = val;
            v.hi = val;
        }
        let sol = branch_and_bound(&p, &SolveOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective.unwrap() + 9.0).abs() < 1e-9);
        assert_eq!(sol.node_count, 1);
        assert!(sol.rel_gap.unwrap() <= 1e-12);
    }

    #[test]
    fn warm_start_seeds_the_incumbent() {
        let p = knapsack();
        let ws = vec![0.0, 1.0, 1.0]; // objective -9, feasible
        let opts = SolveOptions { warm_start: Some(ws.clone()), ..Default::default() };
        let sol = branch_and_bound(&p, &opts).unwrap();
        assert!(sol.objective.unwrap() <= -9.0 + 1e-9);
        assert_eq!(sol.status, SolveStatus::Optimal);

        assert_eq!(validate_warm_start(&p, &ws), WarmStartCheck::Accepted);
        let bad = vec![1.0, 1.0, 1.0]; // violates the capacity row
        assert!(matches!(validate_warm_start(&p, &bad), WarmStartCheck::Rejected(_)));
        let frac = vec![0.5, 0.0, 0.0];
        assert!(matches!(validate_warm_start(&p, &frac), WarmStartCheck::Rejected(_)));
    }

    #[test]
    fn node_limit_reports_time_limit_status() {
        let opts = SolveOptions { node_limit: Some(0), ..Default::default() };
        let sol = branch_and_bound(&knapsack(), &opts).unwrap();
        assert_eq!(sol.status, SolveStatus::TimeLimit);
        assert!(sol.objective.is_none());
    }

    #[test]
    fn deterministic_repeat_runs() {
        let a = branch_and_bound(&knapsack(), &SolveOptions::default()).unwrap();
        let b = branch_and_bound(&knapsack(), &SolveOptions::default()).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.node_count, b.node_count);
        assert_eq!(a.objective, b.objective);
    }
}
