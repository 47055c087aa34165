//! Fixed-variable substitution and singleton-row elimination.
//!
//! Scenario restrictions pin many variables to constants; substituting them
//! out before the simplex sees the problem shrinks restricted scenarios by
//! an order of magnitude. Reduction is limited to: substituting variables
//! whose bounds have collapsed, dropping rows that became constant, and
//! converting single-variable rows into bounds (rounded to integers for
//! binaries when solving as a MILP).

use crate::model::{MilpProblem, Sense, VarKind, FEAS_TOL, INT_TOL};

const FIX_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ReducedRow {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Outcome of presolving: either a reduced problem or proven infeasibility.
pub enum Presolve {
    Reduced(Reduced),
    Infeasible(String),
}

#[derive(Debug, Clone)]
pub struct Reduced {
    /// Original indices of the kept variables, ascending.
    pub keep: Vec<usize>,
    /// Per original variable: the value it was fixed at, if any.
    pub fixed: Vec<Option<f64>>,
    /// Rows over reduced variable indices.
    pub rows: Vec<ReducedRow>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub cost: Vec<f64>,
    pub binary: Vec<bool>,
    /// Original constant plus the objective contribution of fixed variables.
    pub objective_constant: f64,
}

impl Reduced {
    pub fn n_vars(&self) -> usize {
        self.keep.len()
    }

    /// Expands reduced-space values into a full original-space assignment.
    pub fn expand(&self, reduced_values: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.fixed.len()];
        for (k, v) in self.fixed.iter().enumerate() {
            if let Some(val) = v {
                full[k] = *val;
            }
        }
        for (r, &orig) in self.keep.iter().enumerate() {
            full[orig] = reduced_values[r];
        }
        full
    }
}

/// Reduces `problem` by fixed-variable substitution to a fixpoint.
/// `integral` permits integer rounding of derived bounds on binaries.
pub fn presolve(problem: &MilpProblem, integral: bool) -> Presolve {
    let n = problem.n_vars();
    let mut lo: Vec<f64> = problem.variables.iter().map(|v| v.lo).collect();
    let mut hi: Vec<f64> = problem.variables.iter().map(|v| v.hi).collect();
    let binary: Vec<bool> = problem.variables.iter().map(|v| v.kind == VarKind::Binary).collect();
    let mut active: Vec<bool> = vec![true; problem.n_rows()];

    let is_fixed = |lo: &[f64], hi: &[f64], k: usize| hi[k] - lo[k] <= FIX_EPS;

    loop {
        let mut changed = false;
        for (r, row) in problem.rows.iter().enumerate() {
            if !active[r] {
                continue;
            }
            let mut rhs = row.rhs;
            let mut free: Option<(usize, f64)> = None;
            let mut n_free = 0;
            for &(k, c) in &row.coeffs {
                if c == 0.0 {
                    continue;
                }
                if is_fixed(&lo, &hi, k) {
                    rhs -= c * 0.5 * (lo[k] + hi[k]);
                } else {
                    n_free += 1;
                    free = Some((k, c));
                }
            }
            match n_free {
                0 => {
                    let ok = match row.sense {
                        Sense::Le => 0.0 <= rhs + FEAS_TOL,
                        Sense::Ge => 0.0 >= rhs - FEAS_TOL,
                        Sense::Eq => rhs.abs() <= FEAS_TOL,
                    };
                    if !ok {
                        return Presolve::Infeasible(format!(
                            "row {} violated by fixed variables (residual {rhs})",
                            row.name
                        ));
                    }
                    active[r] = false;
                    changed = true;
                }
                1 => {
                    let (k, c) = free.unwrap();
                    let bound = rhs / c;
                    let (mut new_lo, mut new_hi) = (lo[k], hi[k]);
                    match (row.sense, c > 0.0) {
                        (Sense::Le, true) | (Sense::Ge, false) => new_hi = new_hi.min(bound),
                        (Sense::Le, false) | (Sense::Ge, true) => new_lo = new_lo.max(bound),
                        (Sense::Eq, _) => {
                            new_lo = new_lo.max(bound);
                            new_hi = new_hi.min(bound);
                        }
                    }
                    if integral && binary[k] {
                        new_hi = (new_hi + INT_TOL).floor().min(hi[k]);
                        new_lo = (new_lo - INT_TOL).ceil().max(lo[k]);
                    }
                    if new_lo > new_hi + 1e-9 {
                        return Presolve::Infeasible(format!(
                            "row {} forces {} into empty range [{new_lo}, {new_hi}]",
                            row.name, problem.variables[k].id
                        ));
                    }
                    if new_hi < hi[k] - FIX_EPS || new_lo > lo[k] + FIX_EPS {
                        lo[k] = new_lo.min(new_hi);
                        hi[k] = new_hi.max(new_lo);
                    }
                    active[r] = false;
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }

    // Assemble the reduced problem.
    let mut fixed: Vec<Option<f64>> = vec![None; n];
    let mut keep = Vec::new();
    let mut reduced_index = vec![usize::MAX; n];
    for k in 0..n {
        if is_fixed(&lo, &hi, k) {
            let mut v = 0.5 * (lo[k] + hi[k]);
            if binary[k] {
                v = v.round();
            }
            fixed[k] = Some(v);
        } else {
            reduced_index[k] = keep.len();
            keep.push(k);
        }
    }

    let mut objective_constant = problem.objective_constant;
    for k in 0..n {
        if let Some(v) = fixed[k] {
            objective_constant += problem.objective[k] * v;
        }
    }

    let mut rows = Vec::new();
    for (r, row) in problem.rows.iter().enumerate() {
        if !active[r] {
            continue;
        }
        let mut rhs = row.rhs;
        let mut coeffs = Vec::with_capacity(row.coeffs.len());
        for &(k, c) in &row.coeffs {
            if c == 0.0 {
                continue;
            }
            match fixed[k] {
                Some(v) => rhs -= c * v,
                None => coeffs.push((reduced_index[k], c)),
            }
        }
        debug_assert!(coeffs.len() >= 2, "singleton rows were eliminated");
        rows.push(ReducedRow { coeffs, sense: row.sense, rhs });
    }

    Presolve::Reduced(Reduced {
        lo: keep.iter().map(|&k| lo[k]).collect(),
        hi: keep.iter().map(|&k| hi[k]).collect(),
        cost: keep.iter().map(|&k| problem.objective[k]).collect(),
        binary: keep.iter().map(|&k| binary[k]).collect(),
        keep,
        fixed,
        rows,
        objective_constant,
    })
}
