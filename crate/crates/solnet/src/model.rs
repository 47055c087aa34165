//! The planning optimization model: a generic MILP container plus the
//! builder for the joint solar-installation / sleep-scheduling problem and
//! its scenario restrictions.
//!
//! Variables per station `j` and period `t`:
//! - `z_j`     solar equipment installed at station `j`
//! - `xo_j_t`  station idle (sleeping) during `t`
//! - `xb_j_t`  station powered from the battery during `t`
//! - `h_i_j_t` test point `i` served by station `j` during `t`
//! - `w_j_t`   product `xb * xo`, linearized
//! - `eb_j_t`  battery level at the start of `t`, Wh
//! - `loss_j_t` harvested energy discarded during `t` (battery full), Wh
//!
//! Assignment variables exist only for covered `(i, j)` pairs; uncovered
//! pairs are dropped rather than fixed to zero.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instance::NetworkInstance;
use crate::sizing::SizedParams;

/// Absolute feasibility tolerance on Wh-scaled constraint rows.
pub const FEAS_TOL: f64 = 1e-6;
/// Tolerance within which a relaxed binary counts as integral.
pub const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

/// Identity of a model variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    /// Solar equipment installed at station `j`.
    Install { j: u32 },
    /// Station `j` idle during period `t`.
    Sleep { j: u32, t: u32 },
    /// Station `j` battery-powered during period `t`.
    Battery { j: u32, t: u32 },
    /// Test point `i` assigned to station `j` during period `t`.
    Assign { i: u32, j: u32, t: u32 },
    /// Linearized product of `Sleep` and `Battery`.
    SleepBattery { j: u32, t: u32 },
    /// Battery energy at the start of period `t`, Wh.
    Charge { j: u32, t: u32 },
    /// Harvested energy lost during period `t`, Wh.
    Loss { j: u32, t: u32 },
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarId::Install { j } => write!(f, "z_{j}"),
            VarId::Sleep { j, t } => write!(f, "xo_{j}_{t}"),
            VarId::Battery { j, t } => write!(f, "xb_{j}_{t}"),
            VarId::Assign { i, j, t } => write!(f, "h_{i}_{j}_{t}"),
            VarId::SleepBattery { j, t } => write!(f, "w_{j}_{t}"),
            VarId::Charge { j, t } => write!(f, "eb_{j}_{t}"),
            VarId::Loss { j, t } => write!(f, "loss_{j}_{t}"),
        }
    }
}

/// A declared variable with its kind and box bounds.
#[derive(Debug, Clone)]
pub struct VarRef {
    pub id: VarId,
    pub kind: VarKind,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

/// One linear constraint row.
#[derive(Debug, Clone)]
pub struct Row {
    pub name: String,
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// A minimization MILP over typed, box-bounded variables.
#[derive(Debug, Clone)]
pub struct MilpProblem {
    pub variables: Vec<VarRef>,
    pub rows: Vec<Row>,
    /// Dense objective coefficients, one per variable.
    pub objective: Vec<f64>,
    pub objective_constant: f64,
}

impl MilpProblem {
    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn binary_indices(&self) -> Vec<usize> {
        self.variables
            .iter()
            .enumerate()
            .filter(|(_, v)| v.kind == VarKind::Binary)
            .map(|(k, _)| k)
            .collect()
    }

    /// Objective value of an assignment, constant included.
    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective_constant
            + self
                .objective
                .iter()
                .zip(values)
                .map(|(c, v)| c * v)
                .sum::<f64>()
    }

    fn validate(&self) -> Result<()> {
        for v in &self.variables {
            if !v.lo.is_finite() || !v.hi.is_finite() || v.lo > v.hi {
                return Err(Error::Model(format!(
                    "variable {} has invalid bounds [{}, {}]",
                    v.id, v.lo, v.hi
                )));
            }
        }
        for row in &self.rows {
            if !row.rhs.is_finite() {
                return Err(Error::Model(format!("row {} has non-finite rhs", row.name)));
            }
            for &(k, c) in &row.coeffs {
                if k >= self.variables.len() {
                    return Err(Error::Model(format!(
                        "row {} references undeclared variable {k}",
                        row.name
                    )));
                }
                if !c.is_finite() {
                    return Err(Error::Model(format!("row {} has non-finite coefficient", row.name)));
                }
            }
        }
        if self.objective.len() != self.variables.len() {
            return Err(Error::Model("objective length mismatch".into()));
        }
        Ok(())
    }
}

/// Index of every PL variable by family and subscripts.
#[derive(Debug, Clone)]
pub struct PlVars {
    pub n_stations: usize,
    pub n_periods: usize,
    pub n_test_points: usize,
    pub install: Vec<usize>,
    pub sleep: Vec<Vec<usize>>,
    pub battery: Vec<Vec<usize>>,
    pub sleep_battery: Vec<Vec<usize>>,
    pub charge: Vec<Vec<usize>>,
    pub loss: Vec<Vec<usize>>,
    /// Assignment variables for covered pairs, in creation order.
    pub assign_list: Vec<(usize, usize, usize)>,
    assign: BTreeMap<(usize, usize, usize), usize>,
}

impl PlVars {
    /// Variable index of `h_{i,j,t}`, if the pair is covered.
    pub fn assign(&self, i: usize, j: usize, t: usize) -> Option<usize> {
        self.assign.get(&(i, j, t)).copied()
    }
}

/// Problem PL together with its variable index and the per-period energy
/// parameters needed to interpret solutions.
#[derive(Debug, Clone)]
pub struct PlModel {
    pub problem: MilpProblem,
    pub vars: PlVars,
    /// Idle energy per station and period, Wh.
    pub idle_wh: Vec<Vec<f64>>,
    /// Active energy per station and period, Wh.
    pub active_wh: Vec<Vec<f64>>,
    /// Grid price over the horizon, dollars per Wh of daily energy.
    pub price_per_wh: f64,
}

/// Builds the complete linearized problem PL.
///
/// All constraint rows are in Wh; grid pricing converts to kWh. The grid
/// term prices `E^P (1 - x^b)`: battery-mode energy is paid through the
/// capital term only.
pub fn build_pl(instance: &NetworkInstance, sized: &SizedParams) -> Result<PlModel> {
    let n_s = instance.n_stations();
    let n_t = instance.n_periods();
    let n_i = instance.n_test_points();
    if sized.stations.len() != n_s || sized.tp_energy.len() != n_i {
        return Err(Error::Model("sized parameters do not match the instance".into()));
    }
    for t in 0..n_t {
        if !(instance.time_base.duration(t) > 0.0) {
            return Err(Error::Model(format!("period {t} has non-positive duration")));
        }
    }
    for i in 0..n_i {
        if instance.covering_stations(i).is_empty() {
            return Err(Error::Model(format!("test point {i} is uncovered")));
        }
    }

    let mut variables: Vec<VarRef> = Vec::new();
    let mut push = |id: VarId, kind: VarKind, lo: f64, hi: f64| -> usize {
        variables.push(VarRef { id, kind, lo, hi });
        variables.len() - 1
    };

    let install: Vec<usize> = (0..n_s)
        .map(|j| push(VarId::Install { j: j as u32 }, VarKind::Binary, 0.0, 1.0))
        .collect();
    let grid2 = |f: &mut dyn FnMut(usize, usize) -> usize| -> Vec<Vec<usize>> {
        (0..n_s).map(|j| (0..n_t).map(|t| f(j, t)).collect()).collect()
    };
    let sleep = grid2(&mut |j, t| {
        push(VarId::Sleep { j: j as u32, t: t as u32 }, VarKind::Binary, 0.0, 1.0)
    });
    let battery = grid2(&mut |j, t| {
        push(VarId::Battery { j: j as u32, t: t as u32 }, VarKind::Binary, 0.0, 1.0)
    });
    let sleep_battery = grid2(&mut |j, t| {
        push(VarId::SleepBattery { j: j as u32, t: t as u32 }, VarKind::Binary, 0.0, 1.0)
    });

    let mut assign = BTreeMap::new();
    let mut assign_list = Vec::new();
    for i in 0..n_i {
        for j in 0..n_s {
            if instance.covers(i, j) {
                for t in 0..n_t {
                    let k = push(
                        VarId::Assign { i: i as u32, j: j as u32, t: t as u32 },
                        VarKind::Binary,
                        0.0,
                        1.0,
                    );
                    assign.insert((i, j, t), k);
                    assign_list.push((i, j, t));
                }
            }
        }
    }

    let charge = grid2(&mut |j, t| {
        let s = &sized.stations[j];
        push(
            VarId::Charge { j: j as u32, t: t as u32 },
            VarKind::Continuous,
            s.battery_min_wh,
            s.battery_max_wh,
        )
    });
    let loss = grid2(&mut |j, t| {
        push(
            VarId::Loss { j: j as u32, t: t as u32 },
            VarKind::Continuous,
            0.0,
            sized.stations[j].solar_wh[t],
        )
    });

    // Per-period energies in Wh.
    let idle_wh: Vec<Vec<f64>> = (0..n_s)
        .map(|j| {
            (0..n_t)
                .map(|t| instance.base_stations[j].p_idle_w * instance.time_base.duration(t))
                .collect()
        })
        .collect();
    let active_wh: Vec<Vec<f64>> = (0..n_s)
        .map(|j| {
            (0..n_t)
                .map(|t| instance.base_stations[j].p_active_w * instance.time_base.duration(t))
                .collect()
        })
        .collect();

    // Objective: capital + horizon grid cost of E^P (1 - x^b), in dollars.
    let price_per_wh = instance.horizon_days as f64 * instance.grid_price_per_kwh / 1000.0;
    let mut objective = vec![0.0; variables.len()];
    let mut objective_constant = 0.0;
    for j in 0..n_s {
        objective[install[j]] = sized.stations[j].capital_cost;
        for t in 0..n_t {
            let e0 = idle_wh[j][t];
            let e1 = active_wh[j][t];
            objective_constant += price_per_wh * e1;
            objective[sleep[j][t]] = -price_per_wh * (e1 - e0);
            objective[battery[j][t]] = -price_per_wh * e1;
            objective[sleep_battery[j][t]] = price_per_wh * (e1 - e0);
        }
    }

    let mut rows: Vec<Row> = Vec::new();

    // Battery power only where equipment is installed: xb <= z.
    for j in 0..n_s {
        for t in 0..n_t {
            rows.push(Row {
                name: format!("battery_gate_{j}_{t}"),
                coeffs: vec![(battery[j][t], 1.0), (install[j], -1.0)],
                sense: Sense::Le,
                rhs: 0.0,
            });
        }
    }

    // Every test point served by exactly one covering station.
    for i in 0..n_i {
        for t in 0..n_t {
            let coeffs: Vec<(usize, f64)> = (0..n_s)
                .filter_map(|j| assign.get(&(i, j, t)).map(|&k| (k, 1.0)))
                .collect();
            rows.push(Row {
                name: format!("assign_once_{i}_{t}"),
                coeffs,
                sense: Sense::Eq,
                rhs: 1.0,
            });
        }
    }

    // No assignment to a sleeping station: xo + h <= 1.
    for &(i, j, t) in &assign_list {
        rows.push(Row {
            name: format!("active_serve_{i}_{j}_{t}"),
            coeffs: vec![(sleep[j][t], 1.0), (assign[&(i, j, t)], 1.0)],
            sense: Sense::Le,
            rhs: 1.0,
        });
    }

    // Served demand within the transmission energy budget:
    // sum_i E^T h + (e1 - e0) xo <= e1 - e0.
    for j in 0..n_s {
        for t in 0..n_t {
            let gap = active_wh[j][t] - idle_wh[j][t];
            let mut coeffs: Vec<(usize, f64)> = (0..n_i)
                .filter_map(|i| assign.get(&(i, j, t)).map(|&k| (k, sized.tp_energy[i][t])))
                .collect();
            coeffs.push((sleep[j][t], gap));
            rows.push(Row {
                name: format!("load_capacity_{j}_{t}"),
                coeffs,
                sense: Sense::Le,
                rhs: gap,
            });
        }
    }

    // Battery-mode consumption in Wh, linearized:
    // ebar(j,t) = e1 xb - (e1 - e0) w.
    for j in 0..n_s {
        let s = &sized.stations[j];
        for t in 0..n_t {
            let e0 = idle_wh[j][t];
            let e1 = active_wh[j][t];

            // Level plus harvest minus battery draw stays above the floor:
            // eb + E^S - ebar >= B^-.
            rows.push(Row {
                name: format!("battery_feed_{j}_{t}"),
                coeffs: vec![
                    (charge[j][t], 1.0),
                    (battery[j][t], -e1),
                    (sleep_battery[j][t], e1 - e0),
                ],
                sense: Sense::Ge,
                rhs: s.battery_min_wh - s.solar_wh[t],
            });

            // Cyclic storage balance:
            // eb_t = eb_{t-1} + E^S_{t-1} - loss_{t-1} - ebar_{t-1},
            // with period 0 closing the day against period T-1.
            let p = if t == 0 { n_t - 1 } else { t - 1 };
            let e0p = idle_wh[j][p];
            let e1p = active_wh[j][p];
            rows.push(Row {
                name: format!("battery_balance_{j}_{t}"),
                coeffs: vec![
                    (charge[j][t], 1.0),
                    (charge[j][p], -1.0),
                    (loss[j][p], 1.0),
                    (battery[j][p], e1p),
                    (sleep_battery[j][p], -(e1p - e0p)),
                ],
                sense: Sense::Eq,
                rhs: s.solar_wh[p],
            });

            // w = xb * xo at integral points.
            rows.push(Row {
                name: format!("w_le_xb_{j}_{t}"),
                coeffs: vec![(sleep_battery[j][t], 1.0), (battery[j][t], -1.0)],
                sense: Sense::Le,
                rhs: 0.0,
            });
            rows.push(Row {
                name: format!("w_le_xo_{j}_{t}"),
                coeffs: vec![(sleep_battery[j][t], 1.0), (sleep[j][t], -1.0)],
                sense: Sense::Le,
                rhs: 0.0,
            });
            rows.push(Row {
                name: format!("w_ge_xb_plus_xo_{j}_{t}"),
                coeffs: vec![
                    (sleep_battery[j][t], 1.0),
                    (battery[j][t], -1.0),
                    (sleep[j][t], -1.0),
                ],
                sense: Sense::Ge,
                rhs: -1.0,
            });
        }
    }

    let problem = MilpProblem { variables, rows, objective, objective_constant };
    problem.validate()?;

    Ok(PlModel {
        problem,
        vars: PlVars {
            n_stations: n_s,
            n_periods: n_t,
            n_test_points: n_i,
            install,
            sleep,
            battery,
            sleep_battery,
            charge,
            loss,
            assign_list,
            assign,
        },
        idle_wh,
        active_wh,
        price_per_wh,
    })
}

/// Variables pinned to fixed values to restrict PL into a scenario.
pub type FixSet = BTreeMap<usize, f64>;

/// Pins each fixed variable's bounds to its value. Rejects fixes outside
/// the variable's bounds and restrictions that make some row infeasible
/// under interval arithmetic.
pub fn restrict(problem: &MilpProblem, fixes: &FixSet) -> Result<MilpProblem> {
    let mut restricted = problem.clone();
    for (&k, &val) in fixes {
        let v = restricted
            .variables
            .get_mut(k)
            .ok_or_else(|| Error::InfeasibleFix(format!("unknown variable index {k}")))?;
        if val < v.lo - FEAS_TOL || val > v.hi + FEAS_TOL {
            return Err(Error::InfeasibleFix(format!(
                "{} = {val} outside bounds [{}, {}]",
                v.id, v.lo, v.hi
            )));
        }
        v.lo = val;
        v.hi = val;
    }
    for row in &restricted.rows {
        let (mut min, mut max) = (0.0f64, 0.0f64);
        for &(k, c) in &row.coeffs {
            let v = &restricted.variables[k];
            if c >= 0.0 {
                min += c * v.lo;
                max += c * v.hi;
            } else {
                min += c * v.hi;
                max += c * v.lo;
            }
        }
        let bad = match row.sense {
            Sense::Le => min > row.rhs + FEAS_TOL,
            Sense::Ge => max < row.rhs - FEAS_TOL,
            Sense::Eq => min > row.rhs + FEAS_TOL || max < row.rhs - FEAS_TOL,
        };
        if bad {
            return Err(Error::InfeasibleFix(format!(
                "row {} cannot be satisfied after fixing (range [{min}, {max}] vs rhs {})",
                row.name, row.rhs
            )));
        }
    }
    Ok(restricted)
}

/// The planning scenarios: restrictions of problem PL.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// No solar, no sleep: only assignments are optimized.
    P1,
    /// Sleep mode only (no solar).
    P2,
    /// Solar only (no sleep).
    P3,
    /// Sequential: sleep first, then solar placement.
    P4,
    /// Sequential: solar placement first, then sleep.
    P5,
    /// Joint optimization of everything.
    Pl,
    /// Full solar: equipment forced onto every station.
    Pfs,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::P1,
        Scenario::P2,
        Scenario::P3,
        Scenario::P4,
        Scenario::P5,
        Scenario::Pl,
        Scenario::Pfs,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::P1 => "p1",
            Scenario::P2 => "p2",
            Scenario::P3 => "p3",
            Scenario::P4 => "p4",
            Scenario::P5 => "p5",
            Scenario::Pl => "pl",
            Scenario::Pfs => "pfs",
        }
    }

    /// True for the two-stage sequential scenarios.
    pub fn is_sequential(&self) -> bool {
        matches!(self, Scenario::P4 | Scenario::P5)
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p1" => Ok(Scenario::P1),
            "p2" => Ok(Scenario::P2),
            "p3" => Ok(Scenario::P3),
            "p4" => Ok(Scenario::P4),
            "p5" => Ok(Scenario::P5),
            "pl" => Ok(Scenario::Pl),
            "pfs" => Ok(Scenario::Pfs),
            other => Err(Error::Scenario(format!("unknown scenario '{other}'"))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name().to_ascii_uppercase())
    }
}

/// Builds the fix set restricting PL into a scenario stage.
///
/// Stage 2 exists only for the sequential scenarios and requires the
/// stage-1 solution values.
pub fn scenario_fixes(
    model: &PlModel,
    which: Scenario,
    stage: u8,
    prior: Option<&[f64]>,
) -> Result<FixSet> {
    let vars = &model.vars;
    let mut fixes = FixSet::new();
    let fix_all_install = |fixes: &mut FixSet, val: f64| {
        for &k in &vars.install {
            fixes.insert(k, val);
        }
    };
    let fix_all_sleep = |fixes: &mut FixSet, val: f64| {
        for row in &vars.sleep {
            for &k in row {
                fixes.insert(k, val);
            }
        }
    };

    match (which, stage) {
        (Scenario::P1, 1) => {
            fix_all_install(&mut fixes, 0.0);
            fix_all_sleep(&mut fixes, 0.0);
        }
        (Scenario::P2, 1) | (Scenario::P4, 1) => fix_all_install(&mut fixes, 0.0),
        (Scenario::P3, 1) | (Scenario::P5, 1) => fix_all_sleep(&mut fixes, 0.0),
        (Scenario::Pl, 1) => {}
        (Scenario::Pfs, 1) => fix_all_install(&mut fixes, 1.0),
        (Scenario::P4, 2) => {
            let prior = prior
                .ok_or_else(|| Error::Scenario("stage 2 requires a stage-1 solution".into()))?;
            for row in &vars.sleep {
                for &k in row {
                    fixes.insert(k, prior[k].round());
                }
            }
            for &(i, j, t) in &vars.assign_list {
                let k = vars.assign(i, j, t).unwrap();
                fixes.insert(k, prior[k].round());
            }
        }
        (Scenario::P5, 2) => {
            let prior = prior
                .ok_or_else(|| Error::Scenario("stage 2 requires a stage-1 solution".into()))?;
            for &k in &vars.install {
                fixes.insert(k, prior[k].round());
            }
            for &(i, j, t) in &vars.assign_list {
                let k = vars.assign(i, j, t).unwrap();
                fixes.insert(k, prior[k].round());
            }
        }
        (s, n) => {
            return Err(Error::Scenario(format!("scenario {s} has no stage {n}")));
        }
    }
    Ok(fixes)
}

/// Per-row signed residual and the violations beyond tolerance.
#[derive(Debug, Clone)]
pub struct FeasibilityReport {
    /// Signed `lhs - rhs` per row.
    pub residuals: Vec<f64>,
    /// Rows violated by more than the tolerance: `(row index, amount)`.
    pub row_violations: Vec<(usize, f64)>,
    /// Bound violations: `(variable index, amount)`.
    pub bound_violations: Vec<(usize, f64)>,
    pub max_violation: f64,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.max_violation <= FEAS_TOL
    }
}

/// Evaluates every row and bound of `problem` at `values`.
pub fn check_feasibility(problem: &MilpProblem, values: &[f64]) -> FeasibilityReport {
    assert_eq!(values.len(), problem.n_vars(), "assignment must cover all variables");
    let mut residuals = Vec::with_capacity(problem.n_rows());
    let mut row_violations = Vec::new();
    let mut max_violation: f64 = 0.0;
    for (r, row) in problem.rows.iter().enumerate() {
        let lhs: f64 = row.coeffs.iter().map(|&(k, c)| c * values[k]).sum();
        let res = lhs - row.rhs;
        residuals.push(res);
        let viol = match row.sense {
            Sense::Le => res.max(0.0),
            Sense::Ge => (-res).max(0.0),
            Sense::Eq => res.abs(),
        };
        if viol > FEAS_TOL {
            row_violations.push((r, viol));
        }
        max_violation = max_violation.max(viol);
    }
    let mut bound_violations = Vec::new();
    for (k, v) in problem.variables.iter().enumerate() {
        let viol = (v.lo - values[k]).max(values[k] - v.hi).max(0.0);
        if viol > FEAS_TOL {
            bound_violations.push((k, viol));
        }
        max_violation = max_violation.max(viol);
    }
    FeasibilityReport { residuals, row_violations, bound_violations, max_violation }
}

/// Writes the problem in a plain-text LP format (CPLEX-style grammar; see
/// the repository README for the exact grammar).
pub fn write_lp(problem: &MilpProblem, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ {name}");
    let _ = writeln!(out, "Minimize");
    let mut obj = String::from(" obj:");
    let mut first = true;
    for (k, &c) in problem.objective.iter().enumerate() {
        if c != 0.0 {
            push_term(&mut obj, c, &problem.variables[k].id.to_string(), first);
            first = false;
        }
    }
    if problem.objective_constant != 0.0 {
        let c = problem.objective_constant;
        if c >= 0.0 {
            let _ = write!(obj, " + {c}");
        } else {
            let _ = write!(obj, " - {}", -c);
        }
    }
    out.push_str(&wrap(&obj));
    out.push('\n');
    let _ = writeln!(out, "Subject To");
    for row in &problem.rows {
        let mut line = format!(" {}:", row.name);
        let mut first = true;
        for &(k, c) in &row.coeffs {
            if c != 0.0 {
                push_term(&mut line, c, &problem.variables[k].id.to_string(), first);
                first = false;
            }
        }
        if first {
            line.push_str(" 0");
        }
        let _ = write!(line, " {} {}", row.sense, row.rhs);
        out.push_str(&wrap(&line));
        out.push('\n');
    }
    let _ = writeln!(out, "Bounds");
    for v in &problem.variables {
        let _ = writeln!(out, " {} <= {} <= {}", v.lo, v.id, v.hi);
    }
    let binaries: Vec<String> = problem
        .variables
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.id.to_string())
        .collect();
    if !binaries.is_empty() {
        let _ = writeln!(out, "Binaries");
        for chunk in binaries.chunks(12) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    let _ = writeln!(out, "End");
    out
}

fn push_term(line: &mut String, c: f64, name: &str, first: bool) {
    if first {
        if c < 0.0 {
            let _ = write!(line, " -{} {}", fmt_coef(-c), name);
        } else {
            let _ = write!(line, " {} {}", fmt_coef(c), name);
        }
    } else if c < 0.0 {
        let _ = write!(line, " - {} {}", fmt_coef(-c), name);
    } else {
        let _ = write!(line, " + {} {}", fmt_coef(c), name);
    }
}

fn fmt_coef(c: f64) -> String {
    format!("{c}")
}

fn wrap(line: &str) -> String {
    // Keep LP lines under 255 chars for picky readers.
    const LIMIT: usize = 240;
    if line.len() <= LIMIT {
        return line.to_string();
    }
    let mut out = String::new();
    let mut len = 0usize;
    for tok in line.split(' ') {
        if len + tok.len() + 1 > LIMIT && len > 0 {
            out.push('\n');
            out.push(' ');
            len = 1;
        } else if len > 0 {
            out.push(' ');
            len += 1;
        }
        out.push_str(tok);
        len += tok.len();
    }
    out
}
