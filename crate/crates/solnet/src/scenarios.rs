//! Orchestration of the planning scenarios and the experiment sweeps.
//!
//! Every scenario is a restriction of the joint problem: the base case with
//! neither technology (P1), the single-technology cases (P2 sleep only, P3
//! solar only), the two sequential pipelines (P4 sleep first, P5 solar
//! first), the joint optimization (PL) and forced full solar (PFS). The
//! joint solve is warm-started from the solar-first pipeline by default.

use std::time::Duration;

use crate::error::{Error, Result};
use crate::instance::{NetworkInstance, TimeBase};
use crate::metrics::{balance_stats, cost_breakdown, energy_account, BalanceStats, EnergyAccount};
use crate::model::{build_pl, restrict, scenario_fixes, PlModel, Scenario};
use crate::sizing::{size_instance, SizedParams, SizingConfig};
use crate::solver::{branch_and_bound, Solution, SolveOptions};

/// Options governing a scenario run.
#[derive(Debug, Clone)]
pub struct ScenarioOptions {
    pub solve: SolveOptions,
    pub sizing: SizingConfig,
    /// Scenario whose final solution warm-starts the joint problem; only
    /// consulted when running PL.
    pub warm_from: Option<Scenario>,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        Self {
            solve: SolveOptions::default(),
            sizing: SizingConfig::default(),
            warm_from: Some(Scenario::P5),
        }
    }
}

impl ScenarioOptions {
    pub fn with_gap(gap_tol: f64) -> Self {
        Self { solve: SolveOptions::with_gap(gap_tol), ..Self::default() }
    }
}

/// Per-station, per-period operating schedules of a solved scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedules {
    /// Solar equipment installed per station.
    pub install: Vec<u8>,
    /// Sleep indicator per station and period.
    pub sleep: Vec<Vec<u8>>,
    /// Battery-power indicator per station and period.
    pub battery: Vec<Vec<u8>>,
    /// Battery level at the start of each period, Wh.
    pub charge: Vec<Vec<f64>>,
    /// Harvested energy discarded per period, Wh.
    pub loss: Vec<Vec<f64>>,
}

/// Everything produced by one scenario run.
#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub scenario: Scenario,
    /// One solution per stage (two for the sequential scenarios).
    pub stages: Vec<Solution>,
    pub total_cost: f64,
    pub capital_cost: f64,
    pub grid_cost: f64,
    pub energy: EnergyAccount,
    pub schedules: Schedules,
    pub balance: BalanceStats,
}

impl ScenarioResult {
    pub fn final_solution(&self) -> &Solution {
        self.stages.last().expect("a scenario has at least one stage")
    }

    pub fn wall_time(&self) -> Duration {
        self.stages.iter().map(|s| s.wall_time).sum()
    }
}

/// Runs one scenario end to end: builds PL once, applies the scenario's
/// fixes (two-stage for the sequential scenarios), solves, and assembles
/// the cost and energy report.
pub fn run_scenario(
    instance: &NetworkInstance,
    which: Scenario,
    options: &ScenarioOptions,
) -> Result<ScenarioResult> {
    let sized = size_instance(instance, &options.sizing);
    let model = build_pl(instance, &sized)?;
    run_on_model(instance, &sized, &model, which, options)
}

fn run_on_model(
    instance: &NetworkInstance,
    sized: &SizedParams,
    model: &PlModel,
    which: Scenario,
    options: &ScenarioOptions,
) -> Result<ScenarioResult> {
    let mut stages = Vec::new();

    let solve_restricted = |stage: u8, prior: Option<&[f64]>, solve: &SolveOptions| -> Result<Solution> {
        let fixes = scenario_fixes(model, which, stage, prior)?;
        let restricted = restrict(&model.problem, &fixes)?;
        branch_and_bound(&restricted, solve)
    };

    match which {
        Scenario::P1 | Scenario::P2 | Scenario::P3 | Scenario::Pfs => {
            let sol = solve_restricted(1, None, &options.solve)?;
            require_incumbent(which, 1, &sol)?;
            stages.push(sol);
        }
        Scenario::P4 | Scenario::P5 => {
            let first = solve_restricted(1, None, &options.solve)?;
            require_incumbent(which, 1, &first)?;
            let second = solve_restricted(2, Some(&first.values), &options.solve)?;
            require_incumbent(which, 2, &second)?;
            stages.push(first);
            stages.push(second);
        }
        Scenario::Pl => {
            let mut solve = options.solve.clone();
            if solve.warm_start.is_none() {
                if let Some(source) = options.warm_from {
                    if source == Scenario::Pl {
                        return Err(Error::Scenario(
                            "the joint problem cannot warm-start itself".into(),
                        ));
                    }
                    let seed = run_on_model(instance, sized, model, source, options)?;
                    solve.warm_start = Some(seed.final_solution().values.clone());
                }
            }
            let sol = branch_and_bound(&model.problem, &solve)?;
            require_incumbent(which, 1, &sol)?;
            stages.push(sol);
        }
    }

    let final_values = &stages.last().unwrap().values;
    let costs = cost_breakdown(model, sized, final_values);
    let energy = energy_account(instance, sized, model, final_values);
    let balance = balance_stats(model, final_values, instance.tp_per_bs);
    let schedules = extract_schedules(model, final_values);

    Ok(ScenarioResult {
        scenario: which,
        total_cost: stages.last().unwrap().objective.expect("incumbent checked above"),
        capital_cost: costs.capital,
        grid_cost: costs.grid,
        energy,
        schedules,
        balance,
        stages,
    })
}

fn require_incumbent(which: Scenario, stage: u8, sol: &Solution) -> Result<()> {
    if sol.has_incumbent() {
        return Ok(());
    }
    Err(Error::Scenario(format!(
        "scenario {which} stage {stage} ended {} without a feasible solution",
        sol.status.as_str()
    )))
}

fn extract_schedules(model: &PlModel, values: &[f64]) -> Schedules {
    let vars = &model.vars;
    let bit = |k: usize| u8::from(values[k] > 0.5);
    Schedules {
        install: vars.install.iter().map(|&k| bit(k)).collect(),
        sleep: vars.sleep.iter().map(|row| row.iter().map(|&k| bit(k)).collect()).collect(),
        battery: vars.battery.iter().map(|row| row.iter().map(|&k| bit(k)).collect()).collect(),
        charge: vars
            .charge
            .iter()
            .map(|row| row.iter().map(|&k| values[k]).collect())
            .collect(),
        loss: vars.loss.iter().map(|row| row.iter().map(|&k| values[k]).collect()).collect(),
    }
}

/// One row of the panel-count sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub n_panels: u32,
    pub n_test_points: usize,
    pub n_stations: usize,
    pub solar_stations: usize,
    pub total_cost: f64,
    pub solar_cost: f64,
    pub grid_cost: f64,
    pub used_solar_mwh: f64,
    pub installed_solar_mwh: f64,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Index of the cost-minimizing row.
    pub best: usize,
}

/// Solves the joint problem once per panel count, every station fitted with
/// that count. Rows run in parallel up to the configured thread budget;
/// each solve itself is serial, so results are budget-independent.
pub fn sweep_panels(
    instance: &NetworkInstance,
    min_panels: u32,
    max_panels: u32,
    options: &ScenarioOptions,
) -> Result<SweepTable> {
    if min_panels > max_panels {
        return Err(Error::Scenario(format!(
            "empty sweep range [{min_panels}, {max_panels}]"
        )));
    }
    let counts: Vec<u32> = (min_panels..=max_panels).collect();
    let run_one = |&n: &u32| -> Result<SweepRow> {
        let inst = instance.with_panel_count(n);
        let result = run_scenario(&inst, Scenario::Pl, options)?;
        Ok(SweepRow {
            n_panels: n,
            n_test_points: inst.n_test_points(),
            n_stations: inst.n_stations(),
            solar_stations: result.schedules.install.iter().filter(|&&z| z == 1).count(),
            total_cost: result.total_cost,
            solar_cost: result.capital_cost,
            grid_cost: result.grid_cost,
            used_solar_mwh: result.energy.used_solar_mwh,
            installed_solar_mwh: result.energy.installed_solar_mwh,
        })
    };

    let rows: Vec<SweepRow> = if options.solve.threads > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.solve.threads)
            .build()
            .map_err(|e| Error::Scenario(format!("thread pool: {e}")))?;
        pool.install(|| counts.par_iter().map(run_one).collect::<Result<Vec<_>>>())?
    } else {
        counts.iter().map(run_one).collect::<Result<Vec<_>>>()?
    };

    let best = rows
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.total_cost.partial_cmp(&b.total_cost).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    Ok(SweepTable { rows, best })
}

/// One row of the time-base comparison.
#[derive(Debug, Clone)]
pub struct TimeBaseRow {
    pub starts: Vec<f64>,
    pub total_cost: f64,
    pub wall_time: Duration,
    pub rel_gap: f64,
}

/// Re-sizes the instance on each base and solves the joint problem.
///
/// Whenever one base's boundaries are a subset of another's, the finer base
/// must not cost more (it only adds scheduling freedom); a violation beyond
/// the certified gaps is reported as an error.
pub fn compare_timebases(
    instance: &NetworkInstance,
    bases: &[TimeBase],
    options: &ScenarioOptions,
) -> Result<Vec<TimeBaseRow>> {
    let mut rows = Vec::with_capacity(bases.len());
    for base in bases {
        let inst = instance.with_time_base(base.clone());
        let result = run_scenario(&inst, Scenario::Pl, options)?;
        rows.push(TimeBaseRow {
            starts: base.starts().to_vec(),
            total_cost: result.total_cost,
            wall_time: result.wall_time(),
            rel_gap: result.final_solution().rel_gap.unwrap_or(f64::INFINITY),
        });
    }
    for a in 0..rows.len() {
        for b in 0..rows.len() {
            if a == b || !is_subset(&rows[a].starts, &rows[b].starts) {
                continue;
            }
            // rows[a] coarser than rows[b]: finer must not cost more.
            let scale = rows[a].total_cost.abs().max(1.0);
            let tol = (rows[a].rel_gap + rows[b].rel_gap + 1e-9) * scale;
            if rows[b].total_cost > rows[a].total_cost + tol {
                return Err(Error::Scenario(format!(
                    "refining the time base raised the certified cost: {:?} -> {:?} ({} -> {})",
                    rows[a].starts, rows[b].starts, rows[a].total_cost, rows[b].total_cost
                )));
            }
        }
    }
    Ok(rows)
}

fn is_subset(coarse: &[f64], fine: &[f64]) -> bool {
    coarse.len() < fine.len()
        && coarse
            .iter()
            .all(|&s| fine.iter().any(|&f| (f - s).abs() < 1e-9))
}
