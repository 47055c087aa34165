//! Planning toolkit for solar-powered cellular networks: decides where to
//! install solar harvesting equipment and how to schedule base-station
//! sleep and battery use over a representative day, by building and exactly
//! solving a mixed-integer linear program and its scenario restrictions.
//!
//! Modules:
//! - [`instance`]: network geometry, coverage, daily profiles, generation
//! - [`sizing`]: equipment catalog and derived model parameters
//! - [`model`]: the MILP builder, scenario restrictions, feasibility checks
//! - [`solver`]: bounded-variable simplex + branch-and-bound
//! - [`scenarios`]: the planning scenarios and experiment sweeps
//! - [`metrics`]: energy accounting and assignment-balance statistics

pub mod error;
pub mod instance;
pub mod metrics;
pub mod model;
pub mod scenarios;
pub mod sizing;
pub mod solver;

pub use error::{Error, Result};
pub use instance::{
    coverage_matrix, default_small_instance, generate_grid_instance, period_profile_value,
    sample_demand_factors, BaseStation, DailyProfile, InstanceDefaults, NetworkInstance,
    TestPoint, TimeBase,
};
pub use metrics::{
    balance_stats, cost_breakdown, degree, dispersion, energy_account, sigma, BalanceStats,
    CostBreakdown, EnergyAccount,
};
pub use model::{
    build_pl, check_feasibility, restrict, scenario_fixes, write_lp, FixSet, MilpProblem,
    PlModel, Scenario, VarId, VarKind, VarRef,
};
pub use scenarios::{
    compare_timebases, run_scenario, sweep_panels, ScenarioOptions, ScenarioResult, Schedules,
    SweepRow, SweepTable, TimeBaseRow,
};
pub use sizing::{
    battery_bounds, derived_unit_counts, fit_timebase, panel_peak_power, replacements,
    size_instance, solar_capital_cost, solar_energy, testpoint_energy, EquipmentCatalog,
    SizedParams, SizedStationParams, SizingConfig, TimeBaseFit,
};
pub use solver::{
    branch_and_bound, solve_lp, validate_warm_start, LpSolution, LpStatus, Solution,
    SolveOptions, SolveStatus, WarmStartCheck,
};
