//! Post-solution energy accounting and assignment-balance statistics.

use crate::instance::NetworkInstance;
use crate::model::PlModel;
use crate::sizing::SizedParams;

const WH_PER_MWH: f64 = 1.0e6;

/// Horizon-scale energy bookkeeping for one solved scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyAccount {
    /// Energy drawn by all antennas over the horizon, MWh.
    pub antenna_mwh: f64,
    /// Harvestable energy of the installed equipment over the horizon, MWh.
    pub installed_solar_mwh: f64,
    /// Solar energy actually powering antennas, MWh.
    pub used_solar_mwh: f64,
    /// Harvested energy discarded because batteries were full, MWh.
    pub lost_solar_mwh: f64,
    /// Installed solar capital divided by used solar energy, $/kWh.
    /// `None` when no solar energy was used.
    pub unit_solar_cost: Option<f64>,
    /// Lost over installed energy; 0 when nothing is installed.
    pub loss_ratio: f64,
}

/// Cost decomposition of an assignment under the model's objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub capital: f64,
    pub grid: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.capital + self.grid
    }
}

/// Recomputes capital and grid cost directly from the schedules, independent
/// of the solver's objective bookkeeping.
pub fn cost_breakdown(model: &PlModel, sized: &SizedParams, values: &[f64]) -> CostBreakdown {
    let vars = &model.vars;
    let mut capital = 0.0;
    let mut grid_wh_day = 0.0;
    for j in 0..vars.n_stations {
        capital += sized.stations[j].capital_cost * values[vars.install[j]];
        for t in 0..vars.n_periods {
            let e0 = model.idle_wh[j][t];
            let e1 = model.active_wh[j][t];
            let xo = values[vars.sleep[j][t]];
            let xb = values[vars.battery[j][t]];
            let w = values[vars.sleep_battery[j][t]];
            let antenna = e1 - (e1 - e0) * xo;
            let from_battery = e1 * xb - (e1 - e0) * w;
            grid_wh_day += antenna - from_battery;
        }
    }
    CostBreakdown { capital, grid: model.price_per_wh * grid_wh_day }
}

/// Full energy accounting for a feasible assignment.
pub fn energy_account(
    instance: &NetworkInstance,
    sized: &SizedParams,
    model: &PlModel,
    values: &[f64],
) -> EnergyAccount {
    let vars = &model.vars;
    let days = instance.horizon_days as f64;
    let mut antenna_wh_day = 0.0;
    let mut used_wh_day = 0.0;
    let mut installed_wh_day = 0.0;
    let mut lost_wh_day = 0.0;
    let mut capital = 0.0;
    for j in 0..vars.n_stations {
        let installed = values[vars.install[j]] > 0.5;
        if installed {
            capital += sized.stations[j].capital_cost;
        }
        for t in 0..vars.n_periods {
            let e0 = model.idle_wh[j][t];
            let e1 = model.active_wh[j][t];
            let xo = values[vars.sleep[j][t]];
            let xb = values[vars.battery[j][t]];
            let w = values[vars.sleep_battery[j][t]];
            antenna_wh_day += e1 - (e1 - e0) * xo;
            used_wh_day += e1 * xb - (e1 - e0) * w;
            if installed {
                installed_wh_day += sized.stations[j].solar_wh[t];
                lost_wh_day += values[vars.loss[j][t]];
            }
        }
    }
    let used_solar_mwh = days * used_wh_day / WH_PER_MWH;
    let installed_solar_mwh = days * installed_wh_day / WH_PER_MWH;
    let lost_solar_mwh = days * lost_wh_day / WH_PER_MWH;
    EnergyAccount {
        antenna_mwh: days * antenna_wh_day / WH_PER_MWH,
        installed_solar_mwh,
        used_solar_mwh,
        lost_solar_mwh,
        unit_solar_cost: (used_solar_mwh > 1e-12)
            .then(|| capital / (used_solar_mwh * 1000.0)),
        loss_ratio: if installed_solar_mwh > 1e-12 {
            lost_solar_mwh / installed_solar_mwh
        } else {
            0.0
        },
    }
}

/// Number of test points assigned to station `j` in period `t`.
pub fn degree(model: &PlModel, values: &[f64], j: usize, t: usize) -> u32 {
    let vars = &model.vars;
    (0..vars.n_test_points)
        .filter_map(|i| vars.assign(i, j, t))
        .map(|k| values[k].round() as u32)
        .sum()
}

/// Max-min spread of assignment degrees, idle stations included.
pub fn dispersion(model: &PlModel, values: &[f64], t: usize) -> u32 {
    let ds: Vec<u32> = (0..model.vars.n_stations).map(|j| degree(model, values, j, t)).collect();
    dispersion_of(&ds)
}

/// Standard deviation of degrees around the nominal test points per station.
pub fn sigma(model: &PlModel, values: &[f64], tp_per_bs: f64, t: usize) -> f64 {
    let ds: Vec<u32> = (0..model.vars.n_stations).map(|j| degree(model, values, j, t)).collect();
    sigma_of(&ds, tp_per_bs)
}

pub fn dispersion_of(degrees: &[u32]) -> u32 {
    let max = degrees.iter().max().copied().unwrap_or(0);
    let min = degrees.iter().min().copied().unwrap_or(0);
    max - min
}

pub fn sigma_of(degrees: &[u32], tp_per_bs: f64) -> f64 {
    if degrees.is_empty() {
        return 0.0;
    }
    let sum_sq: f64 = degrees.iter().map(|&d| (d as f64 - tp_per_bs).powi(2)).sum();
    sum_sq.sqrt() / degrees.len() as f64
}

/// Per-period assignment balance over the whole horizon day.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceStats {
    /// `degrees[t][j]`.
    pub degrees: Vec<Vec<u32>>,
    pub dispersion: Vec<u32>,
    pub sigma: Vec<f64>,
}

pub fn balance_stats(model: &PlModel, values: &[f64], tp_per_bs: f64) -> BalanceStats {
    let vars = &model.vars;
    let mut degrees = vec![vec![0u32; vars.n_stations]; vars.n_periods];
    for &(i, j, t) in &vars.assign_list {
        let k = vars.assign(i, j, t).unwrap();
        if values[k] > 0.5 {
            degrees[t][j] += 1;
        }
    }
    let dispersion = degrees.iter().map(|d| dispersion_of(d)).collect();
    let sigma = degrees.iter().map(|d| sigma_of(d, tp_per_bs)).collect();
    BalanceStats { degrees, dispersion, sigma }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispersion_and_sigma_formulas() {
        // Degrees (6, 6, 0, 0) with 3 nominal test points per station:
        // dispersion 6, sigma = sqrt(9+9+9+9)/4 = 1.5.
        let ds = [6u32, 6, 0, 0];
        assert_eq!(dispersion_of(&ds), 6);
        assert!((sigma_of(&ds, 3.0) - 1.5).abs() < 1e-12);
        // All degrees at the nominal value: both zero.
        let even = [3u32, 3, 3, 3];
        assert_eq!(dispersion_of(&even), 0);
        assert!(sigma_of(&even, 3.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_invariant_under_relabeling() {
        let ds = [5u32, 1, 3, 3];
        let mut rev = ds;
        rev.reverse();
        assert_eq!(dispersion_of(&ds), dispersion_of(&rev));
        assert!((sigma_of(&ds, 3.0) - sigma_of(&rev, 3.0)).abs() < 1e-15);
    }
}
