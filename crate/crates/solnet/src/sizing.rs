//! Derived model parameters: equipment replacement counts, capital cost,
//! per-period solar energy, test-point energy, battery bounds, and the
//! best-fit quantization of the daily profiles into a coarser time base.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{
    period_profile_value, DailyProfile, NetworkInstance, TimeBase, HOURS_PER_DAY,
};

/// Solar panel parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelSpec {
    pub unit_cost: f64,
    pub lifetime_years: f64,
    /// Conversion efficiency, fraction.
    pub efficiency: f64,
    pub area_m2: f64,
    pub rated_power_w: f64,
    pub degradation_per_year: f64,
}

/// Battery parameters. Capacity is amp-hours at the bank voltage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatterySpec {
    pub unit_cost: f64,
    pub lifetime_years: f64,
    pub efficiency: f64,
    /// Depth of discharge: usable fraction of capacity.
    pub dod: f64,
    pub voltage_v: f64,
    pub capacity_ah: f64,
    pub degradation_per_year: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverterSpec {
    pub unit_cost: f64,
    pub lifetime_years: f64,
    pub efficiency: f64,
    pub rated_power_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerSpec {
    pub unit_cost: f64,
    pub lifetime_years: f64,
    pub efficiency: f64,
    pub rated_current_a: f64,
}

/// One spec per equipment kind: panel, battery, inverter, charge controller.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquipmentCatalog {
    pub panel: PanelSpec,
    pub battery: BatterySpec,
    pub inverter: InverterSpec,
    pub controller: ControllerSpec,
}

impl Default for EquipmentCatalog {
    fn default() -> Self {
        Self {
            panel: PanelSpec {
                unit_cost: 112.0,
                lifetime_years: 20.0,
                efficiency: 0.1803,
                area_m2: 1.62,
                rated_power_w: 280.0,
                degradation_per_year: 0.005,
            },
            battery: BatterySpec {
                unit_cost: 345.0,
                lifetime_years: 7.0,
                efficiency: 0.90,
                dod: 0.50,
                voltage_v: 6.0,
                capacity_ah: 428.0,
                degradation_per_year: 0.03,
            },
            inverter: InverterSpec {
                unit_cost: 140.0,
                lifetime_years: 10.0,
                efficiency: 0.90,
                rated_power_w: 2000.0,
            },
            controller: ControllerSpec {
                unit_cost: 26.0,
                lifetime_years: 10.0,
                efficiency: 0.95,
                rated_current_a: 60.0,
            },
        }
    }
}

impl EquipmentCatalog {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, cost: f64, life: f64, eta: f64| -> Result<()> {
            if cost < 0.0 {
                return Err(Error::InvalidCatalog(format!("{name}: negative unit cost")));
            }
            if !(life > 0.0) {
                return Err(Error::InvalidCatalog(format!("{name}: lifetime must be positive")));
            }
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::InvalidCatalog(format!("{name}: efficiency {eta} outside (0, 1]")));
            }
            Ok(())
        };
        check("panel", self.panel.unit_cost, self.panel.lifetime_years, self.panel.efficiency)?;
        check("battery", self.battery.unit_cost, self.battery.lifetime_years, self.battery.efficiency)?;
        check("inverter", self.inverter.unit_cost, self.inverter.lifetime_years, self.inverter.efficiency)?;
        check(
            "controller",
            self.controller.unit_cost,
            self.controller.lifetime_years,
            self.controller.efficiency,
        )?;
        if !(self.panel.area_m2 > 0.0 && self.panel.rated_power_w > 0.0) {
            return Err(Error::InvalidCatalog("panel: area and rated power must be positive".into()));
        }
        if !(self.battery.dod > 0.0 && self.battery.dod <= 1.0) {
            return Err(Error::InvalidCatalog(format!(
                "battery: depth of discharge {} outside (0, 1]",
                self.battery.dod
            )));
        }
        if !(self.battery.voltage_v > 0.0 && self.battery.capacity_ah > 0.0) {
            return Err(Error::InvalidCatalog("battery: voltage and capacity must be positive".into()));
        }
        if !(self.inverter.rated_power_w > 0.0) {
            return Err(Error::InvalidCatalog("inverter: rated power must be positive".into()));
        }
        if !(self.controller.rated_current_a > 0.0) {
            return Err(Error::InvalidCatalog("controller: rated current must be positive".into()));
        }
        if self.panel.degradation_per_year < 0.0 || self.battery.degradation_per_year < 0.0 {
            return Err(Error::InvalidCatalog("degradation rates must be non-negative".into()));
        }
        Ok(())
    }

    /// Combined efficiency of the conversion chain downstream of the panel:
    /// battery, inverter and charge controller.
    pub fn chain_efficiency(&self) -> f64 {
        self.battery.efficiency * self.inverter.efficiency * self.controller.efficiency
    }
}

/// Number of unit purchases over the horizon, initial purchase included.
pub fn replacements(lifetime_years: f64, horizon_years: f64) -> u32 {
    debug_assert!(lifetime_years > 0.0 && horizon_years > 0.0);
    ((horizon_years / lifetime_years).ceil() as u32).max(1)
}

/// Inverter and charge-controller counts sized to match the panel power:
/// inverters by rated power, controllers by current at the battery bank
/// voltage (parallel bank, so bank voltage is the unit voltage).
pub fn derived_unit_counts(n_panels: u32, _n_batteries: u32, catalog: &EquipmentCatalog) -> (u32, u32) {
    if n_panels == 0 {
        return (0, 0);
    }
    let panel_power = n_panels as f64 * catalog.panel.rated_power_w;
    let n_inverters = (panel_power / catalog.inverter.rated_power_w).ceil() as u32;
    let bank_current = panel_power / catalog.battery.voltage_v;
    let n_controllers = (bank_current / catalog.controller.rated_current_a).ceil() as u32;
    (n_inverters.max(1), n_controllers.max(1))
}

/// Capital plus replacement cost of a station's solar system over the
/// horizon. Zero when the station has no panels.
pub fn solar_capital_cost(
    n_panels: u32,
    n_batteries: u32,
    catalog: &EquipmentCatalog,
    horizon_years: f64,
) -> f64 {
    if n_panels == 0 {
        return 0.0;
    }
    let (n_inv, n_ctl) = derived_unit_counts(n_panels, n_batteries, catalog);
    let term = |cost: f64, count: u32, lifetime: f64| {
        cost * count as f64 * replacements(lifetime, horizon_years) as f64
    };
    term(catalog.panel.unit_cost, n_panels, catalog.panel.lifetime_years)
        + term(catalog.battery.unit_cost, n_batteries, catalog.battery.lifetime_years)
        + term(catalog.inverter.unit_cost, n_inv, catalog.inverter.lifetime_years)
        + term(catalog.controller.unit_cost, n_ctl, catalog.controller.lifetime_years)
}

/// Peak electrical power of one panel: irradiance times area times
/// conversion efficiency, watts.
pub fn panel_peak_power(peak_irradiance: f64, area_m2: f64, eta_solar: f64) -> f64 {
    peak_irradiance * area_m2 * eta_solar
}

/// Energy delivered by `n_panels` panels over one period, Wh.
///
/// `pi_solar` is the period's fraction of peak irradiance, `delta_h` the
/// period length in hours, and `eta_chain` the combined efficiency of the
/// battery, inverter and charge controller.
pub fn solar_energy(
    n_panels: u32,
    peak_irradiance: f64,
    area_m2: f64,
    eta_solar: f64,
    pi_solar: f64,
    delta_h: f64,
    eta_chain: f64,
) -> f64 {
    n_panels as f64
        * panel_peak_power(peak_irradiance, area_m2, eta_solar)
        * pi_solar
        * delta_h
        * eta_chain
}

/// Energy required by one test point over one period, Wh.
///
/// At peak load the active-minus-idle power of the serving stations is
/// fully consumed, split over the nominal `tp_per_bs` test points.
pub fn testpoint_energy(
    p_active_w: f64,
    p_idle_w: f64,
    delta_h: f64,
    tp_per_bs: f64,
    pi_traffic: f64,
    demand_factor: f64,
) -> f64 {
    (p_active_w - p_idle_w) * delta_h / tp_per_bs * pi_traffic * demand_factor
}

/// Battery capacity bounds `(B^-, B^+)` in Wh for a bank of `n_batteries`.
/// The minimum is the non-dischargeable fraction `(1 - DoD) * B^+`.
pub fn battery_bounds(n_batteries: u32, battery: &BatterySpec) -> (f64, f64) {
    let max = n_batteries as f64 * battery.voltage_v * battery.capacity_ah;
    let min = (1.0 - battery.dod) * max;
    (min, max)
}

/// Options controlling derived-parameter computation.
#[derive(Debug, Clone)]
pub struct SizingConfig {
    /// Apply mid-life average derating for panel and battery degradation:
    /// multiply panel efficiency and battery capacity by
    /// `1 - rate * horizon / 2`.
    pub apply_derating: bool,
}

impl Default for SizingConfig {
    fn default() -> Self {
        Self { apply_derating: true }
    }
}

/// All per-station derived parameters of a sized instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SizedStationParams {
    /// Total solar capital over the horizon, dollars (0 without panels).
    pub capital_cost: f64,
    /// Minimum battery level, Wh.
    pub battery_min_wh: f64,
    /// Maximum battery level, Wh.
    pub battery_max_wh: f64,
    /// Harvested energy per period, Wh.
    pub solar_wh: Vec<f64>,
    pub n_inverters: u32,
    pub n_controllers: u32,
}

/// Derived parameters for every station and test point of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SizedParams {
    pub stations: Vec<SizedStationParams>,
    /// Test-point energy per period, Wh: `tp_energy[i][t]`.
    pub tp_energy: Vec<Vec<f64>>,
    /// Per-period solar fractions of the instance profile.
    pub pi_solar: Vec<f64>,
    /// Per-period traffic fractions of the instance profile.
    pub pi_traffic: Vec<f64>,
}

/// Computes every derived parameter the optimization model needs.
pub fn size_instance(instance: &NetworkInstance, config: &SizingConfig) -> SizedParams {
    let cat = &instance.catalog;
    let horizon_years = instance.horizon_years();
    let tb = &instance.time_base;
    let n_periods = tb.n_periods();

    let pi_solar: Vec<f64> = (0..n_periods)
        .map(|t| period_profile_value(&instance.solar_profile, tb, t))
        .collect();
    let pi_traffic: Vec<f64> = (0..n_periods)
        .map(|t| period_profile_value(&instance.traffic_profile, tb, t))
        .collect();

    let (panel_derate, battery_derate) = if config.apply_derating {
        (
            (1.0 - cat.panel.degradation_per_year * horizon_years / 2.0).max(0.0),
            (1.0 - cat.battery.degradation_per_year * horizon_years / 2.0).max(0.0),
        )
    } else {
        (1.0, 1.0)
    };
    let eta_solar = cat.panel.efficiency * panel_derate;
    let eta_chain = cat.chain_efficiency();

    let stations = instance
        .base_stations
        .iter()
        .map(|bs| {
            let (n_inverters, n_controllers) =
                derived_unit_counts(bs.n_panels, bs.n_batteries, cat);
            let (raw_min, raw_max) = battery_bounds(bs.n_batteries, &cat.battery);
            let solar_wh = (0..n_periods)
                .map(|t| {
                    solar_energy(
                        bs.n_panels,
                        instance.peak_irradiance,
                        cat.panel.area_m2,
                        eta_solar,
                        pi_solar[t],
                        tb.duration(t),
                        eta_chain,
                    )
                })
                .collect();
            SizedStationParams {
                capital_cost: solar_capital_cost(bs.n_panels, bs.n_batteries, cat, horizon_years),
                battery_min_wh: raw_min * battery_derate,
                battery_max_wh: raw_max * battery_derate,
                solar_wh,
                n_inverters,
                n_controllers,
            }
        })
        .collect();

    let tp_energy = instance
        .test_points
        .iter()
        .map(|tp| {
            (0..n_periods)
                .map(|t| {
                    // Station powers are uniform per instance defaults but may
                    // vary per station; test-point energy uses the power gap
                    // of the covering class, which is uniform in practice. Use
                    // the first station's gap as the network-wide reference.
                    let bs0 = &instance.base_stations[0];
                    testpoint_energy(
                        bs0.p_active_w,
                        bs0.p_idle_w,
                        tb.duration(t),
                        instance.tp_per_bs,
                        pi_traffic[t],
                        tp.f,
                    )
                })
                .collect()
        })
        .collect();

    SizedParams { stations, tp_energy, pi_solar, pi_traffic }
}

/// Result of fitting a coarse time base to the daily profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeBaseFit {
    pub time_base: TimeBase,
    /// Summed squared quantization error over both profiles.
    pub error: f64,
}

/// Chooses `n_slots` period boundaries on the integer-hour grid minimizing
/// the total squared error of approximating both profiles by their per-slot
/// means. Solved exactly by dynamic programming; the first boundary is fixed
/// at hour 0 and ties resolve to the lexicographically smallest boundary
/// list.
pub fn fit_timebase(
    solar: &DailyProfile,
    traffic: &DailyProfile,
    n_slots: usize,
) -> Result<TimeBaseFit> {
    if !(2..=HOURS_PER_DAY).contains(&n_slots) {
        return Err(Error::InvalidTimeBase(format!(
            "slot count must be in [2, 24], got {n_slots}"
        )));
    }

    // Prefix sums of values and squares for O(1) per-segment SSE.
    let n = HOURS_PER_DAY;
    let mut sum = [[0.0f64; HOURS_PER_DAY + 1]; 2];
    let mut sq = [[0.0f64; HOURS_PER_DAY + 1]; 2];
    for (p, profile) in [solar, traffic].into_iter().enumerate() {
        for (h, &v) in profile.hourly().iter().enumerate() {
            sum[p][h + 1] = sum[p][h] + v;
            sq[p][h + 1] = sq[p][h] + v * v;
        }
    }
    // SSE of hours a..b (b exclusive) against their mean, both profiles.
    let seg_cost = |a: usize, b: usize| -> f64 {
        let len = (b - a) as f64;
        let mut c = 0.0;
        for p in 0..2 {
            let s = sum[p][b] - sum[p][a];
            c += (sq[p][b] - sq[p][a]) - s * s / len;
        }
        c.max(0.0)
    };

    // cost_to_end[k][m]: best cost covering hours m..24 with k slots.
    let mut cost_to_end = vec![vec![f64::INFINITY; n + 1]; n_slots + 1];
    for m in 0..n {
        cost_to_end[1][m] = seg_cost(m, n);
    }
    for k in 2..=n_slots {
        for m in 0..n {
            // k slots need k distinct start hours in m..24.
            if n - m < k {
                continue;
            }
            let mut best = f64::INFINITY;
            for b in (m + 1)..=(n - (k - 1)) {
                let c = seg_cost(m, b) + cost_to_end[k - 1][b];
                if c < best {
                    best = c;
                }
            }
            cost_to_end[k][m] = best;
        }
    }

    // Reconstruct boundaries front-to-back, taking the smallest next
    // boundary that achieves the optimum (lexicographic tie-break).
    let mut starts = vec![0.0f64];
    let mut m = 0usize;
    for k in (2..=n_slots).rev() {
        let target = cost_to_end[k][m];
        let mut chosen = None;
        for b in (m + 1)..=(n - (k - 1)) {
            if seg_cost(m, b) + cost_to_end[k - 1][b] <= target + 1e-12 {
                chosen = Some(b);
                break;
            }
        }
        let b = chosen.expect("dynamic program is total over valid slot counts");
        starts.push(b as f64);
        m = b;
    }

    Ok(TimeBaseFit {
        time_base: TimeBase::new(starts)?,
        error: cost_to_end[n_slots][0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::default_small_instance;

    #[test]
    fn replacements_examples() {
        assert_eq!(replacements(20.0, 20.0), 1);
        assert_eq!(replacements(10.0, 20.0), 2);
        assert_eq!(replacements(7.0, 20.0), 3);
        assert_eq!(replacements(30.0, 20.0), 1);
    }

    #[test]
    fn unit_counts_match_panel_power() {
        let cat = EquipmentCatalog::default();
        let (inv, ctl) = derived_unit_counts(6, 1, &cat);
        assert_eq!(inv, 1); // 1680 W <= 2000 W
        assert_eq!(ctl, 5); // 1680 W / 6 V = 280 A -> ceil(280 / 60)
        assert_eq!(derived_unit_counts(0, 1, &cat), (0, 0));
    }

    #[test]
    fn capital_cost_table_values() {
        let cat = EquipmentCatalog::default();
        assert_eq!(solar_capital_cost(0, 1, &cat, 20.0), 0.0);
        // panels 6*112*1 + battery 345*1*3 + inverter 140*1*2 + controller 26*5*2
        let c = solar_capital_cost(6, 1, &cat, 20.0);
        assert!((c - (672.0 + 1035.0 + 280.0 + 260.0)).abs() < 1e-9, "got {c}");
        // doubling every unit cost doubles the total
        let mut cat2 = cat.clone();
        cat2.panel.unit_cost *= 2.0;
        cat2.battery.unit_cost *= 2.0;
        cat2.inverter.unit_cost *= 2.0;
        cat2.controller.unit_cost *= 2.0;
        assert!((solar_capital_cost(6, 1, &cat2, 20.0) - 2.0 * c).abs() < 1e-9);
    }

    #[test]
    fn panel_power_examples() {
        let w = panel_peak_power(1000.0, 1.62, 0.1803);
        assert!((w - 292.086).abs() < 1e-9);
        assert_eq!(panel_peak_power(1000.0, 1.62, 0.0), 0.0);
        assert!((panel_peak_power(2000.0, 1.62, 0.1803) - 2.0 * w).abs() < 1e-9);
    }

    #[test]
    fn solar_energy_examples() {
        assert_eq!(solar_energy(0, 1000.0, 1.62, 0.1803, 1.0, 1.0, 0.7695), 0.0);
        assert_eq!(solar_energy(6, 1000.0, 1.62, 0.1803, 0.0, 1.0, 0.7695), 0.0);
        let e = solar_energy(6, 1000.0, 1.62, 0.1803, 1.0, 1.0, 0.9 * 0.9 * 0.95);
        let expected = 6.0 * 292.086 * 0.9 * 0.9 * 0.95;
        assert!((e - expected).abs() < 1e-9, "got {e}, want {expected}");
        assert!((expected - 1348.6).abs() < 0.1);
    }

    #[test]
    fn solar_energy_is_linear_in_panels_and_fraction() {
        let one = solar_energy(1, 1000.0, 1.62, 0.1803, 0.3, 2.0, 0.7695);
        let five = solar_energy(5, 1000.0, 1.62, 0.1803, 0.3, 2.0, 0.7695);
        assert!((five - 5.0 * one).abs() < 1e-9);
        let half = solar_energy(1, 1000.0, 1.62, 0.1803, 0.15, 2.0, 0.7695);
        assert!((one - 2.0 * half).abs() < 1e-9);
    }

    #[test]
    fn testpoint_energy_examples() {
        assert_eq!(testpoint_energy(94.0, 39.0, 1.0, 3.0, 0.0, 1.0), 0.0);
        let e = testpoint_energy(94.0, 39.0, 1.0, 3.0, 1.0, 1.0);
        assert!((e - 55.0 / 3.0).abs() < 1e-12);
        let e2 = testpoint_energy(94.0, 39.0, 1.0, 3.0, 1.0, 2.0);
        assert!((e2 - 2.0 * e).abs() < 1e-12);
    }

    #[test]
    fn battery_bounds_examples() {
        let bat = EquipmentCatalog::default().battery;
        let (min, max) = battery_bounds(1, &bat);
        assert!((max - 2568.0).abs() < 1e-9);
        assert!((min - 1284.0).abs() < 1e-9);
        assert_eq!(battery_bounds(0, &bat), (0.0, 0.0));
        assert!(min < max);
    }

    #[test]
    fn sized_energy_conserved_across_time_bases() {
        let inst = default_small_instance(1);
        let cfg = SizingConfig::default();
        let hourly = size_instance(&inst, &cfg);
        let coarse_tb = TimeBase::new(vec![0.0, 9.0, 10.0, 13.0, 15.0, 18.0, 19.0, 20.0]).unwrap();
        let coarse = size_instance(&inst.with_time_base(coarse_tb), &cfg);
        for j in 0..inst.n_stations() {
            let a: f64 = hourly.stations[j].solar_wh.iter().sum();
            let b: f64 = coarse.stations[j].solar_wh.iter().sum();
            assert!((a - b).abs() <= 1e-9 * a.max(1.0), "station {j}: {a} vs {b}");
        }
    }

    #[test]
    fn derating_flag_scales_solar_and_battery() {
        let inst = default_small_instance(1);
        let on = size_instance(&inst, &SizingConfig { apply_derating: true });
        let off = size_instance(&inst, &SizingConfig { apply_derating: false });
        // 20-year horizon: panel derate 0.95, battery derate 0.70
        let ratio = on.stations[0].solar_wh[12] / off.stations[0].solar_wh[12];
        assert!((ratio - 0.95).abs() < 1e-9);
        let cap_ratio = on.stations[0].battery_max_wh / off.stations[0].battery_max_wh;
        assert!((cap_ratio - 0.70).abs() < 1e-9);
        assert!(on.stations[0].battery_min_wh < on.stations[0].battery_max_wh);
    }

    #[test]
    fn fit_hourly_base_is_exact() {
        let fit = fit_timebase(&DailyProfile::default_solar(), &DailyProfile::default_traffic(), 24)
            .unwrap();
        assert_eq!(fit.time_base, TimeBase::hourly());
        assert!(fit.error.abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_piecewise_constant_changepoints() {
        // Both profiles piecewise constant with level changes at 5, 11, 19.
        let mut hours = vec![0.2; 24];
        for h in 5..11 {
            hours[h] = 0.8;
        }
        for h in 11..19 {
            hours[h] = 0.5;
        }
        let p = DailyProfile::new(hours).unwrap();
        let fit = fit_timebase(&p, &p, 4).unwrap();
        assert_eq!(fit.time_base.starts(), &[0.0, 5.0, 11.0, 19.0]);
        assert!(fit.error.abs() < 1e-12);
    }

    #[test]
    fn fit_matches_exhaustive_enumeration() {
        // Oracle: enumerate all C(23, 3) boundary sets for 4 slots.
        let solar = DailyProfile::default_solar();
        let traffic = DailyProfile::default_traffic();
        let sse = |p: &DailyProfile, a: usize, b: usize| -> f64 {
            let vals = &p.hourly()[a..b];
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            vals.iter().map(|v| (v - mean) * (v - mean)).sum()
        };
        let mut best = f64::INFINITY;
        let mut best_bounds = vec![];
        for b1 in 1..24 {
            for b2 in (b1 + 1)..24 {
                for b3 in (b2 + 1)..24 {
                    let bounds = [0, b1, b2, b3, 24];
                    let mut cost = 0.0;
                    for w in bounds.windows(2) {
                        cost += sse(&solar, w[0], w[1]) + sse(&traffic, w[0], w[1]);
                    }
                    if cost < best - 1e-15 {
                        best = cost;
                        best_bounds = vec![0.0, b1 as f64, b2 as f64, b3 as f64];
                    }
                }
            }
        }
        let fit = fit_timebase(&solar, &traffic, 4).unwrap();
        assert!((fit.error - best).abs() < 1e-9, "{} vs {}", fit.error, best);
        assert_eq!(fit.time_base.starts(), best_bounds.as_slice());
    }

    #[test]
    fn fit_error_non_increasing_in_slots() {
        let solar = DailyProfile::default_solar();
        let traffic = DailyProfile::default_traffic();
        let mut prev = f64::INFINITY;
        for n in 2..=24 {
            let fit = fit_timebase(&solar, &traffic, n).unwrap();
            assert!(fit.error <= prev + 1e-12, "error rose at {n} slots");
            prev = fit.error;
        }
        assert!(fit_timebase(&solar, &traffic, 1).is_err());
        assert!(fit_timebase(&solar, &traffic, 25).is_err());
    }
}
