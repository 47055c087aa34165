//! Network instances: base stations, test points, coverage, daily profiles
//! and the time base that partitions the representative day.
//!
//! Instances are immutable after construction. All randomness is seeded, so
//! a `(parameters, seed)` pair always produces the same instance.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sizing::EquipmentCatalog;

pub const HOURS_PER_DAY: usize = 24;

/// Ordered period start hours partitioning the representative day.
///
/// `starts[0]` is always 0; period `t` runs from `starts[t]` to
/// `starts[t+1]` (to 24.0 for the last period).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeBase {
    starts: Vec<f64>,
    durations: Vec<f64>,
}

impl TimeBase {
    pub fn new(starts: Vec<f64>) -> Result<Self> {
        if starts.len() < 2 {
            return Err(Error::InvalidTimeBase(format!(
                "need at least 2 periods, got {}",
                starts.len()
            )));
        }
        if starts[0] != 0.0 {
            return Err(Error::InvalidTimeBase(format!(
                "first period must start at hour 0, got {}",
                starts[0]
            )));
        }
        for w in starts.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidTimeBase(format!(
                    "starts must be strictly increasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let last = *starts.last().unwrap();
        if !last.is_finite() || last >= 24.0 {
            return Err(Error::InvalidTimeBase(format!(
                "starts must lie in [0, 24), got {last}"
            )));
        }
        let mut durations = Vec::with_capacity(starts.len());
        for t in 0..starts.len() {
            let end = if t + 1 < starts.len() { starts[t + 1] } else { 24.0 };
            durations.push(end - starts[t]);
        }
        Ok(Self { starts, durations })
    }

    /// Hourly time base `{0, 1, ..., 23}`.
    pub fn hourly() -> Self {
        Self::new((0..HOURS_PER_DAY).map(|h| h as f64).collect()).unwrap()
    }

    /// Uniform base with `n` slots of `24/n` hours each.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 || n > HOURS_PER_DAY {
            return Err(Error::InvalidTimeBase(format!(
                "uniform slot count must be in [2, 24], got {n}"
            )));
        }
        let width = 24.0 / n as f64;
        Self::new((0..n).map(|t| t as f64 * width).collect())
    }

    pub fn n_periods(&self) -> usize {
        self.starts.len()
    }

    pub fn starts(&self) -> &[f64] {
        &self.starts
    }

    /// Period length in hours.
    pub fn duration(&self, t: usize) -> f64 {
        self.durations[t]
    }

    pub fn durations(&self) -> &[f64] {
        &self.durations
    }

    pub fn start(&self, t: usize) -> f64 {
        self.starts[t]
    }
}

impl TryFrom<Vec<f64>> for TimeBase {
    type Error = Error;
    fn try_from(starts: Vec<f64>) -> Result<Self> {
        TimeBase::new(starts)
    }
}

impl From<TimeBase> for Vec<f64> {
    fn from(tb: TimeBase) -> Vec<f64> {
        tb.starts
    }
}

/// A daily profile: 24 hourly values in `[0, 1]`, fractions of a peak value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DailyProfile {
    hourly: Vec<f64>,
}

impl DailyProfile {
    pub fn new(hourly: Vec<f64>) -> Result<Self> {
        if hourly.len() != HOURS_PER_DAY {
            return Err(Error::InvalidProfile(format!(
                "profile needs {} hourly values, got {}",
                HOURS_PER_DAY,
                hourly.len()
            )));
        }
        for (h, &v) in hourly.iter().enumerate() {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidProfile(format!(
                    "hour {h} value {v} outside [0, 1]"
                )));
            }
        }
        Ok(Self { hourly })
    }

    pub fn constant(v: f64) -> Result<Self> {
        Self::new(vec![v; HOURS_PER_DAY])
    }

    pub fn hourly(&self) -> &[f64] {
        &self.hourly
    }

    pub fn value_at_hour(&self, h: usize) -> f64 {
        self.hourly[h]
    }

    pub fn max_value(&self) -> f64 {
        self.hourly.iter().cloned().fold(0.0, f64::max)
    }

    /// Time-weighted mean of the hourly values over `[start, start + len)`.
    ///
    /// On integer-hour windows this is the plain arithmetic mean of the
    /// covered hours; fractional windows weight each hour by its overlap.
    pub fn window_mean(&self, start: f64, len: f64) -> f64 {
        let end = start + len;
        let mut acc = 0.0;
        for (h, &v) in self.hourly.iter().enumerate() {
            let lo = (h as f64).max(start);
            let hi = ((h + 1) as f64).min(end);
            if hi > lo {
                acc += v * (hi - lo);
            }
        }
        acc / len
    }

    /// Default solar irradiance profile: half-sine over hours 6..=20 with
    /// its maximum at hour 13. The amplitude is the fraction of the peak
    /// (rated) irradiance reached on the representative day; 0.16 sizes the
    /// default harvest at roughly 0.32 kWh per panel per day.
    pub fn default_solar() -> Self {
        let amplitude = 0.16;
        let mut hourly = vec![0.0; HOURS_PER_DAY];
        for (h, slot) in hourly.iter_mut().enumerate() {
            if (6..=20).contains(&h) {
                let x = (h as f64 - 6.0) / 14.0;
                *slot = amplitude * (std::f64::consts::PI * x).sin().max(0.0);
            }
        }
        Self::new(hourly).unwrap()
    }

    /// Default traffic profile: double peak, maxima 1.0 at hour 10 and 0.9
    /// at hour 16, trough 0.15 over hours 0..=5.
    pub fn default_traffic() -> Self {
        let hourly = vec![
            0.15, 0.15, 0.15, 0.15, 0.15, 0.15, // 0-5 trough
            0.30, 0.50, 0.70, 0.90, 1.00, 0.95, // 6-11 morning ramp + peak
            0.85, 0.80, 0.80, 0.85, 0.90, 0.85, // 12-17 midday dip + second peak
            0.70, 0.60, 0.50, 0.40, 0.30, 0.20, // 18-23 evening decay
        ];
        Self::new(hourly).unwrap()
    }
}

impl TryFrom<Vec<f64>> for DailyProfile {
    type Error = Error;
    fn try_from(hourly: Vec<f64>) -> Result<Self> {
        DailyProfile::new(hourly)
    }
}

impl From<DailyProfile> for Vec<f64> {
    fn from(p: DailyProfile) -> Vec<f64> {
        p.hourly
    }
}

/// Fraction of the peak value present in period `t` of the time base.
pub fn period_profile_value(profile: &DailyProfile, time_base: &TimeBase, t: usize) -> f64 {
    profile.window_mean(time_base.start(t), time_base.duration(t))
}

/// A base station with its power draw and preassigned solar equipment counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseStation {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    /// Coverage radius in meters.
    pub radius: f64,
    /// Power draw in the idle state (antennas off), watts.
    pub p_idle_w: f64,
    /// Power draw in the active state, watts.
    pub p_active_w: f64,
    /// Number of solar panels the station would be fitted with.
    pub n_panels: u32,
    /// Number of batteries the station would be fitted with.
    pub n_batteries: u32,
}

impl BaseStation {
    fn validate(&self) -> Result<()> {
        if !(self.p_idle_w > 0.0) || !(self.p_active_w > self.p_idle_w) {
            return Err(Error::InvalidInstance(format!(
                "station {}: need active power > idle power > 0 (got {} / {})",
                self.id, self.p_active_w, self.p_idle_w
            )));
        }
        if !(self.radius > 0.0) {
            return Err(Error::InvalidInstance(format!(
                "station {}: coverage radius must be positive",
                self.id
            )));
        }
        Ok(())
    }

    pub fn covers(&self, x: f64, y: f64) -> bool {
        // Boundary inclusive: distance equal to the radius counts as covered.
        let (dx, dy) = (x - self.x, y - self.y);
        dx.hypot(dy) <= self.radius
    }
}

/// A traffic test point: aggregated user demand at a location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestPoint {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    /// Demand factor, dimensionless in `[0, 2]` (1 = nominal).
    pub f: f64,
}

impl TestPoint {
    fn validate(&self) -> Result<()> {
        if !self.f.is_finite() || !(0.0..=2.0).contains(&self.f) {
            return Err(Error::InvalidInstance(format!(
                "test point {}: demand factor {} outside [0, 2]",
                self.id, self.f
            )));
        }
        Ok(())
    }
}

/// Binary coverage matrix: `k[i][j] = 1` iff test point `i` lies within the
/// (inclusive) coverage radius of station `j`.
pub fn coverage_matrix(stations: &[BaseStation], test_points: &[TestPoint]) -> Vec<Vec<u8>> {
    test_points
        .iter()
        .map(|tp| {
            stations
                .iter()
                .map(|bs| u8::from(bs.covers(tp.x, tp.y)))
                .collect()
        })
        .collect()
}

/// Draws `n` demand factors from Normal(1, 0.2) truncated to `[0, 2]` by
/// rejection sampling. Equal seeds give identical sequences.
pub fn sample_demand_factors(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(1.0, 0.2).unwrap();
    (0..n)
        .map(|_| loop {
            let v = normal.sample(&mut rng);
            if (0.0..=2.0).contains(&v) {
                break v;
            }
        })
        .collect()
}

/// Complete description of a planning problem input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkInstance {
    /// Planning horizon in days.
    pub horizon_days: u32,
    /// Grid tariff in dollars per kWh (uniform across stations).
    pub grid_price_per_kwh: f64,
    /// Peak irradiance the solar profile is a fraction of, W/m².
    pub peak_irradiance: f64,
    /// Nominal test points per base station (the balance target).
    pub tp_per_bs: f64,
    pub time_base: TimeBase,
    pub solar_profile: DailyProfile,
    pub traffic_profile: DailyProfile,
    pub base_stations: Vec<BaseStation>,
    pub test_points: Vec<TestPoint>,
    pub catalog: EquipmentCatalog,
    /// Recomputed on load, never serialized.
    #[serde(skip)]
    coverage: Vec<Vec<u8>>,
}

impl NetworkInstance {
    /// Builds an instance, computing coverage and validating every invariant.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        horizon_days: u32,
        grid_price_per_kwh: f64,
        peak_irradiance: f64,
        tp_per_bs: f64,
        time_base: TimeBase,
        solar_profile: DailyProfile,
        traffic_profile: DailyProfile,
        base_stations: Vec<BaseStation>,
        test_points: Vec<TestPoint>,
        catalog: EquipmentCatalog,
    ) -> Result<Self> {
        let mut inst = Self {
            horizon_days,
            grid_price_per_kwh,
            peak_irradiance,
            tp_per_bs,
            time_base,
            solar_profile,
            traffic_profile,
            base_stations,
            test_points,
            catalog,
            coverage: Vec::new(),
        };
        inst.rebuild_coverage();
        inst.validate()?;
        Ok(inst)
    }

    fn rebuild_coverage(&mut self) {
        self.coverage = coverage_matrix(&self.base_stations, &self.test_points);
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon_days < 1 {
            return Err(Error::InvalidInstance("horizon must be >= 1 day".into()));
        }
        if !(self.grid_price_per_kwh > 0.0) {
            return Err(Error::InvalidInstance("grid price must be positive".into()));
        }
        if !(self.peak_irradiance > 0.0) {
            return Err(Error::InvalidInstance("peak irradiance must be positive".into()));
        }
        if !(self.tp_per_bs > 0.0) {
            return Err(Error::InvalidInstance("tp_per_bs must be positive".into()));
        }
        if self.base_stations.is_empty() {
            return Err(Error::InvalidInstance("no base stations".into()));
        }
        for bs in &self.base_stations {
            bs.validate()?;
        }
        for tp in &self.test_points {
            tp.validate()?;
        }
        self.catalog.validate()?;
        for (i, row) in self.coverage.iter().enumerate() {
            if row.iter().all(|&k| k == 0) {
                return Err(Error::InvalidInstance(format!(
                    "test point {} is not covered by any base station",
                    self.test_points[i].id
                )));
            }
        }
        Ok(())
    }

    pub fn n_stations(&self) -> usize {
        self.base_stations.len()
    }

    pub fn n_test_points(&self) -> usize {
        self.test_points.len()
    }

    pub fn n_periods(&self) -> usize {
        self.time_base.n_periods()
    }

    /// Planning horizon in years (365-day years).
    pub fn horizon_years(&self) -> f64 {
        self.horizon_days as f64 / 365.0
    }

    pub fn covers(&self, tp: usize, bs: usize) -> bool {
        self.coverage[tp][bs] == 1
    }

    pub fn coverage(&self) -> &[Vec<u8>] {
        &self.coverage
    }

    /// Stations covering test point `i`.
    pub fn covering_stations(&self, tp: usize) -> Vec<usize> {
        (0..self.n_stations()).filter(|&j| self.covers(tp, j)).collect()
    }

    /// Returns a copy with every station's panel count replaced.
    pub fn with_panel_count(&self, n_panels: u32) -> Self {
        let mut inst = self.clone();
        for bs in &mut inst.base_stations {
            bs.n_panels = n_panels;
        }
        inst
    }

    /// Returns a copy re-quantized onto another time base. Profiles are
    /// hourly, so no data is lost; sized per-period parameters must be
    /// recomputed by the caller.
    pub fn with_time_base(&self, time_base: TimeBase) -> Self {
        let mut inst = self.clone();
        inst.time_base = time_base;
        inst
    }

    /// Canonical JSON form: fixed field order, full float precision.
    pub fn to_json_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("instance serialization");
        out.push('\n');
        out
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let mut inst: NetworkInstance = serde_json::from_str(s)?;
        inst.rebuild_coverage();
        inst.validate()?;
        Ok(inst)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)?;
        Self::from_json_str(&s)
    }
}

/// Station-level defaults used by the grid generator.
#[derive(Debug, Clone)]
pub struct InstanceDefaults {
    pub horizon_days: u32,
    pub grid_price_per_kwh: f64,
    pub peak_irradiance: f64,
    pub p_idle_w: f64,
    pub p_active_w: f64,
    pub n_panels: u32,
    pub n_batteries: u32,
    pub time_base: TimeBase,
    pub solar_profile: DailyProfile,
    pub traffic_profile: DailyProfile,
    pub catalog: EquipmentCatalog,
}

impl Default for InstanceDefaults {
    fn default() -> Self {
        Self {
            horizon_days: 7300, // 20 years
            grid_price_per_kwh: 0.22,
            peak_irradiance: 1000.0,
            p_idle_w: 39.0,
            p_active_w: 94.0,
            n_panels: 6,
            n_batteries: 1,
            time_base: TimeBase::hourly(),
            solar_profile: DailyProfile::default_solar(),
            traffic_profile: DailyProfile::default_traffic(),
            catalog: EquipmentCatalog::default(),
        }
    }
}

const MAX_POSITION_RESAMPLES: usize = 1000;
const MAX_DEMAND_REDRAWS: u64 = 200;

/// Generates a near-square grid of base stations with `tp_per_bs` test
/// points scattered uniformly inside each station's cell.
///
/// Every test point is guaranteed covered by at least one station, and the
/// demand draw is redrawn (deterministically) until the peak-hour load is
/// servable with all stations active, so generated instances are always
/// feasible for the always-on scenario.
pub fn generate_grid_instance(
    n_bs: u32,
    tp_per_bs: u32,
    spacing_m: f64,
    radius_m: f64,
    seed: u64,
    defaults: &InstanceDefaults,
) -> Result<NetworkInstance> {
    if n_bs < 1 {
        return Err(Error::Generation("need at least one base station".into()));
    }
    if tp_per_bs < 1 {
        return Err(Error::Generation("need at least one test point per station".into()));
    }
    if !(spacing_m > 0.0) {
        return Err(Error::Generation("spacing must be positive".into()));
    }
    if !(radius_m > spacing_m / 2.0) {
        return Err(Error::Generation(format!(
            "radius {radius_m} must exceed half the spacing {spacing_m} so adjacent cells overlap"
        )));
    }

    let cols = (n_bs as f64).sqrt().ceil() as u32;
    let stations: Vec<BaseStation> = (0..n_bs)
        .map(|id| BaseStation {
            id,
            x: (id % cols) as f64 * spacing_m,
            y: (id / cols) as f64 * spacing_m,
            radius: radius_m,
            p_idle_w: defaults.p_idle_w,
            p_active_w: defaults.p_active_w,
            n_panels: defaults.n_panels,
            n_batteries: defaults.n_batteries,
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_tp = (n_bs * tp_per_bs) as usize;
    let mut positions = Vec::with_capacity(n_tp);
    for bs in &stations {
        for _ in 0..tp_per_bs {
            let mut placed = false;
            for _ in 0..MAX_POSITION_RESAMPLES {
                let x = bs.x + rng.random_range(-0.5..0.5) * spacing_m;
                let y = bs.y + rng.random_range(-0.5..0.5) * spacing_m;
                if stations.iter().any(|s| s.covers(x, y)) {
                    positions.push((x, y));
                    placed = true;
                    break;
                }
            }
            if !placed {
                return Err(Error::Generation(format!(
                    "could not place a covered test point near station {} \
                     after {MAX_POSITION_RESAMPLES} attempts; increase the radius",
                    bs.id
                )));
            }
        }
    }

    let coverage = {
        let tps: Vec<TestPoint> = positions
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| TestPoint { id: i as u32, x, y, f: 1.0 })
            .collect();
        coverage_matrix(&stations, &tps)
    };

    // Redraw demand factors until the peak hour packs with all stations on.
    let demand_seed = seed ^ 0x9E37_79B9_7F4A_7C15;
    let peak_traffic = defaults.traffic_profile.max_value();
    let capacity = tp_per_bs as f64 / peak_traffic.max(f64::MIN_POSITIVE);
    let mut factors = None;
    for attempt in 0..MAX_DEMAND_REDRAWS {
        let f = sample_demand_factors(n_tp, demand_seed.wrapping_add(attempt));
        if peak_load_packs(&coverage, &f, n_bs as usize, capacity) {
            factors = Some(f);
            break;
        }
    }
    let factors = factors.ok_or_else(|| {
        Error::Generation(format!(
            "no demand draw packable at peak load after {MAX_DEMAND_REDRAWS} redraws; \
             increase tp_per_bs headroom or the overlap"
        ))
    })?;

    let test_points: Vec<TestPoint> = positions
        .into_iter()
        .zip(factors)
        .enumerate()
        .map(|(i, ((x, y), f))| TestPoint { id: i as u32, x, y, f })
        .collect();

    NetworkInstance::new(
        defaults.horizon_days,
        defaults.grid_price_per_kwh,
        defaults.peak_irradiance,
        tp_per_bs as f64,
        defaults.time_base.clone(),
        defaults.solar_profile.clone(),
        defaults.traffic_profile.clone(),
        stations,
        test_points,
        defaults.catalog.clone(),
    )
}

/// Exact check that demand factors can be partitioned over covering
/// stations with per-station load at most `capacity`. Backtracking over
/// test points in decreasing demand order.
fn peak_load_packs(coverage: &[Vec<u8>], factors: &[f64], n_bs: usize, capacity: f64) -> bool {
    let mut order: Vec<usize> = (0..factors.len()).collect();
    order.sort_by(|&a, &b| factors[b].partial_cmp(&factors[a]).unwrap());
    let mut loads = vec![0.0f64; n_bs];
    fn assign(
        pos: usize,
        order: &[usize],
        coverage: &[Vec<u8>],
        factors: &[f64],
        loads: &mut [f64],
        capacity: f64,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let i = order[pos];
        for j in 0..loads.len() {
            if coverage[i][j] == 1 && loads[j] + factors[i] <= capacity + 1e-12 {
                loads[j] += factors[i];
                if assign(pos + 1, order, coverage, factors, loads, capacity) {
                    return true;
                }
                loads[j] -= factors[i];
            }
        }
        false
    }
    assign(0, &order, coverage, factors, &mut loads, capacity)
}

/// The default 4-station / 12-test-point planning instance used throughout
/// the test suite and documentation examples.
pub fn default_small_instance(seed: u64) -> NetworkInstance {
    generate_grid_instance(4, 3, 400.0, 300.0, seed, &InstanceDefaults::default())
        .expect("default instance parameters are generable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_base_rejects_bad_starts() {
        assert!(TimeBase::new(vec![0.0]).is_err());
        assert!(TimeBase::new(vec![1.0, 2.0]).is_err());
        assert!(TimeBase::new(vec![0.0, 8.0, 8.0]).is_err());
        assert!(TimeBase::new(vec![0.0, 24.0]).is_err());
        let tb = TimeBase::new(vec![0.0, 8.0, 16.0]).unwrap();
        assert_eq!(tb.durations(), &[8.0, 8.0, 8.0]);
    }

    #[test]
    fn time_base_durations_sum_to_24() {
        let tb = TimeBase::new(vec![0.0, 9.0, 10.0, 13.0, 15.0, 18.0, 19.0, 20.0]).unwrap();
        assert_eq!(tb.n_periods(), 8);
        assert!((tb.durations().iter().sum::<f64>() - 24.0).abs() < 1e-12);
    }

    #[test]
    fn coverage_boundary_is_inclusive() {
        let bs = vec![BaseStation {
            id: 0,
            x: 0.0,
            y: 0.0,
            radius: 100.0,
            p_idle_w: 39.0,
            p_active_w: 94.0,
            n_panels: 0,
            n_batteries: 0,
        }];
        let tp = |x: f64| TestPoint { id: 0, x, y: 0.0, f: 1.0 };
        assert_eq!(coverage_matrix(&bs, &[tp(0.0)]), vec![vec![1]]);
        assert_eq!(coverage_matrix(&bs, &[tp(100.0)]), vec![vec![1]]);
        assert_eq!(coverage_matrix(&bs, &[tp(100.0001)]), vec![vec![0]]);
    }

    #[test]
    fn coverage_outside_radius() {
        let bs = vec![BaseStation {
            id: 0,
            x: 0.0,
            y: 0.0,
            radius: 50.0,
            p_idle_w: 39.0,
            p_active_w: 94.0,
            n_panels: 0,
            n_batteries: 0,
        }];
        let tps = vec![TestPoint { id: 0, x: 60.0, y: 0.0, f: 1.0 }];
        assert_eq!(coverage_matrix(&bs, &tps), vec![vec![0]]);
    }

    #[test]
    fn coverage_empty_inputs() {
        assert!(coverage_matrix(&[], &[]).is_empty());
    }

    #[test]
    fn demand_factors_empty_and_deterministic() {
        assert!(sample_demand_factors(0, 7).is_empty());
        assert_eq!(sample_demand_factors(50, 123), sample_demand_factors(50, 123));
        assert_ne!(sample_demand_factors(50, 123), sample_demand_factors(50, 124));
    }

    #[test]
    fn demand_factors_moments_and_range() {
        let f = sample_demand_factors(1000, 42);
        assert!(f.iter().all(|&v| (0.0..=2.0).contains(&v)));
        let mean = f.iter().sum::<f64>() / f.len() as f64;
        assert!((0.97..=1.03).contains(&mean), "sample mean {mean} out of range");
    }

    #[test]
    fn period_value_constant_profile() {
        let p = DailyProfile::constant(0.5).unwrap();
        let tb = TimeBase::new(vec![0.0, 6.0, 12.0, 18.0]).unwrap();
        for t in 0..tb.n_periods() {
            assert!((period_profile_value(&p, &tb, t) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn period_value_identity_on_hourly_base() {
        let p = DailyProfile::default_traffic();
        let tb = TimeBase::hourly();
        for t in 0..24 {
            assert_eq!(period_profile_value(&p, &tb, t), p.value_at_hour(t));
        }
    }

    #[test]
    fn period_value_block_profile() {
        // 1.0 for hours 9..=17, 0 otherwise; period [6, 12) covers hours
        // 6,7,8 (zero) and 9,10,11 (one) -> mean 0.5.
        let mut hourly = vec![0.0; 24];
        for h in 9..=17 {
            hourly[h] = 1.0;
        }
        let p = DailyProfile::new(hourly).unwrap();
        let tb = TimeBase::new(vec![0.0, 6.0, 12.0, 18.0]).unwrap();
        assert!((period_profile_value(&p, &tb, 1) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn default_profiles_shape() {
        let solar = DailyProfile::default_solar();
        assert_eq!(solar.value_at_hour(3), 0.0);
        assert_eq!(solar.max_value(), solar.value_at_hour(13));
        let traffic = DailyProfile::default_traffic();
        assert_eq!(traffic.max_value(), 1.0);
        assert_eq!(traffic.value_at_hour(10), 1.0);
        assert_eq!(traffic.value_at_hour(16), 0.9);
        assert_eq!(traffic.value_at_hour(2), 0.15);
    }

    #[test]
    fn generate_shapes_and_determinism() {
        let inst = default_small_instance(1);
        assert_eq!(inst.n_stations(), 4);
        assert_eq!(inst.n_test_points(), 12);
        for i in 0..inst.n_test_points() {
            assert!(!inst.covering_stations(i).is_empty());
        }
        let again = default_small_instance(1);
        assert_eq!(inst.to_json_string(), again.to_json_string());
    }

    #[test]
    fn generate_single_cell_full_coverage() {
        let d = InstanceDefaults::default();
        let inst = generate_grid_instance(1, 1, 100.0, 1e6, 3, &d).unwrap();
        assert_eq!(inst.coverage(), &[vec![1]]);
    }

    #[test]
    fn generate_rejects_bad_params() {
        let d = InstanceDefaults::default();
        assert!(generate_grid_instance(0, 3, 400.0, 300.0, 1, &d).is_err());
        assert!(generate_grid_instance(4, 0, 400.0, 300.0, 1, &d).is_err());
        // radius below half spacing: no overlap possible
        assert!(generate_grid_instance(4, 3, 400.0, 150.0, 1, &d).is_err());
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let inst = default_small_instance(9);
        let s1 = inst.to_json_string();
        let reloaded = NetworkInstance::from_json_str(&s1).unwrap();
        assert_eq!(s1, reloaded.to_json_string());
        assert_eq!(reloaded.coverage(), inst.coverage());
    }

    #[test]
    fn uncovered_test_point_rejected_on_load() {
        let inst = default_small_instance(2);
        let mut doc: serde_json::Value = serde_json::from_str(&inst.to_json_string()).unwrap();
        doc["test_points"][0]["x"] = serde_json::json!(1.0e9);
        let err = NetworkInstance::from_json_str(&doc.to_string());
        assert!(err.is_err());
    }

    #[test]
    fn coverage_relabeling_permutes_columns() {
        let inst = default_small_instance(5);
        let mut stations = inst.base_stations.clone();
        stations.reverse();
        let permuted = coverage_matrix(&stations, &inst.test_points);
        let original = inst.coverage();
        let n = stations.len();
        for i in 0..inst.n_test_points() {
            for j in 0..n {
                assert_eq!(original[i][j], permuted[i][n - 1 - j]);
            }
        }
    }
}
