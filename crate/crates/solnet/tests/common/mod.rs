//! Shared test oracles, independent of the solver implementation.
//!
//! `milp_oracle` computes the exact optimum of the planning problem on tiny
//! instances by exhaustive enumeration of the binary patterns, with a
//! closed-form reservoir argument for the continuous battery variables.
//! `VertexLp` enumerates active sets of small dense LPs.

#![allow(dead_code)]

use solnet::sizing::SizedParams;
use solnet::NetworkInstance;

const TOL: f64 = 1e-9;

/// Exact optimum of the joint planning problem by brute force, or `None`
/// if no binary pattern is feasible.
///
/// Enumerates installation, sleep and battery-mode patterns; assignment
/// feasibility is a backtracking bin-pack per period, and the battery
/// cycle is checked in closed form (see `battery_cycle_feasible`). The
/// objective does not depend on assignments or battery levels, so pattern
/// feasibility plus the closed-form cost is exact.
pub fn milp_oracle(instance: &NetworkInstance, sized: &SizedParams) -> Option<f64> {
    let n_s = instance.n_stations();
    let n_t = instance.n_periods();
    let n_i = instance.n_test_points();
    assert!(n_s <= 3 && n_t <= 4, "oracle is exponential; keep instances tiny");

    let price = instance.horizon_days as f64 * instance.grid_price_per_kwh / 1000.0;
    let e0: Vec<Vec<f64>> = (0..n_s)
        .map(|j| {
            (0..n_t)
                .map(|t| instance.base_stations[j].p_idle_w * instance.time_base.duration(t))
                .collect()
        })
        .collect();
    let e1: Vec<Vec<f64>> = (0..n_s)
        .map(|j| {
            (0..n_t)
                .map(|t| instance.base_stations[j].p_active_w * instance.time_base.duration(t))
                .collect()
        })
        .collect();

    let mut best: Option<f64> = None;
    let n_station_patterns = 1u32 << n_s;
    let n_mode_patterns = 1u64 << (2 * n_s * n_t); // (xo, xb) per station-period

    for z_bits in 0..n_station_patterns {
        let z: Vec<bool> = (0..n_s).map(|j| z_bits >> j & 1 == 1).collect();
        'pattern: for mode_bits in 0..n_mode_patterns {
            let mut sleep = vec![vec![false; n_t]; n_s];
            let mut battery = vec![vec![false; n_t]; n_s];
            for j in 0..n_s {
                for t in 0..n_t {
                    let base = 2 * (j * n_t + t);
                    sleep[j][t] = mode_bits >> base & 1 == 1;
                    battery[j][t] = mode_bits >> (base + 1) & 1 == 1;
                    if battery[j][t] && !z[j] {
                        continue 'pattern; // battery use needs equipment
                    }
                }
            }

            // Assignment feasibility period by period.
            for t in 0..n_t {
                let active: Vec<usize> = (0..n_s).filter(|&j| !sleep[j][t]).collect();
                let caps: Vec<f64> = active.iter().map(|&j| e1[j][t] - e0[j][t]).collect();
                let demands: Vec<f64> = (0..n_i).map(|i| sized.tp_energy[i][t]).collect();
                if !packs(instance, &active, &caps, &demands) {
                    continue 'pattern;
                }
            }

            // Battery cycle feasibility per station.
            for j in 0..n_s {
                let draw: Vec<f64> = (0..n_t)
                    .map(|t| {
                        if battery[j][t] {
                            if sleep[j][t] { e0[j][t] } else { e1[j][t] }
                        } else {
                            0.0
                        }
                    })
                    .collect();
                if !battery_cycle_feasible(
                    &sized.stations[j].solar_wh,
                    &draw,
                    sized.stations[j].battery_min_wh,
                    sized.stations[j].battery_max_wh,
                ) {
                    continue 'pattern;
                }
            }

            // Objective: capital + grid cost of non-battery antenna energy.
            let mut cost = 0.0;
            for j in 0..n_s {
                if z[j] {
                    cost += sized.stations[j].capital_cost;
                }
                for t in 0..n_t {
                    let antenna = if sleep[j][t] { e0[j][t] } else { e1[j][t] };
                    if !battery[j][t] {
                        cost += price * antenna;
                    }
                }
            }
            if best.is_none_or(|b| cost < b) {
                best = Some(cost);
            }
        }
    }
    best
}

/// Can every test point be assigned to an active covering station without
/// exceeding any station's transmission energy budget?
fn packs(instance: &NetworkInstance, active: &[usize], caps: &[f64], demands: &[f64]) -> bool {
    let mut order: Vec<usize> = (0..demands.len()).collect();
    order.sort_by(|&a, &b| demands[b].partial_cmp(&demands[a]).unwrap());
    let mut load = vec![0.0; active.len()];
    fn go(
        pos: usize,
        order: &[usize],
        instance: &NetworkInstance,
        active: &[usize],
        caps: &[f64],
        demands: &[f64],
        load: &mut [f64],
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let i = order[pos];
        for (slot, &j) in active.iter().enumerate() {
            if instance.covers(i, j) && load[slot] + demands[i] <= caps[slot] + TOL {
                load[slot] += demands[i];
                if go(pos + 1, order, instance, active, caps, demands, load) {
                    return true;
                }
                load[slot] -= demands[i];
            }
        }
        false
    }
    go(0, &order, instance, active, caps, demands, &mut load)
}

/// Closed-form feasibility of the cyclic battery schedule.
///
/// The level dynamics are `level_{t+1} = min(cap_max, level_t + harvest_t -
/// draw_t)` (surplus beyond the cap is lost), and the level pattern must
/// repeat daily. Filling as much as possible dominates every other policy
/// for the lower-bound constraints, and the largest cyclic starting level
/// under max-fill is `cap_max + net - max_prefix` where `net` is the daily
/// harvest-minus-draw and `max_prefix` the maximum prefix sum. Feasible iff
/// `net >= 0` and the max-fill trajectory from that start respects the
/// minimum level and the per-period feed constraint
/// `level_t + harvest_t - draw_t >= cap_min`.
fn battery_cycle_feasible(harvest: &[f64], draw: &[f64], cap_min: f64, cap_max: f64) -> bool {
    let n = harvest.len();
    let deltas: Vec<f64> = (0..n).map(|t| harvest[t] - draw[t]).collect();
    let net: f64 = deltas.iter().sum();
    if net < -TOL {
        return false;
    }
    let mut prefix = 0.0;
    let mut max_prefix = f64::NEG_INFINITY;
    for &d in &deltas {
        prefix += d;
        max_prefix = max_prefix.max(prefix);
    }
    let start = cap_max + net - max_prefix;
    if start < cap_min - TOL {
        return false;
    }
    let mut level = start;
    for t in 0..n {
        if level + harvest[t] - draw[t] < cap_min - TOL {
            return false;
        }
        level = (level + deltas[t]).min(cap_max);
        if level < cap_min - TOL {
            return false;
        }
    }
    debug_assert!((level - start).abs() <= 1e-6, "cycle must close: {level} vs {start}");
    true
}

/// Brute-force LP oracle: enumerates all active sets of a small dense LP
/// with box bounds and inequality rows, returning the optimal objective.
pub struct VertexLp {
    pub cost: Vec<f64>,
    /// (coefficients, sense_le, rhs); `sense_le=false` means `>=`.
    pub rows: Vec<(Vec<f64>, bool, f64)>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl VertexLp {
    pub fn optimum(&self) -> Option<f64> {
        let n = self.cost.len();
        // Constraint pool: rows plus both bounds per variable.
        let mut pool: Vec<(Vec<f64>, f64)> = Vec::new();
        for (a, _, b) in &self.rows {
            pool.push((a.clone(), *b));
        }
        for k in 0..n {
            let mut unit = vec![0.0; n];
            unit[k] = 1.0;
            pool.push((unit.clone(), self.lo[k]));
            pool.push((unit, self.hi[k]));
        }
        let m = pool.len();
        let mut best: Option<f64> = None;
        let mut chosen = vec![0usize; n];
        self.enumerate(0, 0, m, &mut chosen, &pool, &mut best);
        best
    }

    fn enumerate(
        &self,
        depth: usize,
        from: usize,
        m: usize,
        chosen: &mut [usize],
        pool: &[(Vec<f64>, f64)],
        best: &mut Option<f64>,
    ) {
        let n = self.cost.len();
        if depth == n {
            if let Some(x) = solve_square(chosen.iter().map(|&c| &pool[c]), n) {
                if self.feasible(&x) {
                    let obj: f64 = self.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
                    if best.is_none_or(|b| obj < b) {
                        *best = Some(obj);
                    }
                }
            }
            return;
        }
        for c in from..m {
            chosen[depth] = c;
            self.enumerate(depth + 1, c + 1, m, chosen, pool, best);
        }
    }

    fn feasible(&self, x: &[f64]) -> bool {
        const FTOL: f64 = 1e-7;
        for (k, &v) in x.iter().enumerate() {
            if v < self.lo[k] - FTOL || v > self.hi[k] + FTOL {
                return false;
            }
        }
        for (a, le, b) in &self.rows {
            let lhs: f64 = a.iter().zip(x).map(|(c, v)| c * v).sum();
            if *le && lhs > b + FTOL {
                return false;
            }
            if !*le && lhs < b - FTOL {
                return false;
            }
        }
        true
    }
}

/// Gaussian elimination on an n x n system assembled from pool entries.
fn solve_square<'a>(
    rows: impl Iterator<Item = &'a (Vec<f64>, f64)>,
    n: usize,
) -> Option<Vec<f64>> {
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for (coeffs, rhs) in rows {
        a.push(coeffs.clone());
        b.push(*rhs);
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-9 {
            return None; // singular active set
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|k| b[k] / a[k][k]).collect())
}

/// Seeded generator for tiny feasible planning instances used in the
/// oracle-equivalence tests.
pub fn tiny_instance(seed: u64) -> NetworkInstance {
    use solnet::instance::{generate_grid_instance, InstanceDefaults, TimeBase};
    let n_bs = 1 + (seed % 2) as u32; // 1..=2 stations
    let tp_per_bs = 1 + (seed / 2 % 2) as u32; // 1..=2 test points each
    let mut defaults = InstanceDefaults::default();
    defaults.time_base = TimeBase::new(vec![0.0, 8.0, 16.0]).unwrap();
    defaults.n_panels = (seed % 4) as u32; // 0..=3 panels
    defaults.n_batteries = ((seed / 4) % 2) as u32; // 0..=1 batteries
    generate_grid_instance(n_bs, tp_per_bs, 400.0, 320.0, seed, &defaults)
        .expect("tiny instances must generate")
}
