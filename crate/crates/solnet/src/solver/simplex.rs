//! Bounded-variable primal simplex with an explicit dense basis inverse.
//!
//! Columns are stored sparse; every row gets a logical variable whose bounds
//! encode the row sense, so the all-logical basis always exists. The solver
//! keeps its basis across bound changes, which makes re-solves after
//! branching or scenario edits cheap: feasibility is repaired by a composite
//! phase 1 from the current basis, then phase 2 finishes.
//!
//! Pricing is Dantzig with a switch to Bland's rule after a degenerate
//! stall. Optimality claims are re-verified with freshly computed duals and
//! a residual check against the original data; on residual failure the
//! inverse is rebuilt from the basis columns before the claim is retried.

use crate::error::{Error, Result};
use crate::model::Sense;
use std::time::Instant;

/// Primal feasibility tolerance on variable bounds.
const FEAS_TOL: f64 = 1e-9;
/// Reduced-cost optimality tolerance.
const COST_TOL: f64 = 1e-9;
/// Rows with direction entries at or below this do not block the ratio test.
const RATIO_TOL: f64 = 1e-9;
/// Pivot magnitudes below this are a numerical failure when unavoidable.
const PIVOT_TOL: f64 = 1e-11;
/// Drop tolerance for rank-1 inverse updates.
const DROP_TOL: f64 = 1e-13;
/// Consecutive degenerate steps before switching to Bland's rule.
const DEGEN_LIMIT: u64 = 1000;
/// Iterations between full recomputations of duals and basic values.
const REFRESH_EVERY: u64 = 512;
/// Row residual threshold that triggers refactorization.
const RESIDUAL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal,
    Infeasible,
    Unbounded,
    /// Deadline hit before the solve finished.
    DeadlineHit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisStatus {
    Basic,
    AtLower,
    AtUpper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VState {
    Basic(usize),
    AtLo,
    AtHi,
}

enum Step {
    Moved,
    NoCandidate,
    Unbounded,
}

enum Ratio {
    /// Entering variable travels to its opposite bound; no basis change.
    Flip(f64),
    Pivot { row: usize, theta: f64, to_upper: bool },
    Unbounded,
}

pub struct Simplex {
    m: usize,
    n_struct: usize,
    n_total: usize,
    /// Sparse structural columns: (row, coefficient).
    cols: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    rhs: Vec<f64>,

    vstate: Vec<VState>,
    basic: Vec<usize>,
    /// Dense row-major basis inverse.
    binv: Vec<f64>,
    /// Values of the basic variables, one per row.
    xb: Vec<f64>,
    /// Cached phase-2 reduced costs for non-basic variables.
    dj: Vec<f64>,
    dj_valid: bool,
    /// A non-basic resting value changed; basic values need a recompute.
    xb_dirty: bool,

    iterations: u64,
    degenerate_streak: u64,
    bland: bool,

    col_buf: Vec<f64>,
    row_buf: Vec<f64>,
    y_buf: Vec<f64>,
}

impl Simplex {
    /// `cols` holds the structural columns; `senses`/`rhs` describe rows.
    /// Structural bounds must be finite on at least one side.
    pub fn new(
        cols: Vec<Vec<(usize, f64)>>,
        cost: Vec<f64>,
        mut lo: Vec<f64>,
        mut hi: Vec<f64>,
        senses: &[Sense],
        rhs: Vec<f64>,
    ) -> Self {
        let n_struct = cols.len();
        let m = senses.len();
        let n_total = n_struct + m;
        assert_eq!(cost.len(), n_struct);
        assert_eq!(lo.len(), n_struct);
        assert_eq!(hi.len(), n_struct);
        assert_eq!(rhs.len(), m);

        let mut cost = cost;
        cost.resize(n_total, 0.0);
        let mut vstate = Vec::with_capacity(n_total);
        for k in 0..n_struct {
            assert!(
                lo[k].is_finite() || hi[k].is_finite(),
                "structural variable {k} needs a finite bound"
            );
            vstate.push(if lo[k].is_finite() { VState::AtLo } else { VState::AtHi });
        }
        lo.reserve(m);
        hi.reserve(m);
        for sense in senses {
            let (l, h, st) = match sense {
                Sense::Le => (0.0, f64::INFINITY, VState::AtLo),
                Sense::Ge => (f64::NEG_INFINITY, 0.0, VState::AtHi),
                Sense::Eq => (0.0, 0.0, VState::AtLo),
            };
            lo.push(l);
            hi.push(h);
            vstate.push(st);
        }

        let mut binv = vec![0.0; m * m];
        let mut basic = Vec::with_capacity(m);
        for r in 0..m {
            binv[r * m + r] = 1.0;
            basic.push(n_struct + r);
            vstate[n_struct + r] = VState::Basic(r);
        }

        Self {
            m,
            n_struct,
            n_total,
            cols,
            cost,
            lo,
            hi,
            rhs,
            vstate,
            basic,
            binv,
            xb: vec![0.0; m],
            dj: vec![0.0; n_total],
            dj_valid: false,
            xb_dirty: true,
            iterations: 0,
            degenerate_streak: 0,
            bland: false,
            col_buf: vec![0.0; m],
            row_buf: vec![0.0; m],
            y_buf: vec![0.0; m],
        }
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// Updates a structural variable's bounds, keeping the basis. The next
    /// `reoptimize` repairs feasibility and optimality.
    pub fn set_bound(&mut self, var: usize, lo: f64, hi: f64) {
        debug_assert!(var < self.n_struct);
        debug_assert!(lo <= hi);
        let before = self.current_value(var);
        self.lo[var] = lo;
        self.hi[var] = hi;
        if !matches!(self.vstate[var], VState::Basic(_)) {
            self.vstate[var] = match self.vstate[var] {
                VState::AtLo if lo.is_finite() => VState::AtLo,
                VState::AtHi if hi.is_finite() => VState::AtHi,
                _ if lo.is_finite() => VState::AtLo,
                _ => VState::AtHi,
            };
            if self.current_value(var) != before {
                self.xb_dirty = true;
            }
        }
    }

    fn current_value(&self, var: usize) -> f64 {
        match self.vstate[var] {
            VState::Basic(r) => self.xb[r],
            VState::AtLo => self.lo[var],
            VState::AtHi => self.hi[var],
        }
    }

    pub fn value(&self, var: usize) -> f64 {
        self.current_value(var)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n_struct).map(|k| self.current_value(k)).collect()
    }

    pub fn basis_status(&self, var: usize) -> BasisStatus {
        match self.vstate[var] {
            VState::Basic(_) => BasisStatus::Basic,
            VState::AtLo => BasisStatus::AtLower,
            VState::AtHi => BasisStatus::AtUpper,
        }
    }

    /// Structural objective value (no constant term).
    pub fn objective(&self) -> f64 {
        (0..self.n_struct)
            .map(|k| self.cost[k] * self.current_value(k))
            .sum()
    }

    /// Solves from the current basis: phase 1 until primal feasible, then
    /// phase 2 to optimality.
    pub fn reoptimize(&mut self, deadline: Option<Instant>) -> Result<LpOutcome> {
        if self.xb_dirty {
            self.recompute_xb();
        }
        let limit = 50 * (self.m as u64 + self.n_total as u64) + 10_000;
        let mut iters: u64 = 0;
        let mut restarts = 0u32;

        'outer: loop {
            // Phase 1: drive basic variables inside their bounds.
            while self.total_infeasibility() > FEAS_TOL {
                if self.check_budget(&mut iters, limit, deadline, "phase 1")? {
                    return Ok(LpOutcome::DeadlineHit);
                }
                match self.phase1_step()? {
                    Step::Moved => {}
                    Step::NoCandidate => return Ok(LpOutcome::Infeasible),
                    Step::Unbounded => {
                        return Err(Error::Numerical("unbounded phase-1 direction".into()))
                    }
                }
                if iters % REFRESH_EVERY == 0 {
                    self.recompute_xb();
                }
            }

            // Phase 2: optimize the true objective.
            self.refresh_duals();
            loop {
                if self.check_budget(&mut iters, limit, deadline, "phase 2")? {
                    return Ok(LpOutcome::DeadlineHit);
                }
                match self.phase2_step()? {
                    Step::Moved => {}
                    Step::Unbounded => return Ok(LpOutcome::Unbounded),
                    Step::NoCandidate => {
                        // Verify the claim with fresh values and duals.
                        self.recompute_xb();
                        self.refresh_duals();
                        if self.total_infeasibility() > FEAS_TOL {
                            restarts += 1;
                            if restarts > 3 {
                                return Err(Error::Numerical(
                                    "feasibility lost repeatedly; basis too ill-conditioned".into(),
                                ));
                            }
                            continue 'outer;
                        }
                        if self.pick_entering().is_some() {
                            continue;
                        }
                        if self.residual_ok() {
                            return Ok(LpOutcome::Optimal);
                        }
                        restarts += 1;
                        if restarts > 3 {
                            return Err(Error::Numerical(
                                "row residuals exceed tolerance after refactorization".into(),
                            ));
                        }
                        log::warn!("simplex: residual check failed, refactorizing");
                        self.refactorize()?;
                        self.recompute_xb();
                        continue 'outer;
                    }
                }
                if iters % REFRESH_EVERY == 0 {
                    self.recompute_xb();
                    self.refresh_duals();
                }
            }
        }
    }

    /// Bumps the iteration counter, enforcing the hard cap and deadline.
    /// Returns `Ok(true)` when the deadline has passed.
    fn check_budget(
        &self,
        iters: &mut u64,
        limit: u64,
        deadline: Option<Instant>,
        phase: &str,
    ) -> Result<bool> {
        *iters += 1;
        if *iters > limit {
            return Err(Error::Numerical(format!("{phase}: iteration limit {limit} exceeded")));
        }
        if let Some(d) = deadline {
            if *iters % 64 == 0 && Instant::now() >= d {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn total_infeasibility(&self) -> f64 {
        let mut total = 0.0;
        for r in 0..self.m {
            let v = self.xb[r];
            let k = self.basic[r];
            total += (self.lo[k] - v).max(0.0) + (v - self.hi[k]).max(0.0);
        }
        total
    }

    /// x_B = B^-1 (b - N x_N).
    fn recompute_xb(&mut self) {
        let m = self.m;
        let mut r_vec = self.rhs.clone();
        for k in 0..self.n_total {
            if matches!(self.vstate[k], VState::Basic(_)) {
                continue;
            }
            let v = self.current_value(k);
            if v == 0.0 {
                continue;
            }
            if k < self.n_struct {
                for &(r, a) in &self.cols[k] {
                    r_vec[r] -= a * v;
                }
            } else {
                r_vec[k - self.n_struct] -= v;
            }
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.xb[i] = row.iter().zip(&r_vec).map(|(b, v)| b * v).sum();
        }
        self.xb_dirty = false;
    }

    /// Residual of A x + s - b against the original data.
    fn residual_ok(&self) -> bool {
        let mut res = vec![0.0; self.m];
        for k in 0..self.n_struct {
            let v = self.current_value(k);
            if v != 0.0 {
                for &(r, a) in &self.cols[k] {
                    res[r] += a * v;
                }
            }
        }
        for r in 0..self.m {
            res[r] += self.current_value(self.n_struct + r) - self.rhs[r];
        }
        res.iter().all(|v| v.abs() <= RESIDUAL_TOL)
    }

    /// Rebuilds the dense inverse from the current basis columns by
    /// Gauss-Jordan elimination with partial pivoting.
    fn refactorize(&mut self) -> Result<()> {
        let m = self.m;
        let mut a = vec![0.0; m * m];
        for (r, &k) in self.basic.iter().enumerate() {
            if k < self.n_struct {
                for &(row, coef) in &self.cols[k] {
                    a[row * m + r] = coef;
                }
            } else {
                a[(k - self.n_struct) * m + r] = 1.0;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = a[col * m + col].abs();
            for r in (col + 1)..m {
                let v = a[r * m + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < PIVOT_TOL {
                return Err(Error::Numerical("singular basis during refactorization".into()));
            }
            if piv != col {
                for c in 0..m {
                    a.swap(col * m + c, piv * m + c);
                    inv.swap(col * m + c, piv * m + c);
                }
            }
            let p = a[col * m + col];
            for c in 0..m {
                a[col * m + c] /= p;
                inv[col * m + c] /= p;
            }
            for r in 0..m {
                if r != col {
                    let f = a[r * m + col];
                    if f.abs() > DROP_TOL {
                        for c in 0..m {
                            a[r * m + c] -= f * a[col * m + c];
                            inv[r * m + c] -= f * inv[col * m + c];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        self.dj_valid = false;
        Ok(())
    }

    /// col_buf = B^-1 A_k.
    fn ftran(&mut self, k: usize) {
        let m = self.m;
        if k >= self.n_struct {
            let r = k - self.n_struct;
            for i in 0..m {
                self.col_buf[i] = self.binv[i * m + r];
            }
            return;
        }
        let col = &self.cols[k];
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            let mut acc = 0.0;
            for &(r, a) in col {
                acc += row[r] * a;
            }
            self.col_buf[i] = acc;
        }
    }

    /// y_buf = weights^T B^-1 for a sparse weight vector over rows.
    fn btran_sparse(&mut self, weights: &[(usize, f64)]) {
        let m = self.m;
        self.y_buf[..m].fill(0.0);
        for &(r, w) in weights {
            let row = &self.binv[r * m..(r + 1) * m];
            for (y, b) in self.y_buf.iter_mut().zip(row) {
                *y += w * b;
            }
        }
    }

    fn dot_col(&self, k: usize, y: &[f64]) -> f64 {
        if k >= self.n_struct {
            y[k - self.n_struct]
        } else {
            self.cols[k].iter().map(|&(r, a)| y[r] * a).sum()
        }
    }

    fn refresh_duals(&mut self) {
        let weights: Vec<(usize, f64)> = (0..self.m)
            .filter_map(|r| {
                let c = self.cost[self.basic[r]];
                (c != 0.0).then_some((r, c))
            })
            .collect();
        self.btran_sparse(&weights);
        let y = std::mem::take(&mut self.y_buf);
        for k in 0..self.n_total {
            self.dj[k] = match self.vstate[k] {
                VState::Basic(_) => 0.0,
                _ => self.cost[k] - self.dot_col(k, &y),
            };
        }
        self.y_buf = y;
        self.dj_valid = true;
    }

    /// Best phase-2 entering candidate under the active pricing rule, with
    /// its direction (+1 from lower bound, -1 from upper).
    fn pick_entering(&self) -> Option<(usize, i8)> {
        let mut best: Option<(usize, i8, f64)> = None;
        for k in 0..self.n_total {
            let dir = match self.vstate[k] {
                VState::Basic(_) => continue,
                VState::AtLo | VState::AtHi if self.hi[k] - self.lo[k] <= 0.0 => continue,
                VState::AtLo if self.dj[k] < -COST_TOL => 1i8,
                VState::AtHi if self.dj[k] > COST_TOL => -1i8,
                _ => continue,
            };
            if self.bland {
                return Some((k, dir));
            }
            let score = self.dj[k].abs();
            if best.map_or(true, |(_, _, s)| score > s) {
                best = Some((k, dir, score));
            }
        }
        best.map(|(k, d, _)| (k, d))
    }

    fn phase2_step(&mut self) -> Result<Step> {
        if !self.dj_valid {
            self.refresh_duals();
        }
        let Some((q, dir)) = self.pick_entering() else {
            return Ok(Step::NoCandidate);
        };
        self.ftran(q);
        match self.ratio_test(q, dir, false)? {
            Ratio::Unbounded => Ok(Step::Unbounded),
            Ratio::Flip(theta) => {
                self.apply_flip(q, dir, theta);
                Ok(Step::Moved)
            }
            Ratio::Pivot { row, theta, to_upper } => {
                self.apply_pivot(q, dir, row, theta, to_upper, true);
                Ok(Step::Moved)
            }
        }
    }

    fn phase1_step(&mut self) -> Result<Step> {
        // Gradient of the infeasibility sum with respect to basic values.
        let weights: Vec<(usize, f64)> = (0..self.m)
            .filter_map(|r| {
                let k = self.basic[r];
                let v = self.xb[r];
                if v < self.lo[k] - FEAS_TOL {
                    Some((r, -1.0))
                } else if v > self.hi[k] + FEAS_TOL {
                    Some((r, 1.0))
                } else {
                    None
                }
            })
            .collect();
        self.btran_sparse(&weights);
        let y = std::mem::take(&mut self.y_buf);

        let mut best: Option<(usize, i8, f64)> = None;
        for k in 0..self.n_total {
            match self.vstate[k] {
                VState::Basic(_) => continue,
                _ if self.hi[k] - self.lo[k] <= 0.0 => continue,
                _ => {}
            }
            let d = -self.dot_col(k, &y);
            let (dir, rate) = match self.vstate[k] {
                VState::AtLo if d < -COST_TOL => (1i8, -d),
                VState::AtHi if d > COST_TOL => (-1i8, d),
                _ => continue,
            };
            if self.bland {
                best = Some((k, dir, rate));
                break;
            }
            if best.map_or(true, |(_, _, s)| rate > s) {
                best = Some((k, dir, rate));
            }
        }
        self.y_buf = y;

        let Some((q, dir, _)) = best else {
            return Ok(Step::NoCandidate);
        };
        self.ftran(q);
        match self.ratio_test(q, dir, true)? {
            Ratio::Unbounded => Ok(Step::Unbounded),
            Ratio::Flip(theta) => {
                self.apply_flip(q, dir, theta);
                Ok(Step::Moved)
            }
            Ratio::Pivot { row, theta, to_upper } => {
                self.apply_pivot(q, dir, row, theta, to_upper, false);
                Ok(Step::Moved)
            }
        }
    }

    /// Bounded-variable ratio test. In phase 1, basic variables outside
    /// their bounds block at the bound they currently violate (where the
    /// infeasibility gradient changes).
    fn ratio_test(&self, q: usize, dir: i8, phase1: bool) -> Result<Ratio> {
        let s = dir as f64;
        let own_range = self.hi[q] - self.lo[q];
        let mut best_t = f64::INFINITY;
        let mut leaving: Option<(usize, bool, f64)> = None;

        for r in 0..self.m {
            let delta = -s * self.col_buf[r];
            if delta.abs() <= RATIO_TOL {
                continue;
            }
            let k = self.basic[r];
            let v = self.xb[r];
            let (limit, to_upper) = if delta > 0.0 {
                if phase1 && v < self.lo[k] - FEAS_TOL {
                    (self.lo[k], false)
                } else {
                    (self.hi[k], true)
                }
            } else if phase1 && v > self.hi[k] + FEAS_TOL {
                (self.hi[k], true)
            } else {
                (self.lo[k], false)
            };
            if !limit.is_finite() {
                continue;
            }
            let t = ((limit - v) / delta).max(0.0);
            let mag = self.col_buf[r].abs();
            let replace = match leaving {
                None => t < best_t,
                Some((lr, _, lmag)) => {
                    if t < best_t - 1e-12 {
                        true
                    } else if t <= best_t + 1e-12 {
                        if self.bland {
                            self.basic[r] < self.basic[lr]
                        } else {
                            mag > lmag
                        }
                    } else {
                        false
                    }
                }
            };
            if replace {
                best_t = best_t.min(t);
                leaving = Some((r, to_upper, mag));
            }
        }

        if own_range.is_finite() && own_range <= best_t + 1e-12 {
            return Ok(Ratio::Flip(own_range));
        }
        match leaving {
            None => Ok(Ratio::Unbounded),
            Some((row, _, mag)) if mag < PIVOT_TOL => {
                Err(Error::Numerical(format!("pivot magnitude {mag} below tolerance in row {row}")))
            }
            Some((row, to_upper, _)) => Ok(Ratio::Pivot { row, theta: best_t, to_upper }),
        }
    }

    fn apply_flip(&mut self, q: usize, dir: i8, theta: f64) {
        let s = dir as f64;
        for r in 0..self.m {
            self.xb[r] -= s * theta * self.col_buf[r];
        }
        self.vstate[q] = match self.vstate[q] {
            VState::AtLo => VState::AtHi,
            VState::AtHi => VState::AtLo,
            VState::Basic(_) => unreachable!("flip of a basic variable"),
        };
        self.iterations += 1;
        self.track_degeneracy(theta);
    }

    fn apply_pivot(
        &mut self,
        q: usize,
        dir: i8,
        row: usize,
        theta: f64,
        to_upper: bool,
        update_duals: bool,
    ) {
        let m = self.m;
        let s = dir as f64;
        let p = self.col_buf[row];

        for r in 0..m {
            self.xb[r] -= s * theta * self.col_buf[r];
        }
        let entering_value = match self.vstate[q] {
            VState::AtLo => self.lo[q] + s * theta,
            VState::AtHi => self.hi[q] + s * theta,
            VState::Basic(_) => unreachable!("entering variable already basic"),
        };

        let leaving = self.basic[row];
        self.vstate[leaving] = if to_upper { VState::AtHi } else { VState::AtLo };
        self.basic[row] = q;
        self.vstate[q] = VState::Basic(row);
        self.xb[row] = entering_value;

        // Incremental dual update, using the updated pivot row
        // (old row r of B^-1 divided by the pivot element).
        if update_duals && self.dj_valid {
            let dq = self.dj[q];
            let (rb, re) = (row * m, (row + 1) * m);
            self.row_buf.copy_from_slice(&self.binv[rb..re]);
            for v in self.row_buf.iter_mut() {
                *v /= p;
            }
            let row_buf = std::mem::take(&mut self.row_buf);
            for k in 0..self.n_total {
                if matches!(self.vstate[k], VState::Basic(_)) {
                    self.dj[k] = 0.0;
                    continue;
                }
                let alpha = self.dot_col(k, &row_buf);
                if alpha != 0.0 {
                    self.dj[k] -= dq * alpha;
                }
            }
            self.row_buf = row_buf;
        } else {
            self.dj_valid = false;
        }

        // Rank-1 update of the inverse.
        let (rb, re) = (row * m, (row + 1) * m);
        for c in rb..re {
            self.binv[c] /= p;
        }
        let pivot_row: Vec<f64> = self.binv[rb..re].to_vec();
        for i in 0..m {
            if i == row {
                continue;
            }
            let f = self.col_buf[i];
            if f.abs() <= DROP_TOL {
                continue;
            }
            let base = i * m;
            let dst = &mut self.binv[base..base + m];
            for (d, &pv) in dst.iter_mut().zip(&pivot_row) {
                *d -= f * pv;
            }
        }

        self.iterations += 1;
        self.track_degeneracy(theta);
    }

    fn track_degeneracy(&mut self, theta: f64) {
        if theta > 1e-9 {
            self.degenerate_streak = 0;
            self.bland = false;
        } else {
            self.degenerate_streak += 1;
            if self.degenerate_streak > DEGEN_LIMIT {
                self.bland = true;
            }
        }
    }
}
