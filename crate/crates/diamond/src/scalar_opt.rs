//! Certified one-dimensional solvers for min-of-monotone objectives.
//!
//! Every bound in this crate maximizes, over a correlation interval, an
//! objective of the form `g(rho) = min(inc(rho), d1(rho), ..., dk(rho))`
//! where `inc` is nondecreasing and each `di` is nonincreasing. Writing
//! `D = min(di)`, the difference `h = inc - D` is nondecreasing, so the
//! maximum of `g` sits either at an endpoint or at the sign change of `h`,
//! and bisection on `h` finds it with a certificate.
//!
//! Certification matters in two ways. First, a fixed pre-grid checks the
//! claimed monotonicity before any bisection, so a caller passing a
//! non-monotone term gets a structure error instead of a silently wrong
//! optimum. Second, bisection terminates on *value* accuracy, not just
//! interval width: near a steep crossing, a width of `tol_rho` can still
//! leave the value uncertain by far more than `tol_val`, and downstream
//! ordering checks (lower bound <= upper bound to 1e-9) need the value
//! certificate, not the width one.

use crate::channel::{Rate, Rho};
use crate::error::{Error, Result};
use serde::Serialize;

// --- tolerances and intervals ---------------------------------------------

/// Absolute tolerances for the scalar solvers: `tol_rho` on the correlation
/// argument, `tol_val` on rate values in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    tol_rho: f64,
    tol_val: f64,
}

impl Tolerances {
    pub fn new(tol_rho: f64, tol_val: f64) -> Result<Self> {
        for (name, v) in [("tol_rho", tol_rho), ("tol_val", tol_val)] {
            if !(v > 0.0 && v < 1e-2) {
                return Err(Error::domain(format!(
                    "{name} must lie in (0, 1e-2), got {v}"
                )));
            }
        }
        Ok(Tolerances { tol_rho, tol_val })
    }

    pub fn tol_rho(&self) -> f64 {
        self.tol_rho
    }

    pub fn tol_val(&self) -> f64 {
        self.tol_val
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_rho: 1e-9,
            tol_val: 1e-9,
        }
    }
}

/// Closed correlation interval `[lo, hi]` inside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(Error::domain(format!(
                "interval [{lo}, {hi}] is not a sub-interval of [0, 1]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

// --- internals ------------------------------------------------------------

/// Number of panels in the monotonicity / bracketing pre-grid.
const GRID_PANELS: usize = 1024;

/// Hard cap on bisection steps across both phases (width, then value).
const MAX_BISECT: usize = 200;

/// Slack for the monotonicity check: adjacent grid values may move the
/// wrong way by this much before we call it a violation, which tolerates
/// rounding in objectives built from logs of large powers.
fn mono_slack(value: f64) -> f64 {
    1e-10 * (1.0 + value.abs())
}

fn rho(v: f64) -> Rho {
    Rho::new(v.clamp(0.0, 1.0)).expect("clamped correlation is always valid")
}

// --- maximize_min ---------------------------------------------------------

/// Maximizes `min(increasing(rho), decreasing_1(rho), ..)` over `interval`.
///
/// Returns `(argmax, value)` with the value within `tol_val` of the true
/// maximum and the argument within `tol_rho` of a true argmax. The value is
/// always one actually attained by the objective at the returned point, so
/// it never overestimates the maximum.
///
/// Errors: empty `decreasing` list is a domain error; a term that fails its
/// claimed monotonicity on the pre-grid is a structure error.
pub fn maximize_min(
    increasing: &dyn Fn(Rho) -> Rate,
    decreasing: &[&dyn Fn(Rho) -> Rate],
    interval: Interval,
    tol: Tolerances,
) -> Result<(Rho, Rate)> {
    if decreasing.is_empty() {
        return Err(Error::domain(
            "maximize_min needs at least one decreasing term",
        ));
    }

    let objective = |r: Rho| -> Rate {
        let d = decreasing
            .iter()
            .map(|f| f(r))
            .min()
            .expect("nonempty term list");
        increasing(r).min(d)
    };

    let (lo, hi) = (interval.lo(), interval.hi());
    if lo == hi {
        let r = rho(lo);
        return Ok((r, objective(r)));
    }

    // Pre-grid: validate monotonicity, track the best sampled point, and
    // bracket the sign change of h = increasing - min(decreasing).
    let step = (hi - lo) / GRID_PANELS as f64;
    let grid: Vec<f64> = (0..=GRID_PANELS)
        .map(|i| if i == GRID_PANELS { hi } else { lo + step * i as f64 })
        .collect();

    let inc_vals: Vec<f64> = grid.iter().map(|&g| increasing(rho(g)).get()).collect();
    for w in inc_vals.windows(2) {
        if w[1] < w[0] - mono_slack(w[0]) {
            return Err(Error::structure(format!(
                "increasing term drops from {} to {} on the grid",
                w[0], w[1]
            )));
        }
    }

    let mut dec_min = vec![f64::INFINITY; grid.len()];
    for (k, f) in decreasing.iter().enumerate() {
        let vals: Vec<f64> = grid.iter().map(|&g| f(rho(g)).get()).collect();
        for w in vals.windows(2) {
            if w[1] > w[0] + mono_slack(w[0]) {
                return Err(Error::structure(format!(
                    "decreasing term {k} rises from {} to {} on the grid",
                    w[0], w[1]
                )));
            }
        }
        for (m, v) in dec_min.iter_mut().zip(vals) {
            *m = m.min(v);
        }
    }

    let mut best_rho = grid[0];
    let mut best_val = f64::NEG_INFINITY;
    let mut h = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let g = inc_vals[i].min(dec_min[i]);
        if g > best_val {
            best_val = g;
            best_rho = grid[i];
        }
        let hv = inc_vals[i] - dec_min[i];
        if hv.is_nan() {
            return Err(Error::structure(
                "objective difference is NaN (conflicting infinities)",
            ));
        }
        h.push(hv);
    }

    // Endpoint shortcuts: h nondecreasing means one-signed h pins the argmax.
    if h[0] >= 0.0 {
        // min(decreasing) rules everywhere, and it only falls
        let r = rho(lo);
        return Ok((r, objective(r)));
    }
    if h[h.len() - 1] <= 0.0 {
        // increasing term rules everywhere, and it only climbs
        let r = rho(hi);
        return Ok((r, objective(r)));
    }

    // Bracket the first sign change on the grid.
    let k = h
        .windows(2)
        .position(|w| w[0] < 0.0 && w[1] >= 0.0)
        .ok_or_else(|| {
            Error::structure("sign change of the term difference was not bracketed")
        })?;
    let mut a = grid[k];
    let mut b = grid[k + 1];
    // h(a) < 0 <= h(b) holds from here on
    let dec_min_at = |r: f64| {
        decreasing
            .iter()
            .map(|f| f(rho(r)).get())
            .fold(f64::INFINITY, f64::min)
    };
    let h_at = |r: f64| increasing(rho(r)).get() - dec_min_at(r);

    let consider = |r: f64, best_rho: &mut f64, best_val: &mut f64| {
        let v = objective(rho(r)).get();
        if v > *best_val {
            *best_val = v;
            *best_rho = r;
        }
    };
    consider(a, &mut best_rho, &mut best_val);
    consider(b, &mut best_rho, &mut best_val);

    let mut steps = 0;
    // Phase 1: shrink the bracket to tol_rho.
    while b - a > tol.tol_rho() && steps < MAX_BISECT {
        let mid = 0.5 * (a + b);
        if h_at(mid) >= 0.0 {
            b = mid;
        } else {
            a = mid;
        }
        consider(mid, &mut best_rho, &mut best_val);
        steps += 1;
    }
    // Phase 2: the true max over [a, b] is capped by min(inc(b), D(a))
    // because inc rises and D falls. Keep halving until that envelope is
    // within tol_val of the best value actually sampled.
    while steps < MAX_BISECT {
        let envelope = increasing(rho(b)).get().min(dec_min_at(a));
        if envelope - best_val <= tol.tol_val() {
            break;
        }
        let mid = 0.5 * (a + b);
        if h_at(mid) >= 0.0 {
            b = mid;
        } else {
            a = mid;
        }
        consider(mid, &mut best_rho, &mut best_val);
        steps += 1;
    }

    let r = rho(best_rho);
    Ok((r, objective(r)))
}

// --- find_crossing --------------------------------------------------------

/// Finds the crossing of `f` and `g` on `interval`, assuming `f - g`
/// changes sign exactly once there (checked at the endpoints).
///
/// The returned point is within `tol_rho` of the true root and satisfies
/// `|f - g| <= tol_val` when the functions are smooth enough to allow it
/// within the iteration cap.
pub fn find_crossing(
    f: &dyn Fn(Rho) -> Rate,
    g: &dyn Fn(Rho) -> Rate,
    interval: Interval,
    tol: Tolerances,
) -> Result<Rho> {
    let d = |r: f64| -> Result<f64> {
        let v = f(rho(r)).get() - g(rho(r)).get();
        if v.is_nan() {
            return Err(Error::structure(
                "difference of the two functions is NaN (conflicting infinities)",
            ));
        }
        Ok(v)
    };

    let (mut a, mut b) = (interval.lo(), interval.hi());
    let da = d(a)?;
    let db = d(b)?;
    if da == 0.0 {
        return Ok(rho(a));
    }
    if db == 0.0 {
        return Ok(rho(b));
    }
    if da.signum() == db.signum() {
        return Err(Error::structure(format!(
            "no sign change on [{a}, {b}]: difference is {da} and {db}"
        )));
    }
    let sign_a = da.signum();

    let mut steps = 0;
    while b - a > tol.tol_rho() && steps < MAX_BISECT {
        let mid = 0.5 * (a + b);
        let dm = d(mid)?;
        if dm == 0.0 {
            return Ok(rho(mid));
        }
        if dm.signum() == sign_a {
            a = mid;
        } else {
            b = mid;
        }
        steps += 1;
    }
    // Value refinement: keep halving while the residual at the midpoint
    // still exceeds tol_val and the bracket can shrink further.
    let mut mid = 0.5 * (a + b);
    while steps < MAX_BISECT && d(mid)?.abs() > tol.tol_val() && b - a > f64::EPSILON * (1.0 + b) {
        let dm = d(mid)?;
        if dm.signum() == sign_a {
            a = mid;
        } else {
            b = mid;
        }
        mid = 0.5 * (a + b);
        steps += 1;
    }
    Ok(rho(mid))
}

// --- tests ----------------------------------------------------------------
