//! Symmetric-case analysis: equal link rates `r0` and equal powers `p`.
//!
//! In the symmetric case the bound terms collapse to three functions of the
//! correlation:
//!
//! ```text
//! f1 = r0 + (1/2) log2(1 + (1 - rho^2) p)      (B1 = B2; falls in rho)
//! f2 = (1/2) log2(1 + 2 (1 + rho) p)           (B3; climbs in rho)
//! f3 = 2 r0 - (1/2) log2(1 / (1 - rho^2))      (B4; falls in rho)
//! ```
//!
//! Outside a nontrivial parameter window the capacity is immediate: if
//! `(1/2) log2(1 + 2p) >= 2 r0` the source links are the bottleneck and the
//! capacity is `2 r0`; if `r0 >= (1/2) log2(1 + 4p)` the MAC is the
//! bottleneck and the capacity is `(1/2) log2(1 + 4p)`. In the window
//! between, the upper and lower bounds meet exactly when three conditions
//! on the crossings `rho_bar1` (of `f1 = f2`) and `rho_bar2` (of
//! `f3 = f2`) hold, and then the capacity equals `f3(rho_bar2)`.

use crate::bounds::{
    lower_bound, rho_circ, rho_star, upper_bound, BoundResult, Tolerances,
};
use crate::channel::{
    correlation_penalty, half_log2_1p, one_minus_rho_sq, Rate, Rho, SymmetricParams,
};
use crate::error::{Error, Result};
use crate::scalar_opt::{find_crossing, Interval};
use serde::Serialize;

// --- the three symmetric functions ----------------------------------------

/// `r0 + (1/2) log2(1 + (1 - rho^2) p)`: one link plus the other relay's
/// contribution. Strictly decreasing in rho for `p > 0`.
pub fn f1(sym: SymmetricParams, rho: Rho) -> Rate {
    Rate::from_valid(sym.r0() + half_log2_1p(one_minus_rho_sq(rho.get()) * sym.p()))
}

/// `(1/2) log2(1 + 2 (1 + rho) p)`: the coherent sum-power MAC rate.
/// Strictly increasing in rho for `p > 0`.
pub fn f2(sym: SymmetricParams, rho: Rho) -> Rate {
    Rate::from_valid(half_log2_1p(2.0 * (1.0 + rho.get()) * sym.p()))
}

/// `2 r0 - (1/2) log2(1 / (1 - rho^2))`: the link sum less the correlation
/// cost. Strictly decreasing, `-inf` at rho = 1.
pub fn f3(sym: SymmetricParams, rho: Rho) -> Rate {
    Rate::from_valid(2.0 * sym.r0() - correlation_penalty(rho))
}

// --- regimes --------------------------------------------------------------

/// Which part of the network caps the symmetric capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `(1/2) log2(1 + 2p) >= 2 r0`: the links cap everything; capacity
    /// `2 r0`. Wins the tie when both degenerate conditions hold.
    SourceLimited,
    /// `r0 >= (1/2) log2(1 + 4p)`: the MAC caps everything; capacity
    /// `(1/2) log2(1 + 4p)`.
    MacLimited,
    /// Strictly between the two; capacity known only when the meeting
    /// conditions hold.
    Nontrivial,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::SourceLimited => "source-limited",
            Regime::MacLimited => "mac-limited",
            Regime::Nontrivial => "nontrivial",
        }
    }
}

/// Classifies the bottleneck regime. Boundary equalities fall to
/// `SourceLimited` first; the capacity formulas agree at the boundaries, so
/// the tie-break introduces no discontinuity.
pub fn classify(sym: SymmetricParams) -> Regime {
    if half_log2_1p(2.0 * sym.p()) >= 2.0 * sym.r0() {
        Regime::SourceLimited
    } else if sym.r0() >= half_log2_1p(4.0 * sym.p()) {
        Regime::MacLimited
    } else {
        Regime::Nontrivial
    }
}

// --- crossing correlations ------------------------------------------------

fn require_nontrivial(sym: SymmetricParams, what: &str) -> Result<()> {
    let regime = classify(sym);
    if regime != Regime::Nontrivial {
        return Err(Error::domain(format!(
            "{what} exists only in the nontrivial regime, \
             but (r0={}, p={}) is {}",
            sym.r0(),
            sym.p(),
            regime.as_str()
        )));
    }
    Ok(())
}

/// Positive root of the quadratic `a rho^2 + b rho + c = 0`, written as
/// `-2c / (b + sqrt(b^2 - 4ac))`, which is the `(-b + sqrt(disc)) / (2a)`
/// root rationalized so that no subtraction cancels when `c < 0 < b`.
fn positive_quadratic_root(a: f64, b: f64, c: f64) -> f64 {
    let disc = b * b - 4.0 * a * c;
    -2.0 * c / (b + disc.max(0.0).sqrt())
}

fn refined_root(
    sym: SymmetricParams,
    root: f64,
    lhs: &dyn Fn(SymmetricParams, Rho) -> Rate,
) -> Result<Rho> {
    let tol = Tolerances::default();
    let residual = |r: f64| {
        Rho::new(r)
            .map(|rho| (lhs(sym, rho).get() - f2(sym, rho).get()).abs())
            .unwrap_or(f64::INFINITY)
    };
    if residual(root) <= tol.tol_val() {
        return Rho::new(root);
    }
    // cancellation guard: fall back to bisection against f2, which has a
    // guaranteed sign change over the unit interval in this regime
    let f = |rho: Rho| lhs(sym, rho);
    let g = |rho: Rho| f2(sym, rho);
    find_crossing(&f, &g, Interval::new(0.0, 1.0)?, tol)
}

/// Crossing of `f1` and `f2`: the unique positive root of
/// `2^(2 r0) p rho^2 + 2 p rho + 1 + 2p - 2^(2 r0) (1 + p) = 0`.
/// Defined only in the nontrivial regime.
pub fn rho_bar1(sym: SymmetricParams) -> Result<Rho> {
    require_nontrivial(sym, "rho_bar1")?;
    let a4 = (2.0f64).powf(2.0 * sym.r0());
    let p = sym.p();
    let root = positive_quadratic_root(a4 * p, 2.0 * p, 1.0 + 2.0 * p - a4 * (1.0 + p));
    refined_root(sym, root, &f1)
}

/// Crossing of `f3` and `f2`: the unique positive root of
/// `2^(4 r0) rho^2 + 2 p rho + 1 + 2p - 2^(4 r0) = 0`. Defined only in the
/// nontrivial regime; determines the capacity when the meeting conditions
/// hold.
pub fn rho_bar2(sym: SymmetricParams) -> Result<Rho> {
    require_nontrivial(sym, "rho_bar2")?;
    let a16 = (2.0f64).powf(4.0 * sym.r0());
    let p = sym.p();
    let root = positive_quadratic_root(a16, 2.0 * p, 1.0 + 2.0 * p - a16);
    refined_root(sym, root, &f3)
}

/// The power at which all three landmark correlations coincide
/// (`rho_star = rho_bar1 = rho_bar2 = 1 - 2^(-2 r0)`), making the bounds
/// meet: `p = 2^(2 r0) (2^(2 r0) - 1) / (2^(2 r0 + 1) - 1)`.
pub fn matched_power(r0: f64) -> Result<f64> {
    if !r0.is_finite() || r0 <= 0.0 {
        return Err(Error::domain(format!(
            "matched power needs r0 finite and positive, got {r0}"
        )));
    }
    let a = (2.0f64).powf(2.0 * r0);
    let p = a * (a - 1.0) / (2.0 * a - 1.0);
    if !p.is_finite() {
        return Err(Error::domain(format!(
            "matched power overflows for r0 = {r0}"
        )));
    }
    Ok(p)
}

/// Correlation above which `f1 >= f3`, namely
/// `sqrt(1 - 1 / (2^(2 r0) - p))`; `None` when `2^(2 r0) - p <= 1` and the
/// crossing does not exist in `[0, 1)`. Diagnostic only.
pub fn f1_f3_crossing(sym: SymmetricParams) -> Option<Rho> {
    let d = (2.0f64).powf(2.0 * sym.r0()) - sym.p();
    if d <= 1.0 {
        return None;
    }
    Some(Rho::new((1.0 - 1.0 / d).sqrt()).expect("crossing lies in [0, 1)"))
}

/// `2 (f1 - r0) - (f2 + f3 - 2 r0)` at the given correlation.
///
/// Nonnegative for every valid input; `+inf` at rho = 1 where `f3`
/// diverges, which is why this returns a bare `f64` rather than a
/// [`Rate`]. The sign encodes that imposing correlation can never make the
/// relay cuts together carry less than the MAC plus the penalized link sum.
pub fn mutual_inequality_gap(sym: SymmetricParams, rho: Rho) -> f64 {
    let r0 = sym.r0();
    2.0 * (f1(sym, rho).get() - r0) - (f2(sym, rho).get() + f3(sym, rho).get() - 2.0 * r0)
}

// --- capacity check -------------------------------------------------------

/// The three meeting conditions and the landmark values behind them.
#[derive(Debug, Clone, Serialize)]
pub struct MeetingConditions {
    pub rho_bar1: Rho,
    pub rho_bar2: Rho,
    pub rho_star: Rho,
    pub rho_circ: Rho,
    /// `f1` evaluated at `rho_star`.
    pub f1_at_rho_star: Rate,
    /// `f3` evaluated at `rho_bar2`; the capacity when all conditions hold.
    pub f3_at_rho_bar2: Rate,
    /// The links can fund the meeting correlation: `rho_circ >= rho_bar2`.
    pub cond1: bool,
    /// The crossing lies inside the penalized segment:
    /// `rho_star >= rho_bar1`.
    pub cond2: bool,
    /// The plain segment cannot beat the meeting value:
    /// `f1(rho_star) <= f3(rho_bar2)`.
    pub cond3: bool,
}

impl MeetingConditions {
    pub fn all_hold(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3
    }
}

/// Outcome of a symmetric capacity check: the regime, the meeting
/// conditions when they apply, the capacity when it is known, and the
/// bound bracket either way.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub regime: Regime,
    /// Present only in the nontrivial regime.
    pub conditions: Option<MeetingConditions>,
    /// Present in both bottleneck regimes and, in the nontrivial regime,
    /// exactly when all three meeting conditions hold.
    pub capacity: Option<Rate>,
    pub lower: BoundResult,
    pub upper: BoundResult,
}

/// Evaluates the regime, the meeting conditions, and the bound bracket for
/// a symmetric instance.
///
/// In the bottleneck regimes the capacity is reported directly: the
/// source-limited value `2 r0` is also what the bounds produce, while the
/// MAC-limited value `(1/2) log2(1 + 4p)` is achieved by shipping the full
/// message over both links and beamforming coherently, so it is exact even
/// though the correlated-coding lower bound stalls slightly below it (its
/// correlation is capped at `rho_circ < 1`). In the nontrivial regime the
/// capacity is present exactly when the three meeting conditions hold, and
/// equals `f3(rho_bar2)` there; at condition boundaries the bracket gap
/// crosses the tolerance together with the conditions, floating-point dust
/// aside.
pub fn capacity_check(sym: SymmetricParams, tol: Tolerances) -> Result<ConditionReport> {
    let general = sym.to_general();
    let lower = lower_bound(general, tol)?;
    let upper = upper_bound(general, tol)?;
    let regime = classify(sym);

    let (conditions, capacity) = match regime {
        Regime::SourceLimited => (None, Some(Rate::from_valid(2.0 * sym.r0()))),
        Regime::MacLimited => (
            None,
            Some(Rate::from_valid(half_log2_1p(4.0 * sym.p()))),
        ),
        Regime::Nontrivial => {
            let bar1 = rho_bar1(sym)?;
            let bar2 = rho_bar2(sym)?;
            let star = rho_star(sym.p(), sym.p())?;
            let circ = rho_circ(sym.r0(), sym.r0())?;
            let f1_star = f1(sym, star);
            let f3_bar2 = f3(sym, bar2);
            let conds = MeetingConditions {
                rho_bar1: bar1,
                rho_bar2: bar2,
                rho_star: star,
                rho_circ: circ,
                f1_at_rho_star: f1_star,
                f3_at_rho_bar2: f3_bar2,
                cond1: circ >= bar2,
                cond2: star >= bar1,
                cond3: f1_star <= f3_bar2,
            };
            let capacity = conds.all_hold().then_some(f3_bar2);
            (Some(conds), capacity)
        }
    };

    Ok(ConditionReport {
        regime,
        conditions,
        capacity,
        lower,
        upper,
    })
}

// --- tests ----------------------------------------------------------------
