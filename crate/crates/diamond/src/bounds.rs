//! Capacity bounds for general, possibly asymmetric, parameters.
//!
//! Three bounds share one family of rate terms, each a function of the
//! codebook correlation rho in `[0, 1]`:
//!
//! ```text
//! B1  = r1 + (1/2) log2(1 + (1 - rho^2) p2)
//! B2  = r2 + (1/2) log2(1 + (1 - rho^2) p1)
//! B3  = (1/2) log2(1 + p1 + p2 + 2 rho sqrt(p1 p2))
//! B4  = r1 + r2 - (1/2) log2(1 / (1 - rho^2))
//! B4' = r1 + r2
//! ```
//!
//! B1 and B2 cap what one link plus the other relay's leftover can carry,
//! B3 is the coherent sum-power MAC rate, B4 discounts the link sum by the
//! rate spent imposing correlation, and B4' is the undiscounted link sum.
//!
//! - The cut-set bound maximizes `min(B1, B2, B3, B4')` over `[0, 1]`.
//! - The tightened upper bound replaces B4' by B4 on `[0, rho_star]`, keeps
//!   B4' on `[rho_star, 1]`, and takes the larger segment maximum;
//!   `rho_star` is the root of `sqrt(p1 p2) (1/rho - rho) = 1`.
//! - The achievable lower bound maximizes `min(B1, B2, B3, B4)` over
//!   `[0, rho_circ]`, the largest correlation the weaker link can fund.
//!
//! B1, B2, B4 fall and B3 climbs as rho grows, which is exactly the
//! min-of-monotone structure [`scalar_opt`](crate::scalar_opt) certifies
//! and exploits.

use crate::channel::{
    correlation_penalty, half_log2_1p, one_minus_rho_sq, ChannelParams, Rate, Rho,
};
use crate::error::{Error, Result};
use crate::scalar_opt::{maximize_min, Interval};
use serde::Serialize;
use std::fmt;

pub use crate::scalar_opt::Tolerances;

// --- landmark correlations ------------------------------------------------

/// Correlation at which the auxiliary noise variance
/// `n(rho) = sqrt(p1 p2) (1/rho - rho) - 1` vanishes; the tightened upper
/// bound switches from the penalized link-sum term B4 to the plain B4'
/// there.
///
/// Computed as `2q / (1 + sqrt(1 + 4 q^2))` with `q = sqrt(p1 p2)`, which
/// is algebraically `sqrt(1 + 1/(4 q^2)) - 1/(2q)` but free of cancellation
/// for small `q`. The result always lies in `(0, 1)`.
pub fn rho_star(p1: f64, p2: f64) -> Result<Rho> {
    for (name, v) in [("p1", p1), ("p2", p2)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::domain(format!(
                "{name} must be finite and nonnegative, got {v}"
            )));
        }
    }
    let q = (p1 * p2).sqrt();
    if q == 0.0 {
        return Err(Error::domain(
            "rho_star is undefined when p1 * p2 = 0 (correlation is vacuous)",
        ));
    }
    Rho::new(2.0 * q / (1.0 + (1.0 + 4.0 * q * q).sqrt()))
}

/// Auxiliary noise variance `sqrt(p1 p2) (1/rho - rho) - 1`, defined for
/// `0 < rho <= rho_star`. Vanishes at `rho_star` by construction; exposed
/// for validation and diagnostics.
///
/// Values below `-1e-9` mean rho exceeds `rho_star` and are rejected;
/// tiny negative values inside that slack (rounding at `rho_star` itself)
/// are returned as is.
pub fn noise_variance_n(p1: f64, p2: f64, rho: Rho) -> Result<f64> {
    let q = (p1 * p2).sqrt();
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::domain(
            "noise_variance_n requires p1 * p2 > 0 and finite",
        ));
    }
    let r = rho.get();
    if r == 0.0 {
        return Err(Error::domain(
            "noise_variance_n diverges at rho = 0 (division by zero)",
        ));
    }
    // (1 - rho^2)/rho keeps precision where 1/rho - rho cancels near rho = 1
    let v = q * one_minus_rho_sq(r) / r - 1.0;
    if v < -1e-9 {
        return Err(Error::domain(format!(
            "rho = {r} exceeds rho_star: auxiliary variance {v} is negative"
        )));
    }
    Ok(v)
}

/// Largest codebook correlation the weaker source link can fund:
/// `sqrt(1 - 2^(-2 min(r1, r2)))`.
///
/// Describing a correlated pair costs `(1/2) log2(1/(1 - rho^2))` bits per
/// use on each link, so `min(r1, r2)` caps rho at this value.
pub fn rho_circ(r1: f64, r2: f64) -> Result<Rho> {
    for (name, v) in [("r1", r1), ("r2", r2)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::domain(format!(
                "{name} must be finite and nonnegative, got {v}"
            )));
        }
    }
    let m = r1.min(r2);
    // 1 - 2^(-2m) through exp_m1 keeps precision for small m
    let one_minus = -(-2.0 * m * std::f64::consts::LN_2).exp_m1();
    Rho::new(one_minus.max(0.0).sqrt())
}

// --- objectives -----------------------------------------------------------

fn term_b1(params: ChannelParams, rho: f64) -> f64 {
    params.r1() + half_log2_1p(one_minus_rho_sq(rho) * params.p2())
}

fn term_b2(params: ChannelParams, rho: f64) -> f64 {
    params.r2() + half_log2_1p(one_minus_rho_sq(rho) * params.p1())
}

fn term_b3(params: ChannelParams, rho: f64) -> f64 {
    let cross = 2.0 * rho * (params.p1() * params.p2()).sqrt();
    half_log2_1p(params.p1() + params.p2() + cross)
}

fn term_b4(params: ChannelParams, rho: Rho) -> f64 {
    params.r1() + params.r2() - correlation_penalty(rho)
}

/// `min(B1, B2, B3, B4)` at the given correlation; `-inf` at rho = 1 where
/// the penalty in B4 diverges.
pub fn objective_t1(params: ChannelParams, rho: Rho) -> Rate {
    let r = rho.get();
    let v = term_b1(params, r)
        .min(term_b2(params, r))
        .min(term_b3(params, r))
        .min(term_b4(params, rho));
    Rate::from_valid(v)
}

/// `min(B1, B2, B3, B4')` at the given correlation; finite on all of
/// `[0, 1]`.
pub fn objective_t2(params: ChannelParams, rho: Rho) -> Rate {
    let r = rho.get();
    let v = term_b1(params, r)
        .min(term_b2(params, r))
        .min(term_b3(params, r))
        .min(params.r1() + params.r2());
    Rate::from_valid(v)
}

// --- results --------------------------------------------------------------

/// Which rate term attains the min at the reported argmax.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Constraint {
    /// B1: link 1 plus relay 2's contribution.
    RelayLink1,
    /// B2: link 2 plus relay 1's contribution.
    RelayLink2,
    /// B3: coherent sum-power MAC rate.
    SumPower,
    /// B4: link sum less the correlation penalty.
    CorrelatedLinkSum,
    /// B4': plain link sum.
    PlainLinkSum,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Constraint::RelayLink1 => "B1",
            Constraint::RelayLink2 => "B2",
            Constraint::SumPower => "B3",
            Constraint::CorrelatedLinkSum => "B4",
            Constraint::PlainLinkSum => "B4'",
        };
        f.write_str(s)
    }
}

/// Which correlation segment produced the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `[0, rho_star]` with the penalized link-sum term B4.
    T1Segment,
    /// `[rho_star, 1]` with the plain link-sum term B4'.
    T2Segment,
    /// `[0, 1]` with B4' (cut-set bound, and the degenerate upper bound).
    FullRange,
    /// `[0, rho_circ]` with B4 (achievable lower bound).
    LowerRange,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Branch::T1Segment => "T1-segment",
            Branch::T2Segment => "T2-segment",
            Branch::FullRange => "full-range",
            Branch::LowerRange => "lower-range",
        };
        f.write_str(s)
    }
}

/// Outcome of one bound computation.
#[derive(Debug, Clone, Serialize)]
pub struct BoundResult {
    /// Bound value in bits per channel use; always a value the objective
    /// actually attains at `argmax_rho`.
    pub value: Rate,
    /// Correlation at which the reported value was attained.
    pub argmax_rho: Rho,
    /// Terms within `10 * tol_val` of the min at `argmax_rho`; never empty.
    pub binding: Vec<Constraint>,
    /// Segment that produced the maximum.
    pub branch: Branch,
}

/// Multiple of `tol_val` within which a term counts as binding.
const BINDING_SLACK_FACTOR: f64 = 10.0;

fn binding_set(
    params: ChannelParams,
    rho: Rho,
    value: f64,
    with_penalty: bool,
    tol: Tolerances,
) -> Vec<Constraint> {
    let r = rho.get();
    let slack = BINDING_SLACK_FACTOR * tol.tol_val();
    let last = if with_penalty {
        (Constraint::CorrelatedLinkSum, term_b4(params, rho))
    } else {
        (Constraint::PlainLinkSum, params.r1() + params.r2())
    };
    let terms = [
        (Constraint::RelayLink1, term_b1(params, r)),
        (Constraint::RelayLink2, term_b2(params, r)),
        (Constraint::SumPower, term_b3(params, r)),
        last,
    ];
    let binding: Vec<Constraint> = terms
        .iter()
        .filter(|(_, t)| *t <= value + slack)
        .map(|(c, _)| *c)
        .collect();
    debug_assert!(!binding.is_empty());
    binding
}

fn maximize_t1(
    params: ChannelParams,
    interval: Interval,
    tol: Tolerances,
) -> Result<(Rho, Rate)> {
    let b1 = |r: Rho| Rate::from_valid(term_b1(params, r.get()));
    let b2 = |r: Rho| Rate::from_valid(term_b2(params, r.get()));
    let b3 = |r: Rho| Rate::from_valid(term_b3(params, r.get()));
    let b4 = |r: Rho| Rate::from_valid(term_b4(params, r));
    maximize_min(&b3, &[&b1, &b2, &b4], interval, tol)
}

fn maximize_t2(
    params: ChannelParams,
    interval: Interval,
    tol: Tolerances,
) -> Result<(Rho, Rate)> {
    let b1 = |r: Rho| Rate::from_valid(term_b1(params, r.get()));
    let b2 = |r: Rho| Rate::from_valid(term_b2(params, r.get()));
    let b3 = |r: Rho| Rate::from_valid(term_b3(params, r.get()));
    let b4p = |_: Rho| Rate::from_valid(params.r1() + params.r2());
    maximize_min(&b3, &[&b1, &b2, &b4p], interval, tol)
}

// --- the three bounds -----------------------------------------------------

/// Tightened upper bound on the capacity.
///
/// Maximizes the penalized objective over `[0, rho_star]` and the plain one
/// over `[rho_star, 1]`, returning the larger segment maximum (the
/// penalized segment wins ties). With a zero-power relay, `rho_star` is
/// undefined and correlation is vacuous, so the bound falls back to the
/// plain objective over the full range, matching the `p -> 0` limit.
pub fn upper_bound(params: ChannelParams, tol: Tolerances) -> Result<BoundResult> {
    if params.is_degenerate() {
        let (arg, value) = maximize_t2(params, Interval::new(0.0, 1.0)?, tol)?;
        return Ok(BoundResult {
            value,
            argmax_rho: arg,
            binding: binding_set(params, arg, value.get(), false, tol),
            branch: Branch::FullRange,
        });
    }

    let split = rho_star(params.p1(), params.p2())?;
    let (arg1, val1) = maximize_t1(params, Interval::new(0.0, split.get())?, tol)?;
    let (arg2, val2) = maximize_t2(params, Interval::new(split.get(), 1.0)?, tol)?;

    if val1 >= val2 {
        Ok(BoundResult {
            value: val1,
            argmax_rho: arg1,
            binding: binding_set(params, arg1, val1.get(), true, tol),
            branch: Branch::T1Segment,
        })
    } else {
        Ok(BoundResult {
            value: val2,
            argmax_rho: arg2,
            binding: binding_set(params, arg2, val2.get(), false, tol),
            branch: Branch::T2Segment,
        })
    }
}

/// Achievable lower bound on the capacity: the penalized objective
/// maximized over `[0, rho_circ]`, the correlation range the source links
/// can actually fund.
pub fn lower_bound(params: ChannelParams, tol: Tolerances) -> Result<BoundResult> {
    let cap = rho_circ(params.r1(), params.r2())?;
    let (arg, value) = maximize_t1(params, Interval::new(0.0, cap.get())?, tol)?;
    Ok(BoundResult {
        value,
        argmax_rho: arg,
        binding: binding_set(params, arg, value.get(), true, tol),
        branch: Branch::LowerRange,
    })
}

/// Classical cut-set bound: the plain objective maximized over all of
/// `[0, 1]`. Never below the tightened upper bound.
pub fn cut_set_bound(params: ChannelParams, tol: Tolerances) -> Result<BoundResult> {
    let (arg, value) = maximize_t2(params, Interval::new(0.0, 1.0)?, tol)?;
    Ok(BoundResult {
        value,
        argmax_rho: arg,
        binding: binding_set(params, arg, value.get(), false, tol),
        branch: Branch::FullRange,
    })
}

// --- tests ----------------------------------------------------------------
