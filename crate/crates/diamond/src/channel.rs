//! Parameter types and elementary Gaussian rate helpers.
//!
//! The network under study is a two-relay diamond: a source reaches two
//! relays over noiseless links of capacities `r1` and `r2` bits per channel
//! use, and the relays transmit over a Gaussian multiple access channel
//! `Y = X1 + X2 + U` with unit-variance noise. Powers `p1`, `p2` are SNRs
//! relative to that unit noise variance, so no separate noise parameter
//! exists anywhere in the crate. All rates are base-2 logarithms (bits).

use crate::error::{Error, Result};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;

const LN_2: f64 = std::f64::consts::LN_2;

// --- scalar wrappers ------------------------------------------------------

/// Correlation coefficient in `[0, 1]`.
///
/// Values of the optimization variable rho and its derived landmarks all use
/// this type. Construction rejects anything outside the closed unit
/// interval, including NaN, so instances are totally ordered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Rho(f64);

impl Rho {
    pub const ZERO: Rho = Rho(0.0);
    pub const ONE: Rho = Rho(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::domain(format!(
                "correlation {value} lies outside [0, 1]"
            )));
        }
        // normalize -0.0 so the total order below agrees with `==`
        Ok(Rho(value + 0.0))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Eq for Rho {}

impl Ord for Rho {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for Rho {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Rate in bits per channel use.
///
/// May be `-inf`: objective terms that subtract a diverging correlation
/// penalty at rho = 1 evaluate to `-inf`, and a max-min optimizer must be
/// able to order such values below every finite rate. `+inf` and NaN are
/// rejected at construction, which makes the order total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Rate(f64);

impl Rate {
    pub const ZERO: Rate = Rate(0.0);
    pub const NEG_INFINITY: Rate = Rate(f64::NEG_INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value == f64::INFINITY {
            return Err(Error::domain(format!(
                "rate must be finite or -inf, got {value}"
            )));
        }
        Ok(Rate(value + 0.0))
    }

    /// Wraps a value the caller has already proved valid.
    pub(crate) fn from_valid(value: f64) -> Self {
        debug_assert!(!value.is_nan() && value != f64::INFINITY);
        Rate(value + 0.0)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl Eq for Rate {}

impl Ord for Rate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for Rate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

// --- parameter sets -------------------------------------------------------

fn check_nonneg(name: &str, value: f64) -> Result<f64> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::domain(format!(
            "{name} must be finite and nonnegative, got {value}"
        )));
    }
    Ok(value)
}

/// General (possibly asymmetric) network parameters: source link rates and
/// relay powers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    r1: f64,
    r2: f64,
    p1: f64,
    p2: f64,
}

impl ChannelParams {
    pub fn new(r1: f64, r2: f64, p1: f64, p2: f64) -> Result<Self> {
        Ok(ChannelParams {
            r1: check_nonneg("r1", r1)?,
            r2: check_nonneg("r2", r2)?,
            p1: check_nonneg("p1", p1)?,
            p2: check_nonneg("p2", p2)?,
        })
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    /// True when a relay has zero power, in which case the codebook
    /// correlation is vacuous and the landmark correlation `rho_star` is
    /// undefined.
    pub fn is_degenerate(&self) -> bool {
        self.p1 * self.p2 == 0.0
    }
}

/// Symmetric-case parameters: both links at rate `r0`, both relays at power
/// `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricParams {
    r0: f64,
    p: f64,
}

impl SymmetricParams {
    pub fn new(r0: f64, p: f64) -> Result<Self> {
        Ok(SymmetricParams {
            r0: check_nonneg("r0", r0)?,
            p: check_nonneg("p", p)?,
        })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn to_general(self) -> ChannelParams {
        ChannelParams {
            r1: self.r0,
            r2: self.r0,
            p1: self.p,
            p2: self.p,
        }
    }
}

// --- elementary rates -----------------------------------------------------

/// `(1/2) log2(1 + x)` without the domain checks of [`gauss_rate`], for
/// internal call sites whose arguments are nonnegative by construction.
/// Uses `ln_1p` so small SNRs keep full precision.
pub(crate) fn half_log2_1p(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    0.5 * x.ln_1p() / LN_2
}

/// `1 - rho^2` in the factored form `(1 - rho)(1 + rho)`, which stays
/// accurate as rho approaches 1 where the squared form cancels.
pub(crate) fn one_minus_rho_sq(rho: f64) -> f64 {
    (1.0 - rho) * (1.0 + rho)
}

/// Rate of a scalar Gaussian channel at the given SNR: `(1/2) log2(1 + snr)`
/// bits per channel use.
pub fn gauss_rate(snr: f64) -> Result<Rate> {
    if !snr.is_finite() || snr < 0.0 {
        return Err(Error::domain(format!(
            "snr must be finite and nonnegative, got {snr}"
        )));
    }
    Ok(Rate::from_valid(half_log2_1p(snr)))
}

/// Rate cost of imposing correlation `rho` on two codebooks:
/// `(1/2) log2(1 / (1 - rho^2))`.
///
/// Diverges at rho = 1, which is why this returns a bare `f64` rather than a
/// [`Rate`]: callers subtract it from a finite link-rate sum, and that
/// difference (`-inf` at rho = 1) is a valid `Rate`.
pub fn correlation_penalty(rho: Rho) -> f64 {
    let r = rho.get();
    if r < 0.5 {
        // log2(1 - r^2) through ln_1p keeps precision near rho = 0
        -0.5 * (-r * r).ln_1p() / LN_2
    } else {
        -0.5 * one_minus_rho_sq(r).log2()
    }
}

// --- tests ----------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rho_rejects_out_of_range() {
        assert!(Rho::new(-0.001).is_err());
        assert!(Rho::new(1.001).is_err());
        assert!(Rho::new(f64::NAN).is_err());
        assert!(Rho::new(f64::INFINITY).is_err());
        assert!(Rho::new(0.0).is_ok());
        assert!(Rho::new(1.0).is_ok());
    }

    #[test]
    fn rho_is_totally_ordered() {
        let a = Rho::new(0.25).unwrap();
        let b = Rho::new(0.75).unwrap();
        assert!(a < b);
        assert_eq!(Rho::new(-0.0).unwrap(), Rho::ZERO);
    }

    #[test]
    fn rate_rejects_nan_and_plus_infinity() {
        assert!(Rate::new(f64::NAN).is_err());
        assert!(Rate::new(f64::INFINITY).is_err());
        assert!(Rate::new(f64::NEG_INFINITY).is_ok());
        assert!(Rate::new(1.5).is_ok());
    }

    #[test]
    fn rate_orders_neg_infinity_below_finite() {
        let bottom = Rate::NEG_INFINITY;
        let zero = Rate::ZERO;
        let one = Rate::new(1.0).unwrap();
        assert!(bottom < zero);
        assert!(zero < one);
        assert_eq!(bottom.min(one), bottom);
        assert_eq!(Rate::new(-0.0).unwrap(), Rate::ZERO);
    }

    #[test]
    fn params_reject_negative_and_non_finite() {
        assert!(ChannelParams::new(-0.1, 0.0, 1.0, 1.0).is_err());
        assert!(ChannelParams::new(0.1, 0.0, f64::NAN, 1.0).is_err());
        assert!(ChannelParams::new(0.1, 0.2, f64::INFINITY, 1.0).is_err());
        assert!(SymmetricParams::new(0.5, -1.0).is_err());
        assert!(ChannelParams::new(0.0, 0.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn symmetric_converts_to_general() {
        let sym = SymmetricParams::new(1.2, 3.0).unwrap();
        let gen = sym.to_general();
        assert_eq!(gen.r1(), 1.2);
        assert_eq!(gen.r2(), 1.2);
        assert_eq!(gen.p1(), 3.0);
        assert_eq!(gen.p2(), 3.0);
        assert!(!gen.is_degenerate());
        assert!(ChannelParams::new(1.0, 1.0, 0.0, 3.0)
            .unwrap()
            .is_degenerate());
    }

    #[test]
    fn gauss_rate_matches_closed_forms() {
        assert_eq!(gauss_rate(0.0).unwrap().get(), 0.0);
        assert_abs_diff_eq!(gauss_rate(3.0).unwrap().get(), 1.0, epsilon = 1e-15);
        // (1/2) log2(13), the sum-power MAC value at p1 = p2 = 3
        assert_abs_diff_eq!(
            gauss_rate(12.0).unwrap().get(),
            1.8502198590705461,
            epsilon = 1e-14
        );
        assert!(gauss_rate(-0.5).is_err());
        assert!(gauss_rate(f64::INFINITY).is_err());
    }

    #[test]
    fn gauss_rate_is_strictly_increasing_and_concave() {
        let xs: Vec<f64> = (0..200).map(|i| 0.05 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| gauss_rate(x).unwrap().get()).collect();
        for w in ys.windows(2) {
            assert!(w[1] > w[0]);
        }
        for w in ys.windows(3) {
            // second difference must be negative
            assert!(w[2] - 2.0 * w[1] + w[0] < 0.0);
        }
    }

    #[test]
    fn correlation_penalty_matches_closed_forms() {
        assert_eq!(correlation_penalty(Rho::ZERO), 0.0);
        // (1/2) log2(4/3)
        assert_abs_diff_eq!(
            correlation_penalty(Rho::new(0.5).unwrap()),
            0.20751874963942191,
            epsilon = 1e-14
        );
        // rho = 1/sqrt(2) halves the available sum rate by exactly 1/2 bit
        assert_abs_diff_eq!(
            correlation_penalty(Rho::new(std::f64::consts::FRAC_1_SQRT_2).unwrap()),
            0.5,
            epsilon = 1e-14
        );
        assert_eq!(correlation_penalty(Rho::ONE), f64::INFINITY);
    }

    #[test]
    fn correlation_penalty_is_strictly_increasing() {
        let mut prev = -1.0;
        for i in 0..=999 {
            let v = correlation_penalty(Rho::new(i as f64 / 1000.0).unwrap());
            assert!(v > prev, "penalty not increasing at i={i}");
            prev = v;
        }
    }

    #[test]
    fn correlation_penalty_branches_agree_at_the_switch() {
        // the formula switches representation at rho = 0.5
        let below = correlation_penalty(Rho::new(0.5 - 1e-12).unwrap());
        let at = correlation_penalty(Rho::new(0.5).unwrap());
        assert_abs_diff_eq!(below, at, epsilon = 1e-11);
    }
}
