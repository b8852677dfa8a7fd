//! Capacity bounds for the Gaussian multiple access diamond channel.
//!
//! A source reaches two relays over noiseless links of rates `r1` and `r2`;
//! the relays transmit with powers `p1` and `p2` over a Gaussian multiple
//! access channel `Y = X1 + X2 + U` with unit noise. The library computes
//!
//! * an upper bound that augments the cut-set terms with a correlation
//!   cost, optimized over the relay correlation `rho` ([`upper_bound`]),
//! * the matching correlated-coding lower bound ([`lower_bound`]),
//! * the classical cut-set bound ([`cut_set_bound`]),
//! * the exact capacity in the symmetric case whenever the two bounds
//!   provably meet ([`capacity_check`]),
//! * and a small Monte-Carlo simulator of the correlated-codebook scheme
//!   behind the lower bound ([`run_trials`]).
//!
//! All rates are in bits per channel use; powers are linear SNRs against
//! the unit noise floor.
//!
//! ```
//! use diamond::{ChannelParams, Tolerances, lower_bound, upper_bound};
//!
//! let params = ChannelParams::new(1.2, 1.2, 3.0, 3.0).unwrap();
//! let tol = Tolerances::default();
//! let lo = lower_bound(params, tol).unwrap();
//! let hi = upper_bound(params, tol).unwrap();
//! assert!(lo.value <= hi.value);
//! ```

mod bounds;
mod channel;
mod error;
mod scalar_opt;
mod sim;
mod symmetric;

pub use bounds::{
    cut_set_bound, lower_bound, noise_variance_n, objective_t1, objective_t2, rho_circ, rho_star,
    upper_bound, BoundResult, Branch, Constraint,
};
pub use channel::{correlation_penalty, gauss_rate, ChannelParams, Rate, Rho, SymmetricParams};
pub use error::{Error, Result};
pub use scalar_opt::{find_crossing, maximize_min, Interval, Tolerances};
pub use sim::{
    enumerate_typical_pairs, generate_codebooks, predicted_pair_exponent, run_trials, Codebooks,
    Decoder, PairIndex, SimConfig, SimResult, PAIR_BUDGET,
};
pub use symmetric::{
    capacity_check, classify, f1, f2, f3, f1_f3_crossing, matched_power, mutual_inequality_gap,
    rho_bar1, rho_bar2, ConditionReport, MeetingConditions, Regime,
};
