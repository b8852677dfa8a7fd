//! Desk-scale Monte-Carlo simulator of the correlated-codebook scheme.
//!
//! The scheme under test: draw two independent i.i.d. Gaussian codebooks,
//! one per relay; index as messages exactly those codeword pairs whose
//! empirical correlation lands within `delta` of the target `rho`; per
//! trial, send a uniformly chosen indexed pair over `Y = X1 + X2 + U` with
//! unit-variance noise and decode. The number of indexed pairs should
//! concentrate near `2^(n (r1 + r2 - (1/2) log2(1/(1 - rho^2))))`, so the
//! measured `effective_rate` tracks [`predicted_pair_exponent`] as the
//! blocklength grows, and the error rate falls once the effective rate sits
//! safely under the channel's lower bound.
//!
//! Everything is deterministic given the config: codebooks use dedicated
//! RNG streams, and each trial derives its stream from the trial index
//! alone, so results are bit-identical under any thread schedule.

use crate::bounds::rho_circ;
use crate::channel::{correlation_penalty, Rate, Rho};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

// --- configuration --------------------------------------------------------

/// Decoding rule applied per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decoder {
    /// Pick the indexed pair whose sum is closest to the received word in
    /// squared distance: maximum likelihood for this channel. The default.
    MinimumDistance,
    /// Declare the unique indexed pair whose residual noise moments all lie
    /// within `delta` of their design values; error when none or several
    /// qualify. Faithful to the classical random-coding argument but
    /// noticeably weaker at small blocklengths; kept for fidelity
    /// experiments.
    JointTypicality,
}

/// Hard cap on `M1 * M2`, the number of candidate codeword pairs scanned
/// during enumeration.
pub const PAIR_BUDGET: u64 = 1 << 26;

/// Cap on `max(M1, M2) * n`, the per-codebook storage in samples.
const BOOK_ENTRY_BUDGET: u64 = 1 << 27;

/// Redraw limit per codebook row before giving up on the power constraint.
const MAX_REDRAWS: u32 = 1000;

/// RNG stream layout: books use streams 0 and 1, trial `t` uses `2 + t`.
const TRIAL_STREAM_BASE: u64 = 2;

/// A complete, validated simulation setup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    n: usize,
    r1: f64,
    r2: f64,
    p1: f64,
    p2: f64,
    rho: Rho,
    delta: f64,
    trials: u64,
    seed: u64,
    decoder: Decoder,
    /// Internal hook: scales the channel noise, 1.0 in every public path.
    /// A zero value turns the channel noiseless for sanity tests.
    #[serde(skip)]
    noise_scale: f64,
}

impl SimConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        r1: f64,
        r2: f64,
        p1: f64,
        p2: f64,
        rho: Rho,
        delta: f64,
        trials: u64,
        seed: u64,
        decoder: Decoder,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("blocklength n must be positive"));
        }
        for (name, v) in [("r1", r1), ("r2", r2), ("p1", p1), ("p2", p2)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::domain(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::domain(format!(
                "delta must be finite and positive, got {delta}"
            )));
        }
        if trials == 0 {
            return Err(Error::domain("trials must be positive"));
        }
        let cap = rho_circ(r1, r2)?;
        if rho > cap {
            return Err(Error::domain(format!(
                "rho = {} exceeds the correlation the links can fund \
                 (rho_circ = {})",
                rho.get(),
                cap.get()
            )));
        }
        let m1 = codebook_size(n, r1);
        let m2 = codebook_size(n, r2);
        if m1 * m2 > PAIR_BUDGET as f64 {
            return Err(Error::domain(format!(
                "codebook pair count {m1} x {m2} exceeds the enumeration \
                 budget of 2^26; lower n or the link rates"
            )));
        }
        if m1.max(m2) * n as f64 > BOOK_ENTRY_BUDGET as f64 {
            return Err(Error::domain(
                "a single codebook would exceed the storage budget; \
                 lower n or the link rates",
            ));
        }
        Ok(SimConfig {
            n,
            r1,
            r2,
            p1,
            p2,
            rho,
            delta,
            trials,
            seed,
            decoder,
            noise_scale: 1.0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
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

    pub fn rho(&self) -> Rho {
        self.rho
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn decoder(&self) -> Decoder {
        self.decoder
    }

    /// Codebook sizes `(M1, M2)` with `Mk = round(2^(n rk))`.
    pub fn codebook_sizes(&self) -> (usize, usize) {
        (
            codebook_size(self.n, self.r1) as usize,
            codebook_size(self.n, self.r2) as usize,
        )
    }

    #[cfg(test)]
    pub(crate) fn with_noise_scale(mut self, scale: f64) -> Self {
        self.noise_scale = scale;
        self
    }
}

fn codebook_size(n: usize, rate: f64) -> f64 {
    (2.0f64).powf(n as f64 * rate).round()
}

// --- codebooks ------------------------------------------------------------

/// Two per-relay codebooks in row-major storage, plus the powers their rows
/// were drawn to respect.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebooks {
    book1: Vec<f64>,
    book2: Vec<f64>,
    n: usize,
    m1: usize,
    m2: usize,
    p1: f64,
    p2: f64,
}

impl Codebooks {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn m2(&self) -> usize {
        self.m2
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn row1(&self, i: usize) -> &[f64] {
        &self.book1[i * self.n..(i + 1) * self.n]
    }

    pub fn row2(&self, j: usize) -> &[f64] {
        &self.book2[j * self.n..(j + 1) * self.n]
    }
}

/// Draws both codebooks for `config`, deterministically from its seed.
///
/// Rows are i.i.d. zero-mean Gaussian with per-symbol variance
/// `(1 - delta) p_k`; a row whose empirical average power exceeds `p_k` is
/// redrawn, so every stored row meets the hard power constraint. The
/// back-off plus redraw is what makes the constraint satisfiable at finite
/// blocklength.
pub fn generate_codebooks(config: &SimConfig) -> Result<Codebooks> {
    let (m1, m2) = config.codebook_sizes();
    Ok(Codebooks {
        book1: fill_book(config, 0, m1, config.p1)?,
        book2: fill_book(config, 1, m2, config.p2)?,
        n: config.n,
        m1,
        m2,
        p1: config.p1,
        p2: config.p2,
    })
}

fn fill_book(config: &SimConfig, stream: u64, rows: usize, power: f64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);
    let sd = ((1.0 - config.delta).max(0.0) * power).sqrt();
    let n = config.n;
    let limit = power * n as f64;
    let mut book = vec![0.0; rows * n];
    for r in 0..rows {
        let row = &mut book[r * n..(r + 1) * n];
        let mut attempts = 0u32;
        loop {
            let mut sum_sq = 0.0;
            for x in row.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                *x = sd * z;
                sum_sq += *x * *x;
            }
            if sum_sq <= limit {
                break;
            }
            attempts += 1;
            if attempts > MAX_REDRAWS {
                return Err(Error::PowerInfeasible {
                    book: stream as u8 + 1,
                    row: r,
                    attempts,
                });
            }
        }
    }
    Ok(book)
}

// --- pair enumeration -----------------------------------------------------

/// The message set: every codeword pair whose empirical correlation lies
/// within `delta` of the target, in lexicographic `(i, j)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct PairIndex {
    pairs: Vec<(u32, u32)>,
    effective_rate: Rate,
    mean_correlation: f64,
}

impl PairIndex {
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `log2(count) / n`: the rate the indexed message set realizes.
    pub fn effective_rate(&self) -> Rate {
        self.effective_rate
    }

    /// Mean empirical correlation over the indexed pairs; lands within
    /// `delta` of the target by construction of the predicate.
    pub fn mean_correlation(&self) -> f64 {
        self.mean_correlation
    }
}

/// Scans all `M1 * M2` codeword pairs and indexes those whose empirical
/// correlation `(sum x1 x2 / n) / sqrt(p1 p2)` lies within `delta` of
/// `rho`. Normalization uses the nominal powers, matching the design
/// statistics rather than per-row empirical ones; with a zero nominal
/// power the empirical correlation is defined as zero.
pub fn enumerate_typical_pairs(books: &Codebooks, rho: Rho, delta: f64) -> Result<PairIndex> {
    let n = books.n as f64;
    let scale = (books.p1 * books.p2).sqrt() * n;
    let target = rho.get();

    // parallel over book-1 rows; per-row hit lists concatenate back in row
    // order, so the result is independent of the thread schedule
    let per_row: Vec<Vec<(u32, u32, f64)>> = (0..books.m1)
        .into_par_iter()
        .map(|i| {
            let x1 = books.row1(i);
            let mut hits = Vec::new();
            for j in 0..books.m2 {
                let dot: f64 = x1
                    .iter()
                    .zip(books.row2(j))
                    .map(|(a, b)| a * b)
                    .sum();
                let emp = if scale == 0.0 { 0.0 } else { dot / scale };
                if (emp - target).abs() <= delta {
                    hits.push((i as u32, j as u32, emp));
                }
            }
            hits
        })
        .collect();

    let mut pairs = Vec::new();
    let mut sum_emp = 0.0;
    for hits in per_row {
        for (i, j, emp) in hits {
            pairs.push((i, j));
            sum_emp += emp;
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptyPairSet);
    }
    let count = pairs.len();
    Ok(PairIndex {
        pairs,
        effective_rate: Rate::from_valid((count as f64).log2() / n),
        mean_correlation: sum_emp / count as f64,
    })
}

/// The rate the scheme aims for: `r1 + r2 - (1/2) log2(1/(1 - rho^2))`,
/// the exponent of the expected typical-pair count. Rejects correlations
/// beyond what the links can fund.
pub fn predicted_pair_exponent(r1: f64, r2: f64, rho: Rho) -> Result<Rate> {
    let cap = rho_circ(r1, r2)?;
    if rho > cap {
        return Err(Error::domain(format!(
            "rho = {} exceeds the correlation the links can fund \
             (rho_circ = {})",
            rho.get(),
            cap.get()
        )));
    }
    Ok(Rate::from_valid(r1 + r2 - correlation_penalty(rho)))
}

// --- trials ---------------------------------------------------------------

/// Aggregate outcome of a batch of trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub trials: u64,
    pub errors: u64,
    pub error_rate: f64,
    /// Wilson 95% score interval for the error probability; always
    /// contains `error_rate`.
    pub wilson_95_ci: (f64, f64),
    pub pair_count: usize,
    pub effective_rate: Rate,
    pub mean_pair_correlation: f64,
}

/// Runs the full pipeline: codebooks, pair enumeration, then `trials`
/// independent transmissions with per-trial RNG streams derived from
/// `(seed, trial index)` alone, so the result does not depend on the
/// thread schedule.
pub fn run_trials(config: &SimConfig) -> Result<SimResult> {
    let books = generate_codebooks(config)?;
    let pairs = enumerate_typical_pairs(&books, config.rho, config.delta)?;

    let errors: u64 = (0..config.trials)
        .into_par_iter()
        .map(|t| u64::from(run_one_trial(config, &books, &pairs, t)))
        .sum();

    let error_rate = errors as f64 / config.trials as f64;
    Ok(SimResult {
        trials: config.trials,
        errors,
        error_rate,
        wilson_95_ci: wilson_95(errors, config.trials),
        pair_count: pairs.len(),
        effective_rate: pairs.effective_rate(),
        mean_pair_correlation: pairs.mean_correlation(),
    })
}

/// One transmission; returns true on a decoding error.
fn run_one_trial(config: &SimConfig, books: &Codebooks, pairs: &PairIndex, t: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(TRIAL_STREAM_BASE + t);

    let w = rng.random_range(0..pairs.len());
    let (i, j) = pairs.pairs()[w];
    let x1 = books.row1(i as usize);
    let x2 = books.row2(j as usize);

    // hard power constraint must hold for every transmitted codeword
    let n = config.n as f64;
    debug_assert!(x1.iter().map(|v| v * v).sum::<f64>() <= config.p1 * n + 1e-9);
    assert!(
        x1.iter().map(|v| v * v).sum::<f64>() <= config.p1 * n + 1e-9
            && x2.iter().map(|v| v * v).sum::<f64>() <= config.p2 * n + 1e-9,
        "transmitted codeword violates the power constraint"
    );

    let y: Vec<f64> = x1
        .iter()
        .zip(x2)
        .map(|(a, b)| {
            let z: f64 = rng.sample(StandardNormal);
            a + b + config.noise_scale * z
        })
        .collect();

    let decoded = match config.decoder {
        Decoder::MinimumDistance => decode_min_distance(books, pairs, &y),
        Decoder::JointTypicality => decode_joint_typicality(config, books, pairs, &y),
    };
    decoded != Some(w)
}

fn decode_min_distance(books: &Codebooks, pairs: &PairIndex, y: &[f64]) -> Option<usize> {
    let mut best = f64::INFINITY;
    let mut best_idx = None;
    for (idx, &(i, j)) in pairs.pairs().iter().enumerate() {
        let x1 = books.row1(i as usize);
        let x2 = books.row2(j as usize);
        let mut dist = 0.0;
        for ((a, b), yv) in x1.iter().zip(x2).zip(y) {
            let d = yv - a - b;
            dist += d * d;
        }
        // strict inequality keeps the lexicographically first pair on ties
        if dist < best {
            best = dist;
            best_idx = Some(idx);
        }
    }
    best_idx
}

fn decode_joint_typicality(
    config: &SimConfig,
    books: &Codebooks,
    pairs: &PairIndex,
    y: &[f64],
) -> Option<usize> {
    let n = config.n as f64;
    let noise_var = config.noise_scale * config.noise_scale;
    let delta = config.delta;
    let mut found = None;
    for (idx, &(i, j)) in pairs.pairs().iter().enumerate() {
        let x1 = books.row1(i as usize);
        let x2 = books.row2(j as usize);
        let mut s_uu = 0.0;
        let mut s_1u = 0.0;
        let mut s_2u = 0.0;
        for ((a, b), yv) in x1.iter().zip(x2).zip(y) {
            let u = yv - a - b;
            s_uu += u * u;
            s_1u += a * u;
            s_2u += b * u;
        }
        let typical = (s_uu / n - noise_var).abs() <= delta * noise_var.max(1.0)
            && (s_1u / n).abs() <= delta
            && (s_2u / n).abs() <= delta;
        if typical {
            if found.is_some() {
                // ambiguous: several pairs look typical
                return None;
            }
            found = Some(idx);
        }
    }
    found
}

fn wilson_95(errors: u64, trials: u64) -> (f64, f64) {
    const Z: f64 = 1.959963984540054;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (Z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // at p = 0 (resp. 1) the lower (upper) limit is exactly the endpoint,
    // but center and half cancel only in exact arithmetic
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

// --- tests ----------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rho(v: f64) -> Rho {
        Rho::new(v).unwrap()
    }

    fn config(
        n: usize,
        r: f64,
        p: f64,
        rho_v: f64,
        delta: f64,
        trials: u64,
        seed: u64,
    ) -> SimConfig {
        SimConfig::new(
            n,
            r,
            r,
            p,
            p,
            rho(rho_v),
            delta,
            trials,
            seed,
            Decoder::MinimumDistance,
        )
        .unwrap()
    }

    #[test]
    fn codebook_sizes_round_the_exponential() {
        // n r = 4 exactly
        assert_eq!(config(8, 0.5, 3.0, 0.0, 0.5, 1, 7).codebook_sizes(), (16, 16));
        // 12 * 0.36 = 4.32, 2^4.32 = 19.97
        assert_eq!(config(12, 0.36, 3.0, 0.0, 0.5, 1, 7).codebook_sizes(), (20, 20));
        // 36 * 0.36 = 12.96, 2^12.96 = 7967.99
        assert_eq!(
            config(36, 0.36, 3.0, 0.0, 0.5, 1, 7).codebook_sizes(),
            (7968, 7968)
        );
    }

    #[test]
    fn config_rejects_invalid_setups() {
        let ok = |n, r, rho_v, trials| {
            SimConfig::new(n, r, r, 3.0, 3.0, rho(rho_v), 0.1, trials, 0, Decoder::MinimumDistance)
        };
        assert!(ok(0, 0.5, 0.0, 10).is_err());
        assert!(ok(8, 0.5, 0.0, 0).is_err());
        // pair budget: M1 = M2 = 2^15 makes 2^30 pairs
        assert!(ok(30, 0.5, 0.0, 10).is_err());
        // correlation beyond what the links fund: rho_circ(0.1) = 0.36
        assert!(ok(8, 0.1, 0.9, 10).is_err());
        assert!(SimConfig::new(
            8, 0.5, 0.5, 3.0, 3.0, rho(0.0), 0.0, 10, 0, Decoder::MinimumDistance
        )
        .is_err());
        assert!(SimConfig::new(
            8, -0.5, 0.5, 3.0, 3.0, rho(0.0), 0.1, 10, 0, Decoder::MinimumDistance
        )
        .is_err());
    }

    #[test]
    fn codebooks_are_deterministic_and_power_legal() {
        let cfg = config(16, 0.25, 3.0, 0.0, 0.2, 1, 42);
        let a = generate_codebooks(&cfg).unwrap();
        let b = generate_codebooks(&cfg).unwrap();
        assert_eq!(a, b);
        for i in 0..a.m1() {
            let p: f64 = a.row1(i).iter().map(|v| v * v).sum::<f64>() / 16.0;
            assert!(p <= 3.0, "row {i} power {p}");
        }
        for j in 0..a.m2() {
            let p: f64 = a.row2(j).iter().map(|v| v * v).sum::<f64>() / 16.0;
            assert!(p <= 3.0, "row {j} power {p}");
        }
    }

    #[test]
    fn mean_row_power_concentrates_below_the_cap() {
        // variance back-off (1 - 0.05) * 3 = 2.85 with the cap at 3
        let cfg = config(100, 0.05, 3.0, 0.0, 0.05, 1, 2024);
        let books = generate_codebooks(&cfg).unwrap();
        let mut total = 0.0;
        for i in 0..books.m1() {
            total += books.row1(i).iter().map(|v| v * v).sum::<f64>() / 100.0;
        }
        let mean = total / books.m1() as f64;
        assert!((2.6..=3.0).contains(&mean), "mean row power {mean}");
    }

    #[test]
    fn trivial_predicate_keeps_every_pair() {
        let cfg = config(8, 0.25, 3.0, 0.0, 0.5, 1, 5);
        let books = generate_codebooks(&cfg).unwrap();
        // delta = 1 admits every correlation value
        let pairs = enumerate_typical_pairs(&books, rho(0.0), 1.0).unwrap();
        assert_eq!(pairs.len(), 16);
        assert_abs_diff_eq!(pairs.effective_rate().get(), 0.5, epsilon = 1e-15);
        // lexicographic order
        assert_eq!(pairs.pairs()[0], (0, 0));
        assert_eq!(pairs.pairs()[1], (0, 1));
        assert_eq!(pairs.pairs()[15], (3, 3));
    }

    #[test]
    fn single_pair_books_either_index_it_or_fail() {
        let cfg = SimConfig::new(
            16,
            0.0,
            0.0,
            3.0,
            3.0,
            rho(0.0),
            0.5,
            1,
            11,
            Decoder::MinimumDistance,
        )
        .unwrap();
        let books = generate_codebooks(&cfg).unwrap();
        assert_eq!((books.m1(), books.m2()), (1, 1));
        match enumerate_typical_pairs(&books, rho(0.0), 0.5) {
            Ok(pairs) => {
                assert_eq!(pairs.pairs(), &[(0, 0)]);
                assert!(pairs.mean_correlation().abs() <= 0.5);
            }
            Err(Error::EmptyPairSet) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn tight_predicate_reports_the_empty_set() {
        let cfg = config(8, 0.25, 3.0, 0.0, 0.5, 1, 5);
        let books = generate_codebooks(&cfg).unwrap();
        // no pair of independent codewords has empirical correlation
        // within 1e-12 of 0.9 at n = 8
        let err = enumerate_typical_pairs(&books, rho(0.9), 1e-12);
        assert!(matches!(err, Err(Error::EmptyPairSet)));
    }

    #[test]
    fn mean_pair_correlation_stays_within_delta() {
        let cfg = config(24, 1.0 / 3.0, 3.0, 0.3, 0.1, 1, 99);
        let books = generate_codebooks(&cfg).unwrap();
        let pairs = enumerate_typical_pairs(&books, rho(0.3), 0.1).unwrap();
        assert!((pairs.mean_correlation() - 0.3).abs() <= 0.1);
    }

    #[test]
    fn predicted_pair_exponent_closed_forms() {
        assert_abs_diff_eq!(
            predicted_pair_exponent(1.2, 1.2, rho(0.7643)).unwrap().get(),
            1.7670597800171784,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            predicted_pair_exponent(0.7, 0.4, Rho::ZERO).unwrap().get(),
            1.1,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            predicted_pair_exponent(0.5, 0.5, rho(std::f64::consts::FRAC_1_SQRT_2))
                .unwrap()
                .get(),
            0.5,
            epsilon = 1e-12
        );
        // rho_circ(0.5) = 1/sqrt(2): anything above is inadmissible
        assert!(predicted_pair_exponent(0.5, 0.5, rho(0.8)).is_err());
    }

    #[test]
    fn noiseless_channel_decodes_perfectly() {
        let cfg = config(8, 0.25, 3.0, 0.0, 0.5, 64, 31).with_noise_scale(0.0);
        let result = run_trials(&cfg).unwrap();
        assert_eq!(result.errors, 0);
        assert_eq!(result.error_rate, 0.0);
    }

    #[test]
    fn run_is_deterministic() {
        let cfg = config(12, 1.0 / 3.0, 2.0, 0.2, 0.2, 200, 77);
        let a = run_trials(&cfg).unwrap();
        let b = run_trials(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wilson_interval_contains_the_point_estimate() {
        for (e, t) in [(0u64, 100u64), (1, 100), (50, 100), (100, 100), (3, 2000)] {
            let (lo, hi) = wilson_95(e, t);
            let p = e as f64 / t as f64;
            assert!(lo <= p && p <= hi, "({e}, {t}) gave [{lo}, {hi}]");
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }

    #[test]
    fn joint_typicality_decoder_runs() {
        let cfg = SimConfig::new(
            16,
            0.25,
            0.25,
            3.0,
            3.0,
            rho(0.2),
            0.25,
            100,
            13,
            Decoder::JointTypicality,
        )
        .unwrap();
        let result = run_trials(&cfg).unwrap();
        assert!(result.error_rate <= 1.0);
        assert_eq!(result.trials, 100);
    }
}
