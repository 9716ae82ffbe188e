//! Scalar information-theoretic quantities and closed-form rate bounds.
//!
//! All logarithms are base 2 and all rates are in bits per source symbol.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A Bernoulli source with `P[X = 1] = num / den`.
///
/// The probability is held as a reduced rational so that a plan made on one
/// machine reproduces bit-for-bit on another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SourceModel {
    num: u64,
    den: u64,
}

impl SourceModel {
    pub fn from_ratio(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num >= den {
            return Err(Error::Domain(format!(
                "source probability {num}/{den} must lie strictly between 0 and 1"
            )));
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    /// Nearest rational with denominator at most 2^32, via continued fractions.
    pub fn from_f64(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!("source probability {p} not in (0, 1)")));
        }
        const MAX_DEN: u64 = 1 << 32;
        let (mut h0, mut h1) = (0u64, 1u64);
        let (mut k0, mut k1) = (1u64, 0u64);
        let mut x = p;
        loop {
            let a = x.floor() as u64;
            let Some(h2) = a.checked_mul(h1).and_then(|v| v.checked_add(h0)) else { break };
            let Some(k2) = a.checked_mul(k1).and_then(|v| v.checked_add(k0)) else { break };
            if k2 > MAX_DEN {
                break;
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            let frac = x - a as f64;
            if frac.abs() < 1e-15 || (h1 as f64 / k1 as f64 - p).abs() < 1e-17 {
                break;
            }
            x = 1.0 / frac;
        }
        Self::from_ratio(h1, k1)
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// Probability of a 1.
    pub fn p(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Probability of a 0.
    pub fn q(&self) -> f64 {
        (self.den - self.num) as f64 / self.den as f64
    }

    /// True when 1 is the more probable symbol.
    pub fn ones_likely(&self) -> bool {
        2 * (self.num as u128) > self.den as u128
    }

    /// `min(p, 1 - p)`.
    pub fn min_prob(&self) -> f64 {
        self.p().min(self.q())
    }

    pub fn entropy(&self) -> f64 {
        binary_entropy(self.p())
    }
}

impl fmt::Display for SourceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Parses `"num/den"`.
impl FromStr for SourceModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = s
            .split_once('/')
            .ok_or_else(|| Error::Domain(format!("expected a rational num/den, got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Error::Domain(format!("bad integer {t:?} in {s:?}: {e}")))
        };
        Self::from_ratio(parse(n)?, parse(d)?)
    }
}

fn xlog2(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `h(q) = -q log q - (1-q) log(1-q)` with `0 log 0 = 0`.
pub fn binary_entropy(q: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&q), "entropy argument {q} outside [0, 1]");
    -(xlog2(q) + xlog2(1.0 - q))
}

/// `D(Bern(q) || Bern(p))` in bits.
pub fn kl_divergence(q: f64, p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&q) && p > 0.0 && p < 1.0);
    let term = |a: f64, b: f64| if a <= 0.0 { 0.0 } else { a * (a / b).log2() };
    (term(q, p) + term(1.0 - q, 1.0 - p)).max(0.0)
}

/// Absolute tolerance on `q*` for the error-exponent bisection.
pub const EXPONENT_BISECTION_TOL: f64 = 1e-10;

/// Minimum of `D(Q || P)` over binary `Q` with `H(Q) >= r`.
///
/// The minimizer sits on the level set `h(q) = r` between `p` and 1/2, so a
/// bisection on that interval finds it. Zero whenever `r <= h(p)`.
pub fn error_exponent(r: f64, model: &SourceModel) -> f64 {
    let p = model.min_prob();
    if r <= binary_entropy(p) {
        return 0.0;
    }
    if r >= 1.0 {
        return kl_divergence(0.5, p);
    }
    let (mut lo, mut hi) = (p, 0.5);
    while hi - lo > EXPONENT_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // hi is always feasible.
    kl_divergence(hi, p)
}

/// Binary rate-distortion function under Hamming distortion.
pub fn rate_distortion(model: &SourceModel, d: f64) -> f64 {
    if d >= model.min_prob() {
        0.0
    } else {
        (model.entropy() - binary_entropy(d.max(0.0))).max(0.0)
    }
}

/// Coefficient on `log t / t` used by [`ldlsc_rate_bound`].
pub const LDLSC_OVERHEAD_COEFFICIENT: f64 = 2.0;

/// Achievable lossy rate with locality `t`: `R(d) + 2 log t / t`.
pub fn ldlsc_rate_bound(model: &SourceModel, d: f64, t: f64) -> f64 {
    ldlsc_rate_bound_with(model, d, t, LDLSC_OVERHEAD_COEFFICIENT)
}

/// `R(d) + c · log t / t` for an explicit overhead coefficient `c`.
pub fn ldlsc_rate_bound_with(model: &SourceModel, d: f64, t: f64, coefficient: f64) -> f64 {
    debug_assert!(t >= 1.0, "locality must be at least 1");
    rate_distortion(model, d) + coefficient * t.log2() / t
}

/// Succinct-structure rate with `t log n` queries:
/// `h(p) + log n / n + 1 / (log n / t)^t + n^(-1/4)`.
pub fn succinct_rate_bound(model: &SourceModel, n: u64, t: u32) -> Result<f64> {
    if n < 4 || t < 1 {
        return Err(Error::Domain(format!("succinct bound needs n >= 4 and t >= 1 (n={n}, t={t})")));
    }
    let log_n = (n as f64).log2();
    let ratio = log_n / t as f64;
    if ratio <= 1.0 {
        return Err(Error::Domain(format!("succinct bound needs log2(n)/t > 1, got {ratio}")));
    }
    Ok(model.entropy() + log_n / n as f64 + ratio.powi(t as i32).recip() + (n as f64).powf(-0.25))
}

/// Surrogate constants that make the asymptotic bounds computable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundConstants {
    /// Coefficient on `log t / t` in the lossy block-code bound. The
    /// `o(log t / t)` remainder is dropped.
    pub overhead_coefficient: f64,
    /// Constant on the `O(log n / n)` term of the succinct bound.
    pub log_n_over_n: f64,
    /// Exponent `e` in the `n^(-e)` rendering of `O(n^(3/4)) / n`.
    pub tail_exponent: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self {
            overhead_coefficient: 1.0,
            log_n_over_n: 1.0,
            tail_exponent: 0.25,
        }
    }
}

/// Which bound is smaller at a grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tighter {
    Ours,
    Theirs,
    Tie,
}

impl fmt::Display for Tighter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tighter::Ours => "ours",
            Tighter::Theirs => "theirs",
            Tighter::Tie => "tie",
        })
    }
}

/// Bounds within this distance are reported as a tie.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Distortion budget as a function of blocklength.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DistortionSchedule {
    Fixed(f64),
    /// `d(n) = 1 / (e · log2 n)`.
    InverseLog,
}

impl DistortionSchedule {
    pub fn at(&self, n: u64) -> f64 {
        match *self {
            DistortionSchedule::Fixed(d) => d,
            DistortionSchedule::InverseLog => 1.0 / (std::f64::consts::E * (n as f64).log2()),
        }
    }
}

/// One row of a bound comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    /// Locality `t · log2 n` at which both bounds are evaluated.
    pub locality: f64,
    pub distortion: f64,
    pub our_bound: f64,
    pub succinct_bound: f64,
    /// `None` when the comparison was skipped (zero distortion).
    pub tighter: Option<Tighter>,
    pub constants: BoundConstants,
}

/// Lossy block-code bound at locality `t log n` against the succinct-structure bound.
pub fn compare_bounds(
    model: &SourceModel,
    schedule: DistortionSchedule,
    t: u32,
    n_range: &[u64],
) -> Result<Vec<BoundReport>> {
    compare_bounds_with(model, schedule, t, n_range, BoundConstants::default())
}

pub fn compare_bounds_with(
    model: &SourceModel,
    schedule: DistortionSchedule,
    t: u32,
    n_range: &[u64],
    constants: BoundConstants,
) -> Result<Vec<BoundReport>> {
    if n_range.is_empty() {
        return Err(Error::Domain("empty blocklength range".into()));
    }
    n_range
        .iter()
        .map(|&n| {
            let d = schedule.at(n);
            if !(d >= 0.0) {
                return Err(Error::Domain(format!("negative distortion {d} at n={n}")));
            }
            let log_n = (n as f64).log2();
            let locality = t as f64 * log_n;
            let our_bound = ldlsc_rate_bound_with(model, d, locality, constants.overhead_coefficient);
            let ratio = log_n / t as f64;
            if n < 4 || ratio <= 1.0 {
                return Err(Error::Domain(format!("blocklength {n} too small for t={t}")));
            }
            let succinct_bound = model.entropy()
                + constants.log_n_over_n * log_n / n as f64
                + ratio.powi(t as i32).recip()
                + (n as f64).powf(-constants.tail_exponent);
            let tighter = if d == 0.0 {
                None
            } else if (our_bound - succinct_bound).abs() <= TIE_TOLERANCE {
                Some(Tighter::Tie)
            } else if our_bound < succinct_bound {
                Some(Tighter::Ours)
            } else {
                Some(Tighter::Theirs)
            };
            Ok(BoundReport {
                n,
                locality,
                distortion: d,
                our_bound,
                succinct_bound,
                tighter,
                constants,
            })
        })
        .collect()
}

/// Smallest `n` from which every later row of the sweep favours the succinct bound.
pub fn crossover(reports: &[BoundReport]) -> Option<u64> {
    let last_not_theirs = reports
        .iter()
        .rposition(|r| r.tighter != Some(Tighter::Theirs));
    match last_not_theirs {
        None => reports.first().map(|r| r.n),
        Some(i) => reports.get(i + 1).map(|r| r.n),
    }
}
