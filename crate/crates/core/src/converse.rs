//! Desk-scale checks of the converse results.
//!
//! Encoders are total maps given as tables: entry `x` is the codeword of the
//! source block whose coordinate `i` is bit `i` of `x`, packed the same way.
//! Every probability is an exact sum over all `2^n` source blocks.

use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f2::{enumerate_all_subspaces, subspace_mass_bounds, BitMatrix, BitVector, SubspaceBasis};
use crate::stats::SourceModel;

/// Largest source length for exact enumeration.
pub const MAX_EXACT_LEN: usize = 20;
/// Slack allowed on floating comparisons against closed-form bounds.
pub const CHECK_TOLERANCE: f64 = 1e-12;

fn check_len(n: usize) -> Result<()> {
    if n == 0 || n > MAX_EXACT_LEN {
        return Err(Error::Capacity(format!(
            "exact enumeration supports 1 <= n <= {MAX_EXACT_LEN}, got {n}"
        )));
    }
    Ok(())
}

fn block_probs(n: usize, model: &SourceModel) -> Vec<f64> {
    let by_weight: Vec<f64> = (0..=n)
        .map(|w| model.p().powi(w as i32) * model.q().powi((n - w) as i32))
        .collect();
    (0..1u32 << n).map(|x| by_weight[x.count_ones() as usize]).collect()
}

/// A decoder in which symbol `a` is a function of the coded bits in `neighborhoods[a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDecoderSpec {
    n: usize,
    k: usize,
    neighborhoods: Vec<Vec<usize>>,
    /// `tables[a][pattern]`, where bit `l` of `pattern` is coded bit `neighborhoods[a][l]`.
    tables: Vec<Vec<bool>>,
}

impl LocalDecoderSpec {
    pub fn new(k: usize, neighborhoods: Vec<Vec<usize>>, tables: Vec<Vec<bool>>) -> Result<Self> {
        let n = neighborhoods.len();
        if tables.len() != n {
            return Err(Error::Domain(format!("{} tables for {n} symbols", tables.len())));
        }
        for (a, (nb, table)) in neighborhoods.iter().zip(&tables).enumerate() {
            if nb.iter().any(|&j| j >= k) {
                return Err(Error::Domain(format!("symbol {a} reads a bit outside 0..{k}")));
            }
            if table.len() != 1 << nb.len() {
                return Err(Error::Domain(format!(
                    "symbol {a} has {} table entries for {} observed bits",
                    table.len(),
                    nb.len()
                )));
            }
        }
        Ok(Self { n, k, neighborhoods, tables })
    }

    /// Identity decoder for `k = n`: symbol `a` reads coded bit `a`.
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            k: n,
            neighborhoods: (0..n).map(|a| vec![a]).collect(),
            tables: vec![vec![false, true]; n],
        }
    }

    pub fn symbols(&self) -> usize {
        self.n
    }

    pub fn code_bits(&self) -> usize {
        self.k
    }

    /// Largest neighborhood.
    pub fn locality(&self) -> usize {
        self.neighborhoods.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighborhoods(&self) -> &[Vec<usize>] {
        &self.neighborhoods
    }

    fn pattern(nb: &[usize], y: u32) -> usize {
        nb.iter().enumerate().fold(0, |acc, (l, &j)| acc | (((y >> j) & 1) as usize) << l)
    }

    pub fn decode_symbol(&self, a: usize, y: u32) -> bool {
        self.tables[a][Self::pattern(&self.neighborhoods[a], y)]
    }

    pub fn decode(&self, y: u32) -> u32 {
        (0..self.n).fold(0, |acc, a| acc | (self.decode_symbol(a, y) as u32) << a)
    }
}

/// Encoder table of `x -> x G` for an `n x k` matrix.
pub fn linear_encoder(g: &BitMatrix) -> Result<Vec<u32>> {
    let n = g.nrows();
    check_len(n)?;
    if g.ncols() > 32 {
        return Err(Error::Capacity(format!("{} coded bits do not fit a table entry", g.ncols())));
    }
    Ok((0..1u64 << n)
        .map(|x| g.mul_left(&BitVector::from_u64(x, n)).to_u64() as u32)
        .collect())
}

fn check_encoder(encoder: &[u32], n: usize) -> Result<()> {
    check_len(n)?;
    if encoder.len() != 1 << n {
        return Err(Error::Domain(format!("encoder has {} entries, expected 2^{n}", encoder.len())));
    }
    Ok(())
}

/// `P[g(f(X)) != X]`.
pub fn exact_block_error(encoder: &[u32], dec: &LocalDecoderSpec, model: &SourceModel) -> Result<f64> {
    let n = dec.symbols();
    check_encoder(encoder, n)?;
    let probs = block_probs(n, model);
    Ok((0..1u32 << n)
        .filter(|&x| dec.decode(encoder[x as usize]) != x)
        .map(|x| probs[x as usize])
        .sum())
}

/// `P[g_a(f(X)) != X_a]` for every symbol.
pub fn symbol_errors(encoder: &[u32], dec: &LocalDecoderSpec, model: &SourceModel) -> Result<Vec<f64>> {
    let n = dec.symbols();
    check_encoder(encoder, n)?;
    let probs = block_probs(n, model);
    Ok((0..n)
        .map(|a| {
            (0..1u32 << n)
                .filter(|&x| dec.decode_symbol(a, encoder[x as usize]) != ((x >> a) & 1 == 1))
                .map(|x| probs[x as usize])
                .sum()
        })
        .collect())
}

/// Per-symbol MAP tables for a fixed encoder: each observed pattern maps to
/// the more likely value of the symbol, 0 on ties.
pub fn optimal_local_decoder_for(
    encoder: &[u32],
    n: usize,
    k: usize,
    neighborhoods: Vec<Vec<usize>>,
    model: &SourceModel,
) -> Result<LocalDecoderSpec> {
    check_encoder(encoder, n)?;
    if neighborhoods.len() != n {
        return Err(Error::Domain(format!("{} neighborhoods for {n} symbols", neighborhoods.len())));
    }
    let probs = block_probs(n, model);
    let tables = neighborhoods
        .iter()
        .enumerate()
        .map(|(a, nb)| {
            let mut joint = vec![[0.0f64; 2]; 1 << nb.len()];
            for x in 0..1u32 << n {
                let pat = LocalDecoderSpec::pattern(nb, encoder[x as usize]);
                joint[pat][((x >> a) & 1) as usize] += probs[x as usize];
            }
            joint.iter().map(|j| j[1] > j[0]).collect()
        })
        .collect();
    LocalDecoderSpec::new(k, neighborhoods, tables)
}

/// MAP local decoder for the linear encoder `x -> x G`.
pub fn optimal_local_decoder(
    g: &BitMatrix,
    neighborhoods: Vec<Vec<usize>>,
    model: &SourceModel,
) -> Result<LocalDecoderSpec> {
    let enc = linear_encoder(g)?;
    optimal_local_decoder_for(&enc, g.nrows(), g.ncols(), neighborhoods, model)
}

/// Error of the best unrestricted decoder: `1 - sum_y max_x P(x) [f(x) = y]`.
pub fn map_block_error(encoder: &[u32], n: usize, k: usize, model: &SourceModel) -> Result<f64> {
    check_encoder(encoder, n)?;
    let probs = block_probs(n, model);
    let mut best = vec![0.0f64; 1 << k];
    for x in 0..1usize << n {
        let y = encoder[x] as usize;
        best[y] = best[y].max(probs[x]);
    }
    Ok(1.0 - best.iter().sum::<f64>())
}

/// Largest `(n, k)` grid accepted by [`best_2local_success`].
pub const MAX_2LOCAL_SYMBOLS: usize = 3;

fn check_2local(n: usize, k: usize) -> Result<()> {
    if n == 0 || n > MAX_2LOCAL_SYMBOLS || k == 0 || k >= n {
        return Err(Error::Capacity(format!(
            "2-local search supports 1 <= k < n <= {MAX_2LOCAL_SYMBOLS}, got (n, k) = ({n}, {k})"
        )));
    }
    Ok(())
}

/// Decodes encoder number `index` into its table: digit `x` in base `2^k`.
fn encoder_table(index: u64, n: usize, k: usize) -> Vec<u32> {
    (0..1usize << n).map(|x| ((index >> (x * k)) & ((1 << k) - 1)) as u32).collect()
}

fn encoder_index(table: &[u32], k: usize) -> u64 {
    table.iter().enumerate().fold(0, |acc, (x, &y)| acc | (y as u64) << (x * k))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Relabelings of the coded bits: permutations, each with or without complementing all bits.
fn coded_symmetries(k: usize) -> Vec<Vec<u32>> {
    let mask = (1u32 << k) - 1;
    let mut out = Vec::new();
    for perm in permutations(k) {
        for flip in [0, mask] {
            out.push(
                (0..1u32 << k)
                    .map(|y| perm.iter().enumerate().fold(0, |acc, (i, &j)| acc | ((y >> i) & 1) << j) ^ flip)
                    .collect(),
            );
        }
    }
    out
}

/// Best success over every decoder for one encoder, by enumerating all
/// decoder tables `{0,1}^k -> {0,1}^n`. With `k <= 2` every such table is 2-local.
fn best_decoder_success(table: &[u32], n: usize, k: usize, probs: &[f64]) -> f64 {
    let outputs = 1u64 << n;
    let decoders = outputs.pow(1 << k);
    let mut best = 0.0f64;
    for d in 0..decoders {
        let mut s = 0.0;
        for (x, &y) in table.iter().enumerate() {
            let guess = (d / outputs.pow(y)) % outputs;
            if guess == x as u64 {
                s += probs[x];
            }
        }
        best = best.max(s);
    }
    best
}

fn best_2local(n: usize, k: usize, model: &SourceModel, prune: bool) -> Result<f64> {
    check_2local(n, k)?;
    let probs = block_probs(n, model);
    let total = 1u64 << (k << n);
    let symmetries = coded_symmetries(k);
    Ok((0..total)
        .into_par_iter()
        .filter(|&idx| {
            // Keep only the smallest index in each orbit.
            !prune || {
                let table = encoder_table(idx, n, k);
                symmetries.iter().all(|s| {
                    let image: Vec<u32> = table.iter().map(|&y| s[y as usize]).collect();
                    encoder_index(&image, k) >= idx
                })
            }
        })
        .map(|idx| best_decoder_success(&encoder_table(idx, n, k), n, k, &probs))
        .reduce(|| 0.0, f64::max))
}

/// Largest exact success probability over all encoders `{0,1}^n -> {0,1}^k`
/// and all 2-local decoders, searching one encoder per orbit of coded-bit
/// relabelings.
pub fn best_2local_success(n: usize, k: usize, model: &SourceModel) -> Result<f64> {
    best_2local(n, k, model, true)
}

/// [`best_2local_success`] without symmetry pruning.
pub fn best_2local_success_unpruned(n: usize, k: usize, model: &SourceModel) -> Result<f64> {
    best_2local(n, k, model, false)
}

/// Outcome of a linear-decoder draw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearDecoderCheck {
    pub n: usize,
    pub k: usize,
    pub rank: usize,
    /// `1 - P[X in span]`.
    pub error: f64,
    /// `1 - max(p, 1-p)^(n - rank)`.
    pub bound: f64,
}

impl LinearDecoderCheck {
    pub fn holds(&self) -> bool {
        self.error >= self.bound - CHECK_TOLERANCE
    }
}

/// Error of a linear decoder whose reachable outputs are the span of the coded-bit images.
pub fn linear_decoder_error(images: &[BitVector], model: &SourceModel) -> Result<LinearDecoderCheck> {
    let n = images.first().map_or(0, BitVector::len);
    check_len(n)?;
    if images.iter().any(|v| v.len() != n) {
        return Err(Error::Domain("images differ in length".into()));
    }
    let span = SubspaceBasis::span_of(n, images.to_vec());
    let rank = span.dimension();
    let error = 1.0 - span.probability(model.p())?;
    let bound = 1.0 - model.p().max(model.q()).powi((n - rank) as i32);
    let check = LinearDecoderCheck { n, k: images.len(), rank, error, bound };
    debug_assert!(check.holds(), "{check:?}");
    Ok(check)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SandwichReport {
    pub n_max: usize,
    pub p: f64,
    pub subspaces: usize,
    pub violations: usize,
    /// Smallest `upper - P[U]` seen.
    pub upper_gap: f64,
    /// Smallest `P[U] - lower` seen.
    pub lower_gap: f64,
}

/// Checks the subspace-mass sandwich on every subspace of `GF(2)^n`, `n <= n_max`.
pub fn verify_subspace_sandwich(n_max: usize, ps: &[f64]) -> Result<Vec<SandwichReport>> {
    let mut spaces = vec![SubspaceBasis::zero(0)];
    for n in 1..=n_max {
        spaces.extend(enumerate_all_subspaces(n)?);
    }
    ps.iter()
        .map(|&p| {
            let mut r = SandwichReport {
                n_max,
                p,
                subspaces: spaces.len(),
                violations: 0,
                upper_gap: f64::INFINITY,
                lower_gap: f64::INFINITY,
            };
            for u in &spaces {
                let mass = u.probability(p)?;
                let (lo, hi) = subspace_mass_bounds(u, p)?;
                if mass < lo - CHECK_TOLERANCE || mass > hi + CHECK_TOLERANCE {
                    r.violations += 1;
                }
                r.upper_gap = r.upper_gap.min(hi - mass);
                r.lower_gap = r.lower_gap.min(mass - lo);
            }
            Ok(r)
        })
        .collect()
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub claim: String,
    pub instance: String,
    pub bound: f64,
    pub measured: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub const CSV_HEADER: &'static str = "claim,instance,bound,measured,pass";
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{}",
            self.claim,
            self.instance,
            self.bound,
            self.measured,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

fn model_of(p: f64) -> Result<SourceModel> {
    SourceModel::from_f64(p)
}

/// Subspace-mass records: bound is the allowed number of violations.
pub fn subspace_suite(n_max: usize, ps: &[f64]) -> Result<Vec<CheckRecord>> {
    Ok(verify_subspace_sandwich(n_max, ps)?
        .into_iter()
        .map(|r| CheckRecord {
            claim: "subspace-mass".into(),
            instance: format!("n<={} p={} subspaces={}", r.n_max, r.p, r.subspaces),
            bound: 0.0,
            measured: r.violations as f64,
            pass: r.violations == 0,
        })
        .collect())
}

/// 2-local records: measured best success against `1 - min(p,1-p)^2`.
pub fn two_local_suite(cases: &[(usize, usize)], ps: &[f64]) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for &(n, k) in cases {
        for &p in ps {
            let m = model_of(p)?;
            let v = best_2local_success(n, k, &m)?;
            let bound = 1.0 - m.min_prob().powi(2);
            out.push(CheckRecord {
                claim: "two-local".into(),
                instance: format!("n={n} k={k} p={p}"),
                bound,
                measured: v,
                pass: v <= bound + CHECK_TOLERANCE,
            });
        }
    }
    Ok(out)
}

/// How neighborhoods are drawn for the linear-encoder suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeighborhoodKind {
    /// Independent uniform `t`-subsets per symbol.
    Random,
    /// Every symbol reads the first `t` coded bits.
    Leading,
}

impl fmt::Display for NeighborhoodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NeighborhoodKind::Random => "random",
            NeighborhoodKind::Leading => "leading",
        })
    }
}

/// Outcome of one linear-encoder draw with its MAP local decoder.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearEncoderDraw {
    pub n: usize,
    pub k: usize,
    pub block_error: f64,
    pub max_symbol_error: f64,
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> BitMatrix {
    let rows = (0..rows)
        .map(|_| BitVector::from_u64(rng.gen::<u64>(), cols))
        .collect();
    BitMatrix::from_rows(rows).expect("rows share a length")
}

/// Draws `(G, neighborhoods)` with `k = n - 1`, `3 <= n <= n_max`, and
/// measures the MAP `t`-local decoder.
pub fn linear_encoder_draws(
    draws: usize,
    n_max: usize,
    t: usize,
    kind: NeighborhoodKind,
    model: &SourceModel,
    seed: u64,
) -> Result<Vec<LinearEncoderDraw>> {
    check_len(n_max)?;
    if n_max < t + 2 || t == 0 {
        return Err(Error::Domain(format!("need 1 <= t <= n_max - 2, got t={t}, n_max={n_max}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..draws)
        .map(|_| {
            let n = rng.gen_range(t + 2..=n_max);
            let k = n - 1;
            let g = random_matrix(&mut rng, n, k);
            let neighborhoods = (0..n)
                .map(|_| match kind {
                    NeighborhoodKind::Random => {
                        let mut s = sample(&mut rng, k, t).into_vec();
                        s.sort_unstable();
                        s
                    }
                    NeighborhoodKind::Leading => (0..t).collect(),
                })
                .collect();
            let enc = linear_encoder(&g)?;
            let dec = optimal_local_decoder_for(&enc, n, k, neighborhoods, model)?;
            let block_error = exact_block_error(&enc, &dec, model)?;
            let max_symbol_error = symbol_errors(&enc, &dec, model)?.into_iter().fold(0.0, f64::max);
            Ok(LinearEncoderDraw { n, k, block_error, max_symbol_error })
        })
        .collect()
}

/// Records: smallest block error over the draws against `min(p,1-p)^t`.
pub fn linear_encoder_suite(draws: usize, n_max: usize, t: usize, ps: &[f64], seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for &p in ps {
        let m = model_of(p)?;
        let bound = m.min_prob().powi(t as i32);
        for kind in [NeighborhoodKind::Random, NeighborhoodKind::Leading] {
            let results = linear_encoder_draws(draws, n_max, t, kind, &m, seed)?;
            let worst = results.iter().map(|r| r.block_error).fold(f64::INFINITY, f64::min);
            let failures = results.iter().filter(|r| r.block_error < bound - CHECK_TOLERANCE).count();
            out.push(CheckRecord {
                claim: "linear-encoder".into(),
                instance: format!("draws={draws} n<={n_max} k=n-1 t={t} nbhd={kind} p={p} seed={seed}"),
                bound,
                measured: worst,
                pass: failures == 0,
            });
        }
    }
    Ok(out)
}

/// Draws random images with `1 <= k < n`, `2 <= n <= n_max`.
pub fn linear_decoder_draws(draws: usize, n_max: usize, model: &SourceModel, seed: u64) -> Result<Vec<LinearDecoderCheck>> {
    check_len(n_max)?;
    if n_max < 2 {
        return Err(Error::Domain("linear-decoder draws need n_max >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..draws)
        .map(|_| {
            let n = rng.gen_range(2..=n_max);
            let k = rng.gen_range(1..n);
            let images: Vec<BitVector> = (0..k).map(|_| BitVector::from_u64(rng.gen::<u64>(), n)).collect();
            linear_decoder_error(&images, model)
        })
        .collect()
}

/// Records: smallest `error - (1 - max(p,1-p)^(n-k))` over the draws against 0.
pub fn linear_decoder_suite(draws: usize, n_max: usize, ps: &[f64], seed: u64) -> Result<Vec<CheckRecord>> {
    ps.iter()
        .map(|&p| {
            let m = model_of(p)?;
            let hi = m.p().max(m.q());
            let slack = linear_decoder_draws(draws, n_max, &m, seed)?
                .iter()
                .map(|c| c.error - (1.0 - hi.powi((c.n - c.k) as i32)))
                .fold(f64::INFINITY, f64::min);
            Ok(CheckRecord {
                claim: "linear-decoder".into(),
                instance: format!("draws={draws} n<={n_max} p={p} seed={seed}"),
                bound: 0.0,
                measured: slack,
                pass: slack >= -CHECK_TOLERANCE,
            })
        })
        .collect()
}
