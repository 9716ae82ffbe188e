//! Lossy compressor over per-block covering codebooks.
//!
//! Blocks are at most [`MAX_LOSSY_BLOCK_LEN`] symbols, so every quantity is
//! computed by enumerating all `2^b` source blocks. A block is encoded as the
//! `k`-bit index of its nearest codeword (ties to the lowest index) and the
//! index is written MSB-first. A short trailing block is stored raw.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use rayon::prelude::*;

use crate::container::{CompressedContainer, Header, LossyParams, Mode, QueryLedger};
use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::lossless::to_u32;
use crate::stats::{ldlsc_rate_bound, SourceModel};

pub const MAX_LOSSY_BLOCK_LEN: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodebookMethod {
    Greedy,
    Exhaustive,
}

/// `P(x)` for a block of each weight.
fn weight_probs(b: usize, model: &SourceModel) -> Vec<f64> {
    (0..=b).map(|w| model.p().powi(w as i32) * model.q().powi((b - w) as i32)).collect()
}

/// Expected per-symbol distortion from a distance-to-codebook table.
fn distortion_of(b: usize, dist: &[u8], probs: &[f64]) -> f64 {
    let mut per_weight = vec![0u64; b + 1];
    for (x, &d) in dist.iter().enumerate() {
        per_weight[x.count_ones() as usize] += d as u64;
    }
    per_weight.iter().zip(probs).map(|(&c, &p)| c as f64 * p).sum::<f64>() / b as f64
}

/// Distance to the nearest codeword and the lowest index attaining it, for every block.
fn nearest_table(b: usize, words: &[u32]) -> (Vec<u8>, Vec<u32>) {
    let size = 1usize << b;
    let mut dist = vec![u8::MAX; size];
    let mut label = vec![u32::MAX; size];
    let mut frontier = Vec::with_capacity(words.len());
    for (i, &w) in words.iter().enumerate() {
        if dist[w as usize] == u8::MAX {
            dist[w as usize] = 0;
            label[w as usize] = i as u32;
            frontier.push(w as usize);
        }
    }
    let mut d = 0u8;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &y in &frontier {
            for bit in 0..b {
                let x = y ^ (1 << bit);
                if dist[x] == u8::MAX {
                    dist[x] = d + 1;
                    label[x] = label[y];
                    next.push(x);
                } else if dist[x] == d + 1 && label[y] < label[x] {
                    label[x] = label[y];
                }
            }
        }
        frontier = next;
        d += 1;
    }
    (dist, label)
}

fn check_block_len(b: usize) -> Result<()> {
    if b == 0 || b > MAX_LOSSY_BLOCK_LEN {
        return Err(Error::Capacity(format!(
            "lossy block length {b} outside 1..={MAX_LOSSY_BLOCK_LEN}"
        )));
    }
    Ok(())
}

/// `2^k` distinct codewords of length `b` with the nearest-codeword map.
#[derive(Clone, Debug, PartialEq)]
pub struct LossyCodebook {
    block_len: usize,
    code_bits: usize,
    model: SourceModel,
    /// Codewords as integers, coordinate `i` in bit `i`.
    words: Vec<u32>,
    nearest: Vec<u32>,
    distortion: f64,
}

impl LossyCodebook {
    fn from_words(b: usize, model: SourceModel, words: Vec<u32>) -> Result<Self> {
        check_block_len(b)?;
        let m = words.len();
        if !m.is_power_of_two() {
            return Err(Error::Capacity(format!("codebook size {m} is not a power of two")));
        }
        if words.iter().any(|&w| (w as usize) >> b != 0) {
            return Err(Error::Domain(format!("codeword wider than {b} bits")));
        }
        let mut sorted = words.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("codewords must be distinct".into()));
        }
        let (dist, nearest) = nearest_table(b, &words);
        let distortion = distortion_of(b, &dist, &weight_probs(b, &model));
        Ok(Self {
            block_len: b,
            code_bits: m.trailing_zeros() as usize,
            model,
            words,
            nearest,
            distortion,
        })
    }

    pub fn from_codewords(model: SourceModel, codewords: &[BitVector]) -> Result<Self> {
        let b = codewords.first().map_or(0, BitVector::len);
        if codewords.iter().any(|c| c.len() != b) {
            return Err(Error::Domain("codewords differ in length".into()));
        }
        check_block_len(b)?;
        Self::from_words(b, model, codewords.iter().map(|c| c.to_u64() as u32).collect())
    }

    /// Every block of length `b`.
    pub fn identity(b: usize, model: SourceModel) -> Result<Self> {
        check_block_len(b)?;
        Self::from_words(b, model, (0..1u32 << b).collect())
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn code_bits(&self) -> usize {
        self.code_bits
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn model(&self) -> &SourceModel {
        &self.model
    }

    pub fn rate(&self) -> f64 {
        self.code_bits as f64 / self.block_len as f64
    }

    pub fn codeword(&self, i: usize) -> BitVector {
        BitVector::from_u64(self.words[i] as u64, self.block_len)
    }

    pub fn codewords(&self) -> Vec<BitVector> {
        (0..self.len()).map(|i| self.codeword(i)).collect()
    }

    /// Exact expected per-symbol Hamming distortion.
    pub fn distortion(&self) -> f64 {
        self.distortion
    }

    /// Index of the nearest codeword, lowest index on ties.
    pub fn nearest(&self, block: &BitVector) -> usize {
        self.nearest[block.to_u64() as usize] as usize
    }
}

pub fn expected_distortion(cb: &LossyCodebook) -> f64 {
    cb.distortion()
}

/// Ordering key for the lazy heap: larger gain first, then smaller index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Entry {
    bound: u128,
    index: u32,
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.cmp(&other.bound).then(other.index.cmp(&self.index))
    }
}

/// In-place Walsh-Hadamard transform modulo 2^128.
fn wht(v: &mut [u128]) {
    let mut h = 1;
    while h < v.len() {
        for chunk in v.chunks_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x.wrapping_add(y);
                *b = x.wrapping_sub(y);
            }
        }
        h *= 2;
    }
}

fn binomial_i128(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Transform of the radius-`r` ball indicator at a frequency of weight `w`,
/// as two's-complement residues, indexed `[r][w]`.
fn ball_spectra(b: usize) -> Vec<Vec<u128>> {
    let kraw = |j: usize, w: usize| -> i128 {
        (0..=j)
            .map(|i| {
                let s = if i % 2 == 0 { 1 } else { -1 };
                s * binomial_i128(w, i) * binomial_i128(b - w, j - i)
            })
            .sum()
    };
    let mut out = vec![vec![0; b + 1]; b + 1];
    for w in 0..=b {
        let mut acc = 0i128;
        for r in 0..=b {
            acc += kraw(r, w);
            out[r][w] = acc as u128;
        }
    }
    out
}

/// Block probabilities by weight in fixed point, scaled so that `b` times
/// their total times `2^b` stays below 2^128.
fn fixed_weights(b: usize, probs: &[f64]) -> Vec<u128> {
    let scale = 2f64.powi(120 - b as i32);
    probs.iter().map(|p| (p * scale).round() as u128).collect()
}

/// Greedy codebook construction, extendable on demand.
///
/// The gain of a candidate `c` is `sum_x P(x) max(0, cur(x) - d(x, c))`,
/// kept as an exact fixed-point integer so equal gains compare equal. Gains
/// only shrink as codewords are added, so stale gains are valid upper bounds
/// for the lazy search.
#[derive(Clone, Debug)]
struct Greedy {
    b: usize,
    probs: Vec<f64>,
    weights: Vec<u128>,
    cur: Vec<u8>,
    in_book: Vec<bool>,
    order: Vec<u32>,
    /// Distortion of the first `2^k` codewords, by `k`.
    distortion_at: Vec<f64>,
    bounds: Vec<u128>,
    fresh_at: Vec<u32>,
    heap: Option<BinaryHeap<Entry>>,
    /// Whether `bounds` holds gains from some earlier refresh.
    bounded: bool,
    /// Steps to skip the lazy search after it overran its budget.
    backoff: u32,
    skip_lazy: u32,
    masks: Vec<u32>,
    ball_end: Vec<usize>,
    spectra: Vec<Vec<u128>>,
}

impl Greedy {
    fn new(b: usize, model: &SourceModel) -> Self {
        let size = 1usize << b;
        let start = if model.ones_likely() { (size - 1) as u32 } else { 0 };
        let mut masks: Vec<u32> = (0..size as u32).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let mut ball_end = vec![0; b + 1];
        for (r, end) in ball_end.iter_mut().enumerate() {
            *end = masks.partition_point(|m| m.count_ones() as usize <= r);
        }
        let probs = weight_probs(b, model);
        let mut g = Self {
            b,
            weights: fixed_weights(b, &probs),
            probs,
            cur: (0..size as u32).map(|x| (x ^ start).count_ones() as u8).collect(),
            in_book: vec![false; size],
            order: vec![start],
            distortion_at: Vec::new(),
            bounds: vec![0; size],
            fresh_at: vec![u32::MAX; size],
            heap: None,
            bounded: false,
            backoff: 0,
            skip_lazy: 0,
            masks,
            ball_end,
            spectra: Vec::new(),
        };
        g.in_book[start as usize] = true;
        g.distortion_at.push(distortion_of(b, &g.cur, &g.probs));
        g
    }

    fn weight(&self, x: usize) -> u128 {
        self.weights[x.count_ones() as usize]
    }

    fn radius(&self) -> u8 {
        self.cur.iter().copied().max().unwrap_or(0)
    }

    /// Extends the order to `2^bits` codewords.
    fn extend_to(&mut self, bits: usize) {
        let target = 1usize << bits.min(self.b);
        while self.order.len() < target {
            let c = self.pick();
            self.add(c);
            if self.order.len().is_power_of_two() {
                self.distortion_at.push(distortion_of(self.b, &self.cur, &self.probs));
            }
        }
    }

    /// Smallest `k <= max_bits` whose prefix meets `d`.
    fn bits_meeting(&mut self, d: f64, max_bits: usize) -> Option<usize> {
        for k in 0..=max_bits.min(self.b) {
            self.extend_to(k);
            if self.distortion_at[k] <= d {
                return Some(k);
            }
        }
        None
    }

    fn add(&mut self, c: u32) {
        let r = self.radius() as usize;
        self.in_book[c as usize] = true;
        self.order.push(c);
        for &m in &self.masks[..self.ball_end[r.saturating_sub(1)]] {
            let x = (c ^ m) as usize;
            let d = m.count_ones() as u8;
            if d < self.cur[x] {
                self.cur[x] = d;
            }
        }
    }

    fn step(&self) -> u32 {
        self.order.len() as u32
    }

    fn pick(&mut self) -> u32 {
        let r = self.radius() as usize;
        let size = 1usize << self.b;
        if r == 0 {
            return self.in_book.iter().position(|&x| !x).expect("book not full") as u32;
        }
        if self.bounded && self.skip_lazy == 0 {
            // Give up once re-evaluations cost as much as a full refresh.
            let budget = r * self.b * size;
            if let Some(c) = self.pick_lazy(r, budget) {
                self.backoff = 0;
                return c;
            }
            self.backoff = (self.backoff + 1).min(8);
            self.skip_lazy = 1 << self.backoff;
        }
        self.skip_lazy = self.skip_lazy.saturating_sub(1);
        self.refresh_all(r);
        self.bounded = true;
        let step = self.step();
        self.fresh_at.fill(step);
        self.heap = None;
        (0..size)
            .filter(|&c| !self.in_book[c])
            .map(|c| Entry { bound: self.bounds[c], index: c as u32 })
            .max()
            .expect("a candidate remains")
            .index
    }

    /// Gains of every candidate by a sum of XOR convolutions with balls.
    fn refresh_all(&mut self, r: usize) {
        let size = 1usize << self.b;
        if self.spectra.is_empty() {
            self.spectra = ball_spectra(self.b);
        }
        let mut acc = vec![0u128; size];
        let mut f = vec![0u128; size];
        for level in 0..r {
            for (x, v) in f.iter_mut().enumerate() {
                *v = if self.cur[x] as usize > level { self.weight(x) } else { 0 };
            }
            wht(&mut f);
            let spec = &self.spectra[level];
            for (s, a) in acc.iter_mut().enumerate() {
                *a = a.wrapping_add(f[s].wrapping_mul(spec[s.count_ones() as usize]));
            }
        }
        wht(&mut acc);
        for (bound, a) in self.bounds.iter_mut().zip(&acc) {
            *bound = a >> self.b;
        }
    }

    fn gain(&self, c: u32, r: usize) -> u128 {
        self.masks[..self.ball_end[r - 1]]
            .iter()
            .map(|&m| {
                let x = (c ^ m) as usize;
                let d = m.count_ones() as u8;
                if d < self.cur[x] {
                    self.weight(x) * (self.cur[x] - d) as u128
                } else {
                    0
                }
            })
            .sum()
    }

    fn pick_lazy(&mut self, r: usize, budget: usize) -> Option<u32> {
        let step = self.step();
        let mut heap = self.heap.take().unwrap_or_else(|| {
            (0..self.bounds.len())
                .filter(|&c| !self.in_book[c])
                .map(|c| Entry { bound: self.bounds[c], index: c as u32 })
                .collect()
        });
        let mut work = 0;
        loop {
            let mut e = heap.pop().expect("a candidate remains");
            if self.fresh_at[e.index as usize] == step {
                self.heap = Some(heap);
                return Some(e.index);
            }
            work += self.ball_end[r - 1];
            if work > budget {
                heap.push(e);
                self.heap = Some(heap);
                return None;
            }
            e.bound = self.gain(e.index, r);
            self.bounds[e.index as usize] = e.bound;
            self.fresh_at[e.index as usize] = step;
            heap.push(e);
        }
    }
}

fn greedy_codebook(b: usize, k: usize, model: &SourceModel) -> Result<LossyCodebook> {
    let mut g = Greedy::new(b, model);
    g.extend_to(k);
    LossyCodebook::from_words(b, *model, g.order[..1 << k].to_vec())
}

/// Best codebook over all `2^k`-subsets, lexicographically first on ties.
fn exhaustive_codebook(b: usize, k: usize, model: &SourceModel) -> Result<LossyCodebook> {
    let m = 1usize << k;
    if b > 4 || m > 4 {
        return Err(Error::Capacity(format!(
            "exhaustive search needs b <= 4 and at most 4 codewords, got b={b}, M={m}"
        )));
    }
    let size = 1u32 << b;
    let probs = weight_probs(b, model);
    let mut pick: Vec<u32> = (0..m as u32).collect();
    let mut best: Option<(f64, Vec<u32>)> = None;
    loop {
        let (dist, _) = nearest_table(b, &pick);
        let d = distortion_of(b, &dist, &probs);
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, pick.clone()));
        }
        // Next combination in lexicographic order.
        let Some(i) = (0..m).rev().find(|&i| pick[i] < size - (m - i) as u32) else {
            break;
        };
        pick[i] += 1;
        for j in i + 1..m {
            pick[j] = pick[j - 1] + 1;
        }
    }
    LossyCodebook::from_words(b, *model, best.expect("at least one subset").1)
}

pub fn build_codebook(b: usize, k: usize, model: &SourceModel, method: CodebookMethod) -> Result<LossyCodebook> {
    check_block_len(b)?;
    if k > b {
        return Err(Error::Capacity(format!("2^{k} distinct codewords do not fit length {b}")));
    }
    match method {
        CodebookMethod::Greedy => greedy_codebook(b, k, model),
        CodebookMethod::Exhaustive => exhaustive_codebook(b, k, model),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LossyPlan {
    pub n: u64,
    pub distortion_target: f64,
    pub codebook: LossyCodebook,
}

impl LossyPlan {
    pub fn block_len(&self) -> usize {
        self.codebook.block_len()
    }

    pub fn code_bits(&self) -> usize {
        self.codebook.code_bits()
    }

    pub fn model(&self) -> &SourceModel {
        self.codebook.model()
    }

    pub fn rate(&self) -> f64 {
        self.codebook.rate()
    }

    pub fn locality(&self) -> usize {
        self.code_bits()
    }

    /// Exact expected per-symbol distortion of one block.
    pub fn distortion(&self) -> f64 {
        self.codebook.distortion()
    }

    pub fn full_blocks(&self) -> u64 {
        self.n / self.block_len() as u64
    }

    pub fn partial_len(&self) -> usize {
        (self.n % self.block_len() as u64) as usize
    }

    pub fn payload_bits(&self) -> u64 {
        self.full_blocks() * self.code_bits() as u64 + self.partial_len() as u64
    }

    /// Rate bound at locality `b` for the target distortion.
    pub fn rate_bound(&self) -> f64 {
        ldlsc_rate_bound(self.model(), self.distortion_target, self.block_len() as f64)
    }
}

/// Plans lossy codes for one source, caching greedy orders across calls.
#[derive(Clone, Debug)]
pub struct LossyPlanner {
    model: SourceModel,
    cache: HashMap<usize, Greedy>,
}

impl LossyPlanner {
    pub fn new(model: SourceModel) -> Self {
        Self { model, cache: HashMap::new() }
    }

    /// Lowest-rate `(b, k)` with `b <= min(16, n)`, `k <= t`, and the greedy codebook
    /// meeting `d`, taking the fewest bits at each `b`. Equal rates go to the larger `b`.
    pub fn plan(&mut self, n: u64, d: f64, t: usize) -> Result<LossyPlan> {
        if n == 0 {
            return Err(Error::Domain("source length must be positive".into()));
        }
        if !(d >= 0.0) {
            return Err(Error::Domain(format!("distortion budget {d} must be nonnegative")));
        }
        let top = MAX_LOSSY_BLOCK_LEN.min(usize::try_from(n).unwrap_or(usize::MAX));
        let mut best: Option<(usize, usize)> = None;
        for b in (1..=top).rev() {
            // Only a strictly lower rate k/b can beat the current best.
            let cap = match best {
                None => t,
                Some((_, 0)) => break,
                Some((bb, bk)) => t.min((bk * b).div_ceil(bb) - 1),
            };
            let model = self.model;
            let g = self.cache.entry(b).or_insert_with(|| Greedy::new(b, &model));
            if let Some(k) = g.bits_meeting(d, cap) {
                best = Some((b, k));
            }
        }
        if let Some((b, k)) = best {
            let words = self.cache[&b].order[..1 << k].to_vec();
            let codebook = LossyCodebook::from_words(b, self.model, words)?;
            return Ok(LossyPlan { n, distortion_target: d, codebook });
        }
        // b = 1 with one bit is the identity, so only t = 0 can get here.
        Err(Error::Infeasible(format!(
            "locality {t} cannot reach distortion {d} (needs {} > {d}); smallest feasible locality is 1",
            self.model.min_prob()
        )))
    }

    /// Fewest-bit greedy plan at a fixed block length `b`.
    pub fn plan_block(&mut self, n: u64, b: usize, d: f64, t: usize) -> Result<LossyPlan> {
        check_block_len(b)?;
        if b as u64 > n {
            return Err(Error::Domain(format!("block length {b} exceeds source length {n}")));
        }
        if !(d >= 0.0) {
            return Err(Error::Domain(format!("distortion budget {d} must be nonnegative")));
        }
        let model = self.model;
        let g = self.cache.entry(b).or_insert_with(|| Greedy::new(b, &model));
        let k = g.bits_meeting(d, t).ok_or_else(|| {
            Error::Infeasible(format!("block length {b} cannot reach distortion {d} with {t} bits"))
        })?;
        let codebook = LossyCodebook::from_words(b, model, g.order[..1 << k].to_vec())?;
        Ok(LossyPlan { n, distortion_target: d, codebook })
    }
}

pub fn plan_lossy(n: u64, d: f64, t: usize, model: &SourceModel) -> Result<LossyPlan> {
    LossyPlanner::new(*model).plan(n, d, t)
}

/// `k` bits of `index`, most significant first.
fn index_bits(index: usize, k: usize) -> BitVector {
    BitVector::from_bools(&(0..k).map(|j| (index >> (k - 1 - j)) & 1 == 1).collect::<Vec<_>>())
}

fn index_value(bits: &BitVector) -> usize {
    bits.iter().fold(0, |acc, b| (acc << 1) | b as usize)
}

pub fn compress_lossy(x: &BitVector, plan: &LossyPlan) -> Result<CompressedContainer> {
    if x.len() as u64 != plan.n {
        return Err(Error::Domain(format!("source has {} symbols, plan expects {}", x.len(), plan.n)));
    }
    let cb = &plan.codebook;
    let (b, k) = (cb.block_len(), cb.code_bits());
    let full = plan.full_blocks() as usize;
    let words: Vec<BitVector> = (0..full)
        .into_par_iter()
        .map(|j| index_bits(cb.nearest(&x.slice(j * b, b)), k))
        .collect();
    let mut payload = BitVector::zeros(0);
    for w in &words {
        payload.extend_from(w);
    }
    payload.extend_from(&x.slice(full * b, plan.partial_len()));
    let params = LossyParams::new(cb.codewords(), cb.distortion());
    let header = Header::lossy(plan.n, to_u32(b)?, to_u32(k)?, *cb.model(), params);
    CompressedContainer::new(header, payload)
}

/// Random-access decoder over a lossy container.
pub struct LossyDecoder<'a> {
    container: &'a CompressedContainer,
    codewords: &'a [BitVector],
}

impl<'a> LossyDecoder<'a> {
    pub fn new(container: &'a CompressedContainer) -> Result<Self> {
        let h = container.header();
        match (&h.mode, &h.lossy) {
            (Mode::Lossy, Some(params)) => Ok(Self { container, codewords: &params.codebook }),
            _ => Err(Error::Domain("container is not lossy".into())),
        }
    }

    /// Reconstructed symbol `i` and the payload bits read.
    pub fn decode_symbol(&self, i: u64, ledger: &mut QueryLedger) -> Result<(bool, usize)> {
        let h = self.container.header();
        if i >= h.n {
            return Err(Error::Domain(format!("symbol index {i} out of range for n={}", h.n)));
        }
        let b = h.block_len as u64;
        let k = h.code_bits as usize;
        let block = i / b;
        ledger.begin_call();
        ledger.charge_header(h.encoded_bits());
        let bit = if block < h.full_blocks() {
            self.container
                .read_bits(block as usize * k, k, ledger)
                .map(|idx| self.codewords[index_value(&idx)].get((i % b) as usize))
        } else {
            let offset = h.full_blocks() as usize * k + (i - block * b) as usize;
            self.container.read_bits(offset, 1, ledger).map(|v| v.get(0))
        };
        let queries = ledger.end_call();
        Ok((bit?, queries))
    }

    pub fn decompress_all(&self) -> Result<BitVector> {
        let h = self.container.header();
        let k = h.code_bits as usize;
        let full = h.full_blocks() as usize;
        let blocks: Vec<BitVector> = (0..full)
            .into_par_iter()
            .map(|j| {
                let mut ledger = QueryLedger::new();
                self.container
                    .read_bits(j * k, k, &mut ledger)
                    .map(|idx| self.codewords[index_value(&idx)].clone())
            })
            .collect::<Result<_>>()?;
        let mut out = BitVector::zeros(0);
        for blk in &blocks {
            out.extend_from(blk);
        }
        let mut ledger = QueryLedger::new();
        out.extend_from(&self.container.read_bits(full * k, h.partial_len() as usize, &mut ledger)?);
        Ok(out)
    }
}

pub fn decode_symbol_lossy(c: &CompressedContainer, i: u64, ledger: &mut QueryLedger) -> Result<(bool, usize)> {
    LossyDecoder::new(c)?.decode_symbol(i, ledger)
}

pub fn decompress_lossy(c: &CompressedContainer) -> Result<BitVector> {
    LossyDecoder::new(c)?.decompress_all()
}
