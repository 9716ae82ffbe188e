//! Almost-lossless compressor built by concatenating per-block top-set codes.
//!
//! The source is cut into `floor(n / b)` blocks of `b` symbols, each encoded
//! to `k = ceil(r b)` bits with a [`TopSetCode`]; a trailing short block is
//! stored raw. Recovering symbol `i` reads only the `k` bits of its own block
//! (or the single raw bit for the tail), so the locality is `k`.

use rayon::prelude::*;

use crate::container::{CompressedContainer, Header, Mode, QueryLedger};
use crate::enumerative::{TopSetCode, MAX_BLOCK_LEN};
use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::stats::{error_exponent, SourceModel};

/// A chosen block code together with its exact error.
#[derive(Clone, Debug, PartialEq)]
pub struct LosslessPlan {
    pub n: u64,
    pub block_len: usize,
    pub code_bits: usize,
    pub model: SourceModel,
    /// Budget the plan was searched against, if any.
    pub epsilon_target: Option<f64>,
    /// Probability that one block falls outside the code.
    pub block_error: f64,
    /// Block length the search started from, `ceil(log2 n / E(r))`.
    pub start_block_len: usize,
}

impl LosslessPlan {
    /// Compressed bits per source symbol inside a block.
    pub fn rate(&self) -> f64 {
        self.code_bits as f64 / self.block_len as f64
    }

    /// Most payload bits any single-symbol decode reads.
    pub fn locality(&self) -> usize {
        self.code_bits
    }

    pub fn full_blocks(&self) -> u64 {
        self.n / self.block_len as u64
    }

    pub fn partial_len(&self) -> usize {
        (self.n % self.block_len as u64) as usize
    }

    pub fn payload_bits(&self) -> u64 {
        self.full_blocks() * self.code_bits as u64 + self.partial_len() as u64
    }

    /// Constant `C` in `b = C log2 n`.
    pub fn implied_c(&self) -> f64 {
        self.block_len as f64 / (self.n as f64).log2()
    }

    pub fn exact_error(&self) -> f64 {
        exact_error(self)
    }

    pub fn code(&self) -> Result<TopSetCode> {
        TopSetCode::new(self.block_len, self.code_bits, self.model)
    }
}

/// `1 - (1 - eps_b)^floor(n/b)`; the raw tail never errs.
pub fn exact_error(plan: &LosslessPlan) -> f64 {
    total_error(plan.block_error, plan.full_blocks())
}

fn total_error(block_error: f64, blocks: u64) -> f64 {
    if block_error <= 0.0 || blocks == 0 {
        return 0.0;
    }
    if block_error >= 1.0 {
        return 1.0;
    }
    -f64::exp_m1(blocks as f64 * f64::ln_1p(-block_error))
}

fn code_bits_for(block_len: usize, rate: f64) -> usize {
    ((block_len as f64 * rate - 1e-9).ceil().max(0.0) as usize).min(block_len)
}

/// Plan with an explicit block length and `k = ceil(rate * b)`.
pub fn plan_fixed(n: u64, block_len: usize, rate: f64, model: &SourceModel) -> Result<LosslessPlan> {
    plan_fixed_bits(n, block_len, code_bits_for(block_len, rate), model)
}

/// Plan with explicit block length and code bits.
pub fn plan_fixed_bits(n: u64, block_len: usize, code_bits: usize, model: &SourceModel) -> Result<LosslessPlan> {
    let code = TopSetCode::new(block_len, code_bits, *model)?;
    Ok(LosslessPlan {
        n,
        block_len,
        code_bits,
        model: *model,
        epsilon_target: None,
        block_error: code.block_error(),
        start_block_len: block_len,
    })
}

/// Smallest block length at or above `ceil(log2 n / E(r))` whose exact
/// end-to-end error meets `epsilon`.
pub fn plan(n: u64, rate: f64, epsilon: f64, model: &SourceModel) -> Result<LosslessPlan> {
    plan_with_cap(n, rate, epsilon, model, MAX_BLOCK_LEN)
}

pub fn plan_with_cap(
    n: u64,
    rate: f64,
    epsilon: f64,
    model: &SourceModel,
    max_block_len: usize,
) -> Result<LosslessPlan> {
    if n == 0 {
        return Err(Error::Domain("source length must be positive".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("error budget {epsilon} not in (0, 1)")));
    }
    if !(rate > 0.0) {
        return Err(Error::Domain(format!("rate {rate} must be positive")));
    }
    if rate >= 1.0 {
        let mut p = plan_fixed_bits(n, 1, 1, model)?;
        p.epsilon_target = Some(epsilon);
        return Ok(p);
    }
    let h = model.entropy();
    if rate <= h {
        return Err(Error::Infeasible(format!(
            "rate {rate} does not exceed the source entropy {h:.6} (gap {:.6}); \
             the block error stays bounded away from zero as blocks grow",
            h - rate
        )));
    }
    let exponent = error_exponent(rate, model);
    let upper = max_block_len.min(MAX_BLOCK_LEN).min(usize::try_from(n).unwrap_or(usize::MAX));
    let start = (((n as f64).log2() / exponent).ceil().max(1.0) as usize).min(upper);
    let mut best: Option<(usize, f64)> = None;
    for b in start..=upper {
        let k = code_bits_for(b, rate);
        let code = TopSetCode::new(b, k, *model)?;
        let err = total_error(code.block_error(), n / b as u64);
        if err <= epsilon {
            return Ok(LosslessPlan {
                n,
                block_len: b,
                code_bits: k,
                model: *model,
                epsilon_target: Some(epsilon),
                block_error: code.block_error(),
                start_block_len: start,
            });
        }
        if best.is_none_or(|(_, e)| err < e) {
            best = Some((b, err));
        }
    }
    let (b, err) = best.expect("search range is nonempty");
    Err(Error::Infeasible(format!(
        "no block length in {start}..={upper} meets error {epsilon} at rate {rate} for n={n}; \
         best was b={b} with error {err:.6e} (search starts at ceil(log2 n / E) with E={exponent:.6})"
    )))
}

/// Plans every length of a sweep.
pub fn plan_sweep(ns: &[u64], rate: f64, epsilon: f64, model: &SourceModel) -> Result<Vec<LosslessPlan>> {
    ns.par_iter().map(|&n| plan(n, rate, epsilon, model)).collect()
}

/// Blocks that fall outside the code and would decode to the most probable block.
pub fn uncovered_blocks(x: &BitVector, plan: &LosslessPlan) -> Result<u64> {
    check_len(x, plan.n)?;
    let code = plan.code()?;
    let b = plan.block_len;
    (0..plan.full_blocks() as usize)
        .into_par_iter()
        .map(|j| code.encode(&x.slice(j * b, b)).map(|(_, covered)| u64::from(!covered)))
        .sum()
}

fn check_len(x: &BitVector, n: u64) -> Result<()> {
    if x.len() as u64 != n {
        return Err(Error::Domain(format!("source has {} symbols, plan expects {n}", x.len())));
    }
    Ok(())
}

pub fn compress(x: &BitVector, plan: &LosslessPlan) -> Result<CompressedContainer> {
    check_len(x, plan.n)?;
    let code = plan.code()?;
    let b = plan.block_len;
    let full = plan.full_blocks() as usize;
    let words: Vec<BitVector> = (0..full)
        .into_par_iter()
        .map(|j| code.encode(&x.slice(j * b, b)).map(|(cw, _)| cw))
        .collect::<Result<_>>()?;
    let mut payload = BitVector::zeros(0);
    for w in &words {
        payload.extend_from(w);
    }
    payload.extend_from(&x.slice(full * b, plan.partial_len()));
    let header = Header::lossless(plan.n, to_u32(b)?, to_u32(plan.code_bits)?, plan.model);
    CompressedContainer::new(header, payload)
}

pub(crate) fn to_u32(v: usize) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Capacity(format!("{v} does not fit a header field")))
}

/// Random-access decoder over a lossless container.
pub struct LosslessDecoder<'a> {
    container: &'a CompressedContainer,
    code: TopSetCode,
}

impl<'a> LosslessDecoder<'a> {
    pub fn new(container: &'a CompressedContainer) -> Result<Self> {
        let h = container.header();
        if h.mode != Mode::Lossless {
            return Err(Error::Domain("container is not lossless".into()));
        }
        let code = TopSetCode::new(h.block_len as usize, h.code_bits as usize, h.model)?;
        Ok(Self { container, code })
    }

    pub fn len(&self) -> u64 {
        self.container.header().n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Symbol `i` and the payload bits read to produce it.
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
            let cw = self.container.read_bits(block as usize * k, k, ledger);
            match cw {
                Ok(cw) => Ok(self.code.decode_symbol(&cw, (i % b) as usize)),
                Err(e) => Err(e),
            }
        } else {
            let offset = h.full_blocks() as usize * k + (i - block * b) as usize;
            self.container.read_bits(offset, 1, ledger).map(|v| v.get(0))
        };
        let queries = ledger.end_call();
        Ok((bit?, queries))
    }

    /// Decodes every symbol, one block per work unit.
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
                    .map(|cw| self.code.decode(&cw))
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

/// Single-shot symbol decode.
pub fn decode_symbol(c: &CompressedContainer, i: u64, ledger: &mut QueryLedger) -> Result<(bool, usize)> {
    LosslessDecoder::new(c)?.decode_symbol(i, ledger)
}

pub fn decompress(c: &CompressedContainer) -> Result<BitVector> {
    LosslessDecoder::new(c)?.decompress_all()
}
