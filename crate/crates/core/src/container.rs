//! The serialized compressed object and the ledger that meters payload reads.
//!
//! Layout (all integers big-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "LDSC"
//! 4       1     version (1)
//! 5       1     mode (0 lossless, 1 lossy)
//! 6       8     n, source length in symbols
//! 14      4     b, block length
//! 18      4     k, code bits per block
//! 22      8     numerator of p
//! 30      8     denominator of p
//! 38      4     length of the trailing raw block (n mod b)
//! 42      ...   lossy only: 2^k codewords of b bits, MSB-first, zero-padded
//!               to a byte, then 8 bytes of achieved distortion times 2^32
//! ...     ...   payload bits, MSB-first, zero-padded to a byte
//! ```
//!
//! The payload is private to this module and only [`CompressedContainer::read_bits`]
//! hands it out, charging every bit to a [`QueryLedger`].

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::stats::SourceModel;

pub const MAGIC: [u8; 4] = *b"LDSC";
pub const VERSION: u8 = 1;
/// Bytes in the fixed part of the header.
pub const FIXED_HEADER_LEN: usize = 42;
/// Largest `k` for which a lossy codebook is stored inline.
pub const MAX_LOSSY_CODE_BITS: u32 = 16;
/// Scale of the fixed-point distortion field.
pub const DISTORTION_SCALE: f64 = 4_294_967_296.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Lossless,
    Lossy,
}

impl Mode {
    fn to_byte(self) -> u8 {
        match self {
            Mode::Lossless => 0,
            Mode::Lossy => 1,
        }
    }

    fn from_byte(b: u8) -> Result<Self> {
        match b {
            0 => Ok(Mode::Lossless),
            1 => Ok(Mode::Lossy),
            other => Err(Error::Format(format!("unknown mode byte {other}"))),
        }
    }
}

/// Lossy-only header fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LossyParams {
    pub codebook: Vec<BitVector>,
    /// Achieved expected distortion times 2^32, rounded.
    pub distortion_fixed: u64,
}

impl LossyParams {
    pub fn new(codebook: Vec<BitVector>, distortion: f64) -> Self {
        Self {
            codebook,
            distortion_fixed: (distortion * DISTORTION_SCALE).round() as u64,
        }
    }

    pub fn distortion(&self) -> f64 {
        self.distortion_fixed as f64 / DISTORTION_SCALE
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub mode: Mode,
    pub n: u64,
    pub block_len: u32,
    pub code_bits: u32,
    pub model: SourceModel,
    pub lossy: Option<LossyParams>,
}

impl Header {
    pub fn lossless(n: u64, block_len: u32, code_bits: u32, model: SourceModel) -> Self {
        Self {
            mode: Mode::Lossless,
            n,
            block_len,
            code_bits,
            model,
            lossy: None,
        }
    }

    pub fn lossy(n: u64, block_len: u32, code_bits: u32, model: SourceModel, params: LossyParams) -> Self {
        Self {
            mode: Mode::Lossy,
            n,
            block_len,
            code_bits,
            model,
            lossy: Some(params),
        }
    }

    pub fn full_blocks(&self) -> u64 {
        self.n / self.block_len as u64
    }

    pub fn partial_len(&self) -> u32 {
        (self.n % self.block_len as u64) as u32
    }

    /// Payload length implied by the header.
    pub fn payload_bits(&self) -> u64 {
        self.full_blocks() * self.code_bits as u64 + self.partial_len() as u64
    }

    /// Serialized header size in bits, charged per call in strict ledgers.
    pub fn encoded_bits(&self) -> usize {
        8 * self.encoded_len()
    }

    fn encoded_len(&self) -> usize {
        FIXED_HEADER_LEN
            + self.lossy.as_ref().map_or(0, |l| {
                (l.codebook.len() * self.block_len as usize).div_ceil(8) + 8
            })
    }

    fn validate(&self) -> Result<()> {
        if self.block_len == 0 {
            return Err(Error::Format("block length must be positive".into()));
        }
        if self.code_bits > self.block_len {
            return Err(Error::Format(format!(
                "code bits {} exceed block length {}",
                self.code_bits, self.block_len
            )));
        }
        match (&self.mode, &self.lossy) {
            (Mode::Lossless, None) => Ok(()),
            (Mode::Lossy, Some(l)) => {
                if self.code_bits > MAX_LOSSY_CODE_BITS {
                    return Err(Error::Format(format!("lossy code bits {} too large", self.code_bits)));
                }
                if l.codebook.len() != 1usize << self.code_bits {
                    return Err(Error::Format(format!(
                        "codebook holds {} words, header implies {}",
                        l.codebook.len(),
                        1usize << self.code_bits
                    )));
                }
                if l.codebook.iter().any(|c| c.len() != self.block_len as usize) {
                    return Err(Error::Format("codeword length differs from block length".into()));
                }
                Ok(())
            }
            _ => Err(Error::Format("mode and lossy fields disagree".into())),
        }
    }
}

/// Per-call counter of payload bits read.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryLedger {
    strict: bool,
    open: Option<usize>,
    calls: u64,
    total: u64,
    max: usize,
    histogram: BTreeMap<usize, u64>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// A ledger that also charges the serialized header to every call.
    pub fn strict() -> Self {
        Self {
            strict: true,
            ..Self::default()
        }
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn begin_call(&mut self) {
        assert!(self.open.is_none(), "ledger call already open");
        self.open = Some(0);
    }

    /// Closes the current call and returns the bits it read.
    pub fn end_call(&mut self) -> usize {
        let n = self.open.take().expect("no ledger call open");
        self.calls += 1;
        self.total += n as u64;
        self.max = self.max.max(n);
        *self.histogram.entry(n).or_default() += 1;
        n
    }

    fn record(&mut self, bits: usize) {
        match self.open.as_mut() {
            Some(c) => *c += bits,
            None if bits == 0 => {}
            None => {
                self.begin_call();
                self.open = Some(bits);
                self.end_call();
            }
        }
    }

    /// Header bits count only in strict mode.
    pub fn charge_header(&mut self, bits: usize) {
        if self.strict {
            self.record(bits);
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }

    pub fn total_bits(&self) -> u64 {
        self.total
    }

    /// Largest single-call read.
    pub fn max(&self) -> usize {
        self.max
    }

    pub fn histogram(&self) -> &BTreeMap<usize, u64> {
        &self.histogram
    }

    /// Folds another ledger into this one. Commutative and associative.
    pub fn merge(&mut self, other: &QueryLedger) {
        self.calls += other.calls;
        self.total += other.total;
        self.max = self.max.max(other.max);
        for (&k, &v) in &other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedContainer {
    header: Header,
    payload: BitVector,
}

impl CompressedContainer {
    pub fn new(header: Header, payload: BitVector) -> Result<Self> {
        header.validate()?;
        if payload.len() as u64 != header.payload_bits() {
            return Err(Error::Format(format!(
                "payload has {} bits, header implies {}",
                payload.len(),
                header.payload_bits()
            )));
        }
        Ok(Self { header, payload })
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    pub fn payload_len(&self) -> usize {
        self.payload.len()
    }

    /// The only path to payload bits.
    pub fn read_bits(&self, offset: usize, len: usize, ledger: &mut QueryLedger) -> Result<BitVector> {
        if offset.checked_add(len).is_none_or(|end| end > self.payload.len()) {
            return Err(Error::OutOfRange {
                offset,
                len,
                payload_len: self.payload.len(),
            });
        }
        ledger.record(len);
        Ok(self.payload.slice(offset, len))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let h = &self.header;
        let mut out = Vec::with_capacity(h.encoded_len() + self.payload.len().div_ceil(8));
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(h.mode.to_byte());
        out.extend_from_slice(&h.n.to_be_bytes());
        out.extend_from_slice(&h.block_len.to_be_bytes());
        out.extend_from_slice(&h.code_bits.to_be_bytes());
        out.extend_from_slice(&h.model.numerator().to_be_bytes());
        out.extend_from_slice(&h.model.denominator().to_be_bytes());
        out.extend_from_slice(&h.partial_len().to_be_bytes());
        if let Some(l) = &h.lossy {
            let mut bits = BitVector::zeros(0);
            for c in &l.codebook {
                bits.extend_from(c);
            }
            out.extend_from_slice(&pack_msb_first(&bits));
            out.extend_from_slice(&l.distortion_fixed.to_be_bytes());
        }
        out.extend_from_slice(&pack_msb_first(&self.payload));
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let mode = Mode::from_byte(r.u8()?)?;
        let n = r.u64()?;
        let block_len = r.u32()?;
        let code_bits = r.u32()?;
        let (num, den) = (r.u64()?, r.u64()?);
        let model = SourceModel::from_ratio(num, den)
            .map_err(|e| Error::Format(format!("bad probability field: {e}")))?;
        if SourceModel::from_ratio(num, den)?.numerator() != num {
            return Err(Error::Format(format!("probability {num}/{den} is not in lowest terms")));
        }
        let partial = r.u32()?;
        if block_len == 0 {
            return Err(Error::Format("block length must be positive".into()));
        }
        if partial as u64 != n % block_len as u64 {
            return Err(Error::Format(format!(
                "partial block length {partial} inconsistent with n={n}, b={block_len}"
            )));
        }
        let lossy = match mode {
            Mode::Lossless => None,
            Mode::Lossy => {
                if code_bits > MAX_LOSSY_CODE_BITS || code_bits > block_len {
                    return Err(Error::Format(format!("lossy code bits {code_bits} out of range")));
                }
                let m = 1usize << code_bits;
                let b = block_len as usize;
                let bits = r.bits(m * b)?;
                let codebook = (0..m).map(|i| bits.slice(i * b, b)).collect();
                let distortion_fixed = r.u64()?;
                Some(LossyParams {
                    codebook,
                    distortion_fixed,
                })
            }
        };
        let header = Header {
            mode,
            n,
            block_len,
            code_bits,
            model,
            lossy,
        };
        header.validate()?;
        let payload_bits = usize::try_from(header.payload_bits())
            .map_err(|_| Error::Format("payload length overflows".into()))?;
        let payload = r.bits(payload_bits)?;
        if r.pos != bytes.len() {
            return Err(Error::Format(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        Self::new(header, payload)
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn read_from(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}

/// Packs bits MSB-first into bytes, zero-padding the last byte.
pub fn pack_msb_first(bits: &BitVector) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for i in 0..bits.len() {
        if bits.get(i) {
            out[i / 8] |= 0x80 >> (i % 8);
        }
    }
    out
}

/// Reads `len` bits packed MSB-first. Fails if bytes are short.
pub fn unpack_msb_first(bytes: &[u8], len: usize) -> Result<BitVector> {
    if bytes.len() * 8 < len {
        return Err(Error::Format(format!("{} bytes cannot hold {len} bits", bytes.len())));
    }
    let mut v = BitVector::zeros(len);
    for i in 0..len {
        if bytes[i / 8] & (0x80 >> (i % 8)) != 0 {
            v.set(i, true);
        }
    }
    Ok(v)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        if end > self.bytes.len() {
            return Err(Error::Format(format!("truncated at byte {}", self.bytes.len())));
        }
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }

    /// `len` bits padded to a byte; nonzero padding is rejected.
    fn bits(&mut self, len: usize) -> Result<BitVector> {
        let chunk = self.take(len.div_ceil(8))?;
        if !len.is_multiple_of(8) {
            let last = chunk[chunk.len() - 1];
            if last & (0xFFu8 >> (len % 8)) != 0 {
                return Err(Error::Format("nonzero padding bits".into()));
            }
        }
        unpack_msb_first(chunk, len)
    }
}
