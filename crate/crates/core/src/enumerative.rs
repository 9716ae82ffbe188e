//! Fixed-length block code over the most probable sequences.
//!
//! A [`TopSetCode`] indexes the `2^k` most probable binary blocks of length
//! `b`. Blocks are ordered by weight (ascending when 0 is the likelier symbol,
//! descending otherwise) and, within a weight class, by ascending packed
//! integer value. Within a class the rank of a block with ones at positions
//! `c_1 < c_2 < ... < c_w` is `sum_i C(c_i, i)`, the combinatorial number
//! system, so no table of sequences is ever materialized.
//!
//! Blocks up to 63 symbols use `u128` arithmetic; longer blocks switch to
//! arbitrary-precision integers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::stats::SourceModel;

/// Longest block accepted by [`TopSetCode`].
pub const MAX_BLOCK_LEN: usize = 8192;

/// Longest block served by the fixed-width fast path.
pub const SMALL_BLOCK_LEN: usize = 63;

trait Count: Clone + Ord + Send + Sync + std::fmt::Debug {
    fn from_u64(v: u64) -> Self;
    fn pow2(k: usize) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    /// Exact `self * mul / div`; callers guarantee divisibility.
    fn mul_div(&self, mul: u64, div: u64) -> Self;
    fn is_zero(&self) -> bool;
    fn log2(&self) -> f64;
    fn to_f64(&self) -> f64;
    fn bit(&self, i: usize) -> bool;
    fn set_bit(&mut self, i: usize);
    fn to_big(&self) -> BigUint;
    fn from_big(v: &BigUint) -> Self;
}

impl Count for u128 {
    fn from_u64(v: u64) -> Self {
        v as u128
    }
    fn pow2(k: usize) -> Self {
        1u128 << k
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_div(&self, mul: u64, div: u64) -> Self {
        self * mul as u128 / div as u128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn log2(&self) -> f64 {
        (*self as f64).log2()
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    fn bit(&self, i: usize) -> bool {
        i < 128 && (self >> i) & 1 == 1
    }
    fn set_bit(&mut self, i: usize) {
        *self |= 1u128 << i;
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
    fn from_big(v: &BigUint) -> Self {
        v.to_u128().expect("index fits the fast path")
    }
}

impl Count for BigUint {
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn pow2(k: usize) -> Self {
        BigUint::one() << k
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_div(&self, mul: u64, div: u64) -> Self {
        let mut v = self * mul;
        v /= div;
        v
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn log2(&self) -> f64 {
        let bits = self.bits();
        if bits <= 64 {
            return (self.to_u64().unwrap() as f64).log2();
        }
        let shift = bits - 64;
        let top = (self >> shift).to_u64().unwrap();
        (top as f64).log2() + shift as f64
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY)
    }
    fn bit(&self, i: usize) -> bool {
        BigUint::bit(self, i as u64)
    }
    fn set_bit(&mut self, i: usize) {
        BigUint::set_bit(self, i as u64, true)
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
    fn from_big(v: &BigUint) -> Self {
        v.clone()
    }
}

fn binomial<T: Count>(n: usize, k: usize) -> T {
    if k > n {
        return T::from_u64(0);
    }
    let k = k.min(n - k);
    let mut v = T::from_u64(1);
    for i in 0..k {
        v = v.mul_div((n - i) as u64, (i + 1) as u64);
    }
    v
}

/// One weight class in code order.
#[derive(Clone, Debug)]
struct Class<T> {
    weight: usize,
    /// Code index of the first sequence in this class.
    offset: T,
    /// Sequences of this class that fall inside the code.
    covered: T,
    /// `C(b, w)`.
    size: T,
}

#[derive(Clone, Debug)]
struct Table<T> {
    b: usize,
    classes: Vec<Class<T>>,
    /// `class_of[w]` is the position of weight `w` in `classes`, if covered.
    class_of: Vec<Option<usize>>,
}

impl<T: Count> Table<T> {
    fn build(b: usize, k: usize, descending: bool) -> Self {
        let capacity = T::pow2(k);
        let mut classes = Vec::new();
        let mut class_of = vec![None; b + 1];
        let mut offset = T::from_u64(0);
        let mut size = T::from_u64(1);
        for step in 0..=b {
            if offset >= capacity {
                break;
            }
            let w = if descending { b - step } else { step };
            if step > 0 {
                // C(b, w) from the neighbouring class.
                size = if descending {
                    size.mul_div((w + 1) as u64, (b - w) as u64)
                } else {
                    size.mul_div((b - w + 1) as u64, w as u64)
                };
            }
            let room = capacity.sub(&offset);
            let covered = if size < room { size.clone() } else { room };
            class_of[w] = Some(classes.len());
            let next = offset.add(&covered);
            classes.push(Class {
                weight: w,
                offset,
                covered,
                size: size.clone(),
            });
            offset = next;
        }
        Self { b, classes, class_of }
    }

    fn rank(&self, x: &BitVector) -> Option<T> {
        let w = x.weight();
        let class = &self.classes[self.class_of[w]?];
        let mut r = T::from_u64(0);
        let mut m = w;
        let mut v: T = binomial(self.b - 1, m);
        for j in (0..self.b).rev() {
            if m == 0 || j + 1 == m {
                break;
            }
            if x.get(j) {
                r = r.add(&v);
                v = v.mul_div(m as u64, (j - m + 1) as u64);
                m -= 1;
            }
            if j > 0 {
                v = v.mul_div((j - m) as u64, j as u64);
            }
        }
        (r < class.covered).then(|| class.offset.add(&r))
    }

    fn locate(&self, index: &T) -> &Class<T> {
        let pos = self.classes.partition_point(|c| &c.offset <= index);
        &self.classes[pos - 1]
    }

    /// Walks the class-rank decomposition from the top coordinate down to
    /// `stop`, calling `emit(j, bit)` for each visited coordinate.
    fn walk(&self, index: &T, stop: usize, mut emit: impl FnMut(usize, bool)) {
        let class = self.locate(index);
        let mut r = index.sub(&class.offset);
        let mut m = class.weight;
        let mut v: T = binomial(self.b - 1, m);
        for j in (stop..self.b).rev() {
            if m == 0 {
                (stop..=j).for_each(|i| emit(i, false));
                return;
            }
            if j + 1 == m {
                (stop..=j).for_each(|i| emit(i, true));
                return;
            }
            let one = r >= v;
            emit(j, one);
            if one {
                r = r.sub(&v);
                v = v.mul_div(m as u64, (j - m + 1) as u64);
                m -= 1;
            }
            if j > 0 {
                v = v.mul_div((j - m) as u64, j as u64);
            }
        }
    }

    fn unrank(&self, index: &T) -> BitVector {
        let mut x = BitVector::zeros(self.b);
        self.walk(index, 0, |j, bit| {
            if bit {
                x.set(j, true)
            }
        });
        x
    }

    fn symbol(&self, index: &T, pos: usize) -> bool {
        let mut out = false;
        self.walk(index, pos, |j, bit| {
            if j == pos {
                out = bit
            }
        });
        out
    }

    fn index_from_bits(&self, bits: &BitVector) -> T {
        let k = bits.len();
        let mut v = T::from_u64(0);
        for i in 0..k {
            if bits.get(i) {
                v.set_bit(k - 1 - i);
            }
        }
        v
    }

    fn index_to_bits(index: &T, k: usize) -> BitVector {
        let mut out = BitVector::zeros(k);
        for i in 0..k {
            if index.bit(k - 1 - i) {
                out.set(i, true);
            }
        }
        out
    }

    /// `(covered mass, uncovered mass)` summed per weight class.
    fn masses(&self, model: &SourceModel) -> (f64, f64) {
        let b = self.b;
        let (lp, lq) = (model.p().log2(), model.q().log2());
        let small = b <= SMALL_BLOCK_LEN;
        let mass = |count: &T, w: usize| -> f64 {
            if count.is_zero() {
                0.0
            } else if small {
                count.to_f64() * model.p().powi(w as i32) * model.q().powi((b - w) as i32)
            } else {
                (count.log2() + w as f64 * lp + (b - w) as f64 * lq).exp2()
            }
        };
        let mut covered = 0.0;
        let mut uncovered = 0.0;
        for c in &self.classes {
            covered += mass(&c.covered, c.weight);
            uncovered += mass(&c.size.sub(&c.covered), c.weight);
        }
        // Classes past the code boundary, with log2 C(b, w) by recurrence.
        let mut log_binom = 0.0f64;
        for w in 0..=b {
            if w > 0 {
                log_binom += ((b - w + 1) as f64 / w as f64).log2();
            }
            if self.class_of[w].is_none() {
                uncovered += (log_binom + w as f64 * lp + (b - w) as f64 * lq).exp2();
            }
        }
        (covered, uncovered)
    }
}

#[derive(Clone, Debug)]
enum Tables {
    Small(Table<u128>),
    Big(Table<BigUint>),
}

/// Block code over the `2^code_bits` most probable length-`block_len` sequences.
#[derive(Clone, Debug)]
pub struct TopSetCode {
    block_len: usize,
    code_bits: usize,
    model: SourceModel,
    tables: Tables,
    coverage: f64,
    block_error: f64,
}

impl TopSetCode {
    pub fn new(block_len: usize, code_bits: usize, model: SourceModel) -> Result<Self> {
        if block_len == 0 || block_len > MAX_BLOCK_LEN {
            return Err(Error::Capacity(format!(
                "block length {block_len} outside 1..={MAX_BLOCK_LEN}"
            )));
        }
        if code_bits > block_len {
            return Err(Error::Domain(format!(
                "code bits {code_bits} exceed block length {block_len}"
            )));
        }
        let b = block_len;
        let descending = model.ones_likely();
        let tables = if b <= SMALL_BLOCK_LEN {
            Tables::Small(Table::build(b, code_bits, descending))
        } else {
            Tables::Big(Table::build(b, code_bits, descending))
        };
        let (coverage, block_error) = match &tables {
            Tables::Small(t) => t.masses(&model),
            Tables::Big(t) => t.masses(&model),
        };
        let (coverage, block_error) = if code_bits == block_len {
            (1.0, 0.0)
        } else {
            (coverage.clamp(0.0, 1.0), block_error.clamp(0.0, 1.0))
        };
        Ok(Self {
            block_len,
            code_bits,
            model,
            tables,
            coverage,
            block_error,
        })
    }

    /// Same code, forced onto the arbitrary-precision path.
    #[cfg(test)]
    fn new_big(block_len: usize, code_bits: usize, model: SourceModel) -> Self {
        let mut code = Self::new(block_len, code_bits, model).unwrap();
        code.tables = Tables::Big(Table::build(block_len, code_bits, model.ones_likely()));
        code
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn code_bits(&self) -> usize {
        self.code_bits
    }

    pub fn model(&self) -> &SourceModel {
        &self.model
    }

    /// Number of sequences in the code, `2^code_bits`.
    pub fn capacity(&self) -> BigUint {
        BigUint::one() << self.code_bits
    }

    pub fn rate(&self) -> f64 {
        self.code_bits as f64 / self.block_len as f64
    }

    /// Probability that a source block lies in the code.
    pub fn coverage_probability(&self) -> f64 {
        self.coverage
    }

    /// Probability that a source block lies outside the code, summed directly
    /// over the uncovered sequences.
    pub fn block_error(&self) -> f64 {
        self.block_error
    }

    fn check_len(&self, x: &BitVector) -> Result<()> {
        if x.len() != self.block_len {
            return Err(Error::Domain(format!(
                "block of length {} given to a code of length {}",
                x.len(),
                self.block_len
            )));
        }
        Ok(())
    }

    /// Position of `x` in code order, or `None` when `x` is not covered.
    pub fn rank(&self, x: &BitVector) -> Result<Option<BigUint>> {
        self.check_len(x)?;
        Ok(match &self.tables {
            Tables::Small(t) => t.rank(x).map(|v| v.to_big()),
            Tables::Big(t) => t.rank(x),
        })
    }

    pub fn unrank(&self, index: &BigUint) -> Result<BitVector> {
        if *index >= self.capacity() {
            return Err(Error::Domain(format!(
                "index {index} out of range for a {}-bit code",
                self.code_bits
            )));
        }
        Ok(match &self.tables {
            Tables::Small(t) => t.unrank(&u128::from_big(index)),
            Tables::Big(t) => t.unrank(index),
        })
    }

    /// Encodes a block as `code_bits` index bits, most significant first.
    /// Uncovered blocks map to index 0; the flag reports coverage.
    pub fn encode(&self, x: &BitVector) -> Result<(BitVector, bool)> {
        self.check_len(x)?;
        let k = self.code_bits;
        Ok(match &self.tables {
            Tables::Small(t) => match t.rank(x) {
                Some(i) => (Table::<u128>::index_to_bits(&i, k), true),
                None => (BitVector::zeros(k), false),
            },
            Tables::Big(t) => match t.rank(x) {
                Some(i) => (Table::<BigUint>::index_to_bits(&i, k), true),
                None => (BitVector::zeros(k), false),
            },
        })
    }

    /// Inverse of [`encode`](Self::encode) on covered blocks.
    pub fn decode(&self, codeword: &BitVector) -> BitVector {
        assert_eq!(codeword.len(), self.code_bits, "codeword length");
        match &self.tables {
            Tables::Small(t) => t.unrank(&t.index_from_bits(codeword)),
            Tables::Big(t) => t.unrank(&t.index_from_bits(codeword)),
        }
    }

    /// Symbol `pos` of the decoded block, without decoding coordinates below it.
    pub fn decode_symbol(&self, codeword: &BitVector, pos: usize) -> bool {
        assert_eq!(codeword.len(), self.code_bits, "codeword length");
        assert!(pos < self.block_len, "position {pos} outside block");
        match &self.tables {
            Tables::Small(t) => t.symbol(&t.index_from_bits(codeword), pos),
            Tables::Big(t) => t.symbol(&t.index_from_bits(codeword), pos),
        }
    }
}
