//! Dense linear algebra over the two-element field.
//!
//! Vectors pack coordinate `i` into bit `i % 64` of word `i / 64`, so the
//! least-significant bit of a packed integer is coordinate 0. With that
//! convention the integer order of packed vectors is the order used for
//! tie-breaking throughout the crate.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest subspace dimension whose elements we are willing to enumerate.
pub const MAX_ENUMERATED_DIM: usize = 30;

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Unit vector with coordinate `i` set.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    /// Builds a vector of `len` coordinates from the low bits of `value`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64, "from_u64 supports at most 64 coordinates");
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Packs the vector into an integer. Panics beyond 64 coordinates.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64, "vector of length {} does not fit in u64", self.len);
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "coordinate {i} out of range for length {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "coordinate {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn hamming_distance(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len, "length mismatch in distance");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Copies coordinates `[start, start + len)` into a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    /// Appends all coordinates of `other`.
    pub fn extend_from(&mut self, other: &BitVector) {
        let start = self.len;
        self.len += other.len;
        self.words.resize(self.len.div_ceil(64), 0);
        for i in 0..other.len {
            if other.get(i) {
                self.set(start + i, true);
            }
        }
    }

    pub fn push(&mut self, bit: bool) {
        self.len += 1;
        if self.words.len() < self.len.div_ceil(64) {
            self.words.push(0);
        }
        self.set(self.len - 1, bit);
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Coordinates in index order, coordinate 0 first.
impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Domain(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitVector::from_bools(&bits))
    }
}

/// A dense matrix over GF(2), stored as rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![BitVector::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
            cols: n,
        }
    }

    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self> {
        let cols = rows
            .first()
            .map(BitVector::len)
            .ok_or_else(|| Error::Domain("matrix needs at least one row".into()))?;
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Domain("rows have different lengths".into()));
        }
        Ok(Self { rows, cols })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.rows[r].set(c, bit)
    }

    /// Column `c` as a vector of length `nrows`.
    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    /// Row-vector product `v · self`.
    pub fn mul_left(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.nrows(), "vector length must equal row count");
        let mut out = BitVector::zeros(self.cols);
        for (i, row) in self.rows.iter().enumerate() {
            if v.get(i) {
                out.xor_assign(row);
            }
        }
        out
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        echelon(self.rows.clone()).len()
    }

    /// Basis of the left kernel `{v : v · self = 0}`.
    pub fn kernel_basis(&self) -> SubspaceBasis {
        let n = self.nrows();
        // Eliminate on [self | I]; rows whose left part vanishes carry kernel vectors.
        let mut work: Vec<(BitVector, BitVector)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), BitVector::unit(n, i)))
            .collect();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            let Some(found) = (pivot_row..work.len()).find(|&r| work[r].0.get(col)) else {
                continue;
            };
            work.swap(pivot_row, found);
            let (pl, pr) = work[pivot_row].clone();
            for (r, (left, right)) in work.iter_mut().enumerate() {
                if r != pivot_row && left.get(col) {
                    left.xor_assign(&pl);
                    right.xor_assign(&pr);
                }
            }
            pivot_row += 1;
        }
        let kernel = work.into_iter().skip(pivot_row).map(|(_, right)| right).collect();
        SubspaceBasis::span_of(n, kernel)
    }
}

/// Reduced row-echelon form of the span of `vectors`, zero rows dropped.
///
/// Pivots are lowest set coordinates; every pivot column holds exactly one
/// one. Rows are sorted by pivot, which makes the result a canonical
/// representative of the span.
fn echelon(mut rows: Vec<BitVector>) -> Vec<BitVector> {
    let mut out: Vec<BitVector> = Vec::new();
    for mut v in rows.drain(..) {
        for b in &out {
            let p = b.first_one().expect("basis rows are nonzero");
            if v.get(p) {
                v.xor_assign(b);
            }
        }
        if let Some(p) = v.first_one() {
            for b in out.iter_mut() {
                if b.get(p) {
                    b.xor_assign(&v);
                }
            }
            out.push(v);
        }
    }
    out.sort_by_key(|b| b.first_one());
    out
}

/// A subspace of GF(2)^n held as a reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    basis: Vec<BitVector>,
}

impl SubspaceBasis {
    /// Subspace spanned by linearly independent `vectors`.
    pub fn new(ambient_dim: usize, vectors: Vec<BitVector>) -> Result<Self> {
        let k = vectors.len();
        let s = Self::span_of(ambient_dim, vectors);
        if s.dimension() != k {
            return Err(Error::Domain(format!(
                "{k} vectors are linearly dependent (span has dimension {})",
                s.dimension()
            )));
        }
        Ok(s)
    }

    /// Span of arbitrary vectors; dependent ones are dropped.
    pub fn span_of(ambient_dim: usize, vectors: Vec<BitVector>) -> Self {
        assert!(
            vectors.iter().all(|v| v.len() == ambient_dim),
            "vector length must equal ambient dimension"
        );
        Self {
            ambient_dim,
            basis: echelon(vectors),
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| BitVector::unit(ambient_dim, i)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        let mut v = v.clone();
        for b in &self.basis {
            let p = b.first_one().expect("basis rows are nonzero");
            if v.get(p) {
                v.xor_assign(b);
            }
        }
        v.is_zero()
    }

    /// Every element of the span, visited in Gray-code order.
    pub fn elements(&self) -> Result<impl Iterator<Item = BitVector> + '_> {
        let k = self.dimension();
        if k > MAX_ENUMERATED_DIM {
            return Err(Error::Capacity(format!(
                "cannot enumerate a subspace of dimension {k} (limit {MAX_ENUMERATED_DIM})"
            )));
        }
        let mut current = BitVector::zeros(self.ambient_dim);
        let mut step = 0u64;
        Ok(std::iter::from_fn(move || {
            if step == 1u64 << k {
                return None;
            }
            if step > 0 {
                let flip = step.trailing_zeros() as usize;
                current.xor_assign(&self.basis[flip]);
            }
            step += 1;
            Some(current.clone())
        }))
    }

    /// Product-Bernoulli(p) mass of the subspace.
    pub fn probability(&self, p: f64) -> Result<f64> {
        subspace_probability(self, p)
    }
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("probability {p} not in (0, 1)")))
    }
}

/// Sum of `p^H(v) (1-p)^(n-H(v))` over every `v` in the span of `u`.
pub fn subspace_probability(u: &SubspaceBasis, p: f64) -> Result<f64> {
    check_probability(p)?;
    let n = u.ambient_dim();
    let masses: Vec<f64> = (0..=n)
        .map(|w| p.powi(w as i32) * (1.0 - p).powi((n - w) as i32))
        .collect();
    Ok(u.elements()?.map(|v| masses[v.weight()]).sum())
}

/// The sandwich `(min(p,1-p)^(n-k), max(p,1-p)^(n-k))` on a k-dimensional subspace's mass.
pub fn subspace_mass_bounds(u: &SubspaceBasis, p: f64) -> Result<(f64, f64)> {
    check_probability(p)?;
    let codim = (u.ambient_dim() - u.dimension()) as i32;
    let lo = p.min(1.0 - p);
    let hi = p.max(1.0 - p);
    Ok((lo.powi(codim), hi.powi(codim)))
}

/// Largest ambient dimension accepted by [`enumerate_all_subspaces`].
pub const MAX_SUBSPACE_ENUM_DIM: usize = 5;

/// Every subspace of GF(2)^n exactly once, each in reduced-echelon form.
pub fn enumerate_all_subspaces(n: usize) -> Result<impl Iterator<Item = SubspaceBasis>> {
    if n == 0 || n > MAX_SUBSPACE_ENUM_DIM {
        return Err(Error::Capacity(format!(
            "subspace enumeration supports 1 <= n <= {MAX_SUBSPACE_ENUM_DIM}, got {n}"
        )));
    }
    let mut out = Vec::new();
    // A reduced-echelon basis is a pivot set plus free entries to the right
    // of each pivot outside other pivot columns.
    for pivots in 0u32..(1 << n) {
        let pivot_cols: Vec<usize> = (0..n).filter(|c| pivots >> c & 1 == 1).collect();
        let free: Vec<(usize, usize)> = pivot_cols
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| {
                (pc + 1..n)
                    .filter(move |c| pivots >> c & 1 == 0)
                    .map(move |c| (r, c))
            })
            .collect();
        for fill in 0u64..(1 << free.len()) {
            let mut rows: Vec<BitVector> = pivot_cols.iter().map(|&pc| BitVector::unit(n, pc)).collect();
            for (j, &(r, c)) in free.iter().enumerate() {
                if fill >> j & 1 == 1 {
                    rows[r].set(c, true);
                }
            }
            out.push(SubspaceBasis { ambient_dim: n, basis: rows });
        }
    }
    Ok(out.into_iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(5).rank(), 5);
        assert_eq!(BitMatrix::zeros(3, 4).rank(), 0);
        let m = BitMatrix::from_rows(vec![bv("110"), bv("011"), bv("101")]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(BitMatrix::identity(4).kernel_basis().dimension(), 0);
        let z = BitMatrix::zeros(3, 2).kernel_basis();
        assert_eq!(z, SubspaceBasis::full(3));

        let col = BitMatrix::from_rows(vec![bv("1"), bv("1"), bv("0")]).unwrap();
        let ker = col.kernel_basis();
        assert_eq!(ker.dimension(), 2);
        // Brute force over all 8 vectors.
        let expected: HashSet<u64> = (0..8u64)
            .filter(|&x| col.mul_left(&BitVector::from_u64(x, 3)).is_zero())
            .collect();
        let got: HashSet<u64> = ker.elements().unwrap().map(|v| v.to_u64()).collect();
        assert_eq!(got, expected);
        assert!(ker.contains(&bv("110")));
        assert!(ker.contains(&bv("001")));
    }

    #[test]
    fn subspace_probability_examples() {
        let full = SubspaceBasis::full(4);
        assert!((subspace_probability(&full, 0.3).unwrap() - 1.0).abs() < 1e-12);
        let u = SubspaceBasis::new(3, vec![bv("100")]).unwrap();
        assert!((subspace_probability(&u, 0.3).unwrap() - 0.49).abs() < 1e-12);
        let zero = SubspaceBasis::zero(3);
        assert!((subspace_probability(&zero, 0.3).unwrap() - 0.343).abs() < 1e-12);
    }

    #[test]
    fn subspace_bound_examples() {
        let u = SubspaceBasis::new(3, vec![bv("100")]).unwrap();
        let (lo, hi) = subspace_mass_bounds(&u, 0.3).unwrap();
        assert!((lo - 0.09).abs() < 1e-12 && (hi - 0.49).abs() < 1e-12);
        assert_eq!(subspace_mass_bounds(&SubspaceBasis::full(3), 0.3).unwrap(), (1.0, 1.0));
        let (lo, hi) = subspace_mass_bounds(&SubspaceBasis::zero(2), 0.5).unwrap();
        assert_eq!((lo, hi), (0.25, 0.25));
        assert_eq!(subspace_probability(&SubspaceBasis::zero(2), 0.5).unwrap(), 0.25);
    }

    #[test]
    fn subspace_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_all_subspaces(n).unwrap().count()).collect();
        assert_eq!(counts, vec![2, 5, 16, 67, 374]);
        let distinct: HashSet<_> = enumerate_all_subspaces(4).unwrap().collect();
        assert_eq!(distinct.len(), 67);
        assert!(enumerate_all_subspaces(6).is_err());
        assert!(enumerate_all_subspaces(0).is_err());
    }

    #[test]
    fn enumerated_bases_are_canonical() {
        for u in enumerate_all_subspaces(4).unwrap() {
            let again = SubspaceBasis::span_of(4, u.basis().to_vec());
            assert_eq!(again, u);
        }
    }

    #[test]
    fn uniform_measure_is_exact() {
        for u in enumerate_all_subspaces(4).unwrap() {
            let expected = 2f64.powi(u.dimension() as i32 - 4);
            assert_eq!(subspace_probability(&u, 0.5).unwrap(), expected);
        }
    }

    #[test]
    fn dependent_vectors_rejected() {
        assert!(SubspaceBasis::new(3, vec![bv("110"), bv("011"), bv("101")]).is_err());
        assert!(subspace_probability(&SubspaceBasis::zero(2), 1.0).is_err());
    }

    #[test]
    fn packing_order() {
        let v = BitVector::from_u64(0b011, 3);
        assert_eq!(v.to_string(), "110");
        assert_eq!(bv("1100").to_u64(), 3);
    }
}
