//! Dense vectors and matrices over GF(2).
//!
//! Coordinates are stored bit-packed in `u64` words. Public indices are
//! 0-based; the textual form lists coordinate 0 first, which is also the
//! least-significant bit when a vector is read as an integer.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A dense vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector::zeros(len);
        for w in v.words.iter_mut() {
            *w = u64::MAX;
        }
        v.clear_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from 0/1 integers; any nonzero entry counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector of length `len` with ones exactly at `support`.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = BitVector::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    /// The `len`-bit little-endian expansion of `value` (bit 0 first).
    pub fn from_int(value: u64, len: usize) -> Self {
        let mut v = BitVector::zeros(len);
        for i in 0..len.min(WORD) {
            if (value >> i) & 1 == 1 {
                v.set(i, true);
            }
        }
        v
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
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::Dimension(format!(
                "cannot add vectors of length {} and {}",
                self.len, other.len
            )));
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> Result<bool> {
        if self.len != other.len {
            return Err(Error::Dimension(format!(
                "cannot take inner product of lengths {} and {}",
                self.len, other.len
            )));
        }
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok(ones % 2 == 1)
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.support() {
            out.set(i, true);
        }
        for i in other.support() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Coordinates `start..end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> Result<BitVector> {
        if start > end || end > self.len {
            return Err(Error::IndexOutOfRange {
                index: end,
                len: self.len,
            });
        }
        let mut out = BitVector::zeros(end - start);
        for i in start..end {
            if self.get(i) {
                out.set(i - start, true);
            }
        }
        Ok(out)
    }

    /// Integer value with coordinate 0 as the least-significant bit.
    ///
    /// Panics if a coordinate at position 64 or beyond is set.
    pub fn int_value(&self) -> u64 {
        for (k, &w) in self.words.iter().enumerate().skip(1) {
            assert!(w == 0, "bit vector value exceeds 64 bits (word {k} nonzero)");
        }
        self.words.first().copied().unwrap_or(0)
    }

    /// Binary increment with the all-ones vector as a fixed point.
    ///
    /// The lowest zero coordinate becomes one and every coordinate below it
    /// is cleared.
    pub fn increase(&self) -> BitVector {
        let mut out = self.clone();
        match (0..self.len).find(|&i| !self.get(i)) {
            None => out,
            Some(z) => {
                for i in 0..z {
                    out.set(i, false);
                }
                out.set(z, true);
                out
            }
        }
    }

    /// Keeps the first `i` coordinates and zeroes the rest; length is unchanged.
    pub fn project(&self, i: usize) -> Result<BitVector> {
        if i > self.len {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len,
            });
        }
        let mut out = self.clone();
        for k in i..self.len {
            out.set(k, false);
        }
        Ok(out)
    }

    /// The first `i` coordinates, `1 <= i <= len`.
    pub fn truncate(&self, i: usize) -> Result<BitVector> {
        if i == 0 || i > self.len {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len,
            });
        }
        self.slice(0, i)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Hamming weight of `v`.
pub fn hamming_weight(v: &BitVector) -> usize {
    v.weight()
}

/// Integer value of `a`, least-significant coordinate first.
pub fn int_of_bits(a: &BitVector) -> u64 {
    a.int_value()
}

/// Number of bits used for weights of length-`n` vectors: `floor(log2 n) + 1`.
pub fn weight_bits(n: usize) -> usize {
    assert!(n >= 1, "weight bit-length is defined for n >= 1");
    (usize::BITS - n.leading_zeros()) as usize
}

/// A dense matrix over GF(2), stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of equal length. An empty row list gives a
    /// `0 x cols` matrix.
    pub fn from_rows(rows: Vec<BitVector>, cols: usize) -> Result<Self> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row {} has length {}, expected {}",
                i + 1,
                r.len(),
                cols
            )));
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Convenience constructor from 0/1 integer rows.
    pub fn from_bit_rows(rows: &[&[u8]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        BitMatrix::from_rows(rows.iter().map(|r| BitVector::from_bits(r)).collect(), cols)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVector> {
        self.data.iter()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                out.set(r, true);
            }
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].support() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `H · vᵀ`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "matrix has {} columns but vector has length {}",
                self.cols,
                v.len()
            )));
        }
        let mut out = BitVector::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.dot(v)? {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `v · M`.
    pub fn vec_mul(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector has length {} but matrix has {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = BitVector::zeros(self.cols);
        for r in v.support() {
            out.xor_assign(&self.data[r])?;
        }
        Ok(out)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let rows = self
            .data
            .iter()
            .map(|row| other.vec_mul(row))
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_rows(rows, other.cols)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot stack matrices with {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        BitMatrix::from_rows(data, self.cols)
    }

    /// Block-diagonal matrix with `copies` copies of `block`.
    pub fn block_diagonal(block: &BitMatrix, copies: usize) -> BitMatrix {
        let mut out = BitMatrix::zeros(block.rows * copies, block.cols * copies);
        for b in 0..copies {
            for r in 0..block.rows {
                for c in block.data[r].support() {
                    out.set(b * block.rows + r, b * block.cols + c, true);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Syndrome `H · vᵀ`.
pub fn mat_vec_mul(h: &BitMatrix, v: &BitVector) -> Result<BitVector> {
    h.mul_vec(v)
}

/// Parity-check matrix `[Rᵀ | I_{n-k}]` of a systematic generator `[I_k | R]`.
///
/// Signs vanish in characteristic two, so `-Rᵀ = Rᵀ`.
pub fn systematic_parity_check(g: &BitMatrix) -> Result<BitMatrix> {
    let k = g.rows();
    let n = g.cols();
    if k > n {
        return Err(Error::NotSystematic);
    }
    for r in 0..k {
        for c in 0..k {
            if g.get(r, c) != (r == c) {
                return Err(Error::NotSystematic);
            }
        }
    }
    let mut h = BitMatrix::zeros(n - k, n);
    for r in 0..k {
        for c in k..n {
            if g.get(r, c) {
                // R[r][c-k] lands at Rᵀ[c-k][r]
                h.set(c - k, r, true);
            }
        }
    }
    for i in 0..n - k {
        h.set(i, k + i, true);
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(bits: &[u8]) -> BitVector {
        BitVector::from_bits(bits)
    }

    #[test]
    fn identity_times_vector() {
        let v = bv(&[1, 0, 1]);
        assert_eq!(mat_vec_mul(&BitMatrix::identity(3), &v).unwrap(), v);
    }

    #[test]
    fn zero_vector_has_zero_syndrome() {
        let h = BitMatrix::from_bit_rows(&[&[1, 1, 0, 1], &[0, 1, 1, 1]]).unwrap();
        assert!(mat_vec_mul(&h, &BitVector::zeros(4)).unwrap().is_zero());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let h = BitMatrix::identity(3);
        assert!(matches!(
            mat_vec_mul(&h, &BitVector::zeros(4)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn weights() {
        assert_eq!(hamming_weight(&bv(&[0, 0, 0, 0, 0, 0, 0, 1, 1, 1])), 3);
        assert_eq!(hamming_weight(&BitVector::zeros(10)), 0);
        assert_eq!(hamming_weight(&BitVector::ones(10)), 10);
        assert_eq!(hamming_weight(&BitVector::ones(130)), 130);
    }

    #[test]
    fn int_values() {
        assert_eq!(int_of_bits(&bv(&[1, 1, 0, 0])), 3);
        assert_eq!(int_of_bits(&BitVector::zeros(5)), 0);
        assert_eq!(int_of_bits(&bv(&[0, 0, 1])), 4);
        assert_eq!(BitVector::from_int(3, 4), bv(&[1, 1, 0, 0]));
    }

    #[test]
    fn increase_examples() {
        assert_eq!(bv(&[1, 1, 0, 0]).increase(), bv(&[0, 0, 1, 0]));
        assert_eq!(bv(&[1, 1, 1]).increase(), bv(&[1, 1, 1]));
        assert_eq!(bv(&[0, 1, 0]).increase(), bv(&[1, 1, 0]));
    }

    #[test]
    fn increase_adds_one_below_saturation() {
        for len in 1..=12 {
            for value in 0..(1u64 << len) {
                let a = BitVector::from_int(value, len);
                let next = a.increase();
                if value == (1u64 << len) - 1 {
                    assert_eq!(next, a);
                } else {
                    assert_eq!(int_of_bits(&next), value + 1, "len {len} value {value}");
                }
            }
        }
    }

    #[test]
    fn projection_and_truncation() {
        let v = bv(&[1, 0, 0, 1, 1, 0, 0, 0, 0, 0]);
        assert!(v.project(0).unwrap().is_zero());
        assert_eq!(v.project(0).unwrap().len(), 10);
        assert_eq!(v.truncate(3).unwrap(), bv(&[1, 0, 0]));
        assert_eq!(v.project(10).unwrap(), v);
        assert!(v.project(11).is_err());
        assert!(v.truncate(0).is_err());
        assert!(v.truncate(11).is_err());
        for i in 1..=10 {
            assert_eq!(v.truncate(i).unwrap(), v.project(i).unwrap().truncate(i).unwrap());
        }
    }

    #[test]
    fn weight_bit_lengths() {
        assert_eq!(weight_bits(1), 1);
        assert_eq!(weight_bits(2), 2);
        assert_eq!(weight_bits(3), 2);
        assert_eq!(weight_bits(10), 4);
        assert_eq!(weight_bits(16), 5);
        assert_eq!(weight_bits(256), 9);
    }

    #[test]
    fn parity_check_of_identity_generator_is_empty() {
        let h = systematic_parity_check(&BitMatrix::identity(4)).unwrap();
        assert_eq!((h.rows(), h.cols()), (0, 4));
        assert!(mat_vec_mul(&h, &BitVector::ones(4)).unwrap().is_empty());
    }

    #[test]
    fn non_systematic_generator_is_rejected() {
        let g = BitMatrix::from_bit_rows(&[&[0, 1, 1], &[1, 0, 1]]).unwrap();
        assert_eq!(systematic_parity_check(&g), Err(Error::NotSystematic));
    }

    #[test]
    fn parity_check_annihilates_generator_rows() {
        let g = BitMatrix::from_bit_rows(&[
            &[1, 0, 0, 1, 1, 0, 0, 1, 1, 1],
            &[0, 1, 0, 0, 0, 1, 1, 1, 1, 1],
            &[0, 0, 1, 1, 1, 1, 1, 1, 1, 1],
        ])
        .unwrap();
        let h = systematic_parity_check(&g).unwrap();
        assert_eq!((h.rows(), h.cols()), (7, 10));
        for r in g.row_iter() {
            assert!(mat_vec_mul(&h, r).unwrap().is_zero());
        }
        let eps = bv(&[0, 0, 0, 0, 0, 0, 0, 1, 1, 1]);
        assert_eq!(mat_vec_mul(&h, &eps).unwrap(), bv(&[0, 0, 0, 0, 1, 1, 1]));
    }

    #[test]
    fn block_diagonal_layout() {
        let b = BitMatrix::from_bit_rows(&[&[1, 1]]).unwrap();
        let d = BitMatrix::block_diagonal(&b, 2);
        assert_eq!((d.rows(), d.cols()), (2, 4));
        assert_eq!(d.row(0), &bv(&[1, 1, 0, 0]));
        assert_eq!(d.row(1), &bv(&[0, 0, 1, 1]));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn vec_of(len: usize) -> impl Strategy<Value = BitVector> {
        proptest::collection::vec(any::<bool>(), len).prop_map(|b| BitVector::from_bools(&b))
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
        proptest::collection::vec(vec_of(cols), rows).prop_map(move |r| BitMatrix::from_rows(r, cols).unwrap())
    }

    proptest! {
        #[test]
        fn syndrome_is_linear((h, u, v) in (1usize..9, 1usize..80).prop_flat_map(|(m, n)| (matrix(m, n), vec_of(n), vec_of(n)))) {
            let lhs = h.mul_vec(&u.xor(&v).unwrap()).unwrap();
            let rhs = h.mul_vec(&u).unwrap().xor(&h.mul_vec(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn systematic_parity_check_kills_generator((k, r) in (1usize..=8, 0usize..=8).prop_flat_map(|(k, extra)| (Just(k), matrix(k, extra)))) {
            let extra = r.cols();
            let n = k + extra;
            let mut g = BitMatrix::zeros(k, n);
            for i in 0..k {
                g.set(i, i, true);
                for c in 0..extra {
                    g.set(i, k + c, r.get(i, c));
                }
            }
            let h = systematic_parity_check(&g).unwrap();
            prop_assert_eq!((h.rows(), h.cols()), (n - k, n));
            prop_assert!(h.mul(&g.transpose()).unwrap().is_zero());
        }
    }
}
