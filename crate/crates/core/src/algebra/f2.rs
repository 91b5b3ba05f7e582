//! Linear algebra over the two-element field on bit-packed rows.
//!
//! Every existence question asked by the iota-complex engine ("is there a
//! `b` with `∂b = (1 + ι)a`", "is this cycle a boundary after multiplying
//! by `U^N`") is reduced to one of the routines here.

use std::fmt;

use crate::error::Error;

const WORD: usize = 64;

/// Fixed-length vector over F₂.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
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

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVector::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        debug_assert_eq!(self.len, other.len);
        BitVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// `true` when every set bit of `self` is also set in `mask`.
    pub fn is_subset_of(&self, mask: &BitVector) -> bool {
        self.words.iter().zip(&mask.words).all(|(a, m)| a & !m == 0)
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        let mut out = BitVector::zeros(len);
        for i in self.ones().filter(|&i| i >= start && i < start + len) {
            out.set(i - start, true);
        }
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "[{s}]")
    }
}

/// Dense matrix over F₂ stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self, Error> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Usage(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(F2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self, Error> {
        let mut m = F2Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Usage(format!(
                    "column of length {} in a matrix with {rows} rows",
                    c.len()
                )));
            }
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value)
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut c = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for j in r.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector, Error> {
        if x.len() != self.cols {
            return Err(Error::Usage(format!(
                "vector of length {} against a matrix with {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = BitVector::zeros(self.rows);
        for (i, r) in self.data.iter().enumerate() {
            if r.dot(x) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix, Error> {
        if self.cols != other.rows {
            return Err(Error::Usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for (i, r) in self.data.iter().enumerate() {
            for k in r.ones() {
                out.data[i].xor_assign(&other.data[k]);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.xor_assign(b);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        let r = self.data[src].clone();
        self.data[dst].xor_assign(&r);
    }

    pub fn xor_col_into(&mut self, src: usize, dst: usize) {
        for r in &mut self.data {
            if r.get(src) {
                r.flip(dst);
            }
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.data[i].get(c)) else {
                continue;
            };
            self.data.swap(r, p);
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i != r && self.data[i].get(c) {
                    self.data[i].xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<BitVector> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = BitVector::zeros(self.cols);
                x.set(free, true);
                for (r, &pc) in pivots.iter().enumerate() {
                    if m.data[r].get(free) {
                        x.set(pc, true);
                    }
                }
                x
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<F2Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let rows: Vec<BitVector> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut e = BitVector::zeros(n);
                e.set(i, true);
                r.concat(&e)
            })
            .collect();
        let mut aug = F2Matrix::from_rows(2 * n, rows).ok()?;
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let data = aug.data.iter().map(|r| r.slice(n, n)).collect();
        Some(F2Matrix {
            rows: n,
            cols: n,
            data,
        })
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Some `x` with `A x = b`, or `None` when the system is inconsistent.
pub fn solve_f2(a: &F2Matrix, b: &BitVector) -> Result<Option<BitVector>, Error> {
    if b.len() != a.rows() {
        return Err(Error::Usage(format!(
            "right-hand side of length {} for a matrix with {} rows",
            b.len(),
            a.rows()
        )));
    }
    let n = a.cols();
    let rows = (0..a.rows())
        .map(|i| {
            let mut r = a.row(i).concat(&BitVector::zeros(1));
            r.set(n, b.get(i));
            r
        })
        .collect();
    let mut aug = F2Matrix::from_rows(n + 1, rows)?;
    let pivots = aug.rref();
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = BitVector::zeros(n);
    for (r, &c) in pivots.iter().enumerate() {
        if aug.row(r).get(n) {
            x.set(c, true);
        }
    }
    Ok(Some(x))
}

/// Incremental echelon basis, used for membership tests in a span.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    // (pivot index, reduced vector); pivots are each vector's lowest set bit
    rows: Vec<(usize, BitVector)>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        EchelonBasis {
            len,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for (p, r) in &self.rows {
            if v.get(*p) {
                v.xor_assign(r);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: &BitVector) -> Result<bool, Error> {
        if v.len() != self.len {
            return Err(Error::Usage(format!(
                "vector of length {} in a span of length-{} vectors",
                v.len(),
                self.len
            )));
        }
        let r = self.reduce(v);
        let Some(p) = r.first_one() else {
            return Ok(false);
        };
        // keep earlier rows reduced at the new pivot so `reduce` stays one pass
        for (_, row) in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&r);
            }
        }
        self.rows.push((p, r));
        Ok(true)
    }
}

/// An element of `span(z)` outside `span(w)`, if `span(z) ⊄ span(w)`.
pub fn subspace_not_contained(
    z: &[BitVector],
    w: &[BitVector],
) -> Result<Option<BitVector>, Error> {
    let Some(len) = z.first().or(w.first()).map(BitVector::len) else {
        return Ok(None);
    };
    let mut basis = EchelonBasis::new(len);
    for v in w {
        basis.insert(v)?;
    }
    for v in z {
        if v.len() != len {
            return Err(Error::Usage("vectors of different lengths".into()));
        }
        if !basis.contains(v) {
            return Ok(Some(v.clone()));
        }
    }
    Ok(None)
}

/// Rank of the span of a list of vectors of common length `len`.
pub fn span_rank(len: usize, vectors: &[BitVector]) -> Result<usize, Error> {
    let mut basis = EchelonBasis::new(len);
    for v in vectors {
        basis.insert(v)?;
    }
    Ok(basis.rank())
}
