//! Bit-packed linear algebra over GF(2).

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        F2Vec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &F2Vec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one_from(&self, start: usize) -> Option<usize> {
        if start >= self.len {
            return None;
        }
        let mut wi = start / 64;
        let mut w = self.words[wi] & (!0u64 << (start % 64));
        loop {
            if w != 0 {
                let i = wi * 64 + w.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &F2Vec) -> F2Vec {
        let mut v = F2Vec::zeros(self.len + other.len);
        for i in self.ones_iter() {
            v.set(i, true);
        }
        for i in other.ones_iter() {
            v.set(self.len + i, true);
        }
        v
    }

    pub fn slice(&self, start: usize, len: usize) -> F2Vec {
        let mut v = F2Vec::zeros(len);
        for i in self.ones_iter().filter(|&i| i >= start && i < start + len) {
            v.set(i - start, true);
        }
        v
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "[{s}]")
    }
}

/// Row-major GF(2) matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Matrix {
    ncols: usize,
    rows: Vec<F2Vec>,
}

impl F2Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        F2Matrix {
            ncols,
            rows: vec![F2Vec::zeros(ncols); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix {
            ncols: n,
            rows: (0..n).map(|i| F2Vec::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<F2Vec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols));
        F2Matrix { ncols, rows }
    }

    /// Matrix whose `c`-th column is `cols[c]`.
    pub fn from_columns(nrows: usize, cols: &[F2Vec]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            for r in col.ones_iter() {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.rows[r].set(c, b)
    }

    pub fn row(&self, r: usize) -> &F2Vec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[F2Vec] {
        &self.rows
    }

    pub fn column(&self, c: usize) -> F2Vec {
        let mut v = F2Vec::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.ncols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones_iter() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.ncols, other.nrows());
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = F2Vec::zeros(other.ncols);
                for k in row.ones_iter() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        F2Matrix {
            ncols: other.ncols,
            rows,
        }
    }

    pub fn mul_vec(&self, v: &F2Vec) -> F2Vec {
        assert_eq!(self.ncols, v.len());
        let mut out = F2Vec::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        out
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        let mut m = self.clone();
        for (a, b) in m.rows.iter_mut().zip(&other.rows) {
            a.xor_assign(b);
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        self.nrows() == self.ncols && *self == F2Matrix::identity(self.ncols)
    }

    /// Reduced row echelon form in place over the first `ncols` columns;
    /// returns the pivot columns.
    fn rref_in_place(rows: &mut [F2Vec], ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.ncols);
        for row in &self.rows {
            e.insert(row.clone());
        }
        e.rank()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<F2Vec> {
        let mut rows = self.rows.clone();
        let pivots = Self::rref_in_place(&mut rows, self.ncols);
        let mut is_pivot = vec![false; self.ncols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = F2Vec::unit(self.ncols, free);
                for (i, &pc) in pivots.iter().enumerate() {
                    if rows[i].get(free) {
                        x.set(pc, true);
                    }
                }
                x
            })
            .collect()
    }

    /// Some `x` with `A x = b`, if one exists.
    pub fn solve(&self, b: &F2Vec) -> Option<F2Vec> {
        assert_eq!(b.len(), self.nrows());
        let mut rows: Vec<F2Vec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| row.concat(&F2Vec::from_bits(&[b.get(r)])))
            .collect();
        let pivots = Self::rref_in_place(&mut rows, self.ncols);
        if rows[pivots.len()..].iter().any(|row| row.get(self.ncols)) {
            return None;
        }
        let mut x = F2Vec::zeros(self.ncols);
        for (i, &c) in pivots.iter().enumerate() {
            if rows[i].get(self.ncols) {
                x.set(c, true);
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<F2Matrix> {
        let n = self.ncols;
        if self.nrows() != n {
            return None;
        }
        let mut rows: Vec<F2Vec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| row.concat(&F2Vec::unit(n, r)))
            .collect();
        let pivots = Self::rref_in_place(&mut rows, n);
        if pivots.len() != n {
            return None;
        }
        Some(F2Matrix {
            ncols: n,
            rows: rows.iter().map(|r| r.slice(n, n)).collect(),
        })
    }
}

/// Incrementally built row space: each stored row's lowest set bit is its
/// pivot, and no two rows share a pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<F2Vec>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon {
            len,
            pivot_row: vec![None; len],
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut v: F2Vec) -> F2Vec {
        let mut start = 0;
        while let Some(c) = v.first_one_from(start) {
            match self.pivot_row[c] {
                Some(r) => v.xor_assign(&self.rows[r]),
                None => start = c + 1,
            }
        }
        v
    }

    /// Adds `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: F2Vec) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let mut v = v;
        loop {
            let Some(c) = v.first_one_from(0) else {
                return false;
            };
            match self.pivot_row[c] {
                Some(r) => v.xor_assign(&self.rows[r]),
                None => {
                    self.pivot_row[c] = Some(self.rows.len());
                    self.rows.push(v);
                    return true;
                }
            }
        }
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        let mut v = v.clone();
        loop {
            let Some(c) = v.first_one_from(0) else {
                return true;
            };
            match self.pivot_row[c] {
                Some(r) => v.xor_assign(&self.rows[r]),
                None => return false,
            }
        }
    }

    pub fn rows(&self) -> &[F2Vec] {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(rows: usize, cols: usize, bits: &[bool]) -> F2Matrix {
        F2Matrix::from_rows(
            cols,
            (0..rows)
                .map(|r| F2Vec::from_bits(&bits[r * cols..(r + 1) * cols]))
                .collect(),
        )
    }

    #[test]
    fn small_rank_and_inverse() {
        let m = matrix(
            3,
            3,
            &[true, true, false, false, true, true, true, false, true],
        );
        // rows sum to zero
        assert_eq!(m.rank(), 2);
        assert!(m.inverse().is_none());
        let a = matrix(2, 2, &[true, true, false, true]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
    }

    #[test]
    fn wide_vectors() {
        let mut v = F2Vec::zeros(200);
        v.set(130, true);
        v.set(199, true);
        assert_eq!(v.first_one_from(0), Some(130));
        assert_eq!(v.first_one_from(131), Some(199));
        assert_eq!(v.ones_iter().collect::<Vec<_>>(), vec![130, 199]);
        assert_eq!(v.slice(128, 10).ones_iter().collect::<Vec<_>>(), vec![2]);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..12, cols in 1usize..80, seed in proptest::collection::vec(any::<bool>(), 960)) {
            let m = matrix(rows, cols, &seed[..rows * cols]);
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.len(), cols);
            for x in &ns {
                prop_assert!(m.mul_vec(x).is_zero());
            }
        }

        #[test]
        fn solve_consistent(rows in 1usize..10, cols in 1usize..70, seed in proptest::collection::vec(any::<bool>(), 700), xs in proptest::collection::vec(any::<bool>(), 70)) {
            let m = matrix(rows, cols, &seed[..rows * cols]);
            let x = F2Vec::from_bits(&xs[..cols]);
            let b = m.mul_vec(&x);
            let y = m.solve(&b).unwrap();
            prop_assert_eq!(m.mul_vec(&y), b);
        }

        #[test]
        fn transpose_involution(rows in 1usize..9, cols in 1usize..9, seed in proptest::collection::vec(any::<bool>(), 81)) {
            let m = matrix(rows, cols, &seed[..rows * cols]);
            prop_assert_eq!(m.transpose().transpose(), m.clone());
            prop_assert_eq!(m.transpose().rank(), m.rank());
        }
    }
}
