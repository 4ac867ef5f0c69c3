//! Dense linear algebra over GF(2) with rows packed into 64-bit words.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> BitVec {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> BitVec {
        let mut v = BitVec::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> BitVec {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i & 63);
        if b {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit at or after `from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut wi = from >> 6;
        let mut w = self.words[wi] & (!0u64 << (from & 63));
        loop {
            if w != 0 {
                let i = (wi << 6) + w.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        let mut next = self.next_one(0);
        std::iter::from_fn(move || {
            let cur = next?;
            next = self.next_one(cur + 1);
            Some(cur)
        })
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A matrix stored as a list of packed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> BitMatrix {
        BitMatrix { cols, rows: Vec::new() }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> BitMatrix {
        assert!(rows.iter().all(|r| r.len() == cols));
        BitMatrix { cols, rows }
    }

    pub fn identity(n: usize) -> BitMatrix {
        BitMatrix { cols: n, rows: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    /// Matrix-vector product `M v` (v indexed by columns).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.nrows());
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(other.cols);
                for k in r.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        BitMatrix { cols: other.cols, rows }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut rows = vec![BitVec::zeros(self.rows.len()); self.cols];
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                rows[j].set(i, true);
            }
        }
        BitMatrix { cols: self.rows.len(), rows }
    }

    pub fn is_identity(&self) -> bool {
        self.rows.len() == self.cols
            && self.rows.iter().enumerate().all(|(i, r)| r.count_ones() == 1 && r.get(i))
    }

    /// Reduces to reduced row echelon form, dropping zero rows.
    pub fn into_echelon(mut self) -> Echelon {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows.len()).find(|&i| self.rows[i].get(col)) else {
                continue;
            };
            self.rows.swap(rank, p);
            let (head, tail) = self.rows.split_at_mut(rank);
            let (pivot, tail) = tail.split_first_mut().unwrap();
            let pivot_row = &*pivot;
            for r in head.iter_mut().chain(tail.iter_mut()) {
                if r.get(col) {
                    r.xor_assign(pivot_row);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == self.rows.len() {
                break;
            }
        }
        self.rows.truncate(rank);
        Echelon { cols: self.cols, rows: self.rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.clone().into_echelon().rank()
    }

    /// Basis of `{x : row · x = 0 for every row}`.
    pub fn nullspace(&self) -> Vec<BitVec> {
        self.clone().into_echelon().nullspace()
    }
}

/// A matrix in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Columns that carry no pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Reduces `v` against the rows; the result is zero on every pivot column.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out.get(p) {
                out.xor_assign(row);
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn nullspace(&self) -> Vec<BitVec> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut x = BitVec::unit(self.cols, f);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if row.get(f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&str]) -> BitMatrix {
        let cols = rows[0].len();
        BitMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| BitVec::from_bools(&r.bytes().map(|b| b == b'1').collect::<Vec<_>>()))
                .collect(),
        )
    }

    #[test]
    fn rank_and_nullspace_small() {
        let m = mat(&["110", "011", "101"]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(format!("{:?}", ns[0]), "111");
    }

    #[test]
    fn next_one_crosses_words() {
        let mut v = BitVec::zeros(200);
        v.set(3, true);
        v.set(130, true);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 130]);
        assert_eq!(v.next_one(4), Some(130));
        assert_eq!(v.next_one(131), None);
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..12, 1usize..80).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r).prop_map(move |rows| {
                BitMatrix::from_rows(c, rows.iter().map(|b| BitVec::from_bools(b)).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.len(), m.cols());
            for x in &ns {
                prop_assert!(m.mul_vec(x).is_zero());
            }
        }

        #[test]
        fn echelon_spans_original_rows(m in arb_matrix()) {
            let e = m.clone().into_echelon();
            for r in m.rows() {
                prop_assert!(e.contains(r));
            }
        }

        #[test]
        fn transpose_is_involution(m in arb_matrix()) {
            prop_assert_eq!(m.transpose().transpose(), m);
        }
    }
}
