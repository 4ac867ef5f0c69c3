use std::collections::VecDeque;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::TableError;
use crate::presentation::Presentation;
use crate::word::{Generator, Word};

/// The action of ρ0, ρ1, ρ2 on a finite set of cosets. Coset `0` is the
/// base coset (the subgroup itself, or the identity flag for a regular
/// table). Ids are 0-based in memory and 1-based in every text output.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CosetTable {
    rows: Vec<[u32; 3]>,
}

impl fmt::Debug for CosetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CosetTable({} rows)", self.rows.len())?;
        for (c, r) in self.rows.iter().enumerate().take(32) {
            writeln!(f, "  {:>4}: {} {} {}", c + 1, r[0] + 1, r[1] + 1, r[2] + 1)?;
        }
        Ok(())
    }
}

impl CosetTable {
    /// Wraps complete rows, checking bounds and the involutory property
    /// `entry(entry(c, i), i) = c`.
    pub fn from_rows(rows: Vec<[u32; 3]>) -> Result<CosetTable, TableError> {
        let n = rows.len();
        if n == 0 {
            return Err(TableError::Incomplete);
        }
        for (c, r) in rows.iter().enumerate() {
            for i in 0..3 {
                let d = r[i] as usize;
                if d >= n {
                    return Err(TableError::Incomplete);
                }
                if rows[d][i] as usize != c {
                    return Err(TableError::NotRegular);
                }
            }
        }
        Ok(CosetTable { rows })
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<[u32; 3]>) -> CosetTable {
        debug_assert!(CosetTable::from_rows(rows.clone()).is_ok());
        CosetTable { rows }
    }

    /// Builds a table from three involutory permutations given as 0-based
    /// image arrays.
    pub fn from_columns(cols: [&[u32]; 3]) -> Result<CosetTable, TableError> {
        let n = cols[0].len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(TableError::Incomplete);
        }
        CosetTable::from_rows((0..n).map(|c| [cols[0][c], cols[1][c], cols[2][c]]).collect())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[[u32; 3]] {
        &self.rows
    }

    #[inline]
    pub fn entry(&self, c: usize, g: Generator) -> usize {
        self.rows[c][g.index()] as usize
    }

    pub fn column(&self, i: usize) -> Vec<u32> {
        self.rows.iter().map(|r| r[i]).collect()
    }

    #[inline]
    pub fn trace(&self, mut c: usize, w: &Word) -> usize {
        for g in w.letters() {
            c = self.rows[c][g.index()] as usize;
        }
        c
    }

    /// True iff every relator closes at every coset.
    pub fn satisfies(&self, p: &Presentation) -> bool {
        self.satisfies_words(p.relators())
    }

    pub fn satisfies_words(&self, relators: &[Word]) -> bool {
        relators
            .iter()
            .all(|r| (0..self.len()).all(|c| self.trace(c, r) == c))
    }

    /// Least k ≥ 1 with `0 · w^k = 0`. On a regular table this is the order
    /// of the group element represented by `w`.
    pub fn element_order(&self, w: &Word) -> Result<u64, TableError> {
        let mut c = self.trace(0, w);
        let mut k = 1u64;
        while c != 0 {
            if k as usize > self.len() {
                return Err(TableError::NotRegular);
            }
            c = self.trace(c, w);
            k += 1;
        }
        Ok(k)
    }

    /// Flags reachable from the base flag under the subgroup generated by
    /// `gens`, as a sorted list. On a regular table its length is the order
    /// of that subgroup.
    pub fn subgroup_closure(&self, gens: &[Word]) -> Vec<usize> {
        let mut moves: Vec<Word> = Vec::with_capacity(2 * gens.len());
        for g in gens {
            moves.push(g.clone());
            moves.push(g.inverse());
        }
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for m in &moves {
                let d = self.trace(c, m);
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        (0..self.len()).filter(|&c| seen[c]).collect()
    }

    /// Normal closure of the subgroup generated by `gens` (regular tables).
    pub fn normal_closure(&self, gens: &[Word]) -> Vec<usize> {
        let words = self.spanning_words();
        let mut current: Vec<Word> = gens.to_vec();
        loop {
            let closure = self.subgroup_closure(&current);
            // Conjugating each member by each generator must stay inside.
            let mut in_set = vec![false; self.len()];
            for &c in &closure {
                in_set[c] = true;
            }
            let mut grew = false;
            for &c in &closure {
                for g in Generator::ALL {
                    let gw = Word::from(g);
                    let conj = words[c].conjugate(&gw);
                    let d = self.trace(0, &conj);
                    if !in_set[d] {
                        in_set[d] = true;
                        current.push(conj.free_reduce());
                        grew = true;
                    }
                }
            }
            if !grew {
                return closure;
            }
        }
    }

    /// A word reaching each coset from coset 0 along the breadth-first tree
    /// (generator order 0, 1, 2).
    pub fn spanning_words(&self) -> Vec<Word> {
        let n = self.len();
        let mut parent: Vec<Option<(usize, Generator)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            order.push(c);
            for g in Generator::ALL {
                let d = self.entry(c, g);
                if !seen[d] {
                    seen[d] = true;
                    parent[d] = Some((c, g));
                    queue.push_back(d);
                }
            }
        }
        let mut words = vec![Word::empty(); n];
        for &c in &order {
            if let Some((p, g)) = parent[c] {
                let mut letters = words[p].letters().to_vec();
                letters.push(g);
                words[c] = Word::from_letters(letters);
            }
        }
        words
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_order().len() == self.len()
    }

    fn bfs_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut label = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        label[0] = 0;
        order.push(0);
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for i in 0..3 {
                let d = self.rows[c][i] as usize;
                if label[d] == u32::MAX {
                    label[d] = order.len() as u32;
                    order.push(d);
                }
            }
        }
        order
    }

    /// Relabels cosets by breadth-first search from coset 0, exploring
    /// generators in the order 0, 1, 2 and numbering cosets as first seen.
    pub fn canonicalize(&self) -> Result<CanonicalTable, TableError> {
        let (table, _) = self.canonicalize_with_map()?;
        Ok(table)
    }

    /// As [`canonicalize`](Self::canonicalize), also returning the map
    /// old id → new id.
    pub fn canonicalize_with_map(&self) -> Result<(CanonicalTable, Vec<u32>), TableError> {
        let order = self.bfs_order();
        if order.len() != self.len() {
            return Err(TableError::Disconnected);
        }
        let mut label = vec![0u32; self.len()];
        for (new, &old) in order.iter().enumerate() {
            label[old] = new as u32;
        }
        let rows = order
            .iter()
            .map(|&old| {
                let r = self.rows[old];
                [label[r[0] as usize], label[r[1] as usize], label[r[2] as usize]]
            })
            .collect();
        Ok((CanonicalTable { table: CosetTable { rows } }, label))
    }

    /// Renumbers cosets by `perm` (old id → new id). Coset `perm[0]` becomes
    /// the new base only if `perm[0] == 0`.
    pub fn relabel(&self, perm: &[u32]) -> CosetTable {
        let mut rows = vec![[0u32; 3]; self.len()];
        for (old, r) in self.rows.iter().enumerate() {
            rows[perm[old] as usize] = [perm[r[0] as usize], perm[r[1] as usize], perm[r[2] as usize]];
        }
        CosetTable { rows }
    }

    /// Exchanges the roles of ρ0 and ρ2.
    pub fn dual(&self) -> CosetTable {
        CosetTable { rows: self.rows.iter().map(|r| [r[2], r[1], r[0]]).collect() }
    }

    /// Number of orbits of the subgroup generated by the listed generators.
    pub fn orbit_count(&self, gens: &[Generator]) -> usize {
        self.orbit_labels(gens).1
    }

    /// Orbit id of each coset under the listed generators, plus the count.
    pub fn orbit_labels(&self, gens: &[Generator]) -> (Vec<u32>, usize) {
        let n = self.len();
        let mut label = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != u32::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(c) = stack.pop() {
                for &g in gens {
                    let d = self.entry(c, g);
                    if label[d] == u32::MAX {
                        label[d] = count;
                        stack.push(d);
                    }
                }
            }
            count += 1;
        }
        (label, count as usize)
    }

    /// True iff relabeling from every base coset reproduces the same
    /// canonical table, i.e. the point stabilizers are trivial. Quadratic.
    pub fn is_regular(&self) -> bool {
        let Ok(base) = self.canonicalize() else {
            return false;
        };
        (1..self.len()).all(|b| {
            let mut perm: Vec<u32> = (0..self.len() as u32).collect();
            perm.swap(0, b);
            match self.relabel(&perm).canonicalize() {
                Ok(t) => t == base,
                Err(_) => false,
            }
        })
    }

    /// Whether the element represented by coset `z` commutes with every
    /// generator (regular tables).
    pub fn is_central(&self, z: usize) -> bool {
        let words = self.spanning_words();
        let wz = &words[z];
        Generator::ALL.iter().all(|&g| {
            let gw = Word::from(g);
            self.trace(0, &gw.concat(wz)) == self.trace(0, &wz.concat(&gw))
        })
    }

    /// Quotient of a regular table by the subgroup generated by a central
    /// involution `z` (given as the coset reached by it from coset 0).
    pub fn quotient_by_central_involution(&self, z: usize) -> Result<CosetTable, TableError> {
        if z == 0 || z >= self.len() {
            return Err(TableError::Hypothesis("element is trivial".into()));
        }
        if !self.is_central(z) {
            return Err(TableError::NotCentral);
        }
        let wz = self.spanning_words().swap_remove(z);
        if self.trace(z, &wz) != 0 {
            return Err(TableError::Hypothesis("element is not an involution".into()));
        }
        let n = self.len();
        let mut block = vec![u32::MAX; n];
        let mut next = 0u32;
        for c in 0..n {
            if block[c] == u32::MAX {
                let d = self.trace(c, &wz);
                block[c] = next;
                block[d] = next;
                next += 1;
            }
        }
        let mut rows = vec![[0u32; 3]; next as usize];
        for c in 0..n {
            let b = block[c] as usize;
            for i in 0..3 {
                rows[b][i] = block[self.rows[c][i] as usize];
            }
        }
        CosetTable::from_rows(rows)
    }
}

/// A coset table relabeled by [`CosetTable::canonicalize`]. Equality of
/// canonical tables of regular tables is map isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalTable {
    table: CosetTable,
}

impl CanonicalTable {
    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn into_table(self) -> CosetTable {
        self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Bytes per id in the key: 1, 2 or 4, the smallest width holding the
    /// row count.
    pub fn key_width(rows: usize) -> usize {
        if rows <= u8::MAX as usize {
            1
        } else if rows <= u16::MAX as usize {
            2
        } else {
            4
        }
    }

    /// Row-major sequence of 1-based coset ids, each big-endian in
    /// [`key_width`](Self::key_width) bytes.
    pub fn key(&self) -> Vec<u8> {
        let n = self.len();
        let width = Self::key_width(n);
        let mut out = Vec::with_capacity(n * 3 * width);
        for r in self.table.rows() {
            for &d in r {
                let id = d + 1;
                match width {
                    1 => out.push(id as u8),
                    2 => out.extend_from_slice(&(id as u16).to_be_bytes()),
                    _ => out.extend_from_slice(&id.to_be_bytes()),
                }
            }
        }
        out
    }

    /// Inverse of [`key`](Self::key); the row count is inferred from the
    /// length.
    pub fn from_key(key: &[u8]) -> Result<CanonicalTable, TableError> {
        // The width depends on the row count, so try each width.
        for width in [1usize, 2, 4] {
            if !key.len().is_multiple_of(3 * width) {
                continue;
            }
            let n = key.len() / (3 * width);
            if n == 0 || Self::key_width(n) != width {
                continue;
            }
            let ids: Vec<u32> = key
                .chunks(width)
                .map(|c| c.iter().fold(0u32, |acc, &b| (acc << 8) | b as u32))
                .collect();
            if ids.iter().any(|&i| i == 0 || i as usize > n) {
                return Err(TableError::Incomplete);
            }
            let rows = ids.chunks(3).map(|r| [r[0] - 1, r[1] - 1, r[2] - 1]).collect();
            let table = CosetTable::from_rows(rows)?;
            let canon = table.canonicalize()?;
            if canon.table != table {
                return Err(TableError::NotRegular);
            }
            return Ok(canon);
        }
        Err(TableError::Incomplete)
    }

    /// Lowercase hex SHA-256 of [`key`](Self::key).
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.key()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cayley table of Z2³ with ρi flipping bit i.
    pub(crate) fn elementary_abelian_8() -> CosetTable {
        let rows = (0..8u32).map(|c| [c ^ 1, c ^ 2, c ^ 4]).collect();
        CosetTable::from_rows(rows).unwrap()
    }

    #[test]
    fn trace_and_orders() {
        let t = elementary_abelian_8();
        assert_eq!(t.element_order(&Word::empty()).unwrap(), 1);
        assert_eq!(t.element_order(&Word::from_indices(&[0, 1])).unwrap(), 2);
        assert_eq!(t.subgroup_closure(&[Word::from_indices(&[0, 1]), Word::from_indices(&[1, 2])]).len(), 4);
        assert_eq!(t.subgroup_closure(&[Word::from_indices(&[0]), Word::from_indices(&[1]), Word::from_indices(&[2])]).len(), 8);
        assert!(t.is_regular());
    }

    #[test]
    fn canonicalize_idempotent_and_relabel_invariant() {
        let t = elementary_abelian_8();
        let c = t.canonicalize().unwrap();
        assert_eq!(c.table().canonicalize().unwrap(), c);
        let perm = [0u32, 5, 3, 7, 1, 2, 6, 4];
        let moved = t.relabel(&perm);
        assert_ne!(moved, t);
        assert_eq!(moved.canonicalize().unwrap().key(), c.key());
    }

    #[test]
    fn key_round_trip_and_width() {
        let c = elementary_abelian_8().canonicalize().unwrap();
        let key = c.key();
        assert_eq!(key.len(), 24);
        assert_eq!(CanonicalTable::from_key(&key).unwrap(), c);
        assert_eq!(CanonicalTable::key_width(255), 1);
        assert_eq!(CanonicalTable::key_width(256), 2);
        assert_eq!(CanonicalTable::key_width(70000), 4);
        assert_eq!(c.digest().len(), 64);
    }

    #[test]
    fn disconnected_table_is_rejected() {
        let rows = vec![[0, 0, 0], [1, 1, 1]];
        let t = CosetTable::from_rows(rows).unwrap();
        assert_eq!(t.canonicalize().unwrap_err(), TableError::Disconnected);
    }

    #[test]
    fn non_involutory_rows_rejected() {
        assert!(CosetTable::from_rows(vec![[1, 0, 0], [1, 1, 1]]).is_err());
    }

    #[test]
    fn quotient_by_center() {
        let t = elementary_abelian_8();
        let q = t.quotient_by_central_involution(4).unwrap();
        assert_eq!(q.len(), 4);
        assert_eq!(q.entry(0, Generator::R2), 0);
    }
}
