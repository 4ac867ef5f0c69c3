//! Todd–Coxeter coset enumeration for three involutory generators.
//!
//! The driver walks cosets in creation order and closes every relator at
//! each live coset by scan-and-fill (the HLT strategy), then fills any gaps
//! left in the row. Every new table entry is pushed onto a deduction stack,
//! which is drained against the relators that are cheap to rescan (short or
//! highly periodic ones), Felsch style. Coincidences are resolved with a
//! merge-find forest over coset ids, always keeping the smaller id.

use crate::coset::table::CosetTable;
use crate::error::EnumerationError;
use crate::presentation::Presentation;
use crate::word::Word;

const UNDEF: u32 = u32::MAX;

/// Resource limits and strategy knobs for [`todd_coxeter`].
#[derive(Clone, Debug)]
pub struct EnumerationLimits {
    /// Maximum number of coset ids allocated at once (live or dead).
    pub max_cosets: usize,
    /// A relator of length L whose cyclic word has period P is rescanned on
    /// deductions only when `P * L` is at most this budget.
    pub deduction_budget: usize,
    /// Re-check every relator at every coset of the finished table.
    pub verify: bool,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_cosets: 1 << 22, deduction_budget: 1 << 15, verify: true }
    }
}

impl EnumerationLimits {
    pub fn with_max_cosets(max_cosets: usize) -> Self {
        EnumerationLimits { max_cosets, ..Default::default() }
    }
}

/// Enumerates the right cosets of `⟨subgens⟩` in the group presented by `p`.
///
/// On success the table is complete, compacted, numbered so that coset 0
/// is the subgroup, and has one row per coset. A finite index beyond the
/// limit is indistinguishable from an infinite one: both report
/// [`EnumerationError::LimitExceeded`].
pub fn todd_coxeter(
    p: &Presentation,
    subgens: &[Word],
    limits: &EnumerationLimits,
) -> Result<CosetTable, EnumerationError> {
    if limits.max_cosets == 0 {
        return Err(EnumerationError::InvalidLimits("max_cosets must be positive".into()));
    }
    let mut e = Enumerator::new(p.relators(), limits);
    for w in subgens {
        let w = w.free_reduce();
        if w.is_empty() {
            continue;
        }
        let letters: Vec<u8> = w.letters().iter().map(|g| g.index() as u8).collect();
        e.ensure_capacity(letters.len(), &mut 0)?;
        e.scan_and_fill(0, &letters);
        e.process_deductions();
    }
    e.run()?;
    let table = e.finish();
    if limits.verify {
        let all: Vec<Word> = p.relators().to_vec();
        assert!(table.satisfies_words(&all), "enumeration produced a table violating a relator");
        assert!(subgens.iter().all(|w| table.trace(0, w) == 0), "subgroup generator does not fix coset 0");
    }
    Ok(table)
}

struct Enumerator {
    table: Vec<[u32; 3]>,
    parent: Vec<u32>,
    deductions: Vec<(u32, u8)>,
    queue: Vec<u32>,
    /// Every relator, cyclically reduced, for scan-and-fill.
    relators: Vec<Vec<u8>>,
    /// Distinct rotations of cheap relators, grouped by first letter.
    rotations: [Vec<Vec<u8>>; 3],
    max_len: usize,
    max_cosets: usize,
}

fn minimal_period(r: &[u8]) -> usize {
    let n = r.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| r[i] == r[(i + p) % n]))
        .unwrap_or(n)
}

impl Enumerator {
    fn new(relators: &[Word], limits: &EnumerationLimits) -> Enumerator {
        let mut rels: Vec<Vec<u8>> = relators
            .iter()
            .map(|r| r.cyclic_reduce())
            .filter(|r| !r.is_empty())
            .map(|r| r.letters().iter().map(|g| g.index() as u8).collect())
            .collect();
        rels.sort_by_key(|r: &Vec<u8>| r.len());
        rels.dedup();
        let mut rotations: [Vec<Vec<u8>>; 3] = Default::default();
        for r in &rels {
            let period = minimal_period(r);
            if period.saturating_mul(r.len()) > limits.deduction_budget {
                continue;
            }
            for start in 0..period {
                let rot: Vec<u8> = r[start..].iter().chain(&r[..start]).copied().collect();
                let x = rot[0] as usize;
                if !rotations[x].contains(&rot) {
                    rotations[x].push(rot);
                }
            }
        }
        let max_len = rels.iter().map(Vec::len).max().unwrap_or(0);
        Enumerator {
            table: vec![[UNDEF; 3]],
            parent: vec![0],
            deductions: Vec::new(),
            queue: Vec::new(),
            relators: rels,
            rotations,
            max_len,
            max_cosets: limits.max_cosets,
        }
    }

    #[inline]
    fn live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, mut c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[c as usize] != root {
            let next = self.parent[c as usize];
            self.parent[c as usize] = root;
            c = next;
        }
        root
    }

    fn define(&mut self, c: u32, x: u8) -> u32 {
        let d = self.table.len() as u32;
        self.table.push([UNDEF; 3]);
        self.parent.push(d);
        self.table[c as usize][x as usize] = d;
        self.table[d as usize][x as usize] = c;
        self.deductions.push((c, x));
        d
    }

    /// Makes room for `k` new cosets, compacting if needed. `cursor` is
    /// remapped when compaction renumbers cosets.
    fn ensure_capacity(&mut self, k: usize, cursor: &mut usize) -> Result<(), EnumerationError> {
        if self.table.len() + k <= self.max_cosets {
            return Ok(());
        }
        let dead = self.table.len() - self.live_count();
        if dead > 0 {
            self.compact(cursor);
        }
        if self.table.len() + k > self.max_cosets {
            return Err(EnumerationError::LimitExceeded { max_cosets: self.max_cosets });
        }
        Ok(())
    }

    fn live_count(&self) -> usize {
        (0..self.table.len()).filter(|&c| self.parent[c] == c as u32).count()
    }

    /// Renumbers live cosets in order. Requires empty deduction and
    /// coincidence queues.
    fn compact(&mut self, cursor: &mut usize) {
        debug_assert!(self.deductions.is_empty() && self.queue.is_empty());
        let n = self.table.len();
        let mut map = vec![UNDEF; n];
        let mut next = 0u32;
        for c in 0..n {
            if self.parent[c] == c as u32 {
                map[c] = next;
                next += 1;
            }
        }
        let mut new_cursor = next as usize;
        for c in (0..n).rev() {
            if c >= *cursor && map[c] != UNDEF {
                new_cursor = map[c] as usize;
            }
        }
        let mut rows = Vec::with_capacity(next as usize);
        for c in 0..n {
            if map[c] == UNDEF {
                continue;
            }
            let r = self.table[c];
            rows.push(r.map(|d| if d == UNDEF { UNDEF } else { map[d as usize] }));
        }
        self.table = rows;
        self.parent = (0..next).collect();
        *cursor = new_cursor;
    }

    fn deduce(&mut self, f: u32, x: u8, b: u32) {
        self.table[f as usize][x as usize] = b;
        self.table[b as usize][x as usize] = f;
        self.deductions.push((f, x));
    }

    /// Closes relator `r` at coset `c`, defining new cosets as needed.
    fn scan_and_fill(&mut self, c: u32, r: &[u8]) {
        let (mut f, mut i) = (c, 0usize);
        let (mut b, mut j) = (c, r.len());
        loop {
            while i < j {
                let next = self.table[f as usize][r[i] as usize];
                if next == UNDEF {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j > i {
                let next = self.table[b as usize][r[j - 1] as usize];
                if next == UNDEF {
                    break;
                }
                b = next;
                j -= 1;
            }
            if j == i {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            if j == i + 1 {
                self.deduce(f, r[i], b);
                return;
            }
            self.define(f, r[i]);
        }
    }

    /// Scans `r` at `c` without defining; records a deduction or coincidence
    /// when the scan leaves one gap or closes.
    fn scan_and_deduce(&mut self, c: u32, r: &[u8]) {
        let (mut f, mut i) = (c, 0usize);
        let (mut b, mut j) = (c, r.len());
        while i < j {
            let next = self.table[f as usize][r[i] as usize];
            if next == UNDEF {
                break;
            }
            f = next;
            i += 1;
        }
        if i == j {
            if f != b {
                self.coincidence(f, b);
            }
            return;
        }
        while j > i {
            let next = self.table[b as usize][r[j - 1] as usize];
            if next == UNDEF {
                break;
            }
            b = next;
            j -= 1;
        }
        if j == i {
            if f != b {
                self.coincidence(f, b);
            }
        } else if j == i + 1 {
            self.deduce(f, r[i], b);
        }
    }

    fn process_deductions(&mut self) {
        let rotations = std::mem::take(&mut self.rotations);
        while let Some((c, x)) = self.deductions.pop() {
            if !self.live(c) {
                continue;
            }
            let d = self.table[c as usize][x as usize];
            if d == UNDEF {
                continue;
            }
            for w in &rotations[x as usize] {
                if !self.live(c) {
                    break;
                }
                self.scan_and_deduce(c, w);
            }
            if !self.live(d) {
                continue;
            }
            for w in &rotations[x as usize] {
                if !self.live(d) {
                    break;
                }
                self.scan_and_deduce(d, w);
            }
        }
        self.rotations = rotations;
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi as usize] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        let mut head = 0;
        while head < self.queue.len() {
            let e = self.queue[head];
            head += 1;
            for x in 0..3usize {
                let f = self.table[e as usize][x];
                if f == UNDEF {
                    continue;
                }
                self.table[f as usize][x] = UNDEF;
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let e1x = self.table[e1 as usize][x];
                let f1x = self.table[f1 as usize][x];
                if e1x != UNDEF {
                    self.merge(f1, e1x);
                } else if f1x != UNDEF {
                    self.merge(e1, f1x);
                } else {
                    self.table[e1 as usize][x] = f1;
                    self.table[f1 as usize][x] = e1;
                    self.deductions.push((e1, x as u8));
                }
            }
        }
        self.queue.clear();
    }

    fn run(&mut self) -> Result<(), EnumerationError> {
        let relators = std::mem::take(&mut self.relators);
        let mut c = 0usize;
        let result = (|| {
            while c < self.table.len() {
                if self.live(c as u32) {
                    for r in &relators {
                        if !self.live(c as u32) {
                            break;
                        }
                        self.ensure_capacity(self.max_len.max(r.len()), &mut c)?;
                        self.scan_and_fill(c as u32, r);
                        self.process_deductions();
                    }
                    for x in 0..3u8 {
                        if !self.live(c as u32) {
                            break;
                        }
                        if self.table[c][x as usize] == UNDEF {
                            self.ensure_capacity(1, &mut c)?;
                            self.define(c as u32, x);
                            self.process_deductions();
                        }
                    }
                }
                c += 1;
            }
            Ok(())
        })();
        self.relators = relators;
        result
    }

    fn finish(mut self) -> CosetTable {
        let mut cursor = 0;
        self.compact(&mut cursor);
        debug_assert!(self.table.iter().all(|r| r.iter().all(|&d| d != UNDEF)));
        CosetTable::from_rows_unchecked(self.table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::preset;

    #[test]
    fn elementary_abelian_8() {
        let p = preset("delta", &[]).unwrap();
        let p = p
            .with_relators(vec!["(r0 r1)^2".parse().unwrap(), "(r1 r2)^2".parse().unwrap()])
            .unwrap();
        let t = todd_coxeter(&p, &[], &EnumerationLimits::default()).unwrap();
        assert_eq!(t.len(), 8);
        assert!(t.is_regular());
    }

    #[test]
    fn dihedral_16() {
        let t = todd_coxeter(&preset("dihedral", &[4]).unwrap(), &[], &EnumerationLimits::default()).unwrap();
        assert_eq!(t.len(), 16);
    }

    #[test]
    fn subgroup_index() {
        let p = preset("dihedral", &[5]).unwrap();
        let t = todd_coxeter(&p, &[Word::from_indices(&[1]), Word::from_indices(&[2])], &EnumerationLimits::default())
            .unwrap();
        assert_eq!(t.len(), 1);
        let t = todd_coxeter(&p, &[Word::from_indices(&[1, 2])], &EnumerationLimits::default()).unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn infinite_group_hits_limit() {
        let p = preset("delta", &[]).unwrap();
        let err = todd_coxeter(&p, &[], &EnumerationLimits::with_max_cosets(5000)).unwrap_err();
        assert_eq!(err, EnumerationError::LimitExceeded { max_cosets: 5000 });
    }

    #[test]
    fn zero_limit_rejected() {
        let p = preset("delta", &[]).unwrap();
        assert!(matches!(
            todd_coxeter(&p, &[], &EnumerationLimits::with_max_cosets(0)),
            Err(EnumerationError::InvalidLimits(_))
        ));
    }

    #[test]
    fn periods() {
        assert_eq!(minimal_period(&[0, 1, 0, 1]), 2);
        assert_eq!(minimal_period(&[0, 1, 2]), 3);
    }
}
