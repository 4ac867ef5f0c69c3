use std::collections::VecDeque;

use crate::coset::{CanonicalTable, CosetTable};
use crate::gf2::{BitMatrix, BitVec, Echelon};

const TREE: u32 = u32::MAX;

/// The GF(2) module V = K/[K,K]K² of the kernel K of a regular table,
/// with the conjugation action of ρ0, ρ1, ρ2.
///
/// Spanning tree: breadth-first from coset 0 in generator order 0, 1, 2.
/// Every other undirected table edge (loops included) carries one Schreier
/// symbol. V is the span of the symbols modulo the rewritten relators.
#[derive(Clone, Debug)]
pub struct ModuleSpace {
    symbols: Vec<(u32, u8)>,
    edge_symbol: Vec<[u32; 3]>,
    relations: Echelon,
    basis: Vec<usize>,
    /// Row s is the image of symbol s in V.
    symbol_images: BitMatrix,
    /// Row k of `actions[j]` is the image of basis vector k under ρj.
    actions: [BitMatrix; 3],
}

impl ModuleSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    /// The edge `(c, i)` with `c ≤ c·ρi` labelling each symbol.
    pub fn symbols(&self) -> &[(u32, u8)] {
        &self.symbols
    }

    /// Symbol on the edge at coset `c` along ρi, or `None` for tree edges.
    pub fn edge_symbol(&self, c: usize, i: usize) -> Option<usize> {
        let s = self.edge_symbol[c][i];
        (s != TREE).then_some(s as usize)
    }

    pub fn action(&self, j: usize) -> &BitMatrix {
        &self.actions[j]
    }

    /// Coordinates in V of a vector over the symbols.
    pub fn project(&self, v: &BitVec) -> BitVec {
        let r = self.relations.reduce(v);
        let mut out = BitVec::zeros(self.dim());
        for (k, &f) in self.basis.iter().enumerate() {
            if r.get(f) {
                out.set(k, true);
            }
        }
        out
    }

    /// Values of a functional on V at every symbol.
    pub fn pullback(&self, functional: &BitVec) -> BitVec {
        self.symbol_images.mul_vec(functional)
    }
}

/// BFS tree parent of every coset except 0: (parent, generator).
fn bfs_tree(t: &CosetTable) -> Vec<(u32, u8)> {
    let n = t.len();
    let mut parent = vec![(TREE, 0u8); n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for i in 0..3 {
            let d = t.rows()[c][i] as usize;
            if !seen[d] {
                seen[d] = true;
                parent[d] = (c as u32, i as u8);
                queue.push_back(d);
            }
        }
    }
    parent
}

fn tree_path(parent: &[(u32, u8)], mut c: usize) -> Vec<u8> {
    let mut letters = Vec::new();
    while c != 0 {
        let (p, i) = parent[c];
        letters.push(i);
        c = p as usize;
    }
    letters.reverse();
    letters
}

/// Builds V for the kernel of a regular table.
pub fn schreier_module(t: &CosetTable) -> ModuleSpace {
    let n = t.len();
    let rows = t.rows();
    let parent = bfs_tree(t);
    let mut edge_symbol = vec![[TREE; 3]; n];
    let mut symbols = Vec::new();
    let mut is_tree = vec![[false; 3]; n];
    for c in 1..n {
        let (p, i) = parent[c];
        is_tree[p as usize][i as usize] = true;
        is_tree[c][i as usize] = true;
    }
    for c in 0..n {
        for i in 0..3 {
            let d = rows[c][i] as usize;
            if c <= d && !is_tree[c][i] {
                let s = symbols.len() as u32;
                edge_symbol[c][i] = s;
                edge_symbol[d][i] = s;
                symbols.push((c as u32, i as u8));
            }
        }
    }
    let m = symbols.len();

    // (ρ0ρ2)² closes around each edge orbit of ⟨ρ0, ρ2⟩; ρi² adds nothing
    // mod 2.
    let mut rel = BitMatrix::new(m);
    let mut done = vec![false; n];
    for c in 0..n {
        if done[c] {
            continue;
        }
        let mut v = BitVec::zeros(m);
        let mut x = c;
        for &g in &[0usize, 2, 0, 2] {
            done[x] = true;
            let s = edge_symbol[x][g];
            if s != TREE {
                v.flip(s as usize);
            }
            x = rows[x][g] as usize;
        }
        if !v.is_zero() {
            rel.push_row(v);
        }
    }
    let relations = rel.into_echelon();
    let basis = relations.free_columns();

    let mut module = ModuleSpace {
        symbols,
        edge_symbol,
        relations,
        basis,
        symbol_images: BitMatrix::new(0),
        actions: [BitMatrix::new(0), BitMatrix::new(0), BitMatrix::new(0)],
    };
    let dim = module.dim();
    module.symbol_images = BitMatrix::from_rows(
        dim,
        (0..m).map(|s| module.project(&BitVec::unit(m, s))).collect(),
    );

    let walk = |letters: &[u8]| -> BitVec {
        let mut v = BitVec::zeros(m);
        let mut x = 0usize;
        for &g in letters {
            let s = module.edge_symbol[x][g as usize];
            if s != TREE {
                v.flip(s as usize);
            }
            x = rows[x][g as usize] as usize;
        }
        debug_assert_eq!(x, 0);
        v
    };
    let mut actions: [BitMatrix; 3] = [BitMatrix::new(dim), BitMatrix::new(dim), BitMatrix::new(dim)];
    for &f in &module.basis {
        let (c, i) = module.symbols[f];
        let d = rows[c as usize][i as usize] as usize;
        let mut generator = tree_path(&parent, c as usize);
        generator.push(i);
        let mut back = tree_path(&parent, d);
        back.reverse();
        generator.extend(back);
        for (j, action) in actions.iter_mut().enumerate() {
            let mut w = Vec::with_capacity(generator.len() + 2);
            w.push(j as u8);
            w.extend_from_slice(&generator);
            w.push(j as u8);
            action.push_row(module.project(&walk(&w)));
        }
    }
    module.actions = actions;
    module
}

/// The largest trivial quotient W of V, given by a projection V → W.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    /// d × dim V; row k is the k-th coordinate functional of W.
    projection: BitMatrix,
}

impl Coinvariants {
    pub fn dim(&self) -> usize {
        self.projection.nrows()
    }

    pub fn projection(&self) -> &BitMatrix {
        &self.projection
    }

    /// The functional on V obtained from `mu` ∈ GF(2)^d on W.
    pub fn functional(&self, mu: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.projection.cols());
        for k in mu.ones() {
            out.xor_assign(self.projection.row(k));
        }
        out
    }

    /// The functional for the `mask`-th nonzero vector of W, with bit k of
    /// `mask` giving coordinate k.
    pub fn functional_from_mask(&self, mask: u64) -> BitVec {
        let mu = BitVec::from_bools(&(0..self.dim()).map(|k| (mask >> k) & 1 == 1).collect::<Vec<_>>());
        self.functional(&mu)
    }
}

/// W = V / span{Aj·v − v}. The projection rows are the functionals on V
/// vanishing on that span.
pub fn coinvariants(m: &ModuleSpace) -> Coinvariants {
    let dim = m.dim();
    let mut u = BitMatrix::new(dim);
    for a in &m.actions {
        for (k, row) in a.rows().iter().enumerate() {
            let mut v = row.clone();
            v.flip(k);
            if !v.is_zero() {
                u.push_row(v);
            }
        }
    }
    Coinvariants { projection: BitMatrix::from_rows(dim, u.nullspace()) }
}

/// A central extension of a regular table by Z2, canonicalized.
#[derive(Clone, Debug)]
pub struct Extension {
    pub table: CanonicalTable,
    /// Canonical label of the new central involution.
    pub central: u32,
}

/// Doubles the table along `edge_values` (a functional already pulled back
/// to the symbols): (c, ε)·ρi = (c·ρi, ε + λ(c, i)), tree edges carrying 0.
pub fn extend_by_values(t: &CosetTable, m: &ModuleSpace, edge_values: &BitVec) -> Extension {
    let n = t.len();
    let mut rows = Vec::with_capacity(2 * n);
    for c in 0..n {
        let r = t.rows()[c];
        let mut flips = [0u32; 3];
        for i in 0..3 {
            if let Some(s) = m.edge_symbol(c, i) {
                flips[i] = edge_values.get(s) as u32;
            }
        }
        for eps in 0..2u32 {
            rows.push([0, 1, 2].map(|i| 2 * r[i] + (eps ^ flips[i])));
        }
    }
    let doubled = CosetTable::from_rows(rows).expect("doubled table is involutory");
    let (table, map) = doubled.canonicalize_with_map().expect("extension by a nonzero functional is connected");
    Extension { table, central: map[1] }
}

/// Extends along a functional on V.
pub fn extend(t: &CosetTable, m: &ModuleSpace, functional: &BitVec) -> Extension {
    extend_by_values(t, m, &m.pullback(functional))
}
