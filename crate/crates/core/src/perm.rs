//! Permutations of {1..N}, Schreier–Sims, and the explicit permutation
//! model of the group H6.
//!
//! Products act on the right: `p.then(q)` maps x to (x^p)^q, so the word
//! ρ0ρ1 under ρi ↦ gi is `g0.then(g1)`.

use std::fmt;

use crate::coset::CosetTable;
use crate::presentation::Presentation;
use crate::word::Word;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("not a permutation: {0}")]
    Invalid(String),
    #[error("degree mismatch: {0} vs {1}")]
    Degree(usize, usize),
    #[error("n = {0} is below the supported minimum 8")]
    UnsupportedN(u32),
}

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation { images: (0..degree as u32).collect() }
    }

    /// From 1-based images: `images[x - 1]` is the image of x.
    pub fn from_images(images: &[usize]) -> Result<Permutation, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &y in images {
            if y == 0 || y > n || seen[y - 1] {
                return Err(PermError::Invalid(format!("bad image {y}")));
            }
            seen[y - 1] = true;
            out.push((y - 1) as u32);
        }
        Ok(Permutation { images: out })
    }

    pub(crate) fn from_zero_based(images: Vec<u32>) -> Permutation {
        Permutation { images }
    }

    /// Product of the given 1-based cycles, which must be disjoint.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Permutation, PermError> {
        let mut images: Vec<usize> = (1..=degree).collect();
        let mut touched = vec![false; degree + 1];
        for cyc in cycles {
            for (k, &x) in cyc.iter().enumerate() {
                if x == 0 || x > degree {
                    return Err(PermError::Invalid(format!("point {x} out of range")));
                }
                if touched[x] {
                    return Err(PermError::Invalid(format!("point {x} in two cycles")));
                }
                touched[x] = true;
                images[x - 1] = cyc[(k + 1) % cyc.len()];
            }
        }
        Permutation::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize + 1
    }

    #[inline]
    fn image0(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// First this, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, mut k: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    /// x⁻¹y⁻¹xy.
    pub fn commutator(x: &Permutation, y: &Permutation) -> Permutation {
        x.inverse().then(&y.inverse()).then(x).then(y)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.then(self).is_identity()
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.apply(x) == x
    }

    /// Length of the cycle through the 1-based point `x`.
    pub fn cycle_length_at(&self, x: usize) -> usize {
        let start = x - 1;
        let mut y = self.image0(start);
        let mut len = 1;
        while y != start {
            y = self.image0(y);
            len += 1;
        }
        len
    }

    /// Nontrivial cycles, 1-based, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for s in 0..self.degree() {
            if seen[s] || self.image0(s) == s {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x + 1);
                x = self.image0(x);
            }
            out.push(cyc);
        }
        out
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        self.cycles().iter().fold(1u64, |acc, c| {
            let l = c.len() as u64;
            acc / gcd(acc, l) * l
        })
    }

    /// Evaluates a word under ρi ↦ gens[i].
    pub fn eval_word(gens: &[Permutation; 3], w: &Word) -> Permutation {
        let n = gens[0].degree();
        let images = (0..n)
            .map(|x| w.letters().iter().fold(x as u32, |y, g| gens[g.index()].images[y as usize]))
            .collect();
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// One level of a stabilizer chain: the orbit of the base point under the
/// strong generators fixing all earlier base points, with a transversal.
#[derive(Clone, Debug)]
struct ChainLevel {
    point: usize,
    gens: Vec<usize>,
    orbit: Vec<usize>,
    /// transversal[x] maps `point` to x, for x in the orbit.
    transversal: Vec<Option<Permutation>>,
}

/// A permutation group with a base and strong generating set, built by
/// deterministic Schreier–Sims.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    strong: Vec<Permutation>,
    chain: Vec<ChainLevel>,
}

impl PermGroup {
    pub fn new(gens: &[Permutation]) -> Result<PermGroup, PermError> {
        let degree = gens.first().map_or(0, Permutation::degree);
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(PermError::Degree(degree, g.degree()));
        }
        let mut group = PermGroup {
            degree,
            gens: gens.to_vec(),
            strong: gens.iter().filter(|g| !g.is_identity()).cloned().collect(),
            chain: Vec::new(),
        };
        let mut base: Vec<usize> = Vec::new();
        for g in &group.strong {
            if base.iter().all(|&b| g.image0(b) == b) {
                base.push((0..degree).find(|&x| g.image0(x) != x).unwrap());
            }
        }
        loop {
            group.rebuild_chain(&base);
            match group.find_missing() {
                None => return Ok(group),
                Some((h, depth)) => {
                    if depth == base.len() {
                        base.push((0..degree).find(|&x| h.image0(x) != x).unwrap());
                    }
                    group.strong.push(h);
                }
            }
        }
    }

    fn rebuild_chain(&mut self, base: &[usize]) {
        self.chain.clear();
        for (i, &point) in base.iter().enumerate() {
            let gens: Vec<usize> = (0..self.strong.len())
                .filter(|&k| base[..i].iter().all(|&b| self.strong[k].image0(b) == b))
                .collect();
            let mut transversal: Vec<Option<Permutation>> = vec![None; self.degree];
            transversal[point] = Some(Permutation::identity(self.degree));
            let mut orbit = vec![point];
            let mut head = 0;
            while head < orbit.len() {
                let x = orbit[head];
                head += 1;
                for &k in &gens {
                    let y = self.strong[k].image0(x);
                    if transversal[y].is_none() {
                        transversal[y] = Some(transversal[x].as_ref().unwrap().then(&self.strong[k]));
                        orbit.push(y);
                    }
                }
            }
            self.chain.push(ChainLevel { point, gens, orbit, transversal });
        }
    }

    /// Sifts `g` from level `from`; returns the residue and the level at
    /// which sifting stopped.
    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (i, level) in self.chain.iter().enumerate().skip(from) {
            let x = g.image0(level.point);
            match &level.transversal[x] {
                None => return (g, i),
                Some(u) => g = g.then(&u.inverse()),
            }
        }
        (g, self.chain.len())
    }

    /// The first Schreier generator that does not sift to the identity,
    /// with the level where its residue must be added.
    fn find_missing(&self) -> Option<(Permutation, usize)> {
        for (i, level) in self.chain.iter().enumerate() {
            for &x in &level.orbit {
                let ux = level.transversal[x].as_ref().unwrap();
                for &k in &level.gens {
                    let s = &self.strong[k];
                    let y = s.image0(x);
                    let uy = level.transversal[y].as_ref().unwrap();
                    let schreier = ux.then(s).then(&uy.inverse());
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, depth) = self.sift(schreier, i + 1);
                    if !h.is_identity() {
                        return Some((h, depth));
                    }
                }
            }
        }
        None
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    /// Base points, 1-based.
    pub fn base(&self) -> Vec<usize> {
        self.chain.iter().map(|l| l.point + 1).collect()
    }

    pub fn order(&self) -> u128 {
        self.chain.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift(g.clone(), 0).0.is_identity()
    }

    /// Orbit of the 1-based point `x` under the generators, sorted.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[x - 1] = true;
        let mut stack = vec![x - 1];
        while let Some(y) = stack.pop() {
            for g in &self.gens {
                let z = g.image0(y);
                if !seen[z] {
                    seen[z] = true;
                    stack.push(z);
                }
            }
        }
        (0..self.degree).filter(|&y| seen[y]).map(|y| y + 1).collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(1).len() == self.degree
    }
}

pub fn group_order(gens: &[Permutation]) -> Result<u128, PermError> {
    Ok(PermGroup::new(gens)?.order())
}

/// True iff every relator of `p` evaluates to the identity under
/// ρ0 ↦ gens[0], ρ1 ↦ gens[1], ρ2 ↦ gens[2]. Exact element orders are not
/// checked here; see [`order_claim_failures`].
pub fn check_relations(gens: &[Permutation; 3], p: &Presentation) -> bool {
    p.relators().iter().all(|r| Permutation::eval_word(gens, r).is_identity())
}

/// Top-level power relators (w)^k of `p` whose base w does not have order
/// exactly k under the substitution, as (w, claimed, actual).
pub fn order_claim_failures(gens: &[Permutation; 3], p: &Presentation) -> Vec<(Word, u64, u64)> {
    p.order_claims()
        .into_iter()
        .filter_map(|(w, k)| {
            let actual = Permutation::eval_word(gens, &w).order();
            (actual != k).then_some((w, k, actual))
        })
        .collect()
}

/// The three column permutations of a table.
pub fn regular_rep(t: &CosetTable) -> [Permutation; 3] {
    [0, 1, 2].map(|i| Permutation::from_zero_based(t.column(i)))
}

/// Rebuilds a table from three involutory permutations.
pub fn table_from_perms(gens: &[Permutation; 3]) -> Result<CosetTable, crate::error::TableError> {
    CosetTable::from_columns([&gens[0].images, &gens[1].images, &gens[2].images])
}

/// Smallest n the permutation model is stated for; smaller n down to 8 are
/// supported as a scaled-down analog.
pub const THM43_STATED_MIN_N: u32 = 12;

/// The permutations a, b, c on {1..2^(n-2)} that realize H6(n) with
/// ρ0 ↦ a, ρ1 ↦ b, ρ2 ↦ c.
pub fn thm43_permutations(n: u32) -> Result<[Permutation; 3], PermError> {
    if !(8..=26).contains(&n) {
        return Err(PermError::UnsupportedN(n));
    }
    let t = 1usize << (n - 4);
    let m = t / 8;
    let degree = 4 * t;
    // i_{jt}^k and ci_{jt}^k
    let p = |i: usize, j: usize, k: usize| j * t + 8 * i + k;
    let cp = |i: usize, j: usize, k: usize| j * t + 8 * (m - i - 1) + k;

    let mut a = Vec::new();
    for i in 0..m {
        a.extend([
            vec![p(i, 2, 1), cp(i, 3, 8)],
            vec![p(i, 2, 8), cp(i, 3, 1)],
            vec![p(i, 0, 2), cp(i, 2, 7)],
            vec![p(i, 1, 2), p(i, 2, 2)],
            vec![p(i, 3, 2), cp(i, 1, 7)],
            vec![p(i, 0, 7), p(i, 3, 7)],
            vec![p(i, 0, 3), cp(i, 2, 6)],
            vec![p(i, 1, 3), p(i, 2, 3)],
            vec![p(i, 3, 3), cp(i, 1, 6)],
            vec![p(i, 0, 6), p(i, 3, 6)],
            vec![p(i, 0, 4), cp(i, 1, 5)],
            vec![p(i, 0, 5), cp(i, 1, 4)],
        ]);
    }

    let mut b = Vec::new();
    for j in 0..4 {
        for i in 0..m {
            for k in [1, 3, 5, 7] {
                b.push(vec![p(i, j, k), p(i, j, k + 1)]);
            }
        }
    }

    let mut c = Vec::new();
    for j in 0..4 {
        for i in 0..m {
            for k in [2, 4, 6] {
                c.push(vec![p(i, j, k), p(i, j, k + 1)]);
            }
        }
        for i in 0..m - 1 {
            c.push(vec![p(i, j, 8), p(i + 1, j, 1)]);
        }
    }
    // Closing factor per half h: 1 + 2ht and 2t + 2ht stay fixed.
    for h in 0..2 {
        c.push(vec![p(m - 1, 2 * h, 8), p(0, 2 * h + 1, 1)]);
    }

    Ok([
        Permutation::from_cycles(degree, &a)?,
        Permutation::from_cycles(degree, &b)?,
        Permutation::from_cycles(degree, &c)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symmetric_group_on_three_points() {
        let s = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        let t = Permutation::from_cycles(3, &[vec![2, 3]]).unwrap();
        assert_eq!(group_order(&[s, t]).unwrap(), 6);
        assert_eq!(group_order(&[]).unwrap(), 1);
    }

    #[test]
    fn right_action_convention() {
        let a = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        let b = Permutation::from_cycles(3, &[vec![2, 3]]).unwrap();
        // 1 -a-> 2 -b-> 3
        assert_eq!(a.then(&b).apply(1), 3);
        assert_eq!(a.then(&b).to_string(), "(1, 3, 2)");
    }

    #[test]
    fn display_identity_and_bad_input() {
        assert_eq!(Permutation::identity(4).to_string(), "()");
        assert!(Permutation::from_images(&[1, 1]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 2], vec![2, 3]]).is_err());
    }

    #[test]
    fn larger_groups() {
        // S8 from a transposition and an 8-cycle.
        let s = Permutation::from_cycles(8, &[vec![1, 2]]).unwrap();
        let c = Permutation::from_cycles(8, &[(1..=8).collect()]).unwrap();
        assert_eq!(group_order(&[s, c.clone()]).unwrap(), 40320);
        // Cyclic group of order 8, and the dihedral group of order 16.
        assert_eq!(group_order(std::slice::from_ref(&c)).unwrap(), 8);
        let r = Permutation::from_cycles(8, &[vec![2, 8], vec![3, 7], vec![4, 6]]).unwrap();
        assert_eq!(group_order(&[c, r]).unwrap(), 16);
    }

    #[test]
    fn model_at_n8_has_expected_shape() {
        let [a, b, c] = thm43_permutations(8).unwrap();
        for g in [&a, &b, &c] {
            assert!(g.is_involution());
        }
        let bc = b.then(&c);
        let mut lens: Vec<usize> = bc.cycles().iter().map(Vec::len).collect();
        lens.sort();
        assert_eq!(lens, vec![32, 32]);
        assert!(thm43_permutations(7).is_err());
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((1..=n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(&v).unwrap())
    }

    proptest! {
        #[test]
        fn composition_is_associative(p in arb_perm(9), q in arb_perm(9), r in arb_perm(9)) {
            prop_assert_eq!(p.then(&q).then(&r), p.then(&q.then(&r)));
            prop_assert!(p.then(&p.inverse()).is_identity());
        }

        #[test]
        fn group_membership(p in arb_perm(7), q in arb_perm(7)) {
            let g = PermGroup::new(&[p.clone(), q.clone()]).unwrap();
            prop_assert!(g.contains(&p.then(&q).then(&p)));
            prop_assert_eq!(5040 % g.order(), 0);
            prop_assert_eq!(p.order() as usize % p.cycle_length_at(1), 0);
        }
    }
}
