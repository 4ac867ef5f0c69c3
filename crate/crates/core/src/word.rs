//! Words over the three involutory generators ρ0, ρ1, ρ2.
//!
//! Every generator is its own inverse, so a word never carries inverse
//! letters and inverting a word is the same as reversing it.

use std::fmt;

/// One of the three reflections ρ0, ρ1, ρ2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(u8);

impl Generator {
    pub const R0: Generator = Generator(0);
    pub const R1: Generator = Generator(1);
    pub const R2: Generator = Generator(2);
    pub const ALL: [Generator; 3] = [Self::R0, Self::R1, Self::R2];

    pub fn new(index: u8) -> Option<Generator> {
        (index < 3).then_some(Generator(index))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

/// A finite sequence of generators. Not necessarily reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Generator>) -> Word {
        Word(letters)
    }

    /// Builds a word from generator indices; panics on an index outside 0..3.
    pub fn from_indices(indices: &[u8]) -> Word {
        Word(
            indices
                .iter()
                .map(|&i| Generator::new(i).expect("generator index out of range"))
                .collect(),
        )
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.0);
        }
        Word(letters)
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.inverse().concat(&y.inverse()).concat(x).concat(y)
    }

    /// `x^y = y⁻¹ x y`.
    pub fn conjugate(&self, by: &Word) -> Word {
        by.inverse().concat(self).concat(by)
    }

    /// Cancels adjacent equal letters until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Generator> = Vec::with_capacity(self.len());
        for &g in &self.0 {
            if out.last() == Some(&g) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// Free reduction followed by stripping matching first/last letters.
    pub fn cyclic_reduce(&self) -> Word {
        let reduced = self.free_reduce();
        let s = &reduced.0;
        let (mut lo, mut hi) = (0usize, s.len());
        while hi - lo >= 2 && s[lo] == s[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        Word(s[lo..hi].to_vec())
    }
}

impl From<Generator> for Word {
    fn from(g: Generator) -> Word {
        Word(vec![g])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}
