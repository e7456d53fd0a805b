//! Dense square boolean matrices with word-packed rows.

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix({})", self.n)?;
        for i in 0..self.n {
            let row: String = (0..self.n)
                .map(|j| if self.get(i, j) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn full(n: usize) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.bits[i * self.words + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    #[inline]
    pub(crate) fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Boolean product `self ∘ other`: `(i, j)` is set when some `k` has
    /// `self(i, k)` and `other(k, j)`.
    pub fn compose(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = BitMatrix::new(self.n);
        for i in 0..self.n {
            let row = self.row_words(i);
            let dst = &mut out.bits[i * self.words..(i + 1) * self.words];
            for (wi, &word) in row.iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let k = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    for (d, s) in dst.iter_mut().zip(other.row_words(k)) {
                        *d |= s;
                    }
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Entrywise implication: every set entry of `self` is set in `other`.
    pub fn is_subset_of(&self, other: &BitMatrix) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

/// `A ∘ A ∘ A`.
pub fn relation_triple_compose(a: &BitMatrix) -> BitMatrix {
    a.compose(a).compose(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_triple(a: &BitMatrix) -> BitMatrix {
        let n = a.dimension();
        let mut out = BitMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                let hit = (0..n).any(|k| (0..n).any(|l| a.get(i, k) && a.get(k, l) && a.get(l, j)));
                out.set(i, j, hit);
            }
        }
        out
    }

    #[test]
    fn identity_and_full_are_fixed() {
        assert_eq!(relation_triple_compose(&BitMatrix::identity(5)), BitMatrix::identity(5));
        assert_eq!(relation_triple_compose(&BitMatrix::full(3)), BitMatrix::full(3));
    }

    #[test]
    fn path_relation_reaches_three_steps() {
        // P3 adjacency plus the diagonal: 0-1-2
        let mut a = BitMatrix::identity(3);
        a.set(0, 1, true);
        a.set(1, 0, true);
        a.set(1, 2, true);
        a.set(2, 1, true);
        let t = relation_triple_compose(&a);
        assert_eq!(t, BitMatrix::full(3));
        // on P5 the endpoints are four steps apart
        let mut b = BitMatrix::identity(5);
        for i in 0..4 {
            b.set(i, i + 1, true);
            b.set(i + 1, i, true);
        }
        let t = relation_triple_compose(&b);
        assert!(t.get(0, 3));
        assert!(!t.get(0, 4));
        assert_eq!(t, brute_triple(&b));
    }

    use proptest::prelude::*;
    proptest! {
        #[test]
        fn triple_compose_matches_enumeration(n in 1usize..12, seed in any::<u64>()) {
            let mut a = BitMatrix::new(n);
            let mut s = seed;
            for i in 0..n {
                for j in 0..n {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    a.set(i, j, (s >> 61) == 0);
                }
            }
            prop_assert_eq!(relation_triple_compose(&a), brute_triple(&a));
        }
    }
}
