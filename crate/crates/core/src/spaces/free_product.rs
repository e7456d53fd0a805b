//! Normal forms in the free product of `Z = <a>` and `Z^2 = <b, c>`.
//!
//! A normal form alternates `a^k` syllables with `b^m c^n` syllables, all
//! nontrivial. Its word length `sum |k| + sum (|m| + |n|)` is the distance
//! from the identity in the Cayley graph for `{a, b, c}`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syllable {
    A(i32),
    B(i32, i32),
}

/// One of the six generators `a, a^-1, b, b^-1, c, c^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    A(i32),
    B(i32),
    C(i32),
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::A(1),
        Generator::A(-1),
        Generator::B(1),
        Generator::B(-1),
        Generator::C(1),
        Generator::C(-1),
    ];

    fn letter(self) -> char {
        match self {
            Generator::A(1) => 'a',
            Generator::A(_) => 'A',
            Generator::B(1) => 'b',
            Generator::B(_) => 'B',
            Generator::C(1) => 'c',
            Generator::C(_) => 'C',
        }
    }

    fn from_letter(ch: char) -> Option<Generator> {
        Some(match ch {
            'a' => Generator::A(1),
            'A' => Generator::A(-1),
            'b' => Generator::B(1),
            'B' => Generator::B(-1),
            'c' => Generator::C(1),
            'C' => Generator::C(-1),
            _ => return None,
        })
    }

    /// Whether the generator lies in the `Z^2` factor.
    pub fn in_sheet(self) -> bool {
        !matches!(self, Generator::A(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NormalForm(Vec<Syllable>);

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn word_length(&self) -> u32 {
        self.0
            .iter()
            .map(|s| match *s {
                Syllable::A(k) => k.unsigned_abs(),
                Syllable::B(m, n) => m.unsigned_abs() + n.unsigned_abs(),
            })
            .sum()
    }

    /// Right multiplication by a generator.
    pub fn times(&self, g: Generator) -> NormalForm {
        let mut s = self.0.clone();
        match (g, s.last_mut()) {
            (Generator::A(e), Some(Syllable::A(k))) => {
                *k += e;
                if *k == 0 {
                    s.pop();
                }
            }
            (Generator::A(e), _) => s.push(Syllable::A(e)),
            (Generator::B(e), Some(Syllable::B(m, n))) => {
                *m += e;
                if *m == 0 && *n == 0 {
                    s.pop();
                }
            }
            (Generator::C(e), Some(Syllable::B(m, n))) => {
                *n += e;
                if *m == 0 && *n == 0 {
                    s.pop();
                }
            }
            (Generator::B(e), _) => s.push(Syllable::B(e, 0)),
            (Generator::C(e), _) => s.push(Syllable::B(0, e)),
        }
        NormalForm(s)
    }

    /// The element as a word in the generators, `b`s before `c`s.
    pub fn letters(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        for s in &self.0 {
            match *s {
                Syllable::A(k) => {
                    out.extend(std::iter::repeat_n(Generator::A(k.signum()), k.unsigned_abs() as usize))
                }
                Syllable::B(m, n) => {
                    out.extend(std::iter::repeat_n(Generator::B(m.signum()), m.unsigned_abs() as usize));
                    out.extend(std::iter::repeat_n(Generator::C(n.signum()), n.unsigned_abs() as usize));
                }
            }
        }
        out
    }

    pub fn inverse(&self) -> NormalForm {
        NormalForm(
            self.0
                .iter()
                .rev()
                .map(|s| match *s {
                    Syllable::A(k) => Syllable::A(-k),
                    Syllable::B(m, n) => Syllable::B(-m, -n),
                })
                .collect(),
        )
    }

    pub fn multiply(&self, other: &NormalForm) -> NormalForm {
        other.letters().into_iter().fold(self.clone(), |w, g| w.times(g))
    }

    /// Distance in the Cayley graph.
    pub fn distance(&self, other: &NormalForm) -> u32 {
        self.inverse().multiply(other).word_length()
    }

    /// Representative of the coset `w <b, c>`: the trailing `Z^2` syllable
    /// removed.
    pub fn sheet(&self) -> NormalForm {
        let mut s = self.0.clone();
        if matches!(s.last(), Some(Syllable::B(..))) {
            s.pop();
        }
        NormalForm(s)
    }

    /// Number of `a`-syllables, the Bass-Serre depth of the sheet.
    pub fn a_syllables(&self) -> usize {
        self.0.iter().filter(|s| matches!(s, Syllable::A(_))).count()
    }

    pub fn parse(text: &str) -> Result<NormalForm> {
        if text == "e" {
            return Ok(NormalForm::identity());
        }
        let mut w = NormalForm::identity();
        for ch in text.chars() {
            let g = Generator::from_letter(ch)
                .ok_or_else(|| Error::input(format!("bad letter {ch:?} in word {text:?}")))?;
            w = w.times(g);
        }
        Ok(w)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for g in self.letters() {
            write!(f, "{}", g.letter())?;
        }
        Ok(())
    }
}

/// Reduces an arbitrary word by brute force, used to cross-check the
/// incremental multiplication.
pub fn reduce_word(word: &[Generator]) -> NormalForm {
    word.iter().fold(NormalForm::identity(), |w, &g| w.times(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_cancels_and_commutes_in_sheets() {
        let w = NormalForm::parse("abcB").unwrap();
        assert_eq!(w.to_string(), "ac");
        assert_eq!(w.word_length(), 2);
        let w = NormalForm::parse("aAbB").unwrap();
        assert_eq!(w, NormalForm::identity());
        let w = NormalForm::parse("cbab").unwrap();
        assert_eq!(w.syllables(), &[Syllable::B(1, 1), Syllable::A(1), Syllable::B(1, 0)]);
    }

    #[test]
    fn distance_and_sheets() {
        let x = NormalForm::parse("bba").unwrap();
        let y = NormalForm::parse("bbac").unwrap();
        assert_eq!(x.distance(&y), 1);
        assert_eq!(y.sheet(), x);
        assert_eq!(NormalForm::parse("bbc").unwrap().sheet(), NormalForm::identity());
        assert_eq!(NormalForm::parse("aba").unwrap().a_syllables(), 2);
        let e = NormalForm::identity();
        assert_eq!(e.distance(&NormalForm::parse("abcA").unwrap()), 4);
    }

    #[test]
    fn inverse_round_trip() {
        let w = NormalForm::parse("abbCaac").unwrap();
        assert_eq!(w.multiply(&w.inverse()), NormalForm::identity());
        assert_eq!(NormalForm::parse(&w.to_string()).unwrap(), w);
    }
}
