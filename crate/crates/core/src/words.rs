//! Words in the free group of rank p and the algebraic side of
//! pinchability: reduction, proper powers, conjugacy of cyclic subgroups.
//!
//! Letters are signed generator indices: generator i is `+i`, its inverse
//! `-i`, with 1 <= i <= rank. This matches the on-disk format, where a word
//! is just a list of signed integers.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<i32>,
}

// A word serializes as its bare signed-letter list; the rank travels
// separately in file formats that carry words.
impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(serializer)
    }
}

impl Word {
    /// Builds a word from signed letters, reducing it.
    pub fn new(rank: usize, letters: &[i32]) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArgument("rank must be positive".into()));
        }
        for &x in letters {
            if x == 0 || x.unsigned_abs() as usize > rank {
                return Err(Error::InvalidArgument(format!(
                    "letter {x} is outside rank {rank}"
                )));
            }
        }
        Ok(Word {
            rank,
            letters: reduce_letters(letters),
        })
    }

    pub fn empty(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// Single generator (positive index) or inverse (negative).
    pub fn generator(rank: usize, letter: i32) -> Result<Self> {
        Word::new(rank, &[letter])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|x| -x).collect(),
        }
    }

    /// Reduced concatenation self * other.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word {
            rank: self.rank,
            letters: reduce_letters(&letters),
        })
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        Word {
            rank: self.rank,
            letters: reduce_letters(&letters),
        }
    }

    /// Splits off a conjugator: returns (core, conjugator) with
    /// self = conjugator * core * conjugator^-1 and core cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut core = self.letters.clone();
        let mut conj = Vec::new();
        while core.len() >= 2 && core[0] == -core[core.len() - 1] {
            conj.push(core[0]);
            core.remove(0);
            core.pop();
        }
        (
            Word {
                rank: self.rank,
                letters: core,
            },
            Word {
                rank: self.rank,
                letters: conj,
            },
        )
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.letters.len() < 2 || self.letters[0] != -self.letters[self.letters.len() - 1]
    }

    /// True iff the element is u^k for some k >= 2, detected by a period
    /// search over the divisors of the cyclically reduced length.
    pub fn is_proper_power(&self) -> Result<bool> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let (core, _) = self.cyclic_reduce();
        let n = core.letters.len();
        for period in 1..n {
            if !n.is_multiple_of(period) {
                continue;
            }
            if (period..n).all(|i| core.letters[i] == core.letters[i - period]) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Conjugacy test via cyclic rotations of the reduced cores. With
    /// `allow_inverse`, tests conjugacy of the generated cyclic subgroups.
    pub fn is_conjugate_to(&self, other: &Word, allow_inverse: bool) -> Result<bool> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let (a, _) = self.cyclic_reduce();
        let (b, _) = other.cyclic_reduce();
        if is_rotation(&a.letters, &b.letters) {
            return Ok(true);
        }
        if allow_inverse && is_rotation(&a.letters, &b.inverse().letters) {
            return Ok(true);
        }
        Ok(false)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &x in &self.letters {
            if !first {
                write!(f, ".")?;
            }
            first = false;
            if x > 0 {
                write!(f, "a{x}")?;
            } else {
                write!(f, "a{}^-1", -x)?;
            }
        }
        Ok(())
    }
}

fn reduce_letters(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &x in letters {
        if out.last().is_some_and(|&y| y == -x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn is_rotation(a: &[i32], b: &[i32]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|shift| (0..a.len()).all(|i| a[(shift + i) % a.len()] == b[i]))
}

/// Per-word and per-pair findings for a prospective pinchable family.
#[derive(Debug, Clone, Serialize)]
pub struct PinchabilityReport {
    pub words: Vec<WordCheck>,
    pub pairs: Vec<PairCheck>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WordCheck {
    pub word: Vec<i32>,
    pub nontrivial: bool,
    pub cyclic_core: Vec<i32>,
    pub proper_power: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairCheck {
    pub first: usize,
    pub second: usize,
    pub conjugate_cyclic_subgroups: bool,
}

/// Checks the algebraic half of the pinchability conditions: every word is
/// nontrivial and not a proper power, and no two generate conjugate cyclic
/// subgroups (inverses count as conjugate here).
pub fn pinchable_algebraic_check(words: &[Word]) -> Result<PinchabilityReport> {
    if words.is_empty() {
        return Err(Error::InvalidArgument("no words given".into()));
    }
    let rank = words[0].rank();
    for w in words {
        if w.rank() != rank {
            return Err(Error::RankMismatch(rank, w.rank()));
        }
    }
    let mut word_checks = Vec::with_capacity(words.len());
    for w in words {
        let (core, _) = w.cyclic_reduce();
        let nontrivial = !core.is_empty();
        let proper_power = if nontrivial {
            w.is_proper_power()?
        } else {
            false
        };
        word_checks.push(WordCheck {
            word: w.letters().to_vec(),
            nontrivial,
            cyclic_core: core.letters().to_vec(),
            proper_power,
        });
    }
    let mut pair_checks = Vec::new();
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            pair_checks.push(PairCheck {
                first: i,
                second: j,
                conjugate_cyclic_subgroups: words[i].is_conjugate_to(&words[j], true)?,
            });
        }
    }
    let pass = word_checks.iter().all(|w| w.nontrivial && !w.proper_power)
        && pair_checks.iter().all(|p| !p.conjugate_cyclic_subgroups);
    Ok(PinchabilityReport {
        words: word_checks,
        pairs: pair_checks,
        pass,
    })
}

/// The rank-2 family w_n = (b1 b2)^n (b2 b1)^-n of length 4n.
pub fn pinchable_family(n: usize) -> Result<Word> {
    if n < 1 {
        return Err(Error::InvalidIndex);
    }
    let mut letters = Vec::with_capacity(4 * n);
    for _ in 0..n {
        letters.extend_from_slice(&[1, 2]);
    }
    for _ in 0..n {
        letters.extend_from_slice(&[-1, -2]);
    }
    Word::new(2, &letters)
}

/// The explicit genus-3 words r1 = d1 d2 d3^-1 d1^-1 d3 d2^-1,
/// r2 = d1 d2 d1^-1 d2^-1, r3 = d1 d3^-1 d1^-1 d3.
pub fn genus3_pinchable_words() -> [Word; 3] {
    [
        Word::new(3, &[1, 2, -3, -1, 3, -2]).expect("fixed word"),
        Word::new(3, &[1, 2, -1, -2]).expect("fixed word"),
        Word::new(3, &[1, -3, -1, 3]).expect("fixed word"),
    ]
}
