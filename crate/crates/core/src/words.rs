//! Alphabet parameters, cone addresses, rational points, and the prefix
//! calculus everything else consumes.
//!
//! A point of the Cantor space is an infinite sequence: a root digit in
//! `1..=r` followed by letters in `1..=n`.  Rational points are the
//! eventually periodic ones, kept in a canonical `(preperiod, period)` form:
//! the period is primitive and the last letter of the preperiod differs from
//! the last letter of the period.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The parameters (n, r) of the Cantor space: r root digits, n-ary tails.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Space {
    n: u32,
    r: u32,
}

impl Space {
    pub fn new(n: u32, r: u32) -> Result<Self> {
        if n < 2 || r < 1 {
            return Err(Error::InvalidSpace { n, r });
        }
        Ok(Space { n, r })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Modulus of the type invariant: n - 1, clamped to 1 so that arithmetic
    /// mod it is always defined (for n = 2 all types are 0).
    pub fn modulus(&self) -> u32 {
        (self.n - 1).max(1)
    }

    pub fn letters(&self) -> impl Iterator<Item = u32> {
        1..=self.n
    }

    pub fn roots(&self) -> impl Iterator<Item = u32> {
        1..=self.r
    }

    pub(crate) fn check_letter(&self, letter: u32) -> Result<()> {
        if letter < 1 || letter > self.n {
            return Err(Error::LetterOutOfRange { letter, n: self.n });
        }
        Ok(())
    }

    pub(crate) fn check_root(&self, root: u32) -> Result<()> {
        if root < 1 || root > self.r {
            return Err(Error::RootOutOfRange { root, r: self.r });
        }
        Ok(())
    }

    pub(crate) fn check_same(&self, other: &Space) -> Result<()> {
        if self != other {
            return Err(Error::SpaceMismatch {
                left: (self.n, self.r),
                right: (other.n, other.r),
            });
        }
        Ok(())
    }

    pub(crate) fn check_same_arity(&self, other: &Space) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SpaceMismatch {
                left: (self.n, self.r),
                right: (other.n, other.r),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V {} {}", self.n, self.r)
    }
}

/// A cone address: a root digit plus a finite word over `1..=n`.
///
/// The cone `C_a` consists of every point that has `a` as a prefix.  The
/// derived ordering (root first, then word, lexicographically) is the
/// canonical order used everywhere.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Address {
    space: Space,
    root: u32,
    word: Vec<u32>,
}

impl Address {
    pub fn new(space: Space, root: u32, word: Vec<u32>) -> Result<Self> {
        space.check_root(root)?;
        for &letter in &word {
            space.check_letter(letter)?;
        }
        Ok(Address { space, root, word })
    }

    pub fn root_cone(space: Space, root: u32) -> Result<Self> {
        Address::new(space, root, Vec::new())
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    /// Word length (the root digit is not counted).
    pub fn depth(&self) -> usize {
        self.word.len()
    }

    /// The address one level up, or `None` at a root.
    pub fn parent(&self) -> Option<Address> {
        if self.word.is_empty() {
            return None;
        }
        Some(Address {
            space: self.space,
            root: self.root,
            word: self.word[..self.word.len() - 1].to_vec(),
        })
    }

    pub fn child(&self, letter: u32) -> Result<Self> {
        self.space.check_letter(letter)?;
        let mut word = self.word.clone();
        word.push(letter);
        Ok(Address {
            space: self.space,
            root: self.root,
            word,
        })
    }

    pub fn extended(&self, suffix: &[u32]) -> Result<Self> {
        for &letter in suffix {
            self.space.check_letter(letter)?;
        }
        let mut word = self.word.clone();
        word.extend_from_slice(suffix);
        Ok(Address {
            space: self.space,
            root: self.root,
            word,
        })
    }

    /// True iff `C_other` is contained in `C_self`.
    pub fn is_prefix_of(&self, other: &Address) -> bool {
        self.space == other.space
            && self.root == other.root
            && other.word.len() >= self.word.len()
            && other.word[..self.word.len()] == self.word[..]
    }

    pub fn is_strict_prefix_of(&self, other: &Address) -> bool {
        self.is_prefix_of(other) && self.word.len() < other.word.len()
    }

    /// True iff the point lies in this cone.
    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.space == p.space()
            && self.root == p.root()
            && (0..self.word.len()).all(|i| self.word[i] == p.letter_at(i))
    }

    /// The point `a 1 1 1 ...` of this cone (used as a deterministic sample).
    pub fn sample_point(&self, tail: &[u32]) -> Result<RationalPoint> {
        RationalPoint::new(self.space, self.root, self.word.clone(), tail.to_vec())
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.root)?;
        for (i, letter) in self.word.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

/// An eventually periodic point, always held in canonical form: the period is
/// primitive and the preperiod is minimal (its last letter, if any, differs
/// from the last letter of the period).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct RationalPoint {
    space: Space,
    root: u32,
    preperiod: Vec<u32>,
    period: Vec<u32>,
}

impl RationalPoint {
    /// Canonicalize `root . pre . per . per . ...`.
    ///
    /// Idempotent on already-canonical input.
    pub fn new(space: Space, root: u32, pre: Vec<u32>, per: Vec<u32>) -> Result<Self> {
        space.check_root(root)?;
        if per.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        for &letter in pre.iter().chain(per.iter()) {
            space.check_letter(letter)?;
        }
        let mut preperiod = pre;
        let mut period = primitive_root(&per);
        // Absorb preperiod letters that match the period's tail: a x (w x)^w
        // is the same point as a (x w)^w.
        while let Some(&last) = preperiod.last() {
            if last == *period.last().expect("period is nonempty") {
                preperiod.pop();
                period.rotate_right(1);
            } else {
                break;
            }
        }
        Ok(RationalPoint {
            space,
            root,
            preperiod,
            period,
        })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    /// Letter at position `i` of the tail (0-based, root not counted).
    pub fn letter_at(&self, i: usize) -> u32 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The first `len` tail letters.
    pub fn expand(&self, len: usize) -> Vec<u32> {
        (0..len).map(|i| self.letter_at(i)).collect()
    }

    /// The address formed by the first `len` tail letters.
    pub fn prefix(&self, len: usize) -> Address {
        Address {
            space: self.space,
            root: self.root,
            word: self.expand(len),
        }
    }

    /// The point obtained by dropping the first `cut` tail letters and
    /// prepending the address `to` (which may live in a space with a
    /// different number of roots but the same arity).
    pub fn replace_prefix(&self, from: &Address, to: &Address) -> Result<RationalPoint> {
        self.space.check_same(&from.space())?;
        self.space.check_same_arity(&to.space())?;
        if !from.contains(self) {
            return Err(Error::ConeDoesNotContain {
                address: from.to_string(),
                point: self.to_string(),
            });
        }
        let cut = from.depth();
        let mut pre = to.word().to_vec();
        if cut <= self.preperiod.len() {
            pre.extend_from_slice(&self.preperiod[cut..]);
            RationalPoint::new(to.space(), to.root(), pre, self.period.clone())
        } else {
            let offset = (cut - self.preperiod.len()) % self.period.len();
            let mut per = self.period.clone();
            per.rotate_left(offset);
            RationalPoint::new(to.space(), to.root(), pre, per)
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.root)?;
        for (i, letter) in self.preperiod.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{letter}")?;
        }
        write!(f, "(")?;
        for (i, letter) in self.period.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{letter}")?;
        }
        write!(f, ")")
    }
}

/// The shortest word whose power is `word`.
fn primitive_root(word: &[u32]) -> Vec<u32> {
    let len = word.len();
    for d in 1..=len {
        if len % d == 0 && word.iter().enumerate().all(|(i, &c)| c == word[i % d]) {
            return word[..d].to_vec();
        }
    }
    unreachable!("d = len always matches")
}

/// Length of the longest common tail prefix of two points with the same root;
/// `None` when the roots differ.
pub fn common_prefix_len(a: &RationalPoint, b: &RationalPoint) -> Option<usize> {
    if a.space() != b.space() || a.root() != b.root() {
        return None;
    }
    // Two distinct canonical points must differ within one combined
    // (preperiod + period) span of each other.
    let bound = a.preperiod.len() + b.preperiod.len() + a.period.len() + b.period.len();
    for i in 0..=bound {
        if a.letter_at(i) != b.letter_at(i) {
            return Some(i);
        }
    }
    debug_assert_eq!(a, b, "points agreeing past the bound must be equal");
    None
}
