//! Z2 linear combinations of noncommutative words in the generators.

use std::cmp::Ordering;
use std::collections::BTreeSet;

/// A monomial: an ordered list of generator ids. The empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<usize>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, degrees: &[i64]) -> i64 {
        self.0.iter().map(|&g| degrees[g]).sum()
    }

    pub fn render(&self, labels: &[String]) -> String {
        if self.0.is_empty() {
            "1".to_owned()
        } else {
            self.0.iter().map(|&g| labels[g].as_str()).collect::<Vec<_>>().join("*")
        }
    }
}

/// Mod-2 sum of words; a word is present iff its coefficient is 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DgaElement {
    terms: BTreeSet<Word>,
}

impl DgaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::unit())
    }

    pub fn generator(g: usize) -> Self {
        Self::from_word(Word(vec![g]))
    }

    pub fn from_word(w: Word) -> Self {
        let mut e = Self::zero();
        e.add_word(w);
        e
    }

    pub fn from_words<I: IntoIterator<Item = Word>>(words: I) -> Self {
        let mut e = Self::zero();
        for w in words {
            e.add_word(w);
        }
        e
    }

    /// Add one copy of `w` (mod 2).
    pub fn add_word(&mut self, w: Word) {
        if !self.terms.remove(&w) {
            self.terms.insert(w);
        }
    }

    pub fn add(&mut self, other: &DgaElement) {
        for w in &other.terms {
            self.add_word(w.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.terms.contains(w)
    }

    pub fn has_constant(&self) -> bool {
        self.terms.contains(&Word::unit())
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Words of length exactly `n`.
    pub fn length_part(&self, n: usize) -> DgaElement {
        DgaElement {
            terms: self.terms.iter().filter(|w| w.len() == n).cloned().collect(),
        }
    }

    /// Coefficient of the single-letter word `g`.
    pub fn linear_coeff(&self, g: usize) -> bool {
        self.terms.contains(&Word(vec![g]))
    }

    /// Apply the derivation determined by `d` on generators (with d(1) = 0).
    pub fn apply_derivation(&self, d: &[DgaElement]) -> DgaElement {
        let mut out = DgaElement::zero();
        for w in &self.terms {
            for p in 0..w.len() {
                for t in d[w.0[p]].words() {
                    let mut nw = Vec::with_capacity(w.len() - 1 + t.len());
                    nw.extend_from_slice(&w.0[..p]);
                    nw.extend_from_slice(&t.0);
                    nw.extend_from_slice(&w.0[p + 1..]);
                    out.add_word(Word(nw));
                }
            }
        }
        out
    }

    /// Apply the algebra map q -> q + eps(q).
    pub fn apply_shift(&self, eps: &[bool]) -> DgaElement {
        let mut out = DgaElement::zero();
        for w in &self.terms {
            let aug: Vec<usize> = (0..w.len()).filter(|&p| eps[w.0[p]]).collect();
            for mask in 0u64..(1u64 << aug.len()) {
                let nw: Vec<usize> =
                    w.0.iter()
                        .enumerate()
                        .filter(|(p, _)| aug.iter().position(|a| a == p).is_none_or(|bit| mask >> bit & 1 == 0))
                        .map(|(_, &g)| g)
                        .collect();
                out.add_word(Word(nw));
            }
        }
        out
    }

    /// Evaluate under the algebra map sending q to eps(q).
    pub fn evaluate(&self, eps: &[bool]) -> bool {
        self.terms.iter().filter(|w| w.0.iter().all(|&g| eps[g])).count() % 2 == 1
    }

    pub fn render(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_owned();
        }
        self.terms
            .iter()
            .map(|w| w.render(labels))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl FromIterator<Word> for DgaElement {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        Self::from_words(iter)
    }
}
