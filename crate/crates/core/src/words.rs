//! Generator alphabets, Artin words and their text format.
//!
//! Generator indices are 1-based everywhere: the letter `i` stands for the
//! Artin generator crossing strands `i` and `i + 1`, so valid letters for
//! `n` strands are `1..=n-1`.

use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// Number of strands, always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrandCount(u16);

impl StrandCount {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=u16::MAX as usize).contains(&n) {
            return Err(Error::InvalidStrandCount(n));
        }
        Ok(StrandCount(n as u16))
    }

    pub fn get(self) -> u16 {
        self.0
    }

    /// Number of generators, `n - 1`.
    pub fn generators(self) -> u16 {
        self.0 - 1
    }

    /// Length of the half twist, `n(n-1)/2`.
    pub fn delta_len(self) -> usize {
        let n = self.0 as usize;
        n * (n - 1) / 2
    }

    pub fn contains(self, letter: u16) -> bool {
        letter >= 1 && letter < self.0
    }
}

impl fmt::Display for StrandCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A positive word in the Artin generators of `B_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArtinWord {
    n: StrandCount,
    letters: Vec<u16>,
}

impl ArtinWord {
    pub fn empty(n: StrandCount) -> Self {
        ArtinWord {
            n,
            letters: Vec::new(),
        }
    }

    pub fn new(n: StrandCount, letters: Vec<u16>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| !n.contains(l)) {
            return Err(Error::GeneratorOutOfRange {
                letter: bad as i64,
                max: n.generators(),
            });
        }
        Ok(ArtinWord { n, letters })
    }

    /// Builds a word whose letters are already known to be in range.
    pub(crate) fn from_trusted(n: StrandCount, letters: Vec<u16>) -> Self {
        debug_assert!(letters.iter().all(|&l| n.contains(l)));
        ArtinWord { n, letters }
    }

    pub fn strands(&self) -> StrandCount {
        self.n
    }

    pub fn letters(&self) -> &[u16] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<u16> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn last(&self) -> Option<u16> {
        self.letters.last().copied()
    }

    pub fn push(&mut self, letter: u16) -> Result<()> {
        if !self.n.contains(letter) {
            return Err(Error::GeneratorOutOfRange {
                letter: letter as i64,
                max: self.n.generators(),
            });
        }
        self.letters.push(letter);
        Ok(())
    }

    pub fn concat(&self, other: &ArtinWord) -> Result<ArtinWord> {
        check_same(self.n, other.n)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(ArtinWord { n: self.n, letters })
    }

    pub fn prefix(&self, len: usize) -> ArtinWord {
        ArtinWord {
            n: self.n,
            letters: self.letters[..len].to_vec(),
        }
    }
}

impl fmt::Display for ArtinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(self))
    }
}

fn check_same(a: StrandCount, b: StrandCount) -> Result<()> {
    if a != b {
        return Err(Error::AlphabetMismatch {
            left: a.get(),
            right: b.get(),
        });
    }
    Ok(())
}

/// Lexicographic comparison with `σ_1 < σ_2 < ... < σ_{n-1}`; a proper
/// prefix compares less.
pub fn lex_compare(u: &ArtinWord, v: &ArtinWord) -> Result<Ordering> {
    check_same(u.n, v.n)?;
    Ok(u.letters.cmp(&v.letters))
}

/// Parses whitespace-separated 1-based generator indices. The empty string is
/// the empty word.
pub fn parse_word(text: &str, n: StrandCount) -> Result<ArtinWord> {
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        let value: i64 = token
            .parse()
            .map_err(|_| Error::Parse(format!("invalid generator token {token:?}")))?;
        if value < 1 || value >= n.get() as i64 {
            return Err(Error::GeneratorOutOfRange {
                letter: value,
                max: n.generators(),
            });
        }
        letters.push(value as u16);
    }
    Ok(ArtinWord { n, letters })
}

pub fn format_word(w: &ArtinWord) -> String {
    let mut out = String::with_capacity(w.letters.len() * 3);
    for (i, l) in w.letters.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&l.to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(k: usize) -> StrandCount {
        StrandCount::new(k).unwrap()
    }

    fn w(k: usize, letters: &[u16]) -> ArtinWord {
        ArtinWord::new(n(k), letters.to_vec()).unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(
            lex_compare(&w(3, &[1, 2, 1]), &w(3, &[2, 1, 2])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            lex_compare(&w(4, &[]), &w(4, &[])).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            lex_compare(&w(4, &[3, 2, 1]), &w(4, &[3, 3, 2])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            lex_compare(&w(4, &[1]), &w(4, &[1, 1])).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn compare_rejects_mixed_alphabets() {
        let err = lex_compare(&w(3, &[1]), &w(4, &[1])).unwrap_err();
        assert!(err.to_string().contains("alphabet mismatch"));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_word("3 2 1", n(4)).unwrap(), w(4, &[3, 2, 1]));
        assert_eq!(parse_word("", n(4)).unwrap(), ArtinWord::empty(n(4)));
        assert_eq!(parse_word("  2\t1 \n", n(4)).unwrap(), w(4, &[2, 1]));
        let err = parse_word("4 1", n(4)).unwrap_err();
        assert!(err.to_string().contains("generator out of range"));
        assert!(parse_word("0", n(4)).is_err());
        assert!(matches!(parse_word("1 x", n(4)), Err(Error::Parse(_))));
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_word(&w(4, &[3, 2, 1])), "3 2 1");
        assert_eq!(format_word(&w(4, &[])), "");
        assert_eq!(format_word(&w(2, &[1, 1, 1])), "1 1 1");
    }

    #[test]
    fn strand_count_bounds() {
        assert!(StrandCount::new(1).is_err());
        assert_eq!(n(512).generators(), 511);
        assert_eq!(n(4).delta_len(), 6);
    }

    fn word_strategy() -> impl Strategy<Value = ArtinWord> {
        (2usize..40).prop_flat_map(|k| {
            proptest::collection::vec(1..k as u16, 0..30)
                .prop_map(move |letters| ArtinWord::new(n(k), letters).unwrap())
        })
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(word in word_strategy()) {
            let text = format_word(&word);
            prop_assert_eq!(parse_word(&text, word.strands()).unwrap(), word);
        }

        #[test]
        fn lex_order_is_total(
            a in proptest::collection::vec(1u16..5, 6),
            b in proptest::collection::vec(1u16..5, 6),
            c in proptest::collection::vec(1u16..5, 6),
        ) {
            let (a, b, c) = (w(5, &a), w(5, &b), w(5, &c));
            let ab = lex_compare(&a, &b).unwrap();
            prop_assert_eq!(ab.reverse(), lex_compare(&b, &a).unwrap());
            if ab == Ordering::Equal {
                prop_assert_eq!(&a, &b);
            }
            let bc = lex_compare(&b, &c).unwrap();
            if ab != Ordering::Greater && bc != Ordering::Greater {
                prop_assert_ne!(lex_compare(&a, &c).unwrap(), Ordering::Greater);
            }
        }
    }
}
