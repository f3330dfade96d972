//! Brute-force ground truth for small parameters.
//!
//! Everything here works directly from the braid relations: a word is
//! normalized by exploring its whole equivalence class breadth-first and
//! taking the lexicographically least member. None of the fast code paths
//! are used, so the oracle can validate them.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::words::{ArtinWord, StrandCount};
use crate::{Error, ForbiddenSet, Result};

pub const ORACLE_ENV: &str = "BRAIDGEN_ORACLE_MAX";

/// Size limits for oracle computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBounds {
    /// Longest word that may be normalized.
    pub max_word_len: usize,
    /// Largest strand count accepted by enumeration.
    pub max_enum_n: u16,
    /// Largest length accepted by enumeration.
    pub max_enum_k: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds {
            max_word_len: 12,
            max_enum_n: 5,
            max_enum_k: 9,
        }
    }
}

impl OracleBounds {
    /// Defaults, with `BRAIDGEN_ORACLE_MAX` (if set) replacing the word
    /// length and enumeration length limits.
    pub fn from_env() -> Self {
        let mut bounds = Self::default();
        if let Some(max) = std::env::var(ORACLE_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            bounds.max_word_len = max;
            bounds.max_enum_k = max;
        }
        bounds
    }
}

/// Explores equivalence classes of positive words under
/// `σ_iσ_j = σ_jσ_i` (`|i-j| >= 2`) and `σ_iσ_jσ_i = σ_jσ_iσ_j` (`|i-j| = 1`).
/// Normal forms of fully explored classes are memoized.
#[derive(Debug, Default)]
pub struct EquivClassExplorer {
    bounds: OracleBounds,
    normal_forms: HashMap<Vec<u16>, Vec<u16>>,
    non_minimal: HashSet<Vec<u16>>,
}

fn neighbours(word: &[u16], mut visit: impl FnMut(Vec<u16>)) {
    for p in 0..word.len().saturating_sub(1) {
        let (a, b) = (word[p], word[p + 1]);
        if a.abs_diff(b) >= 2 {
            let mut next = word.to_vec();
            next.swap(p, p + 1);
            visit(next);
        }
        if p + 2 < word.len() && a.abs_diff(b) == 1 && word[p + 2] == a {
            let mut next = word.to_vec();
            next[p] = b;
            next[p + 1] = a;
            next[p + 2] = b;
            visit(next);
        }
    }
}

impl EquivClassExplorer {
    pub fn new(bounds: OracleBounds) -> Self {
        EquivClassExplorer {
            bounds,
            ..Default::default()
        }
    }

    pub fn bounds(&self) -> OracleBounds {
        self.bounds
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len > self.bounds.max_word_len {
            return Err(Error::WordTooLongForOracle {
                len,
                bound: self.bounds.max_word_len,
            });
        }
        Ok(())
    }

    /// Every word representing the same braid as `w`.
    pub fn closure(&self, w: &ArtinWord) -> Result<Vec<ArtinWord>> {
        self.check_len(w.len())?;
        let n = w.strands();
        Ok(Self::explore(w.letters(), |_| false)
            .0
            .into_iter()
            .map(|letters| ArtinWord::from_trusted(n, letters))
            .collect())
    }

    /// Breadth-first closure; stops early once `stop` accepts a word.
    fn explore(start: &[u16], mut stop: impl FnMut(&[u16]) -> bool) -> (Vec<Vec<u16>>, bool) {
        let mut seen: HashSet<Vec<u16>> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(start.to_vec());
        queue.push_back(start.to_vec());
        while let Some(word) = queue.pop_front() {
            if stop(&word) {
                return (order, true);
            }
            neighbours(&word, |next| {
                if !seen.contains(&next) {
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            });
            order.push(word);
        }
        (order, false)
    }

    /// The lexicographically least word representing the same braid.
    pub fn normalize(&mut self, w: &ArtinWord) -> Result<ArtinWord> {
        self.check_len(w.len())?;
        let n = w.strands();
        if let Some(nf) = self.normal_forms.get(w.letters()) {
            return Ok(ArtinWord::from_trusted(n, nf.clone()));
        }
        let (class, _) = Self::explore(w.letters(), |_| false);
        let least = class.iter().min().cloned().unwrap_or_default();
        for word in class {
            self.normal_forms.insert(word, least.clone());
        }
        Ok(ArtinWord::from_trusted(n, least))
    }

    /// Whether `w` is the least word of its class, stopping at the first
    /// smaller word found.
    pub fn is_lex_rep(&mut self, w: &ArtinWord) -> Result<bool> {
        self.check_len(w.len())?;
        let letters = w.letters();
        if let Some(nf) = self.normal_forms.get(letters) {
            return Ok(nf.as_slice() == letters);
        }
        if self.non_minimal.contains(letters) {
            return Ok(false);
        }
        let (class, found_smaller) = Self::explore(letters, |u| u < letters);
        if found_smaller {
            self.non_minimal.insert(letters.to_vec());
            return Ok(false);
        }
        for word in class {
            self.normal_forms.insert(word, letters.to_vec());
        }
        Ok(true)
    }

    /// All lex-representatives of length `k`, in lexicographic order.
    pub fn enumerate_lex_reps(&mut self, n: StrandCount, k: usize) -> Result<Vec<ArtinWord>> {
        if n.get() > self.bounds.max_enum_n || k > self.bounds.max_enum_k {
            return Err(Error::OracleBoundExceeded(format!(
                "enumeration of n={n}, k={k} exceeds n<={}, k<={}",
                self.bounds.max_enum_n, self.bounds.max_enum_k
            )));
        }
        self.check_len(k)?;
        let mut level = vec![ArtinWord::empty(n)];
        for _ in 0..k {
            let mut next = Vec::new();
            for w in &level {
                for letter in 1..n.get() {
                    let mut candidate = w.clone();
                    candidate.push(letter)?;
                    if self.is_lex_rep(&candidate)? {
                        next.push(candidate);
                    }
                }
            }
            level = next;
        }
        Ok(level)
    }

    /// Minimal forbidden prefixes after `w`, straight from the definition:
    /// braids `α` with `w·ω(α)` not lex-minimal, none of whose proper
    /// prefixes is forbidden. Candidates up to `length_bound` letters.
    pub fn brute_forbidden_min(
        &mut self,
        w: &ArtinWord,
        length_bound: usize,
    ) -> Result<ForbiddenSet> {
        let n = w.strands();
        if length_bound < n.get() as usize {
            return Err(Error::OracleBoundExceeded(format!(
                "length bound {length_bound} must be at least n={n}"
            )));
        }
        self.check_len(w.len() + length_bound)?;
        if !self.is_lex_rep(w)? {
            return Err(Error::NotLexRepresentative);
        }
        let saved = self.bounds;
        self.bounds.max_enum_n = self.bounds.max_enum_n.max(n.get());
        self.bounds.max_enum_k = self.bounds.max_enum_k.max(length_bound);
        let result = self.forbidden_min_unchecked(w, length_bound);
        self.bounds = saved;
        result
    }

    fn forbidden_min_unchecked(
        &mut self,
        w: &ArtinWord,
        length_bound: usize,
    ) -> Result<ForbiddenSet> {
        let n = w.strands();
        let mut forbidden: HashMap<Vec<u16>, bool> = HashMap::new();
        forbidden.insert(Vec::new(), false);
        let mut minimal = Vec::new();
        for len in 1..=length_bound {
            for alpha in self.enumerate_lex_reps(n, len)? {
                let is_forbidden = !self.is_lex_rep(&w.concat(&alpha)?)?;
                forbidden.insert(alpha.letters().to_vec(), is_forbidden);
                if !is_forbidden {
                    continue;
                }
                // maximal proper prefixes: drop the last letter of any word
                // in the class of α
                let mut has_forbidden_prefix = false;
                for u in self.closure(&alpha)? {
                    let beta = self.normalize(&u.prefix(len - 1))?;
                    if forbidden[beta.letters()] {
                        has_forbidden_prefix = true;
                        break;
                    }
                }
                if !has_forbidden_prefix {
                    minimal.push(alpha);
                }
            }
        }
        Ok(ForbiddenSet::new(n, minimal))
    }
}

pub fn normalize(w: &ArtinWord) -> Result<ArtinWord> {
    EquivClassExplorer::new(OracleBounds::from_env()).normalize(w)
}

pub fn enumerate_lex_reps(n: StrandCount, k: usize) -> Result<Vec<ArtinWord>> {
    EquivClassExplorer::new(OracleBounds::from_env()).enumerate_lex_reps(n, k)
}

pub fn brute_forbidden_min(w: &ArtinWord, length_bound: usize) -> Result<ForbiddenSet> {
    EquivClassExplorer::new(OracleBounds::from_env()).brute_forbidden_min(w, length_bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: usize) -> StrandCount {
        StrandCount::new(k).unwrap()
    }

    fn w(k: usize, letters: &[u16]) -> ArtinWord {
        ArtinWord::new(n(k), letters.to_vec()).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&w(3, &[2, 1, 2])).unwrap(), w(3, &[1, 2, 1]));
        assert_eq!(normalize(&w(4, &[3, 1])).unwrap(), w(4, &[1, 3]));
        let ex = EquivClassExplorer::default();
        assert_eq!(ex.closure(&w(4, &[1, 2, 1, 3, 2, 1])).unwrap().len(), 16);
        assert_eq!(ex.closure(&w(4, &[1; 6])).unwrap().len(), 1);
    }

    #[test]
    fn normalize_is_idempotent_and_length_preserving() {
        let mut ex = EquivClassExplorer::default();
        for letters in [
            [3u16, 2, 3, 1, 2, 1],
            [2, 2, 1, 3, 3, 2],
            [3, 1, 2, 3, 1, 1],
        ] {
            let nf = ex.normalize(&w(4, &letters)).unwrap();
            assert_eq!(nf.len(), 6);
            assert_eq!(ex.normalize(&nf).unwrap(), nf);
        }
    }

    #[test]
    fn long_words_are_refused() {
        let err = normalize(&w(3, &[1; 13])).unwrap_err();
        assert!(err.to_string().contains("word too long for oracle"));
    }

    #[test]
    fn enumeration_examples() {
        let l43 = enumerate_lex_reps(n(4), 3).unwrap();
        assert_eq!(l43.len(), 19);
        assert_eq!(l43[0], w(4, &[1, 1, 1]));
        assert_eq!(l43[15], w(4, &[3, 2, 1]));
        assert_eq!(l43[18], w(4, &[3, 3, 3]));
        assert_eq!(enumerate_lex_reps(n(4), 2).unwrap().len(), 8);
        assert_eq!(enumerate_lex_reps(n(2), 7).unwrap(), vec![w(2, &[1; 7])]);
        assert!(enumerate_lex_reps(n(6), 2).is_err());
    }

    #[test]
    fn brute_forbidden_examples() {
        let set = |k: usize, elems: &[&[u16]]| {
            ForbiddenSet::new(n(k), elems.iter().map(|e| w(k, e)).collect())
        };
        assert_eq!(
            brute_forbidden_min(&w(5, &[4, 3]), 5).unwrap(),
            set(5, &[&[1], &[2, 3], &[4]])
        );
        assert_eq!(
            brute_forbidden_min(&w(5, &[4]), 5).unwrap(),
            set(5, &[&[1], &[2], &[3, 4]])
        );
        assert!(brute_forbidden_min(&w(5, &[]), 5).unwrap().is_empty());
        assert!(brute_forbidden_min(&w(5, &[2, 1, 2]), 5).is_err());
    }
}
