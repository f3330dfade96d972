//! Minimal forbidden prefixes and their encoding by admissible functions.
//!
//! After a lex-representative `w`, the braids `α` for which `w·ω(α)` stops
//! being lex-minimal form an upward-closed set. Its minimal elements are
//! descending runs `σ_i σ_{i-1} ... σ_{f(i)}` and ascending pairs
//! `σ_{i-1} σ_i`, so the whole set is captured by one integer per generator:
//!
//! * `f(i) = 0`: nothing forbidden starts at `i`;
//! * `1 <= f(i) <= i`: the run from `σ_i` down to `σ_{f(i)}` is forbidden;
//! * `f(i) = -1`: the pair `σ_{i-1} σ_i` is forbidden.

use std::fmt;

use crate::words::{ArtinWord, StrandCount};
use crate::{Error, Result};

/// Encoding of a minimal forbidden prefix set. Index `i - 1` holds `f(i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleFunction {
    n: StrandCount,
    values: Vec<i16>,
}

impl fmt::Debug for AdmissibleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.values)
    }
}

impl fmt::Display for AdmissibleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Outcome of appending one letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Next(AdmissibleFunction),
    /// The letter is itself a forbidden prefix; the extended word is not a
    /// lex-representative.
    Blocked,
}

impl AdmissibleFunction {
    /// Validates `f(i) <= i`, values in `{-1, 0, 1, ..}` and `f(1) != -1`.
    pub fn new(n: StrandCount, values: Vec<i16>) -> Result<Self> {
        if values.len() != n.generators() as usize {
            return Err(Error::Parse(format!(
                "admissible function needs {} values, got {}",
                n.generators(),
                values.len()
            )));
        }
        for (idx, &v) in values.iter().enumerate() {
            let i = idx as i16 + 1;
            if v < -1 || v > i || (i == 1 && v == -1) {
                return Err(Error::Parse(format!("{values:?} is not admissible")));
            }
        }
        Ok(AdmissibleFunction { n, values })
    }

    pub fn strands(&self) -> StrandCount {
        self.n
    }

    /// `f(i)` for a 1-based generator index.
    pub fn get(&self, i: u16) -> i16 {
        self.values[i as usize - 1]
    }

    pub fn values(&self) -> &[i16] {
        &self.values
    }

    pub fn is_admissible(&self) -> bool {
        Self::new(self.n, self.values.clone()).is_ok()
    }
}

/// The function of the empty word: nothing is forbidden.
pub fn initial_f(n: StrandCount) -> AdmissibleFunction {
    AdmissibleFunction {
        n,
        values: vec![0; n.generators() as usize],
    }
}

/// Appends `σ_j` to a word whose forbidden prefixes are encoded by `f`.
pub fn step_f(f: &AdmissibleFunction, j: u16) -> Step {
    let n = f.n;
    debug_assert!(n.contains(j));
    let fj = f.get(j);
    if fj == j as i16 {
        return Step::Blocked;
    }
    let mut g = Vec::with_capacity(f.values.len());
    for i in 1..=n.generators() {
        let value = if i + 1 < j {
            i as i16
        } else if i + 1 == j {
            fj.max(0)
        } else if i == j {
            if j == 1 || fj == j as i16 - 1 {
                0
            } else {
                -1
            }
        } else {
            match f.get(i) {
                -1 => i as i16,
                v if v == j as i16 + 1 => j as i16,
                v => v,
            }
        };
        g.push(value);
    }
    Step::Next(AdmissibleFunction { n, values: g })
}

/// Runs `step_f` over the whole word; `None` when `w` is not a
/// lex-representative.
pub fn f_for_word(w: &ArtinWord) -> Option<AdmissibleFunction> {
    let mut f = initial_f(w.strands());
    for &letter in w.letters() {
        match step_f(&f, letter) {
            Step::Next(g) => f = g,
            Step::Blocked => return None,
        }
    }
    Some(f)
}

/// An explicit set of minimal forbidden prefixes, kept in canonical order
/// (by leading generator, then lexicographically).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ForbiddenSet {
    n: StrandCount,
    elements: Vec<ArtinWord>,
}

impl ForbiddenSet {
    pub fn new(n: StrandCount, mut elements: Vec<ArtinWord>) -> Self {
        elements.sort_by(|a, b| a.letters().cmp(b.letters()));
        elements.dedup();
        ForbiddenSet { n, elements }
    }

    pub fn strands(&self) -> StrandCount {
        self.n
    }

    pub fn elements(&self) -> &[ArtinWord] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains_atom(&self, i: u16) -> bool {
        self.elements.iter().any(|e| e.letters() == [i])
    }

    /// Elements rendered as word strings, e.g. `["1", "2 3", "4"]`.
    pub fn to_strings(&self) -> Vec<String> {
        self.elements.iter().map(|e| e.to_string()).collect()
    }
}

impl fmt::Display for ForbiddenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

fn descending(top: u16, bottom: u16) -> Vec<u16> {
    (bottom..=top).rev().collect()
}

/// Materializes the set `F_f`.
pub fn f_to_set(f: &AdmissibleFunction) -> ForbiddenSet {
    let n = f.n;
    let mut elements = Vec::new();
    for i in 1..=n.generators() {
        match f.get(i) {
            0 => {}
            -1 => elements.push(ArtinWord::from_trusted(n, vec![i - 1, i])),
            v => elements.push(ArtinWord::from_trusted(n, descending(i, v as u16))),
        }
    }
    ForbiddenSet::new(n, elements)
}

pub(crate) fn check_m_range(n: StrandCount, last: u16, m: usize) -> Result<()> {
    let ok = m < n.get() as usize
        && if last == 0 {
            m >= 1
        } else {
            m + 1 >= last as usize
        };
    if !ok {
        return Err(Error::MOutOfRange {
            m,
            last,
            n: n.get(),
        });
    }
    Ok(())
}

/// Encoding of the minimal elements of `{σ_1, ..., σ_m} ∪ F_f`, where `last`
/// is the final letter of the word (0 for the empty word). Requires
/// `m >= 1` for the empty word and `m >= last - 1` otherwise.
pub fn restrict_function(
    f: &AdmissibleFunction,
    last: u16,
    m: usize,
) -> Result<AdmissibleFunction> {
    let n = f.n;
    check_m_range(n, last, m)?;
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(idx, &v)| {
            let i = idx + 1;
            if i <= m {
                i as i16
            } else if v == -1 && i - 1 <= m {
                // σ_{i-1}σ_i starts with the newly forbidden σ_{i-1}
                0
            } else {
                v
            }
        })
        .collect();
    Ok(AdmissibleFunction { n, values })
}

/// The set `F^min(w, m)` for a word with forbidden-prefix function `f`.
pub fn restrict_m(f: &AdmissibleFunction, last: u16, m: usize) -> Result<ForbiddenSet> {
    Ok(f_to_set(&restrict_function(f, last, m)?))
}

fn segment(from: u16, to: u16) -> Vec<u16> {
    if from <= to {
        (from..=to).collect()
    } else {
        (to..=from).rev().collect()
    }
}

/// The word `[n-1,1]·[1,i_1]·[i_1,1]···[1,i_r]·[i_r,1]` for
/// `S = {i_1 > ... > i_r} ⊆ {1, ..., n-2}`, whose forbidden-prefix function
/// is `f(1) = 0`, `f(j) = 1` if `j - 1 ∈ S`, `f(j) = j` otherwise.
pub fn build_witness(n: StrandCount, subset: &[u16]) -> Result<ArtinWord> {
    let mut s: Vec<u16> = subset.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s.dedup();
    if let Some(&bad) = s.iter().find(|&&i| i == 0 || i + 2 > n.get()) {
        return Err(Error::GeneratorOutOfRange {
            letter: bad as i64,
            max: n.get().saturating_sub(2),
        });
    }
    let mut letters = segment(n.generators(), 1);
    for &i in &s {
        letters.extend(segment(1, i));
        letters.extend(segment(i, 1));
    }
    Ok(ArtinWord::from_trusted(n, letters))
}

/// The function predicted for `build_witness(n, subset)`.
pub fn witness_function(n: StrandCount, subset: &[u16]) -> AdmissibleFunction {
    let values = (1..=n.generators())
        .map(|j| {
            if j == 1 {
                0
            } else if subset.contains(&(j - 1)) {
                1
            } else {
                j as i16
            }
        })
        .collect();
    AdmissibleFunction { n, values }
}

/// Checks the necessary structural conditions satisfied by the function of
/// any non-empty lex-representative ending in `σ_j`; returns the first
/// violated clause.
pub fn structural_violation(f: &AdmissibleFunction, j: u16) -> Option<&'static str> {
    let g = |i: u16| f.get(i);
    let top = f.n.generators();
    let jj = j as i16;
    if (1..j.saturating_sub(1)).any(|i| g(i) != i as i16) {
        return Some("(a) f(i) = i below j-1");
    }
    if (1..=top).any(|i| i != j && !(0..=i as i16).contains(&g(i))) {
        return Some("(b) f(i) in 0..=i away from j");
    }
    let expect_j = if j == 1 || g(j - 1) == jj - 1 { 0 } else { -1 };
    if g(j) != expect_j {
        return Some("(c) value at j");
    }
    if let Some(first_zero) = (j + 1..=top).find(|&i| g(i) == 0) {
        if (first_zero..=top).any(|l| g(l) != 0) {
            return Some("(d) zeros above j are a suffix");
        }
    }
    let nested: Vec<i16> = (j + 1..=top)
        .filter(|&i| 0 < g(i) && g(i) < i as i16)
        .map(g)
        .collect();
    let m = if j >= 2 { g(j - 1) } else { 0 };
    if !nested.is_empty() {
        if nested.windows(2).any(|w| w[1] > w[0]) || nested[0] > jj {
            return Some("(e) nested runs above j");
        }
        if m > 0 && nested[0] != jj && nested[0] > m {
            return Some("(f) first nested run");
        }
        if m > 0 && nested.iter().skip(1).any(|&v| v > m) {
            return Some("(g) later nested runs");
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: usize) -> StrandCount {
        StrandCount::new(k).unwrap()
    }

    fn af(k: usize, values: &[i16]) -> AdmissibleFunction {
        AdmissibleFunction::new(n(k), values.to_vec()).unwrap()
    }

    fn w(k: usize, letters: &[u16]) -> ArtinWord {
        ArtinWord::new(n(k), letters.to_vec()).unwrap()
    }

    fn set(k: usize, elements: &[&[u16]]) -> ForbiddenSet {
        ForbiddenSet::new(n(k), elements.iter().map(|e| w(k, e)).collect())
    }

    #[test]
    fn initial_function() {
        assert_eq!(initial_f(n(5)).values(), &[0, 0, 0, 0]);
        assert_eq!(initial_f(n(2)).values(), &[0]);
        assert!(f_to_set(&initial_f(n(7))).is_empty());
    }

    #[test]
    fn admissibility_is_validated() {
        assert!(AdmissibleFunction::new(n(4), vec![-1, 0, 0]).is_err());
        assert!(AdmissibleFunction::new(n(4), vec![0, 3, 0]).is_err());
        assert!(AdmissibleFunction::new(n(4), vec![0, 0]).is_err());
        assert!(AdmissibleFunction::new(n(4), vec![1, -1, 3]).is_ok());
    }

    #[test]
    fn step_examples() {
        assert_eq!(
            step_f(&af(5, &[1, 2, 0, -1]), 3),
            Step::Next(af(5, &[1, 0, -1, 4]))
        );
        assert_eq!(
            step_f(&af(5, &[0, -1, 3, 4]), 2),
            Step::Next(af(5, &[0, -1, 2, 4]))
        );
        assert_eq!(step_f(&af(5, &[1, 2, 0, -1]), 2), Step::Blocked);
    }

    #[test]
    fn single_letter_functions() {
        // F^min(σ_j) = {σ_1, ..., σ_{j-2}, σ_{j-1}σ_j}
        for j in 1..=6u16 {
            let f = f_for_word(&w(7, &[j])).unwrap();
            let mut expected: Vec<Vec<u16>> = (1..j.saturating_sub(1)).map(|i| vec![i]).collect();
            if j > 1 {
                expected.push(vec![j - 1, j]);
            }
            let refs: Vec<&[u16]> = expected.iter().map(|v| v.as_slice()).collect();
            assert_eq!(f_to_set(&f), set(7, &refs));
        }
    }

    #[test]
    fn five_strand_example_chain() {
        let word = [4u16, 3, 2, 2, 1];
        let functions: [&[i16]; 5] = [
            &[1, 2, 0, -1],
            &[1, 0, -1, 4],
            &[0, -1, 3, 4],
            &[0, -1, 2, 4],
            &[0, 2, 1, 4],
        ];
        let sets: [&[&[u16]]; 5] = [
            &[&[1], &[2], &[3, 4]],
            &[&[1], &[2, 3], &[4]],
            &[&[1, 2], &[3], &[4]],
            &[&[1, 2], &[3, 2], &[4]],
            &[&[2], &[3, 2, 1], &[4]],
        ];
        for len in 1..=5 {
            let f = f_for_word(&w(5, &word[..len])).unwrap();
            assert_eq!(f.values(), functions[len - 1]);
            assert_eq!(f_to_set(&f), set(5, sets[len - 1]));
        }
    }

    #[test]
    fn non_representatives_are_blocked() {
        assert_eq!(f_for_word(&w(4, &[2, 1, 2])), None);
        assert_eq!(f_for_word(&w(4, &[3, 1])), None);
        assert_eq!(f_for_word(&w(4, &[])), Some(initial_f(n(4))));
    }

    #[test]
    fn f_to_set_examples() {
        assert_eq!(
            f_to_set(&af(5, &[1, 0, -1, 4])),
            set(5, &[&[1], &[2, 3], &[4]])
        );
        assert_eq!(
            f_to_set(&af(5, &[0, 2, 1, 4])),
            set(5, &[&[2], &[3, 2, 1], &[4]])
        );
    }

    #[test]
    fn restrict_examples() {
        let f3 = f_for_word(&w(4, &[3])).unwrap();
        assert_eq!(f_to_set(&f3), set(4, &[&[1], &[2, 3]]));
        assert_eq!(restrict_m(&f3, 3, 2).unwrap(), set(4, &[&[1], &[2]]));
        assert_eq!(
            restrict_m(&initial_f(n(4)), 0, 2).unwrap(),
            set(4, &[&[1], &[2]])
        );
        let f = f_for_word(&w(5, &[4, 3, 2, 2, 1])).unwrap();
        assert_eq!(
            restrict_m(&f, 1, 1).unwrap(),
            set(5, &[&[1], &[2], &[3, 2, 1], &[4]])
        );
    }

    #[test]
    fn restrict_rejects_unsupported_m() {
        let f = f_for_word(&w(5, &[4])).unwrap();
        for (last, m) in [(0u16, 0usize), (4, 2), (4, 5), (0, 5)] {
            let err = restrict_function(&f, last, m).unwrap_err();
            assert!(err.to_string().contains("m out of supported range"));
        }
        assert!(restrict_function(&f, 4, 3).is_ok());
    }

    #[test]
    fn witness_examples() {
        let w0 = build_witness(n(4), &[]).unwrap();
        assert_eq!(w0, w(4, &[3, 2, 1]));
        assert_eq!(f_for_word(&w0).unwrap().values(), &[0, 2, 3]);
        let w2 = build_witness(n(4), &[2]).unwrap();
        assert_eq!(w2, w(4, &[3, 2, 1, 1, 2, 2, 1]));
        assert_eq!(f_for_word(&w2).unwrap().values(), &[0, 2, 1]);
        assert_eq!(build_witness(n(2), &[]).unwrap(), w(2, &[1]));
        assert!(build_witness(n(4), &[3]).is_err());
    }

    #[test]
    fn witnesses_match_predicted_functions() {
        for k in 2..=10usize {
            let top = k as u16 - 2;
            for mask in 0u32..(1 << top) {
                let subset: Vec<u16> = (1..=top).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                let word = build_witness(n(k), &subset).unwrap();
                let f = f_for_word(&word).expect("witness must be a lex-representative");
                assert_eq!(f, witness_function(n(k), &subset), "n={k} S={subset:?}");
            }
        }
    }

    #[test]
    fn random_walks_stay_admissible() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let k = rng.gen_range(2..=64usize);
            let mut f = initial_f(n(k));
            let mut last = 0u16;
            let mut steps = 0;
            while steps < 10_000 {
                let j = rng.gen_range(1..k as u16);
                if let Step::Next(g) = step_f(&f, j) {
                    assert!(g.is_admissible());
                    assert!(f_to_set(&g).len() < k);
                    assert!(g.values().iter().filter(|&&v| v == -1).count() <= 1);
                    assert_eq!(structural_violation(&g, j), None, "{g:?} after {j}");
                    f = g;
                    last = j;
                    steps += 1;
                }
            }
            assert!(last > 0);
        }
    }
}
