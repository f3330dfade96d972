//! Permutation braids, i.e. positive braids in which any two strands cross
//! at most once. Such a braid is determined by the permutation it induces,
//! and the prefix order on permutation braids is inclusion of the sets of
//! crossing strand pairs.

use std::fmt;

use crate::words::{ArtinWord, StrandCount};
use crate::{Error, Result};

/// A permutation braid stored as its induced permutation: `perm[i]` is the
/// final position of the strand that starts at position `i` (0-based).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PermBraid {
    n: StrandCount,
    perm: Vec<u16>,
}

impl fmt::Debug for PermBraid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermBraid{:?}", self.permutation())
    }
}

impl PermBraid {
    pub fn identity(n: StrandCount) -> Self {
        PermBraid {
            n,
            perm: (0..n.get()).collect(),
        }
    }

    pub fn atom(n: StrandCount, i: u16) -> Result<Self> {
        Self::from_word(&ArtinWord::new(n, vec![i])?)
    }

    /// Builds a permutation braid from 1-based images `pi(1), ..., pi(n)`.
    pub fn from_permutation(n: StrandCount, images: &[u16]) -> Result<Self> {
        let size = n.get() as usize;
        if images.len() != size {
            return Err(Error::Parse(format!(
                "permutation of length {} for n={}",
                images.len(),
                n
            )));
        }
        let mut seen = vec![false; size];
        let mut perm = Vec::with_capacity(size);
        for &p in images {
            if p == 0 || p as usize > size || seen[p as usize - 1] {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
            seen[p as usize - 1] = true;
            perm.push(p - 1);
        }
        Ok(PermBraid { n, perm })
    }

    /// Applies the letters left to right as crossings of adjacent positions.
    /// Fails if some pair of strands would cross twice.
    pub fn from_word(w: &ArtinWord) -> Result<Self> {
        let n = w.strands();
        let size = n.get() as usize;
        // strand_at[p] = starting index of the strand currently at position p
        let mut strand_at: Vec<u16> = (0..n.get()).collect();
        for &letter in w.letters() {
            let p = letter as usize - 1;
            if strand_at[p] > strand_at[p + 1] {
                return Err(Error::NotPermutationBraid);
            }
            strand_at.swap(p, p + 1);
        }
        let mut perm = vec![0u16; size];
        for (pos, &strand) in strand_at.iter().enumerate() {
            perm[strand as usize] = pos as u16;
        }
        Ok(PermBraid { n, perm })
    }

    pub fn strands(&self) -> StrandCount {
        self.n
    }

    /// The induced permutation as 1-based images.
    pub fn permutation(&self) -> Vec<u16> {
        self.perm.iter().map(|&p| p + 1).collect()
    }

    /// 1-based image of the 1-based strand `i`.
    pub fn image(&self, i: u16) -> u16 {
        self.perm[i as usize - 1] + 1
    }

    /// Length of the braid: the number of inversions of its permutation.
    pub fn len(&self) -> usize {
        inversion_count(&self.perm)
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p as usize)
    }

    /// Generators that are prefixes of this braid: the `i` with
    /// `pi(i) > pi(i+1)`.
    pub fn atom_prefixes(&self) -> Vec<u16> {
        self.perm
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i as u16 + 1)
            .collect()
    }

    /// Least common multiple with respect to the prefix order. The crossing
    /// set of the join is the transitive closure of the union of both
    /// crossing sets.
    pub fn lcm(&self, other: &PermBraid) -> Result<PermBraid> {
        self.check_same(other)?;
        let size = self.perm.len();
        let mut cross = vec![false; size * size];
        for p in [&self.perm, &other.perm] {
            for i in 0..size {
                for j in i + 1..size {
                    if p[i] > p[j] {
                        cross[i * size + j] = true;
                    }
                }
            }
        }
        for mid in 0..size {
            for i in 0..mid {
                if !cross[i * size + mid] {
                    continue;
                }
                for j in mid + 1..size {
                    if cross[mid * size + j] {
                        cross[i * size + j] = true;
                    }
                }
            }
        }
        let mut perm = vec![0u16; size];
        for (i, slot) in perm.iter_mut().enumerate() {
            let before = (0..i).filter(|&h| cross[h * size + i]).count();
            let after = (i + 1..size).filter(|&j| cross[i * size + j]).count();
            *slot = (i + after - before) as u16;
        }
        Ok(PermBraid { n: self.n, perm })
    }

    /// The element `self \ other`, i.e. the `z` with `self * z = self ∨ other`,
    /// obtained by solving `pi_join = pi_z ∘ pi_self`.
    pub fn brute_complement(&self, other: &PermBraid) -> Result<PermBraid> {
        let join = self.lcm(other)?;
        Ok(self.right_quotient_unchecked(&join))
    }

    /// Permutation `pi_target ∘ pi_self^{-1}`; a positive braid only when
    /// `self ≼ target`.
    fn right_quotient_unchecked(&self, target: &PermBraid) -> PermBraid {
        let mut perm = vec![0u16; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p as usize] = target.perm[i];
        }
        PermBraid { n: self.n, perm }
    }

    /// Prefix test `self ≼ other`: the quotient permutation must account
    /// for exactly the missing crossings.
    pub fn is_prefix_of(&self, other: &PermBraid) -> Result<bool> {
        self.check_same(other)?;
        let own = self.len();
        let total = other.len();
        if own > total {
            return Ok(false);
        }
        let quotient = self.right_quotient_unchecked(other);
        Ok(quotient.len() == total - own)
    }

    /// Product `self * other` when it is again a permutation braid.
    pub fn checked_mul(&self, other: &PermBraid) -> Result<Option<PermBraid>> {
        self.check_same(other)?;
        let perm: Vec<u16> = self.perm.iter().map(|&p| other.perm[p as usize]).collect();
        let product = PermBraid { n: self.n, perm };
        Ok((product.len() == self.len() + other.len()).then_some(product))
    }

    /// The lexicographically least word representing this braid.
    pub fn to_word(&self) -> ArtinWord {
        let mut perm = self.perm.clone();
        let mut letters = Vec::with_capacity(self.len());
        while let Some(i) = perm.windows(2).position(|w| w[0] > w[1]) {
            letters.push(i as u16 + 1);
            perm.swap(i, i + 1);
        }
        ArtinWord::from_trusted(self.n, letters)
    }

    fn check_same(&self, other: &PermBraid) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch {
                left: self.n.get(),
                right: other.n.get(),
            });
        }
        Ok(())
    }
}

fn inversion_count(perm: &[u16]) -> usize {
    let mut count = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

/// Shapes of forbidden prefixes that `atom_complement` understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixShape {
    /// `σ_{i-1} σ_i`
    AscendingPair { top: u16 },
    /// `σ_i σ_{i-1} ... σ_m` with `m <= i`
    DescendingRun { top: u16, bottom: u16 },
}

impl PrefixShape {
    pub fn classify(letters: &[u16]) -> Option<PrefixShape> {
        match letters {
            [] => None,
            [a, b] if *b == *a + 1 => Some(PrefixShape::AscendingPair { top: *b }),
            _ => {
                let descending = letters.windows(2).all(|w| w[1] + 1 == w[0]);
                descending.then(|| PrefixShape::DescendingRun {
                    top: letters[0],
                    bottom: *letters.last().unwrap(),
                })
            }
        }
    }
}

fn run(top: u16, bottom: u16) -> Vec<u16> {
    if top < bottom {
        return Vec::new();
    }
    (bottom..=top).rev().collect()
}

/// `σ_j \ β` for a forbidden-prefix shape `β`, evaluated with closed-form
/// case tables instead of permutation arithmetic.
pub fn atom_complement(j: u16, beta: &ArtinWord) -> Result<ArtinWord> {
    let n = beta.strands();
    if !n.contains(j) {
        return Err(Error::GeneratorOutOfRange {
            letter: j as i64,
            max: n.generators(),
        });
    }
    let shape = PrefixShape::classify(beta.letters()).ok_or_else(|| {
        Error::UnsupportedComplementShape(format!("[{}]", crate::words::format_word(beta)))
    })?;
    let letters = match shape {
        PrefixShape::AscendingPair { top: i } => {
            if j + 2 == i {
                vec![i - 1, i, i - 2, i - 1]
            } else if j + 1 == i {
                vec![i]
            } else if j == i + 1 {
                vec![i - 1, i, i + 1]
            } else {
                vec![i - 1, i]
            }
        }
        PrefixShape::DescendingRun { top: i, bottom: m } => {
            if j + 1 == m {
                run(i, m - 1)
            } else if j == i {
                if i == m {
                    Vec::new()
                } else {
                    run(i - 1, m)
                }
            } else if j == i + 1 {
                let mut out = Vec::with_capacity(2 * (i - m + 1) as usize);
                for t in (m..=i).rev() {
                    out.push(t);
                    out.push(t + 1);
                }
                out
            } else {
                run(i, m)
            }
        }
    };
    ArtinWord::new(n, letters)
}

/// All permutation braids on `n` strands, by enumerating permutations.
pub fn all_perm_braids(n: StrandCount) -> Vec<PermBraid> {
    let size = n.get() as usize;
    let mut out = Vec::new();
    let mut current: Vec<u16> = (0..size as u16).collect();
    permute(&mut current, 0, &mut |p| {
        out.push(PermBraid {
            n,
            perm: p.to_vec(),
        })
    });
    out
}

fn permute(items: &mut [u16], start: usize, visit: &mut dyn FnMut(&[u16])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, visit);
        items.swap(start, i);
    }
}
