//! Counting lex-representatives with a given prefix.
//!
//! `x_{n,k}(w, m)` is the number of length-`k` lex-representatives `w w'`
//! where `w'` does not start with any of `σ_1, ..., σ_m`. By
//! inclusion-exclusion over the minimal forbidden set `F = F^min(w, m)`,
//!
//! ```text
//! x_{n,k}(w, m) = Σ_{S ⊆ F} (-1)^|S| x_{n, k - |w| - |⋁S|}
//!               = Σ_l T_l x_{n, k - |w| - l}
//! ```
//!
//! The coefficients `T_l` are accumulated by [`CountCube`], which scans a
//! window of strands `[a, b]` outwards until it covers all strands, keeping
//! for each subset of the covered forbidden prefixes only the length of its
//! join and the displacements of the two boundary strands.

use std::ops::{AddAssign, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::growth::GrowthTables;
use crate::perm_braid::PermBraid;
use crate::prefixes::{f_for_word, f_to_set, restrict_function, step_f, AdmissibleFunction, Step};
use crate::words::{ArtinWord, StrandCount};
use crate::{Error, Result};

pub const DEFAULT_REFERENCE_BOUND: usize = 20;

/// A lex-representative seen through what counting needs: its forbidden
/// prefix function, last letter (0 for the empty word) and length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixState {
    f: AdmissibleFunction,
    last: u16,
    len: usize,
}

impl PrefixState {
    pub fn empty(n: StrandCount) -> Self {
        PrefixState {
            f: crate::prefixes::initial_f(n),
            last: 0,
            len: 0,
        }
    }

    /// `None` when `w` is not a lex-representative.
    pub fn from_word(w: &ArtinWord) -> Option<Self> {
        Some(PrefixState {
            f: f_for_word(w)?,
            last: w.last().unwrap_or(0),
            len: w.len(),
        })
    }

    /// The state after appending `letter`, or `None` if that leaves the
    /// language.
    pub fn push(&self, letter: u16) -> Option<Self> {
        match step_f(&self.f, letter) {
            Step::Blocked => None,
            Step::Next(f) => Some(PrefixState {
                f,
                last: letter,
                len: self.len + 1,
            }),
        }
    }

    pub fn function(&self) -> &AdmissibleFunction {
        &self.f
    }

    pub fn last(&self) -> u16 {
        self.last
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn strands(&self) -> StrandCount {
        self.f.strands()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    /// Only visit boundary displacements that may hold non-zero entries.
    pub sparse: bool,
    /// Cap join lengths at `C(n,2)`, the length of the half twist.
    pub cap_length: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            sparse: true,
            cap_length: true,
        }
    }
}

/// Signed integer type held in a [`CountCube`].
pub trait CubeEntry:
    Clone + Zero + One + for<'a> AddAssign<&'a Self> + for<'a> SubAssign<&'a Self> + Into<BigInt>
{
    fn bits(&self) -> u64;
}

impl CubeEntry for i64 {
    fn bits(&self) -> u64 {
        64 - self.unsigned_abs().leading_zeros() as u64
    }
}

impl CubeEntry for i128 {
    fn bits(&self) -> u64 {
        128 - self.unsigned_abs().leading_zeros() as u64
    }
}

impl CubeEntry for BigInt {
    fn bits(&self) -> u64 {
        self.abs().bits()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ExtendLeft,
    ExtendRight,
}

/// The forbidden prefix picked up by one window step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NewElement {
    None,
    /// `σ_{a-1}`
    LeftAtom,
    /// `σ_b`
    RightAtom,
    /// `σ_b σ_{b-1} ... σ_a`
    RightRun,
}

/// Signed census `T[l][r][s]` over subsets `S` of the forbidden prefixes
/// supported on strands `a..=b`: `l = |⋁S|`, `r = π(a) - a`, `s = b - π(b)`.
///
/// Only displacement pairs `(r, s)` that may hold non-zero entries are
/// stored, each as one row indexed by `l`.
#[derive(Debug, Clone)]
pub struct CountCube<T> {
    n: usize,
    l_len: usize,
    rows: Vec<T>,
    spare: Vec<T>,
    slots: Vec<Slot>,
    /// `(r, s)` to index in `slots`
    slot_of: Vec<u32>,
    /// same, for the slots being built by a step
    building: Vec<u32>,
    zero: T,
    a: usize,
    b: usize,
    alpha: usize,
    sparse: bool,
    max_bits: u64,
}

/// Row `row` holds the entries of `(r, s)`; those outside `lo..=hi` are zero.
#[derive(Debug, Clone, Copy)]
struct Slot {
    r: usize,
    s: usize,
    lo: usize,
    hi: usize,
    row: usize,
}

const NO_SLOT: u32 = u32::MAX;

impl<T: CubeEntry> CountCube<T> {
    /// The census of the empty subset, `T[0][0][0] = 1`, for the window
    /// `a = b = start`.
    pub fn new(n: StrandCount, l_max: usize, start: u16, sparse: bool) -> Self {
        let n = n.get() as usize;
        let l_len = l_max + 1;
        let mut cube = CountCube {
            n,
            l_len,
            rows: vec![T::zero(); l_len],
            spare: Vec::new(),
            slots: vec![Slot {
                r: 0,
                s: 0,
                lo: 0,
                hi: 0,
                row: 0,
            }],
            slot_of: vec![NO_SLOT; n * n],
            building: vec![NO_SLOT; n * n],
            zero: T::zero(),
            a: start as usize,
            b: start as usize,
            alpha: 0,
            sparse,
            max_bits: 1,
        };
        cube.rows[0] = T::one();
        if !sparse {
            cube.fill_dense();
        }
        cube.index_slots();
        cube
    }

    /// Adds every missing `(r, s)` pair and widens all ranges to `0..=l_max`.
    fn fill_dense(&mut self) {
        let mut present = vec![false; self.n * self.n];
        for slot in &self.slots {
            present[slot.r * self.n + slot.s] = true;
        }
        for (key, &taken) in present.iter().enumerate() {
            if !taken {
                let row = self.rows.len() / self.l_len;
                self.rows.resize(self.rows.len() + self.l_len, T::zero());
                self.slots.push(Slot {
                    r: key / self.n,
                    s: key % self.n,
                    lo: 0,
                    hi: 0,
                    row,
                });
            }
        }
        for slot in &mut self.slots {
            slot.lo = 0;
            slot.hi = self.l_len - 1;
        }
    }

    fn index_slots(&mut self) {
        for (i, slot) in self.slots.iter().enumerate() {
            self.slot_of[slot.r * self.n + slot.s] = i as u32;
        }
    }

    pub fn get(&self, l: usize, r: usize, s: usize) -> &T {
        match self.slot_of[r * self.n + s] {
            NO_SLOT => &self.zero,
            i => &self.rows[self.slots[i as usize].row * self.l_len + l],
        }
    }

    pub fn window(&self) -> (u16, u16) {
        (self.a as u16, self.b as u16)
    }

    pub fn steps(&self) -> usize {
        self.alpha
    }

    pub fn l_max(&self) -> usize {
        self.l_len - 1
    }

    pub fn is_complete(&self) -> bool {
        self.a == 1 && self.b == self.n
    }

    /// Largest bit length of any entry seen so far.
    pub fn max_entry_bits(&self) -> u64 {
        self.max_bits
    }

    /// Every non-zero entry as `((l, r, s), value)`.
    pub fn nonzero_entries(&self) -> Vec<((usize, usize, usize), T)> {
        let mut out = Vec::new();
        for slot in &self.slots {
            let base = slot.row * self.l_len;
            for l in slot.lo..=slot.hi {
                let v = &self.rows[base + l];
                if !v.is_zero() {
                    out.push(((l, slot.r, slot.s), v.clone()));
                }
            }
        }
        out
    }

    /// The `(r, s)` pairs currently stored.
    pub fn occupied(&self) -> Vec<(usize, usize)> {
        self.slots.iter().map(|slot| (slot.r, slot.s)).collect()
    }

    /// Chooses the next step: extend left when `b = n` or a run
    /// `σ_b ... σ_s` with `s < a` is forbidden, otherwise extend right. `f`
    /// encodes the restricted forbidden set (all values non-negative).
    pub fn next_move(&self, f: &AdmissibleFunction) -> Result<(Direction, Option<ArtinWord>)> {
        let (dir, element) = self.plan(f)?;
        let strands = f.strands();
        let (a, b) = (self.a as u16, self.b as u16);
        let word = match element {
            NewElement::None => None,
            NewElement::LeftAtom => Some(vec![a - 1]),
            NewElement::RightAtom => Some(vec![b]),
            NewElement::RightRun => Some((a..=b).rev().collect()),
        };
        Ok((dir, word.map(|l| ArtinWord::new(strands, l)).transpose()?))
    }

    fn plan(&self, f: &AdmissibleFunction) -> Result<(Direction, NewElement)> {
        let (a, b, n) = (self.a, self.b, self.n);
        let value = |i: usize| f.get(i as u16) as isize;
        let go_left = b == n || (1..a as isize).contains(&value(b));
        if go_left {
            // runs of the new window ending at σ_{a-1}
            let mut element = NewElement::None;
            for i in a - 1..b {
                if value(i) == (a - 1) as isize {
                    if i != a - 1 {
                        return Err(Error::MalformedForbiddenSet(format!(
                            "run from {i} down to {} entering window [{a},{b}]",
                            a - 1
                        )));
                    }
                    element = NewElement::LeftAtom;
                }
            }
            Ok((Direction::ExtendLeft, element))
        } else {
            let fb = value(b);
            let element = if fb < a as isize {
                NewElement::None
            } else if fb == b as isize {
                NewElement::RightAtom
            } else if fb == a as isize {
                NewElement::RightRun
            } else {
                return Err(Error::MalformedForbiddenSet(format!(
                    "run from {b} down to {fb} entering window [{a},{b}]"
                )));
            };
            Ok((Direction::ExtendRight, element))
        }
    }

    /// Moves the window one strand outwards. `new_element` must be the
    /// unique forbidden prefix that becomes supported by the wider window:
    /// `σ_{a-1}` when extending left, `σ_b` or `σ_b ... σ_a` when extending
    /// right.
    pub fn advance_window(
        &mut self,
        direction: Direction,
        new_element: Option<&ArtinWord>,
    ) -> Result<()> {
        let (a, b) = (self.a as u16, self.b as u16);
        let element = match (direction, new_element.map(|w| w.letters())) {
            (_, None) => NewElement::None,
            (Direction::ExtendLeft, Some(l)) if a > 1 && l == [a - 1] => NewElement::LeftAtom,
            (Direction::ExtendRight, Some(l)) if (b as usize) < self.n && l == [b] => {
                NewElement::RightAtom
            }
            (Direction::ExtendRight, Some(l))
                if (b as usize) < self.n && l.iter().copied().eq((a..=b).rev()) =>
            {
                NewElement::RightRun
            }
            (_, Some(l)) => {
                return Err(Error::MalformedForbiddenSet(format!(
                    "{l:?} cannot enter window [{a},{b}] going {direction:?}"
                )))
            }
        };
        match direction {
            Direction::ExtendLeft if a <= 1 => {
                return Err(Error::MalformedForbiddenSet(
                    "window already at strand 1".into(),
                ))
            }
            Direction::ExtendRight if b as usize >= self.n => {
                return Err(Error::MalformedForbiddenSet(format!(
                    "window already at strand {}",
                    self.n
                )))
            }
            _ => {}
        }
        self.apply(direction, element);
        Ok(())
    }

    /// Index of the slot for `(r, s)` in `next`, creating it with a zeroed
    /// row in `spare` if needed, and widening its range to cover `lo..=hi`.
    fn claim(
        building: &mut [u32],
        spare: &mut Vec<T>,
        next: &mut Vec<Slot>,
        n: usize,
        l_len: usize,
        (r, s): (usize, usize),
        (lo, hi): (usize, usize),
    ) -> usize {
        let key = r * n + s;
        match building[key] {
            NO_SLOT => {
                let row = next.len();
                let end = (row + 1) * l_len;
                if spare.len() < end {
                    spare.resize(end, T::zero());
                } else {
                    for v in &mut spare[row * l_len..end] {
                        v.set_zero();
                    }
                }
                building[key] = row as u32;
                next.push(Slot { r, s, lo, hi, row });
                row
            }
            i => {
                let slot = &mut next[i as usize];
                slot.lo = slot.lo.min(lo);
                slot.hi = slot.hi.max(hi);
                slot.row
            }
        }
    }

    fn apply(&mut self, direction: Direction, element: NewElement) {
        let n = self.n;
        let l_len = self.l_len;
        let l_max = l_len - 1;
        let width = self.b - self.a;
        self.alpha += 1;
        let alpha = self.alpha;
        let mut next: Vec<Slot> = Vec::with_capacity(self.slots.len() * 2);

        for slot in &self.slots {
            let Slot { r, s, lo, hi, row } = *slot;
            let src = &self.rows[row * l_len..(row + 1) * l_len];
            // a subset S keeps its join; the boundary that moved is now a
            // fixed strand
            let collapsed = match direction {
                Direction::ExtendLeft => (0, s),
                Direction::ExtendRight => (r, 0),
            };
            let dst = Self::claim(
                &mut self.building,
                &mut self.spare,
                &mut next,
                n,
                l_len,
                collapsed,
                (lo, hi),
            );
            let dst = &mut self.spare[dst * l_len..(dst + 1) * l_len];
            for l in lo..=hi {
                dst[l] += &src[l];
            }

            // S ∪ {x}: join with the new element, sign flipped
            let crossing_free = r + s < width;
            let (dl, tr, ts) = match element {
                NewElement::None => continue,
                NewElement::LeftAtom => (r + 1, r + 1, if crossing_free { s } else { s + 1 }),
                NewElement::RightAtom => (s + 1, if crossing_free { r } else { r + 1 }, s + 1),
                NewElement::RightRun => (alpha, r + 1, alpha),
            };
            // out-of-range targets only arise from the all-zero rows kept
            // in dense mode
            if lo + dl > l_max || tr >= n || ts >= n {
                continue;
            }
            let top = hi.min(l_max - dl);
            let dst = Self::claim(
                &mut self.building,
                &mut self.spare,
                &mut next,
                n,
                l_len,
                (tr, ts),
                (lo + dl, top + dl),
            );
            let dst = &mut self.spare[dst * l_len..(dst + 1) * l_len];
            for l in lo..=top {
                dst[l + dl] -= &src[l];
            }
        }

        for slot in &next {
            self.building[slot.r * n + slot.s] = NO_SLOT;
        }
        for slot in &self.slots {
            self.slot_of[slot.r * n + slot.s] = NO_SLOT;
        }
        std::mem::swap(&mut self.rows, &mut self.spare);
        if self.sparse {
            // drop cancelled entries from the edges of each range
            let rows = &self.rows;
            next.retain_mut(|slot| {
                let base = slot.row * l_len;
                while slot.lo <= slot.hi && rows[base + slot.lo].is_zero() {
                    slot.lo += 1;
                }
                while slot.hi > slot.lo && rows[base + slot.hi].is_zero() {
                    slot.hi -= 1;
                }
                slot.lo <= slot.hi
            });
            self.slots = next;
        } else {
            self.slots = next;
            self.fill_dense();
        }
        self.index_slots();
        match direction {
            Direction::ExtendLeft => self.a -= 1,
            Direction::ExtendRight => self.b += 1,
        }
        if cfg!(debug_assertions) {
            self.track_bits();
            debug_assert!(
                self.max_bits <= n as u64,
                "cube entry exceeds 2^n in magnitude"
            );
        }
    }

    fn track_bits(&mut self) {
        let bits = self
            .slots
            .iter()
            .flat_map(|slot| {
                let base = slot.row * self.l_len;
                self.rows[base + slot.lo..=base + slot.hi].iter()
            })
            .map(|v| v.bits())
            .max()
            .unwrap_or(0);
        self.max_bits = self.max_bits.max(bits);
    }

    /// Scans until the window covers every strand.
    pub fn run_to_completion(&mut self, f: &AdmissibleFunction, track_bits: bool) -> Result<()> {
        while !self.is_complete() {
            let (dir, element) = self.plan(f)?;
            self.apply(dir, element);
            if track_bits {
                self.track_bits();
            }
        }
        Ok(())
    }

    /// `T_l = Σ_{r,s} T[l][r][s]` for `l = 0..=l_max`.
    pub fn totals(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.l_len];
        for slot in &self.slots {
            let base = slot.row * self.l_len;
            let row = &self.rows[base + slot.lo..=base + slot.hi];
            for (total, v) in out[slot.lo..=slot.hi].iter_mut().zip(row) {
                if !v.is_zero() {
                    *total += v.clone().into();
                }
            }
        }
        out
    }
}

/// Cube entries stay below `2^n` in magnitude, so `n` up to these bounds
/// fits in machine integers.
pub const I64_MAX_N: u16 = 62;
pub const I128_MAX_N: u16 = 126;

fn check_m(n: StrandCount, last: u16, m: usize) -> Result<()> {
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

/// The coefficients `T_l(w, m)` for `l = 0..=l_max` where `l_max` is
/// `k - |w|`, capped at `C(n,2)` if requested.
pub fn t_coefficients(
    state: &PrefixState,
    k: usize,
    m: usize,
    opts: CountOptions,
) -> Result<Vec<BigInt>> {
    let n = state.strands();
    check_m(n, state.last, m)?;
    let span = k.saturating_sub(state.len);
    let l_max = if opts.cap_length {
        span.min(n.delta_len())
    } else {
        span
    };
    let f = restrict_function(&state.f, state.last, m)?;
    let start = state.last.max(1);
    if n.get() <= I64_MAX_N {
        let mut cube = CountCube::<i64>::new(n, l_max, start, opts.sparse);
        cube.run_to_completion(&f, false)?;
        Ok(cube.totals())
    } else if n.get() <= I128_MAX_N {
        let mut cube = CountCube::<i128>::new(n, l_max, start, opts.sparse);
        cube.run_to_completion(&f, false)?;
        Ok(cube.totals())
    } else {
        let mut cube = CountCube::<BigInt>::new(n, l_max, start, opts.sparse);
        cube.run_to_completion(&f, false)?;
        Ok(cube.totals())
    }
}

fn convolve(totals: &[BigInt], span: usize, g: &GrowthTables) -> BigUint {
    let mut acc = BigInt::zero();
    for (l, t) in totals.iter().enumerate().take(span + 1) {
        if !t.is_zero() {
            acc += t * BigInt::from(g.x(span - l).clone());
        }
    }
    acc.to_biguint()
        .expect("a count of words cannot be negative")
}

/// `x_{n,k}(w, m)` for the lex-representative described by `state`.
pub fn count_with_state(
    state: &PrefixState,
    k: usize,
    m: usize,
    g: &GrowthTables,
    opts: CountOptions,
) -> Result<BigUint> {
    let n = state.strands();
    check_m(n, state.last, m)?;
    if state.len > k {
        return Ok(BigUint::zero());
    }
    g.covers(n, k)?;
    let totals = t_coefficients(state, k, m, opts)?;
    Ok(convolve(&totals, k - state.len, g))
}

/// `x_{n,k}(w, m)`: returns 0 when `w` is not a lex-representative or is
/// longer than `k`.
pub fn count_with_prefix(k: usize, w: &ArtinWord, m: usize, g: &GrowthTables) -> Result<BigUint> {
    let n = w.strands();
    check_m(n, w.last().unwrap_or(0), m)?;
    match PrefixState::from_word(w) {
        None => Ok(BigUint::zero()),
        Some(state) => count_with_state(&state, k, m, g, CountOptions::default()),
    }
}

/// The same count by explicit enumeration of all subsets of the forbidden
/// set, with joins computed on permutations.
pub fn reference_count(k: usize, w: &ArtinWord, m: usize, g: &GrowthTables) -> Result<BigUint> {
    reference_count_with_bound(k, w, m, g, DEFAULT_REFERENCE_BOUND)
}

pub fn reference_count_with_bound(
    k: usize,
    w: &ArtinWord,
    m: usize,
    g: &GrowthTables,
    bound: usize,
) -> Result<BigUint> {
    let n = w.strands();
    let last = w.last().unwrap_or(0);
    check_m(n, last, m)?;
    if w.len() > k {
        return Ok(BigUint::zero());
    }
    let Some(f) = f_for_word(w) else {
        return Ok(BigUint::zero());
    };
    g.covers(n, k)?;
    let forbidden = f_to_set(&restrict_function(&f, last, m)?);
    if forbidden.len() > bound {
        return Err(Error::TooManyForbiddenPrefixes {
            count: forbidden.len(),
            bound,
        });
    }
    let elements: Vec<PermBraid> = forbidden
        .elements()
        .iter()
        .map(PermBraid::from_word)
        .collect::<Result<_>>()?;
    let span = k - w.len();
    let mut acc = BigInt::zero();
    for mask in 0u64..(1u64 << elements.len()) {
        let mut join = PermBraid::identity(n);
        for (i, e) in elements.iter().enumerate() {
            if mask & (1 << i) != 0 {
                join = join.lcm(e)?;
            }
        }
        let len = join.len();
        if len > span {
            continue;
        }
        let term = BigInt::from(g.x(span - len).clone());
        if mask.count_ones() % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc
        .to_biguint()
        .expect("a count of words cannot be negative"))
}
