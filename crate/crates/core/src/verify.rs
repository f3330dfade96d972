//! The desk-scale acceptance checks, shared by the `acceptance` test target
//! and `braidgen verify`.
//!
//! Every check compares a fast code path against an independent one (the
//! brute-force oracle, permutation arithmetic, or known values) and reports
//! a single pass/fail line.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::automaton::{build_automaton, LexAutomaton, DEFAULT_WITNESS_BOUND};
use crate::counting::{count_with_prefix, reference_count, CountCube, PrefixState};
use crate::growth::GrowthTables;
use crate::oracle::{EquivClassExplorer, OracleBounds};
use crate::perm_braid::{atom_complement, PermBraid};
use crate::prefixes::{f_for_word, f_to_set, restrict_function, AdmissibleFunction};
use crate::sampler::{naive_sample, rank, sample, sample_one, stream_rng, unrank, SampleRequest};
use crate::words::{ArtinWord, StrandCount};
use crate::{Error, Result};

/// 99.9% quantile of the chi-square distribution with 18 degrees of freedom.
pub const CHI_SQUARE_CRITICAL_18: f64 = 42.31;

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}. {} ({:.2?} / budget {:.0?}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed,
            self.budget,
            self.detail
        )
    }
}

fn timed(
    id: u8,
    name: &'static str,
    budget: Duration,
    check: impl FnOnce() -> Result<(bool, String)>,
) -> CheckReport {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let (ok, mut detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = elapsed <= budget;
    if !in_time {
        detail.push_str("; over time budget");
    }
    CheckReport {
        id,
        name,
        passed: ok && in_time,
        detail,
        elapsed,
        budget,
    }
}

fn strands(n: usize) -> StrandCount {
    StrandCount::new(n).expect("verification sizes are at least 2")
}

fn word(n: usize, letters: &[u16]) -> Result<ArtinWord> {
    ArtinWord::new(strands(n), letters.to_vec())
}

/// Collects failures with a cap on how many are spelled out.
#[derive(Default)]
struct Mismatches {
    count: usize,
    examples: Vec<String>,
}

impl Mismatches {
    fn record(&mut self, what: impl FnOnce() -> String) {
        self.count += 1;
        if self.examples.len() < 3 {
            self.examples.push(what());
        }
    }

    fn merge(&mut self, other: Mismatches) {
        self.count += other.count;
        for e in other.examples {
            if self.examples.len() < 3 {
                self.examples.push(e);
            }
        }
    }

    fn summary(&self, checked: usize, what: &str) -> (bool, String) {
        if self.count == 0 {
            (true, format!("{checked} {what} agree"))
        } else {
            (
                false,
                format!(
                    "{} of {checked} {what} disagree, e.g. {}",
                    self.count,
                    self.examples.join("; ")
                ),
            )
        }
    }
}

/// Lex-representatives of lengths `0..=k`, grouped by length, generated by
/// the forbidden-prefix transition rule.
pub fn lex_reps_by_length(n: StrandCount, k: usize) -> Vec<Vec<ArtinWord>> {
    let mut levels = vec![vec![(ArtinWord::empty(n), PrefixState::empty(n))]];
    for _ in 0..k {
        let mut next = Vec::new();
        for (w, state) in levels.last().unwrap() {
            for letter in 1..n.get() {
                if let Some(s) = state.push(letter) {
                    let mut longer = w.clone();
                    longer.push(letter).expect("letter in range");
                    next.push((longer, s));
                }
            }
        }
        levels.push(next);
    }
    levels
        .into_iter()
        .map(|level| level.into_iter().map(|(w, _)| w).collect())
        .collect()
}

/// Words accepted by the automaton, in lexicographic order, by depth-first
/// search over its transitions.
fn accepted_words(dfa: &LexAutomaton, k: usize) -> Vec<Vec<u16>> {
    fn walk(
        dfa: &LexAutomaton,
        state: usize,
        k: usize,
        prefix: &mut Vec<u16>,
        out: &mut Vec<Vec<u16>>,
    ) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for letter in 1..dfa.strands().get() {
            let next = dfa.next(state, letter);
            if next != dfa.fail() {
                prefix.push(letter);
                walk(dfa, next, k, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(dfa, dfa.initial(), k, &mut Vec::new(), &mut out);
    out
}

fn valid_ms(n: StrandCount, last: u16) -> std::ops::RangeInclusive<usize> {
    let lo = if last == 0 { 1 } else { last as usize - 1 };
    lo..=n.generators() as usize
}

pub fn check_known_values() -> CheckReport {
    timed(1, "worked example values", Duration::from_secs(1), || {
        let n4 = strands(4);
        let g = GrowthTables::build(n4, 3);
        let mut problems = Vec::new();
        if g.x(3) != &BigUint::from(19u32) {
            problems.push(format!("x_4,3 = {}", g.x(3)));
        }
        let mut ex = EquivClassExplorer::new(OracleBounds::default());
        for (k, expected) in [1u32, 3, 8, 19].into_iter().enumerate() {
            let listed = ex.enumerate_lex_reps(n4, k)?.len();
            if g.x(k) != &BigUint::from(expected) || listed != expected as usize {
                problems.push(format!("|L_4,{k}| = {} / {listed}", g.x(k)));
            }
        }
        let prefix_counts: [(&[u16], usize, u32); 4] =
            [(&[], 2, 4), (&[3], 2, 2), (&[3, 2], 2, 0), (&[3, 2], 1, 1)];
        for (letters, m, expected) in prefix_counts {
            let got = count_with_prefix(3, &word(4, letters)?, m, &g)?;
            if got != BigUint::from(expected) {
                problems.push(format!("x_4,3({letters:?},{m}) = {got}"));
            }
        }
        let w16 = unrank(n4, 3, &BigUint::from(16u32), &g)?;
        if w16.letters() != [3, 2, 1] {
            problems.push(format!("unrank 16 = {w16}"));
        }
        Ok(if problems.is_empty() {
            (
                true,
                "x_4,3 = 19, |L_4,0..3| = 1 3 8 19, prefix counts 4 2 0 1, unrank 16 = 3 2 1"
                    .into(),
            )
        } else {
            (false, problems.join("; "))
        })
    })
}

pub fn check_example_chain() -> CheckReport {
    timed(
        2,
        "five-strand example chain",
        Duration::from_secs(1),
        || {
            let letters = [4u16, 3, 2, 2, 1];
            let functions: [&[i16]; 5] = [
                &[1, 2, 0, -1],
                &[1, 0, -1, 4],
                &[0, -1, 3, 4],
                &[0, -1, 2, 4],
                &[0, 2, 1, 4],
            ];
            let sets: [&str; 5] = [
                "{1, 2, 3 4}",
                "{1, 2 3, 4}",
                "{1 2, 3, 4}",
                "{1 2, 3 2, 4}",
                "{2, 3 2 1, 4}",
            ];
            let mut problems = Vec::new();
            for len in 1..=5 {
                let w = word(5, &letters[..len])?;
                match f_for_word(&w) {
                    None => problems.push(format!("{w} rejected")),
                    Some(f) => {
                        if f.values() != functions[len - 1] {
                            problems.push(format!("f({w}) = {f}"));
                        }
                        let set = f_to_set(&f).to_string();
                        if set != sets[len - 1] {
                            problems.push(format!("F({w}) = {set}"));
                        }
                    }
                }
            }
            Ok(if problems.is_empty() {
                (
                    true,
                    "functions and prefix sets match for all five prefixes".into(),
                )
            } else {
                (false, problems.join("; "))
            })
        },
    )
}

pub fn check_automaton_table() -> CheckReport {
    timed(
        3,
        "automaton state counts, minimality, witnesses",
        Duration::from_secs(60),
        || {
            let expected = [5usize, 18, 56, 161, 443, 1190, 3156, 8315];
            let mut problems = Vec::new();
            let automata: Vec<(usize, Result<LexAutomaton>)> = (2..=10usize)
                .into_par_iter()
                .map(|n| (n, build_automaton(strands(n))))
                .collect();
            for (n, built) in automata {
                let dfa = built?;
                if n >= 3 && dfa.accepted_states() != expected[n - 3] {
                    problems.push(format!("n={n}: {} states", dfa.accepted_states()));
                }
                if n <= 8 && !dfa.check_minimality() {
                    problems.push(format!("n={n}: not minimal"));
                }
                if n >= 3 {
                    let (distinct, _) = dfa.witness_distinctness(DEFAULT_WITNESS_BOUND)?;
                    if !distinct {
                        problems.push(format!("n={n}: witnesses collide"));
                    }
                }
            }
            Ok(if problems.is_empty() {
                (true, "5 18 56 161 443 1190 3156 8315; minimal for n<=8; witnesses distinct for n<=10".into())
            } else {
                (false, problems.join("; "))
            })
        },
    )
}

fn oracle_language_checks(mismatches: &mut Mismatches) -> Result<usize> {
    let mut checked = 0;
    for n in 2..=5usize {
        let sn = strands(n);
        let g = GrowthTables::build(sn, 8);
        let dfa = build_automaton(sn)?;
        let mut ex = EquivClassExplorer::new(OracleBounds::default());
        for k in 0..=8 {
            let listed = ex.enumerate_lex_reps(sn, k)?;
            if g.x(k) != &BigUint::from(listed.len()) {
                mismatches
                    .record(|| format!("n={n} k={k}: x = {} but {} listed", g.x(k), listed.len()));
            }
            let accepted = accepted_words(&dfa, k);
            let listed: Vec<&[u16]> = listed.iter().map(|w| w.letters()).collect();
            if accepted
                .iter()
                .map(Vec::as_slice)
                .ne(listed.iter().copied())
            {
                mismatches.record(|| format!("n={n} k={k}: automaton language differs"));
            }
            checked += 2;
        }
    }
    Ok(checked)
}

fn forbidden_set_checks(mismatches: &mut Mismatches) -> Result<usize> {
    let mut checked = 0;
    for n in 2..=5usize {
        let sn = strands(n);
        let words: Vec<ArtinWord> = lex_reps_by_length(sn, 6).into_iter().flatten().collect();
        checked += words.len();
        let partial: Vec<Result<Mismatches>> = words
            .par_chunks(64)
            .map(|chunk| {
                let mut ex = EquivClassExplorer::new(OracleBounds::default());
                let mut local = Mismatches::default();
                for w in chunk {
                    let fast = f_to_set(&f_for_word(w).ok_or(Error::NotLexRepresentative)?);
                    let brute = ex.brute_forbidden_min(w, n)?;
                    if fast != brute {
                        local.record(|| format!("F({w}) = {fast} vs {brute}"));
                    }
                }
                Ok(local)
            })
            .collect();
        for p in partial {
            mismatches.merge(p?);
        }
    }
    Ok(checked)
}

fn prefix_count_checks(mismatches: &mut Mismatches) -> Result<usize> {
    let mut checked = 0;
    for n in 2..=4usize {
        let sn = strands(n);
        let g = GrowthTables::build(sn, 7);
        let mut ex = EquivClassExplorer::new(OracleBounds::default());
        let listed: Vec<Vec<ArtinWord>> = (0..=7)
            .map(|k| ex.enumerate_lex_reps(sn, k))
            .collect::<Result<_>>()?;
        for k in 0..=7 {
            for prefix_len in 0..=k {
                for w in &listed[prefix_len] {
                    for m in valid_ms(sn, w.last().unwrap_or(0)) {
                        let brute = listed[k]
                            .iter()
                            .filter(|u| {
                                u.letters().starts_with(w.letters())
                                    && u.letters().get(prefix_len).is_none_or(|&c| c as usize > m)
                            })
                            .count();
                        let fast = count_with_prefix(k, w, m, &g)?;
                        let slow = reference_count(k, w, m, &g)?;
                        if fast != slow || fast != BigUint::from(brute) {
                            mismatches.record(|| {
                                format!("x_{n},{k}({w},{m}) = {fast} / {slow} / {brute}")
                            });
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

pub fn check_oracle_equivalence() -> CheckReport {
    timed(4, "oracle equivalence", Duration::from_secs(600), || {
        let mut mismatches = Mismatches::default();
        let languages = oracle_language_checks(&mut mismatches)?;
        let sets = forbidden_set_checks(&mut mismatches)?;
        let counts = prefix_count_checks(&mut mismatches)?;
        let (ok, _) = mismatches.summary(0, "");
        let detail = if ok {
            format!(
                "{languages} language comparisons, {sets} forbidden sets, {counts} prefix counts agree"
            )
        } else {
            mismatches
                .summary(languages + sets + counts, "comparisons")
                .1
        };
        Ok((ok, detail))
    })
}

pub fn check_uniformity() -> CheckReport {
    timed(
        5,
        "uniformity and rank round trip",
        Duration::from_secs(120),
        || {
            let n4 = strands(4);
            let g = GrowthTables::build(n4, 6);
            let draws = sample(
                &SampleRequest::new(n4, 3, 190_000, Some(20240601))?,
                &GrowthTables::build(n4, 3),
            )?;
            let mut hist = [0u64; 19];
            for d in &draws {
                let r = rank(d, &g)?;
                let idx = r.to_u32_digits().first().copied().unwrap_or(0) as usize;
                hist[idx - 1] += 1;
            }
            let expected = 190_000.0 / 19.0;
            let chi2: f64 = hist
                .iter()
                .map(|&c| (c as f64 - expected).powi(2) / expected)
                .sum();

            let mut mismatches = Mismatches::default();
            let mut checked = 0;
            for n in 2..=4usize {
                let sn = strands(n);
                let gn = GrowthTables::build(sn, 6);
                for k in 0..=6 {
                    let total = gn.x(k).to_u64_digits().first().copied().unwrap_or(0);
                    let mut previous: Option<ArtinWord> = None;
                    for r in 1..=total {
                        let r = BigUint::from(r);
                        let w = unrank(sn, k, &r, &gn)?;
                        if rank(&w, &gn)? != r {
                            mismatches.record(|| format!("n={n} k={k} r={r}"));
                        }
                        if let Some(p) = &previous {
                            if p.letters() >= w.letters() {
                                mismatches.record(|| format!("order broken at n={n} k={k} r={r}"));
                            }
                        }
                        previous = Some(w);
                        checked += 1;
                    }
                }
            }
            let (round_trip_ok, round_trip) = mismatches.summary(checked, "ranks");
            let ok = chi2 < CHI_SQUARE_CRITICAL_18 && round_trip_ok;
            Ok((
                ok,
                format!("chi-square {chi2:.2} < {CHI_SQUARE_CRITICAL_18}; {round_trip}"),
            ))
        },
    )
}

/// Returns `(occurrences of Δ, occurrences of σ_1^6)` among naive draws.
pub fn naive_bias_counts(draws: usize, seed: u64) -> Result<(u64, u64)> {
    let n4 = strands(4);
    let delta = word(4, &[1, 2, 1, 3, 2, 1])?;
    let power = word(4, &[1; 6])?;
    let mut ex = EquivClassExplorer::new(OracleBounds::default());
    let mut verdicts: HashMap<Vec<u16>, (bool, bool)> = HashMap::new();
    let mut rng = stream_rng(seed, 0);
    let (mut hits_delta, mut hits_power) = (0u64, 0u64);
    for _ in 0..draws {
        let w = naive_sample(n4, 6, &mut rng);
        let verdict = match verdicts.get(w.letters()) {
            Some(v) => *v,
            None => {
                let nf = ex.normalize(&w)?;
                let v = (nf == delta, nf == power);
                verdicts.insert(w.letters().to_vec(), v);
                v
            }
        };
        hits_delta += verdict.0 as u64;
        hits_power += verdict.1 as u64;
    }
    Ok((hits_delta, hits_power))
}

pub fn check_bias() -> CheckReport {
    timed(6, "naive sampler bias", Duration::from_secs(300), || {
        let (delta, power) = naive_bias_counts(729_000, 6)?;
        if power == 0 {
            return Ok((false, format!("half twist {delta} times, sigma_1^6 never")));
        }
        let ratio = delta as f64 / power as f64;
        Ok((
            (13.0..=19.0).contains(&ratio),
            format!(
                "half twist {delta} times, sigma_1^6 {power} times, ratio {ratio:.2} in [13, 19]"
            ),
        ))
    })
}

fn time_draw(n: usize, k: usize, seed: u64) -> Result<Duration> {
    let start = Instant::now();
    let sn = strands(n);
    let g = GrowthTables::build(sn, k);
    sample_one(sn, k, &g, &mut stream_rng(seed, 0))?;
    Ok(start.elapsed())
}

/// Least-squares slope of `log t` against `log k`.
pub fn scaling_exponent(points: &[(usize, Duration)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|(k, _)| (*k as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, t)| t.as_secs_f64().ln()).collect();
    let len = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / len, ys.iter().sum::<f64>() / len);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

pub fn check_performance() -> CheckReport {
    timed(7, "desk-scale performance", Duration::from_secs(60), || {
        let big = time_draw(64, 128, 1)?;
        let long = time_draw(16, 256, 1)?;
        let mut points = Vec::new();
        for k in [32usize, 64, 128, 256] {
            let g = GrowthTables::build(strands(4), k);
            let reps = 40;
            let start = Instant::now();
            for d in 0..reps {
                sample_one(strands(4), k, &g, &mut stream_rng(9, d))?;
            }
            points.push((k, start.elapsed() / reps as u32));
        }
        let exponent = scaling_exponent(&points);
        let ok = big < Duration::from_secs(5) && long < Duration::from_secs(10) && exponent < 3.2;
        Ok((
            ok,
            format!(
                "(64,128) {big:.2?} < 5s; (16,256) {long:.2?} < 10s; k-exponent at n=4 {exponent:.2} < 3.2"
            ),
        ))
    })
}

/// Every forbidden-prefix shape on `n` strands: ascending pairs and
/// descending runs.
fn prefix_shapes(n: StrandCount) -> Vec<Vec<u16>> {
    let top = n.generators();
    let mut out: Vec<Vec<u16>> = (2..=top).map(|i| vec![i - 1, i]).collect();
    for i in 1..=top {
        for m in 1..=i {
            out.push((m..=i).rev().collect());
        }
    }
    out
}

fn complement_checks(mismatches: &mut Mismatches) -> Result<usize> {
    let mut checked = 0;
    for n in 2..=8usize {
        let sn = strands(n);
        for shape in prefix_shapes(sn) {
            let beta = ArtinWord::new(sn, shape)?;
            let beta_perm = PermBraid::from_word(&beta)?;
            for j in 1..sn.get() {
                let expected = PermBraid::atom(sn, j)?.brute_complement(&beta_perm)?;
                let agrees = atom_complement(j, &beta)
                    .and_then(|w| PermBraid::from_word(&w))
                    .is_ok_and(|got| got == expected);
                if !agrees {
                    mismatches.record(|| format!("{j} \\ {beta} on {n} strands"));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Census of subsets of the forbidden prefixes supported on `a..=b`, by
/// explicit joins.
fn census(
    f: &AdmissibleFunction,
    a: u16,
    b: u16,
    l_max: usize,
) -> Result<HashMap<(usize, usize, usize), i64>> {
    let n = f.strands();
    let elements: Vec<PermBraid> = f_to_set(f)
        .elements()
        .iter()
        .filter(|e| e.letters().iter().all(|&c| a <= c && c < b))
        .map(PermBraid::from_word)
        .collect::<Result<_>>()?;
    let mut out = HashMap::new();
    for mask in 0u32..(1 << elements.len()) {
        let mut join = PermBraid::identity(n);
        for (i, e) in elements.iter().enumerate() {
            if mask & (1 << i) != 0 {
                join = join.lcm(e)?;
            }
        }
        if join.len() > l_max {
            continue;
        }
        let key = (
            join.len(),
            (join.image(a) - a) as usize,
            (b - join.image(b)) as usize,
        );
        *out.entry(key).or_insert(0) += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

fn scan_update_checks(mismatches: &mut Mismatches) -> Result<usize> {
    let mut checked = 0;
    for n in 2..=6usize {
        let sn = strands(n);
        // counts depend on a prefix only through its function and last letter
        let mut seen = HashMap::new();
        for w in lex_reps_by_length(sn, 10).into_iter().flatten() {
            let state = PrefixState::from_word(&w).ok_or(Error::NotLexRepresentative)?;
            if seen
                .insert((state.function().clone(), state.last()), ())
                .is_some()
            {
                continue;
            }
            for m in valid_ms(sn, state.last()) {
                let f = restrict_function(state.function(), state.last(), m)?;
                for l_max in 0..=10usize.min(sn.delta_len()) {
                    let mut cube = CountCube::<i64>::new(sn, l_max, state.last().max(1), true);
                    loop {
                        let (a, b) = cube.window();
                        let got: HashMap<_, _> = cube.nonzero_entries().into_iter().collect();
                        if got != census(&f, a, b, l_max)? {
                            mismatches
                                .record(|| format!("w={w} m={m} window [{a},{b}] l<={l_max}"));
                        }
                        checked += 1;
                        if cube.is_complete() {
                            break;
                        }
                        let (direction, element) = cube.next_move(&f)?;
                        cube.advance_window(direction, element.as_ref())?;
                    }
                }
            }
        }
    }
    Ok(checked)
}

pub fn check_complement_rules() -> CheckReport {
    timed(
        8,
        "complement tables and scan updates",
        Duration::from_secs(120),
        || {
            let mut mismatches = Mismatches::default();
            let complements = complement_checks(&mut mismatches)?;
            let windows = scan_update_checks(&mut mismatches)?;
            let (ok, _) = mismatches.summary(0, "");
            let detail = if ok {
                format!("{complements} atom complements and {windows} scan windows agree with permutation joins")
            } else {
                mismatches.summary(complements + windows, "comparisons").1
            };
            Ok((ok, detail))
        },
    )
}

/// Runs all eight checks in order.
pub fn run_all() -> Vec<CheckReport> {
    vec![
        check_known_values(),
        check_example_chain(),
        check_automaton_table(),
        check_oracle_equivalence(),
        check_uniformity(),
        check_bias(),
        check_performance(),
        check_complement_rules(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_of_a_power_law() {
        let points: Vec<(usize, Duration)> = [32usize, 64, 128]
            .iter()
            .map(|&k| (k, Duration::from_nanos((k * k) as u64 * 10)))
            .collect();
        assert!((scaling_exponent(&points) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn generated_levels_match_growth() {
        let sn = strands(5);
        let g = GrowthTables::build(sn, 6);
        for (k, level) in lex_reps_by_length(sn, 6).iter().enumerate() {
            assert_eq!(g.x(k), &BigUint::from(level.len()));
        }
    }

    #[test]
    fn shapes_are_counted() {
        // n-2 pairs and C(n,2) runs
        assert_eq!(prefix_shapes(strands(5)).len(), 3 + 10);
    }

    #[test]
    fn quick_checks_pass() {
        for report in [check_known_values(), check_example_chain()] {
            assert!(report.passed, "{report}");
        }
    }
}
