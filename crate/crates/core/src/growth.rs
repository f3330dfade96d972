//! Growth tables of the positive braid monoid.
//!
//! `H_m(t) = Σ_{i=1..m} (-1)^{i+1} t^{C(i,2)} H_{m-i}(t)` with
//! `H_0 = H_1 = 1`, and the number `x_{n,j}` of positive braids of length
//! `j` is the coefficient sequence of `1 / H_n(t)`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::words::StrandCount;
use crate::{Error, Result};

const CACHE_MAGIC: &str = "braidgen-growth v1";

fn binom2(i: usize) -> usize {
    i * i.saturating_sub(1) / 2
}

/// Coefficients `h_{m,j}` for `0 <= m <= n` and `0 <= j <= j_max`, computed
/// by the recurrence without truncating at the degree `C(m,2)`.
pub fn bronfman_rows(n: usize, j_max: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut row = vec![BigInt::zero(); j_max + 1];
        if m <= 1 {
            row[0] = BigInt::one();
        } else {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut acc = BigInt::zero();
                for i in 1..=m {
                    let shift = binom2(i);
                    if shift > j {
                        break;
                    }
                    let term = &rows[m - i][j - shift];
                    if i % 2 == 1 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                *slot = acc;
            }
        }
        rows.push(row);
    }
    rows
}

/// `h`-table for `m <= n`, each row truncated to `j <= min(k_max, C(m,2))`.
pub fn build_h(n: StrandCount, k_max: usize) -> Vec<Vec<BigInt>> {
    let mut h = Vec::new();
    extend_h(&mut h, n.get() as usize, k_max);
    h
}

fn extend_h(h: &mut Vec<Vec<BigInt>>, n: usize, k_max: usize) {
    while h.len() <= n {
        h.push(Vec::new());
    }
    let get = |h: &Vec<Vec<BigInt>>, m: usize, j: usize| -> BigInt {
        h[m].get(j).cloned().unwrap_or_default()
    };
    for m in 0..=n {
        let top = k_max.min(binom2(m));
        for j in h[m].len()..=top {
            let value = if m <= 1 {
                // H_0 = H_1 = 1
                if j == 0 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            } else {
                let mut acc = BigInt::zero();
                for i in 1..=m {
                    let shift = binom2(i);
                    if shift > j {
                        break;
                    }
                    let term = get(h, m - i, j - shift);
                    if i % 2 == 1 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            };
            h[m].push(value);
        }
    }
}

/// `x_{n,j}` for `0 <= j <= k_max` from `x_j = -Σ_{t>=1} x_{j-t} h_{n,t}`.
pub fn build_x(n: StrandCount, k_max: usize, h: &[Vec<BigInt>]) -> Vec<BigUint> {
    let mut x = Vec::new();
    extend_x(&mut x, &h[n.get() as usize], k_max);
    x
}

fn extend_x(x: &mut Vec<BigUint>, h_n: &[BigInt], k_max: usize) {
    let signed: Vec<BigInt> = x.iter().map(|v| BigInt::from(v.clone())).collect();
    let mut signed = signed;
    for j in x.len()..=k_max {
        let value = if j == 0 {
            BigInt::one()
        } else {
            let mut acc = BigInt::zero();
            for (t, coeff) in h_n.iter().enumerate().skip(1).take(j) {
                acc -= &signed[j - t] * coeff;
            }
            acc
        };
        signed.push(value);
    }
    x.clear();
    x.extend(signed.into_iter().map(|v| {
        v.to_biguint()
            .expect("growth series coefficients are non-negative")
    }));
}

/// Precomputed `h` and `x` tables for one strand count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthTables {
    n: StrandCount,
    k_max: usize,
    h: Vec<Vec<BigInt>>,
    x: Vec<BigUint>,
}

impl GrowthTables {
    pub fn build(n: StrandCount, k_max: usize) -> Self {
        let h = build_h(n, k_max);
        let x = build_x(n, k_max, &h);
        GrowthTables { n, k_max, h, x }
    }

    pub fn strands(&self) -> StrandCount {
        self.n
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Extends the tables in place; existing entries are never recomputed.
    pub fn extend_to(&mut self, k_max: usize) {
        if k_max <= self.k_max {
            return;
        }
        let n = self.n.get() as usize;
        extend_h(&mut self.h, n, k_max);
        extend_x(&mut self.x, &self.h[n], k_max);
        self.k_max = k_max;
    }

    /// `h_{m,j}`, zero beyond the stored degree.
    pub fn h(&self, m: usize, j: usize) -> BigInt {
        self.h
            .get(m)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_default()
    }

    pub fn h_rows(&self) -> &[Vec<BigInt>] {
        &self.h
    }

    /// `x_{n,j}`; zero for negative `j` is the caller's concern.
    pub fn x(&self, j: usize) -> &BigUint {
        &self.x[j]
    }

    pub fn x_row(&self) -> &[BigUint] {
        &self.x
    }

    pub fn covers(&self, n: StrandCount, k: usize) -> Result<()> {
        if self.n != n || k > self.k_max {
            return Err(Error::TablesTooSmall {
                n: self.n.get(),
                k_max: self.k_max,
                req_n: n.get(),
                req_k: k,
            });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{CACHE_MAGIC} n={} kmax={}", self.n, self.k_max);
        for row in &self.h {
            out.push_str(&join(row.iter()));
            out.push('\n');
        }
        out.push_str(&join(self.x.iter()));
        out.push('\n');
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let invalid = |msg: &str| Error::CacheInvalid(msg.to_string());
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| invalid("empty file"))?;
        let rest = header
            .strip_prefix(CACHE_MAGIC)
            .ok_or_else(|| invalid("bad magic header"))?;
        let mut n = None;
        let mut k_max = None;
        for field in rest.split_whitespace() {
            if let Some(v) = field.strip_prefix("n=") {
                n = v.parse::<usize>().ok();
            } else if let Some(v) = field.strip_prefix("kmax=") {
                k_max = v.parse::<usize>().ok();
            } else {
                return Err(invalid("unknown header field"));
            }
        }
        let n = n.ok_or_else(|| invalid("missing n"))?;
        let k_max = k_max.ok_or_else(|| invalid("missing kmax"))?;
        let n = StrandCount::new(n).map_err(|_| invalid("bad n"))?;

        let mut h = Vec::with_capacity(n.get() as usize + 1);
        for m in 0..=n.get() as usize {
            let line = lines.next().ok_or_else(|| invalid("truncated h table"))?;
            let row: Vec<BigInt> = parse_row(line).ok_or_else(|| invalid("bad h entry"))?;
            if row.len() != k_max.min(binom2(m)) + 1 || !row[0].is_one() {
                return Err(invalid("h row has wrong shape"));
            }
            h.push(row);
        }
        let line = lines.next().ok_or_else(|| invalid("missing x row"))?;
        let x: Vec<BigUint> = parse_row(line).ok_or_else(|| invalid("bad x entry"))?;
        if x.len() != k_max + 1 || lines.any(|l| !l.trim().is_empty()) {
            return Err(invalid("x row has wrong shape"));
        }
        let tables = GrowthTables { n, k_max, h, x };
        if !tables.convolution_holds() {
            return Err(invalid("x row inconsistent with h"));
        }
        Ok(tables)
    }

    /// `Σ_t x_{j-t} h_{n,t} = 0` for every `1 <= j <= k_max`.
    pub fn convolution_holds(&self) -> bool {
        let h_n = &self.h[self.n.get() as usize];
        if !self.x[0].is_one() {
            return false;
        }
        (1..=self.k_max).all(|j| {
            let mut acc = BigInt::zero();
            for (t, coeff) in h_n.iter().enumerate().take(j + 1) {
                acc += BigInt::from(self.x[j - t].clone()) * coeff;
            }
            acc.sign() == Sign::NoSign
        })
    }

    pub fn save_cache(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_text())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load_cache(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_text(&text)
    }

    /// Loads tables for `n` covering `k` from `path`, extending or rebuilding
    /// them as needed and writing the result back.
    pub fn load_or_build(path: &Path, n: StrandCount, k: usize) -> Result<Self> {
        let loaded = match Self::load_cache(path) {
            Ok(t) if t.n == n => Some(t),
            Ok(_) | Err(Error::CacheInvalid(_)) => None,
            Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::NotFound => None,
            Err(e) => return Err(e),
        };
        match loaded {
            Some(t) if t.k_max >= k => {
                t.covers(n, k)?;
                Ok(t)
            }
            Some(mut t) => {
                t.extend_to(k);
                t.save_cache(path)?;
                Ok(t)
            }
            None => {
                let t = Self::build(n, k);
                t.save_cache(path)?;
                Ok(t)
            }
        }
    }
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_row<T: std::str::FromStr>(line: &str) -> Option<Vec<T>> {
    line.split_whitespace().map(|t| t.parse().ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: usize) -> StrandCount {
        StrandCount::new(k).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_polynomials() {
        // H_2 = H_1 - t H_0, H_3 = H_2 - t H_1 + t^3 H_0
        let h = build_h(n(3), 10);
        assert_eq!(h[2], ints(&[1, -1]));
        assert_eq!(h[3], ints(&[1, -2, 0, 1]));
        for row in &h {
            assert!(row[0].is_one());
        }
    }

    #[test]
    fn small_counts() {
        let t = GrowthTables::build(n(4), 3);
        assert_eq!(t.x(3), &BigUint::from(19u32));
        let t2 = GrowthTables::build(n(2), 50);
        assert!(t2.x_row().iter().all(|v| v.is_one()));
        assert_eq!(GrowthTables::build(n(3), 3).x(3), &BigUint::from(7u32));
    }

    #[test]
    fn convolution_identity() {
        for k in 2..=8 {
            assert!(GrowthTables::build(n(k), 40).convolution_holds());
        }
    }

    #[test]
    fn degree_is_binomial() {
        for m in 0..=10usize {
            let deg = binom2(m);
            let rows = bronfman_rows(m, deg + 1);
            assert!(rows[m][deg + 1].is_zero(), "m={m}");
            if m >= 2 {
                assert!(!rows[m][deg].is_zero(), "m={m}");
            }
        }
    }

    #[test]
    fn counts_increase_for_three_or_more_strands() {
        for k in 3..=7 {
            let t = GrowthTables::build(n(k), 30);
            for j in 0..30 {
                assert!(t.x(j) < t.x(j + 1));
            }
        }
    }

    #[test]
    fn incremental_extension_matches_full_build() {
        let mut t = GrowthTables::build(n(6), 5);
        let prefix: Vec<BigUint> = t.x_row().to_vec();
        t.extend_to(40);
        assert_eq!(t, GrowthTables::build(n(6), 40));
        assert_eq!(&t.x_row()[..6], &prefix[..]);
    }

    #[test]
    fn cache_round_trip_and_extension() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let t = GrowthTables::build(n(4), 10);
        t.save_cache(&path).unwrap();
        assert_eq!(GrowthTables::load_cache(&path).unwrap(), t);

        GrowthTables::build(n(4), 5).save_cache(&path).unwrap();
        let small = GrowthTables::load_cache(&path).unwrap();
        let ext = GrowthTables::load_or_build(&path, n(4), 8).unwrap();
        assert_eq!(ext.k_max(), 8);
        assert_eq!(&ext.x_row()[..6], small.x_row());
        assert_eq!(GrowthTables::load_cache(&path).unwrap().k_max(), 8);
    }

    #[test]
    fn bad_cache_is_rejected_and_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        fs::write(&path, "not-a-cache n=4 kmax=3\n1\n").unwrap();
        let err = GrowthTables::load_cache(&path).unwrap_err();
        assert!(err.to_string().contains("cache invalid"));
        let t = GrowthTables::load_or_build(&path, n(4), 3).unwrap();
        assert_eq!(t.x(3), &BigUint::from(19u32));

        let mut text = GrowthTables::build(n(4), 6).to_text();
        text = text.replace("\n1 3 8 19", "\n1 3 8 20");
        assert!(GrowthTables::from_text(&text).is_err());
    }
}
