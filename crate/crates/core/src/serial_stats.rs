//! Rank autocorrelations of an observed series.
//!
//! Three statistics are provided at lag `k`: linear serial rank statistics
//! with arbitrary scores (van der Waerden and Spearman–Wald–Wolfowitz are the
//! two named cases), and Kendall's autocorrelation built from the number of
//! discordant lagged pairs. Each is standardized by its permutation mean and
//! standard deviation, computed by full enumeration for `n <= 9` and by seeded
//! Monte Carlo over random permutations otherwise.

use std::collections::HashMap;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quadrature::compensated_sum;
use crate::scores::Score;

/// Largest `n` for which permutation moments are enumerated exactly.
pub const MAX_ENUMERATION_N: usize = 9;
/// Number of random permutations behind Monte Carlo moments.
pub const MC_PERMUTATIONS: usize = 100_000;
/// Seed of the Monte Carlo permutation stream.
pub const MC_SEED: u64 = 0x5EED_0F_2A4E;
const MC_CHUNK: usize = 1000;

/// How tied observations are handled when ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    #[default]
    Reject,
    /// Ties are broken in a uniformly random order drawn from this seed.
    Random(u64),
}

impl FromStr for TiePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("reject") {
            return Ok(TiePolicy::Reject);
        }
        match s.split_once(':') {
            Some((kind, seed)) if kind.eq_ignore_ascii_case("random") => seed
                .trim()
                .parse()
                .map(TiePolicy::Random)
                .map_err(|_| Error::Parse(format!("bad tie-breaking seed {seed:?}"))),
            _ => Err(Error::Parse(format!(
                "unknown tie policy {s:?} (expected reject or random:SEED)"
            ))),
        }
    }
}

/// An observed series together with its ranks (1 = smallest).
#[derive(Debug, Clone, PartialEq)]
pub struct RankSeries {
    data: Vec<f64>,
    ranks: Vec<usize>,
}

impl RankSeries {
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn n(&self) -> usize {
        self.ranks.len()
    }

    /// Builds a series directly from a permutation of `1..=n`.
    pub fn from_ranks(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        let mut seen = vec![false; n + 1];
        for &r in &ranks {
            if r == 0 || r > n || seen[r] {
                return Err(domain(format!("{ranks:?} is not a permutation of 1..={n}")));
            }
            seen[r] = true;
        }
        if n < 2 {
            return Err(domain("a rank series needs at least two observations"));
        }
        Ok(RankSeries {
            data: ranks.iter().map(|&r| r as f64).collect(),
            ranks,
        })
    }
}

/// Ranks `x`, rejecting ties.
pub fn ranks(x: &[f64]) -> Result<RankSeries> {
    ranks_with(x, TiePolicy::Reject)
}

/// Ranks `x` under the given tie policy.
pub fn ranks_with(x: &[f64], ties: TiePolicy) -> Result<RankSeries> {
    let n = x.len();
    if n < 2 {
        return Err(domain("a rank series needs at least two observations"));
    }
    if let Some(i) = x.iter().position(|v| v.is_nan()) {
        return Err(domain(format!("observation {i} is NaN")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    match ties {
        TiePolicy::Reject => {
            order.sort_by(|&i, &j| x[i].total_cmp(&x[j]).then(i.cmp(&j)));
            let mut tied = Vec::new();
            for w in order.windows(2) {
                if x[w[0]] == x[w[1]] {
                    tied.extend_from_slice(w);
                }
            }
            if !tied.is_empty() {
                tied.sort_unstable();
                tied.dedup();
                return Err(Error::Ties { indices: tied });
            }
        }
        TiePolicy::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let keys: Vec<u64> = (0..n).map(|_| rng.gen()).collect();
            order.sort_by(|&i, &j| {
                // -0.0 and 0.0 compare equal here, so they count as ties.
                x[i].partial_cmp(&x[j])
                    .expect("NaN rejected above")
                    .then(keys[i].cmp(&keys[j]))
                    .then(i.cmp(&j))
            });
        }
    }
    let mut r = vec![0; n];
    for (rank, &i) in order.iter().enumerate() {
        r[i] = rank + 1;
    }
    Ok(RankSeries {
        data: x.to_vec(),
        ranks: r,
    })
}

fn check_lag(n: usize, k: usize) -> Result<()> {
    if k >= 1 && k + 2 <= n {
        Ok(())
    } else {
        Err(domain(format!("lag {k} is outside 1..={} for n = {n}", n.saturating_sub(2))))
    }
}

/// Counts inversions of `v` by merge sort, sorting it in the process.
fn inversions(v: &mut [usize], buf: &mut Vec<usize>) -> u64 {
    let m = v.len();
    if m < 2 {
        return 0;
    }
    let mid = m / 2;
    let mut count = inversions(&mut v[..mid], buf) + inversions(&mut v[mid..], buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < m {
        if v[i] <= v[j] {
            buf.push(v[i]);
            i += 1;
        } else {
            buf.push(v[j]);
            count += (mid - i) as u64;
            j += 1;
        }
    }
    buf.extend_from_slice(&v[i..mid]);
    buf.extend_from_slice(&v[j..m]);
    v.copy_from_slice(buf);
    count
}

fn discordances_raw(r: &[usize], k: usize) -> u64 {
    let n = r.len();
    // Order the lagged pairs (R_t, R_{t-k}) by R_t; discordant pairs are
    // then the inversions of the R_{t-k} sequence.
    let mut slot = vec![0usize; n + 1];
    for t in k..n {
        slot[r[t]] = r[t - k];
    }
    let mut seq: Vec<usize> = slot.into_iter().filter(|&v| v != 0).collect();
    let mut buf = Vec::with_capacity(seq.len());
    inversions(&mut seq, &mut buf)
}

/// Number of discordant pairs among the lagged pairs `(R_t, R_{t-k})`.
pub fn discordances(r: &RankSeries, k: usize) -> Result<u64> {
    check_lag(r.n(), k)?;
    Ok(discordances_raw(&r.ranks, k))
}

/// Which rank autocorrelation to compute.
#[derive(Debug, Clone)]
pub enum Statistic {
    /// `(n-k)^{-1} sum J1(R_t / (n+1)) J2(R_{t-k} / (n+1))`.
    Product(Score, Score),
    /// Spearman–Wald–Wolfowitz: `(n-k)^{-1} sum R_t R_{t-k}` on raw ranks.
    Spearman,
    /// `1 - 4 D_k / ((n-k)(n-k-1))`.
    Kendall,
}

impl Statistic {
    pub fn van_der_waerden() -> Self {
        Statistic::Product(Score::van_der_waerden(), Score::van_der_waerden())
    }

    pub fn spearman() -> Self {
        Statistic::Spearman
    }

    pub fn label(&self) -> String {
        match self {
            Statistic::Kendall => "kendall".into(),
            Statistic::Spearman => "sww".into(),
            Statistic::Product(a, b) => {
                let (la, lb) = (a.label(), b.label());
                match (la.as_str(), lb.as_str()) {
                    ("vdw", "vdw") => "vdw".into(),
                    _ => format!("{la}*{lb}"),
                }
            }
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "vdw" | "van-der-waerden" => Ok(Statistic::van_der_waerden()),
            "sww" | "spearman" => Ok(Statistic::Spearman),
            "kendall" => Ok(Statistic::Kendall),
            other => match other.split_once('*') {
                Some((a, b)) => Ok(Statistic::Product(a.parse()?, b.parse()?)),
                None => Err(Error::Parse(format!(
                    "unknown statistic {s:?} (expected vdw, sww, kendall or J1*J2)"
                ))),
            },
        }
    }
}

/// How the permutation moments were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MomentMethod {
    ExactEnumeration,
    MonteCarlo,
}

impl fmt::Display for MomentMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MomentMethod::ExactEnumeration => "exact",
            MomentMethod::MonteCarlo => "monte-carlo",
        })
    }
}

/// Permutation mean and standard deviation of a statistic.
///
/// `sd` is the standard deviation of `sqrt(n-k) * raw`, so the standardized
/// statistic is `sqrt(n-k) * (raw - mean) / sd`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
    pub method: MomentMethod,
}

/// One standardized rank autocorrelation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutocorrResult {
    pub lag: usize,
    pub statistic: String,
    pub raw: f64,
    pub mean: f64,
    pub sd: f64,
    pub standardized: f64,
    pub method: MomentMethod,
}

/// Precomputed scores `J(i / (n+1))`, indexed by rank.
struct ScoreTable {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl ScoreTable {
    fn new(j1: &Score, j2: &Score, n: usize) -> Result<Self> {
        let table = |j: &Score| -> Result<Vec<f64>> {
            let mut v = vec![0.0; n + 1];
            for (i, slot) in v.iter_mut().enumerate().skip(1) {
                *slot = j.eval(i as f64 / (n + 1) as f64)?;
            }
            Ok(v)
        };
        Ok(ScoreTable {
            a: table(j1)?,
            b: table(j2)?,
        })
    }

    fn raw(&self, r: &[usize], k: usize) -> f64 {
        let terms = (k..r.len()).map(|t| self.a[r[t]] * self.b[r[t - k]]);
        compensated_sum(terms) / (r.len() - k) as f64
    }
}

fn kendall_raw(r: &[usize], k: usize) -> f64 {
    let m = (r.len() - k) as f64;
    1.0 - 4.0 * discordances_raw(r, k) as f64 / (m * (m - 1.0))
}

enum Evaluator {
    Product(ScoreTable),
    Spearman,
    Kendall,
}

impl Evaluator {
    fn new(stat: &Statistic, n: usize) -> Result<Self> {
        Ok(match stat {
            Statistic::Product(a, b) => Evaluator::Product(ScoreTable::new(a, b, n)?),
            Statistic::Spearman => Evaluator::Spearman,
            Statistic::Kendall => Evaluator::Kendall,
        })
    }

    fn raw(&self, r: &[usize], k: usize) -> f64 {
        match self {
            Evaluator::Product(t) => t.raw(r, k),
            Evaluator::Spearman => {
                // Integer products; exact in f64 for any realistic n.
                let s: u64 = (k..r.len()).map(|t| (r[t] * r[t - k]) as u64).sum();
                s as f64 / (r.len() - k) as f64
            }
            Evaluator::Kendall => kendall_raw(r, k),
        }
    }
}

/// Running sums for the mean and variance of `raw`.
#[derive(Default, Clone)]
struct Accumulator {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl Accumulator {
    fn push(&mut self, x: f64) {
        self.sum.push(x);
        self.sum_sq.push(x * x);
    }

    fn finish(parts: Vec<(f64, f64, usize)>, m: usize) -> (f64, f64) {
        let count: usize = parts.iter().map(|p| p.2).sum();
        let mean = compensated_sum(parts.iter().map(|p| p.0)) / count as f64;
        let mean_sq = compensated_sum(parts.iter().map(|p| p.1)) / count as f64;
        let var = (mean_sq - mean * mean).max(0.0);
        (mean, (m as f64 * var).sqrt())
    }

    fn totals(&self) -> (f64, f64, usize) {
        (
            compensated_sum(self.sum.iter().copied()),
            compensated_sum(self.sum_sq.iter().copied()),
            self.sum.len(),
        )
    }
}

/// Visits every permutation of `1..=n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (1..=n).collect();
    let mut c = vec![0usize; n];
    visit(&p);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            visit(&p);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn exact_moments(eval: &Evaluator, n: usize, k: usize) -> (f64, f64) {
    // Mean over permutations is exact; the variance is taken around it in a
    // second pass to avoid cancellation.
    let mut acc = Accumulator::default();
    for_each_permutation(n, |p| acc.push(eval.raw(p, k)));
    let count = acc.sum.len() as f64;
    let mean = compensated_sum(acc.sum.iter().copied()) / count;
    let var = compensated_sum(acc.sum.iter().map(|x| (x - mean) * (x - mean))) / count;
    (mean, ((n - k) as f64 * var).sqrt())
}

fn monte_carlo_moments(eval: &Evaluator, n: usize, k: usize, seed: u64) -> (f64, f64) {
    let chunks = MC_PERMUTATIONS.div_ceil(MC_CHUNK);
    let parts: Vec<(f64, f64, usize)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut p: Vec<usize> = (1..=n).collect();
            let mut acc = Accumulator::default();
            let reps = MC_CHUNK.min(MC_PERMUTATIONS - c * MC_CHUNK);
            for _ in 0..reps {
                p.shuffle(&mut rng);
                acc.push(eval.raw(&p, k));
            }
            acc.totals()
        })
        .collect();
    Accumulator::finish(parts, n - k)
}

type CacheKey = (usize, usize, String);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<OnceLock<Moments>>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<OnceLock<Moments>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Permutation mean and standard deviation of `stat` at lag `k` for series
/// of length `n`. Results are cached per `(n, k, statistic)`.
pub fn permutation_moments(n: usize, k: usize, stat: &Statistic) -> Result<Moments> {
    check_lag(n, k)?;
    let key = (n, k, stat.label());
    let cell = {
        let mut map = cache().lock().expect("moment cache poisoned");
        map.entry(key).or_default().clone()
    };
    if let Some(m) = cell.get() {
        return Ok(*m);
    }
    let m = compute_moments(n, k, stat)?;
    Ok(*cell.get_or_init(|| m))
}

fn compute_moments(n: usize, k: usize, stat: &Statistic) -> Result<Moments> {
    let eval = Evaluator::new(stat, n)?;
    let (mean, sd, method) = if n <= MAX_ENUMERATION_N {
        let (m, s) = exact_moments(&eval, n, k);
        (m, s, MomentMethod::ExactEnumeration)
    } else {
        let (m, s) = monte_carlo_moments(&eval, n, k, MC_SEED);
        (m, s, MomentMethod::MonteCarlo)
    };
    if !(sd > 0.0) {
        return Err(domain(format!(
            "statistic {stat} has zero permutation variance at n = {n}, k = {k}"
        )));
    }
    Ok(Moments { mean, sd, method })
}

/// Monte Carlo permutation moments with an explicit seed, bypassing the
/// cache and the enumeration threshold.
pub fn monte_carlo_permutation_moments(n: usize, k: usize, stat: &Statistic, seed: u64) -> Result<Moments> {
    check_lag(n, k)?;
    let eval = Evaluator::new(stat, n)?;
    let (mean, sd) = monte_carlo_moments(&eval, n, k, seed);
    Ok(Moments {
        mean,
        sd,
        method: MomentMethod::MonteCarlo,
    })
}

/// Raw (unstandardized) value of `stat` at lag `k`.
pub fn raw_statistic(r: &RankSeries, k: usize, stat: &Statistic) -> Result<f64> {
    check_lag(r.n(), k)?;
    Ok(Evaluator::new(stat, r.n())?.raw(&r.ranks, k))
}

/// Standardized rank autocorrelation of `r` at lag `k`.
pub fn autocorr(r: &RankSeries, k: usize, stat: &Statistic) -> Result<AutocorrResult> {
    let raw = raw_statistic(r, k, stat)?;
    let m = permutation_moments(r.n(), k, stat)?;
    let scale = ((r.n() - k) as f64).sqrt();
    Ok(AutocorrResult {
        lag: k,
        statistic: stat.label(),
        raw,
        mean: m.mean,
        sd: m.sd,
        standardized: scale * (raw - m.mean) / m.sd,
        method: m.method,
    })
}

/// Linear serial rank statistic with scores `j1`, `j2`.
pub fn rank_autocorr(r: &RankSeries, k: usize, j1: &Score, j2: &Score) -> Result<AutocorrResult> {
    autocorr(r, k, &Statistic::Product(j1.clone(), j2.clone()))
}

/// Kendall's rank autocorrelation.
pub fn kendall_autocorr(r: &RankSeries, k: usize) -> Result<AutocorrResult> {
    autocorr(r, k, &Statistic::Kendall)
}

/// Parses a series: one value per line, or the first column of a CSV file,
/// with an optional non-numeric header line.
pub fn parse_series(text: &str) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let Some(field) = rec.get(0).filter(|f| !f.is_empty()) else {
            continue;
        };
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if i == 0 => {}
            Err(_) => {
                return Err(Error::Parse(format!("line {}: {field:?} is not a number", i + 1)))
            }
        }
    }
    Ok(out)
}

/// Reads a series from a file (see [`parse_series`]).
pub fn read_series(path: &Path) -> Result<Vec<f64>> {
    let mut text = String::new();
    std::fs::File::open(path)?.read_to_string(&mut text)?;
    parse_series(&text)
}

/// Writes results as CSV with columns `lag,statistic,raw,mean,sd,standardized,method`.
pub fn write_results<W: std::io::Write>(out: W, rows: &[AutocorrResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lag", "statistic", "raw", "mean", "sd", "standardized", "method"])
        .map_err(|e| Error::Io(e.to_string()))?;
    for r in rows {
        w.write_record([
            r.lag.to_string(),
            r.statistic.clone(),
            r.raw.to_string(),
            r.mean.to_string(),
            r.sd.to_string(),
            r.standardized.to_string(),
            r.method.to_string(),
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rank_examples() {
        assert_eq!(ranks(&[3.1, -2.0, 0.5]).unwrap().ranks(), &[3, 1, 2]);
        assert_eq!(ranks(&[1.0, 2.0, 3.0, 4.0]).unwrap().ranks(), &[1, 2, 3, 4]);
        assert_eq!(
            ranks(&[1.0, 5.0, 2.0, 5.0]),
            Err(Error::Ties { indices: vec![1, 3] })
        );
        let a = ranks_with(&[1.0, 5.0, 2.0, 5.0], TiePolicy::Random(7)).unwrap();
        let b = ranks_with(&[1.0, 5.0, 2.0, 5.0], TiePolicy::Random(7)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.ranks()[0], 1);
        assert_eq!(a.ranks()[2], 2);
        assert_eq!(a.ranks()[1] + a.ranks()[3], 7);
    }

    #[test]
    fn discordance_examples() {
        let up = RankSeries::from_ranks(vec![1, 2, 3, 4, 5]).unwrap();
        let down = RankSeries::from_ranks(vec![5, 4, 3, 2, 1]).unwrap();
        assert_eq!(discordances(&up, 1).unwrap(), 0);
        // Reversing a series keeps every lagged pair concordant.
        assert_eq!(discordances(&down, 1).unwrap(), 0);
        let zigzag = RankSeries::from_ranks(vec![1, 3, 2]).unwrap();
        assert_eq!(discordances(&zigzag, 1).unwrap(), 1);
        let r = RankSeries::from_ranks(vec![2, 5, 1, 4, 3]).unwrap();
        // Lagged pairs (5,2), (1,5), (4,1), (3,4): only the first and third are concordant.
        assert_eq!(discordances(&r, 1).unwrap(), 5);
        assert!(discordances(&up, 4).is_err());
        assert!(discordances(&up, 0).is_err());
    }

    #[test]
    fn kendall_extremes() {
        let up = RankSeries::from_ranks((1..=10).collect()).unwrap();
        let down = RankSeries::from_ranks((1..=10).rev().collect()).unwrap();
        let zigzag = RankSeries::from_ranks(vec![1, 3, 2]).unwrap();
        assert_eq!(raw_statistic(&up, 1, &Statistic::Kendall).unwrap(), 1.0);
        assert_eq!(raw_statistic(&down, 1, &Statistic::Kendall).unwrap(), 1.0);
        assert_eq!(raw_statistic(&zigzag, 1, &Statistic::Kendall).unwrap(), -1.0);
    }

    #[test]
    fn wilcoxon_identity_example() {
        // (1/4) sum_{t=2}^{5} (t/6 - 1/2)((t-1)/6 - 1/2) = (1/4)(2/36 + 0 + 0 + 2/36)
        let r = RankSeries::from_ranks(vec![1, 2, 3, 4, 5]).unwrap();
        let w = Statistic::Product(Score::wilcoxon(), Score::wilcoxon());
        assert_abs_diff_eq!(raw_statistic(&r, 1, &w).unwrap(), 1.0 / 36.0, epsilon = 1e-15);
        // (2 + 6 + 12 + 20) / 4
        assert_eq!(raw_statistic(&r, 1, &Statistic::Spearman).unwrap(), 10.0);
    }

    #[test]
    fn heap_visits_every_permutation_once() {
        let mut seen = std::collections::HashSet::new();
        for_each_permutation(5, |p| {
            assert!(seen.insert(p.to_vec()));
        });
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn product_mean_matches_closed_form() {
        // E[a_{R_t} b_{R_s}] = (sum a sum b - sum ab) / (n (n - 1)) for t != s.
        for (n, k) in [(6, 1), (8, 3)] {
            let stat = Statistic::van_der_waerden();
            let m = permutation_moments(n, k, &stat).unwrap();
            let a: Vec<f64> = (1..=n)
                .map(|i| Score::van_der_waerden().eval(i as f64 / (n + 1) as f64).unwrap())
                .collect();
            let s: f64 = a.iter().sum();
            let s2: f64 = a.iter().map(|v| v * v).sum();
            let expected = (s * s - s2) / (n * (n - 1)) as f64;
            assert_abs_diff_eq!(m.mean, expected, epsilon = 1e-14);
            assert_eq!(m.method, MomentMethod::ExactEnumeration);
        }
    }

    #[test]
    fn parse_series_formats() {
        assert_eq!(parse_series("x\n1.5\n-2\n\n3e1\n").unwrap(), vec![1.5, -2.0, 30.0]);
        assert_eq!(parse_series("1,a\n2,b\n").unwrap(), vec![1.0, 2.0]);
        assert!(parse_series("1\nfoo\n").is_err());
    }

    #[test]
    fn tie_policy_parsing() {
        assert_eq!("random:42".parse::<TiePolicy>().unwrap(), TiePolicy::Random(42));
        assert_eq!("reject".parse::<TiePolicy>().unwrap(), TiePolicy::Reject);
        assert!("random:x".parse::<TiePolicy>().is_err());
    }
}
