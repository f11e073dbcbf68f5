//! Monte Carlo checks of the asymptotic efficiencies at finite sample sizes.
//!
//! Replication `i` of a run with seed `s` draws from ChaCha8 stream `i` of
//! seed `s`, so results do not depend on thread count or scheduling, and a
//! replication of size `n + 1` extends the one of size `n` (common random
//! numbers across sample sizes and tests).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::densities::Density;
use crate::error::{domain, Error, Result};
use crate::scores::Score;
use crate::serial_stats::{autocorr, ranks, Statistic};
use crate::special::norm_quantile_upper;

/// Default number of replications per power estimate in [`empirical_are`].
pub const DEFAULT_REPS: usize = 4000;
/// Sample-size cap for [`empirical_are`].
pub const MAX_SAMPLE_SIZE: usize = 100_000;
/// Burn-in discarded before each simulated autoregressive series.
pub const AR_BURN_IN: usize = 200;

/// A Monte Carlo rejection rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerEstimate {
    pub test: String,
    pub n: usize,
    /// Shift (two-sample) or autoregressive coefficient (serial).
    #[serde(rename = "alt")]
    pub alternative: f64,
    pub level: f64,
    pub power: f64,
    pub mc_se: f64,
    pub reps: usize,
    pub seed: u64,
}

impl PowerEstimate {
    fn new(test: String, n: usize, alternative: f64, level: f64, rejections: usize, reps: usize, seed: u64) -> Self {
        let power = rejections as f64 / reps as f64;
        PowerEstimate {
            test,
            n,
            alternative,
            level,
            power,
            mc_se: (power * (1.0 - power) / reps as f64).sqrt(),
            reps,
            seed,
        }
    }
}

fn stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("level {level} is not in (0, 1)")))
    }
}

/// Two-sample linear rank test: `S = sum_{second sample} J(R_i / (N+1))`,
/// standardized by its exact permutation mean and variance and rejected for
/// large values.
#[derive(Debug, Clone)]
pub struct TwoSampleTest {
    scores: Vec<f64>,
    n1: usize,
    n2: usize,
    mean: f64,
    sd: f64,
}

impl TwoSampleTest {
    pub fn new(j: &Score, n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(domain("both samples must be nonempty"));
        }
        let big_n = n1 + n2;
        let scores = (1..=big_n)
            .map(|i| j.eval(i as f64 / (big_n + 1) as f64))
            .collect::<Result<Vec<f64>>>()?;
        let abar = scores.iter().sum::<f64>() / big_n as f64;
        let ss: f64 = scores.iter().map(|a| (a - abar) * (a - abar)).sum();
        let var = (n1 * n2) as f64 / (big_n * (big_n - 1)) as f64 * ss;
        Ok(TwoSampleTest {
            scores,
            n1,
            n2,
            mean: n2 as f64 * abar,
            sd: var.sqrt(),
        })
    }

    /// Permutation mean and standard deviation of `S`.
    pub fn moments(&self) -> (f64, f64) {
        (self.mean, self.sd)
    }

    /// Standardized statistic for samples `x` (first) and `y` (second).
    pub fn standardized(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!((x.len(), y.len()), (self.n1, self.n2));
        let mut pooled: Vec<(f64, bool)> = x.iter().map(|&v| (v, false)).collect();
        pooled.extend(y.iter().map(|&v| (v, true)));
        pooled.sort_by(|a, b| a.0.total_cmp(&b.0));
        let s: f64 = pooled
            .iter()
            .zip(&self.scores)
            .filter(|(p, _)| p.1)
            .map(|(_, a)| a)
            .sum();
        (s - self.mean) / self.sd
    }
}

fn rejections(reps: usize, reject: impl Fn(usize) -> bool + Sync) -> usize {
    (0..reps).into_par_iter().filter(|&i| reject(i)).count()
}

/// Power of the one-sided two-sample rank test with scores `j`, samples of
/// size `n` each, under `f` against a location shift `delta` of the second
/// sample.
pub fn two_sample_power(
    j: &Score,
    f: &Density,
    delta: f64,
    n: usize,
    level: f64,
    reps: usize,
    seed: u64,
) -> Result<PowerEstimate> {
    check_level(level)?;
    if reps == 0 {
        return Err(domain("at least one replication is needed"));
    }
    let test = TwoSampleTest::new(j, n, n)?;
    let crit = norm_quantile_upper(level);
    let hits = rejections(reps, |i| {
        let mut rng = stream(seed, i);
        let x = f.sample_with(&mut rng, n);
        let y: Vec<f64> = f.sample_with(&mut rng, n).into_iter().map(|v| v + delta).collect();
        test.standardized(&x, &y) > crit
    });
    Ok(PowerEstimate::new(j.label(), n, delta, level, hits, reps, seed))
}

/// Smallest (interpolated) per-sample size at which the test with scores `j`
/// reaches `target` power.
fn required_n(j: &Score, f: &Density, delta: f64, level: f64, target: f64, reps: usize, seed: u64) -> Result<f64> {
    let power = |n: usize| two_sample_power(j, f, delta, n, level, reps, seed).map(|p| p.power);
    let mut lo = 1;
    let mut p_lo = power(lo)?;
    if p_lo >= target {
        return Ok(1.0);
    }
    let mut hi = 2;
    let mut p_hi = power(hi)?;
    while p_hi < target {
        if hi >= MAX_SAMPLE_SIZE {
            return Err(Error::BudgetExceeded(MAX_SAMPLE_SIZE));
        }
        lo = hi;
        p_lo = p_hi;
        hi = (2 * hi).min(MAX_SAMPLE_SIZE);
        p_hi = power(hi)?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let p = power(mid)?;
        if p >= target {
            hi = mid;
            p_hi = p;
        } else {
            lo = mid;
            p_lo = p;
        }
    }
    // Linear interpolation between the last size below and the first above.
    Ok(lo as f64 + (target - p_lo) / (p_hi - p_lo))
}

/// Sample-size ratio `n2 / n1`, where `n_i` is the size at which the test
/// with scores `j_i` reaches `target_power`; an empirical counterpart of the
/// efficiency of `j1` relative to `j2`. Uses [`DEFAULT_REPS`] replications.
pub fn empirical_are(
    j1: &Score,
    j2: &Score,
    f: &Density,
    delta: f64,
    level: f64,
    target_power: f64,
    seed: u64,
) -> Result<f64> {
    empirical_are_with(j1, j2, f, delta, level, target_power, seed, DEFAULT_REPS)
}

/// [`empirical_are`] with an explicit replication count.
#[allow(clippy::too_many_arguments)]
pub fn empirical_are_with(
    j1: &Score,
    j2: &Score,
    f: &Density,
    delta: f64,
    level: f64,
    target_power: f64,
    seed: u64,
    reps: usize,
) -> Result<f64> {
    check_level(level)?;
    if !(target_power > level && target_power < 1.0) {
        return Err(domain(format!(
            "target power {target_power} must lie strictly between the level {level} and 1"
        )));
    }
    let n1 = required_n(j1, f, delta, level, target_power, reps, seed)?;
    let n2 = required_n(j2, f, delta, level, target_power, reps, seed)?;
    Ok(n2 / n1)
}

/// Simulates `n` observations of `X_t = rho X_{t-1} + e_t` with `e_t ~ f`.
pub fn ar1_series(f: &Density, rho: f64, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let e = f.sample_with(rng, n + AR_BURN_IN);
    let mut x = 0.0;
    let mut out = Vec::with_capacity(n);
    for (t, et) in e.into_iter().enumerate() {
        x = rho * x + et;
        if t >= AR_BURN_IN {
            out.push(x);
        }
    }
    out
}

/// Power of the one-sided lag-1 rank autocorrelation test against an AR(1)
/// alternative with coefficient `rho`. The test rejects for large
/// standardized values when `rho >= 0` and for small ones when `rho < 0`.
pub fn ar1_serial_power(
    stat: &Statistic,
    f: &Density,
    rho: f64,
    n: usize,
    level: f64,
    reps: usize,
    seed: u64,
) -> Result<PowerEstimate> {
    check_level(level)?;
    if !(rho.abs() < 1.0) {
        return Err(domain(format!("AR coefficient {rho} is not in (-1, 1)")));
    }
    if !f.flags().finite_variance {
        return Err(Error::Precondition(format!("{f} has infinite variance")));
    }
    if reps == 0 {
        return Err(domain("at least one replication is needed"));
    }
    // Warm the moment cache once instead of racing in every worker.
    crate::serial_stats::permutation_moments(n, 1, stat)?;
    let crit = norm_quantile_upper(level);
    let sign = if rho < 0.0 { -1.0 } else { 1.0 };
    let outcomes: Vec<Result<bool>> = (0..reps)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let x = ar1_series(f, rho, n, &mut rng);
            let z = autocorr(&ranks(&x)?, 1, stat)?.standardized;
            Ok(sign * z > crit)
        })
        .collect();
    let mut hits = 0;
    for o in outcomes {
        hits += usize::from(o?);
    }
    Ok(PowerEstimate::new(stat.label(), n, rho, level, hits, reps, seed))
}

/// A batch of power simulations, read from TOML.
///
/// ```toml
/// seed = 1
/// reps = 2000
/// level = 0.05
///
/// [[two_sample]]
/// score = "wilcoxon"
/// density = "gaussian"
/// shift = 0.3
/// n = 50
///
/// [[serial]]
/// statistic = "vdw"
/// density = "gaussian"
/// rho = 0.15
/// n = 200
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub seed: u64,
    pub reps: usize,
    pub level: f64,
    #[serde(default)]
    pub two_sample: Vec<TwoSampleJob>,
    #[serde(default)]
    pub serial: Vec<SerialJob>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TwoSampleJob {
    pub score: String,
    pub density: String,
    pub shift: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SerialJob {
    pub statistic: String,
    pub density: String,
    pub rho: f64,
    pub n: usize,
}

impl SimulationConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Runs every job in file order.
    pub fn run(&self) -> Result<Vec<PowerEstimate>> {
        let mut out = Vec::new();
        for job in &self.two_sample {
            let j: Score = job.score.parse()?;
            let f: Density = job.density.parse()?;
            out.push(two_sample_power(&j, &f, job.shift, job.n, self.level, self.reps, self.seed)?);
        }
        for job in &self.serial {
            let s: Statistic = job.statistic.parse()?;
            let f: Density = job.density.parse()?;
            out.push(ar1_serial_power(&s, &f, job.rho, job.n, self.level, self.reps, self.seed)?);
        }
        Ok(out)
    }
}

/// Writes estimates as CSV with columns `test,n,alt,level,power,mc_se,reps,seed`.
pub fn write_estimates<W: std::io::Write>(out: W, rows: &[PowerEstimate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    if rows.is_empty() {
        w.write_record(["test", "n", "alt", "level", "power", "mc_se", "reps", "seed"])
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use itertools::Itertools;

    #[test]
    fn permutation_moments_match_enumeration() {
        // All C(7, 3) splits of the ranks 1..=7 into a second sample of size 3.
        let j = Score::van_der_waerden();
        let t = TwoSampleTest::new(&j, 4, 3).unwrap();
        let vals: Vec<f64> = (0..7)
            .combinations(3)
            .map(|c| c.iter().map(|&i| t.scores[i]).sum())
            .collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64;
        let (m, sd) = t.moments();
        assert_abs_diff_eq!(m, mean, epsilon = 1e-14);
        assert_abs_diff_eq!(sd, var.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn deterministic_given_seed() {
        let g = Density::gaussian();
        let w = Score::wilcoxon();
        let a = two_sample_power(&w, &g, 0.3, 30, 0.05, 500, 9).unwrap();
        let b = two_sample_power(&w, &g, 0.3, 30, 0.05, 500, 9).unwrap();
        assert_eq!(a, b);
        assert_abs_diff_eq!(a.mc_se, (a.power * (1.0 - a.power) / 500.0).sqrt());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Density::gaussian();
        let w = Score::wilcoxon();
        assert!(two_sample_power(&w, &g, 0.0, 10, 1.5, 100, 1).is_err());
        assert!(empirical_are(&w, &w, &g, 0.4, 0.05, 0.01, 1).is_err());
        assert!(matches!(
            ar1_serial_power(&Statistic::Kendall, &Density::cauchy(), 0.1, 50, 0.05, 10, 1),
            Err(Error::Precondition(_))
        ));
        assert!(ar1_serial_power(&Statistic::Kendall, &g, 1.0, 50, 0.05, 10, 1).is_err());
    }

    #[test]
    fn identical_tests_have_unit_efficiency() {
        let g = Density::gaussian();
        let w = Score::wilcoxon();
        let r = empirical_are_with(&w, &w, &g, 0.5, 0.05, 0.5, 3, 400).unwrap();
        assert_eq!(r, 1.0);
    }

    #[test]
    fn config_round_trip() {
        let text = "seed = 4\nreps = 200\nlevel = 0.05\n\n[[two_sample]]\nscore = \"wilcoxon\"\ndensity = \"gaussian\"\nshift = 0.0\nn = 20\n\n[[serial]]\nstatistic = \"kendall\"\ndensity = \"powerexp:1\"\nrho = 0.0\nn = 30\n";
        let cfg = SimulationConfig::from_toml(text).unwrap();
        let rows = cfg.run().unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].test, "kendall");
        let mut buf = Vec::new();
        write_estimates(&mut buf, &rows).unwrap();
        let csv = String::from_utf8(buf).unwrap();
        assert!(csv.starts_with("test,n,alt,level,power,mc_se,reps,seed\n"));
        assert!(SimulationConfig::from_toml("seed = 1\nreps = 2\nlevel = 0.1\nbogus = 3\n").is_err());
    }
}
