//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use itertools::Itertools;
use rankare::serial_stats::{raw_statistic, RankSeries, Statistic};
use rankare::{Density, Score};

/// O(n^2) discordance count: pairs `s < t` (both at least `k`) whose order at
/// times `t, s` differs from their order at `t - k, s - k`.
pub fn brute_discordances(r: &[usize], k: usize) -> u64 {
    let mut d = 0;
    for s in k..r.len() {
        for t in s + 1..r.len() {
            let now = r[t] as i64 - r[s] as i64;
            let before = r[t - k] as i64 - r[s - k] as i64;
            if now * before < 0 {
                d += 1;
            }
        }
    }
    d
}

/// Mean of `raw` and standard deviation of `sqrt(n - k) * raw` over all `n!`
/// permutations, by direct listing.
pub fn direct_moments(n: usize, k: usize, stat: &Statistic) -> (f64, f64) {
    let vals: Vec<f64> = (1..=n)
        .permutations(n)
        .map(|p| raw_statistic(&RankSeries::from_ranks(p).unwrap(), k, stat).unwrap())
        .collect();
    let m = vals.iter().sum::<f64>() / vals.len() as f64;
    let var = vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / vals.len() as f64;
    (m, (var * (n - k) as f64).sqrt())
}

/// Densities with a smooth, everywhere finite location score.
pub fn smooth_densities() -> Vec<Density> {
    vec![
        Density::gaussian(),
        Density::cauchy(),
        Density::student(0.5).unwrap(),
        Density::student(3.0).unwrap(),
        Density::student(30.0).unwrap(),
        Density::power_exp(1.5).unwrap(),
        Density::power_exp(2.0).unwrap(),
        Density::power_exp(4.0).unwrap(),
    ]
}

/// Densities used to check the universal bounds, including the
/// nonsmooth ones.
pub fn bound_grid() -> Vec<Density> {
    let mut out = smooth_densities();
    for nu in [0.1, 1.0, 2.0, 6.0, 100.0] {
        out.push(Density::student(nu).unwrap());
    }
    for alpha in [0.3, 0.7, 1.0, 3.0, 10.0] {
        out.push(Density::power_exp(alpha).unwrap());
    }
    for (a, eps) in [(0.1, 0.0), (0.1, 0.5), (0.01, 1.0), (0.5, 2.0)] {
        out.push(Density::hodges_lehmann(a, eps).unwrap());
    }
    out
}

/// Densities with finite variance (for serial efficiencies).
pub fn finite_variance_grid() -> Vec<Density> {
    bound_grid().into_iter().filter(|f| f.flags().finite_variance).collect()
}

pub fn smooth_scores() -> Vec<Score> {
    vec![
        Score::wilcoxon(),
        Score::van_der_waerden(),
        Score::cauchy(),
        Score::student(0.5).unwrap(),
        Score::student(1.0).unwrap(),
        Score::student(4.0).unwrap(),
    ]
}

/// Five-point central difference of the score at `u`.
pub fn fd_deriv(j: &Score, u: f64, h: f64) -> f64 {
    let e = |x: f64| j.eval(x).unwrap();
    (8.0 * (e(u + h) - e(u - h)) - (e(u + 2.0 * h) - e(u - 2.0 * h))) / (12.0 * h)
}
