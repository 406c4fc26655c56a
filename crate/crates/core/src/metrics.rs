//! OSPA distance and Monte Carlo aggregation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cutoff `c` (meters) and order `p` of the OSPA metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OspaParams {
    pub cutoff: f64,
    pub order: f64,
}

impl Default for OspaParams {
    fn default() -> Self {
        Self { cutoff: 100.0, order: 1.0 }
    }
}

impl OspaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff > 0.0) || !(self.order >= 1.0) {
            return Err(Error::Config(format!("invalid OSPA parameters {self:?}")));
        }
        Ok(())
    }
}

/// Minimum-cost assignment of every row to a distinct column of a
/// `rows x cols` cost matrix (`rows <= cols`), by the shortest augmenting
/// path form of the Hungarian algorithm. Returns the column of each row.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let m = cost[0].len();
    assert!(n <= m, "more rows than columns");
    // 1-based potentials and matching; column 0 is a sentinel
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut row_of = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0; n];
    for j in 1..=m {
        if row_of[j] > 0 {
            out[row_of[j] - 1] = j - 1;
        }
    }
    out
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// OSPA distance between two finite sets of points.
pub fn ospa(x: &[Vec<f64>], y: &[Vec<f64>], params: &OspaParams) -> f64 {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let (m, n) = (small.len(), large.len());
    if n == 0 {
        return 0.0;
    }
    let c = params.cutoff;
    let p = params.order;
    let cost: Vec<Vec<f64>> =
        small.iter().map(|a| large.iter().map(|b| euclid(a, b).min(c).powf(p)).collect()).collect();
    let assign = hungarian(&cost);
    let matched: f64 = assign.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
    ((matched + c.powf(p) * (n - m) as f64) / n as f64).powf(1.0 / p)
}

/// Per-step summary across Monte Carlo runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepAggregate {
    pub mean_n_hat: f64,
    pub std_n_hat: f64,
    pub mean_ospa: f64,
    pub std_ospa: f64,
}

fn mean_std(v: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = v.clone().count() as f64;
    let mean = v.clone().sum::<f64>() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let var = v.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Sample mean and standard deviation (n - 1 denominator, 0 for a single
/// run) of `(n_hat, ospa)` at every step. All runs must have equal length.
pub fn aggregate(runs: &[Vec<(f64, f64)>]) -> Result<Vec<StepAggregate>> {
    let Some(first) = runs.first() else {
        return Ok(Vec::new());
    };
    let len = first.len();
    for (r, run) in runs.iter().enumerate() {
        if run.len() != len {
            return Err(Error::RaggedInput { run: r, expected: len, got: run.len() });
        }
    }
    Ok((0..len)
        .map(|t| {
            let (mean_n_hat, std_n_hat) = mean_std(runs.iter().map(|r| r[t].0));
            let (mean_ospa, std_ospa) = mean_std(runs.iter().map(|r| r[t].1));
            StepAggregate { mean_n_hat, std_n_hat, mean_ospa, std_ospa }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_sets_are_at_zero() {
        let x = vec![vec![1.0, 2.0], vec![5.0, -1.0]];
        assert_eq!(ospa(&x, &x, &OspaParams::default()), 0.0);
        assert_eq!(ospa(&[], &[], &OspaParams::default()), 0.0);
    }

    #[test]
    fn empty_against_nonempty_is_cutoff() {
        let y = vec![vec![0.0, 0.0], vec![3.0, 4.0]];
        assert_eq!(ospa(&[], &y, &OspaParams::default()), 100.0);
    }

    #[test]
    fn hand_example() {
        // one match at distance 5, one unmatched: (5 + 100) / 2
        let x = vec![vec![0.0, 0.0]];
        let y = vec![vec![3.0, 4.0], vec![500.0, 0.0]];
        assert!((ospa(&x, &y, &OspaParams::default()) - 52.5).abs() < 1e-12);
        let p2 = OspaParams { cutoff: 100.0, order: 2.0 };
        assert!((ospa(&x, &y, &p2) - ((25.0 + 10000.0) / 2.0f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn hungarian_finds_the_cross_assignment() {
        let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
        assert_eq!(hungarian(&cost), vec![1, 0, 2]);
        let rect = vec![vec![10.0, 1.0, 7.0], vec![1.0, 10.0, 7.0]];
        assert_eq!(hungarian(&rect), vec![1, 0]);
    }

    #[test]
    fn aggregate_basic() {
        let a = aggregate(&[vec![(2.0, 1.0)], vec![(4.0, 1.0)]]).unwrap();
        assert_eq!(a[0].mean_n_hat, 3.0);
        assert_eq!(a[0].std_ospa, 0.0);
        let single = aggregate(&[vec![(2.0, 7.0), (1.0, 3.0)]]).unwrap();
        assert_eq!(single[1].mean_ospa, 3.0);
        assert_eq!(single[1].std_n_hat, 0.0);
        assert!(matches!(aggregate(&[vec![(1.0, 1.0)], vec![]]), Err(Error::RaggedInput { run: 1, .. })));
    }

    #[test]
    fn invalid_params() {
        assert!(OspaParams { cutoff: 0.0, order: 1.0 }.validate().is_err());
        assert!(OspaParams { cutoff: 10.0, order: 0.5 }.validate().is_err());
    }
}
