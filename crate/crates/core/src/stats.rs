//! Ensemble estimates, parameter sweeps, and the finite-size
//! crossing-point estimator shared by the percolation and contact
//! critical-value protocols.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::ReplicaPlan;

/// A Monte Carlo mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub replicas: u64,
}

impl Estimate {
    /// Mean and standard error (sample stdev / sqrt(n)) of a sample.
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        assert!(n > 0);
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std_error = if n > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Estimate {
            mean,
            std_error,
            replicas: n as u64,
        }
    }

    /// Estimate from indicator outcomes (success count out of n).
    pub fn from_indicator(successes: u64, replicas: u64) -> Self {
        let n = replicas as f64;
        let mean = successes as f64 / n;
        // sample stdev of a 0/1 sample, with Bessel correction
        let std_error = if replicas > 1 {
            (mean * (1.0 - mean) * n / (n - 1.0) / n).sqrt()
        } else {
            0.0
        };
        Estimate {
            mean,
            std_error,
            replicas,
        }
    }
}

/// Estimates along a strictly increasing parameter grid.
#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub grid: Vec<f64>,
    pub estimates: Vec<Estimate>,
    pub plan: ReplicaPlan,
}

impl SweepResult {
    pub fn new(grid: Vec<f64>, estimates: Vec<Estimate>, plan: ReplicaPlan) -> Result<Self> {
        if grid.len() != estimates.len() {
            return Err(Error::InvalidGrid(format!(
                "{} grid points but {} estimates",
                grid.len(),
                estimates.len()
            )));
        }
        validate_grid(&grid)?;
        Ok(SweepResult {
            grid,
            estimates,
            plan,
        })
    }
}

pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid("non-finite grid point".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// A critical-parameter estimate from crossings of finite-size curves.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalEstimate {
    pub estimate: f64,
    /// Half-spread of the pairwise crossings; floored at half the grid step
    /// when only one pair of sizes is available.
    pub uncertainty: f64,
    /// Crossing location per successive size pair, in size order.
    pub crossings: Vec<f64>,
    /// The per-size curves the crossings came from.
    pub curves: Vec<SizedCurve>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizedCurve {
    pub size: usize,
    pub sweep: SweepResult,
}

/// Locate where the curve of the larger system overtakes the curve of the
/// smaller one.
///
/// `d = hi - lo` dips negative below the transition and recovers through
/// zero near it. The dip must be resolved (3 combined standard errors);
/// the crossing is the first sign change after the dip, linearly
/// interpolated. Curves that never dip or never recover are reported as a
/// diagnostic failure.
pub fn intersect_size_curves(grid: &[f64], lo: &SweepResult, hi: &SweepResult) -> Result<f64> {
    let d: Vec<f64> = hi
        .estimates
        .iter()
        .zip(&lo.estimates)
        .map(|(h, l)| h.mean - l.mean)
        .collect();
    let se: Vec<f64> = hi
        .estimates
        .iter()
        .zip(&lo.estimates)
        .map(|(h, l)| (h.std_error.powi(2) + l.std_error.powi(2)).sqrt())
        .collect();

    let imin = (0..d.len())
        .min_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap())
        .unwrap();
    if !(d[imin] < 0.0 && d[imin] <= -3.0 * se[imin]) {
        return Err(Error::NoCrossing(format!(
            "curves never separate: min difference {:.4} at parameter {:.4} is not 3 sigma below zero",
            d[imin], grid[imin]
        )));
    }
    for j in imin + 1..d.len() {
        if d[j] > 0.0 {
            let (x0, x1) = (grid[j - 1], grid[j]);
            let (y0, y1) = (d[j - 1], d[j]);
            return Ok(x0 + (x1 - x0) * (0.0 - y0) / (y1 - y0));
        }
    }
    Err(Error::NoCrossing(format!(
        "curves separate at parameter {:.4} but never re-cross within the grid",
        grid[imin]
    )))
}

/// Combine successive-size crossings into an estimate with a spread.
pub fn critical_from_crossings(
    grid: &[f64],
    crossings: Vec<f64>,
    curves: Vec<SizedCurve>,
) -> CriticalEstimate {
    let lo = crossings.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = crossings.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let estimate = crossings.iter().sum::<f64>() / crossings.len() as f64;
    let half_step = if grid.len() > 1 {
        (grid[1] - grid[0]) / 2.0
    } else {
        0.0
    };
    let uncertainty = ((hi - lo) / 2.0).max(half_step);
    CriticalEstimate {
        estimate,
        uncertainty,
        crossings,
        curves,
    }
}

/// Percentile by linear interpolation on the sorted sample (q in [0,1]).
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep(grid: &[f64], means: &[f64], se: f64) -> SweepResult {
        let est = means
            .iter()
            .map(|&m| Estimate {
                mean: m,
                std_error: se,
                replicas: 1000,
            })
            .collect();
        SweepResult::new(grid.to_vec(), est, ReplicaPlan::new(0, 1000)).unwrap()
    }

    #[test]
    fn crossing_is_interpolated() {
        let grid = [0.0, 1.0, 2.0, 3.0];
        let lo = sweep(&grid, &[0.5, 0.6, 0.7, 0.8], 0.01);
        let hi = sweep(&grid, &[0.1, 0.4, 0.75, 0.95], 0.01);
        let x = intersect_size_curves(&grid, &lo, &hi).unwrap();
        // d = [-0.4, -0.2, 0.05, 0.15]; zero between 1 and 2 at 1 + 0.2/0.25
        assert!((x - 1.8).abs() < 1e-12);
    }

    #[test]
    fn unresolved_dip_is_diagnostic() {
        let grid = [0.0, 1.0, 2.0];
        let lo = sweep(&grid, &[0.99, 0.99, 0.99], 0.01);
        let hi = sweep(&grid, &[0.985, 0.99, 0.995], 0.01);
        let err = intersect_size_curves(&grid, &lo, &hi).unwrap_err();
        assert!(err.is_diagnostic());
    }

    #[test]
    fn missing_recovery_is_diagnostic() {
        let grid = [0.0, 1.0, 2.0];
        let lo = sweep(&grid, &[0.5, 0.6, 0.7], 0.001);
        let hi = sweep(&grid, &[0.1, 0.2, 0.3], 0.001);
        assert!(intersect_size_curves(&grid, &lo, &hi).is_err());
    }

    #[test]
    fn indicator_estimate_matches_sample_path() {
        let samples: Vec<f64> = (0..10).map(|i| if i < 3 { 1.0 } else { 0.0 }).collect();
        let a = Estimate::from_samples(&samples);
        let b = Estimate::from_indicator(3, 10);
        assert!((a.mean - b.mean).abs() < 1e-15);
        assert!((a.std_error - b.std_error).abs() < 1e-15);
    }

    #[test]
    fn percentile_interpolates() {
        let s = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(percentile(&s, 0.0), 1.0);
        assert_eq!(percentile(&s, 1.0), 5.0);
        assert_eq!(percentile(&s, 0.5), 3.0);
        assert!((percentile(&s, 0.05) - 1.2).abs() < 1e-12);
    }
}
