//! Annual time-series container, differencing and moment statistics.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Equally spaced observations indexed by consecutive integers (years).
///
/// Only the first time index is stored; the index of observation `i` is
/// `start + i`. Values are guaranteed finite and the series is never empty.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    start: i64,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(start: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData {
                what: "time series",
                needed: 1,
                got: 0,
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { start, values })
    }

    /// Builds a series from explicit `(time, value)` columns, checking that
    /// the times increase by exactly one at every step.
    pub fn from_pairs(times: &[i64], values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::Dimension {
                expected: times.len(),
                got: values.len(),
            });
        }
        if let Some(index) = times.windows(2).position(|w| w[1] != w[0] + 1) {
            return Err(Error::IrregularTimes { index: index + 1 });
        }
        let start = times.first().copied().unwrap_or(0);
        Self::new(start, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn times(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.values.len()).map(move |i| self.start + i as i64)
    }

    /// Applies `f` to every value, keeping the time index.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.start, self.values.iter().map(|&v| f(v)).collect())
    }

    /// The sub-series with the first `k` observations dropped.
    pub fn skip(&self, k: usize) -> Result<Self> {
        if k >= self.len() {
            return Err(Error::InsufficientData {
                what: "skip",
                needed: k + 1,
                got: self.len(),
            });
        }
        Self::new(self.start + k as i64, self.values[k..].to_vec())
    }

    /// `d`-th order differences `(1 − B)^d x`, indexed from `times[d]`.
    pub fn difference(&self, d: usize) -> Result<Self> {
        if self.len() <= d {
            return Err(Error::InsufficientData {
                what: "differencing",
                needed: d + 1,
                got: self.len(),
            });
        }
        Ok(Self {
            start: self.start + d as i64,
            values: difference_values(&self.values, d),
        })
    }

    /// Inverse of [`difference`](Self::difference): `initial` holds the
    /// first `d` levels of the original series.
    pub fn integrate(&self, initial: &[f64]) -> Result<Self> {
        let values = integrate_values(&self.values, initial)?;
        Self::new(self.start - initial.len() as i64, values)
    }

    pub fn moments(&self) -> Result<MomentSummary> {
        MomentSummary::from_values(&self.values)
    }
}

pub fn difference_values(values: &[f64], d: usize) -> Vec<f64> {
    let mut out = values.to_vec();
    for _ in 0..d {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    out
}

/// Rebuilds levels from `d`-th differences and the first `d` levels.
///
/// The result has `diffed.len() + d` values. `d` is `initial.len()` and
/// must be at least one.
pub fn integrate_values(diffed: &[f64], initial: &[f64]) -> Result<Vec<f64>> {
    let d = initial.len();
    if d == 0 {
        return Err(Error::Dimension { expected: 1, got: 0 });
    }
    // level k holds Δ^k x from index k onwards
    let mut current = diffed.to_vec();
    for k in (0..d).rev() {
        let mut next = difference_values(initial, k);
        let mut last = *next.last().expect("d - k >= 1 initial differences");
        next.reserve(current.len());
        // entries of Δ^{k+1} before index d are already implied by `initial`
        for &step in &current[d - (k + 1)..] {
            last += step;
            next.push(last);
        }
        current = next;
    }
    Ok(current)
}

/// Central-moment summary with denominator `n`.
///
/// Skewness and kurtosis are `None` when the sample is too short (fewer
/// than 3 and 4 values respectively) or has zero variance. Kurtosis is
/// the Pearson (non-excess) value, 3 for a normal distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
}

impl MomentSummary {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::InsufficientData {
                what: "moments",
                needed: 2,
                got: n,
            });
        }
        let nf = n as f64;
        let mean = values.iter().sum::<f64>() / nf;
        let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
        for &v in values {
            let e = v - mean;
            let e2 = e * e;
            m2 += e2;
            m3 += e2 * e;
            m4 += e2 * e2;
        }
        m2 /= nf;
        m3 /= nf;
        m4 /= nf;
        // a spread below round-off of the mean counts as constant
        let tiny = f64::EPSILON * mean.abs();
        let constant = m2 <= tiny * tiny;
        let skewness = (n >= 3 && !constant).then(|| m3 / libm::pow(m2, 1.5));
        let kurtosis = (n >= 4 && !constant).then(|| m4 / (m2 * m2));
        Ok(Self {
            n,
            mean,
            variance: if constant { 0.0 } else { m2 },
            skewness,
            kurtosis,
        })
    }

    pub fn std_dev(&self) -> f64 {
        libm::sqrt(self.variance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn series(values: &[f64]) -> TimeSeries {
        TimeSeries::new(1880, values.to_vec()).unwrap()
    }

    #[test]
    fn first_and_second_differences() {
        let s = series(&[1.0, 3.0, 6.0, 10.0]);
        let d1 = s.difference(1).unwrap();
        assert_eq!(d1.values(), &[2.0, 3.0, 4.0]);
        assert_eq!(d1.start(), 1881);
        let d2 = s.difference(2).unwrap();
        assert_eq!(d2.values(), &[1.0, 1.0]);
        assert_eq!(d2.start(), 1882);
        assert_eq!(s.difference(0).unwrap(), s);
    }

    #[test]
    fn differencing_needs_more_than_d_points() {
        let s = series(&[1.0, 2.0]);
        assert!(matches!(s.difference(2), Err(Error::InsufficientData { .. })));
    }

    #[test]
    fn integrate_inverts_difference() {
        let back = integrate_values(&[2.0, 3.0, 4.0], &[1.0]).unwrap();
        assert_eq!(back, vec![1.0, 3.0, 6.0, 10.0]);
        assert_eq!(integrate_values(&[], &[5.0]).unwrap(), vec![5.0]);

        let s = series(&[0.3, -1.2, 2.5, 4.0, 3.5, 7.25]);
        let d = s.difference(3).unwrap();
        let again = d.integrate(&s.values()[..3]).unwrap();
        assert_eq!(again.start(), s.start());
        for (a, b) in again.values().iter().zip(s.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn integrate_rejects_empty_initial() {
        assert!(matches!(integrate_values(&[1.0], &[]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(TimeSeries::new(0, vec![]).is_err());
        assert!(matches!(
            TimeSeries::new(0, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(matches!(
            TimeSeries::from_pairs(&[1950, 1951, 1951], vec![0.0; 3]),
            Err(Error::IrregularTimes { index: 2 })
        ));
        assert!(TimeSeries::from_pairs(&[1950, 1951, 1953], vec![0.0; 3]).is_err());
    }

    #[test]
    fn symmetric_moments() {
        let m = series(&[1.0, 2.0, 3.0, 4.0, 5.0]).moments().unwrap();
        assert_eq!(m.mean, 3.0);
        assert_eq!(m.variance, 2.0);
        assert_eq!(m.skewness, Some(0.0));
        // m4 = (16 + 1 + 0 + 1 + 16) / 5 = 6.8; 6.8 / 4
        assert!((m.kurtosis.unwrap() - 1.7).abs() < 1e-15);
    }

    #[test]
    fn constant_series_has_undefined_shape() {
        let m = series(&[0.7; 4]).moments().unwrap();
        assert_eq!(m.variance, 0.0);
        assert_eq!(m.skewness, None);
        assert_eq!(m.kurtosis, None);
        assert!(series(&[1.0]).moments().is_err());
        let short = series(&[1.0, 2.0, 4.0]).moments().unwrap();
        assert!(short.skewness.is_some());
        assert!(short.kurtosis.is_none());
    }
}
