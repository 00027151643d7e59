//! Calendar-month mean returns with one-sample t-tests, and Pearson
//! correlation matrices with significance flags.

use serde::Serialize;

use crate::calendar::{to_returns, ReturnSeries, SeriesPanel};
use crate::error::{Error, Result};
use crate::student_t;

pub const DEFAULT_ALPHA: f64 = 0.05;

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must be in (0, 1), got {alpha}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTest {
    pub t_stat: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Two-sided one-sample t-test of `sample` against `mu0`, using the
/// `n - 1` denominator standard deviation.
pub fn one_sample_ttest(sample: &[f64], mu0: f64) -> Result<TTest> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::InsufficientSample { needed: 2, got: n });
    }
    if let Some(i) = sample.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if sample.iter().all(|&v| v == sample[0]) {
        return Err(Error::ConstantSample(None));
    }
    let nf = n as f64;
    let mean = sample.iter().sum::<f64>() / nf;
    let ss: f64 = sample.iter().map(|v| (v - mean) * (v - mean)).sum();
    let sd = (ss / (nf - 1.0)).sqrt();
    let t_stat = (mean - mu0) / (sd / nf.sqrt());
    let df = n - 1;
    Ok(TTest {
        t_stat,
        df,
        p_value: student_t::two_sided_p(t_stat, df as f64),
    })
}

/// Mean return of one calendar month (or of the whole sample) with its test
/// against zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanReturnTest {
    pub mean: f64,
    pub n: usize,
    pub t_stat: f64,
    pub p_value: f64,
    pub significant: bool,
}

impl MeanReturnTest {
    fn from_sample(sample: &[f64], alpha: f64) -> Result<Self> {
        let test = one_sample_ttest(sample, 0.0)?;
        Ok(MeanReturnTest {
            mean: sample.iter().sum::<f64>() / sample.len() as f64,
            n: sample.len(),
            t_stat: test.t_stat,
            p_value: test.p_value,
            significant: test.p_value < alpha,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonthlyReturnSummary {
    pub currency: String,
    pub alpha: f64,
    /// Index 0 is January.
    pub per_month: Vec<MeanReturnTest>,
    pub overall: MeanReturnTest,
}

/// Groups returns by the calendar month of their stamp and tests each
/// group's mean against zero.
pub fn monthly_mean_returns(returns: &ReturnSeries, alpha: f64) -> Result<MonthlyReturnSummary> {
    check_alpha(alpha)?;
    if returns.is_empty() {
        return Err(Error::InsufficientSample { needed: 2, got: 0 });
    }
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); 12];
    for p in returns.points() {
        buckets[p.stamp.month() as usize - 1].push(p.ret);
    }
    let per_month = buckets
        .iter()
        .enumerate()
        .map(|(i, bucket)| {
            let month = i as u32 + 1;
            if bucket.len() < 2 {
                return Err(Error::SparseMonth {
                    month,
                    got: bucket.len(),
                });
            }
            MeanReturnTest::from_sample(bucket, alpha).map_err(|e| match e {
                Error::ConstantSample(_) => Error::ConstantSample(Some(format!("month {month}"))),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let overall = MeanReturnTest::from_sample(&returns.values(), alpha).map_err(|e| match e {
        Error::ConstantSample(_) => Error::ConstantSample(Some("all months".into())),
        other => other,
    })?;
    Ok(MonthlyReturnSummary {
        currency: returns.currency().to_string(),
        alpha,
        per_month,
        overall,
    })
}

/// Product-moment correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientSample { needed: 3, got: n });
    }
    let is_constant = |v: &[f64]| v.iter().all(|&a| a == v[0]);
    if is_constant(x) || is_constant(y) {
        return Err(Error::ConstantSample(None));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationTest {
    /// Infinite when `|r| = 1`.
    pub t_stat: f64,
    pub p_value: f64,
    pub significant: bool,
}

/// t-transform `r * sqrt((n - 2) / (1 - r^2))` on `n - 2` degrees of freedom.
pub fn correlation_significance(r: f64, n: usize, alpha: f64) -> Result<CorrelationTest> {
    check_alpha(alpha)?;
    if n < 3 {
        return Err(Error::InsufficientSample { needed: 3, got: n });
    }
    if r.is_nan() || r.abs() > 1.0 {
        return Err(Error::InvalidParameter(format!("correlation {r} outside [-1, 1]")));
    }
    let (t_stat, p_value) = if r.abs() == 1.0 {
        (r.signum() * f64::INFINITY, 0.0)
    } else {
        let df = (n - 2) as f64;
        let t = r * (df / (1.0 - r * r)).sqrt();
        (t, student_t::two_sided_p(t, df))
    };
    Ok(CorrelationTest {
        t_stat,
        p_value,
        significant: p_value < alpha,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationBasis {
    Prices,
    Returns,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub basis: CorrelationBasis,
    pub labels: Vec<String>,
    pub n: usize,
    pub alpha: f64,
    pub values: Vec<Vec<f64>>,
    pub p_values: Vec<Vec<f64>>,
    pub significance: Vec<Vec<bool>>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.values[i][j])
    }
}

/// Pairwise Pearson correlations across the panel's common span.
pub fn correlation_matrix(panel: &SeriesPanel, basis: CorrelationBasis, alpha: f64) -> Result<CorrelationMatrix> {
    check_alpha(alpha)?;
    if panel.len() < 2 {
        return Err(Error::InsufficientSample {
            needed: 2,
            got: panel.len(),
        });
    }
    let columns: Vec<Vec<f64>> = match basis {
        CorrelationBasis::Prices => panel.series().iter().map(|s| s.prices()).collect(),
        CorrelationBasis::Returns => panel
            .series()
            .iter()
            .map(|s| to_returns(s).map(|r| r.values()))
            .collect::<Result<_>>()?,
    };
    let k = columns.len();
    let n = columns[0].len();
    let mut values = vec![vec![1.0; k]; k];
    let mut p_values = vec![vec![0.0; k]; k];
    let mut significance = vec![vec![true; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let r = pearson(&columns[i], &columns[j])?;
            let test = correlation_significance(r, n, alpha)?;
            values[i][j] = r;
            values[j][i] = r;
            p_values[i][j] = test.p_value;
            p_values[j][i] = test.p_value;
            significance[i][j] = test.significant;
            significance[j][i] = test.significant;
        }
    }
    Ok(CorrelationMatrix {
        basis,
        labels: panel.currencies().into_iter().map(String::from).collect(),
        n,
        alpha,
        values,
        p_values,
        significance,
    })
}
