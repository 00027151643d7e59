//! Classical seasonal decomposition.
//!
//! The pipeline is: centered moving average, detrended ratios (or
//! differences) grouped by season, per-season aggregation and normalization,
//! OLS trend on the deseasonalized values, then fitted values, irregular
//! component and accuracy metrics.
//!
//! Season slots are derived from the calendar: slot `k` holds the stamps whose
//! month ordinal is `k` modulo the period, so with period 12 slot 0 is January.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::calendar::{MonthStamp, PriceSeries, ReturnSeries};
use crate::error::{Error, Result};

pub const DEFAULT_PERIOD: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompositionModel {
    /// `value = trend + season + irregular`
    Additive,
    /// `value = trend * season * irregular`; values must be positive.
    Multiplicative,
}

impl DecompositionModel {
    /// Index value meaning "no seasonal effect".
    pub fn neutral(self) -> f64 {
        match self {
            DecompositionModel::Additive => 0.0,
            DecompositionModel::Multiplicative => 1.0,
        }
    }

    fn combine(self, a: f64, b: f64) -> f64 {
        match self {
            DecompositionModel::Additive => a + b,
            DecompositionModel::Multiplicative => a * b,
        }
    }

    fn remove(self, a: f64, b: f64) -> f64 {
        match self {
            DecompositionModel::Additive => a - b,
            DecompositionModel::Multiplicative => a / b,
        }
    }
}

impl fmt::Display for DecompositionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecompositionModel::Additive => "additive",
            DecompositionModel::Multiplicative => "multiplicative",
        })
    }
}

impl FromStr for DecompositionModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "additive" => Ok(DecompositionModel::Additive),
            "multiplicative" => Ok(DecompositionModel::Multiplicative),
            other => Err(Error::InvalidParameter(format!("unknown model `{other}`"))),
        }
    }
}

/// How the detrended values of one season are reduced to a raw index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregator {
    #[default]
    Median,
    Mean,
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregator::Median => "median",
            Aggregator::Mean => "mean",
        })
    }
}

impl FromStr for Aggregator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(Aggregator::Median),
            "mean" => Ok(Aggregator::Mean),
            other => Err(Error::InvalidParameter(format!("unknown aggregator `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecomposeOptions {
    pub model: DecompositionModel,
    pub period: usize,
    pub aggregator: Aggregator,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            model: DecompositionModel::Multiplicative,
            period: DEFAULT_PERIOD,
            aggregator: Aggregator::Median,
        }
    }
}

impl DecomposeOptions {
    pub fn new(model: DecompositionModel) -> Self {
        DecomposeOptions {
            model,
            ..Default::default()
        }
    }

    pub fn with_aggregator(mut self, aggregator: Aggregator) -> Self {
        self.aggregator = aggregator;
        self
    }

    pub fn with_period(mut self, period: usize) -> Self {
        self.period = period;
        self
    }
}

/// Season slot of a stamp for the given period.
pub fn season_slot(stamp: MonthStamp, period: usize) -> usize {
    stamp.ordinal().rem_euclid(period as i64) as usize
}

/// Normalized seasonal indices, one per season slot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeasonalIndices {
    pub model: DecompositionModel,
    /// With period 12, `values[0]` is January.
    pub values: Vec<f64>,
}

impl SeasonalIndices {
    /// Builds indices from raw per-slot values, normalizing them so that
    /// multiplicative indices average 1 and additive indices sum to 0.
    pub fn normalized(model: DecompositionModel, raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidParameter("no seasonal values".into()));
        }
        if let Some(i) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let mean = raw.iter().sum::<f64>() / raw.len() as f64;
        let values = match model {
            DecompositionModel::Multiplicative => {
                if mean <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "multiplicative indices must have a positive mean".into(),
                    ));
                }
                raw.iter().map(|v| v / mean).collect()
            }
            DecompositionModel::Additive => raw.iter().map(|v| v - mean).collect(),
        };
        Ok(SeasonalIndices { model, values })
    }

    /// Wraps already-normalized values as given, e.g. indices transcribed
    /// from a published table.
    pub fn from_values(model: DecompositionModel, values: Vec<f64>) -> Self {
        SeasonalIndices { model, values }
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn for_stamp(&self, stamp: MonthStamp) -> f64 {
        self.values[season_slot(stamp, self.period())]
    }
}

/// `value(t) = intercept + slope * t` with `t = 1` at the first observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendLine {
    pub intercept: f64,
    pub slope: f64,
}

impl TrendLine {
    pub fn at(&self, t: f64) -> f64 {
        self.intercept + self.slope * t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccuracyMetrics {
    /// Mean absolute percentage error, in percent. `None` when some actual
    /// value is zero.
    pub mape: Option<f64>,
    /// Mean absolute deviation, in input units.
    pub mad: f64,
    /// Mean squared deviation, in input units squared.
    pub msd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionResult {
    pub model: DecompositionModel,
    pub aggregator: Aggregator,
    pub stamps: Vec<MonthStamp>,
    pub actual: Vec<f64>,
    pub indices: SeasonalIndices,
    pub trend: TrendLine,
    pub deseasonalized: Vec<f64>,
    pub fitted: Vec<f64>,
    /// Ratio to fitted (multiplicative) or difference from fitted (additive).
    pub irregular: Vec<f64>,
    pub accuracy: AccuracyMetrics,
}

/// 2 x p centered moving average for even `period`, plain p-term centered
/// average for odd `period`. The first and last `period / 2` positions are
/// `None`.
pub fn centered_ma(values: &[f64], period: usize) -> Result<Vec<Option<f64>>> {
    if period < 2 {
        return Err(Error::InvalidParameter(format!(
            "period must be at least 2, got {period}"
        )));
    }
    if values.len() < period + 1 {
        return Err(Error::SeriesTooShort {
            needed: period + 1,
            got: values.len(),
        });
    }
    let n = values.len();
    let half = period / 2;
    let p = period as f64;
    let mut out = vec![None; n];
    for (t, slot) in out.iter_mut().enumerate().take(n - half).skip(half) {
        let ma = if period.is_multiple_of(2) {
            let inner: f64 = values[t + 1 - half..t + half].iter().sum();
            (0.5 * values[t - half] + inner + 0.5 * values[t + half]) / p
        } else {
            values[t - half..=t + half].iter().sum::<f64>() / p
        };
        *slot = Some(ma);
    }
    Ok(out)
}

fn check_inputs(stamps: &[MonthStamp], values: &[f64], model: DecompositionModel, period: usize) -> Result<()> {
    if period < 2 {
        return Err(Error::InvalidParameter(format!(
            "period must be at least 2, got {period}"
        )));
    }
    if stamps.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: stamps.len(),
            right: values.len(),
        });
    }
    if values.len() < 2 * period {
        return Err(Error::SeriesTooShort {
            needed: 2 * period,
            got: values.len(),
        });
    }
    if let Some(i) = stamps.windows(2).position(|w| w[0].months_until(w[1]) != 1) {
        return Err(Error::NonContiguousStamps(i + 1));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if model == DecompositionModel::Multiplicative {
        if let Some(i) = values.iter().position(|&v| v <= 0.0) {
            return Err(Error::NonPositiveValue {
                index: i,
                value: values[i],
            });
        }
    }
    Ok(())
}

fn aggregate(bucket: &mut [f64], aggregator: Aggregator) -> f64 {
    match aggregator {
        Aggregator::Mean => bucket.iter().sum::<f64>() / bucket.len() as f64,
        Aggregator::Median => {
            bucket.sort_by(f64::total_cmp);
            let mid = bucket.len() / 2;
            if bucket.len() % 2 == 1 {
                bucket[mid]
            } else {
                0.5 * (bucket[mid - 1] + bucket[mid])
            }
        }
    }
}

/// Seasonal indices from detrended ratios (multiplicative) or differences
/// (additive) against the centered moving average.
pub fn seasonal_indices(
    values: &[f64],
    stamps: &[MonthStamp],
    model: DecompositionModel,
    period: usize,
    aggregator: Aggregator,
) -> Result<SeasonalIndices> {
    check_inputs(stamps, values, model, period)?;
    let ma = centered_ma(values, period)?;
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); period];
    for (i, (&y, m)) in values.iter().zip(&ma).enumerate() {
        let Some(m) = *m else { continue };
        if model == DecompositionModel::Multiplicative && m <= 0.0 {
            return Err(Error::NonPositiveValue { index: i, value: m });
        }
        buckets[season_slot(stamps[i], period)].push(model.remove(y, m));
    }
    let raw = buckets
        .iter_mut()
        .enumerate()
        .map(|(slot, bucket)| {
            if bucket.is_empty() {
                Err(Error::EmptySeason(slot))
            } else {
                Ok(aggregate(bucket, aggregator))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    SeasonalIndices::normalized(model, raw)
}

/// Ordinary least squares of `values[t - 1]` on `t = 1..=N`.
pub fn fit_trend(values: &[f64]) -> Result<TrendLine> {
    let n = values.len();
    if n < 2 {
        return Err(Error::SeriesTooShort { needed: 2, got: n });
    }
    let nf = n as f64;
    let t_mean = (nf + 1.0) / 2.0;
    let y_mean = values.iter().sum::<f64>() / nf;
    let (mut sty, mut stt) = (0.0, 0.0);
    for (i, &y) in values.iter().enumerate() {
        let dt = (i + 1) as f64 - t_mean;
        sty += dt * (y - y_mean);
        stt += dt * dt;
    }
    let slope = sty / stt;
    Ok(TrendLine {
        intercept: y_mean - slope * t_mean,
        slope,
    })
}

fn metrics(actual: &[f64], fitted: &[f64]) -> Result<(AccuracyMetrics, Option<usize>)> {
    if actual.len() != fitted.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: fitted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::InsufficientSample { needed: 1, got: 0 });
    }
    let n = actual.len() as f64;
    let (mut abs, mut sq, mut pct) = (0.0, 0.0, 0.0);
    let mut zero_at = None;
    for (i, (&a, &f)) in actual.iter().zip(fitted).enumerate() {
        let e = a - f;
        abs += e.abs();
        sq += e * e;
        if a == 0.0 {
            zero_at.get_or_insert(i);
        } else {
            pct += (e / a).abs();
        }
    }
    let m = AccuracyMetrics {
        mape: zero_at.is_none().then(|| 100.0 * pct / n),
        mad: abs / n,
        msd: sq / n,
    };
    Ok((m, zero_at))
}

/// MAPE (percent), MAD and MSD of `fitted` against `actual`. Fails when an
/// actual value is zero.
pub fn accuracy_metrics(actual: &[f64], fitted: &[f64]) -> Result<AccuracyMetrics> {
    match metrics(actual, fitted)? {
        (_, Some(i)) => Err(Error::ZeroActual(i)),
        (m, None) => Ok(m),
    }
}

/// Runs the full decomposition over aligned `stamps` and `values`.
pub fn decompose(stamps: &[MonthStamp], values: &[f64], options: DecomposeOptions) -> Result<DecompositionResult> {
    let DecomposeOptions {
        model,
        period,
        aggregator,
    } = options;
    let indices = seasonal_indices(values, stamps, model, period, aggregator)?;
    let season: Vec<f64> = stamps.iter().map(|&s| indices.for_stamp(s)).collect();
    let deseasonalized: Vec<f64> = values.iter().zip(&season).map(|(&y, &s)| model.remove(y, s)).collect();
    let trend = fit_trend(&deseasonalized)?;
    let fitted: Vec<f64> = season
        .iter()
        .enumerate()
        .map(|(i, &s)| model.combine(trend.at((i + 1) as f64), s))
        .collect();
    let irregular = values.iter().zip(&fitted).map(|(&y, &f)| model.remove(y, f)).collect();
    let (accuracy, _) = metrics(values, &fitted)?;
    Ok(DecompositionResult {
        model,
        aggregator,
        stamps: stamps.to_vec(),
        actual: values.to_vec(),
        indices,
        trend,
        deseasonalized,
        fitted,
        irregular,
        accuracy,
    })
}

pub fn decompose_prices(series: &PriceSeries, options: DecomposeOptions) -> Result<DecompositionResult> {
    decompose(&series.stamps(), &series.prices(), options)
}

pub fn decompose_returns(returns: &ReturnSeries, options: DecomposeOptions) -> Result<DecompositionResult> {
    decompose(&returns.stamps(), &returns.values(), options)
}

/// What the decomposed values measure, for percent conversion of additive
/// indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueUnits {
    /// Decimal fractions such as returns; additive indices are scaled by 100.
    Fraction,
    /// Levels such as prices; additive indices are left in input units.
    Level,
}

/// Seasonal effect of each slot in percent: `(index - 1) * 100` for
/// multiplicative indices.
pub fn seasonal_deviation_percent(indices: &SeasonalIndices, units: ValueUnits) -> Vec<f64> {
    indices
        .values
        .iter()
        .map(|&v| match (indices.model, units) {
            (DecompositionModel::Multiplicative, _) => (v - 1.0) * 100.0,
            (DecompositionModel::Additive, ValueUnits::Fraction) => v * 100.0,
            (DecompositionModel::Additive, ValueUnits::Level) => v,
        })
        .collect()
}
