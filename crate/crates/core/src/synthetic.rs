//! Seeded synthetic series and a naive reference decomposition used as a
//! test oracle.
//!
//! Noise is drawn from a ChaCha8 stream (`rand_chacha::ChaCha8Rng`, seeded
//! with `seed_from_u64`) through the ziggurat standard normal sampler of
//! `rand_distr`. Both algorithms are platform independent, so a given spec
//! produces the same series everywhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::calendar::{MonthStamp, PriceSeries};
use crate::decomposition::{
    AccuracyMetrics, Aggregator, DecompositionModel, DecompositionResult, SeasonalIndices, TrendLine,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub model: DecompositionModel,
    pub intercept: f64,
    /// Per month, with `t = 1` at the first observation.
    pub slope: f64,
    /// One value per season slot (January first for 12 slots). Normalized
    /// before use.
    pub indices: Vec<f64>,
    /// Log-scale sd for multiplicative noise, absolute sd for additive noise.
    pub noise_sd: f64,
    pub length: usize,
    pub seed: u64,
    pub start: MonthStamp,
    pub currency: String,
}

impl GeneratorSpec {
    pub fn normalized_indices(&self) -> Result<Vec<f64>> {
        Ok(SeasonalIndices::normalized(self.model, self.indices.clone())?.values)
    }

    pub fn stamps(&self) -> Vec<MonthStamp> {
        (0..self.length).map(|i| self.start.add_months(i as i64)).collect()
    }

    fn validate(&self) -> Result<()> {
        let period = self.indices.len();
        if period < 2 {
            return Err(Error::InvalidParameter("at least 2 seasonal indices required".into()));
        }
        if self.length < 2 * period {
            return Err(Error::SeriesTooShort {
                needed: 2 * period,
                got: self.length,
            });
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "noise_sd must be finite and non-negative, got {}",
                self.noise_sd
            )));
        }
        if !(self.intercept.is_finite() && self.slope.is_finite()) {
            return Err(Error::InvalidParameter("trend coefficients must be finite".into()));
        }
        Ok(())
    }
}

/// Raw generated values: `trend(t)` combined with the month's index and a
/// noise draw. Additive output may be negative.
pub fn generate_values(spec: &GeneratorSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let indices = spec.normalized_indices()?;
    let period = indices.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.length);
    for (i, stamp) in spec.stamps().into_iter().enumerate() {
        let trend = spec.intercept + spec.slope * (i + 1) as f64;
        let season = indices[stamp.ordinal().rem_euclid(period as i64) as usize];
        let z: f64 = StandardNormal.sample(&mut rng);
        let value = match spec.model {
            DecompositionModel::Multiplicative => {
                let v = trend * season * (spec.noise_sd * z).exp();
                if v.is_nan() || v <= 0.0 {
                    return Err(Error::NonPositiveValue { index: i, value: v });
                }
                v
            }
            DecompositionModel::Additive => trend + season + spec.noise_sd * z,
        };
        out.push(value);
    }
    Ok(out)
}

/// Generated values wrapped as a price series. Every value must be positive.
pub fn generate_series(spec: &GeneratorSpec) -> Result<PriceSeries> {
    let values = generate_values(spec)?;
    if let Some(i) = values.iter().position(|&v| v <= 0.0) {
        return Err(Error::NonPositiveValue {
            index: i,
            value: values[i],
        });
    }
    PriceSeries::from_values(spec.currency.clone(), spec.start, &values)
}

/// Returns recomputed as `p_t / p_{t-1} - 1`.
pub fn reference_returns(prices: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..prices.len() {
        out.push(prices[i] / prices[i - 1] - 1.0);
    }
    out
}

fn ma_weights(period: usize) -> Vec<f64> {
    if period.is_multiple_of(2) {
        let mut w = vec![1.0 / period as f64; period + 1];
        w[0] = 0.5 / period as f64;
        w[period] = 0.5 / period as f64;
        w
    } else {
        vec![1.0 / period as f64; period]
    }
}

/// Centered moving average as an explicit weighted sum per position.
pub fn reference_centered_ma(values: &[f64], period: usize) -> Vec<Option<f64>> {
    let weights = ma_weights(period);
    let half = weights.len() / 2;
    let n = values.len();
    let mut out = vec![None; n];
    if n < weights.len() {
        return out;
    }
    for t in half..n - half {
        let mut ma = 0.0;
        for (k, w) in weights.iter().enumerate() {
            ma += w * values[t + k - half];
        }
        out[t] = Some(ma);
    }
    out
}

/// Straightforward re-implementation of [`crate::decomposition::decompose`]
/// with explicit weight vectors, direct sums and a 2x2 normal-equation OLS
/// solved by Cramer's rule. Shares no computation with the main path.
pub fn reference_decompose(
    stamps: &[MonthStamp],
    values: &[f64],
    model: DecompositionModel,
    period: usize,
    aggregator: Aggregator,
) -> Result<DecompositionResult> {
    let n = values.len();
    if period < 2 {
        return Err(Error::InvalidParameter(format!(
            "period must be at least 2, got {period}"
        )));
    }
    if stamps.len() != n {
        return Err(Error::LengthMismatch {
            left: stamps.len(),
            right: n,
        });
    }
    if n < 2 * period {
        return Err(Error::SeriesTooShort {
            needed: 2 * period,
            got: n,
        });
    }
    for i in 1..n {
        if stamps[i].ordinal() != stamps[i - 1].ordinal() + 1 {
            return Err(Error::NonContiguousStamps(i));
        }
    }
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite(i));
        }
        if model == DecompositionModel::Multiplicative && v <= 0.0 {
            return Err(Error::NonPositiveValue { index: i, value: v });
        }
    }

    let ma_all = reference_centered_ma(values, period);

    let slot_of = |s: MonthStamp| -> usize {
        let months = s.year() as i64 * 12 + s.month() as i64 - 1;
        (((months % period as i64) + period as i64) % period as i64) as usize
    };

    let mut raw = vec![0.0; period];
    for (slot, raw_value) in raw.iter_mut().enumerate() {
        let mut bucket = Vec::new();
        for t in 0..n {
            if slot_of(stamps[t]) != slot {
                continue;
            }
            let Some(ma) = ma_all[t] else { continue };
            let detrended = match model {
                DecompositionModel::Multiplicative => {
                    if ma <= 0.0 {
                        return Err(Error::NonPositiveValue { index: t, value: ma });
                    }
                    values[t] / ma
                }
                DecompositionModel::Additive => values[t] - ma,
            };
            bucket.push(detrended);
        }
        if bucket.is_empty() {
            return Err(Error::EmptySeason(slot));
        }
        *raw_value = match aggregator {
            Aggregator::Mean => {
                let mut s = 0.0;
                for v in &bucket {
                    s += v;
                }
                s / bucket.len() as f64
            }
            Aggregator::Median => {
                bucket.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let m = bucket.len();
                if m % 2 == 1 {
                    bucket[(m - 1) / 2]
                } else {
                    (bucket[m / 2 - 1] + bucket[m / 2]) / 2.0
                }
            }
        };
    }

    let mut total = 0.0;
    for v in &raw {
        total += v;
    }
    let index_values: Vec<f64> = match model {
        DecompositionModel::Multiplicative => raw.iter().map(|v| v * period as f64 / total).collect(),
        DecompositionModel::Additive => raw.iter().map(|v| v - total / period as f64).collect(),
    };

    let season: Vec<f64> = stamps.iter().map(|&s| index_values[slot_of(s)]).collect();
    let deseasonalized: Vec<f64> = (0..n)
        .map(|i| match model {
            DecompositionModel::Multiplicative => values[i] / season[i],
            DecompositionModel::Additive => values[i] - season[i],
        })
        .collect();

    // normal equations for y = a + b t
    let (mut st, mut stt, mut sy, mut sty) = (0.0, 0.0, 0.0, 0.0);
    for (i, &y) in deseasonalized.iter().enumerate() {
        let t = (i + 1) as f64;
        st += t;
        stt += t * t;
        sy += y;
        sty += t * y;
    }
    let nf = n as f64;
    let det = nf * stt - st * st;
    let intercept = (sy * stt - st * sty) / det;
    let slope = (nf * sty - st * sy) / det;

    let mut fitted = Vec::with_capacity(n);
    let mut irregular = Vec::with_capacity(n);
    let (mut abs_sum, mut sq_sum, mut pct_sum) = (0.0, 0.0, 0.0);
    let mut has_zero = false;
    for i in 0..n {
        let tr = intercept + slope * (i + 1) as f64;
        let f = match model {
            DecompositionModel::Multiplicative => tr * season[i],
            DecompositionModel::Additive => tr + season[i],
        };
        fitted.push(f);
        irregular.push(match model {
            DecompositionModel::Multiplicative => values[i] / f,
            DecompositionModel::Additive => values[i] - f,
        });
        let e = values[i] - f;
        abs_sum += e.abs();
        sq_sum += e * e;
        if values[i] == 0.0 {
            has_zero = true;
        } else {
            pct_sum += e.abs() / values[i].abs();
        }
    }

    Ok(DecompositionResult {
        model,
        aggregator,
        stamps: stamps.to_vec(),
        actual: values.to_vec(),
        indices: SeasonalIndices::from_values(model, index_values),
        trend: TrendLine { intercept, slope },
        deseasonalized,
        fitted,
        irregular,
        accuracy: AccuracyMetrics {
            mape: if has_zero { None } else { Some(100.0 * pct_sum / nf) },
            mad: abs_sum / nf,
            msd: sq_sum / nf,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(model: DecompositionModel) -> GeneratorSpec {
        GeneratorSpec {
            model,
            intercept: 100.0,
            slope: 0.0,
            indices: vec![1.0; 12],
            noise_sd: 0.0,
            length: 36,
            seed: 7,
            start: MonthStamp::new(1990, 1).unwrap(),
            currency: "SYN".into(),
        }
    }

    #[test]
    fn flat_spec_is_constant() {
        let s = generate_series(&spec(DecompositionModel::Multiplicative)).unwrap();
        assert_eq!(s.len(), 36);
        assert!(s.prices().iter().all(|&p| p == 100.0));
        let mut a = spec(DecompositionModel::Additive);
        a.indices = vec![0.0; 12];
        assert!(generate_values(&a).unwrap().iter().all(|&p| p == 100.0));
    }

    #[test]
    fn same_seed_same_series() {
        let mut s = spec(DecompositionModel::Multiplicative);
        s.noise_sd = 0.05;
        s.slope = 1.3;
        let a = generate_values(&s).unwrap();
        let b = generate_values(&s).unwrap();
        assert_eq!(
            a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
        s.seed += 1;
        assert_ne!(generate_values(&s).unwrap(), a);
    }

    #[test]
    fn indices_are_normalized_before_use() {
        let mut s = spec(DecompositionModel::Multiplicative);
        s.indices = vec![2.0; 12];
        assert!(generate_values(&s).unwrap().iter().all(|&p| (p - 100.0).abs() < 1e-12));
    }

    #[test]
    fn rejects_invalid_specs() {
        let mut s = spec(DecompositionModel::Multiplicative);
        s.length = 23;
        assert!(matches!(generate_values(&s), Err(Error::SeriesTooShort { .. })));

        let mut s = spec(DecompositionModel::Multiplicative);
        s.intercept = 10.0;
        s.slope = -1.0;
        assert!(matches!(generate_values(&s), Err(Error::NonPositiveValue { .. })));

        let mut s = spec(DecompositionModel::Additive);
        s.intercept = -50.0;
        s.indices = vec![0.0; 12];
        assert!(generate_values(&s).is_ok());
        assert!(matches!(generate_series(&s), Err(Error::NonPositiveValue { .. })));

        let mut s = spec(DecompositionModel::Additive);
        s.noise_sd = -1.0;
        assert!(generate_values(&s).is_err());
    }

    #[test]
    fn reference_on_constant_series() {
        let st = spec(DecompositionModel::Multiplicative).stamps();
        let r = reference_decompose(
            &st,
            &[42.0; 36],
            DecompositionModel::Multiplicative,
            12,
            Aggregator::Median,
        )
        .unwrap();
        assert!(r.indices.values.iter().all(|&v| v == 1.0));
        assert_eq!(r.trend.slope, 0.0);
        assert!((r.trend.intercept - 42.0).abs() < 1e-12);
        assert_eq!(r.accuracy.mape, Some(0.0));
    }
}
