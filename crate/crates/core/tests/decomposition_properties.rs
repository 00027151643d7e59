mod common;

use common::{random_spec, rel_err};
use goldseason::decomposition::{season_slot, ValueUnits};
use goldseason::synthetic::{generate_values, reference_centered_ma, GeneratorSpec};
use goldseason::{
    accuracy_metrics, centered_ma, decompose, seasonal_deviation_percent, Aggregator, DecomposeOptions,
    DecompositionModel, MonthStamp,
};
use proptest::prelude::*;

const MODELS: [DecompositionModel; 2] = [DecompositionModel::Additive, DecompositionModel::Multiplicative];
const AGGREGATORS: [Aggregator; 2] = [Aggregator::Median, Aggregator::Mean];

fn run(spec: &GeneratorSpec, aggregator: Aggregator) -> goldseason::DecompositionResult {
    let values = generate_values(spec).unwrap();
    decompose(
        &spec.stamps(),
        &values,
        DecomposeOptions::new(spec.model).with_aggregator(aggregator),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn centered_ma_is_linear_invariant(
        values in prop::collection::vec(1.0f64..1000.0, 13..100),
        a in -5.0f64..5.0, b in -100.0f64..100.0,
    ) {
        let base = centered_ma(&values, 12).unwrap();
        let shifted: Vec<f64> = values.iter().map(|v| a * v + b).collect();
        let moved = centered_ma(&shifted, 12).unwrap();
        for (x, y) in base.iter().zip(&moved) {
            match (x, y) {
                (Some(x), Some(y)) => prop_assert!((a * x + b - y).abs() <= 1e-9 * (1.0 + y.abs())),
                (None, None) => {}
                _ => prop_assert!(false, "definedness differs"),
            }
        }
    }

    #[test]
    fn normalization_and_reconstruction(seed in 0u64..10_000, noise in 0.0f64..0.1, m in 0usize..2, g in 0usize..2) {
        let model = MODELS[m];
        let sd = match model {
            DecompositionModel::Multiplicative => noise,
            DecompositionModel::Additive => noise * 50.0,
        };
        let spec = random_spec(seed, model, sd, 240);
        let r = run(&spec, AGGREGATORS[g]);
        let idx = &r.indices.values;
        match model {
            DecompositionModel::Multiplicative => {
                let mean = idx.iter().sum::<f64>() / 12.0;
                prop_assert!((mean - 1.0).abs() < 1e-10);
                for i in 0..r.actual.len() {
                    let s = r.indices.for_stamp(r.stamps[i]);
                    prop_assert!(rel_err(r.deseasonalized[i] * s, r.actual[i]) < 1e-10);
                    prop_assert!(rel_err(r.fitted[i] * r.irregular[i], r.actual[i]) < 1e-10);
                }
            }
            DecompositionModel::Additive => {
                prop_assert!(idx.iter().sum::<f64>().abs() < 1e-10);
                for i in 0..r.actual.len() {
                    let s = r.indices.for_stamp(r.stamps[i]);
                    prop_assert!((r.deseasonalized[i] + s - r.actual[i]).abs() < 1e-10 * (1.0 + r.actual[i].abs()));
                    prop_assert!((r.fitted[i] + r.irregular[i] - r.actual[i]).abs() < 1e-10 * (1.0 + r.actual[i].abs()));
                }
            }
        }
    }

    #[test]
    fn additive_trend_minimizes_msd(seed in 0u64..10_000, d_int in -1.0f64..1.0, d_slope in -0.01f64..0.01) {
        prop_assume!(d_int != 0.0 || d_slope != 0.0);
        let spec = random_spec(seed, DecompositionModel::Additive, 20.0, 240);
        let r = run(&spec, Aggregator::Median);
        let base = accuracy_metrics(&r.actual, &r.fitted).unwrap().msd;
        prop_assert_eq!(base, r.accuracy.msd);
        let perturbed: Vec<f64> = r.fitted.iter().enumerate()
            .map(|(i, f)| f + d_int + d_slope * (i + 1) as f64)
            .collect();
        let diff: Vec<f64> = r.actual.iter().zip(&perturbed).map(|(a, f)| (a - f) * (a - f)).collect();
        let msd = diff.iter().sum::<f64>() / diff.len() as f64;
        prop_assert!(msd > base, "{} <= {}", msd, base);
    }
}

#[test]
fn deterministic() {
    for m in MODELS {
        let spec = random_spec(11, m, 0.03, 180);
        assert_eq!(generate_values(&spec).unwrap(), generate_values(&spec).unwrap());
        assert_eq!(run(&spec, Aggregator::Median), run(&spec, Aggregator::Median));
    }
}

#[test]
fn centered_ma_matches_explicit_weights() {
    let spec = random_spec(48, DecompositionModel::Multiplicative, 0.05, 48);
    let values = generate_values(&spec).unwrap();
    let got = centered_ma(&values, 12).unwrap();
    let want = reference_centered_ma(&values, 12);
    assert_eq!(got.iter().filter(|v| v.is_some()).count(), 36);
    for (g, w) in got.iter().zip(&want) {
        match (g, w) {
            (Some(g), Some(w)) => assert!(rel_err(*g, *w) < 1e-12),
            (None, None) => {}
            _ => panic!("definedness differs"),
        }
    }
}

/// Noise-free multiplicative data `(a + b t) S` pass through the 2x12 moving
/// average as `(a + b t) + b c`, where `c` depends only on the calendar slot.
/// The expected indices follow from dividing that out directly.
fn expected_multiplicative_indices(spec: &GeneratorSpec, aggregator: Aggregator) -> Vec<f64> {
    let s = spec.normalized_indices().unwrap();
    let c: Vec<f64> = (0..12)
        .map(|m| {
            (-5i64..=5)
                .map(|k| k as f64 * s[(m as i64 + k).rem_euclid(12) as usize])
                .sum::<f64>()
                / 12.0
        })
        .collect();
    let values = generate_values(spec).unwrap();
    let stamps = spec.stamps();
    let mut buckets = vec![Vec::new(); 12];
    for t in 6..values.len() - 6 {
        let slot = season_slot(stamps[t], 12);
        let trend = spec.intercept + spec.slope * (t + 1) as f64;
        buckets[slot].push(values[t] / (trend + spec.slope * c[slot]));
    }
    let raw: Vec<f64> = buckets
        .into_iter()
        .map(|mut b| {
            b.sort_by(|x, y| x.partial_cmp(y).unwrap());
            match aggregator {
                Aggregator::Mean => b.iter().sum::<f64>() / b.len() as f64,
                Aggregator::Median if b.len() % 2 == 1 => b[b.len() / 2],
                Aggregator::Median => (b[b.len() / 2 - 1] + b[b.len() / 2]) / 2.0,
            }
        })
        .collect();
    let mean = raw.iter().sum::<f64>() / 12.0;
    raw.iter().map(|v| v / mean).collect()
}

#[test]
fn multiplicative_indices_follow_moving_average_bias() {
    for seed in 0..40 {
        let spec = random_spec(seed, DecompositionModel::Multiplicative, 0.0, 240);
        for g in AGGREGATORS {
            let r = run(&spec, g);
            let want = expected_multiplicative_indices(&spec, g);
            for (got, want) in r.indices.values.iter().zip(&want) {
                assert!((got - want).abs() < 1e-12, "seed {seed}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn flat_multiplicative_recovers_exactly() {
    for seed in 0..20 {
        let mut spec = random_spec(seed, DecompositionModel::Multiplicative, 0.0, 240);
        spec.slope = 0.0;
        let r = run(&spec, Aggregator::Median);
        for (got, want) in r.indices.values.iter().zip(spec.normalized_indices().unwrap()) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(rel_err(r.trend.intercept, spec.intercept) < 1e-10);
        assert!(r.trend.slope.abs() < 1e-10);
    }
}

#[test]
fn additive_recovers_exactly() {
    for seed in 0..40 {
        let spec = random_spec(seed, DecompositionModel::Additive, 0.0, 240);
        for g in AGGREGATORS {
            let r = run(&spec, g);
            for (got, want) in r.indices.values.iter().zip(spec.normalized_indices().unwrap()) {
                assert!((got - want).abs() < 1e-9);
            }
            assert!(rel_err(r.trend.intercept, spec.intercept) < 1e-9);
            assert!((r.trend.slope - spec.slope).abs() < 1e-9);
        }
    }
}

#[test]
fn gold_like_series_has_mild_seasonality() {
    let usd = [
        1.0019, 1.0039, 1.0004, 0.9947, 0.9959, 0.9981, 0.9781, 0.9987, 1.0034, 1.0011, 1.0112, 1.0125,
    ];
    let spec = GeneratorSpec {
        model: DecompositionModel::Multiplicative,
        intercept: 117.2,
        slope: 2.09,
        indices: usd.to_vec(),
        noise_sd: 0.04,
        length: 447,
        seed: 1978,
        start: MonthStamp::new(1978, 12).unwrap(),
        currency: "USD".into(),
    };
    let r = run(&spec, Aggregator::Median);
    assert!(r.indices.values.iter().all(|v| (v - 1.0).abs() < 0.05));
    assert!(r.trend.slope > 0.0);
}

#[test]
fn mape_grows_with_noise() {
    let levels = [0.0, 0.01, 0.02, 0.05, 0.1];
    let mut means = Vec::new();
    for &sd in &levels {
        let total: f64 = (0..50)
            .map(|seed| {
                let spec = random_spec(seed, DecompositionModel::Multiplicative, sd, 240);
                run(&spec, Aggregator::Median).accuracy.mape.unwrap()
            })
            .sum();
        means.push(total / 50.0);
    }
    for w in means.windows(2) {
        assert!(w[0] < w[1], "{means:?}");
    }
}

#[test]
fn deviations_average_to_zero() {
    for seed in 0..20 {
        let spec = random_spec(seed, DecompositionModel::Multiplicative, 0.05, 240);
        let r = run(&spec, Aggregator::Median);
        let dev = seasonal_deviation_percent(&r.indices, ValueUnits::Level);
        assert!((dev.iter().sum::<f64>() / 12.0).abs() < 1e-9);
        for (d, v) in dev.iter().zip(&r.indices.values) {
            assert!((d - (v - 1.0) * 100.0).abs() < 1e-12);
        }
    }
}
