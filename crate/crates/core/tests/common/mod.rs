#![allow(dead_code)]

use goldseason::synthetic::GeneratorSpec;
use goldseason::{DecompositionModel, MonthStamp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random valid generator spec; multiplicative specs keep the trend positive.
pub fn random_spec(seed: u64, model: DecompositionModel, noise_sd: f64, length: usize) -> GeneratorSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
    let indices: Vec<f64> = match model {
        DecompositionModel::Multiplicative => (0..12).map(|_| 1.0 + rng.random_range(-0.03..0.03)).collect(),
        DecompositionModel::Additive => (0..12).map(|_| rng.random_range(-5.0..5.0)).collect(),
    };
    let start = MonthStamp::new(rng.random_range(1950..2020), rng.random_range(1..=12)).unwrap();
    GeneratorSpec {
        model,
        intercept: rng.random_range(50.0..1000.0),
        slope: match model {
            DecompositionModel::Multiplicative => rng.random_range(0.0..3.0),
            DecompositionModel::Additive => rng.random_range(-3.0..3.0),
        },
        indices,
        noise_sd,
        length,
        seed,
        start,
        currency: "SYN".into(),
    }
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

pub const MAJORS: [&str; 6] = ["USD", "EUR", "JPY", "GBP", "CAD", "CHF"];

/// Published multiplicative seasonal indices for the major currencies,
/// January first.
pub const MAJORS_INDICES: [[f64; 12]; 6] = [
    [
        1.0019, 1.0039, 1.0004, 0.9947, 0.9959, 0.9981, 0.9781, 0.9987, 1.0034, 1.0011, 1.0112, 1.0125,
    ],
    [
        1.0113, 1.0084, 1.0011, 0.9930, 1.0061, 0.9966, 0.9835, 1.0121, 1.0072, 0.9909, 1.0071, 0.9828,
    ],
    [
        1.0028, 1.0033, 1.0075, 0.9963, 1.0137, 0.9959, 0.9884, 0.9992, 0.9992, 0.9898, 1.0061, 0.9978,
    ],
    [
        1.0028, 1.0159, 0.9993, 0.9930, 0.9994, 0.9937, 0.9866, 1.0020, 0.9995, 0.9925, 1.0167, 0.9987,
    ],
    [
        1.0113, 1.0149, 0.9985, 0.9869, 0.9914, 0.9948, 0.9831, 0.9994, 1.0021, 0.9899, 1.0133, 1.0147,
    ],
    [
        1.0063, 1.0129, 1.0108, 0.9956, 1.0084, 0.9906, 0.9893, 1.0038, 1.0061, 0.9870, 1.0050, 0.9842,
    ],
];
pub const MAJORS_SIGNS: &str = "++0-0--000+0";

pub const EMERGING: [&str; 6] = ["INR", "CNY", "TRY", "SAR", "IDR", "AED"];

pub const EMERGING_INDICES: [[f64; 12]; 6] = [
    [
        0.9997, 1.0054, 0.9926, 0.9855, 0.9935, 0.9992, 0.9807, 1.0073, 1.0143, 1.0004, 1.0154, 1.0061,
    ],
    [
        1.0108, 1.0132, 0.9998, 0.9924, 0.9992, 0.9982, 0.9880, 0.9960, 0.9993, 0.9981, 0.9987, 1.0066,
    ],
    [
        1.0094, 1.0122, 1.0090, 1.0085, 1.0080, 1.0046, 0.9833, 1.0044, 0.9930, 0.9917, 0.9941, 0.9817,
    ],
    [
        1.0052, 1.0089, 1.0006, 0.9953, 0.9972, 0.9985, 0.9834, 0.9972, 1.0007, 1.0017, 1.0027, 1.0087,
    ],
    [
        1.0174, 1.0084, 0.9958, 0.9877, 0.9975, 1.0007, 0.9709, 0.9987, 0.9969, 0.9966, 1.0210, 1.0086,
    ],
    [
        1.0047, 1.0093, 1.0007, 0.9952, 0.9974, 0.9982, 0.9835, 0.9972, 1.0007, 1.0020, 1.0027, 1.0086,
    ],
];
pub const EMERGING_SIGNS: &str = "++00---0000+";

pub fn published(rows: &[[f64; 12]; 6]) -> Vec<goldseason::SeasonalIndices> {
    rows.iter()
        .map(|r| goldseason::SeasonalIndices::from_values(DecompositionModel::Multiplicative, r.to_vec()))
        .collect()
}

pub fn sign_string(signs: &[goldseason::SignLabel]) -> String {
    signs.iter().map(|s| s.as_str()).collect()
}
