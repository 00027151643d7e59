//! Calendar-month anomaly detection for monthly price series.
//!
//! The pipeline turns monthly prices into arithmetic returns, tests each
//! calendar month's mean return against zero, correlates currencies on prices
//! and returns, and runs a classical seasonal decomposition (period 12) with a
//! linear trend and MAPE/MAD/MSD accuracy metrics.
//!
//! ```
//! use goldseason::calendar::{parse_panel_csv, to_returns};
//!
//! let panel = parse_panel_csv("date,USD\n2016-01,1000\n2016-02,1100\n", "majors").unwrap();
//! let returns = to_returns(&panel.series()[0]).unwrap();
//! assert!((returns.points()[0].ret - 0.10).abs() < 1e-12);
//! ```

pub mod calendar;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod report;
pub mod seasonal_stats;
pub mod student_t;
pub mod synthetic;

pub use calendar::{
    align_panel, cumulative_growth, parse_panel_csv, render_panel_csv, slice_span, to_returns, MonthStamp, PricePoint,
    PriceSeries, ReturnPoint, ReturnSeries, SeriesPanel,
};
pub use decomposition::{
    accuracy_metrics, centered_ma, decompose, fit_trend, seasonal_deviation_percent, seasonal_indices, AccuracyMetrics,
    Aggregator, DecomposeOptions, DecompositionModel, DecompositionResult, SeasonalIndices, TrendLine,
};
pub use error::{Error, ErrorKind, Result};
pub use report::{classify_month_signs, emit_chart_data, render_report, ReportConfig, SignLabel};
pub use seasonal_stats::{
    correlation_matrix, correlation_significance, monthly_mean_returns, one_sample_ttest, pearson, CorrelationBasis,
    CorrelationMatrix, MonthlyReturnSummary,
};
