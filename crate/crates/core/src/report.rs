//! Panel-level analysis and rendering: monthly return tables, correlation
//! matrices, decomposition tables with a cross-currency sign column, and
//! chart data for seasonal deviations.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::calendar::{to_returns, SeriesPanel};
use crate::decomposition::{
    decompose_prices, seasonal_deviation_percent, AccuracyMetrics, Aggregator, DecomposeOptions, DecompositionModel,
    SeasonalIndices, TrendLine, ValueUnits, DEFAULT_PERIOD,
};
use crate::error::{Error, Result};
use crate::seasonal_stats::{
    check_alpha, correlation_matrix, monthly_mean_returns, CorrelationBasis, CorrelationMatrix, MonthlyReturnSummary,
    DEFAULT_ALPHA,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignLabel {
    Plus,
    Zero,
    Minus,
}

impl SignLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SignLabel::Plus => "+",
            SignLabel::Zero => "0",
            SignLabel::Minus => "-",
        }
    }
}

impl fmt::Display for SignLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for SignLabel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Labels each season slot `+` when at least `quorum` currencies sit above
/// the neutral index, `-` when at least `quorum` sit below, `0` otherwise.
/// An index exactly at neutral counts for neither side.
pub fn classify_month_signs(indices_by_currency: &[SeasonalIndices], quorum: usize) -> Result<Vec<SignLabel>> {
    let first = indices_by_currency
        .first()
        .ok_or_else(|| Error::InvalidParameter("no currencies to classify".into()))?;
    if indices_by_currency.iter().any(|i| i.model != first.model) {
        return Err(Error::MixedModels);
    }
    if indices_by_currency.iter().any(|i| i.period() != first.period()) {
        return Err(Error::InvalidParameter("currencies have different periods".into()));
    }
    let n = indices_by_currency.len();
    if quorum == 0 || quorum > n {
        return Err(Error::InvalidParameter(format!(
            "quorum must be in 1..={n}, got {quorum}"
        )));
    }
    let neutral = first.model.neutral();
    Ok((0..first.period())
        .map(|slot| {
            let above = indices_by_currency.iter().filter(|i| i.values[slot] > neutral).count();
            let below = indices_by_currency.iter().filter(|i| i.values[slot] < neutral).count();
            if above >= quorum {
                SignLabel::Plus
            } else if below >= quorum {
                SignLabel::Minus
            } else {
                SignLabel::Zero
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Markdown,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "md" | "markdown" => Ok(OutputFormat::Markdown),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidParameter(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    pub group: String,
    pub model: DecompositionModel,
    pub period: usize,
    pub aggregator: Aggregator,
    pub alpha: f64,
    /// `None` means unanimity.
    pub quorum: Option<usize>,
    pub format: OutputFormat,
    pub charts: Option<PathBuf>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            group: "panel".into(),
            model: DecompositionModel::Multiplicative,
            period: DEFAULT_PERIOD,
            aggregator: Aggregator::Median,
            alpha: DEFAULT_ALPHA,
            quorum: None,
            format: OutputFormat::Markdown,
            charts: None,
        }
    }
}

impl ReportConfig {
    pub fn validate(&self, currencies: usize) -> Result<()> {
        check_alpha(self.alpha)?;
        if let Some(q) = self.quorum {
            if q == 0 || q > currencies {
                return Err(Error::InvalidParameter(format!(
                    "quorum must be in 1..={currencies}, got {q}"
                )));
            }
        }
        Ok(())
    }

    pub fn decompose_options(&self) -> DecomposeOptions {
        DecomposeOptions {
            model: self.model,
            period: self.period,
            aggregator: self.aggregator,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurrencyDecomposition {
    pub currency: String,
    pub indices: SeasonalIndices,
    pub deviation_percent: Vec<f64>,
    pub trend: TrendLine,
    pub accuracy: AccuracyMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Correlations {
    pub prices: CorrelationMatrix,
    pub returns: CorrelationMatrix,
}

/// Monthly return summaries for every currency in panel order.
pub fn return_summaries(panel: &SeriesPanel, alpha: f64) -> Result<Vec<MonthlyReturnSummary>> {
    panel
        .series()
        .iter()
        .map(|s| monthly_mean_returns(&to_returns(s)?, alpha))
        .collect()
}

/// Price and return correlation matrices, or `None` for single-series panels.
pub fn correlations(panel: &SeriesPanel, alpha: f64) -> Result<Option<Correlations>> {
    if panel.len() < 2 {
        return Ok(None);
    }
    Ok(Some(Correlations {
        prices: correlation_matrix(panel, CorrelationBasis::Prices, alpha)?,
        returns: correlation_matrix(panel, CorrelationBasis::Returns, alpha)?,
    }))
}

/// Price decompositions for every currency in panel order.
pub fn decompositions(panel: &SeriesPanel, options: DecomposeOptions) -> Result<Vec<CurrencyDecomposition>> {
    panel
        .series()
        .iter()
        .map(|s| {
            let r = decompose_prices(s, options)?;
            Ok(CurrencyDecomposition {
                currency: s.currency().to_string(),
                deviation_percent: seasonal_deviation_percent(&r.indices, ValueUnits::Level),
                indices: r.indices,
                trend: r.trend,
                accuracy: r.accuracy,
            })
        })
        .collect()
}

/// Everything the full report shows for one panel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelAnalysis {
    pub returns: Vec<MonthlyReturnSummary>,
    pub correlations: Option<Correlations>,
    pub decomposition: Vec<CurrencyDecomposition>,
    pub signs: Vec<SignLabel>,
}

pub fn analyze_panel(panel: &SeriesPanel, config: &ReportConfig) -> Result<PanelAnalysis> {
    config.validate(panel.len())?;
    let returns = return_summaries(panel, config.alpha)?;
    let correlations = correlations(panel, config.alpha)?;
    let decomposition = decompositions(panel, config.decompose_options())?;
    let indices: Vec<SeasonalIndices> = decomposition.iter().map(|d| d.indices.clone()).collect();
    let signs = classify_month_signs(&indices, config.quorum.unwrap_or(panel.len()))?;
    Ok(PanelAnalysis {
        returns,
        correlations,
        decomposition,
        signs,
    })
}

/// Runs the full pipeline and renders it in the configured format. When
/// `config.charts` is set, the seasonal deviation CSV is written there too.
pub fn render_report(panel: &SeriesPanel, config: &ReportConfig) -> Result<String> {
    let analysis = analyze_panel(panel, config)?;
    if let Some(dir) = &config.charts {
        emit_chart_data(&config.group, &analysis.decomposition, dir)?;
    }
    match config.format {
        OutputFormat::Json => to_json(&analysis),
        OutputFormat::Markdown => {
            let mut out = String::new();
            write_header(&mut out, panel, config);
            write_returns_table(&mut out, &analysis.returns);
            if let Some(c) = &analysis.correlations {
                write_correlations(&mut out, c);
            }
            write_decomposition_table(&mut out, &analysis.decomposition, Some(&analysis.signs), config);
            Ok(out)
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidParameter(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

// Avoids rendering tiny negatives as "-0.00".
fn fixed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn star(flag: bool) -> &'static str {
    if flag {
        "*"
    } else {
        ""
    }
}

fn confidence_label(alpha: f64) -> String {
    let pct = (1.0 - alpha) * 100.0;
    if (pct - pct.round()).abs() < 1e-9 {
        format!("{}%", pct.round())
    } else {
        format!("{pct}%")
    }
}

pub fn write_header(out: &mut String, panel: &SeriesPanel, config: &ReportConfig) {
    let _ = writeln!(out, "# Calendar-month analysis: {}\n", config.group);
    let _ = writeln!(
        out,
        "Span {}..{} ({} monthly prices, {} returns per currency).",
        panel.first_stamp(),
        panel.last_stamp(),
        panel.span_len(),
        panel.span_len().saturating_sub(1)
    );
    let quorum = config.quorum.unwrap_or(panel.len());
    let _ = writeln!(
        out,
        "Model {}, period {}, aggregator {}, alpha {}, sign quorum {} of {}.\n",
        config.model,
        config.period,
        config.aggregator,
        config.alpha,
        quorum,
        panel.len()
    );
}

pub fn write_returns_table(out: &mut String, summaries: &[MonthlyReturnSummary]) {
    let _ = writeln!(out, "## Average monthly returns (%)\n");
    let _ = write!(out, "| Month |");
    for s in summaries {
        let _ = write!(out, " {} |", s.currency);
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in summaries {
        out.push_str("---:|");
    }
    out.push('\n');
    for m in 0..12 {
        let _ = write!(out, "| {} |", m + 1);
        for s in summaries {
            let r = &s.per_month[m];
            let _ = write!(out, " {}%{} |", fixed(r.mean * 100.0, 2), star(r.significant));
        }
        out.push('\n');
    }
    let _ = write!(out, "| Average |");
    for s in summaries {
        let _ = write!(
            out,
            " {}%{} |",
            fixed(s.overall.mean * 100.0, 2),
            star(s.overall.significant)
        );
    }
    out.push('\n');
    let alpha = summaries.first().map(|s| s.alpha).unwrap_or(DEFAULT_ALPHA);
    let _ = writeln!(
        out,
        "\n\\* Statistically significant at {} (two-sided t-test, p < {alpha}).\n",
        confidence_label(alpha)
    );
}

fn write_matrix(out: &mut String, title: &str, m: &CorrelationMatrix) {
    let _ = writeln!(out, "### {title}\n");
    let k = m.labels.len();
    out.push_str("| |");
    for label in &m.labels[..k - 1] {
        let _ = write!(out, " {label} |");
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in 1..k {
        out.push_str("---:|");
    }
    out.push('\n');
    for i in 1..k {
        let _ = write!(out, "| {} |", m.labels[i]);
        for j in 0..k - 1 {
            if j < i {
                let _ = write!(out, " {}{} |", fixed(m.values[i][j], 2), star(m.significance[i][j]));
            } else {
                out.push_str(" |");
            }
        }
        out.push('\n');
    }
    out.push('\n');
}

pub fn write_correlations(out: &mut String, c: &Correlations) {
    let _ = writeln!(out, "## Correlation matrices\n");
    write_matrix(out, &format!("Price correlation (n = {})", c.prices.n), &c.prices);
    write_matrix(out, &format!("Return correlation (n = {})", c.returns.n), &c.returns);
    let all = [&c.prices, &c.returns]
        .iter()
        .all(|m| m.significance.iter().flatten().all(|&s| s));
    let label = confidence_label(c.prices.alpha);
    if all {
        let _ = writeln!(out, "\\* All correlations are statistically significant at {label}.\n");
    } else {
        let _ = writeln!(out, "\\* Statistically significant at {label}.\n");
    }
}

type CellFn = Box<dyn Fn(&CurrencyDecomposition) -> String>;

pub fn write_decomposition_table(
    out: &mut String,
    decompositions: &[CurrencyDecomposition],
    signs: Option<&[SignLabel]>,
    config: &ReportConfig,
) {
    let _ = writeln!(out, "## Seasonal decomposition of prices ({})\n", config.model);
    let period = decompositions.first().map(|d| d.indices.period()).unwrap_or(0);
    out.push_str("| Month |");
    for d in decompositions {
        let _ = write!(out, " {} |", d.currency);
    }
    if signs.is_some() {
        out.push_str(" Sign |");
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in decompositions {
        out.push_str("---:|");
    }
    if signs.is_some() {
        out.push_str(":---:|");
    }
    out.push('\n');
    for slot in 0..period {
        let _ = write!(out, "| {} |", slot + 1);
        for d in decompositions {
            let _ = write!(out, " {} |", fixed(d.indices.values[slot], 4));
        }
        if let Some(signs) = signs {
            let _ = write!(out, " {} |", signs[slot]);
        }
        out.push('\n');
    }
    let rows: [(&str, CellFn); 5] = [
        (
            "MAPE",
            Box::new(|d| d.accuracy.mape.map(|v| fixed(v, 2)).unwrap_or_else(|| "n/a".into())),
        ),
        ("MAD", Box::new(|d| fixed(d.accuracy.mad, 2))),
        ("MSD", Box::new(|d| fixed(d.accuracy.msd, 2))),
        ("Constant", Box::new(|d| fixed(d.trend.intercept, 4))),
        ("Slope", Box::new(|d| format!("{}xt", fixed(d.trend.slope, 4)))),
    ];
    for (name, cell) in rows.iter() {
        let _ = write!(out, "| {name} |");
        for d in decompositions {
            let _ = write!(out, " {} |", cell(d));
        }
        if signs.is_some() {
            out.push_str(" |");
        }
        out.push('\n');
    }
    out.push_str("\nMAPE in percent; trend is Constant + Slope x t with t = 1 at the first month.\n");
}

/// CSV of seasonal deviations in percent: header `month,<CODE>,...` and one
/// row per season slot, 4 decimals.
pub fn chart_csv(decompositions: &[CurrencyDecomposition]) -> String {
    let mut out = String::from("month");
    for d in decompositions {
        out.push(',');
        out.push_str(&d.currency);
    }
    out.push('\n');
    let period = decompositions.first().map(|d| d.deviation_percent.len()).unwrap_or(0);
    for slot in 0..period {
        let _ = write!(out, "{}", slot + 1);
        for d in decompositions {
            let _ = write!(out, ",{}", fixed(d.deviation_percent[slot], 4));
        }
        out.push('\n');
    }
    out
}

/// Path of the chart file for `group` inside `dir`.
pub fn chart_path(dir: &Path, group: &str) -> PathBuf {
    dir.join(format!("{group}_seasonal_deviation.csv"))
}

/// Writes [`chart_csv`] to `<dir>/<group>_seasonal_deviation.csv`.
pub fn emit_chart_data(group: &str, decompositions: &[CurrencyDecomposition], dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = chart_path(dir, group);
    std::fs::write(&path, chart_csv(decompositions)).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
