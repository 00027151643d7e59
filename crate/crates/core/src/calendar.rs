//! Monthly price panels: stamps, series, CSV ingestion and return computation.
//!
//! Stamps carry a year and a month only. A price observed for `2016-02` is the
//! end-of-month price for February 2016.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A calendar month. Orders lexicographically by `(year, month)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonthStamp {
    year: i32,
    month: u32,
}

impl MonthStamp {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::InvalidStamp(format!("{year:04}-{month:02}")));
        }
        Ok(MonthStamp { year, month })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    /// Calendar month in `1..=12`.
    pub fn month(self) -> u32 {
        self.month
    }

    /// Months elapsed since January of year 0.
    pub fn ordinal(self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    pub fn from_ordinal(ordinal: i64) -> Self {
        let year = ordinal.div_euclid(12) as i32;
        let month = ordinal.rem_euclid(12) as u32 + 1;
        MonthStamp { year, month }
    }

    pub fn succ(self) -> Self {
        Self::from_ordinal(self.ordinal() + 1)
    }

    pub fn pred(self) -> Self {
        Self::from_ordinal(self.ordinal() - 1)
    }

    /// Signed number of months from `self` to `other`.
    pub fn months_until(self, other: MonthStamp) -> i64 {
        other.ordinal() - self.ordinal()
    }

    pub fn add_months(self, months: i64) -> Self {
        Self::from_ordinal(self.ordinal() + months)
    }
}

impl fmt::Display for MonthStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for MonthStamp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidStamp(s.to_string());
        let (y, m) = s.trim().split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        if !y.bytes().chain(m.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let year: i32 = y.parse().map_err(|_| bad())?;
        let month: u32 = m.parse().map_err(|_| bad())?;
        MonthStamp::new(year, month).map_err(|_| bad())
    }
}

impl Serialize for MonthStamp {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MonthStamp {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PricePoint {
    pub stamp: MonthStamp,
    pub price: f64,
}

/// One currency's contiguous monthly prices.
///
/// Construction guarantees strictly positive finite prices and stamps that
/// advance by exactly one month.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceSeries {
    currency: String,
    points: Vec<PricePoint>,
}

impl PriceSeries {
    pub fn new(currency: impl Into<String>, points: Vec<PricePoint>) -> Result<Self> {
        let currency = currency.into();
        if points.is_empty() {
            return Err(Error::SeriesTooShort { needed: 1, got: 0 });
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.price.is_finite() && p.price > 0.0) {
                return Err(Error::InvalidPrice {
                    column: currency.clone(),
                    stamp: p.stamp,
                    value: p.price.to_string(),
                });
            }
            if i > 0 {
                check_step(&currency, points[i - 1].stamp, p.stamp)?;
            }
        }
        Ok(PriceSeries { currency, points })
    }

    /// Builds a series starting at `start` with one value per month.
    pub fn from_values(currency: impl Into<String>, start: MonthStamp, values: &[f64]) -> Result<Self> {
        let points = values
            .iter()
            .enumerate()
            .map(|(i, &price)| PricePoint {
                stamp: start.add_months(i as i64),
                price,
            })
            .collect();
        Self::new(currency, points)
    }

    pub fn currency(&self) -> &str {
        &self.currency
    }

    pub fn points(&self) -> &[PricePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first_stamp(&self) -> MonthStamp {
        self.points[0].stamp
    }

    pub fn last_stamp(&self) -> MonthStamp {
        self.points[self.points.len() - 1].stamp
    }

    pub fn stamps(&self) -> Vec<MonthStamp> {
        self.points.iter().map(|p| p.stamp).collect()
    }

    pub fn prices(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.price).collect()
    }
}

fn check_step(column: &str, prev: MonthStamp, next: MonthStamp) -> Result<()> {
    match prev.months_until(next) {
        1 => Ok(()),
        0 => Err(Error::DuplicateStamp {
            column: column.to_string(),
            stamp: next,
        }),
        d if d < 0 => Err(Error::OutOfOrder {
            column: column.to_string(),
            stamp: next,
        }),
        _ => Err(Error::CalendarGap {
            column: column.to_string(),
            missing: prev.succ(),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReturnPoint {
    pub stamp: MonthStamp,
    /// Decimal fraction, `0.01` is one percent.
    pub ret: f64,
}

/// Month-over-month arithmetic returns. Each point carries the stamp of the
/// later month of its pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnSeries {
    currency: String,
    points: Vec<ReturnPoint>,
}

impl ReturnSeries {
    /// Fails on non-finite returns, returns at or below -100%, or
    /// non-contiguous stamps.
    pub fn new(currency: impl Into<String>, points: Vec<ReturnPoint>) -> Result<Self> {
        let currency = currency.into();
        for (i, p) in points.iter().enumerate() {
            if !(p.ret.is_finite() && p.ret > -1.0) {
                return Err(Error::InvalidPrice {
                    column: currency.clone(),
                    stamp: p.stamp,
                    value: p.ret.to_string(),
                });
            }
            if i > 0 {
                check_step(&currency, points[i - 1].stamp, p.stamp)?;
            }
        }
        Ok(ReturnSeries { currency, points })
    }

    pub fn currency(&self) -> &str {
        &self.currency
    }

    pub fn points(&self) -> &[ReturnPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn stamps(&self) -> Vec<MonthStamp> {
        self.points.iter().map(|p| p.stamp).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.ret).collect()
    }
}

/// A labelled group of series that share one stamp span.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesPanel {
    group: String,
    series: Vec<PriceSeries>,
}

impl SeriesPanel {
    /// Fails unless all members cover the same span and codes are unique.
    pub fn new(group: impl Into<String>, series: Vec<PriceSeries>) -> Result<Self> {
        let first = series.first().ok_or(Error::EmptyPanel)?;
        let (start, end) = (first.first_stamp(), first.last_stamp());
        let mut seen = HashSet::new();
        for s in &series {
            if !seen.insert(s.currency()) {
                return Err(Error::DuplicateCurrency(s.currency().to_string()));
            }
            if s.first_stamp() != start || s.last_stamp() != end {
                return Err(Error::MisalignedPanel {
                    currency: s.currency().to_string(),
                    expected_start: start,
                    expected_end: end,
                });
            }
        }
        Ok(SeriesPanel {
            group: group.into(),
            series,
        })
    }

    pub fn group(&self) -> &str {
        &self.group
    }

    pub fn series(&self) -> &[PriceSeries] {
        &self.series
    }

    pub fn currencies(&self) -> Vec<&str> {
        self.series.iter().map(|s| s.currency()).collect()
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn first_stamp(&self) -> MonthStamp {
        self.series[0].first_stamp()
    }

    pub fn last_stamp(&self) -> MonthStamp {
        self.series[0].last_stamp()
    }

    /// Number of months covered by every member.
    pub fn span_len(&self) -> usize {
        self.series[0].len()
    }

    /// Restricts every member to `start..=end`.
    pub fn slice(&self, start: MonthStamp, end: MonthStamp) -> Result<SeriesPanel> {
        let series = self
            .series
            .iter()
            .map(|s| slice_span(s, start, end))
            .collect::<Result<Vec<_>>>()?;
        SeriesPanel::new(self.group.clone(), series)
    }
}

/// Parses a `date,<CODE>[,<CODE>...]` document into a panel.
pub fn parse_panel_csv(text: &str, group: &str) -> Result<SeriesPanel> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = reader
        .headers()
        .map_err(|e| Error::MalformedHeader(e.to_string()))?
        .clone();
    let mut fields = header.iter();
    match fields.next() {
        Some("date") => {}
        Some(other) => {
            return Err(Error::MalformedHeader(format!(
                "first column must be `date`, found `{other}`"
            )))
        }
        None => return Err(Error::MalformedHeader("empty header".into())),
    }
    let codes: Vec<String> = fields.map(str::to_string).collect();
    if codes.is_empty() {
        return Err(Error::MalformedHeader("no currency columns".into()));
    }
    let mut seen = HashSet::new();
    for code in &codes {
        if code.is_empty() || code.chars().any(|c| c.is_whitespace() || c.is_control()) {
            return Err(Error::MalformedHeader(format!("invalid currency code `{code}`")));
        }
        if !seen.insert(code.as_str()) {
            return Err(Error::MalformedHeader(format!("duplicate currency code `{code}`")));
        }
    }

    let mut columns: Vec<Vec<PricePoint>> = vec![Vec::new(); codes.len()];
    let mut prev: Option<MonthStamp> = None;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::MalformedRow {
                line,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let stamp: MonthStamp = record
            .get(0)
            .ok_or_else(|| Error::MalformedRow {
                line,
                message: "missing date".into(),
            })?
            .parse()?;
        if let Some(p) = prev {
            check_step("date", p, stamp)?;
        }
        prev = Some(stamp);

        for (col, (code, raw)) in codes.iter().zip(record.iter().skip(1)).enumerate() {
            let invalid = || Error::InvalidPrice {
                column: code.clone(),
                stamp,
                value: raw.to_string(),
            };
            let price: f64 = raw.parse().map_err(|_| invalid())?;
            if !(price.is_finite() && price > 0.0) {
                return Err(invalid());
            }
            columns[col].push(PricePoint { stamp, price });
        }
    }

    if prev.is_none() {
        return Err(Error::SeriesTooShort { needed: 1, got: 0 });
    }

    let series = codes
        .into_iter()
        .zip(columns)
        .map(|(code, points)| PriceSeries::new(code, points))
        .collect::<Result<Vec<_>>>()?;
    SeriesPanel::new(group, series)
}

/// Renders a panel in the same CSV layout [`parse_panel_csv`] accepts.
/// Prices use the shortest representation that parses back to the same bits.
pub fn render_panel_csv(panel: &SeriesPanel) -> String {
    let mut out = String::from("date");
    for code in panel.currencies() {
        out.push(',');
        out.push_str(code);
    }
    out.push('\n');
    for row in 0..panel.span_len() {
        out.push_str(&panel.series[0].points[row].stamp.to_string());
        for s in &panel.series {
            out.push(',');
            out.push_str(&s.points[row].price.to_string());
        }
        out.push('\n');
    }
    out
}

/// Truncates every series to the common span.
pub fn align_panel(group: &str, series: Vec<PriceSeries>) -> Result<SeriesPanel> {
    if series.is_empty() {
        return Err(Error::EmptyPanel);
    }
    let start = series.iter().map(|s| s.first_stamp()).max().unwrap();
    let end = series.iter().map(|s| s.last_stamp()).min().unwrap();
    if start.months_until(end) < 1 {
        return Err(Error::EmptyIntersection);
    }
    let aligned = series
        .iter()
        .map(|s| slice_span(s, start, end))
        .collect::<Result<Vec<_>>>()?;
    SeriesPanel::new(group, aligned)
}

/// Arithmetic returns `(p_t - p_{t-1}) / p_{t-1}`.
pub fn to_returns(series: &PriceSeries) -> Result<ReturnSeries> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: series.len(),
        });
    }
    let points = series
        .points
        .windows(2)
        .map(|w| ReturnPoint {
            stamp: w[1].stamp,
            ret: (w[1].price - w[0].price) / w[0].price,
        })
        .collect();
    Ok(ReturnSeries {
        currency: series.currency.clone(),
        points,
    })
}

/// Inclusive sub-series `start..=end`.
pub fn slice_span(series: &PriceSeries, start: MonthStamp, end: MonthStamp) -> Result<PriceSeries> {
    let (first, last) = (series.first_stamp(), series.last_stamp());
    if start > end || start < first || end > last {
        return Err(Error::OutOfRange {
            start,
            end,
            first,
            last,
        });
    }
    let lo = first.months_until(start) as usize;
    let hi = first.months_until(end) as usize;
    Ok(PriceSeries {
        currency: series.currency.clone(),
        points: series.points[lo..=hi].to_vec(),
    })
}

/// Ratio of the last price to the first.
pub fn cumulative_growth(series: &PriceSeries) -> Result<f64> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: series.len(),
        });
    }
    Ok(series.points[series.len() - 1].price / series.points[0].price)
}
