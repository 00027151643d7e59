use std::path::PathBuf;

use crate::calendar::MonthStamp;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used to pick a process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad arguments or unreadable/unwritable files.
    Usage,
    /// Input data violates a series or panel contract.
    Validation,
    /// A computation is undefined for the supplied values.
    Numeric,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 1,
            ErrorKind::Validation => 2,
            ErrorKind::Numeric => 3,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("line {line}: {message}")]
    MalformedRow { line: usize, message: String },

    #[error("invalid month stamp `{0}` (expected YYYY-MM)")]
    InvalidStamp(String),

    #[error("column {column} at {stamp}: invalid price `{value}` (must be a positive number)")]
    InvalidPrice {
        column: String,
        stamp: MonthStamp,
        value: String,
    },

    #[error("column {column}: calendar gap, missing {missing}")]
    CalendarGap { column: String, missing: MonthStamp },

    #[error("column {column}: duplicate stamp {stamp}")]
    DuplicateStamp { column: String, stamp: MonthStamp },

    #[error("column {column}: stamp {stamp} is out of order")]
    OutOfOrder { column: String, stamp: MonthStamp },

    #[error("duplicate currency code {0} in panel")]
    DuplicateCurrency(String),

    #[error("panel is empty")]
    EmptyPanel,

    #[error("series spans do not overlap by at least 2 months")]
    EmptyIntersection,

    #[error("panel members do not share the span {expected_start}..{expected_end} ({currency} differs)")]
    MisalignedPanel {
        currency: String,
        expected_start: MonthStamp,
        expected_end: MonthStamp,
    },

    #[error("range {start}..{end} is outside the series span {first}..{last}")]
    OutOfRange {
        start: MonthStamp,
        end: MonthStamp,
        first: MonthStamp,
        last: MonthStamp,
    },

    #[error("series too short: {needed} observations required, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("non-positive value {value} at position {index} under the multiplicative model")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("non-finite value at position {0}")]
    NonFinite(usize),

    #[error("stamps are not contiguous at position {0}")]
    NonContiguousStamps(usize),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("insufficient sample: {needed} observations required, got {got}")]
    InsufficientSample { needed: usize, got: usize },

    #[error("constant sample{}", .0.as_deref().map(|s| format!(" ({s})")).unwrap_or_default())]
    ConstantSample(Option<String>),

    #[error("month {month}: {got} observation(s), the t-test needs at least 2")]
    SparseMonth { month: u32, got: usize },

    #[error("season slot {0} has no detrended observations")]
    EmptySeason(usize),

    #[error("zero actual value at position {0}; MAPE is undefined")]
    ZeroActual(usize),

    #[error("mixed decomposition models across currencies")]
    MixedModels,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Io { .. } | InvalidParameter(_) => ErrorKind::Usage,
            MalformedHeader(_)
            | MalformedRow { .. }
            | InvalidStamp(_)
            | InvalidPrice { .. }
            | CalendarGap { .. }
            | DuplicateStamp { .. }
            | OutOfOrder { .. }
            | DuplicateCurrency(_)
            | EmptyPanel
            | EmptyIntersection
            | MisalignedPanel { .. }
            | OutOfRange { .. }
            | SeriesTooShort { .. }
            | NonPositiveValue { .. }
            | NonFinite(_)
            | NonContiguousStamps(_) => ErrorKind::Validation,
            LengthMismatch { .. }
            | InsufficientSample { .. }
            | ConstantSample(_)
            | SparseMonth { .. }
            | EmptySeason(_)
            | ZeroActual(_)
            | MixedModels => ErrorKind::Numeric,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
