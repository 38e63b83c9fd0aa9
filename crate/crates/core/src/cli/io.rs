//! Event files and number formatting.
//!
//! Univariate event files hold one decimal time per line; `#` starts a
//! comment line and blank lines are ignored. A CSV file whose header names a
//! `t` column is also accepted. Multivariate files are CSV with `t,component`.

use std::fmt;

use crate::error::HawkesError;
use crate::intensity::EventSequence;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// One-based line number, or 0 when the error is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// `(line number, time)` pairs in file order.
pub fn parse_times(text: &str) -> Result<Vec<(usize, f64)>, ParseError> {
    let mut lines = data_lines(text).peekable();
    let mut column = None;
    if let Some(&(_, first)) = lines.peek() {
        if first.parse::<f64>().is_err() {
            let idx = first
                .split(',')
                .position(|h| h.trim() == "t")
                .ok_or_else(|| err(1, format!("header `{first}` has no `t` column")))?;
            column = Some(idx);
            lines.next();
        }
    }
    lines
        .map(|(n, l)| {
            let field = match column {
                Some(idx) => l.split(',').nth(idx).ok_or_else(|| err(n, "missing `t` field"))?,
                None => l,
            };
            field
                .trim()
                .parse::<f64>()
                .map(|t| (n, t))
                .map_err(|_| err(n, format!("`{}` is not a number", field.trim())))
        })
        .collect()
}

/// Checks ordering and window membership, reporting the offending line.
pub fn validate_times(times: &[(usize, f64)], horizon: Option<f64>) -> Result<(), ParseError> {
    let mut prev: Option<f64> = None;
    for &(line, t) in times {
        if !t.is_finite() || t < 0.0 {
            return Err(err(line, format!("time {t} must be finite and >= 0")));
        }
        if let Some(p) = prev {
            if t <= p {
                return Err(err(line, format!("time {t} does not strictly follow {p}")));
            }
        }
        if let Some(h) = horizon {
            if t > h {
                return Err(err(line, format!("time {t} lies beyond horizon {h}")));
            }
        }
        prev = Some(t);
    }
    Ok(())
}

/// Parses and validates a univariate event file. Without a horizon the last
/// event closes the window.
pub fn read_event_sequence(text: &str, horizon: Option<f64>) -> Result<EventSequence, ParseError> {
    let parsed = parse_times(text)?;
    validate_times(&parsed, horizon)?;
    let times: Vec<f64> = parsed.into_iter().map(|(_, t)| t).collect();
    let result = match horizon {
        Some(h) => EventSequence::new(times, h),
        None => EventSequence::ending_at_last(times),
    };
    result.map_err(|e| match e {
        HawkesError::EmptyInput => err(0, "no events and no horizon"),
        other => err(0, other.to_string()),
    })
}

/// Parses a `t,component` file into `dim` streams (components are zero-based).
pub fn read_multivariate(text: &str, dim: usize, horizon: f64) -> Result<Vec<EventSequence>, ParseError> {
    let mut lines = data_lines(text).peekable();
    let (mut t_col, mut c_col) = (0, 1);
    if let Some(&(n, first)) = lines.peek() {
        if first.split(',').next().is_none_or(|f| f.trim().parse::<f64>().is_err()) {
            let headers: Vec<&str> = first.split(',').map(str::trim).collect();
            t_col = headers.iter().position(|h| *h == "t").ok_or_else(|| err(n, "no `t` column"))?;
            c_col = headers
                .iter()
                .position(|h| *h == "component")
                .ok_or_else(|| err(n, "no `component` column"))?;
            lines.next();
        }
    }
    let mut streams: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
    for (n, l) in lines {
        let fields: Vec<&str> = l.split(',').map(str::trim).collect();
        let t: f64 = fields
            .get(t_col)
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| err(n, "bad `t` field"))?;
        let c: usize = fields
            .get(c_col)
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| err(n, "bad `component` field"))?;
        if c >= dim {
            return Err(err(n, format!("component {c} out of range for {dim} components")));
        }
        streams[c].push((n, t));
    }
    streams
        .into_iter()
        .map(|s| {
            validate_times(&s, Some(horizon))?;
            EventSequence::new(s.into_iter().map(|(_, t)| t).collect(), horizon)
                .map_err(|e| err(0, e.to_string()))
        })
        .collect()
}

/// Decimal rendering with 12 significant digits, trailing zeros trimmed.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let exponent: i32 = sci.split('e').nth(1).and_then(|e| e.parse().ok()).unwrap_or(0);
    if !(-6..16).contains(&exponent) {
        return sci;
    }
    let decimals = (11 - exponent).max(0) as usize;
    let fixed = format!("{x:.decimals$}");
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        fixed
    }
}

/// One time per line.
pub fn write_times(times: &[f64]) -> String {
    let mut out = String::with_capacity(times.len() * 16);
    for &t in times {
        out.push_str(&format_number(t));
        out.push('\n');
    }
    out
}

/// `t,component` rows merged in time order.
pub fn write_multivariate(streams: &[EventSequence]) -> String {
    let mut rows: Vec<(f64, usize)> = streams
        .iter()
        .enumerate()
        .flat_map(|(c, s)| s.times().iter().map(move |&t| (t, c)))
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut out = String::from("t,component\n");
    for (t, c) in rows {
        out.push_str(&format!("{},{}\n", format_number(t), c));
    }
    out
}
