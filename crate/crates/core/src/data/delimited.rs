use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::model::Label;

/// Which column holds the label and which value of it is the positive class.
#[derive(Debug, Clone, PartialEq)]
pub struct DelimitedOptions {
    /// 0-based label column; `None` means the last column.
    pub label_column: Option<usize>,
    pub positive_label: String,
    /// 0-based columns dropped before parsing (ids, names).
    pub ignore_columns: Vec<usize>,
}

impl DelimitedOptions {
    pub fn new(label_column: Option<usize>, positive_label: impl Into<String>) -> Self {
        DelimitedOptions { label_column, positive_label: positive_label.into(), ignore_columns: Vec::new() }
    }

    pub fn ignoring(mut self, cols: impl IntoIterator<Item = usize>) -> Self {
        self.ignore_columns.extend(cols);
        self
    }
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

fn label_matches(value: &str, positive: &str) -> bool {
    if value == positive {
        return true;
    }
    match (value.parse::<f64>(), positive.parse::<f64>()) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

/// Parses comma- or whitespace-separated rows. A first row whose feature
/// fields are not all numeric is treated as a header and skipped.
pub fn parse_delimited(name: &str, text: &str, opts: &DelimitedOptions) -> Result<Dataset> {
    let mut rows: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, split_fields(l.trim())))
        .collect();
    if rows.is_empty() {
        return Err(Error::EmptyFile);
    }
    let width = rows[0].1.len();
    let label_col = opts.label_column.unwrap_or(width.saturating_sub(1));
    if label_col >= width {
        return Err(Error::Validation(format!("label column {label_col} out of range for {width} columns")));
    }
    let is_feature = |c: usize| c != label_col && !opts.ignore_columns.contains(&c);

    let header = rows[0]
        .1
        .iter()
        .enumerate()
        .any(|(c, f)| is_feature(c) && f.parse::<f64>().is_err());
    if header {
        rows.remove(0);
    }
    if rows.is_empty() {
        return Err(Error::EmptyFile);
    }

    let dim = (0..width).filter(|&c| is_feature(c)).count();
    let mut x = Mat::with_cols(dim);
    let mut y = Vec::with_capacity(rows.len());
    let mut feat = Vec::with_capacity(dim);
    for (line_no, fields) in &rows {
        if fields.len() != width {
            return Err(Error::Parse {
                row: *line_no,
                col: fields.len().min(width) + 1,
                msg: format!("expected {width} columns, found {}", fields.len()),
            });
        }
        feat.clear();
        for (c, f) in fields.iter().enumerate() {
            if !is_feature(c) {
                continue;
            }
            let v: f64 = f.parse().map_err(|_| Error::Parse {
                row: *line_no,
                col: c + 1,
                msg: format!("not a number: `{f}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite { row: *line_no, col: c + 1 });
            }
            feat.push(v);
        }
        x.push_row(&feat)?;
        y.push(if label_matches(fields[label_col], &opts.positive_label) {
            Label::Positive
        } else {
            Label::Negative
        });
    }
    Dataset::new(name, x, y)
}

pub fn load_delimited(path: impl AsRef<Path>, opts: &DelimitedOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_delimited(&name, &text, opts)
}
