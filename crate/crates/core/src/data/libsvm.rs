use std::fmt::Write as _;
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::model::Label;

fn parse_label(tok: &str, line: usize) -> Result<Label> {
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::Parse { row: line, col: 1, msg: format!("bad label `{tok}`") })?;
    if v == 1.0 {
        Ok(Label::Positive)
    } else if v == -1.0 || v == 0.0 {
        Ok(Label::Negative)
    } else {
        Err(Error::Parse { row: line, col: 1, msg: format!("label `{tok}` not in {{-1, 0, 1}}") })
    }
}

/// Parses `label idx:val …` lines with 1-based, strictly ascending indices.
/// The dimension is the larger of `dim_hint` and the largest index seen.
pub fn parse_libsvm(name: &str, text: &str, dim_hint: Option<usize>) -> Result<Dataset> {
    let mut labels = Vec::new();
    let mut sparse: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut max_idx = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let label = parse_label(toks.next().expect("non-empty line"), line_no)?;
        let mut feats = Vec::new();
        let mut last = 0;
        for (k, tok) in toks.enumerate() {
            let col = k + 2;
            let (idx, val) = tok.split_once(':').ok_or_else(|| Error::Parse {
                row: line_no,
                col,
                msg: format!("expected index:value, got `{tok}`"),
            })?;
            let idx: usize = idx
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| Error::Parse { row: line_no, col, msg: format!("bad index `{idx}`") })?;
            let val: f64 = val
                .parse()
                .map_err(|_| Error::Parse { row: line_no, col, msg: format!("bad value `{val}`") })?;
            if !val.is_finite() {
                return Err(Error::NonFinite { row: line_no, col });
            }
            if idx <= last {
                return Err(Error::NonAscendingIndex { line: line_no });
            }
            last = idx;
            feats.push((idx, val));
        }
        max_idx = max_idx.max(last);
        labels.push(label);
        sparse.push(feats);
    }
    if labels.is_empty() {
        return Err(Error::EmptyFile);
    }
    let dim = dim_hint.unwrap_or(0).max(max_idx);
    let mut data = vec![0.0; labels.len() * dim];
    for (r, feats) in sparse.iter().enumerate() {
        for &(idx, val) in feats {
            data[r * dim + idx - 1] = val;
        }
    }
    Dataset::new(name, Mat::from_row_major(labels.len(), dim, data), labels)
}

pub fn load_libsvm(path: impl AsRef<Path>, dim_hint: Option<usize>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_libsvm(&name, &text, dim_hint)
}

/// Writes zero entries as absent; values use the shortest exact decimal form.
pub fn write_libsvm(ds: &Dataset) -> String {
    let mut out = String::new();
    for (i, &y) in ds.labels().iter().enumerate() {
        let _ = write!(out, "{y}");
        for (j, &v) in ds.row(i).iter().enumerate() {
            if v != 0.0 {
                let _ = write!(out, " {}:{}", j + 1, v);
            }
        }
        out.push('\n');
    }
    out
}
