//! The fitted-model file format.
//!
//! ```text
//! MAGIC-MODEL v1
//! k<TAB>3
//! n<TAB>300
//! mode<TAB>net
//! sweeps<TAB>42
//! trace<TAB>-10.5 -9.25 ...
//! eta
//! <K rows of K space-separated values>
//! f
//! <N rows of K space-separated values>
//! ```
//!
//! Values are rendered with 17 significant digits, which round-trips every
//! finite double bit-exactly. Loading is strict: wrong counts, trailing
//! garbage, or truncation never yield a silent partial model.

use std::path::Path;

use crate::io::{parse_error, write_atomic, IoError};
use crate::matrix::Matrix;
use crate::model::{FittedModel, Mode};

pub const MODEL_FORMAT_HEADER: &str = "MAGIC-MODEL v1";

fn render_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes a fitted model to disk.
pub fn save_model(path: &Path, model: &FittedModel) -> Result<(), IoError> {
    let mut text = String::new();
    text.push_str(MODEL_FORMAT_HEADER);
    text.push('\n');
    text.push_str(&format!("k\t{}\n", model.community_count()));
    text.push_str(&format!("n\t{}\n", model.node_count()));
    text.push_str(&format!("mode\t{}\n", model.mode.as_str()));
    text.push_str(&format!("sweeps\t{}\n", model.sweeps));
    let trace: Vec<String> = model.trace.iter().map(|&v| render_value(v)).collect();
    text.push_str(&format!("trace\t{}\n", trace.join(" ")));
    text.push_str("eta\n");
    for row in 0..model.interactions.rows() {
        let values: Vec<String> = model
            .interactions
            .row(row)
            .iter()
            .map(|&v| render_value(v))
            .collect();
        text.push_str(&values.join(" "));
        text.push('\n');
    }
    text.push_str("f\n");
    for row in 0..model.affiliations.rows() {
        let values: Vec<String> = model
            .affiliations
            .row(row)
            .iter()
            .map(|&v| render_value(v))
            .collect();
        text.push_str(&values.join(" "));
        text.push('\n');
    }
    write_atomic(path, &text)
}

struct Lines<'a> {
    path: &'a Path,
    lines: std::str::Lines<'a>,
    number: usize,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self) -> Result<&'a str, IoError> {
        self.number += 1;
        self.lines
            .next()
            .ok_or_else(|| parse_error(self.path, self.number, "unexpected end of file"))
    }

    fn expect_field(&mut self, key: &str) -> Result<&'a str, IoError> {
        let line = self.next_line()?;
        let (k, v) = line.split_once('\t').ok_or_else(|| {
            parse_error(self.path, self.number, format!("expected `{key}<TAB>value`"))
        })?;
        if k != key {
            return Err(parse_error(
                self.path,
                self.number,
                format!("expected field {key:?}, found {k:?}"),
            ));
        }
        Ok(v)
    }

    fn expect_marker(&mut self, marker: &str) -> Result<(), IoError> {
        let line = self.next_line()?;
        if line != marker {
            return Err(parse_error(
                self.path,
                self.number,
                format!("expected section marker {marker:?}, found {line:?}"),
            ));
        }
        Ok(())
    }

    fn parse_row(&mut self, expected: usize) -> Result<Vec<f64>, IoError> {
        let line = self.next_line()?;
        let values: Result<Vec<f64>, _> = line
            .split(' ')
            .filter(|s| !s.is_empty())
            .map(str::parse::<f64>)
            .collect();
        let values =
            values.map_err(|e| parse_error(self.path, self.number, format!("bad value: {e}")))?;
        if values.len() != expected {
            return Err(parse_error(
                self.path,
                self.number,
                format!("expected {expected} values, found {}", values.len()),
            ));
        }
        Ok(values)
    }
}

/// Loads a model saved by [`save_model`].
pub fn load_model(path: &Path) -> Result<FittedModel, IoError> {
    let contents = std::fs::read_to_string(path)?;
    let mut lines = Lines {
        path,
        lines: contents.lines(),
        number: 0,
    };

    let header = lines.next_line()?;
    if header != MODEL_FORMAT_HEADER {
        return Err(IoError::FormatVersionMismatch(header.to_string()));
    }

    let communities: usize = lines
        .expect_field("k")?
        .parse()
        .map_err(|_| parse_error(path, lines.number, "invalid community count"))?;
    let nodes: usize = lines
        .expect_field("n")?
        .parse()
        .map_err(|_| parse_error(path, lines.number, "invalid node count"))?;
    let mode: Mode = lines
        .expect_field("mode")?
        .parse()
        .map_err(|e| parse_error(path, lines.number, e))?;
    let sweeps: usize = lines
        .expect_field("sweeps")?
        .parse()
        .map_err(|_| parse_error(path, lines.number, "invalid sweep count"))?;
    let trace_text = lines.expect_field("trace")?;
    let trace: Result<Vec<f64>, _> = trace_text
        .split(' ')
        .filter(|s| !s.is_empty())
        .map(str::parse::<f64>)
        .collect();
    let trace =
        trace.map_err(|e| parse_error(path, lines.number, format!("bad trace value: {e}")))?;

    lines.expect_marker("eta")?;
    let mut interactions = Matrix::zeros(communities, communities);
    for row in 0..communities {
        let values = lines.parse_row(communities)?;
        interactions.row_mut(row).copy_from_slice(&values);
    }
    lines.expect_marker("f")?;
    let mut affiliations = Matrix::zeros(nodes, communities);
    for row in 0..nodes {
        let values = lines.parse_row(communities)?;
        affiliations.row_mut(row).copy_from_slice(&values);
    }
    if let Some(extra) = lines.lines.next() {
        if !extra.is_empty() || lines.lines.next().is_some() {
            return Err(parse_error(
                path,
                lines.number + 1,
                "trailing content after the affiliation rows",
            ));
        }
    }

    Ok(FittedModel {
        log_likelihood: trace.last().copied().unwrap_or(f64::NAN),
        sweeps,
        trace,
        mode,
        affiliations,
        interactions,
    })
}
