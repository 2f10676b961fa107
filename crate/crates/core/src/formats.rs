//! Plain-text formats: matrix literals for fixtures and the matroid record
//! emitted by the CLI.
//!
//! A matrix literal is a header line of column labels followed by one line
//! per row of space-separated integers or n/d rationals. Lines starting with
//! `#` and blank lines are ignored.
//!
//! A matroid record wraps a matrix literal with `ground:` and `field:` lines
//! and an optional `circuits:` block listing one circuit per line.

use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact_linalg::{FieldTag, QMatrix, Rat};
use crate::matroid::CircuitSystem;

fn parse_entry(tok: &str, line_no: usize) -> Result<Rat> {
    BigRational::from_str(tok)
        .map_err(|_| Error::Schema(format!("line {line_no}: bad entry `{tok}`")))
}

fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// Parse a matrix literal: header with labels, then rows.
pub fn parse_matrix_literal(text: &str) -> Result<QMatrix> {
    let lines = content_lines(text);
    let Some(((_, header), rows)) = lines.split_first() else {
        return Err(Error::Schema("empty matrix literal".into()));
    };
    let labels: Vec<String> = header.split_whitespace().map(String::from).collect();
    let mut grid = Vec::new();
    for (no, line) in rows {
        let row: Result<Vec<Rat>> = line
            .split_whitespace()
            .map(|t| parse_entry(t, *no))
            .collect();
        let row = row?;
        if row.len() != labels.len() {
            return Err(Error::Schema(format!(
                "line {no}: {} entries for {} labels",
                row.len(),
                labels.len()
            )));
        }
        grid.push(row);
    }
    QMatrix::from_rows(grid, labels)
}

pub fn write_matrix_literal(m: &QMatrix) -> String {
    let mut out = String::new();
    out.push_str(&m.labels().join(" "));
    out.push('\n');
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// A parsed matroid record.
#[derive(Clone, PartialEq, Debug)]
pub struct MatroidRecord {
    pub field: FieldTag,
    pub matrix: QMatrix,
    pub circuits: Option<Vec<Vec<String>>>,
}

pub fn parse_matroid_record(text: &str) -> Result<MatroidRecord> {
    let lines = content_lines(text);
    let mut ground: Option<Vec<String>> = None;
    let mut field = FieldTag::Q;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut circuits: Option<Vec<Vec<String>>> = None;
    #[derive(PartialEq)]
    enum Section {
        Preamble,
        Matrix,
        Circuits,
    }
    let mut section = Section::Preamble;
    for (no, line) in lines {
        if let Some(rest) = line.strip_prefix("ground:") {
            ground = Some(rest.split_whitespace().map(String::from).collect());
        } else if let Some(rest) = line.strip_prefix("field:") {
            field = FieldTag::parse(rest)?;
        } else if line == "matrix:" {
            section = Section::Matrix;
        } else if line == "circuits:" {
            section = Section::Circuits;
            circuits = Some(Vec::new());
        } else {
            match section {
                Section::Matrix => {
                    let row: Result<Vec<Rat>> = line
                        .split_whitespace()
                        .map(|t| parse_entry(t, no))
                        .collect();
                    rows.push(row?);
                }
                Section::Circuits => circuits
                    .as_mut()
                    .expect("circuits section started")
                    .push(line.split_whitespace().map(String::from).collect()),
                Section::Preamble => {
                    return Err(Error::Schema(format!(
                        "line {no}: unexpected content before matrix section"
                    )))
                }
            }
        }
    }
    let ground = ground.ok_or_else(|| Error::Schema("missing ground: line".into()))?;
    for r in &rows {
        if r.len() != ground.len() {
            return Err(Error::Schema(format!(
                "matrix row has {} entries for {} ground elements",
                r.len(),
                ground.len()
            )));
        }
    }
    Ok(MatroidRecord {
        field,
        matrix: QMatrix::from_rows(rows, ground)?,
        circuits,
    })
}

pub fn write_matroid_record(
    field: FieldTag,
    matrix: &QMatrix,
    circuits: Option<&CircuitSystem>,
) -> String {
    let mut out = String::new();
    out.push_str(&format!("ground: {}\n", matrix.labels().join(" ")));
    out.push_str(&format!("field: {field}\n"));
    out.push_str("matrix:\n");
    for row in matrix.rows() {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    if let Some(cs) = circuits {
        out.push_str("circuits:\n");
        for c in cs.label_sets() {
            let names: Vec<String> = c.into_iter().collect();
            out.push_str(&names.join(" "));
            out.push('\n');
        }
    }
    out
}
