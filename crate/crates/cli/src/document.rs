//! The versioned document format shared by every subcommand.
//!
//! JSON documents look like
//!
//! ```json
//! {"schema_version":1,"kind":"lengths","values":[1.0,1.0,1.0,1.0,1.0,1.0],"label":"x"}
//! ```
//!
//! with `values` in canonical edge order `01, 02, 03, 12, 13, 23`. A stream
//! is any number of documents separated by whitespace. CSV streams start
//! with `l01,l02,l03,l12,l13,l23` (lengths) or `t01,…,t23` (angles) and carry
//! one six-value row per document; labels and metadata are not kept in CSV.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sphtet::{EdgeId, TetAngles, TetLengths};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Lengths,
    Angles,
}

impl Kind {
    pub fn other(self) -> Kind {
        match self {
            Kind::Lengths => Kind::Angles,
            Kind::Angles => Kind::Lengths,
        }
    }

    fn csv_prefix(self) -> char {
        match self {
            Kind::Lengths => 'l',
            Kind::Angles => 't',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Radians,
    Degrees,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    /// Max-norm distance between the input and the result of converting the
    /// output back.
    pub round_trip_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TetDocument {
    pub schema_version: u32,
    pub kind: Kind,
    pub values: [f64; 6],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Present only on display output; input must be in radians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl TetDocument {
    pub fn new(kind: Kind, values: [f64; 6]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind,
            values,
            label: None,
            units: None,
            metadata: None,
        }
    }

    pub fn lengths(lengths: &TetLengths) -> Self {
        Self::new(Kind::Lengths, lengths.values())
    }

    pub fn angles(angles: &TetAngles) -> Self {
        Self::new(Kind::Angles, angles.values())
    }

    /// Rejects documents that cannot be fed to the library.
    pub fn check(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::input(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.units == Some(Units::Degrees) {
            return Err(CliError::input("input values must be in radians"));
        }
        if let Some(bad) = self.values.iter().find(|x| !x.is_finite()) {
            return Err(CliError::input(format!("non-finite value {bad}")));
        }
        Ok(())
    }

    /// Copy with values converted to degrees, for display.
    pub fn to_degrees(&self) -> Self {
        Self {
            values: self.values.map(f64::to_degrees),
            units: Some(Units::Degrees),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub fn csv_header(kind: Kind, degrees: bool) -> String {
    let suffix = if degrees { "_deg" } else { "" };
    EdgeId::ALL
        .iter()
        .map(|e| format!("{}{e}{suffix}", kind.csv_prefix()))
        .collect::<Vec<_>>()
        .join(",")
}

/// One CSV row with 17 significant digits per value.
pub fn csv_row(values: &[f64; 6]) -> String {
    let mut row = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            row.push(',');
        }
        write!(row, "{v:.16e}").unwrap();
    }
    row
}

/// Serializes documents one at a time. CSV repeats the header whenever the
/// kind changes.
#[derive(Debug)]
pub struct Writer {
    format: Format,
    header: Option<(Kind, bool)>,
}

impl Writer {
    pub fn new(format: Format) -> Self {
        Self {
            format,
            header: None,
        }
    }

    pub fn render(&mut self, doc: &TetDocument) -> String {
        match self.format {
            Format::Json => serde_json::to_string(doc).expect("documents serialize") + "\n",
            Format::Csv => {
                let mut out = String::new();
                let current = (doc.kind, doc.units == Some(Units::Degrees));
                if self.header != Some(current) {
                    out.push_str(&csv_header(current.0, current.1));
                    out.push('\n');
                    self.header = Some(current);
                }
                out.push_str(&csv_row(&doc.values));
                out.push('\n');
                out
            }
        }
    }
}

pub fn write_documents(docs: &[TetDocument], format: Format) -> String {
    let mut writer = Writer::new(format);
    docs.iter().map(|d| writer.render(d)).collect()
}

/// Parses a JSON or CSV stream, chosen by the first non-blank character.
pub fn parse_documents(text: &str) -> Result<Vec<TetDocument>, CliError> {
    let docs = match text.trim_start().chars().next() {
        None => return Err(CliError::input("empty input")),
        Some('{') => parse_json(text)?,
        Some(_) => parse_csv(text)?,
    };
    for doc in &docs {
        doc.check()?;
    }
    Ok(docs)
}

fn parse_json(text: &str) -> Result<Vec<TetDocument>, CliError> {
    serde_json::Deserializer::from_str(text)
        .into_iter::<TetDocument>()
        .enumerate()
        .map(|(i, doc)| doc.map_err(|e| CliError::input(format!("document {i}: {e}"))))
        .collect()
}

fn parse_csv(text: &str) -> Result<Vec<TetDocument>, CliError> {
    let mut docs = Vec::new();
    let mut kind = None;
    for (n, line) in text.lines().enumerate().map(|(n, l)| (n + 1, l.trim())) {
        if line.is_empty() {
            continue;
        }
        if line == csv_header(Kind::Lengths, false) {
            kind = Some(Kind::Lengths);
            continue;
        }
        if line == csv_header(Kind::Angles, false) {
            kind = Some(Kind::Angles);
            continue;
        }
        let Some(kind) = kind else {
            return Err(CliError::input(format!(
                "line {n}: expected header {:?} or {:?}",
                csv_header(Kind::Lengths, false),
                csv_header(Kind::Angles, false)
            )));
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(CliError::input(format!(
                "line {n}: expected 6 values, found {}",
                fields.len()
            )));
        }
        let mut values = [0.0; 6];
        for (slot, field) in values.iter_mut().zip(&fields) {
            *slot = field
                .parse()
                .map_err(|_| CliError::input(format!("line {n}: {field:?} is not a number")))?;
        }
        docs.push(TetDocument::new(kind, values));
    }
    if docs.is_empty() {
        return Err(CliError::input("no data rows"));
    }
    Ok(docs)
}
