//! Count, joint-table and phase-file ingestion.
//!
//! Inputs starting with `{` are read as JSON, anything else as CSV. Syntax
//! problems map to [`Error::Parse`] with a 1-based line and column; valid
//! syntax carrying invalid values (duplicate labels, zero totals, ragged
//! tables) maps to the semantic variants.

use std::fmt;
use std::marker::PhantomData;

use indexmap::IndexMap;
use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;

use crate::complex::{BlockSpectralFamily, PhaseAssignment};
use crate::error::{Error, Result};
use crate::joint::JointTable;
use crate::prob::{CountTable, OutcomeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub fn detect_format(text: &str) -> Format {
    match text.trim_start().chars().next() {
        Some('{') => Format::Json,
        _ => Format::Csv,
    }
}

/// JSON object read as key/value pairs in document order, duplicates kept.
struct Entries<V>(Vec<(String, V)>);

impl<'de, V: Deserialize<'de>> Deserialize<'de> for Entries<V> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EntriesVisitor<V>(PhantomData<V>);

        impl<'de, V: Deserialize<'de>> Visitor<'de> for EntriesVisitor<V> {
            type Value = Entries<V>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Self::Value, A::Error> {
                let mut out = Vec::with_capacity(map.size_hint().unwrap_or(0));
                while let Some(entry) = map.next_entry()? {
                    out.push(entry);
                }
                Ok(Entries(out))
            }
        }

        deserializer.deserialize_map(EntriesVisitor(PhantomData))
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn csv_error(e: &csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Parse {
        line,
        column: 1,
        message: e.to_string(),
    }
}

// Column of the `field`-th comma-separated cell on the record's source line,
// pointing past any leading whitespace.
fn field_error(text: &str, record: &csv::StringRecord, field: usize, message: String) -> Error {
    let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
    let column = text
        .lines()
        .nth(line.saturating_sub(1))
        .map(|src| {
            let cells: Vec<&str> = src.split(',').collect();
            let start: usize = cells.iter().take(field).map(|c| c.len() + 1).sum();
            let pad = cells.get(field).map_or(0, |c| c.len() - c.trim_start().len());
            start + pad + 1
        })
        .unwrap_or(1);
    Error::Parse { line, column, message }
}

fn reject_duplicates<'a>(labels: impl IntoIterator<Item = &'a str>) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::InvalidOutcomes(format!("duplicate label {l:?}")));
        }
    }
    Ok(())
}

/// Reads CSV with exactly the given header, trimming whitespace.
fn csv_records(text: &str, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let found = reader.headers().map_err(|e| csv_error(&e))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected header `{}`, found `{}`", header.join(","), found.iter().collect::<Vec<_>>().join(",")),
        });
    }
    reader
        .records()
        .map(|r| r.map_err(|e| csv_error(&e)))
        .collect()
}

fn parse_count(text: &str, record: &csv::StringRecord, field: usize) -> Result<u64> {
    let raw = &record[field];
    raw.parse::<u64>()
        .map_err(|_| field_error(text, record, field, format!("count {raw:?} is not a nonnegative integer")))
}

/// Outcome counts from `label,count` CSV or a `{label: count}` JSON object.
pub fn parse_counts(text: &str) -> Result<CountTable> {
    let pairs: Vec<(String, u64)> = match detect_format(text) {
        Format::Json => serde_json::from_str::<Entries<u64>>(text).map_err(json_error)?.0,
        Format::Csv => csv_records(text, &["label", "count"])?
            .iter()
            .map(|r| Ok((r[0].to_string(), parse_count(text, r, 1)?)))
            .collect::<Result<_>>()?,
    };
    reject_duplicates(pairs.iter().map(|(l, _)| l.as_str()))?;
    CountTable::from_pairs(pairs)
}

#[derive(Deserialize)]
struct JointJson {
    rows: Vec<String>,
    cols: Vec<String>,
    counts: Vec<Vec<u64>>,
}

/// Joint counts from `row_label,col_label,count` CSV or
/// `{rows, cols, counts}` JSON.
pub fn parse_joint_counts(text: &str) -> Result<JointTable> {
    match detect_format(text) {
        Format::Json => {
            let j: JointJson = serde_json::from_str(text).map_err(json_error)?;
            JointTable::from_counts(OutcomeSet::new(j.rows)?, OutcomeSet::new(j.cols)?, j.counts)
        }
        Format::Csv => {
            let records = csv_records(text, &["row_label", "col_label", "count"])?;
            let mut cells: IndexMap<(String, String), u64> = IndexMap::new();
            let mut rows: IndexMap<String, ()> = IndexMap::new();
            let mut cols: IndexMap<String, ()> = IndexMap::new();
            for r in &records {
                let count = parse_count(text, r, 2)?;
                let key = (r[0].to_string(), r[1].to_string());
                rows.insert(key.0.clone(), ());
                cols.insert(key.1.clone(), ());
                if cells.insert(key.clone(), count).is_some() {
                    return Err(Error::InvalidTable(format!("cell ({}, {}) given twice", key.0, key.1)));
                }
            }
            let counts = rows
                .keys()
                .map(|row| {
                    cols.keys()
                        .map(|col| {
                            cells.get(&(row.clone(), col.clone())).copied().ok_or_else(|| {
                                Error::InvalidTable(format!("missing cell ({row}, {col})"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            JointTable::from_counts(
                OutcomeSet::new(rows.into_keys())?,
                OutcomeSet::new(cols.into_keys())?,
                counts,
            )
        }
    }
}

/// Phase file: JSON object mapping basis labels to radians.
pub fn parse_phases(text: &str) -> Result<Vec<(String, f64)>> {
    let entries = serde_json::from_str::<Entries<f64>>(text).map_err(json_error)?.0;
    reject_duplicates(entries.iter().map(|(l, _)| l.as_str()))?;
    Ok(entries)
}

/// Phases over the ambient indices of `family`. A key equal to an outcome
/// label sets every index of that outcome's block; a decimal key sets that
/// ambient index. Unset indices stay at zero.
pub fn phases_for_family(
    outcomes: &OutcomeSet,
    family: &BlockSpectralFamily,
    entries: &[(String, f64)],
) -> Result<PhaseAssignment> {
    let mut alpha = vec![0.0; family.dim()];
    for (key, angle) in entries {
        if let Some(k) = outcomes.index_of(key) {
            for &j in family.block(k)? {
                alpha[j] = *angle;
            }
        } else if let Some(j) = key.parse::<usize>().ok().filter(|&j| j < family.dim()) {
            alpha[j] = *angle;
        } else {
            return Err(Error::InvalidPhases(format!("unknown basis label {key:?}")));
        }
    }
    PhaseAssignment::new(alpha)
}

/// Phases over the joint basis, keyed by `row label + column label`.
pub fn phases_for_basis(labels: &[String], entries: &[(String, f64)]) -> Result<PhaseAssignment> {
    let mut alpha = vec![0.0; labels.len()];
    for (key, angle) in entries {
        let j = labels
            .iter()
            .position(|l| l == key)
            .ok_or_else(|| Error::InvalidPhases(format!("unknown basis label {key:?}")))?;
        alpha[j] = *angle;
    }
    PhaseAssignment::new(alpha)
}
