//! Relation table CSV/TSV serialization.
//!
//! Four columns, header `caller_kind,caller,callee_kind,callee`, UTF-8, LF
//! line endings.

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use super::{CallRecord, NameStyle, QualifiedName, RelationTable, UnitKind};

pub const HEADER: [&str; 4] = ["caller_kind", "caller", "callee_kind", "callee"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Csv,
    Tsv,
}

impl TableFormat {
    fn delimiter(self) -> u8 {
        match self {
            TableFormat::Csv => b',',
            TableFormat::Tsv => b'\t',
        }
    }

    /// Picks TSV for `.tsv` paths, CSV otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("tsv") => TableFormat::Tsv,
            _ => TableFormat::Csv,
        }
    }
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "tsv" => Ok(TableFormat::Tsv),
            other => Err(format!(
                "unknown table format {other:?} (expected csv or tsv)"
            )),
        }
    }
}

#[derive(Debug, Error)]
pub enum RelationError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub fn write_records<W: Write>(
    table: &RelationTable,
    out: W,
    format: TableFormat,
    style: NameStyle,
) -> Result<(), RelationError> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in &table.records {
        w.write_record([
            r.caller_kind.as_char().to_string(),
            r.caller.render(style),
            r.callee_kind.as_char().to_string(),
            r.callee.render(style),
        ])?;
    }
    w.flush().map_err(|source| RelationError::Io {
        path: PathBuf::new(),
        source,
    })?;
    Ok(())
}

pub fn write_relation_table(
    table: &RelationTable,
    path: &Path,
    format: TableFormat,
    style: NameStyle,
) -> Result<(), RelationError> {
    let file = File::create(path).map_err(|source| RelationError::Io {
        path: path.to_owned(),
        source,
    })?;
    write_records(table, BufWriter::new(file), format, style)
}

pub fn read_records<R: Read>(
    input: R,
    format: TableFormat,
) -> Result<Vec<CallRecord>, RelationError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(format.delimiter())
        .has_headers(false)
        .from_reader(input);
    let mut records = Vec::new();
    let mut rows = rdr.records();
    match rows.next() {
        Some(header) => {
            let header = header?;
            if header.iter().collect::<Vec<_>>() != HEADER {
                return Err(RelationError::Parse {
                    line: 1,
                    reason: format!("bad header {header:?}"),
                });
            }
        }
        None => {
            return Err(RelationError::Parse {
                line: 1,
                reason: "missing header".into(),
            })
        }
    }
    for row in rows {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let err = |reason: String| RelationError::Parse { line, reason };
        if row.len() != 4 {
            return Err(err(format!("expected 4 fields, found {}", row.len())));
        }
        records.push(CallRecord {
            caller_kind: UnitKind::from_str(&row[0]).map_err(err)?,
            caller: QualifiedName::parse(&row[1]).map_err(err)?,
            callee_kind: UnitKind::from_str(&row[2]).map_err(err)?,
            callee: QualifiedName::parse(&row[3]).map_err(err)?,
        });
    }
    Ok(records)
}

/// Reads a table written by [`write_relation_table`]. `class_count` is the
/// number of distinct caller classes, the only class count recoverable
/// from the four columns.
pub fn read_relation_table(
    path: &Path,
    format: TableFormat,
) -> Result<RelationTable, RelationError> {
    let file = File::open(path).map_err(|source| RelationError::Io {
        path: path.to_owned(),
        source,
    })?;
    let records = read_records(io::BufReader::new(file), format)?;
    let class_count = records
        .iter()
        .map(|r| r.caller.class_fqn())
        .collect::<HashSet<_>>()
        .len();
    Ok(RelationTable {
        records,
        source_archive: path.display().to_string(),
        class_count,
    })
}
