//! Caller/callee relation extraction from class files and archives.

pub mod archive;
mod names;
pub mod relation;

use std::collections::HashSet;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::classfile::{self, opcode, ClassFileError, ClassUnit, Constant};
pub use archive::{open_archive, ArchiveContents, ArchiveEntry, ArchiveError};
pub use names::{CallRecord, NameStyle, QualifiedName, RelationTable, UnitKind, CONSTRUCTOR_NAME};
pub use relation::{read_relation_table, write_relation_table, RelationError, TableFormat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("opcode 0x{0:02x} is not a classified call-site or type-use instruction")]
    UnknownOpcode(u8),
}

/// Maps a call-site or type-use instruction to the callee's unit kind.
///
/// Classification follows the dispatch instruction, not the target's
/// declaration: an `invokestatic` on an interface's static method is `S`.
pub fn classify_callee(op: u8, target: &QualifiedName) -> Result<UnitKind, ExtractError> {
    Ok(match op {
        opcode::INVOKEVIRTUAL => UnitKind::M,
        opcode::INVOKEINTERFACE => UnitKind::I,
        opcode::INVOKESTATIC => UnitKind::S,
        opcode::INVOKESPECIAL if target.is_constructor() => UnitKind::O,
        opcode::INVOKESPECIAL => UnitKind::M,
        op if opcode::is_field_access(op) || opcode::is_type_use(op) => UnitKind::C,
        opcode::LDC | opcode::LDC_W => UnitKind::C,
        other => return Err(ExtractError::UnknownOpcode(other)),
    })
}

/// Counters from extracting one or more classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExtractStats {
    pub classes: usize,
    /// invokevirtual/special/static/interface instructions seen.
    pub call_sites: usize,
    /// Call sites whose target could not be named (array receivers,
    /// unresolvable constant pool entries).
    pub skipped_unresolvable: usize,
    pub class_records: usize,
}

impl ExtractStats {
    pub fn call_records(&self) -> usize {
        self.call_sites - self.skipped_unresolvable
    }

    fn merge(&mut self, other: &ExtractStats) {
        self.classes += other.classes;
        self.call_sites += other.call_sites;
        self.skipped_unresolvable += other.skipped_unresolvable;
        self.class_records += other.class_records;
    }
}

/// Element class of an internal class name or array descriptor; `None` for
/// primitive arrays.
fn element_class(name: &str) -> Option<&str> {
    let stripped = name.trim_start_matches('[');
    if stripped.len() == name.len() {
        return Some(name);
    }
    stripped.strip_prefix('L')?.strip_suffix(';')
}

fn referenced_class(unit: &ClassUnit, op: u8, index: u16) -> Option<String> {
    let pool = &unit.constant_pool;
    let raw = if opcode::is_field_access(op) {
        pool.member_ref(index).ok()?.owner
    } else if op == opcode::LDC || op == opcode::LDC_W {
        match pool.get(index).ok()? {
            Constant::Class { name_index } => pool.utf8(*name_index).ok()?.to_owned(),
            _ => return None,
        }
    } else {
        pool.class_name(index).ok()?.to_owned()
    };
    element_class(&raw).map(str::to_owned)
}

/// Extracts one record per call-site instruction plus one class-usage
/// record per distinct class referenced through field access or type use.
///
/// Method records come first, in declaration then bytecode-offset order;
/// class-usage records follow in first-reference order. The caller's own
/// class is never emitted as a class-usage target.
pub fn extract_calls(unit: &ClassUnit) -> (Vec<CallRecord>, ExtractStats) {
    let mut records = Vec::new();
    let mut stats = ExtractStats {
        classes: 1,
        ..Default::default()
    };
    let mut seen_classes: HashSet<String> = HashSet::new();
    let mut class_refs: Vec<String> = Vec::new();
    let this_class = &unit.this_class;

    for method in &unit.methods {
        let Some(code) = &method.code else { continue };
        let caller = QualifiedName::method(this_class, &method.name, &method.descriptor);
        for ins in code {
            let Some(index) = ins.cp_index else { continue };
            if opcode::is_call_site(ins.opcode) {
                stats.call_sites += 1;
                let target = match unit.constant_pool.member_ref(index) {
                    Ok(r) if !r.owner.starts_with('[') => r,
                    _ => {
                        stats.skipped_unresolvable += 1;
                        continue;
                    }
                };
                let callee = QualifiedName::method(&target.owner, &target.name, &target.descriptor);
                let callee_kind = match classify_callee(ins.opcode, &callee) {
                    Ok(k) => k,
                    Err(_) => {
                        stats.skipped_unresolvable += 1;
                        continue;
                    }
                };
                records.push(CallRecord {
                    caller_kind: UnitKind::M,
                    caller: caller.clone(),
                    callee_kind,
                    callee,
                });
            } else if opcode::is_field_access(ins.opcode)
                || opcode::is_type_use(ins.opcode)
                || ins.opcode == opcode::LDC
                || ins.opcode == opcode::LDC_W
            {
                if let Some(class) = referenced_class(unit, ins.opcode, index) {
                    if &class != this_class && seen_classes.insert(class.clone()) {
                        class_refs.push(class);
                    }
                }
            }
        }
    }

    let caller_class = QualifiedName::class(this_class);
    stats.class_records = class_refs.len();
    records.extend(class_refs.into_iter().map(|c| CallRecord {
        caller_kind: UnitKind::C,
        caller: caller_class.clone(),
        callee_kind: UnitKind::C,
        callee: QualifiedName::class(&c),
    }));
    (records, stats)
}

/// An archive entry that could not be read or parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedEntry {
    pub entry: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct ArchiveExtraction {
    pub table: RelationTable,
    pub stats: ExtractStats,
    pub skipped: Vec<SkippedEntry>,
}

#[derive(Debug, Error)]
pub enum ArchiveExtractError {
    #[error(transparent)]
    Archive(#[from] ArchiveError),
    #[error("{entry}: {source}")]
    Class {
        entry: String,
        source: ClassFileError,
    },
}

/// Reads every class of an archive and extracts its relation table.
///
/// Classes are parsed in parallel; records keep archive-entry order. With
/// `tolerant`, undecodable or unparsable entries are skipped and listed
/// instead of failing the whole run.
pub fn extract_archive(
    path: &Path,
    tolerant: bool,
) -> Result<ArchiveExtraction, ArchiveExtractError> {
    let contents = open_archive(path, tolerant)?;
    let mut skipped: Vec<SkippedEntry> = contents
        .skipped
        .iter()
        .map(|e| SkippedEntry {
            entry: e.entry.clone(),
            reason: e.reason.clone(),
        })
        .collect();

    let parsed: Vec<(
        String,
        Result<(Vec<CallRecord>, ExtractStats), ClassFileError>,
    )> = contents
        .entries
        .par_iter()
        .map(|e| {
            (
                e.name.clone(),
                classfile::parse_class(&e.bytes).map(|u| extract_calls(&u)),
            )
        })
        .collect();

    let mut table = RelationTable {
        source_archive: path.display().to_string(),
        ..Default::default()
    };
    let mut stats = ExtractStats::default();
    for (entry, result) in parsed {
        match result {
            Ok((records, s)) => {
                table.records.extend(records);
                stats.merge(&s);
            }
            Err(source) if tolerant => skipped.push(SkippedEntry {
                entry,
                reason: source.to_string(),
            }),
            Err(source) => return Err(ArchiveExtractError::Class { entry, source }),
        }
    }
    table.class_count = stats.classes;
    Ok(ArchiveExtraction {
        table,
        stats,
        skipped,
    })
}
