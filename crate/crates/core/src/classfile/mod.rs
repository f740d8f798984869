//! JVM class-file parsing.
//!
//! [`parse_class`] reads the header, resolves and validates the constant
//! pool, and decodes the instruction stream of every method that carries a
//! `Code` attribute. Methods of every visibility are kept, synthetic and
//! bridge methods included.

pub mod code;
pub mod constant_pool;
mod reader;

use thiserror::Error;

pub use code::{opcode, Instruction};
pub use constant_pool::{Constant, ConstantPool, MemberRef};
use reader::ByteReader;

pub const MAGIC: u32 = 0xCAFE_BABE;
pub const MIN_MAJOR_VERSION: u16 = 45;
/// Java 26.
pub const MAX_MAJOR_VERSION: u16 = 70;

pub const ACC_INTERFACE: u16 = 0x0200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassFileError {
    #[error("bad magic number 0x{0:08x}")]
    BadMagic(u32),
    #[error("unsupported class-file version {major}.{minor}")]
    UnsupportedVersion { major: u16, minor: u16 },
    #[error("malformed constant pool: {0}")]
    MalformedConstantPool(String),
    #[error("malformed code at offset {offset}: {reason}")]
    MalformedCode { offset: u32, reason: String },
    #[error("truncated class file at byte {offset}")]
    Truncated { offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodUnit {
    pub access_flags: u16,
    pub name: String,
    pub descriptor: String,
    /// `None` for abstract and native methods.
    pub code: Option<Vec<Instruction>>,
}

#[derive(Debug, Clone)]
pub struct ClassUnit {
    pub minor_version: u16,
    pub major_version: u16,
    pub access_flags: u16,
    /// Internal (slash-separated) binary name.
    pub this_class: String,
    pub super_class: Option<String>,
    pub interfaces: Vec<String>,
    pub field_count: usize,
    pub methods: Vec<MethodUnit>,
    pub constant_pool: ConstantPool,
}

impl ClassUnit {
    pub fn is_interface(&self) -> bool {
        self.access_flags & ACC_INTERFACE != 0
    }

    pub fn call_site_count(&self) -> usize {
        self.methods
            .iter()
            .filter_map(|m| m.code.as_ref())
            .flatten()
            .filter(|i| opcode::is_call_site(i.opcode))
            .count()
    }
}

fn skip_attributes(reader: &mut ByteReader<'_>) -> Result<(), ClassFileError> {
    let count = reader.u16()?;
    for _ in 0..count {
        reader.u16()?;
        let len = reader.u32()? as usize;
        reader.skip(len)?;
    }
    Ok(())
}

fn parse_code_attribute(body: &[u8]) -> Result<Vec<Instruction>, ClassFileError> {
    let mut r = ByteReader::new(body);
    let _max_stack = r.u16()?;
    let _max_locals = r.u16()?;
    let code_len = r.u32()? as usize;
    let code = r.bytes(code_len)?;
    code::decode(code)
}

pub fn parse_class(bytes: &[u8]) -> Result<ClassUnit, ClassFileError> {
    let mut r = ByteReader::new(bytes);
    let magic = r.u32()?;
    if magic != MAGIC {
        return Err(ClassFileError::BadMagic(magic));
    }
    let minor_version = r.u16()?;
    let major_version = r.u16()?;
    if !(MIN_MAJOR_VERSION..=MAX_MAJOR_VERSION).contains(&major_version) {
        return Err(ClassFileError::UnsupportedVersion {
            major: major_version,
            minor: minor_version,
        });
    }
    let constant_pool = ConstantPool::parse(&mut r)?;
    let access_flags = r.u16()?;
    let this_class = constant_pool.class_name(r.u16()?)?.to_owned();
    let super_index = r.u16()?;
    let super_class = if super_index == 0 {
        None
    } else {
        Some(constant_pool.class_name(super_index)?.to_owned())
    };
    let interface_count = r.u16()?;
    let mut interfaces = Vec::with_capacity(interface_count as usize);
    for _ in 0..interface_count {
        interfaces.push(constant_pool.class_name(r.u16()?)?.to_owned());
    }

    let field_count = r.u16()? as usize;
    for _ in 0..field_count {
        r.skip(6)?;
        skip_attributes(&mut r)?;
    }

    let method_count = r.u16()?;
    let mut methods = Vec::with_capacity(method_count as usize);
    for _ in 0..method_count {
        let access = r.u16()?;
        let name = constant_pool.utf8(r.u16()?)?.to_owned();
        let descriptor = constant_pool.utf8(r.u16()?)?.to_owned();
        let mut code = None;
        for _ in 0..r.u16()? {
            let attr_name = constant_pool.utf8(r.u16()?)?;
            let len = r.u32()? as usize;
            let body = r.bytes(len)?;
            if attr_name == "Code" {
                code = Some(parse_code_attribute(body)?);
            }
        }
        methods.push(MethodUnit {
            access_flags: access,
            name,
            descriptor,
            code,
        });
    }
    // Class attributes are not needed; a truncated tail is still reported.
    skip_attributes(&mut r)?;

    Ok(ClassUnit {
        minor_version,
        major_version,
        access_flags,
        this_class,
        super_class,
        interfaces,
        field_count,
        methods,
        constant_pool,
    })
}
