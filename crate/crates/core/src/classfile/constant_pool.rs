//! Constant pool decoding and resolution.

use super::reader::ByteReader;
use super::ClassFileError;

mod tag {
    pub const UTF8: u8 = 1;
    pub const INTEGER: u8 = 3;
    pub const FLOAT: u8 = 4;
    pub const LONG: u8 = 5;
    pub const DOUBLE: u8 = 6;
    pub const CLASS: u8 = 7;
    pub const STRING: u8 = 8;
    pub const FIELD_REF: u8 = 9;
    pub const METHOD_REF: u8 = 10;
    pub const INTERFACE_METHOD_REF: u8 = 11;
    pub const NAME_AND_TYPE: u8 = 12;
    pub const METHOD_HANDLE: u8 = 15;
    pub const METHOD_TYPE: u8 = 16;
    pub const DYNAMIC: u8 = 17;
    pub const INVOKE_DYNAMIC: u8 = 18;
    pub const MODULE: u8 = 19;
    pub const PACKAGE: u8 = 20;
}

/// Raw constant pool entry, indices not yet followed.
#[derive(Debug, Clone, PartialEq)]
pub enum Constant {
    /// Slot 0 and the second slot of long/double entries.
    Unusable,
    Utf8(String),
    Integer(i32),
    Float(f32),
    Long(i64),
    Double(f64),
    Class {
        name_index: u16,
    },
    String {
        string_index: u16,
    },
    FieldRef {
        class_index: u16,
        name_and_type_index: u16,
    },
    MethodRef {
        class_index: u16,
        name_and_type_index: u16,
    },
    InterfaceMethodRef {
        class_index: u16,
        name_and_type_index: u16,
    },
    NameAndType {
        name_index: u16,
        descriptor_index: u16,
    },
    MethodHandle {
        kind: u8,
        reference_index: u16,
    },
    MethodType {
        descriptor_index: u16,
    },
    Dynamic {
        bootstrap_index: u16,
        name_and_type_index: u16,
    },
    InvokeDynamic {
        bootstrap_index: u16,
        name_and_type_index: u16,
    },
    Module {
        name_index: u16,
    },
    Package {
        name_index: u16,
    },
}

/// A resolved member reference (`Fieldref`, `Methodref`, `InterfaceMethodref`).
///
/// `owner` is the internal (slash-separated) binary name; it may be an array
/// descriptor such as `[Ljava/lang/Object;` for calls like `clone` on arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberRef {
    pub owner: String,
    pub name: String,
    pub descriptor: String,
    pub is_interface: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ConstantPool {
    entries: Vec<Constant>,
}

impl ConstantPool {
    pub(crate) fn parse(reader: &mut ByteReader<'_>) -> Result<Self, ClassFileError> {
        let count = reader.u16()? as usize;
        if count == 0 {
            return Err(ClassFileError::MalformedConstantPool(
                "constant_pool_count is zero".into(),
            ));
        }
        let mut entries = Vec::with_capacity(count);
        entries.push(Constant::Unusable);
        while entries.len() < count {
            let index = entries.len();
            let t = reader.u8()?;
            let entry = match t {
                tag::UTF8 => {
                    let len = reader.u16()? as usize;
                    let bytes = reader.bytes(len)?;
                    Constant::Utf8(decode_modified_utf8(bytes).ok_or_else(|| {
                        ClassFileError::MalformedConstantPool(format!(
                            "entry #{index}: invalid modified UTF-8"
                        ))
                    })?)
                }
                tag::INTEGER => Constant::Integer(reader.u32()? as i32),
                tag::FLOAT => Constant::Float(f32::from_bits(reader.u32()?)),
                tag::LONG | tag::DOUBLE => {
                    let hi = reader.u32()? as u64;
                    let lo = reader.u32()? as u64;
                    let bits = (hi << 32) | lo;
                    let c = if t == tag::LONG {
                        Constant::Long(bits as i64)
                    } else {
                        Constant::Double(f64::from_bits(bits))
                    };
                    entries.push(c);
                    // 8-byte constants occupy two slots
                    Constant::Unusable
                }
                tag::CLASS => Constant::Class {
                    name_index: reader.u16()?,
                },
                tag::STRING => Constant::String {
                    string_index: reader.u16()?,
                },
                tag::FIELD_REF => Constant::FieldRef {
                    class_index: reader.u16()?,
                    name_and_type_index: reader.u16()?,
                },
                tag::METHOD_REF => Constant::MethodRef {
                    class_index: reader.u16()?,
                    name_and_type_index: reader.u16()?,
                },
                tag::INTERFACE_METHOD_REF => Constant::InterfaceMethodRef {
                    class_index: reader.u16()?,
                    name_and_type_index: reader.u16()?,
                },
                tag::NAME_AND_TYPE => Constant::NameAndType {
                    name_index: reader.u16()?,
                    descriptor_index: reader.u16()?,
                },
                tag::METHOD_HANDLE => Constant::MethodHandle {
                    kind: reader.u8()?,
                    reference_index: reader.u16()?,
                },
                tag::METHOD_TYPE => Constant::MethodType {
                    descriptor_index: reader.u16()?,
                },
                tag::DYNAMIC => Constant::Dynamic {
                    bootstrap_index: reader.u16()?,
                    name_and_type_index: reader.u16()?,
                },
                tag::INVOKE_DYNAMIC => Constant::InvokeDynamic {
                    bootstrap_index: reader.u16()?,
                    name_and_type_index: reader.u16()?,
                },
                tag::MODULE => Constant::Module {
                    name_index: reader.u16()?,
                },
                tag::PACKAGE => Constant::Package {
                    name_index: reader.u16()?,
                },
                other => {
                    return Err(ClassFileError::MalformedConstantPool(format!(
                        "entry #{index}: unknown tag {other}"
                    )))
                }
            };
            entries.push(entry);
        }
        // A trailing long/double may have pushed one slot past the count.
        if entries.len() > count {
            return Err(ClassFileError::MalformedConstantPool(
                "8-byte constant overruns constant_pool_count".into(),
            ));
        }
        let pool = ConstantPool { entries };
        pool.validate()?;
        Ok(pool)
    }

    /// Checks that every cross-reference points at an entry of the right kind.
    fn validate(&self) -> Result<(), ClassFileError> {
        for (i, entry) in self.entries.iter().enumerate() {
            let ok = match *entry {
                Constant::Class { name_index }
                | Constant::Module { name_index }
                | Constant::Package { name_index } => self.utf8(name_index).is_ok(),
                Constant::String { string_index } => self.utf8(string_index).is_ok(),
                Constant::MethodType { descriptor_index } => self.utf8(descriptor_index).is_ok(),
                Constant::NameAndType {
                    name_index,
                    descriptor_index,
                } => self.utf8(name_index).is_ok() && self.utf8(descriptor_index).is_ok(),
                Constant::FieldRef {
                    class_index,
                    name_and_type_index,
                }
                | Constant::MethodRef {
                    class_index,
                    name_and_type_index,
                }
                | Constant::InterfaceMethodRef {
                    class_index,
                    name_and_type_index,
                } => {
                    self.class_name(class_index).is_ok()
                        && self.name_and_type(name_and_type_index).is_ok()
                }
                Constant::Dynamic {
                    name_and_type_index,
                    ..
                }
                | Constant::InvokeDynamic {
                    name_and_type_index,
                    ..
                } => self.name_and_type(name_and_type_index).is_ok(),
                Constant::MethodHandle {
                    reference_index, ..
                } => matches!(
                    self.get(reference_index),
                    Ok(Constant::FieldRef { .. }
                        | Constant::MethodRef { .. }
                        | Constant::InterfaceMethodRef { .. })
                ),
                _ => true,
            };
            if !ok {
                return Err(ClassFileError::MalformedConstantPool(format!(
                    "entry #{i}: dangling or mistyped reference"
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.len() <= 1
    }

    pub fn get(&self, index: u16) -> Result<&Constant, ClassFileError> {
        match self.entries.get(index as usize) {
            None | Some(Constant::Unusable) => Err(ClassFileError::MalformedConstantPool(format!(
                "index #{index} out of range or unusable"
            ))),
            Some(c) => Ok(c),
        }
    }

    pub fn utf8(&self, index: u16) -> Result<&str, ClassFileError> {
        match self.get(index)? {
            Constant::Utf8(s) => Ok(s),
            other => Err(mismatch(index, "Utf8", other)),
        }
    }

    /// Internal binary name of a `CONSTANT_Class` entry.
    pub fn class_name(&self, index: u16) -> Result<&str, ClassFileError> {
        match self.get(index)? {
            Constant::Class { name_index } => self.utf8(*name_index),
            other => Err(mismatch(index, "Class", other)),
        }
    }

    pub fn name_and_type(&self, index: u16) -> Result<(&str, &str), ClassFileError> {
        match self.get(index)? {
            Constant::NameAndType {
                name_index,
                descriptor_index,
            } => Ok((self.utf8(*name_index)?, self.utf8(*descriptor_index)?)),
            other => Err(mismatch(index, "NameAndType", other)),
        }
    }

    /// Resolves a field, method or interface-method reference.
    pub fn member_ref(&self, index: u16) -> Result<MemberRef, ClassFileError> {
        let (class_index, nat, is_interface) = match self.get(index)? {
            Constant::FieldRef {
                class_index,
                name_and_type_index,
            }
            | Constant::MethodRef {
                class_index,
                name_and_type_index,
            } => (*class_index, *name_and_type_index, false),
            Constant::InterfaceMethodRef {
                class_index,
                name_and_type_index,
            } => (*class_index, *name_and_type_index, true),
            other => return Err(mismatch(index, "member reference", other)),
        };
        let (name, descriptor) = self.name_and_type(nat)?;
        Ok(MemberRef {
            owner: self.class_name(class_index)?.to_owned(),
            name: name.to_owned(),
            descriptor: descriptor.to_owned(),
            is_interface,
        })
    }
}

fn mismatch(index: u16, expected: &str, found: &Constant) -> ClassFileError {
    ClassFileError::MalformedConstantPool(format!(
        "index #{index}: expected {expected}, found {found:?}"
    ))
}

/// Decodes the JVM's modified UTF-8 (two-byte NUL, surrogate pairs encoded
/// as two three-byte sequences). Unpaired surrogates become U+FFFD.
pub(crate) fn decode_modified_utf8(bytes: &[u8]) -> Option<String> {
    if let Ok(s) = std::str::from_utf8(bytes) {
        if !bytes.contains(&0) {
            return Some(s.to_owned());
        }
    }
    let mut units: Vec<u16> = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b == 0 || b >= 0xF0 {
            return None;
        }
        if b < 0x80 {
            units.push(b as u16);
            i += 1;
        } else if b & 0xE0 == 0xC0 {
            let b2 = *bytes.get(i + 1)?;
            if b2 & 0xC0 != 0x80 {
                return None;
            }
            units.push((((b & 0x1F) as u16) << 6) | (b2 & 0x3F) as u16);
            i += 2;
        } else if b & 0xF0 == 0xE0 {
            let b2 = *bytes.get(i + 1)?;
            let b3 = *bytes.get(i + 2)?;
            if b2 & 0xC0 != 0x80 || b3 & 0xC0 != 0x80 {
                return None;
            }
            units.push(
                (((b & 0x0F) as u16) << 12) | (((b2 & 0x3F) as u16) << 6) | (b3 & 0x3F) as u16,
            );
            i += 3;
        } else {
            return None;
        }
    }
    Some(String::from_utf16_lossy(&units))
}
