//! Bytecode instruction decoding.
//!
//! Only the operands the call-graph extractor needs are kept (constant pool
//! indices); everything else is skipped by length.

use super::ClassFileError;

pub mod opcode {
    pub const LDC: u8 = 0x12;
    pub const LDC_W: u8 = 0x13;
    pub const LDC2_W: u8 = 0x14;
    pub const TABLESWITCH: u8 = 0xaa;
    pub const LOOKUPSWITCH: u8 = 0xab;
    pub const GETSTATIC: u8 = 0xb2;
    pub const PUTSTATIC: u8 = 0xb3;
    pub const GETFIELD: u8 = 0xb4;
    pub const PUTFIELD: u8 = 0xb5;
    pub const INVOKEVIRTUAL: u8 = 0xb6;
    pub const INVOKESPECIAL: u8 = 0xb7;
    pub const INVOKESTATIC: u8 = 0xb8;
    pub const INVOKEINTERFACE: u8 = 0xb9;
    pub const INVOKEDYNAMIC: u8 = 0xba;
    pub const NEW: u8 = 0xbb;
    pub const ANEWARRAY: u8 = 0xbd;
    pub const CHECKCAST: u8 = 0xc0;
    pub const INSTANCEOF: u8 = 0xc1;
    pub const WIDE: u8 = 0xc4;
    pub const MULTIANEWARRAY: u8 = 0xc5;
    pub const IINC: u8 = 0x84;

    /// The four invoke instructions whose target is a declared method.
    pub fn is_call_site(op: u8) -> bool {
        matches!(
            op,
            INVOKEVIRTUAL | INVOKESPECIAL | INVOKESTATIC | INVOKEINTERFACE
        )
    }

    pub fn is_field_access(op: u8) -> bool {
        matches!(op, GETSTATIC | PUTSTATIC | GETFIELD | PUTFIELD)
    }

    pub fn is_type_use(op: u8) -> bool {
        matches!(
            op,
            NEW | ANEWARRAY | CHECKCAST | INSTANCEOF | MULTIANEWARRAY
        )
    }
}

/// One decoded instruction. `cp_index` is set for instructions that carry a
/// constant pool operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instruction {
    pub offset: u32,
    pub opcode: u8,
    pub cp_index: Option<u16>,
}

/// Fixed instruction length including the opcode byte; `None` for the
/// variable-length switches and `wide`, `Some(0)` for undefined opcodes.
fn fixed_length(op: u8) -> Option<usize> {
    Some(match op {
        0x00..=0x0f => 1,
        0x10 => 2,
        0x11 => 3,
        0x12 => 2,
        0x13 | 0x14 => 3,
        0x15..=0x19 => 2,
        0x1a..=0x35 => 1,
        0x36..=0x3a => 2,
        0x3b..=0x83 => 1,
        0x84 => 3,
        0x85..=0x98 => 1,
        0x99..=0xa8 => 3,
        0xa9 => 2,
        0xaa | 0xab | 0xc4 => return None,
        0xac..=0xb1 => 1,
        0xb2..=0xb8 => 3,
        0xb9 | 0xba => 5,
        0xbb => 3,
        0xbc => 2,
        0xbd => 3,
        0xbe | 0xbf => 1,
        0xc0 | 0xc1 => 3,
        0xc2 | 0xc3 => 1,
        0xc5 => 4,
        0xc6 | 0xc7 => 3,
        0xc8 | 0xc9 => 5,
        0xca | 0xfe | 0xff => 1,
        _ => 0,
    })
}

fn be_u32(code: &[u8], at: usize) -> Option<u32> {
    code.get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
}

pub fn decode(code: &[u8]) -> Result<Vec<Instruction>, ClassFileError> {
    let mut out = Vec::new();
    let mut pc = 0usize;
    let bad = |offset: usize, reason: &str| ClassFileError::MalformedCode {
        offset: offset as u32,
        reason: reason.to_owned(),
    };
    while pc < code.len() {
        let op = code[pc];
        let len = match fixed_length(op) {
            Some(0) => return Err(bad(pc, &format!("undefined opcode 0x{op:02x}"))),
            Some(n) => n,
            None => match op {
                opcode::TABLESWITCH => {
                    let base = pc + 1 + (3 - pc % 4);
                    let low = be_u32(code, base + 4).ok_or_else(|| bad(pc, "truncated"))? as i32;
                    let high = be_u32(code, base + 8).ok_or_else(|| bad(pc, "truncated"))? as i32;
                    if high < low {
                        return Err(bad(pc, "tableswitch high < low"));
                    }
                    let entries = (high as i64 - low as i64 + 1) as usize;
                    base + 12 + entries * 4 - pc
                }
                opcode::LOOKUPSWITCH => {
                    let base = pc + 1 + (3 - pc % 4);
                    let npairs = be_u32(code, base + 4).ok_or_else(|| bad(pc, "truncated"))? as i32;
                    if npairs < 0 {
                        return Err(bad(pc, "negative lookupswitch npairs"));
                    }
                    base + 8 + npairs as usize * 8 - pc
                }
                _ => match code.get(pc + 1) {
                    Some(&opcode::IINC) => 6,
                    Some(_) => 4,
                    None => return Err(bad(pc, "truncated wide")),
                },
            },
        };
        if pc + len > code.len() {
            return Err(bad(pc, "instruction runs past end of code"));
        }
        let cp_index = match op {
            opcode::LDC => Some(code[pc + 1] as u16),
            opcode::LDC_W
            | opcode::LDC2_W
            | opcode::GETSTATIC..=opcode::INVOKEDYNAMIC
            | opcode::NEW
            | opcode::ANEWARRAY
            | opcode::CHECKCAST
            | opcode::INSTANCEOF
            | opcode::MULTIANEWARRAY => Some(u16::from_be_bytes([code[pc + 1], code[pc + 2]])),
            _ => None,
        };
        out.push(Instruction {
            offset: pc as u32,
            opcode: op,
            cp_index,
        });
        pc += len;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_invoke_and_return() {
        // aload_0; invokevirtual #7; return
        let code = [0x2a, 0xb6, 0x00, 0x07, 0xb1];
        let ins = decode(&code).unwrap();
        assert_eq!(ins.len(), 3);
        assert_eq!(
            ins[1],
            Instruction {
                offset: 1,
                opcode: 0xb6,
                cp_index: Some(7)
            }
        );
        assert_eq!(ins[2].offset, 4);
    }

    #[test]
    fn tableswitch_padding() {
        // iconst_0 at 0, tableswitch at 1 -> pad to 4, default, low=0, high=1, 2 offsets, return
        let mut code = vec![0x03, 0xaa, 0, 0];
        code.extend_from_slice(&[0, 0, 0, 20]);
        code.extend_from_slice(&[0, 0, 0, 0]);
        code.extend_from_slice(&[0, 0, 0, 1]);
        code.extend_from_slice(&[0, 0, 0, 20, 0, 0, 0, 20]);
        code.push(0xb1);
        let ins = decode(&code).unwrap();
        assert_eq!(
            ins.iter().map(|i| i.opcode).collect::<Vec<_>>(),
            vec![0x03, 0xaa, 0xb1]
        );
        assert_eq!(ins[2].offset, 24);
    }

    #[test]
    fn lookupswitch_and_wide() {
        // lookupswitch at 0 -> pad 3, default, npairs=1, one pair; wide iinc; wide iload
        let mut code = vec![0xab, 0, 0, 0];
        code.extend_from_slice(&[0, 0, 0, 9, 0, 0, 0, 1, 0, 0, 0, 5, 0, 0, 0, 9]);
        code.extend_from_slice(&[0xc4, 0x84, 0, 1, 0, 1]);
        code.extend_from_slice(&[0xc4, 0x15, 0, 1]);
        code.push(0xb1);
        let ins = decode(&code).unwrap();
        assert_eq!(
            ins.iter().map(|i| i.offset).collect::<Vec<_>>(),
            vec![0, 20, 26, 30]
        );
    }

    #[test]
    fn rejects_truncated_and_undefined() {
        assert!(decode(&[0xb6, 0x00]).is_err());
        assert!(decode(&[0xcb]).is_err());
        assert!(decode(&[0xaa]).is_err());
    }
}
